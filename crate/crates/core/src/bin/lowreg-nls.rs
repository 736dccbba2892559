use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lowreg_nls::harness::{
    emit_outputs, format_g17, fully_failed_schemes, oracle_check, preset, preset_names,
    run_convergence_study, Scale, StudyConfig,
};
use lowreg_nls::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BLOW_UP: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "lowreg-nls", version, about = "Convergence studies for Schrödinger time integrators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the study described by a TOML config file.
    Run {
        config: PathBuf,
        /// Overrides the output directory of the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "LOWREG_NLS_WORKERS")]
        workers: Option<usize>,
    },
    /// Run one of the bundled experiments.
    Preset {
        name: String,
        #[arg(long, default_value = "desk")]
        scale: Scale,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "LOWREG_NLS_WORKERS")]
        workers: Option<usize>,
        /// Seed for presets with random initial data.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the resolved config as TOML instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Compare the steppers with brute-force Fourier sums and print the
    /// largest coefficient deviations.
    OracleCheck {
        #[arg(long = "K", default_value_t = 8)]
        k: usize,
    },
    /// List the bundled presets.
    ListPresets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            workers,
        } => match StudyConfig::from_file(&config) {
            Ok(mut c) => {
                if let Some(dir) = out {
                    c.output.dir = dir;
                }
                c.workers = workers.or(c.workers);
                run(c)
            }
            Err(e) => fail(e),
        },
        Command::Preset {
            name,
            scale,
            out,
            workers,
            seed,
            print_config,
        } => match preset(&name, scale) {
            Ok(mut c) => {
                if let Some(dir) = out {
                    c.output.dir = dir;
                }
                if let Some(s) = seed {
                    c.set_seed(s);
                }
                c.workers = workers;
                if print_config {
                    print!("{}", c.to_toml_string());
                    return ExitCode::SUCCESS;
                }
                run(c)
            }
            Err(e) => fail(e),
        },
        Command::OracleCheck { k } => match oracle_check(k) {
            Ok(report) => {
                let mut ok = true;
                for d in &report {
                    ok &= d.passed();
                    println!(
                        "{} {:<48} max deviation {:.3e} (tolerance {:.0e})",
                        if d.passed() { "PASS" } else { "FAIL" },
                        d.check,
                        d.max_deviation,
                        d.tolerance
                    );
                }
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_FAILURE)
                }
            }
            Err(e) => fail(e),
        },
        Command::ListPresets => {
            for name in preset_names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
    }
}

fn run(config: StudyConfig) -> ExitCode {
    if let Err(e) = config.validate() {
        return fail(e);
    }
    let table = match run_convergence_study(&config) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let written = match emit_outputs(&table, &config) {
        Ok(w) => w,
        Err(e) => return fail(e),
    };
    for slope in &table.fitted_slopes {
        let value = slope.slope.map_or_else(|| "n/a".to_string(), |s| format!("{s:.3}"));
        println!("{:<14} slope {value} ({} points)", slope.scheme.name(), slope.points_used);
    }
    for row in table.rows.iter().filter(|r| r.failed) {
        eprintln!(
            "failed: {} tau={}: {}",
            row.scheme,
            format_g17(row.tau),
            row.failure.as_deref().unwrap_or("unknown")
        );
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    let blown = fully_failed_schemes(&table);
    if blown.is_empty() {
        ExitCode::SUCCESS
    } else {
        let names: Vec<&str> = blown.iter().map(|k| k.name()).collect();
        eprintln!("every row failed for: {}", names.join(", "));
        ExitCode::from(EXIT_BLOW_UP)
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) | Error::UnknownPreset(_) | Error::InvalidGrid(_) => ExitCode::from(EXIT_CONFIG),
        _ => ExitCode::from(EXIT_FAILURE),
    }
}
