mod commands;
mod config;

use clap::{Parser, Subcommand};

/// Exit codes: 0 ok, 2 configuration error, 3 runtime error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Parser)]
#[command(
    name = "helix",
    version,
    about = "Wake-mixing wind farm control simulator",
    long_about = "Simulates a one- or two-turbine wind farm under baseline, static induction, \
dynamic induction and helix (dynamic individual pitch) control over a Lagrangian wake surrogate. \
Outputs are deterministic for a fixed seed.",
    after_long_help = config::CONFIG_KEY_REFERENCE
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single case from a config file.
    Run {
        /// Path to a sectioned key=value config file.
        config: std::path::PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: config [sim] out_dir, else ./out).
        #[arg(long)]
        out_dir: Option<std::path::PathBuf>,
    },
    /// Run the nine-case study protocol and emit baseline-relative tables.
    Suite {
        /// Override the default seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default ./out).
        #[arg(long)]
        out_dir: Option<std::path::PathBuf>,
        /// Only run the single-turbine protocol (skip the two-turbine farm).
        #[arg(long)]
        single_turbine: bool,
    },
    /// Sweep the excitation Strouhal number and report normalized wake
    /// velocities at 3D, 5D and 7D.
    Sweep {
        #[arg(long, default_value_t = 0.1)]
        st_min: f64,
        #[arg(long, default_value_t = 0.6)]
        st_max: f64,
        #[arg(long, default_value_t = 11)]
        st_steps: usize,
        /// Excitation amplitude in degrees.
        #[arg(long, default_value_t = 4.0)]
        amplitude: f64,
        /// Dynamic strategy kind: DynamicInduction, HelixCCW or HelixCW.
        #[arg(long, default_value = "DynamicInduction")]
        kind: String,
        /// Override the turbulence seed (sweep default runs laminar).
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default ./out).
        #[arg(long)]
        out_dir: Option<std::path::PathBuf>,
    },
    /// Compare aggregate key=value records against a baseline record.
    Compare {
        /// Baseline aggregates file.
        baseline: std::path::PathBuf,
        /// Aggregates files to compare against the baseline.
        cases: Vec<std::path::PathBuf>,
    },
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("HELIX_SIM_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn main() {
    configure_threads();
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Run {
            config,
            seed,
            out_dir,
        } => commands::cmd_run(&config, seed, out_dir.as_deref()),
        Command::Suite {
            seed,
            out_dir,
            single_turbine,
        } => commands::cmd_suite(seed, out_dir.as_deref(), single_turbine),
        Command::Sweep {
            st_min,
            st_max,
            st_steps,
            amplitude,
            kind,
            seed,
            out_dir,
        } => commands::cmd_sweep(
            st_min,
            st_max,
            st_steps,
            amplitude,
            &kind,
            seed,
            out_dir.as_deref(),
        ),
        Command::Compare { baseline, cases } => commands::cmd_compare(&baseline, &cases),
    };
    match status {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
