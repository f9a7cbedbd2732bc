use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use marc_relay::experiment::spec::{validate_spec, PartialSpec, SpecError};
use marc_relay::experiment::{run_experiment, RunOptions};

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

/// Best-relay selection for the two-source multiple-access relay channel:
/// Monte Carlo and analytic SER / outage sweeps written as CSV.
#[derive(Debug, Parser)]
#[command(name = "marc-relay", version)]
struct Cli {
    /// fig2 | fig3 | fig4 | fig5 | custom (long names also accepted)
    #[arg(long)]
    figure: Option<String>,
    /// Schemes, e.g. `anc,df`
    #[arg(long)]
    scheme: Option<String>,
    /// Relay counts, e.g. `1-5` or `1,2,5,10`
    #[arg(long)]
    relays: Option<String>,
    /// SNR points in dB, `start:stop:step` or a comma list
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    /// Linear total powers (N0 = 1), alternative to --snr
    #[arg(long)]
    ptotal: Option<String>,
    /// PSK orders, e.g. `2,8`
    #[arg(long = "mod")]
    mod_orders: Option<String>,
    /// Monte Carlo trials per point (upper bound when early exit is on)
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Outage threshold (linear)
    #[arg(long = "gamma-th")]
    gamma_th: Option<String>,
    /// Variance of every link gain
    #[arg(long)]
    variance: Option<String>,
    /// P_s / P_r for fixed-split sweeps
    #[arg(long)]
    kappa: Option<String>,
    /// Run exactly --trials trials per SER point
    #[arg(long)]
    no_early_exit: bool,
    /// Output CSV path; `<out>.meta` and `<out>.journal` are written next to it
    #[arg(long)]
    out: Option<String>,
    /// key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (default: all CPUs)
    #[arg(long)]
    workers: Option<usize>,
    /// Print the validated spec as key=value text and exit
    #[arg(long)]
    print_spec: bool,
    /// Report each finished cell on stderr
    #[arg(long)]
    progress: bool,
}

impl Cli {
    fn flag_spec(&self) -> Result<PartialSpec, Vec<SpecError>> {
        let mut spec = PartialSpec::default();
        let mut errors = Vec::new();
        if self.snr.is_some() && self.ptotal.is_some() {
            errors.push(SpecError {
                field: "snr",
                message: "--snr and --ptotal are mutually exclusive".into(),
            });
        }
        let pairs = [
            ("figure", &self.figure),
            ("scheme", &self.scheme),
            ("relays", &self.relays),
            ("snr", &self.snr),
            ("ptotal", &self.ptotal),
            ("mod", &self.mod_orders),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("gamma_th", &self.gamma_th),
            ("variance", &self.variance),
            ("kappa", &self.kappa),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                if let Err(e) = spec.set(key, v) {
                    errors.push(e);
                }
            }
        }
        if self.no_early_exit {
            spec.early_exit = Some(false);
        }
        if errors.is_empty() {
            Ok(spec)
        } else {
            Err(errors)
        }
    }
}

fn report(errors: &[SpecError]) -> ExitCode {
    for e in errors {
        eprintln!("error: {e}");
    }
    ExitCode::from(EXIT_VALIDATION)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.workers == Some(0) {
        return report(&[SpecError {
            field: "workers",
            message: "workers must be >= 1".into(),
        }]);
    }

    let file = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match PartialSpec::from_config_text(&text) {
                Ok(p) => p,
                Err(errs) => return report(&errs),
            },
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_VALIDATION);
            }
        },
        None => PartialSpec::default(),
    };
    let flags = match cli.flag_spec() {
        Ok(p) => p,
        Err(errs) => return report(&errs),
    };
    let validated = match validate_spec(&file.merge(flags)) {
        Ok(v) => v,
        Err(errs) => return report(&errs),
    };
    for w in &validated.warnings {
        eprintln!("warning: {w}");
    }
    if cli.print_spec {
        print!("{}", validated.spec.to_config_text());
        return ExitCode::SUCCESS;
    }

    let opts = RunOptions {
        workers: cli.workers,
        progress: cli.progress,
    };
    match run_experiment(&validated.spec, &opts) {
        Ok(summary) => {
            eprintln!(
                "wrote {} rows to {} ({} resumed); metadata in {}",
                summary.rows.len(),
                summary.csv_path.display(),
                summary.resumed,
                summary.meta_path.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
