use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use souriau_cli::{export_trajectory, flow_trajectory, run, CliError, Options, Suite};
use souriau_core::fisher::ReferenceTable;
use souriau_core::{EtaConvention, PairingConvention};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Thermo,
    Metric,
    Flow,
    Lax,
    Orbit,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairingArg {
    Half,
    One,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EtaArg {
    Grad,
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Sl2,
    #[value(name = "sl2-normalized")]
    Sl2Normalized,
    So3,
}

/// Run a verification suite and print a summary.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    suite: SuiteArg,
    /// Cone parameters, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 5.0])]
    a: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    pairing: Option<PairingArg>,
    #[arg(long)]
    eta: Option<EtaArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Metric reference table(s); default is all three.
    #[arg(long)]
    target: Option<TargetArg>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Hamiltonian trajectory as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Record wall time in the report (otherwise 0, keeping output reproducible).
    #[arg(long)]
    timing: bool,
}

impl Args {
    fn suite(&self) -> Suite {
        match self.suite {
            SuiteArg::Thermo => Suite::Thermo,
            SuiteArg::Metric => Suite::Metric,
            SuiteArg::Flow => Suite::Flow,
            SuiteArg::Lax => Suite::Lax,
            SuiteArg::Orbit => Suite::Orbit,
            SuiteArg::All => Suite::All,
        }
    }

    fn options(&self) -> Options {
        Options {
            a: self.a.clone(),
            a0: self.a0,
            dt: self.dt,
            t_end: self.t_end,
            pairing: self.pairing.map(|p| match p {
                PairingArg::Half => PairingConvention::Half,
                PairingArg::One => PairingConvention::One,
            }),
            eta: self.eta.map(|e| match e {
                EtaArg::Grad => EtaConvention::GradPhi,
                EtaArg::Minus => EtaConvention::MinusBeta,
                EtaArg::Plus => EtaConvention::PlusBeta,
            }),
            seed: self.seed,
            targets: match self.target {
                None => ReferenceTable::ALL.to_vec(),
                Some(TargetArg::Sl2) => vec![ReferenceTable::Sl2],
                Some(TargetArg::Sl2Normalized) => vec![ReferenceTable::Sl2Normalized],
                Some(TargetArg::So3) => vec![ReferenceTable::So3],
            },
        }
    }
}

fn execute(args: &Args) -> Result<bool, CliError> {
    let opts = args.options();
    let start = Instant::now();
    let mut report = run(args.suite(), &opts)?;
    if args.timing {
        report.wall_time_ms = start.elapsed().as_millis() as u64;
    }
    if let Some(path) = &args.csv {
        export_trajectory(&flow_trajectory(&opts)?, path)?;
    }
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json()? + "\n")?;
    }
    for c in report.failures() {
        println!(
            "FAIL {}: measured {:e}, expected {:?} ± {:e}",
            c.name, c.measured, c.expected, c.tolerance
        );
    }
    let fails = report.failures().count();
    let findings = report.findings().count();
    println!(
        "{}: {} cases, {} passed, {} failed, {} findings",
        report.suite,
        report.cases.len(),
        report.cases.len() - fails - findings,
        fails,
        findings
    );
    if let Some(c) = report.convention_used {
        println!("convention: {c}");
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("verify: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
