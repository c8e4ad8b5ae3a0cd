//! Batch verification driver: runs named suites against `souriau-core` and
//! reports each case as pass, fail, or finding.

use std::io::Write;
use std::path::Path;

use souriau_core::dynamics::Trajectory;
use thiserror::Error;

pub mod report;
pub mod suites;

pub use report::{Case, RunReport, Status};
pub use suites::{flow_trajectory, run, Options, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] souriau_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(souriau_core::Error::Domain(_)) => 2,
            _ => 1,
        }
    }
}

pub const CSV_HEADER: &str = "t,a,beta_12,eta_12,H";

/// Writes one row per sample. `beta_12` and `eta_12` are entry (0, 1).
pub fn write_trajectory_csv(traj: &Trajectory, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in &traj.samples {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.t,
            s.a,
            s.p.get(0, 1),
            s.q.get(0, 1),
            s.hamiltonian()
        )?;
    }
    Ok(())
}

pub fn export_trajectory(traj: &Trajectory, path: &Path) -> Result<(), CliError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_trajectory_csv(traj, &mut f)?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows() {
        let opts = Options {
            t_end: Some(0.01),
            ..Options::default()
        };
        let traj = flow_trajectory(&opts).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 12);
        assert!(lines[1].ends_with("-1.0000000000000000e0"));
    }
}
