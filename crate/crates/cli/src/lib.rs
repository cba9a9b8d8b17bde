//! Verification suites for `chaoskit`: configuration, checks and report emission.

pub mod checks;
pub mod config;
pub mod error;
pub mod record;
pub mod report;

pub use config::{RunConfig, Suite};
pub use error::{CliError, Result};
pub use record::{CheckRecord, Scalar, Status};
pub use report::{emit_report, Format, RunArtifacts, Summary};

/// Runs `suite` (every member suite for `all`) and returns one record per check.
pub fn run_suite(config: &RunConfig, suite: Suite) -> Result<Vec<CheckRecord>> {
    config.validate()?;
    let mut out = Vec::new();
    for s in suite.members() {
        log::info!("running suite {}", s.name());
        out.extend(match s {
            Suite::Fock => checks::fock::run(config),
            Suite::Sim => checks::sim::run(config),
            Suite::Chaos => checks::chaos::run(config),
            Suite::Malliavin => checks::malliavin::run(config),
            Suite::All => unreachable!("expanded by members"),
        });
    }
    Ok(out)
}
