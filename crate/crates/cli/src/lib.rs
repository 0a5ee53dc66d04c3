//! Command-line front end for `lattice-cft-core`: JSON formats, deterministic
//! reports, independent oracles and the acceptance suite.

pub mod accept;
pub mod commands;
pub mod error;
pub mod formats;
pub mod oracles;
pub mod report;

use std::panic::{self, AssertUnwindSafe};

pub use commands::RunConfig;
use error::{CliError, ErrorKind};
use report::{EXIT_INPUT_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED};

/// Runs one command; returns the exit code and the rendered JSON report.
pub fn run(config: &RunConfig) -> (i32, String) {
    let name = config.command.name();
    let result = panic::catch_unwind(AssertUnwindSafe(|| commands::execute(config)));
    match result {
        Ok(Ok((inputs, outcome))) => {
            let code = if outcome.verified { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
            (code, report::render(name, &inputs, config.seed, &outcome))
        }
        Ok(Err(e)) => (EXIT_INPUT_ERROR, report::render_error(name, &e)),
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            (EXIT_INPUT_ERROR, report::render_error(name, &CliError::new(ErrorKind::Internal, detail)))
        }
    }
}
