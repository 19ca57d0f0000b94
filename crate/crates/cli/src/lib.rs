//! Batch driver for the `chern-positivity` library: curvature files,
//! verification batteries and JSON/CSV reports.

pub mod batteries;
pub mod config;
pub mod curvature_io;
pub mod formspec;
pub mod report;
pub mod symbolic_suite;

pub use batteries::run;
pub use config::{Command, RunConfig};
pub use report::Report;

/// Default worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "CHERN_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}: {1}")]
    Io(String, String),
}

impl CliError {
    /// Process exit code: 2 for usage and input errors, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Io(..) => 3,
        }
    }
}

/// Runs `cfg` on a dedicated pool of `threads` workers (0: rayon default).
pub fn run_with_threads(cfg: &RunConfig, threads: usize) -> Result<Report, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| run(cfg))
}
