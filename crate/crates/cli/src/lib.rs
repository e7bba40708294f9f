//! Batch experiment driver: declarative JSON configs dispatched to the
//! weyl1d modules, with CSV/JSON/plot-data artifacts written atomically.

pub mod config;
pub mod output;
pub mod runner;

/// Process exit codes, documented in --help.
pub mod exit_codes {
    /// All quantitative targets met.
    pub const PASS: i32 = 0;
    /// Configuration or usage error (malformed config, unknown key,
    /// task/subcommand mismatch).
    pub const CONFIG: i32 = 1;
    /// Run completed but a quantitative target was missed.
    pub const TARGET_MISS: i32 = 2;
    /// Filesystem error while reading inputs or writing artifacts.
    pub const IO: i32 = 3;
    /// Numerical computation failed (solver, quadrature, domain errors).
    pub const COMPUTE: i32 = 4;
}

/// Error type carrying the exit code class.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit_codes::CONFIG,
            CliError::Io(_) => exit_codes::IO,
            CliError::Compute(_) => exit_codes::COMPUTE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Compute(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self {
            CliError::Config(_) => "config error",
            CliError::Io(_) => "io error",
            CliError::Compute(_) => "compute error",
        };
        write!(f, "{kind}: {}", self.message())
    }
}

impl From<weyl1d::Error> for CliError {
    fn from(e: weyl1d::Error) -> Self {
        match e {
            weyl1d::Error::Io(m) => CliError::Io(m),
            other => CliError::Compute(other.to_string()),
        }
    }
}
