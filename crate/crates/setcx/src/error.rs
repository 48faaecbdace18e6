//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
///
/// The CLI maps every variant to exit code 1; usage problems (unknown flags,
/// bad subcommands) never reach this type because argument parsing rejects
/// them first with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated an operation's domain (empty set, out-of-range
    /// index, zero-length string, invalid bias, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Calibration is impossible: the observable distance range is empty
    /// because the maximum permuted distance does not exceed the minimum
    /// self-distance (e.g. a set of identical constant strings).
    #[error("calibration error: d_max ({d_max}) must exceed d_min ({d_min})")]
    Calibration { d_min: f64, d_max: f64 },

    /// An input file failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Invalid configuration: unknown key, unsupported algorithm id,
    /// inconsistent parameter combination.
    #[error("config error: {0}")]
    Config(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand for a [`Error::Domain`] with a formatted message.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Shorthand for a [`Error::Config`] with a formatted message.
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Shorthand for a [`Error::Parse`] at a 1-based line.
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
