use alloc::string::String;

/// Failure classes shared by every operation of the crate.
///
/// The variants mirror the exit-code taxonomy of the command-line tool:
/// bad input, a violated internal invariant (a bug, or an input that is not
/// almost canonical), and results that cannot be trusted or are not
/// supported at the requested size.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("reliability error: {0}")]
    Reliability(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::Error::Input(alloc::format!($($arg)*)) };
}
macro_rules! invariant_err {
    ($($arg:tt)*) => { $crate::Error::Invariant(alloc::format!($($arg)*)) };
}
macro_rules! reliability_err {
    ($($arg:tt)*) => { $crate::Error::Reliability(alloc::format!($($arg)*)) };
}
macro_rules! unsupported_err {
    ($($arg:tt)*) => { $crate::Error::Unsupported(alloc::format!($($arg)*)) };
}
pub(crate) use {input_err, invariant_err, reliability_err, unsupported_err};
