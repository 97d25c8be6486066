use nondistill::certifier::{CertifyError, VerifyError};

pub const INVALID: u8 = 1;
pub const INPUT: u8 = 2;
pub const GUARD: u8 = 3;
pub const INTERNAL: u8 = 4;

/// An error message paired with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: INPUT, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { code: INTERNAL, message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { code: INVALID, message: message.into() }
    }

    /// Exit code only; the details were already printed.
    pub fn silent(code: u8) -> Self {
        CliError { code, message: String::new() }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        let code = match e {
            CertifyError::SizeGuard { .. } => GUARD,
            CertifyError::Solver(_) => INTERNAL,
            _ => INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Problem(inner) => inner.into(),
            other => CliError::invalid(format!("INVALID: {other}")),
        }
    }
}
