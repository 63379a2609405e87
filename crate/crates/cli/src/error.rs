use lqg_infodesign_core::CoreError;

/// CLI failure classes with their stable exit codes:
/// 2 config error, 3 numerical error, 4 solver non-convergence.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    NonConvergence(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::NonConvergence(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::NonConvergence(m) | CliError::Io(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Config(_) | CoreError::InvalidSpec(_) | CoreError::NonCommonPrior => {
                CliError::Config(msg)
            }
            CoreError::NearSingular { .. }
            | CoreError::SingularStarDenominator { .. }
            | CoreError::DegeneratePosterior
            | CoreError::AgentIndexOutOfRange { .. }
            | CoreError::BadConstraintIndex { .. } => CliError::Numerical(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
