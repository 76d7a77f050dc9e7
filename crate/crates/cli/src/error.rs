use std::fmt;

/// Process exit codes.
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_FORMAT: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;
pub const EXIT_INSUFFICIENT: u8 = 5;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(stgl::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use stgl::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Core(e) => match e {
                E::InvalidArgument(_) | E::DirectedInput | E::Io(_) => EXIT_CONFIG,
                E::InvalidGraph(_) | E::Format(_) | E::Json(_) | E::Csv(_) | E::DimensionMismatch { .. } => EXIT_FORMAT,
                E::ZeroOutDegree { .. }
                | E::DensityVanished { .. }
                | E::ZeroVariance
                | E::ConvergenceFailure { .. }
                | E::DegenerateInput(_)
                | E::StepTooLarge { .. } => EXIT_NUMERICAL,
                E::InsufficientSpatialEigenvectors { .. } => EXIT_INSUFFICIENT,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<stgl::Error> for CliError {
    fn from(e: stgl::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
