use std::path::PathBuf;

/// Failures of a command-line run, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("no file or built-in dataset named {0:?} (see `musitopo datasets`)")]
    DatasetNotFound(String),

    #[error("{0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] musitopo::Error),
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_DATA: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use musitopo::Error as E;
        match self {
            CliError::DatasetNotFound(_) | CliError::Config(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_DATA,
            CliError::Core(e) => match e {
                E::Config(_) | E::Lookup(_) => EXIT_CONFIG,
                E::Parse { .. } | E::MatrixFormat { .. } => EXIT_PARSE,
                E::Domain(_)
                | E::Dimension { .. }
                | E::Cardinality { .. }
                | E::EmptyInput(_)
                | E::Range(_)
                | E::Size { .. } => EXIT_DATA,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
