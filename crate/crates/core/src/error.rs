use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read or write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("i/o error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("label propagation needs at least one seed account")]
    EmptySeeds,

    #[error("class {class} has {members} seed accounts, fewer than the {folds} folds requested")]
    InsufficientSeeds {
        class: String,
        members: usize,
        folds: usize,
    },

    #[error("degree centrality needs at least 2 nodes, graph has {0}")]
    TooFewNodes(usize),

    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad or unreadable inputs rather than a failing computation.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Io { .. }
            | Error::Stream(_)
            | Error::Parse(_)
            | Error::Config(_)
            | Error::InfeasibleScenario(_) => true,
            Error::Stage { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
