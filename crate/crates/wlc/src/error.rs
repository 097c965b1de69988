use std::path::PathBuf;

/// Failure classes and their exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("unstable system: {0}")]
    Unstable(String),
    #[error(transparent)]
    Core(#[from] wlc_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn from_json(e: serde_json::Error) -> Self {
        CliError::Config(format!("line {} column {}: {e}", e.line(), e.column()))
    }

    /// 1 IO, 2 invalid input, 3 instability, 4 divergent or failed numerics.
    pub fn exit_code(&self) -> u8 {
        use wlc_core::Error as E;
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Unstable(_) => 3,
            CliError::Core(e) => match e {
                E::InvalidSpec(_) | E::InvalidArgument(_) | E::MissingBath { .. } | E::NoSignal => {
                    2
                }
                E::Unstable | E::Infeasible { .. } => 3,
                E::Divergent { .. }
                | E::Quadrature { .. }
                | E::EvaluationAtPole { .. }
                | E::Singular
                | E::NoConvergence => 4,
            },
        }
    }

    /// Every diagnostic line, including each spec problem.
    pub fn report(&self) -> String {
        match self {
            CliError::Core(wlc_core::Error::InvalidSpec(diags)) => {
                let mut s = String::from("invalid network spec:");
                for d in diags {
                    s.push_str("\n  ");
                    s.push_str(&d.message());
                }
                s
            }
            other => other.to_string(),
        }
    }
}
