use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values or grids.
    #[error("{0}")]
    Usage(eee_core::Error),

    #[error("{0}")]
    UsageMsg(String),

    #[error("{path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    /// A model, tuner or simulator call rejected the point.
    #[error("{0}")]
    Domain(eee_core::Error),

    #[error("{0}")]
    Io(eee_core::Error),

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),

    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::UsageMsg(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::UsageMsg(_) | CliError::Config { .. } => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) | CliError::Output(_) | CliError::Csv(_) => 1,
        }
    }
}

/// Routes a core error raised while computing: file problems are I/O, the rest are domain errors.
pub fn domain(e: eee_core::Error) -> CliError {
    match e {
        eee_core::Error::Io { .. } | eee_core::Error::TraceParse { .. } => CliError::Io(e),
        e => CliError::Domain(e),
    }
}

/// Same routing for errors raised while reading the inputs.
pub fn input(e: eee_core::Error) -> CliError {
    match e {
        eee_core::Error::Io { .. } | eee_core::Error::TraceParse { .. } => CliError::Io(e),
        e => CliError::Usage(e),
    }
}
