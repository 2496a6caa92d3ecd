use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid track spec: {0}")]
    InvalidTrack(String),

    #[error("failed to read track {path}: {source}")]
    TrackIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse track {path}: {message}")]
    TrackParse { path: PathBuf, message: String },

    #[error("run log is empty")]
    EmptyLog,

    #[error("scenarios are not comparable: {0}")]
    Heterogeneous(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
