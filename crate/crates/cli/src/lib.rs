//! File formats, group loading, verification batteries and the command line
//! for `freelat-core`.

pub mod app;
pub mod catalog;
pub mod formats;
pub mod verify;

pub use app::run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] freelat_core::Error),
}
