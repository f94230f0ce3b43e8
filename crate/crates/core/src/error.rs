use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value outside the domain of an operation. `field` names the input.
    #[error("{field}: {message}")]
    Domain { field: String, message: String },

    /// The streamline equation hit an intensity node.
    #[error("field intensity below floor at x = {x:e} m, z = {z:e} m")]
    Singularity { x: f64, z: f64 },

    #[error("photon {index}: {source}")]
    Photon {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    /// All invariant violations found while validating a configuration.
    #[error("{}", .0.join("; "))]
    Config(Vec<String>),

    #[error("config syntax: {0}")]
    Syntax(String),

    #[error("unknown sweep parameter `{0}` (expected one of R, L, g, T, model)")]
    UnknownParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Domain {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Stable machine-readable code, printed by the CLI in front of the message.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "E_DOMAIN",
            Error::Singularity { .. } => "E_SINGULARITY",
            Error::Photon { source, .. } => source.code(),
            Error::Config(_) => "E_CONFIG",
            Error::Syntax(_) => "E_SYNTAX",
            Error::UnknownParameter(_) => "E_PARAM",
            Error::Io { .. } => "E_IO",
        }
    }
}
