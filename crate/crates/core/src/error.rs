use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("radius {requested} exceeds the safety cap {cap}")]
    RadiusCap { requested: u32, cap: u32 },

    #[error("vertex budget exceeded: construction needs {needed} vertices, cap is {cap}")]
    VertexBudget { needed: usize, cap: usize },

    #[error("exact mode refused for {vertices} vertices (cutoff {cutoff}); use sampled mode")]
    ExactModeRefused { vertices: usize, cutoff: usize },

    #[error("insufficient depth: threshold not reached within max_depth {max_depth}; estimated required depth {required}")]
    InsufficientDepth { max_depth: u32, required: u32 },

    #[error("insufficient target truncation: need width radius >= {width}, depth >= {depth}")]
    InsufficientTarget { width: u32, depth: u32 },

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("dependency error: {0}")]
    Dependency(String),

    #[error("internal invariant violation: {0}")]
    Invariant(String),

    #[error("spec validation failed:\n{}", .0.join("\n"))]
    SpecValidation(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Exit-code class used by the CLI: 1 = spec, 2 = analysis, 3 = i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::UnknownGenerator(_)
            | Error::SpecValidation(_)
            | Error::Input(_) => 1,
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}
