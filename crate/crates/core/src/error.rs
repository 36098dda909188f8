use thiserror::Error;

/// Errors produced by the compiler library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported instruction `{name}` at line {line}")]
    Unsupported { name: String, line: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{qubits} qubits exceeds the simulation cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },

    #[error("layout has {sites} sites but the circuit needs {qubits}")]
    InsufficientSites { sites: usize, qubits: usize },

    #[error("routing impossible: {0}")]
    RoutingImpossible(String),

    #[error("invalid hardware model: {0}")]
    InvalidHardware(String),

    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),

    #[error("invalid benchmark: {0}")]
    InvalidBenchmark(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config: {0}")]
    Config(#[from] toml::de::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
