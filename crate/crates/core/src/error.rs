use thiserror::Error;

/// Errors produced while building graphs or running spectral computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("dangling endpoint: edge `{edge}` references missing vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("disconnected graph: {components} components")]
    Disconnected { components: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("empty cycle list")]
    EmptyBouquet,
    #[error("cycle length must be positive")]
    ZeroCycleLength,
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("expected {expected} edge potentials, got {got}")]
    PotentialCount { expected: usize, got: usize },
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("positive lambda required (got {0})")]
    NonPositiveLambda(f64),
    #[error("enumeration guard exceeded: {subsets} candidate subsets > {limit}")]
    EnumerationGuard { subsets: u128, limit: u128 },
    #[error("no eigenvalue in bracket ({0}, {1})")]
    NoEigenvalueInBracket(f64, f64),
    #[error("report range [{have_lo}, {have_hi}] does not cover [{need_lo}, {need_hi}]")]
    InsufficientRange {
        have_lo: f64,
        have_hi: f64,
        need_lo: f64,
        need_hi: f64,
    },
    #[error("graph is not a bouquet of cycles")]
    NotABouquet,
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
