use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("degenerate support: a point mass has no span")]
    DegenerateSupport,

    #[error("mixed arithmetic modes (exact and float) in one operation")]
    MixedModes,

    #[error("lattice mismatch: spans {0} and {1} differ")]
    LatticeMismatch(f64, f64),

    #[error("operation requires integer-valued (unit lattice) components")]
    NotReduced,

    #[error("empty model: at least one component is required")]
    EmptyModel,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("no Bernoulli part: the theta-characteristic vanishes")]
    NoBernoulliPart,

    #[error("invalid tau sequence: {0}")]
    InvalidTau(String),

    #[error("degenerate variance: B_n = 0")]
    ZeroVariance,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("residue routes disagree by {gap:e} (h = {h})")]
    CrossCheck { h: u64, gap: f64 },

    #[error("exact arithmetic budget exceeded: {0}")]
    ExactBudget(String),

    #[error("distribution grammar: {0}")]
    Grammar(String),

    #[error("config: {0}")]
    Config(String),
}
