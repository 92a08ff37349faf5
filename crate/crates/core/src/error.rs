use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate pair {{{0}, {1}}}")]
    DuplicatePair(usize, usize),
    #[error("party {party} out of range 1..={k}")]
    PartyOutOfRange { party: usize, k: usize },
    #[error("partition is missing pair {{{0}, {1}}}")]
    MissingPair(usize, usize),
    #[error("gadget size {t} does not divide vertex count {n}")]
    Indivisible { n: usize, t: usize },
    #[error("vertex count mismatch: graph has {graph}, partition has {partition}")]
    VertexCountMismatch { graph: usize, partition: usize },
    #[error("party count mismatch: protocol expects {expected}, partition has {actual}")]
    PartyCountMismatch { expected: usize, actual: usize },
    #[error("solution variant does not match problem {0}")]
    VariantMismatch(String),
    #[error("problem {0} has no optimum value")]
    NoOptimum(String),
    #[error("instance too large: {what} = {value} exceeds {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("step budget of {0} turns exceeded")]
    StepBudgetExceeded(u64),
    #[error("party {0} tried to read the partition function, which is hidden from it")]
    PartitionHidden(usize),
    #[error("scheduler selected party {party}, but only {k} parties exist")]
    InvalidWriter { party: usize, k: usize },
    #[error("malformed transcript: {0}")]
    MalformedTranscript(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("public coins depend on private input; cannot condition on them")]
    InputDependentPublicCoins,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
