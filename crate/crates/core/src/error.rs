use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty direct sum")]
    EmptyDirectSum,

    #[error("invalid bundle data: {0}")]
    InvalidBundle(String),

    #[error("invalid geometric context: {0}")]
    InvalidContext(String),

    #[error("sub-rank {sub_rank} out of range 1..={rank}")]
    SubRankOutOfRange { sub_rank: u64, rank: u64 },

    #[error("flag precondition violated: {0}")]
    FlagPrecondition(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("component {index} inconsistent with the isomorphism structure: expected (rank {expected_rank}, degree {expected_degree}), found (rank {rank}, degree {degree})")]
    InconsistentComponent {
        index: usize,
        expected_rank: u64,
        expected_degree: i64,
        rank: u64,
        degree: i64,
    },

    #[error("oracle requires isomorphism structure")]
    RequiresIsomorphisms,

    #[error("index {index} out of range (largest admissible index is {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("rank domination violated at index {index}: rank {rank} exceeds ambient rank {ambient}")]
    RankDomination { index: usize, rank: u64, ambient: u64 },

    #[error("degree bound violated at index {index}: degree {degree} exceeds bound {bound}")]
    DegreeBound { index: usize, degree: i64, bound: i64 },

    #[error("sequence `{sequence}` is not {expected} at index {index}")]
    Monotonicity {
        sequence: &'static str,
        expected: &'static str,
        index: usize,
    },

    #[error("sequence lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("sequences must be nonempty")]
    EmptySequence,

    #[error("invalid subsystem profile: {0}")]
    InvalidProfile(String),

    #[error("invalid HN profile: slopes do not strictly decrease at index {index}")]
    InvalidHnProfile { index: usize },

    #[error("budget exceeded: search space of {required} profiles exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("not a Higgs-inducing filtration: {0}")]
    NotHiggsInducing(String),

    #[error("not a generalized oper: {0}")]
    NotGeneralizedOper(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid rational literal `{0}`")]
    RationalParse(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}
