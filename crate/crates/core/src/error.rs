use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cover relation contains a cycle through element {0}")]
    CycleDetected(usize),
    #[error("element id {id} out of range for a poset with {len} elements")]
    InvalidId { id: usize, len: usize },
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("variable x{0} has no assigned value")]
    UnboundVariable(usize),
    #[error("{needed} assignments exceed the cap of {cap}")]
    TooManyAssignments { needed: u128, cap: u128 },
    #[error("relation is not an E-partition")]
    NotEPartition,
    #[error("elements {0} and {1} cannot be merged by a single {2} step")]
    NotMergeable(usize, usize, &'static str),
    #[error("map is not a p-morphism")]
    NotPMorphism,
    #[error("map is not surjective")]
    NotSurjective,
    #[error("not a weak coloring: {0}")]
    NotWeakColoring(String),
    #[error("not a coloring: {0}")]
    NotColoring(String),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("subset is not an upset of the ambient truncation: {0}")]
    NotUpset(String),
    #[error("delta map is not an order embedding into the subspace: {0}")]
    EmbeddingMismatch(String),
    #[error("quotient is not {0}-colorable")]
    QuotientNotColorable(usize),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A property asserted as a theorem failed on concrete data.
    #[error("falsified: {0}")]
    Falsified(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
