use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal {0:?}")]
pub struct ParseScalarError(pub String);

/// Failures of structural checks on user-supplied or constructed data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("group table: {0}")]
    Group(String),
    #[error("algebra {algebra}: multiplication not associative at basis triple ({i}, {j}, {k})")]
    NotAssociative { algebra: String, i: usize, j: usize, k: usize },
    #[error("algebra {algebra}: action of group element {g} is not multiplicative at basis pair ({i}, {j})")]
    ActionNotMultiplicative { algebra: String, g: usize, i: usize, j: usize },
    #[error("algebra {algebra}: action is not a group homomorphism at ({g}, {h})")]
    ActionNotHomomorphism { algebra: String, g: usize, h: usize },
    #[error("algebra {algebra}: action of group element {g} is not invertible")]
    ActionNotInvertible { algebra: String, g: usize },
    #[error("algebra {algebra}: unit is not two-sided at basis element {i}")]
    BadUnit { algebra: String, i: usize },
    #[error("algebra {algebra}: not quadratik (product span has rank {rank} < {dim})")]
    NotQuadratik { algebra: String, rank: usize, dim: usize },
    #[error("algebra {algebra}: presentation invalid: {reason}")]
    BadPresentation { algebra: String, reason: String },
    #[error("homomorphism {name}: not multiplicative at basis pair ({i}, {j})")]
    NotMultiplicative { name: String, i: usize, j: usize },
    #[error("homomorphism {name}: not equivariant at group element {g}, basis element {basis}")]
    NotEquivariant { name: String, g: usize, basis: usize },
    #[error("{context}: dimension mismatch: {detail}")]
    Shape { context: String, detail: String },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("gamma at group element {g}: {reason}")]
    BadGamma { g: usize, reason: String },
    #[error("split-exact sequence: {}", .0.join("; "))]
    SplitExact(Vec<String>),
    #[error("column action: {0}")]
    ColumnAction(String),
    #[error("idempotent check failed: {0}")]
    Idempotent(String),
    #[error("homotopy: {0}")]
    Homotopy(String),
    #[error("dimension {dim} of {name} exceeds the cap {cap}")]
    TooLarge { name: String, dim: usize, cap: usize },
}

/// Reasons the invariant oracle declines to decide.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Indeterminate {
    #[error("algebra {0} has no semisimple presentation")]
    NoPresentation(String),
    #[error("algebra {algebra}: group element {g} permutes the simple blocks")]
    BlockPermuting { algebra: String, g: usize },
    #[error("algebra {algebra}: block {block} carries a nontrivial action without an implementing representation")]
    NotInner { algebra: String, block: usize },
    #[error("character decomposition failed: {0}")]
    Characters(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("at {pos}: unknown identifier {name:?}")]
    Unknown { pos: usize, name: String },
    #[error("at {pos}: cannot compose {left_target} with {right_source}")]
    TypeMismatch { pos: usize, left_target: String, right_source: String },
    #[error("at {pos}: summands disagree: {first} vs {second}")]
    SumMismatch { pos: usize, first: String, second: String },
    #[error("at {pos}: unbalanced brackets")]
    Unbalanced { pos: usize },
    #[error("at {pos}: unexpected {found}")]
    Syntax { pos: usize, found: String },
    #[error("rule {rule} not applicable at term {term}, position {position}")]
    NotApplicable { rule: String, term: usize, position: usize },
    #[error("homotopy {0}: only the endpoints 0 and 1 can be evaluated")]
    NotEndpoint(String),
}

/// Top-level error for pipeline operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("indeterminate: {0}")]
    Indeterminate(#[from] Indeterminate),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("workspace: {0}")]
    Workspace(String),
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
