use thiserror::Error;

use crate::elements::Element;

/// Everything that can go wrong while building or combining matchings and
/// cobordisms. Variants carry a witness element wherever one exists.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid name {0:?}: must be a nonempty identifier")]
    InvalidName(String),

    #[error("element {0} is paired more than once as a source")]
    DuplicateSource(Element),

    #[error("element {0} is paired more than once as a target")]
    DuplicateTarget(Element),

    #[error("element {0} is paired but not in the domain")]
    NotInDomain(Element),

    #[error("element {0} is paired but not in the codomain")]
    NotInCodomain(Element),

    #[error("domain element {0} is not paired")]
    Unmapped(Element),

    #[error("codomain element {0} is not hit")]
    Unhit(Element),

    #[error("domain has {domain} elements but codomain has {codomain}")]
    SizeMismatch { domain: usize, codomain: usize },

    #[error("element {0} is outside the domain")]
    Lookup(Element),

    #[error("disjoint sum requires disjoint operands; {0} occurs in both (freshen one side)")]
    Overlap(Element),

    #[error("signed set halves overlap at {0} (freshen one side)")]
    SignedOverlap(Element),

    #[error("composition mismatch: {0}")]
    Composition(String),

    #[error("cancel precondition violated: {0} is in C and on one side of the matching only")]
    CancelShape(Element),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("not a subset: {0} is missing")]
    NotSubset(Element),

    #[error("cobordism shape error: {0}")]
    Shape(String),

    #[error("unsigned endpoints required: {0} is negative")]
    UnsignedRequired(Element),

    #[error("toggle undefined at its fixed point")]
    ToggleUndefined,

    #[error("not an involution: {0} is not sent back to itself")]
    NotInvolution(Element),

    #[error("map is not injective: {0} is hit twice")]
    NotInjective(Element),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
