use thiserror::Error;

use crate::diagnostics::Witness;

/// Which lattice bound was missing for a pair of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Meet,
    Join,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Meet => f.write_str("meet"),
            Bound::Join => f.write_str("join"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no elements declared")]
    EmptyLattice,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("identifier `{0}` declared twice")]
    DuplicateId(String),
    #[error("not a partial order: `{a}` <= `{b}` and `{b}` <= `{a}`")]
    NotAPartialOrder { a: String, b: String },
    #[error("not a lattice: `{a}` and `{b}` have no {bound}")]
    NotALattice { a: String, b: String, bound: Bound },
    #[error("lattice is not a frame: {0}")]
    NotAFrame(Witness),
    #[error("morphism `{morphism}` does not have the declared domain/codomain")]
    BadMorphism { morphism: String },
    #[error("missing composite `{f}` o `{g}`")]
    MissingComposite { f: String, g: String },
    #[error("composite `{f}` o `{g}` = `{h}` is ill-typed")]
    CompositeTypeMismatch { f: String, g: String, h: String },
    #[error("identity law fails: {0}")]
    IdentityViolation(Witness),
    #[error("associativity fails: {0}")]
    AssociativityViolation(Witness),
    #[error("category has {count} morphisms; at most {max} are supported")]
    CapacityExceeded { count: usize, max: usize },
    #[error("morphism `{morphism}` does not have codomain `{expected}`")]
    BadCodomain { morphism: String, expected: String },
    #[error("sieve owner mismatch: expected `{expected}`, found `{found}`")]
    OwnerMismatch { expected: String, found: String },
    #[error("not a sieve: {0}")]
    NotASieve(Witness),
    #[error("category has no terminal object")]
    NoTerminalObject,
    #[error("enumeration of {what} exceeded the budget of {budget}")]
    BudgetExceeded { what: String, budget: u64 },
    #[error("assignments live on different carriers")]
    CarrierMismatch,
    #[error("not a Grothendieck topology: {0}")]
    NotATopology(Witness),
    #[error("not a filter: {0}")]
    NotAFilter(Witness),
    #[error("not a filter basis: {0}")]
    NotABasis(Witness),
    #[error("not a filter subbase: {0}")]
    NotASubbase(Witness),
    #[error("empty family of filters")]
    EmptyFamily,
    #[error("point does not belong to `{object}`")]
    PointMismatch { object: String },
    #[error("`{element}` is not compact")]
    NotCompactInput { element: String },
    #[error("product basis contains the empty sieve")]
    EmptyMeetSieve,
    #[error("operation requires a lattice-backed carrier")]
    LocaleOnly,
    #[error("not a functor: {0}")]
    NotAFunctor(Witness),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// The structured counterexample carried by checker failures.
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Error::NotAFrame(w)
            | Error::IdentityViolation(w)
            | Error::AssociativityViolation(w)
            | Error::NotASieve(w)
            | Error::NotATopology(w)
            | Error::NotAFilter(w)
            | Error::NotABasis(w)
            | Error::NotASubbase(w)
            | Error::NotAFunctor(w) => Some(w),
            _ => None,
        }
    }
}
