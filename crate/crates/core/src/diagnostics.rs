//! Pass/fail verdicts with structured counterexamples.

use std::fmt;

use serde::{Deserialize, Serialize};

/// The axiom or law a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "&'static str", try_from = "String")]
pub enum Axiom {
    Distributivity,
    SieveCodomain,
    SieveClosure,
    /// The maximal sieve must cover.
    MaximalSieve,
    Stability,
    Transitivity,
    UpwardClosure,
    NonemptyTable,
    Intersection,
    PullbackStability,
    EmptySieve,
    BasisIntersection,
    BasisPullback,
    BasisPullbackStrict,
    BasisNonempty,
    BasisEmptySieve,
    SubbaseIntersection,
    DisjointCovers,
    ProperExtension,
    FunctorTyping,
    FunctorIdentity,
    FunctorComposition,
    IdentityLaw,
    Associativity,
    FilterPreservation,
    ImageNeighborhood,
    ImageCoverNeighborhood,
    ImageBasis,
    Compactness,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::Distributivity => "distributivity",
            Axiom::SieveCodomain => "sieve-codomain",
            Axiom::SieveClosure => "sieve-closure",
            Axiom::MaximalSieve => "T1-maximal",
            Axiom::Stability => "T2-stability",
            Axiom::Transitivity => "T3-transitivity",
            Axiom::UpwardClosure => "F1",
            Axiom::NonemptyTable => "F2-nonempty",
            Axiom::Intersection => "F2",
            Axiom::PullbackStability => "F3",
            Axiom::EmptySieve => "F4",
            Axiom::BasisIntersection => "B1",
            Axiom::BasisPullback => "B2",
            Axiom::BasisPullbackStrict => "B2-strict",
            Axiom::BasisNonempty => "B3-nonempty",
            Axiom::BasisEmptySieve => "B3-empty-sieve",
            Axiom::SubbaseIntersection => "subbase",
            Axiom::DisjointCovers => "disjoint-covers",
            Axiom::ProperExtension => "proper-extension",
            Axiom::FunctorTyping => "functor-typing",
            Axiom::FunctorIdentity => "functor-identity",
            Axiom::FunctorComposition => "functor-composition",
            Axiom::IdentityLaw => "identity",
            Axiom::Associativity => "associativity",
            Axiom::FilterPreservation => "filter-preservation",
            Axiom::ImageNeighborhood => "image-neighborhood",
            Axiom::ImageCoverNeighborhood => "image-cover-neighborhood",
            Axiom::ImageBasis => "image-basis",
            Axiom::Compactness => "compactness",
        }
    }
}

impl Axiom {
    pub const ALL: [Axiom; 29] = [
        Axiom::Distributivity,
        Axiom::SieveCodomain,
        Axiom::SieveClosure,
        Axiom::MaximalSieve,
        Axiom::Stability,
        Axiom::Transitivity,
        Axiom::UpwardClosure,
        Axiom::NonemptyTable,
        Axiom::Intersection,
        Axiom::PullbackStability,
        Axiom::EmptySieve,
        Axiom::BasisIntersection,
        Axiom::BasisPullback,
        Axiom::BasisPullbackStrict,
        Axiom::BasisNonempty,
        Axiom::BasisEmptySieve,
        Axiom::SubbaseIntersection,
        Axiom::DisjointCovers,
        Axiom::ProperExtension,
        Axiom::FunctorTyping,
        Axiom::FunctorIdentity,
        Axiom::FunctorComposition,
        Axiom::IdentityLaw,
        Axiom::Associativity,
        Axiom::FilterPreservation,
        Axiom::ImageNeighborhood,
        Axiom::ImageCoverNeighborhood,
        Axiom::ImageBasis,
        Axiom::Compactness,
    ];
}

impl From<Axiom> for &'static str {
    fn from(a: Axiom) -> Self {
        a.label()
    }
}

impl TryFrom<String> for Axiom {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.label() == s)
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Structured counterexample. Sieves are listed by member labels: morphism
/// names on a category carrier, element names on a lattice carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub axiom: Axiom,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sieves: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<String>,
}

impl Witness {
    pub fn new(axiom: Axiom) -> Self {
        Witness {
            axiom,
            objects: Vec::new(),
            morphisms: Vec::new(),
            sieves: Vec::new(),
            elements: Vec::new(),
        }
    }

    pub fn objects<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        self.objects.extend(it.into_iter().map(Into::into));
        self
    }

    pub fn morphisms<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        self.morphisms.extend(it.into_iter().map(Into::into));
        self
    }

    pub fn sieve(mut self, members: Vec<String>) -> Self {
        self.sieves.push(members);
        self
    }

    pub fn elements<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        self.elements.extend(it.into_iter().map(Into::into));
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.axiom)?;
        if !self.objects.is_empty() {
            write!(f, " objects={:?}", self.objects)?;
        }
        if !self.morphisms.is_empty() {
            write!(f, " morphisms={:?}", self.morphisms)?;
        }
        for s in &self.sieves {
            write!(f, " sieve={{{}}}", s.join(","))?;
        }
        if !self.elements.is_empty() {
            write!(f, " elements={:?}", self.elements)?;
        }
        Ok(())
    }
}

/// Outcome of a checker. A failure always carries its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "witness", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }

    /// Converts a failing verdict into an error.
    pub fn into_result<E>(self, err: impl FnOnce(Witness) -> E) -> Result<(), E> {
        match self {
            Verdict::Pass => Ok(()),
            Verdict::Fail(w) => Err(err(w)),
        }
    }
}

impl From<Option<Witness>> for Verdict {
    fn from(w: Option<Witness>) -> Self {
        match w {
            None => Verdict::Pass,
            Some(w) => Verdict::Fail(w),
        }
    }
}
