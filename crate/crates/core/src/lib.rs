//! Filters, Grothendieck topologies, convergence and compactness on finite
//! categories and finite locales.

pub mod carrier;
pub mod category;
pub mod convergence;
pub mod coverage;
pub mod diagnostics;
pub mod error;
pub mod filters;
pub mod fixtures;
pub mod functors;
pub mod laws;
pub mod order;

pub use carrier::{Carrier, SieveId, DEFAULT_MAX_SIEVES};
pub use category::{poset_category, CategorySpec, FiniteCategory, Mor, MorphismSet, Obj, Sieve};
pub use diagnostics::{Axiom, Verdict, Witness};
pub use error::{Error, Result};
pub use order::{divisor_lattice, Elem, ElementSet, FiniteLattice};
pub use convergence::{CompactnessReport, LocalePoint, Method, Point, Site};
pub use coverage::{check_topology, standard_topology, CoverAssignment, StandardKind};
pub use filters::{CertifiedAs, FilterCertificate, Saturation};
pub use functors::{FunctorMap, FunctorSpec};
pub use laws::LawOutcome;
