//! The sieve universe of a category, precomputed once and shared.
//!
//! A [`Carrier`] enumerates every sieve on every object and tabulates pullbacks
//! along every morphism, so assignments can be stored as bitsets over sieve
//! indices. A carrier built from a lattice uses its poset category; the sieves
//! on `k` are then the down-sets of `↓k` and are labelled by element names.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{poset_category, FiniteCategory, Mor, MorphismSet, Obj, Sieve};
use crate::diagnostics::{Axiom, Witness};
use crate::error::{Error, Result};
use crate::order::{Elem, ElementSet, FiniteLattice};

/// Per-object ceiling on enumerated sieves.
pub const DEFAULT_MAX_SIEVES: u64 = 1 << 20;

/// Index of a sieve in its owner's canonical list.
pub type SieveId = usize;

#[derive(Debug)]
pub struct Carrier {
    category: FiniteCategory,
    lattice: Option<FiniteLattice>,
    sieves: Vec<Vec<MorphismSet>>,
    index: Vec<HashMap<MorphismSet, SieveId>>,
    pullback: Vec<Vec<SieveId>>,
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.category == other.category && self.lattice == other.lattice
    }
}

impl Carrier {
    pub fn category(category: FiniteCategory, max_sieves: u64) -> Result<Arc<Self>> {
        Self::build(category, None, max_sieves)
    }

    pub fn locale(lattice: FiniteLattice, max_sieves: u64) -> Result<Arc<Self>> {
        let category = poset_category(&lattice)?;
        Self::build(category, Some(lattice), max_sieves)
    }

    fn build(
        category: FiniteCategory,
        lattice: Option<FiniteLattice>,
        max_sieves: u64,
    ) -> Result<Arc<Self>> {
        let mut sieves = Vec::new();
        let mut index: Vec<HashMap<MorphismSet, SieveId>> = Vec::new();
        for c in category.objects() {
            let list: Vec<MorphismSet> = category
                .sieves_on(c, max_sieves)?
                .into_iter()
                .map(|s| s.members)
                .collect();
            index.push(list.iter().enumerate().map(|(i, &s)| (s, i)).collect());
            sieves.push(list);
        }
        let pullback = category
            .all_morphisms()
            .map(|h| {
                let (d, c) = (category.dom(h), category.cod(h));
                sieves[c.0]
                    .iter()
                    .map(|&s| {
                        let p = category.pullback_members(h, s);
                        index[d.0][&p]
                    })
                    .collect()
            })
            .collect();
        Ok(Arc::new(Carrier {
            category,
            lattice,
            sieves,
            index,
            pullback,
        }))
    }

    pub fn cat(&self) -> &FiniteCategory {
        &self.category
    }

    pub fn lattice(&self) -> Option<&FiniteLattice> {
        self.lattice.as_ref()
    }

    pub fn is_locale(&self) -> bool {
        self.lattice.is_some()
    }

    pub fn require_lattice(&self) -> Result<&FiniteLattice> {
        self.lattice.as_ref().ok_or(Error::LocaleOnly)
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        self.category.objects()
    }

    pub fn object(&self, name: &str) -> Result<Obj> {
        self.category.object(name).map_err(|e| match (&self.lattice, e) {
            (Some(_), Error::UnknownObject(n)) => Error::UnknownElement(n),
            (_, e) => e,
        })
    }

    pub fn object_name(&self, c: Obj) -> &str {
        self.category.object_name(c)
    }

    /// Number of sieves on `c`; ids run from the empty sieve (0) to the
    /// maximal sieve (last).
    pub fn sieve_count(&self, c: Obj) -> usize {
        self.sieves[c.0].len()
    }

    pub fn sieve_ids(&self, c: Obj) -> std::ops::Range<SieveId> {
        0..self.sieves[c.0].len()
    }

    pub fn members(&self, c: Obj, s: SieveId) -> MorphismSet {
        self.sieves[c.0][s]
    }

    pub fn sieve(&self, c: Obj, s: SieveId) -> Sieve {
        Sieve {
            owner: c,
            members: self.sieves[c.0][s],
        }
    }

    pub fn id_of(&self, c: Obj, members: MorphismSet) -> Option<SieveId> {
        self.index[c.0].get(&members).copied()
    }

    pub fn empty(&self, _c: Obj) -> SieveId {
        0
    }

    pub fn maximal(&self, c: Obj) -> SieveId {
        self.sieves[c.0].len() - 1
    }

    /// Sieve id of `h*(S)` on `dom(h)`, for `S` on `cod(h)`.
    pub fn pullback(&self, h: Mor, s: SieveId) -> SieveId {
        self.pullback[h.0][s]
    }

    pub fn intersect(&self, c: Obj, s: SieveId, r: SieveId) -> SieveId {
        self.index[c.0][&self.sieves[c.0][s].intersection(self.sieves[c.0][r])]
    }

    pub fn union(&self, c: Obj, s: SieveId, r: SieveId) -> SieveId {
        self.index[c.0][&self.sieves[c.0][s].union(self.sieves[c.0][r])]
    }

    pub fn is_subset(&self, c: Obj, s: SieveId, r: SieveId) -> bool {
        self.sieves[c.0][s].is_subset(self.sieves[c.0][r])
    }

    pub fn contains(&self, c: Obj, s: SieveId, m: Mor) -> bool {
        self.sieves[c.0][s].contains(m)
    }

    /// Member labels in canonical order: element names below `c` for a
    /// lattice carrier, morphism names otherwise.
    pub fn labels(&self, c: Obj, s: SieveId) -> Vec<String> {
        self.set_labels(self.sieves[c.0][s])
    }

    pub fn set_labels(&self, set: MorphismSet) -> Vec<String> {
        match &self.lattice {
            Some(_) => set
                .iter()
                .map(|m| self.category.object_name(self.category.dom(m)).to_string())
                .collect(),
            None => self.category.names_of(set),
        }
    }

    /// Element set `{m | m<=c ∈ S}` of a lattice-carrier sieve.
    pub fn element_set(&self, c: Obj, s: SieveId) -> Result<ElementSet> {
        let l = self.require_lattice()?;
        Ok(ElementSet::from_elems(
            l.len(),
            self.sieves[c.0][s]
                .iter()
                .map(|m| Elem(self.category.dom(m).0)),
        ))
    }

    /// Morphisms named by `labels`, read as element names on a lattice
    /// carrier. Does not check closure.
    pub fn morphisms_from_labels<S: AsRef<str>>(&self, c: Obj, labels: &[S]) -> Result<MorphismSet> {
        let mut set = MorphismSet::EMPTY;
        for label in labels {
            let label = label.as_ref();
            let m = match &self.lattice {
                Some(l) => {
                    let e = l.elem(label)?;
                    self.category
                        .hom(Obj(e.0), c)
                        .next()
                        .ok_or_else(|| Error::BadCodomain {
                            morphism: label.to_string(),
                            expected: self.object_name(c).to_string(),
                        })?
                }
                None => {
                    let m = self.category.morphism(label)?;
                    if self.category.cod(m) != c {
                        return Err(Error::BadCodomain {
                            morphism: label.to_string(),
                            expected: self.object_name(c).to_string(),
                        });
                    }
                    m
                }
            };
            set.insert(m);
        }
        Ok(set)
    }

    /// Resolves a sieve given by member labels. Fails with `NotASieve` when
    /// the set is not closed.
    pub fn parse_sieve<S: AsRef<str>>(&self, c: Obj, labels: &[S]) -> Result<SieveId> {
        let set = self.morphisms_from_labels(c, labels)?;
        self.id_of(c, set).ok_or_else(|| {
            let w = self
                .category
                .is_sieve(c, set)
                .witness()
                .cloned()
                .unwrap_or_else(|| Witness::new(Axiom::SieveClosure));
            let w = match &self.lattice {
                Some(_) => Witness {
                    morphisms: Vec::new(),
                    ..w
                }
                .elements(labels.iter().map(|s| s.as_ref().to_string())),
                None => w,
            };
            Error::NotASieve(w)
        })
    }

    /// Least sieve containing the labelled members.
    pub fn generate<S: AsRef<str>>(&self, c: Obj, labels: &[S]) -> Result<SieveId> {
        let set = self.morphisms_from_labels(c, labels)?;
        let s = self.category.generated_sieve(c, set)?;
        Ok(self.index[c.0][&s.members])
    }

    /// Points of the category carrier: morphisms from the designated
    /// terminal object into `c`.
    pub fn category_points(&self, c: Obj) -> Result<Vec<Mor>> {
        self.category.category_points(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn twopt_universe() {
        let car = Carrier::category(fixtures::twopt(), DEFAULT_MAX_SIEVES).unwrap();
        let c = car.object("C").unwrap();
        let one = car.object("1").unwrap();
        assert_eq!(car.sieve_count(c), 5);
        assert_eq!(car.sieve_count(one), 2);
        let sx = car.parse_sieve(c, &["x", "a"]).unwrap();
        let x = car.cat().morphism("x").unwrap();
        let y = car.cat().morphism("y").unwrap();
        assert_eq!(car.pullback(x, sx), car.maximal(one));
        assert_eq!(car.pullback(y, sx), car.empty(one));
        assert!(matches!(
            car.parse_sieve(c, &["x"]),
            Err(Error::NotASieve(_))
        ));
        assert_eq!(car.generate(c, &["x"]).unwrap(), sx);
    }

    #[test]
    fn locale_labels_are_elements() {
        let car = Carrier::locale(fixtures::d12(), DEFAULT_MAX_SIEVES).unwrap();
        let six = car.object("6").unwrap();
        let s = car.parse_sieve(six, &["1", "2", "3"]).unwrap();
        assert_eq!(car.labels(six, s), ["1", "2", "3"]);
        assert_eq!(car.labels(six, car.maximal(six)), ["1", "2", "3", "6"]);
        assert!(matches!(
            car.parse_sieve(six, &["4"]),
            Err(Error::BadCodomain { .. })
        ));
        assert!(matches!(
            car.parse_sieve(six, &["2"]),
            Err(Error::NotASieve(_))
        ));
        assert_eq!(car.object("5").unwrap_err(), Error::UnknownElement("5".into()));
    }

    #[test]
    fn locale_sieves_are_down_sets_of_principal_ideals() {
        for l in [fixtures::chain3(), fixtures::d12(), fixtures::sq()] {
            let car = Carrier::locale(l.clone(), DEFAULT_MAX_SIEVES).unwrap();
            for k in l.elements() {
                let below = l.principal_down(k);
                let expected = l
                    .down_sets(DEFAULT_MAX_SIEVES)
                    .unwrap()
                    .into_iter()
                    .filter(|d| d.is_subset(&below))
                    .count();
                assert_eq!(car.sieve_count(Obj(k.0)), expected);
                for s in car.sieve_ids(Obj(k.0)) {
                    let set = car.element_set(Obj(k.0), s).unwrap();
                    assert!(l.is_down_set(&set) && set.is_subset(&below));
                }
            }
        }
    }

    #[test]
    fn pullback_along_poset_morphism_is_restriction() {
        let l = fixtures::d12();
        let car = Carrier::locale(l.clone(), DEFAULT_MAX_SIEVES).unwrap();
        for h in car.cat().all_morphisms() {
            let (m, k) = (car.cat().dom(h), car.cat().cod(h));
            let below_m = l.principal_down(Elem(m.0));
            for s in car.sieve_ids(k) {
                let restricted = car.element_set(k, s).unwrap().intersection(&below_m);
                let p = car.pullback(h, s);
                assert_eq!(car.element_set(m, p).unwrap(), restricted);
            }
        }
    }
}
