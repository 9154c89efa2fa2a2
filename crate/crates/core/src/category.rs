//! Finite small categories and sieves.
//!
//! Composition is stored as a dense table `compose(f, g) = f ∘ g` (first `g`,
//! then `f`), defined exactly when `cod(g) = dom(f)`. Sieves are morphism sets
//! packed in a `u128`, which caps a category at [`MAX_MORPHISMS`] morphisms.

use std::collections::HashMap;
use std::fmt;

use crate::diagnostics::{Axiom, Verdict, Witness};
use crate::error::{Error, Result};
use crate::order::FiniteLattice;

pub const MAX_MORPHISMS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mor(pub usize);

/// A set of morphisms of one category.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct MorphismSet(u128);

impl MorphismSet {
    pub const EMPTY: MorphismSet = MorphismSet(0);

    pub fn singleton(m: Mor) -> Self {
        MorphismSet(1u128 << m.0)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn contains(self, m: Mor) -> bool {
        self.0 >> m.0 & 1 == 1
    }

    pub fn insert(&mut self, m: Mor) {
        self.0 |= 1u128 << m.0;
    }

    pub fn union(self, other: MorphismSet) -> MorphismSet {
        MorphismSet(self.0 | other.0)
    }

    pub fn intersection(self, other: MorphismSet) -> MorphismSet {
        MorphismSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: MorphismSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Mor> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Mor(i))
        })
    }

    /// Canonical order: size first, then lexicographic on member indices.
    pub fn canonical_cmp(&self, other: &MorphismSet) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl FromIterator<Mor> for MorphismSet {
    fn from_iter<I: IntoIterator<Item = Mor>>(iter: I) -> Self {
        let mut s = MorphismSet::EMPTY;
        for m in iter {
            s.insert(m);
        }
        s
    }
}

/// A right ideal of morphisms into `owner`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sieve {
    pub owner: Obj,
    pub members: MorphismSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismInfo {
    pub name: String,
    pub dom: Obj,
    pub cod: Obj,
}

/// Declarative input for [`FiniteCategory::build`]. Identities may be named
/// explicitly; objects without one get a synthesized `id_<object>`.
/// Composites with an identity factor are filled in automatically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    /// `(name, dom, cod)`
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, identity morphism)`
    pub identities: Vec<(String, String)>,
    /// `(f, g, h)` meaning `f ∘ g = h`.
    pub compositions: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    obj_index: HashMap<String, usize>,
    morphisms: Vec<MorphismInfo>,
    mor_index: HashMap<String, usize>,
    identity: Vec<Mor>,
    compose: Vec<Option<Mor>>,
    into: Vec<MorphismSet>,
}

impl FiniteCategory {
    pub fn build(spec: &CategorySpec) -> Result<Self> {
        let mut obj_index = HashMap::new();
        for (i, o) in spec.objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::DuplicateId(o.clone()));
            }
        }
        let obj = |name: &str| {
            obj_index
                .get(name)
                .map(|&i| Obj(i))
                .ok_or_else(|| Error::UnknownObject(name.to_string()))
        };
        let mut morphisms = Vec::new();
        let mut mor_index = HashMap::new();
        for (name, dom, cod) in &spec.morphisms {
            let info = MorphismInfo {
                name: name.clone(),
                dom: obj(dom)?,
                cod: obj(cod)?,
            };
            if mor_index.insert(name.clone(), morphisms.len()).is_some() {
                return Err(Error::DuplicateId(name.clone()));
            }
            morphisms.push(info);
        }
        let mut identity: Vec<Option<Mor>> = vec![None; spec.objects.len()];
        for (o, m) in &spec.identities {
            let o = obj(o)?;
            let &mi = mor_index
                .get(m)
                .ok_or_else(|| Error::UnknownMorphism(m.clone()))?;
            let info = &morphisms[mi];
            if info.dom != o || info.cod != o {
                return Err(Error::BadMorphism { morphism: m.clone() });
            }
            if identity[o.0].replace(Mor(mi)).is_some() {
                return Err(Error::DuplicateId(format!("identity of {}", spec.objects[o.0])));
            }
        }
        for (i, slot) in identity.iter_mut().enumerate() {
            if slot.is_none() {
                let name = format!("id_{}", spec.objects[i]);
                if mor_index.insert(name.clone(), morphisms.len()).is_some() {
                    return Err(Error::DuplicateId(name));
                }
                *slot = Some(Mor(morphisms.len()));
                morphisms.push(MorphismInfo {
                    name,
                    dom: Obj(i),
                    cod: Obj(i),
                });
            }
        }
        let identity: Vec<Mor> = identity.into_iter().map(Option::unwrap).collect();
        let n = morphisms.len();
        if n > MAX_MORPHISMS {
            return Err(Error::CapacityExceeded {
                count: n,
                max: MAX_MORPHISMS,
            });
        }
        let is_identity = |m: Mor| identity[morphisms[m.0].dom.0] == m;
        let mut compose: Vec<Option<Mor>> = vec![None; n * n];
        for (f, info) in morphisms.iter().enumerate() {
            let f = Mor(f);
            compose[f.0 * n + identity[info.dom.0].0] = Some(f);
            compose[identity[info.cod.0].0 * n + f.0] = Some(f);
        }
        let mor = |name: &str| {
            mor_index
                .get(name)
                .map(|&i| Mor(i))
                .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
        };
        let mut declared = vec![false; n * n];
        for (f, g, h) in &spec.compositions {
            let (fm, gm, hm) = (mor(f)?, mor(g)?, mor(h)?);
            let (fi, gi, hi) = (&morphisms[fm.0], &morphisms[gm.0], &morphisms[hm.0]);
            if gi.cod != fi.dom || hi.dom != gi.dom || hi.cod != fi.cod {
                return Err(Error::CompositeTypeMismatch {
                    f: f.clone(),
                    g: g.clone(),
                    h: h.clone(),
                });
            }
            let slot = &mut compose[fm.0 * n + gm.0];
            if is_identity(fm) || is_identity(gm) {
                if *slot != Some(hm) {
                    return Err(Error::IdentityViolation(
                        Witness::new(Axiom::IdentityLaw).morphisms([f, g, h]),
                    ));
                }
                continue;
            }
            if declared[fm.0 * n + gm.0] && *slot != Some(hm) {
                return Err(Error::DuplicateId(format!("{f} o {g}")));
            }
            declared[fm.0 * n + gm.0] = true;
            *slot = Some(hm);
        }
        for f in 0..n {
            for g in 0..n {
                if morphisms[g].cod == morphisms[f].dom && compose[f * n + g].is_none() {
                    return Err(Error::MissingComposite {
                        f: morphisms[f].name.clone(),
                        g: morphisms[g].name.clone(),
                    });
                }
            }
        }
        let mut into = vec![MorphismSet::EMPTY; spec.objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            into[m.cod.0].insert(Mor(i));
        }
        let cat = FiniteCategory {
            objects: spec.objects.clone(),
            obj_index,
            morphisms,
            mor_index,
            identity,
            compose,
            into,
        };
        cat.check_associativity()?;
        Ok(cat)
    }

    fn check_associativity(&self) -> Result<()> {
        for f in self.all_morphisms() {
            for g in self.hom_into(self.dom(f)).iter() {
                let fg = self.compose(f, g).expect("composable");
                for h in self.hom_into(self.dom(g)).iter() {
                    let left = self.compose(fg, h);
                    let right = self.compose(f, self.compose(g, h).expect("composable"));
                    if left != right {
                        return Err(Error::AssociativityViolation(
                            Witness::new(Axiom::Associativity).morphisms([
                                self.mor_name(f),
                                self.mor_name(g),
                                self.mor_name(h),
                            ]),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Category of a partial order: one morphism `m<=k` per pair `m <= k`.
    /// `leq` must be a reflexive, transitive, antisymmetric `n × n` relation.
    pub fn from_poset(names: &[String], leq: &[bool]) -> Result<Self> {
        let n = names.len();
        let mut obj_index = HashMap::new();
        for (i, o) in names.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::DuplicateId(o.clone()));
            }
        }
        let mut morphisms = Vec::new();
        let mut pair = vec![usize::MAX; n * n];
        for m in 0..n {
            for k in 0..n {
                if leq[m * n + k] {
                    pair[m * n + k] = morphisms.len();
                    morphisms.push(MorphismInfo {
                        name: format!("{}<={}", names[m], names[k]),
                        dom: Obj(m),
                        cod: Obj(k),
                    });
                }
            }
        }
        if morphisms.len() > MAX_MORPHISMS {
            return Err(Error::CapacityExceeded {
                count: morphisms.len(),
                max: MAX_MORPHISMS,
            });
        }
        let count = morphisms.len();
        let mut compose = vec![None; count * count];
        for (f, fi) in morphisms.iter().enumerate() {
            for (g, gi) in morphisms.iter().enumerate() {
                if gi.cod == fi.dom {
                    compose[f * count + g] = Some(Mor(pair[gi.dom.0 * n + fi.cod.0]));
                }
            }
        }
        let identity = (0..n).map(|i| Mor(pair[i * n + i])).collect();
        let mor_index = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.clone(), i))
            .collect();
        let mut into = vec![MorphismSet::EMPTY; n];
        for (i, m) in morphisms.iter().enumerate() {
            into[m.cod.0].insert(Mor(i));
        }
        Ok(FiniteCategory {
            objects: names.to_vec(),
            obj_index,
            morphisms,
            mor_index,
            identity,
            compose,
            into,
        })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        (0..self.objects.len()).map(Obj)
    }

    pub fn all_morphisms(&self) -> impl Iterator<Item = Mor> {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn object(&self, name: &str) -> Result<Obj> {
        self.obj_index
            .get(name)
            .map(|&i| Obj(i))
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism(&self, name: &str) -> Result<Mor> {
        self.mor_index
            .get(name)
            .map(|&i| Mor(i))
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o.0]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn mor_name(&self, m: Mor) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn morphism_info(&self, m: Mor) -> &MorphismInfo {
        &self.morphisms[m.0]
    }

    pub fn dom(&self, m: Mor) -> Obj {
        self.morphisms[m.0].dom
    }

    pub fn cod(&self, m: Mor) -> Obj {
        self.morphisms[m.0].cod
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.identity[o.0]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identity[self.dom(m).0] == m
    }

    /// `f ∘ g`, defined when `cod(g) = dom(f)`.
    pub fn compose(&self, f: Mor, g: Mor) -> Option<Mor> {
        self.compose[f.0 * self.morphisms.len() + g.0]
    }

    pub fn hom_into(&self, c: Obj) -> MorphismSet {
        self.into[c.0]
    }

    pub fn hom(&self, d: Obj, c: Obj) -> impl Iterator<Item = Mor> + '_ {
        self.into[c.0].iter().filter(move |&m| self.dom(m) == d)
    }

    pub fn maximal_sieve(&self, c: Obj) -> Sieve {
        Sieve {
            owner: c,
            members: self.into[c.0],
        }
    }

    pub fn names_of(&self, set: MorphismSet) -> Vec<String> {
        set.iter().map(|m| self.mor_name(m).to_string()).collect()
    }

    /// Checks codomains and closure under precomposition.
    pub fn is_sieve(&self, c: Obj, members: MorphismSet) -> Verdict {
        for f in members.iter() {
            if self.cod(f) != c {
                return Verdict::Fail(
                    Witness::new(Axiom::SieveCodomain)
                        .objects([self.object_name(c)])
                        .morphisms([self.mor_name(f)]),
                );
            }
        }
        for f in members.iter() {
            for g in self.hom_into(self.dom(f)).iter() {
                let fg = self.compose(f, g).expect("composable");
                if !members.contains(fg) {
                    return Verdict::Fail(
                        Witness::new(Axiom::SieveClosure)
                            .objects([self.object_name(c)])
                            .morphisms([self.mor_name(f), self.mor_name(g)]),
                    );
                }
            }
        }
        Verdict::Pass
    }

    /// Least sieve on `c` containing `generators`.
    pub fn generated_sieve(&self, c: Obj, generators: MorphismSet) -> Result<Sieve> {
        if let Some(bad) = generators.iter().find(|&f| self.cod(f) != c) {
            return Err(Error::BadCodomain {
                morphism: self.mor_name(bad).to_string(),
                expected: self.object_name(c).to_string(),
            });
        }
        let mut members = generators;
        let mut work: Vec<Mor> = generators.iter().collect();
        while let Some(f) = work.pop() {
            for g in self.hom_into(self.dom(f)).iter() {
                let fg = self.compose(f, g).expect("composable");
                if !members.contains(fg) {
                    members.insert(fg);
                    work.push(fg);
                }
            }
        }
        Ok(Sieve { owner: c, members })
    }

    /// `h*(S) = { g | cod(g) = dom(h), h ∘ g ∈ S }`.
    pub fn pullback_sieve(&self, h: Mor, s: &Sieve) -> Result<Sieve> {
        if s.owner != self.cod(h) {
            return Err(Error::OwnerMismatch {
                expected: self.object_name(self.cod(h)).to_string(),
                found: self.object_name(s.owner).to_string(),
            });
        }
        Ok(Sieve {
            owner: self.dom(h),
            members: self.pullback_members(h, s.members),
        })
    }

    pub(crate) fn pullback_members(&self, h: Mor, members: MorphismSet) -> MorphismSet {
        self.hom_into(self.dom(h))
            .iter()
            .filter(|&g| members.contains(self.compose(h, g).expect("composable")))
            .collect()
    }

    /// Objects with exactly one morphism from every object.
    pub fn terminal_objects(&self) -> Vec<Obj> {
        self.objects()
            .filter(|&t| self.objects().all(|x| self.hom(x, t).count() == 1))
            .collect()
    }

    /// First terminal object in declaration order.
    pub fn designated_terminal(&self) -> Option<Obj> {
        self.terminal_objects().into_iter().next()
    }

    /// Morphisms from the designated terminal object into `c`.
    pub fn category_points(&self, c: Obj) -> Result<Vec<Mor>> {
        let t = self.designated_terminal().ok_or(Error::NoTerminalObject)?;
        Ok(self.hom(t, c).collect())
    }

    /// Every sieve on `c`, in canonical order.
    pub fn sieves_on(&self, c: Obj, budget: u64) -> Result<Vec<Sieve>> {
        let generated: Vec<MorphismSet> = self
            .hom_into(c)
            .iter()
            .map(|f| {
                self.generated_sieve(c, MorphismSet::singleton(f))
                    .expect("codomain checked")
                    .members
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        seen.insert(MorphismSet::EMPTY);
        let mut frontier = vec![MorphismSet::EMPTY];
        while let Some(s) = frontier.pop() {
            for &g in &generated {
                if g.is_subset(s) {
                    continue;
                }
                let next = s.union(g);
                if seen.insert(next) {
                    if seen.len() as u64 > budget {
                        return Err(Error::BudgetExceeded {
                            what: format!("sieves on {}", self.object_name(c)),
                            budget,
                        });
                    }
                    frontier.push(next);
                }
            }
        }
        let mut all: Vec<MorphismSet> = seen.into_iter().collect();
        all.sort_by(MorphismSet::canonical_cmp);
        Ok(all
            .into_iter()
            .map(|members| Sieve { owner: c, members })
            .collect())
    }
}

/// One object per element and one morphism `m<=k` whenever `m <= k`.
pub fn poset_category(lattice: &FiniteLattice) -> Result<FiniteCategory> {
    let n = lattice.len();
    let mut leq = vec![false; n * n];
    for a in lattice.elements() {
        for b in lattice.elements() {
            leq[a.0 * n + b.0] = lattice.leq(a, b);
        }
    }
    FiniteCategory::from_poset(lattice.names(), &leq)
}

impl fmt::Display for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "category({} objects, {} morphisms)",
            self.objects.len(),
            self.morphisms.len()
        )
    }
}
