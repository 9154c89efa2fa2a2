//! Finite bounded lattices, up/down-set machinery and divisor lattices.
//!
//! A [`FiniteLattice`] stores its order as a dense boolean relation and
//! precomputes meet and join tables at construction time, so everything
//! downstream is table lookups. Elements are opaque string identifiers kept in
//! declaration order, and that order is the canonical order for every
//! set-valued output.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::diagnostics::{Axiom, Verdict, Witness};
use crate::error::{Bound, Error, Result};

/// Index of an element in its lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// A subset of a lattice's elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    members: FixedBitSet,
}

impl ElementSet {
    pub fn empty(len: usize) -> Self {
        ElementSet {
            members: FixedBitSet::with_capacity(len),
        }
    }

    pub fn from_elems(len: usize, elems: impl IntoIterator<Item = Elem>) -> Self {
        let mut s = Self::empty(len);
        for e in elems {
            s.members.insert(e.0);
        }
        s
    }

    pub fn from_names<S: AsRef<str>>(lattice: &FiniteLattice, names: &[S]) -> Result<Self> {
        let elems = names
            .iter()
            .map(|n| lattice.elem(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_elems(lattice.len(), elems))
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e.0)
    }

    pub fn insert(&mut self, e: Elem) {
        self.members.insert(e.0);
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.ones().map(Elem)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut m = self.members.clone();
        m.union_with(&other.members);
        ElementSet { members: m }
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        ElementSet { members: m }
    }

    /// Complement relative to a carrier of `len` elements.
    pub fn complement(&self, len: usize) -> ElementSet {
        let mut m = self.members.clone();
        m.grow(len);
        m.toggle_range(..len);
        ElementSet { members: m }
    }

    pub fn names<'a>(&self, lattice: &'a FiniteLattice) -> Vec<&'a str> {
        self.iter().map(|e| lattice.name(e)).collect()
    }
}

impl FiniteLattice {
    /// Builds a lattice from declared elements and generating order pairs
    /// `(a, b)` meaning `a <= b`. The order is the reflexive-transitive
    /// closure of the pairs.
    pub fn build<S: AsRef<str>>(elements: &[S], order_pairs: &[(S, S)]) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyLattice);
        }
        let mut index = HashMap::new();
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateId(n.clone()));
            }
        }
        let n = names.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in order_pairs {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            leq[ia * n + ib] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(names, leq)
    }

    /// Builds a lattice from a complete order relation (already reflexive and
    /// transitive). Verifies antisymmetry and computes the bound tables.
    pub fn from_order(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        debug_assert_eq!(leq.len(), n * n);
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateId(name.clone()));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::NotAPartialOrder {
                        a: names[i].clone(),
                        b: names[j].clone(),
                    });
                }
            }
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let lower: Vec<usize> = (0..n).filter(|&z| le(z, x) && le(z, y)).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&g| lower.iter().all(|&z| le(z, g)))
                    .ok_or_else(|| Error::NotALattice {
                        a: names[x].clone(),
                        b: names[y].clone(),
                        bound: Bound::Meet,
                    })?;
                let upper: Vec<usize> = (0..n).filter(|&z| le(x, z) && le(y, z)).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&g| upper.iter().all(|&z| le(g, z)))
                    .ok_or_else(|| Error::NotALattice {
                        a: names[x].clone(),
                        b: names[y].clone(),
                        bound: Bound::Join,
                    })?;
                meet[x * n + y] = glb;
                meet[y * n + x] = glb;
                join[x * n + y] = lub;
                join[y * n + x] = lub;
            }
        }
        let bottom = (1..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (1..n).fold(0, |acc, x| join[acc * n + x]);
        Ok(FiniteLattice {
            names,
            index,
            leq,
            meet,
            join,
            bottom,
            top,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.len()).map(Elem)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.0]
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.index
            .get(name)
            .map(|&i| Elem(i))
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.0 * self.len() + b.0]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.meet[a.0 * self.len() + b.0])
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.join[a.0 * self.len() + b.0])
    }

    pub fn bottom(&self) -> Elem {
        Elem(self.bottom)
    }

    pub fn top(&self) -> Elem {
        Elem(self.top)
    }

    /// Join of a finite set; the empty join is the bottom element.
    pub fn join_all(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems
            .into_iter()
            .fold(self.bottom(), |acc, e| self.join(acc, e))
    }

    /// Meet of a finite set; the empty meet is the top element.
    pub fn meet_all(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.top(), |acc, e| self.meet(acc, e))
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between them.
    pub fn covering_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = self
                    .elements()
                    .any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn principal_down(&self, x: Elem) -> ElementSet {
        ElementSet::from_elems(self.len(), self.elements().filter(|&y| self.leq(y, x)))
    }

    pub fn principal_up(&self, x: Elem) -> ElementSet {
        ElementSet::from_elems(self.len(), self.elements().filter(|&y| self.leq(x, y)))
    }

    pub fn closure_down(&self, m: &ElementSet) -> ElementSet {
        m.iter()
            .fold(ElementSet::empty(self.len()), |acc, x| {
                acc.union(&self.principal_down(x))
            })
    }

    pub fn closure_up(&self, m: &ElementSet) -> ElementSet {
        m.iter()
            .fold(ElementSet::empty(self.len()), |acc, x| {
                acc.union(&self.principal_up(x))
            })
    }

    pub fn is_down_set(&self, m: &ElementSet) -> bool {
        m.iter()
            .all(|x| self.elements().all(|y| !self.leq(y, x) || m.contains(y)))
    }

    pub fn is_up_set(&self, m: &ElementSet) -> bool {
        m.iter()
            .all(|x| self.elements().all(|y| !self.leq(x, y) || m.contains(y)))
    }

    /// All down-sets, in canonical order (by size, then lexicographically by
    /// element index). Fails once more than `budget` sets have been found.
    pub fn down_sets(&self, budget: u64) -> Result<Vec<ElementSet>> {
        let n = self.len();
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![ElementSet::empty(n)];
        seen.insert(ElementSet::empty(n));
        while let Some(d) = frontier.pop() {
            for x in self.elements() {
                if d.contains(x) {
                    continue;
                }
                let next = d.union(&self.principal_down(x));
                if seen.insert(next.clone()) {
                    if seen.len() as u64 > budget {
                        return Err(Error::BudgetExceeded {
                            what: "down-sets".into(),
                            budget,
                        });
                    }
                    frontier.push(next);
                }
            }
        }
        let mut all: Vec<ElementSet> = seen.into_iter().collect();
        all.sort_by(canonical_cmp);
        Ok(all)
    }

    /// Binary distributivity over all triples; exact for finite lattices.
    pub fn is_frame(&self) -> Verdict {
        for x in self.elements() {
            for y in self.elements() {
                for z in self.elements() {
                    if !self.distributes(x, y, z) {
                        return Verdict::Fail(Witness::new(Axiom::Distributivity).elements([
                            self.name(x),
                            self.name(y),
                            self.name(z),
                        ]));
                    }
                }
            }
        }
        Verdict::Pass
    }

    fn distributes(&self, x: Elem, y: Elem, z: Elem) -> bool {
        self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
    }

    /// Re-runs a distributivity witness; true when the violation reproduces.
    pub fn replays(&self, w: &Witness) -> bool {
        if w.axiom != Axiom::Distributivity || w.elements.len() != 3 {
            return false;
        }
        match (
            self.elem(&w.elements[0]),
            self.elem(&w.elements[1]),
            self.elem(&w.elements[2]),
        ) {
            (Ok(x), Ok(y), Ok(z)) => !self.distributes(x, y, z),
            _ => false,
        }
    }

    pub fn complement_of(&self, x: Elem) -> Option<Elem> {
        self.elements()
            .find(|&y| self.meet(x, y) == self.bottom() && self.join(x, y) == self.top())
    }

    pub fn is_boolean(&self) -> bool {
        self.is_frame().is_pass() && self.elements().all(|x| self.complement_of(x).is_some())
    }
}

/// Size first, then lexicographic on the sorted member indices.
pub(crate) fn canonical_cmp(a: &ElementSet, b: &ElementSet) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().cmp(b.iter()))
}

impl fmt::Display for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lattice{{{}}}", self.names.join(","))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divisors of `n` ordered by divisibility, with meet = gcd and join = lcm.
pub fn divisor_lattice(n: u64) -> FiniteLattice {
    assert!(n >= 1, "divisor lattice needs n >= 1");
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let len = divisors.len();
    let names: Vec<String> = divisors.iter().map(u64::to_string).collect();
    let index: HashMap<String, usize> = names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let pos: HashMap<u64, usize> = divisors.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut leq = vec![false; len * len];
    let mut meet = vec![0; len * len];
    let mut join = vec![0; len * len];
    for (i, &a) in divisors.iter().enumerate() {
        for (j, &b) in divisors.iter().enumerate() {
            leq[i * len + j] = b % a == 0;
            let g = gcd(a, b);
            meet[i * len + j] = pos[&g];
            join[i * len + j] = pos[&(a / g * b)];
        }
    }
    FiniteLattice {
        names,
        index,
        leq,
        meet,
        join,
        bottom: 0,
        top: len - 1,
    }
}
