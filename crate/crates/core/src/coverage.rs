//! Cover assignments and Grothendieck topologies.
//!
//! A [`CoverAssignment`] maps every object to a set of sieves on it. The same
//! type carries topologies, filters, bases and subbases; which one it is
//! depends only on which checker certifies it.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::carrier::{Carrier, SieveId};
use crate::category::Obj;
use crate::diagnostics::{Axiom, Verdict, Witness};
use crate::error::{Error, Result};
use crate::order::Elem;

#[derive(Clone)]
pub struct CoverAssignment {
    carrier: Arc<Carrier>,
    table: Vec<FixedBitSet>,
}

impl PartialEq for CoverAssignment {
    fn eq(&self, other: &Self) -> bool {
        same_carrier(&self.carrier, &other.carrier) && self.table == other.table
    }
}

impl Eq for CoverAssignment {}

impl fmt::Debug for CoverAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.render()).finish()
    }
}

pub(crate) fn same_carrier(a: &Arc<Carrier>, b: &Arc<Carrier>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl CoverAssignment {
    /// Assignment with no sieves anywhere.
    pub fn empty(carrier: &Arc<Carrier>) -> Self {
        let table = carrier
            .objects()
            .map(|c| FixedBitSet::with_capacity(carrier.sieve_count(c)))
            .collect();
        CoverAssignment {
            carrier: carrier.clone(),
            table,
        }
    }

    /// `c ↦ {t_c}` everywhere.
    pub fn trivial(carrier: &Arc<Carrier>) -> Self {
        let mut a = Self::empty(carrier);
        for c in carrier.objects() {
            a.insert(c, carrier.maximal(c));
        }
        a
    }

    /// Every sieve on every object.
    pub fn full(carrier: &Arc<Carrier>) -> Self {
        let mut a = Self::empty(carrier);
        for t in a.table.iter_mut() {
            t.insert_range(..);
        }
        a
    }

    pub fn from_ids(carrier: &Arc<Carrier>, table: &[Vec<SieveId>]) -> Self {
        let mut a = Self::empty(carrier);
        for (c, ids) in table.iter().enumerate() {
            for &s in ids {
                a.insert(Obj(c), s);
            }
        }
        a
    }

    /// `c ↦ {S | G_c ⊆ S}`.
    pub fn principal(carrier: &Arc<Carrier>, generators: &[SieveId]) -> Self {
        let mut a = Self::empty(carrier);
        for c in carrier.objects() {
            for s in carrier.sieve_ids(c) {
                if carrier.is_subset(c, generators[c.0], s) {
                    a.insert(c, s);
                }
            }
        }
        a
    }

    /// Builds from labelled sieves, `(object, [member labels])`. Objects
    /// not mentioned get no sieves.
    pub fn from_labels<S: AsRef<str>>(
        carrier: &Arc<Carrier>,
        entries: &[(S, Vec<Vec<S>>)],
    ) -> Result<Self> {
        let mut a = Self::empty(carrier);
        for (obj, sieves) in entries {
            let c = carrier.object(obj.as_ref())?;
            for s in sieves {
                let id = carrier.parse_sieve(c, s)?;
                a.insert(c, id);
            }
        }
        Ok(a)
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn contains(&self, c: Obj, s: SieveId) -> bool {
        self.table[c.0].contains(s)
    }

    pub fn insert(&mut self, c: Obj, s: SieveId) {
        self.table[c.0].insert(s);
    }

    pub fn remove(&mut self, c: Obj, s: SieveId) {
        self.table[c.0].set(s, false);
    }

    pub fn set_row(&mut self, c: Obj, row: FixedBitSet) {
        self.table[c.0] = row;
    }

    pub fn row(&self, c: Obj) -> &FixedBitSet {
        &self.table[c.0]
    }

    /// Sieve ids at `c` in canonical order.
    pub fn at(&self, c: Obj) -> impl Iterator<Item = SieveId> + '_ {
        self.table[c.0].ones()
    }

    pub fn len_at(&self, c: Obj) -> usize {
        self.table[c.0].count_ones(..)
    }

    /// Pointwise inclusion `self(C) ⊆ other(C)`.
    pub fn is_subset(&self, other: &CoverAssignment) -> Result<bool> {
        self.same_carrier(other)?;
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .all(|(a, b)| a.is_subset(b)))
    }

    pub fn same_carrier(&self, other: &CoverAssignment) -> Result<()> {
        if same_carrier(&self.carrier, &other.carrier) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    pub fn intersection(&self, other: &CoverAssignment) -> Result<CoverAssignment> {
        self.same_carrier(other)?;
        let mut out = self.clone();
        for (a, b) in out.table.iter_mut().zip(&other.table) {
            a.intersect_with(b);
        }
        Ok(out)
    }

    pub fn union(&self, other: &CoverAssignment) -> Result<CoverAssignment> {
        self.same_carrier(other)?;
        let mut out = self.clone();
        for (a, b) in out.table.iter_mut().zip(&other.table) {
            a.union_with(b);
        }
        Ok(out)
    }

    /// Intersection of all sieves in `self(c)`, if `self(c)` is nonempty.
    pub fn meet_at(&self, c: Obj) -> Option<SieveId> {
        self.at(c)
            .reduce(|acc, s| self.carrier.intersect(c, acc, s))
    }

    /// Smallest member of each row for an assignment of the form `↑G_c`.
    pub fn generators(&self) -> Option<Vec<SieveId>> {
        self.carrier
            .objects()
            .map(|c| self.meet_at(c).filter(|&g| self.contains(c, g)))
            .collect()
    }

    pub fn labels(&self, c: Obj, s: SieveId) -> Vec<String> {
        self.carrier.labels(c, s)
    }

    /// `(object, sieves)` rows in canonical order.
    pub fn render(&self) -> Vec<(String, Vec<Vec<String>>)> {
        self.carrier
            .objects()
            .map(|c| {
                (
                    self.carrier.object_name(c).to_string(),
                    self.at(c).map(|s| self.labels(c, s)).collect(),
                )
            })
            .collect()
    }

    pub(crate) fn witness(&self, axiom: Axiom, objects: &[Obj], sieves: &[(Obj, SieveId)]) -> Witness {
        let mut w = Witness::new(axiom)
            .objects(objects.iter().map(|&c| self.carrier.object_name(c).to_string()));
        for &(c, s) in sieves {
            w = w.sieve(self.labels(c, s));
        }
        w
    }

    /// Re-runs the axiom named by `w` on the entities it lists. True when the
    /// violation reproduces.
    pub fn replays(&self, w: &Witness) -> bool {
        replay(self, w).unwrap_or(false)
    }
}

fn replay(a: &CoverAssignment, w: &Witness) -> Result<bool> {
    let car = a.carrier();
    let cat = car.cat();
    let obj = |i: usize| -> Result<Obj> {
        car.object(w.objects.get(i).ok_or(Error::EmptyFamily)?)
    };
    let sieve = |c: Obj, i: usize| -> Result<SieveId> {
        car.parse_sieve(c, w.sieves.get(i).ok_or(Error::EmptyFamily)?)
    };
    let mor = |i: usize| cat.morphism(w.morphisms.get(i).ok_or(Error::EmptyFamily)?);
    Ok(match w.axiom {
        Axiom::MaximalSieve | Axiom::NonemptyTable => {
            let c = obj(0)?;
            if w.axiom == Axiom::MaximalSieve {
                !a.contains(c, car.maximal(c))
            } else {
                a.len_at(c) == 0
            }
        }
        Axiom::EmptySieve => {
            let c = obj(0)?;
            a.contains(c, car.empty(c))
        }
        Axiom::Stability | Axiom::PullbackStability => {
            let c = obj(0)?;
            let h = mor(0)?;
            let s = sieve(c, 0)?;
            a.contains(c, s) && !a.contains(cat.dom(h), car.pullback(h, s))
        }
        Axiom::Transitivity => {
            let c = obj(0)?;
            let (s, r) = (sieve(c, 0)?, sieve(c, 1)?);
            a.contains(c, s)
                && !a.contains(c, r)
                && car
                    .members(c, s)
                    .iter()
                    .all(|m| a.contains(cat.dom(m), car.pullback(m, r)))
        }
        Axiom::UpwardClosure => {
            let c = obj(0)?;
            let (s, r) = (sieve(c, 0)?, sieve(c, 1)?);
            a.contains(c, s) && car.is_subset(c, s, r) && !a.contains(c, r)
        }
        Axiom::Intersection => {
            let c = obj(0)?;
            let (s, r) = (sieve(c, 0)?, sieve(c, 1)?);
            a.contains(c, s) && a.contains(c, r) && !a.contains(c, car.intersect(c, s, r))
        }
        Axiom::DisjointCovers => {
            let c = obj(0)?;
            let (s, r) = (sieve(c, 0)?, sieve(c, 1)?);
            a.contains(c, s) && a.contains(c, r) && car.intersect(c, s, r) == car.empty(c)
        }
        _ => false,
    })
}

/// Grothendieck topology axioms, checked in the order maximal sieve,
/// stability, transitivity.
pub fn check_topology(a: &CoverAssignment) -> Verdict {
    let car = a.carrier();
    let cat = car.cat();
    for c in car.objects() {
        if !a.contains(c, car.maximal(c)) {
            return Verdict::Fail(a.witness(Axiom::MaximalSieve, &[c], &[]));
        }
    }
    for c in car.objects() {
        for s in a.at(c) {
            for h in cat.hom_into(c).iter() {
                let d = cat.dom(h);
                let p = car.pullback(h, s);
                if !a.contains(d, p) {
                    return Verdict::Fail(
                        a.witness(Axiom::Stability, &[c, d], &[(c, s), (d, p)])
                            .morphisms([cat.mor_name(h)]),
                    );
                }
            }
        }
    }
    for c in car.objects() {
        for s in a.at(c) {
            let members = car.members(c, s);
            for r in car.sieve_ids(c) {
                if a.contains(c, r) {
                    continue;
                }
                if members
                    .iter()
                    .all(|m| a.contains(cat.dom(m), car.pullback(m, r)))
                {
                    return Verdict::Fail(a.witness(Axiom::Transitivity, &[c], &[(c, s), (c, r)]));
                }
            }
        }
    }
    Verdict::Pass
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StandardKind {
    Trivial,
    Discrete,
    Atomic,
    Dense,
}

impl std::str::FromStr for StandardKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "trivial" => Ok(StandardKind::Trivial),
            "discrete" => Ok(StandardKind::Discrete),
            "atomic" => Ok(StandardKind::Atomic),
            "dense" => Ok(StandardKind::Dense),
            other => Err(format!("unknown topology kind `{other}`")),
        }
    }
}

/// The trivial, discrete, atomic and dense topologies of a lattice carrier.
pub fn standard_topology(kind: StandardKind, carrier: &Arc<Carrier>) -> Result<CoverAssignment> {
    let l = carrier.require_lattice()?;
    let mut a = CoverAssignment::empty(carrier);
    for c in carrier.objects() {
        for s in carrier.sieve_ids(c) {
            let keep = match kind {
                StandardKind::Trivial => s == carrier.maximal(c),
                StandardKind::Discrete => true,
                StandardKind::Atomic => s != carrier.empty(c),
                StandardKind::Dense => {
                    let d = carrier.element_set(c, s)?;
                    l.principal_down(Elem(c.0))
                        .iter()
                        .all(|m| d.iter().any(|k| l.leq(k, m)))
                }
            };
            if keep {
                a.insert(c, s);
            }
        }
    }
    Ok(a)
}

/// Sieves on `c` whose members join to `c`. The empty sieve covers the
/// bottom element.
pub fn sup_topology(carrier: &Arc<Carrier>) -> Result<CoverAssignment> {
    let l = carrier.require_lattice()?;
    l.is_frame().into_result(Error::NotAFrame)?;
    let mut a = CoverAssignment::empty(carrier);
    for c in carrier.objects() {
        for s in carrier.sieve_ids(c) {
            let set = carrier.element_set(c, s)?;
            if l.join_all(set.iter()) == Elem(c.0) {
                a.insert(c, s);
            }
        }
    }
    Ok(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// Pointwise inclusion order on assignments.
pub fn compare_assignments(a: &CoverAssignment, b: &CoverAssignment) -> Result<Comparison> {
    let le = a.is_subset(b)?;
    let ge = b.is_subset(a)?;
    Ok(match (le, ge) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Less,
        (false, true) => Comparison::Greater,
        (false, false) => Comparison::Incomparable,
    })
}

/// For a topology: passes iff no table holds the empty sieve and any two
/// covers of the same object meet.
pub fn topology_is_filter(j: &CoverAssignment) -> Result<Verdict> {
    check_topology(j).into_result(Error::NotATopology)?;
    let car = j.carrier();
    for c in car.objects() {
        if j.contains(c, car.empty(c)) {
            return Ok(Verdict::Fail(j.witness(Axiom::EmptySieve, &[c], &[(c, car.empty(c))])));
        }
    }
    for c in car.objects() {
        let rows: Vec<SieveId> = j.at(c).collect();
        for (i, &s) in rows.iter().enumerate() {
            for &r in &rows[i + 1..] {
                if car.intersect(c, s, r) == car.empty(c) {
                    return Ok(Verdict::Fail(j.witness(
                        Axiom::DisjointCovers,
                        &[c],
                        &[(c, s), (c, r)],
                    )));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Every topology on the carrier. Rows of a topology are up-closed and closed
/// under intersection, so on a finite carrier each row is `↑G_c` and the
/// search runs over generator tuples.
pub fn enumerate_topologies(carrier: &Arc<Carrier>, budget: u64) -> Result<Vec<CoverAssignment>> {
    let objects: Vec<Obj> = carrier.objects().collect();
    let mut choices: Vec<Vec<SieveId>> = Vec::new();
    let mut total: u64 = 1;
    for &c in &objects {
        let gens: Vec<SieveId> = carrier.sieve_ids(c).collect();
        total = total.saturating_mul(gens.len() as u64);
        choices.push(gens);
    }
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "topology candidates".into(),
            budget,
        });
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; objects.len()];
    loop {
        let gens: Vec<SieveId> = pick
            .iter()
            .zip(&choices)
            .map(|(&i, ch)| ch[i])
            .collect();
        let a = CoverAssignment::principal(carrier, &gens);
        if check_topology(&a).is_pass() {
            out.push(a);
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(out);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}
