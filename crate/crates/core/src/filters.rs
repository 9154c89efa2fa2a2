//! Filters on a carrier: axiom checks, bases and subbases, saturation, the
//! filter order, ultrafilters and product bases.
//!
//! On a finite carrier every filter is principal at each object, `F(c) = ↑G_c`,
//! with `G_d ⊆ h*(G_c)` for every `h : d -> c`. Saturation, enumeration and the
//! ultrafilter search all work on these generator tuples.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::carrier::{Carrier, SieveId};
use crate::category::{Mor, Obj};
use crate::coverage::CoverAssignment;
use crate::diagnostics::{Axiom, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifiedAs {
    Filter,
    Basis,
    Subbase,
    Ultrafilter,
}

/// An assignment together with the checker that accepted it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterCertificate {
    assignment: CoverAssignment,
    certified_as: CertifiedAs,
}

impl FilterCertificate {
    pub fn assignment(&self) -> &CoverAssignment {
        &self.assignment
    }

    pub fn certified_as(&self) -> CertifiedAs {
        self.certified_as
    }

    pub fn into_assignment(self) -> CoverAssignment {
        self.assignment
    }

    /// Certifies `a` as `kind`, running the matching checker.
    pub fn certify(a: CoverAssignment, kind: CertifiedAs) -> Result<Self> {
        match kind {
            CertifiedAs::Filter => check_filter(&a).into_result(Error::NotAFilter)?,
            CertifiedAs::Basis => check_basis(&a, false).into_result(Error::NotABasis)?,
            CertifiedAs::Subbase => check_subbase(&a).into_result(Error::NotASubbase)?,
            CertifiedAs::Ultrafilter => {
                check_filter(&a).into_result(Error::NotAFilter)?;
                is_ultrafilter(&a)?.into_result(Error::NotAFilter)?;
            }
        }
        Ok(FilterCertificate {
            assignment: a,
            certified_as: kind,
        })
    }

    fn trusted(assignment: CoverAssignment, certified_as: CertifiedAs) -> Self {
        FilterCertificate {
            assignment,
            certified_as,
        }
    }
}

/// Filter axioms, checked in the order: empty sieve, nonempty tables,
/// upward closure, intersections, pullbacks.
pub fn check_filter(a: &CoverAssignment) -> Verdict {
    let car = a.carrier();
    let cat = car.cat();
    for c in car.objects() {
        if a.contains(c, car.empty(c)) {
            return Verdict::Fail(a.witness(Axiom::EmptySieve, &[c], &[(c, car.empty(c))]));
        }
    }
    for c in car.objects() {
        if a.len_at(c) == 0 {
            return Verdict::Fail(a.witness(Axiom::NonemptyTable, &[c], &[]));
        }
    }
    for c in car.objects() {
        for s in a.at(c) {
            for r in car.sieve_ids(c) {
                if !a.contains(c, r) && car.is_subset(c, s, r) {
                    return Verdict::Fail(a.witness(Axiom::UpwardClosure, &[c], &[(c, s), (c, r)]));
                }
            }
        }
    }
    for c in car.objects() {
        for s in a.at(c) {
            for r in a.at(c).filter(|&r| r > s) {
                if !a.contains(c, car.intersect(c, s, r)) {
                    return Verdict::Fail(a.witness(Axiom::Intersection, &[c], &[(c, s), (c, r)]));
                }
            }
        }
    }
    for c in car.objects() {
        for s in a.at(c) {
            for h in cat.hom_into(c).iter() {
                let d = cat.dom(h);
                let p = car.pullback(h, s);
                if !a.contains(d, p) {
                    return Verdict::Fail(
                        a.witness(Axiom::PullbackStability, &[c, d], &[(c, s), (d, p)])
                            .morphisms([cat.mor_name(h)]),
                    );
                }
            }
        }
    }
    Verdict::Pass
}

/// Passes when the intersection of each table is nonempty. An empty table
/// has the maximal sieve as its empty intersection and passes.
pub fn check_subbase(a: &CoverAssignment) -> Verdict {
    let car = a.carrier();
    for c in car.objects() {
        if a.meet_at(c) == Some(car.empty(c)) {
            let all: Vec<(Obj, SieveId)> = a.at(c).map(|s| (c, s)).collect();
            return Verdict::Fail(a.witness(Axiom::SubbaseIntersection, &[c], &all));
        }
    }
    Verdict::Pass
}

/// Basis axioms. The relaxed pullback axiom asks that `h*(S)` contain a basis
/// sieve; `strict` asks that it be one.
pub fn check_basis(a: &CoverAssignment, strict: bool) -> Verdict {
    let car = a.carrier();
    let cat = car.cat();
    let contains_member = |c: Obj, s: SieveId| a.at(c).any(|t| car.is_subset(c, t, s));
    for c in car.objects() {
        if a.len_at(c) == 0 {
            return Verdict::Fail(a.witness(Axiom::BasisNonempty, &[c], &[]));
        }
        if a.contains(c, car.empty(c)) {
            return Verdict::Fail(a.witness(Axiom::BasisEmptySieve, &[c], &[(c, car.empty(c))]));
        }
    }
    for c in car.objects() {
        for s in a.at(c) {
            for r in a.at(c).filter(|&r| r > s) {
                if !contains_member(c, car.intersect(c, s, r)) {
                    return Verdict::Fail(a.witness(Axiom::BasisIntersection, &[c], &[(c, s), (c, r)]));
                }
            }
        }
    }
    for c in car.objects() {
        for s in a.at(c) {
            for h in cat.hom_into(c).iter() {
                let d = cat.dom(h);
                let p = car.pullback(h, s);
                let ok = if strict {
                    a.contains(d, p)
                } else {
                    contains_member(d, p)
                };
                if !ok {
                    let axiom = if strict {
                        Axiom::BasisPullbackStrict
                    } else {
                        Axiom::BasisPullback
                    };
                    return Verdict::Fail(
                        a.witness(axiom, &[c, d], &[(c, s), (d, p)])
                            .morphisms([cat.mor_name(h)]),
                    );
                }
            }
        }
    }
    Verdict::Pass
}

/// All sieves containing a basis member.
pub fn filter_from_basis(b: &CoverAssignment) -> Result<FilterCertificate> {
    check_basis(b, false).into_result(Error::NotABasis)?;
    let car = b.carrier();
    let mut f = CoverAssignment::empty(car);
    for c in car.objects() {
        for s in car.sieve_ids(c) {
            if b.at(c).any(|t| car.is_subset(c, t, s)) {
                f.insert(c, s);
            }
        }
    }
    Ok(FilterCertificate::trusted(f, CertifiedAs::Filter))
}

/// One step of a saturation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    /// `F2` for an intersection at one object, `F3` for a pullback.
    pub rule: String,
    pub object: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<String>,
    /// The generator at `object` after the step.
    pub result: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Saturation {
    Proper(FilterCertificate),
    /// The closure reached the empty sieve; the steps lead to it.
    Improper(Vec<DerivationStep>),
}

impl Saturation {
    pub fn is_proper(&self) -> bool {
        matches!(self, Saturation::Proper(_))
    }

    pub fn proper(self) -> Option<FilterCertificate> {
        match self {
            Saturation::Proper(f) => Some(f),
            Saturation::Improper(_) => None,
        }
    }
}

/// Least filter containing `a`, or the derivation of the empty sieve.
pub fn saturate_subbase(a: &CoverAssignment) -> Saturation {
    let car = a.carrier();
    let mut steps: Vec<DerivationStep> = Vec::new();
    let mut last_step: Vec<Option<usize>> = vec![None; car.cat().object_count()];
    let mut parent: Vec<Vec<usize>> = Vec::new();
    let mut gens = Vec::new();
    for c in car.objects() {
        let g = a.meet_at(c).unwrap_or(car.maximal(c));
        if a.len_at(c) > 1 {
            last_step[c.0] = Some(steps.len());
            steps.push(DerivationStep {
                rule: "F2".into(),
                object: car.object_name(c).to_string(),
                morphism: None,
                result: car.labels(c, g),
            });
            parent.push(Vec::new());
        }
        gens.push(g);
    }
    let mut failed = car.objects().find(|&c| gens[c.0] == car.empty(c));
    if failed.is_none() {
        failed = propagate(car, &mut gens, |d, h, c, g| {
            let mut deps = Vec::new();
            deps.extend(last_step[d.0]);
            deps.extend(last_step[c.0]);
            last_step[d.0] = Some(steps.len());
            steps.push(DerivationStep {
                rule: "F3".into(),
                object: car.object_name(d).to_string(),
                morphism: Some(car.cat().mor_name(h).to_string()),
                result: car.labels(d, g),
            });
            parent.push(deps);
        });
    }
    match failed {
        None => Saturation::Proper(FilterCertificate::trusted(
            CoverAssignment::principal(car, &gens),
            CertifiedAs::Filter,
        )),
        Some(c) => {
            let mut keep = vec![false; steps.len()];
            let mut work: Vec<usize> = last_step[c.0].into_iter().collect();
            while let Some(i) = work.pop() {
                if !keep[i] {
                    keep[i] = true;
                    work.extend(parent[i].iter().copied());
                }
            }
            Saturation::Improper(
                steps
                    .into_iter()
                    .zip(keep)
                    .filter_map(|(s, k)| k.then_some(s))
                    .collect(),
            )
        }
    }
}

/// Shrinks generators until `G_d ⊆ h*(G_c)` for all `h : d -> c`. Returns the
/// first object whose generator becomes empty.
fn propagate(
    car: &Carrier,
    gens: &mut [SieveId],
    mut on_change: impl FnMut(Obj, Mor, Obj, SieveId),
) -> Option<Obj> {
    let cat = car.cat();
    let mut queue: Vec<Obj> = car.objects().collect();
    let mut queued = vec![true; gens.len()];
    queue.reverse();
    while let Some(c) = queue.pop() {
        queued[c.0] = false;
        for h in cat.hom_into(c).iter() {
            let d = cat.dom(h);
            let p = car.pullback(h, gens[c.0]);
            let next = car.intersect(d, gens[d.0], p);
            if next != gens[d.0] {
                gens[d.0] = next;
                on_change(d, h, c, next);
                if next == car.empty(d) {
                    return Some(d);
                }
                if !queued[d.0] {
                    queued[d.0] = true;
                    queue.insert(0, d);
                }
            }
        }
    }
    None
}

/// Saturation of a generator tuple; `None` when improper.
fn close_generators(car: &Carrier, mut gens: Vec<SieveId>) -> Option<Vec<SieveId>> {
    if car.objects().any(|c| gens[c.0] == car.empty(c)) {
        return None;
    }
    match propagate(car, &mut gens, |_, _, _, _| {}) {
        None => Some(gens),
        Some(_) => None,
    }
}

fn generators_of(f: &CoverAssignment) -> Result<Vec<SieveId>> {
    check_filter(f).into_result(Error::NotAFilter)?;
    Ok(f.generators().expect("filters are principal"))
}

/// Pointwise intersection of a family of filters.
pub fn meet_filters(family: &[CoverAssignment]) -> Result<FilterCertificate> {
    let (first, rest) = family.split_first().ok_or(Error::EmptyFamily)?;
    check_filter(first).into_result(Error::NotAFilter)?;
    let mut out = first.clone();
    for f in rest {
        check_filter(f).into_result(Error::NotAFilter)?;
        out = out.intersection(f)?;
    }
    Ok(FilterCertificate::trusted(out, CertifiedAs::Filter))
}

/// `f2` is finer than `f1`.
pub fn is_finer(f1: &CoverAssignment, f2: &CoverAssignment) -> Result<bool> {
    f1.is_subset(f2)
}

/// Passes when every proper one-sieve extension collapses to the empty sieve.
pub fn is_ultrafilter(f: &CoverAssignment) -> Result<Verdict> {
    let gens = generators_of(f)?;
    let car = f.carrier();
    for c in car.objects() {
        for s in car.sieve_ids(c) {
            if f.contains(c, s) {
                continue;
            }
            let mut g = gens.clone();
            g[c.0] = car.intersect(c, g[c.0], s);
            if close_generators(car, g).is_some() {
                return Ok(Verdict::Fail(f.witness(Axiom::ProperExtension, &[c], &[(c, s)])));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Greedy extension: walks `(object, sieve)` pairs in canonical order and
/// keeps every addition that stays proper.
pub fn extend_to_ultrafilter(f: &CoverAssignment) -> Result<FilterCertificate> {
    let car = f.carrier();
    let mut gens = generators_of(f)?;
    loop {
        let mut changed = false;
        for c in car.objects() {
            for s in car.sieve_ids(c) {
                if car.is_subset(c, gens[c.0], s) {
                    continue;
                }
                let mut g = gens.clone();
                g[c.0] = car.intersect(c, g[c.0], s);
                if let Some(g) = close_generators(car, g) {
                    gens = g;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(FilterCertificate::trusted(
        CoverAssignment::principal(car, &gens),
        CertifiedAs::Ultrafilter,
    ))
}

/// Every ultrafilter, ordered by generator tuple.
///
/// Depth-first over saturated generator states starting from the trivial
/// filter; states with no proper extension are the ultrafilters.
pub fn enumerate_ultrafilters(carrier: &Arc<Carrier>, budget: u64) -> Result<Vec<FilterCertificate>> {
    let start: Vec<SieveId> = carrier.objects().map(|c| carrier.maximal(c)).collect();
    let mut seen: HashSet<Vec<SieveId>> = HashSet::new();
    let mut leaves: Vec<Vec<SieveId>> = Vec::new();
    let mut stack = vec![start.clone()];
    seen.insert(start);
    while let Some(gens) = stack.pop() {
        let mut leaf = true;
        for c in carrier.objects() {
            for s in carrier.sieve_ids(c) {
                if carrier.is_subset(c, gens[c.0], s) {
                    continue;
                }
                let mut g = gens.clone();
                g[c.0] = carrier.intersect(c, g[c.0], s);
                if let Some(g) = close_generators(carrier, g) {
                    leaf = false;
                    if seen.insert(g.clone()) {
                        if seen.len() as u64 > budget {
                            return Err(Error::BudgetExceeded {
                                what: "ultrafilter search states".into(),
                                budget,
                            });
                        }
                        stack.push(g);
                    }
                }
            }
        }
        if leaf {
            leaves.push(gens);
        }
    }
    leaves.sort();
    Ok(leaves
        .into_iter()
        .map(|g| FilterCertificate::trusted(CoverAssignment::principal(carrier, &g), CertifiedAs::Ultrafilter))
        .collect())
}

/// Every filter, ordered by generator tuple. Backtracks over generator
/// choices subject to `G_d ⊆ h*(G_c)`.
pub fn enumerate_filters(carrier: &Arc<Carrier>, budget: u64) -> Result<Vec<FilterCertificate>> {
    let n = carrier.cat().object_count();
    let mut out = Vec::new();
    let mut gens: Vec<SieveId> = Vec::with_capacity(n);
    let mut nodes: u64 = 0;
    search(carrier, &mut gens, &mut out, &mut nodes, budget)?;
    Ok(out
        .into_iter()
        .map(|g| FilterCertificate::trusted(CoverAssignment::principal(carrier, &g), CertifiedAs::Filter))
        .collect())
}

fn search(
    car: &Carrier,
    gens: &mut Vec<SieveId>,
    out: &mut Vec<Vec<SieveId>>,
    nodes: &mut u64,
    budget: u64,
) -> Result<()> {
    let cat = car.cat();
    let i = gens.len();
    if i == cat.object_count() {
        out.push(gens.clone());
        return Ok(());
    }
    let c = Obj(i);
    for s in car.sieve_ids(c).skip(1) {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExceeded {
                what: "filter search nodes".into(),
                budget,
            });
        }
        // constraints between c and every already-decided object, both ways
        let ok = cat.hom_into(c).iter().all(|h| {
            let d = cat.dom(h);
            let g_d = if d == c { s } else if d.0 < i { gens[d.0] } else { return true };
            car.is_subset(d, g_d, car.pullback(h, s))
        }) && car.objects().take(i).all(|e| {
            cat.hom(c, e)
                .all(|h| car.is_subset(c, s, car.pullback(h, gens[e.0])))
        });
        if ok {
            gens.push(s);
            search(car, gens, out, nodes, budget)?;
            gens.pop();
        }
    }
    Ok(())
}

/// Product basis together with the filter it generates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductBasis {
    pub apex: Obj,
    pub basis: FilterCertificate,
    pub filter: FilterCertificate,
    /// The generated filter equals the one generated by the pulled-back
    /// families `pr_i*(S_i)`, taken individually.
    pub corollary_holds: bool,
}

/// Locale product basis: the apex is the meet `k` of the targets and the
/// projections are the morphisms `k <= k_i`. At `k` the basis consists of all
/// intersections `⋂ (S_i ∩ ↓k)` with `S_i ∈ F_i(k_i)`.
pub fn product_filter_basis(
    carrier: &Arc<Carrier>,
    targets: &[Obj],
    filters: &[CoverAssignment],
) -> Result<ProductBasis> {
    let l = carrier.require_lattice()?;
    if targets.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let k = l.meet_all(targets.iter().map(|t| crate::order::Elem(t.0)));
    let apex = Obj(k.0);
    let projections: Vec<Mor> = targets
        .iter()
        .map(|&t| carrier.cat().hom(apex, t).next().expect("meet is below every target"))
        .collect();
    product_filter_basis_cone(carrier, apex, &projections, filters)
}

/// Product basis over a declared cone `pr_i : apex -> C_i`. Objects with no
/// morphism into the apex get the maximal sieve only. Outside lattice
/// carriers this reading is experimental.
pub fn product_filter_basis_cone(
    carrier: &Arc<Carrier>,
    apex: Obj,
    projections: &[Mor],
    filters: &[CoverAssignment],
) -> Result<ProductBasis> {
    if filters.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if filters.len() != projections.len() {
        return Err(Error::PreconditionUnmet(format!(
            "{} projections for {} filters",
            projections.len(),
            filters.len()
        )));
    }
    let cat = carrier.cat();
    for (&pr, f) in projections.iter().zip(filters) {
        if !Arc::ptr_eq(f.carrier(), carrier) && **f.carrier() != **carrier {
            return Err(Error::CarrierMismatch);
        }
        if cat.dom(pr) != apex {
            return Err(Error::PreconditionUnmet(format!(
                "projection `{}` does not start at `{}`",
                cat.mor_name(pr),
                carrier.object_name(apex)
            )));
        }
        check_filter(f).into_result(Error::NotAFilter)?;
    }
    let mut at_apex: Vec<SieveId> = vec![carrier.maximal(apex)];
    let mut subbase = CoverAssignment::empty(carrier);
    for (&pr, f) in projections.iter().zip(filters) {
        let pulled: Vec<SieveId> = f.at(cat.cod(pr)).map(|s| carrier.pullback(pr, s)).collect();
        for &p in &pulled {
            subbase.insert(apex, p);
        }
        let mut next: Vec<SieveId> = Vec::new();
        for &a in &at_apex {
            for &p in &pulled {
                next.push(carrier.intersect(apex, a, p));
            }
        }
        next.sort();
        next.dedup();
        at_apex = next;
    }
    let mut basis = CoverAssignment::empty(carrier);
    for d in carrier.objects() {
        let homs: Vec<Mor> = cat.hom(d, apex).collect();
        if homs.is_empty() {
            basis.insert(d, carrier.maximal(d));
            continue;
        }
        for &b in &at_apex {
            let s = homs
                .iter()
                .map(|&h| carrier.pullback(h, b))
                .reduce(|x, y| carrier.intersect(d, x, y))
                .expect("nonempty");
            if s == carrier.empty(d) {
                return Err(Error::EmptyMeetSieve);
            }
            basis.insert(d, s);
        }
    }
    let filter = filter_from_basis(&basis)?;
    let corollary_holds = match saturate_subbase(&subbase) {
        Saturation::Proper(g) => g.assignment == filter.assignment,
        Saturation::Improper(_) => false,
    };
    Ok(ProductBasis {
        apex,
        basis: FilterCertificate::trusted(basis, CertifiedAs::Basis),
        filter,
        corollary_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::DEFAULT_MAX_SIEVES;
    use crate::category::{CategorySpec, FiniteCategory};
    use crate::coverage::{check_topology, standard_topology, StandardKind};
    use crate::fixtures;

    fn locale(l: crate::FiniteLattice) -> Arc<Carrier> {
        Carrier::locale(l, DEFAULT_MAX_SIEVES).unwrap()
    }

    fn twopt() -> Arc<Carrier> {
        Carrier::category(fixtures::twopt(), DEFAULT_MAX_SIEVES).unwrap()
    }

    fn point_category() -> Arc<Carrier> {
        let cat = FiniteCategory::build(&CategorySpec {
            objects: vec!["*".into()],
            ..Default::default()
        })
        .unwrap();
        Carrier::category(cat, DEFAULT_MAX_SIEVES).unwrap()
    }

    fn rows(a: &CoverAssignment, obj: &str) -> Vec<Vec<String>> {
        let c = a.carrier().object(obj).unwrap();
        a.at(c).map(|s| a.labels(c, s)).collect()
    }

    /// `F(2) = {↓1, ↓2}`, `F(1) = {↓1}`, `F(0) = {↓0}`.
    fn chain_filter(car: &Arc<Carrier>) -> CoverAssignment {
        CoverAssignment::from_labels(
            car,
            &[
                ("2", vec![vec!["0", "1"], vec!["0", "1", "2"]]),
                ("1", vec![vec!["0", "1"]]),
                ("0", vec![vec!["0"]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn filter_examples() {
        let d12 = locale(fixtures::d12());
        assert!(check_filter(&CoverAssignment::trivial(&d12)).is_pass());
        let car = locale(fixtures::chain3());
        let f = chain_filter(&car);
        assert!(check_filter(&f).is_pass());
        let mut g = f.clone();
        g.remove(Obj(0), 1);
        let w = check_filter(&g).witness().cloned().unwrap();
        assert_eq!(w.axiom, Axiom::NonemptyTable);
        assert!(g.replays(&w));
    }

    #[test]
    fn filter_witnesses_replay() {
        let car = locale(fixtures::chain3());
        let base = chain_filter(&car);
        let two = Obj(2);
        let mut missing_top = base.clone();
        missing_top.remove(two, car.maximal(two));
        let mut with_empty = base.clone();
        with_empty.insert(two, car.empty(two));
        let mut not_stable = CoverAssignment::trivial(&car);
        not_stable.insert(two, car.parse_sieve(two, &["0"]).unwrap());
        not_stable.insert(two, car.parse_sieve(two, &["0", "1"]).unwrap());
        for (a, axiom) in [
            (missing_top, Axiom::UpwardClosure),
            (with_empty, Axiom::EmptySieve),
            (not_stable, Axiom::PullbackStability),
        ] {
            let w = check_filter(&a).witness().cloned().unwrap();
            assert_eq!(w.axiom, axiom);
            assert!(a.replays(&w));
        }
        let c = twopt();
        let cc = c.object("C").unwrap();
        let mut both = CoverAssignment::trivial(&c);
        both.insert(cc, c.parse_sieve(cc, &["x", "a"]).unwrap());
        both.insert(cc, c.parse_sieve(cc, &["y", "b"]).unwrap());
        both.insert(cc, c.parse_sieve(cc, &["x", "y", "a", "b"]).unwrap());
        let w = check_filter(&both).witness().cloned().unwrap();
        assert_eq!(w.axiom, Axiom::Intersection);
        assert!(both.replays(&w));
    }

    #[test]
    fn subbase_examples() {
        let car = twopt();
        let c = car.object("C").unwrap();
        let sx = car.parse_sieve(c, &["x", "a"]).unwrap();
        let sy = car.parse_sieve(c, &["y", "b"]).unwrap();
        let mut a = CoverAssignment::empty(&car);
        a.insert(c, sx);
        assert!(check_subbase(&a).is_pass());
        a.insert(c, sy);
        assert_eq!(
            check_subbase(&a).witness().unwrap().axiom,
            Axiom::SubbaseIntersection
        );
        for f in enumerate_filters(&car, 1 << 20).unwrap() {
            assert!(check_subbase(f.assignment()).is_pass());
        }
    }

    #[test]
    fn basis_examples() {
        let car = locale(fixtures::chain3());
        assert!(check_basis(&CoverAssignment::trivial(&car), false).is_pass());
        let b = CoverAssignment::from_labels(
            &car,
            &[
                ("2", vec![vec!["0", "1"]]),
                ("1", vec![vec!["0", "1"]]),
                ("0", vec![vec!["0"]]),
            ],
        )
        .unwrap();
        assert!(check_basis(&b, false).is_pass());
        assert!(check_basis(&b, true).is_pass());
        let f = filter_from_basis(&b).unwrap();
        assert_eq!(rows(f.assignment(), "2"), [vec!["0", "1"], vec!["0", "1", "2"]]);
        assert!(check_filter(f.assignment()).is_pass());
        assert_eq!(
            filter_from_basis(&CoverAssignment::trivial(&car)).unwrap().into_assignment(),
            CoverAssignment::trivial(&car)
        );
        // B1 needs a member inside ↓1 ∩ {0} = {0}; B2 then needs {0} at 1 too
        let mut b1 = b.clone();
        b1.insert(Obj(2), car.parse_sieve(Obj(2), &["0"]).unwrap());
        assert_eq!(
            check_basis(&b1, false).witness().unwrap().axiom,
            Axiom::BasisPullback
        );
        b1.insert(Obj(1), car.parse_sieve(Obj(1), &["0"]).unwrap());
        assert!(check_basis(&b1, false).is_pass());
        let mut broken = CoverAssignment::trivial(&car);
        broken.insert(Obj(2), car.parse_sieve(Obj(2), &["0", "1"]).unwrap());
        broken.insert(Obj(2), car.parse_sieve(Obj(2), &["0"]).unwrap());
        broken.remove(Obj(2), car.maximal(Obj(2)));
        // relaxed: pullback of {0} to 1 must contain a member of {↓1}; it does not
        let w = check_basis(&broken, false).witness().cloned().unwrap();
        assert_eq!(w.axiom, Axiom::BasisPullback);
        assert!(matches!(filter_from_basis(&broken), Err(Error::NotABasis(_))));
    }

    #[test]
    fn strict_basis_is_stronger() {
        let car = locale(fixtures::chain3());
        let b = CoverAssignment::from_labels(
            &car,
            &[
                ("2", vec![vec!["0", "1", "2"]]),
                ("1", vec![vec!["0"]]),
                ("0", vec![vec!["0"]]),
            ],
        )
        .unwrap();
        assert!(check_basis(&b, false).is_pass());
        assert_eq!(
            check_basis(&b, true).witness().unwrap().axiom,
            Axiom::BasisPullbackStrict
        );
    }

    #[test]
    fn twopt_basis_at_x_is_not_a_basis() {
        // the pullback of ⟨x⟩ along y is empty, so no filter contains ⟨x⟩
        let car = twopt();
        let c = car.object("C").unwrap();
        let mut b = CoverAssignment::trivial(&car);
        b.remove(c, car.maximal(c));
        b.insert(c, car.parse_sieve(c, &["x", "a"]).unwrap());
        let w = check_basis(&b, false).witness().cloned().unwrap();
        assert_eq!(w.axiom, Axiom::BasisPullback);
        assert_eq!(w.morphisms, ["y"]);
        assert!(matches!(
            saturate_subbase(&b),
            Saturation::Improper(_)
        ));
    }

    #[test]
    fn saturation_examples() {
        let car = locale(fixtures::chain3());
        let triv = CoverAssignment::trivial(&car);
        assert_eq!(saturate_subbase(&triv).proper().unwrap().into_assignment(), triv);
        let mut s = CoverAssignment::empty(&car);
        s.insert(Obj(2), car.parse_sieve(Obj(2), &["0", "1"]).unwrap());
        let f = saturate_subbase(&s).proper().unwrap().into_assignment();
        assert_eq!(f, chain_filter(&car));

        let t = twopt();
        let c = t.object("C").unwrap();
        let mut s = CoverAssignment::empty(&t);
        s.insert(c, t.parse_sieve(c, &["x", "a"]).unwrap());
        s.insert(c, t.parse_sieve(c, &["y", "b"]).unwrap());
        match saturate_subbase(&s) {
            Saturation::Improper(trace) => {
                assert_eq!(trace.len(), 1);
                assert_eq!(trace[0].rule, "F2");
                assert!(trace[0].result.is_empty());
            }
            other => panic!("{other:?}"),
        }
        let mut s = CoverAssignment::empty(&t);
        s.insert(c, t.parse_sieve(c, &["x", "a"]).unwrap());
        match saturate_subbase(&s) {
            Saturation::Improper(trace) => {
                let last = trace.last().unwrap();
                assert_eq!((last.rule.as_str(), last.morphism.as_deref()), ("F3", Some("y")));
                assert!(last.result.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn meets_and_order() {
        let car = locale(fixtures::chain3());
        let f = chain_filter(&car);
        let triv = CoverAssignment::trivial(&car);
        assert_eq!(meet_filters(&[f.clone(), f.clone()]).unwrap().into_assignment(), f);
        assert_eq!(meet_filters(&[f.clone(), triv.clone()]).unwrap().into_assignment(), triv);
        assert_eq!(meet_filters(&[]), Err(Error::EmptyFamily));
        assert!(is_finer(&triv, &f).unwrap());
        assert!(is_finer(&f, &f).unwrap());
        assert!(!is_finer(&f, &triv).unwrap());
        assert_eq!(
            meet_filters(&[f.clone(), CoverAssignment::trivial(&twopt())]),
            Err(Error::CarrierMismatch)
        );
    }

    #[test]
    fn ultrafilter_examples() {
        let car = locale(fixtures::chain3());
        let triv = CoverAssignment::trivial(&car);
        let w = is_ultrafilter(&triv).unwrap();
        assert_eq!(w.witness().unwrap().axiom, Axiom::ProperExtension);
        let u = extend_to_ultrafilter(&triv).unwrap();
        for c in car.objects() {
            assert_eq!(u.assignment().generators().unwrap()[c.0], car.parse_sieve(c, &["0"]).unwrap());
        }
        assert!(is_ultrafilter(u.assignment()).unwrap().is_pass());
        assert_eq!(extend_to_ultrafilter(u.assignment()).unwrap(), u);

        let p = point_category();
        let only = enumerate_filters(&p, 100).unwrap();
        assert_eq!(only.len(), 1);
        assert!(is_ultrafilter(only[0].assignment()).unwrap().is_pass());
        assert_eq!(enumerate_ultrafilters(&p, 100).unwrap().len(), 1);
    }

    #[test]
    fn twopt_filters_and_ultrafilters() {
        let car = twopt();
        let filters = enumerate_filters(&car, 1 << 20).unwrap();
        assert_eq!(filters.len(), 2);
        let ultra = enumerate_ultrafilters(&car, 1 << 20).unwrap();
        assert_eq!(ultra.len(), 1);
        let c = car.object("C").unwrap();
        assert_eq!(
            rows(ultra[0].assignment(), "C"),
            [vec!["x", "y", "a", "b"], vec!["id_C", "x", "y", "a", "b"]]
        );
        assert_eq!(ultra[0].assignment().len_at(c), 2);
        assert!(is_ultrafilter(ultra[0].assignment()).unwrap().is_pass());
    }

    #[test]
    fn ultrafilters_are_maximal_filters_on_chain() {
        let car = locale(fixtures::chain3());
        let filters = enumerate_filters(&car, 1 << 20).unwrap();
        let maximal: Vec<&CoverAssignment> = filters
            .iter()
            .map(|f| f.assignment())
            .filter(|f| {
                filters
                    .iter()
                    .all(|g| !is_finer(f, g.assignment()).unwrap() || g.assignment() == *f)
            })
            .collect();
        let ultra = enumerate_ultrafilters(&car, 1 << 20).unwrap();
        let ultra: Vec<&CoverAssignment> = ultra.iter().map(|u| u.assignment()).collect();
        assert_eq!(maximal, ultra);
    }

    #[test]
    fn product_examples() {
        let car = locale(fixtures::d12());
        let four = car.object("4").unwrap();
        let six = car.object("6").unwrap();
        let triv = CoverAssignment::trivial(&car);
        let p = product_filter_basis(&car, &[four, six], &[triv.clone(), triv.clone()]).unwrap();
        assert_eq!(car.object_name(p.apex), "2");
        assert_eq!(rows(p.basis.assignment(), "2"), [vec!["1", "2"]]);
        assert!(p.corollary_holds);
        assert!(check_basis(p.basis.assignment(), false).is_pass());

        let two = car.object("2").unwrap();
        let three = car.object("3").unwrap();
        let mut f4 = CoverAssignment::empty(&car);
        f4.insert(four, car.parse_sieve(four, &["1", "2"]).unwrap());
        let f4 = saturate_subbase(&f4).proper().unwrap().into_assignment();
        let mut f6 = CoverAssignment::empty(&car);
        f6.insert(six, car.parse_sieve(six, &["1", "3"]).unwrap());
        let f6 = saturate_subbase(&f6).proper().unwrap().into_assignment();
        let p = product_filter_basis(&car, &[four, six], &[f4, f6]).unwrap();
        assert_eq!(p.apex, two);
        let b = p.basis.assignment();
        assert!(b.at(two).any(|s| car.labels(two, s) == ["1"]));
        assert_eq!(b.generators().unwrap()[two.0], car.parse_sieve(two, &["1"]).unwrap());
        assert!(p.corollary_holds);
        let _ = three;

        let dense = standard_topology(StandardKind::Atomic, &car).unwrap();
        let unary = product_filter_basis(&car, &[six], std::slice::from_ref(&dense)).unwrap();
        assert_eq!(rows(unary.basis.assignment(), "6"), rows(&dense, "6"));
        assert!(matches!(
            product_filter_basis(&twopt(), &[Obj(0)], &[CoverAssignment::trivial(&twopt())]),
            Err(Error::LocaleOnly)
        ));
    }

    #[test]
    fn some_filters_are_not_topologies() {
        // F(2) = ↑{0,1}, F(1) = F(0) = ↑{0}: every restriction of {0} along
        // a member of {0,1} covers, yet {0} is not in F(2)
        let car = locale(fixtures::chain3());
        let f = CoverAssignment::from_labels(
            &car,
            &[
                ("2", vec![vec!["0", "1"], vec!["0", "1", "2"]]),
                ("1", vec![vec!["0"], vec!["0", "1"]]),
                ("0", vec![vec!["0"]]),
            ],
        )
        .unwrap();
        assert!(check_filter(&f).is_pass());
        let w = check_topology(&f).witness().cloned().unwrap();
        assert_eq!(w.axiom, Axiom::Transitivity);
        assert_eq!(w.sieves, [vec!["0", "1"], vec!["0"]]);
        assert!(f.replays(&w));
        let tw = twopt();
        for f in enumerate_filters(&tw, 1 << 20).unwrap() {
            assert!(check_topology(f.assignment()).is_pass());
        }
    }
}
