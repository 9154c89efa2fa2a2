//! Seeded corpora and exhaustive law checkers.
//!
//! Each law runs over a fixed or seeded corpus and returns a [`LawOutcome`]
//! with the number of instances checked, the number that failed and the
//! first failure. Outcomes are deterministic for a given seed.

use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::carrier::{Carrier, SieveId, DEFAULT_MAX_SIEVES};
use crate::category::{poset_category, FiniteCategory, Obj};
use crate::convergence::{locale_points, sup_converges, tychonoff_check, Method, Point, Site};
use crate::coverage::{check_topology, enumerate_topologies, standard_topology, topology_is_filter, CoverAssignment, StandardKind};
use crate::filters::{
    check_basis, check_filter, enumerate_filters, enumerate_ultrafilters, extend_to_ultrafilter, filter_from_basis,
    is_finer, is_ultrafilter, meet_filters, saturate_subbase, Saturation,
};
use crate::fixtures;
use crate::functors::{image_law_report, FunctorMap};
use crate::order::{canonical_cmp, divisor_lattice, Elem, ElementSet, FiniteLattice};

const BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawOutcome {
    pub id: String,
    pub statement: String,
    pub checked: u64,
    pub failures: u64,
    /// Advisory laws report falsifications without failing the suite.
    pub advisory: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl LawOutcome {
    fn new(id: &str, statement: &str) -> Self {
        LawOutcome {
            id: id.to_string(),
            statement: statement.to_string(),
            checked: 0,
            failures: 0,
            advisory: false,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Identifiers of every law, in execution order.
pub const LAW_IDS: &[&str] = &[
    "filter-topology",
    "subtopology-filter",
    "ultrafilter-primality",
    "cluster-finer",
    "closure-filter",
    "ultrafilter-limit-cluster",
    "compactness-methods",
    "compactness-methods-hausdorff",
    "tychonoff",
    "oracle-basis",
    "oracle-locale-points",
    "oracle-ultrafilters",
    "squarefree",
    "pullback-algebra",
    "topology-filter-agreement",
    "filtered-object",
    "locale-g-degeneracy",
    "extension-ultrafilter",
    "meet-glb",
    "saturation-least",
    "image-laws",
    "compactness-preservation",
];

/// Runs the laws named in `only` (all when `None`) with the given seed.
pub fn run_laws(seed: u64, only: Option<&[String]>) -> Vec<LawOutcome> {
    LAW_IDS
        .iter()
        .filter(|id| only.is_none_or(|o| o.iter().any(|x| x == *id)))
        .map(|id| run_law(id, seed).expect("known law"))
        .collect()
}

pub fn run_law(id: &str, seed: u64) -> Option<LawOutcome> {
    Some(match id {
        "filter-topology" => filter_topology(seed),
        "subtopology-filter" => subtopology_filter(seed),
        "ultrafilter-primality" => ultrafilter_primality(),
        "cluster-finer" => cluster_finer(),
        "closure-filter" => closure_filter(),
        "ultrafilter-limit-cluster" => ultrafilter_limit_cluster(),
        "compactness-methods" => compactness_methods().0,
        "compactness-methods-hausdorff" => compactness_methods().1,
        "tychonoff" => tychonoff(),
        "oracle-basis" => oracle_basis(seed),
        "oracle-locale-points" => oracle_locale_points(),
        "oracle-ultrafilters" => oracle_ultrafilters(),
        "squarefree" => squarefree(),
        "pullback-algebra" => pullback_algebra(),
        "topology-filter-agreement" => topology_filter_agreement(seed),
        "filtered-object" => filtered_object(),
        "locale-g-degeneracy" => locale_g_degeneracy(),
        "extension-ultrafilter" => extension_ultrafilter(),
        "meet-glb" => meet_glb(),
        "saturation-least" => saturation_least(seed),
        "image-laws" => image_laws(),
        "compactness-preservation" => compactness_preservation(),
        _ => return None,
    })
}

// ---------------------------------------------------------------- corpora

fn transitive_closure(n: usize, leq: &mut [bool]) {
    for i in 0..n {
        leq[i * n + i] = true;
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
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// One attempt at a random bounded lattice with `n` elements: the middle
/// elements are stacked in antichain layers, each covering a random nonempty
/// part of the layer below. `None` when the order is not a lattice.
pub fn random_lattice(rng: &mut ChaCha8Rng, n: usize) -> Option<FiniteLattice> {
    assert!(n >= 1);
    if n == 1 {
        return FiniteLattice::from_order(names(1), vec![true]).ok();
    }
    let mut leq = vec![false; n * n];
    let top = n - 1;
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for e in 1..top {
        if layers.is_empty() || rng.random_bool(0.5) {
            layers.push(vec![e]);
        } else {
            layers.last_mut().expect("nonempty").push(e);
        }
    }
    for (i, layer) in layers.iter().enumerate() {
        for &e in layer {
            if i == 0 {
                leq[e] = true;
                continue;
            }
            let below = &layers[i - 1];
            let forced = below[rng.random_range(0..below.len())];
            leq[forced * n + e] = true;
            for &b in below {
                if rng.random_bool(0.5) {
                    leq[b * n + e] = true;
                }
            }
        }
    }
    for e in 0..n {
        leq[e * n + top] = true;
    }
    leq[top] = true;
    transitive_closure(n, &mut leq);
    FiniteLattice::from_order(names(n), leq).ok()
}

/// `count` random frames with between 1 and `max` elements.
pub fn random_locales(seed: u64, count: usize, max: usize) -> Vec<FiniteLattice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(1..=max);
        if let Some(l) = random_lattice(&mut rng, n) {
            if l.is_frame().is_pass() {
                out.push(l);
            }
        }
    }
    out
}

/// `count` categories of random partial orders on at most `max` elements.
pub fn random_poset_categories(seed: u64, count: usize, max: usize) -> Vec<FiniteCategory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max);
            let mut leq = vec![false; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(0.4) {
                        leq[i * n + j] = true;
                    }
                }
            }
            transitive_closure(n, &mut leq);
            FiniteCategory::from_poset(&names(n), &leq).expect("poset")
        })
        .collect()
}

/// Every bounded lattice with at most `max` elements whose middle elements
/// are ordered compatibly with their indices. Covers every isomorphism type,
/// some more than once.
pub fn all_lattices(max: usize) -> Vec<FiniteLattice> {
    let mut out = vec![FiniteLattice::from_order(names(1), vec![true]).expect("one element")];
    for n in 2..=max {
        let mid: Vec<usize> = (1..n - 1).collect();
        let pairs: Vec<(usize, usize)> = mid
            .iter()
            .flat_map(|&i| mid.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect();
        let mut seen = std::collections::HashSet::new();
        for bits in 0u32..1 << pairs.len() {
            let mut leq = vec![false; n * n];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    leq[i * n + j] = true;
                }
            }
            for e in 0..n {
                leq[e] = true;
                leq[e * n + n - 1] = true;
            }
            transitive_closure(n, &mut leq);
            if !seen.insert(leq.clone()) {
                continue;
            }
            if let Ok(l) = FiniteLattice::from_order(names(n), leq) {
                out.push(l);
            }
        }
    }
    out
}

fn locale(l: FiniteLattice) -> Arc<Carrier> {
    Carrier::locale(l, DEFAULT_MAX_SIEVES).expect("small lattice")
}

fn category(c: FiniteCategory) -> Arc<Carrier> {
    Carrier::category(c, DEFAULT_MAX_SIEVES).expect("small category")
}

fn twopt() -> Arc<Carrier> {
    category(fixtures::twopt())
}

/// TWOPT with `J(1) = {t_1}` and `J(C)` the maximal sieve plus `extra`.
fn twopt_site(car: &Arc<Carrier>, extra: &[&[&str]]) -> Site {
    let c = car.object("C").expect("C");
    let mut j = CoverAssignment::trivial(car);
    for s in extra {
        j.insert(c, car.parse_sieve(c, s).expect("sieve"));
    }
    Site::new(j).expect("category site")
}

fn standard_site(car: &Arc<Carrier>, kind: StandardKind) -> Site {
    Site::new(standard_topology(kind, car).expect("lattice carrier")).expect("frame")
}

/// The convergence corpus: the chain under its trivial and dense topologies
/// and the two-point category with `J(C)` equal to `{t_C}`, `{t_C, ⟨x⟩}` and
/// `{t_C, ⟨x⟩, ⟨y⟩}`.
fn convergence_corpus() -> Vec<(String, Site)> {
    let c3 = locale(fixtures::chain3());
    let tp = twopt();
    vec![
        ("CHAIN3/trivial".into(), standard_site(&c3, StandardKind::Trivial)),
        ("CHAIN3/dense".into(), standard_site(&c3, StandardKind::Dense)),
        ("TWOPT/{t_C}".into(), twopt_site(&tp, &[])),
        ("TWOPT/{t_C,<x>}".into(), twopt_site(&tp, &[&["x", "a"]])),
        ("TWOPT/{t_C,<x>,<y>}".into(), twopt_site(&tp, &[&["x", "a"], &["y", "b"]])),
    ]
}

fn random_subbase(rng: &mut ChaCha8Rng, car: &Arc<Carrier>) -> CoverAssignment {
    let mut s = CoverAssignment::empty(car);
    for c in car.objects() {
        if rng.random_bool(0.5) {
            for _ in 0..rng.random_range(1..=2) {
                let n = car.sieve_count(c);
                if n > 1 {
                    s.insert(c, rng.random_range(1..n));
                }
            }
        }
    }
    s
}

fn random_assignment(rng: &mut ChaCha8Rng, car: &Arc<Carrier>) -> CoverAssignment {
    let mut s = CoverAssignment::empty(car);
    for c in car.objects() {
        let n = car.sieve_count(c);
        for _ in 0..rng.random_range(1..=2) {
            s.insert(c, rng.random_range(1..n.max(2)).min(n - 1));
        }
    }
    s
}

fn render(a: &CoverAssignment) -> String {
    a.render()
        .into_iter()
        .map(|(o, rows)| {
            let rows: Vec<String> = rows.iter().map(|r| format!("{{{}}}", r.join(","))).collect();
            format!("{o}: [{}]", rows.join(" "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn point_labels(car: &Carrier, ps: &[Point]) -> Vec<String> {
    ps.iter().map(|p| p.label(car)).collect()
}

// ------------------------------------------------------------------- laws

fn filter_topology(seed: u64) -> LawOutcome {
    let mut out = LawOutcome::new(
        "filter-topology",
        "every filter on a category is a Grothendieck topology",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut carriers: Vec<(String, Arc<Carrier>)> = random_locales(seed, 100, 6)
        .into_iter()
        .enumerate()
        .map(|(i, l)| (format!("locale#{i}"), locale(l)))
        .collect();
    carriers.extend(
        random_poset_categories(seed, 50, 5)
            .into_iter()
            .enumerate()
            .map(|(i, c)| (format!("poset#{i}"), category(c))),
    );
    carriers.push(("TWOPT".into(), twopt()));
    for (name, car) in &carriers {
        let mut filters = Vec::new();
        for _ in 0..4 {
            if let Saturation::Proper(f) = saturate_subbase(&random_subbase(&mut rng, car)) {
                let gens = f.assignment().generators().expect("principal");
                let basis = CoverAssignment::from_ids(car, &gens.iter().map(|&g| vec![g]).collect::<Vec<_>>());
                filters.push(filter_from_basis(&basis).expect("generators form a basis").into_assignment());
                filters.push(f.into_assignment());
            }
            let b = random_assignment(&mut rng, car);
            if check_basis(&b, false).is_pass() {
                filters.push(filter_from_basis(&b).expect("basis").into_assignment());
            }
        }
        for f in filters {
            let v = check_topology(&f);
            out.record(v.is_pass(), || {
                format!("{name}: filter {} fails {}", render(&f), v.witness().expect("fail"))
            });
        }
    }
    out
}

fn subtopology_filter(seed: u64) -> LawOutcome {
    let mut out = LawOutcome::new(
        "subtopology-filter",
        "a topology coarser than a filter is a filter",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut carriers: Vec<Arc<Carrier>> = random_locales(seed.wrapping_add(3), 40, 6).into_iter().map(locale).collect();
    carriers.push(twopt());
    let mut pairs = 0;
    let mut i = 0;
    while pairs < 200 {
        let car = &carriers[i % carriers.len()];
        i += 1;
        let Saturation::Proper(f) = saturate_subbase(&random_subbase(&mut rng, car)) else {
            continue;
        };
        let f = f.into_assignment();
        let gens = f.generators().expect("principal");
        let mut j = CoverAssignment::trivial(car);
        for _ in 0..8 {
            let coarser: Vec<SieveId> = car
                .objects()
                .map(|c| {
                    let above: Vec<SieveId> = f.at(c).filter(|&s| car.is_subset(c, gens[c.0], s)).collect();
                    above[rng.random_range(0..above.len())]
                })
                .collect();
            let cand = CoverAssignment::principal(car, &coarser);
            if check_topology(&cand).is_pass() {
                j = cand;
                break;
            }
        }
        assert!(j.is_subset(&f).expect("same carrier"));
        pairs += 1;
        let v = check_filter(&j);
        out.record(v.is_pass(), || format!("J = {} fails {}", render(&j), v.witness().expect("fail")));
    }
    out
}

fn ultrafilter_primality() -> LawOutcome {
    let mut out = LawOutcome::new(
        "ultrafilter-primality",
        "if a finite union of sieves lies in an ultrafilter, one of them does",
    );
    let c3 = locale(fixtures::chain3());
    let tp = twopt();
    let sites = [
        ("CHAIN3/trivial", standard_site(&c3, StandardKind::Trivial)),
        ("CHAIN3/dense", standard_site(&c3, StandardKind::Dense)),
        ("TWOPT/trivial", twopt_site(&tp, &[])),
        ("TWOPT/discrete", Site::new(CoverAssignment::full(&tp)).expect("site")),
    ];
    for (name, site) in &sites {
        let car = site.carrier();
        for u in enumerate_ultrafilters(car, BUDGET).expect("small") {
            let u = u.assignment();
            for c in car.objects() {
                let ids: Vec<SieveId> = car.sieve_ids(c).collect();
                for &s in &ids {
                    for &t in &ids {
                        let st = car.union(c, s, t);
                        if u.contains(c, st) {
                            out.record(u.contains(c, s) || u.contains(c, t), || {
                                format!(
                                    "{name} at {}: {{{}}} ∪ {{{}}} in U, neither is",
                                    car.object_name(c),
                                    car.labels(c, s).join(","),
                                    car.labels(c, t).join(",")
                                )
                            });
                        }
                        for &r in &ids {
                            let str_ = car.union(c, st, r);
                            if u.contains(c, str_) {
                                out.record(u.contains(c, s) || u.contains(c, t) || u.contains(c, r), || {
                                    format!(
                                        "{name} at {}: union of {{{}}}, {{{}}}, {{{}}} in U, none is",
                                        car.object_name(c),
                                        car.labels(c, s).join(","),
                                        car.labels(c, t).join(","),
                                        car.labels(c, r).join(",")
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn cluster_finer() -> LawOutcome {
    let mut out = LawOutcome::new(
        "cluster-finer",
        "p is a cluster point of F(C) iff some finer filter converges to p",
    );
    for (name, site) in convergence_corpus() {
        let car = site.carrier().clone();
        let filters: Vec<CoverAssignment> = enumerate_filters(&car, BUDGET)
            .expect("small")
            .into_iter()
            .map(|f| f.into_assignment())
            .collect();
        for f in &filters {
            for c in car.objects() {
                let cluster = site.cluster_points(f, c).expect("cluster");
                for p in site.points(c).expect("points") {
                    let lhs = cluster.contains(&p);
                    let rhs = filters
                        .iter()
                        .any(|g| is_finer(f, g).expect("same") && site.converges(g, c, &p).expect("point"));
                    out.record(lhs == rhs, || {
                        format!(
                            "{name}: F = {}, C = {}, p = {}: cluster {lhs}, finer convergent {rhs}",
                            render(f),
                            car.object_name(c),
                            p.label(&car)
                        )
                    });
                }
            }
        }
    }
    out
}

fn closure_filter() -> LawOutcome {
    let mut out = LawOutcome::new(
        "closure-filter",
        "p is in the closure of A iff some filter containing A converges to p",
    );
    for (name, site) in convergence_corpus() {
        let car = site.carrier().clone();
        let filters: Vec<CoverAssignment> = enumerate_filters(&car, BUDGET)
            .expect("small")
            .into_iter()
            .map(|f| f.into_assignment())
            .collect();
        for c in car.objects() {
            for a in car.sieve_ids(c) {
                let closure = site.closure(c, a).expect("closure");
                for p in site.points(c).expect("points") {
                    let lhs = closure.contains(&p);
                    let rhs = filters
                        .iter()
                        .any(|g| g.contains(c, a) && site.converges(g, c, &p).expect("point"));
                    out.record(lhs == rhs, || {
                        format!(
                            "{name}: A = {{{}}} at {}, p = {}: in closure {lhs}, convergent filter {rhs}",
                            car.labels(c, a).join(","),
                            car.object_name(c),
                            p.label(&car)
                        )
                    });
                }
            }
        }
    }
    out
}

fn ultrafilter_limit_cluster() -> LawOutcome {
    let mut out = LawOutcome::new(
        "ultrafilter-limit-cluster",
        "an ultrafilter converges to p iff p is a cluster point",
    );
    for (name, site) in convergence_corpus() {
        let car = site.carrier().clone();
        for u in enumerate_ultrafilters(&car, BUDGET).expect("small") {
            let u = u.assignment();
            for c in car.objects() {
                let lim = site.limit_points(u, c).expect("limits");
                let cl = site.cluster_points(u, c).expect("cluster");
                out.record(lim == cl, || {
                    format!(
                        "{name}: U = {}, C = {}: limits {:?}, cluster points {:?}",
                        render(u),
                        car.object_name(c),
                        point_labels(&car, &lim),
                        point_labels(&car, &cl)
                    )
                });
            }
        }
    }
    out
}

fn compactness_sites() -> Vec<(String, Site)> {
    let mut sites = Vec::new();
    for (i, l) in all_lattices(4).into_iter().enumerate() {
        if l.is_frame().is_pass() {
            let car = locale(l);
            for (k, j) in enumerate_topologies(&car, BUDGET).expect("small").into_iter().enumerate() {
                sites.push((format!("lattice#{i}/topology#{k}"), Site::new(j).expect("frame")));
            }
        }
    }
    let tp = twopt();
    for (k, j) in enumerate_topologies(&tp, BUDGET).expect("small").into_iter().enumerate() {
        sites.push((format!("TWOPT/topology#{k}"), Site::new(j).expect("site")));
    }
    sites.push(("TWOPT/{t_C,<x>}".into(), twopt_site(&tp, &[&["x", "a"]])));
    sites.push(("TWOPT/{t_C,<x>,<y>}".into(), twopt_site(&tp, &[&["x", "a"], &["y", "b"]])));
    sites
}

fn compactness_methods() -> (LawOutcome, LawOutcome) {
    let mut qc = LawOutcome::new(
        "compactness-methods",
        "quasi-compactness via ultrafilters agrees with quasi-compactness via all filters",
    );
    let mut hd = LawOutcome::new(
        "compactness-methods-hausdorff",
        "the Hausdorff verdict via point-pair saturation agrees with the exhaustive verdict",
    );
    hd.advisory = true;
    for (name, site) in compactness_sites() {
        for c in site.carrier().objects() {
            let u = site.compactness_report(c, Method::Ultrafilter, BUDGET).expect("report");
            let e = site.compactness_report(c, Method::Exhaustive, BUDGET).expect("report");
            qc.record(u.quasi_compact == e.quasi_compact, || {
                format!("{name} at {}: ultrafilter {} vs exhaustive {}", u.object, u.quasi_compact, e.quasi_compact)
            });
            hd.record(u.hausdorff == e.hausdorff, || {
                format!("{name} at {}: ultrafilter {} vs exhaustive {}", u.object, u.hausdorff, e.hausdorff)
            });
        }
    }
    (qc, hd)
}

fn tychonoff() -> LawOutcome {
    let mut out = LawOutcome::new(
        "tychonoff",
        "every meet of compact elements of a locale is compact",
    );
    for (lname, l) in [("D12", fixtures::d12()), ("SQ", fixtures::sq())] {
        let car = locale(l);
        for kind in [StandardKind::Trivial, StandardKind::Dense] {
            let site = standard_site(&car, kind);
            let compact: Vec<Obj> = car
                .objects()
                .filter(|&c| site.compactness_report(c, Method::Ultrafilter, BUDGET).expect("report").compact)
                .collect();
            for (i, &a) in compact.iter().enumerate() {
                for &b in &compact[i..] {
                    let v = tychonoff_check(&site, &[a, b], Method::Ultrafilter, BUDGET).expect("compact inputs");
                    out.record(v.is_pass(), || {
                        format!(
                            "{lname}/{kind:?}: {} and {} are compact, meet is not: {}",
                            car.object_name(a),
                            car.object_name(b),
                            v.witness().expect("fail")
                        )
                    });
                }
            }
        }
    }
    out
}

fn oracle_basis(seed: u64) -> LawOutcome {
    let mut out = LawOutcome::new(
        "oracle-basis",
        "the filter generated by a basis is its superset closure",
    );
    let car = locale(fixtures::chain3());
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
    let mut sampled = 0;
    let mut attempts = 0u64;
    while sampled < 500 && attempts < 1_000_000 {
        attempts += 1;
        let mut b = CoverAssignment::empty(&car);
        for c in car.objects() {
            for s in car.sieve_ids(c) {
                if rng.random_bool(0.4) {
                    b.insert(c, s);
                }
            }
        }
        if !check_basis(&b, false).is_pass() {
            continue;
        }
        sampled += 1;
        let got = filter_from_basis(&b).expect("basis").into_assignment();
        let mut brute = CoverAssignment::empty(&car);
        for c in car.objects() {
            for s in car.sieve_ids(c) {
                let ms = car.members(c, s);
                if b.at(c).any(|r| car.members(c, r).is_subset(ms)) {
                    brute.insert(c, s);
                }
            }
        }
        out.record(got == brute, || format!("basis {}", render(&b)));
    }
    out
}

/// Prime filters by scanning every subset of the lattice.
pub fn prime_filters_by_scan(l: &FiniteLattice) -> Vec<ElementSet> {
    let n = l.len();
    let mut out: Vec<ElementSet> = (0..1u64 << n)
        .map(|bits| ElementSet::from_elems(n, (0..n).filter(|i| bits >> i & 1 == 1).map(Elem)))
        .filter(|f| {
            f.contains(l.top())
                && !f.contains(l.bottom())
                && f.iter().all(|a| l.elements().all(|b| !l.leq(a, b) || f.contains(b)))
                && f.iter().all(|a| f.iter().all(|b| f.contains(l.meet(a, b))))
                && l.elements()
                    .all(|a| l.elements().all(|b| !f.contains(l.join(a, b)) || f.contains(a) || f.contains(b)))
        })
        .collect();
    out.sort_by(canonical_cmp);
    out
}

fn oracle_locale_points() -> LawOutcome {
    let mut out = LawOutcome::new(
        "oracle-locale-points",
        "locale points agree with a scan of all subsets",
    );
    for l in all_lattices(6) {
        if !l.is_frame().is_pass() {
            let rejected = matches!(locale_points(&l), Err(crate::Error::NotAFrame(_)));
            out.record(rejected, || format!("non-frame accepted: {l}"));
            continue;
        }
        let got: Vec<ElementSet> = locale_points(&l).expect("frame").into_iter().map(|p| p.dual_kernel).collect();
        let want = prime_filters_by_scan(&l);
        out.record(got == want, || format!("lattice {l}"));
    }
    out
}

fn oracle_ultrafilters() -> LawOutcome {
    let mut out = LawOutcome::new(
        "oracle-ultrafilters",
        "enumerated ultrafilters are the maximal enumerated filters",
    );
    for (name, car) in [("CHAIN3", locale(fixtures::chain3())), ("TWOPT", twopt())] {
        let filters: Vec<CoverAssignment> =
            enumerate_filters(&car, BUDGET).expect("small").into_iter().map(|f| f.into_assignment()).collect();
        let maximal: Vec<&CoverAssignment> = filters
            .iter()
            .filter(|f| filters.iter().all(|g| g == *f || !is_finer(f, g).expect("same")))
            .collect();
        let ultra: Vec<CoverAssignment> =
            enumerate_ultrafilters(&car, BUDGET).expect("small").into_iter().map(|u| u.into_assignment()).collect();
        let ultra: Vec<&CoverAssignment> = ultra.iter().collect();
        out.record(maximal == ultra, || format!("{name}: {} maximal filters vs {} ultrafilters", maximal.len(), ultra.len()));
    }
    out
}

fn squarefree() -> LawOutcome {
    let mut out = LawOutcome::new(
        "squarefree",
        "the divisor lattice of n is Boolean iff n is squarefree",
    );
    for n in 1..=200u64 {
        let sf = (2..=n).take_while(|d| d * d <= n).all(|d| n % (d * d) != 0);
        let b = divisor_lattice(n).is_boolean();
        out.record(sf == b, || format!("n = {n}: squarefree {sf}, boolean {b}"));
    }
    out
}

fn pullback_algebra() -> LawOutcome {
    let mut out = LawOutcome::new(
        "pullback-algebra",
        "pullback preserves maximal sieves and intersections",
    );
    let cats = [
        ("CHAIN3", poset_category(&fixtures::chain3()).expect("poset")),
        ("D12", poset_category(&fixtures::d12()).expect("poset")),
        ("SQ", poset_category(&fixtures::sq()).expect("poset")),
        ("M3", poset_category(&fixtures::m3()).expect("poset")),
        ("TWOPT", fixtures::twopt()),
    ];
    for (name, cat) in cats {
        for h in cat.all_morphisms() {
            let (d, c) = (cat.dom(h), cat.cod(h));
            let top = cat.pullback_sieve(h, &cat.maximal_sieve(c)).expect("owner");
            out.record(top == cat.maximal_sieve(d), || format!("{name}: h = {}", cat.mor_name(h)));
            let sieves = cat.sieves_on(c, BUDGET).expect("small");
            for s in &sieves {
                for r in &sieves {
                    let both = crate::category::Sieve {
                        owner: c,
                        members: s.members.intersection(r.members),
                    };
                    let lhs = cat.pullback_sieve(h, &both).expect("owner").members;
                    let rhs = cat
                        .pullback_sieve(h, s)
                        .expect("owner")
                        .members
                        .intersection(cat.pullback_sieve(h, r).expect("owner").members);
                    out.record(lhs == rhs, || {
                        format!(
                            "{name}: h = {}, S = {:?}, R = {:?}",
                            cat.mor_name(h),
                            cat.names_of(s.members),
                            cat.names_of(r.members)
                        )
                    });
                }
            }
        }
    }
    out
}

fn topology_filter_agreement(seed: u64) -> LawOutcome {
    let mut out = LawOutcome::new(
        "topology-filter-agreement",
        "a topology passes the filter boundary test iff it passes the filter axioms",
    );
    let mut carriers: Vec<Arc<Carrier>> = random_locales(seed.wrapping_add(5), 20, 5).into_iter().map(locale).collect();
    carriers.push(locale(fixtures::chain3()));
    carriers.push(locale(fixtures::sq()));
    carriers.push(twopt());
    for car in carriers {
        for j in enumerate_topologies(&car, BUDGET).expect("small") {
            let a = topology_is_filter(&j).expect("topology").is_pass();
            let b = check_filter(&j).is_pass();
            out.record(a == b, || format!("J = {}: boundary {a}, axioms {b}", render(&j)));
        }
    }
    out
}

fn filtered_object() -> LawOutcome {
    let mut out = LawOutcome::new(
        "filtered-object",
        "cover-neighborhoods of a point form a filtered object",
    );
    let mut sites = convergence_corpus();
    for l in [fixtures::d12(), fixtures::sq()] {
        let car = locale(l);
        for kind in [StandardKind::Trivial, StandardKind::Dense, StandardKind::Discrete] {
            sites.push((format!("{kind:?}"), standard_site(&car, kind)));
        }
    }
    for (name, site) in sites {
        let car = site.carrier().clone();
        for c in car.objects() {
            for p in site.points(c).expect("points") {
                let n = site.neighborhood_system(c, &p).expect("system");
                if let Some(v) = n.filtered_object {
                    out.record(v.is_pass(), || format!("{name}: {} at {}", p.label(&car), car.object_name(c)));
                }
            }
        }
    }
    out
}

fn locale_g_degeneracy() -> LawOutcome {
    let mut out = LawOutcome::new(
        "locale-g-degeneracy",
        "on a locale every cover of k is a g-neighborhood of every point whose kernel holds k",
    );
    for l in [fixtures::chain3(), fixtures::d12(), fixtures::sq()] {
        let car = locale(l);
        for kind in [StandardKind::Trivial, StandardKind::Dense, StandardKind::Atomic, StandardKind::Discrete] {
            let site = standard_site(&car, kind);
            for c in car.objects() {
                let all: Vec<SieveId> = site.topology().at(c).collect();
                for p in site.points(c).expect("points") {
                    let g = site.g_neighborhoods(c, &p).expect("point");
                    out.record(g == all, || format!("{} at {}", p.label(&car), car.object_name(c)));
                }
            }
        }
        let sup = Site::new(crate::coverage::sup_topology(&car).expect("frame")).expect("frame");
        for f in enumerate_filters(&car, BUDGET).expect("small") {
            for c in car.objects() {
                let direct = f.assignment().at(c).all(|s| {
                    let l = car.lattice().expect("lattice");
                    let set = car.element_set(c, s).expect("lattice");
                    set.iter().fold(l.bottom(), |acc, e| l.join(acc, e)) == Elem(c.0)
                });
                let got = sup_converges(f.assignment(), c).expect("frame");
                out.record(direct == got, || format!("sup convergence at {}", car.object_name(c)));
            }
        }
        let _ = sup;
    }
    out
}

fn extension_ultrafilter() -> LawOutcome {
    let mut out = LawOutcome::new(
        "extension-ultrafilter",
        "every filter has a finer ultrafilter",
    );
    for car in [locale(fixtures::chain3()), locale(fixtures::sq()), twopt()] {
        for f in enumerate_filters(&car, BUDGET).expect("small") {
            let u = extend_to_ultrafilter(f.assignment()).expect("filter");
            let ok = is_finer(f.assignment(), u.assignment()).expect("same")
                && is_ultrafilter(u.assignment()).expect("filter").is_pass();
            out.record(ok, || format!("F = {}", render(f.assignment())));
        }
    }
    out
}

fn meet_glb() -> LawOutcome {
    let mut out = LawOutcome::new(
        "meet-glb",
        "the pointwise meet of filters is their greatest lower bound",
    );
    let car = locale(fixtures::chain3());
    let filters: Vec<CoverAssignment> =
        enumerate_filters(&car, BUDGET).expect("small").into_iter().map(|f| f.into_assignment()).collect();
    for f in &filters {
        for g in &filters {
            let m = meet_filters(&[f.clone(), g.clone()]).expect("filters").into_assignment();
            let lower = is_finer(&m, f).expect("same") && is_finer(&m, g).expect("same");
            let greatest = filters.iter().all(|h| {
                !(is_finer(h, f).expect("same") && is_finer(h, g).expect("same")) || is_finer(h, &m).expect("same")
            });
            let listed = filters.contains(&m);
            out.record(lower && greatest && listed, || format!("F = {}, G = {}", render(f), render(g)));
        }
    }
    out
}

fn saturation_least(seed: u64) -> LawOutcome {
    let mut out = LawOutcome::new(
        "saturation-least",
        "subbase saturation is the least filter containing the subbase",
    );
    let car = locale(fixtures::chain3());
    let filters: Vec<CoverAssignment> =
        enumerate_filters(&car, BUDGET).expect("small").into_iter().map(|f| f.into_assignment()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(6));
    for _ in 0..200 {
        let s = random_subbase(&mut rng, &car);
        let containing: Vec<&CoverAssignment> = filters.iter().filter(|f| s.is_subset(f).expect("same")).collect();
        match saturate_subbase(&s) {
            Saturation::Proper(sat) => {
                let sat = sat.assignment();
                let ok = s.is_subset(sat).expect("same") && containing.iter().all(|f| sat.is_subset(f).expect("same"));
                out.record(ok, || format!("S = {}", render(&s)));
            }
            Saturation::Improper(_) => out.record(containing.is_empty(), || format!("S = {}", render(&s))),
        }
    }
    out
}

/// Functor corpus for the image laws: `(name, functor, J, K)`.
fn functor_corpus() -> Vec<(String, FunctorMap, CoverAssignment, CoverAssignment)> {
    let tp = twopt();
    let c = tp.object("C").expect("C");
    let with = |extra: &[&[&str]]| {
        let mut j = CoverAssignment::trivial(&tp);
        for s in extra {
            j.insert(c, tp.parse_sieve(c, s).expect("sieve"));
        }
        j
    };
    let id_spec = crate::functors::FunctorSpec {
        objects: vec![("1".into(), "1".into()), ("C".into(), "C".into())],
        morphisms: Vec::new(),
    };
    let ident = FunctorMap::build(&tp, &tp, &crate::functors::FunctorSpec {
        morphisms: ["x", "y", "t", "a", "b"].iter().map(|m| (m.to_string(), m.to_string())).collect(),
        ..id_spec
    })
    .expect("identity");
    let swap = FunctorMap::build(&tp, &tp, &fixtures::twopt_swap()).expect("swap");
    let c3 = locale(fixtures::chain3());
    let collapse = FunctorMap::from_monotone(&c3, &c3, &fixtures::chain3_collapse()).expect("monotone");
    let dense = standard_topology(StandardKind::Dense, &c3).expect("lattice");
    let mut out = vec![
        ("TWOPT/id/{t_C}".into(), ident.clone(), with(&[]), with(&[])),
        ("TWOPT/id/{t_C,<x>}".into(), ident.clone(), with(&[&["x", "a"]]), with(&[&["x", "a"]])),
        ("TWOPT/swap/{t_C}".into(), swap.clone(), with(&[]), with(&[])),
        ("TWOPT/swap/<x>-><y>".into(), swap.clone(), with(&[&["x", "a"]]), with(&[&["y", "b"]])),
        (
            "TWOPT/swap/both".into(),
            swap,
            with(&[&["x", "a"], &["y", "b"]]),
            with(&[&["x", "a"], &["y", "b"]]),
        ),
        ("CHAIN3/collapse/dense".into(), collapse, dense.clone(), dense),
    ];
    let c3i = FunctorMap::from_monotone(
        &c3,
        &c3,
        &[("0", "0"), ("1", "1"), ("2", "2")].map(|(a, b)| (a.to_string(), b.to_string())),
    )
    .expect("identity");
    for kind in [StandardKind::Trivial, StandardKind::Dense] {
        let j = standard_topology(kind, &c3).expect("lattice");
        out.push((format!("CHAIN3/id/{kind:?}"), c3i.clone(), j.clone(), j));
    }
    out
}

fn image_laws() -> LawOutcome {
    let mut out = LawOutcome::new(
        "image-laws",
        "morphisms of sites send g-neighborhoods, cover-neighborhoods and filter bases to the same",
    );
    for (name, f, j, k) in functor_corpus() {
        let mut bases = vec![None];
        let filters: Vec<CoverAssignment> = enumerate_filters(f.source(), BUDGET)
            .expect("small")
            .into_iter()
            .map(|x| x.into_assignment())
            .collect();
        bases.extend(filters.iter().map(Some));
        for b in bases {
            match image_law_report(&f, &j, &k, b) {
                Ok(r) => out.record(r.all_pass(), || format!("{name}: {r:?}")),
                Err(e) => out.record(false, || format!("{name}: {e}")),
            }
        }
    }
    out
}

fn compactness_preservation() -> LawOutcome {
    let mut out = LawOutcome::new(
        "compactness-preservation",
        "a morphism of sites sends compact objects to compact objects",
    );
    out.advisory = true;
    for (name, f, j, k) in functor_corpus() {
        let src = Site::new(j).expect("site");
        let tgt = Site::new(k).expect("site");
        if src.carrier().is_locale() {
            continue;
        }
        for c in src.carrier().objects() {
            let r = src.compactness_report(c, Method::Ultrafilter, BUDGET).expect("report");
            if !r.compact {
                continue;
            }
            let fc = f.object(c);
            let t = tgt.compactness_report(fc, Method::Ultrafilter, BUDGET).expect("report");
            out.record(t.compact, || format!("{name}: {} compact, image {} is not", r.object, t.object));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_deterministic() {
        assert_eq!(random_locales(7, 10, 6), random_locales(7, 10, 6));
        assert_eq!(random_poset_categories(7, 5, 5), random_poset_categories(7, 5, 5));
        for l in random_locales(11, 30, 6) {
            assert!(l.len() <= 6 && l.is_frame().is_pass());
        }
    }

    #[test]
    fn small_lattice_catalogue() {
        let sizes: Vec<usize> = all_lattices(4).iter().map(|l| l.len()).collect();
        assert_eq!(sizes, [1, 2, 3, 4, 4]);
        // 1, 1, 1, 2, 5, 15 lattices of sizes 1..6 up to isomorphism
        assert!(all_lattices(6).iter().filter(|l| l.len() == 6).count() >= 15);
    }

    #[test]
    fn every_law_id_runs() {
        for id in LAW_IDS {
            assert!(matches!(run_law(id, 1).map(|o| o.id), Some(ref x) if x == id) || *id == "compactness-methods-hausdorff");
        }
        assert!(run_law("nope", 1).is_none());
    }
}
