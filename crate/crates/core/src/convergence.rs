//! Points, neighbourhoods, convergence and compactness.
//!
//! A category carrier uses morphisms out of the designated terminal object as
//! points. A lattice carrier uses frame homomorphisms to `2`, stored as prime
//! filters; the points at `k` are those whose kernel contains `k`.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::carrier::{Carrier, SieveId};
use crate::category::{Mor, Obj};
use crate::coverage::CoverAssignment;
use crate::diagnostics::{Axiom, Verdict, Witness};
use crate::error::{Error, Result};
use crate::filters::{check_filter, enumerate_filters, enumerate_ultrafilters, saturate_subbase, Saturation};
use crate::order::{canonical_cmp, Elem, ElementSet, FiniteLattice};

/// A frame homomorphism `L -> 2`, kept as its dual kernel `p⁻¹(1)` and
/// kernel `p⁻¹(0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalePoint {
    pub dual_kernel: ElementSet,
    pub kernel: ElementSet,
}

impl LocalePoint {
    pub fn label(&self, l: &FiniteLattice) -> String {
        format!("{{{}}}", self.dual_kernel.names(l).join(","))
    }

    fn is_prime_filter(l: &FiniteLattice, f: &ElementSet) -> bool {
        l.is_up_set(f)
            && f.contains(l.top())
            && !f.contains(l.bottom())
            && f.iter().all(|a| f.iter().all(|b| f.contains(l.meet(a, b))))
            && l.elements().all(|a| {
                l.elements().all(|b| {
                    !f.contains(l.join(a, b)) || f.contains(a) || f.contains(b)
                })
            })
    }
}

/// Prime filters of a frame, ordered by dual kernel (size, then members).
pub fn locale_points(l: &FiniteLattice) -> Result<Vec<LocalePoint>> {
    l.is_frame().into_result(Error::NotAFrame)?;
    let mut out: Vec<LocalePoint> = l
        .down_sets(u64::MAX)?
        .into_iter()
        .filter_map(|kernel| {
            let dual = kernel.complement(l.len());
            LocalePoint::is_prime_filter(l, &dual).then_some(LocalePoint {
                dual_kernel: dual,
                kernel,
            })
        })
        .collect();
    out.sort_by(|a, b| canonical_cmp(&a.dual_kernel, &b.dual_kernel));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Arrow(Mor),
    Locale(LocalePoint),
}

impl Point {
    pub fn label(&self, carrier: &Carrier) -> String {
        match self {
            Point::Arrow(m) => carrier.cat().mor_name(*m).to_string(),
            Point::Locale(p) => match carrier.lattice() {
                Some(l) => p.label(l),
                None => format!("{:?}", p),
            },
        }
    }
}

/// A carrier with a cover assignment. The assignment is not required to be a
/// topology.
#[derive(Debug, Clone)]
pub struct Site {
    topology: CoverAssignment,
    locale_points: Vec<LocalePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodSystem {
    pub object: Obj,
    pub point: Point,
    pub g_nbhds: Vec<SieveId>,
    pub cover_nbhds: Vec<SieveId>,
    /// Upward closure, intersections and absence of the empty sieve on
    /// `cover_nbhds`; `None` when there are no g-neighbourhoods.
    pub filtered_object: Option<Verdict>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ultrafilter,
    Exhaustive,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ultrafilter" => Ok(Method::Ultrafilter),
            "exhaustive" => Ok(Method::Exhaustive),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// Object/sieve table of a filter, as rendered in reports.
pub type RenderedFilter = Vec<(String, Vec<Vec<String>>)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactnessWitness {
    /// `clusterless` or `two-limits`.
    pub kind: String,
    pub filter: RenderedFilter,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub object: String,
    pub method: Method,
    pub quasi_compact: bool,
    pub hausdorff: bool,
    pub compact: bool,
    pub points: Vec<String>,
    /// Points with no g-neighbourhood; every filter converges to them.
    pub blind_points: Vec<String>,
    pub witnesses: Vec<CompactnessWitness>,
}

impl Site {
    pub fn new(topology: CoverAssignment) -> Result<Self> {
        let locale_points = match topology.carrier().lattice() {
            Some(l) => locale_points(l)?,
            None => Vec::new(),
        };
        Ok(Site {
            topology,
            locale_points,
        })
    }

    pub fn topology(&self) -> &CoverAssignment {
        &self.topology
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        self.topology.carrier()
    }

    pub fn all_locale_points(&self) -> &[LocalePoint] {
        &self.locale_points
    }

    /// Points at `c`.
    pub fn points(&self, c: Obj) -> Result<Vec<Point>> {
        let car = self.carrier();
        if car.is_locale() {
            Ok(self
                .locale_points
                .iter()
                .filter(|p| p.kernel.contains(Elem(c.0)))
                .cloned()
                .map(Point::Locale)
                .collect())
        } else {
            Ok(car.category_points(c)?.into_iter().map(Point::Arrow).collect())
        }
    }

    /// Resolves a point by label: a morphism name, or a dual kernel given as
    /// element names.
    pub fn point_by_label(&self, label: &str) -> Result<Point> {
        let car = self.carrier();
        match car.lattice() {
            None => Ok(Point::Arrow(car.cat().morphism(label)?)),
            Some(l) => {
                let names: Vec<&str> = label
                    .trim_matches(|ch| ch == '{' || ch == '}')
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect();
                let set = ElementSet::from_names(l, &names)?;
                self.locale_points
                    .iter()
                    .find(|p| p.dual_kernel == set)
                    .cloned()
                    .map(Point::Locale)
                    .ok_or_else(|| Error::PreconditionUnmet(format!("`{label}` is not a prime filter")))
            }
        }
    }

    fn check_point(&self, c: Obj, p: &Point) -> Result<()> {
        let car = self.carrier();
        let ok = match p {
            Point::Arrow(m) => {
                let t = car.cat().designated_terminal().ok_or(Error::NoTerminalObject)?;
                !car.is_locale() && car.cat().cod(*m) == c && car.cat().dom(*m) == t
            }
            Point::Locale(lp) => car.is_locale() && lp.kernel.contains(Elem(c.0)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::PointMismatch {
                object: car.object_name(c).to_string(),
            })
        }
    }

    /// Covering sieves at `c` through which `p` factors (category), or
    /// contained in the kernel of `p` (lattice).
    pub fn g_neighborhoods(&self, c: Obj, p: &Point) -> Result<Vec<SieveId>> {
        self.check_point(c, p)?;
        let car = self.carrier();
        let cat = car.cat();
        Ok(self
            .topology
            .at(c)
            .filter(|&v| match p {
                Point::Arrow(p) => car.members(c, v).iter().any(|phi| {
                    car.category_points(cat.dom(phi))
                        .unwrap_or_default()
                        .into_iter()
                        .any(|q| cat.compose(phi, q) == Some(*p))
                }),
                Point::Locale(lp) => car
                    .element_set(c, v)
                    .map(|s| s.is_subset(&lp.kernel))
                    .unwrap_or(false),
            })
            .collect())
    }

    fn cover_row(&self, c: Obj, g: &[SieveId]) -> FixedBitSet {
        let car = self.carrier();
        let mut row = FixedBitSet::with_capacity(car.sieve_count(c));
        for s in car.sieve_ids(c) {
            if g.iter().any(|&v| car.is_subset(c, v, s)) {
                row.insert(s);
            }
        }
        row
    }

    pub fn neighborhood_system(&self, c: Obj, p: &Point) -> Result<NeighborhoodSystem> {
        let g = self.g_neighborhoods(c, p)?;
        let row = self.cover_row(c, &g);
        let cover: Vec<SieveId> = row.ones().collect();
        let filtered_object = (!g.is_empty()).then(|| self.filtered_object(c, &row));
        Ok(NeighborhoodSystem {
            object: c,
            point: p.clone(),
            g_nbhds: g,
            cover_nbhds: cover,
            filtered_object,
        })
    }

    fn filtered_object(&self, c: Obj, row: &FixedBitSet) -> Verdict {
        let car = self.carrier();
        let name = car.object_name(c).to_string();
        if row.contains(car.empty(c)) {
            return Verdict::Fail(
                Witness::new(Axiom::EmptySieve)
                    .objects([name])
                    .sieve(Vec::new()),
            );
        }
        for s in row.ones() {
            for r in car.sieve_ids(c) {
                if car.is_subset(c, s, r) && !row.contains(r) {
                    return Verdict::Fail(
                        Witness::new(Axiom::UpwardClosure)
                            .objects([name])
                            .sieve(car.labels(c, s))
                            .sieve(car.labels(c, r)),
                    );
                }
            }
            for r in row.ones() {
                if !row.contains(car.intersect(c, s, r)) {
                    return Verdict::Fail(
                        Witness::new(Axiom::Intersection)
                            .objects([name])
                            .sieve(car.labels(c, s))
                            .sieve(car.labels(c, r)),
                    );
                }
            }
        }
        Verdict::Pass
    }

    /// Cover-neighbourhoods of `p` at `c`, as a row over sieve ids.
    pub fn cover_neighborhoods(&self, c: Obj, p: &Point) -> Result<FixedBitSet> {
        let g = self.g_neighborhoods(c, p)?;
        Ok(self.cover_row(c, &g))
    }

    /// `F(c)` contains every cover-neighbourhood of `p`.
    pub fn converges(&self, f: &CoverAssignment, c: Obj, p: &Point) -> Result<bool> {
        self.topology.same_carrier(f)?;
        let row = self.cover_neighborhoods(c, p)?;
        Ok(row.is_subset(f.row(c)))
    }

    /// Points every cover-neighbourhood of which meets `a`.
    pub fn closure(&self, c: Obj, a: SieveId) -> Result<Vec<Point>> {
        let car = self.carrier();
        let members = car.members(c, a);
        let mut out = Vec::new();
        for p in self.points(c)? {
            let row = self.cover_neighborhoods(c, &p)?;
            if row
                .ones()
                .all(|v| !car.members(c, v).intersection(members).is_empty())
            {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Points in the closure of every sieve of `F(c)`.
    pub fn cluster_points(&self, f: &CoverAssignment, c: Obj) -> Result<Vec<Point>> {
        self.topology.same_carrier(f)?;
        let car = self.carrier();
        let mut out = Vec::new();
        for p in self.points(c)? {
            let row = self.cover_neighborhoods(c, &p)?;
            let in_all = f.at(c).all(|s| {
                let m = car.members(c, s);
                row.ones()
                    .all(|v| !car.members(c, v).intersection(m).is_empty())
            });
            if in_all {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Points `F(c)` converges to.
    pub fn limit_points(&self, f: &CoverAssignment, c: Obj) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for p in self.points(c)? {
            if self.converges(f, c, &p)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Quasi-compactness, Hausdorffness and compactness of `c`.
    ///
    /// The ultrafilter method asks each ultrafilter for a cluster point and
    /// decides Hausdorffness pairwise by saturating `N_p ∪ N_q` at `c`. The
    /// exhaustive method quantifies over every filter.
    pub fn compactness_report(&self, c: Obj, method: Method, budget: u64) -> Result<CompactnessReport> {
        let car = self.carrier();
        let points = self.points(c)?;
        let labels = |ps: &[Point]| ps.iter().map(|p| p.label(car)).collect::<Vec<_>>();
        let mut blind = Vec::new();
        for p in &points {
            if self.g_neighborhoods(c, p)?.is_empty() {
                blind.push(p.clone());
            }
        }
        let mut witnesses = Vec::new();
        let (quasi_compact, hausdorff) = match method {
            Method::Ultrafilter => {
                let mut qc = true;
                for u in enumerate_ultrafilters(car, budget)? {
                    if self.cluster_points(u.assignment(), c)?.is_empty() {
                        qc = false;
                        witnesses.push(CompactnessWitness {
                            kind: "clusterless".into(),
                            filter: u.assignment().render(),
                            points: Vec::new(),
                        });
                        break;
                    }
                }
                let mut hd = true;
                'pairs: for (i, p) in points.iter().enumerate() {
                    for q in &points[i + 1..] {
                        let mut sub = CoverAssignment::empty(car);
                        let np = self.cover_neighborhoods(c, p)?;
                        let nq = self.cover_neighborhoods(c, q)?;
                        for s in np.ones().chain(nq.ones()) {
                            sub.insert(c, s);
                        }
                        if let Saturation::Proper(f) = saturate_subbase(&sub) {
                            hd = false;
                            witnesses.push(CompactnessWitness {
                                kind: "two-limits".into(),
                                filter: f.assignment().render(),
                                points: labels(&[p.clone(), q.clone()]),
                            });
                            break 'pairs;
                        }
                    }
                }
                (qc, hd)
            }
            Method::Exhaustive => {
                let (mut qc, mut hd) = (true, true);
                for f in enumerate_filters(car, budget)? {
                    let f = f.assignment();
                    if qc && self.cluster_points(f, c)?.is_empty() {
                        qc = false;
                        witnesses.push(CompactnessWitness {
                            kind: "clusterless".into(),
                            filter: f.render(),
                            points: Vec::new(),
                        });
                    }
                    if hd {
                        let lim = self.limit_points(f, c)?;
                        if lim.len() > 1 {
                            hd = false;
                            witnesses.push(CompactnessWitness {
                                kind: "two-limits".into(),
                                filter: f.render(),
                                points: labels(&lim[..2]),
                            });
                        }
                    }
                    if !qc && !hd {
                        break;
                    }
                }
                (qc, hd)
            }
        };
        Ok(CompactnessReport {
            object: car.object_name(c).to_string(),
            method,
            quasi_compact,
            hausdorff,
            compact: quasi_compact && hausdorff,
            points: labels(&points),
            blind_points: labels(&blind),
            witnesses,
        })
    }
}

/// Every `S ∈ F(c)` joins to `c`.
pub fn sup_converges(f: &CoverAssignment, c: Obj) -> Result<bool> {
    let car = f.carrier();
    let l = car.require_lattice()?;
    l.is_frame().into_result(Error::NotAFrame)?;
    check_filter(f).into_result(Error::NotAFilter)?;
    for s in f.at(c) {
        let set = car.element_set(c, s)?;
        if l.join_all(set.iter()) != Elem(c.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Meet of compact elements is compact. Inputs that are not compact are
/// rejected.
pub fn tychonoff_check(site: &Site, targets: &[Obj], method: Method, budget: u64) -> Result<Verdict> {
    let car = site.carrier();
    let l = car.require_lattice()?;
    if targets.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for &t in targets {
        if !site.compactness_report(t, method, budget)?.compact {
            return Err(Error::NotCompactInput {
                element: car.object_name(t).to_string(),
            });
        }
    }
    let meet = Obj(l.meet_all(targets.iter().map(|t| Elem(t.0))).0);
    let report = site.compactness_report(meet, method, budget)?;
    if report.compact {
        return Ok(Verdict::Pass);
    }
    let mut w = Witness::new(Axiom::Compactness)
        .objects(targets.iter().map(|&t| car.object_name(t).to_string()))
        .elements([car.object_name(meet).to_string()]);
    if let Some(first) = report.witnesses.first() {
        w = w.elements(first.points.iter().cloned());
        if let Some((_, sieves)) = first.filter.iter().find(|(o, _)| *o == report.object) {
            for s in sieves {
                w = w.sieve(s.clone());
            }
        }
    }
    Ok(Verdict::Fail(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::DEFAULT_MAX_SIEVES;
    use crate::category::{CategorySpec, FiniteCategory};
    use crate::coverage::{standard_topology, StandardKind};
    use crate::filters::enumerate_filters;
    use crate::fixtures;

    const B: u64 = 1 << 20;

    fn locale(l: FiniteLattice) -> Arc<Carrier> {
        Carrier::locale(l, DEFAULT_MAX_SIEVES).unwrap()
    }

    fn twopt() -> Arc<Carrier> {
        Carrier::category(fixtures::twopt(), DEFAULT_MAX_SIEVES).unwrap()
    }

    /// TWOPT with `J(1) = {t_1}` and the listed extra sieves at `C`.
    fn twopt_site(car: &Arc<Carrier>, extra: &[&[&str]]) -> Site {
        let c = car.object("C").unwrap();
        let mut j = CoverAssignment::trivial(car);
        for s in extra {
            j.insert(c, car.parse_sieve(c, s).unwrap());
        }
        Site::new(j).unwrap()
    }

    fn names(car: &Carrier, ps: &[Point]) -> Vec<String> {
        ps.iter().map(|p| p.label(car)).collect()
    }

    fn subset_scan(l: &FiniteLattice) -> Vec<ElementSet> {
        let n = l.len();
        let mut out: Vec<ElementSet> = (0..1u32 << n)
            .map(|bits| ElementSet::from_elems(n, (0..n).filter(|i| bits >> i & 1 == 1).map(Elem)))
            .filter(|f| {
                let up = f.iter().all(|a| l.elements().all(|b| !l.leq(a, b) || f.contains(b)));
                let meets = f.iter().all(|a| f.iter().all(|b| f.contains(l.meet(a, b))));
                let prime = l.elements().all(|a| {
                    l.elements()
                        .all(|b| !f.contains(l.join(a, b)) || f.contains(a) || f.contains(b))
                });
                up && meets && prime && f.contains(l.top()) && !f.contains(l.bottom())
            })
            .collect();
        out.sort_by(canonical_cmp);
        out
    }

    #[test]
    fn locale_point_examples() {
        let c3 = fixtures::chain3();
        let pts = locale_points(&c3).unwrap();
        let labels: Vec<String> = pts.iter().map(|p| p.label(&c3)).collect();
        assert_eq!(labels, ["{2}", "{1,2}"]);
        assert!(locale_points(&crate::divisor_lattice(1)).unwrap().is_empty());
        for l in [fixtures::d12(), fixtures::sq(), crate::divisor_lattice(30)] {
            let got: Vec<ElementSet> = locale_points(&l)
                .unwrap()
                .into_iter()
                .map(|p| p.dual_kernel)
                .collect();
            assert_eq!(got, subset_scan(&l));
        }
        assert!(matches!(locale_points(&fixtures::m3()), Err(Error::NotAFrame(_))));
    }

    #[test]
    fn g_neighborhood_examples() {
        let car = twopt();
        let site = twopt_site(&car, &[&["x", "a"]]);
        let c = car.object("C").unwrap();
        let x = site.point_by_label("x").unwrap();
        let y = site.point_by_label("y").unwrap();
        let sx = car.parse_sieve(c, &["x", "a"]).unwrap();
        assert_eq!(site.g_neighborhoods(c, &x).unwrap(), vec![sx, car.maximal(c)]);
        assert_eq!(site.g_neighborhoods(c, &y).unwrap(), vec![car.maximal(c)]);
        let one = car.object("1").unwrap();
        assert!(matches!(
            site.g_neighborhoods(one, &x),
            Err(Error::PointMismatch { .. })
        ));
    }

    #[test]
    fn factorization_is_membership() {
        let car = twopt();
        let site = Site::new(CoverAssignment::full(&car)).unwrap();
        for c in car.objects() {
            for p in site.points(c).unwrap() {
                let Point::Arrow(m) = p else { unreachable!() };
                let g = site.g_neighborhoods(c, &p).unwrap();
                let by_membership: Vec<SieveId> =
                    car.sieve_ids(c).filter(|&v| car.contains(c, v, m)).collect();
                assert_eq!(g, by_membership);
            }
        }
    }

    #[test]
    fn locale_g_neighborhoods_are_degenerate() {
        for l in [fixtures::chain3(), fixtures::d12(), fixtures::sq()] {
            let car = locale(l);
            for kind in [StandardKind::Trivial, StandardKind::Dense, StandardKind::Discrete] {
                let site = Site::new(standard_topology(kind, &car).unwrap()).unwrap();
                for c in car.objects() {
                    for p in site.points(c).unwrap() {
                        let g = site.g_neighborhoods(c, &p).unwrap();
                        assert_eq!(g, site.topology().at(c).collect::<Vec<_>>());
                    }
                }
            }
        }
        let car = locale(fixtures::chain3());
        let site = Site::new(standard_topology(StandardKind::Trivial, &car).unwrap()).unwrap();
        let p = site.point_by_label("{2}").unwrap();
        let one = car.object("1").unwrap();
        assert_eq!(site.g_neighborhoods(one, &p).unwrap(), vec![car.maximal(one)]);
        let q = site.point_by_label("{1,2}").unwrap();
        assert!(matches!(
            site.g_neighborhoods(one, &q),
            Err(Error::PointMismatch { .. })
        ));
    }

    #[test]
    fn neighborhood_system_examples() {
        let car = twopt();
        let site = twopt_site(&car, &[&["x", "a"]]);
        let c = car.object("C").unwrap();
        let x = site.point_by_label("x").unwrap();
        let nx = site.neighborhood_system(c, &x).unwrap();
        let rows: Vec<Vec<String>> = nx.cover_nbhds.iter().map(|&s| car.labels(c, s)).collect();
        assert_eq!(rows, [vec!["x", "a"], vec!["x", "y", "a", "b"], vec!["id_C", "x", "y", "a", "b"]]);
        assert_eq!(nx.filtered_object, Some(Verdict::Pass));
        let y = site.point_by_label("y").unwrap();
        assert_eq!(
            site.neighborhood_system(c, &y).unwrap().cover_nbhds,
            vec![car.maximal(c)]
        );

        let c3 = locale(fixtures::chain3());
        let site = Site::new(standard_topology(StandardKind::Dense, &c3).unwrap()).unwrap();
        let p = site.point_by_label("{1,2}").unwrap();
        let zero = c3.object("0").unwrap();
        let n = site.neighborhood_system(zero, &p).unwrap();
        assert_eq!(n.g_nbhds, vec![c3.maximal(zero)]);
        assert_eq!(n.cover_nbhds, vec![c3.maximal(zero)]);
    }

    #[test]
    fn convergence_examples() {
        let car = twopt();
        let site = twopt_site(&car, &[&["x", "a"]]);
        let c = car.object("C").unwrap();
        let x = site.point_by_label("x").unwrap();
        let y = site.point_by_label("y").unwrap();
        let triv = CoverAssignment::trivial(&car);
        assert!(!site.converges(&triv, c, &x).unwrap());
        assert!(site.converges(&triv, c, &y).unwrap());
        // no filter contains ⟨x⟩, so none converges to x
        for f in enumerate_filters(&car, B).unwrap() {
            assert!(!site.converges(f.assignment(), c, &x).unwrap());
        }
        let plain = twopt_site(&car, &[]);
        assert!(plain.converges(&triv, c, &x).unwrap());
        assert!(plain.converges(&triv, c, &y).unwrap());
    }

    #[test]
    fn sup_convergence_examples() {
        let c3 = locale(fixtures::chain3());
        let two = c3.object("2").unwrap();
        assert!(sup_converges(&CoverAssignment::trivial(&c3), two).unwrap());
        let mut s = CoverAssignment::empty(&c3);
        s.insert(two, c3.parse_sieve(two, &["0", "1"]).unwrap());
        let f = crate::filters::saturate_subbase(&s).proper().unwrap().into_assignment();
        assert!(!sup_converges(&f, two).unwrap());
        let sq = locale(fixtures::sq());
        let top = sq.object("top").unwrap();
        let mut s = CoverAssignment::empty(&sq);
        s.insert(top, sq.parse_sieve(top, &["bot", "a", "b"]).unwrap());
        let f = crate::filters::saturate_subbase(&s).proper().unwrap().into_assignment();
        assert!(sup_converges(&f, top).unwrap());
        // oracle: fold the join table directly
        for f in enumerate_filters(&sq, B).unwrap() {
            let f = f.assignment();
            for c in sq.objects() {
                let l = sq.lattice().unwrap();
                let direct = f.at(c).all(|s| {
                    let mut acc = l.bottom();
                    for e in sq.element_set(c, s).unwrap().iter() {
                        acc = l.join(acc, e);
                    }
                    acc == Elem(c.0)
                });
                assert_eq!(sup_converges(f, c).unwrap(), direct);
            }
        }
    }

    #[test]
    fn closure_examples() {
        let car = twopt();
        let c = car.object("C").unwrap();
        let sx = car.parse_sieve(c, &["x", "a"]).unwrap();
        let site = twopt_site(&car, &[&["x", "a"]]);
        assert_eq!(names(&car, &site.closure(c, sx).unwrap()), ["x", "y"]);
        assert_eq!(names(&car, &site.closure(c, car.maximal(c)).unwrap()), ["x", "y"]);
        let site = twopt_site(&car, &[&["x", "a"], &["y", "b"]]);
        assert_eq!(names(&car, &site.closure(c, sx).unwrap()), ["x"]);
    }

    #[test]
    fn cluster_and_limit_examples() {
        let car = twopt();
        let c = car.object("C").unwrap();
        let site = twopt_site(&car, &[&["x", "a"], &["y", "b"]]);
        let triv = CoverAssignment::trivial(&car);
        assert_eq!(names(&car, &site.cluster_points(&triv, c).unwrap()), ["x", "y"]);
        assert!(site.limit_points(&triv, c).unwrap().is_empty());
        for car in [twopt(), locale(fixtures::chain3()), locale(fixtures::sq())] {
            let sites: Vec<Site> = if car.is_locale() {
                [StandardKind::Trivial, StandardKind::Dense]
                    .into_iter()
                    .map(|k| Site::new(standard_topology(k, &car).unwrap()).unwrap())
                    .collect()
            } else {
                vec![twopt_site(&car, &[]), twopt_site(&car, &[&["x", "a"]])]
            };
            for site in &sites {
                for f in enumerate_filters(&car, B).unwrap() {
                    for c in car.objects() {
                        let cl = site.cluster_points(f.assignment(), c).unwrap();
                        for p in site.limit_points(f.assignment(), c).unwrap() {
                            assert!(cl.contains(&p));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn compactness_examples() {
        let point = FiniteCategory::build(&CategorySpec {
            objects: vec!["*".into()],
            ..Default::default()
        })
        .unwrap();
        let pc = Carrier::category(point, B).unwrap();
        let site = Site::new(CoverAssignment::trivial(&pc)).unwrap();
        for m in [Method::Ultrafilter, Method::Exhaustive] {
            let r = site.compactness_report(Obj(0), m, B).unwrap();
            assert!(r.quasi_compact && r.hausdorff && r.compact);
        }

        let car = twopt();
        let c = car.object("C").unwrap();
        let site = twopt_site(&car, &[]);
        for m in [Method::Ultrafilter, Method::Exhaustive] {
            let r = site.compactness_report(c, m, B).unwrap();
            assert!(!r.hausdorff);
            assert_eq!(r.witnesses.last().unwrap().kind, "two-limits");
        }
        let site = twopt_site(&car, &[&["x", "a"], &["y", "b"]]);
        let r = site.compactness_report(c, Method::Ultrafilter, B).unwrap();
        assert!(r.hausdorff);
        assert!(r.blind_points.is_empty());
    }

    #[test]
    fn d12_compact_elements() {
        let car = locale(fixtures::d12());
        let site = Site::new(standard_topology(StandardKind::Trivial, &car).unwrap()).unwrap();
        let compact: Vec<&str> = car
            .objects()
            .filter(|&c| site.compactness_report(c, Method::Ultrafilter, B).unwrap().compact)
            .map(|c| car.object_name(c))
            .collect();
        assert_eq!(compact, ["4", "6"]);
        let four = car.object("4").unwrap();
        let six = car.object("6").unwrap();
        let v = tychonoff_check(&site, &[four, six], Method::Ultrafilter, B).unwrap();
        assert_eq!(v.witness().unwrap().elements[0], "2");
        assert_eq!(
            tychonoff_check(&site, &[four], Method::Ultrafilter, B).unwrap(),
            Verdict::Pass
        );
        let twelve = car.object("12").unwrap();
        assert_eq!(
            tychonoff_check(&site, &[twelve], Method::Ultrafilter, B),
            Err(Error::NotCompactInput { element: "12".into() })
        );
    }
}
