//! Functors between carriers, image sieves and the image laws.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::carrier::{Carrier, SieveId};
use crate::category::{Mor, MorphismSet, Obj, Sieve};
use crate::coverage::{same_carrier, CoverAssignment};
use crate::diagnostics::{Axiom, Verdict, Witness};
use crate::error::{Error, Result};
use crate::filters::check_basis;

/// Object and morphism assignments by name. Identities may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FunctorSpec {
    pub objects: Vec<(String, String)>,
    pub morphisms: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct FunctorMap {
    source: Arc<Carrier>,
    target: Arc<Carrier>,
    objects: Vec<Obj>,
    morphisms: Vec<Mor>,
}

impl PartialEq for FunctorMap {
    fn eq(&self, other: &Self) -> bool {
        same_carrier(&self.source, &other.source)
            && same_carrier(&self.target, &other.target)
            && self.objects == other.objects
            && self.morphisms == other.morphisms
    }
}

fn not_a_functor(axiom: Axiom) -> Witness {
    Witness::new(axiom)
}

impl FunctorMap {
    /// Resolves the object and morphism maps and checks typing, identities and composition.
    pub fn build(source: &Arc<Carrier>, target: &Arc<Carrier>, spec: &FunctorSpec) -> Result<Self> {
        let (s, t) = (source.cat(), target.cat());
        let mut objects: Vec<Option<Obj>> = vec![None; s.object_count()];
        for (a, b) in &spec.objects {
            let a = source.object(a)?;
            let b = target.object(b)?;
            if objects[a.0].replace(b).is_some() {
                return Err(Error::DuplicateId(s.object_name(a).to_string()));
            }
        }
        let objects: Vec<Obj> = objects
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| {
                    Error::NotAFunctor(
                        not_a_functor(Axiom::FunctorTyping).objects([s.object_name(Obj(i))]),
                    )
                })
            })
            .collect::<Result<_>>()?;
        let mut morphisms: Vec<Option<Mor>> = vec![None; s.morphism_count()];
        for (f, g) in &spec.morphisms {
            let f = s.morphism(f)?;
            let g = t.morphism(g)?;
            if morphisms[f.0].replace(g).is_some() {
                return Err(Error::DuplicateId(s.mor_name(f).to_string()));
            }
        }
        for c in s.objects() {
            let id = s.identity(c);
            morphisms[id.0].get_or_insert(t.identity(objects[c.0]));
        }
        let morphisms: Vec<Mor> = morphisms
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    Error::NotAFunctor(
                        not_a_functor(Axiom::FunctorTyping).morphisms([s.mor_name(Mor(i))]),
                    )
                })
            })
            .collect::<Result<_>>()?;
        let f = FunctorMap {
            source: source.clone(),
            target: target.clone(),
            objects,
            morphisms,
        };
        f.check().into_result(Error::NotAFunctor)?;
        Ok(f)
    }

    /// Functor between lattice carriers induced by a monotone map of
    /// elements.
    pub fn from_monotone(source: &Arc<Carrier>, target: &Arc<Carrier>, map: &[(String, String)]) -> Result<Self> {
        let (s, t) = (source.cat(), target.cat());
        let mut objects = vec![None; s.object_count()];
        for (a, b) in map {
            objects[source.object(a)?.0] = Some(target.object(b)?);
        }
        let mut morphisms = Vec::new();
        for m in s.all_morphisms() {
            let (d, c) = (s.dom(m), s.cod(m));
            if let (Some(fd), Some(fc)) = (objects[d.0], objects[c.0]) {
                let image = t.hom(fd, fc).next().ok_or_else(|| {
                    Error::NotAFunctor(
                        not_a_functor(Axiom::FunctorTyping).morphisms([s.mor_name(m)]),
                    )
                })?;
                morphisms.push((s.mor_name(m).to_string(), t.mor_name(image).to_string()));
            }
        }
        let spec = FunctorSpec {
            objects: map.to_vec(),
            morphisms,
        };
        Self::build(source, target, &spec)
    }

    fn check(&self) -> Verdict {
        let (s, t) = (self.source.cat(), self.target.cat());
        for m in s.all_morphisms() {
            let fm = self.morphisms[m.0];
            if t.dom(fm) != self.objects[s.dom(m).0] || t.cod(fm) != self.objects[s.cod(m).0] {
                return Verdict::Fail(
                    Witness::new(Axiom::FunctorTyping).morphisms([s.mor_name(m), t.mor_name(fm)]),
                );
            }
        }
        for c in s.objects() {
            let fid = self.morphisms[s.identity(c).0];
            if fid != t.identity(self.objects[c.0]) {
                return Verdict::Fail(
                    Witness::new(Axiom::FunctorIdentity)
                        .objects([s.object_name(c)])
                        .morphisms([s.mor_name(s.identity(c)), t.mor_name(fid)]),
                );
            }
        }
        for f in s.all_morphisms() {
            for g in s.hom_into(s.dom(f)).iter() {
                let fg = s.compose(f, g).expect("composable");
                let lhs = self.morphisms[fg.0];
                let rhs = t.compose(self.morphisms[f.0], self.morphisms[g.0]);
                if rhs != Some(lhs) {
                    return Verdict::Fail(
                        Witness::new(Axiom::FunctorComposition).morphisms([s.mor_name(f), s.mor_name(g)]),
                    );
                }
            }
        }
        Verdict::Pass
    }

    pub fn source(&self) -> &Arc<Carrier> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Carrier> {
        &self.target
    }

    pub fn object(&self, c: Obj) -> Obj {
        self.objects[c.0]
    }

    pub fn morphism(&self, m: Mor) -> Mor {
        self.morphisms[m.0]
    }

    /// `(source, target)` name pairs for objects and non-identity morphisms.
    pub fn spec(&self) -> FunctorSpec {
        let (s, t) = (self.source.cat(), self.target.cat());
        FunctorSpec {
            objects: s
                .objects()
                .map(|c| (s.object_name(c).to_string(), t.object_name(self.objects[c.0]).to_string()))
                .collect(),
            morphisms: s
                .all_morphisms()
                .filter(|&m| !s.is_identity(m))
                .map(|m| (s.mor_name(m).to_string(), t.mor_name(self.morphisms[m.0]).to_string()))
                .collect(),
        }
    }

    /// `⟨F(R)⟩`: target morphisms into `F(c)` that factor through some `F(f)`
    /// with `f ∈ R`.
    pub fn image_sieve(&self, c: Obj, r: &Sieve) -> Result<Sieve> {
        if r.owner != c {
            return Err(Error::OwnerMismatch {
                expected: self.source.object_name(c).to_string(),
                found: self.source.object_name(r.owner).to_string(),
            });
        }
        let t = self.target.cat();
        let fc = self.objects[c.0];
        let images: Vec<Mor> = r.members.iter().map(|f| self.morphisms[f.0]).collect();
        let members: MorphismSet = t
            .hom_into(fc)
            .iter()
            .filter(|&m| {
                images.iter().any(|&ff| {
                    t.hom_into(t.dom(ff))
                        .iter()
                        .any(|g| t.dom(g) == t.dom(m) && t.compose(ff, g) == Some(m))
                })
            })
            .collect();
        Ok(Sieve { owner: fc, members })
    }

    pub(crate) fn image_id(&self, c: Obj, s: SieveId) -> SieveId {
        let img = self
            .image_sieve(c, &self.source.sieve(c, s))
            .expect("owner matches");
        self.target
            .id_of(img.owner, img.members)
            .expect("image is a sieve")
    }
}

/// Every `R ∈ F(c)` has `⟨F(R)⟩ ∈ G(F(c))`.
pub fn is_filter_preserving(
    functor: &FunctorMap,
    f: &CoverAssignment,
    g: &CoverAssignment,
) -> Result<Verdict> {
    if !same_carrier(f.carrier(), &functor.source) || !same_carrier(g.carrier(), &functor.target) {
        return Err(Error::CarrierMismatch);
    }
    let (src, tgt) = (&functor.source, &functor.target);
    for c in src.objects() {
        for r in f.at(c) {
            let img = functor.image_id(c, r);
            let fc = functor.object(c);
            if !g.contains(fc, img) {
                return Ok(Verdict::Fail(
                    Witness::new(Axiom::FilterPreservation)
                        .objects([src.object_name(c), tgt.object_name(fc)])
                        .sieve(src.labels(c, r))
                        .sieve(tgt.labels(fc, img)),
                ));
            }
        }
    }
    Ok(Verdict::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageLawReport {
    /// Images of g-neighbourhoods are g-neighbourhoods of the image point.
    pub neighborhoods: Verdict,
    /// Images of cover-neighbourhoods contain a g-neighbourhood of the
    /// image point.
    pub cover_neighborhoods: Verdict,
    /// The image of the basis satisfies the basis axioms in the target.
    pub basis: Verdict,
}

impl ImageLawReport {
    pub fn all_pass(&self) -> bool {
        self.neighborhoods.is_pass() && self.cover_neighborhoods.is_pass() && self.basis.is_pass()
    }
}

/// Points of `c` as arrows out of the designated terminal object, with the
/// covers of `j` they factor through.
fn arrow_g_nbhds(j: &CoverAssignment, c: Obj, p: Mor) -> Vec<SieveId> {
    let car = j.carrier();
    let cat = car.cat();
    j.at(c)
        .filter(|&v| {
            car.members(c, v).iter().any(|phi| {
                cat.category_points(cat.dom(phi))
                    .unwrap_or_default()
                    .into_iter()
                    .any(|q| cat.compose(phi, q) == Some(p))
            })
        })
        .collect()
}

/// Replays the three image laws for a morphism of sites `F : (src, J) ->
/// (tgt, K)`: a functor that is cover-preserving from `J` to `K` and sends
/// the designated terminal object to a terminal object. `basis` defaults to
/// the trivial filter on the source.
pub fn image_law_report(
    functor: &FunctorMap,
    j: &CoverAssignment,
    k: &CoverAssignment,
    basis: Option<&CoverAssignment>,
) -> Result<ImageLawReport> {
    if let Verdict::Fail(w) = is_filter_preserving(functor, j, k)? {
        return Err(Error::PreconditionUnmet(format!("functor is not cover-preserving: {w}")));
    }
    let (src, tgt) = (&functor.source, &functor.target);
    let (s, t) = (src.cat(), tgt.cat());
    if let Some(one) = s.designated_terminal() {
        if !t.terminal_objects().contains(&functor.object(one)) {
            return Err(Error::PreconditionUnmet(format!(
                "terminal object `{}` is not sent to a terminal object",
                s.object_name(one)
            )));
        }
    }
    let trivial = CoverAssignment::trivial(src);
    let basis = basis.unwrap_or(&trivial);
    if !same_carrier(basis.carrier(), src) {
        return Err(Error::CarrierMismatch);
    }

    let mut neighborhoods = Verdict::Pass;
    let mut cover_neighborhoods = Verdict::Pass;
    'objects: for c in src.objects() {
        let fc = functor.object(c);
        for p in s.category_points(c).unwrap_or_default() {
            let fp = functor.morphism(p);
            let target_g = arrow_g_nbhds(k, fc, fp);
            let g = arrow_g_nbhds(j, c, p);
            if neighborhoods.is_pass() {
                for &v in &g {
                    let img = functor.image_id(c, v);
                    if !target_g.contains(&img) {
                        neighborhoods = Verdict::Fail(
                            Witness::new(Axiom::ImageNeighborhood)
                                .objects([s.object_name(c)])
                                .morphisms([s.mor_name(p)])
                                .sieve(src.labels(c, v))
                                .sieve(tgt.labels(fc, img)),
                        );
                        break;
                    }
                }
            }
            if cover_neighborhoods.is_pass() {
                for w in src.sieve_ids(c) {
                    if !g.iter().any(|&v| src.is_subset(c, v, w)) {
                        continue;
                    }
                    let img = functor.image_id(c, w);
                    if !target_g.iter().any(|&v| tgt.is_subset(fc, v, img)) {
                        cover_neighborhoods = Verdict::Fail(
                            Witness::new(Axiom::ImageCoverNeighborhood)
                                .objects([s.object_name(c)])
                                .morphisms([s.mor_name(p)])
                                .sieve(src.labels(c, w))
                                .sieve(tgt.labels(fc, img)),
                        );
                        break;
                    }
                }
            }
            if !neighborhoods.is_pass() && !cover_neighborhoods.is_pass() {
                break 'objects;
            }
        }
    }

    let mut image = CoverAssignment::empty(tgt);
    let mut hit = vec![false; t.object_count()];
    for c in src.objects() {
        let fc = functor.object(c);
        hit[fc.0] = true;
        for r in basis.at(c) {
            image.insert(fc, functor.image_id(c, r));
        }
    }
    for d in tgt.objects() {
        if !hit[d.0] {
            image.insert(d, tgt.maximal(d));
        }
    }
    let basis = match check_basis(&image, false) {
        Verdict::Pass => Verdict::Pass,
        Verdict::Fail(w) => Verdict::Fail(Witness { axiom: Axiom::ImageBasis, ..w }),
    };
    Ok(ImageLawReport {
        neighborhoods,
        cover_neighborhoods,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::DEFAULT_MAX_SIEVES;
    use crate::coverage::{standard_topology, StandardKind};
    use crate::fixtures;

    fn twopt() -> Arc<Carrier> {
        Carrier::category(fixtures::twopt(), DEFAULT_MAX_SIEVES).unwrap()
    }

    fn chain() -> Arc<Carrier> {
        Carrier::locale(fixtures::chain3(), DEFAULT_MAX_SIEVES).unwrap()
    }

    fn identity(car: &Arc<Carrier>) -> FunctorMap {
        let cat = car.cat();
        let spec = FunctorSpec {
            objects: cat
                .objects()
                .map(|c| (cat.object_name(c).to_string(), cat.object_name(c).to_string()))
                .collect(),
            morphisms: cat
                .all_morphisms()
                .map(|m| (cat.mor_name(m).to_string(), cat.mor_name(m).to_string()))
                .collect(),
        };
        FunctorMap::build(car, car, &spec).unwrap()
    }

    #[test]
    fn functor_examples() {
        let car = twopt();
        identity(&car);
        let swap = FunctorMap::build(&car, &car, &fixtures::twopt_swap()).unwrap();
        let c = car.object("C").unwrap();
        let sx = car.sieve(c, car.parse_sieve(c, &["x", "a"]).unwrap());
        let img = swap.image_sieve(c, &sx).unwrap();
        assert_eq!(car.set_labels(img.members), ["y", "b"]);
        let ch = chain();
        let collapse = FunctorMap::from_monotone(&ch, &ch, &fixtures::chain3_collapse()).unwrap();
        let two = ch.object("2").unwrap();
        let down1 = ch.sieve(two, ch.parse_sieve(two, &["0", "1"]).unwrap());
        assert_eq!(ch.set_labels(collapse.image_sieve(two, &down1).unwrap().members), ["0"]);
        let one = ch.object("1").unwrap();
        assert!(matches!(
            collapse.image_sieve(one, &down1),
            Err(Error::OwnerMismatch { .. })
        ));
    }

    #[test]
    fn broken_functors() {
        let car = twopt();
        let mut spec = fixtures::twopt_swap();
        for m in spec.morphisms.iter_mut() {
            if m.0 == "a" {
                m.1 = "a".into();
            }
        }
        match FunctorMap::build(&car, &car, &spec) {
            Err(Error::NotAFunctor(w)) => assert_eq!(w.axiom, Axiom::FunctorComposition),
            other => panic!("{other:?}"),
        }
        let mut spec = fixtures::twopt_swap();
        spec.morphisms.retain(|m| m.0 != "t");
        assert!(matches!(
            FunctorMap::build(&car, &car, &spec),
            Err(Error::NotAFunctor(_))
        ));
        let ch = chain();
        let reverse = [("0", "2"), ("1", "1"), ("2", "0")]
            .map(|(a, b)| (a.to_string(), b.to_string()));
        assert!(matches!(
            FunctorMap::from_monotone(&ch, &ch, &reverse),
            Err(Error::NotAFunctor(_))
        ));
    }

    #[test]
    fn image_sieve_is_generated_by_images() {
        let ch = chain();
        let collapse = FunctorMap::from_monotone(&ch, &ch, &fixtures::chain3_collapse()).unwrap();
        let car = twopt();
        let swap = FunctorMap::build(&car, &car, &fixtures::twopt_swap()).unwrap();
        for f in [collapse, swap, identity(&car)] {
            let (src, tgt) = (f.source().clone(), f.target().clone());
            for c in src.objects() {
                for r in src.sieve_ids(c) {
                    let r = src.sieve(c, r);
                    let img = f.image_sieve(c, &r).unwrap();
                    let gens: MorphismSet = r.members.iter().map(|m| f.morphism(m)).collect();
                    let expected = tgt.cat().generated_sieve(f.object(c), gens).unwrap();
                    assert_eq!(img, expected);
                }
            }
        }
    }

    #[test]
    fn preservation_examples() {
        let car = twopt();
        let c = car.object("C").unwrap();
        let id = identity(&car);
        let triv = CoverAssignment::trivial(&car);
        assert!(is_filter_preserving(&id, &triv, &triv).unwrap().is_pass());
        let swap = FunctorMap::build(&car, &car, &fixtures::twopt_swap()).unwrap();
        let sx = car.parse_sieve(c, &["x", "a"]).unwrap();
        let sy = car.parse_sieve(c, &["y", "b"]).unwrap();
        let on = |s| {
            let mut g = car.objects().map(|o| car.maximal(o)).collect::<Vec<_>>();
            g[c.0] = s;
            CoverAssignment::principal(&car, &g)
        };
        let w = is_filter_preserving(&swap, &on(sx), &on(sx)).unwrap();
        assert_eq!(w.witness().unwrap().sieves, [vec!["x", "a"], vec!["y", "b"]]);
        assert!(is_filter_preserving(&swap, &on(sx), &on(sy)).unwrap().is_pass());
        assert_eq!(
            is_filter_preserving(&swap, &triv, &CoverAssignment::trivial(&chain())),
            Err(Error::CarrierMismatch)
        );
    }

    #[test]
    fn image_law_examples() {
        let car = twopt();
        let c = car.object("C").unwrap();
        let id = identity(&car);
        let mut j = CoverAssignment::trivial(&car);
        j.insert(c, car.parse_sieve(c, &["x", "a"]).unwrap());
        assert!(image_law_report(&id, &j, &j, None).unwrap().all_pass());
        let swap = FunctorMap::build(&car, &car, &fixtures::twopt_swap()).unwrap();
        let mut k = CoverAssignment::trivial(&car);
        k.insert(c, car.parse_sieve(c, &["y", "b"]).unwrap());
        assert!(image_law_report(&swap, &j, &k, None).unwrap().all_pass());
        assert!(matches!(
            image_law_report(&swap, &j, &j, None),
            Err(Error::PreconditionUnmet(_))
        ));

        let ch = chain();
        let collapse = FunctorMap::from_monotone(&ch, &ch, &fixtures::chain3_collapse()).unwrap();
        let dense = standard_topology(StandardKind::Dense, &ch).unwrap();
        let triv = standard_topology(StandardKind::Trivial, &ch).unwrap();
        assert!(image_law_report(&collapse, &dense, &dense, None).unwrap().all_pass());
        // the image of ↓1 at 2 is ↓0, which the trivial topology lacks
        assert!(matches!(
            image_law_report(&collapse, &dense, &triv, None),
            Err(Error::PreconditionUnmet(_))
        ));
    }
}
