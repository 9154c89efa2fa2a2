use std::sync::Arc;

use sieveforge::convergence::{sup_converges, tychonoff_check};
use sieveforge::coverage::enumerate_topologies;
use sieveforge::filters::{enumerate_filters, enumerate_ultrafilters};
use sieveforge::{fixtures, standard_topology, Carrier, CoverAssignment, Method, Site, StandardKind, DEFAULT_MAX_SIEVES};

const BUDGET: u64 = 1 << 20;

fn twopt() -> Arc<Carrier> {
    Carrier::category(fixtures::twopt(), DEFAULT_MAX_SIEVES).unwrap()
}

fn twopt_site(extra: &[&[&str]]) -> Site {
    let car = twopt();
    let c = car.object("C").unwrap();
    let mut j = CoverAssignment::trivial(&car);
    for s in extra {
        j.insert(c, car.parse_sieve(c, s).unwrap());
    }
    Site::new(j).unwrap()
}

#[test]
fn twopt_counts() {
    let car = twopt();
    assert_eq!(enumerate_filters(&car, BUDGET).unwrap().len(), 2);
    assert_eq!(enumerate_ultrafilters(&car, BUDGET).unwrap().len(), 1);
    assert_eq!(enumerate_topologies(&car, BUDGET).unwrap().len(), 3);
}

#[test]
fn hausdorff_examples() {
    let c = twopt().object("C").unwrap();
    let coarse = twopt_site(&[]);
    let r = coarse.compactness_report(c, Method::Ultrafilter, BUDGET).unwrap();
    assert!(r.quasi_compact && !r.hausdorff);
    let fine = twopt_site(&[&["x", "a"], &["y", "b"]]);
    for m in [Method::Ultrafilter, Method::Exhaustive] {
        assert!(fine.compactness_report(c, m, BUDGET).unwrap().hausdorff);
    }
}

#[test]
fn closure_examples() {
    let site = twopt_site(&[&["x", "a"], &["y", "b"]]);
    let car = site.carrier().clone();
    let c = car.object("C").unwrap();
    let x = car.parse_sieve(c, &["x", "a"]).unwrap();
    let labels = |ps: Vec<sieveforge::Point>| ps.iter().map(|p| p.label(&car)).collect::<Vec<_>>();
    assert_eq!(labels(site.closure(c, x).unwrap()), ["x"]);
    assert_eq!(labels(site.closure(c, car.maximal(c)).unwrap()), ["x", "y"]);
    let trivial = CoverAssignment::trivial(&car);
    assert_eq!(labels(site.cluster_points(&trivial, c).unwrap()), ["x", "y"]);
}

#[test]
fn sup_convergence_examples() {
    let car = Carrier::locale(fixtures::chain3(), DEFAULT_MAX_SIEVES).unwrap();
    let two = car.object("2").unwrap();
    let trivial = CoverAssignment::trivial(&car);
    assert!(sup_converges(&trivial, two).unwrap());
    let mut f = trivial.clone();
    f.insert(two, car.parse_sieve(two, &["0", "1"]).unwrap());
    assert!(!sup_converges(&f, two).unwrap());
}

#[test]
fn tychonoff_examples() {
    let car = Carrier::locale(fixtures::chain3(), DEFAULT_MAX_SIEVES).unwrap();
    let site = Site::new(standard_topology(StandardKind::Dense, &car).unwrap()).unwrap();
    let (one, two) = (car.object("1").unwrap(), car.object("2").unwrap());
    assert_eq!(
        tychonoff_check(&site, &[two, one], Method::Ultrafilter, BUDGET),
        Err(sieveforge::Error::NotCompactInput { element: "2".into() })
    );
    assert!(tychonoff_check(&site, &[one], Method::Ultrafilter, BUDGET).unwrap().is_pass());
    let d12 = Carrier::locale(fixtures::d12(), DEFAULT_MAX_SIEVES).unwrap();
    let site = Site::new(standard_topology(StandardKind::Trivial, &d12).unwrap()).unwrap();
    let four = d12.object("4").unwrap();
    assert!(tychonoff_check(&site, &[four], Method::Ultrafilter, BUDGET).unwrap().is_pass());
}
