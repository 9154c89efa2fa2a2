use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sieveforge::coverage::{compare_assignments, Comparison};
use sieveforge::filters::{check_filter, saturate_subbase, Saturation};
use sieveforge::laws::random_lattice;
use sieveforge::{Carrier, CoverAssignment, FiniteLattice, MorphismSet, DEFAULT_MAX_SIEVES};

fn lattice(seed: u64, n: usize) -> Option<FiniteLattice> {
    random_lattice(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn carrier(seed: u64, n: usize) -> Option<Arc<Carrier>> {
    let l = lattice(seed, n)?;
    Carrier::locale(l, DEFAULT_MAX_SIEVES).ok()
}

fn assignment(car: &Arc<Carrier>, bits: &[u64]) -> CoverAssignment {
    let mut a = CoverAssignment::empty(car);
    for c in car.objects() {
        let w = bits[c.0 % bits.len()];
        for s in car.sieve_ids(c) {
            if w >> (s % 64) & 1 == 1 {
                a.insert(c, s);
            }
        }
    }
    a
}

proptest! {
    #[test]
    fn meet_and_join_are_bounds(seed in any::<u64>(), n in 1usize..=7) {
        let Some(l) = lattice(seed, n) else { return Ok(()) };
        for a in l.elements() {
            for b in l.elements() {
                let m = l.meet(a, b);
                let j = l.join(a, b);
                prop_assert!(l.leq(m, a) && l.leq(m, b) && l.leq(a, j) && l.leq(b, j));
                for x in l.elements() {
                    if l.leq(x, a) && l.leq(x, b) {
                        prop_assert!(l.leq(x, m));
                    }
                    if l.leq(a, x) && l.leq(b, x) {
                        prop_assert!(l.leq(j, x));
                    }
                }
            }
            prop_assert!(l.leq(l.bottom(), a) && l.leq(a, l.top()));
        }
    }

    #[test]
    fn generated_sieve_is_a_closure(seed in any::<u64>(), n in 1usize..=6, pick in any::<u128>()) {
        let Some(car) = carrier(seed, n) else { return Ok(()) };
        let cat = car.cat();
        for c in cat.objects() {
            let into: Vec<_> = cat.hom_into(c).iter().collect();
            let set: MorphismSet = into.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &m)| m).collect();
            let g = cat.generated_sieve(c, set).unwrap();
            prop_assert!(set.is_subset(g.members));
            prop_assert!(cat.is_sieve(c, g.members).is_pass());
            prop_assert_eq!(cat.generated_sieve(c, g.members).unwrap(), g);
            prop_assert!(car.id_of(c, g.members).is_some());
        }
    }

    #[test]
    fn comparison_is_a_partial_order(seed in any::<u64>(), n in 1usize..=5, a in prop::collection::vec(any::<u64>(), 1..4), b in prop::collection::vec(any::<u64>(), 1..4)) {
        let Some(car) = carrier(seed, n) else { return Ok(()) };
        let (x, y) = (assignment(&car, &a), assignment(&car, &b));
        prop_assert_eq!(compare_assignments(&x, &x).unwrap(), Comparison::Equal);
        let xy = compare_assignments(&x, &y).unwrap();
        let yx = compare_assignments(&y, &x).unwrap();
        let flipped = match xy {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            other => other,
        };
        prop_assert_eq!(yx, flipped);
        let both = x.intersection(&y).unwrap();
        prop_assert!(matches!(compare_assignments(&both, &x).unwrap(), Comparison::Less | Comparison::Equal));
    }

    #[test]
    fn saturation_yields_filters(seed in any::<u64>(), n in 1usize..=6, a in prop::collection::vec(any::<u64>(), 1..4)) {
        let Some(car) = carrier(seed, n) else { return Ok(()) };
        let s = assignment(&car, &a);
        match saturate_subbase(&s) {
            Saturation::Proper(f) => {
                prop_assert!(check_filter(f.assignment()).is_pass());
                prop_assert!(s.is_subset(f.assignment()).unwrap());
            }
            Saturation::Improper(trace) => {
                let given = car.objects().any(|c| s.contains(c, car.empty(c)));
                prop_assert!(given || !trace.is_empty());
            }
        }
    }

    #[test]
    fn pullback_is_monotone(seed in any::<u64>(), n in 1usize..=6) {
        let Some(car) = carrier(seed, n) else { return Ok(()) };
        for h in car.cat().all_morphisms() {
            let c = car.cat().cod(h);
            let d = car.cat().dom(h);
            for s in car.sieve_ids(c) {
                for r in car.sieve_ids(c) {
                    if car.is_subset(c, s, r) {
                        prop_assert!(car.is_subset(d, car.pullback(h, s), car.pullback(h, r)));
                    }
                }
            }
            prop_assert_eq!(car.pullback(h, car.maximal(c)), car.maximal(d));
            prop_assert_eq!(car.pullback(h, car.empty(c)), car.empty(d));
        }
    }
}
