use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sieveforge::coverage::enumerate_topologies;
use sieveforge::filters::{enumerate_filters, enumerate_ultrafilters};
use sieveforge::{standard_topology, Carrier, Method, Site, StandardKind, DEFAULT_MAX_SIEVES};
use sieveforge_bench::{locale_carriers, twopt};

const BUDGET: u64 = 1 << 20;

fn carriers(c: &mut Criterion) {
    let mut g = c.benchmark_group("carrier");
    g.bench_function("D60", |b| {
        b.iter(|| Carrier::locale(black_box(sieveforge::divisor_lattice(60)), DEFAULT_MAX_SIEVES).unwrap())
    });
    g.finish();
}

fn filters(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    for (name, car) in locale_carriers() {
        g.bench_with_input(BenchmarkId::new("filters", name), &car, |b, car| {
            b.iter(|| enumerate_filters(car, BUDGET).unwrap().len())
        });
        g.bench_with_input(BenchmarkId::new("ultrafilters", name), &car, |b, car| {
            b.iter(|| enumerate_ultrafilters(car, BUDGET).unwrap().len())
        });
    }
    let tp = twopt();
    g.bench_function("topologies/TWOPT", |b| b.iter(|| enumerate_topologies(&tp, BUDGET).unwrap().len()));
    g.finish();
}

fn compactness(c: &mut Criterion) {
    let mut g = c.benchmark_group("compactness");
    for (name, car) in locale_carriers() {
        let site = Site::new(standard_topology(StandardKind::Dense, &car).unwrap()).unwrap();
        let top = car.object(car.lattice().unwrap().name(car.lattice().unwrap().top())).unwrap();
        for method in [Method::Ultrafilter, Method::Exhaustive] {
            g.bench_function(BenchmarkId::new(format!("{method:?}"), name), |b| {
                b.iter(|| site.compactness_report(black_box(top), method, BUDGET).unwrap().compact)
            });
        }
    }
    g.finish();
}

criterion_group!(benches, carriers, filters, compactness);
criterion_main!(benches);
