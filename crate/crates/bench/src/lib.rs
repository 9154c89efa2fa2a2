//! Shared inputs for the enumeration benchmarks.

use std::sync::Arc;

use sieveforge::{fixtures, Carrier, DEFAULT_MAX_SIEVES};

/// Named lattice carriers of increasing size.
pub fn locale_carriers() -> Vec<(&'static str, Arc<Carrier>)> {
    [
        ("CHAIN3", fixtures::chain3()),
        ("SQ", fixtures::sq()),
        ("D12", fixtures::d12()),
    ]
    .into_iter()
    .map(|(n, l)| (n, Carrier::locale(l, DEFAULT_MAX_SIEVES).expect("small lattice")))
    .collect()
}

pub fn twopt() -> Arc<Carrier> {
    Carrier::category(fixtures::twopt(), DEFAULT_MAX_SIEVES).expect("small category")
}
