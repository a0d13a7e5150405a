//! Benchmark fixtures shared by the criterion benches.

use logdiff::corpus;
use logdiff::manifest::by_name;
use logdiff::{PbwForm, SaitoFrame, VarTable};

pub fn frame(name: &str) -> (VarTable, SaitoFrame) {
    by_name(name).expect("bundled example").frame().expect("bundled frame")
}

/// Seeded PBW forms with total degree at most 3 and coefficient degree at
/// most 2.
pub fn pbw_forms(frame: &SaitoFrame, count: usize, seed: u64) -> Vec<PbwForm> {
    let mut rng = corpus::rng(seed);
    (0..count)
        .map(|_| corpus::random_pbw_form(&mut rng, frame.n(), 3, 2, 4))
        .collect()
}
