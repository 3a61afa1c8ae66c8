//! Workloads shared by the normalizer benchmarks.

use catnf::pcatlab::gen::{GenConfig, TermGen};
use catnf::{church, Tm};

/// `succ (succ (... one))` for each size in `sizes`.
pub fn successor_chains(sizes: &[usize]) -> Vec<(usize, Tm)> {
    sizes.iter().map(|&n| (n, church::succ_chain(n))).collect()
}

/// A fixed batch of generated terms with the default generator settings.
pub fn generated(count: u64) -> Vec<Tm> {
    (0..count).map(|s| TermGen::new(s, GenConfig::default()).term()).collect()
}
