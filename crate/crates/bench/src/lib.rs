//! Benchmark-only crate; see `benches/pipeline.rs`.
//!
//! Shared fixture builders live here so the bench targets stay small.

use cmv_core::cmv::VerblunskyParams;
use cmv_core::misp::{sort_by_argument, MispInput};
use cmv_core::Complex64;

/// Deterministic pseudo-random coefficients inside the disk of radius 0.8.
pub fn fixture_alphas(count: usize) -> Vec<Complex64> {
    let mut state = 0x2545F4914F6CDD1Du64;
    (0..count)
        .map(|_| {
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let r = 0.8 * next().sqrt();
            let t = next() * std::f64::consts::TAU;
            Complex64::from_polar(r, t)
        })
        .collect()
}

/// A reconstruction instance derived from a forward model.
pub fn fixture_misp_input(n: usize, m: usize) -> MispInput {
    let alphas = fixture_alphas(n - 1);
    let params = VerblunskyParams::new(alphas.clone()).expect("fixture coefficients are Schur");
    let mut zetas = cmv_core::cmv::spectrum(&params).expect("fixture spectrum").zetas;
    sort_by_argument(&mut zetas);
    MispInput::new(n, m, alphas[..n - m - 1].to_vec(), zetas[..2 * m].to_vec())
        .expect("fixture input is valid")
}
