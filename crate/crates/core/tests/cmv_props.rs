//! Cross-checks of the CMV layer against an independent dense eigensolver
//! and the structural identities tying spectra, eigenvectors, reflections,
//! and Weyl data together.

mod support;

use cmv_core::cmv::{
    assemble_cmv, eigenvector, spectrum, szego_chain, szego_closing, szego_forward, szego_inverse,
    weyl, VerblunskyParams,
};
use cmv_core::Complex64;
use support::{assert_sets_close, cmv_as_dense, dense_eigenvalues, random_alphas, seeded_rng};

fn random_even_params(seed: u64, max_n: usize, max_radius: f64) -> VerblunskyParams {
    let mut rng = seeded_rng(seed);
    let mut n = 4 + (seed as usize % (max_n.saturating_sub(3)));
    if !n.is_multiple_of(2) {
        n += 1;
    }
    let n = n.min(max_n);
    VerblunskyParams::new(random_alphas(&mut rng, n - 1, max_radius)).unwrap()
}

#[test]
fn spectrum_matches_dense_eigenvalues() {
    for seed in 0..20 {
        let params = random_even_params(seed, 12, 0.85);
        let via_roots = spectrum(&params).unwrap();
        let matrix = assemble_cmv(&params).unwrap();
        let via_qr = dense_eigenvalues(&cmv_as_dense(&matrix));
        assert_sets_close(
            &via_roots.zetas,
            &via_qr,
            1e-8,
            &format!("seed {seed}, n = {}", params.n()),
        );
    }
}

#[test]
fn reflection_preserves_spectrum() {
    for seed in 100..120 {
        let params = random_even_params(seed, 10, 0.85);
        let original = spectrum(&params).unwrap();
        let reflected = spectrum(&params.reflect().unwrap()).unwrap();
        assert_sets_close(
            &original.zetas,
            &reflected.zetas,
            1e-8,
            &format!("seed {seed}"),
        );
    }
}

#[test]
fn eigenvector_ratio_identity() {
    // For each eigenvalue, the reflected eigenvector components satisfy
    // y_{k-1}/y_k = x_{n-k}/x_{n-k-1}, checked in cross-multiplied form.
    for seed in 200..212 {
        let params = random_even_params(seed, 8, 0.8);
        let n = params.n();
        let reflected = params.reflect().unwrap();
        let zetas = spectrum(&params).unwrap().zetas;
        for zeta in zetas {
            let x = eigenvector(&params, zeta).unwrap();
            let y = eigenvector(&reflected, zeta).unwrap();
            for k in 1..n {
                let lhs = y[k - 1] * x[n - k - 1];
                let rhs = y[k] * x[n - k];
                let scale = lhs.norm().max(rhs.norm()).max(1e-12);
                assert!(
                    (lhs - rhs).norm() / scale < 1e-7,
                    "seed {seed}, zeta {zeta}, k {k}: {lhs} vs {rhs}"
                );
            }
        }
    }
}

#[test]
fn eigenvector_residual_identity_random() {
    for seed in 300..310 {
        let params = random_even_params(seed, 8, 0.8);
        let n = params.n();
        let matrix = assemble_cmv(&params).unwrap();
        let system = szego_forward(&params).unwrap();
        let mut rng = seeded_rng(seed * 7 + 1);
        for _ in 0..6 {
            let zeta = Complex64::from_polar(
                0.5 + 1.0 * rand::Rng::gen::<f64>(&mut rng),
                rand::Rng::gen::<f64>(&mut rng) * std::f64::consts::TAU,
            );
            let x = eigenvector(&params, zeta).unwrap();
            let cx = matrix.apply(&x);
            let norm: f64 = cx
                .iter()
                .zip(&x)
                .map(|(a, b)| (zeta * b - a).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let expected = zeta.norm().powi(-((n / 2) as i32))
                * params.kappa(n - 1)
                * system.phi_tilde().evaluate(zeta).norm();
            let x_norm: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!(
                (norm - expected).abs() <= 1e-8 * expected + 1e-10 * x_norm,
                "seed {seed}, zeta {zeta}: {norm} vs {expected}"
            );
        }
    }
}

#[test]
fn unit_circle_symmetry_identity() {
    // tildePhi_{n-m-1}(zeta) / Phi*_{n-m-2}(zeta) = -zeta conj(W(zeta)) on
    // the unit circle.
    for seed in 400..410 {
        let mut rng = seeded_rng(seed);
        let n = 8;
        let m = 1 + (seed as usize) % 3;
        let prefix = random_alphas(&mut rng, n - m - 2, 0.85);
        let w = weyl(&prefix, n, m).unwrap();
        let chain = szego_chain(&prefix).unwrap();
        let phi = chain.last().unwrap();
        let phi_star = phi.star(phi.degree().unwrap_or(0)).unwrap();
        let numer = szego_closing(phi).unwrap();
        for _ in 0..8 {
            let zeta = Complex64::from_polar(1.0, rand::Rng::gen::<f64>(&mut rng) * std::f64::consts::TAU);
            let lhs = numer.evaluate(zeta) / phi_star.evaluate(zeta);
            let rhs = -zeta * w.evaluate(zeta).conj();
            assert!(
                (lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0),
                "seed {seed}, zeta {zeta}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn szego_roundtrip_tight() {
    for seed in 500..520 {
        let mut rng = seeded_rng(seed);
        let count = 1 + (seed as usize) % 11;
        let alphas = random_alphas(&mut rng, count, 0.9);
        let chain = szego_chain(&alphas).unwrap();
        let (recovered, trail) = szego_inverse(chain.last().unwrap(), count).unwrap();
        let worst = alphas
            .iter()
            .zip(&recovered)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10, "seed {seed}: worst {worst:.3e}");
        assert_eq!(trail.last().unwrap().degree(), Some(0));
    }
}
