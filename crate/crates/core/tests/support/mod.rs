//! Shared test support: a dense complex eigensolver used as an oracle
//! against the Szegő-polynomial spectrum route, seeded random generators,
//! and set-comparison helpers. Everything here is test-only and independent
//! of the library's root-finding path.

// Each test target compiles this module separately and uses its own subset.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cmv_core::interp::{InterpolationProblem, Omega};
use cmv_core::vecpoly::VectorPolynomial;

pub type CMat = DMatrix<Complex64>;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Householder reduction to upper Hessenberg form by unitary similarity.
fn hessenberg(mut a: CMat) -> CMat {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        v[0] += phase * norm;
        let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            continue;
        }
        // A <- P A P with P = I - 2 v v^H / |v|^2 acting on rows/cols k+1..n.
        for col in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * a[(k + 1 + i, col)])
                .sum();
            let f = dot * Complex64::new(2.0 / vnorm2, 0.0);
            for (i, vi) in v.iter().enumerate() {
                let d = vi * f;
                a[(k + 1 + i, col)] -= d;
            }
        }
        for row in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| a[(row, k + 1 + i)] * vi)
                .sum();
            let f = dot * Complex64::new(2.0 / vnorm2, 0.0);
            for (i, vi) in v.iter().enumerate() {
                let d = f * vi.conj();
                a[(row, k + 1 + i)] -= d;
            }
        }
    }
    a
}

fn wilkinson_shift(h: &CMat, p: usize) -> Complex64 {
    let a = h[(p - 1, p - 1)];
    let b = h[(p - 1, p)];
    let c = h[(p, p - 1)];
    let d = h[(p, p)];
    let tr_half = (a + d) * Complex64::new(0.5, 0.0);
    let diff_half = (a - d) * Complex64::new(0.5, 0.0);
    let disc = (diff_half * diff_half + b * c).sqrt();
    let e1 = tr_half + disc;
    let e2 = tr_half - disc;
    if (e1 - d).norm() < (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One explicit single-shift QR sweep on the active block `l..=p`.
fn qr_step(h: &mut CMat, l: usize, p: usize, shift: Complex64) {
    let n = h.nrows();
    let mut rotations = Vec::with_capacity(p - l);
    for i in l..=p {
        h[(i, i)] -= shift;
    }
    for i in l..p {
        let a = h[(i, i)];
        let b = h[(i + 1, i)];
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if norm < 1e-300 {
            (Complex64::new(1.0, 0.0), czero())
        } else {
            (a / norm, b / norm)
        };
        // Rows i, i+1 <- [[conj(c), conj(s)], [-s, c]] [rows].
        for col in i..n {
            let x = h[(i, col)];
            let y = h[(i + 1, col)];
            h[(i, col)] = c.conj() * x + s.conj() * y;
            h[(i + 1, col)] = -s * x + c * y;
        }
        rotations.push((i, c, s));
    }
    for (i, c, s) in rotations {
        // Columns i, i+1 <- [cols] [[c, -conj(s)], [s, conj(c)]]^H form.
        let top = (i + 2).min(p) + 1;
        for row in 0..top.min(n) {
            let x = h[(row, i)];
            let y = h[(row, i + 1)];
            h[(row, i)] = x * c + y * s;
            h[(row, i + 1)] = -x * s.conj() + y * c.conj();
        }
    }
    for i in l..=p {
        h[(i, i)] += shift;
    }
}

/// All eigenvalues of a dense complex matrix by shifted Hessenberg QR.
/// Intended for the small dimensions used in these tests.
pub fn dense_eigenvalues(a: &CMat) -> Vec<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![a[(0, 0)]];
    }
    let mut h = hessenberg(a.clone());
    let mut eigs = Vec::with_capacity(n);
    let mut p = n - 1;
    let mut stuck = 0u32;
    let tol = 1e-14;
    loop {
        // Deflate converged trailing eigenvalues.
        while p > 0 {
            let sub = h[(p, p - 1)].norm();
            let scale = h[(p - 1, p - 1)].norm() + h[(p, p)].norm();
            if sub <= tol * scale.max(1e-300) {
                eigs.push(h[(p, p)]);
                p -= 1;
                stuck = 0;
            } else {
                break;
            }
        }
        if p == 0 {
            eigs.push(h[(0, 0)]);
            break;
        }
        let mut l = p;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if sub <= tol * scale.max(1e-300) {
                break;
            }
            l -= 1;
        }
        let shift = if stuck > 0 && stuck.is_multiple_of(12) {
            // Exceptional shift to break symmetric stagnation.
            h[(p, p)] + Complex64::new(0.75, 0.5) * h[(p, p - 1)]
        } else {
            wilkinson_shift(&h, p)
        };
        qr_step(&mut h, l, p, shift);
        stuck += 1;
        assert!(stuck < 600, "dense QR failed to converge at block size {}", p + 1);
    }
    eigs
}

/// Asserts two complex multisets agree within `tol` by greedy matching.
pub fn assert_sets_close(got: &[Complex64], want: &[Complex64], tol: f64, label: &str) {
    assert_eq!(got.len(), want.len(), "{label}: cardinality mismatch");
    let mut used = vec![false; got.len()];
    for w in want {
        let mut best = None;
        let mut best_dist = f64::INFINITY;
        for (i, g) in got.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (g - w).norm();
            if d < best_dist {
                best_dist = d;
                best = Some(i);
            }
        }
        let i = best.expect("nonempty");
        assert!(
            best_dist <= tol,
            "{label}: no match for {w} within {tol:.1e} (closest {best_dist:.3e})"
        );
        used[i] = true;
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_alpha(rng: &mut ChaCha8Rng, max_radius: f64) -> Complex64 {
    let r = max_radius * rng.gen::<f64>().sqrt();
    let t = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, t)
}

pub fn random_alphas(rng: &mut ChaCha8Rng, count: usize, max_radius: f64) -> Vec<Complex64> {
    (0..count).map(|_| random_alpha(rng, max_radius)).collect()
}

/// A random interpolation problem with distinct abscissas and a mixture of
/// finite and infinite values.
pub fn random_problem(rng: &mut ChaCha8Rng, max_nodes: usize) -> InterpolationProblem {
    loop {
        let n = rng.gen_range(1..=max_nodes);
        let mut zs: Vec<Complex64> = Vec::new();
        while zs.len() < n {
            let z = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if zs.iter().all(|u| (u - z).norm() > 1e-2) {
                zs.push(z);
            }
        }
        let omegas: Vec<Omega> = (0..n)
            .map(|_| {
                if rng.gen::<f64>() < 0.15 {
                    Omega::Infinity
                } else {
                    Omega::Finite(Complex64::new(
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(-2.0..2.0),
                    ))
                }
            })
            .collect();
        if let Ok(problem) = InterpolationProblem::from_values(&zs, &omegas) {
            return problem;
        }
    }
}

/// Numerical column rank by column-pivoted Gram-Schmidt with
/// reorthogonalization: columns whose remaining norm falls below
/// `rel_tol * largest pivot` do not count. Independent of the library's
/// SVD-based rank decisions.
pub fn pivoted_rank(mat: &CMat, rel_tol: f64) -> usize {
    let (m, n) = (mat.nrows(), mat.ncols());
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..m).map(|i| mat[(i, j)]).collect())
        .collect();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut first_pivot = 0.0f64;
    let norm = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    loop {
        // Largest remaining column is the pivot.
        let (best, best_norm) = cols
            .iter()
            .enumerate()
            .map(|(j, v)| (j, norm(v)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0));
        if basis.is_empty() {
            first_pivot = best_norm;
        }
        if best_norm <= rel_tol * first_pivot.max(1e-300) || cols.is_empty() {
            return basis.len();
        }
        let mut q = cols.swap_remove(best);
        let inv = 1.0 / norm(&q);
        for x in &mut q {
            *x *= inv;
        }
        for col in &mut cols {
            for _pass in 0..2 {
                let proj: Complex64 = q.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
                for (ci, qi) in col.iter_mut().zip(&q) {
                    *ci -= qi * proj;
                }
            }
        }
        basis.push(q);
        if cols.is_empty() {
            return basis.len();
        }
    }
}

/// Exhaustive dense-sweep oracle for the problem height: builds the
/// condition matrix directly from the canonical basis at every height and
/// checks for rank deficiency with pivoted Gram-Schmidt, no early exit.
pub fn dense_h_min(problem: &InterpolationProblem, rel_tol: f64) -> usize {
    let n = problem.len();
    let mut found = Vec::new();
    for h in 0..=n {
        let mat = CMat::from_fn(n, h + 1, |j, k| {
            let e = VectorPolynomial::basis_e(k);
            let node = &problem.nodes()[j];
            let (v1, v2) = e.evaluate(node.z());
            node.a1() * v1 + node.a2() * v2
        });
        if pivoted_rank(&mat, rel_tol) < h + 1 {
            found.push(h);
        }
    }
    *found.first().expect("height bound guarantees a solution")
}

/// Builds the CMV matrix entries as a nalgebra matrix for oracle use.
pub fn cmv_as_dense(m: &cmv_core::cmv::CmvMatrix) -> CMat {
    CMat::from_fn(m.n(), m.n(), |i, j| m.entry(i, j))
}
