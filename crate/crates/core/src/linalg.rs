//! Dense complex linear algebra for the generator and constraint solves:
//! a one-sided Jacobi SVD, numerical nullspace extraction, and least
//! squares. Private to the crate.
//!
//! The SVD is computed in-crate: the generator machinery needs singular
//! values trustworthy down to a 1e-9 relative rank tolerance, and the
//! factorization is re-verified cheaply by the callers' residual checks.
//! nalgebra supplies only the matrix container and arithmetic.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub(crate) type CMat = DMatrix<Complex64>;

const MAX_JACOBI_SWEEPS: usize = 64;
/// Off-diagonal Gram tolerance driving sweep convergence.
const JACOBI_EPS: f64 = 1e-14;

/// Builds a dense matrix from a row-major closure.
pub(crate) fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> CMat {
    CMat::from_fn(rows, cols, f)
}

/// Thin SVD of a tall-or-square matrix (`m >= n`): `A = U diag(s) V^H` with
/// `U` of shape m x n (columns for vanishing singular values are zero) and
/// `V` a full n x n unitary. Singular values are sorted descending.
pub(crate) struct ThinSvd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v: CMat,
}

pub(crate) fn jacobi_svd_tall(a: &CMat) -> Result<ThinSvd> {
    let (m, n) = (a.nrows(), a.ncols());
    assert!(m >= n, "jacobi_svd_tall needs rows >= cols");
    let mut b = a.clone();
    let mut v = CMat::identity(n, n);

    // Absolute rotation floor: noise-scale column pairs must not keep the
    // sweep alive forever. Anything below 1e-30 of the squared scale is
    // invisible at the rank tolerances used by the callers.
    let scale_sq = (0..n)
        .map(|j| (0..m).map(|i| b[(i, j)].norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    let floor = 1e-30 * scale_sq;

    for sweep in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut apq = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    app += bp.norm_sqr();
                    aqq += bq.norm_sqr();
                    apq += bp.conj() * bq;
                }
                let bound = (app * aqq).sqrt();
                if apq.norm() <= JACOBI_EPS * bound || apq.norm() <= floor || bound == 0.0 {
                    continue;
                }
                rotated = true;
                // Remove the phase of the off-diagonal Gram entry, then a
                // real Jacobi rotation diagonalizes the 2x2 block.
                let g = apq.norm();
                let phase = apq / g;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let jpp = phase * cs;
                let jpq = phase * sn;
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    b[(i, p)] = bp * jpp - bq * sn;
                    b[(i, q)] = bp * jpq + bq * cs;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * jpp - vq * sn;
                    v[(i, q)] = vp * jpq + vq * cs;
                }
            }
        }
        if !rotated {
            break;
        }
        if sweep + 1 == MAX_JACOBI_SWEEPS {
            return Err(Error::Numerical {
                stage: "jacobi_svd",
                detail: "sweep limit reached without convergence".into(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| b[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let sigma_max = norms.iter().copied().fold(0.0, f64::max);
    let dust = 1e-18 * sigma_max.max(1e-300);
    let mut u = CMat::zeros(m, n);
    let mut v_sorted = CMat::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (out, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        v_sorted.set_column(out, &v.column(j));
        if norms[j] > dust {
            let inv = Complex64::new(1.0 / norms[j], 0.0);
            for i in 0..m {
                u[(i, out)] = b[(i, j)] * inv;
            }
        }
    }
    Ok(ThinSvd {
        u,
        sigma,
        v: v_sorted,
    })
}

/// Orthonormal basis of the numerical nullspace: directions with singular
/// value at most `rel_tol * sigma_max`. Exact for the dimension count on
/// wide matrices (columns exceeding the row count).
pub(crate) fn nullspace(a: &CMat, rel_tol: f64) -> Result<CMat> {
    let (m, n) = (a.nrows(), a.ncols());
    if m >= n {
        let svd = jacobi_svd_tall(a)?;
        let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
        let tol = if sigma_max > 0.0 {
            rel_tol * sigma_max
        } else {
            f64::INFINITY
        };
        let keep: Vec<usize> = (0..n).filter(|&i| svd.sigma[i] <= tol).collect();
        let mut basis = CMat::zeros(n, keep.len());
        for (j, &i) in keep.iter().enumerate() {
            basis.set_column(j, &svd.v.column(i));
        }
        Ok(basis)
    } else {
        // A = V1 S U1^H from the SVD of A^H; the nullspace of A is the
        // orthogonal complement of the columns of U1 carrying sigma above
        // the tolerance.
        let svd = jacobi_svd_tall(&a.adjoint())?;
        let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
        let tol = if sigma_max > 0.0 {
            rel_tol * sigma_max
        } else {
            f64::INFINITY
        };
        let row_space: Vec<usize> = (0..m).filter(|&i| svd.sigma[i] > tol).collect();
        let mut partial = CMat::zeros(n, row_space.len());
        for (j, &i) in row_space.iter().enumerate() {
            partial.set_column(j, &svd.u.column(i));
        }
        let completed = complete_basis(&partial, n);
        let nullity = n - row_space.len();
        let mut basis = CMat::zeros(n, nullity);
        for j in 0..nullity {
            basis.set_column(j, &completed.column(row_space.len() + j));
        }
        Ok(basis)
    }
}

/// Extends orthonormal columns to an orthonormal basis of C^dim by
/// Gram-Schmidt (with reorthogonalization) against coordinate vectors.
fn complete_basis(partial: &CMat, dim: usize) -> CMat {
    let k = partial.ncols();
    let mut basis = CMat::zeros(dim, dim);
    for j in 0..k {
        basis.set_column(j, &partial.column(j));
    }
    let mut filled = k;
    for e in 0..dim {
        if filled == dim {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[e] = Complex64::new(1.0, 0.0);
        for _pass in 0..2 {
            for j in 0..filled {
                let proj: Complex64 = (0..dim).map(|i| basis[(i, j)].conj() * v[i]).sum();
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi -= basis[(i, j)] * proj;
                }
            }
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for (i, vi) in v.iter().enumerate() {
                basis[(i, filled)] = vi / Complex64::new(norm, 0.0);
            }
            filled += 1;
        }
    }
    basis
}

/// Minimum-norm least squares for a tall-or-square system via the SVD
/// pseudoinverse, dropping directions below `rel_tol * sigma_max`. Returns
/// the solution and the residual 2-norm.
pub(crate) fn lstsq(a: &CMat, b: &[Complex64], rel_tol: f64) -> Result<(Vec<Complex64>, f64)> {
    let (m, n) = (a.nrows(), a.ncols());
    if m < n {
        return Err(Error::Numerical {
            stage: "lstsq",
            detail: "wide systems are not used here".into(),
        });
    }
    let svd = jacobi_svd_tall(a)?;
    let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
    let tol = rel_tol * sigma_max;
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let s = svd.sigma[i];
        if s <= tol || s == 0.0 {
            continue;
        }
        let coef: Complex64 = (0..m)
            .map(|r| svd.u[(r, i)].conj() * b[r])
            .sum::<Complex64>()
            / Complex64::new(s, 0.0);
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += svd.v[(j, i)] * coef;
        }
    }
    let mut residual = 0.0f64;
    for r in 0..m {
        let mut acc = -b[r];
        for c in 0..n {
            acc += a[(r, c)] * x[c];
        }
        residual += acc.norm_sqr();
    }
    Ok((x, residual.sqrt()))
}

/// Max-modulus entry of `a^H a - I`, the unitarity defect.
pub(crate) fn unitarity_defect(a: &CMat) -> f64 {
    let gram = a.adjoint() * a;
    let n = a.ncols();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    worst
}
