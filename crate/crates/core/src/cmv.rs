//! Finite CMV matrices: Verblunsky parameters, Szegő systems (forward and
//! inverse recurrences), the LM factorization, reflection, spectra,
//! eigenvectors, Weyl data, and the simplest last-coefficient problem.
//!
//! Conventions fixed throughout: the terminal coefficient is `beta = 1`, the
//! dimension `n` is even wherever a matrix is assembled (odd `n` would need
//! the sieving procedure, which is not supported), and the Szegő recurrence
//! reads `Phi_k = z Phi_{k-1} - conj(alpha_{k-1}) Phi_{k-1}^*`.

use num_complex::Complex64;

use crate::linalg::{self, CMat};
use crate::poly::{Polynomial, RationalFunction};
use crate::{Error, Result};

/// Strictness margin for `|alpha| < 1`.
const ALPHA_MARGIN: f64 = 1e-12;
/// Admissibility cutoff for inverse recurrence steps.
const SCHUR_MARGIN: f64 = 1e-10;
/// Acceptable defect in `C^H C = I` after assembly.
const UNITARITY_TOL: f64 = 1e-10;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Verblunsky parameters `(alpha_0, ..., alpha_{n-2}; beta)` with every
/// `alpha` strictly inside the unit disk and `beta = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerblunskyParams {
    alphas: Vec<Complex64>,
    beta: Complex64,
}

impl VerblunskyParams {
    /// Parameters with the terminal coefficient fixed to 1.
    pub fn new(alphas: Vec<Complex64>) -> Result<Self> {
        Self::with_beta(alphas, one())
    }

    pub fn with_beta(alphas: Vec<Complex64>, beta: Complex64) -> Result<Self> {
        for (j, a) in alphas.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::InvalidInput(format!("alpha_{j} is not finite")));
            }
            if a.norm() > 1.0 - ALPHA_MARGIN {
                return Err(Error::NotSchur {
                    index: j,
                    modulus: a.norm(),
                });
            }
        }
        if (beta - one()).norm() > ALPHA_MARGIN {
            return Err(Error::InvalidInput(format!(
                "beta must be 1 (got {beta}); general unimodular beta is unsupported"
            )));
        }
        Ok(VerblunskyParams { alphas, beta })
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Matrix dimension `n = len(alphas) + 1`.
    pub fn n(&self) -> usize {
        self.alphas.len() + 1
    }

    /// `rho_j = sqrt(1 - |alpha_j|^2)`.
    pub fn rho(&self, j: usize) -> f64 {
        (1.0 - self.alphas[j].norm_sqr()).sqrt()
    }

    /// `kappa_m = prod_{j<m} (1 - |alpha_j|^2)^{-1/2}`, with `kappa_0 = 1`.
    pub fn kappa(&self, m: usize) -> f64 {
        (0..m).map(|j| 1.0 / self.rho(j)).product()
    }

    /// Reflected parameters `lambda_k = -conj(alpha_{2l-2-k})`; an involution
    /// that preserves the spectrum. Requires even `n`.
    pub fn reflect(&self) -> Result<VerblunskyParams> {
        if !self.n().is_multiple_of(2) {
            return Err(Error::OddDimension(self.n()));
        }
        let m = self.alphas.len();
        let lambdas = (0..m).map(|k| -self.alphas[m - 1 - k].conj()).collect();
        VerblunskyParams::new(lambdas)
    }
}

/// The monic Szegő chain `Phi_0, ..., Phi_{n-1}` plus the terminal
/// `tilde Phi_n` whose roots form the spectrum.
#[derive(Debug, Clone)]
pub struct SzegoSystem {
    phis: Vec<Polynomial>,
    phi_tilde: Polynomial,
}

impl SzegoSystem {
    /// `Phi_k` for `k <= n-1`.
    pub fn phi(&self, k: usize) -> &Polynomial {
        &self.phis[k]
    }

    pub fn phis(&self) -> &[Polynomial] {
        &self.phis
    }

    /// The terminal polynomial `tilde Phi_n`.
    pub fn phi_tilde(&self) -> &Polynomial {
        &self.phi_tilde
    }
}

/// Runs the Szegő recurrence on a raw coefficient prefix, returning
/// `Phi_0, ..., Phi_k` for `k = alphas.len()`.
pub fn szego_chain(alphas: &[Complex64]) -> Result<Vec<Polynomial>> {
    let mut phis = Vec::with_capacity(alphas.len() + 1);
    phis.push(Polynomial::one());
    for (k, alpha) in alphas.iter().enumerate() {
        let prev = &phis[k];
        let next = prev.mul_z().sub(&prev.star(k)?.scale(alpha.conj()));
        phis.push(next);
    }
    Ok(phis)
}

/// The `beta = 1` closing step `z Phi - Phi^*` at nominal degree `deg Phi`.
pub fn szego_closing(phi: &Polynomial) -> Result<Polynomial> {
    let k = phi
        .degree()
        .ok_or_else(|| Error::InvalidInput("closing step needs a nonzero polynomial".into()))?;
    Ok(phi.mul_z().sub(&phi.star(k)?))
}

/// Builds the full Szegő system of `params` and validates its shape.
pub fn szego_forward(params: &VerblunskyParams) -> Result<SzegoSystem> {
    let phis = szego_chain(params.alphas())?;
    let last = phis.last().expect("chain contains Phi_0");
    let phi_tilde = last
        .mul_z()
        .sub(&last.star(params.n() - 1)?.scale(params.beta().conj()));

    for (k, phi) in phis.iter().enumerate() {
        if phi.degree() != Some(k) || (phi.leading() - one()).norm() > 1e-12 {
            return Err(Error::Numerical {
                stage: "szego_forward",
                detail: format!("Phi_{k} is not monic of degree {k}"),
            });
        }
    }
    if phi_tilde.degree() != Some(params.n())
        || (phi_tilde.evaluate(Complex64::new(0.0, 0.0)) + one()).norm() > 1e-10
    {
        return Err(Error::Numerical {
            stage: "szego_forward",
            detail: "terminal polynomial violates tildePhi_n(0) = -1".into(),
        });
    }
    Ok(SzegoSystem { phis, phi_tilde })
}

/// Inverts the Szegő recurrence: recovers `alpha_0, ..., alpha_{k-1}` from a
/// monic degree-`k` polynomial with all roots in the open unit disk, together
/// with the descending chain `Phi_{k-1}, ..., Phi_0`.
pub fn szego_inverse(phi: &Polynomial, k: usize) -> Result<(Vec<Complex64>, Vec<Polynomial>)> {
    if phi.degree() != Some(k) || k == 0 {
        return Err(Error::InvalidInput(format!(
            "szego_inverse needs a monic polynomial of degree k = {k} >= 1"
        )));
    }
    if (phi.leading() - one()).norm() > 1e-10 {
        return Err(Error::InvalidInput("polynomial is not monic".into()));
    }
    let mut alphas = vec![Complex64::new(0.0, 0.0); k];
    let mut trail = Vec::with_capacity(k);
    let mut current = phi.clone();
    for j in (1..=k).rev() {
        let alpha = -current.evaluate(Complex64::new(0.0, 0.0)).conj();
        if alpha.norm() >= 1.0 - SCHUR_MARGIN {
            return Err(Error::NotSchur {
                index: j - 1,
                modulus: alpha.norm(),
            });
        }
        let numer = current.add(&current.star(j)?.scale(alpha.conj()));
        let scaled = numer.scale(one() / Complex64::new(1.0 - alpha.norm_sqr(), 0.0));
        let (prev, _residual) =
            scaled
                .divide_exact(&Polynomial::z(), 1e-8)
                .map_err(|e| Error::Numerical {
                    stage: "szego_inverse",
                    detail: format!("step {j}: {e}"),
                })?;
        alphas[j - 1] = alpha;
        trail.push(prev.clone());
        current = prev;
    }
    Ok((alphas, trail))
}

/// A dense CMV matrix, the product of the block factors `L` and `M`.
#[derive(Debug, Clone)]
pub struct CmvMatrix {
    mat: CMat,
}

impl CmvMatrix {
    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.mat[(i, j)]).collect())
            .collect()
    }

    /// Largest entry of `C^H C - I`.
    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.mat)
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.mat[(i, j)] * x[j]).sum())
            .collect()
    }
}

/// The 2x2 block `Theta(alpha) = [[conj(alpha), rho], [rho, -alpha]]`.
fn theta(alpha: Complex64) -> [[Complex64; 2]; 2] {
    let rho = Complex64::new((1.0 - alpha.norm_sqr()).sqrt(), 0.0);
    [[alpha.conj(), rho], [rho, -alpha]]
}

/// Assembles the CMV matrix `C = L M` for even `n`, with
/// `L = diag(Theta(alpha_0), Theta(alpha_2), ...)` and
/// `M = diag(1, Theta(alpha_1), ..., Theta(alpha_{2l-3}), 1)`.
pub fn assemble_cmv(params: &VerblunskyParams) -> Result<CmvMatrix> {
    let n = params.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut l = CMat::from_element(n, n, zero);
    let mut m = CMat::from_element(n, n, zero);
    for (block, row) in (0..n).step_by(2).enumerate() {
        let t = theta(params.alphas()[2 * block]);
        l[(row, row)] = t[0][0];
        l[(row, row + 1)] = t[0][1];
        l[(row + 1, row)] = t[1][0];
        l[(row + 1, row + 1)] = t[1][1];
    }
    m[(0, 0)] = one();
    m[(n - 1, n - 1)] = one();
    for (block, row) in (1..n - 1).step_by(2).enumerate() {
        let t = theta(params.alphas()[2 * block + 1]);
        m[(row, row)] = t[0][0];
        m[(row, row + 1)] = t[0][1];
        m[(row + 1, row)] = t[1][0];
        m[(row + 1, row + 1)] = t[1][1];
    }
    let mat = l * m;
    let defect = linalg::unitarity_defect(&mat);
    if defect > UNITARITY_TOL {
        return Err(Error::Numerical {
            stage: "assemble_cmv",
            detail: format!("unitarity defect {defect:.3e}"),
        });
    }
    Ok(CmvMatrix { mat })
}

/// The spectrum of a CMV matrix as the root set of `tilde Phi_n`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub zetas: Vec<Complex64>,
    /// Closest pair separation; the spectrum is simple in exact arithmetic,
    /// but near-degenerate parameters can cluster roots.
    pub min_separation: f64,
}

impl Spectrum {
    pub fn is_clustered(&self) -> bool {
        self.min_separation < 1e-8
    }
}

/// Computes the `n` eigenvalues as roots of the terminal Szegő polynomial.
pub fn spectrum(params: &VerblunskyParams) -> Result<Spectrum> {
    let system = szego_forward(params)?;
    let zetas = system.phi_tilde().roots()?;
    for z in &zetas {
        if (z.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::Numerical {
                stage: "spectrum",
                detail: format!(
                    "root {z} is off the unit circle by {:.3e}",
                    (z.norm() - 1.0).abs()
                ),
            });
        }
    }
    let mut min_separation = f64::INFINITY;
    for i in 0..zetas.len() {
        for j in 0..i {
            min_separation = min_separation.min((zetas[i] - zetas[j]).norm());
        }
    }
    Ok(Spectrum {
        zetas,
        min_separation,
    })
}

/// Componentwise eigenvector formula: `x_{2k} = z^{-k} kappa_{2k} Phi_{2k}`,
/// `x_{2k+1} = z^{-k-1} kappa_{2k+1} Phi_{2k+1}^*`, evaluated at `zeta`.
pub fn eigenvector(params: &VerblunskyParams, zeta: Complex64) -> Result<Vec<Complex64>> {
    if zeta.norm() == 0.0 {
        return Err(Error::InvalidInput(
            "eigenvector formula needs zeta != 0".into(),
        ));
    }
    let n = params.n();
    let phis = szego_chain(params.alphas())?;
    let mut x = Vec::with_capacity(n);
    for (idx, phi) in phis.iter().take(n).enumerate() {
        let value = if idx % 2 == 0 {
            let k = idx / 2;
            zeta.powi(-(k as i32)) * params.kappa(idx) * phi.evaluate(zeta)
        } else {
            let k = (idx - 1) / 2;
            zeta.powi(-(k as i32 + 1)) * params.kappa(idx) * phi.star(idx)?.evaluate(zeta)
        };
        x.push(value);
    }
    Ok(x)
}

/// Weyl data of the truncated matrix: `W = tildePhi_{n-m-1} / Phi_{n-m-2}`,
/// built from the first `n - m - 2` Verblunsky coefficients.
#[derive(Debug, Clone)]
pub struct WeylData {
    w: RationalFunction,
}

impl WeylData {
    /// The reciprocal Weyl function `W` itself.
    pub fn w(&self) -> &RationalFunction {
        &self.w
    }

    /// The classical Weyl function `w = 1/W`.
    pub fn w_classical(&self) -> Result<RationalFunction> {
        self.w.reciprocal()
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.w.evaluate(z)
    }
}

/// Builds the Weyl data for dimension `n` and `m` missing coefficients from a
/// known prefix of Verblunsky coefficients (only the first `n - m - 2` are
/// used; supplying fewer is an arity error).
pub fn weyl(known_prefix: &[Complex64], n: usize, m: usize) -> Result<WeylData> {
    if m < 1 || 2 * m > n {
        return Err(Error::InvalidInput(format!(
            "need 1 <= m <= n/2 (got n = {n}, m = {m})"
        )));
    }
    let needed = n - m - 2;
    if known_prefix.len() < needed {
        return Err(Error::InvalidInput(format!(
            "need {needed} leading coefficients for the Weyl function, got {}",
            known_prefix.len()
        )));
    }
    let phis = szego_chain(&known_prefix[..needed])?;
    let denom = phis.last().expect("chain nonempty").clone();
    let numer = szego_closing(&denom)?;
    Ok(WeylData {
        w: RationalFunction::new(numer, denom)?,
    })
}

/// Outcome of the two-eigenvalue last-coefficient problem.
#[derive(Debug, Clone, PartialEq)]
pub enum LastAlphaOutcome {
    Unique(Complex64),
    InfinitelyMany,
    NoSolution(&'static str),
}

/// Threshold for deciding the Möbius interpolation degeneracies.
const CLASSIFY_TOL: f64 = 1e-9;

/// Finds `alpha_{n-2}` from `alpha_0..alpha_{n-3}` and two prescribed
/// eigenvalues: solves `b(zeta_j) = tau_j` for the disk automorphism
/// `b(s) = (s + alpha) / (1 + s conj(alpha))` and classifies by the
/// degeneracy of the pair `(tau_1 zeta_1, tau_2 zeta_2)`.
pub fn last_alpha_simple(
    known: &[Complex64],
    zeta1: Complex64,
    zeta2: Complex64,
) -> Result<LastAlphaOutcome> {
    if (zeta1 - zeta2).norm() < CLASSIFY_TOL {
        return Err(Error::InvalidInput("zeta_1 and zeta_2 must differ".into()));
    }
    for (label, z) in [("zeta_1", zeta1), ("zeta_2", zeta2)] {
        if (z.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidInput(format!("{label} is not unimodular")));
        }
    }
    let phis = szego_chain(known)?;
    let phi = phis.last().expect("chain nonempty");
    let deg = phi.degree().unwrap_or(0);
    let star = phi.star(deg)?;
    let mut taus = [Complex64::new(0.0, 0.0); 2];
    for (t, z) in taus.iter_mut().zip([zeta1, zeta2]) {
        let denom = z * phi.evaluate(z);
        if denom.norm() < 1e-12 {
            return Err(Error::Degenerate(format!(
                "Phi_{deg} vanishes at prescribed eigenvalue {z}"
            )));
        }
        *t = star.evaluate(z) / denom;
    }
    let t1 = taus[0] * zeta1;
    let t2 = taus[1] * zeta2;
    if (t1 - t2).norm() > CLASSIFY_TOL {
        // b(zeta_j) = tau_j is linear in (alpha, conj(alpha)).
        let conj_alpha = (taus[0] - taus[1] - zeta1 + zeta2) / (t2 - t1);
        let alpha = taus[0] - zeta1 + t1 * conj_alpha;
        if alpha.norm() >= 1.0 {
            return Ok(LastAlphaOutcome::NoSolution("outside disk"));
        }
        Ok(LastAlphaOutcome::Unique(alpha))
    } else if (taus[1] + zeta1).norm() <= CLASSIFY_TOL && (taus[0] + zeta2).norm() <= CLASSIFY_TOL {
        Ok(LastAlphaOutcome::InfinitelyMany)
    } else {
        Ok(LastAlphaOutcome::NoSolution("tau_1 zeta_1 = tau_2 zeta_2"))
    }
}
