//! Complex polynomials in canonical (trimmed) form, the Szegő `*`-involution,
//! Horner evaluation, exact-shape division, and an Aberth–Ehrlich root finder.
//!
//! Coefficients are stored ascending by power of `z`. The zero polynomial is
//! the empty coefficient list and has degree `None`. Every operation returns
//! a canonical polynomial: trailing coefficients whose modulus falls below the
//! relative trim tolerance are removed, so degree queries are reliable for the
//! height and generator machinery built on top.

use num_complex::Complex64;

use crate::{Error, Result};

/// Relative threshold under which a trailing coefficient counts as zero.
pub const TRIM_REL_TOL: f64 = 1e-11;
/// Absolute floor for the trim threshold, guards the all-tiny case.
pub const TRIM_ABS_FLOOR: f64 = 1e-300;

/// Maximum Aberth–Ehrlich iterations.
const ROOTS_MAX_ITER: u32 = 200;
/// Aberth convergence: stop when the largest correction step is below this.
const ROOTS_STEP_TOL: f64 = 1e-13;

/// A univariate polynomial with complex coefficients, ascending by degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing near-zero coefficients.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Polynomial::constant(Complex64::new(1.0, 0.0))
    }

    /// A constant polynomial.
    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Polynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    /// `c * z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Polynomial::new(coeffs)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Polynomial::one();
        for &r in roots {
            p = p.mul(&Polynomial::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    /// Coefficient slice, ascending by power.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, reading absent entries as zero.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> Complex64 {
        self.coeffs
            .last()
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Largest coefficient modulus (the natural scale of the polynomial).
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn trim(&mut self) {
        let scale = self.max_coeff_norm();
        let tol = f64::max(TRIM_REL_TOL * scale, TRIM_ABS_FLOOR);
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= tol {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.iter().all(|c| c.norm() <= tol) {
            self.coeffs.clear();
        }
    }

    /// Coefficientwise sum.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Polynomial::new(coeffs)
    }

    /// Coefficientwise difference.
    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Polynomial::new(coeffs)
    }

    /// Product by convolution of coefficients.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs =
            vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `z` (degree shift).
    pub fn mul_z(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial::new(coeffs)
    }

    /// Horner evaluation; the zero polynomial evaluates to 0.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Complex64::new(k as f64, 0.0))
            .collect();
        Polynomial::new(coeffs)
    }

    /// The reversed-conjugate polynomial `p*(z) = z^k conj(p(1/conj(z)))` at
    /// nominal degree `k`: coefficient `j` of the output is the conjugate of
    /// coefficient `k - j` of the input. `k` must be at least the stored
    /// degree; it is the degree of the family member, not of the
    /// representation, so intermediate algebra with degree drops stays
    /// well-defined.
    pub fn star(&self, k: usize) -> Result<Polynomial> {
        if let Some(deg) = self.degree() {
            if k < deg {
                return Err(Error::StarDegree { k, deg });
            }
        }
        let coeffs = (0..=k).map(|j| self.coeff(k - j).conj()).collect();
        Ok(Polynomial::new(coeffs))
    }

    /// Quotient `q` with `p = q d` up to a remainder whose max-norm must stay
    /// below `tol * max|coeff of p|`. The relative remainder norm is returned
    /// alongside the quotient.
    pub fn divide_exact(&self, divisor: &Polynomial, tol: f64) -> Result<(Polynomial, f64)> {
        if divisor.is_zero() {
            return Err(Error::InvalidInput("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok((Polynomial::zero(), 0.0));
        }
        let dd = divisor.degree().expect("nonzero divisor");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); rem.len().saturating_sub(dd)];
        if quot.is_empty() {
            quot.push(Complex64::new(0.0, 0.0));
        }
        let mut top = rem.len();
        while top > dd {
            let k = top - 1 - dd;
            let c = rem[top - 1] / lead;
            quot[k] = c;
            for j in 0..=dd {
                let v = divisor.coeff(j) * c;
                rem[k + j] -= v;
            }
            top -= 1;
        }
        let scale = self.max_coeff_norm();
        let rem_norm = rem[..top.min(rem.len())]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let residual = if scale > 0.0 { rem_norm / scale } else { 0.0 };
        if residual > tol {
            return Err(Error::NotDivisible { residual, tol });
        }
        Ok((Polynomial::new(quot), residual))
    }

    /// All `deg p` roots with multiplicity, by Aberth–Ehrlich simultaneous
    /// iteration started on the Cauchy-bound circle. Order is unspecified.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let deg = match self.degree() {
            None | Some(0) => return Err(Error::RootsOfConstant),
            Some(d) => d,
        };
        // Exact zero roots come off first so the iteration never sees them.
        let mut zeros_at_origin = 0;
        let scale = self.max_coeff_norm();
        let tol0 = f64::max(TRIM_REL_TOL * scale, TRIM_ABS_FLOOR);
        while zeros_at_origin < deg && self.coeff(zeros_at_origin).norm() <= tol0 {
            zeros_at_origin += 1;
        }
        let reduced = Polynomial::new(self.coeffs[zeros_at_origin..].to_vec());
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
        if let Some(d) = reduced.degree() {
            if d >= 1 {
                roots.extend(aberth(&reduced)?);
            }
        }
        Ok(roots)
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({:.6}{:+.6}i)", c.re, c.im)?,
                1 => write!(f, "({:.6}{:+.6}i)z", c.re, c.im)?,
                _ => write!(f, "({:.6}{:+.6}i)z^{}", c.re, c.im, k)?,
            }
        }
        Ok(())
    }
}

/// Aberth–Ehrlich iteration on a polynomial with nonzero constant term.
fn aberth(p: &Polynomial) -> Result<Vec<Complex64>> {
    let deg = p.degree().expect("degree >= 1");
    let dp = p.derivative();
    let lead = p.leading();

    // Cauchy bound: all roots lie within |z| <= 1 + max |c_i / c_d|.
    let cauchy = 1.0
        + p.coeffs()[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);

    // Fixed angular offset so the start configuration never coincides with a
    // symmetric root pattern such as the roots of unity.
    let mut zs: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.3891;
            Complex64::from_polar(cauchy, angle)
        })
        .collect();

    let mut max_step = f64::INFINITY;
    for iter in 0..ROOTS_MAX_ITER {
        max_step = 0.0;
        for k in 0..deg {
            let zk = zs[k];
            let pv = p.evaluate(zk);
            if pv.norm() == 0.0 {
                continue;
            }
            let dv = dp.evaluate(zk);
            let newton = if dv.norm() > 0.0 {
                pv / dv
            } else {
                // Flat spot: nudge off it and retry next sweep.
                zs[k] += Complex64::new(1e-6 * (1.0 + zk.norm()), 1e-6);
                max_step = f64::INFINITY;
                continue;
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in zs.iter().enumerate() {
                if j != k {
                    let d = zk - zj;
                    if d.norm() > 0.0 {
                        repulsion += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 0.0 { newton / denom } else { newton };
            zs[k] = zk - step;
            max_step = f64::max(max_step, step.norm());
        }
        if max_step < ROOTS_STEP_TOL {
            // One Newton polish per root tightens the residual.
            for z in zs.iter_mut() {
                let dv = dp.evaluate(*z);
                if dv.norm() > 0.0 {
                    *z -= p.evaluate(*z) / dv;
                }
            }
            return Ok(zs);
        }
        let _ = iter;
    }
    Err(Error::RootsDiverged {
        iterations: ROOTS_MAX_ITER,
        max_step,
    })
}

/// A quotient of polynomials with a nonzero denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(RationalFunction {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// The reciprocal, swapping numerator and denominator.
    pub fn reciprocal(&self) -> Result<RationalFunction> {
        RationalFunction::new(self.denominator.clone(), self.numerator.clone())
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.numerator.evaluate(z) / self.denominator.evaluate(z)
    }
}

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
