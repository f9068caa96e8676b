//! Two-dimensional vector-polynomials and their height grading.
//!
//! A vector-polynomial is a pair of complex polynomials. Its height
//! `h = max(2 deg P1, 2 deg P2 + 1)` replaces the polynomial degree as the
//! grading of the space: the canonical basis element of height `2k` is
//! `(z^k, 0)` and of height `2k + 1` is `(0, z^k)`. The zero vector has
//! height `None`, ordered below every finite height.

use num_complex::Complex64;

use crate::poly::Polynomial;
use crate::{Error, Result};

/// A pair of complex polynomials graded by height.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPolynomial {
    p1: Polynomial,
    p2: Polynomial,
}

impl VectorPolynomial {
    pub fn new(p1: Polynomial, p2: Polynomial) -> Self {
        VectorPolynomial { p1, p2 }
    }

    pub fn zero() -> Self {
        VectorPolynomial {
            p1: Polynomial::zero(),
            p2: Polynomial::zero(),
        }
    }

    pub fn p1(&self) -> &Polynomial {
        &self.p1
    }

    pub fn p2(&self) -> &Polynomial {
        &self.p2
    }

    pub fn is_zero(&self) -> bool {
        self.p1.is_zero() && self.p2.is_zero()
    }

    /// Height `max(2 deg P1, 2 deg P2 + 1)`; `None` for the zero vector.
    pub fn height(&self) -> Option<usize> {
        let h1 = self.p1.degree().map(|d| 2 * d);
        let h2 = self.p2.degree().map(|d| 2 * d + 1);
        h1.max(h2)
    }

    /// The coefficient that determines the height: `P1[k]` when `h = 2k`,
    /// `P2[k]` when `h = 2k + 1`. Zero for the zero vector.
    pub fn leading_at_height(&self) -> Complex64 {
        match self.height() {
            None => Complex64::new(0.0, 0.0),
            Some(h) if h % 2 == 0 => self.p1.coeff(h / 2),
            Some(h) => self.p2.coeff(h / 2),
        }
    }

    /// Canonical basis element of height `k`: `(z^j, 0)` for `k = 2j`,
    /// `(0, z^j)` for `k = 2j + 1`.
    pub fn basis_e(k: usize) -> VectorPolynomial {
        let one = Complex64::new(1.0, 0.0);
        if k.is_multiple_of(2) {
            VectorPolynomial::new(Polynomial::monomial(one, k / 2), Polynomial::zero())
        } else {
            VectorPolynomial::new(Polynomial::zero(), Polynomial::monomial(one, k / 2))
        }
    }

    /// Coordinates in the canonical basis: `c[2j] = P1[j]`, `c[2j+1] = P2[j]`,
    /// truncated at the height. The zero vector expands to the empty list.
    pub fn expand_in_basis(&self) -> Vec<Complex64> {
        let Some(h) = self.height() else {
            return Vec::new();
        };
        (0..=h)
            .map(|k| {
                if k % 2 == 0 {
                    self.p1.coeff(k / 2)
                } else {
                    self.p2.coeff(k / 2)
                }
            })
            .collect()
    }

    /// Rebuilds a vector-polynomial from canonical-basis coordinates.
    pub fn from_basis_coeffs(coeffs: &[Complex64]) -> VectorPolynomial {
        let mut c1 = Vec::new();
        let mut c2 = Vec::new();
        for (k, &c) in coeffs.iter().enumerate() {
            if k % 2 == 0 {
                c1.push(c);
            } else {
                c2.push(c);
            }
        }
        VectorPolynomial::new(Polynomial::new(c1), Polynomial::new(c2))
    }

    pub fn add(&self, other: &VectorPolynomial) -> VectorPolynomial {
        VectorPolynomial::new(self.p1.add(&other.p1), self.p2.add(&other.p2))
    }

    pub fn sub(&self, other: &VectorPolynomial) -> VectorPolynomial {
        VectorPolynomial::new(self.p1.sub(&other.p1), self.p2.sub(&other.p2))
    }

    pub fn scale(&self, c: Complex64) -> VectorPolynomial {
        VectorPolynomial::new(self.p1.scale(c), self.p2.scale(c))
    }

    /// Module action of the polynomial ring: `h(S p) = h(p) + 2 deg S`.
    pub fn scalar_poly_mul(&self, s: &Polynomial) -> VectorPolynomial {
        VectorPolynomial::new(s.mul(&self.p1), s.mul(&self.p2))
    }

    /// Applies a constant 2x2 matrix `[[a, b], [c, d]]` componentwise.
    pub fn transform(&self, m: [[Complex64; 2]; 2]) -> VectorPolynomial {
        let p1 = self.p1.scale(m[0][0]).add(&self.p2.scale(m[0][1]));
        let p2 = self.p1.scale(m[1][0]).add(&self.p2.scale(m[1][1]));
        VectorPolynomial::new(p1, p2)
    }

    /// Given `h(p) = h(q) = n`, returns `c` with `h(p + c q) <= n - 1`,
    /// cancelling the height-determining leading coefficients.
    pub fn reduce_height_pair(
        &self,
        other: &VectorPolynomial,
    ) -> Result<(Complex64, VectorPolynomial)> {
        let hp = self.height();
        let hq = other.height();
        if hp != hq || hp.is_none() {
            return Err(Error::HeightMismatch(hp, hq));
        }
        let n = hp.expect("checked nonzero");
        let c = -self.leading_at_height() / other.leading_at_height();
        let mut result = self.add(&other.scale(c));
        // The top coordinates cancel by construction; drop the roundoff dust
        // so the height bound holds exactly.
        if result.height() == Some(n) {
            let mut coords = result.expand_in_basis();
            coords.truncate(n);
            result = VectorPolynomial::from_basis_coeffs(&coords);
        }
        Ok((c, result))
    }

    /// Evaluates both components at `z`.
    pub fn evaluate(&self, z: Complex64) -> (Complex64, Complex64) {
        (self.p1.evaluate(z), self.p2.evaluate(z))
    }

    /// Largest coefficient modulus across both components.
    pub fn max_coeff_norm(&self) -> f64 {
        f64::max(self.p1.max_coeff_norm(), self.p2.max_coeff_norm())
    }

    /// Rescales so the height-determining leading coefficient is 1.
    pub fn normalized(&self) -> VectorPolynomial {
        let lead = self.leading_at_height();
        if lead.norm() == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::new(1.0, 0.0) / lead)
    }
}
