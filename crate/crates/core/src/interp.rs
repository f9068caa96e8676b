//! The linear interpolation problem for two-dimensional vector-polynomials:
//! `a_{j,1} P1(z_j) + a_{j,2} P2(z_j) = 0` at distinct nodes, its minimal and
//! second generators, the inductive height-bound construction, and the
//! two-generator description of the full solution module.
//!
//! The generator heights obey `h(r) <= n` and `h(q) = 2n + 1 - h(r)`; every
//! solution is `S r + T q` for polynomials `S`, `T`. Numerical rank decisions
//! are made by SVD with a relative tolerance (default [`RANK_TOL`]).

use num_complex::Complex64;

use crate::linalg::{self, CMat};
use crate::poly::{Polynomial, RationalFunction};
use crate::vecpoly::VectorPolynomial;
use crate::{Error, Result};

/// Relative singular-value threshold declaring a nontrivial nullspace.
pub const RANK_TOL: f64 = 1e-9;

/// Minimum allowed separation between node abscissas.
const NODE_SEPARATION: f64 = 1e-10;

/// An interpolation value: a point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Omega {
    Finite(Complex64),
    Infinity,
}

/// One interpolation condition `a1 P1(z) + a2 P2(z) = 0`, with `(a1, a2)`
/// scaled to unit Euclidean length for conditioning.
#[derive(Debug, Clone, Copy)]
pub struct InterpolationNode {
    z: Complex64,
    a1: Complex64,
    a2: Complex64,
}

impl InterpolationNode {
    pub fn new(z: Complex64, a1: Complex64, a2: Complex64) -> Result<Self> {
        for (label, v) in [("z", z), ("a1", a1), ("a2", a2)] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidInput(format!("node field {label} is not finite")));
            }
        }
        let scale = (a1.norm_sqr() + a2.norm_sqr()).sqrt();
        if scale == 0.0 {
            return Err(Error::InvalidInput(
                "node coefficients must satisfy |a1| + |a2| > 0".into(),
            ));
        }
        let inv = Complex64::new(1.0 / scale, 0.0);
        Ok(InterpolationNode {
            z,
            a1: a1 * inv,
            a2: a2 * inv,
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    pub fn a2(&self) -> Complex64 {
        self.a2
    }

    /// The condition functional applied to a vector-polynomial.
    pub fn apply(&self, p: &VectorPolynomial) -> Complex64 {
        let (v1, v2) = p.evaluate(self.z);
        self.a1 * v1 + self.a2 * v2
    }
}

/// The problem `(I_n)`: a list of conditions at pairwise distinct nodes.
#[derive(Debug, Clone)]
pub struct InterpolationProblem {
    nodes: Vec<InterpolationNode>,
}

impl InterpolationProblem {
    pub fn new(nodes: Vec<InterpolationNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput(
                "interpolation problem needs at least one node".into(),
            ));
        }
        for i in 0..nodes.len() {
            for j in 0..i {
                if (nodes[i].z - nodes[j].z).norm() <= NODE_SEPARATION {
                    return Err(Error::InvalidInput(format!(
                        "nodes {j} and {i} nearly coincide at z = {}",
                        nodes[i].z
                    )));
                }
            }
        }
        Ok(InterpolationProblem { nodes })
    }

    /// Builds the problem from classical interpolation data
    /// `P1(z_j)/P2(z_j) = omega_j`: finite values give `(1, -omega)`,
    /// infinity demands a pole via `(0, 1)`.
    pub fn from_values(zs: &[Complex64], omegas: &[Omega]) -> Result<Self> {
        if zs.len() != omegas.len() {
            return Err(Error::InvalidInput(format!(
                "{} abscissas vs {} values",
                zs.len(),
                omegas.len()
            )));
        }
        let nodes = zs
            .iter()
            .zip(omegas)
            .map(|(&z, &omega)| match omega {
                Omega::Finite(w) => InterpolationNode::new(z, Complex64::new(1.0, 0.0), -w),
                Omega::Infinity => InterpolationNode::new(
                    z,
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                ),
            })
            .collect::<Result<Vec<_>>>()?;
        InterpolationProblem::new(nodes)
    }

    pub fn nodes(&self) -> &[InterpolationNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Worst condition violation of `p` across nodes, relative to the
    /// coefficient scale of `p`. Zero for the zero vector.
    pub fn residual(&self, p: &VectorPolynomial) -> f64 {
        let scale = p.max_coeff_norm();
        if scale == 0.0 {
            return 0.0;
        }
        self.nodes
            .iter()
            .map(|node| node.apply(p).norm())
            .fold(0.0, f64::max)
            / scale
    }

    /// Condition matrix over the canonical basis `e_0..e_h`: entry `(j, k)`
    /// is the node-`j` functional applied to `e_k`.
    fn condition_matrix(&self, h: usize) -> CMat {
        let n = self.nodes.len();
        // Powers z_j^i for i <= h/2.
        let max_pow = h / 2;
        let mut powers = vec![vec![Complex64::new(1.0, 0.0); max_pow + 1]; n];
        for (j, node) in self.nodes.iter().enumerate() {
            for i in 1..=max_pow {
                powers[j][i] = powers[j][i - 1] * node.z;
            }
        }
        linalg::from_fn(n, h + 1, |j, k| {
            let i = k / 2;
            if k % 2 == 0 {
                self.nodes[j].a1 * powers[j][i]
            } else {
                self.nodes[j].a2 * powers[j][i]
            }
        })
    }
}

/// The minimal and second generators of a problem, normalized so the
/// height-determining leading coefficient is 1.
#[derive(Debug, Clone)]
pub struct GeneratorPair {
    pub r: VectorPolynomial,
    pub q: VectorPolynomial,
    pub h_min: usize,
    pub h_second: usize,
}

/// Computes the minimal generator with the default rank tolerance.
pub fn minimal_generator(problem: &InterpolationProblem) -> Result<(VectorPolynomial, usize)> {
    minimal_generator_with(problem, RANK_TOL)
}

/// Sweeps candidate heights `0, 1, ..., n` and returns the first nontrivial
/// nullspace direction of the condition matrix, i.e. the minimal generator
/// and its height.
pub fn minimal_generator_with(
    problem: &InterpolationProblem,
    rank_tol: f64,
) -> Result<(VectorPolynomial, usize)> {
    let n = problem.len();
    for h in 0..=n {
        let matrix = problem.condition_matrix(h);
        let basis = linalg::nullspace(&matrix, rank_tol)?;
        if basis.ncols() == 0 {
            continue;
        }
        let coords: Vec<Complex64> = basis.column(0).iter().copied().collect();
        let candidate = VectorPolynomial::from_basis_coeffs(&coords);
        if candidate.height() != Some(h) {
            // The direction lost its top coordinate to trimming; a genuine
            // solution at this height would have been seen earlier.
            continue;
        }
        return Ok((candidate.normalized(), h));
    }
    Err(Error::Numerical {
        stage: "minimal_generator",
        detail: format!(
            "no nullspace found for heights 0..={n}; contradicts the height bound h(I_n) <= n"
        ),
    })
}

/// Computes the second generator given the minimal one, with the default
/// rank tolerance.
pub fn second_generator(
    problem: &InterpolationProblem,
    r: &VectorPolynomial,
    h_min: usize,
) -> Result<VectorPolynomial> {
    second_generator_with(problem, r, h_min, RANK_TOL)
}

/// Finds the second generator at height `H = 2n + 1 - h_min` by computing the
/// nullspace at that height and deflating the polynomial multiples
/// `{z^j r : h(z^j r) <= H}`; the single surviving direction is the result.
pub fn second_generator_with(
    problem: &InterpolationProblem,
    r: &VectorPolynomial,
    h_min: usize,
    rank_tol: f64,
) -> Result<VectorPolynomial> {
    let n = problem.len();
    let h_second = 2 * n + 1 - h_min;
    let matrix = problem.condition_matrix(h_second);
    let basis = linalg::nullspace(&matrix, rank_tol)?;
    let dim = basis.ncols();

    // Multiples of r fitting below the target height; their heights have the
    // opposite parity of h_second, so they never touch its top coordinate.
    let multiples = (h_second - h_min).div_ceil(2);
    let mut b = CMat::zeros(h_second + 1, multiples);
    let mut zj_r = r.clone();
    for j in 0..multiples {
        let coords = zj_r.expand_in_basis();
        for (i, &v) in coords.iter().enumerate() {
            b[(i, j)] = v;
        }
        zj_r = zj_r.scalar_poly_mul(&Polynomial::z());
    }
    if dim != multiples + 1 {
        return Err(Error::RankAmbiguity {
            stage: "second_generator",
            detail: format!(
                "nullspace dimension {dim} at height {h_second}, expected {}",
                multiples + 1
            ),
        });
    }

    // Coordinates of the multiples inside the nullspace basis; the second
    // generator is the direction orthogonal to all of them.
    let projected = basis.adjoint() * &b;
    let survivors = linalg::nullspace(&projected.adjoint(), 1e-8)?;
    if survivors.ncols() != 1 {
        return Err(Error::RankAmbiguity {
            stage: "second_generator",
            detail: format!(
                "deflation left {} directions, expected exactly 1",
                survivors.ncols()
            ),
        });
    }
    let coeffs = &basis * survivors.column(0);
    let coords: Vec<Complex64> = coeffs.iter().copied().collect();
    let q = VectorPolynomial::from_basis_coeffs(&coords);
    if q.height() != Some(h_second) {
        return Err(Error::RankAmbiguity {
            stage: "second_generator",
            detail: format!(
                "deflated direction has height {:?}, expected {h_second}",
                q.height()
            ),
        });
    }
    Ok(q.normalized())
}

/// Convenience: both generators and their heights.
pub fn generator_pair(problem: &InterpolationProblem) -> Result<GeneratorPair> {
    generator_pair_with(problem, RANK_TOL)
}

pub fn generator_pair_with(problem: &InterpolationProblem, rank_tol: f64) -> Result<GeneratorPair> {
    let (r, h_min) = minimal_generator_with(problem, rank_tol)?;
    let q = second_generator_with(problem, &r, h_min, rank_tol)?;
    let h_second = 2 * problem.len() + 1 - h_min;
    Ok(GeneratorPair {
        r,
        q,
        h_min,
        h_second,
    })
}

/// Coefficient rows below which a transformed node coefficient is regarded
/// as exactly zero inside the inductive construction.
const INDUCTIVE_ZERO: f64 = 1e-12;

/// A constructive (not necessarily minimal) solution with height at most `n`,
/// built by peeling one node per step with the rank-one reduction matrices:
/// an upper-triangular step on even node counts, a lower-triangular step on
/// odd ones. Serves as an independent witness for the height bound.
pub fn inductive_solution(problem: &InterpolationProblem) -> Result<VectorPolynomial> {
    let rows: Vec<(Complex64, Complex64, Complex64)> = problem
        .nodes()
        .iter()
        .map(|node| (node.z, node.a1, node.a2))
        .collect();
    let solution = peel(&rows);
    let res = problem.residual(&solution);
    if res > 1e-9 {
        return Err(Error::Numerical {
            stage: "inductive_solution",
            detail: format!("residual {res:.3e} above tolerance"),
        });
    }
    Ok(solution)
}

fn renormalize(row: (Complex64, Complex64, Complex64)) -> (Complex64, Complex64, Complex64) {
    let (z, a1, a2) = row;
    let scale = (a1.norm_sqr() + a2.norm_sqr()).sqrt();
    if scale == 0.0 {
        return row;
    }
    let inv = Complex64::new(1.0 / scale, 0.0);
    (z, a1 * inv, a2 * inv)
}

fn peel(rows: &[(Complex64, Complex64, Complex64)]) -> VectorPolynomial {
    let count = rows.len();
    if count == 1 {
        let (_, a1, a2) = rows[0];
        return VectorPolynomial::new(Polynomial::constant(-a2), Polynomial::constant(a1));
    }
    if count.is_multiple_of(2) {
        // Upper-triangular step; degenerate branch first.
        if rows.iter().all(|&(_, a1, _)| a1.norm() <= INDUCTIVE_ZERO) {
            return VectorPolynomial::new(Polynomial::one(), Polynomial::zero());
        }
        let pivot = rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.norm().total_cmp(&b.1 .1.norm()))
            .map(|(i, _)| i)
            .expect("nonempty rows");
        let (zp, p1, p2) = rows[pivot];
        let rest: Vec<_> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pivot)
            .map(|(_, &(z, a1, a2))| {
                // (beta1, beta2) = (a1, a2) Omega_0, then stretch beta1 by (zp - z).
                let b1 = a1 / p1;
                let b2 = a2 - a1 * p2 / p1;
                renormalize((z, (zp - z) * b1, b2))
            })
            .collect();
        let q = peel(&rest);
        // r = Omega_0 diag(zp - z, 1) q.
        let zp_minus_z = Polynomial::new(vec![zp, Complex64::new(-1.0, 0.0)]);
        let stretched = zp_minus_z.mul(q.p1());
        let r1 = stretched
            .scale(Complex64::new(1.0, 0.0) / p1)
            .sub(&q.p2().scale(p2 / p1));
        VectorPolynomial::new(r1, q.p2().clone())
    } else {
        // Lower-triangular step.
        if rows.iter().all(|&(_, _, a2)| a2.norm() <= INDUCTIVE_ZERO) {
            return VectorPolynomial::new(Polynomial::zero(), Polynomial::one());
        }
        let pivot = rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .2.norm().total_cmp(&b.1 .2.norm()))
            .map(|(i, _)| i)
            .expect("nonempty rows");
        let (zp, p1, p2) = rows[pivot];
        let rest: Vec<_> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pivot)
            .map(|(_, &(z, a1, a2))| {
                // (delta1, delta2) = (a1, a2) Omega_1, then stretch delta2.
                let d1 = a1 - a2 * p1 / p2;
                let d2 = a2 / p2;
                renormalize((z, d1, (zp - z) * d2))
            })
            .collect();
        let q = peel(&rest);
        // r = Omega_1 diag(1, zp - z) q.
        let zp_minus_z = Polynomial::new(vec![zp, Complex64::new(-1.0, 0.0)]);
        let stretched = zp_minus_z.mul(q.p2());
        let r2 = stretched
            .scale(Complex64::new(1.0, 0.0) / p2)
            .sub(&q.p1().scale(p1 / p2));
        VectorPolynomial::new(q.p1().clone(), r2)
    }
}

/// Expresses a solution `p` as `S r + T q`. The degree bounds follow from the
/// heights: generator heights have opposite parity, so no top-coefficient
/// cancellation can occur and the expansion is an exact triangular system,
/// solved here in the least-squares sense with a reconstruction check.
pub fn decompose(
    problem: &InterpolationProblem,
    pair: &GeneratorPair,
    p: &VectorPolynomial,
) -> Result<(Polynomial, Polynomial)> {
    let res = problem.residual(p);
    if res > 1e-7 {
        return Err(Error::Contract(format!(
            "decompose input violates the problem (residual {res:.3e})"
        )));
    }
    let Some(hp) = p.height() else {
        return Ok((Polynomial::zero(), Polynomial::zero()));
    };
    let s_terms = if hp >= pair.h_min {
        (hp - pair.h_min) / 2 + 1
    } else {
        0
    };
    let t_terms = if hp >= pair.h_second {
        (hp - pair.h_second) / 2 + 1
    } else {
        0
    };
    let rows = hp + 2; // basis coordinates 0..=hp, plus one parity guard row
    let mut a = CMat::zeros(rows, s_terms + t_terms);
    let mut fill = |col: usize, v: &VectorPolynomial| {
        let coords = v.expand_in_basis();
        for (i, &value) in coords.iter().enumerate() {
            if i < rows {
                a[(i, col)] = value;
            }
        }
    };
    let mut zj_r = pair.r.clone();
    for j in 0..s_terms {
        fill(j, &zj_r);
        zj_r = zj_r.scalar_poly_mul(&Polynomial::z());
    }
    let mut zj_q = pair.q.clone();
    for j in 0..t_terms {
        fill(s_terms + j, &zj_q);
        zj_q = zj_q.scalar_poly_mul(&Polynomial::z());
    }
    let mut rhs = vec![Complex64::new(0.0, 0.0); rows];
    for (i, &v) in p.expand_in_basis().iter().enumerate() {
        rhs[i] = v;
    }
    let (x, residual) = linalg::lstsq(&a, &rhs, 1e-13)?;
    let scale = f64::max(p.max_coeff_norm(), 1.0);
    if residual > 1e-8 * scale {
        return Err(Error::Contract(format!(
            "decomposition residual {residual:.3e} exceeds 1e-8 x scale; \
             p is not in the module generated by (r, q)"
        )));
    }
    let s = Polynomial::new(x[..s_terms].to_vec());
    let t = Polynomial::new(x[s_terms..].to_vec());
    Ok((s, t))
}

/// A member of the solution family of the rational problem, with a warning
/// flag raised when numerator and denominator share a root (the converse of
/// the two-generator description requires them coprime).
#[derive(Debug, Clone)]
pub struct FamilyValue {
    pub value: RationalFunction,
    pub shared_root: bool,
}

/// Evaluates the family member `(S R1 + T Q1) / (S R2 + T Q2)`.
pub fn family_eval(pair: &GeneratorPair, s: &Polynomial, t: &Polynomial) -> Result<FamilyValue> {
    let numerator = s.mul(pair.r.p1()).add(&t.mul(pair.q.p1()));
    let denominator = s.mul(pair.r.p2()).add(&t.mul(pair.q.p2()));
    if denominator.is_zero() {
        return Err(Error::InvalidInput(
            "family member has identically zero denominator".into(),
        ));
    }
    let mut shared_root = false;
    if denominator.degree().unwrap_or(0) >= 1 && !numerator.is_zero() {
        let num_scale = numerator.max_coeff_norm();
        for root in denominator.roots()? {
            if numerator.evaluate(root).norm() <= 1e-8 * num_scale * root.norm().max(1.0) {
                shared_root = true;
            }
        }
    }
    Ok(FamilyValue {
        value: RationalFunction::new(numerator, denominator)?,
        shared_root,
    })
}
