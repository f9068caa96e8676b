//! The mixed inverse spectral problem: recover the trailing `m` Verblunsky
//! coefficients of an order-`n` CMV matrix from the leading `n - m - 1`
//! coefficients and `2m` prescribed eigenvalues.
//!
//! Pipeline: the prescribed eigenvalues and the Weyl function of the known
//! block produce interpolation values for the reflected matrix's Weyl
//! function; the resulting `2m`-node problem is solved through its generator
//! pair under three scalar constraints (monic numerator and denominator of
//! prescribed degrees, free term -1). When the minimal generator has a
//! nonzero free term the constrained solution is unique and the missing
//! coefficients follow by the inverse Szegő recurrence; otherwise the
//! solutions form a one-parameter family which is sampled and filtered for
//! genuine completions.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cmv;
use crate::interp::{self, GeneratorPair, InterpolationProblem, Omega};
use crate::linalg;
use crate::poly::Polynomial;
use crate::{Error, Result};

/// Tolerance knobs threaded through the pipeline.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Relative singular-value threshold for nullspace decisions.
    pub rank_tol: f64,
    /// Relative threshold on `|R1(0)|` declaring the degenerate branch.
    pub degen_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            rank_tol: interp::RANK_TOL,
            degen_tol: 1e-6,
        }
    }
}

/// Final check: every prescribed eigenvalue must sit in the reassembled
/// spectrum within this distance. Looser than stagewise tolerances because
/// root finding and the inverse recurrence compound.
const SPECTRUM_MATCH_TOL: f64 = 1e-7;
/// Unimodularity and distinctness tolerance on prescribed eigenvalues.
const ZETA_TOL: f64 = 1e-8;
/// Closing-relation tolerance in the recovery step.
const CLOSING_TOL: f64 = 1e-8;

/// Problem data: dimension, trailing-gap size, known coefficients, and the
/// prescribed eigenvalues.
#[derive(Debug, Clone)]
pub struct MispInput {
    n: usize,
    m: usize,
    known_alphas: Vec<Complex64>,
    zetas: Vec<Complex64>,
}

impl MispInput {
    pub fn new(
        n: usize,
        m: usize,
        known_alphas: Vec<Complex64>,
        zetas: Vec<Complex64>,
    ) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::OddDimension(n));
        }
        if m < 1 || 2 * m > n {
            return Err(Error::InvalidInput(format!(
                "need 1 <= m <= n/2 (got n = {n}, m = {m})"
            )));
        }
        if known_alphas.len() != n - m - 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} known coefficients, got {}",
                n - m - 1,
                known_alphas.len()
            )));
        }
        if zetas.len() != 2 * m {
            return Err(Error::InvalidInput(format!(
                "expected {} eigenvalues, got {}",
                2 * m,
                zetas.len()
            )));
        }
        for (j, a) in known_alphas.iter().enumerate() {
            if a.norm() >= 1.0 {
                return Err(Error::NotSchur {
                    index: j,
                    modulus: a.norm(),
                });
            }
        }
        for (j, z) in zetas.iter().enumerate() {
            if (z.norm() - 1.0).abs() > ZETA_TOL {
                return Err(Error::InvalidInput(format!(
                    "zeta_{j} = {z} is off the unit circle by {:.3e}",
                    (z.norm() - 1.0).abs()
                )));
            }
        }
        for i in 0..zetas.len() {
            for j in 0..i {
                if (zetas[i] - zetas[j]).norm() <= ZETA_TOL {
                    return Err(Error::InvalidInput(format!(
                        "zeta_{j} and zeta_{i} nearly coincide"
                    )));
                }
            }
        }
        Ok(MispInput {
            n,
            m,
            known_alphas,
            zetas,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn known_alphas(&self) -> &[Complex64] {
        &self.known_alphas
    }

    pub fn zetas(&self) -> &[Complex64] {
        &self.zetas
    }
}

/// Interpolation values for the reflected Weyl function at the prescribed
/// eigenvalues. With an empty known prefix (only `n = 2`, `m = 1`) the
/// prescribed eigenvalues are roots of the unknown numerator itself and all
/// values are zero; otherwise the reduction through the known block's Weyl
/// function applies, with `alpha` the last known coefficient.
pub fn compute_omegas(input: &MispInput) -> Result<Vec<Complex64>> {
    if input.known_alphas.is_empty() {
        return Ok(vec![Complex64::new(0.0, 0.0); input.zetas.len()]);
    }
    let alpha = *input.known_alphas.last().expect("nonempty");
    let weyl = cmv::weyl(&input.known_alphas, input.n, input.m)?;
    let one = Complex64::new(1.0, 0.0);
    let mut omegas = Vec::with_capacity(input.zetas.len());
    for (j, &zeta) in input.zetas.iter().enumerate() {
        let w = weyl.evaluate(zeta);
        let denom = one - alpha - zeta.conj() * w;
        if denom.norm() < 1e-12 {
            return Err(Error::Infeasible {
                stage: "compute_omegas",
                reason: format!("Weyl denominator vanishes at node {j} (zeta = {zeta})"),
            });
        }
        let numer = (one + alpha.conj()) * denom - (one - Complex64::new(alpha.norm_sqr(), 0.0));
        omegas.push(zeta * numer / denom);
    }
    Ok(omegas)
}

/// The constrained solve outcome before coefficient recovery.
#[derive(Debug, Clone)]
pub enum ConstrainedCore {
    /// Unique scalars `(a, b, c)` and the resulting polynomial pair.
    Unique {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        lambda1: Polynomial,
        lambda2: Polynomial,
        constraint_residual: f64,
    },
    /// `R1(0) = 0`: `b` stays free; the member at `b` is `fixed + b * r`.
    Family {
        a: Complex64,
        c: Complex64,
        fixed1: Polynomial,
        fixed2: Polynomial,
        constraint_residual: f64,
    },
}

/// Solves the three scalar constraints (numerator monic of degree `m + 1`,
/// denominator monic of degree `m`, numerator free term -1) over the ansatz
/// `lambda = (a z + b) r + c q`. The system is assembled generically; the
/// uniqueness gate is `|R1(0)|` measured against the coefficient scale of
/// `r`.
pub fn solve_constrained(
    problem: &InterpolationProblem,
    pair: &GeneratorPair,
    m: usize,
    opts: &SolveOptions,
) -> Result<ConstrainedCore> {
    let n = problem.len();
    if n != 2 * m {
        return Err(Error::InvalidInput(format!(
            "constrained solve expects a 2m-node problem (n = {n}, m = {m})"
        )));
    }
    if pair.h_min + 1 < 2 * m || pair.h_min > 2 * m {
        return Err(Error::Infeasible {
            stage: "solve_constrained",
            reason: format!(
                "inconsistent spectral data: h(I_2m) = {} outside {{2m-1, 2m}} = {{{}, {}}}",
                pair.h_min,
                2 * m - 1,
                2 * m
            ),
        });
    }
    let r1 = pair.r.p1();
    let r2 = pair.r.p2();
    let q1 = pair.q.p1();
    let q2 = pair.q.p2();

    // Rows: coefficient of z^{m+1} in lambda1, coefficient of z^m in
    // lambda2, and lambda1(0); columns are the unknowns (a, b, c).
    let zero = Complex64::new(0.0, 0.0);
    let rows = [
        [r1.coeff(m), r1.coeff(m + 1), q1.coeff(m + 1)],
        [r2.coeff(m.wrapping_sub(1)), r2.coeff(m), q2.coeff(m)],
        [zero, r1.coeff(0), q1.coeff(0)],
    ];
    let rhs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ];

    let r1_at_zero = r1.evaluate(zero);
    let degenerate = r1_at_zero.norm() <= opts.degen_tol * pair.r.max_coeff_norm();

    if !degenerate {
        let a_mat = linalg::from_fn(3, 3, |i, j| rows[i][j]);
        let (x, residual) = linalg::lstsq(&a_mat, &rhs, 1e-12)?;
        if residual > 1e-7 {
            return Err(Error::Infeasible {
                stage: "solve_constrained",
                reason: format!(
                    "constraint system inconsistent (residual {residual:.3e}) despite R1(0) != 0"
                ),
            });
        }
        let (a, b, c) = (x[0], x[1], x[2]);
        let az_plus_b = Polynomial::new(vec![b, a]);
        let lambda1 = az_plus_b.mul(r1).add(&q1.scale(c));
        let lambda2 = az_plus_b.mul(r2).add(&q2.scale(c));
        return Ok(ConstrainedCore::Unique {
            a,
            b,
            c,
            lambda1,
            lambda2,
            constraint_residual: residual,
        });
    }

    // Degenerate branch: b drops out of every row; solve for (a, c) and use
    // the remaining equation as a consistency check.
    let a_mat = linalg::from_fn(3, 2, |i, j| if j == 0 { rows[i][0] } else { rows[i][2] });
    let (x, residual) = linalg::lstsq(&a_mat, &rhs, 1e-12)?;
    if residual > 1e-7 {
        return Err(Error::Infeasible {
            stage: "solve_constrained",
            reason: format!(
                "no Schur completion: degenerate constraint system has residual {residual:.3e}"
            ),
        });
    }
    let (a, c) = (x[0], x[1]);
    let az = Polynomial::new(vec![zero, a]);
    let fixed1 = az.mul(r1).add(&q1.scale(c));
    let fixed2 = az.mul(r2).add(&q2.scale(c));
    Ok(ConstrainedCore::Family {
        a,
        c,
        fixed1,
        fixed2,
        constraint_residual: residual,
    })
}

/// Maps a recovered reflected pair back to the trailing coefficients:
/// checks the `beta = 1` closing relation, inverts the Szegő recurrence on
/// the denominator, and applies the reflection index map
/// `alpha_{n-2-k} = -conj(lambda_k)`.
pub fn recover_alphas(
    lambda1: &Polynomial,
    lambda2: &Polynomial,
    input: &MispInput,
) -> Result<Vec<Complex64>> {
    let m = input.m;
    if lambda2.degree() != Some(m) {
        return Err(Error::Infeasible {
            stage: "recover_alphas",
            reason: format!(
                "denominator degree {:?}, expected {m}",
                lambda2.degree()
            ),
        });
    }
    let closing = cmv::szego_closing(lambda2)?;
    let defect = lambda1.sub(&closing).max_coeff_norm();
    let scale = f64::max(lambda1.max_coeff_norm(), 1.0);
    if defect > CLOSING_TOL * scale {
        return Err(Error::Infeasible {
            stage: "recover_alphas",
            reason: format!("beta=1 closing relation violated (defect {defect:.3e})"),
        });
    }
    let (lambdas, _) = cmv::szego_inverse(lambda2, m).map_err(|e| match e {
        Error::NotSchur { .. } => Error::Infeasible {
            stage: "recover_alphas",
            reason: "reconstructed polynomial not Schur".into(),
        },
        other => other,
    })?;
    // lambda_k determines alpha_{n-2-k}; ascending output order.
    Ok((0..m).map(|i| -lambdas[m - 1 - i].conj()).collect())
}

/// Diagnostics attached to every outcome that got past the generators.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub h_min: usize,
    pub h_second: usize,
    /// `R1(0)` as `[re, im]`.
    pub r1_at_0: [f64; 2],
    /// Named stage residuals, deterministically ordered.
    pub residuals: BTreeMap<String, f64>,
}

/// A successfully recovered tail of Verblunsky coefficients.
#[derive(Debug, Clone)]
pub struct UniqueSolution {
    /// `alpha_{n-m-1}, ..., alpha_{n-2}`.
    pub recovered: Vec<Complex64>,
    pub lambda1: Polynomial,
    pub lambda2: Polynomial,
    pub diagnostics: Diagnostics,
}

/// One sampled member of a non-unique family.
#[derive(Debug, Clone)]
pub struct FamilySample {
    pub b: Complex64,
    pub valid: bool,
    /// Recovered tail when valid.
    pub recovered: Option<Vec<Complex64>>,
    /// Failure stage for invalid samples.
    pub reason: Option<String>,
}

/// The degenerate outcome: a one-parameter family `lambda(b) = fixed + b r`.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    pub generators: GeneratorPair,
    /// Fixed scalars of the constrained ansatz.
    pub a: Complex64,
    pub c: Complex64,
    /// `a z r + c q`, the member at `b = 0`.
    pub fixed1: Polynomial,
    pub fixed2: Polynomial,
    pub samples: Vec<FamilySample>,
    pub diagnostics: Diagnostics,
}

impl SolutionFamily {
    /// The polynomial pair at a given free parameter.
    pub fn member(&self, b: Complex64) -> (Polynomial, Polynomial) {
        (
            self.fixed1.add(&self.generators.r.p1().scale(b)),
            self.fixed2.add(&self.generators.r.p2().scale(b)),
        )
    }

    /// Human-readable description of the free parameter.
    pub fn describe(&self) -> String {
        format!(
            "lambda(b) = (a z + b) r + c q with a = {}, c = {} fixed and b free; \
             valid members are those whose denominator stays Schur",
            self.a, self.c
        )
    }

    /// Fits the free parameter against a known denominator polynomial by
    /// least squares on coefficients of `fixed2 + b R2 = lambda2`.
    pub fn fit_free_parameter(&self, lambda2: &Polynomial) -> Result<Complex64> {
        let r2 = self.generators.r.p2();
        let diff = lambda2.sub(&self.fixed2);
        let deg = r2
            .degree()
            .ok_or_else(|| Error::Degenerate("family has R2 = 0; cannot fit b".into()))?;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for k in 0..=deg.max(diff.degree().unwrap_or(0)) {
            num += r2.coeff(k).conj() * diff.coeff(k);
            den += r2.coeff(k).norm_sqr();
        }
        Ok(num / Complex64::new(den, 0.0))
    }
}

/// Why and where the problem was infeasible.
#[derive(Debug, Clone, Serialize)]
pub struct Infeasibility {
    pub stage: String,
    pub reason: String,
}

/// The three-way outcome of the mixed inverse spectral problem.
#[derive(Debug, Clone)]
pub enum MispOutcome {
    Unique(UniqueSolution),
    NonUniqueFamily(Box<SolutionFamily>),
    Infeasible(Infeasibility),
}

impl MispOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            MispOutcome::Unique(_) => "unique",
            MispOutcome::NonUniqueFamily(_) => "family",
            MispOutcome::Infeasible(_) => "infeasible",
        }
    }
}

/// Free-parameter grid: 39 real points spanning (-0.95, 0.95) plus an 8x8
/// complex grid filtered to modulus < 0.95.
fn sample_grid() -> Vec<Complex64> {
    let mut grid = Vec::new();
    for i in 0..39 {
        let b = -0.95 + (i as f64 + 1.0) * (1.9 / 40.0);
        grid.push(Complex64::new(b, 0.0));
    }
    for i in 0..8 {
        for j in 0..8 {
            let re = -0.8 + (i as f64) * (1.6 / 7.0);
            let im = -0.8 + (j as f64) * (1.6 / 7.0);
            let b = Complex64::new(re, im);
            if b.norm() < 0.95 && b.im.abs() > 1e-12 {
                grid.push(b);
            }
        }
    }
    grid
}

/// Assembles the full coefficient list and checks every prescribed
/// eigenvalue against the reassembled spectrum. Returns the worst match
/// distance.
fn verify_completion(input: &MispInput, recovered: &[Complex64]) -> Result<f64> {
    let mut alphas = input.known_alphas.clone();
    alphas.extend_from_slice(recovered);
    let params = cmv::VerblunskyParams::new(alphas)?;
    let spectrum = cmv::spectrum(&params)?;
    let mut worst = 0.0f64;
    for zeta in &input.zetas {
        let best = spectrum
            .zetas
            .iter()
            .map(|z| (z - zeta).norm())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    Ok(worst)
}

/// Runs the full pipeline with default tolerances.
pub fn solve_misp(input: &MispInput) -> Result<MispOutcome> {
    solve_misp_with(input, &SolveOptions::default())
}

pub fn solve_misp_with(input: &MispInput, opts: &SolveOptions) -> Result<MispOutcome> {
    match solve_misp_inner(input, opts) {
        Ok(outcome) => Ok(outcome),
        Err(Error::Infeasible { stage, reason }) => Ok(MispOutcome::Infeasible(Infeasibility {
            stage: stage.to_string(),
            reason,
        })),
        Err(other) => Err(other),
    }
}

fn solve_misp_inner(input: &MispInput, opts: &SolveOptions) -> Result<MispOutcome> {
    let omegas = compute_omegas(input)?;
    let omega_values: Vec<Omega> = omegas.iter().map(|&w| Omega::Finite(w)).collect();
    let problem = InterpolationProblem::from_values(input.zetas(), &omega_values)?;
    let pair = interp::generator_pair_with(&problem, opts.rank_tol)?;

    let mut residuals = BTreeMap::new();
    residuals.insert(
        "minimal_generator".to_string(),
        problem.residual(&pair.r),
    );
    residuals.insert(
        "second_generator".to_string(),
        problem.residual(&pair.q),
    );
    let r1_at_zero = pair.r.p1().evaluate(Complex64::new(0.0, 0.0));

    let core = solve_constrained(&problem, &pair, input.m, opts)?;
    match core {
        ConstrainedCore::Unique {
            lambda1,
            lambda2,
            constraint_residual,
            ..
        } => {
            residuals.insert("constraint_system".to_string(), constraint_residual);
            let recovered = recover_alphas(&lambda1, &lambda2, input)?;
            let worst = verify_completion(input, &recovered)?;
            residuals.insert("spectrum_match".to_string(), worst);
            if worst > SPECTRUM_MATCH_TOL {
                return Err(Error::Infeasible {
                    stage: "verification",
                    reason: format!(
                        "prescribed eigenvalue misses the reassembled spectrum by {worst:.3e}"
                    ),
                });
            }
            Ok(MispOutcome::Unique(UniqueSolution {
                recovered,
                lambda1,
                lambda2,
                diagnostics: Diagnostics {
                    h_min: pair.h_min,
                    h_second: pair.h_second,
                    r1_at_0: [r1_at_zero.re, r1_at_zero.im],
                    residuals,
                },
            }))
        }
        ConstrainedCore::Family {
            a,
            c,
            fixed1,
            fixed2,
            constraint_residual,
        } => {
            residuals.insert("constraint_system".to_string(), constraint_residual);
            let mut samples = Vec::new();
            for b in sample_grid() {
                let lambda1 = fixed1.add(&pair.r.p1().scale(b));
                let lambda2 = fixed2.add(&pair.r.p2().scale(b));
                let sample = match recover_alphas(&lambda1, &lambda2, input) {
                    Ok(recovered) => match verify_completion(input, &recovered) {
                        Ok(worst) if worst <= SPECTRUM_MATCH_TOL => FamilySample {
                            b,
                            valid: true,
                            recovered: Some(recovered),
                            reason: None,
                        },
                        Ok(worst) => FamilySample {
                            b,
                            valid: false,
                            recovered: None,
                            reason: Some(format!("spectrum mismatch {worst:.3e}")),
                        },
                        Err(e) => FamilySample {
                            b,
                            valid: false,
                            recovered: None,
                            reason: Some(e.to_string()),
                        },
                    },
                    Err(e) => FamilySample {
                        b,
                        valid: false,
                        recovered: None,
                        reason: Some(e.to_string()),
                    },
                };
                samples.push(sample);
            }
            Ok(MispOutcome::NonUniqueFamily(Box::new(SolutionFamily {
                generators: pair.clone(),
                a,
                c,
                fixed1,
                fixed2,
                samples,
                diagnostics: Diagnostics {
                    h_min: pair.h_min,
                    h_second: pair.h_second,
                    r1_at_0: [r1_at_zero.re, r1_at_zero.im],
                    residuals,
                },
            })))
        }
    }
}

/// Enumerates all `2m`-subsets of the spectrum of a forward model and
/// reports which lead to a unique reconstruction. Intended for small `n`.
pub fn admissible_subsets(
    params: &cmv::VerblunskyParams,
    m: usize,
) -> Result<Vec<(Vec<usize>, bool)>> {
    let n = params.n();
    if n > 12 {
        return Err(Error::InvalidInput(
            "subset enumeration is limited to n <= 12".into(),
        ));
    }
    let spectrum = cmv::spectrum(params)?;
    let mut zetas = spectrum.zetas.clone();
    sort_by_argument(&mut zetas);
    let known = params.alphas()[..n - m - 1].to_vec();
    let mut out = Vec::new();
    let mut indices: Vec<usize> = (0..2 * m).collect();
    loop {
        let subset: Vec<Complex64> = indices.iter().map(|&i| zetas[i]).collect();
        let input = MispInput::new(n, m, known.clone(), subset)?;
        let unique = matches!(solve_misp(&input)?, MispOutcome::Unique(_));
        out.push((indices.clone(), unique));
        // Next combination in lexicographic order.
        let k = indices.len();
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if indices[i] != i + n - k {
                break;
            }
        }
        indices[i] += 1;
        for j in i + 1..k {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// Sorts by principal argument mapped to `[0, 2 pi)`.
pub fn sort_by_argument(zetas: &mut [Complex64]) {
    zetas.sort_by(|a, b| {
        let arg = |z: &Complex64| {
            let t = z.arg();
            if t < 0.0 {
                t + std::f64::consts::TAU
            } else {
                t
            }
        };
        arg(a)
            .partial_cmp(&arg(b))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Per-solve summary row of the round-trip harness.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    /// "first" for the argument-sorted leading eigenvalues, "subset" for a
    /// random subset.
    pub pass: &'static str,
    pub outcome: &'static str,
    /// Max recovery error against the drawn parameters (unique outcomes).
    pub max_error: Option<f64>,
    pub r1_at_0_modulus: Option<f64>,
}

/// Outcome tallies for one pass of the harness.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Tally {
    pub unique: usize,
    pub family: usize,
    pub infeasible: usize,
    pub max_unique_error: Option<f64>,
    pub min_r1_at_0: Option<f64>,
}

impl Tally {
    fn absorb(&mut self, row: &TrialRow) {
        match row.outcome {
            "unique" => self.unique += 1,
            "family" => self.family += 1,
            _ => self.infeasible += 1,
        }
        if let Some(err) = row.max_error {
            self.max_unique_error = Some(self.max_unique_error.map_or(err, |m| m.max(err)));
        }
        if let Some(r) = row.r1_at_0_modulus {
            self.min_r1_at_0 = Some(self.min_r1_at_0.map_or(r, |m| m.min(r)));
        }
    }

    pub fn unique_rate(&self, trials: usize) -> f64 {
        if trials == 0 {
            0.0
        } else {
            self.unique as f64 / trials as f64
        }
    }
}

/// Deterministic report of the seeded round-trip experiment.
#[derive(Debug, Clone, Serialize)]
pub struct RoundtripReport {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub trials: usize,
    pub first_pass: Tally,
    pub subset_pass: Tally,
    pub rows: Vec<TrialRow>,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    // Per-trial stream so results are schedule independent.
    let mixed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((trial as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .rotate_left(31);
    ChaCha8Rng::seed_from_u64(mixed)
}

fn draw_alpha(rng: &mut ChaCha8Rng, max_radius: f64) -> Complex64 {
    let r = max_radius * rng.gen::<f64>().sqrt();
    let t = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, t)
}

fn outcome_row(
    trial: usize,
    pass: &'static str,
    outcome: &MispOutcome,
    truth: &[Complex64],
) -> TrialRow {
    let (max_error, r1_mod) = match outcome {
        MispOutcome::Unique(sol) => {
            let err = sol
                .recovered
                .iter()
                .zip(truth)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let r1 = Complex64::new(sol.diagnostics.r1_at_0[0], sol.diagnostics.r1_at_0[1]);
            (Some(err), Some(r1.norm()))
        }
        MispOutcome::NonUniqueFamily(fam) => {
            let r1 = Complex64::new(fam.diagnostics.r1_at_0[0], fam.diagnostics.r1_at_0[1]);
            (None, Some(r1.norm()))
        }
        MispOutcome::Infeasible(_) => (None, None),
    };
    TrialRow {
        trial,
        pass,
        outcome: match outcome {
            MispOutcome::Unique(_) => "unique",
            MispOutcome::NonUniqueFamily(_) => "family",
            MispOutcome::Infeasible(_) => "infeasible",
        },
        max_error,
        r1_at_0_modulus: r1_mod,
    }
}

/// Draws random parameter sets, hides the trailing `m` coefficients, and
/// attempts recovery from the first `2m` eigenvalues (argument order) and
/// from a random `2m`-subset. Failures are tallied, never thrown.
pub fn roundtrip_experiment(n: usize, m: usize, seed: u64, trials: usize) -> Result<RoundtripReport> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    if m < 1 || 2 * m > n {
        return Err(Error::InvalidInput(format!(
            "need 1 <= m <= n/2 (got n = {n}, m = {m})"
        )));
    }
    let mut report = RoundtripReport {
        n,
        m,
        seed,
        trials,
        first_pass: Tally::default(),
        subset_pass: Tally::default(),
        rows: Vec::with_capacity(trials * 2),
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let alphas: Vec<Complex64> = (0..n - 1).map(|_| draw_alpha(&mut rng, 0.8)).collect();
        let truth = alphas[n - m - 1..].to_vec();
        let known = alphas[..n - m - 1].to_vec();
        let params = cmv::VerblunskyParams::new(alphas.clone())?;
        let spectrum = match cmv::spectrum(&params) {
            Ok(s) => s,
            Err(_) => {
                // Root finder failure counts as infeasible for both passes.
                for pass in ["first", "subset"] {
                    let row = TrialRow {
                        trial,
                        pass,
                        outcome: "infeasible",
                        max_error: None,
                        r1_at_0_modulus: None,
                    };
                    if pass == "first" {
                        report.first_pass.absorb(&row);
                    } else {
                        report.subset_pass.absorb(&row);
                    }
                    report.rows.push(row);
                }
                continue;
            }
        };
        let mut sorted = spectrum.zetas.clone();
        sort_by_argument(&mut sorted);

        let first: Vec<Complex64> = sorted[..2 * m].to_vec();
        let mut pool = sorted.clone();
        // Fisher-Yates prefix draw for the random subset.
        for i in 0..2 * m {
            let j = i + rng.gen_range(0..pool.len() - i);
            pool.swap(i, j);
        }
        let subset: Vec<Complex64> = pool[..2 * m].to_vec();

        for (pass, zetas) in [("first", first), ("subset", subset)] {
            let row = match MispInput::new(n, m, known.clone(), zetas) {
                Ok(input) => match solve_misp(&input) {
                    Ok(outcome) => outcome_row(trial, pass, &outcome, &truth),
                    Err(_) => TrialRow {
                        trial,
                        pass,
                        outcome: "infeasible",
                        max_error: None,
                        r1_at_0_modulus: None,
                    },
                },
                Err(_) => TrialRow {
                    trial,
                    pass,
                    outcome: "infeasible",
                    max_error: None,
                    r1_at_0_modulus: None,
                },
            };
            if pass == "first" {
                report.first_pass.absorb(&row);
            } else {
                report.subset_pass.absorb(&row);
            }
            report.rows.push(row);
        }
    }
    Ok(report)
}
