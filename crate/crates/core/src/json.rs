//! JSON wire formats. Complex numbers are `[re, im]` arrays everywhere;
//! polynomials are coefficient arrays ascending by degree, canonical on
//! output and canonicalized on input.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmv::{Spectrum, VerblunskyParams};
use crate::interp::{GeneratorPair, InterpolationNode, InterpolationProblem, Omega};
use crate::misp::{Diagnostics, MispInput, MispOutcome, SolutionFamily};
use crate::poly::Polynomial;
use crate::vecpoly::VectorPolynomial;
use crate::{Error, Result};

/// A complex number on the wire.
pub type Pair = [f64; 2];

pub fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn from_pair(p: Pair) -> Result<Complex64> {
    if !p[0].is_finite() || !p[1].is_finite() {
        return Err(Error::InvalidInput(format!(
            "non-finite complex pair [{}, {}]",
            p[0], p[1]
        )));
    }
    Ok(Complex64::new(p[0], p[1]))
}

pub fn poly_to_json(p: &Polynomial) -> Vec<Pair> {
    p.coeffs().iter().map(|&c| to_pair(c)).collect()
}

pub fn poly_from_json(coeffs: &[Pair]) -> Result<Polynomial> {
    let coeffs = coeffs
        .iter()
        .map(|&p| from_pair(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(coeffs))
}

fn pairs_to_complex(pairs: &[Pair]) -> Result<Vec<Complex64>> {
    pairs.iter().map(|&p| from_pair(p)).collect()
}

fn complex_to_pairs(zs: &[Complex64]) -> Vec<Pair> {
    zs.iter().map(|&z| to_pair(z)).collect()
}

fn default_beta() -> Pair {
    [1.0, 0.0]
}

/// `{"alphas": [[re, im], ...], "beta": [1.0, 0.0]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsJson {
    pub alphas: Vec<Pair>,
    #[serde(default = "default_beta")]
    pub beta: Pair,
}

impl ParamsJson {
    pub fn from_params(p: &VerblunskyParams) -> Self {
        ParamsJson {
            alphas: complex_to_pairs(p.alphas()),
            beta: to_pair(p.beta()),
        }
    }

    pub fn into_params(self) -> Result<VerblunskyParams> {
        VerblunskyParams::with_beta(pairs_to_complex(&self.alphas)?, from_pair(self.beta)?)
    }
}

/// `{"zetas": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub zetas: Vec<Pair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_separation: Option<f64>,
}

impl SpectrumJson {
    pub fn from_spectrum(s: &Spectrum) -> Self {
        SpectrumJson {
            zetas: complex_to_pairs(&s.zetas),
            min_separation: Some(s.min_separation),
        }
    }

    pub fn zetas(&self) -> Result<Vec<Complex64>> {
        pairs_to_complex(&self.zetas)
    }
}

/// `{"p1": <poly>, "p2": <poly>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VecPolyJson {
    pub p1: Vec<Pair>,
    pub p2: Vec<Pair>,
}

impl VecPolyJson {
    pub fn from_vecpoly(v: &VectorPolynomial) -> Self {
        VecPolyJson {
            p1: poly_to_json(v.p1()),
            p2: poly_to_json(v.p2()),
        }
    }

    pub fn into_vecpoly(self) -> Result<VectorPolynomial> {
        Ok(VectorPolynomial::new(
            poly_from_json(&self.p1)?,
            poly_from_json(&self.p2)?,
        ))
    }
}

/// Either a finite `[re, im]` value or the string `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaJson {
    Finite(Pair),
    Infinity(String),
}

impl OmegaJson {
    pub fn into_omega(self) -> Result<Omega> {
        match self {
            OmegaJson::Finite(p) => Ok(Omega::Finite(from_pair(p)?)),
            OmegaJson::Infinity(s) if s == "inf" => Ok(Omega::Infinity),
            OmegaJson::Infinity(s) => Err(Error::InvalidInput(format!(
                "omega must be [re, im] or \"inf\", got \"{s}\""
            ))),
        }
    }
}

/// A node as explicit coefficients or as classical interpolation data.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeJson {
    Coefficients { z: Pair, a1: Pair, a2: Pair },
    Value { z: Pair, omega: OmegaJson },
}

/// `{"nodes": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemJson {
    pub nodes: Vec<NodeJson>,
}

impl ProblemJson {
    pub fn from_problem(p: &InterpolationProblem) -> Self {
        ProblemJson {
            nodes: p
                .nodes()
                .iter()
                .map(|n| NodeJson::Coefficients {
                    z: to_pair(n.z()),
                    a1: to_pair(n.a1()),
                    a2: to_pair(n.a2()),
                })
                .collect(),
        }
    }

    pub fn into_problem(self) -> Result<InterpolationProblem> {
        let nodes = self
            .nodes
            .into_iter()
            .map(|node| match node {
                NodeJson::Coefficients { z, a1, a2 } => {
                    InterpolationNode::new(from_pair(z)?, from_pair(a1)?, from_pair(a2)?)
                }
                NodeJson::Value { z, omega } => {
                    let z = from_pair(z)?;
                    match omega.into_omega()? {
                        Omega::Finite(w) => {
                            InterpolationNode::new(z, Complex64::new(1.0, 0.0), -w)
                        }
                        Omega::Infinity => InterpolationNode::new(
                            z,
                            Complex64::new(0.0, 0.0),
                            Complex64::new(1.0, 0.0),
                        ),
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        InterpolationProblem::new(nodes)
    }
}

/// `{"n": ..., "m": ..., "known_alphas": [...], "zetas": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MispInputJson {
    pub n: usize,
    pub m: usize,
    pub known_alphas: Vec<Pair>,
    pub zetas: Vec<Pair>,
}

impl MispInputJson {
    pub fn from_input(input: &MispInput) -> Self {
        MispInputJson {
            n: input.n(),
            m: input.m(),
            known_alphas: complex_to_pairs(input.known_alphas()),
            zetas: complex_to_pairs(input.zetas()),
        }
    }

    pub fn into_input(self) -> Result<MispInput> {
        MispInput::new(
            self.n,
            self.m,
            pairs_to_complex(&self.known_alphas)?,
            pairs_to_complex(&self.zetas)?,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsJson {
    pub h_min: usize,
    pub h_second: usize,
    pub r1_at_0: Pair,
    pub residuals: BTreeMap<String, f64>,
}

impl DiagnosticsJson {
    fn from_diagnostics(d: &Diagnostics) -> Self {
        DiagnosticsJson {
            h_min: d.h_min,
            h_second: d.h_second,
            r1_at_0: d.r1_at_0,
            residuals: d.residuals.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySampleJson {
    pub b: Pair,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyJson {
    pub description: String,
    pub a: Pair,
    pub c: Pair,
    pub r: VecPolyJson,
    pub q: VecPolyJson,
    pub fixed1: Vec<Pair>,
    pub fixed2: Vec<Pair>,
    pub valid_count: usize,
    pub samples: Vec<FamilySampleJson>,
}

impl FamilyJson {
    fn from_family(f: &SolutionFamily) -> Self {
        FamilyJson {
            description: f.describe(),
            a: to_pair(f.a),
            c: to_pair(f.c),
            r: VecPolyJson::from_vecpoly(&f.generators.r),
            q: VecPolyJson::from_vecpoly(&f.generators.q),
            fixed1: poly_to_json(&f.fixed1),
            fixed2: poly_to_json(&f.fixed2),
            valid_count: f.samples.iter().filter(|s| s.valid).count(),
            samples: f
                .samples
                .iter()
                .map(|s| FamilySampleJson {
                    b: to_pair(s.b),
                    valid: s.valid,
                    recovered: s.recovered.as_ref().map(|r| complex_to_pairs(r)),
                    reason: s.reason.clone(),
                })
                .collect(),
        }
    }
}

/// `{"tag": "unique" | "family" | "infeasible", ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeJson {
    pub tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl OutcomeJson {
    pub fn from_outcome(outcome: &MispOutcome) -> Self {
        match outcome {
            MispOutcome::Unique(sol) => OutcomeJson {
                tag: "unique".into(),
                alphas: Some(complex_to_pairs(&sol.recovered)),
                diagnostics: Some(DiagnosticsJson::from_diagnostics(&sol.diagnostics)),
                family: None,
                stage: None,
                reason: None,
            },
            MispOutcome::NonUniqueFamily(f) => OutcomeJson {
                tag: "family".into(),
                alphas: None,
                diagnostics: Some(DiagnosticsJson::from_diagnostics(&f.diagnostics)),
                family: Some(FamilyJson::from_family(f)),
                stage: None,
                reason: None,
            },
            MispOutcome::Infeasible(inf) => OutcomeJson {
                tag: "infeasible".into(),
                alphas: None,
                diagnostics: None,
                family: None,
                stage: Some(inf.stage.clone()),
                reason: Some(inf.reason.clone()),
            },
        }
    }
}

/// Output of the generator computation for a problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpResultJson {
    pub h_min: usize,
    pub h_second: usize,
    pub r: VecPolyJson,
    pub q: VecPolyJson,
    pub residuals: BTreeMap<String, f64>,
}

impl InterpResultJson {
    pub fn new(problem: &InterpolationProblem, pair: &GeneratorPair) -> Self {
        let mut residuals = BTreeMap::new();
        residuals.insert("r".to_string(), problem.residual(&pair.r));
        residuals.insert("q".to_string(), problem.residual(&pair.q));
        InterpResultJson {
            h_min: pair.h_min,
            h_second: pair.h_second,
            r: VecPolyJson::from_vecpoly(&pair.r),
            q: VecPolyJson::from_vecpoly(&pair.q),
            residuals,
        }
    }
}
