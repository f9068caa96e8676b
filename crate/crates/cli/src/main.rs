//! JSON-in/JSON-out command line for the CMV toolkit.
//!
//! Exit codes: 0 success (and unique reconstructions), 2 parse/validation
//! errors, 3 non-unique solution families, 4 infeasible reconstructions.
//! Errors are emitted as JSON objects on standard error; nothing but the
//! requested payload is written to standard output.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use cmv_core::cmv;
use cmv_core::interp;
use cmv_core::json::{
    from_pair, poly_to_json, InterpResultJson, MispInputJson, OutcomeJson, Pair, ParamsJson,
    ProblemJson, SpectrumJson,
};
use cmv_core::misp::{self, MispOutcome, SolveOptions};
use cmv_core::Complex64;

#[derive(Parser)]
#[command(name = "cmv-misp", version, about = "Finite CMV matrices and the mixed inverse spectral problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct IoArgs {
    /// Input: a file path, inline JSON, or '-' for standard input.
    #[arg(long)]
    input: Option<String>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Relative singular-value threshold for rank decisions.
    #[arg(long, value_name = "TOL")]
    tol_rank: Option<f64>,
    /// Relative degeneracy threshold on |R1(0)|.
    #[arg(long, value_name = "TOL")]
    tol_degen: Option<f64>,
}

impl TolArgs {
    fn options(&self) -> Result<SolveOptions, CliError> {
        let mut opts = SolveOptions::default();
        if let Some(t) = self.tol_rank {
            if !t.is_finite() || t <= 0.0 {
                return Err(CliError::validation("--tol-rank must be positive"));
            }
            opts.rank_tol = t;
        }
        if let Some(t) = self.tol_degen {
            if !t.is_finite() || t <= 0.0 {
                return Err(CliError::validation("--tol-degen must be positive"));
            }
            opts.degen_tol = t;
        }
        Ok(opts)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the CMV matrix for given Verblunsky coefficients.
    Spectrum(IoArgs),
    /// The Szegő polynomial chain and terminal polynomial.
    Szego(IoArgs),
    /// Weyl data of the truncated matrix for a known coefficient prefix.
    Weyl {
        #[command(flatten)]
        io: IoArgs,
        /// Matrix dimension.
        #[arg(long)]
        n: usize,
        /// Number of missing trailing coefficients.
        #[arg(long)]
        m: usize,
    },
    /// Eigenvector components at a point, with the residual norm.
    Eigvec(IoArgs),
    /// Minimal and second generators of an interpolation problem.
    Interp {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Solve the mixed inverse spectral problem.
    Misp {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Seeded random round-trip experiment; JSON report plus optional CSV.
    Roundtrip {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Report path; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// CSV path for per-trial rows.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

struct CliError {
    kind: &'static str,
    message: String,
    code: u8,
}

impl CliError {
    fn validation(msg: impl Into<String>) -> Self {
        CliError {
            kind: "validation",
            message: msg.into(),
            code: 2,
        }
    }

    fn parse(msg: impl Into<String>) -> Self {
        CliError {
            kind: "parse",
            message: msg.into(),
            code: 2,
        }
    }

    fn io(msg: impl Into<String>) -> Self {
        CliError {
            kind: "io",
            message: msg.into(),
            code: 2,
        }
    }
}

impl From<cmv_core::Error> for CliError {
    fn from(e: cmv_core::Error) -> Self {
        CliError::validation(e.to_string())
    }
}

fn read_input(io: &IoArgs) -> Result<String, CliError> {
    let Some(spec) = &io.input else {
        return Err(CliError::validation("--input is required"));
    };
    if spec == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::io(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    let trimmed = spec.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(spec.clone());
    }
    std::fs::read_to_string(spec).map_err(|e| CliError::io(format!("{spec}: {e}")))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(e.to_string()))
}

fn write_output(output: &Option<PathBuf>, payload: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(payload)
        .map_err(|e| CliError::io(format!("serialize: {e}")))?;
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Sorted by principal argument in [0, 2 pi) for deterministic output.
fn sorted_zetas(mut zetas: Vec<Complex64>) -> Vec<Complex64> {
    misp::sort_by_argument(&mut zetas);
    zetas
}

fn cmd_spectrum(io: &IoArgs) -> Result<u8, CliError> {
    let params = parse::<ParamsJson>(&read_input(io)?)?.into_params()?;
    let spectrum = cmv::spectrum(&params)?;
    let payload = SpectrumJson {
        zetas: sorted_zetas(spectrum.zetas.clone())
            .iter()
            .map(|&z| [z.re, z.im])
            .collect(),
        min_separation: Some(spectrum.min_separation),
    };
    write_output(&io.output, &payload)?;
    Ok(0)
}

fn cmd_szego(io: &IoArgs) -> Result<u8, CliError> {
    let params = parse::<ParamsJson>(&read_input(io)?)?.into_params()?;
    let system = cmv::szego_forward(&params)?;
    let payload = json!({
        "phis": system.phis().iter().map(poly_to_json).collect::<Vec<_>>(),
        "phi_tilde": poly_to_json(system.phi_tilde()),
    });
    write_output(&io.output, &payload)?;
    Ok(0)
}

fn cmd_weyl(io: &IoArgs, n: usize, m: usize) -> Result<u8, CliError> {
    let params = parse::<ParamsJson>(&read_input(io)?)?.into_params()?;
    let data = cmv::weyl(params.alphas(), n, m)?;
    let payload = json!({
        "numerator": poly_to_json(data.w().numerator()),
        "denominator": poly_to_json(data.w().denominator()),
    });
    write_output(&io.output, &payload)?;
    Ok(0)
}

#[derive(serde::Deserialize)]
struct EigvecRequest {
    params: ParamsJson,
    zeta: Pair,
}

fn cmd_eigvec(io: &IoArgs) -> Result<u8, CliError> {
    let request: EigvecRequest = parse(&read_input(io)?)?;
    let params = request.params.into_params()?;
    let zeta = from_pair(request.zeta)?;
    let components = cmv::eigenvector(&params, zeta)?;
    let matrix = cmv::assemble_cmv(&params)?;
    let image = matrix.apply(&components);
    let residual: f64 = image
        .iter()
        .zip(&components)
        .map(|(a, b)| (zeta * b - a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let payload = json!({
        "zeta": [zeta.re, zeta.im],
        "components": components.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "residual_norm": residual,
    });
    write_output(&io.output, &payload)?;
    Ok(0)
}

fn cmd_interp(io: &IoArgs, tol: &TolArgs) -> Result<u8, CliError> {
    let opts = tol.options()?;
    let problem = parse::<ProblemJson>(&read_input(io)?)?.into_problem()?;
    let pair = interp::generator_pair_with(&problem, opts.rank_tol)?;
    write_output(&io.output, &InterpResultJson::new(&problem, &pair))?;
    Ok(0)
}

fn cmd_misp(io: &IoArgs, tol: &TolArgs) -> Result<u8, CliError> {
    let opts = tol.options()?;
    let input = parse::<MispInputJson>(&read_input(io)?)?.into_input()?;
    let outcome = misp::solve_misp_with(&input, &opts)?;
    write_output(&io.output, &OutcomeJson::from_outcome(&outcome))?;
    Ok(match outcome {
        MispOutcome::Unique(_) => 0,
        MispOutcome::NonUniqueFamily(_) => 3,
        MispOutcome::Infeasible(_) => 4,
    })
}

fn roundtrip_csv(report: &misp::RoundtripReport) -> String {
    let mut out = String::from("trial,pass,outcome,max_error,r1_at_0_modulus\n");
    for row in &report.rows {
        let err = row
            .max_error
            .map(|e| format!("{e:e}"))
            .unwrap_or_default();
        let r1 = row
            .r1_at_0_modulus
            .map(|e| format!("{e:e}"))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.trial, row.pass, row.outcome, err, r1
        ));
    }
    out
}

fn cmd_roundtrip(
    n: usize,
    m: usize,
    seed: u64,
    trials: usize,
    output: &Option<PathBuf>,
    csv: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let report = misp::roundtrip_experiment(n, m, seed, trials)?;
    if let Some(path) = csv {
        std::fs::write(path, roundtrip_csv(&report))
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    }
    write_output(output, &report)?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Spectrum(io) => cmd_spectrum(io),
        Command::Szego(io) => cmd_szego(io),
        Command::Weyl { io, n, m } => cmd_weyl(io, *n, *m),
        Command::Eigvec(io) => cmd_eigvec(io),
        Command::Interp { io, tol } => cmd_interp(io, tol),
        Command::Misp { io, tol } => cmd_misp(io, tol),
        Command::Roundtrip {
            n,
            m,
            seed,
            trials,
            output,
            csv,
        } => cmd_roundtrip(*n, *m, *seed, *trials, output, csv),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let payload = json!({ "error": { "kind": err.kind, "message": err.message } });
            eprintln!("{payload}");
            ExitCode::from(err.code)
        }
    }
}
