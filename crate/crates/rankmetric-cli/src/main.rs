//! Command-line front end for the rank-metric toolkit.
//!
//! `setup` writes a parameter document; `encode`, `corrupt`, and `decode`
//! move codewords through a full channel round trip; `simulate` runs
//! seeded Monte Carlo batches; `selftest` executes the release checklist.
//! Vectors travel as JSON arrays of hex strings, documents as JSON
//! objects. Every command reads stdin / writes stdout unless `--in` /
//! `--out` say otherwise, and all randomness flows from the documented
//! seed, so identical invocations produce identical bytes (timing
//! measurements excepted).
//!
//! Exit codes: 0 on success, 1 on usage or validation problems, 2 when a
//! decode ran but did not uniquely recover a message.

use std::error::Error;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use rankmetric::acceptance;
use rankmetric::codes::CodeFamily;
use rankmetric::decoders::{self, DecodeError};
use rankmetric::field::FieldElement;
use rankmetric::models::{sample_model_a_error, sample_model_b_error, ErrorPattern,
    ModelAVariant};
use rankmetric::params::{self, EpsChoice, ErrorModel, Loaded, ModelChoice, SetupRequest,
    TwistRequest};
use rankmetric::sim::{self, ErrorSource};

#[derive(Debug, Parser)]
#[command(name = "rankmetric", about = "Rank-metric code workbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and validate a parameter document
    Setup(SetupArgs),
    /// Encode a message vector into a codeword
    Encode(EncodeArgs),
    /// Add a sampled rank error to a codeword
    Corrupt(CorruptArgs),
    /// Recover the message from a received vector
    Decode(DecodeArgs),
    /// Run seeded Monte Carlo decode trials
    Simulate(SimulateArgs),
    /// Run the built-in release checklist
    Selftest,
}

#[derive(Debug, Args)]
struct SetupArgs {
    /// Base field characteristic
    #[arg(long)]
    p: u64,
    /// Extension degree of F_q over F_p
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Code length and degree of the big field over F_q
    #[arg(long)]
    n: usize,
    /// Frobenius stride, coprime to n
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// Message length
    #[arg(long)]
    k: usize,
    /// Code family: GG, GTG, or AGTG
    #[arg(long)]
    family: String,
    /// Twist exponent (twisted families)
    #[arg(long)]
    h: Option<usize>,
    /// Twist scalar as hex; defaults to the first admissible one
    #[arg(long, conflicts_with = "random_eps")]
    eps: Option<String>,
    /// Sample an admissible twist scalar at random
    #[arg(long)]
    random_eps: bool,
    /// Tower sub-extension degree, so q0 = p^q0exp (AGTG)
    #[arg(long)]
    q0exp: Option<usize>,
    /// Tower steps, so q = q0^u (AGTG)
    #[arg(long)]
    u: Option<usize>,
    /// Error model: A (constrained coefficients) or B (symmetric)
    #[arg(long)]
    model: String,
    /// Model A flavor: gabidulin-beyond or twisted-beyond
    #[arg(long)]
    variant: Option<String>,
    /// Master seed recorded in the document
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    /// Parameter document path
    #[arg(long)]
    params: PathBuf,
    /// Input path (stdin when omitted)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorruptArgs {
    /// Parameter document path
    #[arg(long)]
    params: PathBuf,
    /// Error rank; defaults to the decoder's full radius (model A)
    #[arg(long)]
    t: Option<usize>,
    /// Ignore the model and sample an unstructured rank-t error
    #[arg(long)]
    unconstrained: bool,
    /// Seed override (defaults to the document seed)
    #[arg(long)]
    seed: Option<u64>,
    /// Input path (stdin when omitted)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    /// Parameter document path
    #[arg(long)]
    params: PathBuf,
    /// Decode without the model constraints (classical radius only)
    #[arg(long)]
    no_constraints: bool,
    /// Input path (stdin when omitted)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Parameter document path
    #[arg(long)]
    params: PathBuf,
    /// Number of trials
    #[arg(long)]
    trials: u64,
    /// Error rank per trial; defaults to the decoder's full radius
    #[arg(long)]
    t: Option<usize>,
    /// Output format
    #[arg(long, default_value = "json")]
    format: String,
    /// Seed override (defaults to the document seed)
    #[arg(long)]
    seed: Option<u64>,
    /// Measure mean decode time (makes the output nondeterministic)
    #[arg(long)]
    timing: bool,
    /// Force the single-threaded runner
    #[arg(long)]
    sequential: bool,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Setup(a) => cmd_setup(&a),
        Command::Encode(a) => cmd_encode(&a),
        Command::Corrupt(a) => cmd_corrupt(&a),
        Command::Decode(a) => cmd_decode(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Selftest => cmd_selftest(),
    };
    match outcome {
        Ok(code) => process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            process::exit(1);
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Box<dyn Error>> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Box<dyn Error>> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn load_document(path: &PathBuf) -> Result<Loaded, Box<dyn Error>> {
    let text = fs::read_to_string(path)?;
    let doc = params::from_json_str(&text).map_err(|e| e.to_string())?;
    params::load(&doc).map_err(|e| e.to_string().into())
}

/// Largest rank the decoder handles for this document: one beyond half
/// the classical radius under model A, the classical radius otherwise.
fn default_rank(loaded: &Loaded) -> usize {
    let n = loaded.ctx.n();
    let k = loaded.spec.k();
    match loaded.model {
        ErrorModel::A(_) => {
            if loaded.spec.family() == CodeFamily::Gabidulin {
                (n - k + 1) / 2
            } else {
                (n - k) / 2
            }
        }
        ErrorModel::B(_) => 0,
    }
}

fn cmd_setup(a: &SetupArgs) -> Result<i32, Box<dyn Error>> {
    let family = CodeFamily::from_tag(&a.family)
        .ok_or_else(|| format!("unknown family {:?}, expected GG, GTG, or AGTG", a.family))?;
    let twist = match (family, a.h) {
        (CodeFamily::Gabidulin, None) => None,
        (CodeFamily::Gabidulin, Some(_)) => {
            return Err("--h only applies to the twisted families".into())
        }
        (_, None) => return Err("twisted families need --h".into()),
        (_, Some(h)) => {
            let eps = match (&a.eps, a.random_eps) {
                (Some(hex), _) => EpsChoice::Given(hex.clone()),
                (None, true) => EpsChoice::Random,
                (None, false) => EpsChoice::FirstValid,
            };
            Some(TwistRequest { h, eps })
        }
    };
    let model = match a.model.to_ascii_uppercase().as_str() {
        "A" => {
            let variant = match &a.variant {
                Some(tag) => ModelAVariant::from_tag(tag)
                    .ok_or_else(|| format!("unknown variant {tag:?}"))?,
                None if family == CodeFamily::Gabidulin => ModelAVariant::GabidulinBeyond,
                None => ModelAVariant::TwistedBeyond,
            };
            ModelChoice::A(variant)
        }
        "B" => {
            if a.variant.is_some() {
                return Err("--variant only applies to model A".into());
            }
            ModelChoice::B
        }
        other => return Err(format!("unknown model {other:?}, expected A or B").into()),
    };
    let tower = match (a.q0exp, a.u) {
        (None, None) => None,
        (Some(l0), Some(u)) => Some((l0, u)),
        _ => return Err("--q0exp and --u must be given together".into()),
    };
    let req = SetupRequest {
        p: a.p,
        l: a.l,
        n: a.n,
        s: a.s,
        k: a.k,
        tower,
        family,
        twist,
        model,
        seed: a.seed,
    };
    let (doc, _) = params::setup(&req).map_err(|e| e.to_string())?;
    write_output(&a.out, &(params::to_json_string(&doc) + "\n"))?;
    Ok(0)
}

fn cmd_encode(a: &EncodeArgs) -> Result<i32, Box<dyn Error>> {
    let loaded = load_document(&a.params)?;
    let value: serde_json::Value = serde_json::from_str(&read_input(&a.input)?)?;
    let body = value.get("message").unwrap_or(&value);
    let message =
        params::vector_from_json(&loaded.ctx, body).map_err(|e| e.to_string())?;
    let codeword = loaded.spec.encode(&message).map_err(|e| e.to_string())?;
    let text = serde_json::to_string(&params::vector_to_json(&codeword))?;
    write_output(&a.out, &(text + "\n"))?;
    Ok(0)
}

fn error_to_json(e: &ErrorPattern) -> serde_json::Value {
    serde_json::json!({
        "coeffs": params::vector_to_json(e.poly.coeffs()),
        "vector": params::vector_to_json(&e.vector),
        "rank": e.rank,
    })
}

fn cmd_corrupt(a: &CorruptArgs) -> Result<i32, Box<dyn Error>> {
    let loaded = load_document(&a.params)?;
    let ctx = &loaded.ctx;
    let value: serde_json::Value = serde_json::from_str(&read_input(&a.input)?)?;
    let body = value.get("codeword").unwrap_or(&value);
    let codeword = params::vector_from_json(ctx, body).map_err(|e| e.to_string())?;
    if codeword.len() != ctx.n() {
        return Err(format!("codeword has {} entries, expected {}", codeword.len(), ctx.n()).into());
    }
    let mut rng = ChaCha12Rng::seed_from_u64(a.seed.unwrap_or(loaded.seed));
    let error = if a.unconstrained {
        let t = a.t.unwrap_or((ctx.n() - loaded.spec.k()) / 2);
        let poly = rankmetric::linpoly::random_rank_t(ctx, t, &mut rng);
        ErrorPattern::new(poly)
    } else {
        match loaded.model {
            ErrorModel::A(pa) => {
                let t = a.t.unwrap_or_else(|| default_rank(&loaded));
                sample_model_a_error(ctx, &pa, loaded.spec.k(), t, &mut rng)
                    .map_err(|e| e.to_string())?
            }
            ErrorModel::B(pb) => {
                if a.t.is_some() {
                    eprintln!("note: the symmetric model draws its own rank; --t ignored");
                }
                sample_model_b_error(ctx, &pb, &mut rng).map_err(|e| e.to_string())?
            }
        }
    };
    let received: Vec<FieldElement> = codeword
        .iter()
        .zip(&error.vector)
        .map(|(c, e)| ctx.add(c, e))
        .collect();
    let out = serde_json::json!({
        "received": params::vector_to_json(&received),
        "error": error_to_json(&error),
    });
    write_output(&a.out, &(serde_json::to_string(&out)? + "\n"))?;
    Ok(0)
}

fn cmd_decode(a: &DecodeArgs) -> Result<i32, Box<dyn Error>> {
    let loaded = load_document(&a.params)?;
    let value: serde_json::Value = serde_json::from_str(&read_input(&a.input)?)?;
    let body = value.get("received").unwrap_or(&value);
    let received =
        params::vector_from_json(&loaded.ctx, body).map_err(|e| e.to_string())?;
    let outcome = match (&loaded.model, a.no_constraints) {
        (_, true) => decoders::decode(&loaded.spec, None, &received),
        (ErrorModel::A(pa), false) => decoders::decode(&loaded.spec, Some(pa), &received),
        (ErrorModel::B(_), false) => decoders::decode_model_b_lowrate(&loaded.spec, &received),
    };
    let (code, out) = match outcome {
        Ok(rep) => (
            0,
            serde_json::json!({
                "status": "ok",
                "message": params::vector_to_json(&rep.message),
                "error_coeffs": params::vector_to_json(rep.error_poly.coeffs()),
                "rank": rep.t_used,
                "branch": rep.branch.tag(),
            }),
        ),
        Err(DecodeError::Ambiguous(cands)) => (
            2,
            serde_json::json!({
                "status": "ambiguous",
                "candidates": cands
                    .iter()
                    .map(|c| serde_json::json!({
                        "message": params::vector_to_json(&c.message),
                        "error_coeffs": params::vector_to_json(c.error_poly.coeffs()),
                        "rank": c.t_used,
                        "branch": c.branch.tag(),
                    }))
                    .collect::<Vec<_>>(),
            }),
        ),
        Err(DecodeError::Failure) => (2, serde_json::json!({ "status": "failure" })),
        Err(e) => return Err(e.to_string().into()),
    };
    write_output(&a.out, &(serde_json::to_string(&out)? + "\n"))?;
    Ok(code)
}

fn stats_to_csv(stats: &sim::SimStats) -> String {
    let mean = stats
        .mean_decode_micros
        .map(|m| format!("{m:.3}"))
        .unwrap_or_default();
    format!(
        "trials,successes,failures,miscorrections,ambiguous,ambiguous_with_truth,\
         branch_case1,branch_case2,branch_model_b,mean_decode_micros\n\
         {},{},{},{},{},{},{},{},{},{mean}\n",
        stats.trials,
        stats.successes,
        stats.failures,
        stats.miscorrections,
        stats.ambiguous,
        stats.ambiguous_with_truth,
        stats.branch_case1,
        stats.branch_case2,
        stats.branch_model_b,
    )
}

fn cmd_simulate(a: &SimulateArgs) -> Result<i32, Box<dyn Error>> {
    let loaded = load_document(&a.params)?;
    let source = match loaded.model {
        ErrorModel::A(pa) => ErrorSource::ModelA {
            params: pa,
            t: a.t.unwrap_or_else(|| default_rank(&loaded)),
        },
        ErrorModel::B(_) => {
            if a.t.is_some() {
                eprintln!("note: the symmetric model draws its own rank; --t ignored");
            }
            ErrorSource::ModelB
        }
    };
    let seed = a.seed.unwrap_or(loaded.seed);
    let stats = if a.sequential {
        sim::run_trials_seq(&loaded.spec, &source, a.trials, seed, a.timing)
    } else {
        sim::run_trials(&loaded.spec, &source, a.trials, seed, a.timing)
    };
    let text = match a.format.as_str() {
        "json" => serde_json::to_string_pretty(&stats)? + "\n",
        "csv" => stats_to_csv(&stats),
        other => return Err(format!("unknown format {other:?}, expected json or csv").into()),
    };
    write_output(&a.out, &text)?;
    Ok(0)
}

fn cmd_selftest() -> Result<i32, Box<dyn Error>> {
    let reports = acceptance::run_all();
    let failed = reports
        .iter()
        .filter(|r| r.status == acceptance::CheckStatus::Fail)
        .count();
    if failed == 0 {
        println!("all {} checks in order", reports.len());
        Ok(0)
    } else {
        println!("{failed} of {} checks failed", reports.len());
        Ok(2)
    }
}
