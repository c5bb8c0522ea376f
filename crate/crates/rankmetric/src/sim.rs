//! Monte-Carlo trial loops.
//!
//! Each trial draws a fresh message and error from its own RNG stream
//! (master seed plus trial index), corrupts a codeword, decodes, and
//! scores the outcome. Stream-per-trial keeps results identical between
//! the sequential and the data-parallel runner and independent of the
//! trial execution order.
//!
//! With the `parallel` feature (on by default) `run_trials` fans the
//! trials out over rayon; `run_trials_seq` is always available and is the
//! reference implementation.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::codes::CodeSpec;
use crate::decoders::{self, DecodeBranch, DecodeError};
use crate::field::FieldElement;
use crate::linpoly::random_rank_t;
use crate::models::{sample_model_a_error, sample_model_b_error, ModelAParams, ModelBParams};

#[derive(Clone, Copy, Debug)]
pub enum ErrorSource {
    /// Asymmetric model, errors of rank exactly t.
    ModelA { params: ModelAParams, t: usize },
    /// Symmetric model; the rank falls out of the drawn shape.
    ModelB,
    /// Plain rank-t errors with no channel constraints; decoding then
    /// stays within half the minimum distance.
    Unconstrained { t: usize },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SimStats {
    pub trials: u64,
    /// Decoder returned the transmitted message.
    pub successes: u64,
    /// Decoder reported failure (or the error could not be sampled).
    pub failures: u64,
    /// Decoder returned a message, but not the transmitted one.
    pub miscorrections: u64,
    /// Decoder reported several equally valid candidates.
    pub ambiguous: u64,
    /// Ambiguous trials whose candidate list contains the transmitted
    /// message. Such trials still recover the message, just not uniquely.
    pub ambiguous_with_truth: u64,
    pub branch_case1: u64,
    pub branch_case2: u64,
    pub branch_model_b: u64,
    /// Mean wall-clock decode time; only measured on request, since
    /// timing is the one nondeterministic output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_decode_micros: Option<f64>,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    successes: u64,
    failures: u64,
    miscorrections: u64,
    ambiguous: u64,
    ambiguous_with_truth: u64,
    case1: u64,
    case2: u64,
    model_b: u64,
    micros: u128,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.successes += o.successes;
        self.failures += o.failures;
        self.miscorrections += o.miscorrections;
        self.ambiguous += o.ambiguous;
        self.ambiguous_with_truth += o.ambiguous_with_truth;
        self.case1 += o.case1;
        self.case2 += o.case2;
        self.model_b += o.model_b;
        self.micros += o.micros;
        self
    }
}

fn run_one(
    spec: &CodeSpec,
    source: &ErrorSource,
    master_seed: u64,
    trial: u64,
    timing: bool,
) -> Tally {
    let ctx = spec.ctx();
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    let mut tally = Tally::default();

    let k = spec.k();
    let message: Vec<FieldElement> = (0..k).map(|_| ctx.random_element(&mut rng)).collect();
    let codeword = spec.encode(&message).expect("message has length k");

    let error_vec = match source {
        ErrorSource::ModelA { params, t } => {
            match sample_model_a_error(ctx, params, k, *t, &mut rng) {
                Ok(e) => e.vector,
                Err(_) => {
                    tally.failures = 1;
                    return tally;
                }
            }
        }
        ErrorSource::ModelB => match sample_model_b_error(ctx, &ModelBParams, &mut rng) {
            Ok(e) => e.vector,
            Err(_) => {
                tally.failures = 1;
                return tally;
            }
        },
        ErrorSource::Unconstrained { t } => {
            if *t == 0 {
                vec![ctx.zero(); ctx.n()]
            } else {
                random_rank_t(ctx, *t, &mut rng).eval_at_alphas()
            }
        }
    };
    let received: Vec<FieldElement> = codeword
        .iter()
        .zip(&error_vec)
        .map(|(a, b)| ctx.add(a, b))
        .collect();

    let start = timing.then(std::time::Instant::now);
    let outcome = match source {
        ErrorSource::ModelA { params, .. } => decoders::decode(spec, Some(params), &received),
        ErrorSource::ModelB => decoders::decode_model_b_lowrate(spec, &received),
        ErrorSource::Unconstrained { .. } => decoders::decode(spec, None, &received),
    };
    if let Some(start) = start {
        tally.micros = start.elapsed().as_micros();
    }

    match outcome {
        Ok(report) => {
            match report.branch {
                DecodeBranch::Case1 => tally.case1 = 1,
                DecodeBranch::Case2 => tally.case2 = 1,
                DecodeBranch::ModelBDirect => tally.model_b = 1,
            }
            if report.message == message {
                tally.successes = 1;
            } else {
                tally.miscorrections = 1;
            }
        }
        Err(DecodeError::Ambiguous(candidates)) => {
            tally.ambiguous = 1;
            if candidates.iter().any(|c| c.message == message) {
                tally.ambiguous_with_truth = 1;
            }
        }
        Err(_) => tally.failures = 1,
    }
    tally
}

fn finish(tally: Tally, trials: u64, timing: bool) -> SimStats {
    SimStats {
        trials,
        successes: tally.successes,
        failures: tally.failures,
        miscorrections: tally.miscorrections,
        ambiguous: tally.ambiguous,
        ambiguous_with_truth: tally.ambiguous_with_truth,
        branch_case1: tally.case1,
        branch_case2: tally.case2,
        branch_model_b: tally.model_b,
        mean_decode_micros: (timing && trials > 0)
            .then(|| tally.micros as f64 / trials as f64),
    }
}

/// Reference runner: one trial after another on the calling thread.
pub fn run_trials_seq(
    spec: &CodeSpec,
    source: &ErrorSource,
    trials: u64,
    master_seed: u64,
    timing: bool,
) -> SimStats {
    let tally = (0..trials)
        .map(|i| run_one(spec, source, master_seed, i, timing))
        .fold(Tally::default(), Tally::merge);
    finish(tally, trials, timing)
}

/// Data-parallel runner over rayon. Statistically identical to the
/// sequential runner because every trial owns its RNG stream.
#[cfg(feature = "parallel")]
pub fn run_trials_par(
    spec: &CodeSpec,
    source: &ErrorSource,
    trials: u64,
    master_seed: u64,
    timing: bool,
) -> SimStats {
    use rayon::prelude::*;
    let tally = (0..trials)
        .into_par_iter()
        .map(|i| run_one(spec, source, master_seed, i, timing))
        .reduce(Tally::default, Tally::merge);
    finish(tally, trials, timing)
}

/// Dispatches to the parallel runner when compiled in, the sequential one
/// otherwise.
pub fn run_trials(
    spec: &CodeSpec,
    source: &ErrorSource,
    trials: u64,
    master_seed: u64,
    timing: bool,
) -> SimStats {
    #[cfg(feature = "parallel")]
    {
        run_trials_par(spec, source, trials, master_seed, timing)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_trials_seq(spec, source, trials, master_seed, timing)
    }
}
