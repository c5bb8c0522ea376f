//! The release checklist.
//!
//! Ten self-contained checks cover the decoding claims end to end:
//! beyond-half-distance decoding in both characteristics, the improved
//! twisted decoders, the symmetric-model decoder at its rate boundary,
//! the classical regression, agreement with brute-force oracles, the
//! quadratic solver, the rank machinery, and the minimum-distance sweep.
//! `run_all` executes every check, prints one verdict line each, and
//! returns the reports; the `selftest` CLI command and the acceptance
//! integration test are both thin wrappers around it.
//!
//! One check is marked `Unattainable` rather than pass/fail: the twisted
//! family over the binary base field is empty (the norm condition cannot
//! be met when the base field has a single nonzero scalar), which the
//! check proves exhaustively before demonstrating the same decode shape
//! over the smallest base field where the family exists.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::codes::{first_valid_eps, CodeFamily, CodeSpec};
use crate::decoders::{self, DecodeBranch, DecodeError};
use crate::field::{Ctx, FieldContext, FieldElement};
use crate::linalg;
use crate::linpoly::{random_rank_t, vector_rank, LinearizedPoly};
use crate::models::{model_a_setup, sample_model_a_error, sample_model_b_error, ModelAVariant,
    ModelBParams};
use crate::oracle;
use crate::sim::{self, ErrorSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check is impossible as parameterized and the run proved why.
    Unattainable,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Unattainable => "UNATTAINABLE",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub id: usize,
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
    pub millis: u128,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:2}] {:<12} {:<52} ({:>6} ms)  {}",
            self.id, self.status, self.name, self.millis, self.detail
        )
    }
}

fn report(
    id: usize,
    name: &'static str,
    start: Instant,
    ok: bool,
    detail: String,
) -> CheckReport {
    CheckReport {
        id,
        name,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail,
        millis: start.elapsed().as_millis(),
    }
}

/// Runs every check in order, printing one line per verdict.
pub fn run_all() -> Vec<CheckReport> {
    let checks: [fn() -> CheckReport; 10] = [
        c01_beyond_half_plain_char2,
        c02_beyond_half_plain_char3,
        c03_twisted_beyond_binary_base,
        c04_additive_twist_and_u1_agreement,
        c05_symmetric_model_boundary,
        c06_classical_regression,
        c07_nearest_codeword_agreement,
        c08_quadratic_solver_grids,
        c09_rank_machinery,
        c10_minimum_distance_sweep,
    ];
    let mut out = Vec::with_capacity(checks.len());
    for f in checks {
        let rep = f();
        println!("{rep}");
        out.push(rep);
    }
    out
}

fn gg_model_a(p: u64, l: usize, n: usize, k: usize) -> (Ctx, crate::models::ModelAParams, CodeSpec) {
    let base = FieldContext::new(p, l, n, 1).unwrap();
    let (ctx, pa) = model_a_setup(&base, k, ModelAVariant::GabidulinBeyond).unwrap();
    let spec = CodeSpec::new(&ctx, CodeFamily::Gabidulin, k, None).unwrap();
    (ctx, pa, spec)
}

fn c01_beyond_half_plain_char2() -> CheckReport {
    let start = Instant::now();
    let (_, pa, spec) = gg_model_a(2, 1, 6, 3);
    let stats = sim::run_trials_seq(&spec, &ErrorSource::ModelA { params: pa, t: 2 }, 200, 0xACC0_0001, false);
    let millis_ok = start.elapsed().as_millis() < 30_000;
    // a trial recovers the message when the decoder returns it, uniquely
    // or within a reported candidate list
    let recovered = stats.successes + stats.ambiguous_with_truth;
    let ok = recovered == 200 && millis_ok;
    report(
        1,
        "beyond-half decode, plain family, char 2",
        start,
        ok,
        format!(
            "n=6 k=3 t=2: recovered {recovered}/200 ({} uniquely, {} ambiguous), \
             miscorrected {}, within 30 s: {millis_ok}",
            stats.successes, stats.ambiguous, stats.miscorrections
        ),
    )
}

fn c02_beyond_half_plain_char3() -> CheckReport {
    let start = Instant::now();
    let (_, pa, spec) = gg_model_a(3, 1, 4, 1);
    // bespoke loop so the quadratic path can be counted
    let ctx = spec.ctx().clone();
    let mut unique = 0u32;
    let mut ambiguous_with_truth = 0u32;
    let mut ambiguous_lost = 0u32;
    let mut quadratic_used = 0u32;
    for trial in 0..100u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0xACC0_0002);
        rng.set_stream(trial);
        let m: Vec<FieldElement> = (0..1).map(|_| ctx.random_element(&mut rng)).collect();
        let c = spec.encode(&m).unwrap();
        let e = sample_model_a_error(&ctx, &pa, 1, 2, &mut rng).unwrap();
        let r: Vec<FieldElement> = c.iter().zip(&e.vector).map(|(a, b)| ctx.add(a, b)).collect();
        match decoders::decode(&spec, Some(&pa), &r) {
            Ok(rep) if rep.message == m => {
                unique += 1;
                if rep.trace.mu.len() == 3 && !ctx.is_zero(&rep.trace.mu[0]) {
                    quadratic_used += 1;
                }
            }
            Err(DecodeError::Ambiguous(cands)) => {
                if cands.iter().any(|cand| cand.message == m) {
                    ambiguous_with_truth += 1;
                } else {
                    ambiguous_lost += 1;
                }
            }
            _ => {}
        }
    }
    let recovered = unique + ambiguous_with_truth;
    let ok = recovered == 100 && quadratic_used > 0;
    report(
        2,
        "beyond-half decode, plain family, char 3",
        start,
        ok,
        format!(
            "n=4 k=1 t=2: recovered {recovered}/100 ({unique} uniquely, \
             {ambiguous_with_truth} ambiguous, {ambiguous_lost} lost), \
             quadratic branch on {quadratic_used} trials"
        ),
    )
}

fn c03_twisted_beyond_binary_base() -> CheckReport {
    let start = Instant::now();
    // As stated: q = 2, n = 8, k = 2. The twist scalar must satisfy
    // N(eps) != (-1)^(nk); over F_2 the only nonzero scalar has norm 1
    // and (-1)^(nk) = 1, so no admissible scalar exists. Prove it by
    // scanning every scalar at every exponent.
    let binary = FieldContext::new(2, 1, 8, 1).unwrap();
    let mut admissible = 0usize;
    for h in 1..8 {
        if first_valid_eps(&binary, CodeFamily::TwistedGabidulin, 2, h).is_some() {
            admissible += 1;
        }
    }
    // Demonstrate the same decode shape over the smallest base field
    // where the family is nonempty: q = 3, same n, k, t.
    let base = FieldContext::new(3, 1, 8, 1).unwrap();
    let (ctx, pa) = model_a_setup(&base, 2, ModelAVariant::TwistedBeyond).unwrap();
    let eps = first_valid_eps(&ctx, CodeFamily::TwistedGabidulin, 2, 1).unwrap();
    let spec = CodeSpec::new(&ctx, CodeFamily::TwistedGabidulin, 2, Some((1, eps))).unwrap();
    let stats = sim::run_trials_seq(&spec, &ErrorSource::ModelA { params: pa, t: 3 }, 100, 0xACC0_0003, false);
    let demo_ok = stats.successes == 100 && stats.branch_case2 == 100;
    let status = if admissible == 0 && demo_ok {
        CheckStatus::Unattainable
    } else {
        CheckStatus::Fail
    };
    CheckReport {
        id: 3,
        name: "twisted decode one beyond, binary base field",
        status,
        detail: format!(
            "family is empty over q=2 (0 admissible twist scalars across h=1..7, verified \
             exhaustively); demonstrated over q=3 instead: n=8 k=2 t=3 recovered {}/100, \
             case-2 branch on {}/100",
            stats.successes, stats.branch_case2
        ),
        millis: start.elapsed().as_millis(),
    }
}

fn c04_additive_twist_and_u1_agreement() -> CheckReport {
    let start = Instant::now();
    // main run: q0 = 2 inside q = 4, n = 6, k = 2, h = 2, t = 2
    let base = FieldContext::with_tower(2, 1, 2, 6, 1).unwrap();
    let (ctx, pa) = model_a_setup(&base, 2, ModelAVariant::TwistedBeyond).unwrap();
    let eps = first_valid_eps(&ctx, CodeFamily::AdditiveTwistedGabidulin, 2, 2).unwrap();
    let spec = CodeSpec::new(&ctx, CodeFamily::AdditiveTwistedGabidulin, 2, Some((2, eps))).unwrap();
    let stats = sim::run_trials_seq(&spec, &ErrorSource::ModelA { params: pa, t: 2 }, 100, 0xACC0_0004, false);

    // degenerate tower u = 1: the additive twist collapses onto the plain
    // twisted family; both decoders must produce identical output
    let base1 = FieldContext::with_tower(2, 2, 1, 6, 1).unwrap();
    let (ctx1, pa1) = model_a_setup(&base1, 2, ModelAVariant::TwistedBeyond).unwrap();
    let eps1 = first_valid_eps(&ctx1, CodeFamily::AdditiveTwistedGabidulin, 2, 1).unwrap();
    let spec_a =
        CodeSpec::new(&ctx1, CodeFamily::AdditiveTwistedGabidulin, 2, Some((1, eps1.clone())))
            .unwrap();
    let spec_g =
        CodeSpec::new(&ctx1, CodeFamily::TwistedGabidulin, 2, Some((1, eps1))).unwrap();
    let mut agreements = 0u32;
    for trial in 0..50u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0xACC0_0044);
        rng.set_stream(trial);
        let m: Vec<FieldElement> = (0..2).map(|_| ctx1.random_element(&mut rng)).collect();
        let ca = spec_a.encode(&m).unwrap();
        let cg = spec_g.encode(&m).unwrap();
        if ca != cg {
            break;
        }
        let e = match sample_model_a_error(&ctx1, &pa1, 2, 2, &mut rng) {
            Ok(e) => e,
            Err(_) => break,
        };
        let r: Vec<FieldElement> = ca.iter().zip(&e.vector).map(|(a, b)| ctx1.add(a, b)).collect();
        let ra = decoders::decode_agtg(&spec_a, Some(&pa1), &r);
        let rg = decoders::decode_gtg(&spec_g, Some(&pa1), &r);
        let same = match (&ra, &rg) {
            (Ok(x), Ok(y)) => {
                x.message == y.message
                    && x.error_poly.coeffs() == y.error_poly.coeffs()
                    && x.branch == y.branch
            }
            (Err(DecodeError::Ambiguous(xs)), Err(DecodeError::Ambiguous(ys))) => {
                xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| x.message == y.message)
            }
            (Err(DecodeError::Failure), Err(DecodeError::Failure)) => true,
            _ => false,
        };
        if same {
            agreements += 1;
        }
    }
    let ok = stats.successes == 100 && agreements == 50;
    report(
        4,
        "additive twist decode and u=1 degeneration",
        start,
        ok,
        format!(
            "q0=2,u=2,n=6,k=2,h=2,t=2: recovered {}/100, ambiguous {}; u=1 tower agreed with \
             plain twisted decoder on {agreements}/50 shared trials",
            stats.successes, stats.ambiguous
        ),
    )
}

fn c05_symmetric_model_boundary() -> CheckReport {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (n, k, seed) in [(7usize, 3usize, 0xACC0_0005u64), (8, 3, 0xACC0_0055)] {
        let ctx = FieldContext::new(2, 2, n, 1).unwrap();
        let eps = first_valid_eps(&ctx, CodeFamily::TwistedGabidulin, k, 1).unwrap();
        let spec = CodeSpec::new(&ctx, CodeFamily::TwistedGabidulin, k, Some((1, eps))).unwrap();
        let mut successes = 0u32;
        let mut rank_lo = usize::MAX;
        let mut rank_hi = 0usize;
        for trial in 0..200u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let m: Vec<FieldElement> = (0..k).map(|_| ctx.random_element(&mut rng)).collect();
            let c = spec.encode(&m).unwrap();
            let e = sample_model_b_error(&ctx, &ModelBParams, &mut rng).unwrap();
            let r: Vec<FieldElement> =
                c.iter().zip(&e.vector).map(|(a, b)| ctx.add(a, b)).collect();
            rank_lo = rank_lo.min(e.rank);
            rank_hi = rank_hi.max(e.rank);
            if let Ok(rep) = decoders::decode_model_b_lowrate(&spec, &r) {
                if rep.message == m {
                    successes += 1;
                }
            }
        }
        ok &= successes == 200;
        details.push(format!(
            "n={n} k={k}: recovered {successes}/200, realized ranks {rank_lo}..{rank_hi}"
        ));
    }
    report(5, "symmetric-model decode at boundary rate", start, ok, details.join("; "))
}

fn c06_classical_regression() -> CheckReport {
    let start = Instant::now();
    let ctx = FieldContext::new(2, 1, 8, 1).unwrap();
    let spec = CodeSpec::new(&ctx, CodeFamily::Gabidulin, 3, None).unwrap();
    let mut successes = 0u32;
    let mut case1 = 0u32;
    for trial in 0..200u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0xACC0_0006);
        rng.set_stream(trial);
        let m: Vec<FieldElement> = (0..3).map(|_| ctx.random_element(&mut rng)).collect();
        let c = spec.encode(&m).unwrap();
        let t = rng.gen_range(1..=2usize);
        let e = random_rank_t(&ctx, t, &mut rng).eval_at_alphas();
        let r: Vec<FieldElement> = c.iter().zip(&e).map(|(a, b)| ctx.add(a, b)).collect();
        if let Ok(rep) = decoders::decode(&spec, None, &r) {
            if rep.message == m && rep.t_used == t {
                successes += 1;
                if rep.branch == DecodeBranch::Case1 {
                    case1 += 1;
                }
            }
        }
    }
    let ok = successes == 200 && case1 == 200;
    report(
        6,
        "half-distance regression without constraints",
        start,
        ok,
        format!("n=8 k=3 t<=2: recovered {successes}/200, case-1 branch on {case1}/200"),
    )
}

fn c07_nearest_codeword_agreement() -> CheckReport {
    let start = Instant::now();
    let (ctx, pa, spec) = gg_model_a(2, 1, 4, 1);
    let mut compared = 0u32;
    let mut mismatches = 0u32;
    let mut skipped = 0u32;
    for trial in 0..200u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0xACC0_0007);
        rng.set_stream(trial);
        let m: Vec<FieldElement> = (0..1).map(|_| ctx.random_element(&mut rng)).collect();
        let c = spec.encode(&m).unwrap();
        let e = sample_model_a_error(&ctx, &pa, 1, 2, &mut rng).unwrap();
        let r: Vec<FieldElement> = c.iter().zip(&e.vector).map(|(a, b)| ctx.add(a, b)).collect();
        let oracle = oracle::nearest_codeword_bruteforce(&spec, &r).unwrap();
        if !oracle.unique {
            skipped += 1;
            continue;
        }
        compared += 1;
        match decoders::decode(&spec, Some(&pa), &r) {
            Ok(rep) if rep.message == oracle.message && rep.t_used == oracle.distance => {}
            _ => mismatches += 1,
        }
    }
    let ok = mismatches == 0 && compared > 0;
    report(
        7,
        "decoder matches nearest-codeword search",
        start,
        ok,
        format!(
            "n=4 k=1 t=2: {compared} unique-minimizer trials compared, {mismatches} mismatches, \
             {skipped} skipped as non-unique"
        ),
    )
}

fn c08_quadratic_solver_grids() -> CheckReport {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (p, l, n, label) in [(2u64, 1usize, 6usize, "2^6"), (3, 1, 4, "3^4")] {
        let ctx = FieldContext::new(p, l, n, 1).unwrap();
        let elems: Vec<FieldElement> = ctx.elements().collect();
        let mut mismatches = 0u64;
        for b in &elems {
            for c in &elems {
                let fast = ctx.solve_quadratic(b, c);
                let slow = oracle::quad_roots_bruteforce(&ctx, b, c).unwrap();
                if fast != slow {
                    mismatches += 1;
                }
            }
        }
        ok &= mismatches == 0;
        details.push(format!("F_{label}: {} pairs, {mismatches} mismatches", elems.len() * elems.len()));
    }
    report(8, "quadratic solver equals enumeration", start, ok, details.join("; "))
}

fn c09_rank_machinery() -> CheckReport {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (p, l, n, label) in [(2u64, 1usize, 4usize, "2^4"), (3, 1, 4, "3^4")] {
        let ctx = FieldContext::new(p, l, n, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0xACC0_0009);
        let mut mismatches = 0u32;
        for _ in 0..1000 {
            let coeffs: Vec<FieldElement> = (0..n).map(|_| ctx.random_element(&mut rng)).collect();
            let poly = LinearizedPoly::new(&ctx, coeffs);
            let r_dickson = poly.rank();
            let r_brute = oracle::rank_bruteforce(&ctx, &poly).unwrap();
            let r_matrix = linalg::rank(&ctx, &poly.to_fq_matrix());
            if r_dickson != r_brute || r_dickson != r_matrix {
                mismatches += 1;
            }
        }
        ok &= mismatches == 0;
        details.push(format!("F_{label}: 1000 polys, {mismatches} rank mismatches"));
    }
    // windows of a rank-t Dickson matrix: t consecutive rows against t
    // cyclically consecutive columns stay nonsingular
    let ctx = FieldContext::new(2, 1, 6, 1).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(0xACC0_0099);
    let n = 6;
    let mut window_failures = 0u32;
    for i in 0..100 {
        let t = i % 5 + 1;
        let poly = random_rank_t(&ctx, t, &mut rng);
        let d = poly.dickson_matrix();
        for i0 in 0..=(n - t) {
            for j0 in 0..n {
                let sub: Vec<Vec<FieldElement>> = (0..t)
                    .map(|r| (0..t).map(|c| d[i0 + r][(j0 + c) % n].clone()).collect())
                    .collect();
                if linalg::rank(&ctx, &sub) != t {
                    window_failures += 1;
                }
            }
        }
    }
    ok &= window_failures == 0;
    details.push(format!("100 rank-t windows over F_2^6: {window_failures} singular"));
    report(9, "rank oracles and window nonsingularity", start, ok, details.join("; "))
}

fn c10_minimum_distance_sweep() -> CheckReport {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;

    fn sweep(spec: &CodeSpec, label: &str, details: &mut Vec<String>, ok: &mut bool) {
        let ctx = spec.ctx();
        let k = spec.k();
        let want = ctx.n() - k + 1;
        let elems: Vec<FieldElement> = ctx.elements().collect();
        let mut message = vec![ctx.zero(); k];
        let mut idx = vec![0usize; k];
        let mut min_seen = usize::MAX;
        let mut count = 0u64;
        loop {
            if idx.iter().any(|&i| i != 0) {
                for (slot, &i) in idx.iter().enumerate() {
                    message[slot] = elems[i].clone();
                }
                let c = spec.encode(&message).unwrap();
                min_seen = min_seen.min(vector_rank(ctx, &c));
                count += 1;
            }
            // odometer over the message space
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    let okay = min_seen >= want;
                    *ok &= okay;
                    details.push(format!(
                        "{label} k={k}: {count} nonzero codewords, min rank {min_seen} (need >= {want})"
                    ));
                    return;
                }
                idx[pos] += 1;
                if idx[pos] < elems.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    let gg_ctx = FieldContext::new(2, 1, 4, 1).unwrap();
    for k in [1usize, 2] {
        let spec = CodeSpec::new(&gg_ctx, CodeFamily::Gabidulin, k, None).unwrap();
        sweep(&spec, "plain q=2", &mut details, &mut ok);
    }
    let gtg_ctx = FieldContext::new(2, 2, 4, 1).unwrap();
    for k in [1usize, 2] {
        let eps = first_valid_eps(&gtg_ctx, CodeFamily::TwistedGabidulin, k, 1).unwrap();
        let spec =
            CodeSpec::new(&gtg_ctx, CodeFamily::TwistedGabidulin, k, Some((1, eps))).unwrap();
        sweep(&spec, "twisted q=4", &mut details, &mut ok);
    }
    let agtg_ctx = FieldContext::with_tower(2, 1, 2, 4, 1).unwrap();
    for k in [1usize, 2] {
        let eps =
            first_valid_eps(&agtg_ctx, CodeFamily::AdditiveTwistedGabidulin, k, 2).unwrap();
        let spec =
            CodeSpec::new(&agtg_ctx, CodeFamily::AdditiveTwistedGabidulin, k, Some((2, eps)))
                .unwrap();
        sweep(&spec, "additive q=4/q0=2", &mut details, &mut ok);
    }
    report(10, "exhaustive minimum-distance sweep", start, ok, details.join("; "))
}
