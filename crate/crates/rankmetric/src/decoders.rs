//! Decoders for the three code families.
//!
//! Decoding works on the interpolation coefficients eta of the received
//! word: eta_i equals the codeword coefficient plus the error coefficient
//! z_i, so every position the encoder leaves at zero exposes z_i directly.
//! The plain family exposes indices k..n, the twisted ones k+1..n (the
//! twist contaminates position k).
//!
//! Two regimes share one engine:
//!
//! * Case 1: enough exposed coefficients for the key equation alone.
//!   Iterative deepening over the error rank t finds the smallest t whose
//!   recurrence closes up and survives verification; this covers
//!   t <= floor((n - lo)/2) with lo the first exposed index.
//! * Case 2: one equation short, t = (n - lo + 1)/2. The key equation
//!   then leaves a line gamma = g + X g'. The two channel constraints of
//!   the asymmetric model (on z_0 and on one further coefficient z_c)
//!   cut the line down: eliminating the half-Frobenius of X between them
//!   leaves an ordinary quadratic in X. Candidate X values, plus the pole
//!   of the constraint transform, are each verified fully.
//!
//! Every candidate must pass the same gate before being reported: the
//! recurrence must close with period n, the reconstructed error must have
//! rank exactly t, the model constraints must hold, and for twisted
//! families the coefficient at position k must split as twist(m_0) plus
//! z_k. Several survivors with distinct error polynomials are reported as
//! an ambiguity instead of guessing.
//!
//! The symmetric model has its own direct decoder: the symmetry pairs
//! off coefficients so that, at low rate, every unknown z_i has a known
//! partner, and the twist gate releases z_0. No rank assumption is needed.

use std::fmt;

use crate::codes::{CodeFamily, CodeSpec};
use crate::field::FieldElement;
use crate::keyeq::{self, KeyEqSolution};
use crate::linpoly::LinearizedPoly;
use crate::models::{self, ModelAParams, ModelAVariant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeBranch {
    Case1,
    Case2,
    ModelBDirect,
}

impl DecodeBranch {
    pub fn tag(self) -> &'static str {
        match self {
            DecodeBranch::Case1 => "case1",
            DecodeBranch::Case2 => "case2",
            DecodeBranch::ModelBDirect => "model-b-direct",
        }
    }
}

impl fmt::Display for DecodeBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Intermediate values of a decode, mainly for diagnostics and tests.
/// Case 1 fills only gamma; Case 2 records the full elimination chain.
#[derive(Clone, Debug, Default)]
pub struct DecodeTrace {
    pub gamma: Vec<FieldElement>,
    pub gamma_prime: Vec<FieldElement>,
    /// delta_0..delta_3: affine parts of z_0(X) and of the pivot equation.
    pub delta: Vec<FieldElement>,
    /// tau_0..tau_2: coefficients of the z_0 constraint in X^sigma and X.
    pub tau: Vec<FieldElement>,
    /// a_1..a_4: Moebius coefficients of z_c as a function of X^([-t]).
    pub a: Vec<FieldElement>,
    /// u_1..u_4: coefficients of the z_c constraint.
    pub u: Vec<FieldElement>,
    /// mu_1..mu_3: the eliminated quadratic mu_1 X^2 + mu_2 X + mu_3.
    pub mu: Vec<FieldElement>,
    pub x_candidates: Vec<FieldElement>,
    pub x_chosen: Option<FieldElement>,
}

#[derive(Clone, Debug)]
pub struct DecodeReport {
    pub message: Vec<FieldElement>,
    pub error_poly: LinearizedPoly,
    pub branch: DecodeBranch,
    pub t_used: usize,
    pub trace: DecodeTrace,
}

#[derive(Debug)]
pub enum DecodeError {
    /// No candidate survived verification.
    Failure,
    /// Several distinct error polynomials explain the received word.
    Ambiguous(Vec<DecodeReport>),
    /// The symmetric-model decoder needs k small enough that every hidden
    /// coefficient has an exposed symmetry partner.
    CapacityExceeded { k: usize, max: usize },
    WrongLength { got: usize, want: usize },
    FamilyMismatch { expected: &'static str, got: &'static str },
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::Failure => write!(f, "no candidate error explains the received word"),
            DecodeError::Ambiguous(c) => {
                write!(f, "{} distinct candidates explain the received word", c.len())
            }
            DecodeError::CapacityExceeded { k, max } => {
                write!(f, "dimension k={k} exceeds the symmetric-model capacity {max}")
            }
            DecodeError::WrongLength { got, want } => {
                write!(f, "received word has length {got}, expected {want}")
            }
            DecodeError::FamilyMismatch { expected, got } => {
                write!(f, "decoder expects a {expected} code, got {got}")
            }
        }
    }
}

impl std::error::Error for DecodeError {}

fn family_gate(spec: &CodeSpec, want: CodeFamily) -> Result<(), DecodeError> {
    if spec.family() == want {
        Ok(())
    } else {
        Err(DecodeError::FamilyMismatch {
            expected: want.tag(),
            got: spec.family().tag(),
        })
    }
}

pub fn decode_gabidulin(
    spec: &CodeSpec,
    params: Option<&ModelAParams>,
    r: &[FieldElement],
) -> Result<DecodeReport, DecodeError> {
    family_gate(spec, CodeFamily::Gabidulin)?;
    decode_core(spec, params, r)
}

pub fn decode_gtg(
    spec: &CodeSpec,
    params: Option<&ModelAParams>,
    r: &[FieldElement],
) -> Result<DecodeReport, DecodeError> {
    family_gate(spec, CodeFamily::TwistedGabidulin)?;
    decode_core(spec, params, r)
}

pub fn decode_agtg(
    spec: &CodeSpec,
    params: Option<&ModelAParams>,
    r: &[FieldElement],
) -> Result<DecodeReport, DecodeError> {
    family_gate(spec, CodeFamily::AdditiveTwistedGabidulin)?;
    decode_core(spec, params, r)
}

/// Family-agnostic entry point.
pub fn decode(
    spec: &CodeSpec,
    params: Option<&ModelAParams>,
    r: &[FieldElement],
) -> Result<DecodeReport, DecodeError> {
    decode_core(spec, params, r)
}

fn decode_core(
    spec: &CodeSpec,
    params: Option<&ModelAParams>,
    r: &[FieldElement],
) -> Result<DecodeReport, DecodeError> {
    let ctx = spec.ctx();
    let n = ctx.n();
    if r.len() != n {
        return Err(DecodeError::WrongLength { got: r.len(), want: n });
    }
    if let Some(pa) = params {
        let plain_code = spec.family() == CodeFamily::Gabidulin;
        let plain_params = pa.variant == ModelAVariant::GabidulinBeyond;
        if plain_code != plain_params {
            return Err(DecodeError::FamilyMismatch {
                expected: if plain_params { "GG" } else { "GTG or AGTG" },
                got: spec.family().tag(),
            });
        }
    }
    let eta = spec.eta_transform(r).expect("length was checked");
    let lo = spec.known_from();
    let known: Vec<Option<FieldElement>> = (0..n)
        .map(|i| (i >= lo).then(|| eta[i].clone()))
        .collect();

    // Case 1: smallest rank whose recurrence closes and verifies
    for t in 0..=(n - lo) / 2 {
        if let Ok(KeyEqSolution::Unique(gamma)) =
            keyeq::solve_key_equation(ctx, &known, t, lo + t, n)
        {
            let trace = DecodeTrace { gamma: gamma.clone(), ..DecodeTrace::default() };
            if let Some(report) =
                try_accept(spec, params, &eta, &known, r, &gamma, t, DecodeBranch::Case1, trace)
            {
                return Ok(report);
            }
        }
    }

    // Case 2: one more unit of rank, channel constraints close the gap
    if let Some(pa) = params {
        if (n - lo) % 2 == 1 {
            let t = (n - lo + 1) / 2;
            let mut survivors = case_two(spec, pa, &eta, &known, r, t);
            match survivors.len() {
                0 => {}
                1 => return Ok(survivors.pop().unwrap()),
                _ => return Err(DecodeError::Ambiguous(survivors)),
            }
        }
    }

    Err(DecodeError::Failure)
}

/// The single verification gate. Returns a report only when gamma
/// regenerates a period-n sequence consistent with every exposed
/// coefficient, the error rank is exactly t, the channel constraints hold
/// (vacuous at t = 0 or without channel parameters), and the twisted
/// position splits correctly.
#[allow(clippy::too_many_arguments)]
fn try_accept(
    spec: &CodeSpec,
    params: Option<&ModelAParams>,
    eta: &[FieldElement],
    known: &[Option<FieldElement>],
    r: &[FieldElement],
    gamma: &[FieldElement],
    t: usize,
    branch: DecodeBranch,
    trace: DecodeTrace,
) -> Option<DecodeReport> {
    let ctx = spec.ctx();
    let z = keyeq::reconstruct_periodic(ctx, gamma, known)?;
    let poly = LinearizedPoly::new(ctx, z);
    if poly.rank() != t {
        return None;
    }
    if t > 0 {
        if let Some(pa) = params {
            if !models::check_model_a(ctx, pa, spec.k(), poly.coeffs()) {
                return None;
            }
        }
    }
    let k = spec.k();
    let message: Vec<FieldElement> = (0..k)
        .map(|i| ctx.sub(&eta[i], &poly.coeffs()[i]))
        .collect();
    if spec.family().is_twisted() {
        let gate = ctx.sub(&eta[k], &poly.coeffs()[k]);
        if gate != spec.twist_forward(&message[0]) {
            return None;
        }
    }
    debug_assert!(
        {
            let c = spec.encode(&message).unwrap();
            let e = poly.eval_at_alphas();
            (0..ctx.n()).all(|i| ctx.add(&c[i], &e[i]) == r[i])
        },
        "accepted candidate must re-encode to the received word"
    );
    Some(DecodeReport { message, error_poly: poly, branch, t_used: t, trace })
}

fn known_at<'a>(known: &'a [Option<FieldElement>], idx: usize) -> &'a FieldElement {
    known[idx].as_ref().expect("index lies in the exposed window")
}

/// Case 2 of the asymmetric model. The key equation yields a line
/// gamma(X) = g + X g'; both channel constraints become algebraic
/// conditions on X and their combination is solved exactly where possible,
/// by enumeration on tiny fields otherwise.
fn case_two(
    spec: &CodeSpec,
    pa: &ModelAParams,
    eta: &[FieldElement],
    known: &[Option<FieldElement>],
    r: &[FieldElement],
    t: usize,
) -> Vec<DecodeReport> {
    let ctx = spec.ctx();
    let n = ctx.n();
    let lo = spec.known_from();
    let Ok(half) = ctx.sigma_half() else {
        return Vec::new();
    };
    debug_assert_eq!(pa.variant.constrained_index(spec.k()), lo - 1);
    let alpha1 = &ctx.alphas()[pa.theta1];
    let alpha2 = &ctx.alphas()[pa.theta2];

    let (g, gp) = match keyeq::solve_key_equation(ctx, known, t, lo + t, n) {
        Ok(KeyEqSolution::Line { base, dir }) => (base, dir),
        Ok(KeyEqSolution::Unique(gamma)) => {
            // window happened to pin gamma without the constraints
            let trace = DecodeTrace { gamma: gamma.clone(), ..DecodeTrace::default() };
            return try_accept(spec, Some(pa), eta, known, r, &gamma, t, DecodeBranch::Case2, trace)
                .into_iter()
                .collect();
        }
        Err(_) => return Vec::new(),
    };

    let sg = |x: &FieldElement| ctx.frob(x, half as i64);

    // z_0(X) = d0 + d1 X from the wrap-around recurrence at index 0
    let mut d0 = ctx.zero();
    let mut d1 = ctx.zero();
    for j in 1..=t {
        let zj = ctx.frob(known_at(known, n - j), j as i64);
        d0 = ctx.add(&d0, &ctx.mul(&g[j - 1], &zj));
        d1 = ctx.add(&d1, &ctx.mul(&gp[j - 1], &zj));
    }
    // z_0^sigma - z_0 = alpha_theta1 as tau0 X^sigma + tau1 X + tau2 = 0
    let tau0 = sg(&d1);
    let tau1 = ctx.neg(&d1);
    let tau2 = ctx.sub(&ctx.sub(&sg(&d0), &d0), alpha1);

    // pivot recurrence at i2 = lo + t - 1 reaches one step below the
    // window: z_i2 = (d2 + d3 X) + (g_t + g'_t X) z_c^([t])
    let i2 = lo + t - 1;
    let mut d2 = ctx.zero();
    let mut d3 = ctx.zero();
    for j in 1..t {
        let zj = ctx.frob(known_at(known, i2 - j), j as i64);
        d2 = ctx.add(&d2, &ctx.mul(&g[j - 1], &zj));
        d3 = ctx.add(&d3, &ctx.mul(&gp[j - 1], &zj));
    }
    // z_c = (a1 + a2 Y) / (a3 + a4 Y) with Y = X^([-t])
    let mt = |x: &FieldElement| ctx.frob(x, -(t as i64));
    let a1 = mt(&ctx.sub(known_at(known, i2), &d2));
    let a2 = ctx.neg(&mt(&d3));
    let a3 = mt(&g[t - 1]);
    let a4 = mt(&gp[t - 1]);

    // z_c^sigma - z_c = alpha_theta2, cleared of denominators and shifted
    // back by [t]: u1 X^sigma X + u2 X^sigma + u3 X + u4 = 0
    let pt = |x: &FieldElement| ctx.frob(x, t as i64);
    let cross = |x: &FieldElement, y: &FieldElement, w: &FieldElement, v: &FieldElement| {
        // x^sigma y - w v^sigma - alpha2 * (last two twisted as given)
        ctx.sub(&ctx.mul(&sg(x), y), &ctx.mul(w, &sg(v)))
    };
    let u1 = pt(&ctx.sub(&cross(&a2, &a4, &a2, &a4), &ctx.mul(alpha2, &ctx.mul(&a4, &sg(&a4)))));
    let u2 = pt(&ctx.sub(&cross(&a2, &a3, &a1, &a4), &ctx.mul(alpha2, &ctx.mul(&a3, &sg(&a4)))));
    let u3 = pt(&ctx.sub(&cross(&a1, &a4, &a2, &a3), &ctx.mul(alpha2, &ctx.mul(&a4, &sg(&a3)))));
    let u4 = pt(&ctx.sub(&cross(&a1, &a3, &a1, &a3), &ctx.mul(alpha2, &ctx.mul(&a3, &sg(&a3)))));

    let mut mu = Vec::new();
    let mut x_candidates: Vec<FieldElement> = Vec::new();
    let mut enumerate_field = false;
    if !ctx.is_zero(&tau0) {
        // X^sigma = -(tau1 X + tau2)/tau0; substitution into the z_c
        // constraint gives mu1 X^2 + mu2 X + mu3 = 0
        let mu1 = ctx.neg(&ctx.mul(&u1, &tau1));
        let mu2 = ctx.add(
            &ctx.sub(&ctx.neg(&ctx.mul(&u1, &tau2)), &ctx.mul(&u2, &tau1)),
            &ctx.mul(&u3, &tau0),
        );
        let mu3 = ctx.add(&ctx.neg(&ctx.mul(&u2, &tau2)), &ctx.mul(&u4, &tau0));
        if !ctx.is_zero(&mu1) {
            let b = ctx.div(&mu2, &mu1).unwrap();
            let c = ctx.div(&mu3, &mu1).unwrap();
            x_candidates.extend(ctx.solve_quadratic(&b, &c));
        } else if !ctx.is_zero(&mu2) {
            x_candidates.push(ctx.neg(&ctx.div(&mu3, &mu2).unwrap()));
        } else if ctx.is_zero(&mu3) {
            // both constraints degenerate to the same condition on X
            enumerate_field = true;
        }
        mu = vec![mu1, mu2, mu3];
    } else if ctx.is_zero(&tau2) {
        // tau0 = 0 forces tau1 = 0 too (both stem from d1); the z_0
        // constraint holds for every X and only the semilinear z_c
        // condition remains
        enumerate_field = true;
    }
    // a vanishing denominator g_t + g'_t X removes z_c from the pivot
    // equation entirely; that X is a legitimate extra candidate
    if !ctx.is_zero(&gp[t - 1]) {
        x_candidates.push(ctx.neg(&ctx.div(&g[t - 1], &gp[t - 1]).unwrap()));
    }
    if enumerate_field && ctx.order_big() <= 4096u32.into() {
        x_candidates.extend(ctx.elements());
    }
    x_candidates.sort_by(|a, b| a.coords().cmp(b.coords()));
    x_candidates.dedup();

    let base_trace = DecodeTrace {
        gamma: g.clone(),
        gamma_prime: gp.clone(),
        delta: vec![d0, d1, d2, d3],
        tau: vec![tau0, tau1, tau2],
        a: vec![a1, a2, a3, a4],
        u: vec![u1, u2, u3, u4],
        mu,
        x_candidates: x_candidates.clone(),
        x_chosen: None,
    };

    let mut survivors: Vec<DecodeReport> = Vec::new();
    for x in &x_candidates {
        let gamma_hat: Vec<FieldElement> = g
            .iter()
            .zip(&gp)
            .map(|(gj, gpj)| ctx.add(gj, &ctx.mul(x, gpj)))
            .collect();
        let mut trace = base_trace.clone();
        trace.x_chosen = Some(x.clone());
        if let Some(report) =
            try_accept(spec, Some(pa), eta, known, r, &gamma_hat, t, DecodeBranch::Case2, trace)
        {
            if !survivors
                .iter()
                .any(|s| s.error_poly.coeffs() == report.error_poly.coeffs())
            {
                survivors.push(report);
            }
        }
    }
    survivors
}

/// Direct decoder for the symmetric model on twisted codes at low rate.
///
/// The symmetry ties each hidden coefficient z_i, 1 <= i <= k, to an
/// exposed partner, and the twist releases z_0 from the coefficient at
/// position k. Works for any error rank; fully exposed symmetric pairs
/// double as consistency checks, which the boundary rate has none of.
pub fn decode_model_b_lowrate(
    spec: &CodeSpec,
    r: &[FieldElement],
) -> Result<DecodeReport, DecodeError> {
    let ctx = spec.ctx();
    let n = ctx.n();
    if r.len() != n {
        return Err(DecodeError::WrongLength { got: r.len(), want: n });
    }
    if !spec.family().is_twisted() {
        return Err(DecodeError::FamilyMismatch { expected: "GTG or AGTG", got: "GG" });
    }
    let k = spec.k();
    let max = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 - 1 };
    if k > max {
        return Err(DecodeError::CapacityExceeded { k, max });
    }
    let eta = spec.eta_transform(r).expect("length was checked");

    let mut z: Vec<Option<FieldElement>> = vec![None; n];
    for i in (k + 1)..n {
        z[i] = Some(eta[i].clone());
    }
    // pairs (i, partner) with z_partner = z_i^([partner]); i = 0 and,
    // for even n, i = n-1 stay unpaired
    let pair_top = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 - 1 };
    for i in 1..=pair_top {
        let partner = if n % 2 == 1 { n - i } else { n - i - 1 };
        if i >= k + 1 {
            let expect = ctx.frob(z[i].as_ref().unwrap(), partner as i64);
            if z[partner].as_ref().unwrap() != &expect {
                return Err(DecodeError::Failure);
            }
        } else {
            z[i] = Some(ctx.frob(z[partner].as_ref().unwrap(), -(partner as i64)));
        }
    }
    // the twist gate at position k releases z_0
    let w = ctx.sub(&eta[k], z[k].as_ref().unwrap());
    let m0 = spec.twist_invert(&w);
    z[0] = Some(ctx.sub(&eta[0], &m0));

    let coeffs: Vec<FieldElement> = z.into_iter().map(Option::unwrap).collect();
    if !models::check_model_b(ctx, &coeffs) {
        return Err(DecodeError::Failure);
    }
    let poly = LinearizedPoly::new(ctx, coeffs);
    let message: Vec<FieldElement> = (0..k)
        .map(|i| ctx.sub(&eta[i], &poly.coeffs()[i]))
        .collect();
    let c = spec.encode(&message).expect("message has length k");
    let e = poly.eval_at_alphas();
    for i in 0..n {
        if ctx.add(&c[i], &e[i]) != r[i] {
            return Err(DecodeError::Failure);
        }
    }
    let t_used = poly.rank();
    Ok(DecodeReport {
        message,
        error_poly: poly,
        branch: DecodeBranch::ModelBDirect,
        t_used,
        trace: DecodeTrace::default(),
    })
}
