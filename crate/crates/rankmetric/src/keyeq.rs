//! The key equation linking interpolation coefficients of a corrupted
//! word to its error polynomial.
//!
//! The coefficient sequence z_0, ..., z_(n-1) of a linearized polynomial
//! of rank t satisfies a skew recurrence with t connection coefficients,
//!
//!   z_i = sum_{j=1}^{t} gamma_j z_(i-j)^([j])   (indices cyclic mod n),
//!
//! because any t+1 consecutive columns of its Dickson matrix are
//! dependent while t consecutive ones are free. A decoder knows z only on
//! a tail window [lo, n); writing the recurrence at every index whose
//! references stay inside the window gives a linear system for gamma.
//! With enough equations the solution is unique; one equation short it is
//! a line, and the channel-model constraints pick the point on it.
//!
//! `solve_key_equation` is the dense reference solver. `solve_key_equation_bm`
//! is a skew Berlekamp-Massey synthesis that matches it on generic
//! windows at lower cost; the dense path stays the arbiter.

use std::collections::VecDeque;
use std::fmt;

use crate::field::{FieldContext, FieldElement};
use crate::linalg;

#[derive(Clone, Debug, PartialEq)]
pub enum KeyEqSolution {
    /// The system pinned every connection coefficient.
    Unique(Vec<FieldElement>),
    /// One degree of freedom: gamma = base + X * dir for a scalar X.
    Line { base: Vec<FieldElement>, dir: Vec<FieldElement> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum KeyEqError {
    /// No length-t recurrence fits the window.
    Inconsistent,
    /// More than one degree of freedom; the window is too short to be
    /// useful.
    NullityTooHigh { nullity: usize },
}

impl fmt::Display for KeyEqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyEqError::Inconsistent => write!(f, "no recurrence of the requested length fits"),
            KeyEqError::NullityTooHigh { nullity } => {
                write!(f, "solution space has dimension {nullity}, expected at most 1")
            }
        }
    }
}

impl std::error::Error for KeyEqError {}

fn known_at(known: &[Option<FieldElement>], idx: usize) -> &FieldElement {
    known[idx]
        .as_ref()
        .expect("key equation referenced a coefficient outside the known window")
}

/// Solves for gamma using the recurrence at indices eq_from..eq_to
/// (cyclic references mod n). Every referenced coefficient must be known.
pub fn solve_key_equation(
    ctx: &FieldContext,
    known: &[Option<FieldElement>],
    t: usize,
    eq_from: usize,
    eq_to: usize,
) -> Result<KeyEqSolution, KeyEqError> {
    let n = known.len();
    assert_eq!(n, ctx.n());
    assert!(t <= n);
    if t == 0 {
        let all_zero = (eq_from..eq_to).all(|i| ctx.is_zero(known_at(known, i % n)));
        return if all_zero {
            Ok(KeyEqSolution::Unique(Vec::new()))
        } else {
            Err(KeyEqError::Inconsistent)
        };
    }
    let mut rows = Vec::with_capacity(eq_to - eq_from);
    let mut rhs = Vec::with_capacity(eq_to - eq_from);
    for i in eq_from..eq_to {
        let row: Vec<FieldElement> = (1..=t)
            .map(|j| ctx.frob(known_at(known, (i + n - j) % n), j as i64))
            .collect();
        rows.push(row);
        rhs.push(known_at(known, i % n).clone());
    }
    let Some(sol) = linalg::solve(ctx, &rows, &rhs) else {
        return Err(KeyEqError::Inconsistent);
    };
    match sol.nullspace.len() {
        0 => Ok(KeyEqSolution::Unique(sol.particular)),
        1 => Ok(KeyEqSolution::Line {
            base: sol.particular,
            dir: sol.nullspace.into_iter().next().unwrap(),
        }),
        nullity => Err(KeyEqError::NullityTooHigh { nullity }),
    }
}

/// Runs the recurrence forward. `seed_recent_first` holds the t values
/// immediately before the first generated index, most recent first; the
/// result lists the next `count` values in natural order.
pub fn extend_sequence(
    ctx: &FieldContext,
    gamma: &[FieldElement],
    seed_recent_first: &[FieldElement],
    count: usize,
) -> Vec<FieldElement> {
    let t = gamma.len();
    assert_eq!(seed_recent_first.len(), t);
    let mut state: VecDeque<FieldElement> = seed_recent_first.iter().cloned().collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut v = ctx.zero();
        for (j, g) in gamma.iter().enumerate() {
            v = ctx.add(&v, &ctx.mul(g, &ctx.frob(&state[j], (j + 1) as i64)));
        }
        state.push_front(v.clone());
        state.pop_back();
        out.push(v);
    }
    out
}

/// Rebuilds the full period-n coefficient vector from the window tail and
/// checks it against every known position; None when the recurrence does
/// not actually close up with period n or contradicts a known value.
pub fn reconstruct_periodic(
    ctx: &FieldContext,
    gamma: &[FieldElement],
    known: &[Option<FieldElement>],
) -> Option<Vec<FieldElement>> {
    let n = known.len();
    let t = gamma.len();
    assert!(t <= n);
    // seed: z_(n-1), z_(n-2), ..., z_(n-t)
    let seed: Vec<FieldElement> = (0..t)
        .map(|j| known_at(known, n - 1 - j).clone())
        .collect();
    let z = extend_sequence(ctx, gamma, &seed, n);
    for (i, k) in known.iter().enumerate() {
        if let Some(v) = k {
            if z[i] != *v {
                return None;
            }
        }
    }
    Some(z)
}

pub fn check_period_n(
    ctx: &FieldContext,
    gamma: &[FieldElement],
    known: &[Option<FieldElement>],
) -> bool {
    reconstruct_periodic(ctx, gamma, known).is_some()
}

// ---------------------------------------------------------------------------
// Skew Berlekamp-Massey synthesis.

/// Shortest register lam with s_m = sum_j lam_j s_(m-j)^([j]) enforced
/// from index len(lam) onward. Returns (coefficients, length L); the
/// coefficient vector may be shorter than L when trailing terms vanish.
fn skew_bm(ctx: &FieldContext, s: &[FieldElement]) -> (Vec<FieldElement>, usize) {
    let mut lam: Vec<FieldElement> = Vec::new();
    let mut big_l = 0usize;
    let mut b_reg: Vec<FieldElement> = Vec::new();
    let mut delta_b = ctx.one();
    let mut m_b: i64 = -1;
    for m in 0..s.len() {
        let mut delta = s[m].clone();
        for (slot, lj) in lam.iter().enumerate() {
            let j = slot + 1;
            if ctx.is_zero(lj) {
                continue;
            }
            debug_assert!(m >= j, "register length stays at most the step index");
            delta = ctx.sub(&delta, &ctx.mul(lj, &ctx.frob(&s[m - j], j as i64)));
        }
        if ctx.is_zero(&delta) {
            continue;
        }
        let a = (m as i64 - m_b) as usize;
        let f = ctx
            .div(&delta, &ctx.frob(&delta_b, a as i64))
            .expect("stored discrepancy is nonzero");
        let old_lam = lam.clone();
        let need = (a + b_reg.len()).max(lam.len()).max(a);
        lam.resize(need, ctx.zero());
        lam[a - 1] = ctx.add(&lam[a - 1], &f);
        for (slot, bj) in b_reg.iter().enumerate() {
            let pos = a + slot; // lag a + (slot+1) sits at index a+slot
            let dec = ctx.mul(&f, &ctx.frob(bj, a as i64));
            lam[pos] = ctx.sub(&lam[pos], &dec);
        }
        if 2 * big_l <= m {
            b_reg = old_lam;
            delta_b = delta;
            m_b = m as i64;
            big_l = m + 1 - big_l;
        }
    }
    while lam.last().is_some_and(|c| ctx.is_zero(c)) {
        lam.pop();
    }
    debug_assert!(lam.len() <= big_l);
    (lam, big_l)
}

fn bm_window(
    ctx: &FieldContext,
    known: &[Option<FieldElement>],
    t: usize,
    eq_from: usize,
    eq_to: usize,
    phantom: Option<&FieldElement>,
) -> Option<Vec<FieldElement>> {
    let n = known.len();
    let mut s: Vec<FieldElement> = (eq_from - t..eq_to)
        .map(|i| known_at(known, i % n).clone())
        .collect();
    if let Some(v) = phantom {
        s.push(v.clone());
    }
    let (mut lam, big_l) = skew_bm(ctx, &s);
    if big_l > t {
        return None;
    }
    lam.resize(t, ctx.zero());
    Some(lam)
}

/// Berlekamp-Massey flavored drop-in for `solve_key_equation`. Matches the
/// dense solver on full-rank windows (the case every genuine decode hits)
/// and reproduces the one-short Line case by synthesizing the window twice
/// with a phantom wrap-around equation; anything else falls back to the
/// dense path.
pub fn solve_key_equation_bm(
    ctx: &FieldContext,
    known: &[Option<FieldElement>],
    t: usize,
    eq_from: usize,
    eq_to: usize,
) -> Result<KeyEqSolution, KeyEqError> {
    let n = known.len();
    let count = eq_to - eq_from;
    if t == 0 || eq_from < t {
        return solve_key_equation(ctx, known, t, eq_from, eq_to);
    }
    if count >= t {
        match bm_window(ctx, known, t, eq_from, eq_to, None) {
            None => Err(KeyEqError::Inconsistent),
            Some(gamma) => Ok(KeyEqSolution::Unique(gamma)),
        }
    } else if count == t - 1 && eq_to == n {
        // one equation short: append the wrap-around index n with a forced
        // value v; the two synthesized solutions for v = 0, 1 span the line
        let zero_ext = bm_window(ctx, known, t, eq_from, eq_to, Some(&ctx.zero()));
        let one_ext = bm_window(ctx, known, t, eq_from, eq_to, Some(&ctx.one()));
        match (zero_ext, one_ext) {
            (Some(base), Some(other)) => {
                let dir: Vec<FieldElement> = other
                    .iter()
                    .zip(&base)
                    .map(|(a, b)| ctx.sub(a, b))
                    .collect();
                if dir.iter().all(|d| ctx.is_zero(d)) {
                    return solve_key_equation(ctx, known, t, eq_from, eq_to);
                }
                Ok(KeyEqSolution::Line { base, dir })
            }
            _ => solve_key_equation(ctx, known, t, eq_from, eq_to),
        }
    } else {
        solve_key_equation(ctx, known, t, eq_from, eq_to)
    }
}
