//! Brute-force reference implementations, kept deliberately dumb.
//!
//! These exist so the clever paths have something independent to answer
//! to: the quadratic solver is checked against full-field enumeration,
//! Dickson-matrix rank against kernel counting, and the decoders against
//! exhaustive nearest-codeword search. Each guard refuses inputs past a
//! fixed size so a typo in a test cannot silently burn hours.

use std::fmt;

use num_bigint::BigUint;

use crate::codes::CodeSpec;
use crate::field::{FieldContext, FieldElement};
use crate::linpoly::{self, LinearizedPoly};

/// Fields beyond 2^12 elements are refused.
pub const FIELD_LIMIT_BITS: u64 = 12;
/// Message spaces beyond 2^22 candidates are refused.
pub const MESSAGE_LIMIT_BITS: u64 = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooLarge { bits: u64, limit_bits: u64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { bits, limit_bits } => write!(
                f,
                "search space of about 2^{bits} elements exceeds the 2^{limit_bits} brute-force guard"
            ),
        }
    }
}

impl std::error::Error for OracleError {}

fn guard(count: &BigUint, limit_bits: u64) -> Result<(), OracleError> {
    let bits = count.bits().saturating_sub(1); // floor(log2)
    if bits > limit_bits {
        return Err(OracleError::TooLarge { bits, limit_bits });
    }
    Ok(())
}

/// Roots of X^2 + b X + c by trying every field element. Sorted by
/// coefficient vector, same order the fast solver reports.
pub fn quad_roots_bruteforce(
    ctx: &FieldContext,
    b: &FieldElement,
    c: &FieldElement,
) -> Result<Vec<FieldElement>, OracleError> {
    guard(&ctx.order_big(), FIELD_LIMIT_BITS)?;
    let mut roots: Vec<FieldElement> = ctx
        .elements()
        .filter(|x| {
            let v = ctx.add(&ctx.add(&ctx.mul(x, x), &ctx.mul(b, x)), c);
            ctx.is_zero(&v)
        })
        .collect();
    roots.sort_by(|a, b| a.coords().cmp(b.coords()));
    Ok(roots)
}

/// Rank of a linearized polynomial by counting its kernel: the kernel of
/// an F_q-linear map on F_{q^n} has q^(n - rank) elements.
pub fn rank_bruteforce(ctx: &FieldContext, poly: &LinearizedPoly) -> Result<usize, OracleError> {
    guard(&ctx.order_big(), FIELD_LIMIT_BITS)?;
    let kernel = ctx
        .elements()
        .filter(|x| ctx.is_zero(&poly.evaluate(x)))
        .count() as u64;
    let q = ctx
        .q_big()
        .to_u64_digits()
        .first()
        .copied()
        .expect("guarded field fits in u64");
    let mut rank_defect = 0usize;
    let mut size = 1u64;
    while size < kernel {
        size *= q;
        rank_defect += 1;
    }
    assert_eq!(size, kernel, "kernel size must be a power of q");
    Ok(ctx.n() - rank_defect)
}

#[derive(Debug, Clone)]
pub struct NearestCodeword {
    pub message: Vec<FieldElement>,
    pub codeword: Vec<FieldElement>,
    pub distance: usize,
    /// True when no other codeword achieves the same distance.
    pub unique: bool,
}

/// Exhaustive nearest-codeword search in the rank metric.
pub fn nearest_codeword_bruteforce(
    spec: &CodeSpec,
    r: &[FieldElement],
) -> Result<NearestCodeword, OracleError> {
    let ctx = spec.ctx().clone();
    let space = ctx.order_big().pow(spec.k() as u32);
    guard(&space, MESSAGE_LIMIT_BITS)?;
    assert_eq!(r.len(), ctx.n());
    let mut best: Option<NearestCodeword> = None;
    let mut message = vec![ctx.zero(); spec.k()];
    // plain nested enumeration via a base-|F| odometer over message tuples
    let all: Vec<FieldElement> = ctx.elements().collect();
    let mut idx = vec![0usize; spec.k()];
    loop {
        for (slot, &i) in message.iter_mut().zip(&idx) {
            *slot = all[i].clone();
        }
        let c = spec.encode(&message).expect("length matches k");
        let diff: Vec<FieldElement> = r.iter().zip(&c).map(|(a, b)| ctx.sub(a, b)).collect();
        let d = linpoly::vector_rank(&ctx, &diff);
        match &mut best {
            None => {
                best = Some(NearestCodeword {
                    message: message.clone(),
                    codeword: c,
                    distance: d,
                    unique: true,
                })
            }
            Some(b) => {
                if d < b.distance {
                    *b = NearestCodeword {
                        message: message.clone(),
                        codeword: c,
                        distance: d,
                        unique: true,
                    };
                } else if d == b.distance {
                    b.unique = false;
                }
            }
        }
        // advance
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(best.expect("at least the zero message was tried"));
            }
            idx[pos] += 1;
            if idx[pos] < all.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
