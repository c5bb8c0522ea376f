//! Linearized polynomials sum z_i x^([i]) with [i] = q^(s*i), their
//! Dickson matrices, and rank utilities.
//!
//! The rank of a linearized polynomial (the F_q-dimension of its image)
//! equals the rank of its n x n Dickson matrix D[i][j] = z_((i-j) mod n)^([i])
//! over F_{q^n}. That equivalence is what the decoders use to certify an
//! error candidate, and `rank_bruteforce` in the oracle module checks it
//! the slow way by counting the kernel.

use rand::Rng;

use crate::field::{Ctx, FieldContext, FieldElement};
use crate::linalg;

#[derive(Clone, Debug)]
pub struct LinearizedPoly {
    ctx: Ctx,
    /// Exactly n coefficients; index i multiplies x^([i]).
    coeffs: Vec<FieldElement>,
}

impl PartialEq for LinearizedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl LinearizedPoly {
    /// Coefficient vector of length at most n, padded with zeros.
    pub fn new(ctx: &Ctx, mut coeffs: Vec<FieldElement>) -> Self {
        assert!(coeffs.len() <= ctx.n(), "more than n coefficients");
        coeffs.resize(ctx.n(), ctx.zero());
        LinearizedPoly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        Self::new(ctx, Vec::new())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ctx.is_zero(c))
    }

    pub fn evaluate(&self, x: &FieldElement) -> FieldElement {
        let ctx = &self.ctx;
        let mut acc = ctx.zero();
        for (i, z) in self.coeffs.iter().enumerate() {
            if !ctx.is_zero(z) {
                acc = ctx.add(&acc, &ctx.mul(z, &ctx.frob(x, i as i64)));
            }
        }
        acc
    }

    /// Evaluations at the context's evaluation points, i.e. the error
    /// vector this polynomial induces.
    pub fn eval_at_alphas(&self) -> Vec<FieldElement> {
        self.ctx.alphas().iter().map(|a| self.evaluate(a)).collect()
    }

    /// D[i][j] = z_((j-i) mod n)^([i]): row i lists the coefficients of
    /// L(x)^([i]) in the basis of bracket powers of x, so rank(D) over
    /// F_{q^n} is the rank of L over F_q.
    pub fn dickson_matrix(&self) -> Vec<Vec<FieldElement>> {
        let ctx = &self.ctx;
        let n = ctx.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let idx = (j + n - i) % n;
                        ctx.frob(&self.coeffs[idx], i as i64)
                    })
                    .collect()
            })
            .collect()
    }

    /// Rank of the induced F_q-linear map, via the Dickson matrix.
    pub fn rank(&self) -> usize {
        linalg::rank(&self.ctx, &self.dickson_matrix())
    }

    /// The n x n matrix over F_q representing the map in the evaluation
    /// point basis: column j holds the F_q-coordinates of L(alphas[j]).
    pub fn to_fq_matrix(&self) -> Vec<Vec<FieldElement>> {
        let ctx = &self.ctx;
        let n = ctx.n();
        let cols: Vec<Vec<FieldElement>> = ctx
            .alphas()
            .iter()
            .map(|a| ctx.decompose_fq(&self.evaluate(a)))
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

/// True when the elements are linearly independent over F_q, decided by an
/// F_p rank computation that never touches the evaluation points.
pub fn fq_independent(ctx: &FieldContext, elems: &[FieldElement]) -> bool {
    vector_rank(ctx, elems) == elems.len()
}

/// F_q-dimension of the span of the given elements. The span as an
/// F_p-space is generated by all products with the F_q basis, and its
/// F_p-dimension is l times the F_q-dimension.
pub fn vector_rank(ctx: &FieldContext, v: &[FieldElement]) -> usize {
    if v.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<u64>> = v
        .iter()
        .flat_map(|x| {
            ctx.fq_basis()
                .iter()
                .map(|b| ctx.mul(x, b).coords().to_vec())
                .collect::<Vec<_>>()
        })
        .collect();
    let mat = crate::fp::FpMat::from_rows(ctx.p(), &rows);
    let rank_fp = crate::fp::FpSolver::new(&mat).rank();
    debug_assert_eq!(rank_fp % ctx.l(), 0);
    rank_fp / ctx.l()
}

/// Draws t elements linearly independent over F_q.
pub fn random_fq_independent(
    ctx: &FieldContext,
    t: usize,
    rng: &mut impl Rng,
) -> Vec<FieldElement> {
    assert!(t <= ctx.n(), "cannot pick more than n independent elements");
    for _ in 0..4096 {
        let cand: Vec<FieldElement> = (0..t).map(|_| ctx.random_element(rng)).collect();
        if fq_independent(ctx, &cand) {
            return cand;
        }
    }
    unreachable!("independent tuples have positive density");
}

/// Uniform-ish linearized polynomial of rank exactly t, built as
/// sum_j beta_j Tr(psi_j x) with both tuples independent over F_q.
pub fn random_rank_t(ctx: &Ctx, t: usize, rng: &mut impl Rng) -> LinearizedPoly {
    assert!(t <= ctx.n());
    if t == 0 {
        return LinearizedPoly::zero(ctx);
    }
    let psi = random_fq_independent(ctx, t, rng);
    let beta = random_fq_independent(ctx, t, rng);
    let coeffs: Vec<FieldElement> = (0..ctx.n())
        .map(|i| {
            let mut acc = ctx.zero();
            for (b, ps) in beta.iter().zip(&psi) {
                acc = ctx.add(&acc, &ctx.mul(b, &ctx.frob(ps, i as i64)));
            }
            acc
        })
        .collect();
    let poly = LinearizedPoly::new(ctx, coeffs);
    debug_assert_eq!(poly.rank(), t);
    poly
}
