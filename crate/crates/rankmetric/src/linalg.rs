//! Dense linear algebra over F_{q^n}: rank, affine solves, inversion.
//!
//! Matrices are `Vec<Vec<FieldElement>>` in row-major order. Systems here
//! are tiny (a handful of rows per decode), so plain Gauss-Jordan with
//! first-nonzero pivoting is the right tool.

use crate::field::{FieldContext, FieldElement};

/// Row-reduce in place to reduced row echelon form; returns pivot columns
/// in order.
fn rref(ctx: &FieldContext, mat: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(piv) = (row..rows).find(|&r| !ctx.is_zero(&mat[r][col])) else {
            continue;
        };
        mat.swap(row, piv);
        let inv = ctx.inv(&mat[row][col]).expect("pivot is nonzero");
        for j in 0..cols {
            mat[row][j] = ctx.mul(&mat[row][j], &inv);
        }
        for r in 0..rows {
            if r == row || ctx.is_zero(&mat[r][col]) {
                continue;
            }
            let factor = mat[r][col].clone();
            for j in 0..cols {
                let delta = ctx.mul(&factor, &mat[row][j]);
                mat[r][j] = ctx.sub(&mat[r][j], &delta);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(ctx: &FieldContext, rows: &[Vec<FieldElement>]) -> usize {
    let mut work: Vec<Vec<FieldElement>> = rows.to_vec();
    rref(ctx, &mut work).len()
}

/// Solution set of A x = b.
pub struct AffineSolution {
    /// The solution with all free variables zero.
    pub particular: Vec<FieldElement>,
    /// Basis of the homogeneous solutions, one per free column.
    pub nullspace: Vec<Vec<FieldElement>>,
}

/// Solves A x = b; None when inconsistent.
pub fn solve(
    ctx: &FieldContext,
    a: &[Vec<FieldElement>],
    b: &[FieldElement],
) -> Option<AffineSolution> {
    let rows = a.len();
    assert_eq!(b.len(), rows);
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut work: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(ctx, &mut work);
    if pivots.last() == Some(&cols) {
        return None; // a pivot landed in the augmented column
    }
    let mut particular = vec![ctx.zero(); cols];
    for (row, &col) in pivots.iter().enumerate() {
        particular[col] = work[row][cols].clone();
    }
    let mut nullspace = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![ctx.zero(); cols];
        v[free] = ctx.one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = ctx.neg(&work[row][free]);
        }
        nullspace.push(v);
    }
    Some(AffineSolution { particular, nullspace })
}

/// Inverse of a square matrix, or None when singular.
pub fn invert(ctx: &FieldContext, a: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
    let n = a.len();
    let mut work: Vec<Vec<FieldElement>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "invert needs a square matrix");
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { ctx.one() } else { ctx.zero() });
            }
            r
        })
        .collect();
    let pivots = rref(ctx, &mut work);
    if pivots.len() != n {
        return None;
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(
    ctx: &FieldContext,
    m: &[Vec<FieldElement>],
    v: &[FieldElement],
) -> Vec<FieldElement> {
    m.iter()
        .map(|row| {
            assert_eq!(row.len(), v.len());
            let mut acc = ctx.zero();
            for (a, x) in row.iter().zip(v) {
                acc = ctx.add(&acc, &ctx.mul(a, x));
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn invert_roundtrip() {
        let ctx = FieldContext::new(3, 1, 4, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..10 {
            let m: Vec<Vec<_>> = (0..3)
                .map(|_| (0..3).map(|_| ctx.random_element(&mut rng)).collect())
                .collect();
            if rank(&ctx, &m) < 3 {
                assert!(invert(&ctx, &m).is_none());
                continue;
            }
            let inv = invert(&ctx, &m).unwrap();
            for i in 0..3 {
                let e: Vec<_> = (0..3)
                    .map(|j| if i == j { ctx.one() } else { ctx.zero() })
                    .collect();
                let col = mat_vec(&ctx, &m, &mat_vec(&ctx, &inv, &e));
                assert_eq!(col, e);
            }
        }
    }

    #[test]
    fn solve_classifies_systems() {
        let ctx = FieldContext::new(2, 1, 3, 1).unwrap();
        let y = ctx.gen_y();
        // x + y*z = 1, duplicated row: consistent, nullity 1
        let a = vec![vec![ctx.one(), y.clone()], vec![ctx.one(), y.clone()]];
        let sol = solve(&ctx, &a, &[ctx.one(), ctx.one()]).unwrap();
        assert_eq!(sol.nullspace.len(), 1);
        let check = mat_vec(&ctx, &a, &sol.particular);
        assert_eq!(check, vec![ctx.one(), ctx.one()]);
        // same left side, contradictory right side
        assert!(solve(&ctx, &a, &[ctx.one(), ctx.zero()]).is_none());
    }

    #[test]
    fn rank_of_scaled_rows() {
        let ctx = FieldContext::new(5, 1, 2, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let row: Vec<_> = (0..4).map(|_| ctx.random_element(&mut rng)).collect();
        let c = ctx.random_nonzero(&mut rng);
        let scaled: Vec<_> = row.iter().map(|x| ctx.mul(x, &c)).collect();
        assert_eq!(rank(&ctx, &[row.clone(), scaled]), 1);
    }
}
