//! Prime-field scalars, dense F_p linear algebra, and polynomials over F_p.
//!
//! Everything above this module (the extension field, the codes, the
//! decoders) reduces its coordinate work to the routines here. Scalars are
//! `u64` residues in `0..p`, matrices are flat row-major vectors, and
//! polynomials are little-endian coefficient vectors with no trailing
//! zeros (the zero polynomial is the empty vector).

use std::ops::{Index, IndexMut};

/// base^exp mod p by square and multiply.
pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse mod the prime p. Panics on zero.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

/// Trial-division primality check; fields here stay tiny so this is plenty.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense matrix over F_p, flat row-major storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpMat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl Index<(usize, usize)> for FpMat {
    type Output = u64;
    fn index(&self, (r, c): (usize, usize)) -> &u64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for FpMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u64 {
        &mut self.data[r * self.cols + c]
    }
}

impl FpMat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Build from explicit rows; all rows must share a length.
    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v % p;
            }
        }
        m
    }

    /// Column `c` as a vector.
    pub fn col(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_col(&mut self, c: usize, v: &[u64]) {
        assert_eq!(v.len(), self.rows);
        for (r, &x) in v.iter().enumerate() {
            self[(r, c)] = x % self.p;
        }
    }

    pub fn mul(&self, rhs: &FpMat) -> FpMat {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.p, rhs.p);
        let p = self.p;
        let mut out = FpMat::zero(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cell = &mut out[(i, j)];
                    *cell = (*cell + a * rhs[(k, j)]) % p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = (acc + self[(i, j)] * (v[j] % p)) % p;
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = (*a + b) % self.p;
        }
        out
    }

    pub fn sub(&self, rhs: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = (*a + self.p - b % self.p) % self.p;
        }
        out
    }
}

/// Row-reduced view of a matrix: solves, null spaces, inverses.
///
/// Construction runs Gauss-Jordan once; the row operations are replayed on
/// an identity block so `solve` is a matrix-vector product plus a
/// consistency check afterwards.
pub struct FpSolver {
    p: u64,
    rows: usize,
    cols: usize,
    rref: FpMat,
    ops: FpMat,
    /// (pivot row, pivot column) pairs in elimination order.
    pivots: Vec<(usize, usize)>,
}

impl FpSolver {
    pub fn new(m: &FpMat) -> Self {
        let p = m.p;
        let mut rref = m.clone();
        let mut ops = FpMat::identity(p, m.rows);
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| rref[(r, col)] != 0) else {
                continue;
            };
            if piv != row {
                for j in 0..m.cols {
                    let tmp = rref[(row, j)];
                    rref[(row, j)] = rref[(piv, j)];
                    rref[(piv, j)] = tmp;
                }
                for j in 0..m.rows {
                    let tmp = ops[(row, j)];
                    ops[(row, j)] = ops[(piv, j)];
                    ops[(piv, j)] = tmp;
                }
            }
            let inv = inv_mod(rref[(row, col)], p);
            for j in 0..m.cols {
                rref[(row, j)] = rref[(row, j)] * inv % p;
            }
            for j in 0..m.rows {
                ops[(row, j)] = ops[(row, j)] * inv % p;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = rref[(r, col)];
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    rref[(r, j)] = (rref[(r, j)] + (p - factor) * rref[(row, j)]) % p;
                }
                for j in 0..m.rows {
                    ops[(r, j)] = (ops[(r, j)] + (p - factor) * ops[(row, j)]) % p;
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        FpSolver { p, rows: m.rows, cols: m.cols, rref, ops, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// One solution of A x = b with free variables set to zero, or None if
    /// the system is inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let y = self.ops.mul_vec(b);
        if y.iter().skip(self.rank()).any(|&v| v != 0) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for &(row, col) in &self.pivots {
            x[col] = y[row];
        }
        Some(x)
    }

    /// Basis of the null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for &(row, col) in &self.pivots {
                v[col] = (p - self.rref[(row, free)]) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse of the original matrix when it is square and full rank.
    pub fn inverse(&self) -> Option<FpMat> {
        if self.rows != self.cols || self.rank() != self.rows {
            return None;
        }
        Some(self.ops.clone())
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, little-endian coefficients, no trailing zeros.

pub fn poly_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn poly_deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub fn poly_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + y) % p;
    }
    poly_trim(out)
}

pub fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y % p) % p;
    }
    poly_trim(out)
}

pub fn poly_scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    poly_trim(a.iter().map(|&x| x * (c % p) % p).collect())
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

/// Quotient and remainder of a by b (b nonzero).
pub fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = poly_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = poly_trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    let mut quot = vec![0u64; rem.len().saturating_sub(db)];
    while rem.len() > db || (rem.len() == b.len() && !rem.is_empty()) {
        if rem.len() < b.len() {
            break;
        }
        let shift = rem.len() - b.len();
        let coef = rem.last().copied().unwrap() * lead_inv % p;
        quot[shift] = coef;
        for (i, &bc) in b.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + p - bc * coef % p) % p;
        }
        rem = poly_trim(rem);
    }
    (poly_trim(quot), rem)
}

pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    poly_divmod(a, b, p).1
}

/// Monic gcd.
pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = poly_trim(a.to_vec());
    let mut r1 = poly_trim(b.to_vec());
    while !r1.is_empty() {
        let r = poly_rem(&r0, &r1, p);
        r0 = r1;
        r1 = r;
    }
    if let Some(&lead) = r0.last() {
        let inv = inv_mod(lead, p);
        r0 = poly_scale(&r0, inv, p);
    }
    r0
}

/// a^e mod f.
pub fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(a, f, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), f, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), f, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a mod f, or None when gcd(a, f) is not constant.
pub fn poly_inv_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = poly_trim(f.to_vec());
    let mut r1 = poly_rem(a, f, p);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1, p);
        let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = inv_mod(r0[0], p);
    Some(poly_rem(&poly_scale(&s0, inv, p), f, p))
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2usize;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's criterion: f of degree d is irreducible over F_p iff
/// x^(p^d) = x mod f and gcd(x^(p^(d/r)) - x, f) = 1 for every prime r | d.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = poly_trim(f.to_vec());
    let Some(d) = poly_deg(&f) else { return false };
    if d == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // frob[m] = x^(p^m) mod f
    let mut frob = vec![x.clone()];
    for m in 1..=d {
        let prev = frob[m - 1].clone();
        frob.push(poly_powmod(&prev, p, &f, p));
    }
    if frob[d] != poly_rem(&x, &f, p) {
        return false;
    }
    for r in prime_factors(d) {
        let diff = poly_sub(&frob[d / r], &x, p);
        let g = poly_gcd(&diff, &f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree d over F_p, scanning the non-leading
/// coefficients as a little-endian base-p counter: 0, 1, ..., p-1, then
/// (0,1) meaning y, and so on. The canonical modulus everywhere in this
/// crate comes from this scan.
pub fn first_irreducible(p: u64, d: usize) -> Vec<u64> {
    assert!(d >= 1);
    let mut counter = vec![0u64; d];
    loop {
        let mut f = counter.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment the base-p counter; the scan always terminates because
        // irreducibles of every degree exist over F_p
        let mut i = 0;
        loop {
            assert!(i < d, "no irreducible of degree {d} found over F_{p}");
            counter[i] += 1;
            if counter[i] < p {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_ops() {
        assert_eq!(pow_mod(2, 10, 1009), 1024 % 1009);
        for a in 1..7u64 {
            assert_eq!(a * inv_mod(a, 7) % 7, 1);
        }
        assert!(is_prime(2) && is_prime(251));
        assert!(!is_prime(1) && !is_prime(255));
    }

    #[test]
    fn solver_roundtrip() {
        let m = FpMat::from_rows(5, &[vec![1, 2, 0], vec![0, 1, 4], vec![2, 0, 3]]);
        let s = FpSolver::new(&m);
        assert_eq!(s.rank(), 3);
        let inv = s.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMat::identity(5, 3));
        let x = s.solve(&[1, 2, 3]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 2, 3]);
    }

    #[test]
    fn solver_singular() {
        // second row is twice the first mod 5
        let m = FpMat::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let s = FpSolver::new(&m);
        assert_eq!(s.rank(), 1);
        assert!(s.inverse().is_none());
        assert!(s.solve(&[1, 0]).is_none());
        let ns = s.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(m.mul_vec(&ns[0]), vec![0, 0]);
        // consistent system still solvable
        let x = s.solve(&[1, 2]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 2]);
    }

    #[test]
    fn nullspace_dimension() {
        let m = FpMat::from_rows(3, &[vec![1, 1, 1, 0], vec![0, 0, 1, 1]]);
        let s = FpSolver::new(&m);
        assert_eq!(s.rank(), 2);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(m.mul_vec(&v), vec![0, 0]);
        }
    }

    #[test]
    fn poly_divmod_identity() {
        let p = 7;
        let a = vec![3, 0, 1, 5, 2];
        let b = vec![4, 1, 1];
        let (q, r) = poly_divmod(&a, &b, p);
        let back = poly_add(&poly_mul(&q, &b, p), &r, p);
        assert_eq!(back, poly_trim(a));
        assert!(poly_deg(&r) < poly_deg(&b));
    }

    #[test]
    fn inv_mod_poly() {
        let p = 2;
        let f = vec![1, 1, 1]; // y^2 + y + 1 over F_2
        let a = vec![0, 1]; // y
        let inv = poly_inv_mod(&a, &f, p).unwrap();
        assert_eq!(poly_rem(&poly_mul(&a, &inv, p), &f, p), vec![1]);
        // y is a unit, y^2+y+1 itself is not
        assert!(poly_inv_mod(&f, &f, p).is_none());
    }

    #[test]
    fn irreducibility_known_cases() {
        assert!(is_irreducible(&[1, 1, 1], 2)); // y^2+y+1
        assert!(!is_irreducible(&[1, 0, 1], 2)); // (y+1)^2
        assert!(is_irreducible(&[1, 0, 1], 3)); // y^2+1 over F_3
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2)); // y^4+y+1
        assert!(!is_irreducible(&[1, 1, 1, 1], 2)); // divisible by y+1
    }

    #[test]
    fn first_irreducible_matches_known_scan() {
        assert_eq!(first_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(first_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(first_irreducible(2, 4), vec![1, 1, 0, 0, 1]);
        assert_eq!(first_irreducible(2, 6), vec![1, 1, 0, 0, 0, 0, 1]);
        // degree 1: y itself is first
        assert_eq!(first_irreducible(5, 1), vec![0, 1]);
    }

    #[test]
    fn gcd_monic() {
        let p = 3;
        // (y+1)(y^2+1) and (y+1)(y+2): y^2+1 is irreducible mod 3
        let a = poly_mul(&[1, 1], &[1, 0, 1], p);
        let b = poly_mul(&[1, 1], &[2, 1], p);
        let g = poly_gcd(&a, &b, p);
        assert_eq!(g, vec![1, 1]);
    }
}
