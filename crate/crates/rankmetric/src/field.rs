//! The extension tower F_p < F_q < F_{q^n} behind every code here.
//!
//! A `FieldContext` owns one extension F_{q^n} = F_p[y]/(f) of degree
//! deg = l*n over the prime field, with q = p^l. Elements are coefficient
//! vectors over F_p in the power basis {1, y, ..., y^(deg-1)}. All the maps
//! the codes lean on, the q^s-power Frobenius and its iterates, the half
//! involution sigma on even-n fields, the relative norms, are precomputed
//! as F_p-linear matrices so element operations never re-derive them.
//!
//! The modulus is canonical: the first irreducible monic polynomial of
//! degree deg in base-p counting order of its non-leading coefficients.
//! Two runs with the same (p, l, n, s) therefore agree on every byte of
//! every element.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::fp::{self, FpMat, FpSolver};

/// Shared handle for a field context; everything downstream clones this.
pub type Ctx = Arc<FieldContext>;

/// Element of F_{q^n}: deg coefficients over F_p, little-endian in the
/// power basis of the modulus variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    coords: Vec<u64>,
}

impl FieldElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Two lowercase hex digits per coefficient, little-endian coefficient
    /// order. Requires p < 256, which the context enforces at construction.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.coords.len() * 2);
        for &c in &self.coords {
            s.push_str(&format!("{:02x}", c));
        }
        s
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_hex())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    CharTooLarge(u64),
    BadExtension { l: usize, n: usize },
    ShiftNotCoprime { s: usize, n: usize },
    BadTower { l0: usize, u: usize, l: usize },
    BadModulus(String),
    WrongAlphaCount { got: usize, want: usize },
    DependentAlphas,
    SigmaUndefined { n: usize },
    NoTower,
    NoSolution,
    BadElement(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::CharTooLarge(p) => {
                write!(f, "characteristic {p} exceeds 255, the hex element encoding needs one byte per coefficient")
            }
            FieldError::BadExtension { l, n } => {
                write!(f, "extension degrees must be positive, got l={l} n={n}")
            }
            FieldError::ShiftNotCoprime { s, n } => {
                write!(f, "Frobenius shift s={s} must be coprime to n={n} and positive")
            }
            FieldError::BadTower { l0, u, l } => {
                write!(f, "tower degrees l0={l0}, u={u} do not multiply to l={l}")
            }
            FieldError::BadModulus(msg) => write!(f, "bad modulus: {msg}"),
            FieldError::WrongAlphaCount { got, want } => {
                write!(f, "expected {want} evaluation points, got {got}")
            }
            FieldError::DependentAlphas => {
                write!(f, "evaluation points are linearly dependent over F_q")
            }
            FieldError::SigmaUndefined { n } => {
                write!(f, "the half involution needs even n, got n={n}")
            }
            FieldError::NoTower => write!(f, "context was built without an intermediate subfield"),
            FieldError::NoSolution => write!(f, "no solution"),
            FieldError::BadElement(msg) => write!(f, "bad element: {msg}"),
        }
    }
}

impl std::error::Error for FieldError {}

struct SigmaTables {
    /// n/2; sigma is the [n/2] power of the q^s Frobenius.
    half: usize,
    /// Solver for (sigma - id) x = a.
    phi_solver: FpSolver,
    /// Matrix of x + x^sigma.
    tr_mat: FpMat,
}

pub struct FieldContext {
    p: u64,
    l: usize,
    n: usize,
    s: usize,
    tower: Option<(usize, usize)>,
    deg: usize,
    modulus: Vec<u64>,
    /// red_rows[i] = coefficients of y^(deg+i) mod f, fully reduced.
    red_rows: Vec<Vec<u64>>,
    /// abs_frob[m] applies x -> x^(p^m); index 0 is the identity.
    abs_frob: Vec<FpMat>,
    /// Matrix of the absolute trace down to F_p.
    tr_abs: FpMat,
    /// F_p-basis of the fixed field of x -> x^q, i.e. of F_q.
    fq_basis: Vec<FieldElement>,
    alphas: Vec<FieldElement>,
    /// deg x deg solver whose column j*l+m holds alphas[j] * fq_basis[m];
    /// full rank certifies F_q-independence of the alphas and powers
    /// coordinate decomposition.
    alpha_solver: FpSolver,
    sigma: Option<SigmaTables>,
    /// In characteristic 2, a fixed element of absolute trace 1.
    trace_one: Option<FieldElement>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("l", &self.l)
            .field("n", &self.n)
            .field("s", &self.s)
            .field("tower", &self.tower)
            .finish()
    }
}

fn raw_mul(p: u64, deg: usize, red_rows: &[Vec<u64>], a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut raw = vec![0u64; 2 * deg - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            raw[i + j] = (raw[i + j] + x * y) % p;
        }
    }
    for idx in (deg..2 * deg - 1).rev() {
        let c = raw[idx];
        if c == 0 {
            continue;
        }
        raw[idx] = 0;
        for (t, &r) in red_rows[idx - deg].iter().enumerate() {
            raw[t] = (raw[t] + c * r) % p;
        }
    }
    raw.truncate(deg);
    raw
}

impl FieldContext {
    /// Field with the canonical modulus and evaluation points 1, y, ...,
    /// y^(n-1), y being the residue class of the modulus variable.
    pub fn new(p: u64, l: usize, n: usize, s: usize) -> Result<Ctx, FieldError> {
        Self::with_options(p, l, n, s, None, None)
    }

    /// Same, but records the intermediate subfield F_{q0} with q0 = p^l0
    /// and q = q0^u; l must equal l0*u.
    pub fn with_tower(p: u64, l0: usize, u: usize, n: usize, s: usize) -> Result<Ctx, FieldError> {
        Self::with_options(p, l0 * u, n, s, None, Some((l0, u)))
    }

    pub fn with_options(
        p: u64,
        l: usize,
        n: usize,
        s: usize,
        modulus: Option<Vec<u64>>,
        tower: Option<(usize, usize)>,
    ) -> Result<Ctx, FieldError> {
        if !fp::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > 255 {
            return Err(FieldError::CharTooLarge(p));
        }
        if l == 0 || n == 0 {
            return Err(FieldError::BadExtension { l, n });
        }
        if s == 0 || gcd(s, n) != 1 {
            return Err(FieldError::ShiftNotCoprime { s, n });
        }
        if let Some((l0, u)) = tower {
            if l0 == 0 || u == 0 || l0 * u != l {
                return Err(FieldError::BadTower { l0, u, l });
            }
        }
        let deg = l * n;
        let modulus = match modulus {
            Some(m) => {
                let m = fp::poly_trim(m);
                if fp::poly_deg(&m) != Some(deg) {
                    return Err(FieldError::BadModulus(format!("degree must be {deg}")));
                }
                if m[deg] != 1 {
                    return Err(FieldError::BadModulus("must be monic".into()));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus(format!("coefficients must lie in 0..{p}")));
                }
                if !fp::is_irreducible(&m, p) {
                    return Err(FieldError::BadModulus("not irreducible".into()));
                }
                m
            }
            None => fp::first_irreducible(p, deg),
        };

        // reduction rows: y^(deg+i) mod f, built iteratively from
        // y^deg = -(f_0 + f_1 y + ...)
        let mut red_rows: Vec<Vec<u64>> = Vec::with_capacity(deg.saturating_sub(1));
        if deg >= 1 {
            let base: Vec<u64> = (0..deg).map(|i| (p - modulus[i] % p) % p).collect();
            let mut cur = base.clone();
            for _ in 0..deg.saturating_sub(1) {
                red_rows.push(cur.clone());
                // multiply by y and reduce the overflow coefficient
                let carry = cur[deg - 1];
                let mut next = vec![0u64; deg];
                for i in (1..deg).rev() {
                    next[i] = cur[i - 1];
                }
                if carry != 0 {
                    for (i, &b) in base.iter().enumerate() {
                        next[i] = (next[i] + carry * b) % p;
                    }
                }
                cur = next;
            }
        }

        // Frobenius matrices: abs_frob[1] columns are (y^j)^p mod f
        let mut abs_frob = Vec::with_capacity(deg);
        abs_frob.push(FpMat::identity(p, deg));
        if deg > 1 {
            let ypow = fp::poly_powmod(&[0, 1], p, &modulus, p);
            let mut m1 = FpMat::zero(p, deg, deg);
            let mut cur = vec![1u64];
            for j in 0..deg {
                let mut col = cur.clone();
                col.resize(deg, 0);
                m1.set_col(j, &col);
                if j + 1 < deg {
                    cur = fp::poly_rem(&fp::poly_mul(&cur, &ypow, p), &modulus, p);
                }
            }
            for m in 1..deg {
                let prev = &abs_frob[m - 1];
                abs_frob.push(if m == 1 { m1.clone() } else { m1.mul(prev) });
            }
        }

        let mut tr_abs = FpMat::zero(p, deg, deg);
        for mat in &abs_frob {
            tr_abs = tr_abs.add(mat);
        }

        // F_q = fixed field of x -> x^(p^l)
        let fq_fix = abs_frob[l % deg].sub(&FpMat::identity(p, deg));
        let fq_basis: Vec<FieldElement> = FpSolver::new(&fq_fix)
            .nullspace()
            .into_iter()
            .map(|coords| FieldElement { coords })
            .collect();
        assert_eq!(fq_basis.len(), l, "subfield dimension mismatch");

        // default evaluation points: powers of y
        let y = {
            let mut c = vec![0u64; deg];
            if deg == 1 {
                c[0] = (p - modulus[0] % p) % p;
            } else {
                c[1] = 1;
            }
            c
        };
        let mut alphas = Vec::with_capacity(n);
        let mut cur = vec![0u64; deg];
        cur[0] = 1;
        for j in 0..n {
            alphas.push(FieldElement { coords: cur.clone() });
            if j + 1 < n {
                cur = raw_mul(p, deg, &red_rows, &cur, &y);
            }
        }

        let alpha_solver = build_alpha_solver(p, deg, l, &red_rows, &alphas, &fq_basis)?;

        let sigma = if n % 2 == 0 {
            let half = n / 2;
            let idx = (l * s * half) % deg;
            let mat = &abs_frob[idx];
            let eye = FpMat::identity(p, deg);
            Some(SigmaTables {
                half,
                phi_solver: FpSolver::new(&mat.sub(&eye)),
                tr_mat: mat.add(&eye),
            })
        } else {
            None
        };

        let trace_one = if p == 2 {
            let mut found = None;
            for j in 0..deg {
                let mut e = vec![0u64; deg];
                e[j] = 1;
                let t = tr_abs.mul_vec(&e);
                if t[0] == 1 && t.iter().skip(1).all(|&v| v == 0) {
                    found = Some(FieldElement { coords: e });
                    break;
                }
            }
            Some(found.expect("the absolute trace cannot vanish on a basis"))
        } else {
            None
        };

        Ok(Arc::new(FieldContext {
            p,
            l,
            n,
            s,
            tower,
            deg,
            modulus,
            red_rows,
            abs_frob,
            tr_abs,
            fq_basis,
            alphas,
            alpha_solver,
            sigma,
            trace_one,
        }))
    }

    /// Rebuild with different evaluation points; they must be n elements
    /// linearly independent over F_q.
    pub fn with_alphas(&self, alphas: Vec<FieldElement>) -> Result<Ctx, FieldError> {
        if alphas.len() != self.n {
            return Err(FieldError::WrongAlphaCount { got: alphas.len(), want: self.n });
        }
        for a in &alphas {
            self.check_element(a)?;
        }
        let alpha_solver =
            build_alpha_solver(self.p, self.deg, self.l, &self.red_rows, &alphas, &self.fq_basis)?;
        Ok(Arc::new(FieldContext {
            p: self.p,
            l: self.l,
            n: self.n,
            s: self.s,
            tower: self.tower,
            deg: self.deg,
            modulus: self.modulus.clone(),
            red_rows: self.red_rows.clone(),
            abs_frob: self.abs_frob.clone(),
            tr_abs: self.tr_abs.clone(),
            fq_basis: self.fq_basis.clone(),
            alphas,
            alpha_solver,
            sigma: self.sigma.as_ref().map(|t| SigmaTables {
                half: t.half,
                phi_solver: FpSolver::new(
                    &self.abs_frob[(self.l * self.s * t.half) % self.deg]
                        .sub(&FpMat::identity(self.p, self.deg)),
                ),
                tr_mat: t.tr_mat.clone(),
            }),
            trace_one: self.trace_one.clone(),
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn deg(&self) -> usize {
        self.deg
    }
    pub fn tower(&self) -> Option<(usize, usize)> {
        self.tower
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn alphas(&self) -> &[FieldElement] {
        &self.alphas
    }
    pub fn fq_basis(&self) -> &[FieldElement] {
        &self.fq_basis
    }

    /// q = p^l.
    pub fn q_big(&self) -> BigUint {
        BigUint::from(self.p).pow(self.l as u32)
    }

    /// q^n = p^deg, the field size.
    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.p).pow(self.deg as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coords: vec![0; self.deg] }
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u64) -> FieldElement {
        let mut coords = vec![0; self.deg];
        coords[0] = c % self.p;
        FieldElement { coords }
    }

    /// The residue class of the modulus variable.
    pub fn gen_y(&self) -> FieldElement {
        let mut coords = vec![0; self.deg];
        if self.deg == 1 {
            coords[0] = (self.p - self.modulus[0] % self.p) % self.p;
        } else {
            coords[1] = 1;
        }
        FieldElement { coords }
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<FieldElement, FieldError> {
        if coords.len() != self.deg {
            return Err(FieldError::BadElement(format!(
                "expected {} coefficients, got {}",
                self.deg,
                coords.len()
            )));
        }
        Ok(FieldElement { coords: coords.into_iter().map(|c| c % self.p).collect() })
    }

    fn check_element(&self, x: &FieldElement) -> Result<(), FieldError> {
        if x.coords.len() != self.deg {
            return Err(FieldError::BadElement(format!(
                "element has {} coefficients, context needs {}",
                x.coords.len(),
                self.deg
            )));
        }
        Ok(())
    }

    pub fn element_from_hex(&self, s: &str) -> Result<FieldElement, FieldError> {
        if s.len() != 2 * self.deg {
            return Err(FieldError::BadElement(format!(
                "hex element must be {} digits, got {}",
                2 * self.deg,
                s.len()
            )));
        }
        let mut coords = Vec::with_capacity(self.deg);
        for chunk in s.as_bytes().chunks(2) {
            let txt = std::str::from_utf8(chunk).map_err(|_| {
                FieldError::BadElement("non-ascii hex".into())
            })?;
            let v = u64::from_str_radix(txt, 16)
                .map_err(|_| FieldError::BadElement(format!("bad hex pair {txt:?}")))?;
            if v >= self.p {
                return Err(FieldError::BadElement(format!(
                    "coefficient {v} out of range for characteristic {}",
                    self.p
                )));
            }
            coords.push(v);
        }
        Ok(FieldElement { coords })
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        x.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|&x| (self.p - x) % self.p).collect() }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coords: raw_mul(self.p, self.deg, &self.red_rows, &a.coords, &b.coords) }
    }

    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        let mut coords = fp::poly_inv_mod(&a.coords, &self.modulus, self.p)?;
        coords.resize(self.deg, 0);
        Some(FieldElement { coords })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        Some(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        if e.is_zero() {
            return self.one();
        }
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// x^(p^m) for any m, reduced mod deg.
    pub fn frob_abs(&self, x: &FieldElement, m: usize) -> FieldElement {
        FieldElement { coords: self.abs_frob[m % self.deg].mul_vec(&x.coords) }
    }

    /// The bracket power x^([i]) = x^(q^(s*i)); negative i walks the
    /// inverse automorphism, so frob(frob(x, i), -i) = x.
    pub fn frob(&self, x: &FieldElement, i: i64) -> FieldElement {
        let r = i.rem_euclid(self.n as i64) as usize;
        let m = (self.l * self.s * r) % self.deg;
        self.frob_abs(x, m)
    }

    /// Absolute trace down to F_p, returned as a residue.
    pub fn abs_trace(&self, x: &FieldElement) -> u64 {
        let t = self.tr_abs.mul_vec(&x.coords);
        debug_assert!(t.iter().skip(1).all(|&v| v == 0), "trace landed outside F_p");
        t[0]
    }

    /// Norm from F_{q^n} down to F_q: x^((q^n-1)/(q-1)).
    pub fn norm_to_q(&self, x: &FieldElement) -> FieldElement {
        let e = (self.order_big() - 1u32) / (self.q_big() - 1u32);
        let out = self.pow_big(x, &e);
        debug_assert!(self.in_subfield_q(&out));
        out
    }

    /// Norm from F_{q^n} down to the tower subfield F_{q0}.
    pub fn norm_to_q0(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        let (l0, _) = self.tower.ok_or(FieldError::NoTower)?;
        let q0 = BigUint::from(self.p).pow(l0 as u32);
        let e = (self.order_big() - 1u32) / (q0 - 1u32);
        Ok(self.pow_big(x, &e))
    }

    pub fn in_subfield_q(&self, x: &FieldElement) -> bool {
        self.frob_abs(x, self.l % self.deg) == *x
    }

    /// All p^l elements of F_q, in counting order over the subfield basis.
    pub fn subfield_q(&self) -> Vec<FieldElement> {
        let count = (self.p as u128).pow(self.l as u32);
        assert!(count <= 1 << 20, "subfield too large to enumerate");
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0u64; self.l];
        loop {
            let mut acc = self.zero();
            for (d, b) in digits.iter().zip(&self.fq_basis) {
                if *d != 0 {
                    acc = self.add(&acc, &self.mul(&self.scalar(*d), b));
                }
            }
            out.push(acc);
            let mut i = 0;
            loop {
                if i == self.l {
                    return out;
                }
                digits[i] += 1;
                if digits[i] < self.p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// x + x^sigma where sigma is the [n/2] Frobenius power; needs even n.
    pub fn trace_sigma(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        let t = self.sigma.as_ref().ok_or(FieldError::SigmaUndefined { n: self.n })?;
        Ok(FieldElement { coords: t.tr_mat.mul_vec(&x.coords) })
    }

    /// Solves x^sigma - x = a; solvable exactly when trace_sigma(a) = 0.
    /// The returned solution is the canonical one with free coordinates
    /// zeroed, so it is deterministic.
    pub fn solve_sigma_affine(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        let t = self.sigma.as_ref().ok_or(FieldError::SigmaUndefined { n: self.n })?;
        match t.phi_solver.solve(&a.coords) {
            Some(coords) => Ok(FieldElement { coords }),
            None => Err(FieldError::NoSolution),
        }
    }

    pub fn sigma_half(&self) -> Result<usize, FieldError> {
        Ok(self.sigma.as_ref().ok_or(FieldError::SigmaUndefined { n: self.n })?.half)
    }

    /// Square root in odd characteristic. None when a is a non-residue.
    pub fn sqrt(&self, a: &FieldElement) -> Option<FieldElement> {
        assert!(self.p != 2, "use frob_abs(x, deg-1) for square roots in characteristic 2");
        if self.is_zero(a) {
            return Some(self.zero());
        }
        let order = self.order_big();
        let legendre_exp = (&order - 1u32) >> 1;
        if self.pow_big(a, &legendre_exp) != self.one() {
            return None;
        }
        if (&order % 4u32) == BigUint::from(3u32) {
            let e = (&order + 1u32) >> 2;
            return Some(self.pow_big(a, &e));
        }
        // Tonelli-Shanks: order - 1 = 2^e * m with m odd
        let mut m = &order - 1u32;
        let mut e = 0u32;
        while (&m % 2u32).is_zero() {
            m >>= 1;
            e += 1;
        }
        let z = self
            .elements()
            .find(|z| !self.is_zero(z) && self.pow_big(z, &legendre_exp) != self.one())
            .expect("a non-residue exists in odd characteristic");
        let mut c = self.pow_big(&z, &m);
        let mut t = self.pow_big(a, &m);
        let mut r = self.pow_big(a, &((&m + 1u32) >> 1));
        let mut big_m = e;
        while t != self.one() {
            let mut i = 0u32;
            let mut probe = t.clone();
            while probe != self.one() {
                probe = self.mul(&probe, &probe);
                i += 1;
                assert!(i < big_m, "square root search diverged");
            }
            let mut b = c.clone();
            for _ in 0..(big_m - i - 1) {
                b = self.mul(&b, &b);
            }
            big_m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    /// Roots of X^2 + b X + c, sorted by coefficient vector, verified.
    /// Works in both characteristics; in characteristic 2 the b != 0 case
    /// reduces to the Artin-Schreier equation W^2 + W = c/b^2, solvable
    /// exactly when the absolute trace of c/b^2 vanishes.
    pub fn solve_quadratic(&self, b: &FieldElement, c: &FieldElement) -> Vec<FieldElement> {
        let mut roots = if self.p == 2 {
            if self.is_zero(b) {
                // X^2 = c has the unique root c^(2^(deg-1))
                vec![self.frob_abs(c, self.deg - 1)]
            } else {
                let b_inv = self.inv(b).expect("nonzero");
                let beta = self.mul(&self.mul(c, &b_inv), &b_inv);
                if self.abs_trace(&beta) != 0 {
                    Vec::new()
                } else {
                    let w = self.artin_schreier_root(&beta);
                    let r0 = self.mul(&w, b);
                    let r1 = self.add(&r0, b);
                    vec![r0, r1]
                }
            }
        } else {
            let two_inv = self.inv(&self.scalar(2)).expect("odd characteristic");
            let disc = self.sub(
                &self.mul(b, b),
                &self.mul(&self.scalar(4), c),
            );
            if self.is_zero(&disc) {
                vec![self.neg(&self.mul(b, &two_inv))]
            } else {
                match self.sqrt(&disc) {
                    None => Vec::new(),
                    Some(sq) => {
                        let nb = self.neg(b);
                        vec![
                            self.mul(&self.add(&nb, &sq), &two_inv),
                            self.mul(&self.sub(&nb, &sq), &two_inv),
                        ]
                    }
                }
            }
        };
        for r in &roots {
            debug_assert!(
                self.is_zero(&self.add(&self.add(&self.mul(r, r), &self.mul(b, r)), c)),
                "quadratic root failed verification"
            );
        }
        roots.sort_by(|a, b| a.coords.cmp(&b.coords));
        roots.dedup();
        roots
    }

    /// Characteristic-2 solution of W^2 + W = beta, assuming the absolute
    /// trace of beta is 0. Built from a fixed trace-one element c as
    /// W = sum_{j=1}^{deg-1} beta^(2^j) * (c + c^2 + ... + c^(2^(j-1))).
    fn artin_schreier_root(&self, beta: &FieldElement) -> FieldElement {
        let c = self.trace_one.as_ref().expect("characteristic 2 context");
        let mut w = self.zero();
        let mut prefix = c.clone(); // c^(2^0) + ... + c^(2^(j-1)) for j = 1
        for j in 1..self.deg {
            let bj = self.frob_abs(beta, j);
            w = self.add(&w, &self.mul(&bj, &prefix));
            if j + 1 < self.deg {
                prefix = self.add(&prefix, &self.frob_abs(c, j));
            }
        }
        debug_assert!(
            self.add(&self.mul(&w, &w), &w) == *beta,
            "Artin-Schreier construction failed"
        );
        w
    }

    /// Coordinates of x over F_q in the alphas basis: x = sum c_j alphas[j]
    /// with every c_j in F_q.
    pub fn decompose_fq(&self, x: &FieldElement) -> Vec<FieldElement> {
        let sol = self
            .alpha_solver
            .solve(&x.coords)
            .expect("alphas span the field over F_q");
        (0..self.n)
            .map(|j| {
                let mut acc = self.zero();
                for m in 0..self.l {
                    let c = sol[j * self.l + m];
                    if c != 0 {
                        acc = self.add(&acc, &self.mul(&self.scalar(c), &self.fq_basis[m]));
                    }
                }
                acc
            })
            .collect()
    }

    /// All field elements in base-p counting order of their coefficients.
    pub fn elements(&self) -> ElementIter<'_> {
        ElementIter { ctx: self, next: Some(vec![0; self.deg]) }
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> FieldElement {
        FieldElement { coords: (0..self.deg).map(|_| rng.gen_range(0..self.p)).collect() }
    }

    pub fn random_nonzero(&self, rng: &mut impl Rng) -> FieldElement {
        loop {
            let x = self.random_element(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}

fn build_alpha_solver(
    p: u64,
    deg: usize,
    l: usize,
    red_rows: &[Vec<u64>],
    alphas: &[FieldElement],
    fq_basis: &[FieldElement],
) -> Result<FpSolver, FieldError> {
    let n = alphas.len();
    let mut mat = FpMat::zero(p, deg, deg);
    for (j, a) in alphas.iter().enumerate() {
        for (m, b) in fq_basis.iter().enumerate() {
            let prod = raw_mul(p, deg, red_rows, &a.coords, &b.coords);
            mat.set_col(j * l + m, &prod);
        }
    }
    let _ = n;
    let solver = FpSolver::new(&mat);
    if solver.rank() != deg {
        return Err(FieldError::DependentAlphas);
    }
    Ok(solver)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub struct ElementIter<'a> {
    ctx: &'a FieldContext,
    next: Option<Vec<u64>>,
}

impl Iterator for ElementIter<'_> {
    type Item = FieldElement;
    fn next(&mut self) -> Option<FieldElement> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = 0;
        loop {
            if i == succ.len() {
                self.next = None;
                break;
            }
            succ[i] += 1;
            if succ[i] < self.ctx.p {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
            i += 1;
        }
        Some(FieldElement { coords: cur })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f4() -> Ctx {
        // F_4 presented as l=1, n=2 over F_2
        FieldContext::new(2, 1, 2, 1).unwrap()
    }

    #[test]
    fn canonical_modulus_f4() {
        let ctx = f4();
        assert_eq!(ctx.modulus(), &[1, 1, 1]); // y^2 + y + 1
        let w = ctx.gen_y();
        let w2 = ctx.mul(&w, &w);
        assert_eq!(w2.coords(), &[1, 1]); // w^2 = w + 1
        assert_eq!(ctx.mul(&w, &w2), ctx.one());
    }

    #[test]
    fn frobenius_is_field_automorphism() {
        let ctx = FieldContext::new(2, 1, 6, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = ctx.random_element(&mut rng);
            let b = ctx.random_element(&mut rng);
            let i = rng.gen_range(0..6) as i64;
            let lhs = ctx.frob(&ctx.add(&a, &b), i);
            assert_eq!(lhs, ctx.add(&ctx.frob(&a, i), &ctx.frob(&b, i)));
            let lhs = ctx.frob(&ctx.mul(&a, &b), i);
            assert_eq!(lhs, ctx.mul(&ctx.frob(&a, i), &ctx.frob(&b, i)));
            // composition and inverse
            let j = rng.gen_range(0..6) as i64;
            assert_eq!(ctx.frob(&ctx.frob(&a, i), j), ctx.frob(&a, i + j));
            assert_eq!(ctx.frob(&ctx.frob(&a, i), -i), a);
        }
        // [n] is the identity, and frob agrees with an explicit power
        let a = ctx.random_element(&mut rng);
        assert_eq!(ctx.frob(&a, 6), a);
        assert_eq!(ctx.frob(&a, 1), ctx.pow(&a, 2));
    }

    #[test]
    fn frobenius_respects_shift_parameter() {
        // s = 3, n = 4: [1] means q^3 power
        let ctx = FieldContext::new(3, 1, 4, 3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let a = ctx.random_element(&mut rng);
        assert_eq!(ctx.frob(&a, 1), ctx.pow(&a, 3u64.pow(3)));
        assert_eq!(ctx.frob(&ctx.frob(&a, 1), 3), a); // 3*1 + 3*3 = 12 = 0 mod 4... [4]=id
    }

    #[test]
    fn inverse_and_division() {
        let ctx = FieldContext::new(5, 1, 3, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        assert!(ctx.inv(&ctx.zero()).is_none());
        for _ in 0..40 {
            let a = ctx.random_nonzero(&mut rng);
            let inv = ctx.inv(&a).unwrap();
            assert_eq!(ctx.mul(&a, &inv), ctx.one());
        }
    }

    #[test]
    fn norm_exponent_matches_product_form() {
        let ctx = FieldContext::new(3, 1, 4, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..30 {
            let a = ctx.random_element(&mut rng);
            let mut prod = ctx.one();
            for i in 0..4 {
                prod = ctx.mul(&prod, &ctx.frob(&a, i));
            }
            assert_eq!(ctx.norm_to_q(&a), prod);
            assert!(ctx.in_subfield_q(&ctx.norm_to_q(&a)));
        }
        // multiplicativity
        let a = ctx.random_nonzero(&mut rng);
        let b = ctx.random_nonzero(&mut rng);
        assert_eq!(
            ctx.norm_to_q(&ctx.mul(&a, &b)),
            ctx.mul(&ctx.norm_to_q(&a), &ctx.norm_to_q(&b))
        );
    }

    #[test]
    fn norm_f4_generator() {
        let ctx = f4();
        let w = ctx.gen_y();
        // norm of w down to F_2 is w * w^2 = 1
        assert_eq!(ctx.norm_to_q(&w), ctx.one());
    }

    #[test]
    fn tower_norm_matches_product() {
        // q0 = 2, u = 2, so q = 4; n = 3
        let ctx = FieldContext::with_tower(2, 1, 2, 3, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = ctx.random_element(&mut rng);
            // product over all q0-Frobenius powers: deg / l0 = 6 factors
            let mut prod = ctx.one();
            for m in 0..6 {
                prod = ctx.mul(&prod, &ctx.frob_abs(&a, m));
            }
            assert_eq!(ctx.norm_to_q0(&a).unwrap(), prod);
        }
        assert!(FieldContext::new(2, 2, 3, 1).unwrap().norm_to_q0(&ctx.one()).is_err());
    }

    #[test]
    fn subfield_enumeration() {
        let ctx = FieldContext::new(2, 2, 2, 1).unwrap(); // F_16 over F_4
        let sub = ctx.subfield_q();
        assert_eq!(sub.len(), 4);
        for x in &sub {
            assert!(ctx.in_subfield_q(x));
            // closed under multiplication
            for y in &sub {
                assert!(ctx.in_subfield_q(&ctx.mul(x, y)));
            }
        }
    }

    #[test]
    fn sigma_trace_kernel_size() {
        // F_{2^4}, n = 4: kernel of x + x^sigma has q^(n/2) = 4 elements
        let ctx = FieldContext::new(2, 1, 4, 1).unwrap();
        let mut kernel = 0;
        for x in ctx.elements() {
            let t = ctx.trace_sigma(&x).unwrap();
            if ctx.is_zero(&t) {
                kernel += 1;
                // solvable exactly on the kernel
                let w = ctx.solve_sigma_affine(&x).unwrap();
                let check = ctx.sub(&ctx.frob(&w, 2), &w);
                assert_eq!(check, x);
            } else {
                assert_eq!(ctx.solve_sigma_affine(&x), Err(FieldError::NoSolution));
            }
        }
        assert_eq!(kernel, 4);
    }

    #[test]
    fn sigma_affine_solution_count_odd_char() {
        // F_81 with n = 4 over F_3: each solvable target has q^(n/2) = 9
        // solutions, everything else none
        let ctx = FieldContext::new(3, 1, 4, 1).unwrap();
        let all: Vec<FieldElement> = ctx.elements().collect();
        let mut solvable = 0;
        for a in &all {
            let count = all
                .iter()
                .filter(|w| ctx.sub(&ctx.frob(w, 2), w) == *a)
                .count();
            if count > 0 {
                assert_eq!(count, 9);
                solvable += 1;
                let w = ctx.solve_sigma_affine(a).unwrap();
                assert_eq!(ctx.sub(&ctx.frob(&w, 2), &w), *a);
            } else {
                assert!(ctx.solve_sigma_affine(a).is_err());
            }
        }
        assert_eq!(solvable, 9);
    }

    #[test]
    fn sigma_needs_even_n() {
        let ctx = FieldContext::new(2, 1, 3, 1).unwrap();
        assert!(matches!(
            ctx.trace_sigma(&ctx.one()),
            Err(FieldError::SigmaUndefined { n: 3 })
        ));
    }

    #[test]
    fn quadratic_roots_odd_char_known_case() {
        // X^2 + 1 = 0 over F_9: the roots are the square roots of -1
        let ctx = FieldContext::new(3, 2, 1, 1).unwrap();
        let roots = ctx.solve_quadratic(&ctx.zero(), &ctx.one());
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(ctx.mul(r, r), ctx.neg(&ctx.one()));
        }
    }

    #[test]
    fn quadratic_char2_trace_criterion() {
        let ctx = f4();
        let w = ctx.gen_y();
        // X^2 + X + w: trace of w over F_4... the absolute trace of w in
        // F_4 is w + w^2 = 1, so no roots
        assert!(ctx.solve_quadratic(&ctx.one(), &w).is_empty());
        // X^2 + X + 1 has roots {w, w^2}
        let roots = ctx.solve_quadratic(&ctx.one(), &ctx.one());
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&w));
        assert!(roots.contains(&ctx.mul(&w, &w)));
    }

    #[test]
    fn sqrt_char2_is_unique() {
        let ctx = FieldContext::new(2, 1, 4, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        for _ in 0..20 {
            let a = ctx.random_element(&mut rng);
            let roots = ctx.solve_quadratic(&ctx.zero(), &a);
            assert_eq!(roots.len(), 1);
            assert_eq!(ctx.mul(&roots[0], &roots[0]), a);
        }
    }

    #[test]
    fn hex_roundtrip() {
        let ctx = FieldContext::new(3, 1, 4, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..10 {
            let a = ctx.random_element(&mut rng);
            let hex = a.to_hex();
            assert_eq!(hex.len(), 8);
            assert_eq!(ctx.element_from_hex(&hex).unwrap(), a);
        }
        assert!(ctx.element_from_hex("000000zz").is_err());
        assert!(ctx.element_from_hex("0000").is_err());
        assert!(ctx.element_from_hex("03000000").is_err()); // coefficient 3 out of range mod 3
    }

    #[test]
    fn alphas_default_independent_and_custom_rejected() {
        let ctx = FieldContext::new(2, 2, 3, 1).unwrap();
        assert_eq!(ctx.alphas().len(), 3);
        // dependent set: {1, y, y+1} has an F_q-relation only if 1, y are
        // dependent... use {1, 1, y} which repeats a point
        let bad = vec![ctx.one(), ctx.one(), ctx.gen_y()];
        assert!(matches!(ctx.with_alphas(bad), Err(FieldError::DependentAlphas)));
        // scaling by an F_q unit keeps independence
        let sub = ctx.subfield_q();
        let unit = sub.iter().find(|x| !ctx.is_zero(x) && **x != ctx.one()).unwrap();
        let scaled: Vec<FieldElement> =
            ctx.alphas().iter().map(|a| ctx.mul(a, unit)).collect();
        assert!(ctx.with_alphas(scaled).is_ok());
    }

    #[test]
    fn decompose_fq_roundtrip() {
        let ctx = FieldContext::new(2, 2, 3, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..20 {
            let x = ctx.random_element(&mut rng);
            let parts = ctx.decompose_fq(&x);
            assert_eq!(parts.len(), 3);
            let mut back = ctx.zero();
            for (c, a) in parts.iter().zip(ctx.alphas()) {
                assert!(ctx.in_subfield_q(c));
                back = ctx.add(&back, &ctx.mul(c, a));
            }
            assert_eq!(back, x);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(FieldContext::new(4, 1, 2, 1), Err(FieldError::NotPrime(4))));
        assert!(matches!(FieldContext::new(257, 1, 2, 1), Err(FieldError::CharTooLarge(257))));
        assert!(matches!(
            FieldContext::new(2, 1, 4, 2),
            Err(FieldError::ShiftNotCoprime { s: 2, n: 4 })
        ));
        assert!(matches!(
            FieldContext::with_tower(2, 2, 2, 3, 1),
            Err(FieldError::BadTower { .. })
        ) == false);
        assert!(matches!(
            FieldContext::with_options(2, 3, 2, 1, None, Some((2, 2))),
            Err(FieldError::BadTower { l0: 2, u: 2, l: 3 })
        ));
        assert!(matches!(
            FieldContext::with_options(2, 1, 2, 1, Some(vec![1, 0, 1]), None),
            Err(FieldError::BadModulus(_))
        ));
    }

    #[test]
    fn element_count_matches_order() {
        let ctx = FieldContext::new(3, 1, 2, 1).unwrap();
        assert_eq!(ctx.elements().count(), 9);
        let distinct: std::collections::HashSet<Vec<u64>> =
            ctx.elements().map(|e| e.coords().to_vec()).collect();
        assert_eq!(distinct.len(), 9);
    }

    #[test]
    fn trace_one_element_char2() {
        let ctx = FieldContext::new(2, 1, 6, 1).unwrap();
        let c = ctx.trace_one.clone().unwrap();
        assert_eq!(ctx.abs_trace(&c), 1);
    }
}
