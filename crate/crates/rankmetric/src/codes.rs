//! The three code families: plain Gabidulin, twisted Gabidulin, and
//! additive twisted Gabidulin.
//!
//! A message (m_0, ..., m_(k-1)) becomes the coefficient vector of a
//! linearized polynomial and the codeword is its evaluations at the n
//! evaluation points. The plain family zero-pads the coefficients; the
//! twisted families additionally place eps * m_0^(q0^h) at position k,
//! where q0 = q for the twisted family and a proper subfield of F_q for
//! the additive one. Decoding works on eta = the interpolation
//! coefficients of the received word, whose tail beyond the message
//! positions exposes the error polynomial directly.

use std::fmt;

use crate::field::{Ctx, FieldElement};
use crate::linalg;
use crate::linpoly::LinearizedPoly;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CodeFamily {
    Gabidulin,
    TwistedGabidulin,
    AdditiveTwistedGabidulin,
}

impl CodeFamily {
    pub fn tag(self) -> &'static str {
        match self {
            CodeFamily::Gabidulin => "GG",
            CodeFamily::TwistedGabidulin => "GTG",
            CodeFamily::AdditiveTwistedGabidulin => "AGTG",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GG" => Some(CodeFamily::Gabidulin),
            "GTG" => Some(CodeFamily::TwistedGabidulin),
            "AGTG" => Some(CodeFamily::AdditiveTwistedGabidulin),
            _ => None,
        }
    }

    pub fn is_twisted(self) -> bool {
        !matches!(self, CodeFamily::Gabidulin)
    }
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CodeError {
    InvalidDimension { k: usize, n: usize },
    TwistUnsupported,
    MissingTwist,
    NoTower,
    InvalidTwistExponent { h: usize, max: usize },
    ZeroEpsilon,
    InvalidEpsilon { reason: String },
    WrongLength { got: usize, want: usize },
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::InvalidDimension { k, n } => {
                write!(f, "dimension k={k} must satisfy 1 <= k < n={n}")
            }
            CodeError::TwistUnsupported => {
                write!(f, "the plain Gabidulin family takes no twist parameters")
            }
            CodeError::MissingTwist => write!(f, "twisted families need h and eps"),
            CodeError::NoTower => {
                write!(f, "the additive twisted family needs a field with an intermediate subfield")
            }
            CodeError::InvalidTwistExponent { h, max } => {
                write!(f, "twist exponent h={h} must lie in 1..={max}")
            }
            CodeError::ZeroEpsilon => write!(f, "eps must be nonzero"),
            CodeError::InvalidEpsilon { reason } => write!(f, "eps is inadmissible: {reason}"),
            CodeError::WrongLength { got, want } => {
                write!(f, "expected a vector of length {want}, got {got}")
            }
        }
    }
}

impl std::error::Error for CodeError {}

#[derive(Clone)]
struct Twist {
    h: usize,
    eps: FieldElement,
    /// F_p-degree of the twist base field F_{q0}; equals l for the
    /// twisted family, the tower subdegree for the additive one.
    l0: usize,
}

#[derive(Clone)]
pub struct CodeSpec {
    ctx: Ctx,
    family: CodeFamily,
    k: usize,
    twist: Option<Twist>,
    /// Inverse of the full n x n evaluation matrix M[i][j] = alphas[i]^([j]);
    /// applying it to a received word yields its interpolation coefficients.
    moore_inv: Vec<Vec<FieldElement>>,
}

impl CodeSpec {
    pub fn new(
        ctx: &Ctx,
        family: CodeFamily,
        k: usize,
        twist: Option<(usize, FieldElement)>,
    ) -> Result<CodeSpec, CodeError> {
        let n = ctx.n();
        if k == 0 || k >= n {
            return Err(CodeError::InvalidDimension { k, n });
        }
        let twist = match (family, twist) {
            (CodeFamily::Gabidulin, None) => None,
            (CodeFamily::Gabidulin, Some(_)) => return Err(CodeError::TwistUnsupported),
            (_, None) => return Err(CodeError::MissingTwist),
            (fam, Some((h, eps))) => {
                let (l0, u) = match fam {
                    CodeFamily::TwistedGabidulin => (ctx.l(), 1),
                    CodeFamily::AdditiveTwistedGabidulin => {
                        ctx.tower().ok_or(CodeError::NoTower)?
                    }
                    CodeFamily::Gabidulin => unreachable!(),
                };
                let max = n * u - 1;
                if h == 0 || h > max {
                    return Err(CodeError::InvalidTwistExponent { h, max });
                }
                if ctx.is_zero(&eps) {
                    return Err(CodeError::ZeroEpsilon);
                }
                check_epsilon(ctx, k, h, l0, &eps)?;
                Some(Twist { h, eps, l0 })
            }
        };
        let n_mat: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| (0..n).map(|j| ctx.frob(&ctx.alphas()[i], j as i64)).collect())
            .collect();
        let moore_inv = linalg::invert(ctx, &n_mat)
            .expect("independent evaluation points give an invertible matrix");
        Ok(CodeSpec { ctx: ctx.clone(), family, k, twist, moore_inv })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }
    pub fn family(&self) -> CodeFamily {
        self.family
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn h(&self) -> Option<usize> {
        self.twist.as_ref().map(|t| t.h)
    }
    pub fn eps(&self) -> Option<&FieldElement> {
        self.twist.as_ref().map(|t| &t.eps)
    }

    /// Minimum rank distance n-k+1. All three families meet the Singleton
    /// bound: the plain family classically, the twisted ones because the
    /// eps norm condition rules out codeword polynomials whose kernel
    /// dimension matches their q-degree.
    pub fn min_rank_distance(&self) -> usize {
        self.ctx.n() - self.k + 1
    }

    /// First interpolation index the decoder can trust to carry only
    /// error content: k for the plain family, k+1 past the twist.
    pub fn known_from(&self) -> usize {
        if self.family.is_twisted() {
            self.k + 1
        } else {
            self.k
        }
    }

    /// eps * x^(q0^h); identity shape check for the plain family is a
    /// caller bug, hence the panic.
    pub fn twist_forward(&self, x: &FieldElement) -> FieldElement {
        let t = self.twist.as_ref().expect("plain family has no twist");
        self.ctx.mul(&t.eps, &self.ctx.frob_abs(x, self.twist_exponent()))
    }

    /// Solves eps * x^(q0^h) = w for x by the inverse Frobenius power.
    pub fn twist_invert(&self, w: &FieldElement) -> FieldElement {
        let t = self.twist.as_ref().expect("plain family has no twist");
        let e = self.twist_exponent();
        let deg = self.ctx.deg();
        let inner = self
            .ctx
            .div(w, &t.eps)
            .expect("eps is nonzero by construction");
        self.ctx.frob_abs(&inner, (deg - e) % deg)
    }

    /// Index m such that the twist map is x -> eps * x^(p^m).
    pub fn twist_exponent(&self) -> usize {
        let t = self.twist.as_ref().expect("plain family has no twist");
        (t.l0 * t.h) % self.ctx.deg()
    }

    /// Coefficient vector the message expands to before evaluation.
    fn message_coeffs(&self, m: &[FieldElement]) -> Vec<FieldElement> {
        let mut coeffs = m.to_vec();
        coeffs.resize(self.ctx.n(), self.ctx.zero());
        if self.twist.is_some() {
            coeffs[self.k] = self.twist_forward(&m[0]);
        }
        coeffs
    }

    pub fn encode(&self, m: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if m.len() != self.k {
            return Err(CodeError::WrongLength { got: m.len(), want: self.k });
        }
        let poly = LinearizedPoly::new(&self.ctx, self.message_coeffs(m));
        Ok(poly.eval_at_alphas())
    }

    /// Interpolation coefficients of a length-n word: the unique
    /// linearized polynomial through (alpha_i, r_i).
    pub fn eta_transform(&self, r: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if r.len() != self.ctx.n() {
            return Err(CodeError::WrongLength { got: r.len(), want: self.ctx.n() });
        }
        Ok(linalg::mat_vec(&self.ctx, &self.moore_inv, r))
    }

    /// Some(message) when the word is exactly a codeword.
    pub fn verify_codeword(&self, c: &[FieldElement]) -> Result<Option<Vec<FieldElement>>, CodeError> {
        let eta = self.eta_transform(c)?;
        let ctx = &self.ctx;
        let tail_from = self.known_from();
        if eta[tail_from..].iter().any(|x| !ctx.is_zero(x)) {
            return Ok(None);
        }
        let m: Vec<FieldElement> = eta[..self.k].to_vec();
        if self.twist.is_some() && eta[self.k] != self.twist_forward(&m[0]) {
            return Ok(None);
        }
        Ok(Some(m))
    }
}

/// Admissibility of the twist scale. The twisted coefficient vector
/// (m_0, ..., m_(k-1), eps m_0^(q0^h), 0, ...) must never form a
/// polynomial of rank below n-k, which happens exactly when
/// Norm_{q^n/q}(eps) * (-1)^(nk) equals v^(1-q0^h) for some v in F_q^*.
/// With q0 = q that set collapses to {1} and the test becomes the plain
/// norm inequality Norm(eps) != (-1)^(nk).
fn check_epsilon(
    ctx: &Ctx,
    k: usize,
    h: usize,
    l0: usize,
    eps: &FieldElement,
) -> Result<(), CodeError> {
    let norm = ctx.norm_to_q(eps);
    let sign = if (ctx.n() * k) % 2 == 1 {
        ctx.neg(&ctx.one())
    } else {
        ctx.one()
    };
    let target = ctx.mul(&norm, &sign);
    let e = (l0 * h) % ctx.deg();
    for v in ctx.subfield_q() {
        if ctx.is_zero(&v) {
            continue;
        }
        let vq0h = ctx.frob_abs(&v, e);
        let member = ctx.div(&v, &vq0h).expect("nonzero");
        if member == target {
            return Err(CodeError::InvalidEpsilon {
                reason: format!(
                    "norm condition fails: Norm(eps)*(-1)^(nk) = v^(1-q0^h) at v = {}",
                    v.to_hex()
                ),
            });
        }
    }
    Ok(())
}

/// Searches eps candidates in field counting order and returns the first
/// admissible one, if any exists at all.
pub fn first_valid_eps(
    ctx: &Ctx,
    family: CodeFamily,
    k: usize,
    h: usize,
) -> Option<FieldElement> {
    for eps in ctx.elements() {
        if ctx.is_zero(&eps) {
            continue;
        }
        if CodeSpec::new(ctx, family, k, Some((h, eps.clone()))).is_ok() {
            return Some(eps);
        }
    }
    None
}
