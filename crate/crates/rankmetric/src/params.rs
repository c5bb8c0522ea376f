//! Self-contained parameter documents.
//!
//! A document records everything needed to reproduce a code and channel
//! setup: the field tower, the code family with its twist, the channel
//! model with its constraint indices, the evaluation points, and the RNG
//! seed. Field elements travel as hex strings (two lowercase digits per
//! base-field coordinate, lowest power first); the modulus is never
//! stored because the canonical irreducible polynomial is derived from
//! the degree alone.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{first_valid_eps, CodeError, CodeFamily, CodeSpec};
use crate::field::{Ctx, FieldContext, FieldElement, FieldError};
use crate::models::{model_a_setup, ModelAParams, ModelAVariant, ModelBParams, ModelError};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamDocument {
    pub p: u64,
    pub l: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    pub model: ModelDoc,
    pub alphas: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorModel {
    A(ModelAParams),
    B(ModelBParams),
}

/// Runtime bundle reconstructed from a document.
pub struct Loaded {
    pub ctx: Ctx,
    pub spec: CodeSpec,
    pub model: ErrorModel,
    pub seed: u64,
}

#[derive(Debug)]
pub enum ParamError {
    Field(FieldError),
    Code(CodeError),
    Model(ModelError),
    Document(String),
    Json(String),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::Field(e) => write!(f, "field setup: {e}"),
            ParamError::Code(e) => write!(f, "code setup: {e}"),
            ParamError::Model(e) => write!(f, "channel model: {e}"),
            ParamError::Document(s) => write!(f, "bad parameter document: {s}"),
            ParamError::Json(s) => write!(f, "malformed JSON: {s}"),
        }
    }
}

impl std::error::Error for ParamError {}

impl From<FieldError> for ParamError {
    fn from(e: FieldError) -> Self {
        ParamError::Field(e)
    }
}
impl From<CodeError> for ParamError {
    fn from(e: CodeError) -> Self {
        ParamError::Code(e)
    }
}
impl From<ModelError> for ParamError {
    fn from(e: ModelError) -> Self {
        ParamError::Model(e)
    }
}

/// How to pick the twist scalar during setup.
#[derive(Clone, Debug)]
pub enum EpsChoice {
    /// Hex-encoded element supplied by the caller.
    Given(String),
    /// First admissible scalar in counting order; deterministic.
    FirstValid,
    /// Rejection-sampled from the setup seed.
    Random,
}

#[derive(Clone, Debug)]
pub struct TwistRequest {
    pub h: usize,
    pub eps: EpsChoice,
}

#[derive(Clone, Debug)]
pub enum ModelChoice {
    A(ModelAVariant),
    B,
}

#[derive(Clone, Debug)]
pub struct SetupRequest {
    pub p: u64,
    pub l: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    /// (l0, u) with l = l0 * u; required by the additive family.
    pub tower: Option<(usize, usize)>,
    pub family: CodeFamily,
    pub twist: Option<TwistRequest>,
    pub model: ModelChoice,
    pub seed: u64,
}

/// Builds a fresh setup: constructs the field, runs the channel-model
/// placement (which may rebuild the evaluation points), resolves the
/// twist scalar, and returns both the reloadable document and the live
/// bundle.
pub fn setup(req: &SetupRequest) -> Result<(ParamDocument, Loaded), ParamError> {
    if let Some((l0, u)) = req.tower {
        if l0 * u != req.l {
            return Err(ParamError::Document(format!(
                "tower {l0}*{u} does not match field degree {}",
                req.l
            )));
        }
    }
    let mut ctx = FieldContext::with_options(req.p, req.l, req.n, req.s, None, req.tower)?;

    let model = match req.model {
        ModelChoice::A(variant) => {
            let plain = req.family == CodeFamily::Gabidulin;
            if plain != (variant == ModelAVariant::GabidulinBeyond) {
                return Err(ParamError::Document(format!(
                    "model variant {} does not fit family {}",
                    variant.tag(),
                    req.family.tag()
                )));
            }
            let (ctx2, params) = model_a_setup(&ctx, req.k, variant)?;
            ctx = ctx2;
            ErrorModel::A(params)
        }
        ModelChoice::B => {
            if !req.family.is_twisted() {
                return Err(ParamError::Document(
                    "the symmetric model decodes only twisted families".into(),
                ));
            }
            ErrorModel::B(ModelBParams)
        }
    };

    let twist = match (&req.twist, req.family.is_twisted()) {
        (None, false) => None,
        (Some(_), false) => {
            return Err(ParamError::Document("plain family takes no twist".into()))
        }
        (None, true) => {
            return Err(ParamError::Document(format!(
                "family {} needs a twist exponent",
                req.family.tag()
            )))
        }
        (Some(tw), true) => {
            let eps = resolve_eps(&ctx, req.family, req.k, tw, req.seed)?;
            Some((tw.h, eps))
        }
    };

    let spec = CodeSpec::new(&ctx, req.family, req.k, twist)?;
    let doc = document_from(&spec, &model, req.seed);
    Ok((doc, Loaded { ctx, spec, model, seed: req.seed }))
}

fn resolve_eps(
    ctx: &Ctx,
    family: CodeFamily,
    k: usize,
    tw: &TwistRequest,
    seed: u64,
) -> Result<FieldElement, ParamError> {
    match &tw.eps {
        EpsChoice::Given(hex) => Ok(ctx.element_from_hex(hex)?),
        EpsChoice::FirstValid => first_valid_eps(ctx, family, k, tw.h).ok_or_else(|| {
            ParamError::Document(format!(
                "no admissible twist scalar exists for family {} with h={}",
                family.tag(),
                tw.h
            ))
        }),
        EpsChoice::Random => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            for _ in 0..4096 {
                let cand = ctx.random_nonzero(&mut rng);
                match CodeSpec::new(ctx, family, k, Some((tw.h, cand.clone()))) {
                    Ok(_) => return Ok(cand),
                    Err(CodeError::InvalidEpsilon { .. }) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            Err(ParamError::Document(format!(
                "no admissible twist scalar found for family {} with h={}",
                family.tag(),
                tw.h
            )))
        }
    }
}

fn document_from(spec: &CodeSpec, model: &ErrorModel, seed: u64) -> ParamDocument {
    let ctx = spec.ctx();
    let (l0, u) = match spec.family() {
        CodeFamily::AdditiveTwistedGabidulin => {
            let (l0, u) = ctx.tower().expect("additive family carries a tower");
            (Some(l0), Some(u))
        }
        _ => (None, None),
    };
    let model_doc = match model {
        ErrorModel::A(pa) => ModelDoc {
            kind: "A".into(),
            theta1: Some(pa.theta1),
            theta2: Some(pa.theta2),
            variant: Some(pa.variant.tag().into()),
        },
        ErrorModel::B(_) => ModelDoc { kind: "B".into(), theta1: None, theta2: None, variant: None },
    };
    ParamDocument {
        p: ctx.p(),
        l: ctx.l(),
        n: ctx.n(),
        s: ctx.s(),
        k: spec.k(),
        family: spec.family().tag().into(),
        h: spec.h(),
        eps: spec.eps().map(FieldElement::to_hex),
        l0,
        u,
        model: model_doc,
        alphas: ctx.alphas().iter().map(FieldElement::to_hex).collect(),
        seed: Some(seed),
    }
}

/// Rebuilds the live bundle from a document. The stored evaluation points
/// are authoritative; every structural claim the document makes is
/// re-verified.
pub fn load(doc: &ParamDocument) -> Result<Loaded, ParamError> {
    let family = CodeFamily::from_tag(&doc.family)
        .ok_or_else(|| ParamError::Document(format!("unknown family tag {:?}", doc.family)))?;
    let tower = match (doc.l0, doc.u) {
        (Some(l0), Some(u)) => Some((l0, u)),
        (None, None) => None,
        _ => {
            return Err(ParamError::Document(
                "tower fields l0 and u must appear together".into(),
            ))
        }
    };
    let base = FieldContext::with_options(doc.p, doc.l, doc.n, doc.s, None, tower)?;
    if doc.alphas.len() != doc.n {
        return Err(ParamError::Document(format!(
            "expected {} evaluation points, found {}",
            doc.n,
            doc.alphas.len()
        )));
    }
    let alphas: Vec<FieldElement> = doc
        .alphas
        .iter()
        .map(|s| base.element_from_hex(s))
        .collect::<Result<_, _>>()?;
    let ctx = base.with_alphas(alphas)?;

    let twist = match (family.is_twisted(), doc.h, &doc.eps) {
        (false, None, None) => None,
        (true, Some(h), Some(eps_hex)) => Some((h, ctx.element_from_hex(eps_hex)?)),
        (false, _, _) => {
            return Err(ParamError::Document("plain family takes no twist".into()))
        }
        (true, _, _) => {
            return Err(ParamError::Document(
                "twisted family needs both h and eps".into(),
            ))
        }
    };
    let spec = CodeSpec::new(&ctx, family, doc.k, twist)?;

    let model = match doc.model.kind.as_str() {
        "A" => {
            let theta1 = doc
                .model
                .theta1
                .ok_or_else(|| ParamError::Document("model A needs theta1".into()))?;
            let theta2 = doc
                .model
                .theta2
                .ok_or_else(|| ParamError::Document("model A needs theta2".into()))?;
            let variant_tag = doc
                .model
                .variant
                .as_deref()
                .ok_or_else(|| ParamError::Document("model A needs a variant".into()))?;
            let variant = ModelAVariant::from_tag(variant_tag).ok_or_else(|| {
                ParamError::Document(format!("unknown model variant {variant_tag:?}"))
            })?;
            if ctx.n() % 2 != 0 {
                return Err(ParamError::Document(
                    "the asymmetric model needs even n".into(),
                ));
            }
            if theta1 >= ctx.n() || theta2 >= ctx.n() {
                return Err(ParamError::Document(
                    "constraint indices must address evaluation points".into(),
                ));
            }
            for theta in [theta1, theta2] {
                let tr = ctx.trace_sigma(&ctx.alphas()[theta])?;
                if !ctx.is_zero(&tr) {
                    return Err(ParamError::Document(format!(
                        "evaluation point {theta} does not support the constraints"
                    )));
                }
            }
            let plain = family == CodeFamily::Gabidulin;
            if plain != (variant == ModelAVariant::GabidulinBeyond) {
                return Err(ParamError::Document(format!(
                    "model variant {} does not fit family {}",
                    variant.tag(),
                    family.tag()
                )));
            }
            ErrorModel::A(ModelAParams { theta1, theta2, variant })
        }
        "B" => {
            if !family.is_twisted() {
                return Err(ParamError::Document(
                    "the symmetric model decodes only twisted families".into(),
                ));
            }
            ErrorModel::B(ModelBParams)
        }
        other => {
            return Err(ParamError::Document(format!("unknown model type {other:?}")))
        }
    };

    Ok(Loaded { ctx, spec, model, seed: doc.seed.unwrap_or(0) })
}

pub fn to_json_string(doc: &ParamDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serializes")
}

pub fn from_json_str(s: &str) -> Result<ParamDocument, ParamError> {
    serde_json::from_str(s).map_err(|e| ParamError::Json(e.to_string()))
}

/// Parses a JSON array of hex strings into field elements.
pub fn vector_from_json(
    ctx: &FieldContext,
    value: &serde_json::Value,
) -> Result<Vec<FieldElement>, ParamError> {
    let arr = value
        .as_array()
        .ok_or_else(|| ParamError::Json("expected an array of hex strings".into()))?;
    arr.iter()
        .map(|v| {
            let s = v
                .as_str()
                .ok_or_else(|| ParamError::Json("expected a hex string".into()))?;
            ctx.element_from_hex(s).map_err(ParamError::from)
        })
        .collect()
}

pub fn vector_to_json(v: &[FieldElement]) -> serde_json::Value {
    serde_json::Value::Array(
        v.iter()
            .map(|e| serde_json::Value::String(e.to_hex()))
            .collect(),
    )
}
