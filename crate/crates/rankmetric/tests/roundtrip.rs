//! Property tests driving full encode / corrupt / decode round trips
//! across the family and model matrix.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use rankmetric::codes::{first_valid_eps, CodeFamily, CodeSpec};
use rankmetric::decoders::{self, DecodeError};
use rankmetric::field::{Ctx, FieldContext, FieldElement};
use rankmetric::linpoly::random_rank_t;
use rankmetric::models::{model_a_setup, sample_model_a_error, sample_model_b_error,
    ModelAVariant, ModelBParams};

fn element_strategy(ctx: &Ctx) -> impl Strategy<Value = FieldElement> {
    let ctx = ctx.clone();
    prop::collection::vec(0..ctx.p(), ctx.deg())
        .prop_map(move |coords| ctx.element(coords).expect("coords sized to the field"))
}

fn message_strategy(ctx: &Ctx, k: usize) -> impl Strategy<Value = Vec<FieldElement>> {
    prop::collection::vec(element_strategy(ctx), k)
}

/// Decode recovered the transmitted message, uniquely or within a
/// reported candidate list.
fn recovered(outcome: &Result<decoders::DecodeReport, DecodeError>, m: &[FieldElement]) -> bool {
    match outcome {
        Ok(rep) => rep.message == m,
        Err(DecodeError::Ambiguous(cands)) => cands.iter().any(|c| c.message == m),
        Err(_) => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plain_family_classical_radius(seed in 0u64..1 << 48, t in 0usize..=2) {
        let ctx = FieldContext::new(2, 1, 8, 1).unwrap();
        let spec = CodeSpec::new(&ctx, CodeFamily::Gabidulin, 3, None).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let m: Vec<FieldElement> = (0..3).map(|_| ctx.random_element(&mut rng)).collect();
        let c = spec.encode(&m).unwrap();
        let e = random_rank_t(&ctx, t, &mut rng).eval_at_alphas();
        let r: Vec<FieldElement> = c.iter().zip(&e).map(|(a, b)| ctx.add(a, b)).collect();
        let rep = decoders::decode(&spec, None, &r).unwrap();
        prop_assert_eq!(&rep.message, &m);
        prop_assert_eq!(rep.t_used, t);
    }

    #[test]
    fn plain_family_constrained_beyond_half(m_seed in any::<u64>(), e_seed in any::<u64>()) {
        let base = FieldContext::new(2, 1, 6, 1).unwrap();
        let (ctx, pa) = model_a_setup(&base, 3, ModelAVariant::GabidulinBeyond).unwrap();
        let spec = CodeSpec::new(&ctx, CodeFamily::Gabidulin, 3, None).unwrap();
        let mut mr = ChaCha12Rng::seed_from_u64(m_seed);
        let mut er = ChaCha12Rng::seed_from_u64(e_seed);
        let m: Vec<FieldElement> = (0..3).map(|_| ctx.random_element(&mut mr)).collect();
        let c = spec.encode(&m).unwrap();
        let e = sample_model_a_error(&ctx, &pa, 3, 2, &mut er).unwrap();
        let r: Vec<FieldElement> =
            c.iter().zip(&e.vector).map(|(a, b)| ctx.add(a, b)).collect();
        let outcome = decoders::decode(&spec, Some(&pa), &r);
        prop_assert!(recovered(&outcome, &m), "lost the message: {outcome:?}");
    }

    #[test]
    fn twisted_family_constrained_beyond_half(m_seed in any::<u64>(), e_seed in any::<u64>()) {
        let base = FieldContext::new(2, 2, 6, 1).unwrap();
        let (ctx, pa) = model_a_setup(&base, 2, ModelAVariant::TwistedBeyond).unwrap();
        let eps = first_valid_eps(&ctx, CodeFamily::TwistedGabidulin, 2, 1).unwrap();
        let spec =
            CodeSpec::new(&ctx, CodeFamily::TwistedGabidulin, 2, Some((1, eps))).unwrap();
        let mut mr = ChaCha12Rng::seed_from_u64(m_seed);
        let mut er = ChaCha12Rng::seed_from_u64(e_seed);
        let m: Vec<FieldElement> = (0..2).map(|_| ctx.random_element(&mut mr)).collect();
        let c = spec.encode(&m).unwrap();
        let e = sample_model_a_error(&ctx, &pa, 2, 2, &mut er).unwrap();
        let r: Vec<FieldElement> =
            c.iter().zip(&e.vector).map(|(a, b)| ctx.add(a, b)).collect();
        let outcome = decoders::decode_gtg(&spec, Some(&pa), &r);
        prop_assert!(recovered(&outcome, &m), "lost the message: {outcome:?}");
    }

    #[test]
    fn symmetric_model_any_realized_rank(m_seed in any::<u64>(), e_seed in any::<u64>()) {
        let ctx = FieldContext::new(2, 2, 7, 1).unwrap();
        let eps = first_valid_eps(&ctx, CodeFamily::TwistedGabidulin, 3, 1).unwrap();
        let spec =
            CodeSpec::new(&ctx, CodeFamily::TwistedGabidulin, 3, Some((1, eps))).unwrap();
        let mut mr = ChaCha12Rng::seed_from_u64(m_seed);
        let mut er = ChaCha12Rng::seed_from_u64(e_seed);
        let m: Vec<FieldElement> = (0..3).map(|_| ctx.random_element(&mut mr)).collect();
        let c = spec.encode(&m).unwrap();
        let e = sample_model_b_error(&ctx, &ModelBParams, &mut er).unwrap();
        let r: Vec<FieldElement> =
            c.iter().zip(&e.vector).map(|(a, b)| ctx.add(a, b)).collect();
        let rep = decoders::decode_model_b_lowrate(&spec, &r).unwrap();
        prop_assert_eq!(&rep.message, &m);
        prop_assert_eq!(rep.t_used, e.rank);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn encoding_is_linear(ma in message_strategy(&FieldContext::new(2, 1, 6, 1).unwrap(), 3),
                          mb in message_strategy(&FieldContext::new(2, 1, 6, 1).unwrap(), 3)) {
        let ctx = FieldContext::new(2, 1, 6, 1).unwrap();
        let spec = CodeSpec::new(&ctx, CodeFamily::Gabidulin, 3, None).unwrap();
        // elements built against one context instance evaluate fine under
        // an identical one; rebuild the messages locally to keep a single
        // context in play
        let ma: Vec<FieldElement> =
            ma.iter().map(|x| ctx.element(x.coords().to_vec()).unwrap()).collect();
        let mb: Vec<FieldElement> =
            mb.iter().map(|x| ctx.element(x.coords().to_vec()).unwrap()).collect();
        let sum: Vec<FieldElement> =
            ma.iter().zip(&mb).map(|(a, b)| ctx.add(a, b)).collect();
        let ca = spec.encode(&ma).unwrap();
        let cb = spec.encode(&mb).unwrap();
        let cs = spec.encode(&sum).unwrap();
        for i in 0..ctx.n() {
            prop_assert_eq!(ctx.add(&ca[i], &cb[i]), cs[i].clone());
        }
    }
}
