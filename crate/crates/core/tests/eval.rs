use parafis_core::eval::{
    mcnemar, mean_std, periodic_holdout, HoldoutOptions, McNemarOutcome, Verdict,
};
use parafis_core::learner::{ConstantClassifier, LookupOracle, OnlineClassifier};
use parafis_core::streams::{Stream, StreamSpec};
use parafis_core::{LearnerParams, ParaFisLearner, Result};
use proptest::prelude::*;

const FROZEN: HoldoutOptions = HoldoutOptions {
    standardize: true,
    check_frozen: true,
};

/// Predicts class 0 and counts learning calls.
struct Counting {
    learned: usize,
}

impl OnlineClassifier for Counting {
    fn learn(&mut self, _x: &[f64], y: usize) -> Result<usize> {
        self.learned += 1;
        Ok(y)
    }

    fn predict(&self, _x: &[f64]) -> Result<usize> {
        Ok(0)
    }

    fn fingerprint(&self) -> u64 {
        self.learned as u64
    }
}

#[test]
fn consumes_whole_pairs_only() {
    let mut spec = StreamSpec::preset("sin", 0).unwrap();
    spec.length = 2440;
    let stream = spec.build().unwrap();
    let r = periodic_holdout(
        |_: &Stream| Ok(Counting { learned: 0 }),
        &stream,
        200,
        50,
        FROZEN,
    )
    .unwrap();
    assert_eq!(r.per_chunk_accuracy.len(), 9);
    assert_eq!(r.samples_consumed, 9 * 250);
    assert_eq!(r.predictions.len(), 9 * 50);
    assert_eq!(r.truth.len(), 9 * 50);
}

#[test]
fn mean_and_std_are_recomputable() {
    let stream = StreamSpec::preset("10dplane", 2).unwrap().build().unwrap();
    let r = periodic_holdout(
        |s: &Stream| ParaFisLearner::new(s.meta.dim, s.meta.classes, LearnerParams::default()),
        &stream,
        100,
        20,
        FROZEN,
    )
    .unwrap();
    let (m, s) = mean_std(&r.per_chunk_accuracy);
    assert_eq!((m, s), (r.mean, r.std));
    let n = r.per_chunk_accuracy.len() as f64;
    let mean = r.per_chunk_accuracy.iter().sum::<f64>() / n;
    assert_eq!(mean, r.mean);
    assert!(r.per_chunk_accuracy.iter().all(|a| (0.0..=1.0).contains(a)));
}

#[test]
fn oracle_is_perfect_on_every_preset_shape() {
    for name in ["line", "10dplane", "gauss_jump"] {
        let spec = StreamSpec::preset(name, 11).unwrap();
        let stream = spec.build().unwrap();
        let r = periodic_holdout(
            |s: &Stream| Ok(LookupOracle::from_samples(&s.samples)),
            &stream,
            spec.trs,
            spec.tes,
            FROZEN,
        )
        .unwrap();
        assert_eq!((r.mean, r.std), (1.0, 0.0), "{name}");
    }
}

#[test]
fn majority_baseline_on_balanced_stream() {
    let spec = StreamSpec::preset("sinh", 4).unwrap();
    let stream = spec.build().unwrap();
    let r = periodic_holdout(
        |_: &Stream| Ok(ConstantClassifier { class: 1 }),
        &stream,
        spec.trs,
        spec.tes,
        HoldoutOptions::default(),
    )
    .unwrap();
    let sigma = (0.25f64 / r.truth.len() as f64).sqrt();
    assert!((r.mean - 0.5).abs() <= 3.0 * sigma, "{}", r.mean);
}

#[test]
fn test_chunks_do_not_change_the_learner() {
    // check_frozen asserts on the state hash around each test chunk.
    let spec = StreamSpec::preset("gauss_jump", 1).unwrap();
    let stream = spec.build().unwrap();
    let r = periodic_holdout(
        |s: &Stream| ParaFisLearner::new(s.meta.dim, s.meta.classes, LearnerParams::default()),
        &stream,
        spec.trs,
        spec.tes,
        FROZEN,
    )
    .unwrap();
    assert!(r.drift_events >= 1);
    assert_eq!(r.drift_log.len(), r.drift_events);
}

#[test]
fn too_short_stream_is_an_error() {
    let mut spec = StreamSpec::preset("line", 0).unwrap();
    spec.length = 100;
    let stream = spec.build().unwrap();
    let r = periodic_holdout(
        |_: &Stream| Ok(ConstantClassifier { class: 0 }),
        &stream,
        200,
        50,
        FROZEN,
    );
    assert!(r.is_err());
}

#[test]
fn mcnemar_table_examples() {
    let o = McNemarOutcome::from_counts(5, 15);
    assert_eq!(
        (o.k, o.verdict, o.low_contingency),
        (5.0, Verdict::Approx, true)
    );
    let o = McNemarOutcome::from_counts(0, 30);
    assert_eq!(
        (o.k, o.verdict, o.low_contingency),
        (30.0, Verdict::Plus, false)
    );
    let o = McNemarOutcome::from_counts(0, 0);
    assert_eq!((o.k, o.verdict), (0.0, Verdict::Minus));
}

#[test]
fn mcnemar_from_built_predictions() {
    // 15 samples where only a is right, 5 where only b is right, 30 ties.
    let mut truth = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for _ in 0..15 {
        truth.push(1);
        a.push(1);
        b.push(0);
    }
    for _ in 0..5 {
        truth.push(0);
        a.push(1);
        b.push(0);
    }
    for i in 0..30 {
        truth.push(i % 2);
        a.push(i % 2);
        b.push(i % 2);
    }
    let o = mcnemar(&a, &b, &truth).unwrap();
    assert_eq!((o.n10, o.n01), (15, 5));
    assert_eq!(o.to_string(), "5.00 ≈ (x)");
}

fn triples() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>)> {
    (1usize..300).prop_flat_map(|n| {
        (
            prop::collection::vec(0usize..3, n),
            prop::collection::vec(0usize..3, n),
            prop::collection::vec(0usize..3, n),
        )
    })
}

proptest! {
    #[test]
    fn mcnemar_is_symmetric((a, b, truth) in triples()) {
        let ab = mcnemar(&a, &b, &truth).unwrap();
        let ba = mcnemar(&b, &a, &truth).unwrap();
        prop_assert_eq!(ab.k, ba.k);
        prop_assert_eq!(ab.verdict, ba.verdict);
        prop_assert_eq!((ab.n01, ab.n10), (ba.n10, ba.n01));
        prop_assert_eq!(ab.low_contingency, ab.n01 + ab.n10 < 25);
    }

    #[test]
    fn mcnemar_k_formula(n01 in 0u64..500, n10 in 0u64..500) {
        let o = McNemarOutcome::from_counts(n01, n10);
        if n01 + n10 == 0 {
            prop_assert_eq!(o.k, 0.0);
        } else {
            let expect = ((n10 as f64 - n01 as f64).powi(2)) / (n10 + n01) as f64;
            prop_assert!((o.k - expect).abs() <= 1e-12 * expect.max(1.0));
        }
    }
}
