//! Anticipation module and drift handling.
//!
//! For each principal rule `i` an [`AnticipatedSystem`] holds two shadow
//! sub-rules trained on the same samples as `i`: a slow one (long memory
//! `tmax_slow`) and a fast one (short memory `tmax_fast`). On a stationary
//! stream they stay together; when the local distribution moves the fast
//! sub-rule follows and the two separate. Separation is the drift signal.

mod learner;

pub use learner::{ForgettingMode, LearnerParams, ParaFisLearner, Strategy, SubConclusionInit};

use serde::{Deserialize, Serialize};

use crate::fis::{Premise, Rule, RuleId};
use crate::forgetting::DdfConsequent;
use crate::numerics::radius_from_inverse;
use crate::serde_ext;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubRule {
    pub premise: Premise,
    pub conclusion: DdfConsequent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnticipatedSystem {
    pub parent: RuleId,
    pub slow: SubRule,
    pub fast: SubRule,
    /// Samples learned since spawn; both sub-rules always see the same ones.
    pub samples_seen: u64,
}

/// Outcome of the separability test on one anticipated system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Separation {
    pub fired: bool,
    /// `‖μ_slow − μ_fast‖ / (σ_slow + σ_fast)`; the test fires when this
    /// exceeds `ks`. Zero for coincident centers.
    pub ratio: f64,
    pub distance: f64,
    pub radius_slow: f64,
    pub radius_fast: f64,
}

/// Condition 1: `‖μ₁ − μ₂‖ > ks·(σ₁ + σ₂)`, where `σ` is the radius of each
/// sub-rule's unit Mahalanobis ellipsoid along the line joining the centers.
/// Condition 2: more than `nmin` samples since spawn.
pub fn check_separability(am: &AnticipatedSystem, ks: f64, nmin: u64) -> Separation {
    let delta = &am.fast.premise.center - &am.slow.premise.center;
    let distance = delta.norm();
    if distance == 0.0 || !distance.is_finite() {
        return Separation {
            fired: false,
            ratio: 0.0,
            distance,
            radius_slow: f64::NAN,
            radius_fast: f64::NAN,
        };
    }
    let u = delta / distance;
    let radius_slow = radius_from_inverse(&am.slow.premise.cov_inv, &u);
    let radius_fast = radius_from_inverse(&am.fast.premise.cov_inv, &u);
    let envelope = radius_slow + radius_fast;
    let ratio = distance / envelope;
    let fired = am.samples_seen > nmin && distance > ks * envelope;
    Separation {
        fired,
        ratio,
        distance,
        radius_slow,
        radius_fast,
    }
}

/// Builds the anticipated system of `rule`: two copies of its premise, capped
/// at the slow and fast memories, with conclusions derived from the rule's.
pub fn spawn_anticipated(rule: &Rule, params: &LearnerParams) -> AnticipatedSystem {
    let conclusion = sub_conclusion(&rule.conclusion, params);
    AnticipatedSystem {
        parent: rule.id,
        slow: SubRule {
            premise: rule.premise.with_tmax(Some(params.tmax_slow)),
            conclusion: conclusion.clone(),
        },
        fast: SubRule {
            premise: rule.premise.with_tmax(Some(params.tmax_fast)),
            conclusion,
        },
        samples_seen: 0,
    }
}

fn sub_conclusion(parent: &DdfConsequent, params: &LearnerParams) -> DdfConsequent {
    let mut c = parent.clone();
    c.skipped_downdates = 0;
    if params.sub_init == SubConclusionInit::Zero {
        c.consequent.coeffs.fill(0.0);
    }
    if params.forgetting.windowed_anticipation() {
        // A windowed conclusion must describe exactly its window, so the
        // correlation matrix is rebuilt from the parent's recent points.
        c.rebuild_corr_from_window();
    }
    c
}

/// One drift detection followed by a replacement, in stream order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftEvent {
    pub sample_index: u64,
    pub rule_id: RuleId,
    #[serde(with = "serde_ext::extended_f64")]
    pub separation: f64,
    pub strategy: Strategy,
}
