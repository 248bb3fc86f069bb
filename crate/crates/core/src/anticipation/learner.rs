use serde::{Deserialize, Serialize};

use crate::anticipation::{
    check_separability, spawn_anticipated, AnticipatedSystem, DriftEvent, Separation,
};
use crate::error::{check_dim, Error, Result};
use crate::fis::{
    one_hot, AugmentedInput, ConclusionUpdate, FuzzySystem, Rule, StepKind, SystemParams,
    WrlsWeight, DEFAULT_OMEGA,
};
use crate::forgetting::window_transfer;
use crate::numerics::Vector;
use crate::serde_ext;

/// How the principal system's conclusions are refreshed after a drift.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Only the drifting rule is replaced, by its two sub-rules.
    Naive,
    /// As naive, and every other rule also takes the conclusion of its own
    /// slow sub-rule.
    #[default]
    Global,
}

/// Where deferred directional forgetting is applied to conclusions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForgettingMode {
    /// No conclusion forgetting anywhere.
    None,
    /// Windowed conclusions in both the principal system and the
    /// anticipation module.
    ForgetPs,
    /// Windowed conclusions in the anticipation module only.
    #[default]
    ForgetAm,
}

impl ForgettingMode {
    pub fn principal_update(self) -> ConclusionUpdate {
        match self {
            ForgettingMode::ForgetPs => ConclusionUpdate::Windowed,
            _ => ConclusionUpdate::Plain,
        }
    }

    pub fn windowed_anticipation(self) -> bool {
        self != ForgettingMode::None
    }

    pub fn anticipation_update(self) -> ConclusionUpdate {
        if self.windowed_anticipation() {
            ConclusionUpdate::Windowed
        } else {
            ConclusionUpdate::Plain
        }
    }
}

/// Starting coefficients of sub-rule conclusions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubConclusionInit {
    #[default]
    Parent,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerParams {
    /// Memory of the slow sub-rule premise.
    pub tmax_slow: u64,
    /// Memory of the fast sub-rule premise.
    pub tmax_fast: u64,
    /// Separation coefficient; `inf` disables detection.
    #[serde(with = "serde_ext::extended_f64")]
    pub ks: f64,
    /// Samples an anticipated system must see before it may fire.
    pub nmin: u64,
    /// DDF window size.
    pub window: usize,
    pub omega: f64,
    pub sigma_init: f64,
    pub strategy: Strategy,
    pub forgetting: ForgettingMode,
    pub wrls_weight: WrlsWeight,
    pub sub_init: SubConclusionInit,
    /// Grow the class count when an unseen label shows up instead of failing.
    pub allow_new_classes: bool,
}

impl Default for LearnerParams {
    fn default() -> Self {
        Self {
            tmax_slow: 200,
            tmax_fast: 10,
            ks: 0.5,
            nmin: 20,
            window: 50,
            omega: DEFAULT_OMEGA,
            sigma_init: 1.0,
            strategy: Strategy::Global,
            forgetting: ForgettingMode::ForgetAm,
            wrls_weight: WrlsWeight::Normalized,
            sub_init: SubConclusionInit::Parent,
            allow_new_classes: false,
        }
    }
}

impl LearnerParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.tmax_fast == 0 || self.tmax_slow <= self.tmax_fast {
            return bad("need tmax_slow > tmax_fast >= 1");
        }
        if self.ks.is_nan() || self.ks <= 0.0 {
            return bad("ks must be positive (inf disables detection)");
        }
        if self.window == 0 {
            return bad("window size must be positive");
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return bad("omega must be positive and finite");
        }
        if !(self.sigma_init > 0.0 && self.sigma_init.is_finite()) {
            return bad("sigma_init must be positive and finite");
        }
        Ok(())
    }

    pub fn system_params(&self) -> SystemParams {
        SystemParams {
            sigma_init: self.sigma_init,
            omega: self.omega,
            window: self.window,
            wrls_weight: self.wrls_weight,
        }
    }
}

/// Principal fuzzy system plus its anticipation module.
///
/// `anticipations[i]` always belongs to `principal.rules[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParaFisLearner {
    pub principal: FuzzySystem,
    pub anticipations: Vec<AnticipatedSystem>,
    pub params: LearnerParams,
    pub drift_log: Vec<DriftEvent>,
    samples: u64,
}

impl ParaFisLearner {
    pub fn new(dim: usize, classes: usize, params: LearnerParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            principal: FuzzySystem::new(dim, classes, params.system_params())?,
            anticipations: Vec::new(),
            params,
            drift_log: Vec::new(),
            samples: 0,
        })
    }

    pub fn samples_learned(&self) -> u64 {
        self.samples
    }

    pub fn rule_count(&self) -> usize {
        self.principal.len()
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        self.principal.predict_class(&Vector::from_column_slice(x))
    }

    /// Predicts `x` with the principal system, then learns `(x, y)`:
    /// principal update, anticipated-system update for the most activated
    /// rule, separability check and, on detection, replacement.
    pub fn learn_sample(&mut self, x: &[f64], y: usize) -> Result<usize> {
        let x = Vector::from_column_slice(x);
        check_dim(self.principal.dim(), x.len())?;
        if y >= self.principal.classes() {
            if !self.params.allow_new_classes {
                return Err(Error::UnknownClass {
                    label: y,
                    classes: self.principal.classes(),
                });
            }
            while self.principal.classes() <= y {
                self.add_class();
            }
        }

        let index = self.samples;
        let step = self
            .principal
            .learn(&x, y, self.params.forgetting.principal_update())?;
        self.samples += 1;

        match step.kind {
            StepKind::Born { index } => {
                let am = spawn_anticipated(&self.principal.rules[index], &self.params);
                self.anticipations.insert(index, am);
            }
            StepKind::Updated {
                winner,
                memberships,
            } => {
                self.learn_anticipation(winner, &memberships, &x, y)?;
                let sep = check_separability(
                    &self.anticipations[winner],
                    self.params.ks,
                    self.params.nmin,
                );
                if sep.fired {
                    self.replace(winner, index, sep);
                }
            }
        }
        debug_assert_eq!(self.anticipations.len(), self.principal.len());
        Ok(step.prediction)
    }

    /// Trains the anticipated system of rule `winner` in its virtual system:
    /// rule `winner` is swapped for its two sub-rules, all other principal
    /// rules keep their memberships.
    fn learn_anticipation(
        &mut self,
        winner: usize,
        memberships: &[f64],
        x: &Vector,
        y: usize,
    ) -> Result<()> {
        let am = &mut self.anticipations[winner];
        let mut weights = Vec::with_capacity(memberships.len() + 1);
        weights.push(am.slow.premise.membership(x)?);
        weights.push(am.fast.premise.membership(x)?);
        weights.extend(
            memberships
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != winner)
                .map(|(_, b)| *b),
        );
        self.params.wrls_weight.apply(&mut weights);

        let x_aug = AugmentedInput::new(x);
        let target = one_hot(y, self.principal.classes());
        let update = self.params.forgetting.anticipation_update();
        am.slow.premise.update(x)?;
        am.fast.premise.update(x)?;
        update.apply(&mut am.slow.conclusion, &x_aug, weights[0], &target)?;
        update.apply(&mut am.fast.conclusion, &x_aug, weights[1], &target)?;
        am.samples_seen += 1;
        Ok(())
    }

    fn replace(&mut self, i: usize, sample_index: u64, sep: Separation) {
        let rule_id = self.principal.rules[i].id;
        log::debug!(
            "drift on {rule_id} at sample {sample_index} (separation {:.3}), {:?} replacement",
            sep.ratio,
            self.params.strategy
        );
        match self.params.strategy {
            Strategy::Naive => self.replace_naive(i),
            Strategy::Global => self.replace_global(i),
        }
        self.drift_log.push(DriftEvent {
            sample_index,
            rule_id,
            separation: sep.ratio,
            strategy: self.params.strategy,
        });
    }

    /// Splits rule `i` into its two sub-rules. Other rules and their
    /// anticipated systems are untouched.
    fn replace_naive(&mut self, i: usize) {
        let am = self.anticipations.remove(i);
        self.principal.rules.remove(i);
        let slow = self.promote(&am.slow);
        let fast = self.promote(&am.fast);
        let spawned = [
            spawn_anticipated(&slow, &self.params),
            spawn_anticipated(&fast, &self.params),
        ];
        self.principal.rules.splice(i..i, [slow, fast]);
        self.anticipations.splice(i..i, spawned);
    }

    /// Every other rule `j` first takes the conclusion (and window) of its
    /// slow sub-rule, then rule `i` is split as in the naive strategy and the
    /// whole anticipation module is re-spawned.
    fn replace_global(&mut self, i: usize) {
        for (j, (rule, am)) in self
            .principal
            .rules
            .iter_mut()
            .zip(&self.anticipations)
            .enumerate()
        {
            if j != i {
                window_transfer(&am.slow.conclusion, &mut rule.conclusion);
            }
        }
        self.replace_naive(i);
        self.anticipations = self
            .principal
            .rules
            .iter()
            .map(|r| spawn_anticipated(r, &self.params))
            .collect();
    }

    fn promote(&mut self, sub: &crate::anticipation::SubRule) -> Rule {
        Rule {
            id: self.principal.fresh_id(),
            premise: sub.premise.with_tmax(None),
            conclusion: sub.conclusion.clone(),
        }
    }

    fn add_class(&mut self) {
        self.principal.add_class();
        for am in &mut self.anticipations {
            am.slow.conclusion.consequent.add_class();
            am.fast.conclusion.consequent.add_class();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anticipation::SubRule;

    fn learner(strategy: Strategy) -> ParaFisLearner {
        let params = LearnerParams {
            strategy,
            ..LearnerParams::default()
        };
        let mut l = ParaFisLearner::new(2, 2, params).unwrap();
        l.learn_sample(&[0.0, 0.0], 0).unwrap();
        l.learn_sample(&[8.0, 0.0], 1).unwrap();
        l.learn_sample(&[0.0, 8.0], 0).unwrap();
        // third rule through a manual split so that N = 3
        l.replace_naive(1);
        assert_eq!(l.rule_count(), 3);
        l
    }

    #[test]
    fn first_sample_seeds_and_predicts_its_label() {
        let mut l = ParaFisLearner::new(3, 4, LearnerParams::default()).unwrap();
        let p = l.learn_sample(&[1.0, 2.0, 3.0], 3).unwrap();
        assert_eq!(p, 3);
        assert_eq!(l.rule_count(), 1);
        assert_eq!(l.anticipations.len(), 1);
    }

    #[test]
    fn unknown_class_is_rejected_unless_allowed() {
        let mut l = ParaFisLearner::new(1, 2, LearnerParams::default()).unwrap();
        assert!(matches!(
            l.learn_sample(&[0.0], 2),
            Err(Error::UnknownClass { .. })
        ));

        let params = LearnerParams {
            allow_new_classes: true,
            ..LearnerParams::default()
        };
        let mut l = ParaFisLearner::new(1, 2, params).unwrap();
        l.learn_sample(&[0.0], 0).unwrap();
        l.learn_sample(&[1.0], 3).unwrap();
        assert_eq!(l.principal.classes(), 4);
        assert_eq!(l.anticipations[0].slow.conclusion.consequent.classes(), 4);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut l = ParaFisLearner::new(2, 2, LearnerParams::default()).unwrap();
        assert!(matches!(
            l.learn_sample(&[0.0], 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = LearnerParams {
            tmax_slow: 10,
            tmax_fast: 10,
            ..LearnerParams::default()
        };
        assert!(ParaFisLearner::new(2, 2, p).is_err());
        let p = LearnerParams {
            ks: 0.0,
            ..LearnerParams::default()
        };
        assert!(ParaFisLearner::new(2, 2, p).is_err());
    }

    fn coefficients(l: &ParaFisLearner) -> Vec<crate::numerics::Matrix> {
        l.principal
            .rules
            .iter()
            .map(|r| r.consequent().coeffs.clone())
            .collect()
    }

    #[test]
    fn naive_keeps_other_conclusions() {
        let mut l = learner(Strategy::Naive);
        let before = coefficients(&l);
        let ids: Vec<_> = l.principal.rules.iter().map(|r| r.id).collect();
        let subs: [SubRule; 2] = [
            l.anticipations[1].slow.clone(),
            l.anticipations[1].fast.clone(),
        ];
        let other_am = l.anticipations[2].clone();
        l.replace(
            1,
            99,
            Separation {
                fired: true,
                ratio: 1.5,
                distance: 3.0,
                radius_slow: 1.0,
                radius_fast: 1.0,
            },
        );
        assert_eq!(l.rule_count(), 4);
        let after = coefficients(&l);
        assert_eq!(after[0], before[0]);
        assert_eq!(after[3], before[2]);
        assert_eq!(l.principal.rules[0].id, ids[0]);
        assert_eq!(l.principal.rules[3].id, ids[2]);
        assert_eq!(l.principal.rules[1].premise.center, subs[0].premise.center);
        assert_eq!(l.principal.rules[2].premise.center, subs[1].premise.center);
        assert_eq!(l.principal.rules[1].premise.tmax, None);
        assert_eq!(l.principal.rules[2].conclusion, subs[1].conclusion);
        assert_eq!(l.anticipations[3], other_am);
        assert_eq!(l.drift_log.len(), 1);
        assert_eq!(l.drift_log[0].rule_id, ids[1]);
        assert_eq!(l.anticipations.len(), 4);
    }

    #[test]
    fn global_swaps_in_slow_conclusions() {
        let mut l = learner(Strategy::Global);
        // let the anticipated systems of rules 0 and 2 learn something
        for k in 0..30 {
            let t = k as f64 * 0.1;
            l.learn_sample(&[t.sin() * 0.3, t.cos() * 0.3], k % 2)
                .unwrap();
        }
        let expected: Vec<_> = l
            .principal
            .rules
            .iter()
            .zip(&l.anticipations)
            .enumerate()
            .filter(|(j, _)| *j != 1)
            .map(|(_, (r, am))| (r.id, am.slow.conclusion.clone()))
            .collect();
        let n = l.rule_count();
        l.replace(
            1,
            0,
            Separation {
                fired: true,
                ratio: 2.0,
                distance: 1.0,
                radius_slow: 0.25,
                radius_fast: 0.25,
            },
        );
        assert_eq!(l.rule_count(), n + 1);
        for (id, conclusion) in &expected {
            let pos = l.principal.position(*id).unwrap();
            assert_eq!(&l.principal.rules[pos].conclusion, conclusion);
        }
        for (r, am) in l.principal.rules.iter().zip(&l.anticipations) {
            assert_eq!(am.parent, r.id);
            assert_eq!(am.samples_seen, 0);
        }
        for r in &l.principal.rules {
            assert!(r.conclusion.window_residual().unwrap() < 1e-6);
        }
    }

    #[test]
    fn untouched_anticipation_hands_back_spawn_copy() {
        let mut l = learner(Strategy::Global);
        let spawn_copy = l.anticipations[0].slow.conclusion.clone();
        l.replace_global(1);
        assert_eq!(l.principal.rules[0].conclusion, spawn_copy);
    }

    #[test]
    fn detection_disabled_with_infinite_ks() {
        let params = LearnerParams {
            ks: f64::INFINITY,
            ..LearnerParams::default()
        };
        let mut l = ParaFisLearner::new(1, 2, params).unwrap();
        for k in 0..400 {
            let x = if k < 200 { 0.0 } else { 50.0 } + (k as f64 * 0.7).sin();
            l.learn_sample(&[x], usize::from(k % 3 == 0)).unwrap();
        }
        assert!(l.drift_log.is_empty());
    }
}
