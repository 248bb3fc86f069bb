use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::fis::{one_hot, AugmentedInput, Consequent, Premise};
use crate::forgetting::DdfConsequent;
use crate::numerics::{Matrix, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RuleId(pub u64);

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub id: RuleId,
    pub premise: Premise,
    pub conclusion: DdfConsequent,
}

impl Rule {
    pub fn membership(&self, x: &Vector) -> Result<f64> {
        self.premise.membership(x)
    }

    pub fn consequent(&self) -> &Consequent {
        &self.conclusion.consequent
    }
}

/// Builds a rule centred on `x` with covariance `σ²·I` and an untrained
/// conclusion `Π = 0`, `C = Ω·I`.
pub fn create_rule(
    id: RuleId,
    x: &Vector,
    classes: usize,
    sigma_init: f64,
    omega: f64,
    tmax: Option<u64>,
    window: usize,
) -> Result<Rule> {
    let d = x.len();
    let premise = Premise::new(
        x.clone(),
        Matrix::identity(d, d) * (sigma_init * sigma_init),
        1,
        tmax,
    )?;
    Ok(Rule {
        id,
        premise,
        conclusion: DdfConsequent::new(Consequent::new(d, classes, omega), window),
    })
}

/// Which membership weights the conclusions are learned with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WrlsWeight {
    #[default]
    Normalized,
    Raw,
}

impl WrlsWeight {
    /// Turns raw memberships into learning weights, in place.
    pub fn apply(self, memberships: &mut [f64]) {
        if self == WrlsWeight::Normalized {
            normalize(memberships);
        }
    }
}

/// How conclusions absorb a new point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConclusionUpdate {
    /// WRLS with unbounded memory.
    Plain,
    /// WRLS plus windowed downdate of the correlation matrix.
    Windowed,
}

impl ConclusionUpdate {
    pub fn apply(
        self,
        conclusion: &mut DdfConsequent,
        x_aug: &AugmentedInput,
        w: f64,
        target: &Vector,
    ) -> Result<()> {
        match self {
            ConclusionUpdate::Plain => conclusion.wrls_update(x_aug, w, target),
            ConclusionUpdate::Windowed => conclusion.ddf_update(x_aug, w, target),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub sigma_init: f64,
    pub omega: f64,
    /// DDF window capacity for every rule conclusion.
    pub window: usize,
    pub wrls_weight: WrlsWeight,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            sigma_init: 1.0,
            omega: crate::fis::DEFAULT_OMEGA,
            window: 50,
            wrls_weight: WrlsWeight::Normalized,
        }
    }
}

/// What one learning step did to the rule base.
#[derive(Clone, Debug, PartialEq)]
pub enum StepKind {
    /// A rule was created for a not yet covered class, at this index.
    Born { index: usize },
    /// The rule at `winner` had the highest membership and moved its premise.
    /// `memberships` are the raw activations before the update.
    Updated {
        winner: usize,
        memberships: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub prediction: usize,
    pub kind: StepKind,
}

/// First-order Takagi-Sugeno classifier with one elliptical premise per rule.
///
/// Rule birth: the system starts empty and the first sample of each class
/// that has no rule yet creates one. Afterwards only the most activated rule
/// moves its premise, while every rule's conclusion learns from every sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzySystem {
    dim: usize,
    classes: usize,
    pub params: SystemParams,
    pub rules: Vec<Rule>,
    seeded: Vec<bool>,
    next_id: u64,
}

impl FuzzySystem {
    pub fn new(dim: usize, classes: usize, params: SystemParams) -> Result<Self> {
        if dim == 0 || classes == 0 {
            return Err(Error::InvalidParameter(
                "dimension and class count must be positive".into(),
            ));
        }
        if params.window == 0 {
            return Err(Error::InvalidParameter(
                "window size must be positive".into(),
            ));
        }
        if [params.sigma_init, params.omega]
            .iter()
            .any(|v| v.is_nan() || *v <= 0.0)
        {
            return Err(Error::InvalidParameter(
                "sigma_init and omega must be positive".into(),
            ));
        }
        Ok(Self {
            dim,
            classes,
            params,
            rules: Vec::new(),
            seeded: vec![false; classes],
            next_id: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn fresh_id(&mut self) -> RuleId {
        let id = RuleId(self.next_id);
        self.next_id += 1;
        id
    }

    pub fn position(&self, id: RuleId) -> Option<usize> {
        self.rules.iter().position(|r| r.id == id)
    }

    pub fn memberships(&self, x: &Vector) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        if self.rules.is_empty() {
            return Err(Error::EmptySystem);
        }
        self.rules.iter().map(|r| r.membership(x)).collect()
    }

    pub fn normalized_memberships(&self, x: &Vector) -> Result<Vec<f64>> {
        let mut beta = self.memberships(x)?;
        normalize(&mut beta);
        Ok(beta)
    }

    /// `y^j = Σ_i β̄_i(x) · x_augᵀ Π_i^j`.
    pub fn predict_scores(&self, x: &Vector) -> Result<Vec<f64>> {
        let beta = self.normalized_memberships(x)?;
        let x_aug = AugmentedInput::new(x);
        let mut scores = Vector::zeros(self.classes);
        for (rule, b) in self.rules.iter().zip(&beta) {
            scores.axpy(*b, &rule.consequent().outputs(&x_aug), 1.0);
        }
        Ok(scores.as_slice().to_vec())
    }

    pub fn predict_class(&self, x: &Vector) -> Result<usize> {
        Ok(argmax(&self.predict_scores(x)?))
    }

    pub fn is_seeded(&self, class: usize) -> bool {
        self.seeded.get(class).copied().unwrap_or(false)
    }

    /// Appends a class; every conclusion gets a zero column.
    pub fn add_class(&mut self) {
        self.classes += 1;
        self.seeded.push(false);
        for r in &mut self.rules {
            r.conclusion.consequent.add_class();
        }
    }

    /// One test-then-train step: predicts `x`, then learns `(x, y)`.
    pub fn learn(&mut self, x: &Vector, y: usize, update: ConclusionUpdate) -> Result<Step> {
        check_dim(self.dim, x.len())?;
        if y >= self.classes {
            return Err(Error::UnknownClass {
                label: y,
                classes: self.classes,
            });
        }
        let prediction = if self.rules.is_empty() {
            y
        } else {
            self.predict_class(x)?
        };
        let x_aug = AugmentedInput::new(x);
        let target = one_hot(y, self.classes);

        if !self.seeded[y] {
            self.seeded[y] = true;
            let id = self.fresh_id();
            let rule = create_rule(
                id,
                x,
                self.classes,
                self.params.sigma_init,
                self.params.omega,
                None,
                self.params.window,
            )?;
            self.rules.push(rule);
            let mut weights = self.memberships(x)?;
            self.params.wrls_weight.apply(&mut weights);
            for (rule, w) in self.rules.iter_mut().zip(&weights) {
                update.apply(&mut rule.conclusion, &x_aug, *w, &target)?;
            }
            return Ok(Step {
                prediction,
                kind: StepKind::Born {
                    index: self.rules.len() - 1,
                },
            });
        }

        let memberships = self.memberships(x)?;
        let winner = argmax(&memberships);
        let mut weights = memberships.clone();
        self.params.wrls_weight.apply(&mut weights);
        self.rules[winner].premise.update(x)?;
        for (rule, w) in self.rules.iter_mut().zip(&weights) {
            update.apply(&mut rule.conclusion, &x_aug, *w, &target)?;
        }
        Ok(Step {
            prediction,
            kind: StepKind::Updated {
                winner,
                memberships,
            },
        })
    }
}

/// Scales non-negative weights to sum to one. A zero total (every membership
/// underflowed) falls back to uniform weights.
pub fn normalize(weights: &mut [f64]) {
    let total: f64 = weights.iter().sum();
    if total > 0.0 && total.is_finite() {
        for w in weights.iter_mut() {
            *w /= total;
        }
    } else if !weights.is_empty() {
        let u = 1.0 / weights.len() as f64;
        weights.iter_mut().for_each(|w| *w = u);
    }
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
