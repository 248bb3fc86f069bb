//! Takagi-Sugeno inference: premises, conclusions and the rule base.

mod consequent;
mod premise;
mod system;

pub use consequent::{one_hot, AugmentedInput, Consequent, DEFAULT_OMEGA};
pub use premise::Premise;
pub use system::{
    argmax, create_rule, normalize, ConclusionUpdate, FuzzySystem, Rule, RuleId, Step, StepKind,
    SystemParams, WrlsWeight,
};
