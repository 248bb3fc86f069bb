//! Evolving first-order Takagi-Sugeno fuzzy classification for drifting data
//! streams.
//!
//! The principal classifier ([`fis::FuzzySystem`]) learns without any
//! forgetting. Next to it, an anticipation module keeps, for every rule, a
//! pair of shadow sub-rules that forget at two different speeds; their
//! conclusions are learned with deferred directional forgetting
//! ([`forgetting`]). When the two sub-rules of a rule drift apart, the rule is
//! split and conclusions are swapped in from the anticipation module
//! ([`anticipation`]).
//!
//! [`streams`] provides synthetic drifting streams and CSV ingestion, and
//! [`eval`] runs the periodic hold-out protocol and McNemar comparisons.

pub mod anticipation;
pub mod error;
pub mod eval;
pub mod fis;
pub mod forgetting;
pub mod learner;
pub mod numerics;
pub mod serde_ext;
pub mod snapshot;
pub mod streams;

pub use anticipation::{
    AnticipatedSystem, DriftEvent, ForgettingMode, LearnerParams, ParaFisLearner, Strategy,
};
pub use error::{Error, Result};
pub use fis::{FuzzySystem, RuleId};
pub use learner::OnlineClassifier;
