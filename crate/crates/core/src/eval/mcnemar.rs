use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `K` above this is a significant difference.
pub const SIGNIFICANT: f64 = 6.63;
/// `K` below this is no difference.
pub const NOT_SIGNIFICANT: f64 = 2.7;
/// Fewer discordant pairs than this make the test unreliable.
pub const MIN_DISCORDANT: u64 = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Plus,
    Approx,
    Minus,
}

impl Verdict {
    pub fn from_statistic(k: f64) -> Self {
        if k > SIGNIFICANT {
            Verdict::Plus
        } else if k >= NOT_SIGNIFICANT {
            Verdict::Approx
        } else {
            Verdict::Minus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Plus => "+",
            Verdict::Approx => "≈",
            Verdict::Minus => "−",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McNemarOutcome {
    /// Samples the first classifier gets wrong and the second gets right.
    pub n01: u64,
    /// Samples the first classifier gets right and the second gets wrong.
    pub n10: u64,
    pub k: f64,
    pub verdict: Verdict,
    pub low_contingency: bool,
}

impl McNemarOutcome {
    pub fn from_counts(n01: u64, n10: u64) -> Self {
        let discordant = n01 + n10;
        let k = if discordant == 0 {
            0.0
        } else {
            let diff = n10 as f64 - n01 as f64;
            diff * diff / discordant as f64
        };
        Self {
            n01,
            n10,
            k,
            verdict: Verdict::from_statistic(k),
            low_contingency: discordant < MIN_DISCORDANT,
        }
    }
}

/// Table-style cell: `"5.00 ≈ (x)"`.
impl fmt::Display for McNemarOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2} {}", self.k, self.verdict)?;
        if self.low_contingency {
            f.write_str(" (x)")?;
        }
        Ok(())
    }
}

pub fn mcnemar(preds_a: &[usize], preds_b: &[usize], truth: &[usize]) -> Result<McNemarOutcome> {
    if preds_a.len() != truth.len() {
        return Err(Error::LengthMismatch(preds_a.len(), truth.len()));
    }
    if preds_b.len() != truth.len() {
        return Err(Error::LengthMismatch(preds_b.len(), truth.len()));
    }
    let (mut n01, mut n10) = (0u64, 0u64);
    for ((a, b), y) in preds_a.iter().zip(preds_b).zip(truth) {
        match (a == y, b == y) {
            (false, true) => n01 += 1,
            (true, false) => n10 += 1,
            _ => {}
        }
    }
    Ok(McNemarOutcome::from_counts(n01, n10))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_triple() {
        let o = McNemarOutcome::from_counts(5, 15);
        assert_eq!(o.k, 5.0);
        assert_eq!(o.verdict, Verdict::Approx);
        assert!(o.low_contingency);
        assert_eq!(o.to_string(), "5.00 ≈ (x)");
    }

    #[test]
    fn one_sided_thirty() {
        let o = McNemarOutcome::from_counts(0, 30);
        assert_eq!(o.k, 30.0);
        assert_eq!(o.verdict, Verdict::Plus);
        assert!(!o.low_contingency);
    }

    #[test]
    fn identical_predictions() {
        let p = [0, 1, 1, 0];
        let o = mcnemar(&p, &p, &[1, 1, 0, 0]).unwrap();
        assert_eq!((o.n01, o.n10, o.k), (0, 0, 0.0));
        assert_eq!(o.verdict, Verdict::Minus);
    }

    #[test]
    fn thresholds_are_inclusive_for_approx() {
        assert_eq!(Verdict::from_statistic(2.7), Verdict::Approx);
        assert_eq!(Verdict::from_statistic(6.63), Verdict::Approx);
        assert_eq!(Verdict::from_statistic(6.6300001), Verdict::Plus);
        assert_eq!(Verdict::from_statistic(2.6999), Verdict::Minus);
    }

    #[test]
    fn counts_from_predictions() {
        let truth = [0, 0, 0, 1];
        let a = [0, 1, 1, 1];
        let b = [1, 0, 0, 1];
        let o = mcnemar(&a, &b, &truth).unwrap();
        assert_eq!((o.n01, o.n10), (2, 1));
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            mcnemar(&[0, 1], &[0], &[0, 1]),
            Err(Error::LengthMismatch(1, 2))
        ));
    }
}
