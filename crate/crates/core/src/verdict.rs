use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// One checked relation `lhs <relation> rhs` with exact operands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Verdict {
    pub fn le(name: impl Into<String>, lhs: &BigRational, rhs: &BigRational) -> Self {
        Verdict {
            name: name.into(),
            passed: lhs <= rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    pub fn le_int(name: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Verdict {
            name: name.into(),
            passed: lhs <= rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    pub fn eq<T: PartialEq + fmt::Display>(name: impl Into<String>, lhs: T, rhs: T) -> Self {
        Verdict {
            name: name.into(),
            passed: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    /// A condition without numeric operands.
    pub fn holds(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            passed,
            lhs: detail.into(),
            rhs: String::new(),
        }
    }
}

pub fn all_passed(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.passed)
}
