use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which value of `N = h0(O(1,...,1)) - 1` to use on `(P^1)^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NMode {
    /// `N = 2n + 1`.
    Paper,
    /// `N = 2^{2n} - 1`, from the Kunneth count of sections.
    Kunneth,
}

impl NMode {
    pub fn value(self, n: u64) -> Result<u64> {
        match self {
            NMode::Paper => n
                .checked_mul(2)
                .and_then(|x| x.checked_add(1))
                .ok_or_else(|| Error::input("n too large")),
            NMode::Kunneth => {
                if n > 31 {
                    return Err(Error::input("n too large for the Kunneth count"));
                }
                Ok((1u64 << (2 * n)) - 1)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum ExistenceQuery {
    /// Monads `O(-1)^a -> O^b -> O(1)^c` on `P^k`.
    Floystad { k: u64, a: u64, b: u64, c: u64 },
    /// Monads `O(-1,..,-1)^alpha -> O^beta -> O(1,..,1)^gamma` on `(P^1)^{2n}`.
    P1Power { n: u64, alpha: u64, beta: u64, gamma: u64, mode: NMode },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// `b >= 2c + k - 1` and `b >= a + c`.
    One,
    /// `b >= a + c + k`.
    Two,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::One => write!(f, "rule 1"),
            Rule::Two => write!(f, "rule 2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceVerdict {
    pub exists: bool,
    /// The rule that holds; rule 2 is cited when both do.
    pub rule: Option<Rule>,
    /// The dimension-like parameter the inequalities were evaluated with.
    pub dimension: u64,
}

impl fmt::Display for ExistenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Some(r) => write!(f, "exists: {} ({r})", self.exists),
            None => write!(f, "exists: {}", self.exists),
        }
    }
}

fn decide(dim: u64, a: u64, b: u64, c: u64) -> ExistenceVerdict {
    let (dim, a, b, c) = (dim as u128, a as u128, b as u128, c as u128);
    let rule1 = b + 1 >= 2 * c + dim && b >= a + c;
    let rule2 = b >= a + c + dim;
    let rule = if rule2 {
        Some(Rule::Two)
    } else if rule1 {
        Some(Rule::One)
    } else {
        None
    };
    ExistenceVerdict { exists: rule.is_some(), rule, dimension: dim as u64 }
}

pub fn existence_conditions(q: &ExistenceQuery) -> Result<ExistenceVerdict> {
    match *q {
        ExistenceQuery::Floystad { k, a, b, c } => {
            if [k, a, b, c].contains(&0) {
                return Err(Error::input("parameters k, a, b, c must be positive"));
            }
            Ok(decide(k, a, b, c))
        }
        ExistenceQuery::P1Power { n, alpha, beta, gamma, mode } => {
            if [n, alpha, beta, gamma].contains(&0) {
                return Err(Error::input("parameters n, alpha, beta, gamma must be positive"));
            }
            Ok(decide(mode.value(n)?, alpha, beta, gamma))
        }
    }
}
