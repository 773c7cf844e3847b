//! Exact coefficients: integers or rationals, never floats.
//!
//! Both rings are carried by `Ratio<i128>`; the run-wide [`CoeffMode`] decides
//! whether denominators other than 1 are admitted by parsers and solvers.
//! Values serialize as decimal strings ("-3") or reduced fractions ("2/5").

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::ChainError;

/// Exact coefficient. Always stored in reduced form with positive denominator.
pub type Coeff = Ratio<i128>;

/// Run-wide coefficient ring selector.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CoeffMode {
    Int,
    Rat,
}

impl CoeffMode {
    pub fn parse(s: &str) -> Result<Self, ChainError> {
        match s {
            "int" => Ok(CoeffMode::Int),
            "rat" => Ok(CoeffMode::Rat),
            other => Err(ChainError::BadCoefficient(format!(
                "unknown coefficient mode '{other}' (expected 'int' or 'rat')"
            ))),
        }
    }
}

impl std::fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoeffMode::Int => "int",
            CoeffMode::Rat => "rat",
        })
    }
}

pub fn int(n: i128) -> Coeff {
    Ratio::from_integer(n)
}

pub fn rat(num: i128, den: i128) -> Coeff {
    Ratio::new(num, den)
}

pub fn abs(c: &Coeff) -> Coeff {
    c.abs()
}

/// Canonical text form: plain integer when the denominator is 1, else "p/q".
pub fn format_coeff(c: &Coeff) -> String {
    if c.denom() == &1 {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parses "p" or "p/q". In `Int` mode any residual denominator is rejected.
pub fn parse_coeff(s: &str, mode: CoeffMode) -> Result<Coeff, ChainError> {
    let bad = |m: &str| ChainError::BadCoefficient(format!("'{s}': {m}"));
    let c = match s.split_once('/') {
        None => {
            let n: i128 = s.trim().parse().map_err(|_| bad("not an integer"))?;
            Ratio::from_integer(n)
        }
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad("bad numerator"))?;
            let q: i128 = q.trim().parse().map_err(|_| bad("bad denominator"))?;
            if q == 0 {
                return Err(bad("zero denominator"));
            }
            Ratio::new(p, q)
        }
    };
    if mode == CoeffMode::Int && c.denom() != &1 {
        return Err(bad("fractional coefficient in integer mode"));
    }
    Ok(c)
}

pub fn is_zero(c: &Coeff) -> bool {
    c.is_zero()
}
