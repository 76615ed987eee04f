//! Symplectic Kodaira dimension and small degree bounds.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::InvariantError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: i64) -> Self {
        match x.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct KodairaInput {
    pub k_dot_omega_sign: Sign,
    pub k_squared: i64,
    pub minimal: bool,
}

/// Ordered with `-∞` below everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaDim {
    NegInfinity,
    Zero,
    One,
    Two,
}

impl KodairaDim {
    pub fn finite(self) -> Option<i64> {
        match self {
            KodairaDim::NegInfinity => None,
            KodairaDim::Zero => Some(0),
            KodairaDim::One => Some(1),
            KodairaDim::Two => Some(2),
        }
    }
}

impl fmt::Display for KodairaDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite() {
            None => f.write_str("-inf"),
            Some(k) => write!(f, "{k}"),
        }
    }
}

impl Serialize for KodairaDim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn kodaira_dimension(inp: KodairaInput) -> Result<KodairaDim, InvariantError> {
    if !inp.minimal {
        return Err(InvariantError::NotMinimal);
    }
    Ok(match inp.k_dot_omega_sign {
        Sign::Negative => KodairaDim::NegInfinity,
        Sign::Zero => KodairaDim::Zero,
        Sign::Positive if inp.k_squared == 0 => KodairaDim::One,
        Sign::Positive if inp.k_squared > 0 => KodairaDim::Two,
        Sign::Positive => return Err(InvariantError::InconsistentInput(inp.k_squared)),
    })
}

/// Kodaira dimension of a closed surface; `K·ω` has the sign of `2g - 2`.
pub fn curve_kodaira(genus: usize) -> KodairaDim {
    match genus {
        0 => KodairaDim::NegInfinity,
        1 => KodairaDim::Zero,
        _ => KodairaDim::One,
    }
}

/// `k(M) >= k(F) + k(Σ)` with `-∞ + x = -∞`.
pub fn subadditivity_holds(k_total: KodairaDim, k_fiber: KodairaDim, k_base: KodairaDim) -> bool {
    match (k_fiber.finite(), k_base.finite()) {
        (Some(a), Some(b)) => k_total.finite().is_some_and(|k| k >= a + b),
        _ => true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeBound {
    Bounded(u64),
    Unbounded,
}

/// Largest degree of a map from a genus `g_dom` surface onto a genus `g_cod`
/// surface allowed by `g_dom - 1 >= d (g_cod - 1)`.
pub fn kneser_max_degree(g_dom: usize, g_cod: usize) -> Result<DegreeBound, InvariantError> {
    match g_cod {
        0 => Err(InvariantError::InvalidCodomain),
        1 => Ok(DegreeBound::Unbounded),
        _ => Ok(DegreeBound::Bounded((g_dom.saturating_sub(1) / (g_cod - 1)) as u64)),
    }
}
