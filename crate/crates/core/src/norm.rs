//! The norm parameter `t` and ℓᵗ norms of nonnegative pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("norm parameter must be 1, a finite real greater than 1, or infinity (got {0})")]
    OutOfRange(f64),
    #[error("cannot parse norm parameter from {0:?}")]
    Parse(String),
}

/// A norm parameter `t ∈ [1, ∞]`.
///
/// The endpoints are symbolic so that `t = 1` and `t = ∞` use the exact sum
/// and max rather than a limit of powers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "NormParameterRepr", try_from = "NormParameterRepr")]
pub enum NormParameter {
    One,
    Finite(f64),
    Infinity,
}

impl NormParameter {
    /// A finite `t > 1`.
    pub fn finite(t: f64) -> Result<Self, NormError> {
        if t.is_finite() && t > 1.0 {
            Ok(Self::Finite(t))
        } else {
            Err(NormError::OutOfRange(t))
        }
    }

    /// Maps `1.0` to [`NormParameter::One`], `+∞` to [`NormParameter::Infinity`]
    /// and anything greater than one to a finite parameter.
    pub fn from_f64(t: f64) -> Result<Self, NormError> {
        if t == 1.0 {
            Ok(Self::One)
        } else if t == f64::INFINITY {
            Ok(Self::Infinity)
        } else {
            Self::finite(t)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Finite(t) => t,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// The finite value, or `None` at a symbolic endpoint.
    pub fn as_finite(self) -> Option<f64> {
        match self {
            Self::Finite(t) => Some(t),
            _ => None,
        }
    }

    /// The Hölder conjugate `t/(t-1)`.
    pub fn conjugate(self) -> NormParameter {
        match self {
            Self::One => Self::Infinity,
            Self::Infinity => Self::One,
            Self::Finite(t) => Self::Finite(t / (t - 1.0)),
        }
    }

    /// ℓᵗ norm of a nonnegative real pair.
    ///
    /// The larger coordinate is factored out before exponentiation, so large
    /// `t` neither overflows nor underflows.
    pub fn norm2(self, u: f64, v: f64) -> f64 {
        match self {
            Self::One => u + v,
            Self::Infinity => u.max(v),
            Self::Finite(t) => {
                let (hi, lo) = if u >= v { (u, v) } else { (v, u) };
                if hi == 0.0 {
                    return 0.0;
                }
                let ratio = lo / hi;
                hi * ((ratio.powf(t)).ln_1p() / t).exp()
            }
        }
    }
}

impl fmt::Display for NormParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => write!(f, "1"),
            Self::Finite(t) => write!(f, "{t}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for NormParameter {
    type Err = NormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Self::Infinity),
            other => {
                let t: f64 = other.parse().map_err(|_| NormError::Parse(s.to_string()))?;
                Self::from_f64(t)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NormParameterRepr {
    Number(#[serde(with = "crate::real")] f64),
    Symbol(String),
}

impl From<NormParameter> for NormParameterRepr {
    fn from(t: NormParameter) -> Self {
        match t {
            NormParameter::Infinity => Self::Symbol("inf".into()),
            other => Self::Number(other.value()),
        }
    }
}

impl TryFrom<NormParameterRepr> for NormParameter {
    type Error = NormError;

    fn try_from(r: NormParameterRepr) -> Result<Self, Self::Error> {
        match r {
            NormParameterRepr::Number(t) => Self::from_f64(t),
            NormParameterRepr::Symbol(s) => s.parse(),
        }
    }
}

/// Largest coordinate for which `k^t` computed directly stays comfortably
/// inside the `f64` range (`k^t < e^700`).
pub(crate) fn power_safe_limit(t: f64) -> u64 {
    let lim = (700.0 / t).exp();
    if lim >= u64::MAX as f64 {
        u64::MAX
    } else {
        lim as u64
    }
}

/// ℓᵗ norm of an integer factorization `(m, n)`.
///
/// Every length in the crate goes through this type, so the scan's cached
/// powers and the direct evaluation produce bit-identical results: pairs whose
/// larger entry is below [`power_safe_limit`] use `(mᵗ + nᵗ)^(1/t)` with
/// `powf`, larger pairs use the scaled form of [`NormParameter::norm2`].
#[derive(Debug, Clone, Copy)]
pub struct IntegerNorm {
    t: NormParameter,
    inv_t: f64,
    safe_limit: u64,
}

impl IntegerNorm {
    pub fn new(t: NormParameter) -> Self {
        let (inv_t, safe_limit) = match t {
            NormParameter::Finite(t) => (1.0 / t, power_safe_limit(t)),
            _ => (1.0, u64::MAX),
        };
        Self { t, inv_t, safe_limit }
    }

    pub fn parameter(&self) -> NormParameter {
        self.t
    }

    /// `k^t` as used by [`IntegerNorm::length`]; the scan caches these.
    #[inline]
    pub fn power(&self, k: u64) -> f64 {
        (k as f64).powf(self.t.value())
    }

    #[inline]
    pub fn is_power_safe(&self, k: u64) -> bool {
        k <= self.safe_limit
    }

    /// Root of a power sum produced by [`IntegerNorm::power`].
    #[inline]
    pub fn root(&self, power_sum: f64) -> f64 {
        power_sum.powf(self.inv_t)
    }

    #[inline]
    pub fn length(&self, m: u64, n: u64) -> f64 {
        match self.t {
            NormParameter::One => (m + n) as f64,
            NormParameter::Infinity => m.max(n) as f64,
            NormParameter::Finite(_) => {
                if self.is_power_safe(m.max(n)) {
                    self.root(self.power(m) + self.power(n))
                } else {
                    self.t.norm2(m as f64, n as f64)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_sum_and_max() {
        assert_eq!(NormParameter::One.norm2(3.0, 4.0), 7.0);
        assert_eq!(NormParameter::Infinity.norm2(3.0, 4.0), 4.0);
        let two = NormParameter::finite(2.0).unwrap();
        assert!((two.norm2(3.0, 4.0) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn scaled_form_survives_large_t() {
        let t = NormParameter::finite(800.0).unwrap();
        let v = t.norm2(3.0, 4.0);
        assert!(v.is_finite());
        assert!((v - 4.0).abs() < 1e-12);
        let big = IntegerNorm::new(t);
        assert!(!big.is_power_safe(10));
        assert!((big.length(300_000, 3) - 300_000.0).abs() < 1e-9);
        assert!((big.length(300_000, 299_999) / 300_259.542_731_215_1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_parameters_below_one() {
        assert!(NormParameter::finite(1.0).is_err());
        assert!(NormParameter::from_f64(0.5).is_err());
        assert!(NormParameter::from_f64(f64::NAN).is_err());
        assert_eq!(NormParameter::from_f64(1.0), Ok(NormParameter::One));
        assert_eq!("inf".parse::<NormParameter>(), Ok(NormParameter::Infinity));
        assert_eq!("2.5".parse::<NormParameter>(), Ok(NormParameter::Finite(2.5)));
        assert!("abc".parse::<NormParameter>().is_err());
    }

    #[test]
    fn conjugate_of_two_is_two() {
        assert_eq!(NormParameter::Finite(2.0).conjugate(), NormParameter::Finite(2.0));
        assert_eq!(NormParameter::One.conjugate(), NormParameter::Infinity);
    }

    #[test]
    fn serde_uses_numbers_and_inf() {
        let s = serde_json::to_string(&NormParameter::Finite(2.5)).unwrap();
        assert_eq!(s, "2.5000000000000000");
        let back: NormParameter = serde_json::from_str(&s).unwrap();
        assert_eq!(back, NormParameter::Finite(2.5));
        let inf: NormParameter = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(inf, NormParameter::Infinity);
    }
}
