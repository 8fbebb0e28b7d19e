//! Certificates that a norm parameter is perspicacious.
//!
//! When `r₀(t) = M/N` is rational and `|a₁a₂P(t)| > a₁`, every gap of
//! `𝓛ₜ(x)` for large `x` is either below `a₁ + ε`, above `|a₁a₂P| − ε`, or
//! within `2ε` of a point of
//!
//! ```text
//! Λ = { λ₁·|P|/N + λ₂/a₂ : λ₁, λ₂ ≥ 0 }.
//! ```
//!
//! Picking `d` in a gap of `Λ` inside `(a₁, |a₁a₂P|)` and `ε` a quarter of its
//! clearance gives an open window `(d−ε, d+ε)` that no `Δₜ(x)` with
//! `x ≥ x₀ = ⌈k·(a₁a₂)²/ε⌉` can meet. Checking the finitely many `x < x₀` by
//! brute force (see [`crate::scan::verify_certificate`]) then shows `d` is not
//! a limit point of `Δₜ(S)`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mu::{self, MuError, CONDITION_MARGIN};
use crate::norm::NormParameter;
use crate::semigroup::{NumericalSemigroup, SemigroupError};

/// Maximum distance between a witness `M/N` and the solved `r₀(t)`.
pub const WITNESS_TOLERANCE: f64 = 1e-9;
/// Points of `Λ` closer than this are treated as one.
pub const LAMBDA_DEDUP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error("|a1 a2 P(t)| = {steepness} does not exceed a1 = {a1}")]
    ConditionFailed { steepness: f64, a1: u64 },
    #[error("interval ({lo}, {hi}) is empty")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("invalid r0 witness: {0}")]
    WitnessInvalid(String),
    #[error(transparent)]
    Mu(#[from] MuError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// A claimed rational value `M/N` (lowest terms) of `r₀(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalR0Witness {
    pub num: u64,
    pub den: u64,
    #[serde(with = "crate::real")]
    pub t: f64,
}

impl RationalR0Witness {
    /// Checks lowest terms, `0 < M/N < 1`, and `|r₀(t) − M/N| < 1e−9`.
    pub fn new(s: &NumericalSemigroup, num: u64, den: u64, t: f64) -> Result<Self, CertificateError> {
        let w = Self { num, den, t };
        w.check(s, t)?;
        Ok(w)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Validates this witness as `r₀(t)` for `S`.
    pub fn check(&self, s: &NumericalSemigroup, t: f64) -> Result<(), CertificateError> {
        let (num, den) = (self.num, self.den);
        if num == 0 || num >= den {
            return Err(CertificateError::WitnessInvalid(format!("{num}/{den} is not in (0, 1)")));
        }
        if num.gcd(&den) != 1 {
            return Err(CertificateError::WitnessInvalid(format!("{num}/{den} is not in lowest terms")));
        }
        let t = NormParameter::finite(t).map_err(|e| CertificateError::WitnessInvalid(e.to_string()))?;
        let r0 = mu::r0_solve(s, t)?;
        if (r0 - self.value()).abs() >= WITNESS_TOLERANCE {
            return Err(CertificateError::WitnessInvalid(format!("r0({t}) = {r0} differs from {num}/{den}")));
        }
        Ok(())
    }
}

/// Parses `"M/N"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s.split_once('/').ok_or_else(|| format!("expected M/N, got {s:?}"))?;
        let num = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let den: u64 = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if den == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Self { num, den })
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `t = log_{a₂/(a₁+a₂)}(1/2)`, at which `r₀(t) = a₂/(a₁+a₂)`.
///
/// At that `r` both coordinates of the curve equal `1/(a₁+a₂)`, so `μₜ = 1/a₂`
/// reduces to `2^(1/t) = (a₁+a₂)/a₂`.
pub fn special_t(s: &NumericalSemigroup) -> Result<(f64, RationalR0Witness), CertificateError> {
    let (a1, a2) = (s.a1(), s.a2());
    let g = a2.gcd(&(a1 + a2));
    let (num, den) = (a2 / g, (a1 + a2) / g);
    let t = 0.5f64.ln() / (num as f64 / den as f64).ln();
    let w = RationalR0Witness::new(s, num, den, t)?;
    Ok((t, w))
}

fn steepness(s: &NumericalSemigroup, p: f64) -> f64 {
    (s.product() as f64 * p).abs()
}

fn require_steep(s: &NumericalSemigroup, p: f64) -> Result<f64, CertificateError> {
    let hi = steepness(s, p);
    if p.abs() <= 1.0 / s.a2() as f64 + CONDITION_MARGIN {
        return Err(CertificateError::ConditionFailed { steepness: hi, a1: s.a1() });
    }
    Ok(hi)
}

/// Points `λ₁·|P|/N + λ₂/a₂` in `[lo − 1, hi + 1]`, ascending, deduplicated.
///
/// Uses the magnitude `|P|`, so both terms are nonnegative and bounding each by
/// `hi + 1` makes the enumeration finite.
pub fn lambda_points(
    s: &NumericalSemigroup,
    t: NormParameter,
    witness: &RationalR0Witness,
    interval: (f64, f64),
) -> Result<Vec<f64>, CertificateError> {
    let p = mu::p_of_t(s, t)?;
    let (lo, hi) = interval;
    if p.abs() <= 1.0 / s.a2() as f64 + CONDITION_MARGIN || hi <= lo {
        return Err(CertificateError::EmptyInterval { lo, hi });
    }
    Ok(enumerate_lambda(p.abs() / witness.den as f64, 1.0 / s.a2() as f64, lo, hi))
}

fn enumerate_lambda(step1: f64, step2: f64, lo: f64, hi: f64) -> Vec<f64> {
    let cap = hi + 1.0;
    let mut pts = Vec::new();
    let mut l1 = 0u64;
    while l1 as f64 * step1 <= cap {
        let base = l1 as f64 * step1;
        let mut l2 = 0u64;
        while l2 as f64 * step2 <= cap {
            let v = base + l2 as f64 * step2;
            if v >= lo - 1.0 && v <= cap {
                pts.push(v);
            }
            l2 += 1;
        }
        l1 += 1;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|b, a| *b - *a <= LAMBDA_DEDUP);
    pts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Unverified,
    Verified,
    Refuted,
}

/// A perspicacity certificate. Field names are the JSON schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub a1: u64,
    pub a2: u64,
    #[serde(with = "crate::real")]
    pub t: f64,
    pub r0_num: u64,
    pub r0_den: u64,
    #[serde(rename = "P", with = "crate::real")]
    pub p: f64,
    #[serde(with = "crate::real")]
    pub k_t: f64,
    #[serde(with = "crate::real")]
    pub interval_lo: f64,
    #[serde(with = "crate::real")]
    pub interval_hi: f64,
    #[serde(with = "crate::real")]
    pub lambda_gap_lo: f64,
    #[serde(with = "crate::real")]
    pub lambda_gap_hi: f64,
    #[serde(with = "crate::real")]
    pub d: f64,
    #[serde(with = "crate::real")]
    pub epsilon: f64,
    pub x0: u64,
    pub status: CertificateStatus,
}

impl Certificate {
    pub fn semigroup(&self) -> Result<NumericalSemigroup, SemigroupError> {
        NumericalSemigroup::new(self.a1, self.a2)
    }

    /// The excluded window `(d − ε, d + ε)`.
    pub fn window(&self) -> (f64, f64) {
        (self.d - self.epsilon, self.d + self.epsilon)
    }

    pub fn with_status(self, status: CertificateStatus) -> Self {
        Self { status, ..self }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate fields are finite")
    }
}

/// Builds an unverified certificate for `t` with rational `r₀(t)`.
///
/// The gap of `{a₁} ∪ (Λ ∩ (a₁, |a₁a₂P|)) ∪ {|a₁a₂P|}` with the largest width
/// is used, `d` is its midpoint. Widths within [`LAMBDA_DEDUP`] count as ties,
/// broken toward the gap farthest from both ends of the interval (then the
/// lowest), since finite-`x` gaps crowd the ends at `a₁` and `|a₁a₂P|`.
pub fn build_certificate(
    s: &NumericalSemigroup,
    t: NormParameter,
    witness: &RationalR0Witness,
    k_override: Option<f64>,
) -> Result<Certificate, CertificateError> {
    let tv = t.as_finite().ok_or(MuError::NeedsFiniteT { op: "build_certificate", t })?;
    let p = mu::p_of_t(s, t)?;
    let hi = require_steep(s, p)?;
    witness.check(s, tv)?;
    let lo = s.a1() as f64;

    let pts = lambda_points(s, t, witness, (lo, hi))?;
    let mut cuts = Vec::with_capacity(pts.len() + 2);
    cuts.push(lo);
    cuts.extend(pts.iter().copied().filter(|&v| v > lo && v < hi));
    cuts.push(hi);

    let (mut best_lo, mut best_hi) = (cuts[0], cuts[1]);
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (width, best_width) = (b - a, best_hi - best_lo);
        let clearance = |x: f64, y: f64| {
            let mid = 0.5 * (x + y);
            (mid - lo).min(hi - mid)
        };
        if width > best_width + LAMBDA_DEDUP
            || ((width - best_width).abs() <= LAMBDA_DEDUP
                && clearance(a, b) > clearance(best_lo, best_hi) + LAMBDA_DEDUP)
        {
            best_lo = a;
            best_hi = b;
        }
    }

    let d = 0.5 * (best_lo + best_hi);
    let nearest = pts.iter().map(|&v| (v - d).abs()).fold(f64::INFINITY, f64::min);
    let epsilon = 0.25 * (d - lo).min(hi - d).min(nearest);
    let k_t = match k_override {
        Some(k) => k,
        None => mu::taylor_k(s, t)?,
    };
    let p2 = (s.product() * s.product()) as f64;
    let x0 = (k_t * p2 / epsilon).ceil() as u64;

    Ok(Certificate {
        a1: s.a1(),
        a2: s.a2(),
        t: tv,
        r0_num: witness.num,
        r0_den: witness.den,
        p,
        k_t,
        interval_lo: lo,
        interval_hi: hi,
        lambda_gap_lo: best_lo,
        lambda_gap_hi: best_hi,
        d,
        epsilon,
        x0,
        status: CertificateStatus::Unverified,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    CertifiedPerspicacious,
    ConditionFails,
    Unknown,
}

/// Classifies `t` against `{t : |P(t)| > 1/a₂, r₀(t) ∈ ℚ}`.
///
/// Rationality cannot be read off a float, so without a valid witness a `t`
/// that passes the slope condition stays [`Classification::Unknown`].
pub fn classify_t(s: &NumericalSemigroup, t: NormParameter, witness: Option<&RationalR0Witness>) -> Classification {
    let Ok(p) = mu::p_of_t(s, t) else {
        return Classification::Unknown;
    };
    if p.abs() <= 1.0 / s.a2() as f64 + CONDITION_MARGIN {
        return Classification::ConditionFails;
    }
    match witness {
        Some(w) if w.check(s, t.value()).is_ok() => Classification::CertifiedPerspicacious,
        _ => Classification::Unknown,
    }
}
