//! The normalized length curve `μₜ(r) = ‖((1−r)/a₁, r/a₂)‖ₜ` and the
//! quantities derived from it.
//!
//! For a factorization `(m, n)` of `x` with `r = n·a₂/x`, homogeneity gives
//! `‖(m, n)‖ₜ = x·μₜ(r)`, so everything about length sets at scale is read off
//! this one curve: its minimum, the point `r₀(t)` where it first returns to
//! `μₜ(1) = 1/a₂`, and the slope `P(t) = μₜ′(r₀(t))` there.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::norm::NormParameter;
use crate::roots::{bisect_secant, Bracket, RootError};
use crate::semigroup::NumericalSemigroup;

/// Absolute tolerance on `r` for curve roots.
pub const R_TOLERANCE: f64 = 1e-12;
/// Absolute tolerance on `t` when inverting `r₀`.
pub const T_TOLERANCE: f64 = 1e-10;
/// Margin used whenever `|P(t)|` is compared with `1/a₂`.
pub const CONDITION_MARGIN: f64 = 1e-9;

const TAYLOR_GRID: usize = 4096;
const MAX_T_DOUBLINGS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MuError {
    #[error("r must lie in [0, 1] (got {0})")]
    ROutOfRange(f64),
    #[error("r must lie in the open interval (0, 1) (got {0})")]
    ROutsideOpenInterval(f64),
    #[error("{op} needs a finite t > 1 (got {t})")]
    NeedsFiniteT { op: &'static str, t: NormParameter },
    #[error("r0(1) = 1 is degenerate")]
    DegenerateR0AtOne,
    #[error("level {level} is outside (min mu, 1/a1] = ({min}, {max}]")]
    LevelOutOfRange { level: f64, min: f64, max: f64 },
    #[error("{r} is outside the range of r0, ({lo}, {hi})")]
    OutsideR0Range { r: f64, lo: f64, hi: f64 },
    #[error("no t found with r0(t) below {r} up to t = {t_max}")]
    InverseBracket { r: f64, t_max: f64 },
    #[error("second derivative is unbounded on [0, 1] for t = {t} < 2")]
    UnboundedCurvature { t: f64 },
    #[error(transparent)]
    Root(#[from] RootError),
}

fn finite(t: NormParameter, op: &'static str) -> Result<f64, MuError> {
    t.as_finite().ok_or(MuError::NeedsFiniteT { op, t })
}

fn coords(s: &NumericalSemigroup, r: f64) -> (f64, f64) {
    ((1.0 - r) / s.a1() as f64, r / s.a2() as f64)
}

fn check_closed(r: f64) -> Result<(), MuError> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(MuError::ROutOfRange(r))
    }
}

/// `μₜ(r)`.
pub fn mu(s: &NumericalSemigroup, r: f64, t: NormParameter) -> Result<f64, MuError> {
    check_closed(r)?;
    let (u, v) = coords(s, r);
    Ok(t.norm2(u, v))
}

/// `μₜ′(r)`, with the one-sided limits `−1/a₁` and `1/a₂` at the endpoints.
///
/// Written as `−(u/μ)^(t−1)/a₁ + (v/μ)^(t−1)/a₂` with `u, v` the two
/// coordinates; both ratios are at most one, so large `t` is safe.
pub fn mu_prime(s: &NumericalSemigroup, r: f64, t: NormParameter) -> Result<f64, MuError> {
    let tv = finite(t, "mu_prime")?;
    check_closed(r)?;
    Ok(mu_prime_unchecked(s, r, tv))
}

fn mu_prime_unchecked(s: &NumericalSemigroup, r: f64, t: f64) -> f64 {
    let (u, v) = coords(s, r);
    let m = NormParameter::Finite(t).norm2(u, v);
    -(u / m).powf(t - 1.0) / s.a1() as f64 + (v / m).powf(t - 1.0) / s.a2() as f64
}

/// `μₜ″(r) = (t−1)(uv)^(t−2)(uᵗ+vᵗ)^(1/t−2) / (a₁a₂)²` on the open interval.
pub fn mu_second(s: &NumericalSemigroup, r: f64, t: NormParameter) -> Result<f64, MuError> {
    let tv = finite(t, "mu_second")?;
    if !(r > 0.0 && r < 1.0) {
        return Err(MuError::ROutsideOpenInterval(r));
    }
    Ok(mu_second_unchecked(s, r, tv))
}

// (uv)^(t-2) (u^t+v^t)^(1/t-2) regrouped as (u/μ)^(t-2) (v/μ)^(t-2) / μ³.
fn mu_second_unchecked(s: &NumericalSemigroup, r: f64, t: f64) -> f64 {
    let (u, v) = coords(s, r);
    let m = NormParameter::Finite(t).norm2(u, v);
    let p = (s.a1() * s.a2()) as f64;
    (t - 1.0) * (u / m).powf(t - 2.0) * (v / m).powf(t - 2.0) / (m * m * m * p * p)
}

/// The unique critical point of `μₜ`: `c·a₂/(a₁ + c·a₂)` with `c = (a₂/a₁)^(1/(t−1))`.
pub fn argmin_mu(s: &NumericalSemigroup, t: NormParameter) -> Result<f64, MuError> {
    let tv = finite(t, "argmin_mu")?;
    let (a1, a2) = (s.a1() as f64, s.a2() as f64);
    let c = ((a2 / a1).ln() / (tv - 1.0)).exp();
    Ok(1.0 / (1.0 + a1 / (c * a2)))
}

/// `min μₜ = 1/‖(a₁, a₂)‖_q` with `q` the Hölder conjugate of `t`.
pub fn min_mu(s: &NumericalSemigroup, t: NormParameter) -> Result<f64, MuError> {
    finite(t, "min_mu")?;
    Ok(1.0 / t.conjugate().norm2(s.a1() as f64, s.a2() as f64))
}

/// The unique `r ∈ [0, argmin)` with `μₜ(r) = level`, for `level ∈ (min μₜ, 1/a₁]`.
pub fn level_root(s: &NumericalSemigroup, t: NormParameter, level: f64) -> Result<f64, MuError> {
    let r_min = argmin_mu(s, t)?;
    let lo = min_mu(s, t)?;
    let hi = 1.0 / s.a1() as f64;
    if !(level > lo && level <= hi) {
        return Err(MuError::LevelOutOfRange { level, min: lo, max: hi });
    }
    if level == hi {
        return Ok(0.0);
    }
    let f = |r: f64| t.norm2((1.0 - r) / s.a1() as f64, r / s.a2() as f64) - level;
    Ok(bisect_secant(f, Bracket { lo: 0.0, hi: r_min }, R_TOLERANCE)?)
}

/// `r₀(t)`, the least `r` with `μₜ(r) = 1/a₂`.
///
/// For `t` so close to 1 that `min μₜ` rounds to `1/a₂`, the root and the
/// argmin agree to rounding and the argmin is returned.
pub fn r0_solve(s: &NumericalSemigroup, t: NormParameter) -> Result<f64, MuError> {
    match t {
        NormParameter::One => Err(MuError::DegenerateR0AtOne),
        NormParameter::Infinity => Ok((s.a2() - s.a1()) as f64 / s.a2() as f64),
        NormParameter::Finite(_) => {
            let level = 1.0 / s.a2() as f64;
            match level_root(s, t, level) {
                Err(MuError::LevelOutOfRange { min, .. }) if min >= level => argmin_mu(s, t),
                other => other,
            }
        }
    }
}

/// `P(t) = μₜ′(r₀(t))`; always negative.
pub fn p_of_t(s: &NumericalSemigroup, t: NormParameter) -> Result<f64, MuError> {
    let tv = finite(t, "p_of_t")?;
    Ok(mu_prime_unchecked(s, r0_solve(s, t)?, tv))
}

/// The open range `(r₀(∞), r₀(1)) = ((a₂−a₁)/a₂, 1)` of `r₀` on finite `t`.
pub fn r0_range(s: &NumericalSemigroup) -> (f64, f64) {
    ((s.a2() - s.a1()) as f64 / s.a2() as f64, 1.0)
}

/// The unique finite `t` with `r₀(t) = r`, by bisection on the strictly
/// decreasing map `t ↦ r₀(t)`.
pub fn inverse_r0(s: &NumericalSemigroup, r: f64) -> Result<f64, MuError> {
    let (lo, hi) = r0_range(s);
    if !(r > lo && r < hi) {
        return Err(MuError::OutsideR0Range { r, lo, hi });
    }
    let g = |t: f64| -> f64 {
        if t <= 1.0 {
            return 1.0 - r;
        }
        match r0_solve(s, NormParameter::Finite(t)) {
            Ok(r0) => r0 - r,
            Err(_) => f64::NAN,
        }
    };
    let mut t_hi = 2.0;
    let mut doublings = 0;
    while g(t_hi) >= 0.0 {
        doublings += 1;
        if doublings > MAX_T_DOUBLINGS {
            return Err(MuError::InverseBracket { r, t_max: t_hi });
        }
        t_hi *= 2.0;
    }
    Ok(bisect_secant(g, Bracket { lo: 1.0, hi: t_hi }, T_TOLERANCE)?)
}

/// Estimate of `sup |μₜ″| / 2` over `[0, 1]`, the constant in the
/// linearization error `|‖f‖ + δμₜ′ − ‖f + δ-trade‖| ≤ k·δ²/x`.
///
/// A 4096-interval grid locates the peak and a golden-section search refines
/// it. This is a numerical estimate, not a certified bound. For `t < 2` the
/// second derivative blows up at the endpoints and no finite constant exists.
pub fn taylor_k(s: &NumericalSemigroup, t: NormParameter) -> Result<f64, MuError> {
    let tv = finite(t, "taylor_k")?;
    if tv < 2.0 {
        return Err(MuError::UnboundedCurvature { t: tv });
    }
    let curvature = |r: f64| mu_second_unchecked(s, r, tv);
    let step = 1.0 / TAYLOR_GRID as f64;
    let (mut best_i, mut best) = (0usize, f64::NEG_INFINITY);
    for i in 0..=TAYLOR_GRID {
        let c = curvature(i as f64 * step);
        if c > best {
            best = c;
            best_i = i;
        }
    }
    let lo = best_i.saturating_sub(1) as f64 * step;
    let hi = ((best_i + 1).min(TAYLOR_GRID)) as f64 * step;
    let refined = golden_max(&curvature, lo, hi, 1e-14);
    Ok(best.max(refined) / 2.0)
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// True when `|P(t)|` exceeds `1/a₂` by more than [`CONDITION_MARGIN`].
pub fn steep_at_r0(s: &NumericalSemigroup, t: NormParameter) -> Result<bool, MuError> {
    Ok(p_of_t(s, t)?.abs() > 1.0 / s.a2() as f64 + CONDITION_MARGIN)
}

/// Smallest grid `t` from which `|P(t)| > 1/a₂` holds at every later grid
/// point, or `None` if it fails at the last one.
pub fn probe_t(s: &NumericalSemigroup, t_grid: &[f64]) -> Result<Option<f64>, MuError> {
    let mut threshold = None;
    for &tv in t_grid.iter().rev() {
        let t = NormParameter::finite(tv)
            .map_err(|_| MuError::NeedsFiniteT { op: "probe_t", t: NormParameter::Finite(tv) })?;
        if steep_at_r0(s, t)? {
            threshold = Some(tv);
        } else {
            break;
        }
    }
    Ok(threshold)
}

/// One evaluated point of the curve. Derivatives are `None` where undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuPoint {
    #[serde(with = "crate::real")]
    pub r: f64,
    #[serde(with = "crate::real")]
    pub mu: f64,
    #[serde(with = "crate::real::opt")]
    pub mu_prime: Option<f64>,
    #[serde(with = "crate::real::opt")]
    pub mu_second: Option<f64>,
}

pub fn mu_point(s: &NumericalSemigroup, r: f64, t: NormParameter) -> Result<MuPoint, MuError> {
    Ok(MuPoint { r, mu: mu(s, r, t)?, mu_prime: mu_prime(s, r, t).ok(), mu_second: mu_second(s, r, t).ok() })
}

/// Summary of `μₜ` for one finite `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveProfile {
    pub a1: u64,
    pub a2: u64,
    #[serde(with = "crate::real")]
    pub t: f64,
    #[serde(with = "crate::real")]
    pub r_min: f64,
    #[serde(with = "crate::real")]
    pub mu_min: f64,
    #[serde(with = "crate::real")]
    pub r0: f64,
    #[serde(rename = "P", with = "crate::real")]
    pub p: f64,
    /// `None` when the curvature is unbounded (`t < 2`).
    #[serde(with = "crate::real::opt")]
    pub k_t: Option<f64>,
}

pub fn profile(s: &NumericalSemigroup, t: NormParameter) -> Result<CurveProfile, MuError> {
    let tv = finite(t, "profile")?;
    let k_t = match taylor_k(s, t) {
        Ok(k) => Some(k),
        Err(MuError::UnboundedCurvature { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CurveProfile {
        a1: s.a1(),
        a2: s.a2(),
        t: tv,
        r_min: argmin_mu(s, t)?,
        mu_min: min_mu(s, t)?,
        r0: r0_solve(s, t)?,
        p: p_of_t(s, t)?,
        k_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a1: u64, a2: u64) -> NumericalSemigroup {
        NumericalSemigroup::new(a1, a2).unwrap()
    }

    fn ft(t: f64) -> NormParameter {
        NormParameter::finite(t).unwrap()
    }

    fn special(a1: f64, a2: f64) -> f64 {
        0.5f64.ln() / (a2 / (a1 + a2)).ln()
    }

    /// Oracle: plain bisection on a sign change, independent of the solver.
    fn plain_bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let up = f(hi) > f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == up {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Oracle: direct ((1-r)/a1)^t + (r/a2)^t)^(1/t) without scaling.
    fn naive_mu(a1: f64, a2: f64, r: f64, t: f64) -> f64 {
        (((1.0 - r) / a1).powf(t) + (r / a2).powf(t)).powf(1.0 / t)
    }

    #[test]
    fn endpoint_values() {
        let s27 = s(2, 7);
        for t in [NormParameter::One, ft(1.5), ft(2.0), ft(7.3), NormParameter::Infinity] {
            assert!((mu(&s27, 0.0, t).unwrap() - 0.5).abs() < 1e-15);
            assert!((mu(&s27, 1.0, t).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        }
        assert!((mu(&s27, 7.0 / 9.0, ft(special(2.0, 7.0))).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        assert_eq!(mu(&s27, 1.1, ft(2.0)), Err(MuError::ROutOfRange(1.1)));
    }

    #[test]
    fn mu_matches_naive_formula() {
        let s35 = s(3, 5);
        for &t in &[1.2, 2.0, 3.7, 9.0] {
            for i in 0..=20 {
                let r = i as f64 / 20.0;
                let a = mu(&s35, r, ft(t)).unwrap();
                let b = naive_mu(3.0, 5.0, r, t);
                assert!((a - b).abs() < 1e-14, "r={r} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn derivative_limits_at_endpoints() {
        let s27 = s(2, 7);
        assert!((mu_prime(&s27, 0.0, ft(2.0)).unwrap() + 0.5).abs() < 1e-15);
        assert!((mu_prime(&s27, 1.0, ft(2.0)).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        assert!((mu_prime(&s27, 1e-9, ft(2.0)).unwrap() + 0.5).abs() < 1e-6);
        assert!(matches!(mu_prime(&s27, 0.5, NormParameter::One), Err(MuError::NeedsFiniteT { .. })));
        assert!(matches!(mu_prime(&s27, 0.5, NormParameter::Infinity), Err(MuError::NeedsFiniteT { .. })));
    }

    #[test]
    fn second_derivative_matches_finite_difference() {
        let h = 1e-5;
        for (a1, a2, r, t) in [(2, 7, 0.5, 2.0), (2, 7, 0.9, 1.5), (3, 5, 0.3, 3.0)] {
            let sg = s(a1, a2);
            let got = mu_second(&sg, r, ft(t)).unwrap();
            let fd = (mu_prime(&sg, r + h, ft(t)).unwrap() - mu_prime(&sg, r - h, ft(t)).unwrap()) / (2.0 * h);
            assert!(got > 0.0);
            assert!(((got - fd) / fd).abs() < 1e-6, "({a1},{a2}) r={r} t={t}: {got} vs {fd}");
        }
        assert!(matches!(mu_second(&s(2, 7), 0.0, ft(2.0)), Err(MuError::ROutsideOpenInterval(_))));
    }

    #[test]
    fn argmin_examples() {
        let s27 = s(2, 7);
        let rm = argmin_mu(&s27, ft(2.0)).unwrap();
        assert!((rm - 24.5 / 26.5).abs() < 1e-15);
        assert!(mu_prime(&s27, rm, ft(2.0)).unwrap().abs() < 1e-10);
        let oracle = plain_bisect(|r| mu_prime(&s27, r, ft(2.0)).unwrap(), 0.01, 0.99);
        assert!((rm - oracle).abs() < 1e-10);
        assert!((mu(&s27, rm, ft(2.0)).unwrap() - 1.0 / 53f64.sqrt()).abs() < 1e-15);

        let s35 = s(3, 5);
        let rm = argmin_mu(&s35, ft(2.0)).unwrap();
        let oracle = plain_bisect(|r| mu_prime(&s35, r, ft(2.0)).unwrap(), 0.01, 0.99);
        assert!((rm - oracle).abs() < 1e-10);
    }

    #[test]
    fn argmin_is_critical_across_t() {
        for (a1, a2) in [(2, 7), (3, 5), (5, 11)] {
            let sg = s(a1, a2);
            for i in 0..40 {
                let t = ft(1.2 + 0.5 * i as f64);
                let rm = argmin_mu(&sg, t).unwrap();
                assert!(mu_prime(&sg, rm, t).unwrap().abs() < 1e-10, "({a1},{a2}) t={t}");
                assert!(rm > r0_solve(&sg, t).unwrap());
            }
        }
    }

    #[test]
    fn min_mu_matches_grid_minimum() {
        for (a1, a2, t) in [(2u64, 7u64, 2.0), (3, 5, 3.0), (2, 7, 5.5)] {
            let sg = s(a1, a2);
            let grid_min = (0..=200_000)
                .map(|i| naive_mu(a1 as f64, a2 as f64, i as f64 / 200_000.0, t))
                .fold(f64::INFINITY, f64::min);
            let m = min_mu(&sg, ft(t)).unwrap();
            assert!(m <= grid_min + 1e-15 && grid_min - m < 1e-10, "{m} vs {grid_min}");
        }
        assert!((min_mu(&s(2, 7), ft(2.0)).unwrap() - 0.1373606).abs() < 1e-7);
    }

    #[test]
    fn r0_examples() {
        let s27 = s(2, 7);
        assert_eq!(r0_solve(&s27, NormParameter::Infinity).unwrap(), 5.0 / 7.0);
        assert!((r0_solve(&s27, ft(2.0)).unwrap() - 45.0 / 53.0).abs() < 1e-12);
        assert!((r0_solve(&s27, ft(special(2.0, 7.0))).unwrap() - 7.0 / 9.0).abs() < 1e-9);
        assert_eq!(r0_solve(&s27, NormParameter::One), Err(MuError::DegenerateR0AtOne));
        // min μ rounds to 1/a2 here.
        let near_one = r0_solve(&s27, ft(1.01)).unwrap();
        assert!(near_one > 1.0 - 1e-12 && near_one <= 1.0);
        assert!(inverse_r0(&s27, r0_solve(&s27, ft(1.05)).unwrap()).is_ok());
    }

    #[test]
    fn p_examples() {
        let s27 = s(2, 7);
        let p = p_of_t(&s27, ft(special(2.0, 7.0))).unwrap();
        assert!((p + 0.2298).abs() < 5e-4, "{p}");
        // At r0 = 7/9 both coordinates equal 1/9, which makes P = -45/196 exactly.
        assert!((p + 45.0 / 196.0).abs() < 1e-12);
        assert!((p_of_t(&s27, ft(2.0)).unwrap().abs() - 1.0 / 7.0).abs() < 1e-9);
        assert!((p_of_t(&s(3, 5), ft(2.0)).unwrap().abs() - 1.0 / 5.0).abs() < 1e-9);
    }

    #[test]
    fn inverse_r0_examples() {
        let s27 = s(2, 7);
        let t = inverse_r0(&s27, 7.0 / 9.0).unwrap();
        assert!((t - special(2.0, 7.0)).abs() < 1e-8, "{t}");
        assert!((t - 2.758087489450394).abs() < 1e-8);
        assert!((inverse_r0(&s27, 45.0 / 53.0).unwrap() - 2.0).abs() < 1e-9);
        let r = 5.0 / 7.0 + 1e-6;
        let t = inverse_r0(&s27, r).unwrap();
        assert!(t > 10.0);
        assert!((r0_solve(&s27, ft(t)).unwrap() - r).abs() < 1e-9);
        assert!(matches!(inverse_r0(&s27, 0.5), Err(MuError::OutsideR0Range { .. })));
        assert!(matches!(inverse_r0(&s27, 1.0), Err(MuError::OutsideR0Range { .. })));
    }

    #[test]
    fn taylor_k_examples() {
        let s27 = s(2, 7);
        let k = taylor_k(&s27, ft(special(2.0, 7.0))).unwrap();
        assert!(k > 0.0 && k <= 1.5, "{k}");
        // t = 2: μ'' = μ^-3/(a1 a2)^2 peaks at the minimum, μ = 1/sqrt(53).
        let k2 = taylor_k(&s27, ft(2.0)).unwrap();
        assert!((k2 - 53f64.powf(1.5) / 196.0 / 2.0).abs() < 1e-9, "{k2}");
        assert!(taylor_k(&s(3, 5), ft(3.0)).unwrap() > 0.0);
        assert!(matches!(taylor_k(&s27, ft(1.5)), Err(MuError::UnboundedCurvature { .. })));
    }

    #[test]
    fn probe_examples() {
        let grid: Vec<f64> = (0..=890).map(|i| 1.1 + 0.01 * i as f64).collect();
        for sg in [s(2, 7), s(3, 5)] {
            let th = probe_t(&sg, &grid).unwrap().unwrap();
            assert!((th - 2.0).abs() <= 0.02, "{th}");
        }
        let low: Vec<f64> = (0..40).map(|i| 1.01 + 0.0125 * i as f64).collect();
        assert_eq!(probe_t(&s(2, 7), &low).unwrap(), None);
    }

    #[test]
    fn profile_bundles_consistent_values() {
        let s27 = s(2, 7);
        let p = profile(&s27, ft(3.0)).unwrap();
        assert!(0.0 < p.r0 && p.r0 < p.r_min && p.r_min < 1.0);
        assert!((p.mu_min - 1.0 / NormParameter::Finite(1.5).norm2(2.0, 7.0)).abs() < 1e-10);
        assert!(p.p < 0.0);
        assert!(p.k_t.is_some());
        assert_eq!(profile(&s27, ft(1.5)).unwrap().k_t, None);
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"P\":"));
        let back: CurveProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn mu_point_leaves_undefined_derivatives_empty() {
        let pt = mu_point(&s(2, 7), 1.0, ft(4.0)).unwrap();
        assert!((pt.mu - 1.0 / 7.0).abs() < 1e-15);
        assert!(pt.mu_prime.is_some());
        assert_eq!(pt.mu_second, None);
    }
}
