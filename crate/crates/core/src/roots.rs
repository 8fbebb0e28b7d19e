//! Bracketed scalar root finding: bisection down to a tolerance, then a
//! secant polish that is only accepted if it stays inside the bracket.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}] (f(lo)={f_lo}, f(hi)={f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("function returned NaN at {x}")]
    NotANumber { x: f64 },
}

const MAX_BISECTIONS: usize = 400;

/// Root of `f` inside `bracket` to absolute tolerance `tol` in `x`.
pub fn bisect_secant<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<f64, RootError> {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if f_lo.is_nan() {
        return Err(RootError::NotANumber { x: lo });
    }
    if f_hi.is_nan() {
        return Err(RootError::NotANumber { x: hi });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(RootError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let mut f_hi = f_hi;

    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.is_nan() {
            return Err(RootError::NotANumber { x: mid });
        }
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    let mid = lo + 0.5 * (hi - lo);
    let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if secant.is_finite() && secant >= lo && secant <= hi && f(secant).abs() <= f(mid).abs() {
        Ok(secant)
    } else {
        Ok(mid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect_secant(|x| x * x - 2.0, Bracket { lo: 0.0, hi: 2.0 }, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn decreasing_functions_work() {
        let r = bisect_secant(|x| 1.0 - x, Bracket { lo: 0.0, hi: 3.0 }, 1e-12).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reports_missing_sign_change() {
        let e = bisect_secant(|x| x * x + 1.0, Bracket { lo: -1.0, hi: 1.0 }, 1e-12).unwrap_err();
        assert!(matches!(e, RootError::NoSignChange { .. }));
    }
}
