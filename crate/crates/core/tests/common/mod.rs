//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the crate's enumeration or solver code.
#![allow(dead_code)]

/// All (m, n) with m·a1 + n·a2 = x, by trying every n.
pub fn brute_factorizations(a1: u64, a2: u64, x: u64) -> Vec<(u64, u64)> {
    (0..=x / a2).filter(|n| (x - n * a2).is_multiple_of(a1)).map(|n| ((x - n * a2) / a1, n)).collect()
}

/// `(m^t + n^t)^(1/t)` with plain `powf`, the naive formula.
pub fn naive_norm(m: u64, n: u64, t: f64) -> f64 {
    ((m as f64).powf(t) + (n as f64).powf(t)).powf(1.0 / t)
}

/// Distinct lengths of x, fully sorted.
pub fn naive_lengths(a1: u64, a2: u64, x: u64, norm: impl Fn(u64, u64) -> f64) -> Vec<f64> {
    let mut v: Vec<f64> = brute_factorizations(a1, a2, x).into_iter().map(|(m, n)| norm(m, n)).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Consecutive differences of `naive_lengths`, as (lo, hi, gap).
pub fn naive_gaps(a1: u64, a2: u64, x: u64, norm: impl Fn(u64, u64) -> f64) -> Vec<(f64, f64, f64)> {
    naive_lengths(a1, a2, x, norm).windows(2).map(|w| (w[0], w[1], w[1] - w[0])).collect()
}

/// μ from the definition with no rescaling.
pub fn naive_mu(a1: u64, a2: u64, r: f64, t: f64) -> f64 {
    (((1.0 - r) / a1 as f64).powf(t) + (r / a2 as f64).powf(t)).powf(1.0 / t)
}

/// Plain bisection for a decreasing-then-whatever function crossing `level`
/// on [lo, hi] with f(lo) > level > f(hi).
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, level: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// r₀ by bisection on the naive μ over [0, argmin], argmin from a fine grid.
pub fn oracle_r0(a1: u64, a2: u64, t: f64) -> f64 {
    let steps = 200_000;
    let (mut best, mut arg) = (f64::INFINITY, 0.0);
    for i in 0..=steps {
        let r = i as f64 / steps as f64;
        let v = naive_mu(a1, a2, r, t);
        if v < best {
            best = v;
            arg = r;
        }
    }
    bisect(|r| naive_mu(a1, a2, r, t), 0.0, arg, 1.0 / a2 as f64)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
