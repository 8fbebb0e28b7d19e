//! Factorizations, t-length sets and t-delta sets of elements of `⟨a₁, a₂⟩`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::norm::{IntegerNorm, NormParameter};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemigroupError {
    #[error("generators must satisfy 1 < a1 < a2 (got a1={a1}, a2={a2})")]
    Order { a1: u64, a2: u64 },
    #[error("generators {a1} and {a2} are not coprime")]
    NotCoprime { a1: u64, a2: u64 },
    #[error("{x} is not an element of <{a1},{a2}>")]
    NotInSemigroup { x: u64, a1: u64, a2: u64 },
    #[error("unimodal length ordering needs a finite t > 1 (got {0})")]
    NotStrictlyConvex(NormParameter),
}

/// A two-generator numerical semigroup `⟨a₁, a₂⟩` with `1 < a₁ < a₂` coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GeneratorPair", into = "GeneratorPair")]
pub struct NumericalSemigroup {
    a1: u64,
    a2: u64,
    /// `a₂⁻¹ mod a₁`, the step that solves `n·a₂ ≡ x (mod a₁)`.
    a2_inv: u64,
}

#[derive(Serialize, Deserialize)]
struct GeneratorPair {
    a1: u64,
    a2: u64,
}

impl TryFrom<GeneratorPair> for NumericalSemigroup {
    type Error = SemigroupError;
    fn try_from(p: GeneratorPair) -> Result<Self, Self::Error> {
        Self::new(p.a1, p.a2)
    }
}

impl From<NumericalSemigroup> for GeneratorPair {
    fn from(s: NumericalSemigroup) -> Self {
        GeneratorPair { a1: s.a1, a2: s.a2 }
    }
}

impl NumericalSemigroup {
    pub fn new(a1: u64, a2: u64) -> Result<Self, SemigroupError> {
        if !(1 < a1 && a1 < a2) {
            return Err(SemigroupError::Order { a1, a2 });
        }
        let eg = (a2 as i128).extended_gcd(&(a1 as i128));
        if eg.gcd != 1 {
            return Err(SemigroupError::NotCoprime { a1, a2 });
        }
        // eg.x * a2 + eg.y * a1 = 1, so eg.x is an inverse of a2 modulo a1.
        let a2_inv = eg.x.rem_euclid(a1 as i128) as u64;
        Ok(Self { a1, a2, a2_inv })
    }

    pub fn a1(&self) -> u64 {
        self.a1
    }

    pub fn a2(&self) -> u64 {
        self.a2
    }

    /// `a₁·a₂`, the size of one trade in the `r`-numerator.
    pub fn product(&self) -> u64 {
        self.a1 * self.a2
    }

    /// Smallest `n ≥ 0` with `n·a₂ ≡ x (mod a₁)`; `x ∈ S` iff `n·a₂ ≤ x`.
    fn least_a2_count(&self, x: u64) -> u64 {
        ((x % self.a1) as u128 * self.a2_inv as u128 % self.a1 as u128) as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        self.least_a2_count(x).saturating_mul(self.a2) <= x
    }

    /// Iterates the factorizations of `x` in ascending `n`.
    pub fn factorizations_iter(&self, x: u64) -> Factorizations {
        let n = self.least_a2_count(x);
        Factorizations { semigroup: *self, x, n }
    }

    /// All `(m, n)` with `m·a₁ + n·a₂ = x`, ordered by ascending `n`.
    pub fn factorizations(&self, x: u64) -> Vec<Factorization> {
        self.factorizations_iter(x).collect()
    }

    /// `|Z(x)|` without enumerating.
    pub fn factorization_count(&self, x: u64) -> u64 {
        let n0 = self.least_a2_count(x);
        match x.checked_sub(n0 * self.a2) {
            Some(rest) => rest / self.product() + 1,
            None => 0,
        }
    }

    /// Sorted distinct t-norms of the factorizations of `x`.
    pub fn length_set(&self, x: u64, t: NormParameter) -> Result<LengthSet, SemigroupError> {
        let facts = self.nonempty_factorizations(x)?;
        let norm = IntegerNorm::new(t);
        let mut entries: Vec<LengthEntry> =
            facts.into_iter().map(|f| LengthEntry { length: norm.length(f.m, f.n), factorization: f }).collect();
        entries.sort_by(|a, b| a.length.total_cmp(&b.length));
        entries.dedup_by(|b, a| a.length == b.length);
        Ok(LengthSet { x, t, entries })
    }

    /// Same result as [`length_set`](Self::length_set) for `t ∈ (1, ∞)`,
    /// ordered by merging the two monotone runs on either side of the minimum
    /// instead of sorting.
    pub fn sorted_lengths_unimodal(&self, x: u64, t: NormParameter) -> Result<LengthSet, SemigroupError> {
        if t.as_finite().is_none() {
            return Err(SemigroupError::NotStrictlyConvex(t));
        }
        let facts = self.nonempty_factorizations(x)?;
        let norm = IntegerNorm::new(t);
        let lengths: Vec<f64> = facts.iter().map(|f| norm.length(f.m, f.n)).collect();
        let mut order = Vec::with_capacity(lengths.len());
        unimodal_order(&lengths, &mut order);
        let entries = order
            .into_iter()
            .map(|i| LengthEntry { length: lengths[i as usize], factorization: facts[i as usize] })
            .collect();
        Ok(LengthSet { x, t, entries })
    }

    /// Consecutive gaps of the t-length set of `x`.
    pub fn delta_set_of_element(&self, x: u64, t: NormParameter) -> Result<Vec<GapRecord>, SemigroupError> {
        Ok(self.length_set(x, t)?.gaps())
    }

    fn nonempty_factorizations(&self, x: u64) -> Result<Vec<Factorization>, SemigroupError> {
        let facts = self.factorizations(x);
        if facts.is_empty() {
            return Err(SemigroupError::NotInSemigroup { x, a1: self.a1, a2: self.a2 });
        }
        Ok(facts)
    }
}

/// Iterator over `Z(x)` in ascending `n`: one congruence solve, then steps of `a₁`.
#[derive(Debug, Clone)]
pub struct Factorizations {
    semigroup: NumericalSemigroup,
    x: u64,
    n: u64,
}

impl Iterator for Factorizations {
    type Item = Factorization;

    fn next(&mut self) -> Option<Factorization> {
        let used = self.n.checked_mul(self.semigroup.a2)?;
        let rest = self.x.checked_sub(used)?;
        let f = Factorization { m: rest / self.semigroup.a1, n: self.n };
        self.n += self.semigroup.a1;
        Some(f)
    }
}

/// Writes into `order` the indices of `lengths` in ascending length, dropping
/// exact duplicates.
///
/// `lengths` must come from factorizations in ascending `n`, which makes them
/// strictly decreasing and then strictly increasing. The two runs meeting at
/// the minimum are merged in linear time; if rounding ever breaks the shape,
/// the result falls back to a full sort.
pub fn unimodal_order(lengths: &[f64], order: &mut Vec<u32>) {
    order.clear();
    if lengths.is_empty() {
        return;
    }
    let mut min_idx = 0;
    for (i, &l) in lengths.iter().enumerate() {
        if l < lengths[min_idx] {
            min_idx = i;
        }
    }
    // Left run walks down toward n = 0 (increasing lengths), right run walks up.
    let mut left = min_idx as isize;
    let mut right = min_idx + 1;
    while left >= 0 || right < lengths.len() {
        let take_left = if left < 0 {
            false
        } else if right >= lengths.len() {
            true
        } else {
            lengths[left as usize] <= lengths[right]
        };
        let idx = if take_left {
            left -= 1;
            (left + 1) as usize
        } else {
            right += 1;
            right - 1
        };
        match order.last() {
            Some(&prev) if lengths[prev as usize] == lengths[idx] => {}
            _ => order.push(idx as u32),
        }
    }
    if order.windows(2).any(|w| lengths[w[0] as usize] > lengths[w[1] as usize]) {
        order.clear();
        order.extend(0..lengths.len() as u32);
        order.sort_by(|&a, &b| lengths[a as usize].total_cmp(&lengths[b as usize]).then(a.cmp(&b)));
        order.dedup_by(|b, a| lengths[*a as usize] == lengths[*b as usize]);
    }
}

/// A factorization `m·a₁ + n·a₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factorization {
    pub m: u64,
    pub n: u64,
}

impl Factorization {
    pub fn element(&self, s: &NumericalSemigroup) -> u64 {
        self.m * s.a1() + self.n * s.a2()
    }

    /// The exact `r`-parameter `n·a₂ / x`, or `None` for the zero factorization.
    pub fn r_param(&self, s: &NumericalSemigroup) -> Option<RParam> {
        let den = self.element(s);
        (den > 0).then(|| RParam { num: self.n * s.a2(), den })
    }
}

/// The unreduced rational `n·a₂ / x ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RParam {
    pub num: u64,
    pub den: u64,
}

impl RParam {
    pub fn reduced(&self) -> (u64, u64) {
        let g = self.num.gcd(&self.den);
        (self.num / g, self.den / g)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthEntry {
    #[serde(with = "crate::real")]
    pub length: f64,
    pub factorization: Factorization,
}

/// The t-length set of one element, strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSet {
    pub x: u64,
    pub t: NormParameter,
    pub entries: Vec<LengthEntry>,
}

impl LengthSet {
    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.length)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.entries.first().map(|e| e.length)
    }

    pub fn max(&self) -> Option<f64> {
        self.entries.last().map(|e| e.length)
    }

    pub fn gaps(&self) -> Vec<GapRecord> {
        self.entries.windows(2).map(|w| GapRecord::new(self.x, w[0].length, w[1].length)).collect()
    }
}

/// One gap between consecutive lengths of an element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub x: u64,
    #[serde(with = "crate::real")]
    pub lo: f64,
    #[serde(with = "crate::real")]
    pub hi: f64,
    #[serde(with = "crate::real")]
    pub gap: f64,
}

impl GapRecord {
    pub fn new(x: u64, lo: f64, hi: f64) -> Self {
        Self { x, lo, hi, gap: hi - lo }
    }
}
