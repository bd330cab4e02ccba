//! Real step functions on `[0, 1]` with exact rational breakpoints.
//!
//! Breakpoints live in [`Q`], so interval lengths, level-set masses and
//! rearrangements are exact in the measure coordinate. Values are doubles;
//! equality predicates on values use [`VALUE_TOL`].

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q_add, q_sub, q_to_f64, q_vec_string, Param, Q};

/// Absolute tolerance for comparing step-function values.
pub const VALUE_TOL: f64 = 1e-12;

/// A step function `sum_i v_i * chi_[b_{i-1}, b_i)` on `[0, 1]`, the last
/// interval closed at 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFnRepr", into = "StepFnRepr")]
pub struct StepFn {
    breakpoints: Vec<Q>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct StepFnRepr {
    #[serde(with = "q_vec_string")]
    breakpoints: Vec<Q>,
    values: Vec<f64>,
}

impl TryFrom<StepFnRepr> for StepFn {
    type Error = Error;

    fn try_from(r: StepFnRepr) -> Result<Self> {
        StepFn::new(r.breakpoints, r.values)
    }
}

impl From<StepFn> for StepFnRepr {
    fn from(f: StepFn) -> Self {
        StepFnRepr {
            breakpoints: f.breakpoints,
            values: f.values,
        }
    }
}

impl StepFn {
    pub fn new(breakpoints: Vec<Q>, values: Vec<f64>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidStepFn(msg));
        if breakpoints.len() < 2 {
            return bad("need at least two breakpoints".into());
        }
        if values.len() + 1 != breakpoints.len() {
            return bad(format!(
                "{} breakpoints require {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            ));
        }
        if !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
            return bad("breakpoints must start at 0 and end at 1".into());
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must be strictly increasing".into());
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return bad(format!("non-finite value {v}"));
        }
        Ok(StepFn { breakpoints, values })
    }

    pub fn constant(value: f64) -> Self {
        StepFn::new(vec![Q::zero(), Q::one()], vec![value]).expect("finite constant")
    }

    /// Values on the uniform partition `k/n`, `n = values.len()`.
    pub fn uniform(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidStepFn("no values".into()));
        }
        let breakpoints = (0..=n).map(|k| Q::new(k as i64, n as i64)).collect();
        StepFn::new(breakpoints, values.to_vec())
    }

    /// The indicator of `[a, b)`.
    pub fn indicator(a: Q, b: Q) -> Result<Self> {
        if !(Q::zero() <= a && a < b && b <= Q::one()) {
            return Err(Error::Domain(format!("indicator needs 0 <= a < b <= 1, got [{a}, {b})")));
        }
        let mut bps = vec![Q::zero()];
        let mut vals = Vec::new();
        if a > Q::zero() {
            bps.push(a);
            vals.push(0.0);
        }
        vals.push(1.0);
        if b < Q::one() {
            bps.push(b);
            vals.push(0.0);
        }
        bps.push(Q::one());
        StepFn::new(bps, vals)
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of intervals.
    pub fn pieces(&self) -> usize {
        self.values.len()
    }

    /// `(left, right, value)` for each interval.
    pub fn intervals(&self) -> impl Iterator<Item = (Q, Q, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// Exact interval lengths.
    pub fn lengths(&self) -> Result<Vec<Q>> {
        self.breakpoints
            .windows(2)
            .map(|w| q_sub(w[1], w[0]))
            .collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return self.values[self.values.len() - 1];
        }
        let idx = self.breakpoints[1..]
            .partition_point(|b| q_to_f64(*b) <= x)
            .min(self.values.len() - 1);
        self.values[idx]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<StepFn> {
        StepFn::new(self.breakpoints.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn abs(&self) -> StepFn {
        StepFn {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn integral(&self) -> Result<f64> {
        Ok(self
            .lengths()?
            .into_iter()
            .zip(&self.values)
            .map(|(len, v)| q_to_f64(len) * v)
            .sum())
    }

    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0] + tol)
    }

    /// Merges adjacent intervals whose values agree within `tol`.
    pub fn coalesce(&self, tol: f64) -> StepFn {
        let mut bps = vec![self.breakpoints[0]];
        let mut vals: Vec<f64> = Vec::new();
        for (_, right, v) in self.intervals() {
            match vals.last() {
                Some(&last) if (last - v).abs() <= tol => {
                    *bps.last_mut().unwrap() = right;
                }
                _ => {
                    vals.push(v);
                    bps.push(right);
                }
            }
        }
        StepFn {
            breakpoints: bps,
            values: vals,
        }
    }

    /// Re-expresses `self` on the merged breakpoint set `bps`, which must
    /// contain every breakpoint of `self`.
    fn on_breakpoints(&self, bps: &[Q]) -> StepFn {
        let mut values = Vec::with_capacity(bps.len() - 1);
        let mut j = 0;
        for w in bps.windows(2) {
            while self.breakpoints[j + 1] <= w[0] {
                j += 1;
            }
            values.push(self.values[j]);
        }
        StepFn {
            breakpoints: bps.to_vec(),
            values,
        }
    }

    /// Values on the uniform `n`-partition, if every breakpoint is a
    /// multiple of `1/n`.
    pub fn uniform_values(&self, n: usize) -> Option<Vec<f64>> {
        let n_i = n as i64;
        if self
            .breakpoints
            .iter()
            .any(|b| (*b * Q::from_integer(n_i)).denom() != &1)
        {
            return None;
        }
        let grid: Vec<Q> = (0..=n_i).map(|k| Q::new(k, n_i)).collect();
        Some(self.on_breakpoints(&grid).values)
    }

    /// Number of intervals if the breakpoints are exactly the uniform
    /// partition `k/n`.
    pub fn uniform_partition_size(&self) -> Option<usize> {
        let n = self.pieces();
        let uniform = self
            .breakpoints
            .iter()
            .enumerate()
            .all(|(k, b)| *b == Q::new(k as i64, n as i64));
        uniform.then_some(n)
    }
}

/// Both functions on the union of their breakpoints.
pub fn refine(f: &StepFn, g: &StepFn) -> (StepFn, StepFn) {
    let mut bps: Vec<Q> = f.breakpoints.iter().chain(&g.breakpoints).copied().collect();
    bps.sort();
    bps.dedup();
    (f.on_breakpoints(&bps), g.on_breakpoints(&bps))
}

/// The nonincreasing rearrangement `f*`.
///
/// Level sets are regrouped exactly; values within [`VALUE_TOL`] of a level's
/// first (largest) value join that level.
pub fn rearrange(f: &StepFn) -> Result<StepFn> {
    let mut pieces: Vec<(f64, Q)> = f.values.iter().copied().zip(f.lengths()?).collect();
    pieces.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut levels: Vec<(f64, Q)> = Vec::new();
    for (v, len) in pieces {
        match levels.last_mut() {
            Some((lv, total)) if (*lv - v).abs() <= VALUE_TOL => *total = q_add(*total, len)?,
            _ => levels.push((v, len)),
        }
    }

    let mut bps = Vec::with_capacity(levels.len() + 1);
    let mut acc = Q::zero();
    bps.push(acc);
    for (_, len) in &levels {
        acc = q_add(acc, *len)?;
        bps.push(acc);
    }
    debug_assert!(acc.is_one());
    StepFn::new(bps, levels.into_iter().map(|(v, _)| v).collect())
}

/// True iff `f` and `g` have the same nonincreasing rearrangement.
pub fn equimeasurable(f: &StepFn, g: &StepFn) -> Result<bool> {
    let (fr, gr) = refine(&rearrange(f)?, &rearrange(g)?);
    Ok(fr
        .values
        .iter()
        .zip(&gr.values)
        .all(|(a, b)| (a - b).abs() <= VALUE_TOL))
}

/// `int_0^1 f g`.
pub fn pairing(f: &StepFn, g: &StepFn) -> Result<f64> {
    let (fr, gr) = refine(f, g);
    Ok(fr
        .lengths()?
        .into_iter()
        .zip(fr.values.iter().zip(&gr.values))
        .map(|(len, (a, b))| q_to_f64(len) * a * b)
        .sum())
}

/// `int_0^t f` for `0 < t <= 1`.
pub fn partial_integral(f: &StepFn, t: impl Into<Param>) -> Result<f64> {
    let t = t.into();
    if t.cmp_q(Q::zero()) != Ordering::Greater || t.cmp_q(Q::one()) == Ordering::Greater {
        return Err(Error::Domain(format!("partial integral needs 0 < t <= 1, got {t}")));
    }
    let mut acc = 0.0;
    for (left, right, v) in f.intervals() {
        if t.cmp_q(right) != Ordering::Less {
            acc += q_to_f64(q_sub(right, left)?) * v;
            if t.cmp_q(right) == Ordering::Equal {
                break;
            }
        } else {
            let partial = match t {
                Param::Exact(tq) => q_to_f64(q_sub(tq, left)?),
                Param::Real(tr) => tr - q_to_f64(left),
            };
            acc += partial * v;
            break;
        }
    }
    Ok(acc)
}

/// A weight function: nonincreasing and nonnegative. [`WeightFn::new`]
/// also requires mean at most 1; deserialization does not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFn", into = "StepFn")]
pub struct WeightFn {
    inner: StepFn,
}

impl TryFrom<StepFn> for WeightFn {
    type Error = Error;

    fn try_from(f: StepFn) -> Result<Self> {
        WeightFn::general(f)
    }
}

impl From<WeightFn> for StepFn {
    fn from(w: WeightFn) -> Self {
        w.inner
    }
}

impl WeightFn {
    pub fn new(inner: StepFn) -> Result<Self> {
        let w = WeightFn::general(inner)?;
        let mean = w.inner.integral()?;
        if mean > 1.0 + VALUE_TOL {
            return Err(Error::InvalidWeight(format!("mean {mean} exceeds 1")));
        }
        Ok(w)
    }

    /// A nonincreasing nonnegative weight without the mean bound. Sums by
    /// parts and sup-combinations of such weights are still gauge norms.
    pub fn general(inner: StepFn) -> Result<Self> {
        if inner.min_value() < 0.0 {
            return Err(Error::InvalidWeight("negative value".into()));
        }
        if !inner.is_nonincreasing(VALUE_TOL) {
            return Err(Error::InvalidWeight("values must be nonincreasing".into()));
        }
        Ok(WeightFn { inner })
    }

    /// `a_1 >= ... >= a_n >= 0` on the uniform `n`-partition.
    pub fn uniform(values: &[f64]) -> Result<Self> {
        WeightFn::new(StepFn::uniform(values)?)
    }

    /// True when the mean is at most 1.
    pub fn in_family(&self) -> bool {
        self.mean() <= 1.0 + VALUE_TOL
    }

    pub fn step(&self) -> &StepFn {
        &self.inner
    }

    pub fn mean(&self) -> f64 {
        self.inner.integral().expect("validated on construction")
    }
}
