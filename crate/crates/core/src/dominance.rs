//! Ky Fan dominance of s-number profiles and its transfer to every tracial
//! gauge norm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{s_numbers, CMatrix, SNumbers};
use crate::norms::{norm_mat, norm_snumbers, NormSpec};
use crate::rational::Q;
use crate::stepfn::{StepFn, WeightFn};

/// Slack on the hypothesis side: partial sums of `S` may exceed those of
/// `T` by this much and still count as dominated.
pub const HYPOTHESIS_SLACK: f64 = 1e-10;
/// Slack on the conclusion side of the transfer.
pub const CONCLUSION_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceVerdict {
    pub dominates: bool,
    #[serde(rename = "partial_sums_S")]
    pub partial_sums_s: Vec<f64>,
    #[serde(rename = "partial_sums_T")]
    pub partial_sums_t: Vec<f64>,
    /// First `k` (1-based) with `sum_{i<=k} s_i(S) > sum_{i<=k} s_i(T)`.
    pub violating_k: Option<usize>,
}

/// Does `T` Ky Fan dominate `S`, i.e. `|||S|||_(t) <= |||T|||_(t)` for every
/// `t`? Checking the knots `k/n` suffices since `t |||.|||_(t)` is piecewise
/// linear between them.
pub fn kyfan_dominates(t: &CMatrix, s: &CMatrix) -> Result<DominanceVerdict> {
    if t.n() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: t.n(),
            found: s.n(),
        });
    }
    Ok(dominates_snumbers(&s_numbers(t)?, &s_numbers(s)?))
}

/// [`kyfan_dominates`] on precomputed s-numbers of equal length.
pub fn dominates_snumbers(t: &SNumbers, s: &SNumbers) -> DominanceVerdict {
    let ps_t = t.partial_sums();
    let ps_s = s.partial_sums();
    let violating_k = ps_s
        .iter()
        .zip(&ps_t)
        .position(|(a, b)| *a > *b + HYPOTHESIS_SLACK)
        .map(|i| i + 1);
    DominanceVerdict {
        dominates: violating_k.is_none(),
        partial_sums_s: ps_s,
        partial_sums_t: ps_t,
        violating_k,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferLine {
    pub spec: String,
    pub norm_s: f64,
    pub norm_t: f64,
    /// `|||T||| - |||S|||`.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub lines: Vec<TransferLine>,
}

impl TransferReport {
    pub fn all_hold(&self) -> bool {
        self.lines.iter().all(|l| l.holds)
    }

    pub fn min_margin(&self) -> f64 {
        self.lines.iter().map(|l| l.margin).fold(f64::INFINITY, f64::min)
    }
}

/// Checks `|||S||| <= |||T|||` for each spec. The hypothesis must hold;
/// otherwise this is a usage error.
pub fn dominance_transfer(t: &CMatrix, s: &CMatrix, specs: &[NormSpec]) -> Result<TransferReport> {
    let verdict = kyfan_dominates(t, s)?;
    if !verdict.dominates {
        return Err(Error::Domain(format!(
            "S is not Ky Fan dominated by T (k = {})",
            verdict.violating_k.unwrap_or(0)
        )));
    }
    let (st, ss) = (s_numbers(t)?, s_numbers(s)?);
    let lines = specs
        .iter()
        .map(|spec| {
            let norm_t = norm_snumbers(spec, &st)?;
            let norm_s = norm_snumbers(spec, &ss)?;
            Ok(TransferLine {
                spec: spec.label(),
                norm_s,
                norm_t,
                margin: norm_t - norm_s,
                holds: norm_s <= norm_t + CONCLUSION_SLACK,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransferReport { lines })
}

/// The weight `(n/k) chi_[0, k/n)`, whose norm is the Ky Fan `k/n` norm.
pub fn violation_witness(n: usize, k: usize) -> Result<NormSpec> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let f = StepFn::indicator(Q::from_integer(0), Q::new(k as i64, n as i64))?
        .map(|v| v * n as f64 / k as f64)?;
    Ok(NormSpec::Weight { f: WeightFn::new(f)? })
}

/// Witness check for a failed verdict: the certificate's weight norm is
/// strictly larger on `S`.
pub fn witness_separates(t: &CMatrix, s: &CMatrix, verdict: &DominanceVerdict) -> Result<bool> {
    let Some(k) = verdict.violating_k else {
        return Ok(false);
    };
    let spec = violation_witness(t.n(), k)?;
    Ok(norm_mat(&spec, s)? > norm_mat(&spec, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_unitary_with, rng};
    use approx::assert_abs_diff_eq;

    fn diag(d: &[f64]) -> CMatrix {
        CMatrix::from_real_diag(d)
    }

    #[test]
    fn examples() {
        let t = diag(&[3.0, 1.0, 0.5]);
        assert!(kyfan_dominates(&t, &t).unwrap().dominates);

        let v = kyfan_dominates(&diag(&[2.0, 0.0]), &diag(&[1.0, 1.0])).unwrap();
        assert!(v.dominates);
        assert_eq!(v.partial_sums_s, vec![1.0, 2.0]);
        assert_eq!(v.partial_sums_t, vec![2.0, 2.0]);

        let v = kyfan_dominates(&diag(&[1.0, 1.0]), &diag(&[2.0, 0.0])).unwrap();
        assert!(!v.dominates);
        assert_eq!(v.violating_k, Some(1));
    }

    #[test]
    fn mismatch() {
        assert!(matches!(
            kyfan_dominates(&diag(&[1.0]), &diag(&[1.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transfer_on_majorization_pair() {
        let specs = [
            NormSpec::lp(2.0),
            NormSpec::kyfan(1, 2),
            NormSpec::Weight {
                f: WeightFn::uniform(&[1.5, 0.5]).unwrap(),
            },
        ];
        let r = dominance_transfer(&diag(&[2.0, 0.0]), &diag(&[1.0, 1.0]), &specs).unwrap();
        assert!(r.all_hold());
        assert!(r.min_margin() >= 0.0);
    }

    #[test]
    fn transfer_equal_inputs_has_zero_margins() {
        let t = diag(&[2.0, 1.0, 1.0]);
        let r = dominance_transfer(&t, &t, &[NormSpec::Trace, NormSpec::Operator]).unwrap();
        assert!(r.lines.iter().all(|l| l.margin == 0.0));
    }

    #[test]
    fn transfer_requires_hypothesis() {
        assert!(dominance_transfer(&diag(&[1.0, 1.0]), &diag(&[2.0, 0.0]), &[NormSpec::Trace]).is_err());
    }

    #[test]
    fn unitary_averages_are_dominated() {
        let mut r = rng(11);
        let t = diag(&[4.0, 2.0, 1.0, 0.0]);
        let mut avg = CMatrix::zeros(4);
        let m = 5;
        for _ in 0..m {
            let u = random_unitary_with(4, &mut r);
            let conj = &(&u * &t) * &u.adjoint();
            avg = &avg + &conj.scale((1.0 / m as f64).into());
        }
        assert!(kyfan_dominates(&t, &avg).unwrap().dominates);
        let specs = [NormSpec::lp(3.0), NormSpec::kyfan(1, 4), NormSpec::Operator];
        assert!(dominance_transfer(&t, &avg, &specs).unwrap().all_hold());
    }

    #[test]
    fn witness_for_failed_verdict() {
        let (t, s) = (diag(&[1.0, 1.0]), diag(&[2.0, 0.0]));
        let v = kyfan_dominates(&t, &s).unwrap();
        assert!(witness_separates(&t, &s, &v).unwrap());
        let spec = violation_witness(2, 1).unwrap();
        assert_abs_diff_eq!(norm_mat(&spec, &s).unwrap(), 2.0, epsilon = 1e-12);
    }
}
