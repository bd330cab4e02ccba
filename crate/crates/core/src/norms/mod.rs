//! Symmetric gauge norms on step functions and `C^n`, and the unitarily
//! invariant norms they induce on matrices through `mu_s(T)`.

mod axioms;

pub use axioms::{check_norm_axioms, AxiomCheck, AxiomConfig, AxiomReport};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{s_numbers, CMatrix, SNumbers};
use crate::rational::{q_sub, q_to_f64, Param, Q};
use crate::stepfn::{pairing, partial_integral, rearrange, StepFn, WeightFn, VALUE_TOL};

/// A tracial gauge norm given in closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormSpec {
    /// `||T||`, the largest s-number.
    Operator,
    /// `||T||_1 = tau(|T|)`.
    Trace,
    /// `(tau(|T|^p))^{1/p}`, `p >= 1`.
    Lp { p: Param },
    /// `(1/t) int_0^t mu_s(T) ds`; `t = 0` is the operator norm.
    KyFan { t: Param },
    KyFanZero,
    /// `int_0^1 f(s) mu_s(T) ds`.
    Weight { f: WeightFn },
    /// Pointwise maximum of weight norms.
    SupOf { fs: Vec<WeightFn> },
    /// `max{t ||T||, ||T||_1}` for `1/2 <= t <= 1`.
    TBracket { t: Param },
    /// `sup_t c(t) |||T|||_(t)` for a step function `0 <= c <= 1` with sup 1.
    CSup { c: StepFn },
}

impl NormSpec {
    pub fn kyfan(num: i64, den: i64) -> Self {
        NormSpec::KyFan {
            t: Param::exact(num, den),
        }
    }

    pub fn kyfan_real(t: f64) -> Self {
        NormSpec::KyFan { t: Param::Real(t) }
    }

    pub fn lp(p: f64) -> Self {
        NormSpec::Lp { p: Param::Real(p) }
    }

    pub fn tbracket(t: impl Into<Param>) -> Self {
        NormSpec::TBracket { t: t.into() }
    }

    pub fn weight(f: WeightFn) -> Self {
        NormSpec::Weight { f }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: NormSpec = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let domain = |m: String| Err(Error::Domain(m));
        match self {
            NormSpec::Lp { p } => {
                let p = p.to_f64();
                if !(p.is_finite() && p >= 1.0) {
                    return domain(format!("L^p needs 1 <= p < inf, got {p}"));
                }
            }
            NormSpec::KyFan { t } => {
                if t.cmp_q(Q::zero()).is_lt() || t.cmp_q(Q::one()).is_gt() || t.to_f64().is_nan() {
                    return domain(format!("Ky Fan needs 0 <= t <= 1, got {t}"));
                }
            }
            NormSpec::TBracket { t } => {
                if t.cmp_q(Q::new(1, 2)).is_lt() || t.cmp_q(Q::one()).is_gt() || t.to_f64().is_nan() {
                    return domain(format!("<t> norm needs 1/2 <= t <= 1, got {t}"));
                }
            }
            NormSpec::SupOf { fs } if fs.is_empty() => {
                return domain("sup of an empty weight family".into());
            }
            NormSpec::CSup { c } => {
                if c.min_value() < 0.0 || c.max_value() > 1.0 + VALUE_TOL {
                    return domain("c(t) must take values in [0, 1]".into());
                }
                if (c.max_value() - 1.0).abs() > VALUE_TOL {
                    return domain("c(t) must attain the value 1".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        match self {
            NormSpec::Operator => "operator".into(),
            NormSpec::Trace => "trace".into(),
            NormSpec::Lp { p } => format!("L^{p}"),
            NormSpec::KyFan { t } => format!("kyfan({t})"),
            NormSpec::KyFanZero => "kyfan(0)".into(),
            NormSpec::Weight { f } => format!("weight({} pieces)", f.step().pieces()),
            NormSpec::SupOf { fs } => format!("supof({} weights)", fs.len()),
            NormSpec::TBracket { t } => format!("<{t}>"),
            NormSpec::CSup { c } => format!("csup({} pieces)", c.pieces()),
        }
    }

    /// `|||1|||`.
    pub fn identity_norm(&self) -> Result<f64> {
        norm_step(self, &StepFn::constant(1.0))
    }
}

/// Ky Fan `t`-norm of a nonincreasing nonnegative step function.
fn kyfan_of_rearranged(g: &StepFn, t: Param) -> Result<f64> {
    if t.is_zero() {
        return Ok(g.max_value());
    }
    Ok(partial_integral(g, t)? / t.to_f64())
}

fn lp_of_rearranged(g: &StepFn, p: f64) -> Result<f64> {
    let m = g.max_value();
    if m == 0.0 {
        return Ok(0.0);
    }
    let scaled = g.map(|v| (v / m).powf(p))?;
    Ok(m * scaled.integral()?.powf(1.0 / p))
}

/// The symmetric gauge norm of `f`, evaluated on `rearrange(|f|)`.
pub fn norm_step(spec: &NormSpec, f: &StepFn) -> Result<f64> {
    spec.validate()?;
    let g = rearrange(&f.abs())?;
    match spec {
        NormSpec::Operator | NormSpec::KyFanZero => Ok(g.max_value()),
        NormSpec::Trace => g.integral(),
        NormSpec::Lp { p } => lp_of_rearranged(&g, p.to_f64()),
        NormSpec::KyFan { t } => kyfan_of_rearranged(&g, *t),
        NormSpec::Weight { f } => pairing(f.step(), &g),
        NormSpec::SupOf { fs } => fs
            .iter()
            .map(|w| pairing(w.step(), &g))
            .try_fold(f64::NEG_INFINITY, |acc, v| v.map(|v| acc.max(v))),
        NormSpec::TBracket { t } => Ok((t.to_f64() * g.max_value()).max(g.integral()?)),
        NormSpec::CSup { c } => {
            // t -> |||g|||_(t) is nonincreasing, so on each interval of
            // constancy of c the supremum sits at the left endpoint.
            let mut best: f64 = 0.0;
            for (left, _, cv) in c.intervals() {
                if cv == 0.0 {
                    continue;
                }
                best = best.max(cv * kyfan_of_rearranged(&g, Param::Exact(left))?);
            }
            Ok(best)
        }
    }
}

fn moduli(x: &[Complex64]) -> Vec<f64> {
    x.iter().map(|z| z.norm_sqr().sqrt()).collect()
}

/// The gauge norm of `x` in `(C^n, tau)` with `tau(x) = (x_1 + ... + x_n)/n`.
pub fn norm_vec(spec: &NormSpec, x: &[Complex64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Domain("empty vector".into()));
    }
    norm_step(spec, &SNumbers::from_moduli(&moduli(x))?.to_step())
}

/// Real-vector convenience wrapper around [`norm_vec`].
pub fn norm_real_vec(spec: &NormSpec, x: &[f64]) -> Result<f64> {
    let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    norm_vec(spec, &z)
}

/// `|||T||| = |||mu_s(T)|||'`.
pub fn norm_mat(spec: &NormSpec, t: &CMatrix) -> Result<f64> {
    norm_step(spec, &s_numbers(t)?.to_step())
}

/// Norm of an s-number profile, skipping the decomposition.
pub fn norm_snumbers(spec: &NormSpec, s: &SNumbers) -> Result<f64> {
    norm_step(spec, &s.to_step())
}

/// Summation by parts: a weight `a_1 >= ... >= a_n` on the uniform
/// `n`-partition equals `sum_k k (a_k - a_{k+1}) / n |||.|||_(k/n)`.
///
/// Returns `(coefficient, t)` pairs with nonzero coefficients.
pub fn weight_norm_as_kyfan_combo(f: &WeightFn) -> Result<Vec<(f64, Q)>> {
    let step = f.step();
    let n = step.uniform_partition_size().ok_or_else(|| {
        Error::Domain("weight must be on a uniform partition; refine it first".into())
    })?;
    let a = step.values();
    let mut out = Vec::new();
    for k in 1..=n {
        let next = if k < n { a[k] } else { 0.0 };
        let coeff = k as f64 * (a[k - 1] - next) / n as f64;
        if coeff != 0.0 {
            out.push((coeff, Q::new(k as i64, n as i64)));
        }
    }
    Ok(out)
}

/// Evaluates a nonnegative Ky Fan combination on a matrix.
pub fn kyfan_combo_norm(combo: &[(f64, Q)], t: &CMatrix) -> Result<f64> {
    let g = s_numbers(t)?.to_step();
    combo
        .iter()
        .map(|&(c, tk)| Ok(c * kyfan_of_rearranged(&g, Param::Exact(tk))?))
        .sum()
}

/// Linear functionals `c_j` with `|||y||| = max_j <c_j, y>` for every
/// nonincreasing nonnegative `y` in `(C^n, tau)`, when such a finite family
/// exists for `spec`.
pub fn linear_pieces(spec: &NormSpec, n: usize) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let nf = n as f64;
    let e1 = {
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        v
    };
    let mean = vec![1.0 / nf; n];
    let pieces = match spec {
        NormSpec::Operator | NormSpec::KyFanZero => vec![e1],
        NormSpec::Trace => vec![mean],
        NormSpec::Lp { .. } => {
            return Err(Error::Unsupported("L^p is not polyhedral".into()));
        }
        NormSpec::KyFan { t } => vec![kyfan_piece(*t, n)?],
        NormSpec::Weight { f } => vec![weight_piece(f.step(), n)?],
        NormSpec::SupOf { fs } => fs
            .iter()
            .map(|w| weight_piece(w.step(), n))
            .collect::<Result<_>>()?,
        NormSpec::TBracket { t } => {
            let t = t.to_f64();
            vec![e1.iter().map(|v| v * t).collect(), mean]
        }
        NormSpec::CSup { c } => c
            .intervals()
            .filter(|(_, _, cv)| *cv > 0.0)
            .map(|(left, _, cv)| {
                Ok(kyfan_piece(Param::Exact(left), n)?.into_iter().map(|v| v * cv).collect())
            })
            .collect::<Result<_>>()?,
    };
    Ok(pieces)
}

/// `c_i = |[(i-1)/n, i/n) ∩ [0, t)| / t`, or `e_1` when `t = 0`.
fn kyfan_piece(t: Param, n: usize) -> Result<Vec<f64>> {
    let mut v = vec![0.0; n];
    if t.is_zero() {
        v[0] = 1.0;
        return Ok(v);
    }
    let tf = t.to_f64();
    for (i, slot) in v.iter_mut().enumerate() {
        let left = Q::new(i as i64, n as i64);
        let right = Q::new(i as i64 + 1, n as i64);
        if t.cmp_q(right).is_ge() {
            *slot = (1.0 / n as f64) / tf;
        } else if t.cmp_q(left).is_gt() {
            let overlap = match t {
                Param::Exact(tq) => q_to_f64(q_sub(tq, left)?),
                Param::Real(tr) => tr - i as f64 / n as f64,
            };
            *slot = overlap / tf;
        }
    }
    Ok(v)
}

/// `c_i = int_{(i-1)/n}^{i/n} w`.
fn weight_piece(w: &StepFn, n: usize) -> Result<Vec<f64>> {
    let mut v = vec![0.0; n];
    for (i, slot) in v.iter_mut().enumerate() {
        let cell = StepFn::indicator(Q::new(i as i64, n as i64), Q::new(i as i64 + 1, n as i64))?;
        *slot = pairing(w, &cell)?;
    }
    Ok(v)
}

/// `max_j <c_j, y>`.
pub fn eval_pieces(pieces: &[Vec<f64>], y: &[f64]) -> f64 {
    pieces
        .iter()
        .map(|c| c.iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{matrix_with_singular_values, rng};
    use crate::rational::q;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn norm_step_examples() {
        assert_eq!(norm_step(&NormSpec::lp(2.0), &StepFn::constant(1.0)).unwrap(), 1.0);
        let g = StepFn::uniform(&[3.0, 1.0]).unwrap();
        assert_eq!(norm_step(&NormSpec::kyfan(1, 2), &g).unwrap(), 3.0);
        let w = WeightFn::uniform(&[2.0, 0.0]).unwrap();
        assert_eq!(norm_step(&NormSpec::weight(w), &g).unwrap(), 3.0);
    }

    #[test]
    fn norm_vec_examples() {
        assert_abs_diff_eq!(norm_real_vec(&NormSpec::Trace, &[1.0, 2.0, 3.0]).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            norm_real_vec(&NormSpec::kyfan(2, 3), &[4.0, 1.0, 1.0]).unwrap(),
            2.5,
            epsilon = 1e-15
        );
        let x = [c(-5.0), Complex64::new(0.0, 3.0)];
        assert_eq!(norm_vec(&NormSpec::Operator, &x).unwrap(), 5.0);
        assert!(norm_vec(&NormSpec::Operator, &[]).is_err());
    }

    #[test]
    fn norm_mat_examples() {
        let d = CMatrix::from_real_diag(&[3.0, 2.0, 1.0]);
        assert_abs_diff_eq!(norm_mat(&NormSpec::kyfan(1, 3), &d).unwrap(), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(norm_mat(&NormSpec::kyfan(2, 3), &d).unwrap(), 2.5, epsilon = 1e-14);
        let nil = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(norm_mat(&NormSpec::lp(1.0), &nil).unwrap(), 1.0);
    }

    #[test]
    fn parameter_ranges_are_checked() {
        let f = StepFn::constant(1.0);
        assert!(norm_step(&NormSpec::lp(0.5), &f).is_err());
        assert!(norm_step(&NormSpec::kyfan(3, 2), &f).is_err());
        assert!(norm_step(&NormSpec::tbracket(0.4), &f).is_err());
        assert!(norm_step(&NormSpec::SupOf { fs: vec![] }, &f).is_err());
        let c = StepFn::uniform(&[0.5, 0.25]).unwrap();
        assert!(norm_step(&NormSpec::CSup { c }, &f).is_err());
        assert_eq!(norm_step(&NormSpec::kyfan(0, 1), &StepFn::uniform(&[2.0, 1.0]).unwrap()).unwrap(), 2.0);
    }

    #[test]
    fn kyfan_combo_examples() {
        let one = WeightFn::uniform(&[1.0]).unwrap();
        assert_eq!(weight_norm_as_kyfan_combo(&one).unwrap(), vec![(1.0, q(1, 1))]);
        let w = WeightFn::uniform(&[2.0, 0.0]).unwrap();
        assert_eq!(weight_norm_as_kyfan_combo(&w).unwrap(), vec![(1.0, q(1, 2))]);
        let w = WeightFn::general(StepFn::uniform(&[2.0, 1.0]).unwrap()).unwrap();
        assert_eq!(
            weight_norm_as_kyfan_combo(&w).unwrap(),
            vec![(0.5, q(1, 2)), (1.0, q(1, 1))]
        );
        let irregular =
            WeightFn::new(StepFn::new(vec![q(0, 1), q(1, 3), q(1, 1)], vec![1.2, 0.9]).unwrap())
                .unwrap();
        assert!(weight_norm_as_kyfan_combo(&irregular).is_err());
    }

    #[test]
    fn kyfan_combo_matches_direct_pairing() {
        let mut r = rng(21);
        for _ in 0..50 {
            let n = r.gen_range(1..=7);
            let mut a: Vec<f64> = (0..n).map(|_| r.gen::<f64>()).collect();
            a.sort_by(|x, y| y.total_cmp(x));
            let mean = a.iter().sum::<f64>() / n as f64;
            a.iter_mut().for_each(|v| *v /= mean);
            let w = WeightFn::uniform(&a).unwrap();
            let s: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..5.0)).collect();
            let t = matrix_with_singular_values(&s, &mut r);
            let direct = norm_mat(&NormSpec::weight(w.clone()), &t).unwrap();
            let combo = weight_norm_as_kyfan_combo(&w).unwrap();
            assert!(combo.iter().all(|(c, _)| *c >= 0.0));
            let total: f64 = combo.iter().map(|(c, _)| c).sum();
            assert_abs_diff_eq!(total, w.mean(), epsilon = 1e-12);
            assert_abs_diff_eq!(kyfan_combo_norm(&combo, &t).unwrap(), direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn pieces_agree_with_direct_evaluation() {
        let mut r = rng(4);
        let specs = vec![
            NormSpec::Operator,
            NormSpec::Trace,
            NormSpec::kyfan(2, 5),
            NormSpec::kyfan_real(std::f64::consts::FRAC_1_SQRT_2),
            NormSpec::tbracket(0.7),
            NormSpec::weight(WeightFn::uniform(&[1.5, 1.0, 0.5]).unwrap()),
            NormSpec::CSup {
                c: StepFn::new(vec![q(0, 1), q(1, 4), q(3, 5), q(1, 1)], vec![0.3, 1.0, 0.6]).unwrap(),
            },
        ];
        for n in 1..=6 {
            for spec in &specs {
                let pieces = linear_pieces(spec, n).unwrap();
                for _ in 0..20 {
                    let mut y: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..3.0)).collect();
                    y.sort_by(|a, b| b.total_cmp(a));
                    let direct = norm_real_vec(spec, &y).unwrap();
                    assert_abs_diff_eq!(eval_pieces(&pieces, &y), direct, epsilon = 1e-12);
                }
            }
        }
        assert!(linear_pieces(&NormSpec::lp(2.0), 3).is_err());
    }

    #[test]
    fn json_specs() {
        let s = NormSpec::from_json(r#"{ "kind": "kyfan", "t": "2/3" }"#).unwrap();
        assert_eq!(s, NormSpec::kyfan(2, 3));
        let s = NormSpec::from_json(r#"{ "kind": "lp", "p": 2.0 }"#).unwrap();
        assert_eq!(s, NormSpec::lp(2.0));
        let s = NormSpec::from_json(r#"{ "kind": "tbracket", "t": 0.75 }"#).unwrap();
        assert_eq!(s, NormSpec::tbracket(0.75));
        let s = NormSpec::from_json(
            r#"{ "kind": "weight", "f": { "breakpoints": ["0","1/2","1"], "values": [2.0, 0.0] } }"#,
        )
        .unwrap();
        assert!(matches!(s, NormSpec::Weight { .. }));
        let s = NormSpec::from_json(
            r#"{ "kind": "supof", "fs": [{ "breakpoints": ["0","1"], "values": [1.0] }] }"#,
        )
        .unwrap();
        assert!(matches!(s, NormSpec::SupOf { .. }));
        let s = NormSpec::from_json(
            r#"{ "kind": "csup", "c": { "breakpoints": ["0","1/2","1"], "values": [1.0, 0.5] } }"#,
        )
        .unwrap();
        assert!(matches!(s, NormSpec::CSup { .. }));
        assert!(NormSpec::from_json(r#"{ "kind": "kyfan", "t": "3/2" }"#).is_err());
        assert!(NormSpec::from_json(r#"{ "kind": "nope" }"#).is_err());
        assert!(NormSpec::from_json(
            r#"{ "kind": "weight", "f": { "breakpoints": ["0","1/2","1"], "values": [0.0, 2.0] } }"#
        )
        .is_err());
    }
}
