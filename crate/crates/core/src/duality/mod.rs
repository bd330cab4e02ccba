//! Dual norms in `(C^n, tau)` and, through s-numbers, on `M_n(C)`.
//!
//! A polyhedral gauge norm is `max_j <c_j, y>` on nonincreasing nonnegative
//! vectors, so its dual at `x` is the linear program
//! `max (1/n) sum x*_i y_i` over that ordered unit ball. `L^p` duals use the
//! conjugate exponent directly.

mod lp;
mod vertices;

pub use lp::{LpSolution, OrderedConeLP, MAX_DIM as MAX_LP_DIM};
pub use vertices::{ordered_ball_vertices, MAX_ENUM_DIM};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{s_numbers, CMatrix, SNumbers};
use crate::norms::{eval_pieces, linear_pieces, norm_mat, norm_snumbers, NormSpec};
use crate::rational::Param;
use crate::stepfn::{StepFn, WeightFn};

/// Primal value, dual value and the maximizing `y` on the ordered cone.
#[derive(Clone, Debug, Serialize)]
pub struct DualReport {
    pub primal: f64,
    pub dual: f64,
    pub witness: Vec<f64>,
}

/// A gauge norm on `(C^n, tau)` given by finitely many linear pieces on the
/// ordered cone.
#[derive(Clone, Debug)]
pub struct PolyhedralNorm {
    n: usize,
    pieces: Vec<Vec<f64>>,
}

impl PolyhedralNorm {
    pub fn from_spec(spec: &NormSpec, n: usize) -> Result<Self> {
        Ok(PolyhedralNorm {
            n,
            pieces: linear_pieces(spec, n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    /// Norm of a vector of moduli (any order).
    pub fn eval(&self, s: &[f64]) -> f64 {
        eval_pieces(&self.pieces, &ordered(s))
    }

    /// Dual norm at the moduli `s`, with the LP maximizer.
    pub fn dual(&self, s: &[f64]) -> Result<LpSolution> {
        if s.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: s.len(),
            });
        }
        let nf = self.n as f64;
        let objective = ordered(s).into_iter().map(|v| v / nf).collect();
        let rows = self.pieces.iter().map(|c| (c.clone(), 1.0)).collect();
        OrderedConeLP::new(objective, rows)?.solve()
    }

    /// Vertices of the unit ball on the ordered cone.
    pub fn unit_ball_vertices(&self) -> Result<Vec<Vec<f64>>> {
        ordered_ball_vertices(&self.pieces, self.n)
    }

    /// The dual norm, whose pieces are `v/n` for the unit-ball vertices `v`.
    pub fn dual_norm(&self) -> Result<PolyhedralNorm> {
        let nf = self.n as f64;
        let pieces: Vec<Vec<f64>> = self
            .unit_ball_vertices()?
            .into_iter()
            .filter(|v| v.iter().any(|x| *x > 0.0))
            .map(|v| v.into_iter().map(|x| x / nf).collect())
            .collect();
        Ok(PolyhedralNorm { n: self.n, pieces })
    }

    /// The dual re-expressed as a sup of weight norms: each unit-ball vertex
    /// becomes a weight on the uniform `n`-partition.
    pub fn dual_as_spec(&self) -> Result<NormSpec> {
        let fs = self
            .unit_ball_vertices()?
            .into_iter()
            .filter(|v| v.iter().any(|x| *x > 0.0))
            .map(|v| WeightFn::general(StepFn::uniform(&v)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(NormSpec::SupOf { fs })
    }
}

fn ordered(s: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = s.iter().map(|x| x.abs()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn moduli(x: &[Complex64]) -> Vec<f64> {
    x.iter().map(|z| z.norm_sqr().sqrt()).collect()
}

fn conjugate_exponent(p: f64) -> Option<f64> {
    (p > 1.0).then(|| p / (p - 1.0))
}

/// `L^q` dual of `L^p` on moduli, with the norming vector.
fn lp_dual(p: f64, s: &[f64]) -> DualReport {
    let n = s.len() as f64;
    let s = ordered(s);
    let primal = lp_norm(p, &s);
    match conjugate_exponent(p) {
        None => {
            // Dual of L^1 is the operator norm, attained at n e_1.
            let mut w = vec![0.0; s.len()];
            w[0] = n;
            DualReport {
                primal,
                dual: s[0],
                witness: w,
            }
        }
        Some(q) => {
            let dual = lp_norm(q, &s);
            let witness = if dual == 0.0 {
                vec![0.0; s.len()]
            } else {
                s.iter().map(|v| (v / dual).powf(q - 1.0)).collect()
            };
            DualReport {
                primal,
                dual,
                witness,
            }
        }
    }
}

fn lp_norm(p: f64, s: &[f64]) -> f64 {
    let m = s.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let mean = s.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>() / s.len() as f64;
    m * mean.powf(1.0 / p)
}

/// Dual norm of `spec` at the moduli `s`, with primal value and witness.
pub fn dual_of_moduli(spec: &NormSpec, s: &[f64]) -> Result<DualReport> {
    spec.validate()?;
    if s.is_empty() {
        return Err(Error::Domain("empty vector".into()));
    }
    if let NormSpec::Lp { p } = spec {
        return Ok(lp_dual(p.to_f64(), s));
    }
    let poly = PolyhedralNorm::from_spec(spec, s.len())?;
    let sol = poly.dual(s).map_err(|e| match e {
        Error::LinearProgram(m) => Error::LinearProgram(format!("internal fault: {m}")),
        other => other,
    })?;
    Ok(DualReport {
        primal: poly.eval(s),
        dual: sol.value,
        witness: sol.y,
    })
}

/// `|||x|||^# = sup { |tau(xy)| : |||y||| <= 1 }` in `(C^n, tau)`.
pub fn dual_vec(spec: &NormSpec, x: &[Complex64]) -> Result<f64> {
    Ok(dual_of_moduli(spec, &moduli(x))?.dual)
}

pub fn dual_vec_report(spec: &NormSpec, x: &[Complex64]) -> Result<DualReport> {
    dual_of_moduli(spec, &moduli(x))
}

/// Real-vector convenience wrapper around [`dual_vec`].
pub fn dual_real_vec(spec: &NormSpec, x: &[f64]) -> Result<f64> {
    Ok(dual_of_moduli(spec, x)?.dual)
}

/// Matrix dual through the s-number profile.
pub fn dual_mat(spec: &NormSpec, t: &CMatrix) -> Result<f64> {
    Ok(dual_of_moduli(spec, s_numbers(t)?.as_slice())?.dual)
}

pub fn dual_mat_report(spec: &NormSpec, t: &CMatrix) -> Result<DualReport> {
    dual_of_moduli(spec, s_numbers(t)?.as_slice())
}

/// `max{t max|x|, mean|x|}`, the dual of the Ky Fan `t`-norm.
pub fn kyfan_dual_closed_form(t: Param, s: &[f64]) -> f64 {
    let max = s.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mean = s.iter().map(|v| v.abs()).sum::<f64>() / s.len() as f64;
    (t.to_f64() * max).max(mean)
}

/// Extreme points of
/// `{x_1 >= ... >= x_k = ... = x_n >= 0, (x_1 + ... + x_k)/k <= 1}`:
/// `(k/j) chi_{first j}` for `j < k`, the all-ones vector and the origin,
/// with `(k, 0, ..., 0)` always listed first.
pub fn gamma_extreme_points(n: usize, k: usize) -> Result<Vec<Vec<f64>>> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let kf = k as f64;
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(k + 2);
    let head = |j: usize| -> Vec<f64> {
        (0..n).map(|i| if i < j { kf / j as f64 } else { 0.0 }).collect()
    };
    points.push(head(1));
    for j in 2..k {
        points.push(head(j));
    }
    points.push(vec![1.0; n]);
    points.push(vec![0.0; n]);
    points.dedup();
    Ok(points)
}

/// `(|||x|||, |||x|||^##)`, the second dual computed from the first dual
/// re-expressed as a sup of weight norms.
pub fn involution_check(spec: &NormSpec, x: &[Complex64]) -> Result<(f64, f64)> {
    let s = moduli(x);
    let poly = PolyhedralNorm::from_spec(spec, s.len())?;
    let dual_spec = poly.dual_as_spec()?;
    let primal = crate::norms::norm_vec(spec, x)?;
    let double_dual = dual_of_moduli(&dual_spec, &s)?.dual;
    Ok((primal, double_dual))
}

#[derive(Clone, Debug, Serialize)]
pub struct Representation {
    pub lhs: f64,
    pub rhs: f64,
    /// Weight vectors on the uniform `n`-partition: the vertices of the dual
    /// unit ball on the ordered cone.
    pub family: Vec<Vec<f64>>,
}

/// Compares `|||T|||` with `max_f |||T|||_f` over the finite weight family
/// read off the dual unit ball.
pub fn representation_check(spec: &NormSpec, t: &CMatrix) -> Result<Representation> {
    let n = t.n();
    let poly = PolyhedralNorm::from_spec(spec, n)?;
    let dual = poly.dual_norm()?;
    let family: Vec<Vec<f64>> = dual
        .unit_ball_vertices()?
        .into_iter()
        .filter(|v| v.iter().any(|x| *x > 0.0))
        .collect();
    let s = s_numbers(t)?;
    let lhs = norm_snumbers(spec, &s)?;
    let rhs = family
        .iter()
        .map(|w| weight_pairing(w, &s))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Representation { lhs, rhs, family })
}

/// `|||T|||_w = (1/n) sum_i w_i s_i(T)` for a weight on the uniform partition.
fn weight_pairing(w: &[f64], s: &SNumbers) -> f64 {
    let n = s.n() as f64;
    w.iter().zip(s.as_slice()).map(|(a, b)| a * b).sum::<f64>() / n
}

/// `(||ST||_1, |||S||| |||T|||^#)`.
pub fn holder_check(spec: &NormSpec, s: &CMatrix, t: &CMatrix) -> Result<(f64, f64)> {
    let lhs = norm_mat(&NormSpec::Trace, &(s * t))?;
    let rhs = norm_mat(spec, s)? * dual_mat(spec, t)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{complex_vector, rng};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn cv(x: &[f64]) -> Vec<Complex64> {
        x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
    }

    #[test]
    fn dual_vec_examples() {
        assert_abs_diff_eq!(dual_real_vec(&NormSpec::Operator, &[1.0, 1.0]).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            dual_real_vec(&NormSpec::kyfan(1, 3), &[1.0, 0.0, 0.0]).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            dual_real_vec(&NormSpec::kyfan(2, 3), &[3.0, 3.0, 3.0]).unwrap(),
            3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn dual_mat_examples() {
        for n in 1..=4 {
            let d = dual_mat(&NormSpec::Trace, &CMatrix::identity(n)).unwrap();
            assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
        }
        let t = CMatrix::from_real_diag(&[2.0, 1.0]);
        assert_abs_diff_eq!(dual_mat(&NormSpec::kyfan(1, 2), &t).unwrap(), 1.5, epsilon = 1e-12);
        let t = CMatrix::from_real_diag(&[3.0, 4.0]);
        assert_abs_diff_eq!(dual_mat(&NormSpec::lp(2.0), &t).unwrap(), 12.5_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn lp_one_dual_is_operator() {
        let r = dual_of_moduli(&NormSpec::lp(1.0), &[1.0, 3.0, 2.0]).unwrap();
        assert_eq!(r.dual, 3.0);
        assert_eq!(r.primal, 2.0);
    }

    #[test]
    fn lp_witness_attains_dual() {
        let s = [3.0, 1.0, 0.5, 0.25];
        for p in [1.5, 2.0, 4.0] {
            let r = dual_of_moduli(&NormSpec::lp(p), &s).unwrap();
            let q = p / (p - 1.0);
            let wn = lp_norm(p, &r.witness);
            let pairing: f64 = s.iter().zip(&r.witness).map(|(a, b)| a * b).sum::<f64>() / 4.0;
            assert_abs_diff_eq!(wn, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(pairing, r.dual, epsilon = 1e-12);
            assert_abs_diff_eq!(r.dual, lp_norm(q, &s), epsilon = 1e-15);
        }
    }

    #[test]
    fn lp_witness_is_feasible_and_optimal() {
        let r = dual_of_moduli(&NormSpec::kyfan(2, 5), &[5.0, 1.0, 4.0, 0.0, 2.0]).unwrap();
        let primal_of_witness = crate::norms::norm_real_vec(&NormSpec::kyfan(2, 5), &r.witness).unwrap();
        assert!(primal_of_witness <= 1.0 + 1e-10);
        assert!(r.witness.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        let pairing: f64 = [5.0, 4.0, 2.0, 1.0, 0.0].iter().zip(&r.witness).map(|(a, b)| a * b).sum::<f64>() / 5.0;
        assert_abs_diff_eq!(pairing, r.dual, epsilon = 1e-12);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(
            gamma_extreme_points(3, 1).unwrap(),
            vec![vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], vec![0.0, 0.0, 0.0]]
        );
        assert_eq!(
            gamma_extreme_points(2, 2).unwrap(),
            vec![vec![2.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]]
        );
        assert_eq!(gamma_extreme_points(5, 4).unwrap().len(), 5);
        assert!(gamma_extreme_points(3, 0).is_err());
        assert!(gamma_extreme_points(3, 4).is_err());
    }

    #[test]
    fn gamma_points_lie_in_kyfan_ball() {
        for n in 1..=7 {
            for k in 1..=n {
                for p in gamma_extreme_points(n, k).unwrap() {
                    let head: f64 = p[..k].iter().sum::<f64>() / k as f64;
                    assert!(head <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn involution_examples() {
        let (a, b) = involution_check(&NormSpec::Trace, &cv(&[1.0, 2.0])).unwrap();
        assert_abs_diff_eq!(a, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 1.5, epsilon = 1e-10);

        let (a, b) = involution_check(&NormSpec::kyfan(1, 2), &cv(&[1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-10);

        let spec = NormSpec::SupOf {
            fs: vec![WeightFn::general(StepFn::uniform(&[2.0, 1.0]).unwrap()).unwrap()],
        };
        let mut r = rng(12);
        for _ in 0..10 {
            let x = complex_vector(4, &mut r);
            let (a, b) = involution_check(&spec, &x).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }

    /// Brute force over the ordered unit-ball vertices of Ky Fan 1/2 in C^2,
    /// found by hand: 0, (1, 0), (1, 1).
    #[test]
    fn kyfan_half_dual_by_hand() {
        let verts = [[1.0, 0.0], [1.0, 1.0]];
        let mut r = rng(2);
        for _ in 0..50 {
            let mut x = [r.gen_range(0.0..2.0), r.gen_range(0.0..2.0)];
            x.sort_by(|a: &f64, b| b.total_cmp(a));
            let brute = verts
                .iter()
                .map(|v| (v[0] * x[0] + v[1] * x[1]) / 2.0)
                .fold(0.0, f64::max);
            assert_abs_diff_eq!(dual_real_vec(&NormSpec::kyfan(1, 2), &x).unwrap(), brute, epsilon = 1e-12);
        }
    }

    #[test]
    fn representation_examples() {
        let mut r = rng(5);
        let t = crate::random::gaussian_matrix(3, &mut r);
        let trace = NormSpec::SupOf {
            fs: vec![WeightFn::new(StepFn::constant(1.0)).unwrap()],
        };
        let rep = representation_check(&trace, &t).unwrap();
        assert!(rep
            .family
            .iter()
            .any(|w| w.iter().all(|v| (v - 1.0).abs() < 1e-9)));
        let tn = norm_mat(&NormSpec::Trace, &t).unwrap();
        assert_abs_diff_eq!(rep.lhs, tn, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.rhs, tn, epsilon = 1e-9);
    }

    /// The Ky Fan unit ball is the hull of Gamma and the ordered-cone points
    /// it dominates, so representing the dual of Ky Fan must land on Gamma.
    #[test]
    fn representation_of_kyfan_dual_attained_on_gamma() {
        let mut r = rng(8);
        for (k, n) in [(1, 3), (2, 3), (2, 4), (3, 5)] {
            let t = crate::random::gaussian_matrix(n, &mut r);
            let dual = PolyhedralNorm::from_spec(&NormSpec::kyfan(k as i64, n as i64), n)
                .unwrap()
                .dual_as_spec()
                .unwrap();
            let rep = representation_check(&dual, &t).unwrap();
            let s = s_numbers(&t).unwrap();
            let via_gamma = gamma_extreme_points(n, k)
                .unwrap()
                .iter()
                .map(|w| weight_pairing(w, &s))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_abs_diff_eq!(rep.lhs, rep.rhs, epsilon = 1e-9);
            assert_abs_diff_eq!(rep.rhs, via_gamma, epsilon = 1e-9);
        }
    }

    #[test]
    fn holder_examples() {
        let i = CMatrix::identity(2);
        let (l, r) = holder_check(&NormSpec::lp(2.0), &i, &i).unwrap();
        assert_abs_diff_eq!(l, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-12);

        let mut g = rng(1);
        for _ in 0..20 {
            let s = crate::random::gaussian_matrix(4, &mut g);
            let t = crate::random::gaussian_matrix(4, &mut g);
            let (l, r) = holder_check(&NormSpec::lp(2.0), &s, &t).unwrap();
            assert!(l <= r + 1e-8);
        }

        let s = CMatrix::from_real_diag(&[2.0, 0.0]);
        let t = CMatrix::from_real_diag(&[0.0, 2.0]);
        let (l, r) = holder_check(&NormSpec::kyfan(1, 2), &s, &t).unwrap();
        assert_eq!(l, 0.0);
        assert!(r >= 0.0);
    }

    #[test]
    fn unsupported_kinds() {
        let poly = PolyhedralNorm::from_spec(&NormSpec::lp(3.0), 2);
        assert!(matches!(poly, Err(Error::Unsupported(_))));
        assert!(involution_check(&NormSpec::lp(2.0), &cv(&[1.0])).is_err());
    }
}
