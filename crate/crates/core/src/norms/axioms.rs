//! Randomized checks of the norm axioms and of the inequalities every
//! normalized unitarily invariant norm satisfies.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::{norm_mat, NormSpec};
use crate::error::Result;
use crate::linalg::{s_numbers, CMatrix};
use crate::random::{complex_gaussian, gaussian_matrix, random_unitary_with, rng};

/// Sampling parameters for [`check_norm_axioms`].
#[derive(Clone, Debug)]
pub struct AxiomConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Harness self-test: reports the triangle inequality backwards.
    #[doc(hidden)]
    pub invert_triangle_check: bool,
}

impl AxiomConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        AxiomConfig {
            n,
            trials,
            seed,
            invert_triangle_check: false,
        }
    }
}

/// Outcome of one axiom across all trials.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest observed violation (negative when every trial had slack).
    pub worst_violation: f64,
    /// Matrices of the first failing trial.
    pub witness: Option<Vec<CMatrix>>,
}

impl AxiomCheck {
    fn new(name: &'static str) -> Self {
        AxiomCheck {
            name,
            trials: 0,
            failures: 0,
            worst_violation: f64::NEG_INFINITY,
            witness: None,
        }
    }

    /// Records `violation`; anything above `tol` is a failure.
    fn record(&mut self, violation: f64, tol: f64, witness: impl FnOnce() -> Vec<CMatrix>) {
        self.trials += 1;
        self.worst_violation = self.worst_violation.max(violation);
        if violation.is_nan() || violation > tol {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub spec: String,
    pub identity_norm: f64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }
}

const INEQ_TOL: f64 = 1e-10;
const INVARIANCE_TOL: f64 = 1e-8;

fn operator_norm(t: &CMatrix) -> Result<f64> {
    Ok(s_numbers(t)?.as_slice()[0])
}

fn trace_norm(t: &CMatrix) -> Result<f64> {
    let s = s_numbers(t)?;
    Ok(s.as_slice().iter().sum::<f64>() / s.n() as f64)
}

/// Runs triangle inequality, homogeneity, unitary invariance,
/// `|||ATB||| <= ||A|| |||T||| ||B||`, the sandwich
/// `||T||_1 <= |||T||| <= ||T||` (after rescaling by `|||1|||`), and
/// monotonicity on `0 <= S <= T`.
pub fn check_norm_axioms(spec: &NormSpec, cfg: &AxiomConfig) -> Result<AxiomReport> {
    spec.validate()?;
    let mut r = rng(cfg.seed);
    let n = cfg.n;
    let unit = spec.identity_norm()?;
    let norm = |t: &CMatrix| norm_mat(spec, t);

    let mut triangle = AxiomCheck::new("triangle");
    let mut homogeneity = AxiomCheck::new("homogeneity");
    let mut invariance = AxiomCheck::new("unitary_invariance");
    let mut ideal = AxiomCheck::new("ideal_bound");
    let mut sandwich = AxiomCheck::new("sandwich");
    let mut monotone = AxiomCheck::new("monotonicity");

    for _ in 0..cfg.trials {
        let s = gaussian_matrix(n, &mut r);
        let t = gaussian_matrix(n, &mut r);
        let scale = r.gen_range(0.1..4.0);
        let t = t.scale(Complex64::new(scale, 0.0));

        let (ns, nt) = (norm(&s)?, norm(&t)?);
        let sum = &s + &t;
        let nsum = norm(&sum)?;
        let mut gap = nsum - (ns + nt);
        if cfg.invert_triangle_check {
            gap = -gap;
        }
        triangle.record(gap, INEQ_TOL * (1.0 + ns + nt), || vec![s.clone(), t.clone()]);

        let alpha = complex_gaussian(&mut r) * 2.0;
        let scaled = t.scale(alpha);
        let gap = (norm(&scaled)? - alpha.norm() * nt).abs();
        homogeneity.record(gap, INEQ_TOL * (1.0 + alpha.norm() * nt), || vec![t.clone()]);

        let u = random_unitary_with(n, &mut r);
        let v = random_unitary_with(n, &mut r);
        let utv = &(&u * &t) * &v;
        let gap = (norm(&utv)? - nt).abs();
        invariance.record(gap, INVARIANCE_TOL * (1.0 + nt), || vec![t.clone(), u.clone(), v.clone()]);

        let a = gaussian_matrix(n, &mut r);
        let b = gaussian_matrix(n, &mut r);
        let atb = &(&a * &t) * &b;
        let bound = operator_norm(&a)? * nt * operator_norm(&b)?;
        ideal.record(norm(&atb)? - bound, INEQ_TOL * (1.0 + bound), || {
            vec![a.clone(), t.clone(), b.clone()]
        });

        let normalized = nt / unit;
        let lower = trace_norm(&t)? - normalized;
        let upper = normalized - operator_norm(&t)?;
        sandwich.record(lower.max(upper), INEQ_TOL, || vec![t.clone()]);

        let lo = &a.adjoint() * &a;
        let hi = &lo + &(&b.adjoint() * &b);
        let (nlo, nhi) = (norm(&lo)?, norm(&hi)?);
        monotone.record(nlo - nhi, INEQ_TOL * (1.0 + nhi), || vec![lo.clone(), hi.clone()]);
    }

    Ok(AxiomReport {
        spec: spec.label(),
        identity_norm: unit,
        checks: vec![triangle, homogeneity, invariance, ideal, sandwich, monotone],
    })
}
