//! Seeded invariant suites behind `gaugenorm proptest`.
//!
//! Every suite draws from its own ChaCha stream derived from the seed, runs
//! sequentially and reports counts and worst violations only, so the JSON
//! report is byte-identical for a fixed seed and trial count.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dominance::{dominance_transfer, kyfan_dominates, witness_separates};
use crate::duality::{
    dual_of_moduli, dual_vec, holder_check, involution_check, kyfan_dual_closed_form,
};
use crate::error::{Error, Result};
use crate::extreme2::{
    check_admissible, decompose, lp_density_check, not_convex_combination, profile_of,
    reconstruct, uniform_grid, Atom, AtomicMeasure, Profile,
};
use crate::linalg::{pinch, CMatrix, Partition};
use crate::norms::{check_norm_axioms, norm_mat, norm_vec, AxiomConfig, NormSpec};
use crate::random::{
    complex_vector, gaussian_matrix, matrix_with_singular_values, random_unitary_with, rng,
    SeedRng,
};
use crate::rational::{Param, Q};
use crate::stepfn::{StepFn, WeightFn};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Duality,
    Dominance,
    Extreme2,
    All,
}

impl Suite {
    const PARTS: [Suite; 4] = [Suite::Axioms, Suite::Duality, Suite::Dominance, Suite::Extreme2];

    fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Duality => "duality",
            Suite::Dominance => "dominance",
            Suite::Extreme2 => "extreme2",
            Suite::All => "all",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Suite::Axioms => 0x0a,
            Suite::Duality => 0x0d,
            Suite::Dominance => 0x0f,
            Suite::Extreme2 => 0x02,
            Suite::All => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub seed: u64,
    pub trials: usize,
    pub suite: Suite,
    /// Harness self-test: flips the triangle inequality in the axiom suite.
    #[doc(hidden)]
    pub inject_triangle_bug: bool,
}

impl HarnessConfig {
    pub fn new(seed: u64, trials: usize, suite: Suite) -> Self {
        HarnessConfig {
            seed,
            trials,
            suite,
            inject_triangle_bug: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest observed violation; negative means every trial had slack.
    pub worst_violation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
}

/// The first failing case of a run.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub suite: String,
    pub check: String,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub seed: u64,
    pub trials: usize,
    pub suite: String,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
    #[serde(skip)]
    pub witness: Option<Witness>,
}

struct Tally {
    name: String,
    trials: usize,
    failures: usize,
    worst: Option<f64>,
    witness: Option<Value>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.to_string(),
            trials: 0,
            failures: 0,
            worst: None,
            witness: None,
        }
    }

    fn record(&mut self, violation: f64, tol: f64, witness: impl FnOnce() -> Value) {
        self.trials += 1;
        self.worst = Some(self.worst.map_or(violation, |w| w.max(violation)));
        if violation.is_nan() || violation > tol {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Records a pass/fail outcome as violation 0 or 1.
    fn expect(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.record(if ok { 0.0 } else { 1.0 }, 0.5, witness);
    }
}

struct SuiteRun {
    suite: Suite,
    tallies: Vec<Tally>,
}

impl SuiteRun {
    fn into_report(self) -> (SuiteReport, Option<Witness>) {
        let name = self.suite.name().to_string();
        let witness = self.tallies.iter().find_map(|t| {
            t.witness.clone().map(|detail| Witness {
                suite: name.clone(),
                check: t.name.clone(),
                detail,
            })
        });
        let checks: Vec<CheckSummary> = self
            .tallies
            .into_iter()
            .map(|t| CheckSummary {
                name: t.name,
                trials: t.trials,
                failures: t.failures,
                worst_violation: t.worst,
            })
            .collect();
        let passed = checks.iter().all(|c| c.failures == 0);
        (
            SuiteReport {
                suite: name,
                passed,
                checks,
            },
            witness,
        )
    }
}

/// Runs the configured suites. `Err` only for internal numerical failures;
/// invariant violations are reported in the result.
pub fn run(cfg: &HarnessConfig) -> Result<HarnessReport> {
    let parts: Vec<Suite> = match cfg.suite {
        Suite::All => Suite::PARTS.to_vec(),
        one => vec![one],
    };
    let mut suites = Vec::new();
    let mut witness = None;
    for suite in parts {
        let mut r = rng(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ suite.salt());
        let run = match suite {
            Suite::Axioms => axioms_suite(cfg, &mut r)?,
            Suite::Duality => duality_suite(cfg, &mut r)?,
            Suite::Dominance => dominance_suite(cfg, &mut r)?,
            Suite::Extreme2 => extreme2_suite(cfg, &mut r)?,
            Suite::All => unreachable!(),
        };
        let (report, w) = run.into_report();
        if witness.is_none() {
            witness = w;
        }
        suites.push(report);
    }
    Ok(HarnessReport {
        seed: cfg.seed,
        trials: cfg.trials,
        suite: cfg.suite.name().to_string(),
        passed: suites.iter().all(|s| s.passed),
        suites,
        witness,
    })
}

fn axioms_suite(cfg: &HarnessConfig, r: &mut SeedRng) -> Result<SuiteRun> {
    let names = [
        "triangle",
        "homogeneity",
        "unitary_invariance",
        "ideal_bound",
        "sandwich",
        "monotonicity",
    ];
    let mut tallies: Vec<Tally> = names.iter().map(|n| Tally::new(n)).collect();
    for spec in spec_battery(r) {
        let n = r.gen_range(2..=6);
        let mut ac = AxiomConfig::new(n, cfg.trials, r.gen());
        ac.invert_triangle_check = cfg.inject_triangle_bug;
        let report = check_norm_axioms(&spec, &ac)?;
        for check in report.checks {
            let tally = tallies
                .iter_mut()
                .find(|t| t.name == check.name)
                .expect("known axiom name");
            tally.trials += check.trials;
            tally.failures += check.failures;
            if check.trials > 0 {
                let w = check.worst_violation;
                tally.worst = Some(tally.worst.map_or(w, |x| x.max(w)));
            }
            if tally.witness.is_none() {
                if let Some(m) = check.witness {
                    tally.witness = Some(json!({ "spec": spec, "matrices": m }));
                }
            }
        }
    }
    Ok(SuiteRun {
        suite: Suite::Axioms,
        tallies,
    })
}

fn duality_suite(cfg: &HarnessConfig, r: &mut SeedRng) -> Result<SuiteRun> {
    let mut closed = Tally::new("kyfan_closed_form");
    let mut irrational = Tally::new("kyfan_irrational_t");
    let mut involution = Tally::new("involution");
    let mut pairing = Tally::new("pairing_bound");
    let mut normalized = Tally::new("normalized_dual");
    let mut holder = Tally::new("holder");
    let mut reversal = Tally::new("order_reversal");

    for _ in 0..cfg.trials {
        let n = r.gen_range(2..=6);
        let x = complex_vector(n, r);
        let s: Vec<f64> = x.iter().map(|z| z.norm()).collect();

        let k = r.gen_range(1..=n);
        let spec = NormSpec::kyfan(k as i64, n as i64);
        let lp = dual_vec(&spec, &x)?;
        let cf = kyfan_dual_closed_form(Param::exact(k as i64, n as i64), &s);
        closed.record((lp - cf).abs(), 1e-8 * (1.0 + cf), || json!({ "spec": spec, "x": s }));

        let t: f64 = r.gen_range(0.01..1.0);
        let spec = NormSpec::kyfan_real(t);
        let lp = dual_vec(&spec, &x)?;
        let cf = kyfan_dual_closed_form(Param::Real(t), &s);
        irrational.record((lp - cf).abs(), 1e-6 * (1.0 + cf), || json!({ "spec": spec, "x": s }));

        let spec = random_polyhedral(r)?;
        let (primal, double) = involution_check(&spec, &x)?;
        involution.record((primal - double).abs(), 1e-8 * (1.0 + primal), || {
            json!({ "spec": spec, "x": s })
        });

        let spec = random_normalized_spec(r)?;
        let y = complex_vector(n, r);
        let tau: Complex64 = x.iter().zip(&y).map(|(a, b)| a * b).sum::<Complex64>() / n as f64;
        let bound = norm_vec(&spec, &x)? * dual_vec(&spec, &y)?;
        pairing.record(tau.norm() - bound, 1e-8 * (1.0 + bound), || {
            json!({ "spec": spec, "x": s })
        });
        let one = dual_of_moduli(&spec, &vec![1.0; n])?.dual;
        normalized.record((one - 1.0).abs(), 1e-8, || json!({ "spec": spec, "n": n }));

        let m = r.gen_range(2..=4);
        let (a, b) = (gaussian_matrix(m, r), gaussian_matrix(m, r));
        let (lhs, rhs) = holder_check(&spec, &a, &b)?;
        holder.record(lhs - rhs, 1e-8 * (1.0 + rhs), || {
            json!({ "spec": spec, "S": a, "T": b })
        });

        // Operator >= spec >= trace on every normalized spec, so the duals
        // come in the opposite order.
        let d_spec = dual_vec(&spec, &y)?;
        let d_op = dual_vec(&NormSpec::Operator, &y)?;
        let d_tr = dual_vec(&NormSpec::Trace, &y)?;
        let gap = (d_op - d_spec).max(d_spec - d_tr);
        reversal.record(gap, 1e-8 * (1.0 + d_tr), || json!({ "spec": spec, "y": y }));
    }
    Ok(SuiteRun {
        suite: Suite::Duality,
        tallies: vec![closed, irrational, involution, pairing, normalized, holder, reversal],
    })
}

fn dominance_suite(cfg: &HarnessConfig, r: &mut SeedRng) -> Result<SuiteRun> {
    let mut hypothesis = Tally::new("majorization_detected");
    let mut transfer = Tally::new("transfer");
    let mut continuum = Tally::new("continuum_t");
    let mut witness = Tally::new("violation_witness");
    let mut pinching = Tally::new("pinching");

    for _ in 0..cfg.trials {
        let n = r.gen_range(2..=6);
        let (t, s) = majorization_pair(n, r);
        let verdict = kyfan_dominates(&t, &s)?;
        hypothesis.expect(verdict.dominates, || json!({ "T": t, "S": s }));
        if verdict.dominates {
            let specs = spec_battery(r);
            let rep = dominance_transfer(&t, &s, &specs)?;
            transfer.record(-rep.min_margin(), 1e-9, || json!({ "T": t, "S": s, "report": rep }));
            for _ in 0..3 {
                let tt: f64 = r.gen_range(0.0..1.0);
                let spec = NormSpec::kyfan_real(tt);
                let gap = norm_mat(&spec, &s)? - norm_mat(&spec, &t)?;
                continuum.record(gap, 1e-9, || json!({ "T": t, "S": s, "t": tt }));
            }
        }

        let (a, b) = (gaussian_matrix(n, r), gaussian_matrix(n, r));
        let v = kyfan_dominates(&a, &b)?;
        if !v.dominates {
            let ok = witness_separates(&a, &b, &v)?;
            witness.expect(ok, || json!({ "T": a, "S": b }));
        }

        let spec = random_normalized_spec(r)?;
        let p = random_partition(n, r)?;
        let pinched = pinch(&a, &p)?;
        let gap = norm_mat(&spec, &pinched)? - norm_mat(&spec, &a)?;
        pinching.record(gap, 1e-10 * (1.0 + norm_mat(&spec, &a)?), || json!({ "spec": spec, "T": a }));
    }
    Ok(SuiteRun {
        suite: Suite::Dominance,
        tallies: vec![hypothesis, transfer, continuum, witness, pinching],
    })
}

fn extreme2_suite(cfg: &HarnessConfig, r: &mut SeedRng) -> Result<SuiteRun> {
    let mut profile_trip = Tally::new("profile_round_trip");
    let mut measure_trip = Tally::new("measure_round_trip");
    let mut mass = Tally::new("mass_is_f_at_one");
    let mut admissible = Tally::new("spec_profiles_admissible");
    let mut mixture = Tally::new("profile_determines_norm");
    let mut extremal = Tally::new("brackets_extremal");
    let mut density = Tally::new("lp_density");

    let lp_every = 10.max(cfg.trials / 10);
    for trial in 0..cfg.trials {
        let p = random_admissible_profile(r)?;
        let mu = decompose(&p)?;
        let back = reconstruct(&mu);
        let err = max_knot_error(&p, &back);
        profile_trip.record(err, 1e-10, || json!({ "profile": p, "measure": mu }));

        let mu = random_measure(r)?;
        let p = reconstruct(&mu);
        let (lo, hi) = (p.eval(0.0), p.eval(1.0));
        mass.record((hi - mu.mass()).abs(), 1e-12, || json!({ "measure": mu, "f0": lo }));
        let back = decompose(&p)?.merged(1e-9);
        let want = mu.merged(1e-9);
        let err = atoms_distance(&want, &back);
        measure_trip.record(err, 1e-9, || json!({ "measure": mu, "decomposed": back }));

        let spec = random_normalized_spec(r)?;
        let prof = profile_of(&spec)?;
        admissible.expect(check_admissible(&prof), || json!({ "spec": spec }));

        let spec = random_exact_profile_spec(r)?;
        let mu = decompose(&profile_of(&spec)?)?;
        let t = gaussian_matrix(2, r);
        let (direct, mixed) = (norm_mat(&spec, &t)?, mu.norm(&t)?);
        mixture.record((direct - mixed).abs(), 1e-8 * (1.0 + direct), || {
            json!({ "spec": spec, "T": t })
        });

        let tb = r.gen_range(0.5..=1.0);
        let rep = not_convex_combination(tb, 5, r.gen())?;
        extremal.expect(rep.passed(), || json!({ "t": tb, "report": rep }));

        if trial % lp_every == 0 {
            let p = [1.5, 2.0, 3.0, 10.0, r.gen_range(1.2..12.0)][trial / lp_every % 5];
            let rep = lp_density_check(p, &uniform_grid(11))?;
            density.record(rep.max_error, 1e-6, || json!({ "p": p, "report": rep }));
        }
    }
    Ok(SuiteRun {
        suite: Suite::Extreme2,
        tallies: vec![profile_trip, measure_trip, mass, admissible, mixture, extremal, density],
    })
}

/// Largest difference of two profiles over the union of their knots.
pub fn max_knot_error(a: &Profile, b: &Profile) -> f64 {
    let (ka, _) = a.samples();
    let (kb, _) = b.samples();
    ka.iter()
        .chain(&kb)
        .map(|&s| (a.eval(s) - b.eval(s)).abs())
        .fold(0.0, f64::max)
}

/// Distance between two merged, sorted atom lists; infinite when the atom
/// counts differ.
pub fn atoms_distance(a: &AtomicMeasure, b: &AtomicMeasure) -> f64 {
    if a.atoms().len() != b.atoms().len() {
        return f64::INFINITY;
    }
    a.atoms()
        .iter()
        .zip(b.atoms())
        .map(|(x, y)| (x.t - y.t).abs().max((x.w - y.w).abs()))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Generators, shared with the test suites.

/// A random rational partition `0 < b_1 < ... < 1` with denominators up to
/// 12.
pub fn random_breakpoints(r: &mut impl Rng) -> Vec<Q> {
    let den = r.gen_range(1..=12i64);
    let mut cuts: Vec<i64> = (1..den).filter(|_| r.gen_bool(0.5)).collect();
    cuts.insert(0, 0);
    cuts.push(den);
    cuts.into_iter().map(|k| Q::new(k, den)).collect()
}

/// A weight with mean exactly normalized to 1.
pub fn random_weight(r: &mut impl Rng) -> Result<WeightFn> {
    let bps = random_breakpoints(r);
    let mut vals: Vec<f64> = (1..bps.len()).map(|_| r.gen_range(0.0..1.0)).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    if vals[0] == 0.0 {
        vals[0] = 1.0;
    }
    let f = StepFn::new(bps, vals)?;
    let mean = f.integral()?;
    WeightFn::new(f.map(|v| v / mean)?)
}

pub fn random_supof(r: &mut impl Rng, count: usize) -> Result<NormSpec> {
    let fs = (0..count).map(|_| random_weight(r)).collect::<Result<_>>()?;
    Ok(NormSpec::SupOf { fs })
}

/// `c` with values in `[0, 1]` attaining 1.
pub fn random_csup(r: &mut impl Rng) -> Result<NormSpec> {
    let bps = random_breakpoints(r);
    let mut vals: Vec<f64> = (1..bps.len()).map(|_| r.gen_range(0.0..1.0)).collect();
    let top = r.gen_range(0..vals.len());
    vals[top] = 1.0;
    Ok(NormSpec::CSup {
        c: StepFn::new(bps, vals)?,
    })
}

/// Twenty normalized specs: the fixed closed forms plus random weights,
/// sups of weights and `c`-sups.
pub fn spec_battery(r: &mut impl Rng) -> Vec<NormSpec> {
    let mut v = vec![
        NormSpec::Operator,
        NormSpec::Trace,
        NormSpec::lp(1.5),
        NormSpec::lp(2.0),
        NormSpec::lp(3.0),
        NormSpec::lp(6.0),
        NormSpec::kyfan(1, 3),
        NormSpec::kyfan(1, 2),
        NormSpec::kyfan(2, 3),
        NormSpec::kyfan_real(std::f64::consts::FRAC_1_SQRT_2),
        NormSpec::KyFanZero,
        NormSpec::tbracket(0.6),
        NormSpec::tbracket(Param::exact(3, 4)),
    ];
    for _ in 0..3 {
        v.push(NormSpec::Weight {
            f: random_weight(r).expect("valid random weight"),
        });
    }
    for count in [2, 3] {
        v.push(random_supof(r, count).expect("valid random weights"));
    }
    for _ in 0..2 {
        v.push(random_csup(r).expect("valid random c"));
    }
    v
}

/// A random polyhedral normalized spec.
pub fn random_polyhedral(r: &mut impl Rng) -> Result<NormSpec> {
    Ok(match r.gen_range(0..7) {
        0 => NormSpec::Operator,
        1 => NormSpec::Trace,
        2 => NormSpec::kyfan(r.gen_range(1..=5), 5),
        3 => NormSpec::Weight { f: random_weight(r)? },
        4 => {
            let count = r.gen_range(1..=4);
            random_supof(r, count)?
        }
        5 => NormSpec::tbracket(r.gen_range(0.5..=1.0)),
        _ => random_csup(r)?,
    })
}

/// A random normalized spec, polyhedral or `L^p`.
pub fn random_normalized_spec(r: &mut impl Rng) -> Result<NormSpec> {
    if r.gen_bool(0.2) {
        Ok(NormSpec::lp(r.gen_range(1.0..8.0)))
    } else {
        random_polyhedral(r)
    }
}

/// Specs whose profile on `M_2(C)` is exactly piecewise linear on the
/// sampling grid.
pub fn random_exact_profile_spec(r: &mut impl Rng) -> Result<NormSpec> {
    Ok(match r.gen_range(0..4) {
        0 => NormSpec::kyfan_real(r.gen_range(0.0..=1.0)),
        1 => NormSpec::Weight { f: random_weight(r)? },
        2 => NormSpec::tbracket(r.gen_range(0.5..=1.0)),
        _ => [NormSpec::Operator, NormSpec::Trace][r.gen_range(0..2)].clone(),
    })
}

/// A pair `(T, S)` with `S` Ky Fan dominated by `T`: a random convex
/// combination of unitary conjugates of `T`, a doubly stochastic mixing of
/// its s-numbers, or a pinching.
pub fn majorization_pair(n: usize, r: &mut impl Rng) -> (CMatrix, CMatrix) {
    let mut s: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..3.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let t = matrix_with_singular_values(&s, r);
    let sm = match r.gen_range(0..3) {
        0 => {
            let m = r.gen_range(2..=5);
            let weights = random_simplex(m, r);
            let mut acc = CMatrix::zeros(n);
            for w in weights {
                let u = random_unitary_with(n, r);
                let conj = &(&u * &t) * &u.adjoint();
                acc = &acc + &conj.scale(w.into());
            }
            acc
        }
        1 => {
            // Birkhoff: a convex combination of permutations.
            let m = r.gen_range(1..=4);
            let weights = random_simplex(m, r);
            let mut mixed = vec![0.0; n];
            for w in weights {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(r);
                for (i, &j) in perm.iter().enumerate() {
                    mixed[i] += w * s[j];
                }
            }
            matrix_with_singular_values(&mixed, r)
        }
        _ => {
            let p = random_partition(n, r).expect("valid partition");
            let u = random_unitary_with(n, r);
            let p = p.conjugate(&u).expect("unitary conjugate");
            pinch(&t, &p).expect("same dimension")
        }
    };
    (t, sm)
}

fn random_simplex(m: usize, r: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| r.gen_range(0.05..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

/// A coordinate partition of `0..n` into random blocks.
pub fn random_partition(n: usize, r: &mut impl Rng) -> Result<Partition> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(r);
    let blocks = r.gen_range(1..=n);
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for (k, i) in idx.into_iter().enumerate() {
        let b = if k < blocks { k } else { r.gen_range(0..blocks) };
        parts[b].push(i);
    }
    Partition::coordinate(n, &parts)
}

/// An admissible piecewise-linear profile: random knots, nondecreasing
/// slopes in `[0, 1/2]`, `f(1) = 1`.
pub fn random_admissible_profile(r: &mut impl Rng) -> Result<Profile> {
    let m = r.gen_range(1..=6);
    let mut knots: Vec<f64> = (0..m - 1).map(|_| r.gen_range(0.02..0.98)).collect();
    knots.extend([0.0, 1.0]);
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let mut slopes: Vec<f64> = (1..knots.len()).map(|_| r.gen_range(0.0..=0.5)).collect();
    slopes.sort_by(f64::total_cmp);
    if r.gen_bool(0.2) {
        slopes[0] = 0.0;
    }
    let mut values = vec![1.0; knots.len()];
    for i in (0..knots.len() - 1).rev() {
        values[i] = values[i + 1] - slopes[i] * (knots[i + 1] - knots[i]);
    }
    Profile::piecewise(knots, values)
}

/// One to four atoms at well-separated locations, endpoints included with
/// positive probability.
pub fn random_measure(r: &mut impl Rng) -> Result<AtomicMeasure> {
    let m = r.gen_range(1..=4);
    let mut ts: Vec<f64> = Vec::with_capacity(m);
    while ts.len() < m {
        let t = match r.gen_range(0..6) {
            0 => 0.5,
            1 => 1.0,
            _ => r.gen_range(0.5..1.0),
        };
        if ts.iter().all(|u| (u - t).abs() > 1e-3) {
            ts.push(t);
        }
    }
    let ws = random_simplex(m, r);
    AtomicMeasure::new(ts.into_iter().zip(ws).map(|(t, w)| Atom { t, w }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_has_twenty_normalized_specs() {
        let mut r = rng(1);
        let b = spec_battery(&mut r);
        assert_eq!(b.len(), 20);
        for spec in &b {
            assert!((spec.identity_norm().unwrap() - 1.0).abs() < 1e-12, "{}", spec.label());
        }
    }

    #[test]
    fn generated_pairs_are_dominated() {
        let mut r = rng(2);
        for _ in 0..100 {
            let n = r.gen_range(2..=6);
            let (t, s) = majorization_pair(n, &mut r);
            assert!(kyfan_dominates(&t, &s).unwrap().dominates);
        }
    }

    #[test]
    fn generated_profiles_are_admissible() {
        let mut r = rng(3);
        for _ in 0..200 {
            assert!(check_admissible(&random_admissible_profile(&mut r).unwrap()));
        }
    }

    #[test]
    fn all_suites_pass_and_are_deterministic() {
        let cfg = HarnessConfig::new(7, 8, Suite::All);
        let a = run(&cfg).unwrap();
        assert!(a.passed, "{}", serde_json::to_string_pretty(&a).unwrap());
        let b = run(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.suites.len(), 4);
    }

    #[test]
    fn injected_bug_is_caught_with_witness() {
        let mut cfg = HarnessConfig::new(7, 3, Suite::Axioms);
        cfg.inject_triangle_bug = true;
        let rep = run(&cfg).unwrap();
        assert!(!rep.passed);
        let w = rep.witness.unwrap();
        assert_eq!(w.check, "triangle");
        assert!(w.detail["matrices"].as_array().unwrap().len() == 2);
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("extreme2".parse::<Suite>().unwrap(), Suite::Extreme2);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
