//! Normalized unitarily invariant norms on `M_2(C)` through their profiles
//! `f(s) = |||1 (+) s|||`, and the `<t>`-norms `max{t ||T||, ||T||_1}` that
//! are their extreme points.
//!
//! An admissible piecewise-linear profile is a finite mixture of `<t>`-norm
//! profiles `max{t, (1+s)/2}`. Each such profile has slope 0 up to its knot
//! at `s = 2t - 1` and slope 1/2 after it, so a slope jump at a knot `a` is
//! carried by an atom at `t = (1 + a)/2`.

mod quadrature;

pub use quadrature::adaptive_simpson;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, SNumbers};
use crate::norms::{norm_mat, norm_snumbers, NormSpec};
use crate::random::rng;

/// Tolerance for the profile invariants.
pub const PROFILE_TOL: f64 = 1e-12;
/// Tolerance on the total mass of an atomic measure.
pub const MASS_TOL: f64 = 1e-10;
/// Number of interior Chebyshev points used to sample a profile.
pub const SAMPLE_POINTS: usize = 257;

/// Atoms lighter than this are dropped by [`decompose`]. Slopes over knot
/// gaps of `1e-3` carry rounding near `5e-13`; a dropped atom moves the
/// profile by at most half its weight.
const ATOM_FLOOR: f64 = 1e-12;

/// A profile `s -> |||1 (+) s|||` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "ProfileRepr")]
pub enum Profile {
    /// Linear interpolation of `values` at `knots`, `0 = x_0 < ... < x_m = 1`.
    Piecewise { knots: Vec<f64>, values: Vec<f64> },
    /// `((1 + s^p)/2)^{1/p}`.
    Lp { p: f64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ProfileRepr {
    Piecewise { knots: Vec<f64>, values: Vec<f64> },
    Lp { p: f64 },
}

impl TryFrom<ProfileRepr> for Profile {
    type Error = Error;

    fn try_from(r: ProfileRepr) -> Result<Self> {
        match r {
            ProfileRepr::Piecewise { knots, values } => Profile::piecewise(knots, values),
            ProfileRepr::Lp { p } => Profile::lp(p),
        }
    }
}

impl Profile {
    pub fn piecewise(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::Inadmissible(m.into()));
        if knots.len() < 2 || knots.len() != values.len() {
            return bad("need at least two knots and one value per knot");
        }
        if knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return bad("non-finite knot or value");
        }
        if knots[0] != 0.0 || knots[knots.len() - 1] != 1.0 {
            return bad("knots must start at 0 and end at 1");
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return bad("knots must be strictly increasing");
        }
        Ok(Profile::Piecewise { knots, values })
    }

    pub fn lp(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::Domain(format!("L^p profile needs 1 <= p < inf, got {p}")));
        }
        Ok(Profile::Lp { p })
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Profile::Lp { p } => lp_profile(*p, s),
            Profile::Piecewise { knots, values } => {
                let s = s.clamp(0.0, 1.0);
                let i = knots.partition_point(|k| *k <= s).clamp(1, knots.len() - 1);
                let (x0, x1) = (knots[i - 1], knots[i]);
                let (y0, y1) = (values[i - 1], values[i]);
                y0 + (y1 - y0) * (s - x0) / (x1 - x0)
            }
        }
    }

    /// Knots and values; `L^p` profiles are sampled on the Chebyshev grid.
    pub fn samples(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Profile::Piecewise { knots, values } => (knots.clone(), values.clone()),
            Profile::Lp { .. } => {
                let grid = sample_grid();
                let values = grid.iter().map(|&s| self.eval(s)).collect();
                (grid, values)
            }
        }
    }

    /// The profile as a piecewise-linear one (sampling `L^p` profiles).
    pub fn to_piecewise(&self) -> Profile {
        let (knots, values) = self.samples();
        Profile::Piecewise { knots, values }
    }

    /// `s,f(s)` lines at 6 significant digits, with a header.
    pub fn to_csv(&self) -> String {
        let (knots, values) = self.samples();
        let mut out = String::from("s,f\n");
        for (s, f) in knots.iter().zip(&values) {
            out.push_str(&format!("{},{}\n", sig6(*s), sig6(*f)));
        }
        out
    }
}

fn sig6(x: f64) -> String {
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// `0`, 257 Chebyshev-spaced interior points, `1`.
pub fn sample_grid() -> Vec<f64> {
    let m = SAMPLE_POINTS as f64;
    let mut grid = vec![0.0];
    grid.extend((0..SAMPLE_POINTS).rev().map(|k| {
        let theta = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / (2.0 * m);
        0.5 * (1.0 + theta.cos())
    }));
    grid.push(1.0);
    grid
}

/// `f_p(s) = ((1 + s^p)/2)^{1/p}`.
pub fn lp_profile(p: f64, s: f64) -> f64 {
    ((1.0 + s.powf(p)) / 2.0).powf(1.0 / p)
}

/// `max{t, (1+s)/2}`, the profile of the `<t>`-norm.
pub fn bracket_profile(t: f64, s: f64) -> f64 {
    t.max(0.5 * (1.0 + s))
}

/// The exact `<t>`-norm profile, knot at `2t - 1`.
pub fn bracket(t: f64) -> Result<Profile> {
    if !(0.5..=1.0).contains(&t) {
        return Err(Error::Domain(format!("<t> norm needs 1/2 <= t <= 1, got {t}")));
    }
    let mut knots = vec![0.0];
    let kink = 2.0 * t - 1.0;
    if kink > 0.0 && kink < 1.0 {
        knots.push(kink);
    }
    knots.push(1.0);
    let values = knots.iter().map(|&s| bracket_profile(t, s)).collect();
    Profile::piecewise(knots, values)
}

/// The profile of `spec` on `M_2(C)`. `<t>` norms and their endpoints
/// (operator, trace) are exact; `L^p` is kept in closed form; everything
/// else is sampled on [`sample_grid`].
pub fn profile_of(spec: &NormSpec) -> Result<Profile> {
    spec.validate()?;
    match spec {
        NormSpec::TBracket { t } => bracket(t.to_f64()),
        NormSpec::Operator | NormSpec::KyFanZero => bracket(1.0),
        NormSpec::Trace => bracket(0.5),
        NormSpec::Lp { p } => Profile::lp(p.to_f64()),
        _ => {
            let knots = sample_grid();
            let values = knots
                .iter()
                .map(|&s| norm_snumbers(spec, &SNumbers::from_moduli(&[1.0, s])?))
                .collect::<Result<Vec<_>>>()?;
            Profile::piecewise(knots, values)
        }
    }
}

/// Which profile invariants hold, with the two equivalent admissibility
/// conditions evaluated separately.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Admissibility {
    pub convex: bool,
    pub nondecreasing: bool,
    pub unit_at_one: bool,
    pub end_slope_ok: bool,
    pub sandwich: bool,
    /// Increasing, convex, `(1+s)/2 <= f <= 1`.
    pub sandwich_condition: bool,
    /// Increasing, convex, `f(1) = 1`, `f'(1-) <= 1/2`.
    pub endpoint_condition: bool,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.sandwich_condition && self.endpoint_condition
    }

    /// The first violated invariant, by name.
    pub fn violated(&self) -> Option<&'static str> {
        [
            (self.convex, "convexity"),
            (self.nondecreasing, "monotonicity"),
            (self.sandwich, "(1+s)/2 <= f(s) <= 1"),
            (self.unit_at_one, "f(1) = 1"),
            (self.end_slope_ok, "f'(1-) <= 1/2"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

pub fn admissibility(p: &Profile) -> Admissibility {
    let (x, v) = p.samples();
    let m = x.len();
    // Convexity in value space: each interior value lies on or below the
    // chord of its neighbours. Slopes over tiny cells amplify rounding.
    let convex = (1..m - 1).all(|i| {
        let lam = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        v[i] <= (1.0 - lam) * v[i - 1] + lam * v[i + 1] + PROFILE_TOL
    });
    let nondecreasing = v.windows(2).all(|w| w[1] >= w[0] - PROFILE_TOL);
    let unit_at_one = (v[m - 1] - 1.0).abs() <= PROFILE_TOL;
    // f'(1-) <= 1/2 on the last cell, again in value space.
    let end_slope_ok = v[m - 1] - v[m - 2] <= 0.5 * (x[m - 1] - x[m - 2]) + PROFILE_TOL;
    let sandwich = x
        .iter()
        .zip(&v)
        .all(|(s, f)| *f >= 0.5 * (1.0 + s) - PROFILE_TOL && *f <= 1.0 + PROFILE_TOL);
    Admissibility {
        convex,
        nondecreasing,
        unit_at_one,
        end_slope_ok,
        sandwich,
        sandwich_condition: convex && nondecreasing && sandwich,
        endpoint_condition: convex && nondecreasing && unit_at_one && end_slope_ok,
    }
}

pub fn check_admissible(p: &Profile) -> bool {
    admissibility(p).admissible()
}

/// One atom `w delta_t` of a measure on `[1/2, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub w: f64,
}

/// A probability measure on `[1/2, 1]` with finitely many atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct MeasureRepr {
    atoms: Vec<Atom>,
}

impl TryFrom<MeasureRepr> for AtomicMeasure {
    type Error = Error;

    fn try_from(r: MeasureRepr) -> Result<Self> {
        AtomicMeasure::new(r.atoms)
    }
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMeasure(m));
        if atoms.is_empty() {
            return bad("no atoms".into());
        }
        for a in &atoms {
            if !(0.5..=1.0).contains(&a.t) {
                return bad(format!("atom location {} outside [1/2, 1]", a.t));
            }
            if !(a.w.is_finite() && a.w > 0.0) {
                return bad(format!("atom weight {} must be positive", a.w));
            }
        }
        let mass: f64 = atoms.iter().map(|a| a.w).sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return bad(format!("total mass {mass} is not 1"));
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn dirac(t: f64) -> Result<Self> {
        AtomicMeasure::new(vec![Atom { t, w: 1.0 }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }

    /// Sorted by location with atoms closer than `tol` merged.
    pub fn merged(&self, tol: f64) -> AtomicMeasure {
        let mut atoms = self.atoms.clone();
        atoms.sort_by(|a, b| a.t.total_cmp(&b.t));
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match out.last_mut() {
                Some(last) if (a.t - last.t).abs() <= tol => last.w += a.w,
                _ => out.push(a),
            }
        }
        AtomicMeasure { atoms: out }
    }

    /// `int max{t, (1+s)/2} d mu(t)`.
    pub fn profile_at(&self, s: f64) -> f64 {
        self.atoms.iter().map(|a| a.w * bracket_profile(a.t, s)).sum()
    }

    /// `int |||T|||_<t> d mu(t)` on `M_2(C)` or any `M_n(C)`.
    pub fn norm(&self, t: &CMatrix) -> Result<f64> {
        self.atoms
            .iter()
            .map(|a| Ok(a.w * norm_mat(&NormSpec::tbracket(a.t), t)?))
            .sum()
    }
}

/// The measure whose `<t>` mixture reproduces an admissible piecewise-linear
/// profile: weight `alpha_0` at `t = 1/2`, `alpha_i - alpha_{i-1}` at
/// `t = (1 + a_i)/2` and `1 - alpha_{m-1}` at `t = 1`, where `alpha_i/2` is
/// the slope on `[a_i, a_{i+1}]`.
pub fn decompose(p: &Profile) -> Result<AtomicMeasure> {
    let Profile::Piecewise { knots, values } = p else {
        return Err(Error::Unsupported("decompose needs a piecewise-linear profile".into()));
    };
    if let Some(name) = admissibility(p).violated() {
        return Err(Error::Inadmissible(format!("profile violates {name}")));
    }
    let mut alphas: Vec<f64> = Vec::with_capacity(knots.len() - 1);
    for (x, v) in knots.windows(2).zip(values.windows(2)) {
        let a = (2.0 * (v[1] - v[0]) / (x[1] - x[0])).clamp(0.0, 1.0);
        let prev = alphas.last().copied().unwrap_or(0.0);
        alphas.push(a.max(prev));
    }
    let mut atoms = Vec::new();
    let mut push = |t: f64, w: f64| {
        if w > ATOM_FLOOR {
            atoms.push(Atom { t, w });
        }
    };
    push(0.5, alphas[0]);
    for i in 1..alphas.len() {
        push(0.5 * (1.0 + knots[i]), alphas[i] - alphas[i - 1]);
    }
    push(1.0, 1.0 - alphas[alphas.len() - 1]);
    AtomicMeasure::new(atoms)
}

/// `s -> sum_j w_j max{t_j, (1+s)/2}` with knots at `2 t_j - 1`.
pub fn reconstruct(mu: &AtomicMeasure) -> Profile {
    let mut knots = vec![0.0, 1.0];
    knots.extend(
        mu.atoms
            .iter()
            .map(|a| 2.0 * a.t - 1.0)
            .filter(|k| *k > 0.0 && *k < 1.0),
    );
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let values = knots.iter().map(|&s| mu.profile_at(s)).collect();
    Profile::Piecewise { knots, values }
}

/// `f_p''(x) = (p-1)/4 x^{p-2} ((1+x^p)/2)^{1/p-2}`.
pub fn lp_second_derivative(p: f64, x: f64) -> f64 {
    let g = 0.5 * (1.0 + x.powf(p));
    0.25 * (p - 1.0) * x.powf(p - 2.0) * g.powf(1.0 / p - 2.0)
}

/// The density `4 f_p''(2t - 1)` of the `L^p` norm against the `<t>` family.
pub fn lp_density(p: f64, t: f64) -> f64 {
    4.0 * lp_second_derivative(p, 2.0 * t - 1.0)
}

/// `int_{1/2}^1 max{t, (1+s)/2} 4 f_p''(2t-1) dt` by adaptive Simpson.
///
/// With `x = 2t - 1 = u^m` and `m = ceil(1/(p-1))` the factor `x^{p-2}`
/// becomes the bounded `m u^{m(p-1)-1}`, and the kink at `x = s` is a panel
/// boundary.
pub fn lp_density_integral(p: f64, s: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::Domain(format!("L^p density needs p > 1, got {p}")));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s must lie in [0, 1], got {s}")));
    }
    let m = if p >= 2.0 { 1.0 } else { (1.0 / (p - 1.0)).ceil() };
    let integrand = |u: f64| {
        let x = u.powf(m);
        let g = 0.5 * (1.0 + x.powf(p));
        let jac_fpp = 0.25 * (p - 1.0) * m * u.powf(m * (p - 1.0) - 1.0) * g.powf(1.0 / p - 2.0);
        let weight = 0.5 * (1.0 + x.max(s));
        // dt = dx/2, and the density carries a factor 4.
        2.0 * weight * jac_fpp
    };
    let split = s.powf(1.0 / m);
    let tol = 1e-13;
    Ok(adaptive_simpson(&integrand, 0.0, split, tol, 50) + adaptive_simpson(&integrand, split, 1.0, tol, 50))
}

#[derive(Clone, Debug, Serialize)]
pub struct LpDensityRow {
    pub s: f64,
    pub integral: f64,
    pub exact: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpDensityReport {
    pub p: f64,
    pub rows: Vec<LpDensityRow>,
    pub max_error: f64,
}

/// Compares the density integral with `f_p(s)` over `grid`.
pub fn lp_density_check(p: f64, grid: &[f64]) -> Result<LpDensityReport> {
    let rows = grid
        .iter()
        .map(|&s| {
            let integral = lp_density_integral(p, s)?;
            let exact = lp_profile(p, s);
            Ok(LpDensityRow {
                s,
                integral,
                exact,
                error: (integral - exact).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    Ok(LpDensityReport { p, rows, max_error })
}

/// `k/(n-1)` for `k = 0..n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalityReport {
    pub t: f64,
    pub trials: usize,
    /// Candidates with `f_1 = f`, so that `f_2 = f` as well.
    pub forced_equal: usize,
    /// Candidates whose complementary part `f_2` is not admissible.
    pub infeasible: usize,
    /// Candidates with `f_1 != f` and admissible `f_2`.
    pub counterexamples: usize,
}

impl ExtremalityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0
    }
}

/// Tries to split the `<t>` profile as `alpha f_1 + (1 - alpha) f_2` with
/// `f_1` reconstructed from a random two-atom measure. Since the profile has
/// slopes 0 and 1/2 only, the bounds on `f'` pin both parts, so every
/// candidate must be either `f` itself or leave an inadmissible `f_2`.
pub fn not_convex_combination(t: f64, trials: usize, seed: u64) -> Result<ExtremalityReport> {
    let f = bracket(t)?;
    let mut r = rng(seed);
    let mut report = ExtremalityReport {
        t,
        trials,
        forced_equal: 0,
        infeasible: 0,
        counterexamples: 0,
    };
    for _ in 0..trials {
        let alpha = r.gen_range(0.05..0.95);
        let (t1, t2) = if r.gen_bool(0.25) {
            (t, t)
        } else {
            (r.gen_range(0.5..=1.0), r.gen_range(0.5..=1.0))
        };
        let w = r.gen_range(0.05..0.95);
        let mu = AtomicMeasure::new(vec![Atom { t: t1, w }, Atom { t: t2, w: 1.0 - w }])?;
        match split_outcome(&f, &reconstruct(&mu), alpha)? {
            Split::ForcedEqual => report.forced_equal += 1,
            Split::Infeasible => report.infeasible += 1,
            Split::Counterexample => report.counterexamples += 1,
        }
    }
    Ok(report)
}

enum Split {
    ForcedEqual,
    Infeasible,
    Counterexample,
}

fn split_outcome(f: &Profile, f1: &Profile, alpha: f64) -> Result<Split> {
    let (kf, _) = f.samples();
    let (k1, _) = f1.samples();
    let mut knots: Vec<f64> = kf.into_iter().chain(k1).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    if knots.iter().all(|&s| (f1.eval(s) - f.eval(s)).abs() <= 1e-9) {
        return Ok(Split::ForcedEqual);
    }
    let values = knots
        .iter()
        .map(|&s| (f.eval(s) - alpha * f1.eval(s)) / (1.0 - alpha))
        .collect();
    let f2 = Profile::piecewise(knots, values)?;
    Ok(if check_admissible(&f2) {
        Split::Counterexample
    } else {
        Split::Infeasible
    })
}
