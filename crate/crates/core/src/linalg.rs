//! Dense complex matrices with the normalized trace, a cyclic Jacobi
//! eigensolver for Hermitian matrices, and the decompositions built on it.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stepfn::StepFn;

pub type C64 = Complex64;

const JACOBI_MAX_SWEEPS: usize = 64;
const JACOBI_REL_TOL: f64 = 1e-14;
const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues of `T*T` below this fraction of `||T||^2` are treated as 0.
const CLAMP_REL: f64 = 1e-14;
const PROJECTION_TOL: f64 = 1e-10;

/// Dense `n x n` complex matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<MatrixRepr> for CMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.entries.len() != r.n {
            return Err(Error::DimensionMismatch {
                expected: r.n,
                found: r.entries.len(),
            });
        }
        let mut data = Vec::with_capacity(r.n * r.n);
        for row in &r.entries {
            if row.len() != r.n {
                return Err(Error::DimensionMismatch {
                    expected: r.n,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|[re, im]| C64::new(*re, *im)));
        }
        CMatrix::from_vec(r.n, data)
    }
}

impl From<CMatrix> for MatrixRepr {
    fn from(m: CMatrix) -> Self {
        let entries = m
            .data
            .chunks(m.n)
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        MatrixRepr { n: m.n, entries }
    }
}

impl CMatrix {
    pub fn from_vec(n: usize, data: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(CMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows must form a square matrix".into()));
        }
        CMatrix::from_vec(n, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        CMatrix::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![C64::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let mut m = CMatrix::zeros(d.len());
        for (i, &z) in d.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let d: Vec<C64> = d.iter().map(|&x| C64::new(x, 0.0)).collect();
        CMatrix::from_diag(&d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, a: C64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * a).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// `tau_n(T) = tr(T) / n`.
    pub fn normalized_trace(&self) -> C64 {
        self.trace() / self.n as f64
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    fn from_columns(cols: &[Vec<C64>]) -> CMatrix {
        let n = cols.len();
        let mut m = CMatrix::zeros(n);
        for (j, col) in cols.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    /// `max |A - A*|` over entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `||U*U - I||_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.adjoint() * self) - &CMatrix::identity(self.n)).max_abs()
    }

    fn hermitian_part(&self) -> CMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] = C64::new(self[(i, i)].re, 0.0);
            for j in i + 1..self.n {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    fn offdiag_frobenius(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    fn check_same_dim(&self, other: &CMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sum");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in difference");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Eigenvalues (descending) and the unitary whose columns are eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// `A = U diag(lambda) U*` for Hermitian `A`.
pub fn eig_hermitian(a: &CMatrix) -> Result<HermitianEigen> {
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    jacobi(a.hermitian_part())
}

/// Cyclic complex Jacobi on a Hermitian matrix.
fn jacobi(mut a: CMatrix) -> Result<HermitianEigen> {
    let n = a.n;
    let mut v = CMatrix::identity(n);
    let target = JACOBI_REL_TOL * a.frobenius();

    let mut sweeps = 0;
    while a.offdiag_frobenius() > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let cols: Vec<Vec<C64>> = order.iter().map(|&i| v.column(i)).collect();
    Ok(HermitianEigen {
        values,
        vectors: CMatrix::from_columns(&cols),
    })
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates into `v`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let n = a.n;
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // Phase so that the (p, q) entry becomes the real number |a_pq|.
    let phase = (apq / r).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 { 1.0 } else { -1.0 } / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // G = diag(1, phase) * [[c, s], [-s, c]] in the (p, q) plane.
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    a[(p, q)] = C64::zero();
    a[(q, p)] = C64::zero();
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Singular values `s_1 >= ... >= s_n >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SNumbers {
    s: Vec<f64>,
}

impl SNumbers {
    /// Sorts the moduli of `values` into a nonincreasing profile.
    pub fn from_moduli(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMatrix("empty s-number vector".into()));
        }
        let mut s: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite s-number".into()));
        }
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(SNumbers { s })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `s_1 chi_[0,1/n) + s_2 chi_[1/n,2/n) + ...`
    pub fn to_step(&self) -> StepFn {
        StepFn::uniform(&self.s).expect("nonempty finite profile")
    }

    /// `s_1 + ... + s_k` for `k = 1..=n`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.s
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }
}

/// Singular values with the right singular vectors (eigenvectors of `T*T`).
struct RightSvd {
    s: Vec<f64>,
    w: CMatrix,
}

fn right_svd(t: &CMatrix) -> Result<RightSvd> {
    let gram = (&t.adjoint() * t).hermitian_part();
    let eig = jacobi(gram)?;
    let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let s = eig
        .values
        .iter()
        .map(|&l| if l <= CLAMP_REL * top { 0.0 } else { l.sqrt() })
        .collect();
    Ok(RightSvd { s, w: eig.vectors })
}

pub fn s_numbers(t: &CMatrix) -> Result<SNumbers> {
    let svd = right_svd(t)?;
    Ok(SNumbers { s: svd.s })
}

/// The step function `mu_s(T)` on the uniform `n`-partition.
pub fn mu_step(t: &CMatrix) -> Result<StepFn> {
    Ok(s_numbers(t)?.to_step())
}

/// `|T| = (T*T)^{1/2}`.
pub fn abs(t: &CMatrix) -> Result<CMatrix> {
    let svd = right_svd(t)?;
    Ok(spectral_sum(&svd.w, &svd.s))
}

/// `sum_i d_i w_i w_i*` over the columns `w_i` of `w`.
fn spectral_sum(w: &CMatrix, d: &[f64]) -> CMatrix {
    let n = w.n;
    let mut out = CMatrix::zeros(n);
    for (k, &dk) in d.iter().enumerate() {
        if dk == 0.0 {
            continue;
        }
        for i in 0..n {
            let wik = w[(i, k)] * dk;
            for j in 0..n {
                out[(i, j)] += wik * w[(j, k)].conj();
            }
        }
    }
    out
}

/// Projection onto the span of the top `k` right singular vectors of `T`.
pub fn top_singular_projection(t: &CMatrix, k: usize) -> Result<CMatrix> {
    if k > t.n {
        return Err(Error::Domain(format!("k = {k} exceeds dimension {}", t.n)));
    }
    let svd = right_svd(t)?;
    let d: Vec<f64> = (0..t.n).map(|i| if i < k { 1.0 } else { 0.0 }).collect();
    Ok(spectral_sum(&svd.w, &d))
}

/// A unitary `V` with `T = V |T|`.
pub fn polar_unitary(t: &CMatrix) -> Result<CMatrix> {
    let n = t.n;
    let svd = right_svd(t)?;
    let s1 = svd.s[0];
    let mut left: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (k, &sk) in svd.s.iter().enumerate() {
        if sk <= 1e-12 * s1 || sk == 0.0 {
            break;
        }
        let w = svd.w.column(k);
        let tw: Vec<C64> = (0..n)
            .map(|i| (0..n).map(|j| t[(i, j)] * w[j]).sum::<C64>() / sk)
            .collect();
        if let Some(u) = orthonormalize_against(&tw, &left) {
            left.push(u);
        } else {
            break;
        }
    }
    complete_basis(&mut left, n);
    let u = CMatrix::from_columns(&left);
    Ok(&u * &svd.w.adjoint())
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Gram–Schmidt (two passes) of `v` against orthonormal `basis`.
fn orthonormalize_against(v: &[C64], basis: &[Vec<C64>]) -> Option<Vec<C64>> {
    let mut r = v.to_vec();
    let original = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &r);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
    }
    let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm <= 1e-8 * original.max(f64::MIN_POSITIVE) {
        return None;
    }
    Some(r.into_iter().map(|z| z / norm).collect())
}

/// Extends an orthonormal family to a basis of `C^n` with standard vectors.
fn complete_basis(basis: &mut Vec<Vec<C64>>, n: usize) {
    while basis.len() < n {
        let best = (0..n)
            .filter_map(|i| {
                let mut e = vec![C64::zero(); n];
                e[i] = C64::new(1.0, 0.0);
                let mut r = e.clone();
                for b in basis.iter() {
                    let c = dot(b, &r);
                    for (ri, bi) in r.iter_mut().zip(b) {
                        *ri -= c * bi;
                    }
                }
                let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                (norm > 1e-6).then_some((norm, e))
            })
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, e)| e)
            .expect("a standard vector outside a proper subspace");
        let u = orthonormalize_against(&best, basis).expect("residual checked above");
        basis.push(u);
    }
}

/// Modified Gram–Schmidt of the columns of `g`; for a complex Gaussian `g`
/// the result is Haar distributed.
pub fn unitary_from_gaussian(g: &CMatrix) -> CMatrix {
    let n = g.n;
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        match orthonormalize_against(&g.column(j), &cols) {
            Some(u) => cols.push(u),
            None => break,
        }
    }
    complete_basis(&mut cols, n);
    CMatrix::from_columns(&cols)
}

/// Seeded random unitary, reproducible per `(n, seed)`.
pub fn random_unitary(n: usize, seed: u64) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
    }
    let mut rng = crate::random::rng(seed);
    Ok(crate::random::random_unitary_with(n, &mut rng))
}

/// Mutually orthogonal projections summing to the identity.
#[derive(Clone, Debug)]
pub struct Partition {
    projections: Vec<CMatrix>,
}

impl Partition {
    pub fn new(projections: Vec<CMatrix>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidPartition(m));
        let Some(first) = projections.first() else {
            return bad("no projections".into());
        };
        let n = first.n;
        let mut total = CMatrix::zeros(n);
        for (i, e) in projections.iter().enumerate() {
            first.check_same_dim(e)?;
            if e.hermitian_deviation() > PROJECTION_TOL {
                return bad(format!("E{i} is not Hermitian"));
            }
            if (&(e * e) - e).max_abs() > PROJECTION_TOL {
                return bad(format!("E{i} is not idempotent"));
            }
            for (j, f) in projections.iter().enumerate().skip(i + 1) {
                if (e * f).max_abs() > PROJECTION_TOL {
                    return bad(format!("E{i} and E{j} are not orthogonal"));
                }
            }
            total = &total + e;
        }
        if (&total - &CMatrix::identity(n)).max_abs() > PROJECTION_TOL {
            return bad("projections do not sum to the identity".into());
        }
        Ok(Partition { projections })
    }

    /// Coordinate projections for a partition of `0..n` into `blocks`.
    pub fn coordinate(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let projections = blocks
            .iter()
            .map(|b| {
                let mut d = vec![0.0; n];
                for &i in b {
                    if i >= n {
                        return Err(Error::InvalidPartition(format!("index {i} out of range")));
                    }
                    d[i] = 1.0;
                }
                Ok(CMatrix::from_real_diag(&d))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(projections)
    }

    /// `{U E_i U*}`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        let ua = u.adjoint();
        let projections = self
            .projections
            .iter()
            .map(|e| {
                let mut p = &(u * e) * &ua;
                p = p.hermitian_part();
                p
            })
            .collect();
        Partition::new(projections)
    }

    pub fn projections(&self) -> &[CMatrix] {
        &self.projections
    }

    pub fn n(&self) -> usize {
        self.projections[0].n
    }
}

/// `sum_i E_i T E_i`.
pub fn pinch(t: &CMatrix, p: &Partition) -> Result<CMatrix> {
    if p.n() != t.n {
        return Err(Error::DimensionMismatch {
            expected: t.n,
            found: p.n(),
        });
    }
    let mut out = CMatrix::zeros(t.n);
    for e in &p.projections {
        out = &out + &(&(e * t) * e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_matrix, rng};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn reconstruct(e: &HermitianEigen) -> CMatrix {
        spectral_sum(&e.vectors, &e.values)
    }

    #[test]
    fn eig_diagonal() {
        let e = eig_hermitian(&CMatrix::from_real_diag(&[2.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
        assert_eq!(e.vectors, CMatrix::identity(2));
    }

    #[test]
    fn eig_pauli_x() {
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = eig_hermitian(&x).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], -1.0, epsilon = 1e-14);
        assert!(e.vectors.unitarity_defect() < 1e-12);
    }

    #[test]
    fn eig_random_hermitian_reconstructs() {
        let mut r = rng(11);
        for n in [1, 2, 5, 8, 16] {
            let g = gaussian_matrix(n, &mut r);
            let a = (&g + &g.adjoint()).hermitian_part();
            let e = eig_hermitian(&a).unwrap();
            let resid = (&reconstruct(&e) - &a).frobenius() / a.frobenius();
            assert!(resid < 1e-9, "n={n} residual {resid}");
            assert!(e.vectors.unitarity_defect() < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(eig_hermitian(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn s_numbers_examples() {
        let s = s_numbers(&CMatrix::from_real_diag(&[3.0, -4.0])).unwrap();
        assert_eq!(s.as_slice(), &[4.0, 3.0]);

        let u = random_unitary(5, 3).unwrap();
        for v in s_numbers(&u).unwrap().as_slice() {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-9);
        }

        let nil = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(s_numbers(&nil).unwrap().as_slice(), &[2.0, 0.0]);
    }

    #[test]
    fn mu_step_examples() {
        assert_eq!(mu_step(&CMatrix::identity(2)).unwrap().coalesce(0.0), StepFn::constant(1.0));
        assert_eq!(
            mu_step(&CMatrix::from_real_diag(&[3.0, 1.0])).unwrap(),
            StepFn::uniform(&[3.0, 1.0]).unwrap()
        );
        assert_eq!(
            mu_step(&CMatrix::from_real_diag(&[1.0, 2.0, 3.0])).unwrap(),
            StepFn::uniform(&[3.0, 2.0, 1.0]).unwrap()
        );
    }

    #[test]
    fn pinch_examples() {
        let mut r = rng(5);
        let t = gaussian_matrix(3, &mut r);
        let whole = Partition::new(vec![CMatrix::identity(3)]).unwrap();
        assert_eq!(pinch(&t, &whole).unwrap(), t);

        let coords = Partition::coordinate(2, &[vec![0], vec![1]]).unwrap();
        let d = CMatrix::from_real_diag(&[4.0, -1.0]);
        assert_eq!(pinch(&d, &coords).unwrap(), d);

        let ones = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!(pinch(&ones, &coords).unwrap(), CMatrix::identity(2));

        let wrong = Partition::coordinate(3, &[vec![0, 1, 2]]).unwrap();
        assert!(pinch(&ones, &wrong).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::coordinate(2, &[vec![0]]).is_err());
        assert!(Partition::coordinate(2, &[vec![0, 1], vec![1]]).is_err());
        let half = CMatrix::from_real_diag(&[0.5, 1.0]);
        assert!(Partition::new(vec![half]).is_err());
    }

    #[test]
    fn polar_examples() {
        let pd = CMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]).unwrap();
        let v = polar_unitary(&pd).unwrap();
        assert!((&v - &CMatrix::identity(2)).max_abs() < 1e-10);

        let minus = CMatrix::identity(3).scale(c(-1.0));
        let v = polar_unitary(&minus).unwrap();
        assert!((&v - &minus).max_abs() < 1e-10);

        let mut r = rng(9);
        for _ in 0..10 {
            let t = gaussian_matrix(4, &mut r);
            let v = polar_unitary(&t).unwrap();
            let resid = (&t - &(&v * &abs(&t).unwrap())).frobenius();
            assert!(resid <= 1e-8, "residual {resid}");
            assert!(v.unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn polar_rank_deficient_is_unitary() {
        let t = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let v = polar_unitary(&t).unwrap();
        assert!(v.unitarity_defect() < 1e-12);
        let resid = (&t - &(&v * &abs(&t).unwrap())).frobenius();
        assert!(resid < 1e-12);
    }

    #[test]
    fn random_unitary_examples() {
        let u = random_unitary(1, 42).unwrap();
        assert_abs_diff_eq!(u[(0, 0)].norm(), 1.0, epsilon = 1e-15);
        assert_eq!(random_unitary(4, 7).unwrap(), random_unitary(4, 7).unwrap());
        assert_ne!(random_unitary(4, 7).unwrap(), random_unitary(4, 8).unwrap());
        assert!(random_unitary(8, 1).unwrap().unitarity_defect() < 1e-10);
        assert!(random_unitary(0, 1).is_err());
    }

    #[test]
    fn json_form() {
        let m: CMatrix = serde_json::from_str(
            r#"{ "n": 2, "entries": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[2.0,0.0]]] }"#,
        )
        .unwrap();
        assert_eq!(m, CMatrix::from_real_diag(&[1.0, 2.0]));
        assert!(serde_json::from_str::<CMatrix>(r#"{"n":2,"entries":[[[1.0,0.0]]]}"#).is_err());
    }
}
