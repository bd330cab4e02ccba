//! Vertex enumeration for `{y : y_1 >= ... >= y_n >= 0, c_j.y <= 1}` by the
//! double-description method.
//!
//! In the coordinates `z_l = y_l - y_{l+1}` (`z_n = y_n`) the ordering rows
//! become `z >= 0` and each `c_j.y <= 1` becomes `C_j.z <= 1` with `C_j` the
//! prefix sums of `c_j`. The homogenized cone
//! `{(z, lambda) : z >= 0, lambda >= 0, lambda - C_j.z >= 0}` starts from the
//! coordinate rays and absorbs one constraint at a time; adjacency of ray
//! pairs uses the combinatorial test on zero sets.

use crate::error::{Error, Result};

pub const MAX_ENUM_DIM: usize = 12;
const ZERO_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn empty(bits: usize) -> Self {
        ZeroSet(vec![0; bits.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn contains_all(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Clone, Debug)]
struct Ray {
    x: Vec<f64>,
    zeros: ZeroSet,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let m = x.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if m > 0.0 {
        x.iter_mut().for_each(|v| *v /= m);
    }
}

/// Vertices of the ordered-cone polytope cut out by `pieces`, as
/// nonincreasing vectors `y`. The origin is always among them.
pub fn ordered_ball_vertices(pieces: &[Vec<f64>], n: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if n > MAX_ENUM_DIM {
        return Err(Error::TooLarge {
            n,
            limit: MAX_ENUM_DIM,
        });
    }
    let d = n + 1;
    let total = d + pieces.len();

    // Constraint rows a.x >= 0 over x = (z_1..z_n, lambda).
    let mut rows: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut r = vec![0.0; d];
            r[i] = 1.0;
            r
        })
        .collect();
    for c in pieces {
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.len(),
            });
        }
        let mut r = vec![0.0; d];
        let mut acc = 0.0;
        for l in 0..n {
            acc += c[l];
            r[l] = -acc;
        }
        r[n] = 1.0;
        rows.push(r);
    }

    let mut rays: Vec<Ray> = (0..d)
        .map(|i| {
            let mut x = vec![0.0; d];
            x[i] = 1.0;
            let mut zeros = ZeroSet::empty(total);
            for j in (0..d).filter(|&j| j != i) {
                zeros.insert(j);
            }
            Ray { x, zeros }
        })
        .collect();

    for (k, row) in rows.iter().enumerate().skip(d) {
        let vals: Vec<f64> = rays.iter().map(|r| dot(row, &r.x)).collect();
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for (i, &v) in vals.iter().enumerate() {
            if v > ZERO_TOL {
                pos.push(i);
            } else if v < -ZERO_TOL {
                neg.push(i);
            } else {
                zero.push(i);
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + zero.len());
        for &i in &pos {
            next.push(rays[i].clone());
        }
        for &i in &zero {
            let mut r = rays[i].clone();
            r.zeros.insert(k);
            next.push(r);
        }
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.intersect(&rays[q].zeros);
                if common.len() + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !r.zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let (vp, vq) = (vals[p], vals[q]);
                let mut x: Vec<f64> = rays[q]
                    .x
                    .iter()
                    .zip(&rays[p].x)
                    .map(|(a, b)| vp * a - vq * b)
                    .collect();
                x.iter_mut().for_each(|v| {
                    if v.abs() < 1e-15 {
                        *v = 0.0
                    }
                });
                normalize(&mut x);
                let mut zeros = common;
                zeros.insert(k);
                next.push(Ray { x, zeros });
            }
        }
        rays = next;
    }

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for r in &rays {
        let lambda = r.x[n];
        if lambda <= ZERO_TOL {
            if r.x[..n].iter().any(|v| *v > ZERO_TOL) {
                return Err(Error::LinearProgram("unit ball is unbounded".into()));
            }
            continue;
        }
        let mut y = vec![0.0; n];
        let mut acc = 0.0;
        for l in (0..n).rev() {
            acc += (r.x[l] / lambda).max(0.0);
            y[l] = acc;
        }
        let duplicate = vertices
            .iter()
            .any(|v| v.iter().zip(&y).all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + a.abs())));
        if !duplicate {
            vertices.push(y);
        }
    }
    Ok(vertices)
}
