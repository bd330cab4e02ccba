//! Seeded sampling used by the property harness and the tests.
//!
//! The generator is ChaCha8 seeded from a `u64`; uniform doubles use the
//! upper 53 bits of each output. Normal deviates come from the Box–Muller
//! transform, one pair per complex entry, so a given seed reproduces the same
//! matrices on every platform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{unitary_from_gaussian, CMatrix};

pub type SeedRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeedRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A pair of independent standard normal deviates.
pub fn box_muller(rng: &mut impl Rng) -> (f64, f64) {
    // 1 - u keeps the logarithm's argument in (0, 1].
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Standard complex normal: real and imaginary parts have variance 1/2.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let (a, b) = box_muller(rng);
    Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
    let data = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    CMatrix::from_vec(n, data).expect("finite gaussian entries")
}

pub fn random_unitary_with(n: usize, rng: &mut impl Rng) -> CMatrix {
    unitary_from_gaussian(&gaussian_matrix(n, rng))
}

/// `U diag(s) V*` with independent random unitaries.
pub fn matrix_with_singular_values(s: &[f64], rng: &mut impl Rng) -> CMatrix {
    let n = s.len();
    let u = random_unitary_with(n, rng);
    let v = random_unitary_with(n, rng);
    let d = CMatrix::from_real_diag(s);
    &(&u * &d) * &v.adjoint()
}

/// A random complex vector with entries of modulus in roughly `[0, 3]`.
pub fn complex_vector(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng) * 1.5).collect()
}
