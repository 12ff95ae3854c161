//! Random dense instances shared by the integration tests.

#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rfom2::{c64, CMat, CVec};

fn normal(rng: &mut ChaCha8Rng) -> c64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64::new(re, im)
}

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMat::from_fn(rows, cols, |_, _| normal(&mut rng))
}

pub fn random_cvec(n: usize, seed: u64) -> CVec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CVec::from_fn(n, |_, _| normal(&mut rng))
}

pub fn random_hermitian(n: usize, seed: u64) -> CMat {
    let m = random_matrix(n, n, seed);
    (&m + m.adjoint()) * c64::new(0.5, 0.0)
}

/// Hermitian with eigenvalues spread evenly over `[lo, hi]` in a random
/// unitary basis.
pub fn hermitian_with_spectrum(n: usize, lo: f64, hi: f64, seed: u64) -> CMat {
    let q = random_matrix(n, n, seed).qr().q();
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    let d = CMat::from_diagonal(&CVec::from_fn(n, |i, _| c64::new(lo + step * i as f64, 0.0)));
    &q * d * q.adjoint()
}

pub fn rel_diff(x: &CVec, y: &CVec) -> f64 {
    (x - y).norm() / y.norm()
}

pub fn spectral_norm(m: &CMat) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}
