//! Model matrices, random vectors and perturbed problem sequences.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use crate::{c64, CVec};

/// Stream identifiers of the per-sequence random generators.
const RHS_STREAM: u64 = 1;
const PERTURBATION_STREAM: u64 = 2;
const GAUGE_STREAM: u64 = 3;

fn grid_triplets(m: usize, east: f64, west: f64, shift: f64) -> Vec<(usize, usize, c64)> {
    let idx = |i: usize, j: usize| j * m + i;
    let mut t = Vec::with_capacity(5 * m * m);
    for j in 0..m {
        for i in 0..m {
            let p = idx(i, j);
            t.push((p, p, c64::new(4.0 + shift, 0.0)));
            if i + 1 < m {
                t.push((p, idx(i + 1, j), c64::new(east, 0.0)));
            }
            if i > 0 {
                t.push((p, idx(i - 1, j), c64::new(west, 0.0)));
            }
            if j + 1 < m {
                t.push((p, idx(i, j + 1), c64::new(-1.0, 0.0)));
            }
            if j > 0 {
                t.push((p, idx(i, j - 1), c64::new(-1.0, 0.0)));
            }
        }
    }
    t
}

/// Five-point Laplacian on an `m × m` interior grid with Dirichlet
/// boundary, scaled to diagonal 4 and off-diagonals −1.
pub fn laplacian_2d(m: usize) -> SparseMatrix {
    SparseMatrix::from_triplets(m * m, m * m, grid_triplets(m, -1.0, -1.0, 0.0))
        .expect("grid indices are in range")
}

/// `−Δu + ν ∂u/∂x` on the unit square, central differences on an `m × m`
/// interior grid, scaled by `h² = 1/(m+1)²`: the Laplacian stencil with the
/// east and west couplings changed to `−1 ± νh/2`.
pub fn convection_diffusion_2d(m: usize, convection: f64) -> SparseMatrix {
    let p = 0.5 * convection / (m as f64 + 1.0);
    SparseMatrix::from_triplets(m * m, m * m, grid_triplets(m, -1.0 + p, -1.0 - p, 0.0))
        .expect("grid indices are in range")
}

/// Covariant Laplacian `(4 + mass)I − Σ U` on an `m × m` Dirichlet grid,
/// with independent uniformly random U(1) phases on the links. The matrix
/// is Hermitian; disorder in the phases lifts the smallest eigenvalues
/// above those of the free Laplacian.
pub fn gauge_laplacian_2d(m: usize, mass: f64, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(GAUGE_STREAM);
    let idx = |i: usize, j: usize| j * m + i;
    let mut t = Vec::with_capacity(5 * m * m);
    for j in 0..m {
        for i in 0..m {
            let p = idx(i, j);
            t.push((p, p, c64::new(4.0 + mass, 0.0)));
            for q in [(i + 1 < m).then(|| idx(i + 1, j)), (j + 1 < m).then(|| idx(i, j + 1))]
                .into_iter()
                .flatten()
            {
                let phase = c64::from_polar(1.0, 2.0 * PI * rng.random::<f64>());
                t.push((p, q, -phase));
                t.push((q, p, -phase.conj()));
            }
        }
    }
    SparseMatrix::from_triplets(m * m, m * m, t).expect("grid indices are in range")
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn draw_vector(rng: &mut ChaCha8Rng, n: usize, real: bool) -> CVec {
    CVec::from_fn(n, |_, _| {
        if real {
            c64::new(normal(rng), 0.0)
        } else {
            c64::new(normal(rng), normal(rng))
        }
    })
}

/// Standard normal vector (real or complex) from `seed`.
pub fn random_vector(n: usize, seed: u64, real: bool) -> CVec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_vector(&mut rng, n, real)
}

/// Random matrix on the sparsity pattern of `a`, with standard normal
/// entries (real when `a` is real), made Hermitian if requested and scaled
/// to Frobenius norm `target`.
fn pattern_perturbation(
    a: &SparseMatrix,
    rng: &mut ChaCha8Rng,
    hermitian: bool,
    target: f64,
) -> Result<SparseMatrix> {
    let real = a.is_real_valued();
    let draw = |rng: &mut ChaCha8Rng| {
        if real {
            c64::new(normal(rng), 0.0)
        } else {
            c64::new(normal(rng), normal(rng))
        }
    };
    let mut trip = Vec::with_capacity(a.nnz());
    for (r, c, _) in a.triplets() {
        if !hermitian {
            trip.push((r, c, draw(rng)));
        } else if r == c {
            trip.push((r, c, c64::new(normal(rng), 0.0)));
        } else if r < c {
            let e = draw(rng);
            trip.push((r, c, e));
            trip.push((c, r, e.conj()));
        }
    }
    let mut e = SparseMatrix::from_triplets(a.nrows(), a.ncols(), trip)?;
    let nrm = e.frobenius_norm();
    if nrm > 0.0 {
        let s = target / nrm;
        for v in e.values_mut() {
            *v *= s;
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhsPolicy {
    /// A fresh random vector for every problem.
    #[default]
    RandomEach,
    /// The same random vector for every problem.
    Fixed,
}

impl std::str::FromStr for RhsPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_each" => Ok(Self::RandomEach),
            "fixed" => Ok(Self::Fixed),
            other => Err(Error::Config(format!("unknown rhs policy `{other}`"))),
        }
    }
}

/// `A⁽ⁱ⁺¹⁾ = A⁽ⁱ⁾ + ε E⁽ⁱ⁾` with on-pattern random `E⁽ⁱ⁾` of Frobenius norm
/// `‖A⁽¹⁾‖_F`, and right-hand sides per [`RhsPolicy`]. Real base matrices
/// get real perturbations and real right-hand sides.
#[derive(Debug, Clone)]
pub struct ProblemSequence {
    pub base: SparseMatrix,
    pub length: usize,
    pub epsilon: f64,
    pub rhs: RhsPolicy,
    pub seed: u64,
    pub hermitian: bool,
}

impl ProblemSequence {
    pub fn iter(&self) -> SequenceIter<'_> {
        let mut rhs_rng = ChaCha8Rng::seed_from_u64(self.seed);
        rhs_rng.set_stream(RHS_STREAM);
        let mut pert_rng = ChaCha8Rng::seed_from_u64(self.seed);
        pert_rng.set_stream(PERTURBATION_STREAM);
        SequenceIter {
            seq: self,
            index: 0,
            current: None,
            fixed_rhs: None,
            rhs_rng,
            pert_rng,
            base_norm: self.base.frobenius_norm(),
        }
    }
}

pub struct SequenceIter<'a> {
    seq: &'a ProblemSequence,
    index: usize,
    current: Option<SparseMatrix>,
    fixed_rhs: Option<CVec>,
    rhs_rng: ChaCha8Rng,
    pert_rng: ChaCha8Rng,
    base_norm: f64,
}

impl SequenceIter<'_> {
    fn next_rhs(&mut self) -> CVec {
        let n = self.seq.base.nrows();
        let real = self.seq.base.is_real_valued();
        match self.seq.rhs {
            RhsPolicy::RandomEach => draw_vector(&mut self.rhs_rng, n, real),
            RhsPolicy::Fixed => self
                .fixed_rhs
                .get_or_insert_with(|| draw_vector(&mut self.rhs_rng, n, real))
                .clone(),
        }
    }
}

impl Iterator for SequenceIter<'_> {
    type Item = Result<(SparseMatrix, CVec)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.index >= self.seq.length {
            return None;
        }
        self.index += 1;
        let a = match self.current.take() {
            None => self.seq.base.clone(),
            Some(prev) if self.seq.epsilon == 0.0 => prev,
            Some(prev) => {
                let e = match pattern_perturbation(
                    &prev,
                    &mut self.pert_rng,
                    self.seq.hermitian,
                    self.base_norm,
                ) {
                    Ok(e) => e,
                    Err(err) => return Some(Err(err)),
                };
                match prev.add_scaled(self.seq.epsilon, &e) {
                    Ok(a) => a,
                    Err(err) => return Some(Err(err)),
                }
            }
        };
        self.current = Some(a.clone());
        let b = self.next_rhs();
        Some(Ok((a, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::HermitianEigen;

    #[test]
    fn laplacian_spectrum_closed_form() {
        let m = 4;
        let a = laplacian_2d(m);
        let eig = HermitianEigen::new(&a.to_dense()).unwrap();
        let h = PI / (m as f64 + 1.0);
        let mut expected: Vec<f64> = (1..=m)
            .flat_map(|p| (1..=m).map(move |q| 4.0 - 2.0 * (p as f64 * h).cos() - 2.0 * (q as f64 * h).cos()))
            .collect();
        expected.sort_by(f64::total_cmp);
        for (x, y) in eig.values.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(eig.values[0] > 0.0);
        // an interior node of the 4×4 grid
        let row_sum: c64 = (0..16).map(|c| a.get(5, c)).sum();
        assert_eq!(row_sum, c64::new(0.0, 0.0));
    }

    #[test]
    fn convection_limits() {
        assert_eq!(convection_diffusion_2d(6, 0.0), laplacian_2d(6));
        let a = convection_diffusion_2d(10, 1.0);
        assert!(a.add_scaled(-1.0, &a.adjoint()).unwrap().frobenius_norm() > 0.0);
        let eig = crate::dense::SchurEigen::new(&a.to_dense()).unwrap();
        assert!(eig.values.iter().all(|z| z.re > 0.0));
    }

    #[test]
    fn gauge_laplacian_is_hermitian_and_seeded() {
        let a = gauge_laplacian_2d(6, 0.1, 7);
        assert!(a.is_hermitian(1e-15));
        assert_eq!(a, gauge_laplacian_2d(6, 0.1, 7));
        assert_ne!(a, gauge_laplacian_2d(6, 0.1, 8));
    }

    #[test]
    fn sequence_behaviour() {
        let base = gauge_laplacian_2d(5, 0.2, 1);
        let mut seq = ProblemSequence {
            base: base.clone(),
            length: 4,
            epsilon: 0.0,
            rhs: RhsPolicy::RandomEach,
            seed: 9,
            hermitian: true,
        };
        let items: Vec<_> = seq.iter().map(|r| r.unwrap()).collect();
        assert_eq!(items.len(), 4);
        assert!(items.iter().all(|(a, _)| *a == base));
        assert_ne!(items[0].1, items[1].1);

        seq.epsilon = 1e-2;
        let first: Vec<_> = seq.iter().map(|r| r.unwrap()).collect();
        let second: Vec<_> = seq.iter().map(|r| r.unwrap()).collect();
        assert_eq!(first, second);
        for (a, _) in &first {
            assert!(a.is_hermitian(1e-12));
        }
        let step = first[1].0.add_scaled(-1.0, &first[0].0).unwrap().frobenius_norm();
        assert!((step - 1e-2 * base.frobenius_norm()).abs() < 1e-12 * base.frobenius_norm());

        seq.rhs = RhsPolicy::Fixed;
        let fixed: Vec<_> = seq.iter().map(|r| r.unwrap().1).collect();
        assert!(fixed.iter().all(|b| *b == fixed[0]));
    }

    #[test]
    fn real_base_gives_real_data() {
        let seq = ProblemSequence {
            base: laplacian_2d(4),
            length: 3,
            epsilon: 0.1,
            rhs: RhsPolicy::RandomEach,
            seed: 3,
            hermitian: true,
        };
        for item in seq.iter() {
            let (a, b) = item.unwrap();
            assert!(a.is_real_valued());
            assert!(b.iter().all(|z| z.im == 0.0));
        }
    }
}
