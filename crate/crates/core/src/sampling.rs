//! Seeded random states, unitaries, distributions and channels.
//!
//! Used by restarts in the optimizer and by the property suites. Every generator takes the RNG
//! explicitly; callers seed a `ChaCha8Rng` so results are reproducible across platforms.

use crate::ensemble::{ClassicalChannel, CQEnsemble};
use crate::linalg::{CMatrix, CVector};
use crate::state::{DensityMatrix, ProbabilityDistribution};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random unit vector.
pub fn random_pure_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| gaussian_complex(rng));
        let n = v.norm();
        if n > 1e-12 {
            return v / Complex64::new(n, 0.0);
        }
    }
}

/// Ginibre-ensemble state G G† / Tr with G of shape `dim × rank`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, rank.max(1), |_, _| gaussian_complex(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m / Complex64::new(tr, 0.0)).expect("Ginibre state is valid")
}

/// Random state whose rank is drawn uniformly from `1..=dim`.
pub fn random_state_any_rank<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let rank = rng.random_range(1..=dim);
    random_density_matrix(dim, rank, rng)
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<CVector> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = CVector::from_fn(dim, |_, _| gaussian_complex(rng));
        for _ in 0..2 {
            for u in &cols {
                let proj = u.dotc(&v);
                v -= u * proj;
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            cols.push(v / Complex64::new(n, 0.0));
        }
    }
    CMatrix::from_columns(&cols)
}

/// Uniform draw from the probability simplex (Dirichlet(1, …, 1)).
pub fn random_simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

pub fn random_distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProbabilityDistribution {
    ProbabilityDistribution::from_weights(&random_simplex_point(n, rng)).expect("simplex draw")
}

/// Channel whose rows are independent Dirichlet(1) draws.
pub fn random_channel<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ClassicalChannel {
    let data: Vec<Vec<f64>> = (0..rows).map(|_| random_simplex_point(cols, rng)).collect();
    ClassicalChannel::new(data).expect("random rows are stochastic")
}

/// Ensemble with `labels` random members of dimension `dim` and a random prior.
pub fn random_ensemble<R: Rng + ?Sized>(labels: usize, dim: usize, rng: &mut R) -> CQEnsemble {
    let probs = random_distribution(labels, rng);
    let states = (0..labels).map(|_| random_state_any_rank(dim, rng)).collect();
    CQEnsemble::new(probs, states).expect("random ensemble is valid")
}
