//! Density matrices, probability distributions, and the entropy/distance toolkit.
//!
//! All entropies are in bits. Eigenvalues are clipped into `[0, 1]` before entropies are
//! evaluated; a clip larger than [`CLIP_TOL`] is reported as an invalid state rather than
//! silently absorbed.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use num_complex::Complex64;

/// Entrywise Hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Smallest eigenvalue allowed for a state.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Largest eigenvalue clip tolerated by entropy evaluation.
pub const CLIP_TOL: f64 = 1e-8;
/// Allowed deviation of a distribution's total mass from one.
pub const DISTRIBUTION_TOL: f64 = 1e-12;

/// A finite probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {i} is {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Self { probs })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || total <= 0.0 {
            return Err(Error::InvalidDistribution("weights must be nonnegative with positive sum".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a matrix.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::InvalidState(format!("matrix is {}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let defect = linalg::hermiticity_defect(&m);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let m = linalg::hermitize(&m);
        let min = linalg::eigvalsh(&m)[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("smallest eigenvalue {min:e}")));
        }
        Ok(Self { m })
    }

    /// Builds from `dim²` row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        Self::new(CMatrix::from_row_slice(dim, dim, entries))
    }

    /// |ψ⟩⟨ψ| for a unit vector ψ.
    pub fn pure(psi: &CVector) -> Result<Self> {
        check_unit(psi)?;
        Ok(Self { m: linalg::outer(psi) })
    }

    /// |k⟩⟨k| in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Self { m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim > 0);
        Self { m: CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0) }
    }

    /// Diagonal state with the given spectrum.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let p = ProbabilityDistribution::new(probs.to_vec())?;
        let diag = CVector::from_iterator(p.len(), p.probs().iter().map(|&x| Complex64::new(x, 0.0)));
        Ok(Self { m: CMatrix::from_diagonal(&diag) })
    }

    /// Qubit state with Bloch vector `r` (|r| ≤ 1).
    pub fn qubit_bloch(r: [f64; 3]) -> Result<Self> {
        let [x, y, z] = r;
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5 * (1.0 + z), 0.0),
                Complex64::new(0.5 * x, -0.5 * y),
                Complex64::new(0.5 * x, 0.5 * y),
                Complex64::new(0.5 * (1.0 - z), 0.0),
            ],
        );
        Self::new(m)
    }

    /// Wraps a matrix known to be a state up to rounding (convex combinations, partial traces).
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self { m: linalg::hermitize(&m) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d * d).map(|k| self.m[(k / d, k % d)]).collect()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.m)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self { m: linalg::kron(&self.m, &other.m) }
    }

    /// Reduced state of a `d1 × d2` bipartite state; `keep_first` selects which factor survives.
    pub fn partial_trace(&self, d1: usize, d2: usize, keep_first: bool) -> Result<DensityMatrix> {
        if d1 * d2 != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: d1 * d2 });
        }
        let m = if keep_first {
            linalg::partial_trace_second(&self.m, d1, d2)
        } else {
            linalg::partial_trace_first(&self.m, d1, d2)
        };
        Ok(Self::from_trusted(m))
    }

    /// U ρ U†.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.nrows() });
        }
        Ok(Self::from_trusted(u * &self.m * u.adjoint()))
    }

    /// (1 − t) ρ + t σ.
    pub fn mix(&self, other: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        same_dim(self, other)?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("mixing weight {t} outside [0, 1]")));
        }
        Ok(Self::from_trusted(&self.m * Complex64::new(1.0 - t, 0.0) + &other.m * Complex64::new(t, 0.0)))
    }
}

fn check_unit(psi: &CVector) -> Result<()> {
    let norm = psi.norm();
    if psi.is_empty() || (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("vector norm is {norm}, expected 1")));
    }
    Ok(())
}

fn same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// −Σ λ log₂ λ over a spectrum, clipping into `[0, 1]` and refusing clips above [`CLIP_TOL`].
pub fn entropy_from_eigenvalues(values: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &v in values {
        if !(-CLIP_TOL..=1.0 + CLIP_TOL).contains(&v) {
            return Err(Error::InvalidState(format!("eigenvalue {v} outside [0, 1]")));
        }
        h -= xlog2x(v.clamp(0.0, 1.0));
    }
    Ok(h.max(0.0))
}

/// x log₂ x with 0 log 0 = 0.
#[inline]
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy of unchecked weights, bits.
#[inline]
pub(crate) fn entropy_bits(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlog2x(x)).sum::<f64>()
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_from_eigenvalues(&rho.eigenvalues())
}

pub fn shannon_entropy(p: &ProbabilityDistribution) -> f64 {
    entropy_bits(p.probs()).max(0.0)
}

/// h₂(p) = −p log₂ p − (1−p) log₂(1−p).
pub fn binary_entropy(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    -(xlog2x(p) + xlog2x(1.0 - p))
}

/// Purity κ(ρ) = log₂ d − H(ρ), the pure-qubit yield per copy under unitaries alone.
pub fn purity_kappa(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dim() as f64;
    Ok((d.log2() - von_neumann_entropy(rho)?).max(0.0))
}

/// Diagonal part of ρ in the computational basis.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let d = rho.dim();
    let diag = CVector::from_iterator(d, (0..d).map(|i| Complex64::new(rho.m[(i, i)].re, 0.0)));
    DensityMatrix { m: CMatrix::from_diagonal(&diag) }
}

/// Trace norm ‖ρ − σ‖₁, in `[0, 2]`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = linalg::hermitize(&(&rho.m - &sigma.m));
    Ok(linalg::eigvalsh(&diff).iter().map(|v| v.abs()).sum::<f64>().min(2.0))
}

/// ⟨φ|ρ|φ⟩ for a unit vector φ.
pub fn fidelity_with_pure(rho: &DensityMatrix, phi: &CVector) -> Result<f64> {
    if phi.len() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: phi.len() });
    }
    check_unit(phi)?;
    let v = (phi.adjoint() * &rho.m * phi)[(0, 0)].re;
    Ok(v.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(r, i)| Complex64::new(r, i)))
    }

    fn plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&ket(&[(s, 0.0), (s, 0.0)])).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-12);
        assert!(von_neumann_entropy(&DensityMatrix::basis(2, 0)).unwrap().abs() < 1e-12);
        let h = von_neumann_entropy(&DensityMatrix::diagonal(&[0.9, 0.1]).unwrap()).unwrap();
        // −0.9 log₂ 0.9 − 0.1 log₂ 0.1
        assert!((h - 0.468_995_593_589_281_2).abs() < 1e-9);
    }

    #[test]
    fn shannon_examples() {
        let s = |v: Vec<f64>| shannon_entropy(&ProbabilityDistribution::new(v).unwrap());
        assert_eq!(s(vec![0.5, 0.5]), 1.0);
        assert_eq!(s(vec![1.0, 0.0]), 0.0);
        assert_eq!(s(vec![0.25; 4]), 2.0);
        assert!((binary_entropy(0.1) - 0.468_995_593_589_281_2).abs() < 1e-12);
    }

    #[test]
    fn distribution_rejects_bad_input() {
        assert!(ProbabilityDistribution::new(vec![0.5, -0.1, 0.6]).is_err());
        assert!(ProbabilityDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(ProbabilityDistribution::new(vec![]).is_err());
        assert!(ProbabilityDistribution::new(vec![0.5, 0.5 + 1e-13]).is_ok());
    }

    #[test]
    fn kappa_examples() {
        assert!((purity_kappa(&DensityMatrix::basis(2, 1)).unwrap() - 1.0).abs() < 1e-12);
        assert!(purity_kappa(&DensityMatrix::maximally_mixed(2)).unwrap().abs() < 1e-12);
        let k = purity_kappa(&DensityMatrix::diagonal(&[0.9, 0.1, 0.0, 0.0]).unwrap()).unwrap();
        assert!((k - (2.0 - 0.468_995_593_589_281_2)).abs() < 1e-9);
    }

    #[test]
    fn dephase_examples() {
        let d = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert_eq!(dephase(&d), d);
        let p = dephase(&plus());
        assert!(trace_distance(&p, &DensityMatrix::maximally_mixed(2)).unwrap() < 1e-15);
        assert!(von_neumann_entropy(&p).unwrap() >= von_neumann_entropy(&plus()).unwrap());
    }

    #[test]
    fn trace_distance_examples() {
        let z0 = DensityMatrix::basis(2, 0);
        let z1 = DensityMatrix::basis(2, 1);
        assert_eq!(trace_distance(&z0, &z0).unwrap(), 0.0);
        assert!((trace_distance(&z0, &z1).unwrap() - 2.0).abs() < 1e-15);
        assert!((trace_distance(&z0, &DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            trace_distance(&z0, &DensityMatrix::maximally_mixed(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fidelity_examples() {
        let zero = ket(&[(1.0, 0.0), (0.0, 0.0)]);
        let one = ket(&[(0.0, 0.0), (1.0, 0.0)]);
        let rho0 = DensityMatrix::pure(&zero).unwrap();
        assert!((fidelity_with_pure(&rho0, &zero).unwrap() - 1.0).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(2);
        let f = fidelity_with_pure(&mixed, &zero).unwrap();
        assert!((f - 0.5).abs() < 1e-15);
        assert!(trace_distance(&mixed, &rho0).unwrap() <= 2.0 * (1.0 - f).sqrt());
        let f = fidelity_with_pure(&DensityMatrix::pure(&one).unwrap(), &zero).unwrap();
        assert_eq!(f, 0.0);
        assert!(fidelity_with_pure(&mixed, &ket(&[(1.0, 0.0), (1.0, 0.0)])).is_err());
    }

    #[test]
    fn invalid_states_rejected() {
        let c = |r: f64| Complex64::new(r, 0.0);
        let non_herm = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(matches!(DensityMatrix::new(non_herm), Err(Error::InvalidState(_))));
        let neg = CMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::InvalidState(_))));
        let bad_trace = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.6)]);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::InvalidState(_))));
        assert!(entropy_from_eigenvalues(&[1.0 + 1e-6, -1e-6]).is_err());
        assert!(entropy_from_eigenvalues(&[1.0 + 1e-11, -1e-11]).is_ok());
    }

    #[test]
    fn entropy_extremes_on_constructed_cases() {
        for d in 2..=5 {
            let h = von_neumann_entropy(&DensityMatrix::maximally_mixed(d)).unwrap();
            assert!((h - (d as f64).log2()).abs() < 1e-12);
            assert!(von_neumann_entropy(&DensityMatrix::basis(d, d - 1)).unwrap() < 1e-12);
        }
    }
}
