//! Classical-quantum ensembles and classical channels on the classical register.
//!
//! An ensemble `{p(x), ρ_x}` stands for the block-diagonal state Σ p(x) |x⟩⟨x| ⊗ ρ_x. A channel
//! `W(y|x)` acting on the classical register produces the ensemble `{q(y), σ_y}` with
//! `q(y) = Σ_x p(x) W(y|x)` and `σ_y ∝ Σ_x p(x) W(y|x) ρ_x`.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::state::{
    entropy_bits, entropy_from_eigenvalues, trace_distance, DensityMatrix, ProbabilityDistribution,
    DISTRIBUTION_TOL,
};
use num_complex::Complex64;

/// Channel outcomes with less total probability than this are dropped.
pub const OUTCOME_DROP_TOL: f64 = 1e-14;

/// Row-stochastic matrix `W(y|x)`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalChannel {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ClassicalChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::InvalidChannel(format!("row {i} has {} entries, expected {cols}", r.len())));
        }
        Self::from_flat(rows.len(), cols, rows.concat())
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidChannel("channel needs at least one row and one column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        for (x, row) in data.chunks(cols).enumerate() {
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::InvalidChannel(format!("row {x} has entry {v}")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > DISTRIBUTION_TOL {
                return Err(Error::InvalidChannel(format!("row {x} sums to {s}")));
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::deterministic(&(0..n).collect::<Vec<_>>(), n).expect("identity map is valid")
    }

    /// Every input goes to output 0.
    pub fn constant(rows: usize, cols: usize) -> Self {
        Self::deterministic(&vec![0; rows], cols).expect("constant map is valid")
    }

    /// `W(y|x) = 1` iff `y = map[x]`.
    pub fn deterministic(map: &[usize], cols: usize) -> Result<Self> {
        let mut data = vec![0.0; map.len() * cols];
        for (x, &y) in map.iter().enumerate() {
            if y >= cols {
                return Err(Error::InvalidChannel(format!("input {x} maps to {y} >= {cols}")));
            }
            data[x * cols + y] = 1.0;
        }
        Self::from_flat(map.len(), cols, data)
    }

    /// Used by optimizers whose iterates are stochastic up to rounding.
    pub(crate) fn from_flat_trusted(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.cols + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.cols..(x + 1) * self.cols]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Matrix product: first `self` (X → Y), then `next` (Y → Z).
    pub fn then(&self, next: &ClassicalChannel) -> Result<ClassicalChannel> {
        if next.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: next.rows });
        }
        let mut data = vec![0.0; self.rows * next.cols];
        for x in 0..self.rows {
            for y in 0..self.cols {
                let w = self.entry(x, y);
                if w == 0.0 {
                    continue;
                }
                for z in 0..next.cols {
                    data[x * next.cols + z] += w * next.entry(y, z);
                }
            }
        }
        Ok(Self::from_flat_trusted(self.rows, next.cols, data))
    }

    /// Output distribution `q(y) = Σ_x p(x) W(y|x)`.
    pub fn output_distribution(&self, p: &[f64]) -> Vec<f64> {
        let mut q = vec![0.0; self.cols];
        for (x, &px) in p.iter().enumerate() {
            for (y, qy) in q.iter_mut().enumerate() {
                *qy += px * self.entry(x, y);
            }
        }
        q
    }
}

/// `{p(x), ρ_x}` with all members of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CQEnsemble {
    probs: ProbabilityDistribution,
    states: Vec<DensityMatrix>,
}

impl CQEnsemble {
    pub fn new(probs: ProbabilityDistribution, states: Vec<DensityMatrix>) -> Result<Self> {
        if states.len() != probs.len() {
            return Err(Error::DimensionMismatch { expected: probs.len(), got: states.len() });
        }
        let d = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: s.dim() });
        }
        Ok(Self { probs, states })
    }

    /// Ensemble of pure states from unit vectors.
    pub fn from_pure(probs: ProbabilityDistribution, kets: &[CVector]) -> Result<Self> {
        let states = kets.iter().map(DensityMatrix::pure).collect::<Result<Vec<_>>>()?;
        Self::new(probs, states)
    }

    /// Number of labels |X|.
    pub fn labels(&self) -> usize {
        self.states.len()
    }

    /// Dimension d_B of the quantum register.
    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn probs(&self) -> &ProbabilityDistribution {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn state(&self, x: usize) -> &DensityMatrix {
        &self.states[x]
    }

    /// Diagonal state of the classical register, ρ^X.
    pub fn classical_state(&self) -> DensityMatrix {
        DensityMatrix::diagonal(self.probs.probs()).expect("validated distribution")
    }
}

/// Σ p(x) |x⟩⟨x| ⊗ ρ_x.
pub fn joint_state(ens: &CQEnsemble) -> DensityMatrix {
    let (nx, d) = (ens.labels(), ens.dim());
    let mut m = CMatrix::zeros(nx * d, nx * d);
    for (x, (p, rho)) in ens.probs.probs().iter().zip(&ens.states).enumerate() {
        let block = rho.matrix() * Complex64::new(*p, 0.0);
        m.view_mut((x * d, x * d), (d, d)).copy_from(&block);
    }
    DensityMatrix::from_trusted(m)
}

/// ρ^B = Σ p(x) ρ_x.
pub fn average_state(ens: &CQEnsemble) -> DensityMatrix {
    let d = ens.dim();
    let mut m = CMatrix::zeros(d, d);
    for (p, rho) in ens.probs.probs().iter().zip(&ens.states) {
        m += rho.matrix() * Complex64::new(*p, 0.0);
    }
    DensityMatrix::from_trusted(m)
}

/// Holevo information χ = H(Σ p ρ_x) − Σ p H(ρ_x), equal to I(X;B) of the joint state.
pub fn holevo_information(ens: &CQEnsemble) -> Result<f64> {
    let mut conditional = 0.0;
    for (p, rho) in ens.probs.probs().iter().zip(&ens.states) {
        if *p > 0.0 {
            conditional += p * entropy_from_eigenvalues(&rho.eigenvalues())?;
        }
    }
    let avg = entropy_from_eigenvalues(&average_state(ens).eigenvalues())?;
    Ok((avg - conditional).max(0.0))
}

/// Holevo quantity of the ensemble formed by unnormalized blocks `A_y` (weights `Tr A_y`).
pub(crate) fn holevo_of_blocks(blocks: &[CMatrix]) -> Result<f64> {
    let Some(first) = blocks.first() else { return Ok(0.0) };
    let mut total = CMatrix::zeros(first.nrows(), first.ncols());
    let mut conditional = 0.0;
    for a in blocks {
        total += a;
        let q = a.trace().re;
        if q >= OUTCOME_DROP_TOL {
            let vals: Vec<f64> = linalg::eigvalsh(a).into_iter().map(|v| v / q).collect();
            conditional += q * entropy_from_eigenvalues(&vals)?;
        }
    }
    let avg = entropy_from_eigenvalues(&linalg::eigvalsh(&total))?;
    Ok((avg - conditional).max(0.0))
}

fn check_channel(ens_labels: usize, w: &ClassicalChannel) -> Result<()> {
    if w.rows() != ens_labels {
        return Err(Error::DimensionMismatch { expected: ens_labels, got: w.rows() });
    }
    Ok(())
}

/// The Y-ensemble `{q(y), σ_y}`; outcomes with `q(y) < 1e-14` are dropped.
pub fn apply_channel(ens: &CQEnsemble, w: &ClassicalChannel) -> Result<CQEnsemble> {
    let (_, states, kept) = channel_blocks(ens, w)?;
    let probs = ProbabilityDistribution::from_weights(&kept)?;
    CQEnsemble::new(probs, states)
}

/// Surviving output weights and normalized conditional states, plus the raw weights of survivors.
fn channel_blocks(ens: &CQEnsemble, w: &ClassicalChannel) -> Result<(Vec<usize>, Vec<DensityMatrix>, Vec<f64>)> {
    check_channel(ens.labels(), w)?;
    let d = ens.dim();
    let p = ens.probs.probs();
    let mut outcomes = Vec::new();
    let mut states = Vec::new();
    let mut weights = Vec::new();
    for y in 0..w.cols() {
        let mut a = CMatrix::zeros(d, d);
        let mut q = 0.0;
        for (x, (&px, state)) in p.iter().zip(&ens.states).enumerate() {
            let c = px * w.entry(x, y);
            if c > 0.0 {
                a += state.matrix() * Complex64::new(c, 0.0);
                q += c;
            }
        }
        if q >= OUTCOME_DROP_TOL {
            outcomes.push(y);
            states.push(DensityMatrix::from_trusted(a / Complex64::new(q, 0.0)));
            weights.push(q);
        }
    }
    Ok((outcomes, states, weights))
}

/// Classical I(X;Y) = H(q) − Σ p(x) H(W(·|x)), bits.
pub fn channel_mutual_information(p: &ProbabilityDistribution, w: &ClassicalChannel) -> Result<f64> {
    check_channel(p.len(), w)?;
    let q = w.output_distribution(p.probs());
    let noise: f64 = p.probs().iter().enumerate().map(|(x, px)| px * entropy_bits(w.row(x))).sum();
    Ok((entropy_bits(&q) - noise).max(0.0))
}

/// Ensembles compared member-by-member: L1 distance of priors plus per-member trace distance.
pub fn ensembles_close(a: &CQEnsemble, b: &CQEnsemble, tol: f64) -> bool {
    if a.labels() != b.labels() || a.dim() != b.dim() {
        return false;
    }
    let l1: f64 = a.probs.probs().iter().zip(b.probs.probs()).map(|(x, y)| (x - y).abs()).sum();
    l1 <= tol
        && a.states.iter().zip(&b.states).all(|(s, t)| trace_distance(s, t).is_ok_and(|d| d <= tol))
}

/// Pure state on X ⊗ B ⊗ E whose X B marginal is the joint state of an ensemble.
///
/// The environment is `E = X' ⊗ E_B` with `dim E = |X| · d_B`: `X'` copies the label so the
/// X B marginal stays block diagonal, and `E_B` purifies each member through its eigenbasis.
#[derive(Debug, Clone)]
pub struct PurifiedCQ {
    amplitudes: CVector,
    x_dim: usize,
    b_dim: usize,
    e_dim: usize,
}

impl PurifiedCQ {
    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    pub fn b_dim(&self) -> usize {
        self.b_dim
    }

    pub fn e_dim(&self) -> usize {
        self.e_dim
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Unnormalized B E vector ⟨x|_X Ψ⟩; its squared norm is p(x).
    pub fn branch(&self, x: usize) -> CVector {
        let n = self.b_dim * self.e_dim;
        self.amplitudes.rows(x * n, n).into_owned()
    }

    /// Tr_E |Ψ⟩⟨Ψ|.
    pub fn reduce_to_xb(&self) -> DensityMatrix {
        let rows = self.x_dim * self.b_dim;
        let m = CMatrix::from_fn(rows, self.e_dim, |r, e| self.amplitudes[r * self.e_dim + e]);
        DensityMatrix::from_trusted(&m * m.adjoint())
    }

    /// Tr_X |Ψ⟩⟨Ψ|, i.e. ρ^{BE}.
    pub fn reduce_to_be(&self) -> DensityMatrix {
        let mut m = CMatrix::zeros(self.b_dim * self.e_dim, self.b_dim * self.e_dim);
        for x in 0..self.x_dim {
            m += linalg::outer(&self.branch(x));
        }
        DensityMatrix::from_trusted(m)
    }

    /// Unnormalized blocks `Σ_x W(y|x) ⟨x|Ψ⟩⟨Ψ|x⟩` of σ^{YBE} after measuring X and applying `w`.
    pub fn channel_blocks(&self, w: &ClassicalChannel) -> Result<Vec<CMatrix>> {
        check_channel(self.x_dim, w)?;
        let n = self.b_dim * self.e_dim;
        let branches: Vec<CMatrix> = (0..self.x_dim).map(|x| linalg::outer(&self.branch(x))).collect();
        Ok((0..w.cols())
            .map(|y| {
                let mut a = CMatrix::zeros(n, n);
                for (x, b) in branches.iter().enumerate() {
                    let c = w.entry(x, y);
                    if c > 0.0 {
                        a += b * Complex64::new(c, 0.0);
                    }
                }
                a
            })
            .collect())
    }
}

/// Σ_x √p(x) |x⟩_X ⊗ Σ_i √λ_{x,i} |e_{x,i}⟩_B |x, i⟩_E.
pub fn purify_cq(ens: &CQEnsemble) -> PurifiedCQ {
    let (nx, d) = (ens.labels(), ens.dim());
    let e_dim = nx * d;
    let mut amps = CVector::zeros(nx * d * e_dim);
    for (x, (p, rho)) in ens.probs.probs().iter().zip(&ens.states).enumerate() {
        let eig = linalg::eigh(rho.matrix());
        for (i, lam) in eig.values.iter().enumerate() {
            let coeff = (p * lam.max(0.0)).sqrt();
            if coeff == 0.0 {
                continue;
            }
            let e = x * d + i;
            for b in 0..d {
                amps[(x * d + b) * e_dim + e] += eig.vectors[(b, i)] * coeff;
            }
        }
    }
    PurifiedCQ { amplitudes: amps, x_dim: nx, b_dim: d, e_dim }
}

/// Returns `(I(Y;BE), I(Y;X))`: the first from the purified state under `w`, the second
/// classically. For classical-quantum states the two coincide.
pub fn cross_check_iybe(ens: &CQEnsemble, w: &ClassicalChannel) -> Result<(f64, f64)> {
    let psi = purify_cq(ens);
    let i_ybe = holevo_of_blocks(&psi.channel_blocks(w)?)?;
    let i_yx = channel_mutual_information(ens.probs(), w)?;
    Ok((i_ybe, i_yx))
}
