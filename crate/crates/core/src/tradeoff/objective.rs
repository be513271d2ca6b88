//! Fast evaluation of `I(Y;X)`, `I(Y;B)` and their derivatives for a channel stored as a flat
//! row-major `|X| × |Y|` slice. This is the optimizer's inner loop; ensemble-level functions in
//! [`crate::ensemble`] compute the same quantities along an independent path.

use crate::ensemble::{average_state, CQEnsemble, OUTCOME_DROP_TOL};
use crate::linalg::{self, CMatrix};
use crate::state::{entropy_bits, entropy_from_eigenvalues, xlog2x};
use num_complex::Complex64;
use std::f64::consts::LN_2;

/// Weighted objective `gain · I(Y;B) − cost · I(Y;X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalarization {
    pub gain: f64,
    pub cost: f64,
}

impl Scalarization {
    /// `I(Y;B) − μ I(Y;X)`, supporting the P curve with slope μ.
    pub fn p_curve(mu: f64) -> Self {
        Self { gain: 1.0, cost: mu }
    }

    /// `I(Y;B) − μ (I(Y;X) − I(Y;B))`, supporting the D curve with slope μ.
    pub fn d_curve(mu: f64) -> Self {
        Self { gain: 1.0 + mu, cost: mu }
    }

    pub fn value(&self, i_yx: f64, i_yb: f64) -> f64 {
        self.gain * i_yb - self.cost * i_yx
    }
}

/// Ensemble data laid out for repeated channel evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub nx: usize,
    pub d: usize,
    pub p: Vec<f64>,
    states: Vec<CMatrix>,
    /// H(ρ_x) in nats.
    state_entropy_nats: Vec<f64>,
    /// H(ρ_B) in bits.
    avg_entropy: f64,
}

/// Spectral data of the conditional states σ_y for one channel.
pub(crate) struct Spectra {
    pub ny: usize,
    pub q: Vec<f64>,
    values: Vec<Vec<f64>>,
    vectors: Vec<CMatrix>,
}

impl Problem {
    pub fn new(ens: &CQEnsemble) -> Self {
        let states: Vec<CMatrix> = ens.states().iter().map(|s| s.matrix().clone()).collect();
        let state_entropy_nats = ens
            .states()
            .iter()
            .map(|s| entropy_from_eigenvalues(&s.eigenvalues()).unwrap_or(0.0) * LN_2)
            .collect();
        let avg_entropy = entropy_from_eigenvalues(&average_state(ens).eigenvalues()).unwrap_or(0.0);
        Self {
            nx: ens.labels(),
            d: ens.dim(),
            p: ens.probs().probs().to_vec(),
            states,
            state_entropy_nats,
            avg_entropy,
        }
    }

    pub fn spectra(&self, w: &[f64], ny: usize) -> Spectra {
        let d = self.d;
        let mut q = vec![0.0; ny];
        let mut values = Vec::with_capacity(ny);
        let mut vectors = Vec::with_capacity(ny);
        for y in 0..ny {
            let mut a = CMatrix::zeros(d, d);
            let mut qy = 0.0;
            for x in 0..self.nx {
                let c = self.p[x] * w[x * ny + y];
                if c > 0.0 {
                    a.zip_apply(&self.states[x], |acc, s| *acc += s * c);
                    qy += c;
                }
            }
            q[y] = qy;
            if qy >= OUTCOME_DROP_TOL {
                a /= Complex64::new(qy, 0.0);
                let e = linalg::eigh(&a);
                values.push(e.values.iter().map(|v| v.clamp(0.0, 1.0)).collect());
                vectors.push(e.vectors);
            } else {
                values.push(Vec::new());
                vectors.push(CMatrix::zeros(0, 0));
            }
        }
        Spectra { ny, q, values, vectors }
    }

    /// `(I(Y;X), I(Y;B))` in bits.
    pub fn informations(&self, w: &[f64], s: &Spectra) -> (f64, f64) {
        let ny = s.ny;
        let noise: f64 = (0..self.nx).map(|x| self.p[x] * entropy_bits(&w[x * ny..(x + 1) * ny])).sum();
        let i_yx = (entropy_bits(&s.q) - noise).max(0.0);
        let conditional: f64 = (0..ny)
            .filter(|&y| s.q[y] >= OUTCOME_DROP_TOL)
            .map(|y| -s.q[y] * s.values[y].iter().map(|&v| xlog2x(v)).sum::<f64>())
            .sum();
        let i_yb = (self.avg_entropy - conditional).max(0.0);
        (i_yx, i_yb)
    }

    pub fn evaluate(&self, w: &[f64], ny: usize) -> (f64, f64) {
        let s = self.spectra(w, ny);
        self.informations(w, &s)
    }

    /// Tr ρ_x ln σ_y in nats. Eigenvalues below `floor` are raised to it; with `floor == 0` a
    /// support mismatch yields −∞. Unused outputs are treated as σ_y = ρ_x.
    pub fn log_overlap(&self, x: usize, y: usize, s: &Spectra, floor: f64) -> f64 {
        if s.q[y] < OUTCOME_DROP_TOL {
            return -self.state_entropy_nats[x];
        }
        let rho = &self.states[x];
        let vecs = &s.vectors[y];
        let d = self.d;
        let mut acc = 0.0;
        for (i, &lam) in s.values[y].iter().enumerate() {
            // ⟨e_i|ρ_x|e_i⟩
            let mut overlap = 0.0;
            for r in 0..d {
                let er = vecs[(r, i)].conj();
                for c in 0..d {
                    overlap += (er * rho[(r, c)] * vecs[(c, i)]).re;
                }
            }
            if overlap <= 1e-15 {
                continue;
            }
            let lam = lam.max(floor);
            if lam <= 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += overlap * lam.ln();
        }
        acc
    }

    /// Gradient in bits of `gain · I(Y;B) − cost · I(Y;X)` with respect to `W(y|x)`, up to a
    /// per-row constant (irrelevant under projection onto the row simplex).
    pub fn gradient(&self, w: &[f64], s: &Spectra, scal: Scalarization) -> Vec<f64> {
        const FLOOR: f64 = 1e-12;
        let ny = s.ny;
        let mut g = vec![0.0; self.nx * ny];
        for x in 0..self.nx {
            for y in 0..ny {
                let info_b = self.log_overlap(x, y, s, FLOOR);
                let info_x = if s.q[y] < OUTCOME_DROP_TOL {
                    -self.p[x].max(FLOOR).ln()
                } else {
                    (w[x * ny + y].max(FLOOR) / s.q[y]).ln()
                };
                g[x * ny + y] = self.p[x] / LN_2 * (scal.gain * info_b - scal.cost * info_x);
            }
        }
        g
    }
}
