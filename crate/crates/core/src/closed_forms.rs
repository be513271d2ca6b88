//! Worked examples with analytic answers: the uniform qubit ensemble, the parametrized BB84
//! ensemble, and the merge-channel operating point for BB84.

use crate::ensemble::{CQEnsemble, ClassicalChannel};
use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::state::{binary_entropy, DensityMatrix, ProbabilityDistribution};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

/// Below this λ the parametric curve is evaluated from its second-order expansion.
pub const SERIES_GUARD: f64 = 1e-6;

/// Parameter λ > 0 of the uniform-ensemble curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformCurveParam {
    lam: f64,
}

impl UniformCurveParam {
    pub fn new(lam: f64) -> Result<Self> {
        if !(lam.is_finite() && lam > 0.0) {
            return Err(Error::Domain(format!("curve parameter must be positive, got {lam}")));
        }
        Ok(Self { lam })
    }

    pub fn lam(&self) -> f64 {
        self.lam
    }
}

/// Point `(R, P)` in bits on the tradeoff curve of the uniform ensemble of pure qubit states.
///
/// The channel behind this curve is a von Mises-Fisher kernel on the Bloch sphere; its
/// `I(Y;X)` is `λ/(e^λ−1) − 1 + ln(λe^λ/(e^λ−1))` nats, which is converted to bits here. The
/// purity coordinate is `1 − h₂(1/λ − 1/(e^λ−1))`.
pub fn uniform_curve_point(param: UniformCurveParam) -> Result<(f64, f64)> {
    let lam = param.lam;
    if lam < SERIES_GUARD {
        // R ≈ λ²/24 nats; the h₂ argument is ½ − λ/12 and 1 − h₂(½ − ε) ≈ 2ε²/ln 2.
        let r = lam * lam / 24.0 / LN_2;
        let eps = lam / 12.0;
        return Ok((r, 2.0 * eps * eps / LN_2));
    }
    let em1 = lam.exp_m1();
    let ratio = if em1.is_infinite() { 0.0 } else { lam / em1 };
    // ln(λ e^λ / (e^λ − 1)) = ln λ − ln(1 − e^{−λ})
    let log_term = lam.ln() - (-(-lam).exp_m1()).ln();
    let r_nats = ratio - 1.0 + log_term;
    let arg = 1.0 / lam - if em1.is_infinite() { 0.0 } else { 1.0 / em1 };
    if !(0.0..=1.0).contains(&arg) {
        return Err(Error::Domain(format!("h2 argument {arg} left [0, 1] at lambda {lam}")));
    }
    Ok(((r_nats / LN_2).max(0.0), (1.0 - binary_entropy(arg)).max(0.0)))
}

/// The four BB84 states `|0⟩, cos θ|0⟩ + sin θ|1⟩, |1⟩, −sin θ|0⟩ + cos θ|1⟩`, each with weight ¼.
pub fn bb84_ensemble(theta: f64) -> Result<CQEnsemble> {
    if !(0.0..=PI / 2.0).contains(&theta) {
        return Err(Error::Domain(format!("theta {theta} outside [0, pi/2]")));
    }
    let (s, c) = theta.sin_cos();
    let ket = |a: f64, b: f64| CVector::from_vec(vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]);
    CQEnsemble::from_pure(
        ProbabilityDistribution::uniform(4),
        &[ket(1.0, 0.0), ket(c, s), ket(0.0, 1.0), ket(-s, c)],
    )
}

/// Merges labels {1, 2} into outcome 0 and {3, 4} into outcome 1.
pub fn bb84_merge_channel() -> ClassicalChannel {
    ClassicalChannel::deterministic(&[0, 0, 1, 1], 2).expect("merge map is valid")
}

/// Operating point `(1, 1 − h₂((1 − cos θ)/2))` of the merge channel on BB84(θ).
pub fn bb84_restricted_point(theta: f64) -> Result<(f64, f64)> {
    if !(0.0..=PI / 2.0).contains(&theta) {
        return Err(Error::Domain(format!("theta {theta} outside [0, pi/2]")));
    }
    Ok((1.0, 1.0 - binary_entropy((1.0 - theta.cos()) / 2.0)))
}

/// Bloch vectors of the symmetric node set used by [`discretize_uniform_sphere`].
///
/// Even counts are antipodal pairs: a golden-angle spiral on the upper hemisphere plus its
/// reflection through the origin. Odd counts swap one pair for an equilateral triangle on the
/// equator. Either way the node vectors sum to zero exactly.
pub fn sphere_nodes(n_nodes: usize) -> Result<Vec<[f64; 3]>> {
    if n_nodes < 2 {
        return Err(Error::Domain(format!("need at least 2 nodes, got {n_nodes}")));
    }
    let (pairs, triangle) = if n_nodes.is_multiple_of(2) { (n_nodes / 2, false) } else { ((n_nodes - 3) / 2, true) };
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut nodes = Vec::with_capacity(n_nodes);
    for i in 0..pairs {
        let z = 1.0 - (i as f64 + 0.5) / pairs as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden * i as f64;
        nodes.push([r * phi.cos(), r * phi.sin(), z]);
    }
    for i in 0..pairs {
        let [x, y, z] = nodes[i];
        nodes.push([-x, -y, -z]);
    }
    if triangle {
        for k in 0..3 {
            let phi = 2.0 * PI * k as f64 / 3.0 + PI / 6.0;
            nodes.push([phi.cos(), phi.sin(), 0.0]);
        }
    }
    Ok(nodes)
}

/// Equal-weight pure-state ensemble at the nodes of [`sphere_nodes`].
pub fn discretize_uniform_sphere(n_nodes: usize) -> Result<CQEnsemble> {
    let nodes = if n_nodes == 2 { vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]] } else { sphere_nodes(n_nodes)? };
    let states = nodes.into_iter().map(DensityMatrix::qubit_bloch).collect::<Result<Vec<_>>>()?;
    CQEnsemble::new(ProbabilityDistribution::uniform(n_nodes), states)
}
