//! Finite-n typicality, typical-subspace counting and the direct-coding resource ledger.
//!
//! A sequence `y^n` is δ-typical when every symbol count satisfies `|n_y − n p_y| ≤ δ n`.
//! Symbols with `p_y = 0` must not occur at all. Exact quantities are sums over count vectors
//! in the resulting box, computed by dynamic programming in the log domain.

use crate::ensemble::{apply_channel, average_state, purify_cq, CQEnsemble, ClassicalChannel, OUTCOME_DROP_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::sampling::rng_from_seed;
use crate::state::{entropy_bits, entropy_from_eigenvalues, purity_kappa, DensityMatrix, ProbabilityDistribution};
use rand::Rng;
use std::fmt;

/// Largest alphabet handled by the exact count-box recursion.
pub const EXACT_ALPHABET_LIMIT: usize = 8;
/// Largest dimension accepted by [`typical_subspace_stats`].
pub const SUBSPACE_DIM_LIMIT: usize = 8;
/// Largest block length accepted by [`typical_subspace_stats`].
pub const SUBSPACE_N_LIMIT: usize = 10_000;

/// Eigenvalues at or below this are treated as outside the support.
const SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSetSpec {
    pub dist: ProbabilityDistribution,
    pub n: usize,
    pub delta: f64,
}

impl TypicalSetSpec {
    pub fn new(dist: ProbabilityDistribution, n: usize, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("block length must be at least 1".into()));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Domain(format!("delta {delta} must be positive")));
        }
        Ok(Self { dist, n, delta })
    }

    /// Allowed count range `[lo, hi]` for each symbol; `None` if some range is empty.
    fn count_ranges(&self) -> Option<Vec<(usize, usize)>> {
        let n = self.n as f64;
        let slack = self.delta * n;
        let eps = 1e-9 * n.max(1.0);
        self.dist
            .probs()
            .iter()
            .map(|&p| {
                if p == 0.0 {
                    return Some((0, 0));
                }
                let lo = (n * p - slack - eps).ceil().max(0.0) as usize;
                let hi = ((n * p + slack + eps).floor().min(n)) as usize;
                (lo <= hi).then_some((lo, hi))
            })
            .collect()
    }
}

fn log_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for i in 1..=n {
        t[i] = t[i - 1] + (i as f64).ln();
    }
    t
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// ln Σ over count vectors in the box summing to `n` of `ln n! + Σ_y weight(y, c_y)`.
fn log_box_sum(n: usize, ranges: &[(usize, usize)], weight: impl Fn(usize, usize) -> f64, lf: &[f64]) -> f64 {
    // dp[s] = ln Σ over partial count vectors with total s of Π_y weight
    let mut dp = vec![f64::NEG_INFINITY; n + 1];
    dp[0] = 0.0;
    for (y, &(lo, hi)) in ranges.iter().enumerate() {
        let mut next = vec![f64::NEG_INFINITY; n + 1];
        for (s, &base) in dp.iter().enumerate() {
            if base == f64::NEG_INFINITY {
                continue;
            }
            for c in lo..=hi.min(n - s) {
                next[s + c] = log_add(next[s + c], base + weight(y, c));
            }
        }
        dp = next;
    }
    lf[n] + dp[n]
}

/// Exact probability that an i.i.d. sequence is δ-typical.
pub fn typical_probability(spec: &TypicalSetSpec) -> Result<f64> {
    let k = spec.dist.len();
    if k > EXACT_ALPHABET_LIMIT {
        return Err(Error::Guard(format!(
            "exact typicality needs an alphabet of at most {EXACT_ALPHABET_LIMIT}, got {k}; use the Monte Carlo estimate"
        )));
    }
    let Some(ranges) = spec.count_ranges() else { return Ok(0.0) };
    let lf = log_factorials(spec.n);
    let lp: Vec<f64> = spec.dist.probs().iter().map(|p| p.ln()).collect();
    let ln_prob = log_box_sum(
        spec.n,
        &ranges,
        |y, c| if c == 0 { -lf[0] } else { c as f64 * lp[y] - lf[c] },
        &lf,
    );
    Ok(ln_prob.exp().clamp(0.0, 1.0))
}

/// Monte Carlo estimate of the typical probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalityEstimate {
    pub probability: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Estimates the typical probability from `samples` independent sequences drawn with `seed`.
pub fn estimate_typical_probability(spec: &TypicalSetSpec, samples: usize, seed: u64) -> Result<TypicalityEstimate> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let probs = spec.dist.probs();
    let ranges = spec.count_ranges();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = rng_from_seed(seed);
    let mut hits = 0usize;
    let mut counts = vec![0usize; probs.len()];
    for _ in 0..samples {
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..spec.n {
            let u: f64 = rng.random::<f64>() * acc;
            let y = cumulative.partition_point(|&c| c <= u).min(probs.len() - 1);
            counts[y] += 1;
        }
        if let Some(r) = &ranges {
            if counts.iter().zip(r).all(|(&c, &(lo, hi))| c >= lo && c <= hi) {
                hits += 1;
            }
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(TypicalityEstimate { probability: p, std_error: (p * (1.0 - p) / samples as f64).sqrt(), samples })
}

/// `(rate, mass)` of the δ-typical subspace of `rho^{⊗n}`: `rate = log₂(#typical eigenbasis
/// sequences) / n` and `mass` is its probability under the eigenvalue distribution.
/// An empty typical set reports rate 0 and mass 0.
pub fn typical_subspace_stats(rho: &DensityMatrix, n: usize, delta: f64) -> Result<(f64, f64)> {
    if rho.dim() > SUBSPACE_DIM_LIMIT {
        return Err(Error::Guard(format!("dimension {} exceeds {SUBSPACE_DIM_LIMIT}", rho.dim())));
    }
    if n > SUBSPACE_N_LIMIT {
        return Err(Error::Guard(format!("block length {n} exceeds {SUBSPACE_N_LIMIT}")));
    }
    let eig: Vec<f64> = rho.eigenvalues().into_iter().map(|v| if v <= SUPPORT_TOL { 0.0 } else { v }).collect();
    let dist = ProbabilityDistribution::from_weights(&eig)?;
    let spec = TypicalSetSpec::new(dist, n, delta)?;
    let Some(ranges) = spec.count_ranges() else { return Ok((0.0, 0.0)) };
    let lf = log_factorials(n);
    let ln_count = log_box_sum(n, &ranges, |_, c| -lf[c], &lf);
    let rate = if ln_count.is_finite() { (ln_count / std::f64::consts::LN_2 / n as f64).max(0.0) } else { 0.0 };
    Ok((rate, typical_probability(&spec)?))
}

/// Per-copy resource rates of the direct-coding protocol for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceLedger {
    pub n: usize,
    pub delta: f64,
    /// Message rate `I(Y;BE) + δ`.
    pub rate_m: f64,
    /// Shared-randomness rate `H(Y|BE) + δ`.
    pub rate_l: f64,
    /// Borrowed pure ancilla rate `I(Y;BE)`.
    pub catalyst_rate: f64,
    pub p_a_rate: f64,
    pub p_b_rate: f64,
    /// Net purity `κ(ρ^X) + κ(ρ^B) + I(Y;B)`.
    pub net_p: f64,
    /// Classical communication `I(Y;BE)`.
    pub classical_r: f64,
    pub delta_a: f64,
    pub delta_b: f64,
}

impl ResourceLedger {
    /// Keys in serialization order.
    pub const KEYS: [&'static str; 9] =
        ["n", "delta", "rate_M", "rate_L", "catalyst_rate", "P_A_rate", "P_B_rate", "net_P", "classical_R"];

    fn values(&self) -> [f64; 8] {
        [
            self.delta,
            self.rate_m,
            self.rate_l,
            self.catalyst_rate,
            self.p_a_rate,
            self.p_b_rate,
            self.net_p,
            self.classical_r,
        ]
    }

    /// Reads the `key=value` form back. `delta_a`/`delta_b` are not serialized and come back as NaN.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vals = Vec::with_capacity(9);
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        for key in Self::KEYS {
            let Some((i, line)) = lines.next() else {
                return Err(Error::Parse { line: text.lines().count() + 1, msg: format!("missing key {key}") });
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: "expected key=value".into() })?;
            if k.trim() != key {
                return Err(Error::Parse { line: i + 1, msg: format!("expected key {key}, found {}", k.trim()) });
            }
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad number {v:?}") })?;
            vals.push(v);
        }
        if let Some((i, _)) = lines.next() {
            return Err(Error::Parse { line: i + 1, msg: "unexpected trailing line".into() });
        }
        if vals[0] < 1.0 || vals[0].fract() != 0.0 {
            return Err(Error::Parse { line: 1, msg: "n must be a positive integer".into() });
        }
        Ok(Self {
            n: vals[0] as usize,
            delta: vals[1],
            rate_m: vals[2],
            rate_l: vals[3],
            catalyst_rate: vals[4],
            p_a_rate: vals[5],
            p_b_rate: vals[6],
            net_p: vals[7],
            classical_r: vals[8],
            delta_a: f64::NAN,
            delta_b: f64::NAN,
        })
    }
}

impl fmt::Display for ResourceLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (k, v) in Self::KEYS[1..].iter().zip(self.values()) {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Fills the ledger for `n` copies of `ens` measured through `w`, with slack `delta ≥ 0`.
pub fn resource_ledger(ens: &CQEnsemble, w: &ClassicalChannel, n: usize, delta: f64) -> Result<ResourceLedger> {
    if n == 0 {
        return Err(Error::Domain("block length must be at least 1".into()));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta {delta} must be nonnegative")));
    }
    if w.rows() != ens.labels() {
        return Err(Error::DimensionMismatch { expected: ens.labels(), got: w.rows() });
    }
    let blocks = purify_cq(ens).channel_blocks(w)?;
    let q: Vec<f64> = blocks.iter().map(|a| a.trace().re.max(0.0)).collect();
    let h_y = entropy_bits(&q);

    // Conditional BE states.
    let dim = blocks[0].nrows();
    let mut total = CMatrix::zeros(dim, dim);
    let mut h_be_given_y = 0.0;
    let mut sum_h_be = 0.0;
    for (a, &qy) in blocks.iter().zip(&q) {
        total += a;
        if qy >= OUTCOME_DROP_TOL {
            let vals: Vec<f64> = linalg::eigvalsh(a).into_iter().map(|v| v / qy).collect();
            let h = entropy_from_eigenvalues(&vals)?;
            h_be_given_y += qy * h;
            sum_h_be += h;
        }
    }
    let h_be = entropy_from_eigenvalues(&linalg::eigvalsh(&total))?;
    let i_ybe = (h_be - h_be_given_y).max(0.0);
    let h_y_given_be = (h_y - i_ybe).max(0.0);

    // Conditional B states.
    let y_ens = apply_channel(ens, w)?;
    let mut h_b_given_y = 0.0;
    let mut sum_h_b = 0.0;
    for (qy, s) in y_ens.probs().probs().iter().zip(y_ens.states()) {
        let h = entropy_from_eigenvalues(&s.eigenvalues())?;
        h_b_given_y += qy * h;
        sum_h_b += h;
    }
    let rho_b = average_state(ens);
    let i_yb = (entropy_from_eigenvalues(&rho_b.eigenvalues())? - h_b_given_y).max(0.0);

    let ny = w.cols() as f64;
    let log_da = (ens.labels() as f64).log2();
    let log_db = (ens.dim() as f64).log2();
    let delta_a = (ny * log_da - sum_h_be + 1.0) * delta;
    let delta_b = (ny * log_db - sum_h_b + 1.0) * delta;

    let kappa = purity_kappa(&ens.classical_state())? + purity_kappa(&rho_b)?;
    Ok(ResourceLedger {
        n,
        delta,
        rate_m: i_ybe + delta,
        rate_l: h_y_given_be + delta,
        catalyst_rate: i_ybe,
        p_a_rate: (log_da - h_be_given_y - delta_a).max(0.0),
        p_b_rate: (log_db - h_b_given_y - delta_b).max(0.0),
        net_p: kappa + i_yb,
        classical_r: i_ybe,
        delta_a,
        delta_b,
    })
}
