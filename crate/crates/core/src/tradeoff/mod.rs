//! Single-letter purity/communication tradeoff for classical-quantum ensembles.
//!
//! For a channel `W(y|x)` on the classical register the operating point is
//! `(R, P) = (I(Y;X), I(Y;B))`; for classical-quantum states `I(Y;X)` equals `I(Y;BE)` of the
//! purified state, which is the classical communication rate. The P curve is
//! `P(R) = max { I(Y;B) : I(Y;X) ≤ R }` and the D curve is
//! `D(R) = max { I(Y;B) : I(Y;X) − I(Y;B) ≤ R }`.
//!
//! Both are computed the same way: for each multiplier `μ` maximize a weighted objective over
//! channels (multi-start local ascent plus every deterministic channel when there are few
//! enough), then take the concave envelope of the resulting points. Time-sharing with an
//! outcome flag makes every envelope point achievable.

mod ascent;
mod envelope;
mod objective;
mod oracle;

pub use ascent::{project_simplex, AscentMethod};
pub use envelope::Envelope;
pub use objective::Scalarization;
pub use oracle::{brute_force_oracle, brute_force_oracle_with_channel, oracle_candidate_count, ORACLE_CANDIDATE_LIMIT};

use crate::ensemble::{average_state, CQEnsemble, ClassicalChannel};
use crate::error::{Error, Result};
use crate::sampling::{random_simplex_point, rng_from_seed};
use crate::state::purity_kappa;
use objective::Problem;
use std::cmp::Ordering;

/// Default upper end of the D-curve multiplier range.
pub const D_MULTIPLIER_MAX: f64 = 50.0;

/// Knobs for the multi-start channel optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOptions {
    /// Output alphabet size; `None` means `|X| + 2`.
    pub y_size: Option<usize>,
    pub restarts: usize,
    /// Restart `i` draws its starting channel from seed `master_seed + i`.
    pub master_seed: u64,
    pub max_iterations: usize,
    /// Stop a local ascent once one iteration gains less than this.
    pub convergence_tol: f64,
    pub method: AscentMethod,
    /// Enumerate all deterministic channels when `|Y|^|X|` is at most this.
    pub deterministic_seed_limit: usize,
    /// Extra multipliers placed at envelope chord slopes after the grid is solved.
    pub refinements: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            y_size: None,
            restarts: 64,
            master_seed: 0,
            max_iterations: 5000,
            convergence_tol: 1e-9,
            method: AscentMethod::default(),
            deterministic_seed_limit: 4096,
            refinements: 0,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self) -> Result<()> {
        if self.y_size == Some(0) {
            return Err(Error::Domain("y_size must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Domain("restarts must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Domain("max_iterations must be at least 1".into()));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol < 0.0 {
            return Err(Error::Domain("convergence_tol must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn output_size(&self, labels: usize) -> usize {
        self.y_size.unwrap_or(labels + 2)
    }
}

/// Which constraint a curve's rate coordinate measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Rate is `I(Y;X)`.
    Purity,
    /// Rate is `I(Y;X) − I(Y;B)`.
    CommonRandomness,
}

/// One optimized operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    pub multiplier: f64,
    /// Constraint value: `I(Y;X)` on a P curve, `I(Y;X) − I(Y;B)` on a D curve.
    pub rate: f64,
    /// `I(Y;B)`.
    pub value: f64,
    pub i_yx: f64,
    pub i_yb: f64,
    pub channel: ClassicalChannel,
}

/// Points for a multiplier grid together with their envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffCurve {
    pub kind: CurveKind,
    /// Sorted by rate, ties by multiplier.
    pub points: Vec<TradeoffPoint>,
    pub envelope: Envelope,
}

impl TradeoffCurve {
    fn from_points(kind: CurveKind, mut points: Vec<TradeoffPoint>) -> Self {
        points.sort_by(|a, b| a.rate.total_cmp(&b.rate).then(a.multiplier.total_cmp(&b.multiplier)));
        let envelope = Envelope::from_points(points.iter().map(|p| (p.rate, p.value)));
        Self { kind, points, envelope }
    }

    /// Envelope value at `rate`.
    pub fn at(&self, rate: f64) -> f64 {
        self.envelope.eval(rate)
    }
}

/// `gain · I(Y;B) − cost · I(Y;X)` weighted as the P-curve Lagrangian `I(Y;B) − μ I(Y;X)`.
pub fn lagrangian_objective(ens: &CQEnsemble, w: &ClassicalChannel, mu: f64) -> Result<f64> {
    check_p_multiplier(mu)?;
    if w.rows() != ens.labels() {
        return Err(Error::DimensionMismatch { expected: ens.labels(), got: w.rows() });
    }
    let (i_yx, i_yb) = Problem::new(ens).evaluate(w.as_flat(), w.cols());
    Ok(Scalarization::p_curve(mu).value(i_yx, i_yb))
}

fn check_p_multiplier(mu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Domain(format!("multiplier {mu} outside [0, 1]")));
    }
    Ok(())
}

fn check_d_multiplier(mu: f64) -> Result<()> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::Domain(format!("multiplier {mu} must be finite and nonnegative")));
    }
    Ok(())
}

/// A candidate channel with its informations.
struct Candidate {
    w: Vec<f64>,
    i_yx: f64,
    i_yb: f64,
}

/// Reusable optimizer state for one ensemble: evaluator plus deterministic seed table.
struct Solver<'a> {
    problem: Problem,
    ny: usize,
    opts: &'a OptimizerOptions,
    deterministic: Vec<Candidate>,
}

/// `true` if `a` should replace `b`: higher objective, or an objective tie and a
/// lexicographically smaller channel.
fn beats(scal: Scalarization, a: &Candidate, b: &Candidate) -> bool {
    const TIE: f64 = 1e-12;
    let (va, vb) = (scal.value(a.i_yx, a.i_yb), scal.value(b.i_yx, b.i_yb));
    if va > vb + TIE {
        return true;
    }
    if va < vb - TIE {
        return false;
    }
    lexicographic(&a.w, &b.w) == Ordering::Less
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

impl<'a> Solver<'a> {
    fn new(ens: &CQEnsemble, opts: &'a OptimizerOptions) -> Result<Self> {
        opts.validate()?;
        let problem = Problem::new(ens);
        let nx = problem.nx;
        let ny = opts.output_size(nx);
        let mut deterministic = Vec::new();
        let total = (ny as f64).powi(nx as i32);
        if total <= opts.deterministic_seed_limit as f64 {
            let mut map = vec![0usize; nx];
            loop {
                let mut w = vec![0.0; nx * ny];
                for (x, &y) in map.iter().enumerate() {
                    w[x * ny + y] = 1.0;
                }
                let (i_yx, i_yb) = problem.evaluate(&w, ny);
                deterministic.push(Candidate { w, i_yx, i_yb });
                let mut k = 0;
                while k < nx {
                    map[k] += 1;
                    if map[k] < ny {
                        break;
                    }
                    map[k] = 0;
                    k += 1;
                }
                if k == nx {
                    break;
                }
            }
        }
        Ok(Self { problem, ny, opts, deterministic })
    }

    fn candidate(&self, w: Vec<f64>) -> Candidate {
        let (i_yx, i_yb) = self.problem.evaluate(&w, self.ny);
        Candidate { w, i_yx, i_yb }
    }

    fn refine(&self, scal: Scalarization, w: Vec<f64>) -> Candidate {
        let w = ascent::refine(
            &self.problem,
            scal,
            w,
            self.ny,
            self.opts.method,
            self.opts.max_iterations,
            self.opts.convergence_tol,
        );
        self.candidate(w)
    }

    fn solve(&self, scal: Scalarization) -> Candidate {
        let nx = self.problem.nx;
        let ny = self.ny;
        let mut best: Option<Candidate> = None;
        let offer = |c: Candidate, best: &mut Option<Candidate>| {
            if best.as_ref().is_none_or(|b| beats(scal, &c, b)) {
                *best = Some(c);
            }
        };

        let mut best_seed: Option<&Candidate> = None;
        for c in &self.deterministic {
            if best_seed.is_none_or(|b| beats(scal, c, b)) {
                best_seed = Some(c);
            }
        }
        if let Some(seed) = best_seed {
            offer(Candidate { w: seed.w.clone(), i_yx: seed.i_yx, i_yb: seed.i_yb }, &mut best);
            offer(self.refine(scal, seed.w.clone()), &mut best);
        }
        for i in 0..self.opts.restarts {
            let mut rng = rng_from_seed(self.opts.master_seed.wrapping_add(i as u64));
            let w: Vec<f64> = (0..nx).flat_map(|_| random_simplex_point(ny, &mut rng)).collect();
            offer(self.refine(scal, w), &mut best);
        }
        best.expect("at least one restart")
    }

    fn point(&self, kind: CurveKind, mu: f64) -> TradeoffPoint {
        let scal = match kind {
            CurveKind::Purity => Scalarization::p_curve(mu),
            CurveKind::CommonRandomness => Scalarization::d_curve(mu),
        };
        let c = self.solve(scal);
        let rate = match kind {
            CurveKind::Purity => c.i_yx,
            CurveKind::CommonRandomness => (c.i_yx - c.i_yb).max(0.0),
        };
        TradeoffPoint {
            multiplier: mu,
            rate,
            value: c.i_yb,
            i_yx: c.i_yx,
            i_yb: c.i_yb,
            channel: ClassicalChannel::from_flat_trusted(self.problem.nx, self.ny, c.w),
        }
    }
}

impl Solver<'_> {
    /// Solves the grid, then spends `opts.refinements` extra solves at the slopes of envelope
    /// segments, keeping points that rise above their segment.
    fn curve(&self, kind: CurveKind, grid: &[f64]) -> Result<TradeoffCurve> {
        const GAIN_TOL: f64 = 1e-9;
        let mut points: Vec<TradeoffPoint> = grid.iter().map(|&mu| self.point(kind, mu)).collect();
        let mut budget = self.opts.refinements;
        let mut settled: Vec<f64> = grid.to_vec();
        while budget > 0 {
            let env = Envelope::from_points(points.iter().map(|p| (p.rate, p.value)));
            let mut added = false;
            for seg in env.vertices().windows(2) {
                let (a, b) = (seg[0], seg[1]);
                if b.0 - a.0 <= 1e-12 || budget == 0 {
                    continue;
                }
                let mut mu = (b.1 - a.1) / (b.0 - a.0);
                if kind == CurveKind::Purity {
                    mu = mu.clamp(0.0, 1.0);
                }
                if settled.iter().any(|&m| (m - mu).abs() <= 1e-12 * mu.max(1.0)) {
                    continue;
                }
                settled.push(mu);
                budget -= 1;
                let p = self.point(kind, mu);
                let chord = a.1 + mu * (p.rate - a.0);
                if p.value > chord + GAIN_TOL {
                    added = true;
                }
                points.push(p);
            }
            if !added {
                break;
            }
        }
        Ok(TradeoffCurve::from_points(kind, points))
    }
}

/// Best channel found for `max I(Y;B) − μ I(Y;X)`, reported as `(μ, I(Y;X), I(Y;B), W)`.
pub fn optimize_lagrangian(ens: &CQEnsemble, mu: f64, opts: &OptimizerOptions) -> Result<TradeoffPoint> {
    check_p_multiplier(mu)?;
    Ok(Solver::new(ens, opts)?.point(CurveKind::Purity, mu))
}

/// P curve over a multiplier grid in `[0, 1]`.
pub fn compute_p_curve(ens: &CQEnsemble, mu_grid: &[f64], opts: &OptimizerOptions) -> Result<TradeoffCurve> {
    if mu_grid.is_empty() {
        return Err(Error::Domain("empty multiplier grid".into()));
    }
    mu_grid.iter().try_for_each(|&mu| check_p_multiplier(mu))?;
    Solver::new(ens, opts)?.curve(CurveKind::Purity, mu_grid)
}

/// D curve over a multiplier grid in `[0, ∞)`.
pub fn compute_d_curve(ens: &CQEnsemble, mu_grid: &[f64], opts: &OptimizerOptions) -> Result<TradeoffCurve> {
    if mu_grid.is_empty() {
        return Err(Error::Domain("empty multiplier grid".into()));
    }
    mu_grid.iter().try_for_each(|&mu| check_d_multiplier(mu))?;
    Solver::new(ens, opts)?.curve(CurveKind::CommonRandomness, mu_grid)
}

/// `(R, |P(D(R) + R) − D(R)|)` for each sample rate, from two computed curves.
pub fn pd_discrepancies(p_curve: &TradeoffCurve, d_curve: &TradeoffCurve, r_samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if p_curve.kind != CurveKind::Purity || d_curve.kind != CurveKind::CommonRandomness {
        return Err(Error::Domain("expected a P curve and a D curve".into()));
    }
    r_samples
        .iter()
        .map(|&r| {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::Domain(format!("sample rate {r} must be nonnegative")));
            }
            let d = d_curve.at(r);
            Ok((r, (p_curve.at(d + r) - d).abs()))
        })
        .collect()
}

/// Computes both curves and checks `P(D(R) + R) = D(R)` at each sample rate.
pub fn verify_pd_relation(
    ens: &CQEnsemble,
    r_samples: &[f64],
    p_grid: &[f64],
    d_grid: &[f64],
    opts: &OptimizerOptions,
) -> Result<Vec<(f64, f64)>> {
    let p = compute_p_curve(ens, p_grid, opts)?;
    let d = compute_d_curve(ens, d_grid, opts)?;
    pd_discrepancies(&p, &d, r_samples)
}

/// κ(ρ^X) + κ(ρ^B) + P(R), with P read off a computed P curve.
pub fn kappa_arrow(ens: &CQEnsemble, rate: f64, p_curve: &TradeoffCurve) -> Result<f64> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::Domain(format!("rate {rate} must be nonnegative")));
    }
    if p_curve.kind != CurveKind::Purity {
        return Err(Error::Domain("expected a P curve".into()));
    }
    Ok(local_purity(ens)? + p_curve.at(rate))
}

/// κ(ρ^X) + κ(ρ^B): the purity available without communication.
pub fn local_purity(ens: &CQEnsemble) -> Result<f64> {
    Ok(purity_kappa(&ens.classical_state())? + purity_kappa(&average_state(ens))?)
}

/// Channel that runs `first` with probability `t` and `second` otherwise, tagging the output
/// with which one ran (outputs of `first` come first).
pub fn flag_mixture(first: &ClassicalChannel, second: &ClassicalChannel, t: f64) -> Result<ClassicalChannel> {
    if first.rows() != second.rows() {
        return Err(Error::DimensionMismatch { expected: first.rows(), got: second.rows() });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("mixing weight {t} outside [0, 1]")));
    }
    let rows = (0..first.rows())
        .map(|x| {
            first.row(x).iter().map(|v| t * v).chain(second.row(x).iter().map(|v| (1.0 - t) * v)).collect()
        })
        .collect();
    ClassicalChannel::new(rows)
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(Error::Domain("grid needs a positive count and finite ends".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| if i == count - 1 { stop } else { start + step * i as f64 }).collect())
}

/// Zero followed by `count − 1` geometrically spaced multipliers from `mu_max / 1000` to `mu_max`.
pub fn d_multiplier_grid(count: usize, mu_max: f64) -> Result<Vec<f64>> {
    if count < 2 || !(mu_max > 0.0 && mu_max.is_finite()) {
        return Err(Error::Domain("D grid needs count >= 2 and a positive maximum".into()));
    }
    let lo = mu_max / 1000.0;
    let n = count - 1;
    let mut grid = vec![0.0];
    grid.extend((0..n).map(|i| {
        if n == 1 {
            mu_max
        } else {
            lo * (mu_max / lo).powf(i as f64 / (n - 1) as f64)
        }
    }));
    Ok(grid)
}
