//! Local ascent on row-stochastic matrices.
//!
//! Two routines share the [`Problem`] evaluator:
//!
//! * projected gradient ascent with Armijo backtracking, each row projected back onto the simplex;
//! * alternating maximization, the Blahut-Arimoto / information-bottleneck style update
//!   `W(y|x) ∝ q(y) exp(−(gain/cost) D(ρ_x ‖ σ_y))`, which never decreases the objective.

use super::objective::{Problem, Scalarization};
use crate::ensemble::OUTCOME_DROP_TOL;

/// Which local method refines each starting channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AscentMethod {
    /// Projected gradient ascent only.
    ProjectedGradient,
    /// Alternating maximization only.
    AlternatingMaximization,
    /// Alternating maximization followed by a projected-gradient polish.
    #[default]
    Hybrid,
}

/// Euclidean projection onto the probability simplex, in place.
pub fn project_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
    // Renormalize the rounding residue.
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        for x in v.iter_mut() {
            *x /= s;
        }
    }
}

pub(crate) fn value(problem: &Problem, scal: Scalarization, w: &[f64], ny: usize) -> f64 {
    let (i_yx, i_yb) = problem.evaluate(w, ny);
    scal.value(i_yx, i_yb)
}

pub(crate) fn refine(
    problem: &Problem,
    scal: Scalarization,
    w: Vec<f64>,
    ny: usize,
    method: AscentMethod,
    max_iterations: usize,
    tol: f64,
) -> Vec<f64> {
    match method {
        AscentMethod::ProjectedGradient => projected_gradient(problem, scal, w, ny, max_iterations, tol),
        AscentMethod::AlternatingMaximization => alternating(problem, scal, w, ny, max_iterations, tol),
        AscentMethod::Hybrid => {
            let w = alternating(problem, scal, w, ny, max_iterations, tol);
            projected_gradient(problem, scal, w, ny, max_iterations, tol)
        }
    }
}

/// Projected gradient ascent with Armijo backtracking along the projection arc.
pub(crate) fn projected_gradient(
    problem: &Problem,
    scal: Scalarization,
    mut w: Vec<f64>,
    ny: usize,
    max_iterations: usize,
    tol: f64,
) -> Vec<f64> {
    const ARMIJO: f64 = 1e-4;
    let mut spectra = problem.spectra(&w, ny);
    let (a, b) = problem.informations(&w, &spectra);
    let mut f = scal.value(a, b);
    let mut step = 1.0;
    for _ in 0..max_iterations {
        let g = problem.gradient(&w, &spectra, scal);
        let mut accepted = None;
        for _ in 0..60 {
            let mut cand: Vec<f64> = w.iter().zip(&g).map(|(wi, gi)| wi + step * gi).collect();
            for row in cand.chunks_mut(ny) {
                project_simplex(row);
            }
            let moved: f64 = cand.iter().zip(&w).zip(&g).map(|((c, wi), gi)| gi * (c - wi)).sum();
            if moved <= 0.0 {
                step *= 0.5;
                continue;
            }
            let s = problem.spectra(&cand, ny);
            let (a, b) = problem.informations(&cand, &s);
            let fc = scal.value(a, b);
            if fc >= f + ARMIJO * moved {
                accepted = Some((cand, s, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, s, fc)) = accepted else { break };
        let gain = fc - f;
        w = cand;
        spectra = s;
        f = fc;
        step = (step * 2.0).min(1e6);
        if gain < tol {
            break;
        }
    }
    w
}

/// Alternating maximization. With `cost == 0` the update is a hard nearest-centroid assignment.
pub(crate) fn alternating(
    problem: &Problem,
    scal: Scalarization,
    mut w: Vec<f64>,
    ny: usize,
    max_iterations: usize,
    tol: f64,
) -> Vec<f64> {
    let nx = problem.nx;
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..max_iterations {
        let spectra = problem.spectra(&w, ny);
        let (a, b) = problem.informations(&w, &spectra);
        let f = scal.value(a, b);
        if f - prev < tol && prev.is_finite() {
            break;
        }
        prev = f;
        let mut next = vec![0.0; nx * ny];
        for x in 0..nx {
            let row = &mut next[x * ny..(x + 1) * ny];
            let logits: Vec<f64> = (0..ny)
                .map(|y| {
                    if spectra.q[y] < OUTCOME_DROP_TOL {
                        return f64::NEG_INFINITY;
                    }
                    let lo = problem.log_overlap(x, y, &spectra, 0.0);
                    if scal.cost == 0.0 {
                        lo
                    } else {
                        spectra.q[y].ln() + scal.gain / scal.cost * lo
                    }
                })
                .collect();
            let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !top.is_finite() {
                row.copy_from_slice(&w[x * ny..(x + 1) * ny]);
                continue;
            }
            if scal.cost == 0.0 {
                let y = logits.iter().position(|&l| l == top).unwrap_or(0);
                row[y] = 1.0;
                continue;
            }
            let mut total = 0.0;
            for (r, l) in row.iter_mut().zip(&logits) {
                *r = (l - top).exp();
                total += *r;
            }
            for r in row.iter_mut() {
                *r /= total;
            }
        }
        // Guard against the rare non-monotone step caused by rounding at support boundaries.
        if value(problem, scal, &next, ny) < f - 1e-12 {
            break;
        }
        w = next;
    }
    w
}
