//! Upper concave, nondecreasing envelope of a set of operating points.
//!
//! Any two operating points can be time-shared (see [`super::flag_mixture`]), and a larger rate
//! budget can always be left unused, so the achievable curve is the least concave nondecreasing
//! majorant of the points. The origin (constant channel) is always achievable and is included.

/// Piecewise-linear envelope given by its vertices, sorted by rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    vertices: Vec<(f64, f64)>,
}

impl Envelope {
    /// Builds the envelope of `points ∪ {(0, 0)}`. Negative rates (rounding) are clamped to zero.
    pub fn from_points<I: IntoIterator<Item = (f64, f64)>>(points: I) -> Self {
        let mut pts: Vec<(f64, f64)> = points
            .into_iter()
            .filter(|(r, p)| r.is_finite() && p.is_finite())
            .map(|(r, p)| (r.max(0.0), p))
            .collect();
        pts.push((0.0, 0.0));
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
        pts.dedup_by(|b, a| a.0 == b.0);

        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                // Drop `a` unless the turn o → a → p is strictly clockwise.
                let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        // Past the highest vertex the envelope stays flat.
        let top = hull
            .iter()
            .enumerate()
            .fold(0, |best, (i, v)| if v.1 > hull[best].1 { i } else { best });
        hull.truncate(top + 1);
        Self { vertices: hull }
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// Envelope value at rate `r` (flat beyond the last vertex, clamped at `r = 0`).
    pub fn eval(&self, r: f64) -> f64 {
        let v = &self.vertices;
        if r <= v[0].0 {
            return v[0].1;
        }
        let last = v[v.len() - 1];
        if r >= last.0 {
            return last.1;
        }
        let i = v.partition_point(|&(x, _)| x <= r);
        let (a, b) = (v[i - 1], v[i]);
        a.1 + (b.1 - a.1) * (r - a.0) / (b.0 - a.0)
    }
}
