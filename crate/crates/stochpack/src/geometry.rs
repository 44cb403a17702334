//! Sorted paths in the normalized square, integral points, polygon
//! containment and cost-surface grid export.

use crate::costs::{self, CostModel, TwoBinContext};
use crate::model::{Instance, NormalizedPoint, ServiceDemand};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("integral-point enumeration is limited to n <= {max}, got {n}")]
    TooManyServices { n: usize, max: usize },
    #[error("grid resolution must be at least 2")]
    BadResolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Prefix sums in ascending VMR order; lies beneath every integral point.
    Bottom,
    /// Prefix sums in descending VMR order; lies above every integral point.
    Upper,
}

/// Piecewise-linear curve of prefix sums from `(0,0)` to `(1,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedPath {
    pub points: Vec<NormalizedPoint>,
    pub orientation: Orientation,
}

impl SortedPath {
    pub fn n_segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Envelope value of the path at abscissa `a`: the smallest attainable
    /// `b` for a bottom path, the largest for an upper path. Vertical
    /// segments (zero-mean services) are resolved by that convention.
    pub fn b_at(&self, a: f64) -> f64 {
        let pts = &self.points;
        match self.orientation {
            Orientation::Bottom => {
                for w in pts.windows(2) {
                    let (p, q) = (w[0], w[1]);
                    if a <= q.a {
                        if q.a > p.a {
                            let t = ((a - p.a) / (q.a - p.a)).clamp(0.0, 1.0);
                            return p.b + t * (q.b - p.b);
                        }
                        return p.b;
                    }
                }
                pts[pts.len() - 1].b
            }
            Orientation::Upper => {
                for w in pts.windows(2).rev() {
                    let (p, q) = (w[0], w[1]);
                    if a >= p.a {
                        if q.a > p.a {
                            let t = ((a - p.a) / (q.a - p.a)).clamp(0.0, 1.0);
                            return p.b + t * (q.b - p.b);
                        }
                        return q.b;
                    }
                }
                pts[0].b
            }
        }
    }
}

fn prefix_path(services: &[ServiceDemand], order: &[usize], orientation: Orientation) -> SortedPath {
    let mu: f64 = services.iter().map(|s| s.mu).sum();
    let var: f64 = services.iter().map(|s| s.var).sum();
    let mut points = Vec::with_capacity(order.len() + 1);
    let (mut sa, mut sb) = (0.0, 0.0);
    points.push(NormalizedPoint::new(0.0, 0.0));
    for &i in order {
        sa += services[i].mu / mu;
        sb += services[i].var / var;
        points.push(NormalizedPoint::new(sa, sb));
    }
    SortedPath {
        points,
        orientation,
    }
}

/// Bottom (VMR-ascending) and upper (VMR-descending) sorted paths.
pub fn build_sorted_paths(instance: &Instance) -> (SortedPath, SortedPath) {
    build_sorted_paths_from_services(&instance.services)
}

/// Sorted paths for a bare service list (no bin capacities needed).
pub fn build_sorted_paths_from_services(services: &[ServiceDemand]) -> (SortedPath, SortedPath) {
    let mut order: Vec<usize> = (0..services.len()).collect();
    order.sort_by(|&i, &j| services[i].vmr().total_cmp(&services[j].vmr()));
    let bottom = prefix_path(services, &order, Orientation::Bottom);
    let rev: Vec<usize> = order.iter().rev().copied().collect();
    let upper = prefix_path(services, &rev, Orientation::Upper);
    (bottom, upper)
}

pub const MAX_ENUMERATION: usize = 20;

/// All `2^n` subset points in the normalized square.
pub fn enumerate_integral_points(
    instance: &Instance,
) -> Result<Vec<NormalizedPoint>, GeometryError> {
    let n = instance.n();
    if n > MAX_ENUMERATION {
        return Err(GeometryError::TooManyServices {
            n,
            max: MAX_ENUMERATION,
        });
    }
    let (mu, var) = (instance.total_mean(), instance.total_var());
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let (mut sa, mut sb) = (0.0, 0.0);
        for (i, s) in instance.services.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sa += s.mu / mu;
                sb += s.var / var;
            }
        }
        out.push(NormalizedPoint::new(sa, sb));
    }
    Ok(out)
}

/// True iff `p` lies on or above the bottom path and on or below the upper
/// path (in the b-versus-a sense), within `tol`.
pub fn contains(bottom: &SortedPath, upper: &SortedPath, p: NormalizedPoint, tol: f64) -> bool {
    if p.a < -tol || p.a > 1.0 + tol || p.b < -tol || p.b > 1.0 + tol {
        return false;
    }
    let a = p.a.clamp(0.0, 1.0);
    p.b >= bottom.b_at(a) - tol && p.b <= upper.b_at(a) + tol
}

/// CSV rows `(a, b, cost, tag)` over a uniform grid, plus valley samples and
/// the saddle location. Rows are ordered by `(b, a)` within each tag block.
pub fn export_cost_grid(
    ctx: &TwoBinContext,
    model: CostModel,
    resolution: usize,
) -> Result<String, GeometryError> {
    if resolution < 2 {
        return Err(GeometryError::BadResolution);
    }
    let mut out = String::from("a,b,cost,tag\n");
    let coord = |i: usize| i as f64 / (resolution - 1) as f64;
    for j in 0..resolution {
        let b = coord(j);
        for i in 0..resolution {
            let a = coord(i);
            let cost = costs::cost2(NormalizedPoint::new(a, b), ctx, model);
            out.push_str(&format!("{a},{b},{cost},grid\n"));
        }
    }
    for j in 0..resolution {
        let b = coord(j);
        if b <= 0.0 || b >= 1.0 {
            continue;
        }
        let a = costs::valley_a(b, ctx, model);
        let cost = costs::cost2(NormalizedPoint::new(a, b), ctx, model);
        out.push_str(&format!("{a},{b},{cost},valley\n"));
    }
    let s = costs::saddle_point(ctx);
    let cost = costs::cost2(s, ctx, model);
    out.push_str(&format!("{},{},{cost},saddle\n", s.a, s.b));
    Ok(out)
}
