//! The three cost objectives with closed forms, analytic gradients and
//! valley computation on the normalized two-bin square.

use crate::gauss;
use crate::model::{BinStats, Instance, ModelError, NormalizedPoint, Partition};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CostError {
    #[error("two-bin context needs c1, c2 >= 0, mu > 0, var > 0, c1 + c2 >= mu")]
    BadContext,
    #[error("gradient undefined on the boundary of the unit square")]
    Boundary,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Selector among the three objectives.
///
/// * `Spmed`  — minimum total expected overflow deviation, `sum_j sigma_j g(Delta_j)`.
/// * `Spmwop` — minimum worst per-bin overflow probability, `max_j (1 - Phi(Delta_j))`.
/// * `Spmop`  — minimum probability that any bin overflows, `1 - prod_j Phi(Delta_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CostModel {
    #[serde(rename = "SPMED")]
    Spmed,
    #[serde(rename = "SPMWOP")]
    Spmwop,
    #[serde(rename = "SPMOP")]
    Spmop,
}

impl CostModel {
    pub const ALL: [CostModel; 3] = [CostModel::Spmed, CostModel::Spmwop, CostModel::Spmop];

    pub fn name(self) -> &'static str {
        match self {
            CostModel::Spmed => "SPMED",
            CostModel::Spmwop => "SPMWOP",
            CostModel::Spmop => "SPMOP",
        }
    }
}

impl std::fmt::Display for CostModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CostModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "SPMED" | "SP-MED" => Ok(CostModel::Spmed),
            "SPMWOP" | "SP-MWOP" => Ok(CostModel::Spmwop),
            "SPMOP" | "SP-MOP" => Ok(CostModel::Spmop),
            other => Err(format!("unknown cost model `{other}`")),
        }
    }
}

/// Global constants of a two-bin problem: capacities (sorted `c1 <= c2`),
/// total mean and total variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBinContext {
    pub c1: f64,
    pub c2: f64,
    pub mu: f64,
    pub var: f64,
    pub sigma: f64,
}

impl TwoBinContext {
    pub fn new(c1: f64, c2: f64, mu: f64, var: f64) -> Result<Self, CostError> {
        let (c1, c2) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        if !(c1 >= 0.0) || !(mu > 0.0) || !(var > 0.0) || c1 + c2 < mu || !c2.is_finite() {
            return Err(CostError::BadContext);
        }
        Ok(Self {
            c1,
            c2,
            mu,
            var,
            sigma: var.sqrt(),
        })
    }

    pub fn from_instance(instance: &Instance) -> Result<Self, CostError> {
        if instance.k() != 2 {
            return Err(CostError::Model(ModelError::NotTwoBins(instance.k())));
        }
        Self::new(
            instance.capacities[0],
            instance.capacities[1],
            instance.total_mean(),
            instance.total_var(),
        )
    }

    /// Total spare capacity in units of the total standard deviation.
    pub fn total_delta(&self) -> f64 {
        (self.c1 + self.c2 - self.mu) / self.sigma
    }

    fn delta1(&self, a: f64, b: f64) -> f64 {
        (self.c1 - a * self.mu) / (b.sqrt() * self.sigma)
    }

    fn delta2(&self, a: f64, b: f64) -> f64 {
        (self.c2 - (1.0 - a) * self.mu) / ((1.0 - b).sqrt() * self.sigma)
    }
}

/// Expected deviation of one bin: `sigma_j g(Delta_j)`, with the zero-variance
/// limit `max(0, mu_j - c_j)`.
pub fn bin_deviation(capacity: f64, stats: &BinStats) -> f64 {
    if stats.var == 0.0 {
        (stats.mu - capacity).max(0.0)
    } else {
        stats.sigma * gauss::unit_normal_loss(stats.delta)
    }
}

/// Overflow probability of one bin: `1 - Phi(Delta_j)`, with the
/// zero-variance limit (a 0/1 step at `mu_j = c_j`).
pub fn bin_overflow_prob(capacity: f64, stats: &BinStats) -> f64 {
    if stats.var == 0.0 {
        if stats.mu > capacity {
            1.0
        } else {
            0.0
        }
    } else {
        gauss::upper_tail(stats.delta)
    }
}

pub(crate) fn bin_survival(capacity: f64, stats: &BinStats) -> f64 {
    if stats.var == 0.0 {
        if stats.mu > capacity {
            0.0
        } else {
            1.0
        }
    } else {
        gauss::cdf(stats.delta)
    }
}

/// Cost of an arbitrary k-bin partition under the chosen model.
pub fn partition_cost(
    instance: &Instance,
    partition: &Partition,
    model: CostModel,
) -> Result<f64, CostError> {
    let stats = crate::model::bin_stats(instance, partition)?;
    Ok(stats_cost(&instance.capacities, &stats, model))
}

pub(crate) fn stats_cost(capacities: &[f64], stats: &[BinStats], model: CostModel) -> f64 {
    match model {
        CostModel::Spmed => capacities
            .iter()
            .zip(stats)
            .map(|(&c, s)| bin_deviation(c, s))
            .sum(),
        CostModel::Spmwop => capacities
            .iter()
            .zip(stats)
            .map(|(&c, s)| bin_overflow_prob(c, s))
            .fold(0.0, f64::max),
        CostModel::Spmop => {
            1.0 - capacities
                .iter()
                .zip(stats)
                .map(|(&c, s)| bin_survival(c, s))
                .product::<f64>()
        }
    }
}

/// Per-bin terms of the two-bin surface at `(a, b)`, honoring the
/// zero-variance convention on the `b` boundary.
fn two_bin_terms(p: NormalizedPoint, ctx: &TwoBinContext) -> [(f64, f64, f64); 2] {
    // (deviation, overflow, survival) per bin
    let bins = [
        (ctx.c1, p.a * ctx.mu, p.b),
        (ctx.c2, (1.0 - p.a) * ctx.mu, 1.0 - p.b),
    ];
    bins.map(|(c, mu_j, frac)| {
        if frac <= 0.0 {
            let dev = (mu_j - c).max(0.0);
            let of = if mu_j > c { 1.0 } else { 0.0 };
            (dev, of, 1.0 - of)
        } else {
            let sigma_j = frac.sqrt() * ctx.sigma;
            let delta = (c - mu_j) / sigma_j;
            (
                sigma_j * gauss::unit_normal_loss(delta),
                gauss::upper_tail(delta),
                gauss::cdf(delta),
            )
        }
    })
}

/// The two-bin cost surface over the closed unit square.
pub fn cost2(p: NormalizedPoint, ctx: &TwoBinContext, model: CostModel) -> f64 {
    let [(d1, o1, s1), (d2, o2, s2)] = two_bin_terms(p, ctx);
    match model {
        CostModel::Spmed => d1 + d2,
        CostModel::Spmwop => o1.max(o2),
        CostModel::Spmop => 1.0 - s1 * s2,
    }
}

fn require_interior(p: NormalizedPoint) -> Result<(), CostError> {
    if p.a > 0.0 && p.a < 1.0 && p.b > 0.0 && p.b < 1.0 {
        Ok(())
    } else {
        Err(CostError::Boundary)
    }
}

/// Analytic gradient of the SP-MED surface at a strictly interior point:
/// `(mu [Phi(D2) - Phi(D1)], sigma/2 [pdf(D1)/sqrt(b) - pdf(D2)/sqrt(1-b)])`.
pub fn grad2_spmed(p: NormalizedPoint, ctx: &TwoBinContext) -> Result<(f64, f64), CostError> {
    require_interior(p)?;
    let (d1, d2) = (ctx.delta1(p.a, p.b), ctx.delta2(p.a, p.b));
    let da = ctx.mu * (gauss::cdf(d2) - gauss::cdf(d1));
    let db = ctx.sigma / 2.0 * (gauss::pdf(d1) / p.b.sqrt() - gauss::pdf(d2) / (1.0 - p.b).sqrt());
    Ok((da, db))
}

/// Analytic gradient of the chosen model at a strictly interior point.
/// For SP-MWOP (non-differentiable on the valley) this is the gradient of
/// the active branch; on an exact tie the branch of larger norm is reported.
pub fn grad2(
    p: NormalizedPoint,
    ctx: &TwoBinContext,
    model: CostModel,
) -> Result<(f64, f64), CostError> {
    require_interior(p)?;
    let (a, b) = (p.a, p.b);
    let (d1, d2) = (ctx.delta1(a, b), ctx.delta2(a, b));
    let (s1, s2) = (b.sqrt() * ctx.sigma, (1.0 - b).sqrt() * ctx.sigma);
    match model {
        CostModel::Spmed => grad2_spmed(p, ctx),
        CostModel::Spmwop => {
            // branch j is the overflow probability of bin j
            let g1 = (
                ctx.mu / s1 * gauss::pdf(d1),
                d1 * gauss::pdf(d1) / (2.0 * b),
            );
            let g2 = (
                -ctx.mu / s2 * gauss::pdf(d2),
                -d2 * gauss::pdf(d2) / (2.0 * (1.0 - b)),
            );
            let (o1, o2) = (gauss::upper_tail(d1), gauss::upper_tail(d2));
            if o1 > o2 {
                Ok(g1)
            } else if o2 > o1 {
                Ok(g2)
            } else {
                let n = |g: (f64, f64)| g.0.hypot(g.1);
                Ok(if n(g1) >= n(g2) { g1 } else { g2 })
            }
        }
        CostModel::Spmop => {
            let (p1, p2) = (gauss::pdf(d1), gauss::pdf(d2));
            let (c1, c2) = (gauss::cdf(d1), gauss::cdf(d2));
            let da = ctx.mu * (p1 * c2 / s1 - c1 * p2 / s2);
            let db = p1 * c2 * d1 / (2.0 * b) - c1 * p2 * d2 / (2.0 * (1.0 - b));
            Ok((da, db))
        }
    }
}

/// Analytic Hessian of the SP-MED surface, `[[daa, dab], [dab, dbb]]`.
pub fn hessian2_spmed(p: NormalizedPoint, ctx: &TwoBinContext) -> Result<[[f64; 2]; 2], CostError> {
    require_interior(p)?;
    let (a, b) = (p.a, p.b);
    let (d1, d2) = (ctx.delta1(a, b), ctx.delta2(a, b));
    let (s1, s2) = (b.sqrt() * ctx.sigma, (1.0 - b).sqrt() * ctx.sigma);
    let (p1, p2) = (gauss::pdf(d1), gauss::pdf(d2));
    let daa = ctx.mu * ctx.mu * (p2 / s2 + p1 / s1);
    let dab = ctx.mu * (d1 * p1 / (2.0 * b) + d2 * p2 / (2.0 * (1.0 - b)));
    let dbb = ctx.sigma / 4.0
        * (p1 * (d1 * d1 - 1.0) / (b * b.sqrt()) + p2 * (d2 * d2 - 1.0) / ((1.0 - b) * (1.0 - b).sqrt()));
    Ok([[daa, dab], [dab, dbb]])
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`, refined to
/// the given interval width. Assumes unimodality on the bracket.
pub(crate) fn golden_section_min(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// The valley: for fixed `b`, the `a` minimizing the two-bin cost.
///
/// SP-MED and SP-MWOP share the closed form solving `Delta_1 = Delta_2`,
/// clamped to `[0, 1]`; SP-MOP has no known closed form and is solved by
/// golden-section search (the surface is strictly convex in `a`).
pub fn valley_a(b: f64, ctx: &TwoBinContext, model: CostModel) -> f64 {
    debug_assert!(b > 0.0 && b < 1.0);
    match model {
        CostModel::Spmed | CostModel::Spmwop => {
            let (sb, scb) = (b.sqrt(), (1.0 - b).sqrt());
            let a = (ctx.c1 * scb - (ctx.c2 - ctx.mu) * sb) / (ctx.mu * (scb + sb));
            a.clamp(0.0, 1.0)
        }
        CostModel::Spmop => golden_section_min(
            |a| cost2(NormalizedPoint::new(a, b), ctx, CostModel::Spmop),
            0.0,
            1.0,
            1e-10,
        ),
    }
}

/// `Delta_1 = Delta_2` on the SP-MED / SP-MWOP valley:
/// `(c - mu) / (sigma (sqrt(b) + sqrt(1-b)))`.
pub fn valley_delta(b: f64, ctx: &TwoBinContext) -> f64 {
    (ctx.c1 + ctx.c2 - ctx.mu) / (ctx.sigma * (b.sqrt() + (1.0 - b).sqrt()))
}

/// Center of the reflection symmetry, `(1/2 - (c2-c1)/(2 mu), 1/2)`.
pub fn saddle_point(ctx: &TwoBinContext) -> NormalizedPoint {
    NormalizedPoint::new(0.5 - (ctx.c2 - ctx.c1) / (2.0 * ctx.mu), 0.5)
}
