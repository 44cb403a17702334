//! Solvers: the two-bin sorting algorithm, the fractional optimizer on the
//! bottom sorted path, the k-bin double-sorting dynamic program, brute-force
//! oracles and error-bound certificates.

use crate::costs::{
    self, golden_section_min, CostError, CostModel, TwoBinContext,
};
use crate::geometry::{build_sorted_paths_from_services, SortedPath};
use crate::model::{
    sort_by_vmr, BinStats, Instance, ModelError, NormalizedPoint, Partition, ServiceDemand,
};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error("brute force is limited to k^n <= 2^24 (n log2 k <= 24), got n={n}, k={k}")]
    TooLarge { n: usize, k: usize },
}

/// Result of the two-bin sorting algorithm: the `split_index` lowest-VMR
/// services go to the lower-capacity bin.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBinSolution {
    pub split_index: usize,
    pub partition: Partition,
    pub cost: f64,
}

/// Optimal fractional point on the bottom sorted path. At most one service
/// is split: the point is `vertex[segment_index] + split_fraction * P^(next)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub point: NormalizedPoint,
    pub segment_index: usize,
    pub split_fraction: f64,
    pub cost: f64,
}

/// Consecutive partition of the VMR-sorted service list into capacity-sorted
/// bins. `cut_points` holds the k-1 interior cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct KSolution {
    pub cut_points: Vec<usize>,
    pub partition: Partition,
    pub cost: f64,
}

/// Gap certificate for the two-bin sorting algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCertificate {
    /// False when the preconditions (alpha > 0, all Delta_j >= 0 at the
    /// evaluated points) do not hold; the bounds are then not claims.
    pub applicable: bool,
    pub algorithm_cost: f64,
    pub fractional_cost: f64,
    /// min over the two bracketing sub-segments of the sampled max gradient
    /// norm, times L/n.
    pub gradient_bound: f64,
    /// `(1/sqrt(2 pi e)) * (1/alpha) * (L/n) * mu`; SP-MED only.
    pub closed_form_bound: Option<f64>,
    pub l_over_n: f64,
    pub alpha: f64,
}

/// Solution JSON written by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub cut_points: Vec<usize>,
    pub assignment: Vec<usize>,
    pub cost: f64,
    pub model: CostModel,
    pub certificate: Option<ErrorCertificate>,
}

/// Services in VMR order with prefix sums plus capacity-sorted bins.
/// All solvers work on this view so that equal splits cost identical bits.
struct SortedProblem {
    /// service indices in ascending VMR order
    order: Vec<usize>,
    /// prefix sums of mean / variance over `order`; length n+1
    pm: Vec<f64>,
    pv: Vec<f64>,
    /// (capacity, original bin index) ascending by capacity, ties by index
    bins: Vec<(f64, usize)>,
}

impl SortedProblem {
    fn new(instance: &Instance) -> Self {
        let order = sort_by_vmr(instance);
        let n = instance.n();
        let mut pm = Vec::with_capacity(n + 1);
        let mut pv = Vec::with_capacity(n + 1);
        pm.push(0.0);
        pv.push(0.0);
        for &i in &order {
            pm.push(pm.last().unwrap() + instance.services[i].mu);
            pv.push(pv.last().unwrap() + instance.services[i].var);
        }
        let mut bins: Vec<(f64, usize)> = instance
            .capacities
            .iter()
            .copied()
            .enumerate()
            .map(|(j, c)| (c, j))
            .collect();
        bins.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        Self { order, pm, pv, bins }
    }

    fn n(&self) -> usize {
        self.order.len()
    }

    fn range_stats(&self, lo: usize, hi: usize, bin: usize) -> BinStats {
        BinStats::new(self.bins[bin].0, self.pm[hi] - self.pm[lo], self.pv[hi] - self.pv[lo])
    }

    /// Model-specific aggregate of one bin over a service range. SP-MED and
    /// SP-MWOP store costs (minimized); SP-MOP stores the survival product
    /// (maximized), converted to a cost only at the root.
    fn range_agg(&self, lo: usize, hi: usize, bin: usize, model: CostModel) -> f64 {
        let stats = self.range_stats(lo, hi, bin);
        let cap = self.bins[bin].0;
        match model {
            CostModel::Spmed => costs::bin_deviation(cap, &stats),
            CostModel::Spmwop => costs::bin_overflow_prob(cap, &stats),
            CostModel::Spmop => costs::bin_survival(cap, &stats),
        }
    }

    /// Partition assigning service range `[cuts[j-1], cuts[j])` of the VMR
    /// order to the j-th smallest bin.
    fn partition_from_cuts(&self, cuts: &[usize]) -> Partition {
        let mut assignment = vec![0usize; self.n()];
        let mut lo = 0usize;
        for (j, &(_, orig)) in self.bins.iter().enumerate() {
            let hi = if j + 1 == self.bins.len() {
                self.n()
            } else {
                cuts[j]
            };
            for &svc in &self.order[lo..hi] {
                assignment[svc] = orig;
            }
            lo = hi;
        }
        Partition::new(assignment)
    }
}

fn combine(x: f64, y: f64, model: CostModel) -> f64 {
    match model {
        CostModel::Spmed => x + y,
        CostModel::Spmwop => x.max(y),
        CostModel::Spmop => x * y,
    }
}

fn improves(candidate: f64, best: f64, model: CostModel) -> bool {
    match model {
        CostModel::Spmop => candidate > best,
        _ => candidate < best,
    }
}

fn root_cost(agg: f64, model: CostModel) -> f64 {
    match model {
        CostModel::Spmop => 1.0 - agg,
        _ => agg,
    }
}

/// The sorting algorithm for two bins: evaluate every vertex of the bottom
/// sorted path and keep the best (ties resolve to the smallest split).
pub fn solve_two_bins(instance: &Instance, model: CostModel) -> Result<TwoBinSolution, SolverError> {
    if instance.k() != 2 {
        return Err(ModelError::NotTwoBins(instance.k()).into());
    }
    instance.check_feasible()?;
    let prob = SortedProblem::new(instance);
    let n = prob.n();
    let mut best = (0usize, f64::NAN);
    for split in 0..=n {
        let agg = combine(
            prob.range_agg(0, split, 0, model),
            prob.range_agg(split, n, 1, model),
            model,
        );
        if split == 0 || improves(agg, best.1, model) {
            best = (split, agg);
        }
    }
    Ok(TwoBinSolution {
        split_index: best.0,
        partition: prob.partition_from_cuts(&[best.0]),
        cost: root_cost(best.1, model),
    })
}

/// Minimize the two-bin cost along the bottom sorted path, allowing at most
/// one split service. Each segment gets a 64-point scan followed by
/// golden-section refinement to 1e-10 in the segment parameter.
pub fn solve_fractional_two_bins(
    instance: &Instance,
    model: CostModel,
) -> Result<FractionalSolution, SolverError> {
    let ctx = TwoBinContext::from_instance(instance)?;
    instance.check_feasible()?;
    let (bottom, _) = crate::geometry::build_sorted_paths(instance);
    Ok(fractional_on_path(&bottom, &ctx, model))
}

pub(crate) fn fractional_on_path(
    path: &SortedPath,
    ctx: &TwoBinContext,
    model: CostModel,
) -> FractionalSolution {
    let mut best: Option<FractionalSolution> = None;
    for seg in 0..path.n_segments() {
        let (p, q) = (path.points[seg], path.points[seg + 1]);
        let at = |t: f64| NormalizedPoint::new(p.a + t * (q.a - p.a), p.b + t * (q.b - p.b));
        let f = |t: f64| costs::cost2(at(t), ctx, model);

        // coarse scan, then refine around the best bracket
        const SCAN: usize = 64;
        let mut scan_best = (0usize, f(0.0));
        for i in 1..=SCAN {
            let t = i as f64 / SCAN as f64;
            let v = f(t);
            if v < scan_best.1 {
                scan_best = (i, v);
            }
        }
        let lo = (scan_best.0.saturating_sub(1)) as f64 / SCAN as f64;
        let hi = ((scan_best.0 + 1).min(SCAN)) as f64 / SCAN as f64;
        let t_ref = golden_section_min(f, lo, hi, 1e-10);

        // candidates: exact endpoints, scan best, refined point
        for t in [0.0, 1.0, scan_best.0 as f64 / SCAN as f64, t_ref] {
            let cost = f(t);
            if best.as_ref().map_or(true, |b| cost < b.cost) {
                best = Some(FractionalSolution {
                    point: at(t),
                    segment_index: seg,
                    split_fraction: t,
                    cost,
                });
            }
        }
    }
    best.expect("path has at least one segment")
}

/// The double-sorting dynamic program for k bins: services in VMR order,
/// bins in capacity order, minimum-cost consecutive cuts. The recurrence
/// halves the bin range (`m -> ceil(m/2) + floor(m/2)`), so any k works,
/// not just powers of two; cut ties resolve to the smallest cut.
pub fn solve_k_bins_dp(instance: &Instance, model: CostModel) -> Result<KSolution, SolverError> {
    instance.check_feasible()?;
    let prob = SortedProblem::new(instance);
    let n = prob.n();
    let k = instance.k();

    // memo: (bins m, lo, hi, bin offset) -> (aggregate, best first-half cut)
    let mut memo: HashMap<(usize, usize, usize, usize), (f64, usize)> = HashMap::new();

    fn best(
        prob: &SortedProblem,
        model: CostModel,
        memo: &mut HashMap<(usize, usize, usize, usize), (f64, usize)>,
        m: usize,
        lo: usize,
        hi: usize,
        off: usize,
    ) -> (f64, usize) {
        if m == 1 {
            return (prob.range_agg(lo, hi, off, model), usize::MAX);
        }
        let key = (m, lo, hi, off);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let m1 = m.div_ceil(2);
        let m2 = m - m1;
        let mut out: Option<(f64, usize)> = None;
        for cut in lo..=hi {
            let left = best(prob, model, memo, m1, lo, cut, off).0;
            let right = best(prob, model, memo, m2, cut, hi, off + m1).0;
            let agg = combine(left, right, model);
            if out.map_or(true, |(b, _)| improves(agg, b, model)) {
                out = Some((agg, cut));
            }
        }
        let out = out.unwrap();
        memo.insert(key, out);
        out
    }

    fn collect_cuts(
        prob: &SortedProblem,
        model: CostModel,
        memo: &mut HashMap<(usize, usize, usize, usize), (f64, usize)>,
        m: usize,
        lo: usize,
        hi: usize,
        off: usize,
        cuts: &mut Vec<usize>,
    ) {
        if m == 1 {
            return;
        }
        let m1 = m.div_ceil(2);
        let cut = best(prob, model, memo, m, lo, hi, off).1;
        collect_cuts(prob, model, memo, m1, lo, cut, off, cuts);
        cuts.push(cut);
        collect_cuts(prob, model, memo, m - m1, cut, hi, off + m1, cuts);
    }

    let (agg, _) = best(&prob, model, &mut memo, k, 0, n, 0);
    let mut cuts = Vec::with_capacity(k - 1);
    collect_cuts(&prob, model, &mut memo, k, 0, n, 0, &mut cuts);
    Ok(KSolution {
        partition: prob.partition_from_cuts(&cuts),
        cut_points: cuts,
        cost: root_cost(agg, model),
    })
}

/// Exhaustive search over all consecutive-cut placements of the VMR-sorted
/// list into capacity-sorted bins. Oracle for the dynamic program.
pub fn exhaustive_consecutive_cuts(
    instance: &Instance,
    model: CostModel,
) -> Result<KSolution, SolverError> {
    instance.check_feasible()?;
    let prob = SortedProblem::new(instance);
    let n = prob.n();
    let k = instance.k();
    let mut cuts = vec![0usize; k - 1];
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        let mut agg = prob.range_agg(0, *cuts.first().unwrap_or(&n), 0, model);
        for j in 1..k {
            let lo = cuts[j - 1];
            let hi = if j == k - 1 { n } else { cuts[j] };
            agg = combine(agg, prob.range_agg(lo, hi, j, model), model);
        }
        if best.as_ref().map_or(true, |(_, b)| improves(agg, *b, model)) {
            best = Some((cuts.clone(), agg));
        }
        // next nondecreasing cut vector
        let mut pos = k - 1;
        loop {
            if pos == 0 {
                let (cuts, agg) = best.unwrap();
                return Ok(KSolution {
                    partition: prob.partition_from_cuts(&cuts),
                    cut_points: cuts,
                    cost: root_cost(agg, model),
                });
            }
            pos -= 1;
            if cuts[pos] < n {
                let v = cuts[pos] + 1;
                for c in cuts.iter_mut().skip(pos) {
                    *c = v;
                }
                break;
            }
        }
    }
}

/// Exact argmin over all k^n assignments; ties resolve to the
/// lexicographically smallest assignment. Guarded by `n log2 k <= 24`.
pub fn brute_force_integral(
    instance: &Instance,
    model: CostModel,
) -> Result<(Partition, f64), SolverError> {
    let (n, k) = (instance.n(), instance.k());
    if n as f64 * (k as f64).log2() > 24.0 + 1e-9 {
        return Err(SolverError::TooLarge { n, k });
    }
    let mut mu = vec![0.0f64; k];
    let mut var = vec![0.0f64; k];
    let mut assignment = vec![0usize; n];
    let mut best: Option<(Vec<usize>, f64)> = None;

    fn cost_of(caps: &[f64], mu: &[f64], var: &[f64], model: CostModel) -> f64 {
        let mut agg = match model {
            CostModel::Spmop => 1.0,
            _ => 0.0,
        };
        for j in 0..caps.len() {
            let stats = BinStats::new(caps[j], mu[j], var[j]);
            let term = match model {
                CostModel::Spmed => costs::bin_deviation(caps[j], &stats),
                CostModel::Spmwop => costs::bin_overflow_prob(caps[j], &stats),
                CostModel::Spmop => costs::bin_survival(caps[j], &stats),
            };
            agg = combine(agg, term, model);
        }
        root_cost(agg, model)
    }

    fn dfs(
        instance: &Instance,
        model: CostModel,
        svc: usize,
        mu: &mut [f64],
        var: &mut [f64],
        assignment: &mut Vec<usize>,
        best: &mut Option<(Vec<usize>, f64)>,
    ) {
        if svc == instance.n() {
            let cost = cost_of(&instance.capacities, mu, var, model);
            if best.as_ref().map_or(true, |(_, b)| cost < *b) {
                *best = Some((assignment.clone(), cost));
            }
            return;
        }
        let s = instance.services[svc];
        for bin in 0..instance.k() {
            assignment[svc] = bin;
            mu[bin] += s.mu;
            var[bin] += s.var;
            dfs(instance, model, svc + 1, mu, var, assignment, best);
            mu[bin] -= s.mu;
            var[bin] -= s.var;
        }
    }

    dfs(
        instance,
        model,
        0,
        &mut mu,
        &mut var,
        &mut assignment,
        &mut best,
    );
    let (assignment, cost) = best.unwrap();
    Ok((Partition::new(assignment), cost))
}

fn delta_at(p: NormalizedPoint, ctx: &TwoBinContext) -> (f64, f64) {
    let spare1 = ctx.c1 - p.a * ctx.mu;
    let spare2 = ctx.c2 - (1.0 - p.a) * ctx.mu;
    let d = |spare: f64, frac: f64| {
        if frac > 0.0 {
            spare / (frac.sqrt() * ctx.sigma)
        } else if spare >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    };
    (d(spare1, p.b), d(spare2, 1.0 - p.b))
}

/// Gap certificate: locates the fractional optimum, its bracketing path
/// vertices, and bounds the sorting algorithm's gap by a sampled gradient
/// norm times L/n (plus the SP-MED closed-form bound).
pub fn error_certificate(
    instance: &Instance,
    model: CostModel,
) -> Result<ErrorCertificate, SolverError> {
    let ctx = TwoBinContext::from_instance(instance)?;
    instance.check_feasible()?;
    let integral = solve_two_bins(instance, model)?;
    let fractional = solve_fractional_two_bins(instance, model)?;
    let (bottom, _) = crate::geometry::build_sorted_paths(instance);

    let alpha = (ctx.c1 + ctx.c2 - ctx.mu) / ctx.mu;
    let l_over_n = instance
        .services
        .iter()
        .map(|s| (s.mu / ctx.mu).hypot(s.var / ctx.var))
        .fold(0.0, f64::max);

    let o1 = bottom.points[fractional.segment_index];
    let o2 = bottom.points[fractional.segment_index + 1];
    let opt = fractional.point;

    // preconditions: positive relative spare capacity and Delta_j >= 0 at
    // the evaluated points
    let mut applicable = alpha > 0.0;
    for p in [o1, o2, opt] {
        let (d1, d2) = delta_at(p, &ctx);
        if !(d1 >= 0.0 && d2 >= 0.0) {
            applicable = false;
        }
    }

    // max gradient norm over an 8-point sample of each bracketing sub-segment
    let seg_bound = |from: NormalizedPoint, to: NormalizedPoint| -> f64 {
        let mut worst = 0.0f64;
        for s in 0..8 {
            let t = (s as f64 + 0.5) / 8.0;
            let p = NormalizedPoint::new(from.a + t * (to.a - from.a), from.b + t * (to.b - from.b));
            if let Ok((ga, gb)) = costs::grad2(p, &ctx, model) {
                worst = worst.max(ga.hypot(gb));
            }
        }
        worst
    };
    let gradient_bound = seg_bound(o1, opt).min(seg_bound(opt, o2)) * l_over_n;

    let closed_form_bound = match model {
        CostModel::Spmed => {
            // 1/sqrt(2 pi e)
            const INV_SQRT_2PI_E: f64 = 0.241_970_724_519_143_35;
            Some(INV_SQRT_2PI_E / alpha * l_over_n * ctx.mu)
        }
        _ => None,
    };

    Ok(ErrorCertificate {
        applicable,
        algorithm_cost: integral.cost,
        fractional_cost: fractional.cost,
        gradient_bound,
        closed_form_bound,
        l_over_n,
        alpha,
    })
}

/// For a fixed service set and total capacity budget, the fractional SP-MED
/// optimum per capacity split, ordered by increasing imbalance `c2 - c1`.
pub fn capacity_unbalance_curve(
    services: &[ServiceDemand],
    splits: &[(f64, f64)],
) -> Result<Vec<(f64, f64)>, SolverError> {
    let mu: f64 = services.iter().map(|s| s.mu).sum();
    let var: f64 = services.iter().map(|s| s.var).sum();
    let (bottom, _) = build_sorted_paths_from_services(services);
    let mut out = Vec::with_capacity(splits.len());
    for &(x, y) in splits {
        let ctx = TwoBinContext::new(x, y, mu, var)?;
        let frac = fractional_on_path(&bottom, &ctx, CostModel::Spmed);
        out.push((ctx.c2 - ctx.c1, frac.cost));
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(out)
}

impl SolutionRecord {
    pub fn from_two_bin(
        sol: &TwoBinSolution,
        model: CostModel,
        certificate: Option<ErrorCertificate>,
    ) -> Self {
        Self {
            cut_points: vec![sol.split_index],
            assignment: sol.partition.assignment.clone(),
            cost: sol.cost,
            model,
            certificate,
        }
    }

    pub fn from_k_bin(sol: &KSolution, model: CostModel) -> Self {
        Self {
            cut_points: sol.cut_points.clone(),
            assignment: sol.partition.assignment.clone(),
            cost: sol.cost,
            model,
            certificate: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, k: usize, alpha: f64) -> Instance {
        let services: Vec<ServiceDemand> = (0..n)
            .map(|_| {
                let mu = rng.gen_range(1.0..100.0);
                let var = rng.gen_range(0.01..1.0) * mu * mu;
                ServiceDemand::new(mu, var)
            })
            .collect();
        let total: f64 = services.iter().map(|s| s.mu).sum();
        let c = total * (1.0 + alpha);
        let mut caps: Vec<f64> = (0..k).map(|_| rng.gen_range(0.5..1.5)).collect();
        let s: f64 = caps.iter().sum();
        caps.iter_mut().for_each(|x| *x *= c / s);
        Instance::new(caps, services).unwrap()
    }

    #[test]
    fn two_bins_single_service_picks_cheaper_bin() {
        let inst = Instance::new(
            vec![100.0, 300.0],
            vec![ServiceDemand::new(150.0, 400.0)],
        )
        .unwrap();
        for model in CostModel::ALL {
            let sol = solve_two_bins(&inst, model).unwrap();
            // The big bin covers the demand; the small one cannot.
            assert_eq!(sol.split_index, 0);
            let (bf, bf_cost) = brute_force_integral(&inst, model).unwrap();
            assert_eq!(sol.partition, bf);
            assert!((sol.cost - bf_cost).abs() < 1e-12);
        }
    }

    #[test]
    fn two_bins_rejects_infeasible_and_wrong_k() {
        let inst = Instance::new(vec![1.0, 1.0], vec![ServiceDemand::new(10.0, 1.0)]).unwrap();
        assert!(matches!(
            solve_two_bins(&inst, CostModel::Spmed),
            Err(SolverError::Model(ModelError::Infeasible { .. }))
        ));
        let inst = Instance::new(vec![30.0, 30.0, 30.0], vec![ServiceDemand::new(10.0, 1.0)]).unwrap();
        assert!(matches!(
            solve_two_bins(&inst, CostModel::Spmed),
            Err(SolverError::Model(ModelError::NotTwoBins(3)))
        ));
    }

    #[test]
    fn sorting_beats_or_meets_every_other_split_and_lands_on_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let inst = random_instance(&mut rng, 8, 2, 0.3);
            for model in CostModel::ALL {
                let sol = solve_two_bins(&inst, model).unwrap();
                // every vertex cost is >= the chosen one
                let prob_cost = |split: usize| {
                    let prob = SortedProblem::new(&inst);
                    root_cost(
                        combine(
                            prob.range_agg(0, split, 0, model),
                            prob.range_agg(split, 8, 1, model),
                            model,
                        ),
                        model,
                    )
                };
                for split in 0..=8 {
                    assert!(sol.cost <= prob_cost(split) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn fractional_never_above_integral_and_matches_dense_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..10 {
            let inst = random_instance(&mut rng, 8, 2, 0.25);
            let ctx = TwoBinContext::from_instance(&inst).unwrap();
            for model in CostModel::ALL {
                let int = solve_two_bins(&inst, model).unwrap();
                let frac = solve_fractional_two_bins(&inst, model).unwrap();
                assert!(frac.cost <= int.cost + 1e-12, "trial {trial} {model}");
                if model == CostModel::Spmed {
                    // dense-grid oracle along the path
                    let (bottom, _) = crate::geometry::build_sorted_paths(&inst);
                    let mut grid_min = f64::INFINITY;
                    for seg in 0..bottom.n_segments() {
                        let (p, q) = (bottom.points[seg], bottom.points[seg + 1]);
                        for i in 0..=10_000 {
                            let t = i as f64 / 10_000.0;
                            let pt = NormalizedPoint::new(
                                p.a + t * (q.a - p.a),
                                p.b + t * (q.b - p.b),
                            );
                            grid_min = grid_min.min(costs::cost2(pt, &ctx, model));
                        }
                    }
                    assert!(
                        frac.cost <= grid_min + 1e-8,
                        "trial {trial}: {} vs grid {grid_min}",
                        frac.cost
                    );
                }
            }
        }
    }

    #[test]
    fn fractional_splits_at_most_one_service() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let inst = random_instance(&mut rng, 10, 2, 0.2);
        let frac = solve_fractional_two_bins(&inst, CostModel::Spmed).unwrap();
        assert!((0.0..=1.0).contains(&frac.split_fraction));
        assert!(frac.segment_index < 10);
    }

    #[test]
    fn dp_reduces_to_two_bin_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let inst = random_instance(&mut rng, 9, 2, 0.3);
            for model in CostModel::ALL {
                let two = solve_two_bins(&inst, model).unwrap();
                let dp = solve_k_bins_dp(&inst, model).unwrap();
                assert_eq!(dp.cut_points, vec![two.split_index]);
                assert_eq!(dp.partition, two.partition);
                assert_eq!(dp.cost, two.cost);
            }
        }
    }

    #[test]
    fn dp_matches_exhaustive_cuts_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for k in [2usize, 3, 4, 5] {
            for _ in 0..6 {
                let n = rng.gen_range(k.max(3)..10);
                let inst = random_instance(&mut rng, n, k, 0.3);
                for model in CostModel::ALL {
                    let dp = solve_k_bins_dp(&inst, model).unwrap();
                    let ex = exhaustive_consecutive_cuts(&inst, model).unwrap();
                    assert!(
                        (dp.cost - ex.cost).abs() <= 1e-12,
                        "n={n} k={k} {model}: dp {} ex {}",
                        dp.cost,
                        ex.cost
                    );
                }
            }
        }
    }

    #[test]
    fn brute_force_never_above_dp() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let k = rng.gen_range(2..4usize);
            let n = rng.gen_range(3..8usize);
            let inst = random_instance(&mut rng, n, k, 0.3);
            for model in CostModel::ALL {
                let dp = solve_k_bins_dp(&inst, model).unwrap();
                let (_, bf) = brute_force_integral(&inst, model).unwrap();
                assert!(bf <= dp.cost + 1e-12);
            }
        }
    }

    #[test]
    fn brute_force_two_identical_services() {
        // Two identical services, identical bins: compare the split against
        // single-bin placements by direct evaluation.
        let inst = Instance::new(
            vec![100.0, 100.0],
            vec![ServiceDemand::new(80.0, 3200.0), ServiceDemand::new(80.0, 3200.0)],
        )
        .unwrap();
        let ctx = TwoBinContext::from_instance(&inst).unwrap();
        let (part, cost) = brute_force_integral(&inst, CostModel::Spmed).unwrap();
        let split_cost = costs::cost2(NormalizedPoint::new(0.5, 0.5), &ctx, CostModel::Spmed);
        let corner_cost = costs::cost2(NormalizedPoint::new(1.0, 1.0), &ctx, CostModel::Spmed);
        if split_cost < corner_cost {
            assert_ne!(part.assignment[0], part.assignment[1]);
            assert!((cost - split_cost).abs() < 1e-9);
        } else {
            assert_eq!(part.assignment[0], part.assignment[1]);
        }
    }

    #[test]
    fn brute_force_guard() {
        let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(1), 30, 2, 0.3);
        assert!(matches!(
            brute_force_integral(&inst, CostModel::Spmed),
            Err(SolverError::TooLarge { .. })
        ));
    }

    #[test]
    fn certificate_bounds_the_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut applicable_seen = 0;
        for _ in 0..40 {
            let n = rng.gen_range(4..12);
            let inst = random_instance(&mut rng, n, 2, 0.4);
            for model in CostModel::ALL {
                let cert = error_certificate(&inst, model).unwrap();
                if !cert.applicable {
                    continue;
                }
                applicable_seen += 1;
                let gap = cert.algorithm_cost - cert.fractional_cost;
                assert!(
                    gap <= cert.gradient_bound + 1e-9,
                    "{model}: gap {gap} bound {}",
                    cert.gradient_bound
                );
                if let Some(cf) = cert.closed_form_bound {
                    assert!(gap <= cf + 1e-9, "closed form: gap {gap} bound {cf}");
                }
            }
        }
        assert!(applicable_seen > 10);
    }

    #[test]
    fn certificate_on_exact_vertex_has_zero_gap() {
        // One service: the fractional optimum is a path vertex.
        let inst = Instance::new(
            vec![100.0, 300.0],
            vec![ServiceDemand::new(150.0, 400.0)],
        )
        .unwrap();
        let cert = error_certificate(&inst, CostModel::Spmed).unwrap();
        assert!(cert.algorithm_cost - cert.fractional_cost <= 1e-12);
    }

    #[test]
    fn unbalance_curve_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let services: Vec<ServiceDemand> = (0..12)
            .map(|_| {
                let mu = rng.gen_range(5.0..50.0);
                ServiceDemand::new(mu, rng.gen_range(0.05..0.8) * mu * mu)
            })
            .collect();
        let total_mu: f64 = services.iter().map(|s| s.mu).sum();
        let c = 1.4 * total_mu;
        let splits: Vec<(f64, f64)> = (0..=10)
            .map(|i| {
                let c1 = c / 2.0 * (1.0 - i as f64 / 10.0);
                (c1, c - c1)
            })
            .collect();
        let curve = capacity_unbalance_curve(&services, &splits).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-9, "not monotone: {curve:?}");
        }
        // even split is the worst, single bin the best
        assert_eq!(curve[0].0, 0.0);
        assert!(curve[0].1 >= curve.last().unwrap().1);
    }

    #[test]
    fn solution_record_json_shape() {
        let inst = Instance::new(
            vec![100.0, 120.0],
            vec![ServiceDemand::new(80.0, 600.0), ServiceDemand::new(70.0, 900.0)],
        )
        .unwrap();
        let sol = solve_two_bins(&inst, CostModel::Spmed).unwrap();
        let cert = error_certificate(&inst, CostModel::Spmed).unwrap();
        let rec = SolutionRecord::from_two_bin(&sol, CostModel::Spmed, Some(cert));
        let json = serde_json::to_value(&rec).unwrap();
        assert!(json.get("cut_points").is_some());
        assert_eq!(json["model"], "SPMED");
        assert!(json["certificate"]["gradient_bound"].is_number());
        let back: SolutionRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back, rec);
    }
}
