//! Randomized invariant suites: epigraph containment, DP exactness,
//! gradient checks, symmetry, the unbalancing property and gap
//! certificates. The CLI `verify` subcommand prints one line per suite.

use crate::costs::{self, CostModel, TwoBinContext};
use crate::geometry::{build_sorted_paths, contains, enumerate_integral_points};
use crate::model::{Instance, NormalizedPoint, ServiceDemand};
use crate::solver::{
    error_certificate, exhaustive_consecutive_cuts, solve_fractional_two_bins, solve_k_bins_dp,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// largest instance size used by the randomized suites
    pub n_max: usize,
    /// number of random trials per suite; 0 skips everything
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_max: 12,
            trials: 50,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
}

impl SuiteResult {
    fn pass(name: &'static str, checks: usize) -> Self {
        Self {
            name,
            passed: true,
            checks,
            detail: String::new(),
        }
    }

    fn fail(name: &'static str, checks: usize, detail: String) -> Self {
        Self {
            name,
            passed: false,
            checks,
            detail,
        }
    }

    /// Machine-readable report line.
    pub fn line(&self) -> String {
        if self.passed {
            format!("PASS {} checks={}", self.name, self.checks)
        } else {
            format!("FAIL {} checks={} {}", self.name, self.checks, self.detail)
        }
    }
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize, k: usize, alpha: f64) -> Instance {
    let services: Vec<ServiceDemand> = (0..n)
        .map(|_| {
            let mu = rng.gen_range(1.0..100.0);
            ServiceDemand::new(mu, rng.gen_range(0.01..1.0) * mu * mu)
        })
        .collect();
    let total: f64 = services.iter().map(|s| s.mu).sum();
    let c = total * (1.0 + alpha);
    let mut caps: Vec<f64> = (0..k).map(|_| rng.gen_range(0.5..1.5)).collect();
    let s: f64 = caps.iter().sum();
    caps.iter_mut().for_each(|x| *x *= c / s);
    Instance::new(caps, services).unwrap()
}

/// Every subset point lies between the bottom and upper sorted paths.
pub fn suite_epigraph(config: &VerifyConfig) -> SuiteResult {
    const NAME: &str = "epigraph_containment";
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xE91);
    let mut checks = 0usize;
    for trial in 0..config.trials {
        let n = rng.gen_range(2..=config.n_max.clamp(2, 12));
        let inst = random_instance(&mut rng, n, 2, 0.3);
        let (bottom, upper) = build_sorted_paths(&inst);
        let points = enumerate_integral_points(&inst).unwrap();
        for p in points {
            checks += 1;
            if !contains(&bottom, &upper, p, 1e-9) {
                return SuiteResult::fail(
                    NAME,
                    checks,
                    format!("trial {trial}: point ({}, {}) escapes the polygon", p.a, p.b),
                );
            }
        }
    }
    SuiteResult::pass(NAME, checks)
}

/// The halving DP equals exhaustive search over consecutive cuts.
pub fn suite_dp_exactness(config: &VerifyConfig) -> SuiteResult {
    const NAME: &str = "dp_vs_exhaustive_cuts";
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xD9);
    let mut checks = 0usize;
    for trial in 0..config.trials {
        let k = rng.gen_range(2..=5usize);
        let n = rng.gen_range(k.max(3)..=config.n_max.clamp(5, 10));
        let inst = random_instance(&mut rng, n, k, 0.3);
        for model in CostModel::ALL {
            checks += 1;
            let dp = solve_k_bins_dp(&inst, model).unwrap();
            let ex = exhaustive_consecutive_cuts(&inst, model).unwrap();
            if (dp.cost - ex.cost).abs() > 1e-12 {
                return SuiteResult::fail(
                    NAME,
                    checks,
                    format!("trial {trial} {model}: dp {} vs exhaustive {}", dp.cost, ex.cost),
                );
            }
        }
    }
    SuiteResult::pass(NAME, checks)
}

/// Analytic SP-MED gradient against central finite differences.
pub fn suite_gradient(config: &VerifyConfig) -> SuiteResult {
    const NAME: &str = "spmed_gradient_fd";
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x6AD);
    let mut checks = 0usize;
    for trial in 0..config.trials {
        let mu = rng.gen_range(50.0..500.0);
        let var = rng.gen_range(0.01..0.5) * mu * mu;
        let c = mu * rng.gen_range(1.05..1.6);
        let c1 = c * rng.gen_range(0.2..0.5);
        let ctx = TwoBinContext::new(c1, c - c1, mu, var).unwrap();
        let p = NormalizedPoint::new(rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
        let (ga, gb) = costs::grad2_spmed(p, &ctx).unwrap();
        let h = 1e-6;
        let f = |a: f64, b: f64| costs::cost2(NormalizedPoint::new(a, b), &ctx, CostModel::Spmed);
        let fa = (f(p.a + h, p.b) - f(p.a - h, p.b)) / (2.0 * h);
        let fb = (f(p.a, p.b + h) - f(p.a, p.b - h)) / (2.0 * h);
        let scale = ga.abs().max(gb.abs()).max(1e-6 * mu);
        checks += 1;
        if (ga - fa).abs() > 1e-5 * scale || (gb - fb).abs() > 1e-5 * scale {
            return SuiteResult::fail(
                NAME,
                checks,
                format!("trial {trial}: analytic ({ga}, {gb}) vs fd ({fa}, {fb})"),
            );
        }
    }
    SuiteResult::pass(NAME, checks)
}

/// cost2(a, b) = cost2(1 - a - (c2-c1)/mu, 1 - b) for all three models.
pub fn suite_symmetry(config: &VerifyConfig) -> SuiteResult {
    suite_symmetry_with(config, costs::cost2)
}

/// Symmetry check against an injectable surface; the production suite
/// passes `costs::cost2`, tests can pass a broken surface to prove the
/// harness catches regressions.
pub fn suite_symmetry_with(
    config: &VerifyConfig,
    surface: impl Fn(NormalizedPoint, &TwoBinContext, CostModel) -> f64,
) -> SuiteResult {
    const NAME: &str = "two_bin_symmetry";
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5E3);
    let mut checks = 0usize;
    for trial in 0..config.trials {
        let mu = rng.gen_range(50.0..500.0);
        let var = rng.gen_range(0.01..0.5) * mu * mu;
        let c = mu * rng.gen_range(1.1..1.5);
        let c1 = c * rng.gen_range(0.3..0.5);
        let ctx = TwoBinContext::new(c1, c - c1, mu, var).unwrap();
        let shift = (ctx.c2 - ctx.c1) / ctx.mu;
        for model in CostModel::ALL {
            for ia in 1..10 {
                for ib in 1..10 {
                    let (a, b) = (ia as f64 / 10.0, ib as f64 / 10.0);
                    let mirror_a = 1.0 - a - shift;
                    if !(0.0..=1.0).contains(&mirror_a) {
                        continue;
                    }
                    checks += 1;
                    let lhs = surface(NormalizedPoint::new(a, b), &ctx, model);
                    let rhs = surface(NormalizedPoint::new(mirror_a, 1.0 - b), &ctx, model);
                    if (lhs - rhs).abs() > 1e-10 {
                        return SuiteResult::fail(
                            NAME,
                            checks,
                            format!("trial {trial} {model} at ({a}, {b}): {lhs} vs {rhs}"),
                        );
                    }
                }
            }
        }
    }
    SuiteResult::pass(NAME, checks)
}

/// Fractional SP-MED optimum is nonincreasing in the capacity gap c2 - c1.
pub fn suite_unbalancing(config: &VerifyConfig) -> SuiteResult {
    const NAME: &str = "capacity_unbalancing";
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x0B1);
    let mut checks = 0usize;
    for trial in 0..config.trials {
        let n = rng.gen_range(4..=config.n_max.clamp(4, 16));
        let services: Vec<ServiceDemand> = (0..n)
            .map(|_| {
                let mu = rng.gen_range(5.0..50.0);
                ServiceDemand::new(mu, rng.gen_range(0.05..0.8) * mu * mu)
            })
            .collect();
        let total: f64 = services.iter().map(|s| s.mu).sum();
        let c = total * rng.gen_range(1.1..1.5);
        let splits: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let c1 = c / 2.0 * (1.0 - i as f64 / 19.0);
                (c1, c - c1)
            })
            .collect();
        let curve = crate::solver::capacity_unbalance_curve(&services, &splits).unwrap();
        for w in curve.windows(2) {
            checks += 1;
            if w[1].1 > w[0].1 + 1e-9 {
                return SuiteResult::fail(
                    NAME,
                    checks,
                    format!(
                        "trial {trial}: cost rose from {} to {} as the gap grew",
                        w[0].1, w[1].1
                    ),
                );
            }
        }
    }
    SuiteResult::pass(NAME, checks)
}

/// The sorting algorithm's gap is covered by the gradient certificate.
pub fn suite_certificate(config: &VerifyConfig) -> SuiteResult {
    const NAME: &str = "gap_certificate";
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xCE7);
    let mut checks = 0usize;
    for trial in 0..config.trials {
        let n = rng.gen_range(3..=config.n_max.clamp(3, 16));
        let alpha = rng.gen_range(0.15..0.5);
        let inst = random_instance(&mut rng, n, 2, alpha);
        for model in CostModel::ALL {
            let cert = error_certificate(&inst, model).unwrap();
            if !cert.applicable {
                continue;
            }
            checks += 1;
            let gap = cert.algorithm_cost - cert.fractional_cost;
            let frac = solve_fractional_two_bins(&inst, model).unwrap();
            let ok = gap <= cert.gradient_bound + 1e-9
                && (frac.cost - cert.fractional_cost).abs() < 1e-12
                && cert.closed_form_bound.map_or(true, |cf| gap <= cf + 1e-9);
            if !ok {
                return SuiteResult::fail(
                    NAME,
                    checks,
                    format!("trial {trial} {model}: gap {gap} bound {}", cert.gradient_bound),
                );
            }
        }
    }
    SuiteResult::pass(NAME, checks)
}

/// Run every suite. `trials == 0` yields an empty (vacuously passing) report.
pub fn run_all(config: &VerifyConfig) -> Vec<SuiteResult> {
    if config.trials == 0 {
        return Vec::new();
    }
    vec![
        suite_epigraph(config),
        suite_dp_exactness(config),
        suite_gradient(config),
        suite_symmetry(config),
        suite_unbalancing(config),
        suite_certificate(config),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            n_max: 8,
            trials: 8,
            seed: 0,
        }
    }

    #[test]
    fn all_suites_pass() {
        let results = run_all(&quick());
        assert_eq!(results.len(), 6);
        for r in &results {
            assert!(r.passed, "{}", r.line());
            assert!(r.checks > 0);
            assert!(r.line().starts_with("PASS "));
        }
    }

    #[test]
    fn zero_trials_is_empty() {
        let config = VerifyConfig {
            trials: 0,
            ..quick()
        };
        assert!(run_all(&config).is_empty());
    }

    #[test]
    fn injected_bug_is_caught() {
        // a surface that breaks the mirror symmetry must fail the suite
        let broken = |p: NormalizedPoint, ctx: &TwoBinContext, model: CostModel| {
            costs::cost2(p, ctx, model) + 0.01 * p.a
        };
        let result = suite_symmetry_with(&quick(), broken);
        assert!(!result.passed);
        assert!(result.line().starts_with("FAIL "));
    }

    #[test]
    fn determinism() {
        let a = run_all(&quick());
        let b = run_all(&quick());
        assert_eq!(a, b);
    }
}
