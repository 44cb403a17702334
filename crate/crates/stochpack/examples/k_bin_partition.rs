//! Partition twelve services into four bins with the double-sorting
//! dynamic program and cross-check against the exhaustive cut search.

use stochpack::costs::CostModel;
use stochpack::model::{Instance, ServiceDemand};
use stochpack::solver::{exhaustive_consecutive_cuts, solve_k_bins_dp};

fn main() {
    let services: Vec<ServiceDemand> = (0..12)
        .map(|i| {
            let mu = 40.0 + 10.0 * (i % 5) as f64;
            let vmr = 2.0 + 7.0 * ((i * 5) % 12) as f64;
            ServiceDemand::new(mu, vmr * mu)
        })
        .collect();
    let total: f64 = services.iter().map(|s| s.mu).sum();
    let instance = Instance::new(
        vec![0.15 * total, 0.25 * total, 0.35 * total, 0.55 * total],
        services,
    )
    .expect("valid instance");

    for model in CostModel::ALL {
        let dp = solve_k_bins_dp(&instance, model).expect("feasible");
        let oracle = exhaustive_consecutive_cuts(&instance, model).expect("feasible");
        println!(
            "{model}: cuts {:?} cost {:.6} (exhaustive agrees: {})",
            dp.cut_points,
            dp.cost,
            (dp.cost - oracle.cost).abs() < 1e-12
        );
        println!("  assignment {:?}", dp.partition.assignment);
    }
}
