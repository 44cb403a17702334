//! Compare the integral sorting solution against the fractional optimum on
//! the bottom sorted path, which splits at most one service.

use stochpack::costs::CostModel;
use stochpack::model::{Instance, ServiceDemand};
use stochpack::solver::{solve_fractional_two_bins, solve_two_bins};

fn main() {
    let instance = Instance::new(
        vec![300.0, 300.0],
        vec![
            ServiceDemand::new(100.0, 400.0),
            ServiceDemand::new(100.0, 4900.0),
            ServiceDemand::new(100.0, 1600.0),
            ServiceDemand::new(100.0, 8100.0),
            ServiceDemand::new(100.0, 2500.0),
        ],
    )
    .expect("valid instance");

    for model in CostModel::ALL {
        let int = solve_two_bins(&instance, model).expect("feasible");
        let frac = solve_fractional_two_bins(&instance, model).expect("feasible");
        println!(
            "{model}: integral cost {:.6} at vertex {}, fractional cost {:.6}",
            int.cost, int.split_index, frac.cost
        );
        println!(
            "  fractional point (a, b) = ({:.4}, {:.4}): segment {} split at t = {:.4}",
            frac.point.a, frac.point.b, frac.segment_index, frac.split_fraction
        );
    }
}
