//! Solve a small two-bin instance under all three objectives and show the
//! gap certificate the sorting algorithm comes with.

use stochpack::costs::CostModel;
use stochpack::model::{Instance, ServiceDemand};
use stochpack::solver::{error_certificate, solve_two_bins};

fn main() {
    let instance = Instance::new(
        vec![260.0, 340.0],
        vec![
            ServiceDemand::new(120.0, 900.0),
            ServiceDemand::new(80.0, 6400.0),
            ServiceDemand::new(150.0, 2500.0),
            ServiceDemand::new(90.0, 8100.0),
            ServiceDemand::new(60.0, 100.0),
        ],
    )
    .expect("valid instance");

    for model in CostModel::ALL {
        let sol = solve_two_bins(&instance, model).expect("feasible");
        println!(
            "{model}: split_index={} assignment={:?} cost={:.6}",
            sol.split_index, sol.partition.assignment, sol.cost
        );
        let cert = error_certificate(&instance, model).expect("two bins");
        if cert.applicable {
            println!(
                "  gap={:.3e} <= gradient bound {:.3e}{}",
                cert.algorithm_cost - cert.fractional_cost,
                cert.gradient_bound,
                cert.closed_form_bound
                    .map(|b| format!(" (closed form {b:.3e})"))
                    .unwrap_or_default()
            );
        } else {
            println!("  certificate not applicable (needs spare capacity in every bin)");
        }
    }
}
