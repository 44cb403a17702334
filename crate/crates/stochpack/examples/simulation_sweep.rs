//! A small end-to-end capacity sweep: generate the three-population demand
//! mixture, fit normals from samples, solve with both algorithms and score
//! them on the same samples.

use stochpack::costs::CostModel;
use stochpack::sim::{run_sweep, sweep_to_csv, MixtureSpec, SweepConfig};

fn main() {
    let config = SweepConfig {
        spec: MixtureSpec {
            n: 40,
            base_mu: 500.0,
        },
        c_over_mu_values: vec![1.1, 1.2, 1.3, 1.4, 1.5],
        k: 2,
        models: CostModel::ALL.to_vec(),
        repetitions: 5,
        timeslots: 200,
        seed: 42,
    };
    let report = run_sweep(&config).expect("valid sweep");
    print!("{}", sweep_to_csv(&report));
}
