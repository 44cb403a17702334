//! Splitting a fixed capacity budget unevenly never hurts: the fractional
//! expected-deviation optimum falls as the gap between the two bins grows.

use stochpack::model::ServiceDemand;
use stochpack::solver::capacity_unbalance_curve;

fn main() {
    let services: Vec<ServiceDemand> = (0..10)
        .map(|i| {
            let mu = 30.0 + 5.0 * i as f64;
            ServiceDemand::new(mu, (1.0 + (i % 4) as f64) * mu * mu / 4.0)
        })
        .collect();
    let total: f64 = services.iter().map(|s| s.mu).sum();
    let c = 1.25 * total;

    let splits: Vec<(f64, f64)> = (0..=10)
        .map(|i| {
            let c1 = c / 2.0 * (1.0 - i as f64 / 10.0);
            (c1, c - c1)
        })
        .collect();
    let curve = capacity_unbalance_curve(&services, &splits).expect("feasible splits");

    println!("total capacity {c:.1}, total mean {total:.1}");
    println!("{:>12} {:>14}", "c2 - c1", "optimal cost");
    for (gap, cost) in curve {
        println!("{gap:>12.2} {cost:>14.6}");
    }
}
