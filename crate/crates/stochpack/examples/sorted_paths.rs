//! The sorted-path construction: every subset of services maps to a point
//! in the normalized square, and all of them sit between the two paths.

use stochpack::geometry::{build_sorted_paths, contains, enumerate_integral_points};
use stochpack::model::{Instance, ServiceDemand};

fn main() {
    let services = vec![
        ServiceDemand::new(50.0, 250.0),
        ServiceDemand::new(30.0, 2700.0),
        ServiceDemand::new(40.0, 640.0),
        ServiceDemand::new(20.0, 1800.0),
        ServiceDemand::new(60.0, 60.0),
    ];
    let total: f64 = services.iter().map(|s| s.mu).sum();
    let instance = Instance::new(vec![total, total], services).expect("valid instance");

    let (bottom, upper) = build_sorted_paths(&instance);
    println!("bottom path (ascending variance-to-mean ratio):");
    for p in &bottom.points {
        println!("  ({:.4}, {:.4})", p.a, p.b);
    }
    println!("upper path (descending):");
    for p in &upper.points {
        println!("  ({:.4}, {:.4})", p.a, p.b);
    }

    let points = enumerate_integral_points(&instance).expect("n is small");
    let inside = points
        .iter()
        .filter(|&&p| contains(&bottom, &upper, p, 1e-9))
        .count();
    println!("{inside} of {} subset points lie between the paths", points.len());
}
