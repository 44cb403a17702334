//! Mean-based baseline placement: each service, in input order, goes to the
//! bin with the largest remaining mean slack.

use crate::model::{Instance, Partition};

/// Scan services in input order; place each on the bin maximizing
/// `c_j - sum of assigned means`, ties to the lowest bin index. Variances
/// are ignored entirely.
pub fn solve_bm(instance: &Instance) -> Partition {
    let mut load = vec![0.0f64; instance.k()];
    let mut assignment = Vec::with_capacity(instance.n());
    for s in &instance.services {
        let mut best = 0usize;
        for j in 1..instance.k() {
            if instance.capacities[j] - load[j] > instance.capacities[best] - load[best] {
                best = j;
            }
        }
        load[best] += s.mu;
        assignment.push(best);
    }
    Partition::new(assignment)
}
