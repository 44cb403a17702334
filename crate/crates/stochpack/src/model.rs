//! Instance and partition data model, normalization to `(a, b)` coordinates
//! and the variance-to-mean-ratio ordering.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("instance must have at least one bin and one service")]
    Empty,
    #[error("capacity {0} is not positive")]
    BadCapacity(f64),
    #[error("service {index}: mean {mu} / variance {var} out of range")]
    BadService { index: usize, mu: f64, var: f64 },
    #[error("total mean and total variance must be positive")]
    DegenerateTotals,
    #[error("partition length {len} does not match service count {n}")]
    PartitionLength { len: usize, n: usize },
    #[error("service {service} assigned to bin {bin}, but instance has {k} bins")]
    BinOutOfRange { service: usize, bin: usize, k: usize },
    #[error("operation requires exactly two bins, instance has {0}")]
    NotTwoBins(usize),
    #[error("total capacity {c} is below total mean {mu}")]
    Infeasible { c: f64, mu: f64 },
}

/// One service's normally distributed demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceDemand {
    pub mu: f64,
    pub var: f64,
}

impl ServiceDemand {
    pub fn new(mu: f64, var: f64) -> Self {
        Self { mu, var }
    }

    /// Variance-to-mean ratio, the risk ordering key. A zero-mean service
    /// is pure risk and sorts last (+inf).
    pub fn vmr(&self) -> f64 {
        if self.mu == 0.0 {
            f64::INFINITY
        } else {
            self.var / self.mu
        }
    }
}

/// Bin capacities plus the list of services; the unit of solving.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub capacities: Vec<f64>,
    pub services: Vec<ServiceDemand>,
}

impl Instance {
    pub fn new(capacities: Vec<f64>, services: Vec<ServiceDemand>) -> Result<Self, ModelError> {
        let inst = Self {
            capacities,
            services,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Structural invariants. Demands may violate `var <= mu^2` (the
    /// negligible-negative-demand assumption); that is a caller concern,
    /// not an error.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.capacities.is_empty() || self.services.is_empty() {
            return Err(ModelError::Empty);
        }
        for &c in &self.capacities {
            if !(c > 0.0) || !c.is_finite() {
                return Err(ModelError::BadCapacity(c));
            }
        }
        for (index, s) in self.services.iter().enumerate() {
            if !(s.mu >= 0.0) || !(s.var > 0.0) || !s.mu.is_finite() || !s.var.is_finite() {
                return Err(ModelError::BadService {
                    index,
                    mu: s.mu,
                    var: s.var,
                });
            }
        }
        if !(self.total_mean() > 0.0) || !(self.total_var() > 0.0) {
            return Err(ModelError::DegenerateTotals);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.services.len()
    }

    pub fn k(&self) -> usize {
        self.capacities.len()
    }

    pub fn total_mean(&self) -> f64 {
        self.services.iter().map(|s| s.mu).sum()
    }

    pub fn total_var(&self) -> f64 {
        self.services.iter().map(|s| s.var).sum()
    }

    pub fn total_capacity(&self) -> f64 {
        self.capacities.iter().sum()
    }

    /// Solvers assume the total capacity covers the total mean.
    pub fn check_feasible(&self) -> Result<(), ModelError> {
        let (c, mu) = (self.total_capacity(), self.total_mean());
        if c < mu {
            return Err(ModelError::Infeasible { c, mu });
        }
        Ok(())
    }
}

/// Stable permutation of service indices by ascending VMR; ties keep the
/// original index order, +inf sentinels sort last.
pub fn sort_by_vmr(instance: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_by(|&i, &j| {
        instance.services[i]
            .vmr()
            .total_cmp(&instance.services[j].vmr())
    });
    order
}

/// Assignment of every service index to a bin index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Partition {
    pub assignment: Vec<usize>,
}

impl Partition {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self { assignment }
    }

    fn check(&self, instance: &Instance) -> Result<(), ModelError> {
        if self.assignment.len() != instance.n() {
            return Err(ModelError::PartitionLength {
                len: self.assignment.len(),
                n: instance.n(),
            });
        }
        for (service, &bin) in self.assignment.iter().enumerate() {
            if bin >= instance.k() {
                return Err(ModelError::BinOutOfRange {
                    service,
                    bin,
                    k: instance.k(),
                });
            }
        }
        Ok(())
    }
}

/// Per-bin aggregate statistics of a partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinStats {
    pub mu: f64,
    pub var: f64,
    pub sigma: f64,
    /// Spare capacity in standard deviations; +inf for an empty bin
    /// (or any zero-variance bin) with nonnegative spare.
    pub delta: f64,
}

impl BinStats {
    pub fn new(capacity: f64, mu: f64, var: f64) -> Self {
        let sigma = var.sqrt();
        let spare = capacity - mu;
        let delta = if var > 0.0 {
            spare / sigma
        } else if spare >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        Self {
            mu,
            var,
            sigma,
            delta,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.mu == 0.0 && self.var == 0.0
    }
}

/// Per-bin sums of means and variances for a partition.
pub fn bin_stats(instance: &Instance, partition: &Partition) -> Result<Vec<BinStats>, ModelError> {
    partition.check(instance)?;
    let k = instance.k();
    let mut mu = vec![0.0; k];
    let mut var = vec![0.0; k];
    for (s, &bin) in partition.assignment.iter().enumerate() {
        mu[bin] += instance.services[s].mu;
        var[bin] += instance.services[s].var;
    }
    Ok((0..k)
        .map(|j| BinStats::new(instance.capacities[j], mu[j], var[j]))
        .collect())
}

/// The `(a, b)` coordinates on which all two-bin cost analysis operates:
/// fraction of total mean / total variance placed in bin one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPoint {
    pub a: f64,
    pub b: f64,
}

impl NormalizedPoint {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }
}

/// Normalized coordinates of bin one of a two-bin partition.
pub fn normalize(instance: &Instance, partition: &Partition) -> Result<NormalizedPoint, ModelError> {
    if instance.k() != 2 {
        return Err(ModelError::NotTwoBins(instance.k()));
    }
    let stats = bin_stats(instance, partition)?;
    Ok(NormalizedPoint::new(
        stats[0].mu / instance.total_mean(),
        stats[0].var / instance.total_var(),
    ))
}
