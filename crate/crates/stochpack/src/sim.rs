//! Synthetic workload generation, sampling, empirical cost accounting and
//! the capacity sweep comparing the sorting solver against the mean-based
//! baseline.

use crate::baselines::solve_bm;
use crate::costs::CostModel;
use crate::model::{Instance, Partition, ServiceDemand};
use crate::solver::{solve_k_bins_dp, SolverError};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("mixture needs at least 4 services, got {0}")]
    TooFewServices(usize),
    #[error("timeslot count must be at least 2, got {0}")]
    TooFewTimeslots(usize),
    #[error("capacity ratio c/mu must be >= 1, got {0}")]
    BadRatio(f64),
    #[error("sample matrix is {got_n} x {got_t}, expected {n} services")]
    DimensionMismatch { n: usize, got_n: usize, got_t: usize },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// Three-population mixture: every service has the same true mean; half get
/// a low standard deviation `U[0, 0.1 mu]`, a quarter `U[0.1 mu, 0.5 mu]`,
/// and the rest `U[0.5 mu, 0.9 mu]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureSpec {
    pub n: usize,
    pub base_mu: f64,
}

impl Default for MixtureSpec {
    fn default() -> Self {
        Self {
            n: 100,
            base_mu: 500.0,
        }
    }
}

/// True generating parameters of one service.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrueParams {
    pub mu: f64,
    pub sigma: f64,
}

/// Raw demand samples, one row per service, one column per timeslot.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    pub values: Vec<Vec<f64>>,
}

impl SampleMatrix {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn timeslots(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Bm,
    Sorting,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Bm => "bm",
            Algo::Sorting => "sorting",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub c_over_mu: f64,
    pub model: CostModel,
    pub algo: Algo,
    pub mean_cost: f64,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub spec: MixtureSpec,
    pub c_over_mu_values: Vec<f64>,
    pub k: usize,
    pub models: Vec<CostModel>,
    pub repetitions: usize,
    pub timeslots: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            spec: MixtureSpec::default(),
            c_over_mu_values: (0..10).map(|i| 1.05 + 0.05 * i as f64).collect(),
            k: 2,
            models: CostModel::ALL.to_vec(),
            repetitions: 20,
            timeslots: 500,
            seed: 0,
        }
    }
}

/// Independent substream keyed by (seed, repetition, role, service); the
/// key goes straight into the ChaCha seed bytes so streams never collide
/// and never depend on iteration order.
fn substream(seed: u64, rep: u64, role: u64, service: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[0..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&rep.to_le_bytes());
    bytes[16..24].copy_from_slice(&role.to_le_bytes());
    bytes[24..32].copy_from_slice(&service.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

const ROLE_SHUFFLE: u64 = 0;
const ROLE_SIGMA: u64 = 1;
const ROLE_SAMPLE: u64 = 2;

/// Draw true parameters for the three-population mixture. Population sizes
/// are `floor(n/2)`, `floor(n/4)` and the remainder; the population labels
/// are shuffled across service indices.
pub fn generate_mixture(spec: &MixtureSpec, seed: u64) -> Result<Vec<TrueParams>, SimError> {
    generate_mixture_rep(spec, seed, 0)
}

fn generate_mixture_rep(
    spec: &MixtureSpec,
    seed: u64,
    rep: u64,
) -> Result<Vec<TrueParams>, SimError> {
    if spec.n < 4 {
        return Err(SimError::TooFewServices(spec.n));
    }
    let n = spec.n;
    let mu = spec.base_mu;
    let (n_low, n_mid) = (n / 2, n / 4);
    let mut labels: Vec<u8> = Vec::with_capacity(n);
    labels.extend(std::iter::repeat(0u8).take(n_low));
    labels.extend(std::iter::repeat(1u8).take(n_mid));
    labels.extend(std::iter::repeat(2u8).take(n - n_low - n_mid));
    labels.shuffle(&mut substream(seed, rep, ROLE_SHUFFLE, 0));
    Ok(labels
        .iter()
        .enumerate()
        .map(|(i, &label)| {
            let mut rng = substream(seed, rep, ROLE_SIGMA, i as u64);
            let (lo, hi) = match label {
                0 => (0.0, 0.1),
                1 => (0.1, 0.5),
                _ => (0.5, 0.9),
            };
            TrueParams {
                mu,
                sigma: rng.gen_range(lo * mu..hi * mu),
            }
        })
        .collect())
}

/// Draw `timeslots` normal samples per service and fit each service by its
/// sample mean and unbiased sample variance (floored at 1e-12).
pub fn sample_and_fit(
    true_params: &[TrueParams],
    timeslots: usize,
    seed: u64,
) -> Result<(Vec<ServiceDemand>, SampleMatrix), SimError> {
    sample_and_fit_rep(true_params, timeslots, seed, 0)
}

fn sample_and_fit_rep(
    true_params: &[TrueParams],
    timeslots: usize,
    seed: u64,
    rep: u64,
) -> Result<(Vec<ServiceDemand>, SampleMatrix), SimError> {
    if timeslots < 2 {
        return Err(SimError::TooFewTimeslots(timeslots));
    }
    let mut values = Vec::with_capacity(true_params.len());
    let mut services = Vec::with_capacity(true_params.len());
    for (i, p) in true_params.iter().enumerate() {
        let mut rng = substream(seed, rep, ROLE_SAMPLE, i as u64);
        let dist = Normal::new(p.mu, p.sigma).expect("finite parameters");
        let row: Vec<f64> = (0..timeslots).map(|_| dist.sample(&mut rng)).collect();
        let mean = row.iter().sum::<f64>() / timeslots as f64;
        let ss: f64 = row.iter().map(|x| (x - mean) * (x - mean)).sum();
        let var = (ss / (timeslots - 1) as f64).max(1e-12);
        services.push(ServiceDemand::new(mean, var));
        values.push(row);
    }
    Ok((services, SampleMatrix { values }))
}

/// Empirical cost of a partition on raw samples. SP-MED is the mean over
/// timeslots of the total overflow expressed as a percentage of the total
/// fitted mean; the overflow models are event frequencies: per-bin overflow
/// frequency maximized over bins (SP-MWOP) and the frequency of any bin
/// overflowing (SP-MOP).
pub fn empirical_cost(
    instance: &Instance,
    partition: &Partition,
    samples: &SampleMatrix,
    model: CostModel,
) -> Result<f64, SimError> {
    let (n, k) = (instance.n(), instance.k());
    let t = samples.timeslots();
    if samples.n() != n || partition.assignment.len() != n || t == 0 {
        return Err(SimError::DimensionMismatch {
            n,
            got_n: samples.n(),
            got_t: t,
        });
    }
    let total_mu = instance.total_mean();
    let mut med_sum = 0.0f64;
    let mut bin_overflows = vec![0usize; k];
    let mut any_overflows = 0usize;
    let mut load = vec![0.0f64; k];
    for l in 0..t {
        load.iter_mut().for_each(|x| *x = 0.0);
        for (i, &j) in partition.assignment.iter().enumerate() {
            load[j] += samples.values[i][l];
        }
        let mut any = false;
        for j in 0..k {
            let over = load[j] - instance.capacities[j];
            if over > 0.0 {
                med_sum += 100.0 * over / total_mu;
                bin_overflows[j] += 1;
                any = true;
            }
        }
        any_overflows += any as usize;
    }
    Ok(match model {
        CostModel::Spmed => med_sum / t as f64,
        CostModel::Spmwop => {
            bin_overflows.iter().copied().max().unwrap_or(0) as f64 / t as f64
        }
        CostModel::Spmop => any_overflows as f64 / t as f64,
    })
}

/// The capacity sweep: per repetition generate a mixture, sample, fit, set
/// `k` equal capacities at each `c/mu` ratio of the fitted total mean, solve
/// with both algorithms and score them on the *same* samples. Repetitions
/// run in parallel; aggregation is in fixed repetition order, so the report
/// is bit-identical for any worker count.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, SimError> {
    for &r in &config.c_over_mu_values {
        if !(r >= 1.0) {
            return Err(SimError::BadRatio(r));
        }
    }
    let per_rep: Vec<Result<Vec<f64>, SimError>> = (0..config.repetitions)
        .into_par_iter()
        .map(|rep| sweep_one_rep(config, rep as u64))
        .collect();

    let mut sums = vec![0.0f64; config.c_over_mu_values.len() * config.models.len() * 2];
    for rep in per_rep {
        for (acc, x) in sums.iter_mut().zip(rep?) {
            *acc += x;
        }
    }

    let mut rows = Vec::with_capacity(sums.len());
    let mut idx = 0usize;
    for &c_over_mu in &config.c_over_mu_values {
        for &model in &config.models {
            for algo in [Algo::Sorting, Algo::Bm] {
                rows.push(SweepRow {
                    c_over_mu,
                    model,
                    algo,
                    mean_cost: sums[idx] / config.repetitions.max(1) as f64,
                    repetitions: config.repetitions,
                });
                idx += 1;
            }
        }
    }
    rows.sort_by(|x, y| {
        x.model
            .name()
            .cmp(y.model.name())
            .then(x.algo.name().cmp(y.algo.name()))
            .then(x.c_over_mu.total_cmp(&y.c_over_mu))
    });
    Ok(SweepReport { rows })
}

/// Costs for one repetition, flattened in (c_over_mu, model, [sorting, bm])
/// order.
fn sweep_one_rep(config: &SweepConfig, rep: u64) -> Result<Vec<f64>, SimError> {
    let params = generate_mixture_rep(&config.spec, config.seed, rep)?;
    let (services, samples) =
        sample_and_fit_rep(&params, config.timeslots, config.seed, rep)?;
    let fitted_mu: f64 = services.iter().map(|s| s.mu).sum();

    let mut out = Vec::with_capacity(config.c_over_mu_values.len() * config.models.len() * 2);
    for &ratio in &config.c_over_mu_values {
        let capacities = vec![ratio * fitted_mu / config.k as f64; config.k];
        let instance = Instance::new(capacities, services.clone())?;
        let bm = solve_bm(&instance);
        for &model in &config.models {
            let sorted = solve_k_bins_dp(&instance, model)?;
            out.push(empirical_cost(&instance, &sorted.partition, &samples, model)?);
            out.push(empirical_cost(&instance, &bm, &samples, model)?);
        }
    }
    Ok(out)
}

/// Render the report with the fixed header; floats carry 17 significant
/// digits so equal reports serialize to identical bytes.
pub fn sweep_to_csv(report: &SweepReport) -> String {
    let mut out = String::from("c_over_mu,model,algo,mean_cost,repetitions\n");
    for row in &report.rows {
        writeln!(
            out,
            "{:.16e},{},{},{:.16e},{}",
            row.c_over_mu,
            row.model.name(),
            row.algo.name(),
            row.mean_cost,
            row.repetitions
        )
        .expect("writing to a String cannot fail");
    }
    out
}
