//! Seeded Monte Carlo experiments on entropy reduction.
//!
//! Every trial owns a random stream seeded by [`mix_seed`] from the master
//! seed and the trial's coordinates, so results do not depend on execution
//! order or thread count. Trials run in parallel and are merged back in
//! `(deficit, trial)` order.

use std::fmt;
use std::io::{self, Write};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codec::{encode, encode_bidiagonal};
use crate::entropy::{binomial_avg_entropy, cost_of_counts, empirical_cost};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::matrixgen::{gen_full_rank_with, ideal_soliton, GenConfig};

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: `splitmix64(splitmix64(splitmix64(master) ^ deficit) ^ trial)`.
pub fn mix_seed(master: u64, deficit: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ deficit) ^ trial)
}

/// A length-`n` vector with exactly `n/2 - deficit` ones at uniformly random positions.
pub fn make_input<R: Rng + ?Sized>(n: usize, deficit: usize, rng: &mut R) -> Result<BitVector> {
    if n == 0 {
        return Err(Error::Domain("input length must be >= 1".into()));
    }
    if deficit > n / 2 {
        return Err(Error::Domain(format!("deficit {deficit} exceeds n/2 = {}", n / 2)));
    }
    let mut v = BitVector::zeros(n);
    for pos in index::sample(rng, n, n / 2 - deficit) {
        v.set(pos, true);
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// The bidiagonal differencing matrix of size `n`.
    Bidiagonal,
    /// A fresh full-rank Ideal Soliton matrix per trial. Dense and cubic in
    /// `n`; practical only for `n` in the low thousands.
    Soliton,
}

impl Transform {
    pub fn apply<R: Rng + ?Sized>(&self, x: &BitVector, rng: &mut R) -> Result<BitVector> {
        match self {
            Transform::Bidiagonal => Ok(encode_bidiagonal(x)),
            Transform::Soliton => {
                let n = x.len();
                let m = gen_full_rank_with(
                    &ideal_soliton(n)?,
                    n,
                    GenConfig::DEFAULT_MAX_ROW_ATTEMPTS,
                    rng,
                )?;
                encode(&m, x)
            }
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::Bidiagonal => "bidiagonal",
            Transform::Soliton => "soliton",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SavingExperimentConfig {
    pub n: usize,
    pub deficits: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub transform: Transform,
}

impl SavingExperimentConfig {
    /// Deficits `0, step, 2*step, ...` up to and including `max` (when it lies on the grid).
    pub fn deficit_grid(max: usize, step: usize) -> Result<Vec<usize>> {
        if step == 0 {
            return Err(Error::Domain("deficit step must be >= 1".into()));
        }
        Ok((0..=max).step_by(step).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::Domain(format!("n = {} must be even and >= 2", self.n)));
        }
        if self.trials == 0 {
            return Err(Error::Domain("trials must be >= 1".into()));
        }
        if let Some(d) = self.deficits.iter().find(|&&d| d > self.n / 2) {
            return Err(Error::Domain(format!("deficit {d} exceeds n/2 = {}", self.n / 2)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SavingRecord {
    pub deficit: usize,
    pub trial: usize,
    pub seed_used: u64,
    pub cost_in: f64,
    pub cost_out: f64,
    pub saving: f64,
}

fn run_trial(cfg: &SavingExperimentConfig, deficit: usize, trial: usize) -> Result<SavingRecord> {
    let seed_used = mix_seed(cfg.seed, deficit as u64, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_used);
    let x = make_input(cfg.n, deficit, &mut rng)?;
    let y = cfg.transform.apply(&x, &mut rng)?;
    let cost_in = empirical_cost(&x).total_cost;
    let cost_out = empirical_cost(&y).total_cost;
    Ok(SavingRecord {
        deficit,
        trial,
        seed_used,
        cost_in,
        cost_out,
        saving: cost_in - cost_out,
    })
}

/// One record per `(deficit, trial)`, in that order.
pub fn run_saving_experiment(cfg: &SavingExperimentConfig) -> Result<Vec<SavingRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .deficits
        .iter()
        .flat_map(|&d| (0..cfg.trials).map(move |t| (d, t)))
        .collect();
    jobs.par_iter()
        .map(|&(d, t)| run_trial(cfg, d, t))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SavingSummary {
    pub deficit: usize,
    pub mean_saving: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single trial.
    pub stddev_saving: f64,
}

/// Groups consecutive records sharing a deficit.
pub fn summarize(records: &[SavingRecord]) -> Vec<SavingSummary> {
    records
        .chunk_by(|a, b| a.deficit == b.deficit)
        .map(|group| {
            let (mean, sd) = mean_and_sd(group.iter().map(|r| r.saving));
            SavingSummary {
                deficit: group[0].deficit,
                mean_saving: mean,
                stddev_saving: sd,
            }
        })
        .collect()
}

fn mean_and_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

pub const RECORD_CSV_HEADER: &str = "deficit,trial,seed_used,cost_in,cost_out,saving";
pub const SUMMARY_CSV_HEADER: &str = "deficit,mean_saving,stddev_saving";

pub fn write_records_csv<W: Write>(mut w: W, records: &[SavingRecord]) -> io::Result<()> {
    writeln!(w, "{RECORD_CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{:.6},{:.6},{:.6}",
            r.deficit, r.trial, r.seed_used, r.cost_in, r.cost_out, r.saving
        )?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(mut w: W, summary: &[SavingSummary]) -> io::Result<()> {
    writeln!(w, "{SUMMARY_CSV_HEADER}")?;
    for s in summary {
        writeln!(w, "{},{:.6},{:.6}", s.deficit, s.mean_saving, s.stddev_saving)?;
    }
    Ok(())
}

/// Largest per-deficit mean saving, checked against the one-bit bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjecture1Report {
    pub n: usize,
    pub max_mean_saving: f64,
    pub at_deficit: usize,
    pub summary: Vec<SavingSummary>,
}

impl Conjecture1Report {
    pub fn pass(&self) -> bool {
        self.max_mean_saving < 1.0
    }
}

impl fmt::Display for Conjecture1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        write!(
            f,
            "conjecture 1 probe (n={}): max mean saving {:.6} bits at deficit {}: {verdict}",
            self.n, self.max_mean_saving, self.at_deficit
        )?;
        if !self.pass() {
            write!(f, " (witness: deficit {})", self.at_deficit)?;
        }
        Ok(())
    }
}

pub fn conjecture1_probe(cfg: &SavingExperimentConfig) -> Result<Conjecture1Report> {
    let records = run_saving_experiment(cfg)?;
    Ok(conjecture1_from_records(cfg.n, &records))
}

pub fn conjecture1_from_records(n: usize, records: &[SavingRecord]) -> Conjecture1Report {
    let summary = summarize(records);
    let best = summary
        .iter()
        .copied()
        .max_by(|a, b| a.mean_saving.total_cmp(&b.mean_saving))
        .unwrap_or(SavingSummary {
            deficit: 0,
            mean_saving: f64::NEG_INFINITY,
            stddev_saving: 0.0,
        });
    Conjecture1Report {
        n,
        max_mean_saving: best.mean_saving,
        at_deficit: best.deficit,
        summary,
    }
}

/// Mean bidiagonal saving over every length-`n` input with exactly
/// `n/2 - deficit` ones. Exhaustive; `n <= 24`.
pub fn exhaustive_mean_saving(n: usize, deficit: usize) -> Result<f64> {
    if n == 0 || n > 24 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!("exhaustive mode needs even 2 <= n <= 24, got {n}")));
    }
    if deficit > n / 2 {
        return Err(Error::Domain(format!("deficit {deficit} exceeds n/2")));
    }
    let ones = (n / 2 - deficit) as u32;
    let (mut total, mut count) = (0.0, 0u64);
    for code in (0u64..1 << n).filter(|c| c.count_ones() == ones) {
        let x = BitVector::from_index(n, code);
        let y = encode_bidiagonal(&x);
        total += empirical_cost(&x).total_cost - empirical_cost(&y).total_cost;
        count += 1;
    }
    Ok(total / count as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    Zero,
    One,
    Stationary,
}

/// Two-state chain over `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovSourceConfig {
    pub p01: f64,
    pub p10: f64,
    pub initial: InitialState,
    pub length: usize,
}

impl Default for MarkovSourceConfig {
    fn default() -> Self {
        Self {
            p01: 0.5,
            p10: 0.5,
            initial: InitialState::Stationary,
            length: 1000,
        }
    }
}

impl MarkovSourceConfig {
    /// Long-run fraction of ones, `p01 / (p01 + p10)`.
    pub fn stationary_ones(&self) -> Result<f64> {
        if self.p01 + self.p10 == 0.0 {
            return Err(Error::Domain(
                "stationary distribution is not unique when p01 = p10 = 0".into(),
            ));
        }
        Ok(self.p01 / (self.p01 + self.p10))
    }

    fn validate(&self) -> Result<()> {
        for (name, p) in [("p01", self.p01), ("p10", self.p10)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if self.length == 0 {
            return Err(Error::Domain("length must be >= 1".into()));
        }
        Ok(())
    }
}

pub fn markov_realization<R: Rng + ?Sized>(cfg: &MarkovSourceConfig, rng: &mut R) -> Result<BitVector> {
    cfg.validate()?;
    let mut state = match cfg.initial {
        InitialState::Zero => false,
        InitialState::One => true,
        InitialState::Stationary => rng.gen_bool(cfg.stationary_ones()?),
    };
    let mut v = BitVector::zeros(cfg.length);
    for i in 0..cfg.length {
        if i > 0 {
            let flip = if state { cfg.p10 } else { cfg.p01 };
            if rng.gen_bool(flip) {
                state = !state;
            }
        }
        v.set(i, state);
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conjecture2Report {
    pub length: usize,
    pub trials: usize,
    pub mean_cost_raw: f64,
    pub mean_cost_transformed: f64,
    /// `length * binomial_avg_entropy(length, 1/2)`, present when `p01 = p10`.
    pub reference_cost: Option<f64>,
    /// Mean of `cost_transformed - cost_raw` over trials.
    pub mean_difference: f64,
    pub std_error: f64,
}

impl Conjecture2Report {
    /// The transform did not lower the mean cost below the raw mean by more
    /// than two standard errors.
    pub fn consistent(&self) -> bool {
        self.mean_difference >= -2.0 * self.std_error
    }
}

impl fmt::Display for Conjecture2Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "conjecture 2 probe: length={} trials={}", self.length, self.trials)?;
        writeln!(f, "mean cost raw: {:.6}", self.mean_cost_raw)?;
        writeln!(f, "mean cost transformed: {:.6}", self.mean_cost_transformed)?;
        match self.reference_cost {
            Some(r) => writeln!(f, "binomial-average reference: {r:.6}")?,
            None => writeln!(f, "binomial-average reference: n/a (p01 != p10)")?,
        }
        writeln!(
            f,
            "mean difference (transformed - raw): {:.6} +/- {:.6} (1 s.e.)",
            self.mean_difference, self.std_error
        )?;
        write!(
            f,
            "consistent with conjecture: {}",
            if self.consistent() { "yes" } else { "no" }
        )
    }
}

/// Compares the empirical cost of Markov realizations before and after the
/// bidiagonal transform.
pub fn conjecture2_probe(cfg: &MarkovSourceConfig, trials: usize, seed: u64) -> Result<Conjecture2Report> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let pairs = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0, t as u64));
            let x = markov_realization(cfg, &mut rng)?;
            let y = encode_bidiagonal(&x);
            Ok((empirical_cost(&x).total_cost, empirical_cost(&y).total_cost))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;

    let (mean_raw, _) = mean_and_sd(pairs.iter().map(|p| p.0));
    let (mean_out, _) = mean_and_sd(pairs.iter().map(|p| p.1));
    let (mean_diff, sd_diff) = mean_and_sd(pairs.iter().map(|p| p.1 - p.0));
    let reference_cost = if cfg.p01 == cfg.p10 {
        Some(cfg.length as f64 * binomial_avg_entropy(cfg.length, 0.5)?)
    } else {
        None
    };
    Ok(Conjecture2Report {
        length: cfg.length,
        trials,
        mean_cost_raw: mean_raw,
        mean_cost_transformed: mean_out,
        reference_cost,
        mean_difference: mean_diff,
        std_error: sd_diff / (trials as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreservationReport {
    pub k: usize,
    pub mean_cost_inputs: f64,
    pub mean_cost_outputs: f64,
}

impl PreservationReport {
    pub fn equal(&self) -> bool {
        self.mean_cost_inputs == self.mean_cost_outputs
    }
}

fn sorted_sum(mut costs: Vec<f64>) -> f64 {
    costs.sort_by(f64::total_cmp);
    costs.into_iter().sum()
}

/// Mean empirical cost over all `2^k` inputs and over their images under `r`.
///
/// Both sums run in sorted order, so equal multisets give bit-identical means.
pub fn entropy_preservation_check(r: &BitMatrix) -> Result<PreservationReport> {
    r.require_square("entropy_preservation_check")?;
    let k = r.rows();
    if k > 16 {
        return Err(Error::Domain(format!("entropy preservation is exhaustive and needs k <= 16, got {k}")));
    }
    let rank = r.rank();
    if rank < k {
        return Err(Error::Singular { rank, k });
    }
    let inputs: Vec<BitVector> = (0..1u64 << k).map(|i| BitVector::from_index(k, i)).collect();
    let cost_in: Vec<f64> = inputs.iter().map(|x| cost_of_counts(k, x.count_ones())).collect();
    let cost_out = inputs
        .iter()
        .map(|x| Ok(cost_of_counts(k, encode(r, x)?.count_ones())))
        .collect::<Result<Vec<f64>>>()?;
    let count = inputs.len() as f64;
    Ok(PreservationReport {
        k,
        mean_cost_inputs: sorted_sum(cost_in) / count,
        mean_cost_outputs: sorted_sum(cost_out) / count,
    })
}
