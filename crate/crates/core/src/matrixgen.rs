//! Construction of encoding matrices.
//!
//! Two families are provided: full-rank matrices whose row degrees are drawn
//! from a [`DegreeDistribution`] (normally the Ideal Soliton), and the
//! bidiagonal matrix with ones on the diagonal and the superdiagonal.
//!
//! Full-rank sampling grows the matrix row by row. A candidate row is kept
//! only when it is independent of the rows accepted so far, so generation
//! always makes progress. The price is a mild bias: the accepted rows'
//! degree histogram is not exactly the sampling distribution, since
//! low-degree rows are rejected more often near the end.

use num_bigint::BigUint;
use num_traits::One;
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, EchelonBasis};

/// Tolerance on the total mass of a custom distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Probability mass over the degrees `1..=k`.
#[derive(Debug, Clone)]
pub struct DegreeDistribution {
    mass: Vec<f64>,
    sampler: WeightedIndex<f64>,
}

impl DegreeDistribution {
    /// Builds a distribution from `mass[i]` = probability of degree `i + 1`.
    pub fn from_mass(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::Domain("degree distribution needs k >= 1".into()));
        }
        if let Some((i, p)) = mass
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::Domain(format!(
                "mass of degree {} is {p}, must be a finite non-negative number",
                i + 1
            )));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::Domain(format!("mass sums to {total}, expected 1")));
        }
        let sampler = WeightedIndex::new(&mass)
            .map_err(|e| Error::Domain(format!("invalid degree distribution: {e}")))?;
        Ok(Self { mass, sampler })
    }

    /// All mass on a single degree `d` in `1..=k`.
    pub fn point_mass(k: usize, d: usize) -> Result<Self> {
        if d == 0 || d > k {
            return Err(Error::Domain(format!("degree {d} outside 1..={k}")));
        }
        let mut mass = vec![0.0; k];
        mass[d - 1] = 1.0;
        Self::from_mass(mass)
    }

    pub fn k(&self) -> usize {
        self.mass.len()
    }

    /// Probability of degree `d`; zero outside `1..=k`.
    pub fn prob(&self, d: usize) -> f64 {
        if d == 0 {
            return 0.0;
        }
        self.mass.get(d - 1).copied().unwrap_or(0.0)
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn sample_degree<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng) + 1
    }
}

/// The Ideal Soliton distribution: `rho(1) = 1/k`, `rho(i) = 1/(i(i-1))` for `i >= 2`.
pub fn ideal_soliton(k: usize) -> Result<DegreeDistribution> {
    if k == 0 {
        return Err(Error::Domain("Ideal Soliton needs k >= 1".into()));
    }
    let mass = (1..=k)
        .map(|i| {
            if i == 1 {
                1.0 / k as f64
            } else {
                1.0 / (i as f64 * (i - 1) as f64)
            }
        })
        .collect();
    DegreeDistribution::from_mass(mass)
}

/// Parameters for [`gen_full_rank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub k: usize,
    pub seed: u64,
    pub max_row_attempts: usize,
}

impl GenConfig {
    pub const DEFAULT_MAX_ROW_ATTEMPTS: usize = 1000;

    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            max_row_attempts: Self::DEFAULT_MAX_ROW_ATTEMPTS,
        }
    }
}

/// Draws a degree `d` from `dist`, then `d` distinct positions uniformly at random.
pub fn sample_row<R: Rng + ?Sized>(dist: &DegreeDistribution, rng: &mut R) -> BitVector {
    let k = dist.k();
    let d = dist.sample_degree(rng);
    let mut row = BitVector::zeros(k);
    for pos in index::sample(rng, k, d) {
        row.set(pos, true);
    }
    row
}

/// Samples a full-rank `k x k` matrix, seeding a ChaCha8 stream from `cfg.seed`.
pub fn gen_full_rank(dist: &DegreeDistribution, cfg: &GenConfig) -> Result<BitMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    gen_full_rank_with(dist, cfg.k, cfg.max_row_attempts, &mut rng)
}

/// As [`gen_full_rank`], drawing from a caller-owned random stream.
pub fn gen_full_rank_with<R: Rng + ?Sized>(
    dist: &DegreeDistribution,
    k: usize,
    max_row_attempts: usize,
    rng: &mut R,
) -> Result<BitMatrix> {
    if k == 0 {
        return Err(Error::Domain("matrix size k must be >= 1".into()));
    }
    if max_row_attempts == 0 {
        return Err(Error::Domain("max_row_attempts must be >= 1".into()));
    }
    if dist.k() != k {
        return Err(Error::Dimension(format!(
            "distribution is over degrees 1..={}, matrix size is {k}",
            dist.k()
        )));
    }
    let mut basis = EchelonBasis::new(k);
    let mut rows = Vec::with_capacity(k);
    for row in 0..k {
        let accepted = (0..max_row_attempts).find_map(|_| {
            let candidate = sample_row(dist, rng);
            basis.insert(&candidate).then_some(candidate)
        });
        match accepted {
            Some(r) => rows.push(r),
            None => {
                return Err(Error::Generation {
                    row,
                    attempts: max_row_attempts,
                })
            }
        }
    }
    BitMatrix::from_rows(&rows)
}

/// A uniformly random invertible `k x k` matrix, by rejection over all 0-1 matrices.
pub fn random_invertible<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<BitMatrix> {
    if k == 0 {
        return Err(Error::Domain("matrix size k must be >= 1".into()));
    }
    // Each attempt succeeds with probability > 0.28 for every k.
    loop {
        let mut m = BitMatrix::zeros(k, k);
        for l in 0..k {
            for c in 0..k {
                if rng.gen::<bool>() {
                    m.set(l, c, true);
                }
            }
        }
        if m.rank() == k {
            return Ok(m);
        }
    }
}

/// `r(l,l) = 1`, `r(l,l+1) = 1`, zero elsewhere.
pub fn bidiagonal(k: usize) -> Result<BitMatrix> {
    if k == 0 {
        return Err(Error::Domain("bidiagonal matrix needs k >= 1".into()));
    }
    let mut m = BitMatrix::identity(k);
    for l in 0..k - 1 {
        m.set(l, l + 1, true);
    }
    Ok(m)
}

/// Order of GL(k, 2): the product of `2^k - 2^i` for `i` in `0..k`.
pub fn count_invertible(k: usize) -> BigUint {
    let two_k = BigUint::one() << k;
    (0..k).fold(BigUint::one(), |acc, i| acc * (&two_k - (BigUint::one() << i)))
}
