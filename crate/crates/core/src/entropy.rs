//! Entropy and representation cost of bit strings.
//!
//! Costs are zeroth-order: a string of length `n` with `w` ones costs
//! `n * H(w / n)` bits, `H` being the binary entropy in base 2.
//!
//! [`zero_prob_exact`] gives the probability that an output symbol of a given
//! degree is zero when its inputs are a uniformly random subset (drawn
//! without replacement) of a fixed input string. It works in exact rational
//! arithmetic.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::matrixgen::{ideal_soliton, DegreeDistribution};

/// Published zero-output probabilities for k = 8 with four ones, degrees 1..=8.
pub const PUBLISHED_ZERO_PROB_K8_ONES4: [f64; 8] =
    [0.5, 0.42857, 0.5, 0.52857, 0.5, 0.42857, 0.5, 1.0];

/// Two values are reported as a discrepancy when they differ by more than
/// the five-decimal rounding of the published column.
pub const DISCREPANCY_TOLERANCE: f64 = 5e-6;

/// `H(p) = -p log2 p - (1-p) log2 (1-p)`, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(entropy_unchecked(p))
}

#[inline]
fn entropy_unchecked(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Cost in bits of `ones` ones among `n` symbols.
pub fn cost_of_counts(n: usize, ones: usize) -> f64 {
    n as f64 * entropy_unchecked(ones as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub n: usize,
    pub ones: usize,
    pub p_hat: f64,
    pub bits_per_symbol: f64,
    pub total_cost: f64,
}

pub fn empirical_cost(v: &BitVector) -> EntropyReport {
    let n = v.len();
    let ones = v.count_ones();
    let p_hat = ones as f64 / n as f64;
    let bits_per_symbol = entropy_unchecked(p_hat);
    EntropyReport {
        n,
        ones,
        p_hat,
        bits_per_symbol,
        total_cost: n as f64 * bits_per_symbol,
    }
}

fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    (0..r).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Probability that a uniform `degree`-subset of `k` positions, `ones` of
/// which hold a 1, covers an even number of ones:
/// `sum_{j even} C(ones, j) C(k - ones, degree - j) / C(k, degree)`.
pub fn zero_prob_exact(k: usize, ones: usize, degree: usize) -> Result<BigRational> {
    if degree == 0 || degree > k {
        return Err(Error::Domain(format!("degree {degree} outside 1..={k}")));
    }
    if ones > k {
        return Err(Error::Domain(format!("ones = {ones} exceeds k = {k}")));
    }
    let even: BigUint = (0..=degree.min(ones))
        .step_by(2)
        .map(|j| binomial(ones, j) * binomial(k - ones, degree - j))
        .sum();
    Ok(BigRational::new(BigInt::from(even), BigInt::from(binomial(k, degree))))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `sum_i rho(i) P_zero(i)` over the degrees of `dist`, with exact zero probabilities.
pub fn weighted_zero_prob(dist: &DegreeDistribution, k: usize, ones: usize) -> Result<f64> {
    if dist.k() != k {
        return Err(Error::Dimension(format!(
            "distribution covers degrees 1..={}, k = {k}",
            dist.k()
        )));
    }
    (1..=k).try_fold(0.0, |acc, d| {
        Ok(acc + dist.prob(d) * to_f64(&zero_prob_exact(k, ones, d)?))
    })
}

/// `sum_i rho(i) values[i - 1]` for externally supplied per-degree zero probabilities.
pub fn weighted_with_values(dist: &DegreeDistribution, values: &[f64]) -> Result<f64> {
    if values.len() != dist.k() {
        return Err(Error::Dimension(format!(
            "{} values for a distribution over {} degrees",
            values.len(),
            dist.k()
        )));
    }
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, v)| dist.prob(i + 1) * v)
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroProbRow {
    pub degree: usize,
    pub rho: f64,
    pub p_zero: BigRational,
    pub published: Option<f64>,
}

impl ZeroProbRow {
    pub fn p_zero_f64(&self) -> f64 {
        to_f64(&self.p_zero)
    }

    pub fn is_discrepant(&self) -> bool {
        self.published
            .is_some_and(|p| (p - self.p_zero_f64()).abs() > DISCREPANCY_TOLERANCE)
    }
}

/// Per-degree zero-output probabilities under the Ideal Soliton distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroProbTable {
    pub k: usize,
    pub ones: usize,
    pub rows: Vec<ZeroProbRow>,
    pub weighted_sum: f64,
    /// Present only when a published column exists for `(k, ones)`.
    pub weighted_sum_published: Option<f64>,
}

impl ZeroProbTable {
    pub fn build(k: usize, ones: usize) -> Result<Self> {
        let dist = ideal_soliton(k)?;
        let published = (k == 8 && ones == 4).then_some(PUBLISHED_ZERO_PROB_K8_ONES4);
        let rows = (1..=k)
            .map(|d| {
                Ok(ZeroProbRow {
                    degree: d,
                    rho: dist.prob(d),
                    p_zero: zero_prob_exact(k, ones, d)?,
                    published: published.map(|col| col[d - 1]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let weighted_sum = weighted_zero_prob(&dist, k, ones)?;
        let weighted_sum_published = published
            .map(|col| weighted_with_values(&dist, &col))
            .transpose()?;
        Ok(Self {
            k,
            ones,
            rows,
            weighted_sum,
            weighted_sum_published,
        })
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &ZeroProbRow> {
        self.rows.iter().filter(|r| r.is_discrepant())
    }
}

/// Aligned text table. The published column is blank where it agrees with
/// the exact value and flagged with `*` where it does not.
impl fmt::Display for ZeroProbTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={} ones={}", self.k, self.ones)?;
        writeln!(
            f,
            "{:>6}  {:>10}  {:>13}  {:>12}",
            "degree", "rho", "P_zero_oracle", "P_zero_paper"
        )?;
        for r in &self.rows {
            let published = match r.published {
                Some(p) if r.is_discrepant() => format!("{p:.5} *"),
                _ => String::new(),
            };
            let line = format!(
                "{:>6}  {:>10.8}  {:>13.5}  {:>12}",
                r.degree,
                r.rho,
                r.p_zero_f64(),
                published
            );
            writeln!(f, "{}", line.trim_end())?;
        }
        for r in self.discrepancies() {
            writeln!(
                f,
                "* degree {}: exact {} = {:.5}, published {:.5}",
                r.degree,
                r.p_zero,
                r.p_zero_f64(),
                r.published.unwrap_or(f64::NAN)
            )?;
        }
        writeln!(f, "weighted sum (oracle): {:.5}", self.weighted_sum)?;
        if let Some(p) = self.weighted_sum_published {
            writeln!(f, "weighted sum (paper column): {p:.5}")?;
        }
        Ok(())
    }
}

/// Expected per-symbol entropy of `n` i.i.d. Bernoulli(`p`) symbols:
/// `sum_j C(n,j) p^j (1-p)^(n-j) H(j/n)`, with the binomial weights in log space.
pub fn binomial_avg_entropy(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    let ln_ratio = p.ln() - (1.0 - p).ln();
    let mut ln_weight = n as f64 * (1.0 - p).ln();
    let mut total = 0.0;
    for j in 0..=n {
        if j > 0 {
            ln_weight += ((n - j + 1) as f64).ln() - (j as f64).ln() + ln_ratio;
        }
        total += ln_weight.exp() * entropy_unchecked(j as f64 / n as f64);
    }
    Ok(total)
}

/// `H((np - sigma) / n)` with `sigma = sqrt(n p (1 - p))`: the entropy at the
/// ones fraction lowered by one binomial standard deviation.
pub fn sigma_shifted_entropy(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    let nf = n as f64;
    let sigma = (nf * p * (1.0 - p)).sqrt();
    let shifted = (nf * p - sigma) / nf;
    if !(0.0..=1.0).contains(&shifted) {
        return Err(Error::Domain(format!("shifted proportion {shifted} outside [0, 1]")));
    }
    binary_entropy(shifted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-15);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn cost_difference_at_figure_scale() {
        // evaluated independently: 0.7737981064...
        let n = 30204;
        let diff = cost_of_counts(n, 15102) - cost_of_counts(n, 15102 - 90);
        assert!((diff - 0.773_798_106_4).abs() < 1e-6, "{diff}");
    }

    #[test]
    fn empirical_cost_examples() {
        let balanced = BitVector::from_bits(&[1, 0, 1, 0, 0, 1, 1, 0]);
        let r = empirical_cost(&balanced);
        assert_eq!((r.n, r.ones, r.total_cost), (8, 4, 8.0));
        assert_eq!(empirical_cost(&BitVector::zeros(100)).total_cost, 0.0);
        assert_eq!(empirical_cost(&BitVector::ones(100)).total_cost, 0.0);
        let r = empirical_cost(&BitVector::from_bits(&[1, 0, 0, 0]));
        assert_eq!(r.total_cost, 4.0 * r.bits_per_symbol);
    }

    #[test]
    fn zero_prob_table_rows() {
        // brute-force counts over all subsets of 11110000
        let expected = [(4, 8), (12, 28), (28, 56), (38, 70), (28, 56), (12, 28), (4, 8), (1, 1)];
        for (d, (num, den)) in expected.iter().enumerate() {
            assert_eq!(zero_prob_exact(8, 4, d + 1).unwrap(), rat(*num, *den), "degree {}", d + 1);
        }
    }

    #[test]
    fn zero_prob_errors() {
        assert!(zero_prob_exact(8, 4, 0).is_err());
        assert!(zero_prob_exact(8, 4, 9).is_err());
        assert!(zero_prob_exact(8, 9, 2).is_err());
    }

    #[test]
    fn zero_prob_with_no_ones_is_one() {
        for d in 1..=8 {
            assert_eq!(zero_prob_exact(8, 0, d).unwrap(), BigRational::one());
        }
    }

    #[test]
    fn degree_two_minimizes_over_one_to_seven() {
        let p2 = zero_prob_exact(8, 4, 2).unwrap();
        for d in 1..=7 {
            assert!(zero_prob_exact(8, 4, d).unwrap() >= p2);
        }
    }

    #[test]
    fn weighted_sums() {
        let dist = ideal_soliton(8).unwrap();
        let oracle = weighted_zero_prob(&dist, 8, 4).unwrap();
        assert!((oracle - 797.0 / 1680.0).abs() < 1e-15);
        let published = weighted_with_values(&dist, &PUBLISHED_ZERO_PROB_K8_ONES4).unwrap();
        assert!((published - 0.47321).abs() < 1e-5, "{published}");
        let top = DegreeDistribution::point_mass(8, 8).unwrap();
        assert_eq!(weighted_zero_prob(&top, 8, 6).unwrap(), 1.0);
        assert!(weighted_with_values(&dist, &[0.5; 7]).is_err());
        assert!(weighted_zero_prob(&dist, 9, 4).is_err());
    }

    #[test]
    fn table_flags_only_degree_four() {
        let t = ZeroProbTable::build(8, 4).unwrap();
        let flagged: Vec<usize> = t.discrepancies().map(|r| r.degree).collect();
        assert_eq!(flagged, vec![4]);
        let text = t.to_string();
        assert!(text.contains("0.54286"));
        assert!(text.contains("0.52857 *"));
        assert!(text.contains("weighted sum (oracle): 0.47440"));
        assert!(text.contains("weighted sum (paper column): 0.47321"));
        let other = ZeroProbTable::build(10, 3).unwrap();
        assert!(other.weighted_sum_published.is_none());
    }

    #[test]
    fn binomial_average_entropy() {
        assert_eq!(binomial_avg_entropy(1, 0.5).unwrap(), 0.0);
        assert_eq!(binomial_avg_entropy(50, 0.0).unwrap(), 0.0);
        assert_eq!(binomial_avg_entropy(50, 1.0).unwrap(), 0.0);
        // direct summation with exact binomials: 0.99274996335799...
        let b = binomial_avg_entropy(100, 0.5).unwrap();
        assert!((b - 0.992_749_963_357_998_5).abs() < 1e-12, "{b}");
        assert!(b < 1.0);
        // n = 2: weights 1/4, 1/2, 1/4 and H(1/2) = 1
        assert!((binomial_avg_entropy(2, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(binomial_avg_entropy(0, 0.5).is_err());
        assert!(binomial_avg_entropy(10, 2.0).is_err());
        // large n stays finite and below H(p)
        let big = binomial_avg_entropy(61408, 0.3).unwrap();
        assert!(big.is_finite() && big < binary_entropy(0.3).unwrap());
    }

    #[test]
    fn sigma_shift() {
        let h = sigma_shifted_entropy(4, 0.5).unwrap();
        assert!((h - binary_entropy(0.25).unwrap()).abs() < 1e-15);
        assert_eq!(sigma_shifted_entropy(10, 0.0).unwrap(), 0.0);
        let s = sigma_shifted_entropy(100, 0.5).unwrap();
        assert!((s - 0.992_774_453_987_808_3).abs() < 1e-12, "{s}");
        let b = binomial_avg_entropy(100, 0.5).unwrap();
        assert!((s - b).abs() > 1e-6);
        // n = 1, p = 1/2: shift of 1/2 lands exactly on 0
        assert_eq!(sigma_shifted_entropy(1, 0.5).unwrap(), 0.0);
        assert!(sigma_shifted_entropy(0, 0.5).is_err());
    }
}
