use fountain_core::codec::{cycle_decode, decode, encode, matrix_order, Codec};
use fountain_core::entropy::{
    binary_entropy, binomial_avg_entropy, to_f64, weighted_zero_prob, zero_prob_exact,
};
use fountain_core::gf2::{BitMatrix, BitVector};
use fountain_core::matrixgen::{gen_full_rank, ideal_soliton, random_invertible, GenConfig};
use fountain_core::permgroup::induce_permutation;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn invertible(k: usize, seed: u64) -> BitMatrix {
    random_invertible(k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = BitMatrix::zeros(rows, cols);
    for l in 0..rows {
        for c in 0..cols {
            m.set(l, c, rng.gen());
        }
    }
    m
}

fn random_vector(len: usize, seed: u64) -> BitVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BitVector::from_bits(&(0..len).map(|_| rng.gen::<bool>() as u8).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decode_inverts_encode(k in 1usize..=64, seed: u64, xseed: u64) {
        let r = invertible(k, seed);
        let x = random_vector(k, xseed);
        let y = encode(&r, &x).unwrap();
        prop_assert_eq!(&decode(&r, &y).unwrap(), &x);
        prop_assert_eq!(Codec::checked(r).unwrap().decode(&y).unwrap(), x);
    }

    #[test]
    fn inverse_is_two_sided(k in 1usize..=70, seed: u64) {
        let r = invertible(k, seed);
        let inv = r.invert().unwrap();
        prop_assert!(r.matmul(&inv).unwrap().is_identity());
        prop_assert!(inv.matmul(&r).unwrap().is_identity());
    }

    #[test]
    fn full_rank_iff_invertible(k in 1usize..=12, seed: u64) {
        let m = random_matrix(k, k, seed);
        prop_assert_eq!(m.rank() == k, m.invert().is_ok());
    }

    #[test]
    fn rank_bounded_by_dimensions(rows in 1usize..=20, cols in 1usize..=90, seed: u64) {
        let m = random_matrix(rows, cols, seed);
        prop_assert!(m.rank() <= rows.min(cols));
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn matmul_is_associative(k in 1usize..=70, s1: u64, s2: u64, s3: u64) {
        let (a, b, c) = (random_matrix(k, k, s1), random_matrix(k, k, s2), random_matrix(k, k, s3));
        prop_assert_eq!(
            a.matmul(&b).unwrap().matmul(&c).unwrap(),
            a.matmul(&b.matmul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn powers_add(k in 1usize..=16, seed: u64, e1 in 0u64..40, e2 in 0u64..40) {
        let m = random_matrix(k, k, seed);
        prop_assert_eq!(m.pow(e1 + e2).unwrap(), m.pow(e1).unwrap().matmul(&m.pow(e2).unwrap()).unwrap());
    }

    #[test]
    fn matrix_text_roundtrip(rows in 1usize..=10, cols in 1usize..=80, seed: u64) {
        let m = random_matrix(rows, cols, seed);
        prop_assert_eq!(BitMatrix::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn soliton_generation_is_full_rank(k in 1usize..=96, seed: u64) {
        let m = gen_full_rank(&ideal_soliton(k).unwrap(), &GenConfig::new(k, seed)).unwrap();
        prop_assert_eq!(m.rank(), k);
    }

    #[test]
    fn induced_permutation_fixes_zero_and_inverts(k in 1usize..=10, seed: u64) {
        let r = invertible(k, seed);
        let p = induce_permutation(&r).unwrap();
        prop_assert_eq!(p.image(1), 1);
        prop_assert!(p.is_bijection());
        prop_assert_eq!(induce_permutation(&r.invert().unwrap()).unwrap(), p.inverse());
    }

    #[test]
    fn cycle_decoding_matches_inverse(k in 1usize..=12, seed: u64, yseed: u64) {
        let r = invertible(k, seed);
        let order = matrix_order(&r, 1 << k).unwrap();
        prop_assert!(r.pow(order).unwrap().is_identity());
        let y = random_vector(k, yseed);
        prop_assert_eq!(cycle_decode(&r, &y, order, true).unwrap(), decode(&r, &y).unwrap());
    }

    #[test]
    fn zero_and_odd_parity_sum_to_one(k in 1usize..=40, ones_frac in 0.0f64..=1.0, deg_frac in 0.0f64..1.0) {
        let ones = (ones_frac * k as f64).floor() as usize;
        let degree = 1 + (deg_frac * k as f64).floor() as usize;
        let zero = zero_prob_exact(k, ones, degree).unwrap();
        // odd parity by the complementary sum, computed independently
        let binom = |n: usize, r: usize| -> num_bigint::BigInt {
            if r > n { return 0.into(); }
            (0..r).fold(num_bigint::BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
        };
        let odd: num_bigint::BigInt = (1..=degree.min(ones)).step_by(2)
            .map(|j| binom(ones, j) * binom(k - ones, degree - j)).sum();
        let odd = BigRational::new(odd, binom(k, degree));
        prop_assert_eq!(zero + odd, BigRational::one());
    }

    #[test]
    fn weighted_sum_is_a_convex_combination(k in 1usize..=30, ones_frac in 0.0f64..=1.0) {
        let ones = (ones_frac * k as f64).floor() as usize;
        let values: Vec<f64> = (1..=k).map(|d| to_f64(&zero_prob_exact(k, ones, d).unwrap())).collect();
        let w = weighted_zero_prob(&ideal_soliton(k).unwrap(), k, ones).unwrap();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(w >= lo - 1e-12 && w <= hi + 1e-12);
    }

    #[test]
    fn binomial_average_below_entropy(n in 2usize..=2000, p in 0.001f64..0.999) {
        let avg = binomial_avg_entropy(n, p).unwrap();
        prop_assert!(avg < binary_entropy(p).unwrap());
        prop_assert!(avg >= 0.0);
    }
}

#[test]
fn bijectivity_exhaustive_up_to_k12() {
    for k in [1usize, 5, 9, 12] {
        let r = invertible(k, k as u64);
        let mut seen = vec![false; 1 << k];
        for i in 0..1u64 << k {
            let y = encode(&r, &BitVector::from_index(k, i)).unwrap().to_index() as usize;
            assert!(!seen[y], "k={k}: output {y} repeated");
            seen[y] = true;
        }
    }
}

#[test]
fn invertible_fraction_matches_count_by_enumeration() {
    use fountain_core::matrixgen::count_invertible;
    use num_bigint::BigUint;
    for k in 1..=4usize {
        let invertible = (0u64..1 << (k * k))
            .filter(|&code| {
                let mut m = BitMatrix::zeros(k, k);
                for bit in 0..k * k {
                    m.set(bit / k, bit % k, (code >> bit) & 1 == 1);
                }
                m.rank() == k
            })
            .count();
        assert_eq!(BigUint::from(invertible), count_invertible(k));
    }
}

/// Row degrees of generated matrices follow the Ideal Soliton shape, up to
/// the bias introduced by rejecting dependent rows.
#[test]
fn generated_row_degrees_track_soliton() {
    let k = 32;
    let dist = ideal_soliton(k).unwrap();
    let mut hist = vec![0usize; k + 1];
    let matrices = 300;
    for seed in 0..matrices {
        let m = gen_full_rank(&dist, &GenConfig::new(k, seed)).unwrap();
        for l in 0..k {
            hist[m.row_weight(l)] += 1;
        }
    }
    let rows = (matrices as usize * k) as f64;
    for (d, &count) in hist.iter().enumerate().take(5).skip(1) {
        let freq = count as f64 / rows;
        let rho = dist.prob(d);
        assert!((freq - rho).abs() < 0.05, "degree {d}: {freq} vs {rho}");
    }
}
