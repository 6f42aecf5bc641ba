//! Permutations of `{0,1}^k` induced by invertible encoding matrices, and
//! checks of the group axioms for invertible GF(2) matrices.
//!
//! Elements are numbered `1..=2^k`: vector `x` has index
//! `j = 1 + sum_m x(m) * 2^(m-1)`, so coordinate `m = 1` is the least
//! significant bit and the zero vector is element 1.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::matrixgen::{count_invertible, random_invertible};

/// Largest `k` for which a permutation list is materialized.
pub const DEFAULT_PERMUTATION_CAP: usize = 20;

/// A permutation of `1..=n` in list form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // 0-based images: images[j] is the image of element j + 1, minus one
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from its 1-based list representation.
    pub fn from_list(list: &[usize]) -> Result<Self> {
        let n = list.len();
        let mut seen = vec![false; n];
        let mut images = Vec::with_capacity(n);
        for (j, &v) in list.iter().enumerate() {
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::Domain(format!(
                    "list is not a bijection on 1..={n}: entry {} is {v}",
                    j + 1
                )));
            }
            images.push((v - 1) as u32);
        }
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of element `j` (1-based).
    pub fn image(&self, j: usize) -> usize {
        self.images[j - 1] as usize + 1
    }

    /// The list representation, 1-based.
    pub fn list(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &v)| j as u32 == v)
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.len()];
        self.images
            .iter()
            .all(|&v| (v as usize) < seen.len() && !std::mem::replace(&mut seen[v as usize], true))
    }

    /// `(self ∘ q)(j) = self(q(j))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.len() != q.len() {
            return Err(Error::Dimension(format!(
                "cannot compose permutations of {} and {} elements",
                self.len(),
                q.len()
            )));
        }
        Ok(Self {
            images: q.images.iter().map(|&v| self.images[v as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.len()];
        for (j, &v) in self.images.iter().enumerate() {
            images[v as usize] = j as u32;
        }
        Self { images }
    }

    pub fn cycles(&self) -> CycleDecomposition {
        cycles(self)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.list())
    }
}

/// List output: `n=<count>` on the first line, then the images separated by spaces.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.len())?;
        let mut first = true;
        for v in &self.images {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}", v + 1)?;
            first = false;
        }
        writeln!(f)
    }
}

/// Disjoint cycles, each starting at its smallest element, sorted by that element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    /// Order of the permutation: lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles
            .iter()
            .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }
}

/// One cycle per line in parentheses.
impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            let body: Vec<String> = c.iter().map(usize::to_string).collect();
            writeln!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

pub fn cycles(p: &Permutation) -> CycleDecomposition {
    let n = p.len();
    let mut visited = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start;
        while !visited[j] {
            visited[j] = true;
            cycle.push(j + 1);
            j = p.images[j] as usize;
        }
        out.push(cycle);
    }
    CycleDecomposition { cycles: out }
}

/// The permutation `x -> R x` on `{0,1}^k`, for `k` up to [`DEFAULT_PERMUTATION_CAP`].
pub fn induce_permutation(r: &BitMatrix) -> Result<Permutation> {
    induce_permutation_capped(r, DEFAULT_PERMUTATION_CAP)
}

pub fn induce_permutation_capped(r: &BitMatrix, cap: usize) -> Result<Permutation> {
    r.require_square("induce_permutation")?;
    let k = r.rows();
    if k > cap || k > 31 {
        return Err(Error::Cap { k, cap });
    }
    let rank = r.rank();
    if rank < k {
        return Err(Error::Singular { rank, k });
    }
    // R x is the XOR of the columns selected by x; build images in index order,
    // each from a previously computed index with its lowest bit cleared.
    let columns: Vec<u32> = (0..k).map(|m| r.column(m).to_index() as u32).collect();
    let n = 1usize << k;
    let mut images = vec![0u32; n];
    for j in 1..n {
        let low = j.trailing_zeros() as usize;
        images[j] = images[j & (j - 1)] ^ columns[low];
    }
    Ok(Permutation { images })
}

/// How [`verify_group`] chooses the elements it checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupCheckMode {
    /// Enumerate every invertible matrix (k <= 4); closure, identity and
    /// inverse are checked on all elements, associativity on sampled triples.
    Exhaustive,
    /// Check every axiom on randomly drawn invertible matrices.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReport {
    pub k: usize,
    pub mode: GroupCheckMode,
    /// Elements found by enumeration (exhaustive mode only).
    pub elements: Option<u64>,
    pub expected_order: BigUint,
    pub closure_checks: u64,
    pub identity_checks: u64,
    pub inverse_checks: u64,
    pub associativity_checks: u64,
}

impl fmt::Display for GroupReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            GroupCheckMode::Exhaustive => "exhaustive",
            GroupCheckMode::Sampled => "sampled",
        };
        writeln!(f, "group check: k={} mode={mode}", self.k)?;
        if let Some(e) = self.elements {
            writeln!(f, "elements: {e} (expected {})", self.expected_order)?;
        } else {
            writeln!(f, "expected order: {}", self.expected_order)?;
        }
        writeln!(f, "closure: ok ({} products)", self.closure_checks)?;
        writeln!(f, "identity: ok ({} elements)", self.identity_checks)?;
        writeln!(f, "inverse: ok ({} elements)", self.inverse_checks)?;
        writeln!(f, "associativity: ok ({} triples)", self.associativity_checks)
    }
}

fn matrix_from_code(k: usize, code: u64) -> BitMatrix {
    let mut m = BitMatrix::zeros(k, k);
    for bit in 0..k * k {
        if (code >> bit) & 1 == 1 {
            m.set(bit / k, bit % k, true);
        }
    }
    m
}

fn code_of(m: &BitMatrix) -> u64 {
    let k = m.rows();
    let mut code = 0u64;
    for l in 0..k {
        for c in 0..k {
            if m.get(l, c) {
                code |= 1 << (l * k + c);
            }
        }
    }
    code
}

/// Every invertible `k x k` matrix, for `k <= 4`, in increasing order of the
/// row-major bit code.
pub fn enumerate_invertible(k: usize) -> Result<Vec<BitMatrix>> {
    if k == 0 || k > 4 {
        return Err(Error::Domain(format!("exhaustive enumeration needs 1 <= k <= 4, got {k}")));
    }
    Ok((0u64..1 << (k * k))
        .map(|code| matrix_from_code(k, code))
        .filter(|m| m.rank() == k)
        .collect())
}

/// Product of two `k <= 4` matrices in row-major bit-code form.
fn small_matmul(k: usize, a: u64, b: u64) -> u64 {
    let row_mask = (1u64 << k) - 1;
    let mut out = 0u64;
    for l in 0..k {
        let a_row = (a >> (l * k)) & row_mask;
        let mut acc = 0u64;
        for j in 0..k {
            if (a_row >> j) & 1 == 1 {
                acc ^= (b >> (j * k)) & row_mask;
            }
        }
        out |= acc << (l * k);
    }
    out
}

fn axiom(axiom: &'static str, witness: String) -> Error {
    Error::GroupAxiom { axiom, witness }
}

/// Checks closure, identity, inverse and associativity for invertible
/// `k x k` matrices under GF(2) multiplication.
///
/// `samples` is the number of associativity triples in exhaustive mode and
/// the number of sampled elements (and triples) in sampled mode.
pub fn verify_group<R: Rng + ?Sized>(
    k: usize,
    mode: GroupCheckMode,
    samples: usize,
    rng: &mut R,
) -> Result<GroupReport> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let expected_order = count_invertible(k);
    let identity = BitMatrix::identity(k);
    let mut report = GroupReport {
        k,
        mode,
        elements: None,
        expected_order: expected_order.clone(),
        closure_checks: 0,
        identity_checks: 0,
        inverse_checks: 0,
        associativity_checks: 0,
    };

    let elements = match mode {
        GroupCheckMode::Exhaustive => {
            let all = enumerate_invertible(k)?;
            if BigUint::from(all.len()) != expected_order {
                return Err(axiom(
                    "order",
                    format!("enumerated {} invertible matrices, expected {expected_order}", all.len()),
                ));
            }
            report.elements = Some(all.len() as u64);

            let codes: Vec<u64> = all.iter().map(code_of).collect();
            let mut members = vec![false; 1usize << (k * k)];
            codes.iter().for_each(|&c| members[c as usize] = true);
            for &a in &codes {
                for &b in &codes {
                    let ab = small_matmul(k, a, b);
                    if !members[ab as usize] {
                        return Err(axiom(
                            "closure",
                            format!(
                                "product of {:?} and {:?} is singular",
                                matrix_from_code(k, a),
                                matrix_from_code(k, b)
                            ),
                        ));
                    }
                    report.closure_checks += 1;
                }
            }
            all
        }
        GroupCheckMode::Sampled => {
            let drawn = (0..samples.max(1))
                .map(|_| random_invertible(k, rng))
                .collect::<Result<Vec<_>>>()?;
            for pair in drawn.windows(2) {
                let ab = pair[0].matmul(&pair[1])?;
                if ab.rank() != k {
                    return Err(axiom(
                        "closure",
                        format!("product of {:?} and {:?} is singular", pair[0], pair[1]),
                    ));
                }
                report.closure_checks += 1;
            }
            drawn
        }
    };

    for a in &elements {
        if identity.matmul(a)? != *a || a.matmul(&identity)? != *a {
            return Err(axiom("identity", format!("I does not fix {a:?}")));
        }
        report.identity_checks += 1;
        let inv = a.invert().map_err(|_| axiom("inverse", format!("{a:?} has no inverse")))?;
        if !a.matmul(&inv)?.is_identity() || !inv.matmul(a)?.is_identity() {
            return Err(axiom("inverse", format!("A * A^-1 != I for {a:?}")));
        }
        report.inverse_checks += 1;
    }

    for _ in 0..samples {
        let a = elements.choose(rng).expect("at least one element");
        let b = elements.choose(rng).expect("at least one element");
        let c = elements.choose(rng).expect("at least one element");
        let left = a.matmul(b)?.matmul(c)?;
        let right = a.matmul(&b.matmul(c)?)?;
        if left != right {
            return Err(axiom("associativity", format!("(AB)C != A(BC) for A={a:?} B={b:?} C={c:?}")));
        }
        report.associativity_checks += 1;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub k: usize,
    /// Distinct permutations induced by invertible matrices.
    pub induced: u64,
    pub invertible_matrices: BigUint,
    /// `(2^k)!`, the size of the full symmetric group on `{0,1}^k`.
    pub all_permutations: BigUint,
}

impl CoverageReport {
    /// True when the induced permutations are a proper subset of all permutations.
    pub fn is_proper(&self) -> bool {
        BigUint::from(self.induced) < self.all_permutations
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.is_proper() { "<" } else { "=" };
        writeln!(
            f,
            "k={}: {} induced permutations {rel} {} permutations of {} elements",
            self.k,
            self.induced,
            self.all_permutations,
            1u64 << self.k
        )
    }
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Counts the distinct permutations induced by all invertible `k x k`
/// matrices (`k <= 3`) against `(2^k)!`.
pub fn permutation_coverage(k: usize) -> Result<CoverageReport> {
    if k == 0 || k > 3 {
        return Err(Error::Domain(format!("coverage is exhaustive and needs 1 <= k <= 3, got {k}")));
    }
    let distinct: HashSet<Permutation> = enumerate_invertible(k)?
        .iter()
        .map(induce_permutation)
        .collect::<Result<_>>()?;
    let report = CoverageReport {
        k,
        induced: distinct.len() as u64,
        invertible_matrices: count_invertible(k),
        all_permutations: factorial(1u64 << k),
    };
    if k >= 2 && !report.is_proper() {
        return Err(Error::Domain(format!("expected a proper subset for k={k}: {report}")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVector;
    use crate::matrixgen::bidiagonal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shear() -> BitMatrix {
        BitMatrix::from_nested(&[&[1, 1], &[0, 1]]).unwrap()
    }

    /// Brute force: index of R x for every x.
    fn brute_force_list(r: &BitMatrix) -> Vec<usize> {
        let k = r.rows();
        (0..1u64 << k)
            .map(|i| r.matvec(&BitVector::from_index(k, i)).unwrap().to_index() as usize + 1)
            .collect()
    }

    #[test]
    fn identity_induces_identity() {
        let p = induce_permutation(&BitMatrix::identity(2)).unwrap();
        assert_eq!(p.list(), vec![1, 2, 3, 4]);
        assert!(p.is_identity());
    }

    #[test]
    fn shear_swaps_two_elements() {
        // (0,0)->1, (1,0)->2, (0,1)->3, (1,1)->4; R(0,1) = (1,1)
        let p = induce_permutation(&shear()).unwrap();
        assert_eq!(p.list(), vec![1, 2, 4, 3]);
        assert_eq!(p.list(), brute_force_list(&shear()));
        let c = p.cycles();
        assert_eq!(c.cycles(), &[vec![1], vec![2], vec![3, 4]]);
        assert_eq!(c.order(), BigUint::from(2u32));
    }

    #[test]
    fn bidiagonal_permutation() {
        let r = bidiagonal(4).unwrap();
        let p = induce_permutation(&r).unwrap();
        assert_eq!(p.len(), 16);
        assert!(p.is_bijection());
        assert_eq!(p.list(), brute_force_list(&r));
        assert_eq!(p.cycles().order(), BigUint::from(4u32));
        assert_eq!(p.image(1), 1);
    }

    #[test]
    fn induce_errors() {
        let mut r = BitMatrix::identity(21);
        assert_eq!(induce_permutation(&r), Err(Error::Cap { k: 21, cap: 20 }));
        r = BitMatrix::zeros(3, 3);
        assert!(matches!(induce_permutation(&r), Err(Error::Singular { .. })));
        assert!(matches!(induce_permutation(&BitMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn identity_has_singleton_cycles() {
        let c = Permutation::identity(8).cycles();
        assert_eq!(c.len(), 8);
        assert!(c.lengths().iter().all(|&l| l == 1));
    }

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::from_list(&[2, 3, 1, 4]).unwrap();
        let q = Permutation::from_list(&[4, 1, 2, 3]).unwrap();
        assert_eq!(p.compose(&Permutation::identity(4)).unwrap(), p);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        // (p∘q)(1) = p(4) = 4
        assert_eq!(p.compose(&q).unwrap().image(1), 4);
        assert_eq!(p.compose(&q).unwrap().list(), vec![4, 2, 3, 1]);
        assert!(p.compose(&Permutation::identity(3)).is_err());
        assert!(Permutation::from_list(&[1, 1, 2]).is_err());
        assert!(Permutation::from_list(&[0, 1]).is_err());
    }

    #[test]
    fn text_output() {
        let p = induce_permutation(&shear()).unwrap();
        assert_eq!(p.to_string(), "n=4\n1 2 4 3\n");
        assert_eq!(p.cycles().to_string(), "(1)\n(2)\n(3 4)\n");
    }

    #[test]
    fn group_checks_small_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r1 = verify_group(1, GroupCheckMode::Exhaustive, 10, &mut rng).unwrap();
        assert_eq!(r1.elements, Some(1));
        let r2 = verify_group(2, GroupCheckMode::Exhaustive, 100, &mut rng).unwrap();
        assert_eq!(r2.elements, Some(6));
        assert_eq!(r2.closure_checks, 36);
        assert_eq!(r2.associativity_checks, 100);
        let r8 = verify_group(8, GroupCheckMode::Sampled, 50, &mut rng).unwrap();
        assert_eq!(r8.associativity_checks, 50);
        assert!(verify_group(5, GroupCheckMode::Exhaustive, 1, &mut rng).is_err());
    }

    #[test]
    fn small_matmul_agrees_with_bitmatrix() {
        let all = enumerate_invertible(3).unwrap();
        for a in all.iter().step_by(7) {
            for b in all.iter().step_by(5) {
                let expected = a.matmul(b).unwrap();
                assert_eq!(matrix_from_code(3, small_matmul(3, code_of(a), code_of(b))), expected);
            }
        }
    }

    #[test]
    fn coverage_examples() {
        let c1 = permutation_coverage(1).unwrap();
        assert_eq!((c1.induced, c1.all_permutations.clone()), (1, BigUint::from(2u32)));
        let c2 = permutation_coverage(2).unwrap();
        assert_eq!((c2.induced, c2.all_permutations.clone()), (6, BigUint::from(24u32)));
        assert!(c2.is_proper());
        assert!(permutation_coverage(4).is_err());
    }
}
