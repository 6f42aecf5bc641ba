//! Encoding `y = R x`, inverse decoding `x = R^-1 y`, and cycle decoding.
//!
//! Cycle decoding uses the fact that an invertible `R` has finite order `e`
//! (the least `e >= 1` with `R^e = I`), so `R^(e-1)` is the inverse and
//! decoding amounts to `e - 1` further applications of the encoder.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// `y = R x`. `r` must be square.
pub fn encode(r: &BitMatrix, x: &BitVector) -> Result<BitVector> {
    r.require_square("encode")?;
    r.matvec(x)
}

/// `x = R^-1 y`. Fails with [`Error::Singular`] when `r` has no inverse.
pub fn decode(r: &BitMatrix, y: &BitVector) -> Result<BitVector> {
    if r.cols() != y.len() {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, vector has length {}",
            r.rows(),
            r.cols(),
            y.len()
        )));
    }
    r.invert()?.matvec(y)
}

/// An encoding matrix together with its lazily computed inverse.
///
/// The inverse is computed at most once, on the first decode, and shared
/// read-only afterwards.
#[derive(Debug)]
pub struct Codec {
    matrix: BitMatrix,
    inverse: OnceLock<std::result::Result<BitMatrix, Error>>,
}

impl Codec {
    /// Wraps a square matrix without checking its rank.
    pub fn new(matrix: BitMatrix) -> Result<Self> {
        matrix.require_square("codec")?;
        Ok(Self {
            matrix,
            inverse: OnceLock::new(),
        })
    }

    /// Wraps a matrix after confirming it is invertible; the inverse is
    /// computed eagerly.
    pub fn checked(matrix: BitMatrix) -> Result<Self> {
        let codec = Self::new(matrix)?;
        codec.inverse()?;
        Ok(codec)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn inverse(&self) -> Result<&BitMatrix> {
        self.inverse
            .get_or_init(|| self.matrix.invert())
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn encode(&self, x: &BitVector) -> Result<BitVector> {
        self.matrix.matvec(x)
    }

    pub fn decode(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.k() {
            return Err(Error::Dimension(format!(
                "codec has k = {}, vector has length {}",
                self.k(),
                y.len()
            )));
        }
        self.inverse()?.matvec(y)
    }
}

/// Least `e >= 1` with `R^e = I`, by iterated multiplication.
///
/// Fails with [`Error::OrderCap`] once `e` would exceed `cap`, and with
/// [`Error::Singular`] for a singular matrix (which has no finite order).
pub fn matrix_order(r: &BitMatrix, cap: u64) -> Result<u64> {
    r.require_square("matrix_order")?;
    if cap == 0 {
        return Err(Error::Domain("order cap must be >= 1".into()));
    }
    let rank = r.rank();
    if rank < r.rows() {
        return Err(Error::Singular { rank, k: r.rows() });
    }
    let mut power = r.clone();
    let mut e = 1u64;
    while !power.is_identity() {
        if e >= cap {
            return Err(Error::OrderCap { cap });
        }
        power = power.matmul(r)?;
        e += 1;
    }
    Ok(e)
}

/// Decodes by applying `R` another `order - 1` times: `x = R^(order-1) y`.
///
/// With `verify` set, the result is re-encoded and compared with `y`; a
/// mismatch (for example from a wrong `order`) yields [`Error::Verify`].
pub fn cycle_decode(r: &BitMatrix, y: &BitVector, order: u64, verify: bool) -> Result<BitVector> {
    r.require_square("cycle_decode")?;
    if order == 0 {
        return Err(Error::Domain("order must be >= 1".into()));
    }
    let x = r.pow(order - 1)?.matvec(y)?;
    if verify && r.matvec(&x)? != *y {
        return Err(Error::Verify);
    }
    Ok(x)
}

/// Applies the bidiagonal transform without materializing the matrix:
/// `y_l = x_l XOR x_(l+1)` and the last bit passes through.
///
/// Equal to `encode(&bidiagonal(n)?, x)` but linear in `n`.
pub fn encode_bidiagonal(x: &BitVector) -> BitVector {
    let words = x.words();
    let shifted = words.iter().enumerate().map(|(i, &w)| {
        let carry = words.get(i + 1).map_or(0, |&next| next << 63);
        w ^ ((w >> 1) | carry)
    });
    BitVector::from_words(x.len(), shifted.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixgen::bidiagonal;

    fn shear() -> BitMatrix {
        BitMatrix::from_nested(&[&[1, 1], &[0, 1]]).unwrap()
    }

    #[test]
    fn encode_examples() {
        let x = BitVector::from_bits(&[1, 0, 1, 0]);
        assert_eq!(encode(&BitMatrix::identity(4), &x).unwrap(), x);
        let r4 = bidiagonal(4).unwrap();
        assert_eq!(encode(&r4, &x).unwrap(), BitVector::from_bits(&[1, 1, 1, 0]));
        assert!(matches!(encode(&r4, &BitVector::zeros(3)), Err(Error::Dimension(_))));
        assert!(matches!(
            encode(&BitMatrix::zeros(2, 3), &BitVector::zeros(3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn decode_examples() {
        let r4 = bidiagonal(4).unwrap();
        let y = BitVector::from_bits(&[0, 0, 0, 1]);
        assert_eq!(decode(&r4, &y).unwrap(), BitVector::ones(4));
        assert_eq!(decode(&BitMatrix::identity(4), &y).unwrap(), y);
        let singular = BitMatrix::from_nested(&[&[1, 1], &[1, 1]]).unwrap();
        assert!(matches!(decode(&singular, &BitVector::zeros(2)), Err(Error::Singular { .. })));
    }

    #[test]
    fn codec_caches_inverse_and_reports_singular() {
        let c = Codec::new(bidiagonal(6).unwrap()).unwrap();
        let x = BitVector::from_bits(&[1, 0, 0, 1, 1, 0]);
        let y = c.encode(&x).unwrap();
        assert_eq!(c.decode(&y).unwrap(), x);
        assert!(std::ptr::eq(c.inverse().unwrap(), c.inverse().unwrap()));

        let singular = BitMatrix::from_nested(&[&[1, 1], &[1, 1]]).unwrap();
        assert!(Codec::checked(singular.clone()).is_err());
        let lazy = Codec::new(singular).unwrap();
        assert!(matches!(lazy.decode(&BitVector::zeros(2)), Err(Error::Singular { .. })));
        assert!(Codec::new(BitMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(matrix_order(&BitMatrix::identity(5), 10).unwrap(), 1);
        assert_eq!(matrix_order(&shear(), 10).unwrap(), 2);
        assert_eq!(matrix_order(&bidiagonal(4).unwrap(), 16).unwrap(), 4);
        assert_eq!(matrix_order(&bidiagonal(4).unwrap(), 3), Err(Error::OrderCap { cap: 3 }));
        assert!(matches!(
            matrix_order(&BitMatrix::zeros(2, 2), 10),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn cycle_decode_examples() {
        let y = BitVector::from_bits(&[1, 1]);
        assert_eq!(cycle_decode(&BitMatrix::identity(2), &y, 1, true).unwrap(), y);
        let x = cycle_decode(&shear(), &y, 2, true).unwrap();
        assert_eq!(x, BitVector::from_bits(&[0, 1]));
        assert_eq!(encode(&shear(), &x).unwrap(), y);

        let r4 = bidiagonal(4).unwrap();
        for i in 0..16 {
            let y = BitVector::from_index(4, i);
            assert_eq!(cycle_decode(&r4, &y, 4, true).unwrap(), decode(&r4, &y).unwrap());
        }
    }

    #[test]
    fn cycle_decode_wrong_order_fails_verification() {
        let r4 = bidiagonal(4).unwrap();
        let y = BitVector::from_bits(&[0, 0, 0, 1]);
        assert_eq!(cycle_decode(&r4, &y, 3, true), Err(Error::Verify));
        assert!(cycle_decode(&r4, &y, 3, false).is_ok());
    }

    #[test]
    fn structured_bidiagonal_matches_dense() {
        for n in [1usize, 2, 3, 4, 63, 64, 65, 127, 128, 129, 300] {
            let dense = bidiagonal(n).unwrap();
            for pattern in 0..5u64 {
                let x = BitVector::from_bits(
                    &(0..n).map(|i| (i as u64 * 7 + pattern * 13).is_multiple_of(pattern + 2) as u8).collect::<Vec<_>>(),
                );
                assert_eq!(encode_bidiagonal(&x), dense.matvec(&x).unwrap(), "n={n} pattern={pattern}");
            }
        }
    }
}
