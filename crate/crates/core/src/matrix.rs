//! Dense complex square matrices, the carrier of all spinor-bundle
//! endomorphisms (`c(v)`, the grading, perturbation forms).
//!
//! Sides are tiny (2^(n/2) ≤ 64), so a row-major `Vec<Complex64>` with
//! straightforward O(side³) products is all that is ever needed.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Row-major complex square matrix. Immutable in spirit: every operation
/// returns a fresh value.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    side: usize,
    entries: Vec<Complex64>,
}

impl std::fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "SquareMatrix(side={})", self.side)?;
        for r in 0..self.side {
            write!(f, "  [")?;
            for c in 0..self.side {
                let z = self.get(r, c);
                write!(f, " {:+.3}{:+.3}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl SquareMatrix {
    pub fn zeros(side: usize) -> Self {
        assert!(side > 0, "matrix side must be positive");
        SquareMatrix {
            side,
            entries: vec![Complex64::new(0.0, 0.0); side * side],
        }
    }

    pub fn identity(side: usize) -> Self {
        let mut m = Self::zeros(side);
        for i in 0..side {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let side = rows.len();
        let mut m = Self::zeros(side);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), side, "ragged rows");
            for (c, z) in row.iter().enumerate() {
                m.set(r, c, *z);
            }
        }
        m
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.side + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.entries[r * self.side + c] = z;
    }

    pub fn scale(&self, z: Complex64) -> Self {
        SquareMatrix {
            side: self.side,
            entries: self.entries.iter().map(|e| e * z).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.side).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude; the norm used for zero pruning and
    /// tolerance checks throughout.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Kronecker product, used by the iterated tensor construction of the
    /// gamma matrices.
    pub fn kron(&self, other: &SquareMatrix) -> SquareMatrix {
        let n = self.side * other.side;
        let mut out = SquareMatrix::zeros(n);
        for r1 in 0..self.side {
            for c1 in 0..self.side {
                let a = self.get(r1, c1);
                for r2 in 0..other.side {
                    for c2 in 0..other.side {
                        out.set(
                            r1 * other.side + r2,
                            c1 * other.side + c2,
                            a * other.get(r2, c2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn approx_eq(&self, other: &SquareMatrix, tol: f64) -> bool {
        self.side == other.side && (self - other).max_abs() <= tol
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.side, rhs.side, "matrix sides disagree in addition");
        SquareMatrix {
            side: self.side,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.side, rhs.side, "matrix sides disagree in subtraction");
        SquareMatrix {
            side: self.side,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.side, rhs.side, "matrix sides disagree in product");
        let n = self.side;
        let mut out = SquareMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + a * rhs.get(k, c));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_trace() {
        let a = SquareMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]);
        let b = SquareMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let ab = &a * &b;
        assert_eq!(ab.get(0, 0), c(2.0, 0.0));
        assert_eq!(ab.get(0, 1), c(1.0, 0.0));
        assert_eq!(ab.get(1, 1), c(0.0, 1.0));
        assert_eq!(ab.trace(), c(2.0, 1.0));
    }

    #[test]
    fn kron_sides() {
        let a = SquareMatrix::identity(2);
        let b = SquareMatrix::identity(4);
        assert_eq!(a.kron(&b).side(), 8);
    }

    #[test]
    #[should_panic(expected = "sides disagree")]
    fn mismatched_product_panics() {
        let a = SquareMatrix::identity(2);
        let b = SquareMatrix::identity(4);
        let _ = &a * &b;
    }
}
