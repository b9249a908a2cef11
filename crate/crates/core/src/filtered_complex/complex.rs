use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::exact_algebra::{IntMatrix, Subgroup, Subquotient};

/// A bounded cochain complex `K^{n_min} → ... → K^{n_max}` of free modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    n_min: i64,
    dims: Vec<usize>,
    // differentials[i] = d^{n_min + i}: K^{n_min+i} → K^{n_min+i+1}; the last
    // degree maps to zero and is not stored.
    differentials: Vec<IntMatrix>,
}

impl CochainComplex {
    /// `differentials` must hold `dims.len() - 1` matrices (or none when
    /// `dims` is empty), with `d^n` of shape `dims[n+1] × dims[n]`.
    pub fn new(n_min: i64, dims: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if differentials.len() != dims.len().saturating_sub(1) {
            return Err(Error::Shape(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.rows() != dims[i + 1] || d.cols() != dims[i] {
                return Err(Error::Shape(format!(
                    "d^{} is {}x{}, expected {}x{}",
                    n_min + i as i64,
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for (i, w) in differentials.windows(2).enumerate() {
            if !(&w[1] * &w[0]).is_zero() {
                return Err(Error::NotAComplex {
                    degree: n_min + i as i64,
                });
            }
        }
        Ok(CochainComplex {
            n_min,
            dims,
            differentials,
        })
    }

    pub fn empty() -> Self {
        CochainComplex {
            n_min: 0,
            dims: Vec::new(),
            differentials: Vec::new(),
        }
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> RangeInclusive<i64> {
        self.n_min()..=self.n_max()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Rank of `K^n` (zero outside the degree range).
    pub fn dim(&self, n: i64) -> usize {
        self.index(n).map_or(0, |i| self.dims[i])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn index(&self, n: i64) -> Option<usize> {
        if n < self.n_min || n > self.n_max() {
            None
        } else {
            Some((n - self.n_min) as usize)
        }
    }

    /// `d^n: K^n → K^{n+1}`, a zero matrix of the right shape where the
    /// complex has no stored differential.
    pub fn differential(&self, n: i64) -> IntMatrix {
        match self.index(n) {
            Some(i) if i < self.differentials.len() => self.differentials[i].clone(),
            _ => IntMatrix::zeros(self.dim(n + 1), self.dim(n)),
        }
    }

    pub fn cocycles(&self, n: i64) -> Subgroup {
        Subgroup::kernel(&self.differential(n))
    }

    pub fn coboundaries(&self, n: i64) -> Subgroup {
        Subgroup::full(self.dim(n - 1)).image(&self.differential(n - 1))
    }

    /// `H^n(K)` with coordinates.
    pub fn cohomology(&self, n: i64) -> Subquotient {
        Subquotient::new(self.cocycles(n), self.coboundaries(n)).expect("d∘d = 0")
    }

    /// Direct sum of two complexes over the union of their degree ranges.
    pub fn direct_sum(&self, other: &CochainComplex) -> CochainComplex {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max().max(other.n_max());
        let dims: Vec<usize> = (lo..=hi).map(|n| self.dim(n) + other.dim(n)).collect();
        let diffs = (lo..hi)
            .map(|n| block_diagonal(&self.differential(n), &other.differential(n)))
            .collect();
        CochainComplex::new(lo, dims, diffs).expect("direct sum of complexes")
    }
}

pub(crate) fn block_diagonal(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    IntMatrix::from_fn(a.rows() + b.rows(), a.cols() + b.cols(), |i, j| {
        if i < a.rows() && j < a.cols() {
            a[(i, j)].clone()
        } else if i >= a.rows() && j >= a.cols() {
            b[(i - a.rows(), j - a.cols())].clone()
        } else {
            0.into()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::FgAbGroup;

    #[test]
    fn rejects_non_complexes() {
        let d = IntMatrix::from_rows(&[vec![1]]);
        let r = CochainComplex::new(0, vec![1, 1, 1], vec![d.clone(), d]);
        assert_eq!(r, Err(Error::NotAComplex { degree: 0 }));
    }

    #[test]
    fn cohomology_of_multiplication_by_two() {
        let k = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        assert!(k.cohomology(0).group().is_zero());
        assert_eq!(k.cohomology(1).group(), &FgAbGroup::cyclic(2));
        assert!(k.cohomology(5).group().is_zero());
    }
}
