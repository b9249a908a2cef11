use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Column-style Hermite normal form of a lattice in `Z^n`.
///
/// The basis columns are in echelon form: column `j` vanishes above its pivot
/// row `pivots[j]`, pivot rows strictly increase, pivots are positive and the
/// entries left of a pivot in its row lie in `[0, pivot)`. The form is unique
/// for the lattice spanned by the input columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl HermiteBasis {
    pub fn new(generators: &IntMatrix) -> Self {
        let mut a = generators.clone();
        let (n, k) = (a.rows(), a.cols());
        let mut pivots = Vec::new();
        let mut pc = 0;
        for row in 0..n {
            if pc >= k {
                break;
            }
            loop {
                let mut best: Option<(usize, BigInt)> = None;
                for j in pc..k {
                    let x = a[(row, j)].abs();
                    if !x.is_zero() && best.as_ref().is_none_or(|(_, b)| x < *b) {
                        best = Some((j, x));
                    }
                }
                let Some((j, _)) = best else { break };
                a.swap_cols(pc, j);
                let mut clean = true;
                for j in pc + 1..k {
                    if a[(row, j)].is_zero() {
                        continue;
                    }
                    let q = a[(row, j)].div_floor(&a[(row, pc)]);
                    a.add_col_multiple(j, pc, &-q);
                    if !a[(row, j)].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if a[(row, pc)].is_zero() {
                continue;
            }
            if a[(row, pc)].is_negative() {
                a.negate_col(pc);
            }
            for j in 0..pc {
                let q = a[(row, j)].div_floor(&a[(row, pc)]);
                a.add_col_multiple(j, pc, &-q);
            }
            pivots.push(row);
            pc += 1;
        }
        let basis = a.select_columns(&(0..pc).collect::<Vec<_>>());
        HermiteBasis { basis, pivots }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is not in the lattice.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(x.len(), self.basis.rows(), "ambient dimension mismatch");
        let mut rest = x.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (j, &r) in self.pivots.iter().enumerate() {
            if rest[..r].iter().any(|v| !v.is_zero()) {
                return None;
            }
            let (c, rem) = rest[r].div_rem(&self.basis[(r, j)]);
            if !rem.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (i, v) in rest.iter_mut().enumerate().skip(r) {
                    let b = &self.basis[(i, j)];
                    if !b.is_zero() {
                        *v -= &c * b;
                    }
                }
            }
            coords.push(c);
        }
        if rest.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coordinates(x).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_for_equal_lattices() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2], vec![1, 1]]);
        let b = IntMatrix::from_rows(&[vec![2, 2, 4], vec![0, 2, 2], vec![1, 2, 3]]);
        assert_eq!(HermiteBasis::new(&a), HermiteBasis::new(&b));
    }

    #[test]
    fn membership_and_coordinates() {
        let h = HermiteBasis::new(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 2], vec![0, 0]]));
        let x: Vec<BigInt> = [3, 4, 0].iter().map(|&v| BigInt::from(v)).collect();
        let c = h.coordinates(&x).unwrap();
        assert_eq!(h.basis().mul_vec(&c), x);
        assert!(!h.contains(&[BigInt::from(0), BigInt::from(1), BigInt::from(0)]));
        assert!(!h.contains(&[BigInt::from(0), BigInt::from(0), BigInt::from(1)]));
    }
}
