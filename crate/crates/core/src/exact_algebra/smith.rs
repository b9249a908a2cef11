//! Smith normal form by elementary row and column operations.
//!
//! Pivoting always moves the entry of least nonzero absolute value into the
//! pivot position, so every reduction round strictly shrinks the pivot and
//! the loop terminates. Entry growth is not controlled beyond that, which is
//! fine for the matrix sizes this crate works with.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    /// Inverse of `u`, tracked alongside it.
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Columns of `V` spanning the integer kernel of the input.
    pub fn kernel_basis(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.rank..self.v.cols()).collect();
        self.v.select_columns(&idx)
    }

    /// A basis of the column span of the input: `d_i · U⁻¹ e_i`.
    pub fn image_basis(&self) -> IntMatrix {
        let mut b = self.u_inv.select_columns(&(0..self.rank).collect::<Vec<_>>());
        for j in 0..self.rank {
            let d = self.d[(j, j)].clone();
            for i in 0..b.rows() {
                b[(i, j)] *= &d;
            }
        }
        b
    }

    pub fn into_parts(self) -> (IntMatrix, IntMatrix, IntMatrix) {
        (self.u, self.d, self.v)
    }
}

fn min_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let is_one = ax.is_one();
                best = Some((i, j, ax));
                if is_one {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// `row[target] += q · row[source]`
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        self.a.add_row_multiple(target, source, q);
        self.u.add_row_multiple(target, source, q);
        self.u_inv.add_col_multiple(source, target, &-q);
    }

    /// `col[target] += q · col[source]`
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        self.a.add_col_multiple(target, source, q);
        self.v.add_col_multiple(target, source, q);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Clears row and column `t` off the pivot. Returns false if some
    /// remainder was left behind (the pivot must then be re-chosen).
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.a.rows() {
            if self.a[(i, t)].is_zero() {
                continue;
            }
            let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
            self.add_row(i, t, &-q);
            if !self.a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.a.cols() {
            if self.a[(t, j)].is_zero() {
                continue;
            }
            let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
            self.add_col(j, t, &-q);
            if !self.a[(t, j)].is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn repivot_cross(&mut self, t: usize) {
        let mut best = (t, t, self.a[(t, t)].abs());
        for i in t + 1..self.a.rows() {
            let x = self.a[(i, t)].abs();
            if !x.is_zero() && x < best.2 {
                best = (i, t, x);
            }
        }
        for j in t + 1..self.a.cols() {
            let x = self.a[(t, j)].abs();
            if !x.is_zero() && x < best.2 {
                best = (t, j, x);
            }
        }
        self.swap_rows(t, best.0);
        self.swap_cols(t, best.1);
    }

    fn non_dividing_entry(&self, t: usize) -> Option<usize> {
        let p = &self.a[(t, t)];
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !self.a[(i, j)].is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Smith normal form `U · M · V = D`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&r.a, t) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            if !r.clear_cross(t) {
                r.repivot_cross(t);
                continue;
            }
            match r.non_dividing_entry(t) {
                Some(i) => {
                    let one = BigInt::one();
                    r.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition {
        u: r.u,
        u_inv: r.u_inv,
        d: r.a,
        v: r.v,
        rank: t,
    }
}

/// Integer solution `x` of `m · x = y`, if one exists.
pub fn solve(m: &IntMatrix, y: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(y.len(), m.rows(), "right-hand side length mismatch");
    let snf = smith_normal_form(m);
    let uy = snf.u.mul_vec(y);
    let mut w = vec![BigInt::zero(); m.cols()];
    for (i, val) in uy.iter().enumerate() {
        if i < snf.rank {
            let (q, rem) = val.div_rem(&snf.d[(i, i)]);
            if !rem.is_zero() {
                return None;
            }
            w[i] = q;
        } else if !val.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn zero_matrix_is_already_reduced() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert_eq!(s.d, IntMatrix::zeros(2, 3));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_invariants() {
        // gcd of entries is 2 and |det| = 8, so the factors are (2, 4).
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn divisibility_fixup() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let s = check(&m);
        let k = s.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        let y = vec![BigInt::from(5), BigInt::from(10)];
        let x = solve(&m, &y).unwrap();
        assert_eq!(m.mul_vec(&x), y);
        assert!(solve(&m, &[BigInt::from(1), BigInt::from(1)]).is_none());
        let two = IntMatrix::from_rows(&[vec![2]]);
        assert!(solve(&two, &[BigInt::from(3)]).is_none());
    }
}
