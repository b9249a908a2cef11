use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// Which coefficient ring results are reported over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Coefficients {
    #[default]
    Integers,
    /// Tensor with Q: torsion is dropped, only ranks remain.
    Rationals,
}

impl Coefficients {
    pub fn apply(self, g: &FgAbGroup) -> FgAbGroup {
        match self {
            Coefficients::Integers => g.clone(),
            Coefficients::Rationals => g.rationalized(),
        }
    }
}

/// A finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` in
/// invariant-factor form (`t_1 | t_2 | ... | t_k`, every `t_i ≥ 2`).
///
/// Elements are written in coordinates: the first `k` entries are the
/// torsion components (reduced into `[0, t_i)`), followed by `rank` free
/// components.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        if let Some(t) = torsion.iter().find(|t| **t < BigInt::from(2)) {
            return Err(Error::InvalidGroup(format!(
                "torsion coefficient {t} is smaller than 2"
            )));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidGroup(
                "torsion coefficients do not form a divisibility chain".into(),
            ));
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn zero() -> Self {
        FgAbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = ±1` the zero group.
    pub fn cyclic(n: i64) -> Self {
        Self::from_diagonal(&[BigInt::from(n)], 0)
    }

    /// The group `Z^extra_free ⊕ (⊕ Z/d_i)` for arbitrary integers `d_i`,
    /// normalized to invariant-factor form.
    pub fn from_diagonal(diag: &[BigInt], extra_free: usize) -> Self {
        let m = IntMatrix::diagonal(diag.len(), diag.len(), diag);
        let mut g = cokernel(&m);
        g.rank += extra_free;
        g
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn num_generators(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn rationalized(&self) -> Self {
        FgAbGroup::free(self.rank)
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut diag: Vec<BigInt> = self.torsion.clone();
        diag.extend(other.torsion.iter().cloned());
        FgAbGroup::from_diagonal(&diag, self.rank + other.rank)
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t)
    }

    /// Relation matrix of the coordinate presentation: `t_i` on the diagonal
    /// of the first `k` columns.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.num_generators();
        let mut m = IntMatrix::zeros(n, self.torsion.len());
        for (i, t) in self.torsion.iter().enumerate() {
            m[(i, i)] = t.clone();
        }
        m
    }

    /// Reduces torsion coordinates into `[0, t_i)` in place.
    pub fn reduce(&self, coords: &mut [BigInt]) {
        for (c, t) in coords.iter_mut().zip(&self.torsion) {
            *c = c.mod_floor(t);
        }
    }

    /// Reduces every column of a matrix whose rows are this group's coordinates.
    pub fn reduce_columns(&self, m: &IntMatrix) -> IntMatrix {
        let mut out = m.clone();
        for (i, t) in self.torsion.iter().enumerate() {
            for j in 0..out.cols() {
                let v = out[(i, j)].mod_floor(t);
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn is_zero_element(&self, coords: &[BigInt]) -> bool {
        let mut c = coords.to_vec();
        self.reduce(&mut c);
        c.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            if run == 1 {
                parts.push(format!("Z/{t}"));
            } else {
                parts.push(format!("(Z/{t})^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Isomorphism class of `Z^rows / column span(M)`.
pub fn cokernel(m: &IntMatrix) -> FgAbGroup {
    let snf = smith_normal_form(m);
    let torsion = snf
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    FgAbGroup {
        rank: m.rows() - snf.rank,
        torsion,
    }
}

pub(crate) fn check_hom_shape(source: &FgAbGroup, target: &FgAbGroup, m: &IntMatrix) -> Result<()> {
    if m.rows() != target.num_generators() || m.cols() != source.num_generators() {
        return Err(Error::Shape(format!(
            "homomorphism matrix is {}x{} but groups need {}x{}",
            m.rows(),
            m.cols(),
            target.num_generators(),
            source.num_generators()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_examples() {
        assert_eq!(
            cokernel(&IntMatrix::from_rows(&[vec![2]])),
            FgAbGroup::new(0, vec![BigInt::from(2)]).unwrap()
        );
        assert_eq!(cokernel(&IntMatrix::zeros(3, 0)), FgAbGroup::free(3));
        assert_eq!(
            cokernel(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]])),
            FgAbGroup::new(0, vec![BigInt::from(2), BigInt::from(4)]).unwrap()
        );
    }

    #[test]
    fn normalization_and_display() {
        let g = FgAbGroup::from_diagonal(&[BigInt::from(2), BigInt::from(3), BigInt::from(1)], 1);
        assert_eq!(g.to_string(), "Z + Z/6");
        let h = FgAbGroup::from_diagonal(&[BigInt::from(2), BigInt::from(2), BigInt::from(0)], 0);
        assert_eq!(h.to_string(), "Z + (Z/2)^2");
        assert_eq!(FgAbGroup::zero().to_string(), "0");
        assert_eq!(FgAbGroup::cyclic(-1), FgAbGroup::zero());
        assert_eq!(FgAbGroup::cyclic(0), FgAbGroup::free(1));
    }

    #[test]
    fn rejects_bad_chains() {
        assert!(FgAbGroup::new(0, vec![BigInt::from(2), BigInt::from(3)]).is_err());
        assert!(FgAbGroup::new(0, vec![BigInt::from(1)]).is_err());
        assert!(FgAbGroup::new(1, vec![BigInt::from(2), BigInt::from(6)]).is_ok());
    }

    #[test]
    fn rationals_forget_torsion() {
        let g = FgAbGroup::new(2, vec![BigInt::from(2)]).unwrap();
        assert_eq!(Coefficients::Rationals.apply(&g), FgAbGroup::free(2));
        assert_eq!(Coefficients::Integers.apply(&g), g);
    }
}
