use std::ops::RangeInclusive;

use super::CochainComplex;
use crate::error::{Error, Result};
use crate::exact_algebra::Subgroup;

/// A decreasing filtration `K^n = F^{p_min} K^n ⊇ ... ⊇ F^{p_max} K^n ⊇ 0`
/// by subgroups, stable under the differential.
///
/// Levels below `p_min` are the whole module and levels above `p_max` vanish,
/// so the filtration is biregular by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    p_min: i64,
    p_max: i64,
    n_min: i64,
    dims: Vec<usize>,
    // levels[n - n_min][p - p_min]
    levels: Vec<Vec<Subgroup>>,
}

impl Filtration {
    /// `levels[i][j]` is `F^{p_min + j} K^{n_min + i}`; every degree must list
    /// `p_max - p_min + 1` subgroups.
    pub fn new(
        complex: &CochainComplex,
        p_min: i64,
        p_max: i64,
        levels: Vec<Vec<Subgroup>>,
    ) -> Result<Self> {
        if p_max < p_min {
            return Err(Error::InvalidFiltration(format!(
                "empty level range [{p_min}, {p_max}]"
            )));
        }
        if levels.len() != complex.dims().len() {
            return Err(Error::InvalidFiltration(format!(
                "{} degrees of levels for a complex with {} degrees",
                levels.len(),
                complex.dims().len()
            )));
        }
        let width = (p_max - p_min + 1) as usize;
        for (i, lv) in levels.iter().enumerate() {
            let n = complex.n_min() + i as i64;
            if lv.len() != width {
                return Err(Error::InvalidFiltration(format!(
                    "degree {n} has {} levels, expected {width}",
                    lv.len()
                )));
            }
            if let Some(s) = lv.iter().find(|s| s.ambient() != complex.dim(n)) {
                return Err(Error::InvalidFiltration(format!(
                    "level in degree {n} lives in Z^{} but K^{n} has rank {}",
                    s.ambient(),
                    complex.dim(n)
                )));
            }
        }
        let f = Filtration {
            p_min,
            p_max,
            n_min: complex.n_min(),
            dims: complex.dims().to_vec(),
            levels,
        };
        f.validate(complex)?;
        Ok(f)
    }

    /// `G^0 = K`, `G^1 = 0`.
    pub fn trivial(complex: &CochainComplex) -> Self {
        let levels = complex
            .dims()
            .iter()
            .map(|&d| vec![Subgroup::full(d)])
            .collect();
        Filtration {
            p_min: 0,
            p_max: 0,
            n_min: complex.n_min(),
            dims: complex.dims().to_vec(),
            levels,
        }
    }

    /// `F^p K^n` spanned by the basis vectors `e_i` of `K^n` with
    /// `levels[n - n_min][i] ≥ p`.
    pub fn basis_aligned(complex: &CochainComplex, levels: &[Vec<i64>]) -> Result<Self> {
        if levels.len() != complex.dims().len() {
            return Err(Error::InvalidFiltration("one level list per degree is required".into()));
        }
        for (i, lv) in levels.iter().enumerate() {
            if lv.len() != complex.dims()[i] {
                return Err(Error::InvalidFiltration(format!(
                    "degree {} has {} basis levels for rank {}",
                    complex.n_min() + i as i64,
                    lv.len(),
                    complex.dims()[i]
                )));
            }
        }
        let all = levels.iter().flatten();
        let p_min = all.clone().copied().min().unwrap_or(0);
        let p_max = all.copied().max().unwrap_or(0);
        let subgroups = levels
            .iter()
            .map(|lv| {
                (p_min..=p_max)
                    .map(|p| {
                        Subgroup::coordinate(
                            lv.len(),
                            lv.iter().enumerate().filter(|(_, &l)| l >= p).map(|(i, _)| i),
                        )
                    })
                    .collect()
            })
            .collect();
        Filtration::new(complex, p_min, p_max, subgroups)
    }

    pub fn p_min(&self) -> i64 {
        self.p_min
    }

    pub fn p_max(&self) -> i64 {
        self.p_max
    }

    pub fn p_range(&self) -> RangeInclusive<i64> {
        self.p_min..=self.p_max
    }

    /// `p_max - p_min`
    pub fn width(&self) -> i64 {
        self.p_max - self.p_min
    }

    fn dim(&self, n: i64) -> usize {
        let i = n - self.n_min;
        if i < 0 || i as usize >= self.dims.len() {
            0
        } else {
            self.dims[i as usize]
        }
    }

    /// `F^p K^n`.
    pub fn level(&self, p: i64, n: i64) -> Subgroup {
        let d = self.dim(n);
        if d == 0 {
            return Subgroup::zero(0);
        }
        if p < self.p_min {
            Subgroup::full(d)
        } else if p > self.p_max {
            Subgroup::zero(d)
        } else {
            self.levels[(n - self.n_min) as usize][(p - self.p_min) as usize].clone()
        }
    }

    /// Checks exhaustiveness, monotonicity and compatibility with `d`.
    pub fn validate(&self, complex: &CochainComplex) -> Result<()> {
        if complex.n_min() != self.n_min || complex.dims() != self.dims.as_slice() {
            return Err(Error::InvalidFiltration("filtration belongs to a different complex".into()));
        }
        for n in complex.degrees() {
            if self.level(self.p_min, n) != Subgroup::full(complex.dim(n)) {
                return Err(Error::InvalidFiltration(format!(
                    "F^{} K^{n} is not all of K^{n}",
                    self.p_min
                )));
            }
            let d = complex.differential(n);
            for p in self.p_range() {
                let f = self.level(p, n);
                if !self.level(p + 1, n).is_subgroup_of(&f) {
                    return Err(Error::InvalidFiltration(format!(
                        "F^{} K^{n} is not contained in F^{p} K^{n}",
                        p + 1
                    )));
                }
                if !f.image(&d).is_subgroup_of(&self.level(p, n + 1)) {
                    return Err(Error::InvalidFiltration(format!(
                        "d does not map F^{p} K^{n} into F^{p} K^{}",
                        n + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::IntMatrix;

    fn arrow() -> CochainComplex {
        CochainComplex::new(0, vec![1, 1], vec![IntMatrix::identity(1)]).unwrap()
    }

    #[test]
    fn basis_aligned_levels() {
        let k = arrow();
        let f = Filtration::basis_aligned(&k, &[vec![0], vec![2]]).unwrap();
        assert_eq!(f.p_range(), 0..=2);
        assert_eq!(f.level(1, 0), Subgroup::zero(1));
        assert_eq!(f.level(2, 1), Subgroup::full(1));
        assert_eq!(f.level(-3, 0), Subgroup::full(1));
        assert_eq!(f.level(3, 1), Subgroup::zero(1));
    }

    #[test]
    fn differential_must_respect_levels() {
        let k = arrow();
        let r = Filtration::basis_aligned(&k, &[vec![1], vec![0]]);
        assert!(matches!(r, Err(Error::InvalidFiltration(_))));
    }
}
