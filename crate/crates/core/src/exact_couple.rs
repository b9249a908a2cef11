//! Exact couples `D --α--> D --β--> E --γ--> D`, their derived couples and
//! the spectral sequence they generate.
//!
//! Bidegrees on `(p, q)`-indexed groups: `α` is `(-1, 1)`, `γ` is `(1, 0)`
//! and `β` starts at `(0, 0)` and moves by `(1, -1)` with every derivation,
//! so that `d_r = β ∘ γ` has bidegree `(r, 1 - r)` on the `r`-th page.
//!
//! Internally groups are keyed by filtration index and total degree
//! `(p, n = p + q)`. The `D` groups are stored on a window `[p_lo, p_hi]` in
//! each degree; below the window `D` is constant with `α` the identity, and
//! above it likewise. `E` vanishes wherever it is not stored.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact_algebra::{
    homology, induced_map, is_exact_at, solve, FgAbGroup, GroupHom, IntMatrix, Subgroup, Subquotient,
};
use crate::filtered_complex::{CochainComplex, Filtration, Page};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCouple {
    p_lo: i64,
    p_hi: i64,
    n_lo: i64,
    n_hi: i64,
    beta_shift: i64,
    d: BTreeMap<(i64, i64), FgAbGroup>,
    e: BTreeMap<(i64, i64), FgAbGroup>,
    // α: D^{p,n} → D^{p-1,n}, stored for p in (p_lo, p_hi]
    alpha: BTreeMap<(i64, i64), IntMatrix>,
    // β: D^{p,n} → E^{p+s,n}
    beta: BTreeMap<(i64, i64), IntMatrix>,
    // γ: E^{p,n} → D^{p+1,n+1}
    gamma: BTreeMap<(i64, i64), IntMatrix>,
}

/// Raw data for [`ExactCouple::new`], all keyed by `(p, n)`.
#[derive(Clone, Debug, Default)]
pub struct CoupleData {
    pub d: BTreeMap<(i64, i64), FgAbGroup>,
    pub e: BTreeMap<(i64, i64), FgAbGroup>,
    pub alpha: BTreeMap<(i64, i64), IntMatrix>,
    pub beta: BTreeMap<(i64, i64), IntMatrix>,
    pub gamma: BTreeMap<(i64, i64), IntMatrix>,
}

fn relations(g: &FgAbGroup) -> Subgroup {
    Subgroup::new(g.num_generators(), g.relation_matrix())
}

impl ExactCouple {
    /// Builds a couple from explicit data and checks that every map is a
    /// well-defined homomorphism and that the triangle is exact everywhere.
    /// `beta_shift` is `s` in `β: D^{p,q} → E^{p+s,q-s}`.
    pub fn new(
        p_window: (i64, i64),
        n_window: (i64, i64),
        beta_shift: i64,
        data: CoupleData,
    ) -> Result<Self> {
        let (p_lo, p_hi) = p_window;
        let (n_lo, n_hi) = n_window;
        if p_lo > p_hi || n_lo > n_hi {
            return Err(Error::Shape("empty window".into()));
        }
        let couple = ExactCouple {
            p_lo,
            p_hi,
            n_lo,
            n_hi,
            beta_shift,
            d: data.d,
            e: data.e,
            alpha: data.alpha,
            beta: data.beta,
            gamma: data.gamma,
        };
        for &(p, n) in couple.d.keys() {
            if p < p_lo || p > p_hi || n < n_lo || n > n_hi {
                return Err(Error::Shape(format!("D^({p}, n={n}) lies outside the window")));
            }
        }
        couple.check_maps()?;
        couple.check_exact()?;
        Ok(couple)
    }

    pub fn beta_shift(&self) -> i64 {
        self.beta_shift
    }

    pub fn p_window(&self) -> (i64, i64) {
        (self.p_lo, self.p_hi)
    }

    pub fn n_window(&self) -> (i64, i64) {
        (self.n_lo, self.n_hi)
    }

    /// `D^{p,q}`.
    pub fn d_group(&self, p: i64, q: i64) -> FgAbGroup {
        self.dg(p, p + q)
    }

    /// `E^{p,q}`.
    pub fn e_group(&self, p: i64, q: i64) -> FgAbGroup {
        self.eg(p, p + q)
    }

    /// Nonzero `E^{p,q}`, keyed by `(p, q)`.
    pub fn e_table(&self) -> BTreeMap<(i64, i64), FgAbGroup> {
        self.e
            .iter()
            .filter(|(_, g)| !g.is_zero())
            .map(|(&(p, n), g)| ((p, n - p), g.clone()))
            .collect()
    }

    /// `D^{p,q}` over the stored window, keyed by `(p, q)`.
    pub fn d_table(&self) -> BTreeMap<(i64, i64), FgAbGroup> {
        self.d
            .iter()
            .map(|(&(p, n), g)| ((p, n - p), g.clone()))
            .collect()
    }

    fn dg(&self, p: i64, n: i64) -> FgAbGroup {
        if n < self.n_lo || n > self.n_hi {
            return FgAbGroup::zero();
        }
        let p = p.clamp(self.p_lo, self.p_hi);
        self.d.get(&(p, n)).cloned().unwrap_or_default()
    }

    fn eg(&self, p: i64, n: i64) -> FgAbGroup {
        self.e.get(&(p, n)).cloned().unwrap_or_default()
    }

    fn alpha_m(&self, p: i64, n: i64) -> IntMatrix {
        if p <= self.p_lo || p > self.p_hi {
            return IntMatrix::identity(self.dg(p, n).num_generators());
        }
        self.alpha.get(&(p, n)).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(self.dg(p - 1, n).num_generators(), self.dg(p, n).num_generators())
        })
    }

    fn beta_m(&self, p: i64, n: i64) -> IntMatrix {
        self.beta.get(&(p, n)).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(
                self.eg(p + self.beta_shift, n).num_generators(),
                self.dg(p, n).num_generators(),
            )
        })
    }

    fn gamma_m(&self, p: i64, n: i64) -> IntMatrix {
        self.gamma.get(&(p, n)).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(self.dg(p + 1, n + 1).num_generators(), self.eg(p, n).num_generators())
        })
    }

    /// `α: D^{p,n} → D^{p-1,n}` as a homomorphism.
    fn alpha_hom(&self, p: i64, n: i64) -> Result<GroupHom> {
        GroupHom::new(self.dg(p, n), self.dg(p - 1, n), self.alpha_m(p, n))
    }

    fn beta_hom(&self, p: i64, n: i64) -> Result<GroupHom> {
        GroupHom::new(self.dg(p, n), self.eg(p + self.beta_shift, n), self.beta_m(p, n))
    }

    fn gamma_hom(&self, p: i64, n: i64) -> Result<GroupHom> {
        GroupHom::new(self.eg(p, n), self.dg(p + 1, n + 1), self.gamma_m(p, n))
    }

    /// `d = β ∘ γ: E^{p,n} → E^{p+1+s, n+1}`.
    fn differential_hom(&self, p: i64, n: i64) -> Result<GroupHom> {
        self.beta_hom(p + 1, n + 1)?.compose(&self.gamma_hom(p, n)?)
    }

    fn check_maps(&self) -> Result<()> {
        for &(p, n) in self.alpha.keys() {
            if p <= self.p_lo || p > self.p_hi {
                return Err(Error::Shape(format!("α stored at p = {p} outside ({}, {}]", self.p_lo, self.p_hi)));
            }
            self.alpha_hom(p, n)?;
        }
        for &(p, n) in self.beta.keys() {
            self.beta_hom(p, n)?;
        }
        for &(p, n) in self.gamma.keys() {
            self.gamma_hom(p, n)?;
        }
        Ok(())
    }

    fn e_extent(&self) -> (i64, i64) {
        let lo = self.e.keys().map(|k| k.0).min().unwrap_or(self.p_lo);
        let hi = self.e.keys().map(|k| k.0).max().unwrap_or(self.p_hi);
        (lo.min(self.p_lo), hi.max(self.p_hi))
    }

    /// Checks exactness at every node of the triangle, including a margin
    /// around the stored window where the constant extension applies.
    pub fn check_exact(&self) -> Result<()> {
        let s = self.beta_shift;
        let (lo, hi) = self.e_extent();
        let (lo, hi) = (lo - s.abs() - 2, hi + s.abs() + 2);
        for n in self.n_lo - 1..=self.n_hi + 1 {
            for p in lo..=hi {
                let q = n - p;
                if !is_exact_at(&self.gamma_hom(p - 1, n - 1)?, &self.alpha_hom(p, n)?) {
                    return Err(Error::NotExact { node: "D (im γ = ker α)", p, q });
                }
                if !is_exact_at(&self.alpha_hom(p + 1, n)?, &self.beta_hom(p, n)?) {
                    return Err(Error::NotExact { node: "D (im α = ker β)", p, q });
                }
                if !is_exact_at(&self.beta_hom(p - s, n)?, &self.gamma_hom(p, n)?) {
                    return Err(Error::NotExact { node: "E (im β = ker γ)", p, q });
                }
            }
        }
        Ok(())
    }

    /// The spectral-sequence page carried by this couple: `E` with
    /// `d = β ∘ γ`, as page number `beta_shift + 1`.
    pub fn page(&self) -> Result<Page> {
        let r = (self.beta_shift + 1) as usize;
        let mut groups = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for (&(p, n), g) in &self.e {
            groups.insert((p, n - p), g.clone());
            let d = self.differential_hom(p, n)?;
            if !d.target().is_zero() || self.e.contains_key(&(p + 1 + self.beta_shift, n + 1)) {
                differentials.insert((p, n - p), d.matrix().clone());
            }
        }
        Ok(Page::new(r, groups, differentials))
    }

    /// The derived couple `D' = im α`, `E' = ker(βγ) / im(βγ)`.
    pub fn derive(&self) -> Result<ExactCouple> {
        self.check_exact()?;
        let s = self.beta_shift;
        let p_lo = self.p_lo - 1;
        let p_hi = self.p_hi;

        let mut d_sub: BTreeMap<(i64, i64), Subquotient> = BTreeMap::new();
        for n in self.n_lo..=self.n_hi {
            for p in p_lo..=p_hi {
                let g = self.dg(p, n);
                let k = g.num_generators();
                let image = Subgroup::new(k, self.alpha_m(p + 1, n).hstack(&g.relation_matrix()));
                d_sub.insert((p, n), Subquotient::new(image, relations(&g))?);
            }
        }
        let d_at = |p: i64, n: i64| -> Option<&Subquotient> {
            if n < self.n_lo || n > self.n_hi {
                None
            } else {
                d_sub.get(&(p.clamp(p_lo, p_hi), n))
            }
        };

        let mut e_sub: BTreeMap<(i64, i64), Subquotient> = BTreeMap::new();
        for &(p, n) in self.e.keys() {
            let outgoing = self.differential_hom(p, n)?;
            let incoming = self.differential_hom(p - 1 - s, n - 1)?;
            e_sub.insert((p, n), homology(&incoming, &outgoing)?);
        }

        let mut data = CoupleData::default();
        for (&k, sq) in &d_sub {
            data.d.insert(k, sq.group().clone());
        }
        for (&k, sq) in &e_sub {
            if !sq.group().is_zero() {
                data.e.insert(k, sq.group().clone());
            }
        }
        for n in self.n_lo..=self.n_hi {
            for p in p_lo + 1..=p_hi {
                let m = induced_map(&self.alpha_m(p, n), &d_sub[&(p, n)], &d_sub[&(p - 1, n)])?;
                data.alpha.insert((p, n), m);
            }
        }
        for (&(p, n), sq) in &e_sub {
            if sq.group().is_zero() {
                continue;
            }
            if let Some(target) = d_at(p + 1, n + 1) {
                let m = induced_map(&self.gamma_m(p, n), sq, target)?;
                data.gamma.insert((p, n), m);
            }
        }
        // β'(α x) = [β x]
        for n in self.n_lo..=self.n_hi {
            for p in p_lo..=p_hi {
                let Some(target) = e_sub.get(&(p + 1 + s, n)) else {
                    continue;
                };
                if target.group().is_zero() {
                    continue;
                }
                let g = self.dg(p, n);
                let source = &d_sub[&(p, n)];
                let a = self.alpha_m(p + 1, n);
                let system = a.hstack(&g.relation_matrix());
                let b = self.beta_m(p + 1, n);
                let mut columns = Vec::with_capacity(source.group().num_generators());
                for y in source.section_matrix().columns() {
                    let z = solve(&system, &y).ok_or_else(|| {
                        Error::NotCompatible("element of im α has no preimage".into())
                    })?;
                    let x: Vec<BigInt> = z[..a.cols()].to_vec();
                    columns.push(target.reduce(&b.mul_vec(&x))?);
                }
                let m = IntMatrix::from_columns(target.group().num_generators(), &columns);
                data.beta.insert((p, n), m);
            }
        }
        ExactCouple::new((p_lo, p_hi), (self.n_lo, self.n_hi), s + 1, data)
    }
}

/// The couple `D^{p,q} = H^{p+q}(F^p K)`, `E^{p,q} = H^{p+q}(Gr^p K)` with
/// `α` induced by inclusion, `β` by projection and `γ` the connecting map.
pub fn couple_from_filtration(complex: &CochainComplex, filtration: &Filtration) -> Result<ExactCouple> {
    filtration.validate(complex)?;
    let (p_min, p_max) = (filtration.p_min(), filtration.p_max());
    let (p_lo, p_hi) = (p_min, p_max + 1);
    let (n_lo, n_hi) = if complex.is_empty() {
        (0, 0)
    } else {
        (complex.n_min(), complex.n_max())
    };
    let d_of = |p: i64, n: i64| -> Result<Subquotient> {
        let f = filtration.level(p, n);
        let bounded = filtration.level(p, n - 1).image(&complex.differential(n - 1));
        Subquotient::new(complex.cocycles(n).intersect(&f), bounded)
    };
    let e_of = |p: i64, n: i64| -> Result<Subquotient> {
        let f = filtration.level(p, n);
        let next = filtration.level(p + 1, n);
        let num = f.preimage_within(&complex.differential(n), &filtration.level(p + 1, n + 1));
        let den = next.sum(&filtration.level(p, n - 1).image(&complex.differential(n - 1)));
        Subquotient::new(num, den)
    };
    let mut d_sub = BTreeMap::new();
    let mut e_sub = BTreeMap::new();
    for n in complex.degrees() {
        for p in p_lo..=p_hi {
            d_sub.insert((p, n), d_of(p, n)?);
        }
        for p in p_min..=p_max {
            e_sub.insert((p, n), e_of(p, n)?);
        }
    }
    let mut data = CoupleData::default();
    for (&k, sq) in &d_sub {
        data.d.insert(k, sq.group().clone());
    }
    for (&k, sq) in &e_sub {
        if !sq.group().is_zero() {
            data.e.insert(k, sq.group().clone());
        }
    }
    for n in complex.degrees() {
        let id = IntMatrix::identity(complex.dim(n));
        for p in p_lo + 1..=p_hi {
            data.alpha.insert((p, n), induced_map(&id, &d_sub[&(p, n)], &d_sub[&(p - 1, n)])?);
        }
        for p in p_min..=p_max {
            let e = &e_sub[&(p, n)];
            if e.group().is_zero() {
                continue;
            }
            data.beta.insert((p, n), induced_map(&id, &d_sub[&(p, n)], e)?);
            if let Some(target) = d_sub.get(&((p + 1).min(p_hi), n + 1)) {
                data.gamma.insert((p, n), induced_map(&complex.differential(n), e, target)?);
            }
        }
    }
    ExactCouple::new((p_lo, p_hi), (n_lo, n_hi), 0, data)
}

/// Pages `1..=r_max` of the couple: page `r` is `E` of the `(r-1)`-fold
/// derived couple with `d = β ∘ γ`.
pub fn couple_pages(couple: &ExactCouple, r_max: usize) -> Result<Vec<Page>> {
    couple.check_exact()?;
    let mut pages = Vec::with_capacity(r_max);
    let mut current = couple.clone();
    for r in 1..=r_max {
        pages.push(current.page()?);
        if r < r_max {
            current = current.derive()?;
        }
    }
    Ok(pages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtered_complex::pages;

    fn d2_fixture() -> (CochainComplex, Filtration) {
        let k = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::identity(1)]).unwrap();
        let f = Filtration::basis_aligned(&k, &[vec![0], vec![2]]).unwrap();
        (k, f)
    }

    #[test]
    fn d2_fixture_pages_agree() {
        let (k, f) = d2_fixture();
        let c = couple_from_filtration(&k, &f).unwrap();
        let from_couple = couple_pages(&c, 4).unwrap();
        let from_complex = pages(&k, &f, 4).unwrap();
        for (a, b) in from_couple.iter().zip(&from_complex) {
            assert_eq!(a.compare(b.page()).unwrap(), None, "page {}", a.r());
        }
        assert!(!from_couple[1].differentials_vanish().unwrap());
        assert!(from_couple[2].is_zero());
    }

    #[test]
    fn trivial_filtration_couple() {
        let k = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let c = couple_from_filtration(&k, &Filtration::trivial(&k)).unwrap();
        assert_eq!(c.d_group(0, 1), FgAbGroup::cyclic(2));
        assert_eq!(c.e_group(0, 1), FgAbGroup::cyclic(2));
        assert_eq!(c.d_group(1, 0), FgAbGroup::zero());
        assert_eq!(c.d_group(-5, 6), FgAbGroup::cyclic(2));
    }

    #[test]
    fn constant_couple_without_e() {
        // D = Z everywhere with α = id and E = 0: deriving changes nothing.
        let mut data = CoupleData::default();
        data.d.insert((0, 0), FgAbGroup::free(1));
        let c = ExactCouple::new((0, 0), (0, 0), 0, data).unwrap();
        let c2 = c.derive().unwrap().derive().unwrap();
        for p in -3..=3 {
            assert_eq!(c2.d_group(p, -p), FgAbGroup::free(1));
        }
        assert!(c2.e_table().is_empty());
    }

    #[test]
    fn inexact_data_is_rejected() {
        let mut data = CoupleData::default();
        data.d.insert((0, 0), FgAbGroup::free(1));
        data.d.insert((1, 0), FgAbGroup::free(1));
        data.alpha.insert((1, 0), IntMatrix::from_rows(&[vec![2]]));
        let r = ExactCouple::new((0, 1), (0, 0), 0, data);
        assert!(matches!(r, Err(Error::NotExact { .. })));
    }
}
