use std::collections::BTreeSet;

use super::{CochainComplex, Filtration, Page, SpectralSequence};
use crate::error::Result;

/// The shifted filtration `Dec(F)^p K^n = F^{p+n} K^n ∩ d⁻¹(F^{p+n+1} K^{n+1})`.
pub fn dec(filtration: &Filtration, complex: &CochainComplex) -> Result<Filtration> {
    filtration.validate(complex)?;
    if complex.is_empty() {
        return Ok(Filtration::trivial(complex));
    }
    let p_min = filtration.p_min() - complex.n_max() - 1;
    let p_max = filtration.p_max() - complex.n_min();
    let levels = complex
        .degrees()
        .map(|n| {
            let d = complex.differential(n);
            (p_min..=p_max)
                .map(|p| {
                    filtration
                        .level(p + n, n)
                        .preimage_within(&d, &filtration.level(p + n + 1, n + 1))
                })
                .collect()
        })
        .collect();
    Filtration::new(complex, p_min, p_max, levels)
}

/// Outcome of comparing `E_r(K, Dec F)` with `E_{r+1}(K, F)` reindexed by
/// `(p, q) ↦ (2p + q, -p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecShiftReport {
    pub r_max: usize,
    pub entries_checked: usize,
    pub differentials_checked: usize,
    pub first_failure: Option<String>,
}

impl DecShiftReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn shifted(p: i64, q: i64) -> (i64, i64) {
    (2 * p + q, -p)
}

fn unshifted(a: i64, b: i64) -> (i64, i64) {
    (-b, a + 2 * b)
}

fn compare_shifted(dec_page: &Page, page: &Page, report: &mut DecShiftReport) -> Result<()> {
    let keys: BTreeSet<(i64, i64)> = dec_page
        .groups()
        .keys()
        .copied()
        .chain(page.groups().keys().map(|&(a, b)| unshifted(a, b)))
        .collect();
    for &(p, q) in &keys {
        let (a, b) = shifted(p, q);
        let (lhs, rhs) = (dec_page.group(p, q), page.group(a, b));
        report.entries_checked += 1;
        if lhs != rhs {
            report.first_failure = Some(format!(
                "E_{}^{{{p},{q}}}(Dec F) = {lhs} but E_{}^{{{a},{b}}}(F) = {rhs}",
                dec_page.r(),
                page.r()
            ));
            return Ok(());
        }
    }
    for &(p, q) in &keys {
        let (a, b) = shifted(p, q);
        let lhs = dec_page.differential(p, q)?.invariants();
        let rhs = page.differential(a, b)?.invariants();
        report.differentials_checked += 1;
        if lhs != rhs {
            report.first_failure = Some(format!(
                "d_{} at ({p},{q}) on Dec F has image {} and cokernel {}, d_{} at ({a},{b}) on F has image {} and cokernel {}",
                dec_page.r(),
                lhs.0,
                lhs.1,
                page.r(),
                rhs.0,
                rhs.1
            ));
            return Ok(());
        }
    }
    Ok(())
}

/// Checks `E_r^{p,q}(K, Dec F) ≅ E_{r+1}^{2p+q,-p}(K, F)` for `1 ≤ r ≤ r_max`,
/// comparing groups and the image and cokernel of every differential.
pub fn verify_dec_shift(complex: &CochainComplex, filtration: &Filtration, r_max: usize) -> Result<DecShiftReport> {
    let decalage = dec(filtration, complex)?;
    let mut original = SpectralSequence::new(complex, filtration)?;
    let mut shifted_ss = SpectralSequence::new(complex, &decalage)?;
    let mut report = DecShiftReport {
        r_max,
        entries_checked: 0,
        differentials_checked: 0,
        first_failure: None,
    };
    for r in 1..=r_max {
        let lhs = shifted_ss.page(r)?;
        let rhs = original.page(r + 1)?;
        compare_shifted(lhs.page(), rhs.page(), &mut report)?;
        if !report.passed() {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{IntMatrix, Subgroup};

    fn d2_fixture() -> (CochainComplex, Filtration) {
        let k = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::identity(1)]).unwrap();
        let f = Filtration::basis_aligned(&k, &[vec![0], vec![2]]).unwrap();
        (k, f)
    }

    #[test]
    fn dec_of_zero_differential_is_a_shift() {
        let k = CochainComplex::new(0, vec![2, 1], vec![IntMatrix::zeros(1, 2)]).unwrap();
        let f = Filtration::basis_aligned(&k, &[vec![0, 1], vec![1]]).unwrap();
        let g = dec(&f, &k).unwrap();
        for n in 0..=1 {
            for p in -4..=4 {
                assert_eq!(g.level(p, n), f.level(p + n, n), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn dec_of_trivial_filtration_is_canonical_truncation() {
        // K: Z --2--> Z. τ_{≤ -p}: Dec(G)^p K^n is K^n for n < -p, the
        // cocycles for n = -p, and 0 for n > -p.
        let k = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let g = dec(&Filtration::trivial(&k), &k).unwrap();
        assert_eq!(g.level(0, 0), Subgroup::zero(1));
        assert_eq!(g.level(-1, 0), Subgroup::full(1));
        assert_eq!(g.level(-1, 1), Subgroup::full(1));
        assert_eq!(g.level(0, 1), Subgroup::zero(1));
    }

    #[test]
    fn d2_fixture_shifts() {
        let (k, f) = d2_fixture();
        let report = verify_dec_shift(&k, &f, 3).unwrap();
        assert!(report.passed(), "{:?}", report.first_failure);
        let g = dec(&f, &k).unwrap();
        let e1 = super::super::page(&k, &g, 1).unwrap();
        // The d_2 of (K, F) appears as a d_1 of (K, Dec F).
        assert!(!e1.page().differentials_vanish().unwrap());
    }
}
