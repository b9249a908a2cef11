use leray_core::exact_couple::{couple_from_filtration, couple_pages};
use leray_core::filtered_complex::{
    abutment, check_page_recursion, pair_sequence, two_step_sequence, verify_dec_shift, SpectralSequence,
};
use leray_core::fixtures::{d2_fixture, random_corpus, random_pairs, RandomParams};

#[test]
fn page_recursion_on_random_corpus() {
    for (i, (k, f)) in random_corpus(7, 200, RandomParams::default()).iter().enumerate() {
        let mut ss = SpectralSequence::new(k, f).unwrap();
        let r_stab = ss.stabilization_page();
        let pages: Vec<_> = (1..=r_stab + 1).map(|r| ss.page(r).unwrap().into_page()).collect();
        for w in pages.windows(2) {
            w[0].check_square_zero().unwrap();
            assert_eq!(check_page_recursion(&w[0], &w[1]).unwrap(), None, "complex {i}");
            assert_eq!(w[0].euler_characteristic(), w[1].euler_characteristic());
        }
        let a = abutment(k, f).unwrap();
        let chi: i64 = k
            .degrees()
            .map(|n| if n.rem_euclid(2) == 0 { a.cohomology(n).rank() as i64 } else { -(a.cohomology(n).rank() as i64) })
            .sum();
        assert_eq!(pages[0].euler_characteristic(), chi);
    }
}

#[test]
fn dec_shift_on_random_corpus() {
    let (k, f) = d2_fixture();
    assert!(verify_dec_shift(&k, &f, 3).unwrap().passed());
    for (i, (k, f)) in random_corpus(7, 200, RandomParams::default()).iter().enumerate() {
        let r_max = (f.width() + 2) as usize;
        let report = verify_dec_shift(k, f, r_max).unwrap();
        assert!(report.passed(), "complex {i}: {:?}", report.first_failure);
    }
}

#[test]
fn couple_pages_match_filtered_pages() {
    for (i, (k, f)) in random_corpus(11, 200, RandomParams::default()).iter().enumerate() {
        let r_max = (f.width() + 2) as usize;
        let couple = couple_from_filtration(k, f).unwrap();
        let from_couple = couple_pages(&couple, r_max).unwrap();
        let mut ss = SpectralSequence::new(k, f).unwrap();
        for (r, page) in (1..=r_max).zip(&from_couple) {
            let expected = ss.page(r).unwrap();
            assert_eq!(page.compare(expected.page()).unwrap(), None, "complex {i}, page {r}");
        }
    }
}

#[test]
fn pairs_give_exact_sequences() {
    for (k, f) in random_pairs(5, 50) {
        let seq = two_step_sequence(&k, &f).unwrap();
        assert_eq!(seq.first_inexact_node(), None);
        let sub: Vec<_> = k.degrees().map(|n| f.level(f.p_max(), n)).collect();
        let direct = pair_sequence(&k, &sub).unwrap();
        assert!(direct.is_exact());
        let a: Vec<_> = seq.terms.iter().map(|t| t.group.clone()).collect();
        let b: Vec<_> = direct.terms.iter().map(|t| t.group.clone()).collect();
        assert_eq!(a, b);
    }
}
