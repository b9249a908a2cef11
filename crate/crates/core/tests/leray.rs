use std::time::Instant;

use leray_core::cell_site::{cohomology, CellComplex, CellSet, CellularSheaf, FilteredSpace};
use leray_core::fixtures;
use leray_core::leray::{compare_leray, higher_direct_image, leray_e2, pair_leray, preimage_filtration, CellularMap};
use leray_core::{Error, FgAbGroup};

fn z(n: usize) -> FgAbGroup {
    FgAbGroup::free(n)
}

#[test]
fn classical_cohomology() {
    let rp2 = fixtures::projective_plane();
    let h = cohomology(&rp2, &CellularSheaf::constant(&rp2)).unwrap();
    assert_eq!((h[&0].clone(), h[&1].clone(), h[&2].clone()), (z(1), z(0), FgAbGroup::cyclic(2)));

    let (c, twisted) = fixtures::twisted_circle_sheaf();
    let h = cohomology(&c, &twisted).unwrap();
    assert_eq!((h[&0].clone(), h[&1].clone()), (z(0), FgAbGroup::cyclic(2)));

    let t = fixtures::torus();
    let h = cohomology(&t, &CellularSheaf::constant(&t)).unwrap();
    assert_eq!((h[&0].clone(), h[&1].clone(), h[&2].clone()), (z(1), z(2), z(1)));

    let k = fixtures::klein_bottle();
    let h = cohomology(&k, &CellularSheaf::constant(&k)).unwrap();
    assert_eq!((h[&0].clone(), h[&1].clone(), h[&2].clone()), (z(1), z(1), FgAbGroup::cyclic(2)));
}

#[test]
fn klein_bottle_over_the_circle() {
    let start = Instant::now();
    let f = fixtures::klein_bottle_over_circle();
    let sheaf = CellularSheaf::constant(f.source());
    let r1 = higher_direct_image(&f, &sheaf, 1).unwrap();
    let h = cohomology(f.target(), &r1).unwrap();
    assert_eq!(h[&0], z(0));
    assert_eq!(h[&1], FgAbGroup::cyclic(2));

    let e2 = leray_e2(&f, &sheaf).unwrap();
    assert_eq!(e2.get(0, 0), z(1));
    assert_eq!(e2.get(1, 0), z(1));
    assert_eq!(e2.get(0, 1), z(0));
    assert_eq!(e2.get(1, 1), FgAbGroup::cyclic(2));

    let y = FilteredSpace::dimension_skeleta(f.target());
    let report = compare_leray(&f, &sheaf, &y).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
    assert!(report.edge_map_checked());
    assert_eq!(report.degenerates_at, 2);
    assert_eq!(report.abutment.cohomology(0), z(1));
    assert_eq!(report.abutment.cohomology(1), z(1));
    assert_eq!(report.abutment.cohomology(2), FgAbGroup::cyclic(2));
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn torus_over_the_circle() {
    let f = fixtures::torus_over_circle();
    let sheaf = CellularSheaf::constant(f.source());
    let y = FilteredSpace::dimension_skeleta(f.target());
    let report = compare_leray(&f, &sheaf, &y).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
    for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        assert_eq!(report.leray_e2.get(p, q), z(1));
    }
    assert_eq!(report.leray_e2.entries().len(), 4);
    assert_eq!(report.abutment.cohomology(1), z(2));
    assert_eq!(report.abutment.cohomology(2), z(1));
}

#[test]
fn independence_of_the_base_filtration() {
    for f in [fixtures::klein_bottle_over_circle(), fixtures::torus_over_circle()] {
        let sheaf = CellularSheaf::constant(f.source());
        let a = compare_leray(&f, &sheaf, &FilteredSpace::dimension_skeleta(f.target())).unwrap();
        let b = compare_leray(&f, &sheaf, &fixtures::circle_vertex_filtration(f.target())).unwrap();
        assert!(a.passed() && b.passed());
        assert_eq!(a.e2(), b.e2());
        assert_eq!(a.e_infinity(), b.e_infinity());
        assert!(a.abutment.same_filtration(&b.abutment));
    }
}

#[test]
fn identity_map() {
    let x = fixtures::projective_plane();
    let f = CellularMap::identity(&x);
    let sheaf = CellularSheaf::constant(&x);
    let r1 = higher_direct_image(&f, &sheaf, 1).unwrap();
    assert!(r1.stalks().iter().all(|s| s.group().is_zero()));
    let report = compare_leray(&f, &sheaf, &FilteredSpace::dimension_skeleta(&x)).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
    assert_eq!(report.leray_e2.get(2, 0), FgAbGroup::cyclic(2));
    assert!(report.leray_e2.entries().keys().all(|&(_, q)| q == 0));
}

#[test]
fn non_cellular_filtration_is_rejected() {
    let (x, y) = fixtures::non_cellular_sphere_filtration();
    let f = CellularMap::identity(&x);
    let r = compare_leray(&f, &CellularSheaf::constant(&x), &y);
    match r {
        Err(Error::NotCellular { level, degree, group }) => {
            assert_eq!((level, degree), (1, 2));
            assert_eq!(group, z(1));
        }
        other => panic!("expected NotCellular, got {other:?}"),
    }
}

#[test]
fn preimage_of_skeleta() {
    let f = fixtures::klein_bottle_over_circle();
    let x = preimage_filtration(&f, &FilteredSpace::dimension_skeleta(f.target())).unwrap();
    let fiber = f.source().cell_set(&["v0*w0", "v0*w1", "v0*c0", "v0*c1", "v1*w0", "v1*w1", "v1*c0", "v1*c1"]).unwrap();
    assert_eq!(x.level(0), fiber);
    assert_eq!(x.level(1), f.source().all_cells());
}

#[test]
fn pair_over_the_interval() {
    let f = fixtures::annulus_over_interval();
    let sheaf = CellularSheaf::constant(f.source());
    let y = FilteredSpace::dimension_skeleta(f.target());
    let boundary = f.target().cell_set(&["v0", "v1"]).unwrap();
    let report = pair_leray(&f, &sheaf, &boundary, &y).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
    assert_eq!(report.pushed_e2.get(1, 0), z(1));
    assert_eq!(report.pushed_e2.get(1, 1), z(1));
    assert_eq!(report.pushed_e2.entries().len(), 2);
    assert_eq!(report.relative_cohomology[&1], z(1));
    assert_eq!(report.relative_cohomology[&2], z(1));

    let empty = pair_leray(&f, &sheaf, &CellSet::new(), &y).unwrap();
    let plain = compare_leray(&f, &sheaf, &y).unwrap();
    assert!(empty.passed());
    assert_eq!(empty.leray.e2(), plain.e2());

    let all = pair_leray(&f, &sheaf, &f.target().all_cells(), &y).unwrap();
    assert!(all.passed());
    assert!(all.pushed_e2.is_zero() && all.leray.e2().is_zero());

    let v0 = f.target().cell_set(&["v0"]).unwrap();
    assert!(matches!(pair_leray(&f, &sheaf, &v0, &y), Err(Error::NotMember)));
}

#[test]
fn cellular_maps_are_validated() {
    let s = CellComplex::circle(2).unwrap();
    let i = CellComplex::interval();
    // An edge cannot go to a vertex that is not below the image of its endpoints.
    let bad = CellularMap::from_ids(s.clone(), i.clone(), &[("v0", "v0"), ("v1", "v1"), ("e0", "v0"), ("e1", "e")]);
    assert!(matches!(bad, Err(Error::InvalidMap(_))));
    let ok = CellularMap::from_ids(s, i, &[("v0", "v0"), ("v1", "v1"), ("e0", "e"), ("e1", "e")]);
    assert!(ok.is_ok());
}

#[test]
fn first_differential_is_the_connecting_map() {
    use leray_core::cell_site::check_d1_composite;
    for x in [fixtures::projective_plane(), fixtures::klein_bottle(), fixtures::torus()] {
        let sheaf = CellularSheaf::constant(&x);
        let y = FilteredSpace::dimension_skeleta(&x);
        assert_eq!(check_d1_composite(&x, &y, &sheaf).unwrap(), None);
    }
    let (c, twisted) = fixtures::twisted_circle_sheaf();
    assert_eq!(
        check_d1_composite(&c, &FilteredSpace::dimension_skeleta(&c), &twisted).unwrap(),
        None
    );
}
