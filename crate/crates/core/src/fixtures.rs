//! Reference inputs: small filtered complexes, classical cell complexes,
//! sheaves and maps, and a seeded generator of random filtered complexes.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeMap;

use crate::cell_site::{CellComplex, CellSpec, CellularSheaf, FilteredSpace, Stalk};
use crate::exact_algebra::{IntMatrix, Subgroup};
use crate::filtered_complex::{CochainComplex, Filtration};
use crate::leray::CellularMap;

/// Size limits for [`random_filtered_complex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub max_rank: usize,
    pub max_degrees: usize,
    /// Number of distinct filtration levels `0..levels`.
    pub levels: i64,
    pub max_coefficient: i64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_rank: 4,
            max_degrees: 4,
            levels: 3,
            max_coefficient: 2,
        }
    }
}

/// `Z·a → Z·b` with `d a = b`, `a` at level 0 and `b` at level 2, so that
/// the only nonzero differential is an isomorphism `d_2: E_2^{0,0} → E_2^{2,-1}`.
pub fn d2_fixture() -> (CochainComplex, Filtration) {
    let k = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::identity(1)]).expect("complex");
    let f = Filtration::basis_aligned(&k, &[vec![0], vec![2]]).expect("filtration");
    (k, f)
}

/// A random bounded complex with a basis-aligned filtration.
///
/// Each basis vector gets a level; differentials are built from the top
/// degree down, each column a random combination of a basis of
/// `ker d ∩ (span of basis vectors of level ≥ the column's level)`, which
/// makes the result a filtered complex by construction.
pub fn random_filtered_complex(rng: &mut impl Rng, params: RandomParams) -> (CochainComplex, Filtration) {
    let degrees = rng.gen_range(1..=params.max_degrees);
    let n_min = rng.gen_range(-1..=1);
    let dims: Vec<usize> = (0..degrees).map(|_| rng.gen_range(0..=params.max_rank)).collect();
    let levels: Vec<Vec<i64>> = dims
        .iter()
        .map(|&d| (0..d).map(|_| rng.gen_range(0..params.levels)).collect())
        .collect();
    let mut diffs: Vec<IntMatrix> = Vec::with_capacity(degrees.saturating_sub(1));
    let mut above: Option<IntMatrix> = None;
    for i in (0..degrees.saturating_sub(1)).rev() {
        let (src, tgt) = (dims[i], dims[i + 1]);
        let kernel = match &above {
            Some(d) => Subgroup::kernel(d),
            None => Subgroup::full(tgt),
        };
        let mut columns = Vec::with_capacity(src);
        for j in 0..src {
            let l = levels[i][j];
            let allowed = Subgroup::coordinate(tgt, (0..tgt).filter(|&t| levels[i + 1][t] >= l));
            let basis = allowed.intersect(&kernel).basis().clone();
            let mut col = vec![BigInt::from(0); tgt];
            if rng.gen_bool(0.8) {
                for b in basis.columns() {
                    let c = rng.gen_range(-params.max_coefficient..=params.max_coefficient);
                    for (x, y) in col.iter_mut().zip(&b) {
                        *x += y * c;
                    }
                }
            }
            columns.push(col);
        }
        let d = IntMatrix::from_columns(tgt, &columns);
        above = Some(d.clone());
        diffs.push(d);
    }
    diffs.reverse();
    let k = CochainComplex::new(n_min, dims, diffs).expect("random complex squares to zero");
    let f = Filtration::basis_aligned(&k, &levels).expect("random filtration is d-stable");
    (k, f)
}

/// The seeded corpus of random filtered complexes used by the property
/// checks.
pub fn random_corpus(seed: u64, count: usize, params: RandomParams) -> Vec<(CochainComplex, Filtration)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_filtered_complex(&mut rng, params)).collect()
}

/// Random complexes with a two-step filtration `0 ⊆ A ⊆ K`, i.e. a
/// subcomplex `A` spanned by the basis vectors at level 1.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(CochainComplex, Filtration)> {
    let params = RandomParams {
        levels: 2,
        ..RandomParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (k, f) = random_filtered_complex(&mut rng, params);
        if f.width() == 1 {
            out.push((k, f));
        }
    }
    out
}

/// `K ⊕ A` with `A = (Z --1--> Z)` placed in one filtration level, and the
/// inclusion of `K`: a filtered quasi-isomorphism which must induce
/// isomorphisms on every page.
pub fn filtered_quasi_isomorphism() -> ((CochainComplex, Filtration), (CochainComplex, Filtration), Vec<IntMatrix>) {
    let (k, f) = d2_fixture();
    let a = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::identity(1)]).expect("acyclic");
    let sum = k.direct_sum(&a);
    let g = Filtration::basis_aligned(&sum, &[vec![0, 1], vec![2, 1]]).expect("filtration");
    let phi = vec![
        IntMatrix::from_rows(&[vec![1], vec![0]]),
        IntMatrix::from_rows(&[vec![1], vec![0]]),
    ];
    ((k, f), (sum, g), phi)
}

/// The two-cell-per-dimension sphere: vertices `v0, v1`, edges `e0, e1`
/// forming the equator, and two hemispheres `f0, f1`.
pub fn sphere() -> CellComplex {
    CellComplex::new(vec![
        CellSpec::new("v0", 0, &[]),
        CellSpec::new("v1", 0, &[]),
        CellSpec::new("e0", 1, &[("v0", -1), ("v1", 1)]),
        CellSpec::new("e1", 1, &[("v1", -1), ("v0", 1)]),
        CellSpec::new("f0", 2, &[("e0", 1), ("e1", 1)]),
        CellSpec::new("f1", 2, &[("e0", -1), ("e1", -1)]),
    ])
    .expect("sphere")
}

/// The six-vertex triangulation of the real projective plane.
pub fn projective_plane() -> CellComplex {
    let facets = [
        [1, 2, 4],
        [1, 2, 6],
        [1, 3, 4],
        [1, 3, 5],
        [1, 5, 6],
        [2, 3, 5],
        [2, 3, 6],
        [2, 4, 5],
        [3, 4, 6],
        [4, 5, 6],
    ];
    let facets: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
    CellComplex::from_simplices(&facets).expect("projective plane")
}

/// The torus as the product of two two-vertex circles.
pub fn torus() -> CellComplex {
    let c = CellComplex::circle(2).expect("circle");
    c.product(&c).expect("torus")
}

/// The base circle `v0, v1, e0, e1` crossed with the fiber circle
/// `w0, w1, c0, c1`; with `flip`, the fiber is reflected (`c0 ↔ c1`) when
/// going around `e1`, which gives the Klein bottle.
fn circle_bundle(flip: bool) -> CellComplex {
    let mut cells = Vec::new();
    let name = |b: &str, f: &str| format!("{b}*{f}");
    for v in ["v0", "v1"] {
        for w in ["w0", "w1"] {
            cells.push(CellSpec::new(name(v, w), 0, &[]));
        }
        cells.push(CellSpec::new(name(v, "c0"), 1, &[(&name(v, "w0"), -1), (&name(v, "w1"), 1)]));
        cells.push(CellSpec::new(name(v, "c1"), 1, &[(&name(v, "w1"), -1), (&name(v, "w0"), 1)]));
    }
    for (e, from, to) in [("e0", "v0", "v1"), ("e1", "v1", "v0")] {
        for w in ["w0", "w1"] {
            cells.push(CellSpec::new(name(e, w), 1, &[(&name(from, w), -1), (&name(to, w), 1)]));
        }
        for (c, (tail, head)) in [("c0", ("w0", "w1")), ("c1", ("w1", "w0"))] {
            let twisted = flip && e == "e1";
            let (end, end_sign) = match (twisted, c) {
                (false, _) => (c, 1),
                (true, "c0") => ("c1", -1),
                (true, _) => ("c0", -1),
            };
            cells.push(CellSpec::new(
                name(e, c),
                2,
                &[
                    (&name(from, c), -1),
                    (&name(to, end), end_sign),
                    (&name(e, tail), 1),
                    (&name(e, head), -1),
                ],
            ));
        }
    }
    CellComplex::new(cells).expect("circle bundle")
}

/// The Klein bottle as a circle bundle over the circle with reflection
/// monodromy.
pub fn klein_bottle() -> CellComplex {
    circle_bundle(true)
}

/// Projection of a product complex (ids `a*b`) onto its first factor.
pub fn first_factor_projection(total: CellComplex, base: CellComplex) -> CellularMap {
    let pairs: Vec<(String, String)> = total
        .ids()
        .iter()
        .map(|id| (id.clone(), id.split('*').next().expect("product id").to_string()))
        .collect();
    CellularMap::from_ids(total, base, &pairs).expect("projection is cellular")
}

/// The Klein bottle projected onto the base circle.
pub fn klein_bottle_over_circle() -> CellularMap {
    first_factor_projection(klein_bottle(), CellComplex::circle(2).expect("circle"))
}

/// The product torus projected onto its first circle.
pub fn torus_over_circle() -> CellularMap {
    first_factor_projection(torus(), CellComplex::circle(2).expect("circle"))
}

/// The annulus `S¹ × I` projected onto the interval.
pub fn annulus_over_interval() -> CellularMap {
    let interval = CellComplex::interval();
    let annulus = interval.product(&CellComplex::circle(2).expect("circle")).expect("annulus");
    first_factor_projection(annulus, interval)
}

/// The constant rank-one sheaf on the two-vertex circle twisted by `-1`
/// along `v0 ⋖ e1`: the local system with monodromy `-1`.
pub fn twisted_circle_sheaf() -> (CellComplex, CellularSheaf) {
    let x = CellComplex::circle(2).expect("circle");
    let mut restrictions = BTreeMap::new();
    for t in 0..x.len() {
        for &(s, _) in x.faces(t) {
            let sign = if x.id(s) == "v0" && x.id(t) == "e1" { -1 } else { 1 };
            restrictions.insert((s, t), IntMatrix::from_rows(&[vec![sign]]));
        }
    }
    let sheaf = CellularSheaf::new(&x, vec![Stalk::free(1); x.len()], restrictions).expect("twisted sheaf");
    (x, sheaf)
}

/// A second cellular filtration of the two-vertex circle: `Y_0 = {v0}`,
/// `Y_1` everything.
pub fn circle_vertex_filtration(circle: &CellComplex) -> FilteredSpace {
    let levels: Vec<usize> = (0..circle.len()).map(|c| usize::from(circle.id(c) != "v0")).collect();
    FilteredSpace::from_cell_levels(circle, &levels).expect("filtration of the circle")
}

/// The sphere filtered by `Y_0 = {v0}`, `Y_1 = everything`; the open top
/// stratum has compactly supported cohomology in degree 2, so this
/// filtration is not cellular for the constant sheaf.
pub fn non_cellular_sphere_filtration() -> (CellComplex, FilteredSpace) {
    let x = sphere();
    let y = circle_vertex_filtration(&x);
    (x, y)
}
