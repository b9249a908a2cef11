use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use leray_core::cell_site::{CellularSheaf, FilteredSpace};
use leray_core::exact_algebra::smith_normal_form;
use leray_core::filtered_complex::SpectralSequence;
use leray_core::fixtures::{self, random_corpus, RandomParams};
use leray_core::leray::compare_leray;
use leray_core::IntMatrix;

fn pages(c: &mut Criterion) {
    let corpus = random_corpus(7, 50, RandomParams::default());
    c.bench_function("all pages of 50 random filtered complexes", |b| {
        b.iter(|| {
            for (k, f) in &corpus {
                let mut ss = SpectralSequence::new(k, f).unwrap();
                let stab = ss.stabilization_page();
                black_box(ss.page(stab).unwrap());
            }
        })
    });
}

fn leray(c: &mut Criterion) {
    let f = fixtures::klein_bottle_over_circle();
    let sheaf = CellularSheaf::constant(f.source());
    let y = FilteredSpace::dimension_skeleta(f.target());
    c.bench_function("Leray comparison for the Klein bottle over the circle", |b| {
        b.iter(|| black_box(compare_leray(&f, &sheaf, &y).unwrap()))
    });
}

fn smith(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows: Vec<Vec<i64>> = (0..24).map(|_| (0..24).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    let m = IntMatrix::from_rows(&rows);
    c.bench_function("Smith normal form of a random 24x24 matrix", |b| {
        b.iter(|| black_box(smith_normal_form(&m)))
    });
}

criterion_group!(benches, pages, leray, smith);
criterion_main!(benches);
