use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use racb_core::parkour::r_minimize;
use racb_core::universal::{portrait_automorphism, LocalData, PortraitSpec};
use racb_core::verify::NamedProduct;
use racb_core::wordcalc::{homotopy_class, is_reduced, normal_form, DEFAULT_CAP};
use racb_core::{city_product_diagrams, BuildingModel, Chamber, Diagram, PermGroup};

fn words(c: &mut Criterion) {
    let d = Diagram::right_angled(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let w = vec![3, 1, 0, 2, 1, 3, 0, 2, 2, 1, 0, 3];
    c.bench_function("normal_form/rank4-len12", |b| b.iter(|| normal_form(black_box(&w), &d).unwrap()));
    c.bench_function("is_reduced/rank4-len12", |b| b.iter(|| is_reduced(black_box(&w), &d).unwrap()));
    let short = vec![3, 1, 0, 2, 1, 3];
    c.bench_function("homotopy_class/rank4-len6", |b| {
        b.iter(|| homotopy_class(black_box(&short), &d, DEFAULT_CAP).unwrap())
    });
}

fn parkour(c: &mut Criterion) {
    let m = Diagram::free(2).unwrap();
    let f1 = Diagram::right_angled(2, &[]).unwrap();
    let f2 = Diagram::right_angled(2, &[(0, 1)]).unwrap();
    let (d, p) = city_product_diagrams(&m, &[f1, f2]).unwrap();
    let u = vec![0, 2, 1, 3, 0, 2, 1, 3];
    c.bench_function("r_minimize/len8", |b| b.iter(|| r_minimize(black_box(&u), &d, &p).unwrap()));
}

fn balls(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball");
    let b = BuildingModel::new(Diagram::right_angled(3, &[(0, 1), (1, 2)]).unwrap(), vec![3, 2, 3]).unwrap();
    for r in [2, 3, 4] {
        g.bench_with_input(BenchmarkId::new("rank3-path-q323", r), &r, |bn, &r| {
            bn.iter(|| b.ball(&Chamber::base(), r).unwrap())
        });
    }
    g.finish();
    let cp = NamedProduct::thick_square_edge().spec.build().unwrap();
    c.bench_function("skeletal_view/thick-square-edge-r4", |bn| bn.iter(|| cp.skeletal(4).unwrap()));
}

fn portraits(c: &mut Criterion) {
    let cp = NamedProduct::thick_square_edge().spec.build().unwrap();
    let b = &cp.product;
    let f = LocalData::new(b, vec![PermGroup::symmetric(2), PermGroup::symmetric(3), PermGroup::symmetric(2)]).unwrap();
    let spec = PortraitSpec::new(Chamber::base(), Chamber::base(), 17);
    c.bench_function("portrait_automorphism/thick-square-edge-r3", |bn| {
        bn.iter(|| portrait_automorphism(b, &f, black_box(&spec), 3).unwrap())
    });
}

criterion_group!(benches, words, parkour, balls, portraits);
criterion_main!(benches);
