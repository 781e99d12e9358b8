use std::hint::black_box;

use contraction_core::families::{discrete_family, minimal_ktype_family, principal_family, specialize};
use contraction_core::intertwine::{equivariance_defect, AlphaSequence};
use contraction_core::ladder::{bracket_defect, casimir_defect, generated_submodule};
use contraction_core::{GaussRational, Sign, TPoly, Window};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn l() -> GaussRational {
    "1+i".parse().unwrap()
}

fn brackets(c: &mut Criterion) {
    let fam = principal_family(&l(), 1).unwrap();
    let mut group = c.benchmark_group("bracket_defect");
    for radius in [10, 40] {
        let w = Window::radius(radius);
        group.bench_with_input(BenchmarkId::new("principal", radius), &w, |b, w| {
            b.iter(|| bracket_defect(black_box(&fam), w).unwrap())
        });
    }
    let d = discrete_family(3, Sign::Plus);
    group.bench_function("discrete/40", |b| {
        b.iter(|| bracket_defect(black_box(&d), &Window::new(0, 40)).unwrap())
    });
    group.finish();

    c.bench_function("casimir_defect/principal/40", |b| {
        b.iter(|| casimir_defect(black_box(&fam), &l(), &Window::radius(40)).unwrap())
    });
}

fn intertwiners(c: &mut Criterion) {
    let l: GaussRational = "3/2i".parse().unwrap();
    let mut group = c.benchmark_group("alpha_sequence");
    for radius in [10, 25, 50] {
        group.bench_with_input(BenchmarkId::from_parameter(radius), &radius, |b, &r| {
            b.iter(|| AlphaSequence::new(black_box(&l), 0, &Window::radius(r)).unwrap())
        });
    }
    group.finish();
    c.bench_function("equivariance_defect/10", |b| {
        b.iter(|| equivariance_defect(black_box(&l), 1, &Window::radius(10)).unwrap())
    });
}

fn polynomials(c: &mut Criterion) {
    let g = |s: &str| s.parse::<GaussRational>().unwrap();
    let root = |r: &str| TPoly::from_coeffs(vec![-g(r), g("1")]);
    let product = |rs: &[&str]| rs.iter().fold(TPoly::from_coeffs(vec![g("1")]), |acc, r| &acc * &root(r));
    let a = product(&["1", "2i", "-3/2", "1+i", "5"]);
    let b = product(&["1+i", "7", "-2i", "1/3"]);
    let coprime = product(&["4", "-1", "3i", "2/5"]);
    c.bench_function("tpoly_gcd/common_factor", |bch| bch.iter(|| black_box(&a).gcd(black_box(&b))));
    c.bench_function("tpoly_gcd/coprime", |bch| bch.iter(|| black_box(&a).gcd(black_box(&coprime))));
}

fn reachability(c: &mut Criterion) {
    let (fam, seeds) = minimal_ktype_family(&"4".parse().unwrap(), 1).unwrap();
    let at = specialize(&fam, &"1/2".parse().unwrap()).unwrap();
    c.bench_function("generated_submodule/100", |b| {
        b.iter(|| generated_submodule(black_box(&at), &seeds, &Window::radius(100)))
    });
}

criterion_group!(benches, brackets, intertwiners, polynomials, reachability);
criterion_main!(benches);
