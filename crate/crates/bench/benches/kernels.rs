use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use kasep_core::limits::e_mu_estimate;
use kasep_core::sampling::{random_polynomial, rng};
use kasep_core::{
    evaluate_fock, lambda0, nonsymmetric_e, symmetric_p, BigFloat, Composition, HeckeContext, LimitConfig, ParameterPoint,
    Params, Rational,
};

const PREC: usize = 256;

fn bf(n: i64, d: i64) -> BigFloat {
    BigFloat::from_rational(&Rational::new(n, d), PREC)
}

fn hecke(c: &mut Criterion) {
    let h = HeckeContext::exact(&ParameterPoint::default_point(), 3).unwrap();
    let f = random_polynomial(&mut rng(1), 3, 3, 12);
    let mut g = c.benchmark_group("hecke_apply_t");
    for i in 0..=3 {
        g.bench_with_input(BenchmarkId::from_parameter(i), &i, |b, &i| b.iter(|| h.apply_t(i, false, black_box(&f)).unwrap()));
    }
    g.finish();
}

fn koornwinder(c: &mut Criterion) {
    let pt = ParameterPoint::default_point();
    let mut g = c.benchmark_group("koornwinder");
    g.sample_size(10);
    for (n, m) in [(2usize, 1usize), (2, 2), (3, 1)] {
        let h = HeckeContext::exact(&pt, n).unwrap();
        let lambda = Composition::constant(-(m as i32), n);
        g.bench_function(format!("nonsym N={n} m={m}"), |b| b.iter(|| nonsymmetric_e(&h, &lambda).unwrap()));
        let p = Params::<Rational>::from_point(&pt, &());
        g.bench_function(format!("sym N={n} m={m}"), |b| b.iter(|| symmetric_p(&p, n, m).unwrap()));
    }
    g.finish();
}

fn matrix_product(c: &mut Criterion) {
    let p = Params::<BigFloat>::from_point(&ParameterPoint::default_point(), &PREC);
    let x = [bf(1, 2), bf(3, 5)];
    let mut g = c.benchmark_group("fock_eval N=2 m=1");
    g.sample_size(10);
    for k in [16usize, 32, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| b.iter(|| evaluate_fock(&p, &x, 1, k, false).unwrap()));
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let p = Params::<BigFloat>::from_point(&ParameterPoint::physical_point(), &PREC);
    let mut g = c.benchmark_group("lambda0");
    for n in [2usize, 3, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| lambda0(&p, n, &bf(3, 2)).unwrap()));
    }
    g.finish();
}

fn limits(c: &mut Criterion) {
    let p = Params::<BigFloat>::from_point(&ParameterPoint::physical_point(), &PREC);
    let cfg = LimitConfig::default();
    let mut g = c.benchmark_group("e_mu_estimate");
    g.sample_size(10);
    for n in [2usize, 3] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| e_mu_estimate(&p, n, &bf(1, 10), &cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, hecke, koornwinder, matrix_product, spectrum, limits);
criterion_main!(benches);
