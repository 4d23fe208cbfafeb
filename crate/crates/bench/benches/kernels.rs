use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shadowsum::identities::{fusion3, SuiteConfig};
use shadowsum::recoupling::{tet, tet_oracle, theta, theta_oracle, ColorTriple, TetLabels};
use shadowsum::shadow::state_sum;
use shadowsum::skein::{bracket_numeric, bracket_with_budget, standard};
use shadowsum::tl::{jones_wenzl, tl_compose, tl_trace};
use shadowsum::{OracleBudget, PhaseSign, RootContext, Shadow};

fn projectors(c: &mut Criterion) {
    let ctx = RootContext::new(9, 1).unwrap();
    let mut g = c.benchmark_group("jones_wenzl");
    for n in [3usize, 4, 5] {
        let f = jones_wenzl(&ctx, n).unwrap();
        g.bench_with_input(BenchmarkId::new("square", n), &f, |b, f| b.iter(|| tl_compose(f, f).unwrap()));
        g.bench_with_input(BenchmarkId::new("trace", n), &f, |b, f| b.iter(|| tl_trace(f)));
    }
    g.finish();
}

fn recoupling(c: &mut Criterion) {
    let ctx = RootContext::new(9, 1).unwrap();
    let t = ColorTriple::new(3, 4, 5);
    let l = TetLabels::new(2, 2, 2, 2, 2, 2);
    let mut g = c.benchmark_group("recoupling");
    g.bench_function("theta closed form", |b| b.iter(|| theta(&ctx, black_box(t))));
    g.bench_function("tet closed form", |b| b.iter(|| tet(&ctx, black_box(l))));
    g.sample_size(10);
    g.bench_function("theta oracle", |b| b.iter(|| theta_oracle(&ctx, black_box(t)).unwrap()));
    g.bench_function("tet oracle", |b| b.iter(|| tet_oracle(&ctx, black_box(l)).unwrap()));
    g.finish();
}

fn state_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("state_sum");
    for r in [5u32, 20, 80] {
        let ctx = RootContext::new(r, 1).unwrap();
        let s = Shadow::genus(2, 3);
        g.bench_with_input(BenchmarkId::new("genus 2", r), &s, |b, s| {
            b.iter(|| state_sum(&ctx, s, PhaseSign::Plus).unwrap())
        });
    }
    g.finish();
}

fn brackets(c: &mut Criterion) {
    let ctx = RootContext::new(5, 1).unwrap();
    let budget = OracleBudget::with_crossings(64);
    let mut g = c.benchmark_group("bracket");
    g.sample_size(10);
    let trefoil = standard::trefoil(2, 0);
    g.bench_function("trefoil color 2 exact", |b| b.iter(|| bracket_with_budget(&ctx, &trefoil, &budget).unwrap()));
    let slid = standard::omega_handleslid_unlink();
    g.bench_function("Ω handleslid unlink", |b| b.iter(|| bracket_numeric(&ctx, &slid, &budget).unwrap()));
    g.finish();
}

fn identities(c: &mut Criterion) {
    let ctx = RootContext::new(5, 1).unwrap();
    let cfg = SuiteConfig {
        max_label_sum: 4,
        ..SuiteConfig::default()
    };
    let mut g = c.benchmark_group("identities");
    g.sample_size(10);
    g.bench_function("3-strand fusion r=5", |b| b.iter(|| fusion3(&ctx, &cfg)));
    g.finish();
}

criterion_group!(benches, projectors, recoupling, state_sums, brackets, identities);
criterion_main!(benches);
