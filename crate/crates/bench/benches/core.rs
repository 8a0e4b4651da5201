use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nib_bench::{first_factor, subfields, towers};
use nib_core::cyclotomic::split_prime;
use nib_core::galois_algebra::amitsur_minus_report;
use nib_core::group::all_subgroups;
use nib_core::obstruction::{check_nownib1, nib_split_decision};
use nib_core::resolvent::{pattern_case, verify_valuation_pattern};
use nib_core::stickelberger::minus_part_report;
use nib_core::tower::canonical_split;
use nib_core::units::unit_group;
use nib_core::AbelianGroup;

fn groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("subgroups");
    for n in [91u64, 315, 1365] {
        let ug = unit_group(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ug, |b, ug| b.iter(|| all_subgroups(ug.group()).len()));
    }
    g.finish();
    c.bench_function("subfields/105", |b| b.iter(|| subfields(105).len()));
}

fn splitting(c: &mut Criterion) {
    let mut g = c.benchmark_group("towers");
    for (name, t) in towers() {
        g.bench_function(BenchmarkId::new("canonical_split", name), |b| b.iter(|| canonical_split(&t)));
        g.bench_function(BenchmarkId::new("nib_split", name), |b| b.iter(|| nib_split_decision(&t)));
        g.bench_function(BenchmarkId::new("nownib1", name), |b| b.iter(|| check_nownib1(&t)));
    }
    g.finish();
}

fn primes(c: &mut Criterion) {
    let mut g = c.benchmark_group("split_prime");
    for (p, m) in [(29u64, 7u64), (43, 21), (211, 105)] {
        g.bench_function(BenchmarkId::from_parameter(format!("{p}_in_{m}")), |b| b.iter(|| split_prime(p, m).unwrap()));
    }
    g.finish();
}

fn resolvents(c: &mut Criterion) {
    let mut g = c.benchmark_group("valuation_pattern");
    g.sample_size(10);
    for (ell, p) in [(3u64, 7u64), (5, 11)] {
        let (t, chi) = pattern_case(ell, p).unwrap();
        g.bench_function(BenchmarkId::from_parameter(format!("{ell}_{p}")), |b| {
            b.iter(|| verify_valuation_pattern(&t, &chi, p).unwrap())
        });
    }
    g.finish();
    c.bench_function("minus_part/7_5", |b| b.iter(|| minus_part_report(7, 5).unwrap()));
}

fn amitsur(c: &mut Criterion) {
    let mut g = c.benchmark_group("amitsur");
    for orders in [vec![3u64, 3], vec![5, 5], vec![3, 9]] {
        let grp = AbelianGroup::new(orders.clone());
        let sub = first_factor(&grp);
        g.bench_function(BenchmarkId::from_parameter(format!("{orders:?}")), |b| {
            b.iter(|| amitsur_minus_report(&grp, &sub).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, groups, splitting, primes, resolvents, amitsur);
criterion_main!(benches);
