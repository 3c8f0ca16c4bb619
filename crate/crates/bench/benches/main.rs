use criterion::{black_box, criterion_group, criterion_main, Criterion};

use collatz_scenarios::{
    apply_scenario, bruteforce_phase_oracle, hook_table, link, sweep_verify, BigUint, PeriodPhase,
    Scenario,
};

const BIG_WORD: &str = "(s^7d^4)^9";

fn bench_parse(c: &mut Criterion) {
    c.bench_function("parse 99-op word", |b| {
        b.iter(|| Scenario::parse(black_box(BIG_WORD)).unwrap())
    });
}

fn bench_period_phase(c: &mut Criterion) {
    let s = Scenario::parse(BIG_WORD).unwrap();
    c.bench_function("periods+phases of 99-op word", |b| {
        b.iter(|| PeriodPhase::for_scenario(black_box(&s)).unwrap())
    });
    c.bench_function("hook table to delta=15", |b| {
        b.iter(|| hook_table(black_box(15)))
    });
}

fn bench_simulation(c: &mut Criterion) {
    let s = Scenario::parse(BIG_WORD).unwrap();
    let r = PeriodPhase::for_scenario(&s).unwrap().realize(1).unwrap();
    c.bench_function("replay 99-op word at 10^29 scale", |b| {
        b.iter(|| apply_scenario(black_box(&r.start), black_box(&s)).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let s = Scenario::parse("sdsdsdsdds").unwrap();
    c.bench_function("brute-force oracle, 10-op word", |b| {
        b.iter(|| bruteforce_phase_oracle(black_box(&s)).unwrap())
    });
}

fn bench_links(c: &mut Criterion) {
    c.bench_function("link one large target", |b| {
        let n = BigUint::from(982_451_653u64);
        b.iter(|| link(black_box(&n)).unwrap())
    });
    c.bench_function("sweep to 10^4", |b| {
        b.iter(|| sweep_verify(black_box(10_000)))
    });
}

criterion_group!(
    benches,
    bench_parse,
    bench_period_phase,
    bench_simulation,
    bench_oracle,
    bench_links
);
criterion_main!(benches);
