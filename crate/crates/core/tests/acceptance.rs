//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS line (a panic is the FAIL line). Run with `--nocapture` to see
//! the lines on success:
//!
//! ```text
//! cargo test -p collatz-scenarios --test acceptance -- --nocapture
//! ```

mod common;

use std::time::{Duration, Instant};

use collatz_scenarios::{
    apply_scenario, bruteforce_phase_oracle, classify_rc, hook_table_text, is_handle, link_even,
    link_odd, sweep_verify, verify_link, verify_realization, PeriodPhase, Ratio, ResidueClass,
    Scenario,
};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn word(text: &str) -> Scenario {
    Scenario::parse(text).unwrap()
}

fn quad(pp: &PeriodPhase) -> (u64, u64, u64, u64) {
    (
        (&pp.start_period).try_into().unwrap(),
        (&pp.start_phase).try_into().unwrap(),
        (&pp.end_period).try_into().unwrap(),
        (&pp.end_phase).try_into().unwrap(),
    )
}

const HOOK_TABLE_GOLDEN: &str = "\
delta start_period start_phase end_period end_phase
0 4 1 6 1
1 8 7 6 5
2 16 3 6 1
3 32 27 6 5
4 64 11 6 1
5 128 107 6 5
6 256 43 6 1
7 512 427 6 5
8 1024 171 6 1
9 2048 1707 6 5
10 4096 683 6 1
11 8192 6827 6 5
12 16384 2731 6 1
13 32768 27307 6 5
14 65536 10923 6 1
15 131072 109227 6 5
";

#[test]
fn criterion_1_hook_table() {
    let started = Instant::now();
    let text = hook_table_text(15);
    let elapsed = started.elapsed();
    assert_eq!(text, HOOK_TABLE_GOLDEN, "hook table rows differ");
    assert!(
        elapsed < Duration::from_millis(100),
        "hook table took {elapsed:?}"
    );
    println!("criterion 1 (hook table, 16 rows, {elapsed:?}): PASS");
}

#[test]
fn criterion_2_big_word_reproduction() {
    let started = Instant::now();
    let s = word("(s^7d^4)^9");
    let pp = PeriodPhase::for_scenario(&s).unwrap();
    let realizations: Vec<_> = (1..=3).map(|k| pp.realize(k).unwrap()).collect();
    let elapsed = started.elapsed();

    assert_eq!(
        pp.start_period.to_string(),
        "1267650600228229401496703205376"
    );
    assert_eq!(
        pp.start_phase.to_string(),
        "1039655887956965120651972413057"
    );
    assert_eq!(pp.end_period.to_string(), "2289122546861674989771899392854");
    assert_eq!(pp.end_phase.to_string(), "1877409858577201070748176480485");
    let expected = [
        (
            "227994712271264280844730792319",
            "411712688284473919023722912369",
        ),
        (
            "1495645312499493682341433997695",
            "2700835235146148908795622305223",
        ),
        (
            "2763295912727723083838137203071",
            "4989957782007823898567521698077",
        ),
    ];
    for (r, (m, n)) in realizations.iter().zip(expected) {
        assert_eq!(r.start.to_string(), m, "start of realization {}", r.index);
        assert_eq!(r.end.to_string(), n, "end of realization {}", r.index);
    }
    assert!(
        elapsed < Duration::from_millis(100),
        "computation took {elapsed:?}"
    );
    println!("criterion 2 (99-op word periods/phases + 3 realizations, {elapsed:?}): PASS");
}

#[test]
fn criterion_3_figure_formulas() {
    let cases = [
        ("ssd", (16, 5, 18, 5)),
        ("sdsdd", (64, 47, 18, 13)),
        ("sdds", (32, 3, 18, 1)),
        ("ssdd", (32, 13, 18, 7)),
        ("ssdsdd", (128, 117, 54, 49)),
        ("sdsdds", (128, 47, 54, 19)),
        ("ssdsdds", (256, 117, 162, 73)),
    ];
    for (text, expected) in cases {
        let pp = PeriodPhase::for_scenario(&word(text)).unwrap();
        assert_eq!(quad(&pp), expected, "scenario {text}");
    }
    println!("criterion 3 (seven hook-composition formulas): PASS");
}

#[test]
fn criterion_4_simulation_equivalence() {
    let mut rng = StdRng::seed_from_u64(0x5EED_0004);
    let mut runs = 0usize;
    for _ in 0..500 {
        let s = common::random_scenario(&mut rng, 24);
        for k in 1..=40 {
            assert!(verify_realization(&s, k), "scenario {s} k={k}");
            runs += 1;
        }
    }
    assert_eq!(runs, 20_000);
    println!("criterion 4 (500 scenarios x k=1..40 replay exactly): PASS");
}

#[test]
fn criterion_5_oracle_equivalence() {
    let started = Instant::now();
    let mut checked = 0usize;
    for len in 1..=12 {
        for s in common::scenarios_of_length(len) {
            let oracle = bruteforce_phase_oracle(&s).unwrap();
            let computed = PeriodPhase::for_scenario(&s).unwrap();
            assert_eq!(oracle, computed, "scenario {s}");
            checked += 1;
        }
    }
    assert_eq!(checked, 4095); // every word of length <= 12
    let mut rng = StdRng::seed_from_u64(0x5EED_0005);
    for _ in 0..100 {
        let s = common::random_scenario(&mut rng, 16);
        let oracle = bruteforce_phase_oracle(&s).unwrap();
        let computed = PeriodPhase::for_scenario(&s).unwrap();
        assert_eq!(oracle, computed, "scenario {s}");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "oracle sweep took {elapsed:?}"
    );
    println!(
        "criterion 5 (oracle = append rules on 4095 exhaustive + 100 random words, {elapsed:?}): PASS"
    );
}

#[test]
fn criterion_6_handle_sweep() {
    let report = sweep_verify(1_000_000);
    assert!(
        report.failures.is_empty(),
        "failures: {:?}",
        &report.failures[..report.failures.len().min(5)]
    );
    assert_eq!(report.odd_max_steps, 7);
    assert_eq!(report.even_max_steps, 6);
    assert!(
        report.duration < Duration::from_secs(30),
        "sweep took {:?}",
        report.duration
    );
    println!(
        "criterion 6 (sweep to 10^6: odd<=7, even<=6, 0 failures, {:?}): PASS",
        report.duration
    );
}

#[test]
fn criterion_7_handle_tables() {
    // (downs, steps, [(k, start, end)] for p = 0, 1, 2)
    let rows: [(u64, u64, [(u64, u64, u64); 3]); 6] = [
        (0, 2, [(1, 3, 5), (4, 15, 23), (7, 27, 41)]),
        (1, 3, [(2, 9, 7), (5, 33, 25), (8, 57, 43)]),
        (2, 4, [(3, 45, 17), (6, 93, 35), (9, 141, 53)]),
        (3, 5, [(3, 69, 13), (6, 165, 31), (9, 261, 49)]),
        (4, 6, [(2, 117, 11), (5, 309, 29), (8, 501, 47)]),
        (5, 7, [(1, 21, 1), (4, 405, 19), (7, 789, 37)]),
    ];
    for (downs, steps, cells) in rows {
        let pp = PeriodPhase::for_hook(downs);
        let base_k = cells[0].0;
        for (p, (k, m, n)) in cells.into_iter().enumerate() {
            assert_eq!(k, base_k + 3 * p as u64, "hook {downs} p={p}");
            let r = pp.realize(k).unwrap();
            assert_eq!(r.start, big(m), "hook {downs} p={p}");
            assert_eq!(r.end, big(n), "hook {downs} p={p}");
            assert!(is_handle(&r.start), "hook {downs} p={p}");
            // the link for this end value must be exactly this table row
            let l = link_odd(&r.end).unwrap();
            assert_eq!(l.handle, r.start, "hook {downs} p={p}");
            assert_eq!(l.steps, steps, "hook {downs} p={p}");
            assert!(verify_link(&l));
        }
    }
    // the table link is not minimal: 19 is linked via 405 in 7 steps,
    // while the handle 33 reaches it in 6 steps via sdsd
    let l = link_odd(&big(19)).unwrap();
    assert_eq!(l.handle, big(405));
    assert_eq!(l.steps, 7);
    let t = apply_scenario(&big(33), &word("sdsd")).unwrap();
    assert!(is_handle(&big(33)));
    assert_eq!(t.end(), &big(19));
    assert_eq!(t.step_count(), 6);
    println!("criterion 7 (handle tables p=0,1,2 + non-minimality regression): PASS");
}

#[test]
fn criterion_8_rho_metric() {
    let in_range = |rho: &Ratio<BigUint>, lo: (u64, u64), hi: (u64, u64)| {
        *rho >= Ratio::new(big(lo.0), big(lo.1)) && *rho <= Ratio::new(big(hi.0), big(hi.1))
    };
    let rho = PeriodPhase::for_scenario(&word("(s^7d^4)^9"))
        .unwrap()
        .rho_metric(1)
        .unwrap();
    // 0.45 +/- 0.005
    assert!(in_range(&rho, (445, 1000), (455, 1000)), "rho = {rho}");
    let rho = PeriodPhase::for_scenario(&word("s^7d^4"))
        .unwrap()
        .rho_metric(1)
        .unwrap();
    // 0.064 +/- 0.0005
    assert!(in_range(&rho, (635, 10_000), (645, 10_000)), "rho = {rho}");
    println!("criterion 8 (rho 0.45 +/- 0.005 and 0.064 +/- 0.0005): PASS");
}

#[test]
fn criterion_9_residue_invariants() {
    let mut rng = StdRng::seed_from_u64(0x5EED_0009);
    for _ in 0..1000 {
        let s = common::random_scenario(&mut rng, 20);
        let k = rng.gen_range(1..=50u64);
        let p = rng.gen_range(1..=6u64);
        let pp = PeriodPhase::for_scenario(&s).unwrap();
        let r = pp.realize(k).unwrap();

        // end residue is fixed by the parity of the last hook
        let last_even = s.hooks().last().unwrap().is_even();
        let expected = if last_even {
            ResidueClass::Two
        } else {
            ResidueClass::One
        };
        assert_eq!(classify_rc(&r.end), expected, "scenario {s} k={k}");

        // residues of start and end are stable under k -> k + 3p
        let shifted = pp.realize(k + 3 * p).unwrap();
        assert_eq!(
            classify_rc(&r.start),
            classify_rc(&shifted.start),
            "scenario {s} k={k} p={p}"
        );
        assert_eq!(
            classify_rc(&r.end),
            classify_rc(&shifted.end),
            "scenario {s} k={k} p={p}"
        );
    }
    println!("criterion 9 (end residue by last hook parity; residue stability in k+3p): PASS");
}

#[test]
fn even_links_cover_both_residue_families() {
    // spot checks behind criterion 6: one target per even family rule
    for (n, handle, steps) in [
        (28u64, 9u64, 1u64),
        (16, 21, 3),
        (4, 21, 5),
        (32, 21, 2),
        (8, 21, 4),
        (20, 213, 6),
        (2, 21, 6),
        (10, 3, 1),
    ] {
        let l = link_even(&big(n)).unwrap();
        assert_eq!(l.handle, big(handle), "n={n}");
        assert_eq!(l.steps, steps, "n={n}");
        assert!(verify_link(&l), "n={n}");
    }
}
