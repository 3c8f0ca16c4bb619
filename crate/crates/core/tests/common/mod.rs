use collatz_scenarios::{Scenario, ScenarioOp};
use rand::Rng;

/// Uniform random scenario of length 1..=max_len (first op is always a
/// spike).
pub fn random_scenario<R: Rng>(rng: &mut R, max_len: usize) -> Scenario {
    let len = rng.gen_range(1..=max_len);
    let mut ops = vec![ScenarioOp::Spike];
    for _ in 1..len {
        ops.push(if rng.gen_bool(0.5) {
            ScenarioOp::Spike
        } else {
            ScenarioOp::Down
        });
    }
    Scenario::from_ops(ops).unwrap()
}

/// Every scenario with exactly `len` ops, in lexicographic tail order.
pub fn scenarios_of_length(len: usize) -> Vec<Scenario> {
    assert!(len >= 1 && len <= 24);
    let tails = 1u32 << (len - 1);
    (0..tails)
        .map(|bits| {
            let mut ops = vec![ScenarioOp::Spike];
            for i in 0..len - 1 {
                ops.push(if bits >> i & 1 == 1 {
                    ScenarioOp::Spike
                } else {
                    ScenarioOp::Down
                });
            }
            Scenario::from_ops(ops).unwrap()
        })
        .collect()
}
