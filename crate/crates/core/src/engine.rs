//! The raw Collatz rules: `3m+1` on odd values, `m/2` on even values.
//!
//! Everything else in this crate is checked against this module. It
//! applies scenarios step by step, extracts the scenario a start number
//! follows, classifies residues mod 3, and recognizes handles (odd
//! multiples of 3, which pin down their series in both directions).

use std::fmt;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::period_phase::{PeriodPhase, PeriodPhaseError, Realization};
use crate::scenario::{Scenario, ScenarioError, ScenarioOp};

/// Residue of an integer mod 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueClass {
    Zero,
    One,
    Two,
}

impl ResidueClass {
    pub fn of(n: &BigUint) -> ResidueClass {
        match (n % 3u32).to_u32_digits().first().copied().unwrap_or(0) {
            0 => ResidueClass::Zero,
            1 => ResidueClass::One,
            _ => ResidueClass::Two,
        }
    }

    pub fn rem(self) -> u32 {
        match self {
            ResidueClass::Zero => 0,
            ResidueClass::One => 1,
            ResidueClass::Two => 2,
        }
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RC{}", self.rem())
    }
}

/// Residue class of `n` mod 3.
pub fn classify_rc(n: &BigUint) -> ResidueClass {
    ResidueClass::of(n)
}

/// True iff `n` is odd and divisible by 3.
pub fn is_handle(n: &BigUint) -> bool {
    n.is_odd() && ResidueClass::of(n) == ResidueClass::Zero
}

/// One raw step: `u` is `3m+1`, `d` is `m/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepOp {
    Up,
    Down,
}

impl StepOp {
    pub fn symbol(self) -> char {
        match self {
            StepOp::Up => 'u',
            StepOp::Down => 'd',
        }
    }
}

/// Expand a scenario word into raw steps: each spike is `u` then `d`,
/// each down is `d`. The result has `2σ + δ` entries.
pub fn expand_steps(s: &Scenario) -> Vec<StepOp> {
    let mut steps = Vec::with_capacity(s.raw_step_count() as usize);
    for op in s.ops() {
        match op {
            ScenarioOp::Spike => {
                steps.push(StepOp::Up);
                steps.push(StepOp::Down);
            }
            ScenarioOp::Down => steps.push(StepOp::Down),
        }
    }
    steps
}

/// Apply one raw step if its parity precondition holds.
pub fn try_step(op: StepOp, n: &BigUint) -> Option<BigUint> {
    match op {
        StepOp::Up if n.is_odd() => Some(n * 3u32 + 1u32),
        StepOp::Down if n.is_even() => Some(n >> 1),
        _ => None,
    }
}

/// Default cap on values stored in a [`Trajectory`]; the step count and
/// final value keep tracking past it.
pub const DEFAULT_VALUE_CAP: usize = 100_000;

/// Default raw-op budget for [`extract_scenario`].
pub const DEFAULT_OPS_BUDGET: usize = 1_000_000;

/// Errors from raw-rule simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    /// The start value of a scenario application must be odd.
    StartNotOdd { value: BigUint },
    /// The value is not a start number of the scenario: a step's parity
    /// precondition failed after `steps_done` raw ops, or (with
    /// `steps_done` equal to the full raw step count) the final value
    /// came out even.
    ScenarioMismatch { steps_done: usize, value: BigUint },
    /// The end value of a realization did not match the predicted one.
    EndMismatch { expected: BigUint, actual: BigUint },
    /// Raw-op budget exhausted before the stop rule was satisfied.
    BudgetExceeded { steps_done: usize },
    /// Stop rule would produce an empty word (zero spikes or zero ops).
    InvalidStopRule,
    /// Period/phase computation failed while checking a realization.
    Phase(PeriodPhaseError),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::StartNotOdd { value } => {
                write!(
                    f,
                    "start value {value} is even; scenarios start on odd values"
                )
            }
            EngineError::ScenarioMismatch { steps_done, value } => write!(
                f,
                "scenario does not apply: stuck at value {value} after {steps_done} raw steps"
            ),
            EngineError::EndMismatch { expected, actual } => {
                write!(
                    f,
                    "end value mismatch: predicted {expected}, simulated {actual}"
                )
            }
            EngineError::BudgetExceeded { steps_done } => {
                write!(f, "op budget exhausted after {steps_done} raw steps")
            }
            EngineError::InvalidStopRule => write!(f, "stop rule must ask for at least one op"),
            EngineError::Phase(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EngineError {}

impl From<PeriodPhaseError> for EngineError {
    fn from(e: PeriodPhaseError) -> EngineError {
        EngineError::Phase(e)
    }
}

/// The integer sequence produced by raw steps, with per-step labels.
///
/// Values are stored up to a cap; past it only the step count and the
/// final value keep tracking, and the trajectory reports itself as
/// truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    values: Vec<BigUint>,
    steps: Vec<StepOp>,
    step_count: usize,
    end: BigUint,
}

impl Trajectory {
    pub fn start(&self) -> &BigUint {
        &self.values[0]
    }

    pub fn end(&self) -> &BigUint {
        &self.end
    }

    /// Total raw steps taken, including any past the storage cap.
    pub fn step_count(&self) -> usize {
        self.step_count
    }

    /// Stored values, starting with the start value.
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// Stored step labels; `steps()[i]` produced `values()[i+1]`.
    pub fn steps(&self) -> &[StepOp] {
        &self.steps
    }

    pub fn is_truncated(&self) -> bool {
        self.step_count > self.steps.len()
    }

    /// Write the stored prefix as CSV with columns `step,op,value`;
    /// the start row carries `·` in the op column.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "step,op,value")?;
        for (i, value) in self.values.iter().enumerate() {
            let op = if i == 0 {
                '·'
            } else {
                self.steps[i - 1].symbol()
            };
            writeln!(w, "{i},{op},{value}")?;
        }
        Ok(())
    }
}

struct Recorder {
    values: Vec<BigUint>,
    steps: Vec<StepOp>,
    step_count: usize,
    current: BigUint,
    cap: usize,
    seen_up: bool,
}

impl Recorder {
    fn new(start: BigUint, cap: usize) -> Recorder {
        Recorder {
            values: vec![start.clone()],
            steps: Vec::new(),
            step_count: 0,
            current: start,
            cap: cap.max(1),
            seen_up: false,
        }
    }

    fn apply(&mut self, op: StepOp) -> Result<(), EngineError> {
        let next = try_step(op, &self.current).ok_or(EngineError::ScenarioMismatch {
            steps_done: self.step_count,
            value: self.current.clone(),
        })?;
        if op == StepOp::Up {
            // 3m+1 on odd m is even and RC1; RC0 values cannot appear
            // once an up step has been made.
            debug_assert!(next.is_even());
            debug_assert_eq!(ResidueClass::of(&next), ResidueClass::One);
            self.seen_up = true;
        }
        debug_assert!(!(self.seen_up && ResidueClass::of(&next) == ResidueClass::Zero));
        self.step_count += 1;
        if self.values.len() < self.cap {
            self.values.push(next.clone());
            self.steps.push(op);
        }
        self.current = next;
        Ok(())
    }

    fn finish(self) -> Trajectory {
        Trajectory {
            values: self.values,
            steps: self.steps,
            step_count: self.step_count,
            end: self.current,
        }
    }
}

/// Run a scenario from `start`, step-checking every op.
///
/// Fails with [`EngineError::ScenarioMismatch`] unless every spike lands
/// on an odd value, every down on an even value, and the final value is
/// odd — i.e. unless `start` is a start number of `s`.
pub fn apply_scenario(start: &BigUint, s: &Scenario) -> Result<Trajectory, EngineError> {
    apply_scenario_with_cap(start, s, DEFAULT_VALUE_CAP)
}

/// [`apply_scenario`] with an explicit trajectory storage cap.
pub fn apply_scenario_with_cap(
    start: &BigUint,
    s: &Scenario,
    cap: usize,
) -> Result<Trajectory, EngineError> {
    if start.is_even() {
        return Err(EngineError::StartNotOdd {
            value: start.clone(),
        });
    }
    let mut rec = Recorder::new(start.clone(), cap);
    for op in s.ops() {
        match op {
            ScenarioOp::Spike => {
                rec.apply(StepOp::Up)?;
                rec.apply(StepOp::Down)?;
            }
            ScenarioOp::Down => rec.apply(StepOp::Down)?,
        }
    }
    if rec.current.is_even() {
        return Err(EngineError::ScenarioMismatch {
            steps_done: rec.step_count,
            value: rec.current,
        });
    }
    Ok(rec.finish())
}

/// When to stop extracting a scenario from a start number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopRule {
    /// Stop when the value 1 is reached (after at least one op).
    UntilOne,
    /// Stop at the first odd value once this many spikes have run, so
    /// the word closes its last hook.
    Spikes(u64),
    /// Stop at the first op boundary at or past this raw step count.
    Steps(usize),
}

/// A scenario read off a trajectory.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub scenario: Scenario,
    pub trajectory: Trajectory,
}

/// Run the raw rules from an odd start, recording `s` on odd values and
/// `d` on even values, until the stop rule fires. Defaults: raw-op
/// budget [`DEFAULT_OPS_BUDGET`], value cap [`DEFAULT_VALUE_CAP`].
pub fn extract_scenario(start: &BigUint, stop: StopRule) -> Result<Extraction, EngineError> {
    extract_scenario_with(start, stop, DEFAULT_OPS_BUDGET, DEFAULT_VALUE_CAP)
}

/// [`extract_scenario`] with explicit raw-op budget and storage cap.
pub fn extract_scenario_with(
    start: &BigUint,
    stop: StopRule,
    budget: usize,
    cap: usize,
) -> Result<Extraction, EngineError> {
    if start.is_even() {
        return Err(EngineError::StartNotOdd {
            value: start.clone(),
        });
    }
    match stop {
        StopRule::Spikes(0) | StopRule::Steps(0) => return Err(EngineError::InvalidStopRule),
        _ => {}
    }
    let one = BigUint::one();
    let mut rec = Recorder::new(start.clone(), cap);
    let mut word: Vec<ScenarioOp> = Vec::new();
    let mut spikes: u64 = 0;
    loop {
        let done = match stop {
            StopRule::UntilOne => rec.step_count > 0 && rec.current == one,
            StopRule::Spikes(n) => spikes >= n && rec.current.is_odd(),
            StopRule::Steps(n) => rec.step_count >= n,
        };
        if done {
            break;
        }
        if rec.step_count >= budget {
            return Err(EngineError::BudgetExceeded {
                steps_done: rec.step_count,
            });
        }
        if rec.current.is_odd() {
            rec.apply(StepOp::Up)?;
            rec.apply(StepOp::Down)?;
            word.push(ScenarioOp::Spike);
            spikes += 1;
        } else {
            rec.apply(StepOp::Down)?;
            word.push(ScenarioOp::Down);
        }
    }
    // start is odd, so the word opens with a spike
    let scenario = Scenario::from_ops(word).map_err(|e| match e {
        ScenarioError::Empty => EngineError::InvalidStopRule,
        _ => unreachable!("extracted word starts with a spike"),
    })?;
    Ok(Extraction {
        scenario,
        trajectory: rec.finish(),
    })
}

/// Realize the k-th start number of `s` and replay the scenario through
/// the raw rules, checking that it lands exactly on the predicted end
/// number.
pub fn check_realization(s: &Scenario, k: u64) -> Result<Realization, EngineError> {
    let pp = PeriodPhase::for_scenario(s)?;
    let r = pp.realize(k)?;
    let t = apply_scenario(&r.start, s)?;
    if t.end() != &r.end {
        return Err(EngineError::EndMismatch {
            expected: r.end.clone(),
            actual: t.end().clone(),
        });
    }
    Ok(r)
}

/// True iff the k-th realization of `s` simulates cleanly end to end.
pub fn verify_realization(s: &Scenario, k: u64) -> bool {
    check_realization(s, k).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn word(text: &str) -> Scenario {
        Scenario::parse(text).unwrap()
    }

    #[test]
    fn residue_classes() {
        assert_eq!(classify_rc(&n(6)), ResidueClass::Zero);
        assert_eq!(classify_rc(&n(7)), ResidueClass::One);
        assert_eq!(classify_rc(&n(8)), ResidueClass::Two);
        assert_eq!(classify_rc(&n(6)).to_string(), "RC0");
    }

    #[test]
    fn handles_are_odd_multiples_of_three() {
        assert!(is_handle(&n(9)));
        assert!(is_handle(&n(21)));
        assert!(!is_handle(&n(7)));
        assert!(!is_handle(&n(12)));
    }

    #[test]
    fn apply_spike_pairs() {
        let t = apply_scenario(&n(7), &word("ss")).unwrap();
        let values: Vec<u64> = t.values().iter().map(|v| v.try_into().unwrap()).collect();
        assert_eq!(values, vec![7, 22, 11, 34, 17]);
        assert_eq!(t.step_count(), 4);
        assert_eq!(
            t.steps(),
            &[StepOp::Up, StepOp::Down, StepOp::Up, StepOp::Down]
        );
    }

    #[test]
    fn apply_trivial_cycle() {
        let t = apply_scenario(&n(1), &word("sd")).unwrap();
        let values: Vec<u64> = t.values().iter().map(|v| v.try_into().unwrap()).collect();
        assert_eq!(values, vec![1, 4, 2, 1]);
    }

    #[test]
    fn apply_detects_mismatch() {
        // 9 -> 28 -> 14 -> 7; the second halving hits the odd value 7
        let err = apply_scenario(&n(9), &word("sdd")).unwrap_err();
        assert_eq!(
            err,
            EngineError::ScenarioMismatch {
                steps_done: 3,
                value: n(7)
            }
        );
    }

    #[test]
    fn apply_rejects_even_final_value() {
        // 21 -> 64 -> 32 -> 16 ends even, so 21 is not a start number of sd
        let err = apply_scenario(&n(21), &word("sd")).unwrap_err();
        assert_eq!(
            err,
            EngineError::ScenarioMismatch {
                steps_done: 3,
                value: n(16)
            }
        );
    }

    #[test]
    fn apply_rejects_even_start() {
        assert!(matches!(
            apply_scenario(&n(8), &word("s")),
            Err(EngineError::StartNotOdd { .. })
        ));
    }

    #[test]
    fn extract_until_one() {
        let ex = extract_scenario(&n(9), StopRule::UntilOne).unwrap();
        assert_eq!(ex.scenario.to_string(), "sdsssdsddsddd");
        assert_eq!(ex.trajectory.end(), &n(1));
    }

    #[test]
    fn extract_trivial_cycle_by_spike_count() {
        let ex = extract_scenario(&n(1), StopRule::Spikes(1)).unwrap();
        assert_eq!(ex.scenario.to_string(), "sd");
        let ex = extract_scenario(&n(1), StopRule::UntilOne).unwrap();
        assert_eq!(ex.scenario.to_string(), "sd");
    }

    #[test]
    fn extract_spike_stop_closes_last_hook() {
        // 9 -> 14 -> 7: one spike, then the down that reaches an odd value
        let ex = extract_scenario(&n(9), StopRule::Spikes(1)).unwrap();
        assert_eq!(ex.scenario.to_string(), "sd");
        assert_eq!(ex.trajectory.end(), &n(7));
    }

    #[test]
    fn extract_step_stop() {
        let ex = extract_scenario(&n(9), StopRule::Steps(3)).unwrap();
        assert_eq!(ex.trajectory.step_count(), 3);
        assert_eq!(ex.scenario.to_string(), "sd");
    }

    #[test]
    fn extract_budget_exhaustion() {
        let err =
            extract_scenario_with(&n(27), StopRule::UntilOne, 10, DEFAULT_VALUE_CAP).unwrap_err();
        assert!(matches!(err, EngineError::BudgetExceeded { .. }));
    }

    #[test]
    fn extract_rejects_empty_stop() {
        assert_eq!(
            extract_scenario(&n(9), StopRule::Spikes(0)).unwrap_err(),
            EngineError::InvalidStopRule
        );
    }

    #[test]
    fn trajectory_cap_truncates_storage_only() {
        let ex = extract_scenario_with(&n(9), StopRule::UntilOne, 1_000_000, 5).unwrap();
        assert!(ex.trajectory.is_truncated());
        assert_eq!(ex.trajectory.values().len(), 5);
        assert_eq!(ex.trajectory.step_count(), 19);
        assert_eq!(ex.trajectory.end(), &n(1));
    }

    #[test]
    fn csv_export() {
        let t = apply_scenario(&n(1), &word("sd")).unwrap();
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "step,op,value\n0,·,1\n1,u,4\n2,d,2\n3,d,1\n"
        );
    }

    #[test]
    fn verify_realizations_of_small_scenarios() {
        for k in 1..=10 {
            assert!(verify_realization(&word("ssd"), k), "ssd k={k}");
        }
        assert!(verify_realization(&word("sd"), 1));
        let r = check_realization(&word("sdds"), 5).unwrap();
        assert_eq!(r.start, n(157));
        assert_eq!(r.end, n(89));
    }

    #[test]
    fn expand_steps_counts() {
        let s = word("sdsdd");
        let steps = expand_steps(&s);
        assert_eq!(steps.len(), 7);
        assert_eq!(steps[0], StepOp::Up);
    }
}
