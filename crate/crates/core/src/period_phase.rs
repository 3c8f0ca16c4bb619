//! Periods and phases of scenario realizations.
//!
//! A scenario determines four integers: the start numbers compatible
//! with it form the arithmetic progression `start = start_period * k -
//! start_phase` (k = 1, 2, 3, ...), and the corresponding end numbers
//! form `end = end_period * k - end_phase`. The periods obey
//! `start_period = 2^(σ+δ+1)` and `end_period = 2·3^σ`; the phases
//! depend on the order of the ops and are computed by folding two
//! append rules over the word, starting from the single-spike base
//! quadruple (4, 1, 6, 1).
//!
//! Phase bounds that hold throughout: both phases are odd, each sits
//! strictly between 0 and its period, and the end phase is never a
//! multiple of 3 (so end numbers are never handles).

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedSub, One, Zero};

use crate::engine;
use crate::scenario::{Scenario, ScenarioOp};

/// Errors from period/phase computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodPhaseError {
    /// A computed quadruple broke a bound it is supposed to satisfy;
    /// this signals corrupted input or a transcription bug, never a
    /// property of a valid scenario.
    InvariantViolation { what: &'static str, value: BigUint },
    /// Realization indices are 1-based.
    ZeroIndex,
    /// The brute-force oracle refuses scan spaces past its bound.
    ScenarioTooLong { len: usize, limit: usize },
    /// The brute-force oracle found no start number up to the start
    /// period; for a valid scenario this cannot happen.
    NoRealizationFound { scenario: String },
}

impl fmt::Display for PeriodPhaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodPhaseError::InvariantViolation { what, value } => {
                write!(f, "invariant violation: {what} (value {value})")
            }
            PeriodPhaseError::ZeroIndex => write!(f, "realization index k must be at least 1"),
            PeriodPhaseError::ScenarioTooLong { len, limit } => {
                write!(f, "scenario has {len} ops; oracle bound is {limit}")
            }
            PeriodPhaseError::NoRealizationFound { scenario } => {
                write!(f, "no start number found for scenario {scenario}")
            }
        }
    }
}

impl std::error::Error for PeriodPhaseError {}

static STRICT_CHECKS: AtomicBool = AtomicBool::new(false);

/// Force the per-append invariant checks on in release builds. Debug
/// builds always run them.
pub fn set_strict_checks(on: bool) {
    STRICT_CHECKS.store(on, Ordering::Relaxed);
}

fn checks_enabled() -> bool {
    cfg!(debug_assertions) || STRICT_CHECKS.load(Ordering::Relaxed)
}

/// The quadruple (start period, start phase, end period, end phase)
/// of a scenario.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodPhase {
    pub start_period: BigUint,
    pub start_phase: BigUint,
    pub end_period: BigUint,
    pub end_phase: BigUint,
}

impl fmt::Debug for PeriodPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PeriodPhase({}, {}, {}, {})",
            self.start_period, self.start_phase, self.end_period, self.end_phase
        )
    }
}

/// The k-th concrete (start, end) pair of a scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub index: u64,
    pub start: BigUint,
    pub end: BigUint,
}

fn big(v: u32) -> BigUint {
    BigUint::from(v)
}

impl PeriodPhase {
    pub fn new(
        start_period: BigUint,
        start_phase: BigUint,
        end_period: BigUint,
        end_phase: BigUint,
    ) -> PeriodPhase {
        PeriodPhase {
            start_period,
            start_phase,
            end_period,
            end_phase,
        }
    }

    /// The quadruple of the one-spike scenario `s`: start numbers
    /// `4k - 1`, end numbers `6k - 1`.
    pub fn base() -> PeriodPhase {
        PeriodPhase::new(big(4), big(1), big(6), big(1))
    }

    /// Closed form for the hook `sd^downs`.
    ///
    /// The start period is `2^(downs+2)` and the end period is 6. The
    /// phases depend only on the parity of `downs`: even hooks have
    /// start phase `(2^(downs+1) + 1)/3` and end phase 1, odd hooks
    /// have start phase `(5·2^(downs+1) + 1)/3` and end phase 5.
    pub fn for_hook(downs: u64) -> PeriodPhase {
        let exp = u32::try_from(downs + 1).expect("hook too large");
        let pow = BigUint::from(2u32).pow(exp); // 2^(downs+1)
        let start_period = &pow * 2u32;
        let (start_phase, end_phase) = if downs % 2 == 0 {
            ((pow + 1u32) / 3u32, big(1))
        } else {
            ((pow * 5u32 + 1u32) / 3u32, big(5))
        };
        PeriodPhase::new(start_period, start_phase, big(6), end_phase)
    }

    /// Fold the append rules over a whole scenario word.
    pub fn for_scenario(s: &Scenario) -> Result<PeriodPhase, PeriodPhaseError> {
        let mut pp = PeriodPhase::base(); // the leading spike
        for op in &s.ops()[1..] {
            pp = match op {
                ScenarioOp::Spike => pp.append_spike()?,
                ScenarioOp::Down => pp.append_down()?,
            };
        }
        Ok(pp)
    }

    /// Quadruple of the scenario extended by one spike.
    ///
    /// The branch follows the parity of `(3·end_phase - 1)/2` (an
    /// integer, since the end phase is odd): if odd it is the new end
    /// phase and the start phase is unchanged; if even the start phase
    /// grows by the old start period and the new end phase is
    /// `(3·end_phase + 3·end_period - 1)/2`.
    pub fn append_spike(&self) -> Result<PeriodPhase, PeriodPhaseError> {
        let start_period = &self.start_period << 1;
        let end_period = &self.end_period * 3u32;
        let candidate: BigUint = (&self.end_phase * 3u32 - 1u32) >> 1;
        let next = if candidate.is_odd() {
            PeriodPhase::new(
                start_period,
                self.start_phase.clone(),
                end_period,
                candidate,
            )
        } else {
            let end_phase = (&self.end_phase * 3u32 + &self.end_period * 3u32 - 1u32) >> 1;
            PeriodPhase::new(
                start_period,
                &self.start_phase + &self.start_period,
                end_period,
                end_phase,
            )
        };
        next.checked()
    }

    /// Quadruple of the scenario extended by one down.
    ///
    /// The branch follows the parity of `(end_phase + end_period/2)/2`
    /// (an integer: both terms are odd): if odd it is the new end phase
    /// and the start phase grows by half the start period; if even, the
    /// new phases are `(start_phase + 3·start_period/2)` reduced modulo
    /// the doubled start period and `(end_phase + 3·end_period/2)/2`
    /// reduced modulo the unchanged end period.
    pub fn append_down(&self) -> Result<PeriodPhase, PeriodPhaseError> {
        let start_period = &self.start_period << 1;
        let half_end = &self.end_period >> 1;
        let candidate: BigUint = (&self.end_phase + &half_end) >> 1;
        let next = if candidate.is_odd() {
            let start_phase = &self.start_phase + (&self.start_period >> 1);
            PeriodPhase::new(
                start_period,
                start_phase,
                self.end_period.clone(),
                candidate,
            )
        } else {
            let start_phase = (&self.start_phase + &self.start_period + (&self.start_period >> 1))
                % &start_period;
            let end_phase = ((&self.end_phase + half_end * 3u32) >> 1) % &self.end_period;
            PeriodPhase::new(
                start_period,
                start_phase,
                self.end_period.clone(),
                end_phase,
            )
        };
        next.checked()
    }

    /// The k-th (start, end) pair; k is 1-based.
    pub fn realize(&self, k: u64) -> Result<Realization, PeriodPhaseError> {
        if k == 0 {
            return Err(PeriodPhaseError::ZeroIndex);
        }
        let start = (&self.start_period * k)
            .checked_sub(&self.start_phase)
            .ok_or(PeriodPhaseError::InvariantViolation {
                what: "start phase exceeds start period",
                value: self.start_phase.clone(),
            })?;
        let end = (&self.end_period * k).checked_sub(&self.end_phase).ok_or(
            PeriodPhaseError::InvariantViolation {
                what: "end phase exceeds end period",
                value: self.end_phase.clone(),
            },
        )?;
        Ok(Realization {
            index: k,
            start,
            end,
        })
    }

    /// `|start - end| / end` of the k-th realization, exact.
    pub fn rho_metric(&self, k: u64) -> Result<Ratio<BigUint>, PeriodPhaseError> {
        let r = self.realize(k)?;
        if r.end.is_zero() {
            return Err(PeriodPhaseError::InvariantViolation {
                what: "end number is zero",
                value: r.end,
            });
        }
        let diff = if r.start >= r.end {
            &r.start - &r.end
        } else {
            &r.end - &r.start
        };
        Ok(Ratio::new(diff, r.end))
    }

    /// Bounds every valid quadruple satisfies.
    pub fn validate(&self) -> Result<(), PeriodPhaseError> {
        let violation =
            |what: &'static str, value: &BigUint| PeriodPhaseError::InvariantViolation {
                what,
                value: value.clone(),
            };
        if self.start_period.is_odd() {
            return Err(violation("start period must be even", &self.start_period));
        }
        if self.end_period.is_odd() {
            return Err(violation("end period must be even", &self.end_period));
        }
        if self.start_phase.is_even() {
            return Err(violation("start phase must be odd", &self.start_phase));
        }
        if self.end_phase.is_even() {
            return Err(violation("end phase must be odd", &self.end_phase));
        }
        if self.start_phase.is_zero() || self.start_phase >= self.start_period {
            return Err(violation(
                "start phase out of (0, start period)",
                &self.start_phase,
            ));
        }
        if self.end_phase.is_zero() || self.end_phase >= self.end_period {
            return Err(violation(
                "end phase out of (0, end period)",
                &self.end_phase,
            ));
        }
        if (&self.end_phase % 3u32).is_zero() {
            return Err(violation(
                "end phase must not be divisible by 3",
                &self.end_phase,
            ));
        }
        Ok(())
    }

    fn checked(self) -> Result<PeriodPhase, PeriodPhaseError> {
        if checks_enabled() {
            self.validate()?;
        }
        Ok(self)
    }
}

/// Periods of the concatenation of two scenarios: half the product of
/// the start periods and half the product of the end periods. (No
/// comparable composition rule is known for the phases.)
pub fn concat_periods(a: &PeriodPhase, b: &PeriodPhase) -> (BigUint, BigUint) {
    (
        (&a.start_period * &b.start_period) >> 1,
        (&a.end_period * &b.end_period) >> 1,
    )
}

/// Scan ceiling for [`bruteforce_phase_oracle`]; the search space is
/// `2^(len+1)`.
pub const DEFAULT_ORACLE_MAX_LEN: usize = 20;

/// Independent recomputation of a scenario's quadruple by exhaustive
/// scan: periods from the counting formulas, phases from the smallest
/// odd start value the raw rules accept. Must agree with
/// [`PeriodPhase::for_scenario`] — the append rules never touch this
/// path.
pub fn bruteforce_phase_oracle(s: &Scenario) -> Result<PeriodPhase, PeriodPhaseError> {
    bruteforce_phase_oracle_with_limit(s, DEFAULT_ORACLE_MAX_LEN)
}

/// [`bruteforce_phase_oracle`] with an explicit length bound.
pub fn bruteforce_phase_oracle_with_limit(
    s: &Scenario,
    max_len: usize,
) -> Result<PeriodPhase, PeriodPhaseError> {
    let len = s.op_count();
    if len > max_len {
        return Err(PeriodPhaseError::ScenarioTooLong {
            len,
            limit: max_len,
        });
    }
    let stats = s.stats();
    let start_period = BigUint::from(2u32).pow((stats.spikes + stats.downs + 1) as u32);
    let end_period = BigUint::from(3u32).pow(stats.spikes as u32) * 2u32;

    let mut m = BigUint::one();
    while m <= start_period {
        if let Ok(t) = engine::apply_scenario(&m, s) {
            let start_phase = &start_period - &m;
            let end_phase =
                end_period
                    .checked_sub(t.end())
                    .ok_or(PeriodPhaseError::InvariantViolation {
                        what: "first end number at or above end period",
                        value: t.end().clone(),
                    })?;
            let pp = PeriodPhase::new(start_period, start_phase, end_period, end_phase);
            pp.validate()?;
            return Ok(pp);
        }
        m += 2u32;
    }
    Err(PeriodPhaseError::NoRealizationFound {
        scenario: s.to_string(),
    })
}

/// Render an exact ratio as a rounded decimal string (half away from
/// zero), e.g. `0.4462`.
pub fn ratio_decimal(r: &Ratio<BigUint>, places: usize) -> String {
    let scale = BigUint::from(10u32).pow(places as u32);
    let scaled: BigUint = (r.numer() * &scale + (r.denom() >> 1)) / r.denom();
    let (int_part, frac_part) = scaled.div_rem(&scale);
    if places == 0 {
        int_part.to_string()
    } else {
        format!("{int_part}.{frac_part:0>places$}", places = places)
    }
}

/// Hook-table rows `(downs, quadruple)` for `downs = 0..=max_downs`.
pub fn hook_table(max_downs: u64) -> Vec<(u64, PeriodPhase)> {
    (0..=max_downs)
        .map(|d| (d, PeriodPhase::for_hook(d)))
        .collect()
}

/// The hook table as plain text: a header line, then one
/// space-separated row per hook, all values in decimal.
pub fn hook_table_text(max_downs: u64) -> String {
    let mut out = String::from("delta start_period start_phase end_period end_phase\n");
    for (d, pp) in hook_table(max_downs) {
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            d, pp.start_period, pp.start_phase, pp.end_period, pp.end_phase
        ));
    }
    out
}

/// JSON record of a scenario's quadruple, all numbers as decimal
/// strings.
pub fn period_phase_json(scenario: &Scenario, pp: &PeriodPhase) -> serde_json::Value {
    serde_json::json!({
        "scenario": scenario.compressed(),
        "A_M": pp.start_period.to_string(),
        "B_M": pp.start_phase.to_string(),
        "A_N": pp.end_period.to_string(),
        "B_N": pp.end_phase.to_string(),
    })
}

/// JSON record of a concrete realization, all numbers as decimal
/// strings.
pub fn realization_json(
    scenario: &Scenario,
    pp: &PeriodPhase,
    r: &Realization,
) -> serde_json::Value {
    serde_json::json!({
        "scenario": scenario.compressed(),
        "A_M": pp.start_period.to_string(),
        "B_M": pp.start_phase.to_string(),
        "A_N": pp.end_period.to_string(),
        "B_N": pp.end_phase.to_string(),
        "k": r.index,
        "M_k": r.start.to_string(),
        "N_k": r.end.to_string(),
    })
}
