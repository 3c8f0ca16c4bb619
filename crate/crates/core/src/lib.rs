//! Collatz scenarios as first-class objects.
//!
//! A scenario is a word over `{s, d}` describing the operations a
//! Collatz series performs between two odd integers: `s` is the spike
//! `(3m+1)/2` on an odd value, `d` a halving of an even value. A
//! scenario fixes the arithmetic progressions of all its start and end
//! numbers — the periods and phases — so it can be realized at any
//! index, at any size.
//!
//! The crate provides:
//!
//! - [`scenario`]: parsing and validation of scenario words, including
//!   the compressed form `(s^7d^4)^9`, hook decomposition, and
//!   concatenation;
//! - [`period_phase`]: the period/phase quadruple of a word via hook
//!   closed forms and the two append rules, concrete realizations,
//!   and an independent brute-force oracle;
//! - [`engine`]: the raw rules themselves — the ground truth the rest
//!   of the crate is verified against;
//! - [`handle`]: constructive links placing every integer not divisible
//!   by 3 within 7 raw steps (6 if even) of a handle;
//! - [`series`]: ON/AN series extraction and CSV/SVG export.
//!
//! All arithmetic is arbitrary precision; a 99-op word already drives
//! values past 10^30.
//!
//! ```
//! use collatz_scenarios::{apply_scenario, PeriodPhase, Scenario};
//!
//! let s = Scenario::parse("sdsdd")?;
//! let pp = PeriodPhase::for_scenario(&s)?;
//! assert_eq!(pp.start_period.to_string(), "64");
//! assert_eq!(pp.start_phase.to_string(), "47");
//!
//! // the second start number is 64·2 − 47 = 81, and replaying the word
//! // lands exactly on the predicted end number 18·2 − 13 = 23
//! let r = pp.realize(2)?;
//! let t = apply_scenario(&r.start, &s)?;
//! assert_eq!(t.end(), &r.end);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod engine;
pub mod handle;
pub mod period_phase;
pub mod scenario;
pub mod series;

// re-exported so callers name the arithmetic types we hand out
pub use num_bigint::BigUint;
pub use num_rational::Ratio;

pub use engine::{
    apply_scenario, check_realization, classify_rc, expand_steps, extract_scenario,
    extract_scenario_with, is_handle, verify_realization, EngineError, Extraction, ResidueClass,
    StepOp, StopRule, Trajectory,
};
pub use handle::{
    link, link_even, link_odd, sweep_verify, verify_link, HandleLink, LinkError, LinkProvenance,
    SweepFailure, SweepReport,
};
pub use period_phase::{
    bruteforce_phase_oracle, bruteforce_phase_oracle_with_limit, concat_periods, hook_table,
    hook_table_text, period_phase_json, ratio_decimal, realization_json, set_strict_checks,
    PeriodPhase, PeriodPhaseError, Realization,
};
pub use scenario::{Hook, Scenario, ScenarioError, ScenarioOp, ScenarioStats};
pub use series::{
    an_series, on_series, read_csv, write_csv, write_svg, write_svg_single, SeriesPoint, SvgOptions,
};
