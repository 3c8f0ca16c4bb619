//! Linking integers to handles.
//!
//! Every integer not divisible by 3 lies a few raw steps downstream of
//! a handle (an odd multiple of 3): at most 7 steps for odd targets, at
//! most 6 for even ones. The link is constructed by residue arithmetic
//! alone — odd targets pick a hook row by their residue mod 18, even
//! targets split into the doubled-odd case and six direct families —
//! and is then re-verified by raw simulation.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::engine::{expand_steps, is_handle, try_step};
use crate::scenario::{Hook, Scenario};

/// Errors from link construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkError {
    NotOdd {
        value: BigUint,
    },
    NotEven {
        value: BigUint,
    },
    /// Even multiples of 3 have no link; odd ones are themselves handles.
    ResidueZero {
        value: BigUint,
    },
    Zero,
}

impl fmt::Display for LinkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkError::NotOdd { value } => write!(f, "{value} is even; expected an odd target"),
            LinkError::NotEven { value } => write!(f, "{value} is odd; expected an even target"),
            LinkError::ResidueZero { value } => {
                write!(
                    f,
                    "{value} is divisible by 3; only non-RC0 targets are linked"
                )
            }
            LinkError::Zero => write!(f, "target must be positive"),
        }
    }
}

impl std::error::Error for LinkError {}

/// How a link was derived: the table row and its family parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkProvenance {
    pub rule: &'static str,
    pub p: BigUint,
}

/// A certificate that `target` appears exactly `steps` raw ops after
/// `handle` on the series described by `scenario`.
///
/// For odd targets the scenario is a hook run in full; for even targets
/// the run may stop early (the target is an intermediate even value).
/// A handle links to itself with no scenario and zero steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleLink {
    pub target: BigUint,
    pub handle: BigUint,
    pub scenario: Option<Scenario>,
    pub steps: u64,
    pub provenance: LinkProvenance,
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Hook rows keyed by the target's residue mod 18: (downs, k of the
/// first handle start, that start, its end).
fn odd_row(residue: u32) -> (u64, u64, u64, u64, &'static str) {
    match residue {
        5 => (0, 1, 3, 5, "odd 18p+5, hook s"),
        7 => (1, 2, 9, 7, "odd 18p+7, hook sd"),
        17 => (2, 3, 45, 17, "odd 18p+17, hook sd^2"),
        13 => (3, 3, 69, 13, "odd 18p+13, hook sd^3"),
        11 => (4, 2, 117, 11, "odd 18p+11, hook sd^4"),
        1 => (5, 1, 21, 1, "odd 18p+1, hook sd^5"),
        _ => unreachable!("odd non-RC0 residues mod 18"),
    }
}

/// Link an odd target to a handle in at most 7 raw steps.
///
/// Targets divisible by 3 are themselves handles and get the degenerate
/// zero-step link. All other odd targets select a hook with at most 5
/// downs by their residue mod 18; replacing the row's realization index
/// k by k+3p keeps the start a handle and raises the end by 18p, so one
/// p lands exactly on the target.
pub fn link_odd(n: &BigUint) -> Result<HandleLink, LinkError> {
    if n.is_zero() {
        return Err(LinkError::Zero);
    }
    if n.is_even() {
        return Err(LinkError::NotOdd { value: n.clone() });
    }
    if (n % 3u32).is_zero() {
        return Ok(HandleLink {
            target: n.clone(),
            handle: n.clone(),
            scenario: None,
            steps: 0,
            provenance: LinkProvenance {
                rule: "already a handle",
                p: big(0),
            },
        });
    }
    let residue: u32 = (n % 18u32).try_into().expect("residue fits");
    let (downs, _k0, m0, n0, rule) = odd_row(residue);
    let p = (n - big(n0)) / 18u32;
    // start period of the hook is 2^(downs+2); k -> k+3p moves the start by 3p periods
    let handle = big(m0) + &p * (3u64 << (downs + 2));
    Ok(HandleLink {
        target: n.clone(),
        handle,
        scenario: Some(Hook::new(downs).scenario()),
        steps: downs + 2,
        provenance: LinkProvenance { rule, p },
    })
}

/// Link an even target to a handle in at most 6 raw steps.
///
/// Targets twice an odd number ride the odd link of their half, stopped
/// one step early (the value before a hook's final halving is twice its
/// end). Targets divisible by 4 split into the sub-series `12j-8` and
/// `12j-4`, each resolved by `j mod 3` into a fixed hook family.
pub fn link_even(n: &BigUint) -> Result<HandleLink, LinkError> {
    if n.is_zero() {
        return Err(LinkError::Zero);
    }
    if n.is_odd() {
        return Err(LinkError::NotEven { value: n.clone() });
    }
    if (n % 3u32).is_zero() {
        return Err(LinkError::ResidueZero { value: n.clone() });
    }
    let rem4: u32 = (n % 4u32).try_into().expect("residue fits");
    if rem4 == 2 {
        let half = n >> 1;
        let inner = link_odd(&half)?;
        return Ok(HandleLink {
            target: n.clone(),
            handle: inner.handle,
            scenario: inner.scenario,
            steps: inner.steps - 1,
            provenance: LinkProvenance {
                rule: "double of an odd end number",
                p: inner.provenance.p,
            },
        });
    }
    let rem12: u32 = (n % 12u32).try_into().expect("residue fits");
    let (j, sub_four) = match rem12 {
        4 => ((n + 8u32) / 12u32, false), // n = 12j - 8
        8 => ((n + 4u32) / 12u32, true),  // n = 12j - 4
        _ => unreachable!("non-RC0 multiples of 4 are 4 or 8 mod 12"),
    };
    let jrem: u32 = (&j % 3u32).try_into().expect("residue fits");
    let (p, coeff, offset, downs, steps, rule) = match (sub_four, jrem) {
        // n = 12j-8 families
        (false, 0) => (
            &j / 3u32,
            12u64,
            3u64,
            0,
            1,
            "even 12j-8, j=3p, one up step",
        ),
        (false, 2) => (
            (&j + 1u32) / 3u32,
            48,
            27,
            1,
            3,
            "even 12j-8, j=3p-1, hook sd",
        ),
        (false, 1) => (
            (&j + 2u32) / 3u32,
            192,
            171,
            3,
            5,
            "even 12j-8, j=3p-2, hook sd^3",
        ),
        // n = 12j-4 families
        (true, 0) => (&j / 3u32, 24, 3, 0, 2, "even 12j-4, j=3p, hook s"),
        (true, 1) => (
            (&j + 2u32) / 3u32,
            96,
            75,
            2,
            4,
            "even 12j-4, j=3p-2, hook sd^2",
        ),
        (true, 2) => (
            (&j + 1u32) / 3u32,
            384,
            171,
            4,
            6,
            "even 12j-4, j=3p-1, hook sd^4",
        ),
        _ => unreachable!(),
    };
    let handle = &p * coeff - big(offset);
    Ok(HandleLink {
        target: n.clone(),
        handle,
        scenario: Some(Hook::new(downs).scenario()),
        steps,
        provenance: LinkProvenance { rule, p },
    })
}

/// Link any non-RC0 integer, dispatching on parity.
pub fn link(n: &BigUint) -> Result<HandleLink, LinkError> {
    if n.is_odd() {
        link_odd(n)
    } else {
        link_even(n)
    }
}

/// Replay a link through the raw rules: the handle must be an odd
/// multiple of 3 and the target must sit exactly `steps` ops along the
/// scenario's raw step sequence.
pub fn verify_link(link: &HandleLink) -> bool {
    if !is_handle(&link.handle) {
        return false;
    }
    let raw = match &link.scenario {
        None => return link.steps == 0 && link.target == link.handle,
        Some(s) => expand_steps(s),
    };
    let steps = link.steps as usize;
    if steps == 0 || steps > raw.len() {
        return false;
    }
    let mut value = link.handle.clone();
    for op in &raw[..steps] {
        value = match try_step(*op, &value) {
            Some(v) => v,
            None => return false,
        };
    }
    value == link.target
}

/// One failed target in a sweep.
#[derive(Clone, Debug)]
pub struct SweepFailure {
    pub n: u64,
    pub reason: String,
}

/// Outcome of linking and verifying every non-RC0 integer up to a
/// limit.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub limit: u64,
    pub odd_max_steps: u64,
    pub even_max_steps: u64,
    pub failures: Vec<SweepFailure>,
    pub duration: Duration,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "limit": self.limit,
            "odd_max_steps": self.odd_max_steps,
            "even_max_steps": self.even_max_steps,
            "failures": self
                .failures
                .iter()
                .map(|f| serde_json::json!({"n": f.n, "reason": f.reason}))
                .collect::<Vec<_>>(),
            "duration": self.duration.as_secs_f64(),
        })
    }
}

/// Build and verify a link for every non-RC0 `n <= limit`, recording
/// the maximum step count per parity class. Odd targets must stay
/// within 7 steps, even ones within 6; anything else is a failure.
pub fn sweep_verify(limit: u64) -> SweepReport {
    let started = Instant::now();
    let mut odd_max = 0u64;
    let mut even_max = 0u64;
    let mut failures = Vec::new();
    for n in 1..=limit {
        if n % 3 == 0 {
            continue;
        }
        let target = big(n);
        let built = if n % 2 == 1 {
            link_odd(&target)
        } else {
            link_even(&target)
        };
        match built {
            Ok(l) => {
                if !verify_link(&l) {
                    failures.push(SweepFailure {
                        n,
                        reason: format!("replay failed: handle {} steps {}", l.handle, l.steps),
                    });
                    continue;
                }
                let bound = if n % 2 == 1 { 7 } else { 6 };
                if l.steps > bound {
                    failures.push(SweepFailure {
                        n,
                        reason: format!("{} steps exceeds bound {bound}", l.steps),
                    });
                    continue;
                }
                if n % 2 == 1 {
                    odd_max = odd_max.max(l.steps);
                } else {
                    even_max = even_max.max(l.steps);
                }
            }
            Err(e) => failures.push(SweepFailure {
                n,
                reason: e.to_string(),
            }),
        }
    }
    SweepReport {
        limit,
        odd_max_steps: odd_max,
        even_max_steps: even_max,
        failures,
        duration: started.elapsed(),
    }
}
