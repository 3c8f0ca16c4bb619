//! Scenario words over the alphabet `{s, d}`.
//!
//! A scenario spells out what a Collatz series does between two odd
//! integers: `s` is a spike, the combined up-then-down step `(3m+1)/2`
//! on an odd value, and `d` is a single halving of an even value. Any
//! word starting with `s` is a valid scenario. Input text may use the
//! compressed grammar with exponents and parenthesized groups, e.g.
//! `(s^7d^4)^9`; the canonical compressed output is plain run-length
//! form without parentheses.

use std::fmt;
use std::str::FromStr;

/// One letter of a scenario word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioOp {
    /// `s`: `(3m+1)/2` applied to an odd value.
    Spike,
    /// `d`: `m/2` applied to an even value.
    Down,
}

impl ScenarioOp {
    pub fn letter(self) -> char {
        match self {
            ScenarioOp::Spike => 's',
            ScenarioOp::Down => 'd',
        }
    }
}

/// Ceiling on the expanded op count accepted by [`Scenario::parse`].
pub const DEFAULT_MAX_OPS: usize = 1_000_000;

/// Nesting depth accepted for parenthesized groups.
const MAX_GROUP_DEPTH: usize = 64;

/// Errors from parsing or constructing scenarios.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioError {
    /// Malformed text: unexpected character, unclosed group, bad exponent.
    Syntax { pos: usize, message: String },
    /// The word expands to nothing.
    Empty,
    /// The expanded word does not begin with `s`.
    MustStartWithSpike,
    /// The expanded word exceeds the configured op ceiling.
    TooLong { len: u128, limit: usize },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Syntax { pos, message } => {
                write!(f, "syntax error at byte {pos}: {message}")
            }
            ScenarioError::Empty => write!(f, "empty scenario word"),
            ScenarioError::MustStartWithSpike => {
                write!(f, "a scenario must start with 's'")
            }
            ScenarioError::TooLong { len, limit } => {
                write!(f, "expanded word has {len} ops, limit is {limit}")
            }
        }
    }
}

impl std::error::Error for ScenarioError {}

/// A validated scenario: a non-empty word over `{s, d}` starting with `s`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    ops: Vec<ScenarioOp>,
}

/// A hook `sd^δ`: one spike followed by `downs` halvings. Every scenario
/// is a sequence of hooks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hook {
    pub downs: u64,
}

impl Hook {
    pub fn new(downs: u64) -> Hook {
        Hook { downs }
    }

    /// Parity of the down count; even and odd hooks have different phases.
    pub fn is_even(&self) -> bool {
        self.downs % 2 == 0
    }

    /// The hook as a standalone scenario.
    pub fn scenario(&self) -> Scenario {
        let mut ops = Vec::with_capacity(self.downs as usize + 1);
        ops.push(ScenarioOp::Spike);
        ops.extend(std::iter::repeat(ScenarioOp::Down).take(self.downs as usize));
        Scenario { ops }
    }
}

impl fmt::Display for Hook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.downs {
            0 => write!(f, "s"),
            1 => write!(f, "sd"),
            n => write!(f, "sd^{n}"),
        }
    }
}

/// Letter counts of a scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScenarioStats {
    /// Number of `s` ops (at least 1).
    pub spikes: u64,
    /// Number of `d` ops.
    pub downs: u64,
}

impl Scenario {
    /// Parse scenario text with the default expansion ceiling.
    ///
    /// Grammar: `scenario := term+` ; `term := atom ['^' uint]` ;
    /// `atom := 's' | 'd' | '(' scenario ')'` ; `uint >= 1`.
    /// Whitespace is ignored; letters are case-sensitive.
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        Scenario::parse_with_limit(text, DEFAULT_MAX_OPS)
    }

    /// Parse with an explicit ceiling on the expanded op count.
    pub fn parse_with_limit(text: &str, limit: usize) -> Result<Scenario, ScenarioError> {
        let toks: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        if toks.is_empty() {
            return Err(ScenarioError::Empty);
        }
        let mut parser = Parser { toks, i: 0, limit };
        let terms = parser.parse_terms(0)?;
        if let Some(&(pos, c)) = parser.peek() {
            return Err(ScenarioError::Syntax {
                pos,
                message: format!("unexpected '{c}'"),
            });
        }
        let size = Node::total_size(&terms);
        if size > limit as u128 {
            return Err(ScenarioError::TooLong { len: size, limit });
        }
        let mut ops = Vec::with_capacity(size as usize);
        Node::expand(&terms, &mut ops);
        Scenario::from_ops(ops)
    }

    /// Build a scenario from explicit ops, validating the word shape.
    pub fn from_ops(ops: Vec<ScenarioOp>) -> Result<Scenario, ScenarioError> {
        match ops.first() {
            None => Err(ScenarioError::Empty),
            Some(ScenarioOp::Down) => Err(ScenarioError::MustStartWithSpike),
            Some(ScenarioOp::Spike) => Ok(Scenario { ops }),
        }
    }

    pub fn ops(&self) -> &[ScenarioOp] {
        &self.ops
    }

    /// Total number of `s` and `d` ops in the word.
    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    pub fn spike_count(&self) -> u64 {
        self.ops
            .iter()
            .filter(|op| **op == ScenarioOp::Spike)
            .count() as u64
    }

    pub fn down_count(&self) -> u64 {
        self.ops
            .iter()
            .filter(|op| **op == ScenarioOp::Down)
            .count() as u64
    }

    pub fn stats(&self) -> ScenarioStats {
        ScenarioStats {
            spikes: self.spike_count(),
            downs: self.down_count(),
        }
    }

    /// Raw step count `2σ + δ` of any realization of this scenario.
    pub fn raw_step_count(&self) -> u64 {
        2 * self.spike_count() + self.down_count()
    }

    /// Canonical compressed form: run-length encoding, exponents only
    /// where a run is longer than 1 (`ssddd` -> `s^2d^3`).
    pub fn compressed(&self) -> String {
        let mut out = String::new();
        let mut run: Option<(ScenarioOp, usize)> = None;
        for &op in &self.ops {
            match run {
                Some((r, n)) if r == op => run = Some((r, n + 1)),
                Some((r, n)) => {
                    push_run(&mut out, r, n);
                    run = Some((op, 1));
                }
                None => run = Some((op, 1)),
            }
        }
        if let Some((r, n)) = run {
            push_run(&mut out, r, n);
        }
        out
    }

    /// Split the word into its hooks: `s d^δ1 s d^δ2 ...`.
    pub fn hooks(&self) -> Vec<Hook> {
        let mut hooks = Vec::new();
        for &op in &self.ops {
            match op {
                ScenarioOp::Spike => hooks.push(Hook::new(0)),
                // first op is a spike, so a hook is always open here
                ScenarioOp::Down => hooks.last_mut().unwrap().downs += 1,
            }
        }
        hooks
    }

    /// The word of `self` followed by the word of `other`.
    pub fn concat(&self, other: &Scenario) -> Scenario {
        let mut ops = Vec::with_capacity(self.ops.len() + other.ops.len());
        ops.extend_from_slice(&self.ops);
        ops.extend_from_slice(&other.ops);
        Scenario { ops }
    }
}

fn push_run(out: &mut String, op: ScenarioOp, n: usize) {
    out.push(op.letter());
    if n > 1 {
        out.push('^');
        out.push_str(&n.to_string());
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            f.write_str(match op {
                ScenarioOp::Spike => "s",
                ScenarioOp::Down => "d",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scenario({self})")
    }
}

impl FromStr for Scenario {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Scenario, ScenarioError> {
        Scenario::parse(s)
    }
}

enum Node {
    Atom(ScenarioOp),
    Group(Vec<Term>),
}

struct Term {
    node: Node,
    repeat: u128,
}

impl Node {
    fn size(&self) -> u128 {
        match self {
            Node::Atom(_) => 1,
            Node::Group(terms) => Node::total_size(terms),
        }
    }

    fn total_size(terms: &[Term]) -> u128 {
        terms.iter().fold(0u128, |acc, t| {
            acc.saturating_add(t.node.size().saturating_mul(t.repeat))
        })
    }

    fn expand(terms: &[Term], out: &mut Vec<ScenarioOp>) {
        for term in terms {
            for _ in 0..term.repeat {
                match &term.node {
                    Node::Atom(op) => out.push(*op),
                    Node::Group(inner) => Node::expand(inner, out),
                }
            }
        }
    }
}

struct Parser {
    toks: Vec<(usize, char)>,
    i: usize,
    limit: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, char)> {
        self.toks.get(self.i)
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let t = self.toks.get(self.i).copied();
        self.i += 1;
        t
    }

    fn parse_terms(&mut self, depth: usize) -> Result<Vec<Term>, ScenarioError> {
        let mut terms = Vec::new();
        while let Some(&(pos, c)) = self.peek() {
            let node = match c {
                's' => {
                    self.bump();
                    Node::Atom(ScenarioOp::Spike)
                }
                'd' => {
                    self.bump();
                    Node::Atom(ScenarioOp::Down)
                }
                '(' => {
                    if depth + 1 > MAX_GROUP_DEPTH {
                        return Err(ScenarioError::Syntax {
                            pos,
                            message: format!("groups nested deeper than {MAX_GROUP_DEPTH}"),
                        });
                    }
                    self.bump();
                    let inner = self.parse_terms(depth + 1)?;
                    match self.bump() {
                        Some((_, ')')) => {}
                        Some((p, c)) => {
                            return Err(ScenarioError::Syntax {
                                pos: p,
                                message: format!("expected ')', found '{c}'"),
                            })
                        }
                        None => {
                            return Err(ScenarioError::Syntax {
                                pos,
                                message: "unclosed '('".to_string(),
                            })
                        }
                    }
                    if inner.is_empty() {
                        return Err(ScenarioError::Syntax {
                            pos,
                            message: "empty group".to_string(),
                        });
                    }
                    Node::Group(inner)
                }
                ')' => break,
                other => {
                    return Err(ScenarioError::Syntax {
                        pos,
                        message: format!("expected 's', 'd', or '(', found '{other}'"),
                    })
                }
            };
            let repeat = self.parse_exponent()?;
            let size = node.size().saturating_mul(repeat);
            if size > self.limit as u128 {
                return Err(ScenarioError::TooLong {
                    len: size,
                    limit: self.limit,
                });
            }
            terms.push(Term { node, repeat });
        }
        if terms.is_empty() && depth == 0 {
            return Err(ScenarioError::Empty);
        }
        Ok(terms)
    }

    fn parse_exponent(&mut self) -> Result<u128, ScenarioError> {
        match self.peek() {
            Some(&(_, '^')) => {}
            _ => return Ok(1),
        }
        let (caret_pos, _) = self.bump().unwrap();
        let mut digits = false;
        let mut value: u128 = 0;
        while let Some(&(_, c)) = self.peek() {
            if let Some(d) = c.to_digit(10) {
                digits = true;
                value = value.saturating_mul(10).saturating_add(d as u128);
                self.bump();
            } else {
                break;
            }
        }
        if !digits {
            return Err(ScenarioError::Syntax {
                pos: caret_pos,
                message: "expected digits after '^'".to_string(),
            });
        }
        if value == 0 {
            return Err(ScenarioError::Syntax {
                pos: caret_pos,
                message: "exponent must be at least 1".to_string(),
            });
        }
        Ok(value)
    }
}
