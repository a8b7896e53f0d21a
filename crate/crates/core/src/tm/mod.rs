//! Single-tape deterministic Turing machines.
//!
//! This is the compiler's source language and also the reference interpreter
//! that compiled programs are checked against. Symbols and states are plain
//! string tokens; their position in the declaration lists is their index.

mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use text::{format_tm_spec, parse_tm_spec, ParseError, ParseErrorKind};

/// Head movement of a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Left,
    Right,
}

impl Move {
    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
        }
    }

    pub fn from_letter(s: &str) -> Option<Move> {
        match s {
            "L" => Some(Move::Left),
            "R" => Some(Move::Right),
            _ => None,
        }
    }
}

/// What to do for one `(state, symbol)` table entry: write, move, change state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub write: String,
    pub shift: Move,
    pub next: String,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.write, self.shift.letter(), self.next)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("state set is empty")]
    NoStates,
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("undeclared state `{0}`")]
    UndeclaredState(String),
    #[error("duplicate rule for ({0}, {1})")]
    DuplicateRule(String, String),
    #[error("tape is empty")]
    EmptyTape,
    #[error("head index {head} is outside a tape of {len} cells")]
    HeadOutOfRange { head: usize, len: usize },
}

/// A Turing machine: alphabet (blank first), states, start state and table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuringMachine {
    symbols: Vec<String>,
    states: Vec<String>,
    start: usize,
    /// Keyed by `(state index, symbol index)`.
    table: BTreeMap<(usize, usize), Transition>,
}

impl TuringMachine {
    /// Builds a machine from declaration-ordered symbols and states. The
    /// first symbol is the blank.
    pub fn new<S: Into<String>>(
        symbols: impl IntoIterator<Item = S>,
        states: impl IntoIterator<Item = S>,
        start: &str,
    ) -> Result<Self, MachineError> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(MachineError::EmptyAlphabet);
        }
        if states.is_empty() {
            return Err(MachineError::NoStates);
        }
        if let Some(dup) = first_duplicate(&symbols) {
            return Err(MachineError::DuplicateSymbol(dup.to_owned()));
        }
        if let Some(dup) = first_duplicate(&states) {
            return Err(MachineError::DuplicateState(dup.to_owned()));
        }
        let start = states
            .iter()
            .position(|s| s == start)
            .ok_or_else(|| MachineError::UndeclaredState(start.to_owned()))?;
        Ok(TuringMachine {
            symbols,
            states,
            start,
            table: BTreeMap::new(),
        })
    }

    /// Adds the table entry `(state, read) -> (write, shift, next)`.
    pub fn add_rule(
        &mut self,
        state: &str,
        read: &str,
        write: &str,
        shift: Move,
        next: &str,
    ) -> Result<(), MachineError> {
        let s = self.require_state(state)?;
        let r = self.require_symbol(read)?;
        self.require_symbol(write)?;
        self.require_state(next)?;
        if self.table.contains_key(&(s, r)) {
            return Err(MachineError::DuplicateRule(
                state.to_owned(),
                read.to_owned(),
            ));
        }
        self.table.insert(
            (s, r),
            Transition {
                write: write.to_owned(),
                shift,
                next: next.to_owned(),
            },
        );
        Ok(())
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn blank(&self) -> &str {
        &self.symbols[0]
    }

    pub fn start_state(&self) -> &str {
        &self.states[self.start]
    }

    pub fn symbol_index(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    /// Number of table entries.
    pub fn rule_count(&self) -> usize {
        self.table.len()
    }

    /// Table entries in `(state index, symbol index)` order.
    pub fn rules(&self) -> impl Iterator<Item = (&str, &str, &Transition)> {
        self.table
            .iter()
            .map(move |(&(s, r), t)| (self.states[s].as_str(), self.symbols[r].as_str(), t))
    }

    /// The table entry for `(state, symbol)`, or `None` when the machine
    /// halts on that combination. Undeclared tokens also yield `None`.
    pub fn lookup(&self, state: &str, symbol: &str) -> Option<&Transition> {
        let s = self.state_index(state)?;
        let r = self.symbol_index(symbol)?;
        self.table.get(&(s, r))
    }

    pub fn lookup_index(&self, state: usize, symbol: usize) -> Option<&Transition> {
        self.table.get(&(state, symbol))
    }

    /// A configuration in the start state over `cells`.
    pub fn configuration<S: Into<String>>(
        &self,
        cells: impl IntoIterator<Item = S>,
        head: usize,
    ) -> Result<TmConfiguration, MachineError> {
        let config = TmConfiguration {
            cells: cells.into_iter().map(Into::into).collect(),
            head,
            state: self.start_state().to_owned(),
        };
        self.check_configuration(&config)?;
        Ok(config)
    }

    pub fn check_configuration(&self, c: &TmConfiguration) -> Result<(), MachineError> {
        if c.cells.is_empty() {
            return Err(MachineError::EmptyTape);
        }
        if c.head >= c.cells.len() {
            return Err(MachineError::HeadOutOfRange {
                head: c.head,
                len: c.cells.len(),
            });
        }
        for cell in &c.cells {
            self.require_symbol(cell)?;
        }
        self.require_state(&c.state)?;
        Ok(())
    }

    /// One transition. Moving off either end of the represented segment
    /// appends a blank cell on that side.
    pub fn step(&self, c: &TmConfiguration) -> Step {
        let Some(t) = self.lookup(&c.state, &c.cells[c.head]) else {
            return Step::Halted;
        };
        let mut cells = c.cells.clone();
        cells[c.head] = t.write.clone();
        let head = match t.shift {
            Move::Right => {
                if c.head + 1 == cells.len() {
                    cells.push(self.blank().to_owned());
                }
                c.head + 1
            }
            Move::Left => {
                if c.head == 0 {
                    cells.insert(0, self.blank().to_owned());
                    0
                } else {
                    c.head - 1
                }
            }
        };
        Step::Next(TmConfiguration {
            cells,
            head,
            state: t.next.clone(),
        })
    }

    /// Runs at most `max_steps` transitions from `start`.
    pub fn run(&self, start: TmConfiguration, max_steps: usize) -> Run {
        let mut trace = vec![start];
        for _ in 0..max_steps {
            let last = trace.last().expect("trace is never empty");
            match self.step(last) {
                Step::Next(c) => trace.push(c),
                Step::Halted => {
                    return Run {
                        trace,
                        status: RunStatus::Halted,
                    }
                }
            }
        }
        // The budget may run out exactly on a halting configuration.
        let status = match self.step(trace.last().expect("trace is never empty")) {
            Step::Halted => RunStatus::Halted,
            Step::Next(_) => RunStatus::StepBudgetExhausted,
        };
        Run { trace, status }
    }

    fn require_symbol(&self, s: &str) -> Result<usize, MachineError> {
        self.symbol_index(s)
            .ok_or_else(|| MachineError::UndeclaredSymbol(s.to_owned()))
    }

    fn require_state(&self, s: &str) -> Result<usize, MachineError> {
        self.state_index(s)
            .ok_or_else(|| MachineError::UndeclaredState(s.to_owned()))
    }
}

fn first_duplicate(tokens: &[String]) -> Option<&str> {
    tokens
        .iter()
        .enumerate()
        .find(|(i, t)| tokens[..*i].contains(t))
        .map(|(_, t)| t.as_str())
}

/// Tape segment, head position and current state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TmConfiguration {
    pub cells: Vec<String>,
    pub head: usize,
    pub state: String,
}

impl TmConfiguration {
    pub fn symbol_under_head(&self) -> &str {
        &self.cells[self.head]
    }
}

impl fmt::Display for TmConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, [{}], head {})",
            self.state,
            self.cells.join(","),
            self.head
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Next(TmConfiguration),
    Halted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunStatus {
    /// The last configuration of the trace has no table entry.
    Halted,
    StepBudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub trace: Vec<TmConfiguration>,
    pub status: RunStatus,
}
