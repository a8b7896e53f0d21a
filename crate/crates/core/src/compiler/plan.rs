//! Bit widths, direction names and token indices shared by the code
//! generator and the decoder.

use std::fmt::Write as _;

use thiserror::Error;

use crate::smm::Direction;
use crate::tm::TuringMachine;

/// Head to tape and tape to head.
pub const F: &str = "f";
/// Every node to the Origin.
pub const O: &str = "o";
/// East neighbor, or the Origin at the east end.
pub const E: &str = "e";
/// West neighbor, or the Origin at the west end.
pub const W: &str = "w";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("cannot encode an empty set")]
    ZeroCount,
    #[error("index {index} does not fit in {width} bits")]
    IndexOutOfRange { index: usize, width: u32 },
    #[error("plan header: {0}")]
    Header(String),
}

/// Smallest `w >= 1` with `2^w >= count`.
pub fn bit_width(count: usize) -> Result<u32, PlanError> {
    match count {
        0 => Err(PlanError::ZeroCount),
        1 => Ok(1),
        c => Ok(usize::BITS - (c - 1).leading_zeros()),
    }
}

/// Binary expansion of `index`, least significant bit first.
pub fn encode_index(index: usize, width: u32) -> Result<Vec<bool>, PlanError> {
    if width < usize::BITS && index >> width != 0 {
        return Err(PlanError::IndexOutOfRange { index, width });
    }
    Ok((0..width).map(|j| (index >> j) & 1 == 1).collect())
}

/// How a machine's symbols and states are laid out in node edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingPlan {
    symbols: Vec<String>,
    states: Vec<String>,
    symbol_bits: u32,
    state_bits: u32,
}

impl EncodingPlan {
    pub fn for_machine(machine: &TuringMachine) -> Self {
        Self::from_tokens(machine.symbols().to_vec(), machine.states().to_vec())
            .expect("a valid machine has symbols and states")
    }

    fn from_tokens(symbols: Vec<String>, states: Vec<String>) -> Result<Self, PlanError> {
        let symbol_bits = bit_width(symbols.len())?;
        let state_bits = bit_width(states.len())?;
        Ok(EncodingPlan {
            symbols,
            states,
            symbol_bits,
            state_bits,
        })
    }

    /// `n`: bits per tape symbol.
    pub fn symbol_bits(&self) -> u32 {
        self.symbol_bits
    }

    /// `m`: bits per state.
    pub fn state_bits(&self) -> u32 {
        self.state_bits
    }

    /// `max(n, m)`: bit directions shared by tape and head nodes.
    pub fn bit_count(&self) -> u32 {
        self.symbol_bits.max(self.state_bits)
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

    pub fn symbol_index(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    /// Name of bit direction `j`.
    pub fn bit(j: u32) -> String {
        format!("b{j}")
    }

    /// `f o e w b0 .. b(k-1)`.
    pub fn directions(&self) -> Vec<Direction> {
        [F, O, E, W]
            .into_iter()
            .map(Direction::new)
            .chain((0..self.bit_count()).map(|j| Direction::new(Self::bit(j))))
            .collect()
    }

    pub fn encode_symbol(&self, symbol: &str) -> Option<Vec<bool>> {
        let i = self.symbol_index(symbol)?;
        encode_index(i, self.symbol_bits).ok()
    }

    pub fn encode_state(&self, state: &str) -> Option<Vec<bool>> {
        let i = self.state_index(state)?;
        encode_index(i, self.state_bits).ok()
    }

    /// Comment lines carrying the plan inside a program file.
    pub fn header(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "; plan: symbols {}", self.symbols.join(" "));
        let _ = writeln!(out, "; plan: states {}", self.states.join(" "));
        let _ = writeln!(out, "; plan: symbol-bits {}", self.symbol_bits);
        let _ = writeln!(out, "; plan: state-bits {}", self.state_bits);
        out
    }

    /// Recovers the plan from the `; plan:` comments of a program file.
    pub fn from_header(text: &str) -> Result<Self, PlanError> {
        let bad = |m: &str| PlanError::Header(m.to_owned());
        let mut symbols = None;
        let mut states = None;
        let mut symbol_bits = None;
        let mut state_bits = None;
        for line in text.lines() {
            let Some(rest) = line.trim_start().strip_prefix(';') else {
                continue;
            };
            let Some(rest) = rest.trim_start().strip_prefix("plan:") else {
                continue;
            };
            let mut words = rest.split_whitespace();
            let key = words.next().ok_or_else(|| bad("empty plan line"))?;
            let values: Vec<String> = words.map(str::to_owned).collect();
            let number = |v: &[String]| -> Result<u32, PlanError> {
                match v {
                    [one] => one.parse().map_err(|_| bad("bit width is not a number")),
                    _ => Err(bad("bit width takes one value")),
                }
            };
            match key {
                "symbols" => symbols = Some(values),
                "states" => states = Some(values),
                "symbol-bits" => symbol_bits = Some(number(&values)?),
                "state-bits" => state_bits = Some(number(&values)?),
                other => return Err(PlanError::Header(format!("unknown key `{other}`"))),
            }
        }
        let plan = Self::from_tokens(
            symbols.ok_or_else(|| bad("no symbols"))?,
            states.ok_or_else(|| bad("no states"))?,
        )?;
        if symbol_bits != Some(plan.symbol_bits) || state_bits != Some(plan.state_bits) {
            return Err(bad("bit widths disagree with the symbol and state counts"));
        }
        Ok(plan)
    }
}
