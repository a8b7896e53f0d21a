//! Reads the Turing machine configuration back out of a compiled program's
//! live graph, and interprets tapes as numerals.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::compiler::{EncodingPlan, E, F, O, W};
use crate::smm::{NodeId, SmmMachine};
use crate::tm::TmConfiguration;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("bit b{bit} of {node} targets neither the node nor the origin")]
    MalformedBit { node: NodeId, bit: u32 },
    #[error("{node} encodes {what} index {index}, which is not declared")]
    UndeclaredIndex {
        node: NodeId,
        what: &'static str,
        index: usize,
    },
    #[error("bad structure: {0}")]
    Structure(String),
}

fn structure(msg: impl Into<String>) -> DecodeError {
    DecodeError::Structure(msg.into())
}

/// A decoded configuration plus the nodes it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedConfiguration {
    pub config: TmConfiguration,
    /// Tape nodes, west to east.
    pub tape_nodes: Vec<NodeId>,
    pub head_node: NodeId,
    pub origin: NodeId,
}

fn edge(machine: &SmmMachine, node: NodeId, dir: &str) -> Result<NodeId, DecodeError> {
    machine
        .edge(node, dir)
        .ok_or_else(|| structure(format!("direction `{dir}` is not declared")))
}

/// Index stored in the first `width` bit edges of `node`: bit `j` is 1 when
/// `bj` targets `origin` and 0 when it targets `node`.
pub fn read_bits(
    machine: &SmmMachine,
    node: NodeId,
    width: u32,
    origin: NodeId,
) -> Result<usize, DecodeError> {
    let mut index = 0;
    for j in 0..width {
        let target = edge(machine, node, &EncodingPlan::bit(j))?;
        if target == origin {
            index |= 1 << j;
        } else if target != node {
            return Err(DecodeError::MalformedBit { node, bit: j });
        }
    }
    Ok(index)
}

/// Recovers `(tape, head, state)` from a machine between step runs. The
/// head node is the center; its tape node is found through `f`, the west
/// end by following `w`, and the symbols by walking `e` back.
pub fn decode_configuration(
    machine: &SmmMachine,
    plan: &EncodingPlan,
) -> Result<DecodedConfiguration, DecodeError> {
    let head_node = machine
        .center()
        .ok_or_else(|| structure("machine has no center"))?;
    let origin = edge(machine, head_node, O)?;
    let under_head = edge(machine, head_node, F)?;
    if head_node == origin || under_head == origin {
        return Err(structure("no head and tape pair at the center"));
    }
    if edge(machine, under_head, F)? != head_node {
        return Err(structure("center's tape node does not point back via f"));
    }

    let mut seen = HashSet::new();
    let mut west = under_head;
    loop {
        if !seen.insert(west) {
            return Err(structure("w chain has a cycle"));
        }
        let next = edge(machine, west, W)?;
        if next == origin {
            break;
        }
        west = next;
    }

    let mut seen = HashSet::new();
    let mut tape_nodes = Vec::new();
    let mut cells = Vec::new();
    let mut at = west;
    loop {
        if !seen.insert(at) {
            return Err(structure("e chain has a cycle"));
        }
        let index = read_bits(machine, at, plan.symbol_bits(), origin)?;
        let symbol = plan
            .symbols()
            .get(index)
            .ok_or(DecodeError::UndeclaredIndex {
                node: at,
                what: "symbol",
                index,
            })?;
        cells.push(symbol.clone());
        tape_nodes.push(at);
        at = edge(machine, at, E)?;
        if at == origin {
            break;
        }
    }

    let head = tape_nodes
        .iter()
        .position(|&t| t == under_head)
        .ok_or_else(|| structure("head cell is not on the east walk"))?;
    let index = read_bits(machine, head_node, plan.state_bits(), origin)?;
    let state = plan
        .states()
        .get(index)
        .ok_or(DecodeError::UndeclaredIndex {
            node: head_node,
            what: "state",
            index,
        })?;

    Ok(DecodedConfiguration {
        config: TmConfiguration {
            cells,
            head,
            state: state.clone(),
        },
        tape_nodes,
        head_node,
        origin,
    })
}

/// When to read a number off the tape: the machine is in `state`, the head
/// is on the westmost cell, and that cell holds `symbol`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadoutPredicate {
    pub state: String,
    pub symbol: String,
}

impl ReadoutPredicate {
    pub fn matches(&self, c: &TmConfiguration) -> bool {
        c.state == self.state && c.head == 0 && c.cells[0] == self.symbol
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadoutError {
    #[error("base {0} is below 2")]
    BadBase(u32),
    #[error("`{token}` is not a base-{base} digit")]
    NotADigit { token: String, base: u32 },
    #[error("value does not fit in 128 bits")]
    Overflow,
}

/// The number written on the first run of non-blank cells, or `None` when
/// the configuration is not at a readout point. An all-blank tape reads 0.
pub fn readout_value(
    c: &TmConfiguration,
    predicate: &ReadoutPredicate,
    blank: &str,
    base: u32,
) -> Result<Option<u128>, ReadoutError> {
    if base < 2 {
        return Err(ReadoutError::BadBase(base));
    }
    if !predicate.matches(c) {
        return Ok(None);
    }
    let digits = c
        .cells
        .iter()
        .skip_while(|s| *s == blank)
        .take_while(|s| *s != blank);
    let mut value: u128 = 0;
    for token in digits {
        let digit = digit_value(token, base).ok_or_else(|| ReadoutError::NotADigit {
            token: token.clone(),
            base,
        })?;
        value = value
            .checked_mul(base as u128)
            .and_then(|v| v.checked_add(digit as u128))
            .ok_or(ReadoutError::Overflow)?;
    }
    Ok(Some(value))
}

fn digit_value(token: &str, base: u32) -> Option<u32> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => c.to_digit(base.min(36)),
        _ => token.parse::<u32>().ok().filter(|&d| d < base),
    }
}

/// Header of every trace file.
pub const TSV_HEADER: &str = "step\tstate\thead\ttape";

/// One trace row: step, state, head index, space-separated tape.
pub fn tsv_row(step: u64, c: &TmConfiguration) -> String {
    let mut row = String::new();
    let _ = write!(
        row,
        "{step}\t{}\t{}\t{}",
        c.state,
        c.head,
        c.cells.join(" ")
    );
    row
}
