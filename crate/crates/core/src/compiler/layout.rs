//! Whole-graph check of the node wiring a compiled program maintains
//! between steps.

use std::collections::HashSet;

use thiserror::Error;

use super::plan::{EncodingPlan, E, F, O, W};
use super::{HEAD_LABEL, ORIGIN_LABEL, TAPE_LABEL};
use crate::smm::{NodeId, SmmMachine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("machine has no center")]
    NoCenter,
    #[error("direction `{0}` is not declared")]
    MissingDirection(String),
    #[error("{node}: {rule}")]
    Violation { node: NodeId, rule: &'static str },
    #[error("{stray} nodes are not on the tape")]
    StrayNodes { stray: usize },
}

/// The tape as found by [`check_layout`], west to east.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub origin: NodeId,
    pub heads: Vec<NodeId>,
    pub tapes: Vec<NodeId>,
}

struct Edges {
    f: usize,
    o: usize,
    e: usize,
    w: usize,
    bits: Vec<usize>,
}

/// Checks that `machine` is wired as a compiled program leaves it after
/// the prologue or a completed step:
///
/// - every `o` edge targets the Origin, and all Origin edges loop;
/// - the center is a head node; head and tape nodes pair up through `f`;
/// - heads and tapes each form one `e`/`w` chain, aligned through `f`,
///   ending on the Origin at both ends;
/// - bit edges target only their own node or the Origin;
/// - no node lies off the tape, so the node count is `2 * cells + 1`.
pub fn check_layout(machine: &SmmMachine, plan: &EncodingPlan) -> Result<Layout, LayoutError> {
    let dir = |name: &str| {
        machine
            .direction_index(name)
            .ok_or_else(|| LayoutError::MissingDirection(name.to_owned()))
    };
    let d = Edges {
        f: dir(F)?,
        o: dir(O)?,
        e: dir(E)?,
        w: dir(W)?,
        bits: (0..plan.bit_count())
            .map(|j| dir(&EncodingPlan::bit(j)))
            .collect::<Result<_, _>>()?,
    };
    let at = |n: NodeId, i: usize| machine.node(n).edges[i];
    let fail = |node, rule| Err(LayoutError::Violation { node, rule });

    let center = machine.center().ok_or(LayoutError::NoCenter)?;
    let origin = at(center, d.o);

    if machine.node(origin).label != ORIGIN_LABEL {
        return fail(origin, "origin is not labelled as such");
    }
    if machine.node(origin).edges.iter().any(|&t| t != origin) {
        return fail(origin, "origin edge leaves the origin");
    }
    for (id, node) in machine.nodes() {
        if node.edges[d.o] != origin {
            return fail(id, "o does not target the origin");
        }
        if d.bits
            .iter()
            .any(|&b| node.edges[b] != id && node.edges[b] != origin)
        {
            return fail(id, "bit edge targets neither self nor origin");
        }
    }
    if center == origin {
        return fail(center, "center is the origin");
    }

    // West end of the head chain.
    let mut seen = HashSet::new();
    let mut west = center;
    while at(west, d.w) != origin {
        if !seen.insert(west) {
            return fail(west, "w chain loops");
        }
        west = at(west, d.w);
    }

    let mut heads = Vec::new();
    let mut tapes = Vec::new();
    let mut on_tape = HashSet::from([origin]);
    let mut head = west;
    loop {
        let tape = at(head, d.f);
        if !on_tape.insert(head) || !on_tape.insert(tape) {
            return fail(head, "e chain revisits a node");
        }
        if machine.node(head).label != HEAD_LABEL {
            return fail(head, "head chain node is not a head");
        }
        if machine.node(tape).label != TAPE_LABEL {
            return fail(tape, "f partner of a head is not a tape");
        }
        if at(tape, d.f) != head {
            return fail(tape, "f is not an involution");
        }
        let (head_w, tape_w) = (at(head, d.w), at(tape, d.w));
        match heads.last() {
            None if head_w != origin || tape_w != origin => {
                return fail(head, "west end does not point at the origin")
            }
            Some(&prev) if head_w != prev => return fail(head, "x.w.e != x"),
            Some(_) if tape_w != tapes[tapes.len() - 1] => {
                return fail(tape, "tape chain is not aligned with head chain")
            }
            _ => {}
        }
        heads.push(head);
        tapes.push(tape);
        let next = at(head, d.e);
        if next == origin {
            if at(tape, d.e) != origin {
                return fail(tape, "east end does not point at the origin");
            }
            break;
        }
        if at(tape, d.e) != at(next, d.f) {
            return fail(head, "head.e.f != head.f.e");
        }
        head = next;
    }

    if !heads.contains(&center) {
        return fail(center, "center is not on the head chain");
    }
    let stray = machine.node_count() - on_tape.len();
    if stray != 0 {
        return Err(LayoutError::StrayNodes { stray });
    }
    Ok(Layout {
        origin,
        heads,
        tapes,
    })
}
