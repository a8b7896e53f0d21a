//! TM to SMM compiler.
//!
//! Each tape cell becomes a *tape* node and each head position a *head*
//! node, joined both ways by `f`. Tape nodes form an east/west chain under
//! `e` and `w`, and so do head nodes; chain ends point at the Origin. Every
//! node's `o` edge points at the Origin. Symbols live in the bit edges of
//! tape nodes and the state in the bit edges of the center head node: a bit
//! is 0 when its edge loops back to the node and 1 when it targets the
//! Origin.
//!
//! The `prologue` section builds the initial tape. Each run of the `step`
//! section decides on the state bits, then on the symbol bits, and performs
//! one transition.

mod layout;
mod plan;

use crate::smm::{
    format_smm_program, Direction, Instruction, Line, LineRef, Path, Section, SmmProgram, PROLOGUE,
    STEP,
};
use crate::tm::{Move, TmConfiguration, Transition, TuringMachine};

pub use layout::{check_layout, Layout, LayoutError};
pub use plan::{bit_width, encode_index, EncodingPlan, PlanError, E, F, O, W};

pub const ORIGIN_LABEL: &str = "origin";
pub const TAPE_LABEL: &str = "tape";
pub const HEAD_LABEL: &str = "head";

/// Stop message prefix for a missing table entry.
pub const HALT_MESSAGE: &str = "HALT";
/// Stop message prefix for a bit pattern no symbol or state uses.
pub const BAD_CODE_MESSAGE: &str = "BADCODE";

/// End of the tape a new cell is added to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    East,
    West,
}

impl Side {
    fn outward(self) -> &'static str {
        match self {
            Side::East => E,
            Side::West => W,
        }
    }

    fn inward(self) -> &'static str {
        match self {
            Side::East => W,
            Side::West => E,
        }
    }
}

impl From<Move> for Side {
    fn from(m: Move) -> Self {
        match m {
            Move::Left => Side::West,
            Move::Right => Side::East,
        }
    }
}

fn new(label: &str) -> Line {
    Instruction::New {
        label: label.to_owned(),
    }
    .into()
}

fn set(x: &str, dir: &str, y: &str) -> Line {
    Instruction::Set {
        x: Path::of(x),
        dir: Direction::new(dir),
        y: Path::of(y),
    }
    .into()
}

fn center(x: &str) -> Line {
    Instruction::Center { x: Path::of(x) }.into()
}

fn jump_if(x: &str, y: &str, offset: usize) -> Line {
    Instruction::If {
        x: Path::of(x),
        y: Path::of(y),
        target: LineRef::Relative(offset as isize),
    }
    .into()
}

fn stop(message: String) -> Line {
    Instruction::Stop { message }.into()
}

fn noted(mut lines: Vec<Line>, note: impl Into<String>) -> Vec<Line> {
    if let Some(first) = lines.first_mut() {
        first.note = Some(note.into());
    }
    lines
}

/// One `set` per bit: a 0 bit points `bj` of the target back at itself, a
/// 1 bit points it at the Origin.
pub fn emit_write_bits(target: &Path, bits: &[bool]) -> Vec<Line> {
    bits.iter()
        .enumerate()
        .map(|(j, &bit)| {
            let y = if bit { Path::of(O) } else { target.clone() };
            Instruction::Set {
                x: target.clone(),
                dir: Direction::new(EncodingPlan::bit(j as u32)),
                y,
            }
            .into()
        })
        .collect()
}

fn clear_bits(plan: &EncodingPlan) -> Vec<Line> {
    emit_write_bits(&Path::here(), &vec![false; plan.bit_count() as usize])
}

/// Adds a blank cell beyond the boundary head node at the center. Ends
/// centered on that same head node, now an interior one.
pub fn emit_extension(side: Side, plan: &EncodingPlan) -> Vec<Line> {
    let out = side.outward();
    let inw = side.inward();
    let mut lines = vec![new(TAPE_LABEL)];
    // Every edge of the new tape node points at the old head node here.
    lines.push(set("@", O, "f.o"));
    lines.push(set("@", inw, &format!("{inw}.f")));
    lines.push(set("@", out, O));
    lines.extend(clear_bits(plan));
    lines.push(new(HEAD_LABEL));
    // Every edge of the new head node points at the new tape node.
    lines.push(set("@", O, "f.o"));
    lines.push(set("@", out, O));
    lines.push(set("@", inw, "f.f"));
    lines.push(set(F, F, "@"));
    lines.extend(clear_bits(plan));
    lines.push(set(inw, out, "@"));
    lines.push(set(&format!("{inw}.f"), out, F));
    lines.push(center(inw));
    let note = match side {
        Side::East => "grow the tape east",
        Side::West => "grow the tape west",
    };
    noted(lines, note)
}

/// The body of one `(state, symbol)` leaf: write the new symbol through
/// `f`, extend the tape if the head sits on the boundary being crossed,
/// re-center on the neighboring head node, then write the new state there.
pub fn emit_transition(
    t: &Transition,
    symbol: &str,
    state: &str,
    plan: &EncodingPlan,
) -> Vec<Line> {
    let side = Side::from(t.shift);
    let write = plan
        .encode_symbol(&t.write)
        .expect("transition writes a declared symbol");
    let next = plan
        .encode_state(&t.next)
        .expect("transition targets a declared state");
    let extension = emit_extension(side, plan);

    let mut lines = emit_write_bits(&Path::of(F), &write);
    lines.push(jump_if(side.outward(), O, 2));
    lines.push(jump_if("@", "@", extension.len() + 1));
    lines.extend(extension);
    lines.push(center(side.outward()));
    lines.extend(emit_write_bits(&Path::here(), &next));
    noted(lines, format!("({state}, {symbol}) -> {t}"))
}

/// Step-section items before jumps to the end are resolved.
enum Item {
    Line(Line),
    JumpToEnd,
}

struct StepEmitter<'a> {
    machine: &'a TuringMachine,
    plan: &'a EncodingPlan,
}

impl StepEmitter<'_> {
    /// Decision tree on the state bits of the center head node, `b0` first.
    fn state_tree(&self, bit: u32, index: usize) -> Vec<Item> {
        if bit == self.plan.state_bits() {
            return match self.machine.states().get(index) {
                Some(state) => self.symbol_tree(state, 0, 0),
                None => vec![Item::Line(stop(format!(
                    "{BAD_CODE_MESSAGE} state code {index}"
                )))],
            };
        }
        let test = Path::of(&EncodingPlan::bit(bit));
        self.branch(test, |b| self.state_tree(bit + 1, index | b << bit))
    }

    /// Decision tree on the symbol bits of the tape node under the head.
    fn symbol_tree(&self, state: &str, bit: u32, index: usize) -> Vec<Item> {
        if bit == self.plan.symbol_bits() {
            return self.leaf(state, index);
        }
        let test = Path(vec![
            Direction::new(F),
            Direction::new(EncodingPlan::bit(bit)),
        ]);
        self.branch(test, |b| self.symbol_tree(state, bit + 1, index | b << bit))
    }

    /// `if <test> o` jumps over the 0-subtree to the 1-subtree. Subtrees
    /// always end in a stop or a jump, so the 0-subtree never falls through.
    fn branch(&self, test: Path, sub: impl Fn(usize) -> Vec<Item>) -> Vec<Item> {
        let zero = sub(0);
        let one = sub(1);
        let test_line = Line {
            instr: Instruction::If {
                x: test,
                y: Path::of(O),
                target: LineRef::Relative(zero.len() as isize + 1),
            },
            note: None,
        };
        let mut items = vec![Item::Line(test_line)];
        items.extend(zero);
        items.extend(one);
        items
    }

    fn leaf(&self, state: &str, symbol_index: usize) -> Vec<Item> {
        let Some(symbol) = self.machine.symbols().get(symbol_index) else {
            return vec![Item::Line(stop(format!(
                "{BAD_CODE_MESSAGE} symbol code {symbol_index} in state {state}"
            )))];
        };
        match self.machine.lookup(state, symbol) {
            Some(t) => {
                let mut items: Vec<Item> = emit_transition(t, symbol, state, self.plan)
                    .into_iter()
                    .map(Item::Line)
                    .collect();
                items.push(Item::JumpToEnd);
                items
            }
            None => vec![Item::Line(stop(format!("{HALT_MESSAGE} {state} {symbol}")))],
        }
    }
}

/// The `step` section: state tree, symbol trees, transition leaves, and a
/// final no-op line that every completed transition jumps to.
pub fn emit_step(machine: &TuringMachine, plan: &EncodingPlan) -> Vec<Line> {
    let emitter = StepEmitter { machine, plan };
    let items = emitter.state_tree(0, 0);
    let end = items.len();
    let mut lines: Vec<Line> = items
        .into_iter()
        .enumerate()
        .map(|(i, item)| match item {
            Item::Line(l) => l,
            Item::JumpToEnd => jump_if("@", "@", end - i),
        })
        .collect();
    lines.push(Line {
        instr: Instruction::Center { x: Path::here() },
        note: Some("end of step".into()),
    });
    lines
}

/// The `prologue` section: the Origin, one tape/head pair per initial
/// cell, the initial symbols, and the start state on the head node at the
/// initial head position, which becomes the center.
pub fn emit_prologue(
    machine: &TuringMachine,
    start: &TmConfiguration,
    plan: &EncodingPlan,
) -> Vec<Line> {
    let symbol_bits = |s: &str| plan.encode_symbol(s).expect("tape holds declared symbols");
    let mut lines = vec![new(ORIGIN_LABEL)];

    // First pair: the tape node starts with every edge on the Origin, which
    // already makes o, e and w right.
    let mut first = vec![new(TAPE_LABEL)];
    first.extend(clear_bits(plan));
    first.push(new(HEAD_LABEL));
    first.push(set("@", O, "f.o"));
    first.push(set("@", E, O));
    first.push(set("@", W, O));
    first.extend(clear_bits(plan));
    first.push(set(F, F, "@"));
    lines.extend(noted(first, "cell 0"));
    lines.extend(emit_write_bits(&Path::of(F), &symbol_bits(&start.cells[0])));

    for (i, cell) in start.cells.iter().enumerate().skip(1) {
        let mut grow = emit_extension(Side::East, plan);
        grow.push(center(E));
        lines.extend(noted(grow, format!("cell {i}")));
        lines.extend(emit_write_bits(&Path::of(F), &symbol_bits(cell)));
    }

    let back = start.cells.len() - 1 - start.head;
    lines.extend(noted(
        (0..back).map(|_| center(W)).collect(),
        "to the start cell",
    ));
    let state = plan
        .encode_state(machine.start_state())
        .expect("start state is declared");
    lines.extend(noted(
        emit_write_bits(&Path::here(), &state),
        format!("start in {}", machine.start_state()),
    ));
    lines
}

/// Compiles `machine` started on `start` into a two-section program.
pub fn compile(machine: &TuringMachine, start: &TmConfiguration) -> (SmmProgram, EncodingPlan) {
    let plan = EncodingPlan::for_machine(machine);
    let program = SmmProgram::new(
        plan.directions(),
        vec![
            Section::new(PROLOGUE, emit_prologue(machine, start, &plan)),
            Section::new(STEP, emit_step(machine, &plan)),
        ],
    )
    .expect("generated program is well formed");
    (program, plan)
}

/// Program text with the plan in its header comments.
pub fn render(program: &SmmProgram, plan: &EncodingPlan) -> String {
    let mut out = String::from(
        "; compiled Turing machine\n\
         ; each step writes the symbol through f, moves the center to the\n\
         ; destination head node, then writes the new state on it\n",
    );
    out.push_str(&plan.header());
    out.push_str(&format_smm_program(program));
    out
}
