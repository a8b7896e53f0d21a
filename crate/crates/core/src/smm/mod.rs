//! Storage modification machines.
//!
//! Memory is a directed graph in which every node has one outgoing edge per
//! declared direction, plus a distinguished *center* node. Paths are
//! sequences of directions followed from the center; the empty path (`@` in
//! program text) is the center itself. Programs are lists of five
//! instructions (`new`, `set`, `center`, `if`, `stop`) split into named
//! sections whose lines are numbered from 1.

mod dot;
mod machine;
mod text;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub use dot::{to_dot, DotOptions};
pub use machine::{Flow, Node, NodeId, RuntimeError, SectionOutcome, SmmMachine, DEFAULT_FUEL};
pub use text::{format_smm_program, parse_smm_program, SyntaxError};

pub const PROLOGUE: &str = "prologue";
pub const STEP: &str = "step";

/// An edge label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(pub String);

impl Direction {
    pub fn new(name: impl Into<String>) -> Self {
        Direction(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A string of directions. Displays as `a.b.c`, or `@` when empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<Direction>);

impl Path {
    pub fn here() -> Self {
        Path(Vec::new())
    }

    /// `Path::of("f.b0")`; `"@"` or `""` is the empty path.
    pub fn of(spec: &str) -> Self {
        if spec.is_empty() || spec == "@" {
            return Path::here();
        }
        Path(spec.split('.').map(Direction::new).collect())
    }

    pub fn is_here(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[Direction] {
        &self.0
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("@");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(d.as_str())?;
        }
        Ok(())
    }
}

/// Jump target of an `if`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineRef {
    /// 1-based line within the section.
    Absolute(usize),
    /// Offset from the current line, never zero.
    Relative(isize),
}

impl LineRef {
    /// The 1-based target line when jumping from `from`, if it exists at all.
    pub fn resolve(self, from: usize) -> Option<usize> {
        match self {
            LineRef::Absolute(k) => Some(k),
            LineRef::Relative(k) => from.checked_add_signed(k),
        }
    }
}

impl fmt::Display for LineRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineRef::Absolute(k) => write!(f, "{k}"),
            LineRef::Relative(k) => write!(f, "{k:+}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// Create a node whose every edge targets the old center; it becomes the center.
    New {
        label: String,
    },
    /// Redirect the `dir` edge of `p(x)` to `p(y)`.
    Set {
        x: Path,
        dir: Direction,
        y: Path,
    },
    Center {
        x: Path,
    },
    /// Jump when `p(x)` and `p(y)` are the same node.
    If {
        x: Path,
        y: Path,
        target: LineRef,
    },
    Stop {
        message: String,
    },
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::New { label } => write!(f, "new {label}"),
            Instruction::Set { x, dir, y } => write!(f, "set {x} {dir} to {y}"),
            Instruction::Center { x } => write!(f, "center {x}"),
            Instruction::If { x, y, target } => write!(f, "if {x} {y} then {target}"),
            Instruction::Stop { message } if message.is_empty() => f.write_str("stop"),
            Instruction::Stop { message } => write!(f, "stop {message}"),
        }
    }
}

/// An instruction and an optional trailing comment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    pub instr: Instruction,
    pub note: Option<String>,
}

impl From<Instruction> for Line {
    fn from(instr: Instruction) -> Self {
        Line { instr, note: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub lines: Vec<Line>,
}

impl Section {
    pub fn new(name: impl Into<String>, lines: Vec<Line>) -> Self {
        Section {
            name: name.into(),
            lines,
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// The instruction on 1-based `line`.
    pub fn get(&self, line: usize) -> Option<&Instruction> {
        line.checked_sub(1)
            .and_then(|i| self.lines.get(i))
            .map(|l| &l.instr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("direction `{0}` declared twice")]
    DuplicateDirection(String),
    #[error("`{0}` is not a valid token")]
    BadToken(String),
    #[error("section `{0}` declared twice")]
    DuplicateSection(String),
    #[error("missing required section `{0}`")]
    MissingSection(&'static str),
    #[error("{section}:{line}: undeclared direction `{name}`")]
    UndeclaredDirection {
        section: String,
        line: usize,
        name: String,
    },
    #[error("{section}:{line}: jump {target} leaves a section of {len} lines")]
    JumpOutOfBounds {
        section: String,
        line: usize,
        target: LineRef,
        len: usize,
    },
    #[error("{section}:{line}: `{text}` cannot be written on one line")]
    BadText {
        section: String,
        line: usize,
        text: String,
    },
}

/// A validated program: declared directions plus named sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmmProgram {
    directions: Vec<Direction>,
    sections: Vec<Section>,
}

impl SmmProgram {
    /// Checks every invariant: unique directions and sections, `prologue` and
    /// `step` present, every direction used is declared, every jump lands
    /// inside its section.
    pub fn new(directions: Vec<Direction>, sections: Vec<Section>) -> Result<Self, ProgramError> {
        let mut seen = HashSet::new();
        for d in &directions {
            if !is_token(d.as_str()) || d.as_str() == "@" {
                return Err(ProgramError::BadToken(d.0.clone()));
            }
            if !seen.insert(d.as_str()) {
                return Err(ProgramError::DuplicateDirection(d.0.clone()));
            }
        }
        let mut names = HashSet::new();
        for s in &sections {
            if !is_token(&s.name) {
                return Err(ProgramError::BadToken(s.name.clone()));
            }
            if !names.insert(s.name.as_str()) {
                return Err(ProgramError::DuplicateSection(s.name.clone()));
            }
            validate_section(s, &seen)?;
        }
        for required in [PROLOGUE, STEP] {
            if !names.contains(required) {
                return Err(ProgramError::MissingSection(required));
            }
        }
        Ok(SmmProgram {
            directions,
            sections,
        })
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

fn is_token(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || c == '.' || c == ';')
}

fn validate_section(s: &Section, declared: &HashSet<&str>) -> Result<(), ProgramError> {
    let len = s.lines.len();
    for (i, l) in s.lines.iter().enumerate() {
        let line = i + 1;
        let undeclared = |name: &str| ProgramError::UndeclaredDirection {
            section: s.name.clone(),
            line,
            name: name.to_owned(),
        };
        let check_path = |p: &Path| {
            p.steps()
                .iter()
                .find(|d| !declared.contains(d.as_str()))
                .map_or(Ok(()), |d| Err(undeclared(d.as_str())))
        };
        let bad_text = |text: &str| ProgramError::BadText {
            section: s.name.clone(),
            line,
            text: text.to_owned(),
        };
        match &l.instr {
            Instruction::New { label } => {
                if !is_token(label) || label == "@" {
                    return Err(bad_text(label));
                }
            }
            Instruction::Set { x, dir, y } => {
                check_path(x)?;
                if !declared.contains(dir.as_str()) {
                    return Err(undeclared(dir.as_str()));
                }
                check_path(y)?;
            }
            Instruction::Center { x } => check_path(x)?,
            Instruction::If { x, y, target } => {
                check_path(x)?;
                check_path(y)?;
                let ok = match *target {
                    LineRef::Relative(0) => false,
                    t => t.resolve(line).is_some_and(|t| (1..=len).contains(&t)),
                };
                if !ok {
                    return Err(ProgramError::JumpOutOfBounds {
                        section: s.name.clone(),
                        line,
                        target: *target,
                        len,
                    });
                }
            }
            Instruction::Stop { message } => {
                if message.contains([';', '\n', '\r']) || message.trim() != message {
                    return Err(bad_text(message));
                }
            }
        }
        if let Some(note) = &l.note {
            if note.is_empty() || note.contains(['\n', '\r']) || note.trim() != note {
                return Err(bad_text(note));
            }
        }
    }
    Ok(())
}
