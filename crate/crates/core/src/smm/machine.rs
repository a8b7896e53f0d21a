use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Direction, Instruction, Path, Section, SmmProgram, STEP};

/// Instruction budget for one section run unless the caller says otherwise.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Nodes are never freed, so ids are dense indices in creation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    /// One target per declared direction, in declaration order.
    pub edges: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("{section}:{line}: path `{path}` does not name a node")]
    InvalidPath {
        section: String,
        line: usize,
        path: Path,
    },
    #[error("{section}:{line}: no center yet; only `new` can run")]
    NoCenter { section: String, line: usize },
    #[error("{section}:{line}: no such line")]
    NoSuchLine { section: String, line: usize },
    #[error("no section named `{0}`")]
    UnknownSection(String),
}

/// Control flow after one instruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flow {
    Next(usize),
    SectionEnd,
    Stopped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionOutcome {
    Completed,
    Stopped(String),
    /// The instruction budget ran out; the machine is left mid-section.
    FuelExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmmMachine {
    directions: Vec<Direction>,
    index: HashMap<String, usize>,
    nodes: Vec<Node>,
    center: Option<NodeId>,
    halted: Option<String>,
    steps_executed: u64,
    instructions_executed: u64,
}

impl SmmMachine {
    /// An empty machine over `directions`.
    pub fn new(directions: &[Direction]) -> Self {
        let index = directions
            .iter()
            .enumerate()
            .map(|(i, d)| (d.0.clone(), i))
            .collect();
        SmmMachine {
            directions: directions.to_vec(),
            index,
            nodes: Vec::new(),
            center: None,
            halted: None,
            steps_executed: 0,
            instructions_executed: 0,
        }
    }

    pub fn for_program(program: &SmmProgram) -> Self {
        Self::new(program.directions())
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn direction_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    pub fn center(&self) -> Option<NodeId> {
        self.center
    }

    /// The stop message, once a `stop` has run.
    pub fn halted(&self) -> Option<&str> {
        self.halted.as_deref()
    }

    /// Completed runs of the `step` section.
    pub fn steps_executed(&self) -> u64 {
        self.steps_executed
    }

    pub fn instructions_executed(&self) -> u64 {
        self.instructions_executed
    }

    /// Target of the edge named `dir` leaving `from`.
    pub fn edge(&self, from: NodeId, dir: &str) -> Option<NodeId> {
        let d = self.direction_index(dir)?;
        Some(self.nodes[from.0].edges[d])
    }

    /// Follows `path` from `from`; `None` when a step is not a declared direction.
    pub fn follow(&self, from: NodeId, path: &Path) -> Option<NodeId> {
        path.steps()
            .iter()
            .try_fold(from, |at, d| self.edge(at, d.as_str()))
    }

    /// `p(x)`: the node reached from the center along `path`. The outer
    /// `None` means there is no center yet; the inner one that the path is
    /// not valid.
    pub fn resolve_path(&self, path: &Path) -> Option<Option<NodeId>> {
        self.center.map(|c| self.follow(c, path))
    }

    /// Executes the instruction on 1-based `line` of `section`.
    pub fn exec(&mut self, section: &Section, line: usize) -> Result<Flow, RuntimeError> {
        let instr = section.get(line).ok_or_else(|| RuntimeError::NoSuchLine {
            section: section.name.clone(),
            line,
        })?;
        self.instructions_executed += 1;
        let next = if line >= section.len() {
            Flow::SectionEnd
        } else {
            Flow::Next(line + 1)
        };

        if let Instruction::New { label } = instr {
            let id = NodeId(self.nodes.len());
            let target = self.center.unwrap_or(id);
            self.nodes.push(Node {
                label: label.clone(),
                edges: vec![target; self.directions.len()],
            });
            self.center = Some(id);
            return Ok(next);
        }

        let center = self.center.ok_or_else(|| RuntimeError::NoCenter {
            section: section.name.clone(),
            line,
        })?;
        let eval = |m: &Self, p: &Path| {
            m.follow(center, p)
                .ok_or_else(|| RuntimeError::InvalidPath {
                    section: section.name.clone(),
                    line,
                    path: p.clone(),
                })
        };

        match instr {
            Instruction::New { .. } => unreachable!("handled above"),
            Instruction::Set { x, dir, y } => {
                let from = eval(self, x)?;
                let to = eval(self, y)?;
                let d = self.direction_index(dir.as_str()).ok_or_else(|| {
                    RuntimeError::InvalidPath {
                        section: section.name.clone(),
                        line,
                        path: Path(vec![dir.clone()]),
                    }
                })?;
                self.nodes[from.0].edges[d] = to;
                Ok(next)
            }
            Instruction::Center { x } => {
                self.center = Some(eval(self, x)?);
                Ok(next)
            }
            Instruction::If { x, y, target } => {
                if eval(self, x)? != eval(self, y)? {
                    return Ok(next);
                }
                match target.resolve(line) {
                    Some(t) if (1..=section.len()).contains(&t) => Ok(Flow::Next(t)),
                    _ => Err(RuntimeError::NoSuchLine {
                        section: section.name.clone(),
                        line,
                    }),
                }
            }
            Instruction::Stop { message } => {
                self.halted = Some(message.clone());
                Ok(Flow::Stopped(message.clone()))
            }
        }
    }

    /// Runs `section` from line 1 until it falls off the end, stops, or
    /// spends `fuel` instructions. A halted machine refuses to run and
    /// reports its stop message again.
    pub fn run_section(
        &mut self,
        program: &SmmProgram,
        name: &str,
        fuel: u64,
    ) -> Result<SectionOutcome, RuntimeError> {
        let section = program
            .section(name)
            .ok_or_else(|| RuntimeError::UnknownSection(name.to_owned()))?;
        if let Some(message) = &self.halted {
            return Ok(SectionOutcome::Stopped(message.clone()));
        }
        if section.is_empty() {
            return Ok(self.complete(name));
        }
        let mut line = 1;
        for _ in 0..fuel {
            match self.exec(section, line)? {
                Flow::Next(l) => line = l,
                Flow::SectionEnd => return Ok(self.complete(name)),
                Flow::Stopped(message) => return Ok(SectionOutcome::Stopped(message)),
            }
        }
        Ok(SectionOutcome::FuelExhausted)
    }

    fn complete(&mut self, name: &str) -> SectionOutcome {
        if name == STEP {
            self.steps_executed += 1;
        }
        SectionOutcome::Completed
    }
}
