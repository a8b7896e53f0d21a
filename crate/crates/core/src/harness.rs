//! Running compiled programs one transition at a time, and checking them in
//! lockstep against the reference interpreter.

use serde::Serialize;
use thiserror::Error;

use crate::compiler::{check_layout, compile, EncodingPlan};
use crate::decoder::{
    decode_configuration, readout_value, DecodeError, ReadoutError, ReadoutPredicate,
};
use crate::smm::{RuntimeError, SectionOutcome, SmmMachine, SmmProgram, PROLOGUE, STEP};
use crate::tm::{Step, TmConfiguration, TuringMachine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("{section} ran out of fuel after {fuel} instructions")]
    FuelExhausted { section: &'static str, fuel: u64 },
    #[error("prologue stopped: {0}")]
    PrologueStopped(String),
}

/// Result of one step-section run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Completed,
    Stopped(String),
}

/// A compiled program plus its live machine, past the prologue.
#[derive(Debug, Clone)]
pub struct Session<'p> {
    program: &'p SmmProgram,
    plan: &'p EncodingPlan,
    machine: SmmMachine,
    fuel: u64,
}

impl<'p> Session<'p> {
    /// Runs the prologue with `fuel` instructions to spare.
    pub fn start(
        program: &'p SmmProgram,
        plan: &'p EncodingPlan,
        fuel: u64,
    ) -> Result<Self, SessionError> {
        let mut machine = SmmMachine::for_program(program);
        match machine.run_section(program, PROLOGUE, fuel)? {
            SectionOutcome::Completed => {}
            SectionOutcome::Stopped(m) => return Err(SessionError::PrologueStopped(m)),
            SectionOutcome::FuelExhausted => {
                return Err(SessionError::FuelExhausted {
                    section: PROLOGUE,
                    fuel,
                })
            }
        }
        Ok(Session {
            program,
            plan,
            machine,
            fuel,
        })
    }

    /// One run of the step section.
    pub fn step(&mut self) -> Result<StepResult, SessionError> {
        match self.machine.run_section(self.program, STEP, self.fuel)? {
            SectionOutcome::Completed => Ok(StepResult::Completed),
            SectionOutcome::Stopped(m) => Ok(StepResult::Stopped(m)),
            SectionOutcome::FuelExhausted => Err(SessionError::FuelExhausted {
                section: STEP,
                fuel: self.fuel,
            }),
        }
    }

    pub fn decode(&self) -> Result<TmConfiguration, DecodeError> {
        decode_configuration(&self.machine, self.plan).map(|d| d.config)
    }

    pub fn machine(&self) -> &SmmMachine {
        &self.machine
    }

    pub fn plan(&self) -> &EncodingPlan {
        self.plan
    }

    pub fn steps(&self) -> u64 {
        self.machine.steps_executed()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiffOptions {
    pub steps: u64,
    pub fuel: u64,
    /// Also run the whole-graph layout check after every step.
    pub check_layout: bool,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions {
            steps: 10_000,
            fuel: crate::smm::DEFAULT_FUEL,
            check_layout: true,
        }
    }
}

/// Why the compiled run and the reference run disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mismatch {
    Configuration,
    /// The reference halted but the compiled step completed.
    OracleHalted,
    /// The compiled step stopped but the reference has a transition.
    SmmStopped {
        message: String,
    },
    NodeCount {
        expected: usize,
        actual: usize,
    },
    Layout {
        error: String,
    },
    Decode {
        error: String,
    },
    Runtime {
        error: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DiffStatus {
    /// Every requested step matched.
    Equivalent,
    /// Both sides halt on configuration `step`.
    BothHalted { step: u64 },
    Diverged {
        step: u64,
        mismatch: Mismatch,
        oracle: Option<TmConfiguration>,
        decoded: Option<TmConfiguration>,
    },
    /// A step section ran out of fuel while processing configuration `step`.
    BudgetExhausted { step: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    /// Configurations compared, counting the initial one.
    pub steps_compared: u64,
    pub status: DiffStatus,
    /// Live node count after the prologue and after each completed step.
    pub node_counts: Vec<usize>,
}

impl DiffReport {
    pub fn is_success(&self) -> bool {
        matches!(
            self.status,
            DiffStatus::Equivalent | DiffStatus::BothHalted { .. }
        )
    }
}

/// Compiles `machine`, then advances the reference interpreter and the
/// compiled program together, comparing after the prologue and after every
/// step.
pub fn lockstep_diff(
    machine: &TuringMachine,
    start: &TmConfiguration,
    options: DiffOptions,
) -> DiffReport {
    let (program, plan) = compile(machine, start);
    lockstep_diff_program(machine, start, &program, &plan, options)
}

/// As [`lockstep_diff`] but against a given program, which need not be the
/// compiler's output.
pub fn lockstep_diff_program(
    machine: &TuringMachine,
    start: &TmConfiguration,
    program: &SmmProgram,
    plan: &EncodingPlan,
    options: DiffOptions,
) -> DiffReport {
    let mut node_counts = Vec::new();
    let mut compared = 0;
    let status = diff_loop(
        machine,
        start,
        program,
        plan,
        options,
        &mut node_counts,
        &mut compared,
    );
    DiffReport {
        steps_compared: compared,
        status,
        node_counts,
    }
}

fn diverged(
    step: u64,
    mismatch: Mismatch,
    oracle: Option<&TmConfiguration>,
    decoded: Option<TmConfiguration>,
) -> DiffStatus {
    DiffStatus::Diverged {
        step,
        mismatch,
        oracle: oracle.cloned(),
        decoded,
    }
}

fn diff_loop(
    machine: &TuringMachine,
    start: &TmConfiguration,
    program: &SmmProgram,
    plan: &EncodingPlan,
    options: DiffOptions,
    node_counts: &mut Vec<usize>,
    compared: &mut u64,
) -> DiffStatus {
    let mut session = match Session::start(program, plan, options.fuel) {
        Ok(s) => s,
        Err(SessionError::FuelExhausted { .. }) => return DiffStatus::BudgetExhausted { step: 0 },
        Err(e) => {
            return diverged(
                0,
                Mismatch::Runtime {
                    error: e.to_string(),
                },
                Some(start),
                None,
            )
        }
    };
    let mut oracle = start.clone();
    let mut step = 0;
    loop {
        // Compare configuration `step`.
        let sm = session.machine();
        node_counts.push(sm.node_count());
        let decoded = match decode_configuration(sm, plan) {
            Ok(d) => d.config,
            Err(e) => {
                return diverged(
                    step,
                    Mismatch::Decode {
                        error: e.to_string(),
                    },
                    Some(&oracle),
                    None,
                )
            }
        };
        if decoded != oracle {
            return diverged(step, Mismatch::Configuration, Some(&oracle), Some(decoded));
        }
        let expected = 2 * decoded.cells.len() + 1;
        if sm.node_count() != expected {
            let mismatch = Mismatch::NodeCount {
                expected,
                actual: sm.node_count(),
            };
            return diverged(step, mismatch, Some(&oracle), Some(decoded));
        }
        if options.check_layout {
            if let Err(e) = check_layout(sm, plan) {
                let mismatch = Mismatch::Layout {
                    error: e.to_string(),
                };
                return diverged(step, mismatch, Some(&oracle), Some(decoded));
            }
        }
        *compared = step + 1;
        if step == options.steps {
            return DiffStatus::Equivalent;
        }

        let next = machine.step(&oracle);
        let result = match session.step() {
            Ok(r) => r,
            Err(SessionError::FuelExhausted { .. }) => return DiffStatus::BudgetExhausted { step },
            Err(e) => {
                return diverged(
                    step,
                    Mismatch::Runtime {
                        error: e.to_string(),
                    },
                    Some(&oracle),
                    None,
                )
            }
        };
        match (next, result) {
            (Step::Halted, StepResult::Stopped(_)) => return DiffStatus::BothHalted { step },
            (Step::Halted, StepResult::Completed) => {
                return diverged(step, Mismatch::OracleHalted, Some(&oracle), None)
            }
            (Step::Next(_), StepResult::Stopped(message)) => {
                return diverged(step, Mismatch::SmmStopped { message }, Some(&oracle), None)
            }
            (Step::Next(c), StepResult::Completed) => oracle = c,
        }
        step += 1;
    }
}

#[derive(Debug, Error)]
pub enum ReadoutRunError {
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("step {step}: {source}")]
    Readout { step: u64, source: ReadoutError },
}

/// Runs a compiled program for up to `steps` transitions and collects
/// `(step, value)` at every configuration matching `predicate`.
pub fn readout_sequence(
    program: &SmmProgram,
    plan: &EncodingPlan,
    steps: u64,
    predicate: &ReadoutPredicate,
    base: u32,
    fuel: u64,
) -> Result<Vec<(u64, u128)>, ReadoutRunError> {
    let mut session = Session::start(program, plan, fuel)?;
    let mut values = Vec::new();
    for step in 0..=steps {
        let config = session.decode().map_err(SessionError::from)?;
        if let Some(v) = readout_value(&config, predicate, plan.blank(), base)
            .map_err(|source| ReadoutRunError::Readout { step, source })?
        {
            values.push((step, v));
        }
        if step == steps {
            break;
        }
        if let StepResult::Stopped(_) = session.step()? {
            break;
        }
    }
    Ok(values)
}
