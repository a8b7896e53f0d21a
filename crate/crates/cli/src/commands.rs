use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use smm_core::compiler::{compile, render, EncodingPlan, O};
use smm_core::decoder::{tsv_row, ReadoutPredicate, TSV_HEADER};
use smm_core::harness::{
    lockstep_diff, readout_sequence, DiffOptions, DiffReport, DiffStatus, ReadoutRunError, Session,
    SessionError, StepResult,
};
use smm_core::smm::{parse_smm_program, to_dot, DotOptions, SmmProgram, PROLOGUE, STEP};
use smm_core::tm::{parse_tm_spec, Step, TmConfiguration, TuringMachine};

use crate::{Command, DrawArgs};

pub const EXIT_INPUT: u8 = 1;
pub const EXIT_DIVERGED: u8 = 2;
pub const EXIT_FUEL: u8 = 3;

pub fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Compile { spec, out } => cmd_compile(&spec, &out),
        Command::Run {
            program,
            steps,
            dot_every,
            dot_dir,
            trace,
            draw,
            fuel,
        } => cmd_run(
            &program,
            steps,
            dot_every,
            &dot_dir,
            trace.as_deref(),
            &draw,
            fuel,
        ),
        Command::Oracle { spec, steps, trace } => cmd_oracle(&spec, steps, trace.as_deref()),
        Command::Diff {
            spec,
            steps,
            fuel,
            report,
        } => cmd_diff(&spec, steps, fuel, report.as_deref()),
        Command::Readout {
            spec,
            steps,
            state,
            symbol,
            base,
            fuel,
        } => cmd_readout(&spec, steps, ReadoutPredicate { state, symbol }, base, fuel),
        Command::Dot {
            program,
            steps,
            out,
            draw,
            fuel,
        } => cmd_dot(&program, steps, out.as_deref(), &draw, fuel),
    }
}

fn load_spec(path: &Path) -> Result<(TuringMachine, TmConfiguration)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_tm_spec(&text).with_context(|| format!("{}", path.display()))
}

/// A program file and the plan stored in its header comments.
fn load_program(path: &Path) -> Result<(SmmProgram, EncodingPlan)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let program = parse_smm_program(&text).with_context(|| format!("{}", path.display()))?;
    let plan = EncodingPlan::from_header(&text)
        .with_context(|| format!("{}: missing or bad plan header", path.display()))?;
    if plan.directions() != program.directions() {
        bail!(
            "{}: plan header does not match the declared directions",
            path.display()
        );
    }
    Ok((program, plan))
}

/// Trace destination: a file when given, otherwise standard output.
fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn dot_options(draw: &DrawArgs, plan: &EncodingPlan) -> DotOptions {
    if draw.all_edges {
        return DotOptions::default();
    }
    match &draw.omit {
        Some(names) => DotOptions::omitting(names.iter().map(String::as_str)),
        None => {
            let bits: Vec<String> = (0..plan.bit_count()).map(EncodingPlan::bit).collect();
            DotOptions::omitting(std::iter::once(O).chain(bits.iter().map(String::as_str)))
        }
    }
}

fn fuel_exit(e: &SessionError) -> Option<ExitCode> {
    match e {
        SessionError::FuelExhausted { .. } => {
            eprintln!("error: {e}");
            Some(ExitCode::from(EXIT_FUEL))
        }
        _ => None,
    }
}

fn cmd_compile(spec: &Path, out: &Path) -> Result<ExitCode> {
    let (machine, start) = load_spec(spec)?;
    let (program, plan) = compile(&machine, &start);
    fs::write(out, render(&program, &plan))
        .with_context(|| format!("writing {}", out.display()))?;
    println!("directions: {}", program.directions().len());
    for name in [PROLOGUE, STEP] {
        let lines = program.section(name).map_or(0, |s| s.len());
        println!("{name}: {lines} lines");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(
    path: &Path,
    steps: u64,
    dot_every: u64,
    dot_dir: &Path,
    trace: Option<&Path>,
    draw: &DrawArgs,
    fuel: u64,
) -> Result<ExitCode> {
    let (program, plan) = load_program(path)?;
    let options = dot_options(draw, &plan);
    if dot_every > 0 {
        fs::create_dir_all(dot_dir).with_context(|| format!("creating {}", dot_dir.display()))?;
    }
    let mut out = open_output(trace)?;
    writeln!(out, "{TSV_HEADER}")?;

    let mut session = match Session::start(&program, &plan, fuel) {
        Ok(s) => s,
        Err(e) => return fuel_exit(&e).ok_or_else(|| e.into()),
    };
    let snapshot = |session: &Session, step: u64| -> Result<()> {
        if dot_every > 0 && step.is_multiple_of(dot_every) {
            let file: PathBuf = dot_dir.join(format!("step-{step:05}.dot"));
            fs::write(&file, to_dot(session.machine(), &options))
                .with_context(|| format!("writing {}", file.display()))?;
        }
        Ok(())
    };

    let mut step = 0;
    loop {
        let config = session
            .decode()
            .with_context(|| format!("decoding step {step}"))?;
        writeln!(out, "{}", tsv_row(step, &config))?;
        snapshot(&session, step)?;
        if step == steps {
            break;
        }
        match session.step() {
            Ok(StepResult::Completed) => step += 1,
            Ok(StepResult::Stopped(message)) => {
                out.flush()?;
                eprintln!("stopped at step {step}: {message}");
                break;
            }
            Err(e) => {
                out.flush()?;
                return fuel_exit(&e).ok_or_else(|| e.into());
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(spec: &Path, steps: u64, trace: Option<&Path>) -> Result<ExitCode> {
    let (machine, start) = load_spec(spec)?;
    let mut out = open_output(trace)?;
    writeln!(out, "{TSV_HEADER}")?;
    let mut config = start;
    for step in 0..=steps {
        writeln!(out, "{}", tsv_row(step, &config))?;
        match machine.step(&config) {
            Step::Halted => {
                out.flush()?;
                eprintln!("halted at step {step}");
                break;
            }
            Step::Next(c) => config = c,
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn describe(report: &DiffReport) -> String {
    let show = |c: &Option<TmConfiguration>| c.as_ref().map_or("-".to_owned(), |c| c.to_string());
    match &report.status {
        DiffStatus::Equivalent => format!(
            "equivalent: {} configurations compared",
            report.steps_compared
        ),
        DiffStatus::BothHalted { step } => format!("both halted at step {step}"),
        DiffStatus::BudgetExhausted { step } => {
            format!("fuel exhausted while running step {step}")
        }
        DiffStatus::Diverged {
            step,
            mismatch,
            oracle,
            decoded,
        } => format!(
            "diverged at step {step}: {}\n  oracle:  {}\n  decoded: {}",
            serde_json::to_string(mismatch).unwrap_or_default(),
            show(oracle),
            show(decoded)
        ),
    }
}

fn cmd_diff(spec: &Path, steps: u64, fuel: u64, report_path: Option<&Path>) -> Result<ExitCode> {
    let (machine, start) = load_spec(spec)?;
    let options = DiffOptions {
        steps,
        fuel,
        ..DiffOptions::default()
    };
    let report = lockstep_diff(&machine, &start, options);
    if let Some(path) = report_path {
        let json = serde_json::to_string_pretty(&report)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{}", describe(&report));
    Ok(ExitCode::from(match report.status {
        DiffStatus::Equivalent | DiffStatus::BothHalted { .. } => 0,
        DiffStatus::Diverged { .. } => EXIT_DIVERGED,
        DiffStatus::BudgetExhausted { .. } => EXIT_FUEL,
    }))
}

fn cmd_readout(
    spec: &Path,
    steps: u64,
    predicate: ReadoutPredicate,
    base: u32,
    fuel: u64,
) -> Result<ExitCode> {
    let (machine, start) = load_spec(spec)?;
    if machine.state_index(&predicate.state).is_none() {
        bail!("state `{}` is not declared", predicate.state);
    }
    if machine.symbol_index(&predicate.symbol).is_none() {
        bail!("symbol `{}` is not declared", predicate.symbol);
    }
    let (program, plan) = compile(&machine, &start);
    let values = match readout_sequence(&program, &plan, steps, &predicate, base, fuel) {
        Ok(v) => v,
        Err(ReadoutRunError::Session(e)) => return fuel_exit(&e).ok_or_else(|| e.into()),
        Err(e) => return Err(e.into()),
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for (step, value) in values {
        writeln!(out, "{step} {value}")?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dot(
    path: &Path,
    steps: u64,
    out_path: Option<&Path>,
    draw: &DrawArgs,
    fuel: u64,
) -> Result<ExitCode> {
    let (program, plan) = load_program(path)?;
    let mut session = match Session::start(&program, &plan, fuel) {
        Ok(s) => s,
        Err(e) => return fuel_exit(&e).ok_or_else(|| e.into()),
    };
    for step in 0..steps {
        match session.step() {
            Ok(StepResult::Completed) => {}
            Ok(StepResult::Stopped(message)) => {
                eprintln!("stopped at step {step}: {message}");
                break;
            }
            Err(e) => return fuel_exit(&e).ok_or_else(|| e.into()),
        }
    }
    let mut out = open_output(out_path)?;
    out.write_all(to_dot(session.machine(), &dot_options(draw, &plan)).as_bytes())?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
