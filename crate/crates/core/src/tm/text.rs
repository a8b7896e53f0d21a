//! Line-oriented TM spec files.
//!
//! ```text
//! symbols b 0 1 2      # blank first
//! blank b
//! states A B C
//! start A
//! rule A 2 1 R A
//! tape 2 0 1
//! head 0               # optional
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{MachineError, Move, TmConfiguration, TuringMachine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 when the problem is a missing directive.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`{directive}` expects {expected}")]
    Arity {
        directive: &'static str,
        expected: &'static str,
    },
    #[error("`{0}` given more than once")]
    Repeated(&'static str),
    #[error("missing `{0}` directive")]
    Missing(&'static str),
    #[error("blank `{blank}` is not the first symbol `{first}`")]
    BlankNotFirst { blank: String, first: String },
    #[error("move must be L or R, got `{0}`")]
    BadMove(String),
    #[error("head index `{0}` is not a number")]
    BadHead(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

fn err(line: usize, kind: impl Into<ParseErrorKind>) -> ParseError {
    ParseError {
        line,
        kind: kind.into(),
    }
}

struct Rule<'a> {
    line: usize,
    fields: Vec<&'a str>,
}

/// Parses a TM spec file into the machine and its initial configuration.
pub fn parse_tm_spec(text: &str) -> Result<(TuringMachine, TmConfiguration), ParseError> {
    let mut symbols: Option<(usize, Vec<&str>)> = None;
    let mut blank: Option<(usize, &str)> = None;
    let mut states: Option<(usize, Vec<&str>)> = None;
    let mut start: Option<(usize, &str)> = None;
    let mut tape: Option<(usize, Vec<&str>)> = None;
    let mut head: Option<(usize, usize)> = None;
    let mut rules = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let Some(directive) = words.next() else {
            continue;
        };
        let args: Vec<&str> = words.collect();
        match directive {
            "symbols" => set_list(&mut symbols, "symbols", line, args)?,
            "states" => set_list(&mut states, "states", line, args)?,
            "tape" => set_list(&mut tape, "tape", line, args)?,
            "blank" => set_one(&mut blank, "blank", line, &args)?,
            "start" => set_one(&mut start, "start", line, &args)?,
            "head" => {
                let mut slot = None;
                set_one(&mut slot, "head", line, &args)?;
                if head.is_some() {
                    return Err(err(line, ParseErrorKind::Repeated("head")));
                }
                let (_, token) = slot.expect("set_one fills the slot");
                let index = token
                    .parse()
                    .map_err(|_| err(line, ParseErrorKind::BadHead(token.to_owned())))?;
                head = Some((line, index));
            }
            "rule" => {
                if args.len() != 5 {
                    return Err(err(
                        line,
                        ParseErrorKind::Arity {
                            directive: "rule",
                            expected: "<state> <read> <write> <L|R> <next>",
                        },
                    ));
                }
                rules.push(Rule { line, fields: args });
            }
            other => {
                return Err(err(
                    line,
                    ParseErrorKind::UnknownDirective(other.to_owned()),
                ))
            }
        }
    }

    let (sym_line, symbols) = symbols.ok_or(err(0, ParseErrorKind::Missing("symbols")))?;
    let (_, states) = states.ok_or(err(0, ParseErrorKind::Missing("states")))?;
    let (start_line, start) = start.ok_or(err(0, ParseErrorKind::Missing("start")))?;
    if let Some((line, b)) = blank {
        if b != symbols[0] {
            return Err(err(
                line,
                ParseErrorKind::BlankNotFirst {
                    blank: b.to_owned(),
                    first: symbols[0].to_owned(),
                },
            ));
        }
    }

    let mut machine = TuringMachine::new(symbols.iter().copied(), states.iter().copied(), start)
        .map_err(|e| {
            let line = match e {
                MachineError::UndeclaredState(_) => start_line,
                _ => sym_line,
            };
            err(line, e)
        })?;

    for rule in rules {
        let f = &rule.fields;
        let shift = Move::from_letter(f[3])
            .ok_or_else(|| err(rule.line, ParseErrorKind::BadMove(f[3].into())))?;
        machine
            .add_rule(f[0], f[1], f[2], shift, f[4])
            .map_err(|e| err(rule.line, e))?;
    }

    let (tape_line, cells) = tape.unwrap_or((0, vec![machine.blank()]));
    let (head_line, head) = head.unwrap_or((tape_line, 0));
    let config = machine.configuration(cells, head).map_err(|e| {
        let line = match e {
            MachineError::HeadOutOfRange { .. } => head_line,
            _ => tape_line,
        };
        err(line, e)
    })?;
    Ok((machine, config))
}

fn set_list<'a>(
    slot: &mut Option<(usize, Vec<&'a str>)>,
    name: &'static str,
    line: usize,
    args: Vec<&'a str>,
) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(err(line, ParseErrorKind::Repeated(name)));
    }
    if args.is_empty() {
        return Err(err(
            line,
            ParseErrorKind::Arity {
                directive: name,
                expected: "at least one token",
            },
        ));
    }
    *slot = Some((line, args));
    Ok(())
}

fn set_one<'a>(
    slot: &mut Option<(usize, &'a str)>,
    name: &'static str,
    line: usize,
    args: &[&'a str],
) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(err(line, ParseErrorKind::Repeated(name)));
    }
    match args {
        [one] => {
            *slot = Some((line, one));
            Ok(())
        }
        _ => Err(err(
            line,
            ParseErrorKind::Arity {
                directive: name,
                expected: "exactly one token",
            },
        )),
    }
}

/// Canonical spec text. `parse_tm_spec(&format_tm_spec(m, c))` gives back
/// `(m, c)` whenever `c` is in `m`'s start state.
pub fn format_tm_spec(machine: &TuringMachine, config: &TmConfiguration) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "symbols {}", machine.symbols().join(" "));
    let _ = writeln!(out, "blank {}", machine.blank());
    let _ = writeln!(out, "states {}", machine.states().join(" "));
    let _ = writeln!(out, "start {}", machine.start_state());
    for (state, read, t) in machine.rules() {
        let _ = writeln!(
            out,
            "rule {state} {read} {} {} {}",
            t.write,
            t.shift.letter(),
            t.next
        );
    }
    let _ = writeln!(out, "tape {}", config.cells.join(" "));
    let _ = writeln!(out, "head {}", config.head);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::COLLATZ_SPEC;

    #[test]
    fn parses_collatz() {
        let (m, c) = parse_tm_spec(COLLATZ_SPEC).unwrap();
        assert_eq!(m.symbols(), ["b", "0", "1", "2"]);
        assert_eq!(m.states(), ["A", "B", "C"]);
        assert_eq!(m.rule_count(), 12);
        assert_eq!(c.state, "A");
        assert_eq!(c.cells, ["2", "0", "1"]);
        assert_eq!(c.head, 0);
    }

    #[test]
    fn empty_table_and_blank_tape() {
        let (m, c) = parse_tm_spec("symbols b\nstates A\nstart A\ntape b\n").unwrap();
        assert_eq!(m.rule_count(), 0);
        assert_eq!(c.cells, ["b"]);
    }

    #[test]
    fn tape_defaults_to_one_blank() {
        let (_, c) = parse_tm_spec("symbols _ 1\nstates A\nstart A\n").unwrap();
        assert_eq!(c.cells, ["_"]);
        assert_eq!(c.head, 0);
    }

    #[test]
    fn undeclared_symbol_in_rule_names_the_line() {
        let text = "symbols b 0\nstates A\nstart A\n# comment\nrule A x x R A\n";
        let e = parse_tm_spec(text).unwrap_err();
        assert_eq!(e.line, 5);
        assert_eq!(
            e.kind,
            ParseErrorKind::Machine(MachineError::UndeclaredSymbol("x".into()))
        );
    }

    #[test]
    fn duplicate_rule() {
        let text = "symbols b\nstates A\nstart A\nrule A b b R A\nrule A b b L A\n";
        let e = parse_tm_spec(text).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(matches!(
            e.kind,
            ParseErrorKind::Machine(MachineError::DuplicateRule(..))
        ));
    }

    #[test]
    fn blank_must_be_first() {
        let e = parse_tm_spec("symbols 0 b\nblank b\nstates A\nstart A\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::BlankNotFirst { .. }));
    }

    #[test]
    fn syntax_errors() {
        let e = parse_tm_spec("symbols b\nstates A\nstart A\nrule A b b R\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_tm_spec("symbols b\nstates A\nstart A\nrule A b b U A\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadMove("U".into()));
        let e = parse_tm_spec("symbols b\nstates A\nstart A\nhead x\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadHead("x".into()));
        let e = parse_tm_spec("symbols b\nstates A\nstart A\nhead 3\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_tm_spec("symbols b\nstart A\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Missing("states"));
        let e = parse_tm_spec("symbols b\nsymbols c\n").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::Repeated("symbols")));
        let e = parse_tm_spec("bogus 1\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownDirective("bogus".into()));
    }

    #[test]
    fn format_round_trips() {
        let (m, c) = parse_tm_spec(COLLATZ_SPEC).unwrap();
        let text = format_tm_spec(&m, &c);
        assert_eq!(parse_tm_spec(&text).unwrap(), (m, c));
    }
}
