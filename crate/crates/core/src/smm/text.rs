//! SMM program text.
//!
//! ```text
//! ; comments run to end of line
//! .directions f o e w b0 b1
//! .section prologue
//! 1 new origin
//! 2 set @ o to o.o      ; trailing comments are kept as notes
//! .section step
//! 1 if f.b0 o then +3
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{Direction, Instruction, Line, LineRef, Path, ProgramError, Section, SmmProgram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ProgramError),
}

fn syntax(line: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses and validates a program. Whole-line comments are dropped;
/// trailing comments on instruction lines become [`Line::note`].
pub fn parse_smm_program(text: &str) -> Result<SmmProgram, SyntaxError> {
    let mut directions: Option<Vec<Direction>> = None;
    let mut sections: Vec<Section> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let (code, note) = match raw.split_once(';') {
            Some((code, note)) => (code, Some(note.trim())),
            None => (raw, None),
        };
        let code = code.trim();
        if code.is_empty() {
            continue;
        }
        let mut words = code.split_whitespace();
        let first = words.next().expect("code is not empty");
        match first {
            ".directions" => {
                if directions.is_some() {
                    return Err(syntax(lineno, "`.directions` given twice"));
                }
                if !sections.is_empty() {
                    return Err(syntax(lineno, "`.directions` must precede all sections"));
                }
                directions = Some(words.map(Direction::new).collect());
            }
            ".section" => {
                let name = words
                    .next()
                    .ok_or_else(|| syntax(lineno, "`.section` needs a name"))?;
                if words.next().is_some() {
                    return Err(syntax(lineno, "`.section` takes one name"));
                }
                if directions.is_none() {
                    return Err(syntax(lineno, "`.directions` must come first"));
                }
                sections.push(Section::new(name, Vec::new()));
            }
            number => {
                let section = sections
                    .last_mut()
                    .ok_or_else(|| syntax(lineno, "instruction outside a section"))?;
                let expected = section.lines.len() + 1;
                if number.parse::<usize>().ok() != Some(expected) {
                    return Err(syntax(
                        lineno,
                        format!("expected line number {expected}, found `{number}`"),
                    ));
                }
                let rest = code[number.len()..].trim_start();
                let instr = parse_instruction(rest).map_err(|m| syntax(lineno, m))?;
                section.lines.push(Line {
                    instr,
                    note: note.filter(|n| !n.is_empty()).map(str::to_owned),
                });
            }
        }
    }

    let directions = directions.ok_or_else(|| syntax(0, "missing `.directions`"))?;
    Ok(SmmProgram::new(directions, sections)?)
}

fn parse_instruction(text: &str) -> Result<Instruction, String> {
    let (op, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let args: Vec<&str> = rest.split_whitespace().collect();
    let instr = match (op, args.as_slice()) {
        ("new", [label]) => Instruction::New {
            label: (*label).to_owned(),
        },
        ("set", [x, dir, "to", y]) => Instruction::Set {
            x: parse_path(x)?,
            dir: Direction::new(*dir),
            y: parse_path(y)?,
        },
        ("center", [x]) => Instruction::Center { x: parse_path(x)? },
        ("if", [x, y, "then", target]) => Instruction::If {
            x: parse_path(x)?,
            y: parse_path(y)?,
            target: parse_target(target)?,
        },
        ("stop", _) => Instruction::Stop {
            message: rest.to_owned(),
        },
        ("new", _) => return Err("expected `new <label>`".into()),
        ("set", _) => return Err("expected `set <path> <direction> to <path>`".into()),
        ("center", _) => return Err("expected `center <path>`".into()),
        ("if", _) => return Err("expected `if <path> <path> then <line>`".into()),
        (other, _) => return Err(format!("unknown instruction `{other}`")),
    };
    Ok(instr)
}

fn parse_path(token: &str) -> Result<Path, String> {
    if token == "@" {
        return Ok(Path::here());
    }
    let steps: Vec<Direction> = token.split('.').map(Direction::new).collect();
    if steps.iter().any(|d| d.0.is_empty() || d.0 == "@") {
        return Err(format!("malformed path `{token}`"));
    }
    Ok(Path(steps))
}

fn parse_target(token: &str) -> Result<LineRef, String> {
    let bad = || format!("malformed line reference `{token}`");
    if let Some(k) = token.strip_prefix('+') {
        let k: isize = k.parse().map_err(|_| bad())?;
        return if k >= 1 {
            Ok(LineRef::Relative(k))
        } else {
            Err(bad())
        };
    }
    if let Some(k) = token.strip_prefix('-') {
        let k: isize = k.parse().map_err(|_| bad())?;
        return if k >= 1 {
            Ok(LineRef::Relative(-k))
        } else {
            Err(bad())
        };
    }
    match token.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(LineRef::Absolute(k)),
        _ => Err(bad()),
    }
}

/// Canonical text: directions, then each section with numbered lines.
pub fn format_smm_program(program: &SmmProgram) -> String {
    let mut out = String::new();
    let names: Vec<&str> = program.directions().iter().map(Direction::as_str).collect();
    let _ = writeln!(out, ".directions {}", names.join(" "));
    for section in program.sections() {
        let _ = writeln!(out, ".section {}", section.name);
        for (i, line) in section.lines.iter().enumerate() {
            match &line.note {
                Some(note) => {
                    let _ = writeln!(out, "{} {}  ; {}", i + 1, line.instr, note);
                }
                None => {
                    let _ = writeln!(out, "{} {}", i + 1, line.instr);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smm::STEP;

    const EMPTY: &str = ".directions f o e w b0 b1\n.section prologue\n.section step\n";

    #[test]
    fn six_directions() {
        let p = parse_smm_program(EMPTY).unwrap();
        assert_eq!(p.directions().len(), 6);
        assert!(p.section(STEP).unwrap().is_empty());
    }

    #[test]
    fn parses_if_with_relative_target() {
        let p = parse_smm_program(&format!(
            "{EMPTY}1 if f.b0 o then +3\n2 stop\n3 stop\n4 stop\n"
        ))
        .unwrap();
        assert_eq!(
            p.section(STEP).unwrap().get(1),
            Some(&Instruction::If {
                x: Path::of("f.b0"),
                y: Path::of("o"),
                target: LineRef::Relative(3),
            })
        );
    }

    #[test]
    fn jump_out_of_bounds() {
        let text = format!("{EMPTY}1 if @ @ then 999\n2 stop\n3 stop\n4 stop\n5 stop\n");
        assert!(matches!(
            parse_smm_program(&text),
            Err(SyntaxError::Invalid(ProgramError::JumpOutOfBounds { .. }))
        ));
    }

    #[test]
    fn formats_canonically() {
        let text = format!("{EMPTY}1 stop HALT\n2 set @ o to o.o ; fix\n");
        let p = parse_smm_program(&text).unwrap();
        let out = format_smm_program(&p);
        assert!(out.contains("\n1 stop HALT\n"));
        assert!(out.contains("\n2 set @ o to o.o  ; fix\n"));
        assert_eq!(parse_smm_program(&out).unwrap(), p);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            (format!("{EMPTY}2 stop\n"), 4),
            (format!("{EMPTY}1 jump 3\n"), 4),
            (format!("{EMPTY}1 set @ o o\n"), 4),
            (format!("{EMPTY}1 if @ @ then +0\n"), 4),
            (format!("{EMPTY}1 center f..o\n"), 4),
            ("1 stop\n".to_owned(), 1),
            (".section step\n".to_owned(), 1),
        ];
        for (text, line) in cases {
            match parse_smm_program(&text) {
                Err(SyntaxError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn missing_sections_and_directions() {
        assert!(matches!(
            parse_smm_program(".directions f\n.section step\n"),
            Err(SyntaxError::Invalid(ProgramError::MissingSection(
                "prologue"
            )))
        ));
        assert!(parse_smm_program("; nothing\n").is_err());
        assert!(matches!(
            parse_smm_program(&format!("{EMPTY}1 center f.x\n")),
            Err(SyntaxError::Invalid(
                ProgramError::UndeclaredDirection { .. }
            ))
        ));
    }
}
