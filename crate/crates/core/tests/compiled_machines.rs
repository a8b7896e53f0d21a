use smm_core::compiler::{check_layout, compile, render};
use smm_core::harness::{lockstep_diff, DiffOptions, DiffStatus, Session, StepResult};
use smm_core::machines::{collatz, CORPUS};
use smm_core::smm::{to_dot, DotOptions, DEFAULT_FUEL};
use smm_core::tm::{parse_tm_spec, TmConfiguration, TuringMachine};

fn spec(text: &str) -> (TuringMachine, TmConfiguration) {
    parse_tm_spec(text).unwrap()
}

fn cfg(state: &str, cells: &str, head: usize) -> TmConfiguration {
    TmConfiguration {
        cells: cells.split_whitespace().map(str::to_owned).collect(),
        head,
        state: state.into(),
    }
}

/// Decoded configurations and node counts after the prologue and each step.
fn walk(m: &TuringMachine, c: &TmConfiguration, steps: usize) -> Vec<(TmConfiguration, usize)> {
    let (p, plan) = compile(m, c);
    let mut s = Session::start(&p, &plan, DEFAULT_FUEL).unwrap();
    let mut out = vec![(s.decode().unwrap(), s.machine().node_count())];
    for _ in 0..steps {
        assert_eq!(s.step().unwrap(), StepResult::Completed);
        check_layout(s.machine(), &plan).unwrap();
        out.push((s.decode().unwrap(), s.machine().node_count()));
    }
    out
}

#[test]
fn west_extension_grows_by_one_pair() {
    let (m, c) = spec("symbols _ x\nstates A B\nstart A\nrule A _ x L B\ntape _ _ _\n");
    let w = walk(&m, &c, 1);
    assert_eq!(w[0], (cfg("A", "_ _ _", 0), 7));
    assert_eq!(w[1], (cfg("B", "_ x _ _", 0), 9));
}

#[test]
fn east_extension_grows_by_one_pair() {
    let (m, c) = spec("symbols _ x\nstates A B\nstart A\nrule A x _ R B\ntape _ _ x\nhead 2\n");
    let w = walk(&m, &c, 1);
    assert_eq!(w[0], (cfg("A", "_ _ x", 2), 7));
    assert_eq!(w[1], (cfg("B", "_ _ _ _", 3), 9));
}

#[test]
fn consecutive_extensions_on_both_sides() {
    let (m, c) = spec(
        "symbols _ x\nstates L R\nstart L\n\
         rule L _ x L L\nrule L x x R R\nrule R x x R R\nrule R _ x L L\ntape _\n",
    );
    let w = walk(&m, &c, 3);
    assert_eq!(w[1], (cfg("L", "_ x", 0), 5));
    assert_eq!(w[2], (cfg("L", "_ x x", 0), 7));
    assert_eq!(w[3], (cfg("L", "_ x x x", 0), 9));

    let report = lockstep_diff(
        &m,
        &c,
        DiffOptions {
            steps: 400,
            ..DiffOptions::default()
        },
    );
    assert_eq!(report.status, DiffStatus::Equivalent);
    for pair in report.node_counts.windows(2) {
        assert!(pair[1] == pair[0] || pair[1] == pair[0] + 2);
    }
}

#[test]
fn prologue_centers_on_the_start_head() {
    let (m, c) =
        spec("symbols b 0 1 2\nstates A B C\nstart C\nrule C 1 2 L A\ntape 0 2 1 2 0\nhead 2\n");
    let w = walk(&m, &c, 1);
    assert_eq!(w[0], (cfg("C", "0 2 1 2 0", 2), 11));
    assert_eq!(w[1], (cfg("A", "0 2 2 2 0", 1), 11));
}

#[test]
fn golden_collatz_program() {
    let (m, c) = collatz();
    let (p, plan) = compile(&m, &c);
    assert_eq!(render(&p, &plan), include_str!("../machines/collatz.smm"));
}

#[test]
fn corpus_diffs_clean() {
    for (name, text) in CORPUS {
        let (m, c) = spec(text);
        let report = lockstep_diff(
            &m,
            &c,
            DiffOptions {
                steps: 2_000,
                ..DiffOptions::default()
            },
        );
        assert!(report.is_success(), "{name}: {:?}", report.status);
    }
}

/// A recognizer for the DOT subset a standard grammar accepts: a `digraph`
/// with node and edge statements carrying `key=value` attribute lists.
mod dot_grammar {
    #[derive(Debug, PartialEq)]
    enum Tok {
        Id(String),
        Str,
        Punct(&'static str),
    }

    fn lex(text: &str) -> Result<Vec<Tok>, String> {
        let mut out = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '"' => {
                    chars.next();
                    loop {
                        match chars.next() {
                            Some('\\') => {
                                chars.next().ok_or("dangling escape")?;
                            }
                            Some('"') => break,
                            Some(_) => {}
                            None => return Err("unterminated string".into()),
                        }
                    }
                    out.push(Tok::Str);
                }
                '-' => {
                    chars.next();
                    if chars.next() != Some('>') {
                        return Err("expected ->".into());
                    }
                    out.push(Tok::Punct("->"));
                }
                '{' | '}' | '[' | ']' | ';' | ',' | '=' => {
                    chars.next();
                    out.push(Tok::Punct(match c {
                        '{' => "{",
                        '}' => "}",
                        '[' => "[",
                        ']' => "]",
                        ';' => ";",
                        ',' => ",",
                        _ => "=",
                    }));
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let mut id = String::new();
                    while let Some(&c) = chars.peek() {
                        if !(c.is_ascii_alphanumeric() || c == '_') {
                            break;
                        }
                        id.push(c);
                        chars.next();
                    }
                    out.push(Tok::Id(id));
                }
                other => return Err(format!("unexpected `{other}`")),
            }
        }
        Ok(out)
    }

    /// Checks the text and returns (node statements, edge statements).
    pub fn check(text: &str) -> Result<(usize, usize), String> {
        let toks = lex(text)?;
        let mut i = 0;
        let id = |i: usize| matches!(toks.get(i), Some(Tok::Id(_)));
        let id_or_str = |i: usize| matches!(toks.get(i), Some(Tok::Id(_) | Tok::Str));
        let punct = |i: usize, p: &str| {
            toks.get(i)
                == Some(&Tok::Punct(match p {
                    "{" => "{",
                    "}" => "}",
                    "[" => "[",
                    "]" => "]",
                    ";" => ";",
                    "," => ",",
                    "=" => "=",
                    _ => "->",
                }))
        };
        if toks.first() != Some(&Tok::Id("digraph".into())) {
            return Err("not a digraph".into());
        }
        i += 1;
        if id(i) {
            i += 1;
        }
        if !punct(i, "{") {
            return Err("missing {".into());
        }
        i += 1;
        let (mut nodes, mut edges) = (0, 0);
        while !punct(i, "}") {
            if !id(i) {
                return Err(format!("statement {i} does not start with an id"));
            }
            i += 1;
            if punct(i, "->") {
                if !id(i + 1) {
                    return Err("edge without target".into());
                }
                i += 2;
                edges += 1;
            } else {
                nodes += 1;
            }
            if punct(i, "[") {
                i += 1;
                loop {
                    if !(id(i) && punct(i + 1, "=") && id_or_str(i + 2)) {
                        return Err(format!("bad attribute at token {i}"));
                    }
                    i += 3;
                    if punct(i, ",") {
                        i += 1;
                    } else if punct(i, "]") {
                        i += 1;
                        break;
                    } else {
                        return Err("unterminated attribute list".into());
                    }
                }
            }
            if punct(i, ";") {
                i += 1;
            }
        }
        if i + 1 != toks.len() {
            return Err("trailing tokens".into());
        }
        Ok((nodes, edges))
    }

    #[test]
    fn rejects_broken_text() {
        assert!(check("digraph g { a -> ; }").is_err());
        assert!(check("digraph g { a [label=\"x]; }").is_err());
        assert!(check("graph g { }").is_err());
        assert_eq!(
            check("digraph g { a [label=\"q\\\"\"]; a -> a; }"),
            Ok((1, 1))
        );
    }
}

#[test]
fn snapshots_parse_as_dot() {
    let (m, c) = collatz();
    let (p, plan) = compile(&m, &c);
    let mut s = Session::start(&p, &plan, DEFAULT_FUEL).unwrap();
    let all = DotOptions::default();
    let drawn = DotOptions::omitting(["o", "b0", "b1"]);
    for _ in 0..12 {
        let n = s.machine().node_count();
        assert_eq!(
            dot_grammar::check(&to_dot(s.machine(), &all)),
            Ok((n, n * 6))
        );
        assert_eq!(
            dot_grammar::check(&to_dot(s.machine(), &drawn)),
            Ok((n, n * 3))
        );
        s.step().unwrap();
    }
}
