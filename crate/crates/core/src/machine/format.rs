//! Line-oriented machine-definition text format.
//!
//! ```text
//! machine <name>
//! classical s1 s2 ...
//! affine <m>
//! alphabet 0 1 '#'
//! initial s1 e1
//! accept-classical s2
//! accept-affine e1 e3
//! matrix M1 <m>x<m>
//! <m rows of m scalars>
//! trans s1 '^' -> s1 M1
//! ```
//!
//! `#` starts a comment unless quoted. Repeated `trans` lines for the same
//! (state, symbol) are nondeterministic choices, numbered in file order.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{MachineBuilder, MachineSpec, LEFT_MARKER, RIGHT_MARKER};
use crate::affine::AffineOperator;
use crate::error::{FormatError, SerializationError};
use crate::rational::Rational;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Word(String),
    Quoted(char),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Token>, FormatError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut word = String::new();
    let flush = |word: &mut String, tokens: &mut Vec<Token>| {
        if !word.is_empty() {
            tokens.push(Token::Word(std::mem::take(word)));
        }
    };
    while let Some(c) = chars.next() {
        match c {
            '#' => break,
            '\'' => {
                if !word.is_empty() {
                    return Err(syntax(line, "quote inside a word"));
                }
                let sym = chars
                    .next()
                    .ok_or_else(|| syntax(line, "unterminated quoted symbol"))?;
                if chars.next() != Some('\'') {
                    return Err(syntax(line, "quoted symbol must be a single character"));
                }
                tokens.push(Token::Quoted(sym));
            }
            c if c.is_whitespace() => flush(&mut word, &mut tokens),
            c => word.push(c),
        }
    }
    flush(&mut word, &mut tokens);
    Ok(tokens)
}

fn word(tok: &Token, line: usize, what: &str) -> Result<String, FormatError> {
    match tok {
        Token::Word(w) => Ok(w.clone()),
        Token::Quoted(c) => Err(syntax(line, format!("expected {what}, found quoted `{c}`"))),
    }
}

fn symbol(tok: &Token, line: usize) -> Result<char, FormatError> {
    match tok {
        Token::Quoted(c) => Ok(*c),
        Token::Word(w) => {
            let mut it = w.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(syntax(line, format!("symbol `{w}` must be a single character"))),
            }
        }
    }
}

fn affine_index(tok: &Token, line: usize) -> Result<usize, FormatError> {
    let w = word(tok, line, "affine state")?;
    w.strip_prefix('e')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .map(|n| n - 1)
        .ok_or_else(|| syntax(line, format!("expected affine state `e<k>`, found `{w}`")))
}

struct PendingTrans {
    line: usize,
    from: String,
    symbol: char,
    to: String,
    matrix: String,
}

/// Parses and validates a machine-definition document.
pub fn parse_machine(text: &str) -> Result<MachineSpec<Rational>, FormatError> {
    let mut name: Option<String> = None;
    let mut states: Option<Vec<String>> = None;
    let mut dim: Option<usize> = None;
    let mut alphabet: Vec<char> = Vec::new();
    let mut initial: Option<(usize, String, usize)> = None;
    let mut accept_classical: Option<(usize, String)> = None;
    let mut accept_affine: Option<(usize, Vec<usize>)> = None;
    let mut matrices: Vec<(String, AffineOperator<Rational>)> = Vec::new();
    let mut trans: Vec<PendingTrans> = Vec::new();

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    while let Some((ln, raw)) = lines.next() {
        let toks = tokenize(raw, ln)?;
        let Some((head, args)) = toks.split_first() else {
            continue;
        };
        let head = word(head, ln, "directive")?;
        let once = |set: bool, d: &str| {
            if set {
                Err(syntax(ln, format!("duplicate `{d}` directive")))
            } else {
                Ok(())
            }
        };
        match head.as_str() {
            "machine" => {
                once(name.is_some(), "machine")?;
                let [n] = args else {
                    return Err(syntax(ln, "expected `machine <name>`"));
                };
                name = Some(word(n, ln, "machine name")?);
            }
            "classical" => {
                once(states.is_some(), "classical")?;
                if args.is_empty() {
                    return Err(syntax(ln, "expected at least one classical state"));
                }
                let list = args
                    .iter()
                    .map(|t| word(t, ln, "state name"))
                    .collect::<Result<Vec<_>, _>>()?;
                for (i, s) in list.iter().enumerate() {
                    if list[..i].contains(s) {
                        return Err(syntax(ln, format!("state `{s}` declared twice")));
                    }
                }
                states = Some(list);
            }
            "affine" => {
                once(dim.is_some(), "affine")?;
                let [m] = args else {
                    return Err(syntax(ln, "expected `affine <m>`"));
                };
                let m = word(m, ln, "dimension")?;
                let m: usize = m
                    .parse()
                    .ok()
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| syntax(ln, format!("invalid affine dimension `{m}`")))?;
                dim = Some(m);
            }
            "alphabet" => {
                for t in args {
                    let c = symbol(t, ln)?;
                    if c == LEFT_MARKER || c == RIGHT_MARKER {
                        return Err(syntax(ln, format!("`{c}` is a reserved end-marker")));
                    }
                    if alphabet.contains(&c) {
                        return Err(syntax(ln, format!("symbol `{c}` listed twice")));
                    }
                    alphabet.push(c);
                }
            }
            "initial" => {
                once(initial.is_some(), "initial")?;
                let [s, e] = args else {
                    return Err(syntax(ln, "expected `initial <state> e<k>`"));
                };
                initial = Some((ln, word(s, ln, "state")?, affine_index(e, ln)?));
            }
            "accept-classical" => {
                once(accept_classical.is_some(), "accept-classical")?;
                let [s] = args else {
                    return Err(syntax(ln, "expected `accept-classical <state>`"));
                };
                accept_classical = Some((ln, word(s, ln, "state")?));
            }
            "accept-affine" => {
                once(accept_affine.is_some(), "accept-affine")?;
                let set = args
                    .iter()
                    .map(|t| affine_index(t, ln))
                    .collect::<Result<Vec<_>, _>>()?;
                accept_affine = Some((ln, set));
            }
            "matrix" => {
                let m = dim.ok_or_else(|| syntax(ln, "`matrix` before `affine`"))?;
                let [n, shape] = args else {
                    return Err(syntax(ln, "expected `matrix <name> <m>x<m>`"));
                };
                let mname = word(n, ln, "matrix name")?;
                let shape = word(shape, ln, "shape")?;
                let (r, c) = shape
                    .split_once('x')
                    .and_then(|(r, c)| Some((r.parse::<usize>().ok()?, c.parse::<usize>().ok()?)))
                    .ok_or_else(|| syntax(ln, format!("invalid shape `{shape}`")))?;
                let matrix_err = |source| FormatError::Matrix {
                    line: ln,
                    matrix: mname.clone(),
                    source,
                };
                if r != m || c != m {
                    return Err(matrix_err(crate::error::AffineError::DimensionMismatch {
                        expected: m,
                        found: if r != m { r } else { c },
                    }));
                }
                if matrices.iter().any(|(x, _)| *x == mname) {
                    return Err(syntax(ln, format!("matrix `{mname}` defined twice")));
                }
                let mut entries = Vec::with_capacity(m * m);
                let mut rows_read = 0;
                while rows_read < m {
                    let Some((rl, raw_row)) = lines.next() else {
                        return Err(syntax(ln, format!("matrix `{mname}`: expected {m} rows")));
                    };
                    let row = tokenize(raw_row, rl)?;
                    if row.is_empty() {
                        continue;
                    }
                    if row.len() != m {
                        return Err(FormatError::Matrix {
                            line: rl,
                            matrix: mname.clone(),
                            source: crate::error::AffineError::NotSquare {
                                row: rows_read + 1,
                                expected: m,
                                found: row.len(),
                            },
                        });
                    }
                    for t in &row {
                        let w = word(t, rl, "scalar")?;
                        let x: Rational = w.parse().map_err(|e: crate::error::ScalarParseError| {
                            syntax(rl, e.to_string())
                        })?;
                        entries.push(x);
                    }
                    rows_read += 1;
                }
                let op = AffineOperator::new(m, entries).map_err(matrix_err)?;
                matrices.push((mname, op));
            }
            "trans" => {
                let [from, sym, arrow, to, mat] = args else {
                    return Err(syntax(ln, "expected `trans <state> <symbol> -> <state> <matrix>`"));
                };
                if *arrow != Token::Word("->".into()) {
                    return Err(syntax(ln, "expected `->`"));
                }
                trans.push(PendingTrans {
                    line: ln,
                    from: word(from, ln, "state")?,
                    symbol: symbol(sym, ln)?,
                    to: word(to, ln, "state")?,
                    matrix: word(mat, ln, "matrix name")?,
                });
            }
            other => return Err(syntax(ln, format!("unknown directive `{other}`"))),
        }
    }

    let name = name.ok_or(FormatError::Missing("machine"))?;
    let states = states.ok_or(FormatError::Missing("classical"))?;
    let dim = dim.ok_or(FormatError::Missing("affine"))?;
    let (init_line, init_state, init_affine) = initial.ok_or(FormatError::Missing("initial"))?;
    let (acc_line, acc_state) = accept_classical.ok_or(FormatError::Missing("accept-classical"))?;
    let (acc_aff_line, acc_affine) = accept_affine.ok_or(FormatError::Missing("accept-affine"))?;

    let mut b = MachineBuilder::new(name, dim);
    let ids: HashMap<String, _> = states.iter().map(|s| (s.clone(), b.state(s))).collect();
    let lookup = |s: &str, line: usize| {
        ids.get(s)
            .copied()
            .ok_or_else(|| syntax(line, format!("unknown classical state `{s}`")))
    };
    b.alphabet(alphabet.iter().copied());
    if init_affine >= dim {
        return Err(syntax(init_line, format!("e{} exceeds affine dimension {dim}", init_affine + 1)));
    }
    if let Some(i) = acc_affine.iter().find(|&&i| i >= dim) {
        return Err(syntax(acc_aff_line, format!("e{} exceeds affine dimension {dim}", i + 1)));
    }
    b.initial(lookup(&init_state, init_line)?, init_affine);
    b.accept(lookup(&acc_state, acc_line)?, acc_affine);
    let mut op_ids = HashMap::new();
    for (n, op) in matrices {
        let id = b
            .operator(&n, op)
            .map_err(|e| syntax(0, e.to_string()))?;
        op_ids.insert(n, id);
    }
    for t in trans {
        if t.symbol != LEFT_MARKER && t.symbol != RIGHT_MARKER && !alphabet.contains(&t.symbol) {
            return Err(syntax(t.line, format!("symbol `{}` is not in the alphabet", t.symbol)));
        }
        let op = *op_ids
            .get(&t.matrix)
            .ok_or_else(|| syntax(t.line, format!("unknown matrix `{}`", t.matrix)))?;
        let from = lookup(&t.from, t.line)?;
        let to = lookup(&t.to, t.line)?;
        b.transition(from, t.symbol, to, op);
    }
    b.build().map_err(|e| syntax(0, e.0))
}

fn quote_symbol(c: char) -> String {
    if c.is_ascii_alphanumeric() {
        c.to_string()
    } else {
        format!("'{c}'")
    }
}

/// Serializes an exact machine. Interval machines have no text form; point
/// intervals are written as their exact value.
pub fn emit_machine<S: Scalar>(machine: &MachineSpec<S>) -> Result<String, SerializationError> {
    let mut exact_ops = Vec::with_capacity(machine.operators().len());
    for (n, op) in machine.operators() {
        let entries = op
            .entries()
            .iter()
            .map(|x| x.as_exact().cloned())
            .collect::<Option<Vec<Rational>>>()
            .ok_or_else(|| SerializationError::IntervalMachine(machine.name().to_string()))?;
        exact_ops.push((n, entries));
    }

    let m = machine.dimension();
    let mut out = String::new();
    let _ = writeln!(out, "machine {}", machine.name());
    let _ = writeln!(out, "classical {}", machine.states().join(" "));
    let _ = writeln!(out, "affine {m}");
    let alphabet: Vec<String> = machine.alphabet().iter().map(|&c| quote_symbol(c)).collect();
    let _ = writeln!(out, "alphabet {}", alphabet.join(" "));
    let _ = writeln!(
        out,
        "initial {} e{}",
        machine.state_name(machine.initial_state()),
        machine.initial_affine() + 1
    );
    let _ = writeln!(
        out,
        "accept-classical {}",
        machine.state_name(machine.accept_state())
    );
    let acc: Vec<String> = machine
        .accept_affine()
        .iter()
        .map(|i| format!("e{}", i + 1))
        .collect();
    let _ = writeln!(out, "accept-affine {}", acc.join(" "));
    for (n, entries) in &exact_ops {
        let _ = writeln!(out);
        let _ = writeln!(out, "matrix {n} {m}x{m}");
        for row in entries.chunks(m) {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    let _ = writeln!(out);
    for ((from, symbol), list) in machine.transitions() {
        for t in list {
            let _ = writeln!(
                out,
                "trans {} {} -> {} {}",
                machine.state_name(*from),
                quote_symbol(*symbol),
                machine.state_name(t.target),
                machine.operators()[t.operator.0].0
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::AffineError;

    const TOGGLE: &str = "\
machine toggle   # two-state example
classical s1 s2
affine 3
alphabet 0 1 '#'
initial s1 e1
accept-classical s2
accept-affine e1 e3

matrix I 3x3
1 0 0
0 1 0
0 0 1
matrix A1 3x3
1 0 0
1 2 0
-1 -1 1

trans s1 '^' -> s1 I
trans s1 1 -> s2 A1
trans s1 1 -> s1 I
trans s2 '#' -> s1 I
trans s1 '$' -> s2 I
trans s2 $ -> s2 I
";

    #[test]
    fn parses_all_directives() {
        let m = parse_machine(TOGGLE).unwrap();
        assert_eq!(m.name(), "toggle");
        assert_eq!(m.states(), ["s1", "s2"]);
        assert_eq!(m.alphabet(), ['0', '1', '#']);
        assert_eq!(m.accept_affine(), [0, 2]);
        let s1 = m.state_id("s1").unwrap();
        let choices = m.transitions_for(s1, '1');
        assert_eq!(choices.len(), 2);
        assert_eq!(m.state_name(choices[0].target), "s2");
        assert_eq!(m.transitions_for(m.state_id("s2").unwrap(), '#').len(), 1);
    }

    #[test]
    fn round_trips() {
        let m = parse_machine(TOGGLE).unwrap();
        let text = emit_machine(&m).unwrap();
        assert_eq!(parse_machine(&text).unwrap(), m);
    }

    #[test]
    fn reports_bad_column() {
        let text = TOGGLE.replace("1 2 0\n-1 -1 1", "1 1 0\n-1 -1 1");
        match parse_machine(&text).unwrap_err() {
            FormatError::Matrix { matrix, source, .. } => {
                assert_eq!(matrix, "A1");
                assert_eq!(
                    source,
                    AffineError::ColumnSum {
                        column: 2,
                        sum: "0".into()
                    }
                );
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn reports_missing_initial() {
        let text = TOGGLE.replace("initial s1 e1\n", "");
        assert_eq!(parse_machine(&text).unwrap_err(), FormatError::Missing("initial"));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = TOGGLE.replace("trans s2 '#' -> s1 I", "trans s2 '#' => s1 I");
        assert!(matches!(
            parse_machine(&text).unwrap_err(),
            FormatError::Syntax { line: 21, .. }
        ));
        let text = TOGGLE.replace("affine 3", "affine 3\nbogus");
        assert!(matches!(
            parse_machine(&text).unwrap_err(),
            FormatError::Syntax { line: 4, .. }
        ));
        let text = TOGGLE.replace("matrix A1 3x3", "matrix A1 2x2");
        assert!(matches!(
            parse_machine(&text).unwrap_err(),
            FormatError::Matrix {
                source: AffineError::DimensionMismatch { .. },
                ..
            }
        ));
        let text = TOGGLE.replace("-1 -1 1", "-1 -1.0 1");
        assert!(matches!(parse_machine(&text).unwrap_err(), FormatError::Syntax { .. }));
        let text = TOGGLE.replace("trans s1 1 -> s1 I", "trans s1 7 -> s1 I");
        assert!(parse_machine(&text).is_err());
    }

    #[test]
    fn unquoted_hash_is_a_comment() {
        let text = TOGGLE.replace("alphabet 0 1 '#'", "alphabet 0 1 #");
        // `#` is now missing from the alphabet, so its transition is rejected
        assert!(matches!(parse_machine(&text).unwrap_err(), FormatError::Syntax { .. }));
    }
}
