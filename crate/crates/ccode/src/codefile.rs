//! Text format for array codes.
//!
//! ```text
//! # optional comments
//! ccode/v1
//! length 8
//! kappa 2
//! S0: 1,2 3,5 4,6
//! S1: 0,3 2,7 4,5
//! ```
//!
//! Blank lines and lines starting with `#` are ignored anywhere. The header,
//! `length`, `kappa` and the `S<i>` lines must appear in that order. The
//! writer emits pairs in canonical order, so `parse(write(code)) == code`.

use std::fmt::Write as _;

use ccode_core::{ArrayCode, EvenStarter, MultiStarter, Pair};

pub const HEADER: &str = "ccode/v1";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CodeFileError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid code: {0}")]
    Validation(#[from] ccode_core::Error),
    #[error("columns fail the MDS graph condition (some two-column erasure is unrecoverable)")]
    NotMds,
}

/// How much checking [`parse_code_file_with`] does after parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checks {
    /// Starter (or multi-starter) validity, then the graph MDS condition.
    Full,
    /// Shape only: sizes, ranges, no loops, column `i` avoids vertex `i`.
    Structural,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> CodeFileError {
    CodeFileError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_number(text: &str, line: usize, column: usize) -> Result<usize, CodeFileError> {
    text.parse().map_err(|_| {
        parse_err(
            line,
            column,
            format!("expected a non-negative integer, found `{text}`"),
        )
    })
}

fn parse_pair(text: &str, line: usize, column: usize) -> Result<Pair, CodeFileError> {
    let Some((x, y)) = text.split_once(',') else {
        return Err(parse_err(
            line,
            column,
            format!("expected `x,y`, found `{text}`"),
        ));
    };
    let x = parse_number(x, line, column)?;
    let y = parse_number(y, line, column + text.find(',').unwrap_or(0) + 1)?;
    Ok(Pair::new(x, y))
}

/// A significant line: its 1-based number and its tokens.
struct Line {
    number: usize,
    tokens: Vec<(usize, String)>,
}

/// Parses `key <number>`, returning the value with its line and column.
fn parse_keyed(
    lines: &mut impl Iterator<Item = Line>,
    key: &str,
    previous: usize,
) -> Result<(usize, usize, usize), CodeFileError> {
    let Some(Line { number, tokens }) = lines.next() else {
        return Err(parse_err(previous + 1, 1, format!("missing `{key}` line")));
    };
    match tokens.as_slice() {
        [(_, k), (col, v)] if k == key => Ok((parse_number(v, number, *col)?, number, *col)),
        [(col, k), ..] if k != key => Err(parse_err(
            number,
            *col,
            format!("expected `{key}`, found `{k}`"),
        )),
        [_, _, (col, extra), ..] => Err(parse_err(number, *col, format!("unexpected `{extra}`"))),
        _ => Err(parse_err(number, 1, format!("expected `{key} <number>`"))),
    }
}

/// Parses and fully validates a code file.
pub fn parse_code_file(text: &str) -> Result<ArrayCode, CodeFileError> {
    parse_code_file_with(text, Checks::Full)
}

pub fn parse_code_file_with(text: &str, checks: Checks) -> Result<ArrayCode, CodeFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| Line {
            number: i + 1,
            tokens: tokens(l)
                .into_iter()
                .map(|(c, t)| (c, t.to_owned()))
                .collect(),
        });

    let Some(first) = lines.next() else {
        return Err(parse_err(1, 1, "empty file"));
    };
    if first.tokens.len() != 1 || first.tokens[0].1 != HEADER {
        return Err(parse_err(
            first.number,
            first.tokens[0].0,
            format!("expected header `{HEADER}`"),
        ));
    }
    let (length, length_line, length_col) = parse_keyed(&mut lines, "length", first.number)?;
    let (kappa, kappa_line, kappa_col) = parse_keyed(&mut lines, "kappa", length_line)?;
    if length < 4 || length % 2 != 0 {
        return Err(parse_err(
            length_line,
            length_col,
            format!("length {length} must be even and at least 4"),
        ));
    }
    if kappa == 0 || length % kappa != 0 {
        return Err(parse_err(
            kappa_line,
            kappa_col,
            format!("kappa {kappa} must divide length {length}"),
        ));
    }

    let mut parts: Vec<Vec<Pair>> = Vec::with_capacity(kappa);
    let mut last = kappa_line;
    for Line { number, tokens } in lines {
        last = number;
        let (col, label) = &tokens[0];
        let expected = format!("S{}:", parts.len());
        if parts.len() == kappa {
            return Err(parse_err(
                number,
                *col,
                format!("unexpected `{label}` after {kappa} columns"),
            ));
        }
        if *label != expected {
            return Err(parse_err(
                number,
                *col,
                format!("expected `{expected}`, found `{label}`"),
            ));
        }
        let pairs = tokens[1..]
            .iter()
            .map(|(c, t)| {
                let p = parse_pair(t, number, *c)?;
                if p.hi() >= length {
                    return Err(parse_err(
                        number,
                        *c,
                        format!("element {} not below length {length}", p.hi()),
                    ));
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>, _>>()?;
        parts.push(pairs);
    }
    if parts.len() != kappa {
        return Err(parse_err(
            last + 1,
            1,
            format!("missing `S{}:` line", parts.len()),
        ));
    }

    if checks == Checks::Full {
        if kappa == 1 {
            EvenStarter::new(parts[0].iter().copied(), length)?;
        } else {
            MultiStarter::new(parts.clone(), length, kappa)?;
        }
    }
    let code = ArrayCode::new(length, kappa, parts)?;
    if checks == Checks::Full && !code.verify_condition1() {
        return Err(CodeFileError::NotMds);
    }
    Ok(code)
}

/// Serializes a code; pairs come out in canonical order.
pub fn write_code_file(code: &ArrayCode) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "length {}", code.length()).unwrap();
    writeln!(out, "kappa {}", code.kappa()).unwrap();
    for (i, column) in code.base_columns().iter().enumerate() {
        write!(out, "S{i}:").unwrap();
        for p in column {
            write!(out, " {},{}", p.lo(), p.hi()).unwrap();
        }
        out.push('\n');
    }
    out
}
