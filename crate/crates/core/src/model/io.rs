//! Text formats.
//!
//! Rectangle files:
//!
//! ```text
//! rect 2 3 3
//! 1 | . | .
//! . | 2 | 2,3
//! ```
//!
//! Design files (`lambda` optional, defaulting to `C(v-2,k-2)`; an `x<count>`
//! prefix gives a block multiplicity):
//!
//! ```text
//! design 4 3
//! 1 2 3
//! x2 1 2 4
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. Serialization sorts
//! symbols within cells and blocks, uses single spaces, and ends every line
//! with `\n`.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::design::{full_lambda, Block, DesignCandidate, PartialDesign};
use super::rectangle::{PartialRectangle, SymbolMultiset};
use crate::error::{ParseError, ParseErrorKind};

/// Content lines with their 1-based line numbers and column offsets of the
/// first non-space character.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let trimmed = l.trim_end_matches('\r');
        let s = trimmed.trim_start();
        if s.is_empty() || s.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed))
        }
    })
}

/// Splits on ASCII whitespace, yielding `(1-based column, token)`.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_uint(tok: &str, line: usize, col: usize) -> Result<usize, ParseError> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::new(line, col, ParseErrorKind::Token(tok.to_string())));
    }
    tok.parse().map_err(|_| ParseError::new(line, col, ParseErrorKind::Token(tok.to_string())))
}

fn parse_header(
    text: &str,
    keyword: &'static str,
    expected: &'static str,
    min_args: usize,
    max_args: usize,
) -> Result<(usize, Vec<(usize, usize)>), ParseError> {
    let (line_no, line) = content_lines(text).next().ok_or(ParseError::new(1, 1, ParseErrorKind::Empty))?;
    let w = words(line);
    if w.first().map(|(_, t)| *t) != Some(keyword) || w.len() < 1 + min_args || w.len() > 1 + max_args {
        let col = w.first().map_or(1, |(c, _)| *c);
        return Err(ParseError::new(line_no, col, ParseErrorKind::Header(expected)));
    }
    let args = w[1..].iter().map(|&(c, t)| parse_uint(t, line_no, c).map(|x| (x, c))).collect::<Result<Vec<_>, _>>()?;
    Ok((line_no, args))
}

pub fn parse_rectangle(text: &str) -> Result<PartialRectangle, ParseError> {
    let (header_line, args) = parse_header(text, "rect", "rect <m> <n> <t>", 3, 3)?;
    for (name, (value, col)) in ["m", "n", "t"].into_iter().zip(&args) {
        if *value < 1 {
            return Err(ParseError::new(
                header_line,
                *col,
                crate::error::ModelError::Parameter { name, value: *value, min: 1 }.into(),
            ));
        }
    }
    let (m, n, t) = (args[0].0, args[1].0, args[2].0);
    let body: Vec<_> = content_lines(text).skip(1).collect();
    if body.len() != m {
        let (line, col) = body.get(m).map_or((header_line, 1), |&(l, _)| (l, 1));
        return Err(ParseError::new(
            line,
            col,
            ParseErrorKind::Dimension { what: "rows", expected: m, found: body.len() },
        ));
    }
    let mut cells = Vec::with_capacity(m * n);
    for (line_no, line) in body {
        let mut offset = 0;
        let tokens: Vec<(usize, &str)> = line
            .split('|')
            .map(|raw| {
                let lead = raw.len() - raw.trim_start().len();
                let col = offset + lead + 1;
                offset += raw.len() + 1;
                (col, raw.trim())
            })
            .collect();
        if tokens.len() != n {
            return Err(ParseError::new(
                line_no,
                1,
                ParseErrorKind::Dimension { what: "cells", expected: n, found: tokens.len() },
            ));
        }
        for (col, tok) in tokens {
            cells.push(parse_cell(tok, t, line_no, col)?);
        }
    }
    PartialRectangle::from_cells(m, n, t, cells).map_err(|e| ParseError::new(header_line, 1, e.into()))
}

fn parse_cell(tok: &str, t: usize, line: usize, col: usize) -> Result<SymbolMultiset, ParseError> {
    if tok == "." {
        return Ok(SymbolMultiset::empty(t));
    }
    let mut cell = SymbolMultiset::empty(t);
    let mut c = col;
    for part in tok.split(',') {
        let s = parse_uint(part, line, c)?;
        if s < 1 || s > t {
            return Err(ParseError::new(line, c, ParseErrorKind::SymbolRange { symbol: s, max: t }));
        }
        cell.add(s, 1);
        c += part.len() + 1;
    }
    Ok(cell)
}

pub fn serialize_rectangle(r: &PartialRectangle) -> String {
    let mut out = format!("rect {} {} {}\n", r.m(), r.n(), r.t());
    for row in 1..=r.m() {
        for col in 1..=r.n() {
            if col > 1 {
                out.push_str(" | ");
            }
            let cell = r.cell(row, col);
            if cell.is_empty() {
                out.push('.');
            } else {
                let mut first = true;
                for s in cell.symbols() {
                    if !first {
                        out.push(',');
                    }
                    first = false;
                    let _ = write!(out, "{s}");
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Parses a design file into a candidate; `lambda` defaults to `C(v-2,k-2)`.
pub fn parse_candidate(text: &str) -> Result<DesignCandidate, ParseError> {
    parse_design_inner(text, true).map(|(d, _)| d)
}

/// Parses a design file as a simple subset of `F(v,k)`. Multiplicity
/// prefixes are rejected. The returned `u64` is the file's lambda.
pub fn parse_partial_design(text: &str) -> Result<(PartialDesign, u64), ParseError> {
    let (cand, lambda) = parse_design_inner(text, false)?;
    let d = cand.to_partial().expect("multiplicities rejected during parse");
    Ok((d, lambda))
}

fn parse_design_inner(text: &str, allow_mult: bool) -> Result<(DesignCandidate, u64), ParseError> {
    let (header_line, args) = parse_header(text, "design", "design <v> <k> [lambda]", 2, 3)?;
    let (v, k) = (args[0].0, args[1].0);
    let lambda = args.get(2).map_or_else(|| full_lambda(v, k), |&(l, _)| l as u64);
    let mut cand = DesignCandidate::new(v, k, lambda).map_err(|e| ParseError::new(header_line, 1, e.into()))?;
    let mut seen: BTreeMap<Block, usize> = BTreeMap::new();
    for (line_no, line) in content_lines(text).skip(1) {
        let mut w = words(line);
        let mut mult = 1u32;
        if let Some(&(col, tok)) = w.first() {
            if let Some(rest) = tok.strip_prefix('x') {
                if !allow_mult {
                    return Err(ParseError::new(line_no, col, ParseErrorKind::Multiplicity));
                }
                let c = parse_uint(rest, line_no, col + 1)?;
                if c < 1 {
                    return Err(ParseError::new(line_no, col, ParseErrorKind::Token(tok.to_string())));
                }
                mult = c as u32;
                w.remove(0);
            }
        }
        if w.len() != k {
            return Err(ParseError::new(
                line_no,
                w.first().map_or(1, |&(c, _)| c),
                ParseErrorKind::Dimension { what: "block elements", expected: k, found: w.len() },
            ));
        }
        let mut elems = Vec::with_capacity(k);
        for &(col, tok) in &w {
            let x = parse_uint(tok, line_no, col)?;
            if x < 1 || x > v {
                return Err(ParseError::new(line_no, col, ParseErrorKind::SymbolRange { symbol: x, max: v }));
            }
            elems.push(x);
        }
        let block = Block::new(&elems, v, k).map_err(|e| ParseError::new(line_no, w[0].0, e.into()))?;
        if !allow_mult && seen.contains_key(&block) {
            return Err(ParseError::new(
                line_no,
                w[0].0,
                crate::error::ModelError::RepeatedBlock(block.to_vec()).into(),
            ));
        }
        *seen.entry(block.clone()).or_insert(0) += 1;
        cand.add(block, mult);
    }
    Ok((cand, lambda))
}

fn push_block(out: &mut String, b: &Block) {
    let mut first = true;
    for x in b.elements() {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{x}");
    }
}

/// Writes `design v k` (lambda implied) and one block per line.
pub fn serialize_partial_design(d: &PartialDesign) -> String {
    let mut out = format!("design {} {}\n", d.v(), d.k());
    for b in d.blocks() {
        push_block(&mut out, b);
        out.push('\n');
    }
    out
}

/// Writes `design v k lambda` and one line per distinct block.
pub fn serialize_candidate(d: &DesignCandidate) -> String {
    let mut out = format!("design {} {} {}\n", d.v(), d.k(), d.lambda());
    for (b, &c) in d.blocks() {
        if c > 1 {
            let _ = write!(out, "x{c} ");
        }
        push_block(&mut out, b);
        out.push('\n');
    }
    out
}
