//! Reader for the LP text dialect written by [`crate::export::to_lp`].
//!
//! Handles the common subset: one objective, labelled or unlabelled rows,
//! `Bounds`, `General`/`Generals` and `Binary`/`Binaries` sections.
//! Variables not declared integral and without bounds get `[0, +inf)`.

use std::collections::HashMap;

use crate::error::{MipError, Result};
use crate::model::{MipModel, ObjectiveSense, Sense, VarId, VarKind};
use crate::names::unmangle;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Label(String),
    Plus,
    Minus,
    Cmp(Sense),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Objective,
    Constraints,
    Bounds,
    General,
    Binary,
    Done,
}

fn section_of(line: &str) -> Option<(Section, Option<ObjectiveSense>)> {
    let lower = line.trim().to_ascii_lowercase();
    let s = match lower.as_str() {
        "minimize" | "minimum" | "min" => (Section::Objective, Some(ObjectiveSense::Minimize)),
        "maximize" | "maximum" | "max" => (Section::Objective, Some(ObjectiveSense::Maximize)),
        "subject to" | "such that" | "st" | "s.t." => (Section::Constraints, None),
        "bounds" | "bound" => (Section::Bounds, None),
        "general" | "generals" | "gen" => (Section::General, None),
        "binary" | "binaries" | "bin" => (Section::Binary, None),
        "end" => (Section::Done, None),
        _ => return None,
    };
    Some(s)
}

fn parse_err(line: usize, message: impl Into<String>) -> MipError {
    MipError::Parse { line, message: message.into() }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' {
            out.push(Tok::Plus);
            i += 1;
        } else if c == '-' {
            out.push(Tok::Minus);
            i += 1;
        } else if c == '<' || c == '>' || c == '=' {
            let mut j = i + 1;
            if j < chars.len() && chars[j] == '=' {
                j += 1;
            }
            let sense = match c {
                '<' => Sense::Le,
                '>' => Sense::Ge,
                _ => match chars.get(i + 1) {
                    Some('<') => {
                        j = i + 2;
                        Sense::Le
                    }
                    Some('>') => {
                        j = i + 2;
                        Sense::Ge
                    }
                    _ => Sense::Eq,
                },
            };
            out.push(Tok::Cmp(sense));
            i = j;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| parse_err(line, format!("bad number `{s}`")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' || c == '#' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || "_#.".contains(chars[i])) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let mut j = i;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            if j < chars.len() && chars[j] == ':' {
                out.push(Tok::Label(word));
                i = j + 1;
            } else {
                let lw = word.to_ascii_lowercase();
                if lw == "inf" || lw == "infinity" {
                    out.push(Tok::Num(f64::INFINITY));
                } else {
                    out.push(Tok::Ident(word));
                }
            }
        } else {
            return Err(parse_err(line, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Reader {
    model: MipModel,
    index: HashMap<String, VarId>,
    bounded: Vec<bool>,
}

impl Reader {
    fn var(&mut self, raw: &str, line: usize) -> Result<VarId> {
        if let Some(&v) = self.index.get(raw) {
            return Ok(v);
        }
        let name = unmangle(raw).ok_or_else(|| parse_err(line, format!("bad name `{raw}`")))?;
        let v = self.model.add_continuous(name, 0.0, f64::INFINITY);
        self.index.insert(raw.to_string(), v);
        self.bounded.push(false);
        Ok(v)
    }

    /// Parses `± c x ± c x ...` and returns terms plus the sum of bare constants.
    fn linear(&mut self, toks: &[Tok], line: usize) -> Result<(Vec<(VarId, f64)>, f64)> {
        let mut terms = Vec::new();
        let mut constant = 0.0;
        let mut sign = 1.0;
        let mut coeff: Option<f64> = None;
        for t in toks {
            match t {
                Tok::Plus => {}
                Tok::Minus => sign = -sign,
                Tok::Num(v) => {
                    if let Some(prev) = coeff {
                        constant += sign * prev;
                        sign = 1.0;
                    }
                    coeff = Some(*v);
                }
                Tok::Ident(name) => {
                    let v = self.var(name, line)?;
                    terms.push((v, sign * coeff.unwrap_or(1.0)));
                    sign = 1.0;
                    coeff = None;
                }
                other => return Err(parse_err(line, format!("unexpected {other:?} in expression"))),
            }
        }
        if let Some(c) = coeff {
            constant += sign * c;
        }
        Ok((terms, constant))
    }

    fn bound(&mut self, toks: &[Tok], line: usize) -> Result<()> {
        let signed = |toks: &[Tok]| -> Option<(f64, usize)> {
            match toks {
                [Tok::Minus, Tok::Num(v), ..] => Some((-v, 2)),
                [Tok::Plus, Tok::Num(v), ..] => Some((*v, 2)),
                [Tok::Num(v), ..] => Some((*v, 1)),
                _ => None,
            }
        };
        match toks {
            [Tok::Ident(n), Tok::Ident(kw)] if kw.eq_ignore_ascii_case("free") => {
                let v = self.var(n, line)?;
                self.set(v, f64::NEG_INFINITY, f64::INFINITY);
                return Ok(());
            }
            [Tok::Ident(n), Tok::Cmp(s), rest @ ..] => {
                let (x, used) = signed(rest).ok_or_else(|| parse_err(line, "bound value expected"))?;
                if used != rest.len() {
                    return Err(parse_err(line, "trailing tokens in bound"));
                }
                let v = self.var(n, line)?;
                let var = &self.model.variables[v.0];
                let (lo, hi) = (var.lower, var.upper);
                match s {
                    Sense::Le => self.set(v, lo, x),
                    Sense::Ge => self.set(v, x, hi),
                    Sense::Eq => self.set(v, x, x),
                }
                return Ok(());
            }
            _ => {}
        }
        let (lo, used) = signed(toks).ok_or_else(|| parse_err(line, "malformed bound"))?;
        match &toks[used..] {
            [Tok::Cmp(Sense::Le), Tok::Ident(n), rest @ ..] => {
                let v = self.var(n, line)?;
                let hi = match rest {
                    [] => self.model.variables[v.0].upper,
                    [Tok::Cmp(Sense::Le), tail @ ..] => match signed(tail) {
                        Some((h, u)) if u == tail.len() => h,
                        _ => return Err(parse_err(line, "malformed upper bound")),
                    },
                    _ => return Err(parse_err(line, "malformed bound")),
                };
                self.set(v, lo, hi);
                Ok(())
            }
            [Tok::Cmp(Sense::Ge), Tok::Ident(n)] => {
                let v = self.var(n, line)?;
                let lo_old = self.model.variables[v.0].lower;
                self.set(v, lo_old, lo);
                Ok(())
            }
            _ => Err(parse_err(line, "malformed bound")),
        }
    }

    fn set(&mut self, v: VarId, lo: f64, hi: f64) {
        let var = &mut self.model.variables[v.0];
        var.lower = lo;
        var.upper = hi;
        self.bounded[v.0] = true;
    }
}

pub fn read_lp(text: &str) -> Result<MipModel> {
    let mut reader = Reader { model: MipModel::default(), index: HashMap::new(), bounded: Vec::new() };
    let mut section: Option<Section> = None;
    let mut sense = ObjectiveSense::Minimize;
    // Statements accumulate across continuation lines until the next label,
    // section header, or (for rows) a complete comparison.
    let mut objective: Vec<Tok> = Vec::new();
    let mut pending: Vec<Tok> = Vec::new();
    let mut pending_label: Option<String> = None;
    let mut pending_line = 0;
    let mut rows: Vec<(usize, Option<String>, Vec<Tok>)> = Vec::new();

    let flush = |pending: &mut Vec<Tok>, label: &mut Option<String>, rows: &mut Vec<_>, line: usize| {
        if !pending.is_empty() {
            rows.push((line, label.take(), std::mem::take(pending)));
        }
    };

    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        if let Some(comment) = raw.find('\\') {
            if raw[..comment].trim().is_empty() {
                if section.is_none() && raw.trim_start().starts_with('\\') {
                    let title = raw[comment + 1..].trim();
                    if reader.model.name.is_empty() && !title.is_empty() {
                        reader.model.name = title.to_string();
                    }
                }
                continue;
            }
        }
        let content = raw.split('\\').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if let Some((s, obj_sense)) = section_of(content) {
            flush(&mut pending, &mut pending_label, &mut rows, pending_line);
            section = Some(s);
            if let Some(o) = obj_sense {
                sense = o;
            }
            if s == Section::Done {
                break;
            }
            continue;
        }
        let toks = tokenize(content, line)?;
        match section {
            None => return Err(parse_err(line, "content before the objective section")),
            Some(Section::Objective) => {
                objective.extend(toks.into_iter().filter(|t| !matches!(t, Tok::Label(_))));
            }
            Some(Section::Constraints) => {
                for t in toks {
                    match t {
                        Tok::Label(l) => {
                            flush(&mut pending, &mut pending_label, &mut rows, pending_line);
                            pending_label = Some(l);
                            pending_line = line;
                        }
                        other => {
                            if pending.is_empty() && pending_label.is_none() {
                                pending_line = line;
                            }
                            pending.push(other);
                        }
                    }
                }
                // A row is complete once it holds a comparison and a value after it.
                if let Some(pos) = pending.iter().position(|t| matches!(t, Tok::Cmp(_))) {
                    if pending[pos + 1..].iter().any(|t| matches!(t, Tok::Num(_))) {
                        flush(&mut pending, &mut pending_label, &mut rows, pending_line);
                    }
                }
            }
            Some(Section::Bounds) => reader.bound(&toks, line)?,
            Some(Section::General) | Some(Section::Binary) => {
                let kind = if section == Some(Section::General) { VarKind::Integer } else { VarKind::Binary };
                for t in toks {
                    let Tok::Ident(n) = t else {
                        return Err(parse_err(line, "variable name expected"));
                    };
                    let v = reader.var(&n, line)?;
                    let var = &mut reader.model.variables[v.0];
                    var.kind = kind;
                    if kind == VarKind::Binary && !reader.bounded[v.0] {
                        var.lower = 0.0;
                        var.upper = 1.0;
                    }
                }
            }
            Some(Section::Done) => unreachable!(),
        }
    }
    flush(&mut pending, &mut pending_label, &mut rows, pending_line);

    let (obj_terms, constant) = reader.linear(&objective, 0)?;
    reader.model.set_objective(sense, obj_terms, constant);
    for (i, (line, label, toks)) in rows.into_iter().enumerate() {
        let pos = toks
            .iter()
            .position(|t| matches!(t, Tok::Cmp(_)))
            .ok_or_else(|| parse_err(line, "row without comparison"))?;
        let Tok::Cmp(s) = toks[pos] else { unreachable!() };
        let (terms, lhs_const) = reader.linear(&toks[..pos], line)?;
        let (rhs_terms, rhs) = reader.linear(&toks[pos + 1..], line)?;
        if !rhs_terms.is_empty() {
            return Err(parse_err(line, "variables on the right-hand side"));
        }
        let name = match label {
            Some(l) => unmangle(&l).ok_or_else(|| parse_err(line, format!("bad name `{l}`")))?,
            None => format!("R{i}"),
        };
        reader.model.add_constraint(name, terms, s, rhs - lhs_const);
    }
    reader.model.validate()?;
    Ok(reader.model)
}
