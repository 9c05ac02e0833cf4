//! Writers for fixed-format MPS and LP text.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::model::{MipModel, ObjectiveSense, Sense, VarKind};
use crate::names::{mangle, mps_names};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Mps,
    LpText,
}

pub fn export_model(model: &MipModel, format: ExportFormat, path: impl AsRef<Path>) -> Result<()> {
    model.validate()?;
    let text = match format {
        ExportFormat::Mps => to_mps(model),
        ExportFormat::LpText => to_lp(model),
    };
    fs::write(path, text)?;
    Ok(())
}

/// Number text of at most 12 characters, as fixed MPS requires.
fn mps_num(x: f64) -> String {
    let plain = format!("{x}");
    if plain.len() <= 12 {
        return plain;
    }
    for digits in (0..=8).rev() {
        let s = format!("{x:.digits$e}");
        if s.len() <= 12 {
            return s;
        }
    }
    format!("{x:.0e}")
}

fn field_line(out: &mut String, code: &str, name: &str, pairs: &[(&str, f64)]) {
    let mut line = format!(" {code:<2} {name:<8}");
    for (i, (n, v)) in pairs.iter().enumerate() {
        if i == 0 {
            let _ = write!(line, "  {n:<8}  {:>12}", mps_num(*v));
        } else {
            let _ = write!(line, "   {n:<8}  {:>12}", mps_num(*v));
        }
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

pub fn to_mps(model: &MipModel) -> String {
    let var_names: Vec<&str> = model.variables.iter().map(|v| v.name.as_str()).collect();
    let row_names: Vec<&str> = model.constraints.iter().map(|c| c.name.as_str()).collect();
    let cols = mps_names(&var_names, 'C');
    let mut rows = mps_names(&row_names, 'R');
    // The objective row is called OBJ; keep constraint rows clear of it.
    if rows.iter().any(|r| r == "OBJ") {
        rows = (0..rows.len()).map(|i| format!("R{i:07}")).collect();
    }

    let mut out = String::new();
    let name = if model.name.is_empty() { "MODEL".to_string() } else { mangle(&model.name) };
    let _ = writeln!(out, "NAME          {name}");
    if model.objective.sense == ObjectiveSense::Maximize {
        out.push_str("OBJSENSE\n    MAX\n");
    }
    out.push_str("ROWS\n N  OBJ\n");
    for (con, r) in model.constraints.iter().zip(&rows) {
        let code = match con.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        let _ = writeln!(out, " {code}  {r}");
    }

    // Column-major coefficients with duplicates summed.
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.variables.len()];
    let obj = model.objective_coefficients();
    for (r, con) in model.constraints.iter().enumerate() {
        for &(v, c) in &con.terms {
            match columns[v.0].last_mut() {
                Some(last) if last.0 == r + 1 => last.1 += c,
                _ => columns[v.0].push((r + 1, c)),
            }
        }
    }
    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0;
    for (j, var) in model.variables.iter().enumerate() {
        let integral = var.kind.is_integral();
        if integral != in_int {
            let tag = if integral { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(out, "    MARKER{marker:<4}  'MARKER'                 {tag}");
            marker += 1;
            in_int = integral;
        }
        let mut entries: Vec<(&str, f64)> = Vec::new();
        if obj[j] != 0.0 {
            entries.push(("OBJ", obj[j]));
        }
        for &(r, c) in &columns[j] {
            if c != 0.0 {
                entries.push((rows[r - 1].as_str(), c));
            }
        }
        if entries.is_empty() {
            entries.push(("OBJ", 0.0));
        }
        for chunk in entries.chunks(2) {
            field_line(&mut out, "", &cols[j], chunk);
        }
    }
    if in_int {
        let _ = writeln!(out, "    MARKER{marker:<4}  'MARKER'                 'INTEND'");
    }

    out.push_str("RHS\n");
    let mut rhs: Vec<(&str, f64)> = Vec::new();
    if model.objective.constant != 0.0 {
        rhs.push(("OBJ", -model.objective.constant));
    }
    for (con, r) in model.constraints.iter().zip(&rows) {
        if con.rhs != 0.0 {
            rhs.push((r.as_str(), con.rhs));
        }
    }
    for chunk in rhs.chunks(2) {
        field_line(&mut out, "", "RHS", chunk);
    }

    out.push_str("BOUNDS\n");
    for (var, c) in model.variables.iter().zip(&cols) {
        let (lo, hi) = (var.lower, var.upper);
        if var.kind == VarKind::Binary && lo == 0.0 && hi == 1.0 {
            field_line(&mut out, "BV", "BND", &[(c.as_str(), 1.0)]);
            continue;
        }
        if lo == hi {
            field_line(&mut out, "FX", "BND", &[(c.as_str(), lo)]);
            continue;
        }
        if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            let _ = writeln!(out, " FR BND       {c}");
            continue;
        }
        if lo == f64::NEG_INFINITY {
            let _ = writeln!(out, " MI BND       {c}");
        } else if lo != 0.0 {
            field_line(&mut out, "LO", "BND", &[(c.as_str(), lo)]);
        }
        if hi != f64::INFINITY {
            field_line(&mut out, "UP", "BND", &[(c.as_str(), hi)]);
        } else if var.kind.is_integral() {
            // Some readers default integer columns to an upper bound of one.
            let _ = writeln!(out, " PL BND       {c}");
        }
    }
    out.push_str("ENDATA\n");
    out
}

fn lp_num(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

fn lp_expr(out: &mut String, terms: &[(String, f64)]) {
    let mut width = 0;
    for (i, (name, c)) in terms.iter().enumerate() {
        let sign = if *c < 0.0 { "-" } else { "+" };
        let piece = if i == 0 && *c >= 0.0 {
            format!(" {} {name}", lp_num(c.abs()))
        } else {
            format!(" {sign} {} {name}", lp_num(c.abs()))
        };
        if width + piece.len() > 200 {
            out.push_str("\n   ");
            width = 3;
        }
        width += piece.len();
        out.push_str(&piece);
    }
}

pub fn to_lp(model: &MipModel) -> String {
    let names: Vec<String> = model.variables.iter().map(|v| mangle(&v.name)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}", model.name.replace('\n', " "));
    out.push_str(match model.objective.sense {
        ObjectiveSense::Minimize => "Minimize\n",
        ObjectiveSense::Maximize => "Maximize\n",
    });
    out.push_str(" obj:");
    let obj: Vec<(String, f64)> = model
        .objective_coefficients()
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != 0.0)
        .map(|(j, c)| (names[j].clone(), c))
        .collect();
    lp_expr(&mut out, &obj);
    let k = model.objective.constant;
    if k != 0.0 || obj.is_empty() {
        let sign = if k < 0.0 { "-" } else { "+" };
        let _ = write!(out, " {sign} {}", lp_num(k.abs()));
    }
    out.push_str("\nSubject To\n");
    for con in &model.constraints {
        let _ = write!(out, " {}:", mangle(&con.name));
        let mut terms: Vec<(String, f64)> = con.terms.iter().map(|&(v, c)| (names[v.0].clone(), c)).collect();
        if terms.is_empty() {
            if let Some(first) = names.first() {
                terms.push((first.clone(), 0.0));
            }
        }
        lp_expr(&mut out, &terms);
        let _ = writeln!(out, " {} {}", con.sense, lp_num(con.rhs));
    }
    out.push_str("Bounds\n");
    for (var, n) in model.variables.iter().zip(&names) {
        if var.lower == f64::NEG_INFINITY && var.upper == f64::INFINITY {
            let _ = writeln!(out, " {n} free");
        } else if var.lower == var.upper {
            let _ = writeln!(out, " {n} = {}", lp_num(var.lower));
        } else {
            let _ = writeln!(out, " {} <= {n} <= {}", lp_num(var.lower), lp_num(var.upper));
        }
    }
    let ints: Vec<&String> = model
        .variables
        .iter()
        .zip(&names)
        .filter(|(v, _)| v.kind == VarKind::Integer)
        .map(|(_, n)| n)
        .collect();
    let bins: Vec<&String> = model
        .variables
        .iter()
        .zip(&names)
        .filter(|(v, _)| v.kind == VarKind::Binary)
        .map(|(_, n)| n)
        .collect();
    for (title, list) in [("General", ints), ("Binary", bins)] {
        if list.is_empty() {
            continue;
        }
        let _ = writeln!(out, "{title}");
        for n in list {
            let _ = writeln!(out, " {n}");
        }
    }
    out.push_str("End\n");
    out
}
