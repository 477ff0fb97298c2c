//! The big-M MIP model of a PSCP instance in CPLEX LP format:
//!
//! ```text
//! min   sum_j c_j x_j
//! s.t.  A_i^w x - z_i_w >= 0                 (link_i_w)
//!       sum_w p_i^w z_i_w >= 1 - eps_i       (prob_i)
//!       x binary, z binary or 0 <= z <= 1
//! ```
//!
//! Dialect: one section keyword per line (`Minimize`, `Subject To`,
//! `Bounds`, `Binaries`, `End`), `\` starts a comment line, every term is
//! written as `<sign> <coefficient> <name>` with the coefficient in Rust's
//! shortest round-trip notation, and long expressions continue on lines
//! starting with a space. Names are `x_j` and `z_i_w`, 1-based.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::Instance;

const TERMS_PER_LINE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(String, f64)>,
    /// Right-hand side of `terms >= rhs`.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BigMModel {
    pub objective: Vec<(String, f64)>,
    pub constraints: Vec<Constraint>,
    /// Continuous variables with bounds `[0, 1]`.
    pub bounded: Vec<String>,
    pub binaries: Vec<String>,
}

pub fn x_name(j: usize) -> String {
    format!("x_{}", j + 1)
}

pub fn z_name(i: usize, w: usize) -> String {
    format!("z_{}_{}", i + 1, w + 1)
}

impl BigMModel {
    pub fn build(inst: &Instance, relax_z: bool) -> Self {
        let objective = (0..inst.n).map(|j| (x_name(j), inst.cost[j])).collect();
        let mut constraints = Vec::new();
        let mut zs = Vec::new();
        for (i, block) in inst.blocks.iter().enumerate() {
            for (w, support) in block.scenarios().iter().enumerate() {
                let mut terms: Vec<(String, f64)> = support.iter().map(|&j| (x_name(j), 1.0)).collect();
                terms.push((z_name(i, w), -1.0));
                constraints.push(Constraint { name: format!("link_{}_{}", i + 1, w + 1), terms, rhs: 0.0 });
                zs.push(z_name(i, w));
            }
        }
        for (i, block) in inst.blocks.iter().enumerate() {
            let terms = block.prob().iter().enumerate().map(|(w, &p)| (z_name(i, w), p)).collect();
            constraints.push(Constraint { name: format!("prob_{}", i + 1), terms, rhs: 1.0 - block.epsilon() });
        }
        let mut binaries: Vec<String> = (0..inst.n).map(x_name).collect();
        let bounded = if relax_z {
            zs
        } else {
            binaries.extend(zs);
            Vec::new()
        };
        BigMModel { objective, constraints, bounded, binaries }
    }

    pub fn variable_count(&self) -> usize {
        self.bounded.len() + self.binaries.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn to_lp_string(&self) -> String {
        let mut out = String::from("\\ PSCP big-M model\nMinimize\n obj:");
        write_terms(&mut out, &self.objective);
        out.push_str("\nSubject To\n");
        for c in &self.constraints {
            let _ = write!(out, " {}:", c.name);
            write_terms(&mut out, &c.terms);
            let _ = writeln!(out, " >= {}", c.rhs);
        }
        if !self.bounded.is_empty() {
            out.push_str("Bounds\n");
            for v in &self.bounded {
                let _ = writeln!(out, " 0 <= {v} <= 1");
            }
        }
        if !self.binaries.is_empty() {
            out.push_str("Binaries\n");
            for chunk in self.binaries.chunks(TERMS_PER_LINE) {
                let _ = writeln!(out, " {}", chunk.join(" "));
            }
        }
        out.push_str("End\n");
        out
    }

    /// Reads text in the dialect written by [`BigMModel::to_lp_string`].
    pub fn parse_lp(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            Head,
            Objective,
            Rows,
            Bounds,
            Binaries,
            Done,
        }
        let mut model = BigMModel::default();
        let mut section = Section::Head;
        let mut pending: Vec<(usize, String)> = Vec::new();

        let flush = |pending: &mut Vec<(usize, String)>, section: &Section, model: &mut BigMModel| -> Result<()> {
            if pending.is_empty() {
                return Ok(());
            }
            let line = pending[0].0;
            let text: String = pending.iter().map(|(_, s)| s.as_str()).collect::<Vec<_>>().join(" ");
            pending.clear();
            let (name, body) = text
                .split_once(':')
                .ok_or_else(|| Error::Parse { line, msg: "missing label".into() })?;
            match section {
                Section::Objective => model.objective = parse_terms(line, body)?,
                Section::Rows => {
                    let (lhs, rhs) = body
                        .split_once(">=")
                        .ok_or_else(|| Error::Parse { line, msg: "expected >=".into() })?;
                    let rhs = rhs.trim().parse().map_err(|_| Error::Parse { line, msg: "bad rhs".into() })?;
                    model.constraints.push(Constraint { name: name.trim().to_string(), terms: parse_terms(line, lhs)?, rhs });
                }
                _ => {}
            }
            Ok(())
        };

        for (k, raw) in text.lines().enumerate() {
            let ln = k + 1;
            if raw.trim_start().starts_with('\\') || raw.trim().is_empty() {
                continue;
            }
            let keyword = match raw.trim().to_ascii_lowercase().as_str() {
                "minimize" => Some(Section::Objective),
                "subject to" => Some(Section::Rows),
                "bounds" => Some(Section::Bounds),
                "binaries" => Some(Section::Binaries),
                "end" => Some(Section::Done),
                _ => None,
            };
            if let Some(next) = keyword {
                flush(&mut pending, &section, &mut model)?;
                section = next;
                continue;
            }
            let continuation = raw.starts_with(' ') && !raw.contains(':');
            match section {
                Section::Objective | Section::Rows => {
                    if !continuation {
                        flush(&mut pending, &section, &mut model)?;
                    }
                    pending.push((ln, raw.trim().to_string()));
                }
                Section::Bounds => {
                    let tok: Vec<&str> = raw.split_whitespace().collect();
                    match tok[..] {
                        ["0", "<=", v, "<=", "1"] => model.bounded.push(v.to_string()),
                        _ => return Err(Error::Parse { line: ln, msg: format!("unsupported bound {:?}", raw.trim()) }),
                    }
                }
                Section::Binaries => model.binaries.extend(raw.split_whitespace().map(str::to_string)),
                Section::Head | Section::Done => {
                    return Err(Error::Parse { line: ln, msg: "text outside a section".into() });
                }
            }
        }
        flush(&mut pending, &section, &mut model)?;
        Ok(model)
    }
}

fn write_terms(out: &mut String, terms: &[(String, f64)]) {
    for (k, (name, a)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if a.is_sign_negative() { '-' } else { '+' };
        let _ = write!(out, " {sign} {} {name}", a.abs());
    }
}

fn parse_terms(line: usize, text: &str) -> Result<Vec<(String, f64)>> {
    let mut terms = Vec::new();
    let mut tok = text.split_whitespace();
    while let Some(sign) = tok.next() {
        let s = match sign {
            "+" => 1.0,
            "-" => -1.0,
            _ => return Err(Error::Parse { line, msg: format!("expected sign, found {sign:?}") }),
        };
        let coeff: f64 = tok
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line, msg: "bad coefficient".into() })?;
        let name = tok.next().ok_or_else(|| Error::Parse { line, msg: "missing variable".into() })?;
        terms.push((name.to_string(), s * coeff));
    }
    Ok(terms)
}

pub fn export_bigm(inst: &Instance, relax_z: bool) -> String {
    BigMModel::build(inst, relax_z).to_lp_string()
}
