use std::fmt::Write as _;

use super::DeterministicScp;
use crate::error::{Error, Result};

/// Non-fatal findings while reading an ORLIB file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// Row (0-based) lists no columns; the instance is infeasible as a
    /// deterministic SCP but still usable as a scenario seed.
    EmptyRow(usize),
    /// Row (0-based) listed the same column more than once.
    DuplicateColumn { row: usize, column: usize },
}

struct Tokens<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .flat_map(|(ln, line)| line.split_whitespace().map(move |t| (ln + 1, t))),
        );
        Tokens { inner: it.peekable() }
    }

    fn int(&mut self, what: &str) -> Result<(usize, i64)> {
        let (line, tok) = self.inner.next().ok_or_else(|| Error::Truncated(what.to_string()))?;
        let v = tok
            .parse::<i64>()
            .map_err(|_| Error::Parse { line, msg: format!("expected integer for {what}, found {tok:?}") })?;
        Ok((line, v))
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let (line, v) = self.int(what)?;
        usize::try_from(v).map_err(|_| Error::Parse { line, msg: format!("{what} must be nonnegative, found {v}") })
    }
}

/// Parses an ORLIB set covering file: `m n`, then `n` costs, then for each row
/// a count followed by that many 1-based column indices. Line breaks carry no
/// meaning.
pub fn parse_orlib(text: &str) -> Result<(DeterministicScp, Vec<ParseWarning>)> {
    let mut tok = Tokens::new(text);
    let m = tok.count("row count")?;
    let n = tok.count("column count")?;

    let mut cost = Vec::with_capacity(n);
    for j in 0..n {
        let (_, c) = tok.int("cost")?;
        if c < 0 {
            return Err(Error::NegativeCost { column: j + 1, cost: c });
        }
        cost.push(c as u64);
    }

    let mut warnings = Vec::new();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let k = tok.count("row length")?;
        let mut row = Vec::with_capacity(k);
        for _ in 0..k {
            let (_, j) = tok.int("column index")?;
            if j < 1 || j as u64 > n as u64 {
                return Err(Error::IndexOutOfRange { index: j, n });
            }
            row.push(j as usize - 1);
        }
        if k == 0 {
            warnings.push(ParseWarning::EmptyRow(i));
        }
        row.sort_unstable();
        if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
            warnings.push(ParseWarning::DuplicateColumn { row: i, column: w[0] });
            row.dedup();
        }
        rows.push(row);
    }

    Ok((DeterministicScp { n, cost, rows }, warnings))
}

/// Writes `scp` in ORLIB layout (12 tokens per line, like the archive files).
pub fn write_orlib(scp: &DeterministicScp) -> String {
    let mut out = String::new();
    let _ = writeln!(out, " {} {}", scp.m(), scp.n);
    write_wrapped(&mut out, scp.cost.iter().map(|c| c.to_string()));
    for row in &scp.rows {
        let _ = writeln!(out, " {}", row.len());
        write_wrapped(&mut out, row.iter().map(|j| (j + 1).to_string()));
    }
    out
}

fn write_wrapped(out: &mut String, items: impl Iterator<Item = String>) {
    let mut on_line = 0;
    for item in items {
        out.push(' ');
        out.push_str(&item);
        on_line += 1;
        if on_line == 12 {
            out.push('\n');
            on_line = 0;
        }
    }
    if on_line > 0 {
        out.push('\n');
    }
}
