//! Text format for PSCP instances, version 1:
//!
//! ```text
//! PSCP 1
//! m n
//! c_1 ... c_n
//! i s_i eps_i              (once per row, 1-based i)
//! p k j_1 ... j_k          (s_i lines, 1-based sorted columns)
//! # meta key=value ...     (optional provenance)
//! # sha256 <hex>           (optional, must be last; hashes every byte before it)
//! ```
//!
//! Probabilities and reliability levels are printed with 17 significant
//! digits, costs with the shortest representation that parses back exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{Instance, ScenarioBlock};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

const MAGIC: &str = "PSCP";
const META_PREFIX: &str = "# meta";
const CHECKSUM_PREFIX: &str = "# sha256 ";

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {FORMAT_VERSION}");
    let _ = writeln!(out, "{} {}", inst.m(), inst.n);
    let costs: Vec<String> = inst.cost.iter().map(|c| format!("{c}")).collect();
    let _ = writeln!(out, "{}", costs.join(" "));
    for (i, block) in inst.blocks.iter().enumerate() {
        let _ = writeln!(out, "{} {} {:.16e}", i + 1, block.len(), block.epsilon());
        for (support, p) in block.scenarios().iter().zip(block.prob()) {
            let _ = write!(out, "{:.16e} {}", p, support.len());
            for j in support {
                let _ = write!(out, " {}", j + 1);
            }
            out.push('\n');
        }
    }
    if !inst.meta.is_empty() {
        out.push_str(META_PREFIX);
        for (k, v) in &inst.meta {
            let _ = write!(out, " {}={}", sanitize(k), sanitize(v));
        }
        out.push('\n');
    }
    let digest = hex::encode(Sha256::digest(out.as_bytes()));
    let _ = writeln!(out, "{CHECKSUM_PREFIX}{digest}");
    out
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_whitespace() || c == '=' { '_' } else { c }).collect()
}

pub fn read_instance(text: &str) -> Result<Instance> {
    let body = verify_checksum(text)?;

    let mut lines = body
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| Error::MalformedHeader("empty file".into()))?;
    let mut head = header.split_whitespace();
    if head.next() != Some(MAGIC) {
        return Err(Error::MalformedHeader(format!("line {ln}: expected \"{MAGIC} {FORMAT_VERSION}\"")));
    }
    let version = head.next().ok_or_else(|| Error::MalformedHeader("missing version".into()))?;
    if version != FORMAT_VERSION.to_string() {
        return Err(Error::UnsupportedVersion(version.to_string()));
    }

    let mut meta = BTreeMap::new();
    let mut data = Vec::new();
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix(META_PREFIX) {
            for kv in rest.split_whitespace() {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::Parse { line: ln, msg: format!("bad meta entry {kv:?}") })?;
                meta.insert(k.to_string(), v.to_string());
            }
        } else if !line.starts_with('#') {
            data.push((ln, line));
        }
    }
    let mut data = data.into_iter();

    let (ln, dims) = data.next().ok_or_else(|| Error::Truncated("dimensions".into()))?;
    let dims: Vec<usize> = parse_all(ln, dims)?;
    let [m, n] = dims[..] else {
        return Err(Error::Parse { line: ln, msg: "expected \"m n\"".into() });
    };

    let cost: Vec<f64> = if n == 0 {
        Vec::new()
    } else {
        let (ln, line) = data.next().ok_or_else(|| Error::Truncated("costs".into()))?;
        let cost: Vec<f64> = parse_all(ln, line)?;
        if cost.len() != n {
            return Err(Error::Parse { line: ln, msg: format!("expected {n} costs, found {}", cost.len()) });
        }
        cost
    };

    let mut blocks = Vec::with_capacity(m);
    for i in 0..m {
        let (ln, line) = data.next().ok_or_else(|| Error::Truncated(format!("row {}", i + 1)))?;
        let mut tok = line.split_whitespace();
        let idx: usize = parse_tok(ln, tok.next(), "row index")?;
        if idx != i + 1 {
            return Err(Error::Parse { line: ln, msg: format!("expected row {}, found {idx}", i + 1) });
        }
        let s: usize = parse_tok(ln, tok.next(), "scenario count")?;
        let eps: f64 = parse_tok(ln, tok.next(), "epsilon")?;

        let mut scenarios = Vec::with_capacity(s);
        let mut prob = Vec::with_capacity(s);
        for w in 0..s {
            let (ln, line) = data
                .next()
                .ok_or_else(|| Error::Truncated(format!("row {} scenario {}", i + 1, w + 1)))?;
            let mut tok = line.split_whitespace();
            prob.push(parse_tok::<f64>(ln, tok.next(), "probability")?);
            let k: usize = parse_tok(ln, tok.next(), "support size")?;
            let mut support = Vec::with_capacity(k);
            for _ in 0..k {
                let j: i64 = parse_tok(ln, tok.next(), "column index")?;
                if j < 1 || j as u64 > n as u64 {
                    return Err(Error::IndexOutOfRange { index: j, n });
                }
                support.push(j as usize - 1);
            }
            if tok.next().is_some() {
                return Err(Error::Parse { line: ln, msg: "trailing tokens".into() });
            }
            scenarios.push(support);
        }
        blocks.push(ScenarioBlock::new(n, scenarios, prob, eps));
    }
    if let Some((ln, _)) = data.next() {
        return Err(Error::Parse { line: ln, msg: "unexpected data after last row".into() });
    }

    Ok(Instance { n, cost, blocks, meta })
}

/// Strips and checks a trailing checksum line, returning the hashed body.
fn verify_checksum(text: &str) -> Result<&str> {
    let trimmed = text.trim_end();
    let start = trimmed.rfind('\n').map_or(0, |p| p + 1);
    let last = &trimmed[start..];
    match last.strip_prefix(CHECKSUM_PREFIX) {
        Some(expected) => {
            let body = &text[..start];
            let actual = hex::encode(Sha256::digest(body.as_bytes()));
            if actual != expected.trim() {
                return Err(Error::ChecksumMismatch { expected: expected.trim().to_string(), actual });
            }
            Ok(body)
        }
        None => Ok(text),
    }
}

fn parse_tok<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what} {tok:?}") })
}

fn parse_all<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line, msg: format!("bad number {t:?}") }))
        .collect()
}
