//! On-disk formats: whitespace edge lists and `node,label` CSV files.
//!
//! Edge list:
//!
//! ```text
//! # comments start with '#'
//! n 3
//! 0 1 1
//! 1 2 0.5
//! ```
//!
//! The header gives the node count so isolated nodes survive a round trip.
//! Pairs not listed have weight 0. Weights are written with 17 significant
//! digits, which reproduces every `f64` exactly.
//!
//! Label files are CSV with the header `node,label` and one row per node.
//! Sensitive attributes use the same layout with the group index as the
//! label (`0` for `-1`, `1` for `+1` in the binary case).

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::{Graph, SensitiveAttributes};

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph> {
    let mut adjacency: Option<Array2<f64>> = None;
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(adj) = adjacency.as_mut() else {
            if fields.len() != 2 || fields[0] != "n" {
                return Err(Error::parse(path, lineno, "expected header line \"n <count>\""));
            }
            let n: usize = fields[1]
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad node count {:?}", fields[1])))?;
            if n == 0 {
                return Err(Error::parse(path, lineno, "node count must be positive"));
            }
            adjacency = Some(Array2::zeros((n, n)));
            continue;
        };
        if fields.len() != 3 {
            return Err(Error::parse(path, lineno, "expected \"u v w\""));
        }
        let n = adj.nrows();
        let node = |s: &str| -> Result<usize> {
            let id: usize = s
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad node id {s:?}")))?;
            if id >= n {
                return Err(Error::parse(path, lineno, format!("node id {id} out of range 0..{n}")));
            }
            Ok(id)
        };
        let u = node(fields[0])?;
        let v = node(fields[1])?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad weight {:?}", fields[2])))?;
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::parse(path, lineno, format!("weight {w} outside [0, 1]")));
        }
        if u == v {
            return Err(Error::parse(path, lineno, format!("self-loop on node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(path, lineno, format!("duplicate edge {u} {v}")));
        }
        adj[[u, v]] = w;
        adj[[v, u]] = w;
    }

    let adjacency = adjacency.ok_or_else(|| Error::parse(path, 0, "missing \"n <count>\" header"))?;
    Graph::new(adjacency)
}

pub fn format_edge_list(g: &Graph) -> String {
    let n = g.n();
    let mut out = format!("n {n}\n");
    for i in 0..n {
        for j in i + 1..n {
            let w = g.weight(i, j);
            if w != 0.0 {
                let _ = writeln!(out, "{i} {j} {}", format_g17(w));
            }
        }
    }
    out
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}

/// `printf("%.17g")`: 17 significant digits, trailing zeros removed.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn load_labels(path: impl AsRef<Path>, n: usize) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text, n, path)
}

/// Reads a `node,label` file without knowing the node count up front; the
/// count is taken as the number of data rows.
pub fn load_labels_any(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows = text
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .count();
    parse_labels(&text, rows, path)
}

pub fn parse_labels(text: &str, n: usize, path: &Path) -> Result<Vec<usize>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "node,label" => {}
        _ => return Err(Error::parse(path, 1, "expected header \"node,label\"")),
    }
    let mut labels: Vec<Option<usize>> = vec![None; n];
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (node, label) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(path, lineno, "expected \"node,label\""))?;
        let node: usize = node
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad node id {node:?}")))?;
        let label: usize = label
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("non-integer label {label:?}")))?;
        let slot = labels
            .get_mut(node)
            .ok_or_else(|| Error::parse(path, lineno, format!("node {node} out of range 0..{n}")))?;
        if slot.replace(label).is_some() {
            return Err(Error::parse(path, lineno, format!("duplicate node {node}")));
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::parse(path, 0, format!("missing node {i}"))))
        .collect()
}

pub fn format_labels(labels: &[usize]) -> String {
    let mut out = String::from("node,label\n");
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(out, "{i},{l}");
    }
    out
}

pub fn save_labels(labels: &[usize], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_labels(labels)).map_err(|e| Error::io(path, e))
}

/// Group labels in `{0, 1}` load as binary attributes; anything wider is a
/// multi-level encoding with `max + 1` levels.
pub fn load_sensitive(path: impl AsRef<Path>, n: usize) -> Result<SensitiveAttributes> {
    sensitive_from_groups(load_labels(path, n)?)
}

pub fn load_sensitive_any(path: impl AsRef<Path>) -> Result<SensitiveAttributes> {
    sensitive_from_groups(load_labels_any(path)?)
}

fn sensitive_from_groups(groups: Vec<usize>) -> Result<SensitiveAttributes> {
    let max = groups.iter().copied().max().unwrap_or(0);
    if max <= 1 {
        SensitiveAttributes::binary(groups.iter().map(|&g| if g == 1 { 1 } else { -1 }).collect())
    } else {
        SensitiveAttributes::from_groups(groups, max + 1)
    }
}

pub fn save_sensitive(s: &SensitiveAttributes, path: impl AsRef<Path>) -> Result<()> {
    save_labels(&s.group_labels(), path)
}
