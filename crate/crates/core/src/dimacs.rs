//! DIMACS `p edge` import/export plus a label sidecar.
//!
//! The sidecar is plain text with one `index<TAB>label` line per vertex
//! (1-based, matching the DIMACS vertex numbering). It lives next to the
//! graph file as `<file>.labels`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};

/// Canonical DIMACS text: problem line, then edges `u < v` in lexicographic
/// order. Certificates hash exactly this string.
pub fn to_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn to_label_map(g: &Graph) -> String {
    let mut out = String::new();
    for (i, label) in g.labels().iter().enumerate() {
        writeln!(out, "{}\t{}", i + 1, label).unwrap();
    }
    out
}

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses DIMACS text. Without a label map, vertex `i` gets `Base(i - 1)`.
pub fn from_dimacs(text: &str, label_map: Option<&str>) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut declared_edges = 0;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let mut fields = line.split_whitespace();
        match fields.next() {
            None | Some("c") => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(parse_error(lineno, "second problem line"));
                }
                let format = fields.next().ok_or_else(|| parse_error(lineno, "missing format"))?;
                if format != "edge" && format != "col" {
                    return Err(parse_error(lineno, format!("unsupported format {format:?}")));
                }
                let mut number = |what: &str| -> Result<usize> {
                    fields
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| parse_error(lineno, format!("bad {what}")))
                };
                n = Some(number("vertex count")?);
                declared_edges = number("edge count")?;
            }
            Some("e") => {
                let n = n.ok_or_else(|| parse_error(lineno, "edge before problem line"))?;
                let mut endpoint = || -> Result<usize> {
                    let v: usize = fields
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| parse_error(lineno, "bad edge endpoint"))?;
                    if v == 0 || v > n {
                        return Err(parse_error(lineno, format!("vertex {v} out of range 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let u = endpoint()?;
                let v = endpoint()?;
                if u == v {
                    return Err(parse_error(lineno, "loop edge"));
                }
                edges.push((u, v));
            }
            Some(other) => return Err(parse_error(lineno, format!("unknown line type {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| parse_error(0, "missing problem line"))?;
    if edges.len() != declared_edges {
        warn!("DIMACS declares {declared_edges} edges but lists {}", edges.len());
    }
    let labels = match label_map {
        Some(text) => parse_label_map(text, n)?,
        None => (0..n as u32).map(VertexLabel::Base).collect(),
    };
    Graph::new(labels, edges)
}

fn parse_label_map(text: &str, n: usize) -> Result<Vec<VertexLabel>> {
    let mut labels: Vec<Option<VertexLabel>> = vec![None; n];
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (index, label) = line
            .split_once('\t')
            .ok_or_else(|| parse_error(lineno, "expected index<TAB>label"))?;
        let index: usize = index.trim().parse().map_err(|_| parse_error(lineno, "bad index"))?;
        if index == 0 || index > n {
            return Err(parse_error(lineno, format!("index {index} out of range 1..={n}")));
        }
        let label: VertexLabel = label.trim().parse()?;
        if labels[index - 1].replace(label).is_some() {
            return Err(parse_error(lineno, format!("index {index} labeled twice")));
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| parse_error(0, format!("vertex {} has no label", i + 1))))
        .collect()
}

pub fn label_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".labels");
    PathBuf::from(name)
}

/// Reads a DIMACS file and, if present, its `.labels` sidecar.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    let sidecar = label_path(path);
    let labels = if sidecar.exists() { Some(fs::read_to_string(sidecar)?) } else { None };
    from_dimacs(&text, labels.as_deref())
}

/// Writes the DIMACS file and its `.labels` sidecar.
pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    fs::write(path, to_dimacs(g))?;
    fs::write(label_path(path), to_label_map(g))?;
    Ok(())
}
