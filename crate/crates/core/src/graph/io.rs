//! Edge-list text format: a `"<n> <m>"` header followed by `m` lines
//! `"<u> <v>"` with `u < v`, 0-based, each newline-terminated.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use super::{Graph, GraphError, NodeId};

pub fn write_edge_list<W: Write>(g: &Graph, mut sink: W) -> Result<(), GraphError> {
    sink.write_all(save_edge_list(g).as_bytes())?;
    Ok(())
}

/// Serializes `g` in the canonical edge-list form (edges sorted, `u < v`).
pub fn save_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.edge_count() + 1));
    let _ = writeln!(out, "{} {}", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_edge_list<R: Read>(mut source: R) -> Result<Graph, GraphError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    load_edge_list(&text)
}

pub fn load_edge_list_file(path: &Path) -> Result<Graph, GraphError> {
    read_edge_list(std::fs::File::open(path)?)
}

/// Parses the edge-list format. Errors carry the 1-based line number.
pub fn load_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let (n, m) = parse_pair(header, 1)?;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut last_line = 1;
    for (line, raw) in lines {
        if raw.trim().is_empty() {
            last_line = line;
            continue;
        }
        if edges.len() == m {
            return Err(GraphError::Parse {
                line,
                msg: format!("more than the declared {m} edges"),
            });
        }
        let (u, v) = parse_pair(raw, line)?;
        if u >= n || v >= n {
            return Err(GraphError::Parse {
                line,
                msg: format!("id out of range ({} >= {n})", u.max(v)),
            });
        }
        if u == v {
            return Err(GraphError::Parse {
                line,
                msg: format!("self-loop on {u}"),
            });
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(GraphError::Parse {
                line,
                msg: format!("duplicate edge {} {}", key.0, key.1),
            });
        }
        edges.push(key);
        last_line = line;
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: last_line,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

fn parse_pair(raw: &str, line: usize) -> Result<(usize, usize), GraphError> {
    let bad = |msg: &str| GraphError::Parse {
        line,
        msg: format!("{msg}: {raw:?}"),
    };
    let mut it = raw.split(' ');
    let a = it.next().ok_or_else(|| bad("expected two integers"))?;
    let b = it.next().ok_or_else(|| bad("expected two integers"))?;
    if it.next().is_some() {
        return Err(bad("expected two integers"));
    }
    let a = a.parse().map_err(|_| bad("malformed integer"))?;
    let b = b.parse().map_err(|_| bad("malformed integer"))?;
    Ok((a, b))
}
