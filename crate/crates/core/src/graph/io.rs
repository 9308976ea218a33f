//! Edge-list text format.
//!
//! ```text
//! c optional comments
//! p <n> <m>
//! e <u> <v>
//! ```
//!
//! Without a `p` header, bare `<u> <v>` lines are accepted and `n` is one more
//! than the largest index seen.

use super::{Graph, GraphError};
use std::fmt::Write as _;

fn parse_index(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse { line, message: format!("missing {what}") })?;
    tok.parse::<usize>()
        .map_err(|_| GraphError::Parse { line, message: format!("invalid {what} '{tok}'") })
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_index: Option<usize> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let first = toks.next().unwrap();
        let (u, v) = match first {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(GraphError::Parse { line, message: "duplicate header".into() });
                }
                if !edges.is_empty() {
                    return Err(GraphError::Parse { line, message: "header after edge lines".into() });
                }
                let n = parse_index(toks.next(), line, "vertex count")?;
                parse_index(toks.next(), line, "edge count")?;
                if toks.next().is_some() {
                    return Err(GraphError::Parse { line, message: "trailing tokens".into() });
                }
                header = Some(n);
                continue;
            }
            "e" => (parse_index(toks.next(), line, "endpoint")?, parse_index(toks.next(), line, "endpoint")?),
            _ if first.starts_with('c') => continue,
            _ => {
                if header.is_some() {
                    return Err(GraphError::Parse {
                        line,
                        message: "bare edge line not allowed after a header".into(),
                    });
                }
                (parse_index(Some(first), line, "endpoint")?, parse_index(toks.next(), line, "endpoint")?)
            }
        };
        if toks.next().is_some() {
            return Err(GraphError::Parse { line, message: "trailing tokens".into() });
        }
        if u == v {
            return Err(GraphError::Parse { line, message: format!("self-loop at vertex {u}") });
        }
        if let Some(n) = header {
            if u >= n || v >= n {
                return Err(GraphError::Parse {
                    line,
                    message: format!("vertex {} out of range for {n} vertices", u.max(v)),
                });
            }
        }
        max_index = Some(max_index.unwrap_or(0).max(u).max(v));
        edges.push((u, v));
    }
    let n = header.unwrap_or_else(|| max_index.map_or(0, |m| m + 1));
    Graph::from_edges(n, edges)
}

/// Serializes in `p`/`e` form with sorted edges and LF line endings.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p {} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edge_list() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}
