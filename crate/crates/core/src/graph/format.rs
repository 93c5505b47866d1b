//! Edge-list text format and DOT export.
//!
//! ```text
//! # any comment
//! # vertices: a b c      (optional; fixes index order, allows isolated vertices)
//! a b
//! b c
//! ```

use super::{Graph, GraphBuilder};
use crate::error::{Error, Result};
use std::fmt::Write;

const VERTICES_PRAGMA: &str = "# vertices:";

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut b = GraphBuilder::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix(VERTICES_PRAGMA) {
            for name in rest.split_whitespace() {
                b.vertex(name);
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y] = fields[..] else {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("expected two vertex labels, found {}", fields.len()),
            });
        };
        if x == y {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("loop at {x}"),
            });
        }
        b.edge(x, y)?;
        if b.names.len() > super::MAX_VERTICES {
            return Err(Error::TooManyVertices);
        }
    }
    b.build()
}

/// Parses a comma-separated word of vertex labels. The empty string is the
/// empty word.
pub fn parse_word(g: &Graph, text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(vec![]);
    }
    text.split(',')
        .map(|l| {
            let l = l.trim();
            g.index_of(l).ok_or_else(|| Error::BadLetter(l.to_string()))
        })
        .collect()
}

impl Graph {
    /// Serializes as an edge list. `header` lines are written as comments
    /// before the vertex pragma.
    pub fn to_edge_list(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            let _ = writeln!(out, "# {h}");
        }
        out.push_str(VERTICES_PRAGMA);
        for n in self.names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for (a, b) in self.edges() {
            let _ = writeln!(out, "{} {}", self.name(a), self.name(b));
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for n in self.names() {
            let _ = writeln!(out, "  \"{n}\";");
        }
        for (a, b) in self.edges() {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", self.name(a), self.name(b));
        }
        out.push_str("}\n");
        out
    }
}
