//! Hasse diagrams in Graphviz DOT.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Options for [`to_dot`].
#[derive(Clone, Debug, Default)]
pub struct DotOptions<'a> {
    /// Per-element text appended to the node label, verbatim.
    pub values: Option<&'a [String]>,
    /// Draw the dual order: edges point from upper to lower covers.
    pub dual: bool,
    pub name: Option<&'a str>,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One node per element in topological order, one edge per cover pair
/// (lower → upper, or upper → lower with `dual`).
pub fn to_dot(lattice: &Lattice, opts: &DotOptions) -> Result<String> {
    if let Some(v) = opts.values {
        if v.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                actual: v.len(),
            });
        }
    }
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(opts.name.unwrap_or("lattice"))).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=ellipse];").unwrap();
    for x in 0..lattice.len() {
        let id = lattice.id(x);
        match opts.values {
            Some(v) => writeln!(out, "  {} [label={}];", quote(id), quote(&format!("{id}\n{}", v[x]))).unwrap(),
            None => writeln!(out, "  {};", quote(id)).unwrap(),
        }
    }
    let mut edges = lattice.covers();
    edges.sort_by_key(|&(u, l)| (l, u));
    for (upper, lower) in edges {
        let (from, to) = if opts.dual { (upper, lower) } else { (lower, upper) };
        writeln!(out, "  {} -> {};", quote(lattice.id(from)), quote(lattice.id(to))).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
