//! Text formats: plain edge lists and the PACE 2017 `.gr` / `.td` files.
//!
//! PACE files are 1-indexed on the wire; everything in memory is 0-indexed.

use std::fmt::Write as _;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// `u v` per line, 0-indexed, `#` comments. A line holding a single
    /// integer declares the vertex count (otherwise: largest id + 1).
    EdgeList,
    /// `p tw <n> <m>` header, then `u v` or `e u v` lines, 1-indexed, `c` comments.
    PaceGr,
}

impl std::str::FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            "pace-gr" | "gr" => Ok(GraphFormat::PaceGr),
            other => Err(format!("unknown graph format '{other}'")),
        }
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| perr(line, format!("expected a non-negative integer, found '{tok}'")))
}

fn one_indexed(tok: &str, line: usize, n: usize) -> Result<usize> {
    let v = number(tok, line)?;
    if v == 0 || v > n {
        return Err(perr(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::PaceGr => parse_pace_gr(text),
    }
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks.as_slice() {
            [n] => declared = Some(number(n, line)?),
            [u, v] => {
                let (u, v) = (number(u, line)?, number(v, line)?);
                if u == v {
                    return Err(Error::SelfLoop { vertex: u });
                }
                edges.push((u, v));
            }
            _ => return Err(perr(line, "expected 'u v'")),
        }
    }
    let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < implied => {
            return Err(perr(0, format!("declared {n} vertices but edges use id {}", implied - 1)))
        }
        Some(n) => n,
        None => implied,
    };
    Graph::from_edges(n, edges)
}

fn parse_pace_gr(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] => continue,
            ["c", ..] => continue,
            ["p", kind, nv, _m] => {
                if n.is_some() {
                    return Err(perr(line, "duplicate header"));
                }
                if *kind != "tw" {
                    return Err(perr(line, format!("expected problem 'tw', found '{kind}'")));
                }
                n = Some(number(nv, line)?);
            }
            ["e", u, v] | [u, v] => {
                let n = n.ok_or_else(|| perr(line, "edge before 'p tw' header"))?;
                let (u, v) = (one_indexed(u, line, n)?, one_indexed(v, line, n)?);
                if u == v {
                    return Err(Error::SelfLoop { vertex: u });
                }
                edges.push((u, v));
            }
            _ => return Err(perr(line, format!("unrecognised line '{}'", raw.trim()))),
        }
    }
    let n = n.ok_or_else(|| perr(0, "missing 'p tw' header"))?;
    Graph::from_edges(n, edges)
}

pub fn emit_gr(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Parses a PACE `.td` file. The result is rooted at bag 1 and is not
/// validated against any graph.
pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] => continue,
            ["c", ..] => continue,
            ["s", "td", nb, _width, nv] => {
                if header.is_some() {
                    return Err(perr(line, "duplicate header"));
                }
                let nb = number(nb, line)?;
                header = Some((nb, number(nv, line)?));
                bags = vec![None; nb];
            }
            ["b", id, rest @ ..] => {
                let (nb, nv) = header.ok_or_else(|| perr(line, "bag before 's td' header"))?;
                let id = number(id, line)?;
                if id == 0 || id > nb {
                    return Err(perr(line, format!("bag id {id} outside 1..={nb}")));
                }
                if bags[id - 1].is_some() {
                    return Err(perr(line, format!("bag {id} listed twice")));
                }
                let verts = rest
                    .iter()
                    .map(|t| one_indexed(t, line, nv))
                    .collect::<Result<Vec<_>>>()?;
                bags[id - 1] = Some(verts);
            }
            [a, b] => {
                let (nb, _) = header.ok_or_else(|| perr(line, "edge before 's td' header"))?;
                let (a, b) = (number(a, line)?, number(b, line)?);
                for id in [a, b] {
                    if id == 0 || id > nb {
                        return Err(perr(line, format!("bag id {id} outside 1..={nb}")));
                    }
                }
                edges.push((a - 1, b - 1));
            }
            _ => return Err(perr(line, format!("unrecognised line '{}'", raw.trim()))),
        }
    }
    if header.is_none() {
        return Err(perr(0, "missing 's td' header"));
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| perr(0, format!("bag {} never listed", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(bags, edges))
}

/// Emits a PACE `.td` file. The root bag is written as bag 1 so the
/// parser's rooting convention round-trips.
pub fn emit_td(td: &TreeDecomposition, vertex_count: usize) -> String {
    let nb = td.node_count();
    // Swap ids so that the root becomes bag 1.
    let relabel = |x: usize| {
        if x == td.root() {
            0
        } else if x == 0 {
            td.root()
        } else {
            x
        }
    };
    let max_bag = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {nb} {max_bag} {vertex_count}\n");
    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by_key(|&x| relabel(x));
    for x in order {
        write!(out, "b {}", relabel(x) + 1).unwrap();
        for v in &td.bags()[x] {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        writeln!(out, "{} {}", relabel(a) + 1, relabel(b) + 1).unwrap();
    }
    out
}
