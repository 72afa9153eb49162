//! Brute-force reference solvers. These enumerate subsets directly and are
//! meant to be obviously correct, not fast.

use std::collections::{BTreeMap, HashSet};

use crate::coloring::{digits, encode, powers};
use crate::decomposition::{NiceDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{is_connected_induced, is_vcp3_set, Graph, VertexSet};
use crate::vcp3::{DpTable, UNREACHABLE};

pub const VCP3_LIMIT: usize = 24;
pub const CVCP3_LIMIT: usize = 20;
pub const EXPANSION_LIMIT: usize = 12;

fn guard(g: &Graph, limit: usize) -> Result<()> {
    if g.vertex_count() > limit {
        return Err(Error::OracleGuard {
            n: g.vertex_count(),
            limit,
        });
    }
    Ok(())
}

/// All `size`-element masks over `n` bits, in increasing numeric order.
fn masks_of_size(n: usize, size: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let first = if size == 0 { 0 } else { (1u64 << size) - 1 };
    let mut next = Some(first).filter(|&m| m < limit || (n == 0 && m == 0));
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < limit).then_some(nxt)
        };
        Some(cur)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteVcp3 {
    pub size: usize,
    /// Every minimum VCP3 set, in increasing mask order.
    pub optimal: Vec<VertexSet>,
}

/// Minimum VCP3 sets by enumerating subsets in increasing size.
pub fn brute_vcp3(g: &Graph) -> Result<BruteVcp3> {
    guard(g, VCP3_LIMIT)?;
    let n = g.vertex_count();
    for size in 0..=n {
        let optimal: Vec<VertexSet> = masks_of_size(n, size)
            .map(VertexSet::from_mask)
            .filter(|f| is_vcp3_set(g, f))
            .collect();
        if !optimal.is_empty() {
            return Ok(BruteVcp3 { size, optimal });
        }
    }
    unreachable!("the full vertex set is always a VCP3 set")
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

/// Largest vertex set inducing maximum degree at most one, found by
/// scanning sizes downward. Complementary to [`brute_vcp3`] but shares no
/// code with the VCP3 predicate.
pub fn max_dissociation_set(g: &Graph) -> Result<VertexSet> {
    guard(g, VCP3_LIMIT)?;
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    for size in (0..=n).rev() {
        for m in masks_of_size(n, size) {
            let ok = (0..n)
                .filter(|&v| m >> v & 1 == 1)
                .all(|v| (adj[v] & m).count_ones() <= 1);
            if ok {
                return Ok(VertexSet::from_mask(m));
            }
        }
    }
    unreachable!("the empty set is a dissociation set")
}

fn mask_of(s: &VertexSet) -> u64 {
    s.iter().fold(0u64, |m, v| m | 1 << v)
}

/// Minimum connected VCP3 set containing `s`, or `None` if there is none.
/// The empty set counts as a solution when `s` is empty and the graph
/// already has maximum degree at most one.
pub fn brute_cvcp3(g: &Graph, s: &VertexSet) -> Result<Option<usize>> {
    guard(g, CVCP3_LIMIT)?;
    if s.is_empty() && is_vcp3_set(g, &VertexSet::new()) {
        return Ok(Some(0));
    }
    let n = g.vertex_count();
    let required = mask_of(s);
    for size in s.len().max(1)..=n {
        let found = masks_of_size(n, size).any(|m| {
            if m & required != required {
                return false;
            }
            let f = VertexSet::from_mask(m);
            is_vcp3_set(g, &f) && is_connected_induced(g, &f)
        });
        if found {
            return Ok(Some(size));
        }
    }
    Ok(None)
}

/// Second route to [`brute_cvcp3`]: grow every connected vertex subset one
/// neighbour at a time and keep the smallest that is a VCP3 set.
pub fn brute_cvcp3_by_expansion(g: &Graph, s: &VertexSet) -> Result<Option<usize>> {
    guard(g, EXPANSION_LIMIT)?;
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    let all = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let degree_ok = |f: u64| (0..n).filter(|&v| f >> v & 1 == 0).all(|v| (adj[v] & !f & all).count_ones() <= 1);
    if s.is_empty() && degree_ok(0) {
        return Ok(Some(0));
    }
    let required = mask_of(s);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut frontier: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
    let mut best: Option<usize> = None;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in frontier {
            if !seen.insert(f) {
                continue;
            }
            if f & required == required && degree_ok(f) {
                let size = f.count_ones() as usize;
                best = Some(best.map_or(size, |b| b.min(size)));
            }
            let boundary = (0..n)
                .filter(|&v| f >> v & 1 == 1)
                .fold(0u64, |m, v| m | adj[v])
                & !f;
            for u in (0..n).filter(|&u| boundary >> u & 1 == 1) {
                next.push(f | 1 << u);
            }
        }
        frontier = next;
    }
    Ok(best)
}

/// Number of pairs `(F, (F1, F2))` with `F` a VCP3 set containing `s`,
/// `(F1, F2)` a cut of `F` with no edge of `G[F]` crossing it, and
/// `v1 ∈ F1`, keyed by `(|F|, w(F))`.
pub fn count_cut_pairs(
    g: &Graph,
    s: &VertexSet,
    v1: usize,
    weights: &[u64],
) -> Result<BTreeMap<(usize, u64), u64>> {
    guard(g, CVCP3_LIMIT)?;
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    let required = mask_of(s) | 1 << v1;
    let mut counts = BTreeMap::new();
    for f in 0u64..1 << n {
        if f & required != required || !is_vcp3_set(g, &VertexSet::from_mask(f)) {
            continue;
        }
        let rest = f & !(1 << v1);
        let mut cuts = 0u64;
        let mut sub = rest;
        loop {
            let side1 = sub | 1 << v1;
            let side2 = f & !side1;
            let crossing = (0..n)
                .filter(|&v| side1 >> v & 1 == 1)
                .any(|v| adj[v] & side2 != 0);
            if !crossing {
                cuts += 1;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        let w: u64 = (0..n).filter(|&v| f >> v & 1 == 1).map(|v| weights[v]).sum();
        *counts.entry((f.count_ones() as usize, w)).or_insert(0) += cuts;
    }
    Ok(counts)
}

/// Join table for the VCP3 program by trying every pair of child colorings
/// and keeping those consistent with the parent coloring.
pub fn join_by_pair_enumeration(
    nd: &NiceDecomposition,
    t: usize,
    left: &DpTable,
    right: &DpTable,
) -> Result<DpTable> {
    let node = nd.node(t);
    if node.kind != NodeKind::Join {
        return Err(Error::WrongNodeKind {
            node: t,
            expected: "join",
        });
    }
    let k = node.bag.len();
    let size = powers(3, k)[k];
    // Colors: 0 in solution, 1 isolated, 2 degree one.
    let combine = |a: usize, b: usize| -> Option<usize> {
        match (a, b) {
            (0, 0) => Some(0),
            (1, 1) => Some(1),
            (2, 1) | (1, 2) => Some(2),
            _ => None,
        }
    };
    let mut values = vec![UNREACHABLE; size];
    for f1 in 0..size {
        for f2 in 0..size {
            let (d1, d2) = (digits(f1, k, 3), digits(f2, k, 3));
            let Some(parent): Option<Vec<usize>> =
                d1.iter().zip(&d2).map(|(&a, &b)| combine(a, b)).collect()
            else {
                continue;
            };
            let (a, b) = (left.values[f1], right.values[f2]);
            if a == UNREACHABLE || b == UNREACHABLE {
                continue;
            }
            let in_solution = parent.iter().filter(|&&d| d == 0).count() as u32;
            let f = encode(&parent, 3);
            values[f] = values[f].min(a + b - in_solution);
        }
    }
    Ok(DpTable { node: t, values })
}
