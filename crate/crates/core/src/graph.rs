//! Simple undirected graphs, vertex subsets, and the two predicates every
//! solver leans on: "is this a VCP3 set" and "is this subset connected".

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A finite, simple, undirected graph on vertices `0..n`.
///
/// Immutable after construction. Adjacency lists are sorted and the edge
/// list holds each edge once as `(u, v)` with `u < v`, in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an edge iterator. Duplicate edges (in either
    /// orientation) are merged; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    vertex_count,
                });
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            adjacency,
            edges: set.into_iter().collect(),
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); vertex_count],
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.vertex_count()
    }

    /// Returns the graph with edge `(u, v)` removed (no-op if absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let key = (u.min(v), u.max(v));
        Graph::from_edges(
            self.vertex_count(),
            self.edges.iter().copied().filter(|&e| e != key),
        )
        .expect("subgraph of a simple graph is simple")
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        Graph::from_edges(
            self.vertex_count(),
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
        )
    }

    /// Connected components, each as an ascending vertex list, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// A set of vertex ids, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Checks that every member lies in `0..vertex_count`.
    pub fn checked<I: IntoIterator<Item = usize>>(members: I, vertex_count: usize) -> Result<Self> {
        let set: VertexSet = members.into_iter().collect();
        if let Some(&v) = set.0.iter().find(|&&v| v >= vertex_count) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count,
            });
        }
        Ok(set)
    }

    /// Members of `mask` as a vertex set (bit `i` is vertex `i`).
    pub fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// Membership vector of length `n`.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut mark = vec![false; n];
        for v in self.iter() {
            mark[v] = true;
        }
        mark
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// True iff every vertex outside `f` has at most one neighbour outside `f`,
/// i.e. no path on three vertices survives in `G - F`.
pub fn is_vcp3_set(g: &Graph, f: &VertexSet) -> bool {
    let removed = f.indicator(g.vertex_count());
    g.vertices().filter(|&v| !removed[v]).all(|v| {
        g.neighbors(v).iter().filter(|&&w| !removed[w]).count() <= 1
    })
}

/// True iff `G[f]` has exactly one connected component. The empty set is
/// not connected; a single vertex is.
pub fn is_connected_induced(g: &Graph, f: &VertexSet) -> bool {
    let Some(start) = f.first() else {
        return false;
    };
    let inside = f.indicator(g.vertex_count());
    let mut seen = vec![false; g.vertex_count()];
    seen[start] = true;
    let mut reached = 1;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if inside[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached == f.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::from_edges(n, e).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn dedups_edges_and_rejects_loops() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(matches!(
            Graph::from_edges(3, [(2, 2)]),
            Err(Error::SelfLoop { vertex: 2 })
        ));
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn vcp3_predicate_examples() {
        let p3 = path(3);
        assert!(is_vcp3_set(&p3, &set(&[1])));
        assert!(!is_vcp3_set(&p3, &set(&[])));
        // C5 minus {0,2} leaves {1} and the edge 3-4.
        assert!(is_vcp3_set(&cycle(5), &set(&[0, 2])));
        assert!(!is_vcp3_set(&cycle(5), &set(&[0, 1])));
    }

    #[test]
    fn connectivity_examples() {
        let k4 = complete(4);
        assert!(is_connected_induced(&k4, &set(&[0, 3])));
        assert!(!is_connected_induced(&path(4), &set(&[0, 3])));
        assert!(is_connected_induced(&path(4), &set(&[2])));
        assert!(!is_connected_induced(&path(4), &set(&[])));
    }

    fn hits_every_p3(g: &Graph, f: &VertexSet) -> bool {
        // A P3 is a middle vertex with two distinct neighbours.
        for m in g.vertices() {
            for &a in g.neighbors(m) {
                for &b in g.neighbors(m) {
                    if a < b && !f.contains(a) && !f.contains(b) && !f.contains(m) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut e = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            e.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, e).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn degree_check_matches_p3_enumeration(g in arb_graph(8), mask in any::<u8>()) {
            let f = VertexSet::from_mask(u64::from(mask) & ((1u64 << g.vertex_count()) - 1));
            prop_assert_eq!(is_vcp3_set(&g, &f), hits_every_p3(&g, &f));
        }

        #[test]
        fn full_set_always_works_and_supersets_stay_valid(g in arb_graph(8), a in any::<u8>(), b in any::<u8>()) {
            let n = g.vertex_count();
            let full_mask = (1u64 << n) - 1;
            prop_assert!(is_vcp3_set(&g, &VertexSet::from_mask(full_mask)));
            prop_assert_eq!(is_vcp3_set(&g, &VertexSet::new()), g.max_degree() <= 1);
            let small = u64::from(a) & full_mask;
            let big = small | (u64::from(b) & full_mask);
            if is_vcp3_set(&g, &VertexSet::from_mask(small)) {
                prop_assert!(is_vcp3_set(&g, &VertexSet::from_mask(big)));
            }
        }
    }
}
