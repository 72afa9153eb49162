//! Tree decompositions: the plain form (bags on an unrooted tree plus a
//! chosen root), validation against the three decomposition conditions,
//! elimination-ordering heuristics, and the typed "nice" form the dynamic
//! programs run on.

mod heuristic;
mod nice;

pub use heuristic::{heuristic_decompose, Strategy};
pub use nice::{make_nice, make_nice_rooted, validate_nice, NiceDecomposition, NiceNode, NodeKind};

use std::fmt;

use crate::graph::Graph;

/// Bags on a tree. Bags are stored as ascending vertex lists; `root` names
/// the node the decomposition is rooted at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    root: usize,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; the tree is rooted at node 0.
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition {
            bags,
            edges,
            root: 0,
        }
    }

    pub fn with_root(mut self, root: usize) -> Self {
        self.root = root;
        self
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (zero for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Parent links and a preorder from the root, or `None` if the bag
    /// graph is not a tree.
    pub(crate) fn rooted(&self) -> Option<(Vec<Option<usize>>, Vec<usize>)> {
        let n = self.bags.len();
        if n == 0 {
            return Some((Vec::new(), Vec::new()));
        }
        if self.root >= n || self.edges.len() != n - 1 {
            return None;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            if a >= n || b >= n || a == b {
                return None;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in adj[x].iter().rev() {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    stack.push(y);
                }
            }
        }
        (order.len() == n).then_some((parent, order))
    }

    /// Checks the three decomposition conditions plus tree shape. Violations
    /// are returned as data; an empty report means the decomposition is valid.
    pub fn validate(&self, g: &Graph) -> ValidationReport {
        let n = g.vertex_count();
        let mut violations = Vec::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    violations.push(Violation::VertexOutOfRange { bag: i, vertex: v });
                }
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        if self.rooted().is_none() {
            violations.push(Violation::NotATree);
        }

        let mut occurrences = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                occurrences[v].push(i);
            }
        }
        for v in g.vertices() {
            if occurrences[v].is_empty() {
                violations.push(Violation::MissingVertex(v));
            }
        }
        for &(u, v) in g.edges() {
            let covered = occurrences[u]
                .iter()
                .any(|&i| self.bags[i].binary_search(&v).is_ok());
            if !covered {
                violations.push(Violation::UncoveredEdge(u, v));
            }
        }
        // In a tree, a node subset is connected iff it spans |nodes| - 1 tree edges.
        if !violations.contains(&Violation::NotATree) {
            let mut internal = vec![0usize; n];
            for &(a, b) in &self.edges {
                for &v in &self.bags[a] {
                    if self.bags[b].binary_search(&v).is_ok() {
                        internal[v] += 1;
                    }
                }
            }
            for v in g.vertices() {
                if !occurrences[v].is_empty() && internal[v] + 1 != occurrences[v].len() {
                    violations.push(Violation::DisconnectedOccurrence(v));
                }
            }
        }
        ValidationReport { violations }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange { bag: usize, vertex: usize },
    NotATree,
    /// Condition 1: the vertex appears in no bag.
    MissingVertex(usize),
    /// Condition 2: no bag holds both endpoints.
    UncoveredEdge(usize, usize),
    /// Condition 3: the bags holding the vertex do not form a subtree.
    DisconnectedOccurrence(usize),
}

impl Violation {
    /// Which of the three conditions is broken, if any.
    pub fn condition(&self) -> Option<u8> {
        match self {
            Violation::MissingVertex(_) => Some(1),
            Violation::UncoveredEdge(..) => Some(2),
            Violation::DisconnectedOccurrence(_) => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {bag} holds out-of-range vertex {vertex}")
            }
            Violation::NotATree => write!(f, "bag graph is not a tree"),
            Violation::MissingVertex(v) => write!(f, "vertex {v} is in no bag"),
            Violation::UncoveredEdge(u, v) => write!(f, "edge ({u},{v}) is in no bag"),
            Violation::DisconnectedOccurrence(v) => {
                write!(f, "bags containing vertex {v} are not connected")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}
