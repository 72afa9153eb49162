use std::collections::{BTreeMap, BTreeSet};

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Node-count budget per `(width + 1) * n`.
pub const NODE_BUDGET_FACTOR: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    IntroduceVertex(usize),
    /// Endpoints are stored with the smaller id first.
    IntroduceEdge(usize, usize),
    Forget(usize),
    Join,
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Leaf => "leaf",
            NodeKind::IntroduceVertex(_) => "introduce-vertex",
            NodeKind::IntroduceEdge(..) => "introduce-edge",
            NodeKind::Forget(_) => "forget",
            NodeKind::Join => "join",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Ascending; digit positions of DP colorings follow this order.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A rooted binary decomposition whose nodes are typed. Nodes are stored in
/// post-order: every child id is smaller than its parent's, and the root is
/// the last node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    nodes: Vec<NiceNode>,
    width: usize,
}

impl NiceDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, t: usize) -> &NiceNode {
        &self.nodes[t]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of nodes of each kind, keyed by kind name.
    pub fn kind_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for kind in ["leaf", "introduce-vertex", "introduce-edge", "forget", "join"] {
            counts.insert(kind, 0);
        }
        for node in &self.nodes {
            *counts.get_mut(node.kind.name()).unwrap() += 1;
        }
        counts
    }

    fn subtree(&self, t: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![t];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.nodes[x].children.iter().copied());
        }
        out
    }

    /// Union of the bags below and at `t`.
    pub fn subtree_vertices(&self, t: usize) -> BTreeSet<usize> {
        self.subtree(t)
            .into_iter()
            .flat_map(|x| self.nodes[x].bag.iter().copied())
            .collect()
    }

    /// Edges introduced below and at `t`.
    pub fn subtree_edges(&self, t: usize) -> BTreeSet<(usize, usize)> {
        self.subtree(t)
            .into_iter()
            .filter_map(|x| match self.nodes[x].kind {
                NodeKind::IntroduceEdge(u, v) => Some((u, v)),
                _ => None,
            })
            .collect()
    }

    /// The same bags on the same tree, forgetting node types.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(t, n)| n.children.iter().map(move |&c| (c, t)))
            .collect();
        TreeDecomposition::new(bags, edges).with_root(self.root())
    }
}

struct Builder<'g> {
    graph: &'g Graph,
    nodes: Vec<NiceNode>,
    introduced: BTreeSet<(usize, usize)>,
}

impl Builder<'_> {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    fn leaf(&mut self) -> usize {
        self.push(NodeKind::Leaf, Vec::new(), Vec::new())
    }

    fn introduce(&mut self, top: usize, v: usize) -> usize {
        let mut bag = self.nodes[top].bag.clone();
        let pos = bag.binary_search(&v).unwrap_err();
        bag.insert(pos, v);
        self.push(NodeKind::IntroduceVertex(v), bag, vec![top])
    }

    /// Introduces every not-yet-introduced edge from `v` into the current
    /// bag, then forgets `v`.
    fn forget(&mut self, mut top: usize, v: usize) -> usize {
        let bag = self.nodes[top].bag.clone();
        for &u in self.graph.neighbors(v) {
            let e = (u.min(v), u.max(v));
            if bag.binary_search(&u).is_ok() && self.introduced.insert(e) {
                top = self.push(NodeKind::IntroduceEdge(e.0, e.1), bag.clone(), vec![top]);
            }
        }
        let mut smaller = bag;
        smaller.retain(|&x| x != v);
        self.push(NodeKind::Forget(v), smaller, vec![top])
    }

    /// Walks from the bag at `top` to `target` by forgets then introduces.
    fn transition(&mut self, mut top: usize, target: &[usize]) -> usize {
        let current = self.nodes[top].bag.clone();
        for &v in &current {
            if target.binary_search(&v).is_err() {
                top = self.forget(top, v);
            }
        }
        for &v in target {
            if current.binary_search(&v).is_err() {
                top = self.introduce(top, v);
            }
        }
        top
    }

    fn join(&mut self, left: usize, right: usize) -> usize {
        let bag = self.nodes[left].bag.clone();
        self.push(NodeKind::Join, bag, vec![left, right])
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

/// Contracts tree edges whose one bag is contained in the other. Returns
/// the surviving bags, tree edges, and the new root index.
fn compress(td: &TreeDecomposition) -> (Vec<Vec<usize>>, Vec<BTreeSet<usize>>, usize) {
    let n = td.node_count();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(a, b) in td.tree_edges() {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let bags = td.bags();
    let mut alive = vec![true; n];
    let mut root = td.root();
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let Some(b) = adj[a]
                .iter()
                .copied()
                .find(|&b| is_subset(&bags[a], &bags[b]))
            else {
                continue;
            };
            // Merge a into b.
            let others: Vec<usize> = adj[a].iter().copied().filter(|&x| x != b).collect();
            for x in others {
                adj[x].remove(&a);
                adj[x].insert(b);
                adj[b].insert(x);
            }
            adj[b].remove(&a);
            adj[a].clear();
            alive[a] = false;
            if root == a {
                root = b;
            }
            changed = true;
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for a in (0..n).filter(|&a| alive[a]) {
        index[a] = kept.len();
        kept.push(a);
    }
    let new_bags = kept.iter().map(|&a| bags[a].clone()).collect();
    let new_adj = kept
        .iter()
        .map(|&a| adj[a].iter().map(|&x| index[x]).collect())
        .collect();
    (new_bags, new_adj, index[root])
}

/// Converts a valid decomposition into nice form with introduce-edge nodes,
/// rooted at the decomposition's own root.
pub fn make_nice(td: &TreeDecomposition, g: &Graph) -> Result<NiceDecomposition> {
    make_nice_rooted(td, g, td.root())
}

/// As [`make_nice`], with the root chosen among the original nodes.
pub fn make_nice_rooted(td: &TreeDecomposition, g: &Graph, root: usize) -> Result<NiceDecomposition> {
    let report = td.validate(g);
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(report.to_string()));
    }
    let mut builder = Builder {
        graph: g,
        nodes: Vec::new(),
        introduced: BTreeSet::new(),
    };
    if td.node_count() == 0 {
        builder.leaf();
        return Ok(NiceDecomposition {
            nodes: builder.nodes,
            width: 0,
        });
    }
    if root >= td.node_count() {
        return Err(Error::InvalidDecomposition(format!("root {root} is not a node")));
    }
    let (bags, adj, root) = compress(&td.clone().with_root(root));

    // Preorder, then process in reverse so children come first.
    let mut parent = vec![usize::MAX; bags.len()];
    let mut order = Vec::with_capacity(bags.len());
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut top = vec![usize::MAX; bags.len()];
    for &x in order.iter().rev() {
        let mut tops: Vec<usize> = Vec::new();
        for &c in &adj[x] {
            if parent[c] == x && c != x {
                tops.push(builder.transition(top[c], &bags[x]));
            }
        }
        if tops.is_empty() {
            let leaf = builder.leaf();
            tops.push(builder.transition(leaf, &bags[x]));
        }
        let mut acc = tops[0];
        for &t in &tops[1..] {
            acc = builder.join(acc, t);
        }
        top[x] = acc;
    }
    let mut acc = top[root];
    for &v in &bags[root].clone() {
        acc = builder.forget(acc, v);
    }
    debug_assert_eq!(acc, builder.nodes.len() - 1);
    Ok(NiceDecomposition {
        nodes: builder.nodes,
        width: td.width(),
    })
}

/// Checks every structural rule of the nice form against `g`. Returns one
/// message per broken rule; empty means valid.
pub fn validate_nice(nd: &NiceDecomposition, g: &Graph) -> Vec<String> {
    let mut problems = Vec::new();
    let nodes = nd.nodes();
    if nodes.is_empty() {
        return vec!["no nodes".into()];
    }
    let root = nd.root();
    let mut parents = vec![0usize; nodes.len()];
    for (t, node) in nodes.iter().enumerate() {
        for &c in &node.children {
            if c >= t {
                problems.push(format!("node {t}: child {c} is not earlier in post-order"));
            } else {
                parents[c] += 1;
            }
        }
        if node.bag.windows(2).any(|w| w[0] >= w[1]) {
            problems.push(format!("node {t}: bag not strictly ascending"));
        }
    }
    for (t, &p) in parents.iter().enumerate() {
        let expected = usize::from(t != root);
        if p != expected {
            problems.push(format!("node {t}: has {p} parents"));
        }
    }
    if !nodes[root].bag.is_empty() {
        problems.push("root bag is not empty".into());
    }

    let mut introduced: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (t, node) in nodes.iter().enumerate() {
        let child_bag = |i: usize| node.children.get(i).map(|&c| &nodes[c].bag);
        let arity = match node.kind {
            NodeKind::Leaf => 0,
            NodeKind::Join => 2,
            _ => 1,
        };
        if node.children.len() != arity {
            problems.push(format!("node {t} ({}): {} children", node.kind.name(), node.children.len()));
            continue;
        }
        match node.kind {
            NodeKind::Leaf => {
                if !node.bag.is_empty() {
                    problems.push(format!("leaf {t}: bag not empty"));
                }
            }
            NodeKind::IntroduceVertex(v) => {
                let below = child_bag(0).unwrap();
                let mut expect = below.clone();
                expect.push(v);
                expect.sort_unstable();
                if below.contains(&v) || expect != node.bag {
                    problems.push(format!("introduce {t}: bag is not child bag plus {v}"));
                }
            }
            NodeKind::Forget(v) => {
                let below = child_bag(0).unwrap();
                let mut expect = below.clone();
                expect.retain(|&x| x != v);
                if !below.contains(&v) || expect != node.bag {
                    problems.push(format!("forget {t}: bag is not child bag minus {v}"));
                }
            }
            NodeKind::IntroduceEdge(u, v) => {
                if child_bag(0).unwrap() != &node.bag {
                    problems.push(format!("introduce-edge {t}: bag differs from child"));
                }
                if node.bag.binary_search(&u).is_err() || node.bag.binary_search(&v).is_err() {
                    problems.push(format!("introduce-edge {t}: endpoint missing from bag"));
                }
                if !g.has_edge(u, v) || u >= v {
                    problems.push(format!("introduce-edge {t}: ({u},{v}) is not a graph edge"));
                }
                *introduced.entry((u, v)).or_default() += 1;
            }
            NodeKind::Join => {
                if child_bag(0).unwrap() != &node.bag || child_bag(1).unwrap() != &node.bag {
                    problems.push(format!("join {t}: child bags differ"));
                }
            }
        }
    }
    for &e in g.edges() {
        match introduced.get(&e).copied().unwrap_or(0) {
            1 => {}
            k => problems.push(format!("edge {e:?} introduced {k} times")),
        }
    }

    let max_bag = nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0);
    if max_bag.saturating_sub(1) != nd.width() {
        problems.push(format!("width {} but largest bag has {max_bag}", nd.width()));
    }
    let budget = NODE_BUDGET_FACTOR * (nd.width() + 1) * g.vertex_count().max(1);
    if nodes.len() > budget {
        problems.push(format!("{} nodes exceeds budget {budget}", nodes.len()));
    }
    let report = nd.to_tree_decomposition().validate(g);
    if !report.is_valid() {
        problems.push(format!("underlying decomposition: {report}"));
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_three() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nd = make_nice(&td, &g).unwrap();
        assert!(validate_nice(&nd, &g).is_empty());
        let edges: Vec<_> = nd
            .nodes()
            .iter()
            .filter_map(|n| match n.kind {
                NodeKind::IntroduceEdge(u, v) => Some((u, v)),
                _ => None,
            })
            .collect();
        let mut sorted = edges.clone();
        sorted.sort();
        assert_eq!(sorted, vec![(0, 1), (1, 2)]);
        assert_eq!(nd.width(), 1);
    }

    #[test]
    fn single_vertex_chain() {
        let g = Graph::empty(1);
        let td = TreeDecomposition::new(vec![vec![0]], vec![]);
        let nd = make_nice(&td, &g).unwrap();
        let kinds: Vec<_> = nd.nodes().iter().map(|n| n.kind).collect();
        assert_eq!(
            kinds,
            vec![NodeKind::Leaf, NodeKind::IntroduceVertex(0), NodeKind::Forget(0)]
        );
        assert!(validate_nice(&nd, &g).is_empty());
    }

    #[test]
    fn triangle_in_one_bag() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![]);
        let nd = make_nice(&td, &g).unwrap();
        assert!(validate_nice(&nd, &g).is_empty());
        assert_eq!(nd.kind_counts()["introduce-edge"], 3);
    }

    #[test]
    fn rejects_invalid_input() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(matches!(make_nice(&td, &g), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn redundant_bags_are_compressed() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut bags = vec![vec![0, 1], vec![1, 2]];
        let mut edges = vec![(0, 1)];
        for i in 0..50 {
            bags.push(vec![1]);
            edges.push((1, 2 + i));
        }
        let td = TreeDecomposition::new(bags, edges);
        let nd = make_nice(&td, &g).unwrap();
        assert!(validate_nice(&nd, &g).is_empty());
    }

    #[test]
    fn high_fan_in_is_binarised() {
        // Star with centre 0: one bag {0,i} per leaf, all hanging off {0}.
        let n = 7;
        let g = Graph::from_edges(n, (1..n).map(|i| (0, i))).unwrap();
        let mut bags = vec![vec![0, 1]];
        let mut edges = Vec::new();
        for i in 2..n {
            bags.push(vec![0, i]);
            edges.push((0, i - 1));
        }
        let td = TreeDecomposition::new(bags, edges);
        let nd = make_nice(&td, &g).unwrap();
        assert!(validate_nice(&nd, &g).is_empty(), "{:?}", validate_nice(&nd, &g));
        // Root bag {0,1} has n - 2 children.
        assert_eq!(nd.kind_counts()["join"], n - 3);
    }
}
