use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::graph::Graph;

/// Greedy elimination rule used to build a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Eliminate a vertex of smallest current degree.
    MinDegree,
    /// Eliminate a vertex whose neighbourhood needs the fewest fill edges.
    MinFill,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-degree" => Ok(Strategy::MinDegree),
            "min-fill" => Ok(Strategy::MinFill),
            other => Err(format!("unknown heuristic '{other}'")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::MinDegree => "min-degree",
            Strategy::MinFill => "min-fill",
        })
    }
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Computes an elimination ordering greedily; ties go to the smallest id.
pub fn elimination_order(g: &Graph, strategy: Strategy) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let score = |v: usize| match strategy {
            Strategy::MinDegree => adj[v].len(),
            Strategy::MinFill => fill_in(&adj, v),
        };
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (score(v), adj[v].len(), v))
            .expect("a live vertex remains");
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Tree decomposition induced by an elimination ordering: one bag per
/// vertex holding it and its later neighbours in the filled graph.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::new(Vec::new(), Vec::new());
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > i).collect();
        for (j, &a) in later.iter().enumerate() {
            for &b in &later[j + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[i] = later.iter().map(|&u| pos[u]).min();
        let mut bag = later;
        bag.push(v);
        bags.push(bag);
    }
    // Component roots hang off the last bag so the forest becomes one tree.
    let root = n - 1;
    let edges = (0..n)
        .filter(|&i| i != root)
        .map(|i| (i, parent[i].unwrap_or(root)))
        .collect();
    TreeDecomposition::new(bags, edges).with_root(root)
}

pub fn heuristic_decompose(g: &Graph, strategy: Strategy) -> TreeDecomposition {
    decomposition_from_order(g, &elimination_order(g, strategy))
}
