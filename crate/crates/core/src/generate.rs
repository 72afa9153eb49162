//! Seeded instance families of bounded treewidth.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so a spec
//! and seed always produce the same graph on every platform.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Tree,
    Cycle,
    Cactus,
    PartialKTree,
    RandomGnm,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tree" => Ok(Family::Tree),
            "cycle" => Ok(Family::Cycle),
            "cactus" => Ok(Family::Cactus),
            "partial-k-tree" => Ok(Family::PartialKTree),
            "random-gnm" | "gnm" => Ok(Family::RandomGnm),
            other => Err(format!("unknown family '{other}'")),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Family::Tree => "tree",
            Family::Cycle => "cycle",
            Family::Cactus => "cactus",
            Family::PartialKTree => "partial-k-tree",
            Family::RandomGnm => "random-gnm",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    /// Clique size parameter for partial k-trees.
    pub k: usize,
    /// Probability of deleting each non-initial edge of a k-tree.
    pub deletion_probability: f64,
    /// Edge count for G(n, m).
    pub m: usize,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        InstanceSpec {
            family,
            n,
            k: 2,
            deletion_probability: 0.3,
            m: n,
            seed,
        }
    }

    pub fn partial_k_tree(n: usize, k: usize, deletion_probability: f64, seed: u64) -> Self {
        InstanceSpec {
            k,
            deletion_probability,
            ..Self::new(Family::PartialKTree, n, seed)
        }
    }

    pub fn gnm(n: usize, m: usize, seed: u64) -> Self {
        InstanceSpec {
            m,
            ..Self::new(Family::RandomGnm, n, seed)
        }
    }
}

/// A generated graph, plus its planted decomposition for partial k-trees.
pub fn generate(spec: &InstanceSpec) -> Result<(Graph, Option<TreeDecomposition>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    match spec.family {
        Family::Tree => {
            let edges = (1..n).map(|v| (rng.gen_range(0..v), v));
            Ok((Graph::from_edges(n, edges)?, None))
        }
        Family::Cycle => {
            if n < 3 {
                return Err(Error::InvalidParameters(format!("a cycle needs n >= 3, got {n}")));
            }
            Ok((Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?, None))
        }
        Family::Cactus => Ok((cactus(n, &mut rng)?, None)),
        Family::PartialKTree => {
            let (g, td) = partial_k_tree(n, spec.k, spec.deletion_probability, &mut rng)?;
            Ok((g, Some(td)))
        }
        Family::RandomGnm => {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            if spec.m > pairs.len() {
                return Err(Error::InvalidParameters(format!(
                    "{} edges requested but only {} pairs exist",
                    spec.m,
                    pairs.len()
                )));
            }
            let chosen = sample(&mut rng, pairs.len(), spec.m);
            Ok((Graph::from_edges(n, chosen.into_iter().map(|i| pairs[i]))?, None))
        }
    }
}

/// Cycles of length 3..=5 and pendant edges, each glued at one existing vertex.
fn cactus(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut count = n.min(1);
    while count < n {
        let anchor = rng.gen_range(0..count);
        let room = n - count;
        let len = rng.gen_range(3..=5usize);
        if rng.gen_bool(0.6) && room >= len - 1 {
            let mut prev = anchor;
            for _ in 0..len - 1 {
                edges.push((prev, count));
                prev = count;
                count += 1;
            }
            edges.push((prev, anchor));
        } else {
            edges.push((anchor, count));
            count += 1;
        }
    }
    Graph::from_edges(n, edges)
}

/// Random k-tree grown from a (k+1)-clique, then thinned by deleting
/// non-initial edges. The growth decomposition stays valid for the subgraph.
fn partial_k_tree(
    n: usize,
    k: usize,
    deletion_probability: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(Graph, TreeDecomposition)> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParameters(format!("partial k-tree needs 1 <= k < n, got k={k}, n={n}")));
    }
    if !(0.0..=1.0).contains(&deletion_probability) {
        return Err(Error::InvalidParameters(format!(
            "deletion probability {deletion_probability} outside [0, 1]"
        )));
    }
    let mut initial = BTreeSet::new();
    for u in 0..=k {
        for v in u + 1..=k {
            initial.insert((u, v));
        }
    }
    let mut bags = vec![(0..=k).collect::<Vec<_>>()];
    let mut tree = Vec::new();
    // Every k-clique so far, with the bag it lives in.
    let mut cliques: Vec<(Vec<usize>, usize)> = (0..=k)
        .map(|skip| ((0..=k).filter(|&x| x != skip).collect(), 0))
        .collect();
    let mut grown = Vec::new();
    for v in k + 1..n {
        let (clique, bag) = cliques[rng.gen_range(0..cliques.len())].clone();
        let id = bags.len();
        let mut new_bag = clique.clone();
        new_bag.push(v);
        bags.push(new_bag);
        tree.push((bag, id));
        for &c in &clique {
            grown.push((c, v));
        }
        for skip in 0..clique.len() {
            let mut next: Vec<usize> = clique.iter().copied().enumerate().filter(|&(i, _)| i != skip).map(|(_, x)| x).collect();
            next.push(v);
            cliques.push((next, id));
        }
    }
    let kept = grown.into_iter().filter(|_| !rng.gen_bool(deletion_probability));
    let g = Graph::from_edges(n, initial.into_iter().chain(kept))?;
    Ok((g, TreeDecomposition::new(bags, tree)))
}
