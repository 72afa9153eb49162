#![allow(dead_code)]

use vcp3::decomposition::{heuristic_decompose, make_nice, NiceDecomposition, Strategy};
use vcp3::generate::{generate, Family, InstanceSpec};
use vcp3::Graph;

pub fn nice(g: &Graph) -> NiceDecomposition {
    make_nice(&heuristic_decompose(g, Strategy::MinFill), g).unwrap()
}

/// A mixed bag of small instances: trees, cycles, cacti, partial k-trees
/// with k in 1..=4, and G(n, m), with `n <= max_n`.
pub fn corpus(count: u64, max_n: usize, base_seed: u64) -> Vec<(String, Graph)> {
    (0..count)
        .map(|i| {
            let seed = base_seed + i;
            let n = 3 + (seed as usize * 7) % (max_n - 2);
            let family = [Family::Tree, Family::Cycle, Family::Cactus, Family::PartialKTree, Family::RandomGnm]
                [i as usize % 5];
            let spec = match family {
                Family::PartialKTree => {
                    let k = 1 + (seed as usize / 5) % 4;
                    InstanceSpec::partial_k_tree(n.max(k + 1), k, 0.3, seed)
                }
                Family::RandomGnm => InstanceSpec::gnm(n, (n * 3 / 2).min(n * (n - 1) / 2), seed),
                _ => InstanceSpec::new(family, n, seed),
            };
            let (g, _) = generate(&spec).unwrap();
            (format!("{family} n={} seed={seed}", spec.n), g)
        })
        .collect()
}
