//! Exact minimum VCP3 set over a nice decomposition with introduce-edge
//! nodes, in `3^width` table entries per node.
//!
//! A coloring of a bag gives each vertex one of three states:
//! in the solution, outside and isolated in `G_t - F`, or outside with
//! exactly one neighbour in `G_t - F`. `c[t, f]` is the smallest `F ⊆ V_t`
//! realising coloring `f` such that `G_t - F` has maximum degree at most 1.

use crate::coloring::{digit, insert_digit, powers, remove_digit, set_digit};
use crate::convolution::{ConvolutionMode, SetFunction, INF};
use crate::decomposition::{validate_nice, NiceDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::graph::{is_vcp3_set, Graph, VertexSet};

/// Table value for "no such set".
pub const UNREACHABLE: u32 = u32::MAX;

/// Vertex state in a VCP3 coloring; the discriminant is the base-3 digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Color3 {
    InSolution = 0,
    Isolated = 1,
    DegreeOne = 2,
}

impl Color3 {
    pub const ALL: [Color3; 3] = [Color3::InSolution, Color3::Isolated, Color3::DegreeOne];

    pub fn from_digit(d: usize) -> Color3 {
        Self::ALL[d]
    }
}

const IN: usize = Color3::InSolution as usize;
const ISO: usize = Color3::Isolated as usize;
const DEG1: usize = Color3::DegreeOne as usize;

#[inline]
fn add1(v: u32) -> u32 {
    if v == UNREACHABLE {
        v
    } else {
        v + 1
    }
}

/// Values `c[t, f]` for every coloring `f` of the bag of node `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable {
    pub node: usize,
    pub values: Vec<u32>,
}

impl DpTable {
    pub fn get(&self, coloring: usize) -> u32 {
        self.values[coloring]
    }
}

fn wrong(node: usize, expected: &'static str) -> Error {
    Error::WrongNodeKind { node, expected }
}

fn position(bag: &[usize], v: usize, node: usize) -> Result<usize> {
    bag.binary_search(&v)
        .map_err(|_| Error::InvalidDecomposition(format!("vertex {v} not in bag of node {node}")))
}

pub fn table_leaf(nd: &NiceDecomposition, t: usize) -> Result<DpTable> {
    match nd.node(t).kind {
        NodeKind::Leaf => Ok(DpTable { node: t, values: vec![0] }),
        _ => Err(wrong(t, "leaf")),
    }
}

pub fn table_introduce_vertex(nd: &NiceDecomposition, t: usize, child: &DpTable) -> Result<DpTable> {
    let node = nd.node(t);
    let NodeKind::IntroduceVertex(v) = node.kind else {
        return Err(wrong(t, "introduce-vertex"));
    };
    let pos = position(&node.bag, v, t)?;
    let pow = powers(3, node.bag.len());
    let values = (0..pow[node.bag.len()])
        .map(|f| {
            let below = child.values[remove_digit(f, pos, &pow)];
            match digit(f, pos, &pow, 3) {
                IN => add1(below),
                ISO => below,
                // v has no edges in G_t yet.
                _ => UNREACHABLE,
            }
        })
        .collect();
    Ok(DpTable { node: t, values })
}

pub fn table_introduce_edge(nd: &NiceDecomposition, t: usize, child: &DpTable) -> Result<DpTable> {
    let node = nd.node(t);
    let NodeKind::IntroduceEdge(u, v) = node.kind else {
        return Err(wrong(t, "introduce-edge"));
    };
    let (pu, pv) = (position(&node.bag, u, t)?, position(&node.bag, v, t)?);
    let pow = powers(3, node.bag.len());
    let values = (0..pow[node.bag.len()])
        .map(|f| match (digit(f, pu, &pow, 3), digit(f, pv, &pow, 3)) {
            (IN, _) | (_, IN) => child.values[f],
            (DEG1, DEG1) => {
                let g = set_digit(f, pu, ISO, &pow, 3);
                child.values[set_digit(g, pv, ISO, &pow, 3)]
            }
            _ => UNREACHABLE,
        })
        .collect();
    Ok(DpTable { node: t, values })
}

pub fn table_forget(nd: &NiceDecomposition, t: usize, child: &DpTable) -> Result<DpTable> {
    let node = nd.node(t);
    let NodeKind::Forget(v) = node.kind else {
        return Err(wrong(t, "forget"));
    };
    let child_bag = &nd.node(node.children[0]).bag;
    let pos = position(child_bag, v, t)?;
    let pow = powers(3, child_bag.len());
    let values = (0..pow[node.bag.len()])
        .map(|f| {
            (0..3)
                .map(|a| child.values[insert_digit(f, pos, a, &pow)])
                .min()
                .unwrap()
        })
        .collect();
    Ok(DpTable { node: t, values })
}

/// Coloring indices `g_T` for one slice: positions in `r_mask` colored
/// "in solution", the subset `T` of the remaining positions colored
/// "degree one", the rest "isolated". Returned in order of `T` as a mask
/// over the remaining positions.
fn slice_indices(k: usize, r_mask: usize, pow: &[usize]) -> Vec<usize> {
    let free: Vec<usize> = (0..k).filter(|&p| r_mask >> p & 1 == 0).collect();
    let base: usize = free.iter().map(|&p| ISO * pow[p]).sum();
    (0..1usize << free.len())
        .map(|tm| {
            base + free
                .iter()
                .enumerate()
                .filter(|&(i, _)| tm >> i & 1 == 1)
                .map(|(_, &p)| (DEG1 - ISO) * pow[p])
                .sum::<usize>()
        })
        .collect()
}

fn to_setfn(indices: &[usize], table: &DpTable) -> SetFunction {
    let k = indices.len().trailing_zeros() as usize;
    let values = indices
        .iter()
        .map(|&i| match table.values[i] {
            UNREACHABLE => INF,
            v => i64::from(v),
        })
        .collect();
    SetFunction::new(k, values).expect("slice has 2^k entries")
}

/// Join via one subset convolution per choice of solution vertices in the bag.
pub fn table_join(
    nd: &NiceDecomposition,
    t: usize,
    left: &DpTable,
    right: &DpTable,
    mode: ConvolutionMode,
) -> Result<DpTable> {
    let node = nd.node(t);
    if node.kind != NodeKind::Join {
        return Err(wrong(t, "join"));
    }
    let k = node.bag.len();
    for &c in &node.children {
        if nd.node(c).bag != node.bag {
            return Err(Error::InvalidDecomposition(format!("join {t}: child bags differ")));
        }
    }
    let pow = powers(3, k);
    let mut values = vec![UNREACHABLE; pow[k]];
    for r_mask in 0..1usize << k {
        let r = r_mask.count_ones();
        let indices = slice_indices(k, r_mask, &pow);
        let h1 = to_setfn(&indices, left);
        let h2 = to_setfn(&indices, right);
        let conv = mode.convolve(&h1, &h2)?;
        for (y, &idx) in indices.iter().enumerate() {
            let v = conv.get(y);
            // Each solution vertex of the bag is counted on both sides.
            values[idx] = if v == INF { UNREACHABLE } else { (v - i64::from(r)) as u32 };
        }
    }
    Ok(DpTable { node: t, values })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub convolution: ConvolutionMode,
    /// Evaluate sibling subtrees concurrently (on the current rayon pool).
    pub parallel: bool,
}

/// Computes the table of node `t` from its children's tables.
pub fn table_for(nd: &NiceDecomposition, t: usize, children: &[&DpTable], mode: ConvolutionMode) -> Result<DpTable> {
    match nd.node(t).kind {
        NodeKind::Leaf => table_leaf(nd, t),
        NodeKind::IntroduceVertex(_) => table_introduce_vertex(nd, t, children[0]),
        NodeKind::IntroduceEdge(..) => table_introduce_edge(nd, t, children[0]),
        NodeKind::Forget(_) => table_forget(nd, t, children[0]),
        NodeKind::Join => table_join(nd, t, children[0], children[1], mode),
    }
}

/// Every node's table, indexed by node id.
pub fn compute_tables(nd: &NiceDecomposition, opts: SolveOptions) -> Result<Vec<DpTable>> {
    let out = evaluate(nd, true, opts.parallel, |t, kids| table_for(nd, t, kids, opts.convolution))?;
    let root_id = nd.root();
    let mut root = Some(out.root);
    Ok(out
        .tables
        .into_iter()
        .enumerate()
        .map(|(t, table)| if t == root_id { root.take().unwrap() } else { table.unwrap() })
        .collect())
}

/// Minimum VCP3 size only; child tables are released as soon as possible.
pub fn min_vcp3_size(nd: &NiceDecomposition, opts: SolveOptions) -> Result<u32> {
    let out = evaluate(nd, false, opts.parallel, |t, kids| table_for(nd, t, kids, opts.convolution))?;
    Ok(out.root.values[0])
}

/// Rebuilds a set realising `c[t, f]` by walking back through the tables.
/// Ties are broken toward the smallest child coloring index.
pub fn certificate(nd: &NiceDecomposition, tables: &[DpTable], t: usize, f: usize) -> Option<VertexSet> {
    if tables[t].values[f] == UNREACHABLE {
        return None;
    }
    let mut chosen = VertexSet::new();
    let mut stack = vec![(t, f)];
    while let Some((t, f)) = stack.pop() {
        let node = nd.node(t);
        let pow = powers(3, node.bag.len() + 1);
        match node.kind {
            NodeKind::Leaf => {}
            NodeKind::IntroduceVertex(v) => {
                let pos = node.bag.binary_search(&v).ok()?;
                if digit(f, pos, &pow, 3) == IN {
                    chosen.insert(v);
                }
                stack.push((node.children[0], remove_digit(f, pos, &pow)));
            }
            NodeKind::IntroduceEdge(u, v) => {
                let (pu, pv) = (node.bag.binary_search(&u).ok()?, node.bag.binary_search(&v).ok()?);
                let child_f = match (digit(f, pu, &pow, 3), digit(f, pv, &pow, 3)) {
                    (IN, _) | (_, IN) => f,
                    (DEG1, DEG1) => set_digit(set_digit(f, pu, ISO, &pow, 3), pv, ISO, &pow, 3),
                    _ => return None,
                };
                stack.push((node.children[0], child_f));
            }
            NodeKind::Forget(v) => {
                let c = node.children[0];
                let pos = nd.node(c).bag.binary_search(&v).ok()?;
                let want = tables[t].values[f];
                let child_f = (0..3)
                    .map(|a| insert_digit(f, pos, a, &pow))
                    .find(|&g| tables[c].values[g] == want)?;
                stack.push((c, child_f));
            }
            NodeKind::Join => {
                let (c1, c2) = (node.children[0], node.children[1]);
                let k = node.bag.len();
                let mut r_mask = 0;
                let mut y_mask = 0;
                let mut free = Vec::new();
                for p in 0..k {
                    match digit(f, p, &pow, 3) {
                        IN => r_mask |= 1 << p,
                        d => {
                            if d == DEG1 {
                                y_mask |= 1 << free.len();
                            }
                            free.push(p);
                        }
                    }
                }
                let indices = slice_indices(k, r_mask, &pow);
                let target = u64::from(tables[t].values[f]) + u64::from(r_mask.count_ones());
                let mut best: Option<(usize, usize)> = None;
                let mut a = y_mask;
                loop {
                    let (i1, i2) = (indices[a], indices[y_mask ^ a]);
                    let (v1, v2) = (tables[c1].values[i1], tables[c2].values[i2]);
                    if v1 != UNREACHABLE && v2 != UNREACHABLE && u64::from(v1) + u64::from(v2) == target {
                        best = Some(best.map_or((i1, i2), |b| b.min((i1, i2))));
                    }
                    if a == 0 {
                        break;
                    }
                    a = (a - 1) & y_mask;
                }
                let (i1, i2) = best?;
                stack.push((c1, i1));
                stack.push((c2, i2));
            }
        }
    }
    Some(chosen)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vcp3Solution {
    pub size: usize,
    pub witness: VertexSet,
}

/// Minimum VCP3 set of `g` together with an optimal witness.
pub fn solve_vcp3(g: &Graph, nd: &NiceDecomposition, opts: SolveOptions) -> Result<Vcp3Solution> {
    let problems = validate_nice(nd, g);
    if !problems.is_empty() {
        return Err(Error::InvalidDecomposition(problems.join("; ")));
    }
    if g.max_degree() <= 1 {
        return Ok(Vcp3Solution {
            size: 0,
            witness: VertexSet::new(),
        });
    }
    let tables = compute_tables(nd, opts)?;
    let root = nd.root();
    let size = tables[root].values[0];
    let witness = certificate(nd, &tables, root, 0)
        .ok_or_else(|| Error::InvalidDecomposition("backtracking failed".into()))?;
    debug_assert!(is_vcp3_set(g, &witness));
    debug_assert_eq!(witness.len(), size as usize);
    Ok(Vcp3Solution {
        size: size as usize,
        witness,
    })
}
