//! Cut&Count for the connected variant with a required vertex set `S`.
//!
//! Instead of counting connected solutions, the dynamic program counts
//! pairs `(F, (F1, F2))` where `F ⊇ S` is a VCP3 set and `(F1, F2)` is a
//! cut of `F` with no edge of `G[F]` crossing it and a fixed vertex `v1`
//! on side one. A set whose induced graph has `c` components admits
//! `2^(c-1)` such cuts, so modulo 2 only connected sets survive. Random
//! vertex weights make a minimum-weight solution unique with probability at
//! least 1/2, which turns the parity into a one-sided decision procedure.
//!
//! Tables are indexed by (size `i`, weight `w`, coloring `f`) and hold only
//! the parity bit. For each coloring, the bits form `max_size + 1` rows,
//! each a little-endian bitset over weights `0..=max_weight`, so a table is
//! a bivariate polynomial over GF(2) per coloring; join nodes multiply them.
//!
//! # Randomness
//!
//! Repetition `r` of a run with seed `s` draws its weights from
//! `ChaCha8Rng::seed_from_u64(s)` with the stream set to `r`: vertex
//! `0, 1, .., n-1` in order each receive `gen_range(1..=2n)`. The stream
//! split makes repetitions independent of evaluation order, and ChaCha8
//! output is identical across platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coloring::{digit, insert_digit, powers, remove_digit, set_digit};
use crate::decomposition::{validate_nice, NiceDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::graph::{is_vcp3_set, Graph, VertexSet};

/// Vertex state in a Cut&Count coloring; the discriminant is the base-4 digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Color4 {
    /// In the solution, on side one of the cut.
    Side1 = 0,
    /// In the solution, on side two of the cut.
    Side2 = 1,
    /// Outside the solution, no neighbours in `G_t - F`.
    Isolated = 2,
    /// Outside the solution, exactly one neighbour in `G_t - F`.
    DegreeOne = 3,
}

const S1: usize = Color4::Side1 as usize;
const S2: usize = Color4::Side2 as usize;
const ISO: usize = Color4::Isolated as usize;
const DEG1: usize = Color4::DegreeOne as usize;

/// Vertex weights in `1..=2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    weights: Vec<u64>,
}

impl WeightAssignment {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        let cap = 2 * weights.len() as u64;
        if let Some(&w) = weights.iter().find(|&&w| w == 0 || w > cap) {
            return Err(Error::InvalidParameters(format!("weight {w} outside 1..={cap}")));
        }
        Ok(WeightAssignment { weights })
    }

    /// Weights for repetition `repetition` of a run seeded with `seed`.
    pub fn draw(n: usize, seed: u64, repetition: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(repetition);
        Self::random(n, &mut rng)
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let cap = 2 * n as u64;
        WeightAssignment {
            weights: (0..n).map(|_| rng.gen_range(1..=cap)).collect(),
        }
    }

    pub fn get(&self, v: usize) -> u64 {
        self.weights[v]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.weights
    }

    pub fn total(&self, set: &VertexSet) -> u64 {
        set.iter().map(|v| self.weights[v]).sum()
    }
}

/// Size and weight ranges kept in the tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountBounds {
    pub max_size: usize,
    pub max_weight: usize,
}

impl CountBounds {
    /// The whole range: sizes up to `n`, weights up to `2n * n`.
    pub fn full(n: usize) -> Self {
        CountBounds {
            max_size: n,
            max_weight: 2 * n * n,
        }
    }

    /// Enough for every set of at most `k` vertices (each weighs at most `2n`).
    pub fn for_budget(n: usize, k: usize) -> Self {
        CountBounds {
            max_size: k.min(n),
            max_weight: 2 * n * k.min(n),
        }
    }

    fn rows(&self) -> usize {
        self.max_size + 1
    }

    fn words(&self) -> usize {
        (self.max_weight + 1).div_ceil(64)
    }

    fn block(&self) -> usize {
        self.rows() * self.words()
    }

    /// Mask for the last word of each row.
    fn tail_mask(&self) -> u64 {
        match (self.max_weight + 1) % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }
}

/// Parity of `A_t(i, w, f)` for every size, weight, and coloring of node `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub node: usize,
    bounds: CountBounds,
    colorings: usize,
    bits: Vec<u64>,
}

impl CountTable {
    /// All-zero table.
    pub fn zeroed(node: usize, bounds: CountBounds, colorings: usize) -> Self {
        CountTable {
            node,
            bounds,
            colorings,
            bits: vec![0; colorings * bounds.block()],
        }
    }

    pub fn bounds(&self) -> CountBounds {
        self.bounds
    }

    /// `(sizes, weights, colorings)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.bounds.max_size + 1, self.bounds.max_weight + 1, self.colorings)
    }

    /// Number of parity entries.
    pub fn len(&self) -> usize {
        let (a, b, c) = self.dims();
        a * b * c
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, size: usize, weight: usize, coloring: usize) -> bool {
        if size > self.bounds.max_size || weight > self.bounds.max_weight {
            return false;
        }
        let words = self.bounds.words();
        let word = self.block(coloring)[size * words + weight / 64];
        word >> (weight % 64) & 1 == 1
    }

    pub fn set(&mut self, size: usize, weight: usize, coloring: usize, value: bool) {
        let words = self.bounds.words();
        let block = self.bounds.block();
        let word = &mut self.bits[coloring * block + size * words + weight / 64];
        let bit = 1u64 << (weight % 64);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    /// All `(size, weight)` pairs with odd count for `coloring`.
    pub fn odd_entries(&self, coloring: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..=self.bounds.max_size {
            for w in 0..=self.bounds.max_weight {
                if self.get(i, w, coloring) {
                    out.push((i, w));
                }
            }
        }
        out
    }

    fn block(&self, coloring: usize) -> &[u64] {
        let b = self.bounds.block();
        &self.bits[coloring * b..(coloring + 1) * b]
    }

    fn block_mut(&mut self, coloring: usize) -> &mut [u64] {
        let b = self.bounds.block();
        &mut self.bits[coloring * b..(coloring + 1) * b]
    }
}

/// `dst ^= src` shifted up by `shift` weight positions (down if negative),
/// dropping anything outside `0..=max_weight`.
#[allow(clippy::needless_range_loop)]
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: isize, tail: u64) {
    let len = dst.len();
    let ws = shift.unsigned_abs() / 64;
    let bs = (shift.unsigned_abs() % 64) as u32;
    for j in 0..len {
        let word = if shift >= 0 {
            if j < ws {
                continue;
            }
            let lo = j - ws;
            let mut v = src[lo] << bs;
            if bs > 0 && lo > 0 {
                v |= src[lo - 1] >> (64 - bs);
            }
            v
        } else {
            let hi = j + ws;
            if hi >= len {
                break;
            }
            let mut v = src[hi] >> bs;
            if bs > 0 && hi + 1 < len {
                v |= src[hi + 1] << (64 - bs);
            }
            v
        };
        dst[j] ^= if j + 1 == len { word & tail } else { word };
    }
}

/// `dst += x^(-di) y^(-dw) * a * b` over GF(2), truncated to the bounds.
fn mul_into(dst: &mut [u64], a: &[u64], b: &[u64], bounds: &CountBounds, di: usize, dw: usize) {
    let rows = bounds.rows();
    let words = bounds.words();
    let tail = bounds.tail_mask();
    let b_rows: Vec<usize> = (0..rows)
        .filter(|&i| b[i * words..(i + 1) * words].iter().any(|&x| x != 0))
        .collect();
    if b_rows.is_empty() {
        return;
    }
    for i1 in 0..rows {
        let row = &a[i1 * words..(i1 + 1) * words];
        for (wi, &word) in row.iter().enumerate() {
            let mut bitsleft = word;
            while bitsleft != 0 {
                let w1 = wi * 64 + bitsleft.trailing_zeros() as usize;
                bitsleft &= bitsleft - 1;
                let shift = w1 as isize - dw as isize;
                for &i2 in &b_rows {
                    let total = i1 + i2;
                    if total < di {
                        continue;
                    }
                    let i = total - di;
                    if i >= rows {
                        break;
                    }
                    let (dst_row, src_row) = (
                        &mut dst[i * words..(i + 1) * words],
                        &b[i2 * words..(i2 + 1) * words],
                    );
                    xor_shifted(dst_row, src_row, shift, tail);
                }
            }
        }
    }
}

/// How join nodes combine their children's tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinMethod {
    /// Every consistent pair of child colorings, multiplied directly.
    PairLoop,
    /// Fix the in-solution part of the coloring, then a ranked zeta/Möbius
    /// subset convolution over the degree-one vertices.
    Transform,
    /// Transform once at least `threshold` bag vertices are outside the solution.
    Auto { threshold: usize },
}

impl Default for JoinMethod {
    fn default() -> Self {
        JoinMethod::Auto { threshold: 8 }
    }
}

/// Everything a node step needs besides the child tables.
#[derive(Clone, Copy, Debug)]
pub struct CountContext<'a> {
    pub nd: &'a NiceDecomposition,
    /// Membership in `S ∪ {v1}`, indexed by vertex.
    pub required: &'a [bool],
    pub v1: usize,
    pub weights: &'a WeightAssignment,
    pub bounds: CountBounds,
    pub join: JoinMethod,
}

fn wrong(node: usize, expected: &'static str) -> Error {
    Error::WrongNodeKind { node, expected }
}

fn position(bag: &[usize], v: usize, node: usize) -> Result<usize> {
    bag.binary_search(&v)
        .map_err(|_| Error::InvalidDecomposition(format!("vertex {v} not in bag of node {node}")))
}

pub fn count_leaf(cx: &CountContext, t: usize) -> Result<CountTable> {
    if cx.nd.node(t).kind != NodeKind::Leaf {
        return Err(wrong(t, "leaf"));
    }
    let mut table = CountTable::zeroed(t, cx.bounds, 1);
    table.set(0, 0, 0, true);
    Ok(table)
}

pub fn count_introduce_vertex(cx: &CountContext, t: usize, child: &CountTable) -> Result<CountTable> {
    let node = cx.nd.node(t);
    let NodeKind::IntroduceVertex(v) = node.kind else {
        return Err(wrong(t, "introduce-vertex"));
    };
    let pos = position(&node.bag, v, t)?;
    let pow = powers(4, node.bag.len());
    let mut table = CountTable::zeroed(t, cx.bounds, pow[node.bag.len()]);
    let words = cx.bounds.words();
    let tail = cx.bounds.tail_mask();
    let wv = cx.weights.get(v) as isize;
    for f in 0..table.colorings {
        let below = child.block(remove_digit(f, pos, &pow));
        let dst = table.block_mut(f);
        match digit(f, pos, &pow, 4) {
            S2 if v == cx.v1 => {}
            S1 | S2 => {
                // One more vertex of weight w(v).
                for i in 1..cx.bounds.rows() {
                    xor_shifted(
                        &mut dst[i * words..(i + 1) * words],
                        &below[(i - 1) * words..i * words],
                        wv,
                        tail,
                    );
                }
            }
            ISO => dst.copy_from_slice(below),
            _ => {}
        }
    }
    Ok(table)
}

pub fn count_introduce_edge(cx: &CountContext, t: usize, child: &CountTable) -> Result<CountTable> {
    let node = cx.nd.node(t);
    let NodeKind::IntroduceEdge(u, v) = node.kind else {
        return Err(wrong(t, "introduce-edge"));
    };
    let (pu, pv) = (position(&node.bag, u, t)?, position(&node.bag, v, t)?);
    let pow = powers(4, node.bag.len());
    let mut table = CountTable::zeroed(t, cx.bounds, pow[node.bag.len()]);
    let touches_v1 = u == cx.v1 || v == cx.v1;
    for f in 0..table.colorings {
        let source = match (digit(f, pu, &pow, 4), digit(f, pv, &pow, 4)) {
            // The edge would cross the cut.
            (S1, S2) | (S2, S1) => None,
            // Redundant with the introduce-vertex rule for v1, kept as stated.
            (S2, S2) if touches_v1 => None,
            (ISO, ISO) | (ISO, DEG1) | (DEG1, ISO) => None,
            (DEG1, DEG1) => Some(set_digit(set_digit(f, pu, ISO, &pow, 4), pv, ISO, &pow, 4)),
            _ => Some(f),
        };
        if let Some(g) = source {
            table.block_mut(f).copy_from_slice(child.block(g));
        }
    }
    Ok(table)
}

pub fn count_forget(cx: &CountContext, t: usize, child: &CountTable) -> Result<CountTable> {
    let node = cx.nd.node(t);
    let NodeKind::Forget(v) = node.kind else {
        return Err(wrong(t, "forget"));
    };
    let child_bag = &cx.nd.node(node.children[0]).bag;
    let pos = position(child_bag, v, t)?;
    let pow = powers(4, child_bag.len());
    let mut table = CountTable::zeroed(t, cx.bounds, pow[node.bag.len()]);
    // A required vertex must end up in the solution.
    let colors: &[usize] = if cx.required[v] { &[S1, S2] } else { &[S1, S2, ISO, DEG1] };
    for f in 0..table.colorings {
        let dst = table.block_mut(f);
        for &a in colors {
            for (d, s) in dst.iter_mut().zip(child.block(insert_digit(f, pos, a, &pow))) {
                *d ^= s;
            }
        }
    }
    Ok(table)
}

fn join_shift(cx: &CountContext, bag: &[usize], in_solution: impl Iterator<Item = usize>) -> (usize, usize) {
    let mut count = 0;
    let mut weight = 0;
    for p in in_solution {
        count += 1;
        weight += cx.weights.get(bag[p]) as usize;
    }
    (count, weight)
}

pub fn count_join(cx: &CountContext, t: usize, left: &CountTable, right: &CountTable) -> Result<CountTable> {
    let node = cx.nd.node(t);
    if node.kind != NodeKind::Join {
        return Err(wrong(t, "join"));
    }
    for &c in &node.children {
        if cx.nd.node(c).bag != node.bag {
            return Err(Error::InvalidDecomposition(format!("join {t}: child bags differ")));
        }
    }
    let k = node.bag.len();
    let pow = powers(4, k);
    let mut table = CountTable::zeroed(t, cx.bounds, pow[k]);
    for one_mask in 0..1usize << k {
        let zeros = k - one_mask.count_ones() as usize;
        let transform = match cx.join {
            JoinMethod::PairLoop => false,
            JoinMethod::Transform => true,
            JoinMethod::Auto { threshold } => zeros >= threshold,
        };
        // Each in-solution vertex independently on side one or two.
        let mut side = 0usize;
        loop {
            join_slice(cx, &node.bag, one_mask, side, transform, left, right, &mut table, &pow);
            if side == one_mask {
                break;
            }
            side = (side.wrapping_sub(one_mask)) & one_mask;
        }
    }
    Ok(table)
}

/// Handles all parent colorings whose in-solution positions are `one_mask`
/// with side-two positions `side2`.
#[allow(clippy::too_many_arguments)]
fn join_slice(
    cx: &CountContext,
    bag: &[usize],
    one_mask: usize,
    side2: usize,
    transform: bool,
    left: &CountTable,
    right: &CountTable,
    out: &mut CountTable,
    pow: &[usize],
) {
    let k = bag.len();
    let (di, dw) = join_shift(cx, bag, (0..k).filter(|&p| one_mask >> p & 1 == 1));
    let free: Vec<usize> = (0..k).filter(|&p| one_mask >> p & 1 == 0).collect();
    let base: usize = (0..k)
        .map(|p| {
            let d = if one_mask >> p & 1 == 0 {
                ISO
            } else if side2 >> p & 1 == 1 {
                S2
            } else {
                S1
            };
            d * pow[p]
        })
        .sum();
    let index = |tm: usize| -> usize {
        base + free
            .iter()
            .enumerate()
            .filter(|&(i, _)| tm >> i & 1 == 1)
            .map(|(_, &p)| (DEG1 - ISO) * pow[p])
            .sum::<usize>()
    };
    let z = free.len();
    let full = 1usize << z;
    let indices: Vec<usize> = (0..full).map(index).collect();
    let block = cx.bounds.block();

    if !transform {
        for y in 0..full {
            let dst = out.block_mut(indices[y]);
            let mut a = y;
            loop {
                mul_into(dst, left.block(indices[a]), right.block(indices[y ^ a]), &cx.bounds, di, dw);
                if a == 0 {
                    break;
                }
                a = (a - 1) & y;
            }
        }
        return;
    }

    // Ranked subset-sum transforms; over GF(2) the inverse is the same map.
    let ranked = |table: &CountTable| -> Vec<Vec<u64>> {
        let mut layers = vec![vec![0u64; full * block]; z + 1];
        for (tm, &idx) in indices.iter().enumerate() {
            let r = tm.count_ones() as usize;
            layers[r][tm * block..(tm + 1) * block].copy_from_slice(table.block(idx));
        }
        for layer in &mut layers {
            subset_xor_transform(layer, z, block);
        }
        layers
    };
    let l = ranked(left);
    let r = ranked(right);
    let mut prod = vec![0u64; full * block];
    for rank in 0..=z {
        prod.iter_mut().for_each(|w| *w = 0);
        for j in 0..=rank {
            for x in 0..full {
                let range = x * block..(x + 1) * block;
                mul_into(
                    &mut prod[range.clone()],
                    &l[j][range.clone()],
                    &r[rank - j][range],
                    &cx.bounds,
                    di,
                    dw,
                );
            }
        }
        subset_xor_transform(&mut prod, z, block);
        for (y, &idx) in indices.iter().enumerate() {
            if y.count_ones() as usize == rank {
                out.block_mut(idx).copy_from_slice(&prod[y * block..(y + 1) * block]);
            }
        }
    }
}

fn subset_xor_transform(data: &mut [u64], z: usize, block: usize) {
    for bit in 0..z {
        let step = 1usize << bit;
        for mask in 0..1usize << z {
            if mask & step != 0 {
                let (lo, hi) = data.split_at_mut(mask * block);
                let src = &lo[(mask ^ step) * block..((mask ^ step) + 1) * block];
                for (d, &s) in hi[..block].iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
    }
}

pub fn count_table_for(cx: &CountContext, t: usize, children: &[&CountTable]) -> Result<CountTable> {
    match cx.nd.node(t).kind {
        NodeKind::Leaf => count_leaf(cx, t),
        NodeKind::IntroduceVertex(_) => count_introduce_vertex(cx, t, children[0]),
        NodeKind::IntroduceEdge(..) => count_introduce_edge(cx, t, children[0]),
        NodeKind::Forget(_) => count_forget(cx, t, children[0]),
        NodeKind::Join => count_join(cx, t, children[0], children[1]),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountOptions {
    pub join: JoinMethod,
    /// Evaluate subtrees and repetitions concurrently on the current rayon pool.
    pub parallel: bool,
}

fn required_mask(n: usize, s: &VertexSet, v1: usize) -> Vec<bool> {
    let mut req = s.indicator(n);
    req[v1] = true;
    req
}

/// Root table (empty bag, one coloring) of the parity program within `bounds`.
pub fn root_parities(
    nd: &NiceDecomposition,
    required: &[bool],
    v1: usize,
    weights: &WeightAssignment,
    bounds: CountBounds,
    opts: CountOptions,
) -> Result<CountTable> {
    let cx = CountContext {
        nd,
        required,
        v1,
        weights,
        bounds,
        join: opts.join,
    };
    Ok(evaluate(nd, false, opts.parallel, |t, kids| count_table_for(&cx, t, kids))?.root)
}

/// Root parity table over the full size and weight range. `v1` is treated
/// as a member of `s`.
pub fn count_parity_tables(
    g: &Graph,
    nd: &NiceDecomposition,
    s: &VertexSet,
    v1: usize,
    weights: &WeightAssignment,
    opts: CountOptions,
) -> Result<CountTable> {
    let n = g.vertex_count();
    if v1 >= n {
        return Err(Error::VertexOutOfRange { vertex: v1, vertex_count: n });
    }
    check_inputs(g, nd, s, weights)?;
    root_parities(nd, &required_mask(n, s, v1), v1, weights, CountBounds::full(n), opts)
}

/// Like [`count_parity_tables`] but returns every node's table, indexed by node.
pub fn count_all_tables(
    g: &Graph,
    nd: &NiceDecomposition,
    s: &VertexSet,
    v1: usize,
    weights: &WeightAssignment,
    opts: CountOptions,
) -> Result<Vec<CountTable>> {
    let n = g.vertex_count();
    if v1 >= n {
        return Err(Error::VertexOutOfRange { vertex: v1, vertex_count: n });
    }
    check_inputs(g, nd, s, weights)?;
    let required = required_mask(n, s, v1);
    let cx = CountContext {
        nd,
        required: &required,
        v1,
        weights,
        bounds: CountBounds::full(n),
        join: opts.join,
    };
    let done = evaluate(nd, true, opts.parallel, |t, kids| count_table_for(&cx, t, kids))?;
    let mut tables = done.tables;
    tables[nd.root()] = Some(done.root);
    Ok(tables.into_iter().map(|t| t.expect("all tables kept")).collect())
}

fn check_inputs(g: &Graph, nd: &NiceDecomposition, s: &VertexSet, weights: &WeightAssignment) -> Result<()> {
    let n = g.vertex_count();
    if let Some(v) = s.iter().find(|&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, vertex_count: n });
    }
    if weights.as_slice().len() != n {
        return Err(Error::InvalidParameters(format!(
            "{} weights for {n} vertices",
            weights.as_slice().len()
        )));
    }
    let problems = validate_nice(nd, g);
    if !problems.is_empty() {
        return Err(Error::InvalidDecomposition(problems.join("; ")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Yes,
    No,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Yes => "YES",
            Decision::No => "NO",
        })
    }
}

/// Cases settled without counting: `Some(answer)` or `None` to keep going.
fn settle_trivially(g: &Graph, s: &VertexSet, k: usize) -> Option<Decision> {
    if s.is_empty() && is_vcp3_set(g, &VertexSet::new()) {
        return Some(Decision::Yes);
    }
    if k < s.len().max(1) {
        return Some(Decision::No);
    }
    None
}

/// One weight draw: is there an odd entry at some size `|S|..=k`?
/// Sound for every weight assignment: `true` implies a connected VCP3 set
/// of size at most `k` containing `s` exists.
pub fn decide_with_weights(
    g: &Graph,
    nd: &NiceDecomposition,
    s: &VertexSet,
    k: usize,
    weights: &WeightAssignment,
    opts: CountOptions,
) -> Result<bool> {
    check_inputs(g, nd, s, weights)?;
    if let Some(d) = settle_trivially(g, s, k) {
        return Ok(d == Decision::Yes);
    }
    Ok(first_odd_size(g, nd, s, k, weights, opts)?.is_some())
}

/// Smallest size `<= k` with an odd root entry, over all choices of `v1`.
fn first_odd_size(
    g: &Graph,
    nd: &NiceDecomposition,
    s: &VertexSet,
    k: usize,
    weights: &WeightAssignment,
    opts: CountOptions,
) -> Result<Option<usize>> {
    let n = g.vertex_count();
    let bounds = CountBounds::for_budget(n, k);
    // With S empty, each vertex in turn plays the fixed vertex.
    let anchors: Vec<usize> = match s.first() {
        Some(v) => vec![v],
        None => g.vertices().collect(),
    };
    let mut best: Option<usize> = None;
    for v1 in anchors {
        let required = required_mask(n, s, v1);
        let root = root_parities(nd, &required, v1, weights, bounds, opts)?;
        let lowest = (s.len().max(1)..=bounds.max_size)
            .find(|&i| (0..=bounds.max_weight).any(|w| root.get(i, w, 0)));
        if let Some(i) = lowest {
            best = Some(best.map_or(i, |b: usize| b.min(i)));
        }
    }
    Ok(best)
}

/// Monte Carlo decision: is there a VCP3 set `F ⊇ s`, `|F| <= k`, with
/// `G[F]` connected? `Yes` is always correct; a `No` on a yes-instance
/// happens with probability at most `2^-repetitions`.
///
/// When `s` is empty and `G` already has maximum degree at most one, the
/// empty set is accepted as a solution.
#[allow(clippy::too_many_arguments)]
pub fn decide_constrained_cvcp3(
    g: &Graph,
    nd: &NiceDecomposition,
    s: &VertexSet,
    k: usize,
    seed: u64,
    repetitions: usize,
    opts: CountOptions,
) -> Result<Decision> {
    if repetitions == 0 {
        return Err(Error::InvalidParameters("at least one repetition is required".into()));
    }
    let n = g.vertex_count();
    check_inputs(g, nd, s, &WeightAssignment::draw(n, seed, 0))?;
    if let Some(d) = settle_trivially(g, s, k) {
        return Ok(d);
    }
    let run = |rep: usize| -> Result<bool> {
        let w = WeightAssignment::draw(n, seed, rep as u64);
        Ok(first_odd_size(g, nd, s, k, &w, opts)?.is_some())
    };
    let yes = if opts.parallel {
        (0..repetitions)
            .into_par_iter()
            .map(run)
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .any(|b| b)
    } else {
        let mut found = false;
        for rep in 0..repetitions {
            if run(rep)? {
                found = true;
                break;
            }
        }
        found
    };
    Ok(if yes { Decision::Yes } else { Decision::No })
}

/// Smallest `k` for which [`decide_constrained_cvcp3`] answers `Yes`, or
/// `None` if it never does for `k <= n`.
pub fn minimize_cvcp3(
    g: &Graph,
    nd: &NiceDecomposition,
    s: &VertexSet,
    seed: u64,
    repetitions: usize,
    opts: CountOptions,
) -> Result<Option<usize>> {
    let n = g.vertex_count();
    if s.is_empty() && is_vcp3_set(g, &VertexSet::new()) {
        return Ok(Some(0));
    }
    // Required vertices in different components can never be joined.
    let components = g.components();
    if let Some(first) = s.first() {
        let home = components.iter().find(|c| c.binary_search(&first).is_ok()).unwrap();
        if s.iter().any(|v| home.binary_search(&v).is_err()) {
            check_inputs(g, nd, s, &WeightAssignment::draw(n, seed, 0))?;
            return Ok(None);
        }
    }
    for k in s.len().max(1)..=n {
        if decide_constrained_cvcp3(g, nd, s, k, seed, repetitions, opts)? == Decision::Yes {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
