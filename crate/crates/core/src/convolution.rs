//! Min-plus subset convolution of set functions.
//!
//! `(g * h)(Y) = min { g(A) + h(B) : A ∪ B = Y, A ∩ B = ∅ }`.
//!
//! [`convolve_naive`] enumerates all `3^k` disjoint pairs and is kept as the
//! reference. [`convolve_fast`] embeds each finite value `v` as the monomial
//! `x^v` (and infinity as zero), runs ranked zeta / Möbius transforms over
//! the resulting polynomial ring, and reads off the lowest degree with a
//! nonzero coefficient. Coefficients count disjoint pairs, so they are at
//! most `3^k < 2^64`; arithmetic is done in `Z / 2^64` (wrapping `u64`),
//! which is exact for any count below `2^64` and therefore never loses a
//! nonzero coefficient.

use crate::error::{Error, Result};

/// Absorbing "no solution" value.
pub const INF: i64 = i64::MAX;

/// Largest ground set a [`SetFunction`] may have.
pub const MAX_GROUND_SIZE: usize = 24;

#[inline]
pub fn sat_add(a: i64, b: i64) -> i64 {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

/// A function from subsets of `{0..ground_size}` (as bit masks) to
/// `Z ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    ground_size: usize,
    values: Vec<i64>,
}

impl SetFunction {
    pub fn new(ground_size: usize, values: Vec<i64>) -> Result<Self> {
        if ground_size > MAX_GROUND_SIZE {
            return Err(Error::InvalidParameters(format!(
                "ground size {ground_size} exceeds {MAX_GROUND_SIZE}"
            )));
        }
        if values.len() != 1 << ground_size {
            return Err(Error::InvalidParameters(format!(
                "{} values for a ground set of size {ground_size}",
                values.len()
            )));
        }
        Ok(SetFunction { ground_size, values })
    }

    pub fn constant(ground_size: usize, value: i64) -> Self {
        SetFunction {
            ground_size,
            values: vec![value; 1 << ground_size],
        }
    }

    /// The min-plus unit: 0 on the empty set, ∞ elsewhere.
    pub fn identity(ground_size: usize) -> Self {
        let mut f = Self::constant(ground_size, INF);
        f.values[0] = 0;
        f
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, mask: usize) -> i64 {
        self.values[mask]
    }
}

fn check_sizes(g: &SetFunction, h: &SetFunction) -> Result<()> {
    if g.ground_size != h.ground_size {
        return Err(Error::GroundSizeMismatch {
            left: g.ground_size,
            right: h.ground_size,
        });
    }
    Ok(())
}

/// Direct enumeration over all submasks.
pub fn convolve_naive(g: &SetFunction, h: &SetFunction) -> Result<SetFunction> {
    check_sizes(g, h)?;
    let full = g.values.len();
    let mut out = vec![INF; full];
    for (y, slot) in out.iter_mut().enumerate() {
        let mut a = y;
        loop {
            let v = sat_add(g.values[a], h.values[y ^ a]);
            if v < *slot {
                *slot = v;
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & y;
        }
    }
    Ok(SetFunction {
        ground_size: g.ground_size,
        values: out,
    })
}

/// Ranked-transform convolution. Every finite value of `g` and `h` must lie
/// in `0..=value_bound`.
pub fn convolve_fast(g: &SetFunction, h: &SetFunction, value_bound: i64) -> Result<SetFunction> {
    check_sizes(g, h)?;
    for &v in g.values.iter().chain(&h.values) {
        if v != INF && !(0..=value_bound).contains(&v) {
            return Err(Error::ValueOutOfRange {
                value: v,
                bound: value_bound,
            });
        }
    }
    let k = g.ground_size;
    let full = 1usize << k;

    // Shifting each side by its minimum shrinks the polynomial degree.
    let finite_min = |f: &SetFunction| f.values.iter().copied().filter(|&v| v != INF).min();
    let (Some(gmin), Some(hmin)) = (finite_min(g), finite_min(h)) else {
        return Ok(SetFunction::constant(k, INF));
    };
    let finite_max = |f: &SetFunction| f.values.iter().copied().filter(|&v| v != INF).max().unwrap();
    let gdeg = (finite_max(g) - gmin) as usize;
    let hdeg = (finite_max(h) - hmin) as usize;
    let glen = gdeg + 1;
    let hlen = hdeg + 1;
    let plen = gdeg + hdeg + 1;

    // ranked[r][mask] is a polynomial stored as a flat coefficient slice.
    let embed = |f: &SetFunction, min: i64, len: usize| -> Vec<Vec<u64>> {
        let mut ranked = vec![vec![0u64; full * len]; k + 1];
        for (mask, &v) in f.values.iter().enumerate() {
            if v != INF {
                let r = mask.count_ones() as usize;
                ranked[r][mask * len + (v - min) as usize] = 1;
            }
        }
        for layer in &mut ranked {
            zeta(layer, k, len);
        }
        ranked
    };
    let gr = embed(g, gmin, glen);
    let hr = embed(h, hmin, hlen);

    let mut out = vec![INF; full];
    let mut prod = vec![0u64; full * plen];
    for r in 0..=k {
        prod.iter_mut().for_each(|c| *c = 0);
        for j in 0..=r {
            let (ga, hb) = (&gr[j], &hr[r - j]);
            for mask in 0..full {
                let gp = &ga[mask * glen..(mask + 1) * glen];
                let hp = &hb[mask * hlen..(mask + 1) * hlen];
                let dst = &mut prod[mask * plen..(mask + 1) * plen];
                for (a, &ca) in gp.iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    for (b, &cb) in hp.iter().enumerate() {
                        dst[a + b] = dst[a + b].wrapping_add(ca.wrapping_mul(cb));
                    }
                }
            }
        }
        mobius(&mut prod, k, plen);
        for (mask, slot) in out.iter_mut().enumerate() {
            if mask.count_ones() as usize != r {
                continue;
            }
            let poly = &prod[mask * plen..(mask + 1) * plen];
            if let Some(d) = poly.iter().position(|&c| c != 0) {
                *slot = d as i64 + gmin + hmin;
            }
        }
    }
    Ok(SetFunction {
        ground_size: k,
        values: out,
    })
}

/// In-place subset-sum transform over polynomials of length `len`.
fn zeta(data: &mut [u64], k: usize, len: usize) {
    for bit in 0..k {
        let step = 1usize << bit;
        for mask in 0..1usize << k {
            if mask & step != 0 {
                let (lo, hi) = data.split_at_mut(mask * len);
                let src = &lo[(mask ^ step) * len..((mask ^ step) + 1) * len];
                for (d, &s) in hi[..len].iter_mut().zip(src) {
                    *d = d.wrapping_add(s);
                }
            }
        }
    }
}

fn mobius(data: &mut [u64], k: usize, len: usize) {
    for bit in 0..k {
        let step = 1usize << bit;
        for mask in 0..1usize << k {
            if mask & step != 0 {
                let (lo, hi) = data.split_at_mut(mask * len);
                let src = &lo[(mask ^ step) * len..((mask ^ step) + 1) * len];
                for (d, &s) in hi[..len].iter_mut().zip(src) {
                    *d = d.wrapping_sub(s);
                }
            }
        }
    }
}

/// Which implementation to use for a convolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvolutionMode {
    Naive,
    Fast,
    /// From `threshold` elements on, whichever method has the smaller
    /// estimated operation count for the given value spread.
    Auto { threshold: usize },
}

impl Default for ConvolutionMode {
    fn default() -> Self {
        ConvolutionMode::Auto { threshold: 8 }
    }
}

/// Spread `max - min` of the finite values, if any.
fn spread(f: &SetFunction) -> Option<i64> {
    let finite = f.values.iter().copied().filter(|&v| v != INF);
    let (lo, hi) = finite.fold((INF, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
    (hi >= lo).then_some(hi - lo)
}

impl ConvolutionMode {
    /// Whether the ranked transform is used for these inputs.
    pub fn uses_fast(self, g: &SetFunction, h: &SetFunction) -> bool {
        match self {
            ConvolutionMode::Naive => false,
            ConvolutionMode::Fast => true,
            ConvolutionMode::Auto { threshold } => {
                let k = g.ground_size;
                if k < threshold {
                    return false;
                }
                let (Some(a), Some(b)) = (spread(g), spread(h)) else {
                    return false;
                };
                let naive = 3f64.powi(k as i32);
                let fast = 2f64.powi(k as i32) * ((k + 1) * (k + 2) / 2) as f64 * ((a + 1) * (b + 1)) as f64;
                fast < naive
            }
        }
    }

    /// Convolves nonnegative set functions with the selected method.
    pub fn convolve(self, g: &SetFunction, h: &SetFunction) -> Result<SetFunction> {
        if self.uses_fast(g, h) {
            let bound = g
                .values
                .iter()
                .chain(&h.values)
                .copied()
                .filter(|&v| v != INF)
                .max()
                .unwrap_or(0);
            convolve_fast(g, h, bound)
        } else {
            convolve_naive(g, h)
        }
    }
}

impl std::str::FromStr for ConvolutionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(ConvolutionMode::Naive),
            "fast" => Ok(ConvolutionMode::Fast),
            "auto" => Ok(ConvolutionMode::default()),
            other => Err(format!("unknown convolution '{other}'")),
        }
    }
}

impl std::fmt::Display for ConvolutionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConvolutionMode::Naive => f.write_str("naive"),
            ConvolutionMode::Fast => f.write_str("fast"),
            ConvolutionMode::Auto { threshold } => write!(f, "auto({threshold})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sf(k: usize, v: &[i64]) -> SetFunction {
        SetFunction::new(k, v.to_vec()).unwrap()
    }

    /// Pair enumeration over (A, B) masks, independent of submask walking.
    fn oracle(g: &SetFunction, h: &SetFunction) -> Vec<i64> {
        let full = g.values.len();
        let mut out = vec![INF; full];
        for a in 0..full {
            for b in 0..full {
                if a & b == 0 {
                    let v = sat_add(g.get(a), h.get(b));
                    out[a | b] = out[a | b].min(v);
                }
            }
        }
        out
    }

    fn random_fn(rng: &mut ChaCha8Rng, k: usize, max: i64) -> SetFunction {
        let values = (0..1 << k)
            .map(|_| if rng.gen_bool(0.2) { INF } else { rng.gen_range(0..=max) })
            .collect();
        SetFunction::new(k, values).unwrap()
    }

    #[test]
    fn single_element() {
        let g = sf(1, &[0, 1]);
        let h = sf(1, &[2, INF]);
        assert_eq!(convolve_naive(&g, &h).unwrap().values(), &[2, 3]);
        assert_eq!(convolve_fast(&g, &h, 2).unwrap().values(), &[2, 3]);
    }

    #[test]
    fn infinity_absorbs() {
        let g = SetFunction::constant(3, INF);
        let h = sf(3, &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert!(convolve_naive(&g, &h).unwrap().values().iter().all(|&v| v == INF));
        assert!(convolve_fast(&g, &h, 7).unwrap().values().iter().all(|&v| v == INF));
    }

    #[test]
    fn two_element_example() {
        let g = sf(2, &[0, 1, 1, 5]);
        assert_eq!(oracle(&g, &g), vec![0, 1, 1, 2]);
        assert_eq!(convolve_naive(&g, &g).unwrap().values(), &[0, 1, 1, 2]);
        assert_eq!(convolve_fast(&g, &g, 5).unwrap().values(), &[0, 1, 1, 2]);
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..8 {
            let g = random_fn(&mut rng, k, 20);
            let e = SetFunction::identity(k);
            assert_eq!(convolve_fast(&g, &e, 20).unwrap(), g);
            assert_eq!(convolve_naive(&e, &g).unwrap(), g);
        }
    }

    #[test]
    fn errors() {
        let g = sf(1, &[0, 1]);
        let h = sf(2, &[0, 1, 2, 3]);
        assert!(matches!(
            convolve_naive(&g, &h),
            Err(Error::GroundSizeMismatch { left: 1, right: 2 })
        ));
        assert!(matches!(
            convolve_fast(&g, &sf(1, &[0, 9]), 5),
            Err(Error::ValueOutOfRange { value: 9, bound: 5 })
        ));
        assert!(convolve_fast(&g, &sf(1, &[-1, 0]), 5).is_err());
        assert!(SetFunction::new(2, vec![0; 3]).is_err());
    }

    #[test]
    fn naive_handles_negative_values() {
        let g = sf(1, &[-3, 2]);
        let h = sf(1, &[1, -4]);
        assert_eq!(convolve_naive(&g, &h).unwrap().values(), &oracle(&g, &h)[..]);
    }

    #[test]
    fn fast_matches_naive_randomised() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let k = rng.gen_range(0..=9);
            let g = random_fn(&mut rng, k, 20);
            let h = random_fn(&mut rng, k, 20);
            let naive = convolve_naive(&g, &h).unwrap();
            assert_eq!(naive.values(), &oracle(&g, &h)[..]);
            assert_eq!(convolve_fast(&g, &h, 20).unwrap(), naive);
        }
    }

    fn arb_fn(k: usize) -> impl Strategy<Value = SetFunction> {
        proptest::collection::vec(prop_oneof![Just(INF), 0i64..=15], 1 << k)
            .prop_map(move |v| SetFunction::new(k, v).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (SetFunction, SetFunction, SetFunction)> {
        (0usize..=6).prop_flat_map(|k| (arb_fn(k), arb_fn(k), arb_fn(k)))
    }

    proptest! {
        #[test]
        fn commutative((g, h, _) in arb_triple()) {
            prop_assert_eq!(convolve_naive(&g, &h).unwrap(), convolve_naive(&h, &g).unwrap());
            prop_assert_eq!(convolve_fast(&g, &h, 15).unwrap(), convolve_fast(&h, &g, 15).unwrap());
        }

        #[test]
        fn associative((a, b, c) in arb_triple()) {
            let left = convolve_naive(&convolve_naive(&a, &b).unwrap(), &c).unwrap();
            let right = convolve_naive(&a, &convolve_naive(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            let ab = convolve_fast(&a, &b, 15).unwrap();
            prop_assert_eq!(convolve_fast(&ab, &c, 30).unwrap(), left);
        }

        #[test]
        fn bounded_by_empty_split((g, h, _) in arb_triple()) {
            let out = convolve_fast(&g, &h, 15).unwrap();
            for y in 0..out.values().len() {
                prop_assert!(out.get(y) <= sat_add(g.get(y), h.get(0)));
            }
        }
    }

    #[test]
    fn auto_weighs_value_spread() {
        let auto = ConvolutionMode::default();
        let flat = SetFunction::constant(14, 0);
        assert!(auto.uses_fast(&flat, &flat));
        let wide = SetFunction::new(14, (0..1 << 14).map(|m| (m % 30) as i64).collect()).unwrap();
        assert!(!auto.uses_fast(&wide, &wide));
        assert!(!auto.uses_fast(&SetFunction::constant(4, 0), &SetFunction::constant(4, 0)));
        assert_eq!(auto.convolve(&flat, &flat).unwrap(), convolve_naive(&flat, &flat).unwrap());
    }
}
