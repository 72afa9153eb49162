//! Mixed-radix coloring indices. Digit `p` of an index is the color of the
//! `p`-th smallest vertex of the bag (least significant digit first).

/// `base^k` for each `k` up to `len`.
pub fn powers(base: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = 1usize;
    for _ in 0..=len {
        out.push(acc);
        acc *= base;
    }
    out
}

#[inline]
pub fn digit(index: usize, pos: usize, pow: &[usize], base: usize) -> usize {
    index / pow[pos] % base
}

/// Index with digit `pos` deleted (higher digits shift down).
#[inline]
pub fn remove_digit(index: usize, pos: usize, pow: &[usize]) -> usize {
    index % pow[pos] + index / pow[pos + 1] * pow[pos]
}

/// Index with `value` inserted as the new digit `pos`.
#[inline]
pub fn insert_digit(index: usize, pos: usize, value: usize, pow: &[usize]) -> usize {
    index % pow[pos] + value * pow[pos] + index / pow[pos] * pow[pos + 1]
}

/// Index with digit `pos` overwritten by `value`.
#[inline]
pub fn set_digit(index: usize, pos: usize, value: usize, pow: &[usize], base: usize) -> usize {
    index - digit(index, pos, pow, base) * pow[pos] + value * pow[pos]
}

/// Decodes all digits.
pub fn digits(mut index: usize, len: usize, base: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(index % base);
        index /= base;
    }
    out
}

pub fn encode(digits: &[usize], base: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}
