//! Method of types: empirical distributions, type classes, and
//! delta-typical sets with explicit enumeration.

use crate::error::{Error, Result};

/// Default enumeration guard: |X|^n may not exceed 2^24 sequences.
pub const DEFAULT_MAX_ENUM: u128 = 1 << 24;

/// Effective guard, honoring the RESOURCE_KIT_MAX_ENUM override.
pub fn enumeration_guard() -> u128 {
    std::env::var("RESOURCE_KIT_MAX_ENUM")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM)
}

/// Check |alphabet|^n against the guard; returns the size on success.
pub fn check_enumeration(alphabet: usize, n: usize) -> Result<u128> {
    let guard = enumeration_guard();
    let size = (alphabet as u128)
        .checked_pow(n as u32)
        .ok_or(Error::TooLarge { size: u128::MAX, guard })?;
    if size > guard {
        return Err(Error::TooLarge { size, guard });
    }
    Ok(size)
}

/// The type (empirical distribution) of a sequence, exact on counts.
pub fn type_of(xn: &[usize], alphabet: usize) -> Vec<f64> {
    let counts = counts_of(xn, alphabet);
    counts.iter().map(|&c| c as f64 / xn.len() as f64).collect()
}

/// Occurrence counts N(a | x^n).
pub fn counts_of(xn: &[usize], alphabet: usize) -> Vec<usize> {
    let mut counts = vec![0usize; alphabet];
    for &x in xn {
        counts[x] += 1;
    }
    counts
}

/// A finite set of sequences with its total source probability.
#[derive(Clone, Debug)]
pub struct SequenceSet {
    pub n: usize,
    pub sequences: Vec<Vec<usize>>,
    pub total_probability: f64,
}

impl SequenceSet {
    pub fn empty(n: usize) -> Self {
        Self { n, sequences: Vec::new(), total_probability: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }
}

/// p^n(x^n) = prod_i p(x_i).
pub fn sequence_probability(p: &[f64], xn: &[usize]) -> f64 {
    xn.iter().map(|&x| p[x]).product()
}

/// All count vectors (c_0..c_{k-1}) with sum n, in lexicographic order.
pub fn all_count_vectors(alphabet: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; alphabet];
    fn rec(cur: &mut Vec<usize>, pos: usize, remaining: usize, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() - 1 {
            cur[pos] = remaining;
            out.push(cur.clone());
            return;
        }
        for c in 0..=remaining {
            cur[pos] = c;
            rec(cur, pos + 1, remaining - c, out);
        }
    }
    rec(&mut cur, 0, n, &mut out);
    out
}

/// All sequences with the given letter counts, lexicographically sorted.
pub fn type_class(counts: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = counts.iter().sum();
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(n);
    let mut remaining = counts.to_vec();
    fn rec(
        seq: &mut Vec<usize>,
        remaining: &mut Vec<usize>,
        n: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if seq.len() == n {
            out.push(seq.clone());
            return;
        }
        for a in 0..remaining.len() {
            if remaining[a] > 0 {
                remaining[a] -= 1;
                seq.push(a);
                rec(seq, remaining, n, out);
                seq.pop();
                remaining[a] += 1;
            }
        }
    }
    rec(&mut seq, &mut remaining, n, &mut out);
    out
}

/// Whether a count vector is delta-typical for p: |c_a/n - p(a)| < delta
/// for every letter.
pub fn counts_typical(counts: &[usize], n: usize, p: &[f64], delta: f64) -> bool {
    counts
        .iter()
        .zip(p.iter())
        .all(|(&c, &pa)| (c as f64 / n as f64 - pa).abs() < delta)
}

/// The delta-typical set T^n_{[p]_delta}, fully enumerated.
pub fn typical_set(p: &[f64], n: usize, delta: f64) -> Result<SequenceSet> {
    check_enumeration(p.len(), n)?;
    let mut sequences = Vec::new();
    let mut total = 0.0;
    for counts in all_count_vectors(p.len(), n) {
        if !counts_typical(&counts, n, p, delta) {
            continue;
        }
        let per_seq: f64 = counts
            .iter()
            .zip(p.iter())
            .map(|(&c, &pa)| pa.powi(c as i32))
            .product();
        let class = type_class(&counts);
        total += per_seq * class.len() as f64;
        sequences.extend(class);
    }
    Ok(SequenceSet { n, sequences, total_probability: total })
}
