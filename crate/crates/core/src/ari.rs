//! Adjusted Rand index from the pair-counting contingency table.

use std::collections::HashMap;

use crate::error::{Error, Result};

fn pairs(x: u64) -> i128 {
    (x as i128) * (x as i128 - 1) / 2
}

/// ARI of two labelings of the same `n >= 2` items.
///
/// All pair counts are exact integers; the only rounding is the final
/// division. Two trivial partitions (both all-in-one or both all-singletons)
/// score 1.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    if a.len() < 2 {
        return Err(Error::DegenerateInput(format!("ARI needs at least 2 items, got {}", a.len())));
    }
    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let same_both: i128 = joint.values().map(|&c| pairs(c)).sum();
    let same_a: i128 = rows.values().map(|&c| pairs(c)).sum();
    let same_b: i128 = cols.values().map(|&c| pairs(c)).sum();
    let total = pairs(a.len() as u64);
    Ok(ari_from_counts(same_both, same_a, same_b, total))
}

/// `2 (s_ab N - s_a s_b) / ((s_a + s_b) N - 2 s_a s_b)`.
pub(crate) fn ari_from_counts(same_both: i128, same_a: i128, same_b: i128, total: i128) -> f64 {
    let num = 2 * (same_both * total - same_a * same_b);
    let den = (same_a + same_b) * total - 2 * same_a * same_b;
    if den == 0 {
        return 1.0;
    }
    num as f64 / den as f64
}
