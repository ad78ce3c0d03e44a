//! Inputs shared by the criterion benchmarks.

use zerosum_core::{tight_family, ZSeq};

/// Diagonal-family atoms `a^[b/g]·(−b)^[a/g]` for coprime `a < b ≤ max`,
/// the longest atoms at each norm.
pub fn diagonal_inputs(max: u32) -> Vec<ZSeq> {
    (1..=max)
        .flat_map(|b| (1..b).map(move |a| (a, b)))
        .filter_map(|(a, b)| tight_family(a, b).ok())
        .filter(|s| s.len() > 2)
        .collect()
}

/// Zero-sum sequences that are not minimal: two atoms glued together.
pub fn glued_inputs(max: u32) -> Vec<ZSeq> {
    let atoms = diagonal_inputs(max);
    atoms
        .windows(2)
        .map(|w| {
            let mut s = w[0].clone();
            for (v, m) in w[1].iter() {
                s.insert(v, m);
            }
            s
        })
        .collect()
}
