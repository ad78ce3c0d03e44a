//! Minimality of zero-sum sequences.
//!
//! [`is_minimal_fast`] compares the reachable subset sums of the positive and
//! negative halves; [`is_minimal_oracle`] enumerates every sub-multiset and
//! is kept independent of it for cross-checking.

use crate::{Error, Result, ZSeq};

/// Longest sequence the exhaustive oracle accepts.
pub const ORACLE_MAX_LEN: u64 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityVerdict {
    pub is_zero_sum: bool,
    pub is_minimal: bool,
    /// A proper nonempty zero-sum sub-multiset, present iff not minimal.
    pub witness: Option<ZSeq>,
}

impl MinimalityVerdict {
    fn minimal() -> Self {
        Self {
            is_zero_sum: true,
            is_minimal: true,
            witness: None,
        }
    }

    fn refuted(witness: ZSeq) -> Self {
        Self {
            is_zero_sum: true,
            is_minimal: false,
            witness: Some(witness),
        }
    }
}

pub fn is_zero_sum(s: &ZSeq) -> bool {
    matches!(s.sum(), Ok(0))
}

/// True when `s` is a nontrivial minimal zero-sum sequence.
pub fn is_atom(s: &ZSeq) -> bool {
    is_minimal_fast(s).map(|v| v.is_minimal).unwrap_or(false)
}

fn check_zero_sum(s: &ZSeq) -> Result<()> {
    if s.is_trivial() {
        return Err(Error::Trivial);
    }
    match s.sum()? {
        0 => Ok(()),
        other => Err(Error::NotZeroSum(other)),
    }
}

/// Decides minimality with reachable-sum bitsets.
///
/// With `P` the nonempty subset sums of `S⁺` and `N` those of `-S⁻`, the
/// sequence is minimal iff `P ∩ N = {σ(S⁺)}`. A sequence holding a zero term
/// is minimal only when it is the singleton `0`.
pub fn is_minimal_fast(s: &ZSeq) -> Result<MinimalityVerdict> {
    check_zero_sum(s)?;
    if s.contains(0) {
        return Ok(if s.len() == 1 {
            MinimalityVerdict::minimal()
        } else {
            MinimalityVerdict::refuted(ZSeq::power(0, 1))
        });
    }
    let form = s.split_form()?;
    let total = usize::try_from(form.sum_pos()?).map_err(|_| Error::Overflow)?;
    let pos = SumTable::build(&form.positives, total);
    let neg = SumTable::build(&form.negatives, total);
    match pos.reachable().first_common(neg.reachable(), 1, total) {
        None => Ok(MinimalityVerdict::minimal()),
        Some(t) => {
            let mut witness = ZSeq::from_pairs(pos.trace(t));
            for (b, y) in neg.trace(t) {
                witness.insert(-b, y);
            }
            Ok(MinimalityVerdict::refuted(witness))
        }
    }
}

/// Exhaustive minimality test over every proper nonempty sub-multiset.
pub fn is_minimal_oracle(s: &ZSeq) -> Result<MinimalityVerdict> {
    check_zero_sum(s)?;
    let len = s.len();
    if len > ORACLE_MAX_LEN {
        return Err(Error::LengthCap {
            len,
            cap: ORACLE_MAX_LEN,
        });
    }
    let blocks: Vec<(i64, u32)> = s.iter().collect();
    let mut counts = vec![0u32; blocks.len()];
    // mixed-radix counter over the multiplicity vector
    loop {
        let mut i = 0;
        while i < blocks.len() && counts[i] == blocks[i].1 {
            counts[i] = 0;
            i += 1;
        }
        if i == blocks.len() {
            return Ok(MinimalityVerdict::minimal());
        }
        counts[i] += 1;

        let taken: u64 = counts.iter().map(|&c| u64::from(c)).sum();
        if taken == len {
            continue;
        }
        let sum: i64 = blocks
            .iter()
            .zip(&counts)
            .map(|(&(v, _), &c)| v * i64::from(c))
            .sum();
        if sum == 0 {
            let witness = ZSeq::from_pairs(blocks.iter().zip(&counts).map(|(&(v, _), &c)| (v, c)));
            return Ok(MinimalityVerdict::refuted(witness));
        }
    }
}

/// Fixed-width bitset over sums `0..=max`.
#[derive(Clone)]
struct SumBits {
    words: Vec<u64>,
    max: usize,
}

impl SumBits {
    fn singleton_zero(max: usize) -> Self {
        let mut words = vec![0u64; max / 64 + 1];
        words[0] = 1;
        Self { words, max }
    }

    fn get(&self, i: usize) -> bool {
        i <= self.max && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// `self |= other << shift`, truncated at `max`.
    fn or_shifted(&mut self, other: &SumBits, shift: usize) {
        let (word_shift, bit_shift) = (shift / 64, shift % 64);
        let n = self.words.len();
        for i in (word_shift..n).rev() {
            let src = i - word_shift;
            let mut w = other.words[src] << bit_shift;
            if bit_shift > 0 && src > 0 {
                w |= other.words[src - 1] >> (64 - bit_shift);
            }
            self.words[i] |= w;
        }
        let tail = (self.max + 1) % 64;
        if tail != 0 {
            self.words[n - 1] &= (1u64 << tail) - 1;
        }
    }

    /// Smallest `t` in `lo..hi` set in both tables.
    fn first_common(&self, other: &SumBits, lo: usize, hi: usize) -> Option<usize> {
        for (i, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let mut w = a & b;
            while w != 0 {
                let t = i * 64 + w.trailing_zeros() as usize;
                if t >= hi {
                    return None;
                }
                if t >= lo {
                    return Some(t);
                }
                w &= w - 1;
            }
        }
        None
    }
}

/// Layered reachable-sum table: layer `i` holds the sums reachable with the
/// first `i` value blocks, so any reachable sum can be traced back.
struct SumTable<'a> {
    blocks: &'a [(i64, u32)],
    layers: Vec<SumBits>,
}

impl<'a> SumTable<'a> {
    fn build(blocks: &'a [(i64, u32)], max: usize) -> Self {
        let mut layers = Vec::with_capacity(blocks.len() + 1);
        layers.push(SumBits::singleton_zero(max));
        for &(value, mult) in blocks {
            let prev = &layers[layers.len() - 1];
            let mut next = prev.clone();
            let value = value as usize;
            for c in 1..=mult as usize {
                if c * value > max {
                    break;
                }
                next.or_shifted(prev, c * value);
            }
            layers.push(next);
        }
        Self { blocks, layers }
    }

    fn reachable(&self) -> &SumBits {
        &self.layers[self.layers.len() - 1]
    }

    /// A sub-multiset summing to `target`, taking the fewest copies of the
    /// largest values first.
    fn trace(&self, mut target: usize) -> Vec<(i64, u32)> {
        debug_assert!(self.reachable().get(target));
        let mut out = Vec::new();
        for (i, &(value, mult)) in self.blocks.iter().enumerate().rev() {
            let prev = &self.layers[i];
            let value = value as usize;
            let c = (0..=mult as usize)
                .find(|&c| c * value <= target && prev.get(target - c * value))
                .expect("reachable sum must trace back");
            if c > 0 {
                out.push((value as i64, c as u32));
            }
            target -= c * value;
        }
        debug_assert_eq!(target, 0);
        out
    }
}
