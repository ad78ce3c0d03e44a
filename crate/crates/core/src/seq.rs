//! Integer sequences as multisets, their standard split form and statistics.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::{Error, Result, DEFAULT_N_MAX};

/// A finite unordered sequence of integers, stored as value → multiplicity.
///
/// Values with multiplicity zero are never stored. The empty map is the
/// trivial sequence.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ZSeq {
    terms: BTreeMap<i64, u32>,
}

/// Length, sum, exact average and infinity norm of a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqStats {
    pub length: u64,
    pub sum: i64,
    /// `None` for the trivial sequence.
    pub average: Option<Ratio<i64>>,
    pub inf_norm: i64,
}

/// Standard form `S = prod a_i^[x_i] * prod (-b_j)^[y_j]`.
///
/// `positives` holds `(a_i, x_i)` with strictly ascending `a_i`; `negatives`
/// holds `(b_j, y_j)` with strictly ascending magnitudes `b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitForm {
    pub positives: Vec<(i64, u32)>,
    pub negatives: Vec<(i64, u32)>,
}

impl ZSeq {
    pub fn new() -> Self {
        Self::default()
    }

    /// `g^[d]`: the value `g` repeated `d` times.
    pub fn power(value: i64, mult: u32) -> Self {
        let mut s = Self::new();
        s.insert(value, mult);
        s
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, u32)>>(pairs: I) -> Self {
        let mut s = Self::new();
        for (v, m) in pairs {
            s.insert(v, m);
        }
        s
    }

    pub fn from_terms<I: IntoIterator<Item = i64>>(terms: I) -> Self {
        let mut s = Self::new();
        for v in terms {
            s.insert(v, 1);
        }
        s
    }

    pub fn insert(&mut self, value: i64, mult: u32) {
        if mult > 0 {
            *self.terms.entry(value).or_insert(0) += mult;
        }
    }

    /// Removes `mult` copies of `value`, failing if fewer are present.
    pub fn remove(&mut self, value: i64, mult: u32) -> Result<()> {
        let have = self.multiplicity(value);
        if have < mult {
            return Err(Error::MissingTerm { value, needed: mult });
        }
        if have == mult {
            self.terms.remove(&value);
        } else {
            self.terms.insert(value, have - mult);
        }
        Ok(())
    }

    pub fn multiplicity(&self, value: i64) -> u32 {
        self.terms.get(&value).copied().unwrap_or(0)
    }

    pub fn contains(&self, value: i64) -> bool {
        self.terms.contains_key(&value)
    }

    /// Distinct values with multiplicities, ascending by value.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, u32)> + '_ {
        self.terms.iter().map(|(&v, &m)| (v, m))
    }

    pub fn distinct_len(&self) -> usize {
        self.terms.len()
    }

    /// Number of terms counted with multiplicity, `|S|`.
    pub fn len(&self) -> u64 {
        self.terms.values().map(|&m| u64::from(m)).sum()
    }

    /// True for the empty sequence.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_empty()
    }

    /// `σ(S)`, with overflow detection.
    pub fn sum(&self) -> Result<i64> {
        self.iter().try_fold(0i64, |acc, (v, m)| {
            v.checked_mul(i64::from(m))
                .and_then(|t| acc.checked_add(t))
                .ok_or(Error::Overflow)
        })
    }

    /// `S_av = σ(S) / |S|` as an exact fraction.
    pub fn average(&self) -> Result<Ratio<i64>> {
        if self.is_trivial() {
            return Err(Error::Trivial);
        }
        let len = i64::try_from(self.len()).map_err(|_| Error::Overflow)?;
        Ok(Ratio::new(self.sum()?, len))
    }

    /// `‖S‖_∞`; zero for the trivial sequence.
    pub fn inf_norm(&self) -> i64 {
        let lo = self.terms.keys().next().map_or(0, |v| v.abs());
        let hi = self.terms.keys().next_back().map_or(0, |v| v.abs());
        lo.max(hi)
    }

    pub fn stats(&self) -> Result<SeqStats> {
        Ok(SeqStats {
            length: self.len(),
            sum: self.sum()?,
            average: if self.is_trivial() {
                None
            } else {
                Some(self.average()?)
            },
            inf_norm: self.inf_norm(),
        })
    }

    /// Every term negated, multiplicities kept.
    pub fn negate(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&v, &m)| (-v, m)).collect(),
        }
    }

    /// Terms expanded by multiplicity, largest first.
    pub fn desc_terms(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms
            .iter()
            .rev()
            .flat_map(|(&v, &m)| std::iter::repeat_n(v, m as usize))
    }

    /// Representative of the class `{S, -S}`: whichever of the two has the
    /// lexicographically greater descending term list.
    pub fn canon(&self) -> Self {
        if self.is_canonical() {
            self.clone()
        } else {
            self.negate()
        }
    }

    pub fn is_canonical(&self) -> bool {
        // the descending list of -S is the ascending list of S, negated
        let negated = self
            .terms
            .iter()
            .flat_map(|(&v, &m)| std::iter::repeat_n(-v, m as usize));
        self.desc_terms().cmp(negated) != Ordering::Less
    }

    pub fn positive_part(&self) -> Self {
        Self {
            terms: self.terms.range(1..).map(|(&v, &m)| (v, m)).collect(),
        }
    }

    pub fn negative_part(&self) -> Self {
        Self {
            terms: self.terms.range(..0).map(|(&v, &m)| (v, m)).collect(),
        }
    }

    /// The standard form; requires no zero term and both signs present.
    pub fn split_form(&self) -> Result<SplitForm> {
        if self.contains(0) {
            return Err(Error::ZeroTerm(self.to_string()));
        }
        let positives: Vec<_> = self.terms.range(1..).map(|(&v, &m)| (v, m)).collect();
        let negatives: Vec<_> = self.terms.range(..0).rev().map(|(&v, &m)| (-v, m)).collect();
        if positives.is_empty() || negatives.is_empty() {
            return Err(Error::OneSided(self.to_string()));
        }
        Ok(SplitForm { positives, negatives })
    }

    /// True when `other` is a sub-multiset of `self`.
    pub fn contains_sub(&self, other: &ZSeq) -> bool {
        other.iter().all(|(v, m)| self.multiplicity(v) >= m)
    }

    pub fn parse_with_limit(text: &str, limit: u32) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut seq = ZSeq::new();
        for token in compact.split(',') {
            let (value, mult) = match token.split_once('^') {
                Some((v, m)) => (v, Some(m)),
                None => (token, None),
            };
            let value: i64 = value
                .parse()
                .map_err(|_| Error::MalformedTerm(token.to_string()))?;
            let mult = match mult {
                None => 1,
                Some(m) => match m.parse::<i64>() {
                    Ok(k) if k > 0 => {
                        u32::try_from(k).map_err(|_| Error::BadMultiplicity(token.to_string()))?
                    }
                    Ok(_) => return Err(Error::BadMultiplicity(token.to_string())),
                    Err(_) => return Err(Error::MalformedTerm(token.to_string())),
                },
            };
            if value.unsigned_abs() > u64::from(limit) {
                return Err(Error::TermOutOfRange { value, limit });
            }
            let total = u64::from(seq.multiplicity(value)) + u64::from(mult);
            if total > u64::from(u32::MAX) {
                return Err(Error::Overflow);
            }
            seq.insert(value, mult);
        }
        Ok(seq)
    }
}

/// Parses `term ("," term)*` with `term := integer ("^" positive-integer)?`.
pub fn parse_seq(text: &str) -> Result<ZSeq> {
    ZSeq::parse_with_limit(text, DEFAULT_N_MAX)
}

impl FromStr for ZSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_seq(s)
    }
}

/// Canonical text: descending values, `^k` only when `k > 1`.
impl fmt::Display for ZSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, m)) in self.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if m == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{m}")?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for ZSeq {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Debug for ZSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZSeq[{self}]")
    }
}

/// Orders by descending term lists, lexicographically.
impl Ord for ZSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.desc_terms().cmp(other.desc_terms())
    }
}

impl PartialOrd for ZSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl SplitForm {
    /// `|S⁺| = Σ x_i`
    pub fn len_pos(&self) -> i64 {
        self.positives.iter().map(|&(_, x)| i64::from(x)).sum()
    }

    /// `|S⁻| = Σ y_j`
    pub fn len_neg(&self) -> i64 {
        self.negatives.iter().map(|&(_, y)| i64::from(y)).sum()
    }

    /// `σ(S⁺) = Σ a_i x_i`
    pub fn sum_pos(&self) -> Result<i64> {
        weighted_sum(&self.positives)
    }

    /// `-σ(S⁻) = Σ b_j y_j`
    pub fn sum_neg(&self) -> Result<i64> {
        weighted_sum(&self.negatives)
    }

    /// `a_1`
    pub fn min_pos(&self) -> i64 {
        self.positives[0].0
    }

    /// `a_n = ‖S⁺‖_∞`
    pub fn max_pos(&self) -> i64 {
        self.positives[self.positives.len() - 1].0
    }

    /// `b_1`
    pub fn min_neg(&self) -> i64 {
        self.negatives[0].0
    }

    /// `b_m = ‖S⁻‖_∞`
    pub fn max_neg(&self) -> i64 {
        self.negatives[self.negatives.len() - 1].0
    }

    /// `S⁺_av`
    pub fn avg_pos(&self) -> Result<Ratio<i64>> {
        Ok(Ratio::new(self.sum_pos()?, self.len_pos()))
    }

    /// `-S⁻_av`, a positive fraction.
    pub fn avg_neg(&self) -> Result<Ratio<i64>> {
        Ok(Ratio::new(self.sum_neg()?, self.len_neg()))
    }

    /// The form with the roles of the two sides exchanged (the split form of `-S`).
    pub fn mirrored(&self) -> SplitForm {
        SplitForm {
            positives: self.negatives.clone(),
            negatives: self.positives.clone(),
        }
    }

    pub fn to_seq(&self) -> ZSeq {
        let mut s = ZSeq::from_pairs(self.positives.iter().copied());
        for &(b, y) in &self.negatives {
            s.insert(-b, y);
        }
        s
    }
}

fn weighted_sum(blocks: &[(i64, u32)]) -> Result<i64> {
    blocks.iter().try_fold(0i64, |acc, &(v, m)| {
        v.checked_mul(i64::from(m))
            .and_then(|t| acc.checked_add(t))
            .ok_or(Error::Overflow)
    })
}
