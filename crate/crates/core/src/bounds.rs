//! Length bounds for minimal zero-sum sequences.
//!
//! For `S` in split form with positive blocks `(a_i, x_i)` and negative
//! blocks `(b_j, y_j)`:
//!
//! * Lambert: `|S⁺| ≤ b_m`, `|S⁻| ≤ a_n`;
//! * Henk–Weismantel: `|S⁺| ≤ U_{J_ℓ}` for every `ℓ`, `|S⁻| ≤ U_{I_k}` for
//!   every `k`, where
//!   `U_{J_ℓ} = b_ℓ − Σ_{j<ℓ} ⌊(b_ℓ−b_j)/a_n⌋ y_j + Σ_{j>ℓ} ⌈(b_j−b_ℓ)/a_1⌉ y_j`
//!   and `U_{I_k}` is the same expression with the sides exchanged;
//! * average bound: `|S⁺| ≤ ⌊−S⁻_av⌋`, `|S⁻| ≤ ⌊S⁺_av⌋`.
//!
//! The average bound is never weaker than the Henk–Weismantel bound on the
//! comparison region `a_1 ≤ |S⁻| ≤ a_n` (resp. `b_1 ≤ |S⁺| ≤ b_m`); outside it
//! the comparison can go either way, and [`dominance_scan`] reports such
//! sequences instead of rejecting them.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::enumeration::AtomSet;
use crate::minimality::is_minimal_fast;
use crate::{Error, Result, SplitForm, ZSeq};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub seq: ZSeq,
    pub len_pos: i64,
    pub len_neg: i64,
    pub lambert_pos: i64,
    pub lambert_neg: i64,
    pub hw_pos: Vec<i64>,
    pub hw_pos_min: i64,
    pub hw_neg: Vec<i64>,
    pub hw_neg_min: i64,
    pub main_pos: i64,
    pub main_neg: i64,
    pub refined_pos: Option<i64>,
    pub refined_neg: Option<i64>,
    pub tight_pos: bool,
    pub tight_neg: bool,
}

pub const CSV_HEADER: &str = "seq,len_pos,len_neg,lambert_pos,lambert_neg,hw_pos_min,hw_neg_min,main_pos,main_neg,refined_pos,refined_neg,tight_pos,tight_neg";

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// `(b_m, a_n)`
pub fn lambert_bounds(f: &SplitForm) -> (i64, i64) {
    (f.max_neg(), f.max_pos())
}

/// `U_{J_ℓ}` for each block of `target`, with `other` the opposite side.
fn hw_side(target: &[(i64, u32)], other: &[(i64, u32)]) -> Result<Vec<i64>> {
    let other_min = i128::from(other[0].0);
    let other_max = i128::from(other[other.len() - 1].0);
    target
        .iter()
        .enumerate()
        .map(|(l, &(bl, _))| {
            let bl = i128::from(bl);
            let below: i128 = target[..l]
                .iter()
                .map(|&(bj, yj)| Integer::div_floor(&(bl - i128::from(bj)), &other_max) * i128::from(yj))
                .sum();
            let above: i128 = target[l + 1..]
                .iter()
                .map(|&(bj, yj)| Integer::div_ceil(&(i128::from(bj) - bl), &other_min) * i128::from(yj))
                .sum();
            narrow(bl - below + above)
        })
        .collect()
}

/// All `U_{J_ℓ}` (bounds on `|S⁺|`) and all `U_{I_k}` (bounds on `|S⁻|`).
pub fn hw_bounds(f: &SplitForm) -> Result<(Vec<i64>, Vec<i64>)> {
    Ok((
        hw_side(&f.negatives, &f.positives)?,
        hw_side(&f.positives, &f.negatives)?,
    ))
}

/// `(⌊Σ b_j y_j / Σ y_j⌋, ⌊Σ a_i x_i / Σ x_i⌋)`
pub fn main_bounds(f: &SplitForm) -> Result<(i64, i64)> {
    Ok((
        f.avg_neg()?.floor().to_integer(),
        f.avg_pos()?.floor().to_integer(),
    ))
}

/// Bound on `|S⁺|` obtained by first deriving `(a_n, −b_t)` for some `b_t`
/// with `a_n > b_t > −S⁻_av`, then applying the average bound to the result.
fn refined_side(f: &SplitForm) -> Result<Option<i64>> {
    let avg = f.avg_neg()?;
    let (sum, len) = (f.sum_neg()?, f.len_neg());
    let a_max = f.max_pos();
    Ok(f.negatives
        .iter()
        .filter(|&&(b, _)| a_max > b && Ratio::from_integer(b) > avg)
        .map(|&(b, _)| {
            // b_t above the average forces another, smaller term, so len ≥ 2
            Integer::div_floor(&(sum - b), &(len - 1))
        })
        .min())
}

pub fn refined_bounds(f: &SplitForm) -> Result<(Option<i64>, Option<i64>)> {
    Ok((refined_side(f)?, refined_side(&f.mirrored())?))
}

/// All bound families for a zero-sum sequence with both signs and no zero term.
pub fn bound_report(s: &ZSeq) -> Result<BoundReport> {
    match s.sum()? {
        0 => {}
        other => return Err(Error::NotZeroSum(other)),
    }
    let f = s.split_form()?;
    let (lambert_pos, lambert_neg) = lambert_bounds(&f);
    let (hw_pos, hw_neg) = hw_bounds(&f)?;
    let (main_pos, main_neg) = main_bounds(&f)?;
    let (refined_pos, refined_neg) = refined_bounds(&f)?;
    let (len_pos, len_neg) = (f.len_pos(), f.len_neg());
    Ok(BoundReport {
        seq: s.clone(),
        len_pos,
        len_neg,
        lambert_pos,
        lambert_neg,
        hw_pos_min: *hw_pos.iter().min().expect("nonempty side"),
        hw_pos,
        hw_neg_min: *hw_neg.iter().min().expect("nonempty side"),
        hw_neg,
        main_pos,
        main_neg,
        refined_pos,
        refined_neg,
        tight_pos: len_pos == main_pos,
        tight_neg: len_neg == main_neg,
    })
}

impl BoundReport {
    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&self.seq.to_string()),
            self.len_pos,
            self.len_neg,
            self.lambert_pos,
            self.lambert_neg,
            self.hw_pos_min,
            self.hw_neg_min,
            self.main_pos,
            self.main_neg,
            opt(self.refined_pos),
            opt(self.refined_neg),
            self.tight_pos,
            self.tight_neg
        )
    }

    /// Human-readable multi-line summary.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<i64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        let list = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "seq          {}\n\
             lengths      |S+| = {}  |S-| = {}\n\
             lambert      ({}, {})\n\
             hw           pos [{}] min {}  neg [{}] min {}\n\
             hw minima    ({}, {})\n\
             main         ({}, {})\n\
             refined      ({}, {})\n\
             tight        ({}, {})\n",
            self.seq,
            self.len_pos,
            self.len_neg,
            self.lambert_pos,
            self.lambert_neg,
            list(&self.hw_pos),
            self.hw_pos_min,
            list(&self.hw_neg),
            self.hw_neg_min,
            self.hw_pos_min,
            self.hw_neg_min,
            self.main_pos,
            self.main_neg,
            opt(self.refined_pos),
            opt(self.refined_neg),
            self.tight_pos,
            self.tight_neg
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

/// `a^[b/g] · (−b)^[a/g]` with `g = gcd(a, b)`, checked minimal.
pub fn tight_family(a: u32, b: u32) -> Result<ZSeq> {
    if a == 0 || b == 0 {
        return Err(Error::Invariant(format!(
            "tight family needs a, b ≥ 1 (got {a}, {b})"
        )));
    }
    let g = Integer::gcd(&a, &b);
    let mut s = ZSeq::power(i64::from(a), b / g);
    s.insert(-i64::from(b), a / g);
    if !is_minimal_fast(&s)?.is_minimal {
        return Err(Error::Invariant(format!("{s} should be minimal")));
    }
    Ok(s)
}

/// Which half of the sequence a bound constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Pos,
    Neg,
}

/// An index where the unfloored average exceeds a Henk–Weismantel value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonException {
    pub seq: ZSeq,
    pub side: Side,
    /// 1-based `ℓ` (for `Pos`) or `k` (for `Neg`).
    pub index: usize,
    pub average: String,
    pub hw_value: i64,
    /// Whether the floored average bound also exceeds `hw_value`.
    pub floored_exceeds: bool,
    /// Whether the sequence lies in the comparison region for this side.
    pub in_region: bool,
}

/// Every `(side, index)` where `−S⁻_av > U_{J_ℓ}` or `S⁺_av > U_{I_k}`.
pub fn average_vs_hw_exceptions(s: &ZSeq) -> Result<Vec<ComparisonException>> {
    let f = s.split_form()?;
    let (hw_pos, hw_neg) = hw_bounds(&f)?;
    let mut out = Vec::new();
    let sides = [
        (Side::Pos, f.avg_neg()?, &hw_pos, in_region_pos(&f)),
        (Side::Neg, f.avg_pos()?, &hw_neg, in_region_neg(&f)),
    ];
    for (side, avg, hw, in_region) in sides {
        for (i, &u) in hw.iter().enumerate() {
            if avg > Ratio::from_integer(u) {
                out.push(ComparisonException {
                    seq: s.clone(),
                    side,
                    index: i + 1,
                    average: avg.to_string(),
                    hw_value: u,
                    floored_exceeds: avg.floor().to_integer() > u,
                    in_region,
                });
            }
        }
    }
    Ok(out)
}

/// `a_1 ≤ |S⁻| ≤ a_n`, where the bound on `|S⁺|` is compared.
pub fn in_region_pos(f: &SplitForm) -> bool {
    (f.min_pos()..=f.max_pos()).contains(&f.len_neg())
}

/// `b_1 ≤ |S⁺| ≤ b_m`, where the bound on `|S⁻|` is compared.
pub fn in_region_neg(f: &SplitForm) -> bool {
    (f.min_neg()..=f.max_neg()).contains(&f.len_pos())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SideTally {
    /// main bound strictly below the Henk–Weismantel minimum
    pub main_sharper: usize,
    pub ties: usize,
    /// main bound above the Henk–Weismantel minimum
    pub main_weaker: usize,
    /// main bound strictly below Lambert
    pub below_lambert: usize,
    pub tight: usize,
    pub refined_available: usize,
    pub refined_sharper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceSummary {
    pub n: u32,
    pub atoms_checked: usize,
    pub pos: SideTally,
    pub neg: SideTally,
    pub both_tight: usize,
    /// Unfloored comparison failures; all lie outside the comparison region.
    pub exceptions: Vec<ComparisonException>,
}

fn tally(t: &mut SideTally, len: i64, lambert: i64, hw_min: i64, main: i64, refined: Option<i64>) {
    match main.cmp(&hw_min) {
        std::cmp::Ordering::Less => t.main_sharper += 1,
        std::cmp::Ordering::Equal => t.ties += 1,
        std::cmp::Ordering::Greater => t.main_weaker += 1,
    }
    t.below_lambert += usize::from(main < lambert);
    t.tight += usize::from(len == main);
    if let Some(r) = refined {
        t.refined_available += 1;
        t.refined_sharper += usize::from(r < main);
    }
}

/// Checks every bound against every atom with both signs.
///
/// Hard failures: any length exceeding a Lambert, Henk–Weismantel, average
/// or refined bound; an average bound above Lambert; and an unfloored
/// average above a Henk–Weismantel value inside the comparison region.
pub fn dominance_scan(atoms: &AtomSet) -> Result<DominanceSummary> {
    let mut summary = DominanceSummary {
        n: atoms.n,
        atoms_checked: 0,
        pos: SideTally::default(),
        neg: SideTally::default(),
        both_tight: 0,
        exceptions: Vec::new(),
    };
    for s in atoms.iter().filter(|s| s.len() > 1 && !s.contains(0)) {
        let r = bound_report(s)?;
        let fail = |detail: String| Error::ChainViolation {
            atom: s.to_string(),
            detail,
        };
        let f = s.split_form()?;
        if f.sum_pos()? != f.sum_neg()? {
            return Err(fail("σ(S⁺) ≠ −σ(S⁻)".into()));
        }
        for (side, len, lambert, hw, main, refined) in [
            (
                "+",
                r.len_pos,
                r.lambert_pos,
                &r.hw_pos,
                r.main_pos,
                r.refined_pos,
            ),
            (
                "-",
                r.len_neg,
                r.lambert_neg,
                &r.hw_neg,
                r.main_neg,
                r.refined_neg,
            ),
        ] {
            if len > lambert {
                return Err(fail(format!("|S{side}| = {len} > Lambert {lambert}")));
            }
            if let Some(u) = hw.iter().find(|&&u| len > u) {
                return Err(fail(format!("|S{side}| = {len} > HW {u}")));
            }
            if len > main {
                return Err(fail(format!("|S{side}| = {len} > main {main}")));
            }
            if main > lambert {
                return Err(fail(format!("main {main} > Lambert {lambert} on {side}")));
            }
            if let Some(rb) = refined.filter(|&rb| len > rb) {
                return Err(fail(format!("|S{side}| = {len} > refined {rb}")));
            }
        }
        for e in average_vs_hw_exceptions(s)? {
            if e.in_region {
                return Err(fail(format!(
                    "average {} > HW value {} at index {} inside the comparison region",
                    e.average, e.hw_value, e.index
                )));
            }
            summary.exceptions.push(e);
        }
        summary.atoms_checked += 1;
        tally(
            &mut summary.pos,
            r.len_pos,
            r.lambert_pos,
            r.hw_pos_min,
            r.main_pos,
            r.refined_pos,
        );
        tally(
            &mut summary.neg,
            r.len_neg,
            r.lambert_neg,
            r.hw_neg_min,
            r.main_neg,
            r.refined_neg,
        );
        summary.both_tight += usize::from(r.tight_pos && r.tight_neg);
    }
    Ok(summary)
}

impl DominanceSummary {
    pub fn to_text(&self) -> String {
        let mut out = format!("n = {}: {} atoms with both signs\n", self.n, self.atoms_checked);
        out.push_str("side  main<hw  main=hw  main>hw  main<lambert  tight  refined  refined<main\n");
        for (name, t) in [("+", &self.pos), ("-", &self.neg)] {
            out.push_str(&format!(
                "{name:<4}  {:>7}  {:>7}  {:>7}  {:>12}  {:>5}  {:>7}  {:>12}\n",
                t.main_sharper,
                t.ties,
                t.main_weaker,
                t.below_lambert,
                t.tight,
                t.refined_available,
                t.refined_sharper
            ));
        }
        out.push_str(&format!("both sides tight: {}\n", self.both_tight));
        out.push_str(&format!(
            "average above an HW value outside the comparison region: {}\n",
            self.exceptions.len()
        ));
        for e in &self.exceptions {
            let side = match e.side {
                Side::Pos => "J",
                Side::Neg => "I",
            };
            out.push_str(&format!(
                "  {}  {}_{}: average {} > {}{}\n",
                e.seq,
                side,
                e.index,
                e.average,
                e.hw_value,
                if e.floored_exceeds { " (floored too)" } else { "" }
            ));
        }
        out
    }
}
