//! Complete enumeration of the atoms over `[-n, n]`, up to negation.
//!
//! Every atom with both signs pairs a partition of some common sum `s` (the
//! positive half) with another partition of `s` (the negated half). Both
//! halves have at most `n` parts each no larger than `n`, so `s ≤ n²` and the
//! search below is complete. Pairs are filtered by the average bound
//! `|S⁺| ≤ ⌊s/|S⁻|⌋`, `|S⁻| ≤ ⌊s/|S⁺|⌋` before the minimality test.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::minimality::{is_minimal_fast, is_minimal_oracle};
use crate::{Error, Result, ZSeq, DEFAULT_N_MAX};

/// Bumped whenever enumeration output could change; part of cache keys.
pub const ENGINE_VERSION: u32 = 1;

/// Largest `n` accepted by [`brute_force_atoms`].
pub const BRUTE_FORCE_MAX_N: u32 = 4;

const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub engine_version: u32,
    pub method: String,
}

/// The negation-canonical atoms over `[-n, n]`.
#[derive(Clone, Debug)]
pub struct AtomSet {
    pub n: u32,
    pub atoms: BTreeSet<ZSeq>,
    pub provenance: Provenance,
}

impl PartialEq for AtomSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.atoms == other.atoms
    }
}

impl Eq for AtomSet {}

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Apply the average-bound filter before testing minimality.
    pub prune: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    pub n_max: u32,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            prune: true,
            jobs: None,
            n_max: DEFAULT_N_MAX,
        }
    }
}

/// All partitions of `total` into at most `max_parts` parts, each at most
/// `max_part`. Parts are non-increasing; partitions come out in descending
/// lexicographic order.
pub fn bounded_partitions(total: u32, max_part: u32, max_parts: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, cap: u32, slots: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        // remaining slots must be able to absorb the rest
        if slots == 0 || u64::from(cap) * u64::from(slots) < u64::from(rest) {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        rec(total, max_part, max_parts, &mut Vec::new(), &mut out);
    }
    out
}

fn check_n(n: u32, max: u32) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::NOutOfRange { n, max });
    }
    Ok(())
}

fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Atoms of the slice with common sum `s`.
fn atoms_with_sum(s: u32, n: u32, prune: bool) -> Vec<ZSeq> {
    let parts = bounded_partitions(s, n, n);
    let mut found = Vec::new();
    for pos in &parts {
        for neg in &parts {
            // (neg, pos) is the negation of (pos, neg)
            if pos < neg {
                continue;
            }
            let (lp, ln) = (pos.len() as u32, neg.len() as u32);
            if prune && (lp > s / ln || ln > s / lp) {
                continue;
            }
            let mut cand = ZSeq::from_terms(pos.iter().map(|&a| i64::from(a)));
            for &b in neg {
                cand.insert(-i64::from(b), 1);
            }
            if is_minimal_fast(&cand).is_ok_and(|v| v.is_minimal) {
                found.push(cand.canon());
            }
        }
    }
    found
}

pub fn enumerate_atoms(n: u32) -> Result<AtomSet> {
    enumerate_atoms_with(n, &EnumOptions::default())
}

pub fn enumerate_atoms_with(n: u32, opts: &EnumOptions) -> Result<AtomSet> {
    check_n(n, opts.n_max)?;
    let prune = opts.prune;
    let slices: Vec<Vec<ZSeq>> = run_in_pool(opts.jobs, || {
        (1..=n * n)
            .into_par_iter()
            .map(|s| atoms_with_sum(s, n, prune))
            .collect()
    })?;
    let mut atoms: BTreeSet<ZSeq> = slices.into_iter().flatten().collect();
    atoms.insert(ZSeq::power(0, 1));
    for a in 1..=i64::from(n) {
        atoms.insert(ZSeq::from_terms([a, -a]));
    }
    Ok(AtomSet {
        n,
        atoms,
        provenance: Provenance {
            engine_version: ENGINE_VERSION,
            method: if prune {
                "partition-pairing"
            } else {
                "partition-pairing-unpruned"
            }
            .into(),
        },
    })
}

/// Exhaustive search over all multisets with terms in `[-n, n] \ {0}` and
/// length at most `2n`, filtered by the brute-force oracle.
pub fn brute_force_atoms(n: u32) -> Result<AtomSet> {
    check_n(n, BRUTE_FORCE_MAX_N)?;
    let values: Vec<i64> = (1..=i64::from(n)).flat_map(|v| [v, -v]).collect();
    let max_len = 2 * n;
    let mut atoms = BTreeSet::new();
    atoms.insert(ZSeq::power(0, 1));

    fn rec(values: &[i64], idx: usize, room: u32, cur: &mut ZSeq, atoms: &mut BTreeSet<ZSeq>) {
        if idx == values.len() {
            if cur.len() >= 2 && matches!(cur.sum(), Ok(0)) {
                if let Ok(v) = is_minimal_oracle(cur) {
                    if v.is_minimal {
                        atoms.insert(cur.canon());
                    }
                }
            }
            return;
        }
        for m in 0..=room {
            cur.insert(values[idx], m);
            rec(values, idx + 1, room - m, cur, atoms);
            if m > 0 {
                cur.remove(values[idx], m).expect("just inserted");
            }
        }
    }
    rec(&values, 0, max_len, &mut ZSeq::new(), &mut atoms);

    Ok(AtomSet {
        n,
        atoms,
        provenance: Provenance {
            engine_version: ENGINE_VERSION,
            method: "brute-force".into(),
        },
    })
}

impl AtomSet {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, s: &ZSeq) -> bool {
        self.atoms.contains(&s.canon())
    }

    pub fn iter(&self) -> impl Iterator<Item = &ZSeq> {
        self.atoms.iter()
    }

    /// Checks every membership invariant of a complete atom set.
    pub fn validate(&self) -> Result<()> {
        let n = i64::from(self.n);
        for s in &self.atoms {
            if s.inf_norm() > n {
                return Err(Error::Schema(format!(
                    "{s} has norm {} but n = {}",
                    s.inf_norm(),
                    self.n
                )));
            }
            if !is_minimal_fast(s).is_ok_and(|v| v.is_minimal) {
                return Err(Error::NotAtom(s.to_string()));
            }
            if !s.is_canonical() {
                return Err(Error::Schema(format!("{s} is not negation-canonical")));
            }
        }
        let required = std::iter::once(ZSeq::power(0, 1)).chain((1..=n).map(|a| ZSeq::from_terms([a, -a])));
        for r in required {
            if !self.atoms.contains(&r) {
                return Err(Error::Schema(format!("missing atom {r}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = AtomFile {
            schema: SCHEMA,
            n: self.n,
            count: self.atoms.len(),
            atoms: self.atoms.iter().map(AtomRecord::from_seq).collect(),
        };
        let mut text = serde_json::to_string(&file).expect("atom file serializes");
        text.push('\n');
        text
    }

    /// Parses and re-validates an atom file.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AtomFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if file.schema != SCHEMA {
            return Err(Error::Schema(format!("unsupported schema {}", file.schema)));
        }
        if file.n == 0 {
            return Err(Error::Schema("n must be positive".into()));
        }
        if file.count != file.atoms.len() {
            return Err(Error::Schema(format!(
                "count {} but {} atoms listed",
                file.count,
                file.atoms.len()
            )));
        }
        let mut atoms = BTreeSet::new();
        for rec in &file.atoms {
            let s = rec.to_seq()?;
            if !atoms.insert(s.clone()) {
                return Err(Error::Schema(format!("duplicate atom {s}")));
            }
        }
        let set = AtomSet {
            n: file.n,
            atoms,
            provenance: Provenance {
                engine_version: ENGINE_VERSION,
                method: "loaded".into(),
            },
        };
        set.validate()?;
        Ok(set)
    }
}

/// Atom JSON object: `pos`/`neg` hold `[value, mult]` pairs ascending by
/// signed value, `zero` the multiplicity of the zero term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub pos: Vec<(i64, u32)>,
    pub neg: Vec<(i64, u32)>,
    pub zero: u32,
}

impl AtomRecord {
    pub fn from_seq(s: &ZSeq) -> Self {
        Self {
            pos: s.positive_part().iter().collect(),
            neg: s.negative_part().iter().collect(),
            zero: s.multiplicity(0),
        }
    }

    pub fn to_seq(&self) -> Result<ZSeq> {
        let ascending = |side: &[(i64, u32)]| side.windows(2).all(|w| w[0].0 < w[1].0);
        if !ascending(&self.pos) || !ascending(&self.neg) {
            return Err(Error::Schema("pos/neg must be strictly ascending".into()));
        }
        if self.pos.iter().any(|&(v, m)| v <= 0 || m == 0) || self.neg.iter().any(|&(v, m)| v >= 0 || m == 0)
        {
            return Err(Error::Schema("bad sign or zero multiplicity".into()));
        }
        if self.zero > 1 {
            return Err(Error::Schema(format!("zero multiplicity {}", self.zero)));
        }
        let mut s = ZSeq::from_pairs(self.pos.iter().chain(&self.neg).copied());
        s.insert(0, self.zero);
        Ok(s)
    }
}

#[derive(Serialize, Deserialize)]
struct AtomFile {
    schema: u32,
    n: u32,
    count: usize,
    atoms: Vec<AtomRecord>,
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failed write leaves no partial file.
pub fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn save_atoms(atoms: &AtomSet, path: &Path) -> Result<()> {
    write_atomically(path, &atoms.to_json())
}

pub fn load_atoms(path: &Path) -> Result<AtomSet> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    AtomSet::from_json(&text)
}

/// Directory of atom files keyed by `n` and [`ENGINE_VERSION`].
#[derive(Clone, Debug)]
pub struct AtomCache {
    dir: PathBuf,
}

impl AtomCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for(&self, n: u32) -> PathBuf {
        self.dir.join(format!("atoms-v{ENGINE_VERSION}-n{n}.json"))
    }

    /// Loads a valid cached set, or enumerates and stores it. Unreadable or
    /// invalid cache files are recomputed and overwritten.
    pub fn get(&self, n: u32, opts: &EnumOptions) -> Result<AtomSet> {
        check_n(n, opts.n_max)?;
        let path = self.path_for(n);
        if let Ok(set) = load_atoms(&path) {
            if set.n == n {
                return Ok(set);
            }
        }
        let set = enumerate_atoms_with(n, opts)?;
        fs::create_dir_all(&self.dir).map_err(|source| Error::Io {
            path: self.dir.clone(),
            source,
        })?;
        save_atoms(&set, &path)?;
        Ok(set)
    }
}
