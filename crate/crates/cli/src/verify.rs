//! Cross-module invariant suite behind `zs verify`.

use std::collections::BTreeSet;

use zerosum_core::bounds::dominance_scan;
use zerosum_core::derivation::{all_derivations, close_under_derivation, diagonal_family};
use zerosum_core::enumeration::{brute_force_atoms, BRUTE_FORCE_MAX_N};
use zerosum_core::{build_poset, is_minimal_fast, is_minimal_oracle, parse_seq, AtomSet, ZSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

fn outcome(name: &'static str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check {
            name,
            status: Status::Pass,
            detail,
        },
        Err(detail) => Check {
            name,
            status: Status::Fail,
            detail,
        },
    }
}

fn skip(name: &'static str, detail: &str) -> Check {
    Check {
        name,
        status: Status::Skip,
        detail: detail.to_string(),
    }
}

/// The two maximal atoms over `[-6, 6]` outside the diagonal family.
pub fn m6_exceptions() -> BTreeSet<ZSeq> {
    ["2^2,3,5,-6^2", "1,3,4^2,-6^2"]
        .iter()
        .map(|t| parse_seq(t).expect("literal").canon())
        .collect()
}

fn join(items: &BTreeSet<ZSeq>) -> String {
    items.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("; ")
}

/// Runs every check for `atoms` (a complete set over `[-n, n]`); `previous`
/// is the set for `n - 1`, when `n > 1`.
pub fn run(atoms: &AtomSet, previous: Option<&AtomSet>) -> Vec<Check> {
    let n = atoms.n;
    let mut checks = Vec::new();

    checks.push(outcome(
        "atom set invariants",
        atoms
            .validate()
            .map(|_| format!("{} atoms", atoms.len()))
            .map_err(|e| e.to_string()),
    ));

    checks.push(if n <= BRUTE_FORCE_MAX_N {
        outcome(
            "enumeration = brute force",
            match brute_force_atoms(n) {
                Ok(b) if &b == atoms => Ok(format!("{} atoms", b.len())),
                Ok(b) => Err(format!(
                    "only enumerated: [{}]; only brute force: [{}]",
                    join(&atoms.atoms.difference(&b.atoms).cloned().collect()),
                    join(&b.atoms.difference(&atoms.atoms).cloned().collect())
                )),
                Err(e) => Err(e.to_string()),
            },
        )
    } else {
        skip("enumeration = brute force", "n > 4")
    });

    checks.push(outcome("fast = oracle minimality", {
        let mut compared = 0;
        let mut err = None;
        for s in atoms.iter().filter(|s| s.len() <= 14) {
            for cand in std::iter::once(s.clone()).chain(all_derivations(s).into_iter().map(|d| d.2)) {
                let (f, o) = (is_minimal_fast(&cand), is_minimal_oracle(&cand));
                match (f, o) {
                    (Ok(f), Ok(o)) if f.is_minimal == o.is_minimal => compared += 1,
                    _ => {
                        err = Some(format!("disagreement on {cand}"));
                        break;
                    }
                }
            }
        }
        err.map_or_else(|| Ok(format!("{compared} sequences")), Err)
    }));

    checks.push(outcome("derivations stay minimal", {
        let mut count = 0;
        let mut err = None;
        'outer: for s in atoms.iter() {
            for (u, v, d) in all_derivations(s) {
                if !is_minimal_fast(&d).is_ok_and(|r| r.is_minimal) {
                    err = Some(format!("({u},{v})-derivation of {s} gives non-minimal {d}"));
                    break 'outer;
                }
                count += 1;
            }
        }
        err.map_or_else(|| Ok(format!("{count} derivations")), Err)
    }));

    let poset = build_poset(atoms);
    checks.push(outcome(
        "poset is graded",
        match &poset {
            Ok(p) if p.is_graded() => Ok(format!("{} edges", p.edges.len())),
            Ok(_) => Err("an edge does not shorten its sequence by one".into()),
            Err(e) => Err(e.to_string()),
        },
    ));

    checks.push(outcome(
        "bound dominance",
        dominance_scan(atoms)
            .map(|s| {
                format!(
                    "{} atoms, {} comparison exceptions outside the region",
                    s.atoms_checked,
                    s.exceptions.len()
                )
            })
            .map_err(|e| e.to_string()),
    ));

    let Ok(poset) = poset else {
        return checks;
    };
    let maximal = poset.maximal_elements().members;

    checks.push(outcome(
        "closure of maximal elements",
        match close_under_derivation(&maximal, n) {
            Ok(c) if c == atoms.atoms => Ok(format!("{} maximal, {} atoms", maximal.len(), c.len())),
            Ok(c) => Err(format!("closure has {} atoms, expected {}", c.len(), atoms.len())),
            Err(e) => Err(e.to_string()),
        },
    ));

    checks.push(match diagonal_family(n) {
        Err(e) => outcome("maximal vs diagonal family", Err(e.to_string())),
        Ok(diag) => {
            let outside: BTreeSet<ZSeq> = maximal.difference(&diag).cloned().collect();
            if n <= 5 {
                outcome(
                    "maximal vs diagonal family",
                    if outside.is_empty() {
                        Ok("contained".into())
                    } else {
                        Err(format!("outside: {}", join(&outside)))
                    },
                )
            } else if n == 6 {
                outcome(
                    "maximal vs diagonal family",
                    if outside == m6_exceptions() {
                        Ok(format!("two known exceptions: {}", join(&outside)))
                    } else {
                        Err(format!("outside: {}", join(&outside)))
                    },
                )
            } else {
                skip("maximal vs diagonal family", "no reference data for n > 6")
            }
        }
    });

    checks.push(match previous {
        None => skip("monotone in n", "n = 1"),
        Some(prev) => outcome(
            "monotone in n",
            if prev.atoms.is_subset(&atoms.atoms) {
                Ok(format!("{} ⊆ {}", prev.len(), atoms.len()))
            } else {
                Err(format!("atoms for n = {} are not all present", prev.n))
            },
        ),
    });

    checks
}

pub fn render(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        out.push_str(&format!("{status}  {:<width$}  {}\n", c.name, c.detail));
    }
    out
}
