//! Acceptance suite. Each test prints one `[PASS]` or `[FAIL]` line, written
//! straight to stdout so it shows up without `--nocapture`.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;
use zerosum_core::derivation::{all_derivations, close_under_derivation, diagonal_family};
use zerosum_core::enumeration::brute_force_atoms;
use zerosum_core::{
    bound_report, build_poset, enumerate_atoms, is_minimal_fast, is_minimal_oracle, parse_seq, tight_family,
    ZSeq,
};

fn report(id: u32, title: &str, pass: bool, elapsed: Duration, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let line = format!(
        "[{tag}] C{id} {title} ({:.3} s){}{detail}\n",
        elapsed.as_secs_f64(),
        if detail.is_empty() { "" } else { ": " }
    );
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(pass, "C{id} {title}: {detail}");
}

fn canon(text: &str) -> ZSeq {
    parse_seq(text).unwrap().canon()
}

fn canon_set(items: &[&str]) -> BTreeSet<ZSeq> {
    items.iter().map(|t| canon(t)).collect()
}

fn zs(cache: &TempDir, args: &[&str]) -> String {
    let o = Command::new(env!("CARGO_BIN_EXE_zs"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache.path())
        .env_remove("ZS_CACHE_DIR")
        .output()
        .expect("run zs");
    assert!(
        o.status.success(),
        "zs {args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn two_sided(n: u32) -> Vec<ZSeq> {
    enumerate_atoms(n)
        .unwrap()
        .iter()
        .filter(|s| s.len() > 1 && !s.contains(0))
        .cloned()
        .collect()
}

#[test]
fn c01_m3_reproduction() {
    let cache = TempDir::new().unwrap();
    let t = Instant::now();
    let out = zs(&cache, &["maximal", "--n", "3"]);
    let elapsed = t.elapsed();
    let got: BTreeSet<ZSeq> = out.lines().map(canon).collect();
    let want = canon_set(&["2^3,-3^2", "1^3,-3"]);
    let exact = got == want && out.lines().count() == 2;
    report(
        1,
        "maximal --n 3 is {2^3·(-3)^2, 1^3·(-3)}",
        exact && elapsed < Duration::from_secs(1),
        elapsed,
        &if exact {
            String::new()
        } else {
            format!("got {out:?}")
        },
    );
}

#[test]
fn c02_containment_up_to_5() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=5 {
        let m = build_poset(&enumerate_atoms(n).unwrap())
            .unwrap()
            .maximal_elements();
        let diag = diagonal_family(n).unwrap();
        bad.extend(m.members.difference(&diag).map(|s| format!("n={n}: {s}")));
    }
    let elapsed = t.elapsed();
    report(
        2,
        "M_n inside the diagonal family for n in [1,5]",
        bad.is_empty() && elapsed < Duration::from_secs(10),
        elapsed,
        &bad.join("; "),
    );
}

#[test]
fn c03_m6_exceptions() {
    let cache = TempDir::new().unwrap();
    let t = Instant::now();
    let out = zs(
        &cache,
        &["maximal", "--n", "6", "--check-diagonal", "--format", "json"],
    );
    let elapsed = t.elapsed();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let got: BTreeSet<ZSeq> = v["outside_diagonal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| canon(s.as_str().unwrap()))
        .collect();
    let want = canon_set(&["2^2,3,5,-6^2", "1,3,4^2,-6^2"]);
    let detail = got.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
    report(
        3,
        "M_6 minus the diagonal family",
        got == want && elapsed < Duration::from_secs(60),
        elapsed,
        &detail,
    );
}

#[test]
fn c04_worked_example() {
    let cache = TempDir::new().unwrap();
    let t = Instant::now();
    let out = zs(&cache, &["bounds", "--seq", "3,4^2,-1^2,-9", "--format", "json"]);
    let elapsed = t.elapsed();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let got = (
        (v["lambert_pos"].as_i64(), v["lambert_neg"].as_i64()),
        (v["hw_pos_min"].as_i64(), v["hw_neg_min"].as_i64()),
        (v["main_pos"].as_i64(), v["main_neg"].as_i64()),
        (v["tight_pos"].as_bool(), v["tight_neg"].as_bool()),
    );
    let want = (
        (Some(9), Some(4)),
        (Some(4), Some(4)),
        (Some(3), Some(3)),
        (Some(true), Some(true)),
    );
    report(
        4,
        "bounds for 3·4^2·(-1)^2·(-9)",
        got == want,
        elapsed,
        &format!("{got:?}"),
    );
}

#[test]
fn c05_tight_family() {
    let t = Instant::now();
    let mut not_minimal = Vec::new();
    let mut not_tight = Vec::new();
    for a in 1..=12u32 {
        for b in 1..=12u32 {
            let s = tight_family(a, b).unwrap();
            if !is_minimal_fast(&s).unwrap().is_minimal {
                not_minimal.push(format!("({a},{b})"));
            }
            let r = bound_report(&s).unwrap();
            if r.main_pos != r.len_pos || r.main_neg != r.len_neg {
                not_tight.push(format!(
                    "({a},{b}) {s}: main ({}, {}) vs len ({}, {})",
                    r.main_pos, r.main_neg, r.len_pos, r.len_neg
                ));
            }
        }
    }
    let elapsed = t.elapsed();
    let pass = not_minimal.is_empty() && not_tight.is_empty() && elapsed < Duration::from_secs(5);
    let detail = if not_tight.is_empty() && not_minimal.is_empty() {
        String::new()
    } else {
        format!(
            "{} pairs not minimal, {} pairs not tight, first {}",
            not_minimal.len(),
            not_tight.len(),
            not_tight.first().cloned().unwrap_or_default()
        )
    };
    report(
        5,
        "tight_family(a,b) tight for all a,b in [1,12]",
        pass,
        elapsed,
        &detail,
    );
}

/// A uniformly seeded zero-sum sequence of length 2..=14 with nonzero terms in [-12, 12].
fn random_zero_sum(rng: &mut ChaCha8Rng) -> ZSeq {
    loop {
        let len = rng.gen_range(2..=14);
        let mut terms: Vec<i64> = (0..len - 1)
            .map(|_| {
                let v = rng.gen_range(1..=12);
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let last = -terms.iter().sum::<i64>();
        if last != 0 && last.abs() <= 12 {
            terms.push(last);
            return ZSeq::from_terms(terms);
        }
    }
}

#[test]
fn c06_lemma_and_oracle_agreement() {
    let t = Instant::now();
    let mut problems = Vec::new();
    let mut derivations = 0usize;
    for n in 1..=5 {
        for s in enumerate_atoms(n).unwrap().iter() {
            for (u, v, d) in all_derivations(s) {
                derivations += 1;
                if !is_minimal_fast(&d).unwrap().is_minimal {
                    problems.push(format!("({u},{v})-derivation of {s}"));
                }
            }
        }
    }
    let mut samples: Vec<ZSeq> = (1..=4).flat_map(|n| enumerate_atoms(n).unwrap().atoms).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2e50);
    samples.extend((0..10_000).map(|_| random_zero_sum(&mut rng)));
    let mut minimal = 0usize;
    for s in &samples {
        let fast = is_minimal_fast(s).unwrap().is_minimal;
        let oracle = is_minimal_oracle(s).unwrap().is_minimal;
        minimal += usize::from(oracle);
        if fast != oracle {
            problems.push(format!("{s}: fast {fast}, oracle {oracle}"));
        }
    }
    let elapsed = t.elapsed();
    let summary = format!(
        "{derivations} derivations, {} sequences ({minimal} minimal), {} disagreements",
        samples.len(),
        problems.len()
    );
    let detail = match problems.first() {
        Some(p) => format!("{summary}, first {p}"),
        None => summary,
    };
    report(
        6,
        "derivations stay minimal, fast test agrees with oracle",
        problems.is_empty(),
        elapsed,
        &detail,
    );
}

#[test]
fn c07_dominance_chain() {
    let t = Instant::now();
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for s in two_sided(6) {
        checked += 1;
        let f = s.split_form().unwrap();
        let r = bound_report(&s).unwrap();
        let sides = [
            ("+", r.len_pos, r.main_pos, f.avg_neg().unwrap(), &r.hw_pos),
            ("-", r.len_neg, r.main_neg, f.avg_pos().unwrap(), &r.hw_neg),
        ];
        for (side, len, main, avg, hw) in sides {
            if len > main {
                violations.push(format!("{s}: len{side} {len} > floored average {main}"));
            }
            for &u in hw {
                if avg > Ratio::from_integer(u) {
                    violations.push(format!("{s}: average {avg} > HW {u} on side {side}"));
                }
            }
        }
    }
    let elapsed = t.elapsed();
    let summary = format!("{checked} atoms, {} violations", violations.len());
    let detail = if violations.is_empty() {
        summary
    } else {
        format!("{summary}: {}", violations.join("; "))
    };
    report(
        7,
        "len ≤ ⌊average⌋ ≤ every HW bound, both sides, n ≤ 6",
        violations.is_empty(),
        elapsed,
        &detail,
    );
}

#[test]
fn c08_enumeration_matches_brute_force() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=4 {
        let fast = enumerate_atoms(n).unwrap();
        let slow = brute_force_atoms(n).unwrap();
        if fast.atoms != slow.atoms {
            bad.push(format!("n={n}: {} vs {}", fast.len(), slow.len()));
        }
    }
    report(
        8,
        "enumerate_atoms = brute force for n in [1,4]",
        bad.is_empty(),
        t.elapsed(),
        &bad.join("; "),
    );
}

#[test]
fn c09_closure_completeness() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=6 {
        let atoms = enumerate_atoms(n).unwrap();
        let m = build_poset(&atoms).unwrap().maximal_elements();
        let closed = close_under_derivation(&m.members, n).unwrap();
        if closed != atoms.atoms {
            bad.push(format!("n={n}: {} of {}", closed.len(), atoms.len()));
        }
    }
    report(
        9,
        "closure of M_n is every atom for n in [1,6]",
        bad.is_empty(),
        t.elapsed(),
        &bad.join("; "),
    );
}

#[test]
fn c10_figure_p3() {
    let labels = [
        "2^3,-3^2",
        "2^2,-3,-1",
        "2,1,-3",
        "2,-2",
        "0",
        "1^3,-3",
        "1^2,-2",
        "3,-3",
        "1,-1",
    ];
    let t = Instant::now();
    let nodes: BTreeSet<ZSeq> = build_poset(&enumerate_atoms(3).unwrap())
        .unwrap()
        .nodes
        .into_iter()
        .collect();
    let cache_a = TempDir::new().unwrap();
    let cache_b = TempDir::new().unwrap();
    let first = zs(&cache_a, &["poset", "--n", "3"]);
    let second = zs(&cache_b, &["poset", "--n", "3"]);
    let warm = zs(&cache_a, &["poset", "--n", "3"]);
    let elapsed = t.elapsed();
    let same_nodes = nodes == canon_set(&labels);
    let deterministic = first == second && first == warm;
    report(
        10,
        "P_3 has the nine expected labels, DOT is byte-identical across runs",
        same_nodes && deterministic,
        elapsed,
        &format!("labels match {same_nodes}, deterministic {deterministic}"),
    );
}
