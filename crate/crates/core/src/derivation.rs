//! Derivations between atoms and the poset they generate.
//!
//! A `(u, v)`-derivation replaces two terms `u`, `v` of a sequence by the
//! single term `u + v`. Derivations keep a minimal zero-sum sequence minimal,
//! so the derivations that stay inside `[-n, n]` turn the atoms over
//! `[-n, n]` into a graded poset: each step shortens the sequence by one.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::tight_family;
use crate::enumeration::{AtomRecord, AtomSet};
use crate::minimality::{is_atom, is_minimal_fast};
use crate::{Error, Result, ZSeq};

/// Removes one `u` and one `v` and inserts `u + v`.
pub fn derive(s: &ZSeq, u: i64, v: i64) -> Result<ZSeq> {
    let mut out = s.clone();
    if u == v {
        out.remove(u, 2)
            .map_err(|_| Error::MissingTerm { value: u, needed: 2 })?;
    } else {
        out.remove(u, 1)?;
        out.remove(v, 1)?;
    }
    out.insert(u.checked_add(v).ok_or(Error::Overflow)?, 1);
    Ok(out)
}

/// Every one-step derivation of `s`, one per unordered pair of term values.
pub fn all_derivations(s: &ZSeq) -> Vec<(i64, i64, ZSeq)> {
    let blocks: Vec<(i64, u32)> = s.iter().collect();
    let mut out = Vec::new();
    for (i, &(u, mu)) in blocks.iter().enumerate() {
        for &(v, _) in &blocks[i..] {
            if u == v && mu < 2 {
                continue;
            }
            let d = derive(s, u, v).expect("terms are present");
            out.push((u, v, d));
        }
    }
    out
}

/// `D_n(S)`: canonical forms of the derivations of `s` with norm at most `n`.
pub fn derived_set(s: &ZSeq, n: u32) -> Result<BTreeSet<ZSeq>> {
    if !is_atom(s) {
        return Err(Error::NotAtom(s.to_string()));
    }
    let n = i64::from(n);
    let mut out = BTreeSet::new();
    for (u, v, d) in all_derivations(s) {
        if d.inf_norm() > n {
            continue;
        }
        if d.contains(0) && d.len() > 1 {
            return Err(Error::Invariant(format!(
                "({u},{v})-derivation of atom {s} produced {d}, which holds a zero term"
            )));
        }
        out.insert(d.canon());
    }
    Ok(out)
}

/// Hasse diagram of `P_n`: nodes are the canonical atoms, an edge joins a
/// parent to each member of its `D_n`.
#[derive(Clone, Debug)]
pub struct DerivationPoset {
    pub n: u32,
    /// Same order as the source [`AtomSet`].
    pub nodes: Vec<ZSeq>,
    /// `(parent, child)` node indices, sorted.
    pub edges: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalSet {
    pub n: u32,
    pub members: BTreeSet<ZSeq>,
}

/// Builds `P_n`, checking that every derived sequence is minimal and present
/// in `atoms`.
pub fn build_poset(atoms: &AtomSet) -> Result<DerivationPoset> {
    let nodes: Vec<ZSeq> = atoms.iter().cloned().collect();
    let index: HashMap<&ZSeq, usize> = nodes.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = atoms.n;
    let per_node: Vec<Vec<(usize, usize)>> = nodes
        .par_iter()
        .enumerate()
        .map(|(p, s)| {
            derived_set(s, n)?
                .into_iter()
                .map(|child| {
                    if !is_minimal_fast(&child)?.is_minimal {
                        return Err(Error::Invariant(format!(
                            "{child}, derived from {s}, is not minimal"
                        )));
                    }
                    match index.get(&child) {
                        Some(&c) => Ok((p, c)),
                        None => Err(Error::IncompleteAtomSet {
                            parent: s.to_string(),
                            child: child.to_string(),
                        }),
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(DerivationPoset {
        n,
        nodes,
        edges: per_node.into_iter().flatten().collect(),
    })
}

impl DerivationPoset {
    pub fn index_of(&self, s: &ZSeq) -> Option<usize> {
        let c = s.canon();
        self.nodes.binary_search(&c).ok()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(_, c) in &self.edges {
            deg[c] += 1;
        }
        deg
    }

    pub fn children(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((p, 0)..(p + 1, 0)).map(|&(_, c)| c)
    }

    /// Every edge shortens its sequence by exactly one, and endpoints are nodes.
    pub fn is_graded(&self) -> bool {
        self.edges.iter().all(|&(p, c)| {
            p < self.nodes.len() && c < self.nodes.len() && self.nodes[c].len() + 1 == self.nodes[p].len()
        })
    }

    /// `r ≼ s`: `r` is reachable from `s` by zero or more derivation steps.
    pub fn precedes(&self, r: usize, s: usize) -> bool {
        let mut stack = vec![s];
        let mut seen = vec![false; self.nodes.len()];
        while let Some(x) = stack.pop() {
            if x == r {
                return true;
            }
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            // edges only go to shorter sequences
            stack.extend(
                self.children(x)
                    .filter(|&c| self.nodes[c].len() >= self.nodes[r].len()),
            );
        }
        false
    }

    pub fn maximal_elements(&self) -> MaximalSet {
        let deg = self.in_degrees();
        MaximalSet {
            n: self.n,
            members: self
                .nodes
                .iter()
                .zip(deg)
                .filter(|&(_, d)| d == 0)
                .map(|(s, _)| s.clone())
                .collect(),
        }
    }

    /// Node indices ordered by length descending, then canonical text ascending.
    fn display_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        let text: Vec<String> = self.nodes.iter().map(|s| s.to_string()).collect();
        order.sort_by(|&a, &b| {
            self.nodes[b]
                .len()
                .cmp(&self.nodes[a].len())
                .then_with(|| text[a].cmp(&text[b]))
        });
        order
    }

    /// Deterministic Graphviz digraph; nodes of equal length share a rank.
    pub fn to_dot(&self) -> String {
        let order = self.display_order();
        let mut id = vec![0; self.nodes.len()];
        for (k, &i) in order.iter().enumerate() {
            id[i] = k;
        }
        let mut out = String::new();
        let _ = writeln!(out, "digraph P{} {{", self.n);
        out.push_str("  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n");
        let mut ranks: BTreeMap<std::cmp::Reverse<u64>, Vec<usize>> = BTreeMap::new();
        for &i in &order {
            ranks
                .entry(std::cmp::Reverse(self.nodes[i].len()))
                .or_default()
                .push(i);
        }
        for (len, members) in &ranks {
            let _ = writeln!(out, "  {{ rank=same; // length {}", len.0);
            for &i in members {
                let _ = writeln!(out, "    n{} [label=\"{}\"];", id[i], self.nodes[i]);
            }
            out.push_str("  }\n");
        }
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&(p, c)| (id[p], id[c])).collect();
        edges.sort_unstable();
        for (p, c) in edges {
            let _ = writeln!(out, "  n{p} -> n{c};");
        }
        out.push_str("}\n");
        out
    }

    /// `{"schema":1,"n":..,"nodes":[atom objects],"edges":[[parent,child],..]}`
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct PosetFile<'a> {
            schema: u32,
            n: u32,
            nodes: Vec<AtomRecord>,
            edges: &'a BTreeSet<(usize, usize)>,
        }
        let file = PosetFile {
            schema: 1,
            n: self.n,
            nodes: self.nodes.iter().map(AtomRecord::from_seq).collect(),
            edges: &self.edges,
        };
        let mut text = serde_json::to_string(&file).expect("poset serializes");
        text.push('\n');
        text
    }
}

/// Least superset of `q` closed under `D_n`.
pub fn close_under_derivation<'a, I>(q: I, n: u32) -> Result<BTreeSet<ZSeq>>
where
    I: IntoIterator<Item = &'a ZSeq>,
{
    let mut closed = BTreeSet::new();
    let mut frontier: Vec<ZSeq> = Vec::new();
    for s in q {
        if !is_atom(s) || s.inf_norm() > i64::from(n) {
            return Err(Error::NotAtom(s.to_string()));
        }
        if closed.insert(s.canon()) {
            frontier.push(s.canon());
        }
    }
    while let Some(s) = frontier.pop() {
        for d in derived_set(&s, n)? {
            if closed.insert(d.clone()) {
                frontier.push(d);
            }
        }
    }
    Ok(closed)
}

/// `Q ∪ ⋃_{S∈Q} D_n(S)` with a single derivation step.
pub fn one_step_union<'a, I>(q: I, n: u32) -> Result<BTreeSet<ZSeq>>
where
    I: IntoIterator<Item = &'a ZSeq>,
{
    let mut out = BTreeSet::new();
    for s in q {
        out.insert(s.canon());
        out.extend(derived_set(s, n)?);
    }
    Ok(out)
}

/// Canonical `a^[b/g] · (−b)^[a/g]` for all `a, b ∈ [1, n]`.
pub fn diagonal_family(n: u32) -> Result<BTreeSet<ZSeq>> {
    let mut out = BTreeSet::new();
    for a in 1..=n {
        for b in 1..=n {
            out.insert(tight_family(a, b)?.canon());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::enumerate_atoms;
    use crate::parse_seq;

    fn seq(text: &str) -> ZSeq {
        parse_seq(text).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<ZSeq> {
        items.iter().map(|t| seq(t).canon()).collect()
    }

    #[test]
    fn derive_examples() {
        assert_eq!(derive(&seq("2^3,-3^2"), 2, -3).unwrap(), seq("2^2,-3,-1"));
        assert_eq!(derive(&seq("2^3,-3^2"), 2, 2).unwrap(), seq("4,2,-3^2"));
        assert_eq!(derive(&seq("2,-2"), 2, -2).unwrap(), seq("0"));
        assert_eq!(derive(&seq("2^3,-3^2"), -3, -3).unwrap(), seq("2^3,-6"));
    }

    #[test]
    fn derive_errors() {
        assert!(matches!(
            derive(&seq("2,-2"), 2, 2),
            Err(Error::MissingTerm { value: 2, needed: 2 })
        ));
        assert!(matches!(
            derive(&seq("2,-2"), 3, -2),
            Err(Error::MissingTerm { value: 3, .. })
        ));
    }

    #[test]
    fn derived_set_examples() {
        assert_eq!(derived_set(&seq("2^3,-3^2"), 3).unwrap(), set(&["2^2,-3,-1"]));
        assert_eq!(derived_set(&seq("1,-1"), 1).unwrap(), set(&["0"]));
        assert_eq!(
            derived_set(&seq("1^3,-3"), 3).unwrap(),
            set(&["2,1,-3", "1^2,-2"])
        );
        assert!(derived_set(&seq("0"), 3).unwrap().is_empty());
        assert!(matches!(
            derived_set(&seq("1,-1,2,-2"), 3),
            Err(Error::NotAtom(_))
        ));
    }

    #[test]
    fn derived_set_commutes_with_negation() {
        for s in enumerate_atoms(5).unwrap().iter() {
            assert_eq!(derived_set(s, 5).unwrap(), derived_set(&s.negate(), 5).unwrap());
        }
    }

    #[test]
    fn poset_n1() {
        let p = build_poset(&enumerate_atoms(1).unwrap()).unwrap();
        assert_eq!(p.nodes.len(), 2);
        assert_eq!(p.edges.len(), 1);
        let (a, b) = *p.edges.iter().next().unwrap();
        assert_eq!((&p.nodes[a], &p.nodes[b]), (&seq("1,-1"), &seq("0")));
        assert_eq!(p.maximal_elements().members, set(&["1,-1"]));
    }

    #[test]
    fn poset_n3_edges() {
        let p = build_poset(&enumerate_atoms(3).unwrap()).unwrap();
        // independent recount: every pair of every atom, kept when within norm 3
        let mut expect = BTreeSet::new();
        for s in &p.nodes {
            let terms: Vec<i64> = s.desc_terms().collect();
            for i in 0..terms.len() {
                for j in i + 1..terms.len() {
                    let mut rest: Vec<i64> = terms.clone();
                    rest.remove(j);
                    rest[i] += terms[j];
                    let d = ZSeq::from_terms(rest);
                    if d.inf_norm() <= 3 {
                        expect.insert((s.clone(), d.canon()));
                    }
                }
            }
        }
        let got: BTreeSet<_> = p
            .edges
            .iter()
            .map(|&(a, b)| (p.nodes[a].clone(), p.nodes[b].clone()))
            .collect();
        assert_eq!(got, expect);
        assert_eq!(p.edges.len(), 13);
        assert!(p.is_graded());
    }

    #[test]
    fn precedes_is_reflexive_transitive() {
        let p = build_poset(&enumerate_atoms(3).unwrap()).unwrap();
        let top = p.index_of(&seq("2^3,-3^2")).unwrap();
        let zero = p.index_of(&seq("0")).unwrap();
        let pair = p.index_of(&seq("2,-2")).unwrap();
        assert!(p.precedes(top, top));
        assert!(p.precedes(zero, top));
        assert!(p.precedes(pair, top));
        assert!(!p.precedes(top, zero));
    }

    #[test]
    fn closure_examples() {
        let m3 = set(&["2^3,-3^2", "1^3,-3"]);
        let all = enumerate_atoms(3).unwrap().atoms;
        assert_eq!(close_under_derivation(&m3, 3).unwrap(), all);
        assert_eq!(close_under_derivation(&set(&["0"]), 3).unwrap(), set(&["0"]));
        let a2 = enumerate_atoms(2).unwrap().atoms;
        assert_eq!(close_under_derivation(&a2, 2).unwrap(), a2);
        assert!(close_under_derivation(&set(&["1,-1,2,-2"]), 3).is_err());
        assert!(close_under_derivation(&set(&["3,-3"]), 2).is_err());
    }

    #[test]
    fn one_step_union_misses_deep_atoms() {
        let m3 = set(&["2^3,-3^2", "1^3,-3"]);
        let one = one_step_union(&m3, 3).unwrap();
        assert!(!one.contains(&seq("2,-2").canon()));
        assert!(one.len() < 9);
    }

    #[test]
    fn dot_shapes() {
        let p = build_poset(&enumerate_atoms(1).unwrap()).unwrap();
        let dot = p.to_dot();
        assert_eq!(dot.matches("[label=").count(), 2);
        assert_eq!(dot.matches(" -> ").count(), 1);
        assert!(dot.contains("n0 -> n1;"));

        let single = DerivationPoset {
            n: 1,
            nodes: vec![seq("0")],
            edges: BTreeSet::new(),
        };
        let dot = single.to_dot();
        assert!(dot.starts_with("digraph P1 {") && dot.ends_with("}\n"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn poset_json_layout() {
        let p = build_poset(&enumerate_atoms(1).unwrap()).unwrap();
        assert_eq!(
            p.to_json(),
            "{\"schema\":1,\"n\":1,\"nodes\":[{\"pos\":[],\"neg\":[],\"zero\":1},{\"pos\":[[1,1]],\"neg\":[[-1,1]],\"zero\":0}],\"edges\":[[1,0]]}\n"
        );
    }

    #[test]
    fn diagonal_n2() {
        assert_eq!(diagonal_family(2).unwrap(), set(&["1,-1", "2,-2", "2,-1^2"]));
    }
}
