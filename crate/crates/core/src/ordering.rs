//! Normal (convex) orderings of the reduced positive root system and the
//! elementary inversions between them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::rootsys::{root_label, Root, RootSystem};

/// Upper bound on the reduced system for exhaustive enumeration.
pub const MAX_ENUMERATION_ROOTS: usize = 12;

/// A normal ordering, stored as indices into `RootSystem::reduced`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalOrdering {
    pub roots: Vec<usize>,
}

impl NormalOrdering {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `positions()[i]` is the place of reduced root `i` in the ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.roots.len()];
        for (p, r) in self.roots.iter().enumerate() {
            pos[*r] = p;
        }
        pos
    }

    pub fn roots<'a>(&self, rs: &'a RootSystem) -> Vec<&'a Root> {
        self.roots.iter().map(|i| &rs.reduced[*i]).collect()
    }

    pub fn labels(&self, rs: &RootSystem) -> Vec<String> {
        self.roots.iter().map(|i| rs.reduced[*i].to_string()).collect()
    }

    pub fn to_json(&self, rs: &RootSystem) -> serde_json::Value {
        let coords: Vec<&Vec<i64>> = self.roots.iter().map(|i| &rs.reduced[*i].coords).collect();
        serde_json::json!({ "roots": coords, "labels": self.labels(rs) })
    }

    pub fn from_coords(coords: &[Vec<i64>], rs: &RootSystem) -> Result<Self> {
        let roots = coords
            .iter()
            .map(|c| {
                rs.reduced_index(c)
                    .ok_or_else(|| Error::UnknownRoot(root_label(c)))
            })
            .collect::<Result<Vec<_>>>()?;
        let o = NormalOrdering { roots };
        if !validate(&o.roots, rs)? {
            return Err(Error::Parse(format!(
                "not a normal ordering: {}",
                o.labels(rs).join(",")
            )));
        }
        Ok(o)
    }
}

/// All `(a, b, a+b)` index triples inside the reduced system, `a < b`.
pub fn additive_triples(rs: &RootSystem) -> Vec<(usize, usize, usize)> {
    let red = &rs.reduced;
    let mut out = Vec::new();
    for a in 0..red.len() {
        for b in a + 1..red.len() {
            let sum: Vec<i64> = red[a].coords.iter().zip(&red[b].coords).map(|(x, y)| x + y).collect();
            if let Some(c) = rs.reduced_index(&sum) {
                out.push((a, b, c));
            }
        }
    }
    out
}

fn is_permutation(seq: &[usize], n: usize) -> bool {
    if seq.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in seq {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// Convexity check: every composite root sits between its two summands.
pub fn validate(seq: &[usize], rs: &RootSystem) -> Result<bool> {
    let n = rs.reduced.len();
    if !is_permutation(seq, n) {
        return Err(Error::NotAPermutation);
    }
    let mut pos = vec![0; n];
    for (p, r) in seq.iter().enumerate() {
        pos[*r] = p;
    }
    Ok(additive_triples(rs).into_iter().all(|(a, b, c)| {
        let (lo, hi) = if pos[a] < pos[b] { (pos[a], pos[b]) } else { (pos[b], pos[a]) };
        lo < pos[c] && pos[c] < hi
    }))
}

pub fn validate_roots(seq: &[Root], rs: &RootSystem) -> Result<bool> {
    let idx = seq
        .iter()
        .map(|r| rs.reduced_index(&r.coords).ok_or(Error::NotAPermutation))
        .collect::<Result<Vec<_>>>()?;
    validate(&idx, rs)
}

/// All normal orderings, lexicographically sorted by root index.
pub fn enumerate(rs: &RootSystem) -> Result<Vec<NormalOrdering>> {
    let n = rs.reduced.len();
    if n > MAX_ENUMERATION_ROOTS {
        return Err(Error::TooLarge(format!(
            "{} has {n} reduced positive roots (limit {MAX_ENUMERATION_ROOTS})",
            rs.spec
        )));
    }
    let triples = additive_triples(rs);
    let mut out = Vec::new();
    let mut placed = vec![false; n];
    let mut pos = vec![usize::MAX; n];
    let mut seq = Vec::with_capacity(n);
    extend(&triples, &mut placed, &mut pos, &mut seq, &mut out, n, None);
    Ok(out)
}

/// Lexicographically smallest normal ordering.
pub fn canonical(rs: &RootSystem) -> Result<NormalOrdering> {
    let n = rs.reduced.len();
    let triples = additive_triples(rs);
    let mut out = Vec::new();
    let mut placed = vec![false; n];
    let mut pos = vec![usize::MAX; n];
    let mut seq = Vec::with_capacity(n);
    extend(&triples, &mut placed, &mut pos, &mut seq, &mut out, n, Some(1));
    out.pop()
        .ok_or_else(|| Error::Internal("no normal ordering found".into()))
}

fn can_place(x: usize, triples: &[(usize, usize, usize)], placed: &[bool], pos: &[usize]) -> bool {
    for &(a, b, c) in triples {
        if c == x {
            // the composite must not follow both of its summands
            if placed[a] && placed[b] {
                return false;
            }
        } else if a == x || b == x {
            let other = if a == x { b } else { a };
            if placed[other] && !placed[c] {
                return false;
            }
            if placed[other] && placed[c] && pos[c] < pos[other] {
                return false;
            }
        }
    }
    true
}

fn extend(
    triples: &[(usize, usize, usize)],
    placed: &mut Vec<bool>,
    pos: &mut Vec<usize>,
    seq: &mut Vec<usize>,
    out: &mut Vec<NormalOrdering>,
    n: usize,
    limit: Option<usize>,
) {
    if limit.is_some_and(|l| out.len() >= l) {
        return;
    }
    if seq.len() == n {
        out.push(NormalOrdering { roots: seq.clone() });
        return;
    }
    for x in 0..n {
        if placed[x] || !can_place(x, triples, placed, pos) {
            continue;
        }
        placed[x] = true;
        pos[x] = seq.len();
        seq.push(x);
        extend(triples, placed, pos, seq, out, n, limit);
        seq.pop();
        placed[x] = false;
        pos[x] = usize::MAX;
    }
}

/// Index sets `{α, β} ∪ {kα + lβ}` for every pair with `α − β` not a root.
fn rank_two_blocks(rs: &RootSystem) -> Vec<BTreeSet<usize>> {
    let red = &rs.reduced;
    let mut blocks = BTreeSet::new();
    for a in 0..red.len() {
        for b in a + 1..red.len() {
            let diff: Vec<i64> = red[a].coords.iter().zip(&red[b].coords).map(|(x, y)| x - y).collect();
            if rs.is_root(&diff) {
                continue;
            }
            let mut set = BTreeSet::from([a, b]);
            for (c, g) in red.iter().enumerate() {
                if c == a || c == b {
                    continue;
                }
                if generated_by(&g.coords, &red[a].coords, &red[b].coords) {
                    set.insert(c);
                }
            }
            blocks.insert(set);
        }
    }
    blocks.into_iter().collect()
}

/// Whether `g = k·a + l·b` for positive integers `k, l`.
fn generated_by(g: &[i64], a: &[i64], b: &[i64]) -> bool {
    let bound = g.iter().sum::<i64>();
    for k in 1..=bound {
        for l in 1..=bound {
            if g.iter().zip(a).zip(b).all(|((x, y), z)| *x == k * y + l * z) {
                return true;
            }
        }
    }
    false
}

/// Orderings reachable by reversing one contiguous rank-2 block.
pub fn elementary_inversions(o: &NormalOrdering, rs: &RootSystem) -> Vec<NormalOrdering> {
    let pos = o.positions();
    let mut out = BTreeSet::new();
    for block in rank_two_blocks(rs) {
        let lo = block.iter().map(|i| pos[*i]).min().unwrap();
        let hi = block.iter().map(|i| pos[*i]).max().unwrap();
        if hi - lo + 1 != block.len() {
            continue;
        }
        let mut roots = o.roots.clone();
        roots[lo..=hi].reverse();
        if validate(&roots, rs).unwrap_or(false) {
            out.insert(NormalOrdering { roots });
        }
    }
    out.into_iter().collect()
}

/// The inversion graph: vertices are orderings, edges are elementary inversions.
#[derive(Debug, Clone)]
pub struct InversionGraph {
    pub orderings: Vec<NormalOrdering>,
    pub edges: Vec<(usize, usize)>,
}

impl InversionGraph {
    pub fn build(rs: &RootSystem) -> Result<Self> {
        let orderings = enumerate(rs)?;
        let index: BTreeMap<&NormalOrdering, usize> =
            orderings.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let mut edges = BTreeSet::new();
        for (i, o) in orderings.iter().enumerate() {
            for p in elementary_inversions(o, rs) {
                let j = *index
                    .get(&p)
                    .expect("inversion produced an ordering missing from the enumeration");
                edges.insert((i.min(j), i.max(j)));
            }
        }
        Ok(InversionGraph {
            orderings,
            edges: edges.into_iter().collect(),
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.orderings.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_json(&self, rs: &RootSystem) -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "algebra": rs.spec.to_string(),
            "count": self.orderings.len(),
            "orderings": self.orderings.iter().map(|o| o.to_json(rs)).collect::<Vec<_>>(),
            "edges": self.edges,
            "connected": self.is_connected(),
        })
    }

    pub fn to_dot(&self, rs: &RootSystem) -> String {
        let mut s = String::from("graph inversions {\n");
        for (i, o) in self.orderings.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{}\"];\n", o.labels(rs).join(",")));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  n{a} -- n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn inversion_connected(rs: &RootSystem) -> Result<bool> {
    Ok(InversionGraph::build(rs)?.is_connected())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn rs(s: &str) -> RootSystem {
        build_root_system(&s.parse().unwrap()).unwrap()
    }

    fn idx(rs: &RootSystem, coords: &[&[i64]]) -> Vec<usize> {
        coords.iter().map(|c| rs.reduced_index(c).unwrap()).collect()
    }

    #[test]
    fn validate_examples() {
        let a2 = rs("A2");
        assert!(validate(&idx(&a2, &[&[1, 0], &[1, 1], &[0, 1]]), &a2).unwrap());
        assert!(!validate(&idx(&a2, &[&[1, 0], &[0, 1], &[1, 1]]), &a2).unwrap());
        let b2 = rs("B2");
        assert!(validate(&idx(&b2, &[&[0, 1], &[1, 2], &[1, 1], &[1, 0]]), &b2).unwrap());
        assert_eq!(validate(&[0, 0, 1], &a2), Err(Error::NotAPermutation));
        assert_eq!(validate(&[0, 1], &a2), Err(Error::NotAPermutation));
    }

    #[test]
    fn counts() {
        for (name, n) in [("A1xA1", 2), ("A2", 2), ("B2", 2), ("G2", 2), ("A3", 16)] {
            assert_eq!(enumerate(&rs(name)).unwrap().len(), n, "{name}");
        }
        assert!(matches!(enumerate(&rs("B4")), Err(Error::TooLarge(_))));
    }

    #[test]
    fn endpoints_are_simple() {
        for name in ["A3", "B3", "C3", "gl(2|1)"] {
            let s = rs(name);
            for o in enumerate(&s).unwrap() {
                assert_eq!(s.reduced[o.roots[0]].height(), 1);
                assert_eq!(s.reduced[*o.roots.last().unwrap()].height(), 1);
            }
        }
    }

    #[test]
    fn canonical_is_first_listing() {
        let a2 = rs("A2");
        assert_eq!(canonical(&a2).unwrap().labels(&a2), ["α", "α+β", "β"]);
        let g2 = rs("G2");
        assert_eq!(
            canonical(&g2).unwrap().labels(&g2),
            ["α", "α+β", "2α+3β", "α+2β", "α+3β", "β"]
        );
        let b2 = rs("B2");
        assert_eq!(canonical(&b2).unwrap().labels(&b2), ["α", "α+β", "α+2β", "β"]);
    }

    #[test]
    fn inversion_examples() {
        let a2 = rs("A2");
        let o = canonical(&a2).unwrap();
        let inv = elementary_inversions(&o, &a2);
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].labels(&a2), ["β", "α+β", "α"]);
        let b2 = rs("B2");
        let inv = elementary_inversions(&canonical(&b2).unwrap(), &b2);
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].labels(&b2), ["β", "α+2β", "α+β", "α"]);
        let d2 = rs("A1xA1");
        let inv = elementary_inversions(&canonical(&d2).unwrap(), &d2);
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].labels(&d2), ["β", "α"]);
    }

    #[test]
    fn inversions_symmetric_and_connected() {
        for name in ["A2", "A3", "B2", "G2", "A1xA1", "B3", "C3", "gl(2|1)", "gl(1|2)"] {
            let s = rs(name);
            let all = enumerate(&s).unwrap();
            for o in &all {
                for p in elementary_inversions(o, &s) {
                    assert!(validate(&p.roots, &s).unwrap());
                    assert!(elementary_inversions(&p, &s).contains(o));
                }
            }
            assert!(inversion_connected(&s).unwrap(), "{name}");
        }
    }

    #[test]
    fn graph_output() {
        let a2 = rs("A2");
        let g = InversionGraph::build(&a2).unwrap();
        assert_eq!(g.edges, [(0, 1)]);
        assert!(g.to_dot(&a2).contains("n0 -- n1"));
    }
}
