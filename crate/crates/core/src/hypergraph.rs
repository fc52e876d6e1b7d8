//! Complete sub-boxes of multipartite hypergraphs.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Class-size guard for [`max_box_exact`].
pub const EXACT_CLASS_LIMIT: usize = 6;
/// Class-count guard for [`max_box_exact`].
pub const EXACT_CLASS_COUNT_LIMIT: usize = 3;
/// Default node budget for [`extract_box`].
pub const DEFAULT_EXTRACT_BUDGET: u64 = 1_000_000;

/// A hypergraph with one vertex per class in every edge. Vertices of class
/// `i` are `0..sizes[i]`; edges are stored as a bitset over the product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipartiteHypergraph {
    sizes: Vec<usize>,
    labels: Vec<Vec<String>>,
    edges: FixedBitSet,
}

/// A box Z₁ × ⋯ × Z_k with all `|Z_i| = m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxWitness {
    pub m: usize,
    pub parts: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub m: usize,
    pub parts: Option<Vec<Vec<usize>>>,
    /// Recursion nodes visited.
    pub nodes: u64,
    /// The search stopped on the budget rather than exhausting the space.
    pub exhausted: bool,
}

impl MultipartiteHypergraph {
    pub fn new(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Parameter("need at least one class, each nonempty".into()));
        }
        let labels = sizes.iter().map(|&n| (0..n).map(|v| v.to_string()).collect()).collect();
        Self::with_labels(labels)
    }

    pub fn with_labels(labels: Vec<Vec<String>>) -> Result<Self> {
        let sizes: Vec<usize> = labels.iter().map(Vec::len).collect();
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Parameter("need at least one class, each nonempty".into()));
        }
        let total = sizes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
        let total = total.filter(|&t| t <= 1 << 26).ok_or_else(|| {
            Error::capacity("hypergraph product size", format!("{sizes:?}"), 1u64 << 26)
        })?;
        Ok(MultipartiteHypergraph { sizes, labels, edges: FixedBitSet::with_capacity(total) })
    }

    /// The complete hypergraph on the given classes.
    pub fn complete(sizes: &[usize]) -> Result<Self> {
        let mut h = Self::new(sizes)?;
        h.edges.insert_range(..);
        Ok(h)
    }

    /// Each transversal kept independently with probability `num/den`.
    pub fn random<R: Rng>(sizes: &[usize], num: u32, den: u32, rng: &mut R) -> Result<Self> {
        let mut h = Self::new(sizes)?;
        for i in 0..h.edges.len() {
            if rng.gen_ratio(num, den) {
                h.edges.insert(i);
            }
        }
        Ok(h)
    }

    pub fn classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    fn index(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.sizes).fold(0, |acc, (&v, &n)| acc * n + v)
    }

    fn check(&self, t: &[usize]) -> Result<()> {
        if t.len() != self.sizes.len() || t.iter().zip(&self.sizes).any(|(&v, &n)| v >= n) {
            return Err(Error::Parameter(format!("{t:?} is not a transversal")));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, t: &[usize]) -> Result<()> {
        self.check(t)?;
        let i = self.index(t);
        self.edges.insert(i);
        Ok(())
    }

    pub fn remove_edge(&mut self, t: &[usize]) -> Result<()> {
        self.check(t)?;
        let i = self.index(t);
        self.edges.set(i, false);
        Ok(())
    }

    pub fn has_edge(&self, t: &[usize]) -> bool {
        self.edges.contains(self.index(t))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count_ones(..)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<Vec<usize>> {
        self.edges.ones().map(|i| self.tuple(i)).collect()
    }

    fn tuple(&self, mut i: usize) -> Vec<usize> {
        let mut t = vec![0; self.sizes.len()];
        for (slot, &n) in t.iter_mut().zip(&self.sizes).rev() {
            *slot = i % n;
            i /= n;
        }
        t
    }

    /// True when every transversal of `parts` is an edge.
    pub fn is_complete_box(&self, parts: &[Vec<usize>]) -> bool {
        parts.len() == self.sizes.len()
            && parts.iter().zip(&self.sizes).all(|(p, &n)| p.iter().all(|&v| v < n))
            && parts.iter().multi_cartesian_product().all(|t| {
                let t: Vec<usize> = t.into_iter().copied().collect();
                self.has_edge(&t)
            })
    }

    /// Edges over the first `k - 1` classes completing every vertex of `s`
    /// in the last class.
    fn link(&self, s: &[usize]) -> MultipartiteHypergraph {
        let k = self.sizes.len();
        let last = self.sizes[k - 1];
        let mut h = MultipartiteHypergraph {
            sizes: self.sizes[..k - 1].to_vec(),
            labels: self.labels[..k - 1].to_vec(),
            edges: FixedBitSet::with_capacity(self.edges.len() / last),
        };
        for p in 0..h.edges.len() {
            if s.iter().all(|&v| self.edges.contains(p * last + v)) {
                h.edges.insert(p);
            }
        }
        h
    }

    /// Parses the edge-list format: a `classes` header listing labels with
    /// classes separated by `|`, then one edge per line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty hypergraph file".into()))?;
        let rest = header
            .strip_prefix("classes")
            .ok_or_else(|| Error::Parse("first line must start with `classes`".into()))?;
        let labels: Vec<Vec<String>> = rest
            .split('|')
            .map(|c| c.split_whitespace().map(str::to_string).collect())
            .collect();
        if labels.len() < 2 {
            return Err(Error::Parse("need at least two classes".into()));
        }
        let mut lookup: Vec<HashMap<&str, usize>> = Vec::new();
        for (i, class) in labels.iter().enumerate() {
            let map: HashMap<&str, usize> = class.iter().enumerate().map(|(j, s)| (s.as_str(), j)).collect();
            if class.is_empty() || map.len() != class.len() {
                return Err(Error::Parse(format!("class {i} is empty or has repeated labels")));
            }
            lookup.push(map);
        }
        let mut h = Self::with_labels(labels.clone())?;
        for (lineno, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() != lookup.len() {
                return Err(Error::Parse(format!("line {}: expected {} labels", lineno + 1, lookup.len())));
            }
            let t = words
                .iter()
                .zip(&lookup)
                .map(|(w, m)| m.get(w).copied())
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| Error::Parse(format!("line {}: unknown label", lineno + 1)))?;
            h.add_edge(&t)?;
        }
        Ok(h)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("classes {}\n", self.labels.iter().map(|c| c.join(" ")).join(" | "));
        for t in self.edges() {
            let words = t.iter().enumerate().map(|(i, &v)| self.labels[i][v].as_str()).join(" ");
            writeln!(out, "{words}").unwrap();
        }
        out
    }
}

/// Largest m admitting a complete m × ⋯ × m sub-box, by exhaustive search.
/// The witness is the lexicographically first box of that size; m = 0 when
/// there are no edges.
pub fn max_box_exact(f: &MultipartiteHypergraph) -> Result<BoxWitness> {
    let k = f.classes();
    if k > EXACT_CLASS_COUNT_LIMIT || f.sizes.iter().any(|&n| n > EXACT_CLASS_LIMIT) {
        return Err(Error::capacity(
            "exact box search",
            format!("classes {:?}", f.sizes),
            format!("{EXACT_CLASS_COUNT_LIMIT} classes of size <= {EXACT_CLASS_LIMIT}"),
        ));
    }
    let top = *f.sizes.iter().min().unwrap();
    for m in (1..=top).rev() {
        if let Some(parts) = first_box(f, m) {
            return Ok(BoxWitness { m, parts });
        }
    }
    Ok(BoxWitness { m: 0, parts: vec![Vec::new(); k] })
}

/// For fixed Z₁..Z_{k-1} the lexicographically first completion is the m
/// smallest common neighbors in the last class.
fn first_box(f: &MultipartiteHypergraph, m: usize) -> Option<Vec<Vec<usize>>> {
    let k = f.classes();
    let last = f.sizes[k - 1];
    let heads: Vec<Vec<Vec<usize>>> = f.sizes[..k - 1].iter().map(|&n| (0..n).combinations(m).collect()).collect();
    for choice in heads.iter().multi_cartesian_product() {
        let mut common: Vec<usize> = (0..last).collect();
        for t in choice.iter().map(|v| v.iter().copied()).multi_cartesian_product() {
            let p = t.iter().zip(&f.sizes).fold(0, |acc, (&v, &n)| acc * n + v);
            common.retain(|&v| f.edges.contains(p * last + v));
            if common.len() < m {
                break;
            }
        }
        if common.len() >= m {
            let mut parts: Vec<Vec<usize>> = choice.into_iter().cloned().collect();
            parts.push(common[..m].to_vec());
            return Some(parts);
        }
    }
    None
}

/// Recursive link extraction: m-subsets S of the last class are tried in
/// order of decreasing link size, links with fewer than m^(k-1) edges are
/// pruned, and the search recurses into the link of S.
pub fn extract_box(f: &MultipartiteHypergraph, m: usize, budget: u64) -> Result<Extraction> {
    if m == 0 {
        return Err(Error::Parameter("target size m must be at least 1".into()));
    }
    let mut nodes = 0;
    let found = descend(f, m, budget, &mut nodes);
    let exhausted = nodes > budget;
    let parts = found.filter(|p| f.is_complete_box(p));
    Ok(Extraction { m, parts, nodes, exhausted })
}

fn descend(f: &MultipartiteHypergraph, m: usize, budget: u64, nodes: &mut u64) -> Option<Vec<Vec<usize>>> {
    *nodes += 1;
    if *nodes > budget {
        return None;
    }
    let k = f.classes();
    let last = f.sizes[k - 1];
    if last < m {
        return None;
    }
    if k == 1 {
        let verts: Vec<usize> = f.edges.ones().take(m).collect();
        return (verts.len() == m).then(|| vec![verts]);
    }
    let need = m.pow(k as u32 - 1);
    let mut candidates: Vec<(usize, Vec<usize>, MultipartiteHypergraph)> = (0..last)
        .combinations(m)
        .map(|s| {
            let link = f.link(&s);
            (link.edge_count(), s, link)
        })
        .filter(|(e, _, _)| *e >= need)
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    for (_, s, link) in candidates {
        if let Some(mut parts) = descend(&link, m, budget, nodes) {
            parts.push(s);
            return Some(parts);
        }
        if *nodes > budget {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complete_and_empty() {
        let c = MultipartiteHypergraph::complete(&[3, 3, 3]).unwrap();
        assert_eq!(max_box_exact(&c).unwrap(), BoxWitness { m: 3, parts: vec![vec![0, 1, 2]; 3] });
        let x = extract_box(&c, 3, DEFAULT_EXTRACT_BUDGET).unwrap();
        assert_eq!(x.parts, Some(vec![vec![0, 1, 2]; 3]));
        let e = MultipartiteHypergraph::new(&[2, 2, 2]).unwrap();
        assert_eq!(max_box_exact(&e).unwrap().m, 0);
        assert_eq!(extract_box(&e, 1, DEFAULT_EXTRACT_BUDGET).unwrap().parts, None);
    }

    #[test]
    fn single_edge() {
        let mut h = MultipartiteHypergraph::new(&[3, 3, 3]).unwrap();
        h.add_edge(&[2, 0, 1]).unwrap();
        let b = max_box_exact(&h).unwrap();
        assert_eq!(b, BoxWitness { m: 1, parts: vec![vec![2], vec![0], vec![1]] });
    }

    #[test]
    fn guard() {
        let h = MultipartiteHypergraph::new(&[7, 2, 2]).unwrap();
        assert!(matches!(max_box_exact(&h), Err(Error::Capacity { .. })));
        let h = MultipartiteHypergraph::new(&[2, 2, 2, 2]).unwrap();
        assert!(matches!(max_box_exact(&h), Err(Error::Capacity { .. })));
    }

    #[test]
    fn text_round_trip() {
        let text = "# toy\nclasses a b | c d | e f\na c e\nb d f # second\n";
        let h = MultipartiteHypergraph::parse(text).unwrap();
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(&[1, 1, 1]));
        assert_eq!(MultipartiteHypergraph::parse(&h.to_text()).unwrap(), h);
        assert!(MultipartiteHypergraph::parse("classes a | b\na c\n").is_err());
        assert!(MultipartiteHypergraph::parse("a b\n").is_err());
        assert!(MultipartiteHypergraph::parse("classes a a | b\n").is_err());
    }

    #[test]
    fn bipartite_case() {
        // K_{2,2} inside a 4x4 bipartite graph plus noise
        let mut h = MultipartiteHypergraph::new(&[4, 4]).unwrap();
        for t in [[0, 1], [0, 3], [2, 1], [2, 3], [1, 0], [3, 2]] {
            h.add_edge(&t).unwrap();
        }
        assert_eq!(max_box_exact(&h).unwrap().parts, vec![vec![0, 2], vec![1, 3]]);
        let x = extract_box(&h, 2, DEFAULT_EXTRACT_BUDGET).unwrap();
        assert!(h.is_complete_box(x.parts.as_ref().unwrap()));
        assert_eq!(extract_box(&h, 3, DEFAULT_EXTRACT_BUDGET).unwrap().parts, None);
    }

    #[test]
    fn dense_random_instances_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = MultipartiteHypergraph::random(&[4, 4, 4], 9, 10, &mut rng).unwrap();
            let exact = max_box_exact(&h).unwrap();
            for m in 1..=4 {
                let x = extract_box(&h, m, DEFAULT_EXTRACT_BUDGET).unwrap();
                assert!(!x.exhausted);
                assert_eq!(x.parts.is_some(), m <= exact.m, "m = {m}");
            }
        }
    }

    proptest! {
        #[test]
        fn max_box_is_monotone_under_deletion(seed in any::<u64>(), del in 0usize..27) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut h = MultipartiteHypergraph::random(&[3, 3, 3], 3, 4, &mut rng).unwrap();
            let before = max_box_exact(&h).unwrap();
            prop_assert!(h.is_complete_box(&before.parts) || before.m == 0);
            let t = h.tuple(del);
            h.remove_edge(&t).unwrap();
            let after = max_box_exact(&h).unwrap();
            prop_assert!(after.m <= before.m);
        }
    }
}
