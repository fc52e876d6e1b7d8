//! Weighted coboundary expansion over F₂ on small pure complexes, reduced
//! Betti numbers and an empirical overlap probe.
//!
//! Cochains live on the augmented complex: `X(−1) = {∅}`, so `B⁰` is spanned
//! by the all-ones vertex cochain and `h_0` measures reduced connectivity.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat_to_string, QPoint, Rational};
use crate::expander::binomial;
use crate::geometry::{ImageTable, DEFAULT_CANDIDATE_BUDGET};

/// Exhaustion guard on `|X(k)|` and `|X(k−1)|`.
pub const COCHAIN_LIMIT: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPureComplex {
    labels: Vec<String>,
    dim: usize,
    /// `faces[s]`: faces with `s` vertices, sorted lexicographically.
    faces: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    /// `counts[s][i]`: number of top faces containing face i.
    counts: Vec<Vec<u64>>,
}

/// A k-cochain with values in F₂, stored as its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainF2 {
    pub k: i32,
    pub support: FixedBitSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainReport {
    pub d_phi: CochainF2,
    pub norm: Rational,
    pub cosystolic_norm: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub k: i32,
    pub value: Rational,
    pub minimizer: CochainF2,
}

/// Serialized form of [`Expansion`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionJson {
    pub k: i32,
    pub h_num: String,
    pub h_den: String,
    pub minimizer: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Overlap {
    #[serde(serialize_with = "crate::complex::serialize_point")]
    pub u: QPoint,
    pub covered: usize,
    pub fraction: String,
}

impl WeightedPureComplex {
    /// Builds the downward closure of the given top faces. Vertices are
    /// numbered by first appearance.
    pub fn build(tops: &[Vec<String>]) -> Result<Self> {
        let first = tops.first().ok_or_else(|| Error::Parameter("complex has no top faces".into()))?;
        if first.is_empty() {
            return Err(Error::Parameter("top faces must be nonempty".into()));
        }
        let dim = first.len() - 1;
        let mut labels: Vec<String> = Vec::new();
        let mut lookup: HashMap<&str, usize> = HashMap::new();
        let mut top_ids: Vec<Vec<usize>> = Vec::new();
        for t in tops {
            if t.len() != dim + 1 {
                return Err(Error::Parameter(format!(
                    "mixed dimensions: {} and {} vertices in top faces",
                    dim + 1,
                    t.len()
                )));
            }
            let mut ids: Vec<usize> = t
                .iter()
                .map(|v| {
                    *lookup.entry(v.as_str()).or_insert_with(|| {
                        labels.push(v.clone());
                        labels.len() - 1
                    })
                })
                .collect();
            ids.sort_unstable();
            if ids.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parameter(format!("top face {t:?} repeats a vertex")));
            }
            if top_ids.contains(&ids) {
                return Err(Error::Parameter(format!("top face {t:?} listed twice")));
            }
            top_ids.push(ids);
        }
        let mut counting: Vec<HashMap<Vec<usize>, u64>> = vec![HashMap::new(); dim + 2];
        for t in &top_ids {
            for (s, slot) in counting.iter_mut().enumerate() {
                for f in t.iter().copied().combinations(s) {
                    *slot.entry(f).or_insert(0) += 1;
                }
            }
        }
        let mut faces = Vec::new();
        let mut index = Vec::new();
        let mut counts = Vec::new();
        for slot in counting {
            let sorted: Vec<(Vec<usize>, u64)> = slot.into_iter().sorted().collect();
            index.push(sorted.iter().enumerate().map(|(i, (f, _))| (f.clone(), i)).collect());
            counts.push(sorted.iter().map(|(_, c)| *c).collect());
            faces.push(sorted.into_iter().map(|(f, _)| f).collect());
        }
        Ok(WeightedPureComplex { labels, dim, faces, index, counts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn top_count(&self) -> usize {
        self.faces[self.dim + 1].len()
    }

    fn slot(&self, k: i32) -> Option<usize> {
        let s = usize::try_from(k + 1).ok()?;
        (s <= self.dim + 1).then_some(s)
    }

    /// `X(k)` for `−1 ≤ k ≤ d`; empty outside that range.
    pub fn faces(&self, k: i32) -> &[Vec<usize>] {
        self.slot(k).map_or(&[], |s| &self.faces[s])
    }

    pub fn face_id(&self, face: &[usize]) -> Option<usize> {
        self.index.get(face.len())?.get(face).copied()
    }

    /// `c(σ)` for every σ in `X(k)`.
    pub fn counts(&self, k: i32) -> &[u64] {
        self.slot(k).map_or(&[], |s| &self.counts[s])
    }

    /// Common denominator `C(d+1, k+1)·f_d` of the weights in dimension k.
    pub fn weight_denominator(&self, k: i32) -> u64 {
        let s = self.slot(k).unwrap_or(0);
        binomial(self.dim + 1, s) as u64 * self.top_count() as u64
    }

    pub fn weight(&self, k: i32, i: usize) -> Rational {
        Rational::new(BigInt::from(self.counts(k)[i]), BigInt::from(self.weight_denominator(k)))
    }

    pub fn total_weight(&self, k: i32) -> Rational {
        let num: u64 = self.counts(k).iter().sum();
        Rational::new(BigInt::from(num), BigInt::from(self.weight_denominator(k)))
    }

    pub fn face_labels(&self, face: &[usize]) -> Vec<String> {
        face.iter().map(|&v| self.labels[v].clone()).collect()
    }

    pub fn zero_cochain(&self, k: i32) -> CochainF2 {
        CochainF2 { k, support: FixedBitSet::with_capacity(self.faces(k).len()) }
    }

    pub fn cochain(&self, k: i32, support: &[usize]) -> Result<CochainF2> {
        let mut phi = self.zero_cochain(k);
        for &i in support {
            if i >= phi.support.len() {
                return Err(Error::Parameter(format!("face {i} is not in X({k})")));
            }
            phi.support.insert(i);
        }
        Ok(phi)
    }

    /// Indices into `X(k)` of the facets of each face of `X(k+1)`.
    fn facets(&self, k: i32) -> Vec<Vec<usize>> {
        self.faces(k + 1)
            .iter()
            .map(|t| {
                (0..t.len())
                    .map(|skip| {
                        let f: Vec<usize> = t.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                        self.face_id(&f).expect("complex is closed downward")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn coboundary(&self, phi: &CochainF2) -> CochainF2 {
        let mut out = self.zero_cochain(phi.k + 1);
        for (t, fs) in self.facets(phi.k).iter().enumerate() {
            if fs.iter().filter(|&&f| phi.support.contains(f)).count() % 2 == 1 {
                out.support.insert(t);
            }
        }
        out
    }

    pub fn norm(&self, phi: &CochainF2) -> Rational {
        let num: u64 = phi.support.ones().map(|i| self.counts(phi.k)[i]).sum();
        Rational::new(BigInt::from(num), BigInt::from(self.weight_denominator(phi.k)))
    }

    /// `min ‖φ + dψ‖` over every (k−1)-cochain ψ.
    pub fn cosystolic_norm(&self, phi: &CochainF2) -> Result<Rational> {
        let below = self.faces(phi.k - 1).len();
        if below > COCHAIN_LIMIT {
            return Err(Error::capacity(format!("shifts over X({})", phi.k - 1), format!("2^{below}"), format!("2^{COCHAIN_LIMIT}")));
        }
        let mut best = self.norm(phi);
        for bits in 1u64..(1u64 << below) {
            let psi = CochainF2 { k: phi.k - 1, support: mask_to_bitset(bits, below) };
            let mut shifted = self.coboundary(&psi);
            shifted.support.symmetric_difference_with(&phi.support);
            best = best.min(self.norm(&shifted));
        }
        Ok(best)
    }

    pub fn cochain_calculus(&self, phi: &CochainF2) -> Result<CochainReport> {
        if phi.support.len() != self.faces(phi.k).len() {
            return Err(Error::Parameter(format!("cochain length does not match X({})", phi.k)));
        }
        Ok(CochainReport { d_phi: self.coboundary(phi), norm: self.norm(phi), cosystolic_norm: self.cosystolic_norm(phi)? })
    }

    /// `h_k` by exhaustion over `C^k`, or `None` when every k-cochain is a
    /// coboundary. Ties go to the lexicographically smallest support, read
    /// as the increasing list of face indices.
    pub fn h_k(&self, k: i32) -> Result<Option<Expansion>> {
        if k < 0 || k as usize > self.dim {
            return Err(Error::Parameter(format!("k must lie in 0..={}", self.dim)));
        }
        let n = self.faces(k).len();
        let below = self.faces(k - 1).len();
        if n > COCHAIN_LIMIT || below > COCHAIN_LIMIT {
            return Err(Error::capacity(
                format!("cochains on X({k}) and X({})", k - 1),
                format!("2^{n} x 2^{below}"),
                format!("2^{COCHAIN_LIMIT} each"),
            ));
        }
        let weights = self.counts(k);
        let above = self.counts(k + 1);
        let d_masks: Vec<u64> = self.facets(k).iter().map(|fs| fs.iter().fold(0, |m, &f| m | 1 << f)).collect();
        let norm_num = |mask: u64| -> u64 { ones(mask).map(|i| weights[i]).sum() };
        let d_norm_num = |mask: u64| -> u64 {
            d_masks.iter().enumerate().filter(|&(_, &t)| (t & mask).count_ones() % 2 == 1).map(|(j, _)| above[j]).sum()
        };

        // basis of B^k from the images of the unit (k−1)-cochains
        let mut images = vec![0u64; below];
        for (t, fs) in self.facets(k - 1).iter().enumerate() {
            for &f in fs {
                images[f] |= 1 << t;
            }
        }
        let mut basis: Vec<u64> = Vec::new();
        for mut v in images {
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        let reduce = |mut v: u64| -> u64 {
            for &b in &basis {
                v = v.min(v ^ b);
            }
            v
        };

        let mut coset_min: HashMap<u64, u64> = HashMap::new();
        for mask in 0u64..(1u64 << n) {
            let e = coset_min.entry(reduce(mask)).or_insert(u64::MAX);
            *e = (*e).min(norm_num(mask));
        }
        let (dk, dk1) = (self.weight_denominator(k) as u128, self.weight_denominator(k + 1) as u128);
        // value = (num · dk) / (den · dk1)
        let mut best: Option<(u128, u128, u64)> = None;
        for mask in 0u64..(1u64 << n) {
            let r = reduce(mask);
            if r == 0 {
                continue;
            }
            let num = d_norm_num(mask) as u128 * dk;
            let den = coset_min[&r] as u128 * dk1;
            let better = match best {
                None => true,
                Some((bn, bd, bm)) => {
                    let (lhs, rhs) = (num * bd, bn * den);
                    lhs < rhs || (lhs == rhs && support_less(mask, bm))
                }
            };
            if better {
                best = Some((num, den, mask));
            }
        }
        Ok(best.map(|(num, den, mask)| Expansion {
            k,
            value: Rational::new(BigInt::from(num), BigInt::from(den)),
            minimizer: CochainF2 { k, support: mask_to_bitset(mask, n) },
        }))
    }

    pub fn expansion_json(&self, e: &Expansion) -> ExpansionJson {
        ExpansionJson {
            k: e.k,
            h_num: e.value.numer().to_string(),
            h_den: e.value.denom().to_string(),
            minimizer: e.minimizer.support.ones().map(|i| self.face_labels(&self.faces(e.k)[i])).collect(),
        }
    }

    /// `dim H̃^k(X; F₂)` from ranks of boundary matrices of the augmented
    /// chain complex.
    pub fn reduced_betti_f2(&self, k: i32) -> usize {
        self.faces(k).len() - self.boundary_rank(k + 1) - self.boundary_rank(k)
    }

    /// Rank over F₂ of `∂_k: C_k → C_{k−1}`.
    fn boundary_rank(&self, k: i32) -> usize {
        let lower = self.faces(k - 1).len();
        let mut rows: Vec<FixedBitSet> = self
            .faces(k)
            .iter()
            .map(|f| {
                let mut row = FixedBitSet::with_capacity(lower);
                for skip in 0..f.len() {
                    let facet: Vec<usize> = f.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                    row.insert(self.face_id(&facet).expect("closed downward"));
                }
                row
            })
            .collect();
        let mut rank = 0;
        for col in 0..lower {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].contains(col)) else { continue };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.contains(col) {
                    row.symmetric_difference_with(&pivot);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Point covered by the most top-face images of the affine map with the
    /// given vertex images, over the candidate set.
    pub fn overlap_point(&self, images: &[QPoint]) -> Result<Overlap> {
        if images.len() != self.labels.len() {
            return Err(Error::Parameter(format!("need {} vertex images, got {}", self.labels.len(), images.len())));
        }
        let dim = images[0].dim();
        let mut table = ImageTable::new(dim);
        for t in self.faces(self.dim as i32) {
            table.push_face(vec![t.iter().map(|&v| images[v].clone()).collect()])?;
        }
        let candidates = table.candidates(&[], DEFAULT_CANDIDATE_BUDGET)?;
        let mut best = (0usize, 0usize);
        for (i, u) in candidates.iter().enumerate() {
            let c = table.covering_faces(u).len();
            if c > best.0 {
                best = (c, i);
            }
        }
        let top = self.top_count();
        Ok(Overlap {
            u: candidates[best.1].clone(),
            covered: best.0,
            fraction: rat_to_string(&Rational::new(BigInt::from(best.0), BigInt::from(top))),
        })
    }
}

/// Reads one top face per line as whitespace-separated vertex labels; `#`
/// starts a comment.
pub fn parse_complex(text: &str) -> Result<WeightedPureComplex> {
    let tops: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    if tops.is_empty() {
        return Err(Error::Parse("complex file lists no faces".into()));
    }
    WeightedPureComplex::build(&tops).map_err(|e| match e {
        Error::Parameter(m) => Error::Parse(m),
        other => other,
    })
}

/// Complete multipartite complex `V₁ ∗ ⋯ ∗ V_k` with classes of size n;
/// vertex `j` of class `i` is labeled `i.j`.
pub fn complete_multipartite(classes: usize, n: usize) -> Result<WeightedPureComplex> {
    let tops: Vec<Vec<String>> = (0..classes)
        .map(|_| 0..n)
        .multi_cartesian_product()
        .map(|t| t.iter().enumerate().map(|(i, j)| format!("{i}.{j}")).collect())
        .collect();
    WeightedPureComplex::build(&tops)
}

fn ones(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

fn mask_to_bitset(mask: u64, len: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(len);
    for i in ones(mask) {
        b.insert(i);
    }
    b
}

/// Lexicographic order on the increasing index lists of two supports.
fn support_less(a: u64, b: u64) -> bool {
    ones(a).lt(ones(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn cx(tops: &[&[&str]]) -> WeightedPureComplex {
        WeightedPureComplex::build(&tops.iter().map(|t| t.iter().map(|s| s.to_string()).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    fn triangle() -> WeightedPureComplex {
        cx(&[&["0", "1", "2"]])
    }

    fn hollow() -> WeightedPureComplex {
        cx(&[&["0", "1"], &["1", "2"], &["0", "2"]])
    }

    #[test]
    fn weights() {
        let t = triangle();
        assert_eq!(t.weight(0, 0), rat(1, 3));
        assert_eq!(t.weight(1, 0), rat(1, 3));
        assert_eq!(t.weight(2, 0), rat(1, 1));
        let h = hollow();
        assert_eq!(h.weight(1, 2), rat(1, 3));
        assert_eq!(h.weight(0, 1), rat(1, 3));
        for x in [&t, &h] {
            for k in -1..=x.dim() as i32 {
                assert_eq!(x.total_weight(k), rat(1, 1));
            }
        }
    }

    #[test]
    fn zero_cochain() {
        let t = triangle();
        let r = t.cochain_calculus(&t.zero_cochain(1)).unwrap();
        assert!(r.d_phi.support.is_clear());
        assert_eq!(r.norm, rat(0, 1));
        assert_eq!(r.cosystolic_norm, rat(0, 1));
    }

    #[test]
    fn hollow_edge_indicator() {
        let h = hollow();
        let phi = h.cochain(1, &[0]).unwrap();
        let r = h.cochain_calculus(&phi).unwrap();
        assert_eq!(r.d_phi.support.len(), 0);
        assert_eq!(r.cosystolic_norm, rat(1, 3));
    }

    #[test]
    fn expansion_values() {
        let t = triangle();
        assert_eq!(t.h_k(0).unwrap().unwrap().value, rat(2, 1));
        assert_eq!(t.h_k(1).unwrap().unwrap().value, rat(3, 1));
        assert!(t.h_k(2).unwrap().is_none());
        let h = hollow();
        assert_eq!(h.h_k(0).unwrap().unwrap().value, rat(2, 1));
        let h1 = h.h_k(1).unwrap().unwrap();
        assert_eq!(h1.value, rat(0, 1));
        // four odd edge sets tie at 0; [0] is the smallest support
        assert_eq!(h1.minimizer.support.ones().collect::<Vec<_>>(), vec![0]);
        for (n, v) in [(2, rat(1, 1)), (3, rat(10, 9)), (4, rat(1, 1))] {
            assert_eq!(complete_multipartite(2, n).unwrap().h_k(0).unwrap().unwrap().value, v);
        }
        let octa = complete_multipartite(3, 2).unwrap();
        assert_eq!(octa.h_k(0).unwrap().unwrap().value, rat(1, 1));
        assert_eq!(octa.h_k(1).unwrap().unwrap().value, rat(1, 1));
    }

    #[test]
    fn betti_numbers() {
        let h = hollow();
        assert_eq!((h.reduced_betti_f2(0), h.reduced_betti_f2(1)), (0, 1));
        let t = triangle();
        assert_eq!((0..=2).map(|k| t.reduced_betti_f2(k)).collect::<Vec<_>>(), vec![0, 0, 0]);
        let octa = complete_multipartite(3, 2).unwrap();
        assert_eq!(octa.reduced_betti_f2(2), 1);
        let two = cx(&[&["a", "b"], &["c", "d"]]);
        assert_eq!(two.reduced_betti_f2(0), 1);
        assert_eq!(two.h_k(0).unwrap().unwrap().value, rat(0, 1));
    }

    #[test]
    fn parse_and_errors() {
        let x = parse_complex("# hollow\n0 1\n1 2\n\n0 2\n").unwrap();
        assert_eq!(x, hollow());
        assert!(matches!(parse_complex("0 1\n0 1 2\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_complex(""), Err(Error::Parse(_))));
        let big = complete_multipartite(2, 6).unwrap();
        assert!(matches!(big.h_k(1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn overlap_examples() {
        let t = triangle();
        let o = t.overlap_point(&[QPoint::from_ints(&[0, 0]), QPoint::from_ints(&[3, 0]), QPoint::from_ints(&[0, 3])]).unwrap();
        assert_eq!((o.covered, o.fraction.as_str()), (1, "1/1"));
        let star = cx(&[&["c", "a"], &["c", "b"], &["c", "e"]]);
        let p = |x| QPoint::from_ints(&[x]);
        let o = star.overlap_point(&[p(0), p(-1), p(1), p(5)]).unwrap();
        assert_eq!(o.covered, 3);
    }

    #[test]
    fn json_shape() {
        let h = hollow();
        let e = h.h_k(1).unwrap().unwrap();
        let j = serde_json::to_string(&h.expansion_json(&e)).unwrap();
        assert_eq!(j, r#"{"k":1,"h_num":"0","h_den":"1","minimizer":[["0","1"]]}"#);
    }

    #[test]
    fn support_order() {
        assert!(support_less(0b001, 0b010));
        assert!(support_less(0b001, 0b011) && support_less(0b011, 0b010));
        assert!(!support_less(0b1, 0b1));
    }

    proptest! {
        #[test]
        fn cochain_identities(bits in 0u64..(1 << 12), other in 0u64..(1 << 12)) {
            let octa = complete_multipartite(3, 2).unwrap();
            let phi = CochainF2 { k: 1, support: mask_to_bitset(bits, 12) };
            let dd = octa.coboundary(&octa.coboundary(&octa.cochain(0, &ones(bits & 63).collect::<Vec<_>>()).unwrap()));
            prop_assert!(dd.support.is_clear());
            let csn = octa.cosystolic_norm(&phi).unwrap();
            prop_assert!(csn <= octa.norm(&phi));
            let disjoint = CochainF2 { k: 1, support: mask_to_bitset(other & !bits, 12) };
            let mut sum = phi.clone();
            sum.support.union_with(&disjoint.support);
            prop_assert_eq!(octa.norm(&sum), octa.norm(&phi) + octa.norm(&disjoint));
        }
    }
}
