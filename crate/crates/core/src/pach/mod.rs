//! Homogeneous boxes for f = e ∘ g, the counting chain behind the upper
//! bound, and affine baselines.

mod affine;
mod analysis;
mod chain;

pub use affine::{
    affine_selection_suite, general_position, simplicial_depth_recount, AffineBox, AffineMode, AffineReport,
};
pub use analysis::{box_coatom_analysis, BoxCoatomReport};
pub use chain::{theorem12_chain, ChainReport};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{serialize_point, PlMapInstance};
use crate::error::{Error, Result};
use crate::exact::QPoint;
use crate::geometry::{ImageTable, DEFAULT_CANDIDATE_BUDGET};
use crate::hypergraph::{extract_box, max_box_exact, MultipartiteHypergraph, DEFAULT_EXTRACT_BUDGET, EXACT_CLASS_LIMIT};
use crate::lattice::ElementId;

/// Partitions are enumerated exhaustively up to this many.
pub const DEFAULT_PARTITION_CAP: u128 = 10_000;
/// Partitions drawn when the cap is exceeded.
pub const DEFAULT_PARTITION_SAMPLES: usize = 64;

/// `d + 1` pairwise disjoint n-sets of atoms, listed with
/// `min V_1 < min V_2 < ⋯` and each part sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PartitionChoice {
    pub parts: Vec<Vec<ElementId>>,
}

impl PartitionChoice {
    pub fn new(mut parts: Vec<Vec<ElementId>>) -> Result<Self> {
        let n = parts.first().map_or(0, Vec::len);
        if parts.len() < 2 || n == 0 || parts.iter().any(|p| p.len() != n) {
            return Err(Error::Parameter("need at least two nonempty parts of equal size".into()));
        }
        for p in parts.iter_mut() {
            p.sort_unstable();
        }
        let mut all: Vec<ElementId> = parts.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("parts must be pairwise disjoint".into()));
        }
        parts.sort();
        Ok(PartitionChoice { parts })
    }

    pub fn n(&self) -> usize {
        self.parts[0].len()
    }

    /// All transversals `(z_1, …, z_{d+1})` in lexicographic order.
    pub fn transversals(&self) -> Vec<Vec<ElementId>> {
        self.parts.iter().map(|p| p.iter().copied()).multi_cartesian_product().collect()
    }
}

/// Number of unordered choices of `k` disjoint n-sets from `a` atoms.
pub fn partition_count(a: usize, k: usize, n: usize) -> u128 {
    let used = k * n;
    if used > a {
        return 0;
    }
    let mut total = crate::expander::binomial(a, used);
    let mut left = used;
    for _ in 0..k {
        total = total.saturating_mul(crate::expander::binomial(left - 1, n - 1));
        left -= n;
    }
    total
}

fn enumerate_partitions(atoms: &[ElementId], k: usize, n: usize) -> Vec<PartitionChoice> {
    let mut out = Vec::new();
    for chosen in atoms.iter().copied().combinations(k * n) {
        split(&chosen, n, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// The part holding the smallest remaining atom is chosen first.
fn split(rest: &[ElementId], n: usize, acc: &mut Vec<Vec<ElementId>>, out: &mut Vec<PartitionChoice>) {
    if rest.is_empty() {
        out.push(PartitionChoice { parts: acc.clone() });
        return;
    }
    let head = rest[0];
    for others in rest[1..].iter().copied().combinations(n - 1) {
        let mut part = vec![head];
        part.extend(&others);
        let remaining: Vec<ElementId> = rest[1..].iter().copied().filter(|x| !others.contains(x)).collect();
        acc.push(part);
        split(&remaining, n, acc, out);
        acc.pop();
    }
}

fn sample_partitions(atoms: &[ElementId], k: usize, n: usize, count: usize, seed: u64) -> Vec<PartitionChoice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = atoms.to_vec();
    (0..count)
        .map(|_| {
            pool.shuffle(&mut rng);
            PartitionChoice::new(pool[..k * n].chunks(n).map(<[_]>::to_vec).collect()).expect("disjoint")
        })
        .collect()
}

/// A point u and sets Z_i ⊆ V_i with u ∈ f(⟨z_1, …, z_{d+1}⟩) for every
/// transversal; `m = 0` when u lies in no face image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousBox {
    #[serde(serialize_with = "serialize_point")]
    pub u: QPoint,
    pub candidate_index: Option<usize>,
    pub parts: Vec<Vec<ElementId>>,
    pub m: usize,
    /// Transversals re-checked with an independent membership call.
    pub verified_transversals: usize,
}

fn face_table(map: &PlMapInstance<'_>, p: &PartitionChoice) -> Result<ImageTable> {
    let mut table = ImageTable::new(map.dim());
    for t in p.transversals() {
        let mut sorted = t.clone();
        sorted.sort_unstable();
        let pieces = map
            .image_cells(&sorted)?
            .into_iter()
            .map(|cell| cell.chain.iter().map(|&x| map.embedding().point(x).clone()).collect())
            .collect();
        table.push_face(pieces)?;
    }
    Ok(table)
}

fn vertex_seeds(map: &PlMapInstance<'_>, p: &PartitionChoice) -> Result<Vec<QPoint>> {
    let mut seeds = Vec::new();
    for t in p.transversals() {
        let mut sorted = t.clone();
        sorted.sort_unstable();
        for size in 1..=sorted.len() {
            for sigma in sorted.iter().copied().combinations(size) {
                seeds.push(map.vertex_image(&sigma)?.clone());
            }
        }
    }
    Ok(seeds)
}

/// Candidate points for the partition: subdivision vertex images, crossings
/// of image-cell edges (in the plane) and barycenters of image cells.
pub fn candidate_points(map: &PlMapInstance<'_>, p: &PartitionChoice) -> Result<Vec<QPoint>> {
    face_table(map, p)?.candidates(&vertex_seeds(map, p)?, DEFAULT_CANDIDATE_BUDGET)
}

pub(super) fn best_box(f: &MultipartiteHypergraph) -> Result<(usize, Vec<Vec<usize>>)> {
    if f.sizes().iter().all(|&s| s <= EXACT_CLASS_LIMIT) && f.classes() <= 3 {
        let w = max_box_exact(f)?;
        return Ok((w.m, w.parts));
    }
    let top = *f.sizes().iter().min().unwrap();
    for m in (1..=top).rev() {
        if let Some(parts) = extract_box(f, m, DEFAULT_EXTRACT_BUDGET)?.parts {
            return Ok((m, parts));
        }
    }
    Ok((0, vec![Vec::new(); f.classes()]))
}

fn box_from(p: &PartitionChoice, mut covered: impl FnMut(&[usize]) -> bool) -> Result<(usize, Vec<Vec<ElementId>>)> {
    let sizes: Vec<usize> = p.parts.iter().map(Vec::len).collect();
    let mut f = MultipartiteHypergraph::new(&sizes)?;
    for idx in sizes.iter().map(|&s| 0..s).multi_cartesian_product() {
        if covered(&idx) {
            f.add_edge(&idx)?;
        }
    }
    let (m, local) = best_box(&f)?;
    let parts = local
        .iter()
        .zip(&p.parts)
        .map(|(z, part)| z.iter().map(|&i| part[i]).collect())
        .collect();
    Ok((m, parts))
}

/// Builds F_u by exact membership per transversal and returns a largest
/// complete box, re-verified transversal by transversal.
pub fn homogeneous_box_at(map: &PlMapInstance<'_>, p: &PartitionChoice, u: &QPoint) -> Result<HomogeneousBox> {
    let member = |t: &[ElementId]| -> Result<bool> {
        let mut sorted = t.to_vec();
        sorted.sort_unstable();
        Ok(map.point_in_face_image(u, &sorted)?.member)
    };
    let mut err = None;
    let (m, parts) = box_from(p, |idx| {
        let t: Vec<ElementId> = idx.iter().zip(&p.parts).map(|(&i, part)| part[i]).collect();
        member(&t).unwrap_or_else(|e| {
            err = Some(e);
            false
        })
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    verify_box(map, u, None, parts, m)
}

fn verify_box(
    map: &PlMapInstance<'_>,
    u: &QPoint,
    candidate_index: Option<usize>,
    parts: Vec<Vec<ElementId>>,
    m: usize,
) -> Result<HomogeneousBox> {
    let mut checked = 0;
    if m > 0 {
        for t in parts.iter().map(|z| z.iter().copied()).multi_cartesian_product() {
            let mut sorted = t.clone();
            sorted.sort_unstable();
            if !map.point_in_face_image(u, &sorted)?.member {
                return Err(Error::Precondition(format!("box transversal {t:?} does not contain u")));
            }
            checked += 1;
        }
    }
    Ok(HomogeneousBox { u: u.clone(), candidate_index, parts, m, verified_transversals: checked })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionRow {
    pub partition: PartitionChoice,
    pub candidates: usize,
    pub best: HomogeneousBox,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauReport {
    pub d: usize,
    pub n: usize,
    pub partitions_total: u128,
    pub sampled: bool,
    /// Largest m over all examined partitions and candidates: a certified
    /// lower bound on max_P τ(f|P).
    pub tau_hat: usize,
    /// Row index of the first partition attaining `tau_hat`.
    pub best_row: usize,
    pub rows: Vec<PartitionRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TauBudget {
    pub partition_cap: u128,
    pub partition_samples: usize,
    pub candidate_cap: usize,
}

impl Default for TauBudget {
    fn default() -> Self {
        TauBudget {
            partition_cap: DEFAULT_PARTITION_CAP,
            partition_samples: DEFAULT_PARTITION_SAMPLES,
            candidate_cap: DEFAULT_CANDIDATE_BUDGET,
        }
    }
}

/// Best box over the candidate points of one partition. Ties go to the
/// smallest candidate index, then to the lexicographically first box.
pub fn best_box_for_partition(map: &PlMapInstance<'_>, p: &PartitionChoice, candidate_cap: usize) -> Result<PartitionRow> {
    let table = face_table(map, p)?;
    let candidates = table.candidates(&vertex_seeds(map, p)?, candidate_cap)?;
    let k = p.parts.len() as u32;
    let n = p.n();
    let mut best: Option<(usize, usize, Vec<Vec<ElementId>>)> = None;
    let sizes: Vec<usize> = p.parts.iter().map(Vec::len).collect();
    let strides: Vec<usize> = (0..sizes.len()).map(|i| sizes[i + 1..].iter().product()).collect();
    for (ci, u) in candidates.iter().enumerate() {
        let covered = table.covering_faces(u);
        let current = best.as_ref().map_or(0, |b| b.1);
        if covered.len() < (current + 1).pow(k) {
            continue;
        }
        let covered_set: std::collections::HashSet<usize> = covered.into_iter().collect();
        let (m, parts) = box_from(p, |idx| {
            let flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
            covered_set.contains(&flat)
        })?;
        if m > current {
            best = Some((ci, m, parts));
            if m == n {
                break;
            }
        }
    }
    let best = match best {
        Some((ci, m, parts)) => verify_box(map, &candidates[ci], Some(ci), parts, m)?,
        None => HomogeneousBox {
            u: candidates[0].clone(),
            candidate_index: Some(0),
            parts: vec![Vec::new(); p.parts.len()],
            m: 0,
            verified_transversals: 0,
        },
    };
    Ok(PartitionRow { partition: p.clone(), candidates: candidates.len(), best })
}

/// Runs the box search over every partition of the atoms into d+1 n-sets
/// (or a seeded sample when there are more than the cap).
pub fn tau_workbench(map: &PlMapInstance<'_>, n: usize, seed: u64, budget: TauBudget) -> Result<TauReport> {
    let l = map.lattice();
    let d = map.dim();
    let k = d + 1;
    let atoms = l.atoms();
    if n == 0 {
        return Err(Error::Parameter("class size n must be at least 1".into()));
    }
    if k * n > atoms.len() {
        return Err(Error::Precondition(format!(
            "(d+1)n = {} exceeds the {} atoms available",
            k * n,
            atoms.len()
        )));
    }
    let total = partition_count(atoms.len(), k, n);
    let sampled = total > budget.partition_cap;
    let partitions = if sampled {
        sample_partitions(atoms, k, n, budget.partition_samples, seed)
    } else {
        enumerate_partitions(atoms, k, n)
    };
    let rows = partitions
        .iter()
        .map(|p| best_box_for_partition(map, p, budget.candidate_cap))
        .collect::<Result<Vec<_>>>()?;
    let tau_hat = rows.iter().map(|r| r.best.m).max().unwrap_or(0);
    let best_row = rows.iter().position(|r| r.best.m == tau_hat).unwrap_or(0);
    Ok(TauReport { d, n, partitions_total: total, sampled, tau_hat, best_row, rows })
}
