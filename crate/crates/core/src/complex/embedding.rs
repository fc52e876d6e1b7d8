use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{affine_hulls_meet, QPoint, Rational};
use crate::lattice::{ElementId, GradedLattice};

/// Coordinates are `k / 2^16` with `k` uniform in `0..=2^16`.
pub const COORD_DENOMINATOR: i64 = 1 << 16;

/// Maximum number of full re-draws before giving up.
pub const RETRY_CAP: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// `k` random families of pairwise disjoint subsets.
    Sampled(u64),
    /// Every unordered family; only sensible for tiny ground sets.
    Exhaustive,
}

impl VerifyMode {
    pub fn label(&self) -> String {
        match self {
            VerifyMode::Sampled(k) => format!("sampled({k})"),
            VerifyMode::Exhaustive => "exhaustive".into(),
        }
    }
}

/// A family `(S_1, …, S_{d+1})` of pairwise disjoint element sets.
pub type Family = Vec<Vec<ElementId>>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationLog {
    pub mode: String,
    /// Families tested on the accepted draw.
    pub families_tested: u64,
    /// Number of draws, including the accepted one.
    pub attempts: u32,
    /// One offending family per rejected draw.
    pub failures: Vec<Family>,
}

/// Outcome of checking one point assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub tested: u64,
    pub failure: Option<Family>,
}

/// A map e: L̃ → Q^d with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericEmbedding {
    seed: Option<u64>,
    dim: usize,
    /// Indexed by element id; `None` for elements outside the ground set.
    points: Vec<Option<QPoint>>,
    ground: Vec<ElementId>,
    log: VerificationLog,
}

fn draw_points(rng: &mut ChaCha8Rng, len: usize, ground: &[ElementId], dim: usize) -> Vec<Option<QPoint>> {
    let mut points = vec![None; len];
    let den = BigInt::from(COORD_DENOMINATOR);
    for &x in ground {
        let coords = (0..dim)
            .map(|_| Rational::new(BigInt::from(rng.gen_range(0..=COORD_DENOMINATOR)), den.clone()))
            .collect();
        points[x] = Some(QPoint(coords));
    }
    points
}

/// Draws a seeded embedding of L̃ = L − {0̂} into Q^d and verifies general
/// position, re-drawing on failure.
pub fn sample_generic_embedding(
    l: &GradedLattice,
    d: usize,
    seed: u64,
    mode: VerifyMode,
) -> Result<GenericEmbedding> {
    if d == 0 {
        return Err(Error::Parameter("embedding dimension d must be at least 1".into()));
    }
    let bottom = l.bottom();
    let ground: Vec<ElementId> = (0..l.len()).filter(|&x| x != bottom).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = VerificationLog { mode: mode.label(), ..Default::default() };
    for attempt in 1..=RETRY_CAP {
        let points = draw_points(&mut rng, l.len(), &ground, d);
        let v = verify_points(&points, &ground, d, mode, &mut rng)?;
        log.attempts = attempt;
        match v.failure {
            None => {
                log.families_tested = v.tested;
                return Ok(GenericEmbedding { seed: Some(seed), dim: d, points, ground, log });
            }
            Some(f) => log.failures.push(f),
        }
    }
    Err(Error::GeneralPosition(format!(
        "{RETRY_CAP} draws failed; last offending family {:?}",
        log.failures.last().unwrap()
    )))
}

impl GenericEmbedding {
    /// Wraps explicit points (indexed by element id) without verifying them.
    pub fn from_points(dim: usize, points: Vec<Option<QPoint>>) -> Result<Self> {
        let ground: Vec<ElementId> = (0..points.len()).filter(|&i| points[i].is_some()).collect();
        if let Some(&x) = ground.iter().find(|&&x| points[x].as_ref().unwrap().dim() != dim) {
            return Err(Error::Parameter(format!("point for element {x} is not {dim}-dimensional")));
        }
        Ok(GenericEmbedding {
            seed: None,
            dim,
            points,
            ground,
            log: VerificationLog { mode: "unverified".into(), ..Default::default() },
        })
    }

    /// Re-runs the general position check on the stored points. Sampled
    /// families are drawn from `seed`.
    pub fn verify(&self, mode: VerifyMode, seed: u64) -> Result<Verification> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        verify_points(&self.points, &self.ground, self.dim, mode, &mut rng)
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    pub fn log(&self) -> &VerificationLog {
        &self.log
    }

    pub fn points(&self) -> &[Option<QPoint>] {
        &self.points
    }

    /// e(x). Panics if `x` is not in the ground set.
    pub fn point(&self, x: ElementId) -> &QPoint {
        self.points[x].as_ref().unwrap_or_else(|| panic!("element {x} has no image"))
    }
}

fn family_meets(points: &[Option<QPoint>], family: &[Vec<ElementId>]) -> bool {
    let hulls: Vec<Vec<&QPoint>> = family
        .iter()
        .map(|s| s.iter().map(|&x| points[x].as_ref().unwrap()).collect())
        .collect();
    affine_hulls_meet(&hulls)
}

fn verify_points(
    points: &[Option<QPoint>],
    ground: &[ElementId],
    d: usize,
    mode: VerifyMode,
    rng: &mut ChaCha8Rng,
) -> Result<Verification> {
    // distinctness first: coincident points are invisible to families of singletons
    let mut sorted: Vec<(&QPoint, ElementId)> = ground.iter().map(|&x| (points[x].as_ref().unwrap(), x)).collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Ok(Verification { tested: 0, failure: Some(vec![vec![w[0].1], vec![w[1].1]]) });
    }
    if ground.len() < d + 1 {
        return Ok(Verification { tested: 0, failure: None });
    }
    match mode {
        VerifyMode::Sampled(k) => {
            let mut tested = 0;
            for _ in 0..k {
                let family = random_family(rng, ground, d);
                tested += 1;
                if family_meets(points, &family) {
                    return Ok(Verification { tested, failure: Some(family) });
                }
            }
            Ok(Verification { tested, failure: None })
        }
        VerifyMode::Exhaustive => exhaustive(points, ground, d),
    }
}

fn random_family(rng: &mut ChaCha8Rng, ground: &[ElementId], d: usize) -> Family {
    let n = ground.len();
    let sizes: Vec<usize> = loop {
        let s: Vec<usize> = (0..=d).map(|_| rng.gen_range(1..=d)).collect();
        if s.iter().sum::<usize>() <= n {
            break s;
        }
    };
    let picked = sample(rng, n, sizes.iter().sum());
    let mut it = picked.into_iter();
    sizes
        .iter()
        .map(|&s| {
            let mut set: Vec<ElementId> = it.by_ref().take(s).map(|i| ground[i]).collect();
            set.sort_unstable();
            set
        })
        .collect()
}

/// Exhaustive enumeration guard on |L̃| for d ≥ 2.
pub const EXHAUSTIVE_GROUND_LIMIT: usize = 15;

/// All unordered families: subsets are listed once, and a family is a
/// strictly increasing index tuple into that list.
fn exhaustive(points: &[Option<QPoint>], ground: &[ElementId], d: usize) -> Result<Verification> {
    if d >= 2 && ground.len() > EXHAUSTIVE_GROUND_LIMIT {
        return Err(Error::capacity(
            "exhaustive general position check",
            format!("|L̃| = {}", ground.len()),
            EXHAUSTIVE_GROUND_LIMIT,
        ));
    }
    let mut subsets: Vec<(u64, Vec<ElementId>)> = Vec::new();
    for size in 1..=d {
        for combo in itertools::Itertools::combinations(0..ground.len(), size) {
            let mask = combo.iter().fold(0u64, |m, &i| m | 1 << i);
            subsets.push((mask, combo.into_iter().map(|i| ground[i]).collect()));
        }
    }
    let mut tested = 0u64;
    let mut stack: Vec<usize> = Vec::with_capacity(d + 1);
    let failure = extend(points, &subsets, d + 1, 0, 0, &mut stack, &mut tested);
    Ok(Verification { tested, failure })
}

fn extend(
    points: &[Option<QPoint>],
    subsets: &[(u64, Vec<ElementId>)],
    want: usize,
    start: usize,
    used: u64,
    stack: &mut Vec<usize>,
    tested: &mut u64,
) -> Option<Family> {
    if stack.len() == want {
        *tested += 1;
        let family: Family = stack.iter().map(|&i| subsets[i].1.clone()).collect();
        return family_meets(points, &family).then_some(family);
    }
    for i in start..subsets.len() {
        if subsets[i].0 & used != 0 {
            continue;
        }
        stack.push(i);
        let found = extend(points, subsets, want, i + 1, used | subsets[i].0, stack, tested);
        stack.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_subspace_lattice;

    #[test]
    fn same_seed_same_embedding() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let a = sample_generic_embedding(&l, 2, 42, VerifyMode::Sampled(200)).unwrap();
        let b = sample_generic_embedding(&l, 2, 42, VerifyMode::Sampled(200)).unwrap();
        let c = sample_generic_embedding(&l, 2, 43, VerifyMode::Sampled(200)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.points(), c.points());
        assert!(a.points()[l.bottom()].is_none());
        assert_eq!(a.ground().len(), 15);
        assert_eq!(a.log().families_tested, 200);
    }

    #[test]
    fn coordinates_have_bounded_denominators() {
        let l = build_subspace_lattice(2, 3).unwrap();
        let e = sample_generic_embedding(&l, 1, 5, VerifyMode::Exhaustive).unwrap();
        for &x in e.ground() {
            for c in e.point(x).coords() {
                assert!(BigInt::from(COORD_DENOMINATOR) % c.denom() == BigInt::from(0));
                assert!(*c >= Rational::from_integer(0.into()) && *c <= Rational::from_integer(1.into()));
            }
        }
    }

    fn p(x: i64, y: i64) -> Option<QPoint> {
        Some(QPoint::from_ints(&[x, y]))
    }

    #[test]
    fn concurrent_lines_are_detected() {
        // three lines through the origin: x-axis, y-axis, diagonal
        let pts = vec![p(-1, 0), p(1, 0), p(0, -1), p(0, 1), p(-1, -1), p(1, 1)];
        let e = GenericEmbedding::from_points(2, pts).unwrap();
        let v = e.verify(VerifyMode::Exhaustive, 0).unwrap();
        let bad = v.failure.expect("concurrent lines must fail");
        assert_eq!(bad.len(), 3);
        assert!(bad.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn collinear_singletons_do_not_fail() {
        let pts = vec![p(0, 0), p(1, 0), p(2, 0)];
        let e = GenericEmbedding::from_points(2, pts).unwrap();
        let v = e.verify(VerifyMode::Exhaustive, 0).unwrap();
        // {x},{y},{z} only: no two-element sets fit in three points with d+1 = 3 parts
        assert_eq!(v.failure, None);
        assert_eq!(v.tested, 1);
    }

    #[test]
    fn coincident_points_fail() {
        let pts = vec![p(0, 0), p(3, 1), p(0, 0), p(5, 7)];
        let e = GenericEmbedding::from_points(2, pts).unwrap();
        assert_eq!(e.verify(VerifyMode::Sampled(10), 1).unwrap().failure, Some(vec![vec![0], vec![2]]));
    }

    #[test]
    fn exhaustive_guard() {
        let l = build_subspace_lattice(3, 3).unwrap();
        assert!(matches!(
            sample_generic_embedding(&l, 2, 1, VerifyMode::Exhaustive),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn random_families_are_disjoint() {
        let ground: Vec<ElementId> = (1..16).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let f = random_family(&mut rng, &ground, 2);
            assert_eq!(f.len(), 3);
            let mut all: Vec<_> = f.iter().flatten().copied().collect();
            let n = all.len();
            all.sort_unstable();
            all.dedup();
            assert_eq!(all.len(), n);
            assert!(f.iter().all(|s| (1..=2).contains(&s.len())));
        }
    }
}
