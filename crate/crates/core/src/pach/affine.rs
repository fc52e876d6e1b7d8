use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::best_box;
use crate::complex::serialize_point;
use crate::error::{Error, Result};
use crate::exact::{affinely_independent, rat_to_string, QPoint, Rational};
use crate::geometry::{piece_contains, ImageTable, DEFAULT_CANDIDATE_BUDGET};
use crate::hypergraph::MultipartiteHypergraph;

/// Class-size guard for the affine suite.
pub const AFFINE_CLASS_LIMIT: usize = 8;
/// Point-count guard for first-selection mode.
pub const SELECTION_POINT_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineMode {
    Pach,
    FirstSelection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineBox {
    #[serde(serialize_with = "serialize_point")]
    pub u: QPoint,
    pub candidate_index: usize,
    /// Indices into each class.
    pub parts: Vec<Vec<usize>>,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineReport {
    pub mode: AffineMode,
    pub d: usize,
    pub n: usize,
    /// Set when the input was not in general position and was perturbed.
    pub perturbation: Option<String>,
    pub candidates: usize,
    pub pach_box: Option<AffineBox>,
    /// Empirical m/n.
    pub pach_ratio: Option<String>,
    pub depth: Option<u64>,
    pub oracle_depth: Option<u64>,
    pub depth_point: Option<Vec<String>>,
    /// Number of (d+1)-subsets of the point set.
    pub simplices: Option<u64>,
    /// Empirical depth / C(N, d+1).
    pub depth_fraction: Option<String>,
}

/// Every (d+1)-subset is affinely independent.
pub fn general_position(points: &[QPoint], d: usize) -> bool {
    let k = (d + 1).min(points.len());
    points.iter().combinations(k).all(|s| affinely_independent(&s))
}

/// Shifts point j along the moment curve, `p_j + ε (j+1, (j+1)^2, …)`, with
/// ε shrinking until the points are in general position.
fn perturb(points: &[QPoint], d: usize) -> Result<(Vec<QPoint>, String)> {
    for k in (20..=60).step_by(8) {
        let eps = Rational::new(BigInt::one(), BigInt::one() << k);
        let moved: Vec<QPoint> = points
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let t = Rational::from_integer(BigInt::from(j as i64 + 1));
                let mut pow = Rational::one();
                QPoint(
                    p.coords()
                        .iter()
                        .map(|c| {
                            pow = &pow * &t;
                            c + &eps * &pow
                        })
                        .collect(),
                )
            })
            .collect();
        if general_position(&moved, d) {
            return Ok((moved, format!("input perturbed along the moment curve with scale 2^-{k}")));
        }
    }
    Err(Error::Precondition("could not perturb the input into general position".into()))
}

/// Affine baselines. In `Pach` mode the classes are the vertex sets of the
/// join; in `FirstSelection` mode their union is one point set.
pub fn affine_selection_suite(classes: &[Vec<QPoint>], mode: AffineMode) -> Result<AffineReport> {
    let d = classes.first().and_then(|c| c.first()).map(QPoint::dim).unwrap_or(0);
    if d == 0 || classes.iter().flatten().any(|p| p.dim() != d) {
        return Err(Error::Parameter("points must be nonempty and of one positive dimension".into()));
    }
    let n = classes[0].len();
    let flat: Vec<QPoint> = classes.iter().flatten().cloned().collect();
    let (flat, perturbation) = if general_position(&flat, d) {
        (flat, None)
    } else {
        let (moved, note) = perturb(&flat, d)?;
        (moved, Some(note))
    };
    match mode {
        AffineMode::Pach => {
            if classes.len() != d + 1 || classes.iter().any(|c| c.len() != n) || n == 0 {
                return Err(Error::Parameter(format!("pach mode needs {} classes of equal size", d + 1)));
            }
            if n > AFFINE_CLASS_LIMIT {
                return Err(Error::capacity("affine class size", n, AFFINE_CLASS_LIMIT));
            }
            let classes: Vec<Vec<QPoint>> = flat.chunks(n).map(<[QPoint]>::to_vec).collect();
            let (b, candidates) = affine_pach(&classes)?;
            Ok(AffineReport {
                mode,
                d,
                n,
                perturbation,
                candidates,
                pach_ratio: Some(rat_to_string(&Rational::new(BigInt::from(b.m), BigInt::from(n)))),
                pach_box: Some(b),
                depth: None,
                oracle_depth: None,
                depth_point: None,
                simplices: None,
                depth_fraction: None,
            })
        }
        AffineMode::FirstSelection => {
            if flat.len() > SELECTION_POINT_LIMIT || flat.len() < d + 1 {
                return Err(Error::capacity("first-selection point count", flat.len(), SELECTION_POINT_LIMIT));
            }
            let mut table = ImageTable::new(d);
            for s in flat.iter().cloned().combinations(d + 1) {
                table.push_face(vec![s])?;
            }
            let candidates = table.candidates(&[], DEFAULT_CANDIDATE_BUDGET)?;
            let (mut depth, mut at) = (0u64, 0usize);
            for (i, u) in candidates.iter().enumerate() {
                let c = table.covering_faces(u).len() as u64;
                if c > depth {
                    depth = c;
                    at = i;
                }
            }
            let oracle = if d <= 2 { Some(simplicial_depth_recount(&flat)?.0) } else { None };
            let simplices = crate::expander::binomial(flat.len(), d + 1) as u64;
            Ok(AffineReport {
                mode,
                d,
                n: flat.len(),
                perturbation,
                candidates: candidates.len(),
                pach_box: None,
                pach_ratio: None,
                depth: Some(depth),
                oracle_depth: oracle,
                depth_point: Some(candidates[at].to_strings()),
                simplices: Some(simplices),
                depth_fraction: Some(rat_to_string(&Rational::new(BigInt::from(depth), BigInt::from(simplices)))),
            })
        }
    }
}

fn affine_pach(classes: &[Vec<QPoint>]) -> Result<(AffineBox, usize)> {
    let d = classes.len() - 1;
    let n = classes[0].len();
    let sizes = vec![n; d + 1];
    let mut table = ImageTable::new(d);
    let transversals: Vec<Vec<usize>> = sizes.iter().map(|&s| 0..s).multi_cartesian_product().collect();
    for t in &transversals {
        table.push_face(vec![t.iter().zip(classes).map(|(&i, c)| c[i].clone()).collect()])?;
    }
    let candidates = table.candidates(&[], DEFAULT_CANDIDATE_BUDGET)?;
    let mut best: Option<AffineBox> = None;
    for (ci, u) in candidates.iter().enumerate() {
        let covered = table.covering_faces(u);
        let current = best.as_ref().map_or(0, |b| b.m);
        if covered.len() < (current + 1).pow(d as u32 + 1) {
            continue;
        }
        let mut f = MultipartiteHypergraph::new(&sizes)?;
        for &i in &covered {
            f.add_edge(&transversals[i])?;
        }
        let (m, parts) = best_box(&f)?;
        if m > current {
            best = Some(AffineBox { u: u.clone(), candidate_index: ci, parts, m });
            if m == n {
                break;
            }
        }
    }
    let best = best.ok_or_else(|| Error::Precondition("no candidate lies in any simplex".into()))?;
    for t in best.parts.iter().map(|z| z.iter().copied()).multi_cartesian_product() {
        let simplex: Vec<QPoint> = t.iter().zip(classes).map(|(&i, c)| c[i].clone()).collect();
        if !piece_contains(&simplex, &best.u) {
            return Err(Error::Precondition(format!("affine box transversal {t:?} misses u")));
        }
    }
    Ok((best, candidates.len()))
}

fn orient(a: &QPoint, b: &QPoint, c: &QPoint) -> Rational {
    let (ax, ay) = (&a.0[0], &a.0[1]);
    (&b.0[0] - ax) * (&c.0[1] - ay) - (&b.0[1] - ay) * (&c.0[0] - ax)
}

fn in_triangle(a: &QPoint, b: &QPoint, c: &QPoint, u: &QPoint) -> bool {
    let s = [orient(a, b, u), orient(b, c, u), orient(c, a, u)];
    s.iter().all(|v| !v.is_negative()) || s.iter().all(|v| !v.is_positive())
}

/// Crossing point of the lines through `ab` and `cd` if it lies on both
/// closed segments (Cramer's rule).
fn crossing(a: &QPoint, b: &QPoint, c: &QPoint, d: &QPoint) -> Option<QPoint> {
    let (a1, b1) = (&b.0[0] - &a.0[0], &c.0[0] - &d.0[0]);
    let (a2, b2) = (&b.0[1] - &a.0[1], &c.0[1] - &d.0[1]);
    let (r1, r2) = (&c.0[0] - &a.0[0], &c.0[1] - &a.0[1]);
    let det = &a1 * &b2 - &b1 * &a2;
    if det.is_zero() {
        return None;
    }
    let s = (&r1 * &b2 - &b1 * &r2) / &det;
    let t = (&a1 * &r2 - &r1 * &a2) / &det;
    let unit = Rational::one();
    if s.is_negative() || t.is_negative() || s > unit || t > unit {
        return None;
    }
    Some(QPoint(vec![&a.0[0] + &s * &a1, &a.0[1] + &s * &a2]))
}

/// Maximum simplicial depth by direct re-count: every input point and every
/// crossing of two segments is tried against every simplex with orientation
/// predicates. Supports d = 1 and d = 2.
pub fn simplicial_depth_recount(points: &[QPoint]) -> Result<(u64, QPoint)> {
    let d = points.first().map_or(0, QPoint::dim);
    let mut best = (0u64, points.first().cloned().unwrap_or_else(|| QPoint(vec![])));
    match d {
        1 => {
            for u in points {
                let mut c = 0;
                for i in 0..points.len() {
                    for j in i + 1..points.len() {
                        let (lo, hi) = if points[i] <= points[j] { (&points[i], &points[j]) } else { (&points[j], &points[i]) };
                        if lo <= u && u <= hi {
                            c += 1;
                        }
                    }
                }
                if c > best.0 {
                    best = (c, u.clone());
                }
            }
        }
        2 => {
            let mut probes: Vec<QPoint> = points.to_vec();
            let segs: Vec<(usize, usize)> = (0..points.len()).tuple_combinations().collect();
            for (x, &(i, j)) in segs.iter().enumerate() {
                for &(k, l) in &segs[x + 1..] {
                    if let Some(p) = crossing(&points[i], &points[j], &points[k], &points[l]) {
                        probes.push(p);
                    }
                }
            }
            for u in &probes {
                let mut c = 0;
                for (i, j, k) in (0..points.len()).tuple_combinations() {
                    if in_triangle(&points[i], &points[j], &points[k], u) {
                        c += 1;
                    }
                }
                if c > best.0 {
                    best = (c, u.clone());
                }
            }
        }
        _ => return Err(Error::Parameter("the re-count oracle supports d = 1 and d = 2".into())),
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(v: &[i64]) -> Vec<QPoint> {
        v.iter().map(|&x| QPoint::from_ints(&[x])).collect()
    }

    fn plane(v: &[(i64, i64)]) -> Vec<QPoint> {
        v.iter().map(|&(x, y)| QPoint::from_ints(&[x, y])).collect()
    }

    #[test]
    fn interval_instance_is_a_full_box() {
        let r = affine_selection_suite(&[line(&[0, 1, 2, 3]), line(&[10, 11, 12, 13])], AffineMode::Pach).unwrap();
        let b = r.pach_box.unwrap();
        assert_eq!(b.m, 4);
        assert!(b.u >= QPoint::from_ints(&[3]) && b.u <= QPoint::from_ints(&[10]));
        assert_eq!(r.pach_ratio.as_deref(), Some("1/1"));
        assert_eq!(r.perturbation, None);
    }

    #[test]
    fn triple_triangle() {
        let classes = [
            plane(&[(100, 0), (101, 3), (103, -2)]),
            plane(&[(-50, 87), (-53, 88), (-49, 91)]),
            plane(&[(-50, -87), (-52, -90), (-47, -88)]),
        ];
        let r = affine_selection_suite(&classes, AffineMode::Pach).unwrap();
        assert_eq!(r.pach_box.unwrap().m, 3);
    }

    #[test]
    fn collinear_input_is_perturbed() {
        let classes = [plane(&[(0, 0), (1, 1)]), plane(&[(2, 2), (5, 0)]), plane(&[(0, 5), (7, 3)])];
        let r = affine_selection_suite(&classes, AffineMode::Pach).unwrap();
        assert!(r.perturbation.is_some());
    }

    #[test]
    fn first_selection_matches_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for size in 5..=7 {
            let pts: Vec<QPoint> = (0..size)
                .map(|_| QPoint::from_ints(&[rng.gen_range(0..1000), rng.gen_range(0..1000)]))
                .collect();
            let r = affine_selection_suite(&[pts], AffineMode::FirstSelection).unwrap();
            assert_eq!(r.depth, r.oracle_depth);
            assert!(r.depth.unwrap() >= 1);
        }
    }

    #[test]
    fn pentagon_depth() {
        // the center lies in 5 of the 10 closed triangles, a diagonal crossing in 7
        let pts = plane(&[(0, 100), (95, 31), (59, -81), (-59, -81), (-95, 31)]);
        let mut t = ImageTable::new(2);
        for s in pts.iter().cloned().combinations(3) {
            t.push_face(vec![s]).unwrap();
        }
        assert_eq!(t.covering_faces(&QPoint::from_ints(&[0, 0])).len(), 5);
        assert_eq!(simplicial_depth_recount(&pts).unwrap().0, 7);
        let r = affine_selection_suite(&[pts], AffineMode::FirstSelection).unwrap();
        assert_eq!(r.depth, Some(7));
        assert_eq!(r.depth_fraction.as_deref(), Some("7/10"));
    }
}
