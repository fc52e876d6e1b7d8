//! Exact rational geometry.
//!
//! Everything here works over `BigRational`: points, affine solves, closed
//! convex-hull membership with barycentric witnesses, affine-hull
//! intersection tests and planar segment intersection. There is no floating
//! point anywhere in the crate's decision paths.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Serializes as `p/q`, always with an explicit denominator.
pub fn rat_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rat(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A point of Q^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoint(pub Vec<Rational>);

impl QPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        QPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QPoint(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        QPoint(coords.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn sub(&self, other: &QPoint) -> Vec<Rational> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rat_to_string).collect()
    }

    pub fn parse(coords: &[String]) -> Result<Self> {
        coords.iter().map(|c| parse_rat(c)).collect::<Result<Vec<_>>>().map(QPoint)
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", rat_to_string(c))?;
        }
        write!(f, ")")
    }
}

/// Barycenter of a nonempty point list.
pub fn barycenter(points: &[&QPoint]) -> QPoint {
    let d = points[0].dim();
    let k = int(points.len() as i64);
    let mut acc = vec![Rational::zero(); d];
    for p in points {
        for (a, c) in acc.iter_mut().zip(&p.0) {
            *a += c;
        }
    }
    QPoint(acc.into_iter().map(|a| a / &k).collect())
}

/// Row-reduces `m` in place and returns the pivot column of each nonzero row.
fn row_reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..m[row].len() {
            let v = &m[row][c] * &inv;
            m[row][c] = v;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..m[r].len() {
                    let v = &factor * &m[row][c];
                    m[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m = rows.to_vec();
    row_reduce(&mut m, cols).len()
}

/// Solves `a x = b`. Returns `None` when inconsistent; when the system is
/// underdetermined the free variables are set to zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Some(x)
}

/// True when the points are affinely independent.
pub fn affinely_independent(points: &[&QPoint]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    if points.len() > points[0].dim() + 1 {
        return false;
    }
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(points[0])).collect();
    rank(&diffs) == diffs.len()
}

/// Barycentric coordinates of `u` in the simplex spanned by affinely
/// independent `points`, if `u` lies in their closed convex hull.
fn simplex_coordinates(points: &[&QPoint], u: &QPoint) -> Option<Vec<Rational>> {
    let d = u.dim();
    let k = points.len() - 1;
    let rows: Vec<Vec<Rational>> = (0..d)
        .map(|i| (1..=k).map(|j| &points[j].0[i] - &points[0].0[i]).collect())
        .collect();
    let rhs = u.sub(points[0]);
    let lambda = if k == 0 {
        if rhs.iter().all(Zero::is_zero) {
            Vec::new()
        } else {
            return None;
        }
    } else {
        solve(&rows, &rhs)?
    };
    let mut total = Rational::zero();
    for l in &lambda {
        if l.is_negative() {
            return None;
        }
        total += l;
    }
    let first = Rational::one() - total;
    if first.is_negative() {
        return None;
    }
    let mut out = Vec::with_capacity(k + 1);
    out.push(first);
    out.extend(lambda);
    Some(out)
}

/// Closed convex-hull membership. Returns barycentric coefficients over the
/// full vertex list (zeros for vertices not used) when `u` is in the hull.
///
/// Affinely dependent vertex lists are handled by searching affinely
/// independent subsets, which suffices by Carathéodory.
pub fn conv_contains(points: &[&QPoint], u: &QPoint) -> Option<Vec<Rational>> {
    if points.is_empty() {
        return None;
    }
    if affinely_independent(points) {
        return simplex_coordinates(points, u);
    }
    let n = points.len();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<&QPoint> = idx.iter().map(|&i| points[i]).collect();
        if !affinely_independent(&sub) {
            continue;
        }
        if let Some(coef) = simplex_coordinates(&sub, u) {
            let mut full = vec![Rational::zero(); n];
            for (i, c) in idx.into_iter().zip(coef) {
                full[i] = c;
            }
            return Some(full);
        }
    }
    None
}

/// Decides whether the affine hulls of the given point families share a
/// common point, by checking consistency of
/// `x - Σ_j λ_ij (p_ij - p_i0) = p_i0` over all families at once.
pub fn affine_hulls_meet(families: &[Vec<&QPoint>]) -> bool {
    if families.iter().any(Vec::is_empty) {
        return false;
    }
    let d = families[0][0].dim();
    let extra: usize = families.iter().map(|f| f.len() - 1).sum();
    let cols = d + extra;
    let mut a = Vec::with_capacity(d * families.len());
    let mut b = Vec::with_capacity(d * families.len());
    let mut offset = d;
    for fam in families {
        for i in 0..d {
            let mut row = vec![Rational::zero(); cols];
            row[i] = Rational::one();
            for (j, p) in fam[1..].iter().enumerate() {
                row[offset + j] = &fam[0].0[i] - &p.0[i];
            }
            a.push(row);
            b.push(fam[0].0[i].clone());
        }
        offset += fam.len() - 1;
    }
    solve(&a, &b).is_some()
}

/// Intersection point of closed planar segments `ab` and `cd` when they
/// cross in exactly one point. Parallel or collinear pairs return `None`.
pub fn segment_intersection(a: &QPoint, b: &QPoint, c: &QPoint, d: &QPoint) -> Option<QPoint> {
    debug_assert_eq!(a.dim(), 2);
    let r = b.sub(a);
    let s = d.sub(c);
    let denom = &r[0] * &s[1] - &r[1] * &s[0];
    if denom.is_zero() {
        return None;
    }
    let ca = c.sub(a);
    let t = (&ca[0] * &s[1] - &ca[1] * &s[0]) / &denom;
    let w = (&ca[0] * &r[1] - &ca[1] * &r[0]) / &denom;
    let unit = Rational::one();
    if t.is_negative() || t > unit || w.is_negative() || w > unit {
        return None;
    }
    Some(QPoint(vec![&a.0[0] + &t * &r[0], &a.0[1] + &t * &r[1]]))
}

/// A nonnegative real number `coef · radicand^(1/index)` with rational
/// coefficient and radicand. Comparisons are exact: both sides are raised to
/// a common integer power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub coef: Rational,
    pub radicand: Rational,
    pub index: u32,
}

impl Surd {
    pub fn new(coef: Rational, radicand: Rational, index: u32) -> Self {
        assert!(index >= 1, "root index must be positive");
        assert!(!coef.is_negative() && !radicand.is_negative(), "surds are nonnegative");
        Surd { coef, radicand, index }
    }

    pub fn rational(r: Rational) -> Self {
        Surd::new(r, Rational::one(), 1)
    }

    /// `self^power` as a rational, for `power` a multiple of the index.
    fn raised(&self, power: u32) -> Rational {
        let c: Rational = Pow::pow(&self.coef, power);
        let r: Rational = Pow::pow(&self.radicand, power / self.index);
        c * r
    }

    /// The exact value when it is rational (perfect power radicand).
    pub fn exact_value(&self) -> Option<Rational> {
        if self.index == 1 {
            return Some(&self.coef * &self.radicand);
        }
        let num = nth_root_exact(self.radicand.numer(), self.index)?;
        let den = nth_root_exact(self.radicand.denom(), self.index)?;
        Some(&self.coef * Rational::new(num, den))
    }
}

fn nth_root_exact(v: &BigInt, n: u32) -> Option<BigInt> {
    let r = v.nth_root(n);
    (Pow::pow(&r, n) == *v).then_some(r)
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = self.index.lcm(&other.index);
        self.raised(l).cmp(&other.raised(l))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.exact_value() {
            return write!(f, "{}", rat_to_string(&v));
        }
        write!(
            f,
            "{}*({})^(1/{})",
            rat_to_string(&self.coef),
            rat_to_string(&self.radicand),
            self.index
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoint {
        QPoint::from_ints(c)
    }

    #[test]
    fn triangle_membership_with_barycentric_witness() {
        let (a, b, c) = (p(&[0, 0]), p(&[4, 0]), p(&[0, 4]));
        let coef = conv_contains(&[&a, &b, &c], &p(&[1, 1])).unwrap();
        assert_eq!(coef, vec![rat(1, 2), rat(1, 4), rat(1, 4)]);
        assert!(conv_contains(&[&a, &b, &c], &p(&[2, 2])).is_some());
        assert!(conv_contains(&[&a, &b, &c], &p(&[3, 2])).is_none());
    }

    #[test]
    fn degenerate_hull_uses_independent_subsets() {
        let (a, b, c) = (p(&[0, 0]), p(&[2, 2]), p(&[4, 4]));
        let coef = conv_contains(&[&a, &b, &c], &p(&[3, 3])).unwrap();
        let mut total = Rational::zero();
        let mut x = Rational::zero();
        for (w, q) in coef.iter().zip([&a, &b, &c]) {
            total += w;
            x += w * &q.0[0];
        }
        assert_eq!(total, Rational::one());
        assert_eq!(x, int(3));
        assert!(conv_contains(&[&a, &b, &c], &p(&[3, 2])).is_none());
        assert!(conv_contains(&[&a, &a], &a).is_some());
    }

    #[test]
    fn concurrent_lines_meet_and_generic_ones_do_not() {
        let l1 = vec![p(&[-1, 0]), p(&[1, 0])];
        let l2 = vec![p(&[0, -1]), p(&[0, 1])];
        let l3 = vec![p(&[-1, -1]), p(&[1, 1])];
        let l4 = vec![p(&[-1, -1]), p(&[1, 2])];
        fn refs(v: &[QPoint]) -> Vec<&QPoint> {
            v.iter().collect()
        }
        assert!(affine_hulls_meet(&[refs(&l1), refs(&l2), refs(&l3)]));
        assert!(!affine_hulls_meet(&[refs(&l1), refs(&l2), refs(&l4)]));
        let pt = vec![p(&[0, 0])];
        assert!(affine_hulls_meet(&[refs(&pt), refs(&l1), refs(&l2)]));
        let off = vec![p(&[5, 5])];
        assert!(!affine_hulls_meet(&[refs(&off), refs(&l1), refs(&l2)]));
    }

    #[test]
    fn segments_cross_exactly() {
        let x = segment_intersection(&p(&[0, 0]), &p(&[2, 2]), &p(&[0, 2]), &p(&[2, 0])).unwrap();
        assert_eq!(x, p(&[1, 1]));
        assert!(segment_intersection(&p(&[0, 0]), &p(&[1, 1]), &p(&[2, 0]), &p(&[3, 0])).is_none());
        // touching at an endpoint counts
        let t = segment_intersection(&p(&[0, 0]), &p(&[2, 0]), &p(&[2, 0]), &p(&[2, 5])).unwrap();
        assert_eq!(t, p(&[2, 0]));
    }

    #[test]
    fn surd_comparisons_are_exact() {
        let sqrt48 = Surd::new(int(1), int(48), 2);
        assert!(Surd::rational(int(6)) < sqrt48);
        assert!(sqrt48 < Surd::rational(int(7)));
        assert_eq!(Surd::new(int(12), int(144), 2).exact_value(), Some(int(144)));
        assert_eq!(Surd::new(int(1), int(2), 2).exact_value(), None);
    }

    #[test]
    fn rational_strings_round_trip() {
        for s in ["3/4", "-7/1", "0/1"] {
            assert_eq!(rat_to_string(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("5").unwrap(), int(5));
        assert!(parse_rat("1/0").is_err());
    }

    proptest::proptest! {
        #[test]
        fn weighted_barycenters_are_contained(
            pts in proptest::collection::vec((-50i64..50, -50i64..50), 3),
            w in proptest::collection::vec(1i64..20, 3),
        ) {
            let pts: Vec<QPoint> = pts.iter().map(|&(x, y)| p(&[x, y])).collect();
            let total: i64 = w.iter().sum();
            let u = QPoint((0..2).map(|i| pts.iter().zip(&w).map(|(q, &wi)| &q.0[i] * rat(wi, total)).sum()).collect());
            let refs: Vec<&QPoint> = pts.iter().collect();
            let coef = conv_contains(&refs, &u);
            proptest::prop_assert!(coef.is_some());
            if affinely_independent(&refs) {
                let expect: Vec<Rational> = w.iter().map(|&wi| rat(wi, total)).collect();
                proptest::prop_assert_eq!(coef.unwrap(), expect);
            }
        }

        #[test]
        fn segment_intersection_is_symmetric(c in proptest::collection::vec(-20i64..20, 8)) {
            let q: Vec<QPoint> = c.chunks(2).map(p).collect();
            let a = segment_intersection(&q[0], &q[1], &q[2], &q[3]);
            let b = segment_intersection(&q[2], &q[3], &q[0], &q[1]);
            proptest::prop_assert_eq!(&a, &b);
            if let Some(x) = a {
                proptest::prop_assert!(conv_contains(&[&q[0], &q[1]], &x).is_some());
                proptest::prop_assert!(conv_contains(&[&q[2], &q[3]], &x).is_some());
            }
        }
    }
}
