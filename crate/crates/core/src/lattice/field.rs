//! Prime fields F_q, matrices over them, and subspaces in reduced row-echelon form.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// The prime field of order `q`. Scalars are plain `u32` residues in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fq {
    q: u32,
}

impl Fq {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q as u64) {
            return Err(Error::Parameter(format!("q must be prime, got {q}")));
        }
        Ok(Fq { q })
    }

    pub fn order(self) -> u32 {
        self.q
    }

    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.q as u64 - b as u64) % self.q as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        // Fermat: a^(q-2)
        let (mut base, mut exp, mut acc) = (a as u64 % self.q as u64, self.q as u64 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.q as u64;
            }
            base = base * base % self.q as u64;
            exp >>= 1;
        }
        acc as u32
    }

    pub fn dot(self, a: &[u32], b: &[u32]) -> u32 {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

/// Dense matrix over F_q stored row-major with explicit dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    field: Fq,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMatrix {
    pub fn from_rows(field: Fq, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Parameter(format!("row of length {} in a matrix with {cols} columns", r.len())));
            }
            data.extend(r.iter().map(|&v| v % field.order()));
        }
        Ok(FqMatrix { field, rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn at(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    /// Reduced row-echelon form with zero rows removed.
    pub fn rref(&self) -> FqMatrix {
        let f = self.field;
        let mut m: Vec<Vec<u32>> = self.row_vecs();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(p) = (pivot_row..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(pivot_row, p);
            let inv = f.inv(m[pivot_row][col]);
            for v in m[pivot_row].iter_mut() {
                *v = f.mul(*v, inv);
            }
            let pivot = m[pivot_row].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != pivot_row && row[col] != 0 {
                    let factor = row[col];
                    for (v, &pv) in row.iter_mut().zip(&pivot) {
                        *v = f.sub(*v, f.mul(factor, pv));
                    }
                }
            }
            pivot_row += 1;
            if pivot_row == m.len() {
                break;
            }
        }
        m.truncate(pivot_row);
        FqMatrix::from_rows(f, self.cols, &m).expect("rref keeps the column count")
    }

    pub fn rank(&self) -> usize {
        self.rref().rows
    }

    /// Pivot column of each row, assuming `self` is already in rref.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|r| (0..self.cols).find(|&c| self.at(r, c) != 0).expect("rref has no zero rows"))
            .collect()
    }

    /// Basis (as rows) of the right null space `{x : M x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let r = self.rref();
        let pivots = r.pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.sub(0, r.at(row, fc));
                }
                v
            })
            .collect()
    }
}

/// A linear subspace of F_q^r, stored as its unique reduced row-echelon basis.
///
/// Equality, hashing and ordering are structural on the rref, so two
/// `Subspace` values are equal exactly when their row spaces coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    q: u32,
    ambient: usize,
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    /// The row space of `generators`.
    pub fn span(field: Fq, ambient: usize, generators: &[Vec<u32>]) -> Result<Self> {
        let m = FqMatrix::from_rows(field, ambient, generators)?;
        Ok(Self::from_rref(field, ambient, m.rref().row_vecs()))
    }

    pub(crate) fn from_rref(field: Fq, ambient: usize, rows: Vec<Vec<u32>>) -> Self {
        Subspace { q: field.order(), ambient, rows }
    }

    pub fn zero(field: Fq, ambient: usize) -> Self {
        Self::from_rref(field, ambient, Vec::new())
    }

    pub fn field(&self) -> Fq {
        Fq { q: self.q }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rref_rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        let f = self.field();
        let mut w = v.to_vec();
        for row in &self.rows {
            let pc = row.iter().position(|&x| x != 0).expect("rref rows are nonzero");
            let factor = w[pc];
            if factor != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(factor, r));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.rows.iter().all(|r| other.contains_vector(r))
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let stacked: Vec<Vec<u32>> = self.rows.iter().chain(&other.rows).cloned().collect();
        Subspace::span(self.field(), self.ambient, &stacked).expect("same ambient dimension")
    }

    /// Orthogonal complement under the standard dot product. Over any field
    /// `dim U + dim U^⊥ = r` and `U^⊥⊥ = U`, even when `U ∩ U^⊥ ≠ 0`.
    pub fn perp(&self) -> Subspace {
        let f = self.field();
        let basis = if self.rows.is_empty() {
            (0..self.ambient)
                .map(|i| (0..self.ambient).map(|j| u32::from(i == j)).collect())
                .collect()
        } else {
            FqMatrix::from_rows(f, self.ambient, &self.rows).expect("valid rows").null_space()
        };
        Subspace::span(f, self.ambient, &basis).expect("same ambient dimension")
    }

    pub fn meet(&self, other: &Subspace) -> Subspace {
        self.perp().join(&other.perp()).perp()
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?}", self.rows)
    }
}

/// Every subspace of F_q^r, enumerated as rref matrices grouped by dimension.
pub(crate) fn enumerate_subspaces(field: Fq, r: usize) -> Vec<Subspace> {
    let q = field.order();
    let mut out = Vec::new();
    for k in 0..=r {
        for pivots in itertools::Itertools::combinations(0..r, k) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &p)| ((p + 1)..r).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            let total = (q as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut rows = vec![vec![0u32; r]; k];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = 1;
                }
                let mut c = code;
                for &(i, col) in &free {
                    rows[i][col] = (c % q as u64) as u32;
                    c /= q as u64;
                }
                out.push(Subspace::from_rref(field, r, rows));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_and_inverses() {
        assert!(Fq::new(4).is_err());
        let f = Fq::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn rref_is_canonical() {
        let f = Fq::new(3).unwrap();
        let a = Subspace::span(f, 3, &[vec![1, 2, 0], vec![2, 1, 1]]).unwrap();
        let b = Subspace::span(f, 3, &[vec![0, 0, 1], vec![1, 2, 2]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn join_and_meet_of_planes() {
        let f = Fq::new(2).unwrap();
        let p1 = Subspace::span(f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let p2 = Subspace::span(f, 3, &[vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let line = Subspace::span(f, 3, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(p1.meet(&p2), line);
        assert_eq!(p1.join(&p2).dim(), 3);
        // self-orthogonal vector over F_2
        let iso = Subspace::span(f, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(iso.perp(), iso);
    }

    #[test]
    fn null_space_annihilates() {
        let f = Fq::new(5).unwrap();
        let m = FqMatrix::from_rows(f, 4, &[vec![1, 2, 3, 4], vec![0, 1, 4, 2]]).unwrap();
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in 0..m.rows() {
                assert_eq!(f.dot(m.row(r), v), 0);
            }
        }
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        // [3 choose k]_2 = 1, 7, 7, 1
        let subs = enumerate_subspaces(Fq::new(2).unwrap(), 3);
        let mut profile = [0usize; 4];
        for s in &subs {
            profile[s.dim()] += 1;
        }
        assert_eq!(profile, [1, 7, 7, 1]);
    }
}
