//! The atom–coatom incidence graph G_L and its vertex expansion.
//!
//! Everything in this module is exact: subset minima are found by exhaustive
//! lexicographic enumeration and all bounds are rationals (or surds compared
//! by integer powers).

mod bounds;
mod table;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::BigInt;

pub use bounds::{corradi_lower_bound, theorem21_rhs, CorradiBound};
pub use table::{expansion_table, write_expansion_csv, ExpansionRow};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::lattice::{projective_count, ElementId, GradedLattice};

/// Default number of m-subsets the exact search may visit.
pub const DEFAULT_SUBSET_BUDGET: u128 = 10_000_000;

/// Bipartite graph on atoms ∪ coatoms with `(a, c)` an edge iff `a ≤ c`.
#[derive(Clone, Debug)]
pub struct BipartiteIncidence {
    atoms: Vec<ElementId>,
    coatoms: Vec<ElementId>,
    /// `rows[i]` = C_a for the i-th atom, as a bitset over coatom positions.
    rows: Vec<FixedBitSet>,
    lattice_rank: usize,
    field_q: Option<u32>,
}

/// Result of the exact expansion search for one subset size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionRecord {
    pub m: usize,
    pub min_gamma: usize,
    /// Lexicographically first minimizing atom set (element ids).
    pub witness: Vec<ElementId>,
    /// Corrádi lower bound, available for subspace lattices.
    pub corradi: Option<Rational>,
    pub rhs21: Rational,
}

impl BipartiteIncidence {
    pub fn from_lattice(l: &GradedLattice) -> Self {
        let atoms = l.atoms().to_vec();
        let coatoms = l.coatoms().to_vec();
        let rows = atoms
            .iter()
            .map(|&a| {
                let mut row = FixedBitSet::with_capacity(coatoms.len());
                for (j, &c) in coatoms.iter().enumerate() {
                    if l.leq(a, c) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        BipartiteIncidence {
            atoms,
            coatoms,
            rows,
            lattice_rank: l.lattice_rank(),
            field_q: l.field_params().map(|(q, _)| q),
        }
    }

    pub fn atoms(&self) -> &[ElementId] {
        &self.atoms
    }

    pub fn coatoms(&self) -> &[ElementId] {
        &self.coatoms
    }

    /// `d`, where the lattice has rank `d + 1`.
    pub fn dimension(&self) -> usize {
        self.lattice_rank.saturating_sub(1)
    }

    /// `|C_a|` for the atom with the given element id.
    pub fn degree(&self, atom: ElementId) -> Result<usize> {
        Ok(self.rows[self.atom_position(atom)?].count_ones(..))
    }

    pub fn max_degree(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).max().unwrap_or(0)
    }

    /// `C_a` as coatom element ids.
    pub fn coatoms_of(&self, atom: ElementId) -> Result<Vec<ElementId>> {
        let i = self.atom_position(atom)?;
        Ok(self.rows[i].ones().map(|j| self.coatoms[j]).collect())
    }

    /// `(N_d, N_{d-1}, N_{d-2})` for subspace lattices.
    pub fn projective_counts(&self) -> Option<(u64, u64, u64)> {
        let q = self.field_q? as u64;
        let d = self.dimension() as i64;
        Some((projective_count(q, d), projective_count(q, d - 1), projective_count(q, d - 2)))
    }

    fn atom_position(&self, atom: ElementId) -> Result<usize> {
        self.atoms
            .binary_search(&atom)
            .map_err(|_| Error::Parameter(format!("element {atom} is not an atom")))
    }

    pub(crate) fn union_of_positions(&self, positions: &[usize]) -> FixedBitSet {
        let mut acc = FixedBitSet::with_capacity(self.coatoms.len());
        for &i in positions {
            acc.union_with(&self.rows[i]);
        }
        acc
    }

    /// Γ(Z): all coatoms above some atom of `z`, as sorted element ids.
    pub fn neighborhood(&self, z: &[ElementId]) -> Result<Vec<ElementId>> {
        let positions = z.iter().map(|&a| self.atom_position(a)).collect::<Result<Vec<_>>>()?;
        Ok(self.union_of_positions(&positions).ones().map(|j| self.coatoms[j]).collect())
    }

    /// Exact `min_{|Z| = m} |Γ(Z)|` over all m-subsets of atoms, visited in
    /// lexicographic order so the first minimizer is the witness.
    pub fn min_vertex_expansion(&self, m: usize, budget: u128) -> Result<ExpansionRecord> {
        let n = self.atoms.len();
        if m == 0 || m > n {
            return Err(Error::Parameter(format!("subset size {m} outside 1..={n}")));
        }
        let count = binomial(n, m);
        if count > budget {
            return Err(Error::capacity(format!("C({n}, {m}) atom subsets"), count, budget));
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for z in (0..n).combinations(m) {
            let size = self.union_of_positions(&z).count_ones(..);
            if best.as_ref().is_none_or(|(b, _)| size < *b) {
                best = Some((size, z));
            }
        }
        let (min_gamma, witness) = best.expect("at least one subset");
        let corradi = self.field_q.and_then(|q| {
            (self.dimension() >= 1).then(|| corradi_lower_bound(m as u64, q as u64, self.dimension() as u32).first)
        });
        Ok(ExpansionRecord {
            m,
            min_gamma,
            witness: witness.into_iter().map(|i| self.atoms[i]).collect(),
            corradi,
            rhs21: self.theorem21_rhs()?,
        })
    }

    /// `(d/(d+1)) · (max_a |C_a| + |C|)`.
    pub fn theorem21_rhs(&self) -> Result<Rational> {
        let d = self.dimension();
        if self.lattice_rank < 2 {
            return Err(Error::Parameter("lattice rank must be at least 2 (d >= 1)".into()));
        }
        Ok(Rational::new(
            BigInt::from(d * (self.max_degree() + self.coatoms.len())),
            BigInt::from(d + 1),
        ))
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::lattice::{build_subspace_lattice, Fq, Subspace};

    fn fano() -> (GradedLattice, BipartiteIncidence) {
        let l = build_subspace_lattice(3, 2).unwrap();
        let g = BipartiteIncidence::from_lattice(&l);
        (l, g)
    }

    fn atom(l: &GradedLattice, v: [u32; 3]) -> ElementId {
        l.id_of(&Subspace::span(Fq::new(2).unwrap(), 3, &[v.to_vec()]).unwrap()).unwrap()
    }

    #[test]
    fn neighborhoods_in_the_fano_plane() {
        let (l, g) = fano();
        let a = l.atoms()[0];
        assert_eq!(g.neighborhood(&[a]).unwrap().len(), 3);
        assert_eq!(g.neighborhood(l.atoms()).unwrap(), l.coatoms());
        let triangle = [atom(&l, [1, 0, 0]), atom(&l, [0, 1, 0]), atom(&l, [0, 0, 1])];
        assert_eq!(g.neighborhood(&triangle).unwrap().len(), 6);
        let collinear = [atom(&l, [1, 0, 0]), atom(&l, [0, 1, 0]), atom(&l, [1, 1, 0])];
        assert_eq!(g.neighborhood(&collinear).unwrap().len(), 7);
        assert!(g.neighborhood(&[l.top()]).is_err());
    }

    #[test]
    fn fano_expansion_profile() {
        // exhaustive values from an independent enumeration over all subsets
        let (l, g) = fano();
        let expected = [3, 5, 6, 6, 7, 7, 7];
        for (m, &want) in (1..=7).zip(&expected) {
            let rec = g.min_vertex_expansion(m, DEFAULT_SUBSET_BUDGET).unwrap();
            assert_eq!(rec.min_gamma, want, "m = {m}");
            assert_eq!(g.neighborhood(&rec.witness).unwrap().len(), want);
            assert_eq!(rec.witness.len(), m);
            assert_eq!(rec.rhs21, rat(20, 3));
        }
        let rec3 = g.min_vertex_expansion(3, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(rec3.corradi, Some(rat(27, 5)));
        // the minimizer is a non-collinear triple
        assert_ne!(l.join_all(&rec3.witness).unwrap(), l.join(rec3.witness[0], rec3.witness[1]).unwrap());
    }

    #[test]
    fn budget_and_range_errors() {
        let (_, g) = fano();
        assert!(matches!(g.min_vertex_expansion(3, 10), Err(Error::Capacity { .. })));
        assert!(matches!(g.min_vertex_expansion(0, 100), Err(Error::Parameter(_))));
        assert!(matches!(g.min_vertex_expansion(8, 100), Err(Error::Parameter(_))));
    }

    #[test]
    fn rhs_for_small_lattices() {
        assert_eq!(fano().1.theorem21_rhs().unwrap(), rat(20, 3));
        let l = build_subspace_lattice(2, 3).unwrap();
        assert_eq!(BipartiteIncidence::from_lattice(&l).theorem21_rhs().unwrap(), rat(5, 2));
    }

    #[test]
    fn projective_counts_and_degrees() {
        let (l, g) = fano();
        assert_eq!(g.projective_counts(), Some((7, 3, 1)));
        for &a in l.atoms() {
            assert_eq!(g.degree(a).unwrap(), 3);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(13, 6), 1716);
        assert_eq!(binomial(3, 5), 0);
    }
}
