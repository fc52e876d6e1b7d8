use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use super::HomogeneousBox;
use crate::comparison::{Comparison, R};
use crate::complex::PlMapInstance;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::lattice::ElementId;

/// Coatom counts for a witnessed box: `C(Z_1, …, Z_{d+1})`, its upper bound
/// `d·max|C_a|` and its lower bound `(d+1)·minΓ(m) − d|C|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxCoatomReport {
    pub m: usize,
    pub coatoms: Vec<ElementId>,
    pub upper: usize,
    pub lower: i64,
    pub min_gamma: usize,
    pub rhs21: String,
    /// Every coatom of C(Z) has u in f(⟨A_c⟩).
    pub covered_by_u: bool,
    pub comparisons: Vec<Comparison>,
}

impl BoxCoatomReport {
    pub fn holds(&self) -> bool {
        self.covered_by_u && self.comparisons.iter().all(|c| c.holds)
    }
}

/// Checks the two-sided count of C(Z) for a box witnessed under the map and
/// derives the expansion inequality it implies.
pub fn box_coatom_analysis(map: &PlMapInstance<'_>, b: &HomogeneousBox, subset_budget: u128) -> Result<BoxCoatomReport> {
    let l = map.lattice();
    let g = map.incidence();
    let m = b.m;
    if m == 0 || b.parts.iter().any(|z| z.len() != m) {
        return Err(Error::Precondition("box must be witnessed with all |Z_i| = m ≥ 1".into()));
    }
    let d = b.parts.len() - 1;
    let all: BTreeSet<ElementId> = l.coatoms().iter().copied().collect();

    // C(Z) straight from the definition: coatoms c with A_c meeting every Z_i
    let coatoms: Vec<ElementId> = l
        .coatoms()
        .iter()
        .copied()
        .filter(|&c| b.parts.iter().all(|z| z.iter().any(|&a| l.leq(a, c))))
        .collect();

    // and through neighborhoods: C − ∪(C − Γ(Z_i))
    let mut missed: BTreeSet<ElementId> = BTreeSet::new();
    let mut gamma_sum = 0usize;
    for z in &b.parts {
        let gamma: BTreeSet<ElementId> = g.neighborhood(z)?.into_iter().collect();
        gamma_sum += gamma.len();
        missed.extend(all.difference(&gamma));
    }
    let via_gamma = all.len() - missed.len();

    let covered_by_u = coatoms.iter().all(|&c| {
        let j = l.coatoms().binary_search(&c).expect("coatom");
        map.coatom_membership(j, &b.u).member
    });

    let record = g.min_vertex_expansion(m, subset_budget)?;
    let upper = d * g.max_degree();
    let c_total = all.len() as i64;
    let lower = (d as i64 + 1) * record.min_gamma as i64 - d as i64 * c_total;
    let size = coatoms.len() as i64;
    let via_sum = gamma_sum as i64 - d as i64 * c_total;

    let min_gamma = Rational::from_integer(BigInt::from(record.min_gamma));
    let comparisons = vec![
        Comparison::eq("|C(Z)| = |C| - |∪(C - Γ(Z_i))|", &size, &(via_gamma as i64)),
        Comparison::le("|C(Z)| <= d max|C_a|", &size, &(upper as i64)),
        Comparison::le("Σ|Γ(Z_i)| - d|C| <= |C(Z)|", &via_sum, &size),
        Comparison::le("(d+1) minΓ(m) - d|C| <= Σ|Γ(Z_i)| - d|C|", &lower, &via_sum),
        Comparison::le("(d+1) minΓ(m) - d|C| <= d max|C_a|", &lower, &(upper as i64)),
        Comparison::le("minΓ(m) <= (d/(d+1))(max|C_a| + |C|)", &R(&min_gamma), &R(&record.rhs21)),
    ];
    Ok(BoxCoatomReport {
        m,
        coatoms,
        upper,
        lower,
        min_gamma: record.min_gamma,
        rhs21: crate::exact::rat_to_string(&record.rhs21),
        covered_by_u,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{sample_generic_embedding, VerifyMode};
    use crate::expander::DEFAULT_SUBSET_BUDGET;
    use crate::lattice::build_subspace_lattice;
    use crate::pach::{homogeneous_box_at, PartitionChoice};

    #[test]
    fn coatom_split_across_parts() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let e = sample_generic_embedding(&l, 2, 42, VerifyMode::Sampled(500)).unwrap();
        let map = PlMapInstance::new(&l, e).unwrap();
        let c = l.coatoms()[0];
        let ac = l.atoms_below(c);
        let p = PartitionChoice::new(ac.iter().map(|&a| vec![a]).collect()).unwrap();
        // u = e(c) lies in f(⟨A_c⟩), the face of the single transversal
        let u = map.embedding().point(c).clone();
        let b = homogeneous_box_at(&map, &p, &u).unwrap();
        assert_eq!(b.m, 1);
        let r = box_coatom_analysis(&map, &b, DEFAULT_SUBSET_BUDGET).unwrap();
        assert!(r.coatoms.contains(&c));
        // collinear atoms: the only coatom meeting all three singletons is c
        assert_eq!(r.coatoms, vec![c]);
        assert_eq!(r.upper, 6);
        assert_eq!(r.min_gamma, 3);
        assert_eq!(r.lower, 3 * 3 - 2 * 7);
        assert_eq!(r.rhs21, "20/3");
        assert!(r.holds(), "{:?}", r.comparisons);
    }

    #[test]
    fn rejects_empty_box() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let e = sample_generic_embedding(&l, 2, 42, VerifyMode::Sampled(10)).unwrap();
        let map = PlMapInstance::new(&l, e).unwrap();
        let b = HomogeneousBox {
            u: crate::exact::QPoint::from_ints(&[0, 0]),
            candidate_index: None,
            parts: vec![vec![]; 3],
            m: 0,
            verified_transversals: 0,
        };
        assert!(box_coatom_analysis(&map, &b, DEFAULT_SUBSET_BUDGET).is_err());
    }
}
