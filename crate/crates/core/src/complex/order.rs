use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{ElementId, GradedLattice};

/// A face of an order complex: a strictly increasing chain of element ids.
pub type Chain = Vec<ElementId>;

/// Default cap on the number of chains enumerated.
pub const DEFAULT_CHAIN_BUDGET: u128 = 1_000_000;

/// The order complex Δ(L̃) of the proper part above the bottom, L̃ = L − {0̂}.
#[derive(Clone, Debug)]
pub struct OrderComplex {
    ground: Vec<ElementId>,
    /// All faces, sorted by (length, lexicographic).
    faces: Vec<Chain>,
    index: HashMap<Chain, usize>,
}

/// Enumerates every chain of L̃ by depth-first extension upward.
pub fn order_complex(l: &GradedLattice, budget: u128) -> Result<OrderComplex> {
    let bottom = l.bottom();
    let ground: Vec<ElementId> = (0..l.len()).filter(|&x| x != bottom).collect();
    let above: HashMap<ElementId, Vec<ElementId>> = ground
        .iter()
        .map(|&x| (x, l.strictly_above(x)))
        .collect();
    let mut faces = Vec::new();
    let mut stack: Vec<Chain> = ground.iter().rev().map(|&x| vec![x]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        for &y in above[&last].iter().rev() {
            let mut next = chain.clone();
            next.push(y);
            stack.push(next);
        }
        faces.push(chain);
        if faces.len() as u128 > budget {
            return Err(Error::capacity("order complex chains", format!("more than {budget}"), budget));
        }
    }
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index = faces.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    Ok(OrderComplex { ground, faces, index })
}

impl OrderComplex {
    /// The vertex set L̃.
    pub fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    pub fn faces(&self) -> &[Chain] {
        &self.faces
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &Chain> {
        self.faces.iter().filter(move |c| c.len() == k + 1)
    }

    pub fn face_id(&self, chain: &[ElementId]) -> Option<usize> {
        self.index.get(chain).copied()
    }

    pub fn contains(&self, chain: &[ElementId]) -> bool {
        self.index.contains_key(chain)
    }

    /// Faces not strictly contained in another face.
    pub fn maximal_faces(&self) -> Vec<&Chain> {
        self.faces
            .iter()
            .filter(|c| {
                !self
                    .faces
                    .iter()
                    .any(|o| o.len() > c.len() && c.iter().all(|x| o.binary_search(x).is_ok()))
            })
            .collect()
    }

    /// Faces of Δ(L̃_{≤x}).
    pub fn below<'a>(&'a self, l: &'a GradedLattice, x: ElementId) -> impl Iterator<Item = &'a Chain> + 'a {
        self.faces.iter().filter(move |c| l.leq(*c.last().unwrap(), x))
    }

    /// True when every maximal face contains `apex`, so the complex is a cone.
    pub fn is_cone_with_apex(&self, apex: ElementId) -> bool {
        self.maximal_faces().iter().all(|c| c.contains(&apex))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{boolean_lattice, build_subspace_lattice};

    #[test]
    fn line_over_f2() {
        let l = build_subspace_lattice(2, 2).unwrap();
        let oc = order_complex(&l, DEFAULT_CHAIN_BUDGET).unwrap();
        assert_eq!(oc.ground().len(), 4);
        let maximal = oc.maximal_faces();
        assert_eq!(maximal.len(), 3);
        assert!(maximal.iter().all(|c| c.len() == 2 && c[1] == l.top()));
    }

    #[test]
    fn fano_chains() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let oc = order_complex(&l, DEFAULT_CHAIN_BUDGET).unwrap();
        assert_eq!(oc.ground().len(), 15);
        assert_eq!(oc.maximal_faces().len(), 21);
        assert_eq!(oc.faces_of_dim(0).count(), 15);
        // 21 atom<coatom + 7 atom<top + 7 coatom<top
        assert_eq!(oc.faces_of_dim(1).count(), 35);
        assert_eq!(oc.faces_of_dim(2).count(), 21);
        assert!(oc.is_cone_with_apex(l.top()));
        for c in oc.faces() {
            assert!(c.windows(2).all(|w| l.lt(w[0], w[1])));
        }
        // the subcomplex below a coatom: 3 atoms, the coatom, 3 edges
        let c = l.coatoms()[0];
        assert_eq!(oc.below(&l, c).count(), 7);
    }

    #[test]
    fn boolean_rank_two_is_a_cone() {
        let b = boolean_lattice(2);
        let oc = order_complex(&b, DEFAULT_CHAIN_BUDGET).unwrap();
        assert_eq!(oc.maximal_faces().len(), 2);
        assert!(oc.is_cone_with_apex(b.top()));
    }

    #[test]
    fn budget_is_enforced() {
        let l = build_subspace_lattice(3, 2).unwrap();
        assert!(matches!(order_complex(&l, 10), Err(Error::Capacity { .. })));
    }
}
