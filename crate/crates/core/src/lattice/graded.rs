use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::field::{enumerate_subspaces, Fq, Subspace};
use crate::error::{Error, Result};

pub type ElementId = usize;

/// Hard cap on full enumeration: q^r may not exceed this.
pub const SUBSPACE_CAPACITY: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub id: ElementId,
    pub rank: usize,
    pub subspace: Option<Subspace>,
}

#[derive(Clone, Debug)]
enum Order {
    /// Order derived from subspace containment.
    Subspace,
    /// Explicit order: `up[x]` = {y : x ≤ y}, `down[x]` = {y : y ≤ x}.
    Explicit { up: Vec<FixedBitSet>, down: Vec<FixedBitSet> },
}

/// A finite graded poset, normally a lattice, with element ids `0..len()`.
///
/// Subspace lattices derive their order from containment of rrefs and compute
/// joins and meets linear-algebraically. Other posets carry an explicit order
/// relation; joins and meets are then least upper / greatest lower bounds and
/// may fail to exist, which [`crate::lattice::validate_lattice`] reports.
#[derive(Clone, Debug)]
pub struct GradedLattice {
    field: Option<(Fq, usize)>,
    elements: Vec<Element>,
    order: Order,
    index: HashMap<Subspace, ElementId>,
    minimal: Vec<ElementId>,
    maximal: Vec<ElementId>,
    atoms: Vec<ElementId>,
    coatoms: Vec<ElementId>,
}

/// The lattice L(r, q) of all subspaces of F_q^r ordered by inclusion.
///
/// Elements are sorted by (dimension, rref rows), so ids are deterministic.
pub fn build_subspace_lattice(r: usize, q: u32) -> Result<GradedLattice> {
    let field = Fq::new(q)?;
    if r < 2 {
        return Err(Error::Parameter(format!("ambient dimension must be at least 2, got {r}")));
    }
    let size = (q as u64).checked_pow(r as u32).unwrap_or(u64::MAX);
    if size > SUBSPACE_CAPACITY {
        return Err(Error::capacity(format!("subspace lattice L({r},{q})"), format!("q^r = {size}"), SUBSPACE_CAPACITY));
    }
    let mut subs = enumerate_subspaces(field, r);
    subs.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    let elements = subs
        .into_iter()
        .enumerate()
        .map(|(id, s)| Element { id, rank: s.dim(), subspace: Some(s) })
        .collect();
    Ok(GradedLattice::assemble(Some((field, r)), elements, Order::Subspace))
}

impl GradedLattice {
    fn assemble(field: Option<(Fq, usize)>, elements: Vec<Element>, order: Order) -> Self {
        let index = elements
            .iter()
            .filter_map(|e| e.subspace.clone().map(|s| (s, e.id)))
            .collect();
        let mut lattice = GradedLattice {
            field,
            elements,
            order,
            index,
            minimal: Vec::new(),
            maximal: Vec::new(),
            atoms: Vec::new(),
            coatoms: Vec::new(),
        };
        let n = lattice.len();
        let top_rank = lattice.elements.iter().map(|e| e.rank).max().unwrap_or(0);
        if lattice.has_derived_order() {
            // containment: {0} and F_q^r are the only extremes
            lattice.minimal = lattice.elements.iter().filter(|e| e.rank == 0).map(|e| e.id).collect();
            lattice.maximal = lattice.elements.iter().filter(|e| e.rank == top_rank).map(|e| e.id).collect();
        } else {
            lattice.minimal = (0..n)
                .filter(|&x| (0..n).all(|y| y == x || !lattice.leq(y, x)))
                .collect();
            lattice.maximal = (0..n)
                .filter(|&x| (0..n).all(|y| y == x || !lattice.leq(x, y)))
                .collect();
        }
        lattice.atoms = lattice.elements.iter().filter(|e| e.rank == 1).map(|e| e.id).collect();
        lattice.coatoms = if top_rank >= 1 {
            lattice.elements.iter().filter(|e| e.rank + 1 == top_rank).map(|e| e.id).collect()
        } else {
            Vec::new()
        };
        lattice
    }

    pub(crate) fn from_subspaces(field: Fq, r: usize, elements: Vec<Element>) -> Self {
        Self::assemble(Some((field, r)), elements, Order::Subspace)
    }

    /// A graded poset from explicit ranks and order pairs `(x, y)` meaning
    /// `x ≤ y`. The relation is closed reflexively and transitively.
    pub fn from_poset(ranks: &[usize], leq_pairs: &[(ElementId, ElementId)]) -> Result<Self> {
        let elements = ranks
            .iter()
            .enumerate()
            .map(|(id, &rank)| Element { id, rank, subspace: None })
            .collect();
        Self::with_explicit_order(None, elements, leq_pairs)
    }

    pub(crate) fn with_explicit_order(
        field: Option<(Fq, usize)>,
        elements: Vec<Element>,
        leq_pairs: &[(ElementId, ElementId)],
    ) -> Result<Self> {
        let n = elements.len();
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|x| {
                let mut b = FixedBitSet::with_capacity(n);
                b.insert(x);
                b
            })
            .collect();
        for &(x, y) in leq_pairs {
            if x >= n || y >= n {
                return Err(Error::Parameter(format!("order pair ({x}, {y}) references a missing element")));
            }
            up[x].insert(y);
        }
        // transitive closure (Warshall on bitsets)
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for x in 0..n {
            for y in up[x].ones() {
                if y != x && up[y].contains(x) {
                    return Err(Error::Parameter(format!("order relation is not antisymmetric on ({x}, {y})")));
                }
            }
        }
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        Ok(Self::assemble(field, elements, Order::Explicit { up, down }))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn rank(&self, x: ElementId) -> usize {
        self.elements[x].rank
    }

    pub fn subspace(&self, x: ElementId) -> Option<&Subspace> {
        self.elements[x].subspace.as_ref()
    }

    /// `(q, r)` for subspace lattices.
    pub fn field_params(&self) -> Option<(u32, usize)> {
        self.field.map(|(f, r)| (f.order(), r))
    }

    pub(crate) fn has_derived_order(&self) -> bool {
        matches!(self.order, Order::Subspace)
    }

    pub fn id_of(&self, s: &Subspace) -> Option<ElementId> {
        self.index.get(s).copied()
    }

    pub fn minimal_elements(&self) -> &[ElementId] {
        &self.minimal
    }

    pub fn maximal_elements(&self) -> &[ElementId] {
        &self.maximal
    }

    pub fn bottom(&self) -> ElementId {
        self.minimal[0]
    }

    pub fn top(&self) -> ElementId {
        self.maximal[0]
    }

    /// Rank of the top element, i.e. `d + 1`.
    pub fn lattice_rank(&self) -> usize {
        self.rank(self.top())
    }

    pub fn atoms(&self) -> &[ElementId] {
        &self.atoms
    }

    pub fn coatoms(&self) -> &[ElementId] {
        &self.coatoms
    }

    pub fn rank_profile(&self) -> Vec<usize> {
        let top = self.elements.iter().map(|e| e.rank).max().unwrap_or(0);
        let mut p = vec![0; top + 1];
        for e in &self.elements {
            p[e.rank] += 1;
        }
        p
    }

    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        match &self.order {
            Order::Explicit { up, .. } => up[x].contains(y),
            Order::Subspace => {
                let (a, b) = (&self.elements[x], &self.elements[y]);
                a.rank <= b.rank
                    && a.subspace.as_ref().unwrap().is_subspace_of(b.subspace.as_ref().unwrap())
            }
        }
    }

    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.leq(x, y)
    }

    fn check(&self, x: ElementId) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::Parameter(format!("element {x} is not in the lattice")))
        }
    }

    pub fn join(&self, x: ElementId, y: ElementId) -> Result<ElementId> {
        self.check(x)?;
        self.check(y)?;
        match &self.order {
            Order::Subspace => {
                let s = self.elements[x].subspace.as_ref().unwrap().join(self.elements[y].subspace.as_ref().unwrap());
                self.id_of(&s)
                    .ok_or_else(|| Error::NotALattice(format!("join of ({x}, {y}) is not an element")))
            }
            Order::Explicit { up, .. } => {
                let mut common = up[x].clone();
                common.intersect_with(&up[y]);
                common
                    .ones()
                    .find(|&z| common.is_subset(&up[z]))
                    .ok_or_else(|| Error::NotALattice(format!("no unique join for ({x}, {y})")))
            }
        }
    }

    pub fn meet(&self, x: ElementId, y: ElementId) -> Result<ElementId> {
        self.check(x)?;
        self.check(y)?;
        match &self.order {
            Order::Subspace => {
                let s = self.elements[x].subspace.as_ref().unwrap().meet(self.elements[y].subspace.as_ref().unwrap());
                self.id_of(&s)
                    .ok_or_else(|| Error::NotALattice(format!("meet of ({x}, {y}) is not an element")))
            }
            Order::Explicit { down, .. } => {
                let mut common = down[x].clone();
                common.intersect_with(&down[y]);
                common
                    .ones()
                    .find(|&z| common.is_subset(&down[z]))
                    .ok_or_else(|| Error::NotALattice(format!("no unique meet for ({x}, {y})")))
            }
        }
    }

    /// Least upper bound and greatest lower bound of a pair.
    pub fn join_meet(&self, x: ElementId, y: ElementId) -> Result<(ElementId, ElementId)> {
        Ok((self.join(x, y)?, self.meet(x, y)?))
    }

    /// Join of a nonempty set of elements.
    pub fn join_all(&self, xs: &[ElementId]) -> Result<ElementId> {
        let (&first, rest) = xs
            .split_first()
            .ok_or_else(|| Error::Parameter("join of an empty set".into()))?;
        rest.iter().try_fold(first, |acc, &x| self.join(acc, x))
    }

    /// `A_x`: atoms below `x`.
    pub fn atoms_below(&self, x: ElementId) -> Vec<ElementId> {
        self.atoms.iter().copied().filter(|&a| self.leq(a, x)).collect()
    }

    /// `C_x`: coatoms above `x`.
    pub fn coatoms_above(&self, x: ElementId) -> Vec<ElementId> {
        self.coatoms.iter().copied().filter(|&c| self.leq(x, c)).collect()
    }

    /// `(A_x, C_x)` for an element.
    pub fn atoms_and_coatoms(&self, x: ElementId) -> Result<(Vec<ElementId>, Vec<ElementId>)> {
        self.check(x)?;
        Ok((self.atoms_below(x), self.coatoms_above(x)))
    }

    /// Elements strictly above `x`, ascending by id.
    pub fn strictly_above(&self, x: ElementId) -> Vec<ElementId> {
        (0..self.len()).filter(|&y| self.lt(x, y)).collect()
    }
}

/// The Boolean lattice of all subsets of `k` atoms; element ids are bitmasks.
#[cfg(test)]
pub(crate) fn boolean_lattice(k: usize) -> GradedLattice {
    let n = 1usize << k;
    let ranks: Vec<usize> = (0..n).map(|m| m.count_ones() as usize).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| x & y == x).map(move |y| (x, y)))
        .collect();
    GradedLattice::from_poset(&ranks, &pairs).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> GradedLattice {
        build_subspace_lattice(3, 2).unwrap()
    }

    fn line(l: &GradedLattice, v: &[u32]) -> ElementId {
        let f = Fq::new(l.field_params().unwrap().0).unwrap();
        l.id_of(&Subspace::span(f, v.len(), &[v.to_vec()]).unwrap()).unwrap()
    }

    #[test]
    fn rank_profiles() {
        assert_eq!(fano().rank_profile(), vec![1, 7, 7, 1]);
        assert_eq!(build_subspace_lattice(2, 3).unwrap().rank_profile(), vec![1, 4, 1]);
        assert_eq!(fano().len(), 16);
        assert_eq!(build_subspace_lattice(2, 3).unwrap().len(), 6);
    }

    #[test]
    fn rejects_composite_q_and_oversized_instances() {
        assert!(matches!(build_subspace_lattice(3, 4), Err(Error::Parameter(_))));
        assert!(matches!(build_subspace_lattice(7, 11), Err(Error::Capacity { .. })));
    }

    #[test]
    fn join_of_two_axes_is_their_plane() {
        let l = fano();
        let (e1, e2) = (line(&l, &[1, 0, 0]), line(&l, &[0, 1, 0]));
        let (j, m) = l.join_meet(e1, e2).unwrap();
        assert_eq!(l.subspace(j).unwrap().rref_rows(), &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(m, l.bottom());
    }

    #[test]
    fn collinear_atoms_join_to_their_line() {
        let l = fano();
        let atoms = [line(&l, &[1, 0, 0]), line(&l, &[0, 1, 0]), line(&l, &[1, 1, 0])];
        let j = l.join_all(&atoms).unwrap();
        assert_eq!(l.rank(j), 2);
        assert_ne!(j, l.top());
        assert_eq!(j, l.join(atoms[0], atoms[1]).unwrap());
    }

    #[test]
    fn lattice_identities() {
        let l = fano();
        for x in 0..l.len() {
            assert_eq!(l.meet(x, x).unwrap(), x);
            assert_eq!(l.join(x, l.bottom()).unwrap(), x);
        }
    }

    #[test]
    fn atoms_and_coatoms_of_fano() {
        let l = fano();
        let (a0, c0) = l.atoms_and_coatoms(l.bottom()).unwrap();
        assert!(a0.is_empty());
        assert_eq!(c0, l.coatoms());
        for &a in l.atoms() {
            assert_eq!(l.coatoms_above(a).len(), 3);
        }
        for &c in l.coatoms() {
            let ac = l.atoms_below(c);
            assert_eq!(ac.len(), 3);
            assert_eq!(l.join_all(&ac).unwrap(), c);
        }
    }

    #[test]
    fn boolean_fixture_matches_explicit_order_joins() {
        let b = boolean_lattice(3);
        assert_eq!(b.rank_profile(), vec![1, 3, 3, 1]);
        assert_eq!(b.join(0b001, 0b010).unwrap(), 0b011);
        assert_eq!(b.meet(0b011, 0b110).unwrap(), 0b010);
        assert_eq!(b.bottom(), 0);
        assert_eq!(b.top(), 7);
    }

    #[test]
    fn missing_join_is_an_error() {
        // 0 < a,b < c,d < 1 with both a,b below both c,d
        let ranks = [0, 1, 1, 2, 2, 3];
        let pairs = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
        let p = GradedLattice::from_poset(&ranks, &pairs).unwrap();
        assert!(matches!(p.join(1, 2), Err(Error::NotALattice(_))));
        assert!(matches!(p.meet(3, 4), Err(Error::NotALattice(_))));
    }

    #[test]
    fn cyclic_order_is_rejected() {
        assert!(GradedLattice::from_poset(&[0, 1], &[(0, 1), (1, 0)]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn modular_rank_identity(x in 0usize..28, y in 0usize..28) {
            let l = build_subspace_lattice(3, 3).unwrap();
            let (x, y) = (x % l.len(), y % l.len());
            let (j, m) = l.join_meet(x, y).unwrap();
            proptest::prop_assert_eq!(l.rank(j) + l.rank(m), l.rank(x) + l.rank(y));
            proptest::prop_assert_eq!(l.join(x, m).unwrap(), x);
            proptest::prop_assert_eq!(l.meet(x, j).unwrap(), x);
            proptest::prop_assert_eq!(l.leq(x, y), j == y);
        }
    }
}
