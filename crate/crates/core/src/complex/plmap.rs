use std::collections::BTreeMap;

use num_traits::Signed;
use serde::Serialize;

use super::embedding::GenericEmbedding;
use super::order::{order_complex, Chain, OrderComplex, DEFAULT_CHAIN_BUDGET};
use crate::error::{Error, Result};
use crate::exact::{affinely_independent, conv_contains, QPoint, Rational};
use crate::expander::BipartiteIncidence;
use crate::geometry::ImageTable;
use crate::lattice::{ElementId, GradedLattice};

/// Default cap on the number of maximal flags `|σ|!` expanded per face.
pub const DEFAULT_FLAG_BUDGET: u128 = 40_320;

/// A face σ₀ ⊂ σ₁ ⊂ ⋯ ⊂ σ_k of the barycentric subdivision of S(A).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SdSimplex {
    pub sets: Vec<Vec<ElementId>>,
}

/// One affine piece of f(⟨σ⟩): the de-duplicated join chain of a maximal flag
/// together with the first flag (in lexicographic order) that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageCell {
    pub chain: Chain,
    pub flag: SdSimplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    pub flag: SdSimplex,
    pub chain: Chain,
    /// Barycentric coefficients of u over `chain`.
    pub coefficients: Vec<Rational>,
}

impl MembershipWitness {
    /// The sub-chain carrying positive coefficients.
    pub fn support(&self) -> Chain {
        self.chain
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| c.is_positive())
            .map(|(&x, _)| x)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<MembershipWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverCount {
    pub count: usize,
    pub coatoms: Vec<ElementId>,
}

/// `∨σ` for a nonempty set of atoms.
pub fn join_vertex_map(l: &GradedLattice, sigma: &[ElementId]) -> Result<ElementId> {
    check_atoms(l, sigma)?;
    l.join_all(sigma)
}

fn check_atoms(l: &GradedLattice, sigma: &[ElementId]) -> Result<()> {
    if sigma.is_empty() {
        return Err(Error::Parameter("σ must be a nonempty set of atoms".into()));
    }
    if let Some(&x) = sigma.iter().find(|&&x| l.atoms().binary_search(&x).is_err()) {
        return Err(Error::Parameter(format!("element {x} is not an atom")));
    }
    if sigma.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("σ must be sorted without repeats".into()));
    }
    Ok(())
}

/// The map f = e ∘ g, with g the simplicial map on the barycentric
/// subdivision of S(A) sending the vertex σ to ∨σ.
#[derive(Clone, Debug)]
pub struct PlMapInstance<'a> {
    lattice: &'a GradedLattice,
    embedding: GenericEmbedding,
    complex: OrderComplex,
    incidence: BipartiteIncidence,
    flag_budget: u128,
    /// Image cells of ⟨A_c⟩, in coatom order.
    coatom_cells: Vec<Vec<ImageCell>>,
}

impl<'a> PlMapInstance<'a> {
    pub fn new(lattice: &'a GradedLattice, embedding: GenericEmbedding) -> Result<Self> {
        Self::with_budgets(lattice, embedding, DEFAULT_CHAIN_BUDGET, DEFAULT_FLAG_BUDGET)
    }

    pub fn with_budgets(
        lattice: &'a GradedLattice,
        embedding: GenericEmbedding,
        chain_budget: u128,
        flag_budget: u128,
    ) -> Result<Self> {
        if embedding.points().len() != lattice.len() {
            return Err(Error::Parameter("embedding does not match the lattice size".into()));
        }
        if let Some(x) = (0..lattice.len()).find(|&x| x != lattice.bottom() && embedding.points()[x].is_none()) {
            return Err(Error::Parameter(format!("element {x} of L̃ has no image")));
        }
        let complex = order_complex(lattice, chain_budget)?;
        let incidence = BipartiteIncidence::from_lattice(lattice);
        let mut map = PlMapInstance {
            lattice,
            embedding,
            complex,
            incidence,
            flag_budget,
            coatom_cells: Vec::new(),
        };
        map.coatom_cells = lattice
            .coatoms()
            .iter()
            .map(|&c| map.image_cells(&lattice.atoms_below(c)))
            .collect::<Result<_>>()?;
        Ok(map)
    }

    pub fn lattice(&self) -> &'a GradedLattice {
        self.lattice
    }

    pub fn embedding(&self) -> &GenericEmbedding {
        &self.embedding
    }

    pub fn complex(&self) -> &OrderComplex {
        &self.complex
    }

    pub fn incidence(&self) -> &BipartiteIncidence {
        &self.incidence
    }

    pub fn dim(&self) -> usize {
        self.embedding.dim()
    }

    /// v(σ) = e(∨σ).
    pub fn vertex_image(&self, sigma: &[ElementId]) -> Result<&QPoint> {
        Ok(self.embedding.point(join_vertex_map(self.lattice, sigma)?))
    }

    /// The distinct join chains over all maximal flags of σ, sorted by chain.
    pub fn image_cells(&self, sigma: &[ElementId]) -> Result<Vec<ImageCell>> {
        check_atoms(self.lattice, sigma)?;
        let flags: u128 = (1..=sigma.len() as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX);
        if flags > self.flag_budget {
            return Err(Error::capacity(format!("{}! flags of σ", sigma.len()), flags, self.flag_budget));
        }
        let mut cells: BTreeMap<Chain, SdSimplex> = BTreeMap::new();
        let mut sets = Vec::with_capacity(sigma.len());
        let mut joins = Vec::with_capacity(sigma.len());
        self.flags(sigma, &mut Vec::new(), &mut sets, &mut joins, &mut cells)?;
        Ok(cells.into_iter().map(|(chain, flag)| ImageCell { chain, flag }).collect())
    }

    fn flags(
        &self,
        sigma: &[ElementId],
        current: &mut Vec<ElementId>,
        sets: &mut Vec<Vec<ElementId>>,
        joins: &mut Vec<ElementId>,
        out: &mut BTreeMap<Chain, SdSimplex>,
    ) -> Result<()> {
        if current.len() == sigma.len() {
            let mut chain = joins.clone();
            chain.dedup();
            out.entry(chain).or_insert_with(|| SdSimplex { sets: sets.clone() });
            return Ok(());
        }
        for &a in sigma {
            if current.contains(&a) {
                continue;
            }
            let j = match joins.last() {
                Some(&prev) => self.lattice.join(prev, a)?,
                None => a,
            };
            current.push(a);
            let mut set = current.clone();
            set.sort_unstable();
            sets.push(set);
            joins.push(j);
            self.flags(sigma, current, sets, joins, out)?;
            joins.pop();
            sets.pop();
            current.pop();
        }
        Ok(())
    }

    /// Exact closed-hull test of u against the image of a chain.
    pub fn chain_hull_contains(&self, chain: &[ElementId], u: &QPoint) -> Option<Vec<Rational>> {
        let pts: Vec<&QPoint> = chain.iter().map(|&x| self.embedding.point(x)).collect();
        conv_contains(&pts, u)
    }

    /// True when u lies in the relative interior of e(⟨chain⟩); requires the
    /// chain image to be a nondegenerate simplex.
    pub fn chain_relint_contains(&self, chain: &[ElementId], u: &QPoint) -> bool {
        let pts: Vec<&QPoint> = chain.iter().map(|&x| self.embedding.point(x)).collect();
        affinely_independent(&pts)
            && conv_contains(&pts, u).is_some_and(|c| c.iter().all(|v| v.is_positive()))
    }

    fn first_hit(cells: &[ImageCell], map: &Self, u: &QPoint) -> Membership {
        for cell in cells {
            if let Some(coefficients) = map.chain_hull_contains(&cell.chain, u) {
                return Membership {
                    member: true,
                    witness: Some(MembershipWitness {
                        flag: cell.flag.clone(),
                        chain: cell.chain.clone(),
                        coefficients,
                    }),
                };
            }
        }
        Membership { member: false, witness: None }
    }

    /// u ∈ f(⟨σ⟩), decided with closed hulls.
    pub fn point_in_face_image(&self, u: &QPoint, sigma: &[ElementId]) -> Result<Membership> {
        self.check_point(u)?;
        let cells = self.image_cells(sigma)?;
        Ok(Self::first_hit(&cells, self, u))
    }

    /// Membership in f(⟨A_c⟩) for the coatom at position `j` of the coatom list.
    pub fn coatom_membership(&self, j: usize, u: &QPoint) -> Membership {
        Self::first_hit(&self.coatom_cells[j], self, u)
    }

    /// Coatoms c with u ∈ f(⟨A_c⟩).
    pub fn coatom_cover_count(&self, u: &QPoint) -> Result<CoverCount> {
        self.check_point(u)?;
        let coatoms: Vec<ElementId> = self
            .lattice
            .coatoms()
            .iter()
            .enumerate()
            .filter(|&(j, _)| self.coatom_membership(j, u).member)
            .map(|(_, &c)| c)
            .collect();
        Ok(CoverCount { count: coatoms.len(), coatoms })
    }

    /// Image cells of f(⟨A_c⟩) for the coatom at position `j`.
    pub fn coatom_cells(&self, j: usize) -> &[ImageCell] {
        &self.coatom_cells[j]
    }

    /// Candidate points of the arrangement of coatom images: images of all
    /// elements of L̃, then the candidates of the image cells.
    pub fn coatom_candidate_points(&self, budget: usize) -> Result<Vec<QPoint>> {
        let mut table = ImageTable::new(self.dim());
        for cells in &self.coatom_cells {
            let pieces = cells
                .iter()
                .map(|cell| cell.chain.iter().map(|&x| self.embedding.point(x).clone()).collect())
                .collect();
            table.push_face(pieces)?;
        }
        let seeds: Vec<QPoint> = self.embedding.ground().iter().map(|&x| self.embedding.point(x).clone()).collect();
        table.candidates(&seeds, budget)
    }

    fn check_point(&self, u: &QPoint) -> Result<()> {
        if u.dim() != self.dim() {
            return Err(Error::Parameter(format!("point has dimension {}, map has {}", u.dim(), self.dim())));
        }
        Ok(())
    }

    /// Builds the counting certificate behind the cover bound at u.
    ///
    /// T is the set of chains of L̃ − {1̂} whose closed image hull contains u;
    /// T′ is chosen greedily (shortest chains first, then lexicographically).
    pub fn cover_certificate(&self, u: &QPoint) -> Result<CoverCertificate> {
        self.check_point(u)?;
        let top = self.lattice.top();
        let mut covering = Vec::new();
        let mut supports = Vec::new();
        for (j, &c) in self.lattice.coatoms().iter().enumerate() {
            if let Some(w) = self.coatom_membership(j, u).witness {
                covering.push(c);
                supports.push(w.support());
            }
        }
        if covering.is_empty() {
            return Err(Error::Precondition("u lies in no coatom image".into()));
        }

        let proper: Vec<&Chain> = self.complex.faces().iter().filter(|c| !c.contains(&top)).collect();
        let closed: Vec<&Chain> = proper.iter().copied().filter(|c| self.chain_hull_contains(c, u).is_some()).collect();
        let relint: Vec<&Chain> = closed.iter().copied().filter(|c| self.chain_relint_contains(c, u)).collect();
        let selected_chains = greedy_disjoint(&closed);
        let selected_relint = greedy_disjoint(&relint).len();

        let mut diagnostics = Vec::new();
        let d = self.dim();
        let selected: Vec<CertifiedChain> = selected_chains
            .iter()
            .map(|chain| {
                let atom = self.lattice.atoms_below(chain[0])[0];
                CertifiedChain {
                    chain: chain.to_vec(),
                    atom,
                    atom_degree: self.incidence.degree(atom).expect("atom"),
                }
            })
            .collect();
        if selected.len() > d {
            diagnostics.push(format!("|T'| = {} exceeds d = {d}: general position violated", selected.len()));
        }

        let mut assignment = Vec::new();
        for (&c, support) in covering.iter().zip(&supports) {
            if !closed.contains(&support) {
                diagnostics.push(format!("support chain {support:?} of coatom {c} is missing from T"));
            }
            let hit = selected.iter().position(|s| s.chain.iter().any(|x| support.contains(x)));
            match hit {
                Some(i) if self.lattice.leq(selected[i].atom, c) => {
                    assignment.push(CoatomAssignment { coatom: c, support: support.clone(), selected: i })
                }
                Some(i) => diagnostics.push(format!("a(η') = {} is not below coatom {c}", selected[i].atom)),
                None => diagnostics.push(format!("coatom {c} meets no chain of T'")),
            }
        }

        let degree_sum: usize = selected.iter().map(|s| s.atom_degree).sum();
        let bound = d * self.incidence.max_degree();
        if covering.len() > degree_sum {
            diagnostics.push(format!("cover count {} exceeds Σ|C_a| = {degree_sum}", covering.len()));
        }
        if degree_sum > bound {
            diagnostics.push(format!("Σ|C_a| = {degree_sum} exceeds d·max|C_a| = {bound}"));
        }
        Ok(CoverCertificate {
            u: u.clone(),
            covering,
            t_closed: closed.len(),
            t_relint: relint.len(),
            selected,
            selected_relint,
            assignment,
            multiply_attributed: relint.len() > 1,
            degree_sum,
            bound,
            diagnostics,
        })
    }
}

fn greedy_disjoint<'c>(family: &[&'c Chain]) -> Vec<&'c Chain> {
    let mut order: Vec<&Chain> = family.to_vec();
    order.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut chosen: Vec<&Chain> = Vec::new();
    for c in order {
        if chosen.iter().all(|s| s.iter().all(|x| !c.contains(x))) {
            chosen.push(c);
        }
    }
    chosen
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedChain {
    pub chain: Chain,
    /// a(η′): the smallest atom below min η′.
    pub atom: ElementId,
    /// |C_{a(η′)}|.
    pub atom_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoatomAssignment {
    pub coatom: ElementId,
    /// Support chain of the membership witness for f(⟨A_c⟩).
    pub support: Chain,
    /// Index into `selected`.
    pub selected: usize,
}

/// Certificate for `count(u) ≤ Σ|C_{a(η′)}| ≤ d·max|C_a|`.
///
/// Both attributions are reported: `t_closed`/`selected` use closed hulls,
/// `t_relint`/`selected_relint` use relative interiors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverCertificate {
    #[serde(serialize_with = "crate::complex::serialize_point")]
    pub u: QPoint,
    pub covering: Vec<ElementId>,
    pub t_closed: usize,
    pub t_relint: usize,
    pub selected: Vec<CertifiedChain>,
    pub selected_relint: usize,
    pub assignment: Vec<CoatomAssignment>,
    /// u lies in the relative interior of more than one chain image.
    pub multiply_attributed: bool,
    pub degree_sum: usize,
    pub bound: usize,
    pub diagnostics: Vec<String>,
}

impl CoverCertificate {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty() && self.assignment.len() == self.covering.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{sample_generic_embedding, VerifyMode};
    use crate::exact::{barycenter, rat};
    use num_traits::Zero;
    use crate::lattice::build_subspace_lattice;

    fn fano_map(l: &GradedLattice) -> PlMapInstance<'_> {
        let e = sample_generic_embedding(l, 2, 42, VerifyMode::Sampled(2000)).unwrap();
        PlMapInstance::new(l, e).unwrap()
    }

    #[test]
    fn join_vertex_rule() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let a = l.atoms()[0];
        assert_eq!(join_vertex_map(&l, &[a]).unwrap(), a);
        for &c in l.coatoms() {
            assert_eq!(join_vertex_map(&l, &l.atoms_below(c)).unwrap(), c);
        }
        let pair = [l.atoms()[0], l.atoms()[1]];
        assert_eq!(l.rank(join_vertex_map(&l, &pair).unwrap()), 2);
        assert!(join_vertex_map(&l, &[]).is_err());
        assert!(join_vertex_map(&l, &[l.top()]).is_err());
    }

    #[test]
    fn claim_containment_on_fano() {
        // every flag inside A_x maps below x
        let l = build_subspace_lattice(3, 2).unwrap();
        let m = fano_map(&l);
        for x in 0..l.len() {
            if x == l.bottom() {
                continue;
            }
            let ax = l.atoms_below(x);
            for cell in m.image_cells(&ax).unwrap() {
                assert!(cell.chain.iter().all(|&y| l.leq(y, x)));
                assert!(m.complex().contains(&cell.chain));
            }
        }
    }

    #[test]
    fn coatom_images_are_three_segments() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let m = fano_map(&l);
        for &c in l.coatoms() {
            let cells = m.image_cells(&l.atoms_below(c)).unwrap();
            assert_eq!(cells.len(), 3);
            assert!(cells.iter().all(|cell| cell.chain.len() == 2 && cell.chain[1] == c));
        }
        // a non-collinear triple yields triangles ending at the top
        let tri = [l.atoms()[0], l.atoms()[1], l.atoms()[3]];
        let tri = if l.join_all(&tri).unwrap() == l.top() { tri } else { [l.atoms()[0], l.atoms()[1], l.atoms()[2]] };
        let cells = m.image_cells(&tri).unwrap();
        assert_eq!(cells.len(), 6);
        assert!(cells.iter().all(|cell| cell.chain.len() == 3 && cell.chain[2] == l.top()));
    }

    #[test]
    fn membership_examples() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let m = fano_map(&l);
        let c = l.coatoms()[2];
        let ac = l.atoms_below(c);
        let at_c = m.embedding().point(c).clone();
        let hit = m.point_in_face_image(&at_c, &ac).unwrap();
        assert!(hit.member);
        assert_eq!(hit.witness.unwrap().support(), vec![c]);
        let vertex = m.vertex_image(&[ac[0]]).unwrap().clone();
        assert!(m.point_in_face_image(&vertex, &ac).unwrap().member);
        let far = QPoint::from_ints(&[5, -5]);
        assert!(!m.point_in_face_image(&far, &ac).unwrap().member);
        assert!(m.coatom_cover_count(&at_c).unwrap().coatoms.contains(&c));
        assert_eq!(m.coatom_cover_count(&far).unwrap().count, 0);
    }

    #[test]
    fn monotone_images() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let m = fano_map(&l);
        let small = [l.atoms()[0], l.atoms()[1]];
        let big = [l.atoms()[0], l.atoms()[1], l.atoms()[4]];
        for cell in m.image_cells(&small).unwrap() {
            let pts: Vec<&QPoint> = cell.chain.iter().map(|&x| m.embedding().point(x)).collect();
            let u = barycenter(&pts);
            assert!(m.point_in_face_image(&u, &big).unwrap().member);
        }
    }

    #[test]
    fn piecewise_affine_consistency() {
        // the image of a domain barycentric combination is the same combination of vertex images
        let l = build_subspace_lattice(3, 2).unwrap();
        let m = fano_map(&l);
        let sigma = [l.atoms()[0], l.atoms()[1], l.atoms()[3]];
        for cell in m.image_cells(&sigma).unwrap() {
            let weights = [rat(1, 2), rat(1, 3), rat(1, 6)];
            let pts: Vec<&QPoint> = cell.chain.iter().map(|&x| m.embedding().point(x)).collect();
            let mut u = vec![Rational::zero(); 2];
            for (w, p) in weights.iter().zip(&pts) {
                for (a, c) in u.iter_mut().zip(p.coords()) {
                    *a += w * c;
                }
            }
            let u = QPoint(u);
            let coef = m.chain_hull_contains(&cell.chain, &u).unwrap();
            assert_eq!(coef, weights.to_vec());
        }
    }

    #[test]
    fn certificate_at_a_coatom_image() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let m = fano_map(&l);
        for &c in l.coatoms() {
            let u = m.embedding().point(c).clone();
            let cert = m.cover_certificate(&u).unwrap();
            assert!(cert.is_valid(), "{:?}", cert.diagnostics);
            assert!(cert.selected.len() <= 2);
            assert!(cert.covering.len() <= cert.degree_sum && cert.degree_sum <= 6);
            assert_eq!(cert.selected[0].chain, vec![c]);
        }
        assert!(matches!(m.cover_certificate(&QPoint::from_ints(&[9, 9])), Err(Error::Precondition(_))));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let m = fano_map(&l);
        assert!(m.coatom_cover_count(&QPoint::from_ints(&[0])).is_err());
    }
}
