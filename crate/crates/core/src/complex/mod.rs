//! The map f = e ∘ g from the atom simplex S(A) into Q^d.
//!
//! g sends each vertex σ of the barycentric subdivision of S(A) to the join
//! ∨σ in L̃ = L − {0̂}; e is a seeded rational embedding of L̃. Membership in
//! images is decided exactly with closed convex hulls.

mod embedding;
mod order;
mod plmap;

pub use embedding::{
    sample_generic_embedding, Family, GenericEmbedding, Verification, VerificationLog, VerifyMode,
    COORD_DENOMINATOR, EXHAUSTIVE_GROUND_LIMIT, RETRY_CAP,
};
pub use order::{order_complex, Chain, OrderComplex, DEFAULT_CHAIN_BUDGET};
pub use plmap::{
    join_vertex_map, CertifiedChain, CoatomAssignment, CoverCertificate, CoverCount, ImageCell, Membership,
    MembershipWitness, PlMapInstance, SdSimplex, DEFAULT_FLAG_BUDGET,
};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::QPoint;
use crate::lattice::{ElementId, GradedLattice};

pub(crate) fn serialize_point<S: Serializer>(p: &QPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    p.to_strings().serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRef {
    pub q: Option<u32>,
    pub r: Option<usize>,
    pub elements: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundlePoint {
    pub id: ElementId,
    pub coords: Vec<String>,
}

/// JSON form of an embedding: lattice reference, seed, points as `"p/q"`
/// strings and the verification log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapBundle {
    pub lattice: LatticeRef,
    pub seed: Option<u64>,
    pub dim: usize,
    pub points: Vec<BundlePoint>,
    pub verification: VerificationLog,
}

impl MapBundle {
    pub fn new(l: &GradedLattice, e: &GenericEmbedding) -> Self {
        MapBundle {
            lattice: LatticeRef {
                q: l.field_params().map(|p| p.0),
                r: l.field_params().map(|p| p.1),
                elements: l.len(),
            },
            seed: e.seed(),
            dim: e.dim(),
            points: e
                .ground()
                .iter()
                .map(|&x| BundlePoint { id: x, coords: e.point(x).to_strings() })
                .collect(),
            verification: e.log().clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the (unverified) point table.
    pub fn embedding(&self) -> Result<GenericEmbedding> {
        let mut points = vec![None; self.lattice.elements];
        for p in &self.points {
            let slot = points
                .get_mut(p.id)
                .ok_or_else(|| Error::Parse(format!("point id {} out of range", p.id)))?;
            *slot = Some(QPoint::parse(&p.coords)?);
        }
        GenericEmbedding::from_points(self.dim, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_subspace_lattice;

    #[test]
    fn bundle_round_trip() {
        let l = build_subspace_lattice(3, 2).unwrap();
        let e = sample_generic_embedding(&l, 2, 3, VerifyMode::Sampled(50)).unwrap();
        let b = MapBundle::new(&l, &e);
        let text = b.to_json().unwrap();
        assert!(text.contains("\"mode\": \"sampled(50)\""));
        let back = MapBundle::from_json(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.embedding().unwrap().points(), e.points());
        assert_eq!(b.points.len(), 15);
        assert!(b.points.iter().all(|p| p.coords.iter().all(|c| c.contains('/'))));
    }
}
