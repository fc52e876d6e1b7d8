//! JSON lattice format.
//!
//! ```text
//! {"q":2,"r":3,"elements":[{"id":0,"rank":0,"rref":[]},...],"derived":true}
//! {"q":2,"r":3,"elements":[...],"leq":[[0,0],[0,1],...]}
//! ```
//!
//! With `"derived": true` the order is recomputed from the rrefs; otherwise
//! the explicit `leq` pair list (reflexive pairs included) is authoritative.

use serde::{Deserialize, Serialize};

use super::field::{Fq, Subspace};
use super::graded::{Element, GradedLattice};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct ElementJson {
    id: usize,
    rank: usize,
    rref: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeJson {
    q: u32,
    r: usize,
    elements: Vec<ElementJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    derived: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    leq: Option<Vec<[usize; 2]>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderEncoding {
    Derived,
    Explicit,
}

/// Serializes a subspace lattice. Output is deterministic.
pub fn lattice_to_json(l: &GradedLattice, encoding: OrderEncoding) -> Result<String> {
    let (q, r) = l
        .field_params()
        .ok_or_else(|| Error::Parameter("only subspace lattices have a JSON encoding".into()))?;
    let elements = l
        .elements()
        .iter()
        .map(|e| ElementJson {
            id: e.id,
            rank: e.rank,
            rref: e.subspace.as_ref().map(|s| s.rref_rows().to_vec()).unwrap_or_default(),
        })
        .collect();
    let (derived, leq) = match encoding {
        OrderEncoding::Derived => (Some(true), None),
        OrderEncoding::Explicit => {
            let n = l.len();
            let pairs = (0..n)
                .flat_map(|x| (0..n).filter(move |&y| l.leq(x, y)).map(move |y| [x, y]))
                .collect();
            (None, Some(pairs))
        }
    };
    Ok(serde_json::to_string(&LatticeJson { q, r, elements, derived, leq })?)
}

pub fn lattice_from_json(text: &str) -> Result<GradedLattice> {
    let doc: LatticeJson = serde_json::from_str(text)?;
    let field = Fq::new(doc.q)?;
    let mut elements = Vec::with_capacity(doc.elements.len());
    for (i, e) in doc.elements.into_iter().enumerate() {
        if e.id != i {
            return Err(Error::Parse(format!("element ids must be 0..n in order, found {} at {i}", e.id)));
        }
        let s = Subspace::span(field, doc.r, &e.rref)?;
        if s.rref_rows() != e.rref.as_slice() {
            return Err(Error::Parse(format!("element {i}: rref is not canonical")));
        }
        if s.dim() != e.rank {
            return Err(Error::Parse(format!("element {i}: rank {} but dimension {}", e.rank, s.dim())));
        }
        elements.push(Element { id: i, rank: e.rank, subspace: Some(s) });
    }
    match (doc.derived, doc.leq) {
        (Some(true), None) => Ok(GradedLattice::from_subspaces(field, doc.r, elements)),
        (None | Some(false), Some(pairs)) => {
            let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|[x, y]| (x, y)).collect();
            GradedLattice::with_explicit_order(Some((field, doc.r)), elements, &pairs)
        }
        _ => Err(Error::Parse("exactly one of \"derived\": true or \"leq\" is required".into())),
    }
}
