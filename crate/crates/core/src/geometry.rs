//! Images of faces as unions of closed convex pieces, exact membership and
//! candidate points for depth and box searches.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::exact::{barycenter, conv_contains, segment_intersection, QPoint};

/// Default cap on candidate points per table.
pub const DEFAULT_CANDIDATE_BUDGET: usize = 200_000;

/// Faces mapped to unions of convex pieces; pieces are interned so shared
/// pieces are stored once.
#[derive(Clone, Debug, Default)]
pub struct ImageTable {
    dim: usize,
    pieces: Vec<Vec<QPoint>>,
    faces: Vec<Vec<usize>>,
    intern: HashMap<Vec<QPoint>, usize>,
}

impl ImageTable {
    pub fn new(dim: usize) -> Self {
        ImageTable { dim, ..Default::default() }
    }

    /// Appends a face given by its pieces and returns the face index.
    pub fn push_face(&mut self, pieces: Vec<Vec<QPoint>>) -> Result<usize> {
        let mut ids = Vec::with_capacity(pieces.len());
        for piece in pieces {
            if piece.is_empty() || piece.iter().any(|p| p.dim() != self.dim) {
                return Err(Error::Parameter(format!("pieces must be nonempty lists of {}-dimensional points", self.dim)));
            }
            let next = self.pieces.len();
            let id = *self.intern.entry(piece.clone()).or_insert(next);
            if id == next {
                self.pieces.push(piece);
            }
            ids.push(id);
        }
        self.faces.push(ids);
        Ok(self.faces.len() - 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn pieces(&self) -> &[Vec<QPoint>] {
        &self.pieces
    }

    pub fn face_contains(&self, face: usize, u: &QPoint) -> bool {
        self.faces[face].iter().any(|&p| piece_contains(&self.pieces[p], u))
    }

    /// Indices of faces whose image contains u.
    pub fn covering_faces(&self, u: &QPoint) -> Vec<usize> {
        let hit: Vec<bool> = self.pieces.iter().map(|p| piece_contains(p, u)).collect();
        (0..self.faces.len()).filter(|&f| self.faces[f].iter().any(|&p| hit[p])).collect()
    }

    /// Seeds, then piece vertices, then (in the plane) crossings of piece
    /// edges, then piece barycenters; exact duplicates dropped, first
    /// occurrence kept.
    ///
    /// In dimension ≤ 2 every cell of the arrangement of pieces has a vertex
    /// in this list, so maxima of monotone functions of the covering set are
    /// attained on it.
    pub fn candidates(&self, seeds: &[QPoint], budget: usize) -> Result<Vec<QPoint>> {
        let mut seen: HashSet<QPoint> = HashSet::new();
        let mut out = Vec::new();
        let mut push = |p: QPoint, out: &mut Vec<QPoint>| -> Result<()> {
            if seen.insert(p.clone()) {
                out.push(p);
                if out.len() > budget {
                    return Err(Error::capacity("candidate points", format!("more than {budget}"), budget));
                }
            }
            Ok(())
        };
        for s in seeds {
            push(s.clone(), &mut out)?;
        }
        for piece in &self.pieces {
            for v in piece {
                push(v.clone(), &mut out)?;
            }
        }
        if self.dim == 2 {
            let mut edges: Vec<(&QPoint, &QPoint)> = Vec::new();
            let mut edge_seen = HashSet::new();
            for piece in &self.pieces {
                for i in 0..piece.len() {
                    for j in i + 1..piece.len() {
                        let (a, b) = if piece[i] <= piece[j] { (&piece[i], &piece[j]) } else { (&piece[j], &piece[i]) };
                        if a != b && edge_seen.insert((a, b)) {
                            edges.push((a, b));
                        }
                    }
                }
            }
            let pairs = edges.len() * edges.len().saturating_sub(1) / 2;
            if pairs > budget.saturating_mul(64) {
                return Err(Error::capacity("edge pairs for crossings", pairs, budget.saturating_mul(64)));
            }
            for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    if let Some(x) = segment_intersection(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                        push(x, &mut out)?;
                    }
                }
            }
        }
        for piece in &self.pieces {
            if piece.len() >= 2 {
                let refs: Vec<&QPoint> = piece.iter().collect();
                push(barycenter(&refs), &mut out)?;
            }
        }
        Ok(out)
    }
}

/// Closed convex hull membership.
pub fn piece_contains(piece: &[QPoint], u: &QPoint) -> bool {
    let refs: Vec<&QPoint> = piece.iter().collect();
    conv_contains(&refs, u).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64, y: i64) -> QPoint {
        QPoint::from_ints(&[x, y])
    }

    #[test]
    fn crossings_of_two_triangles() {
        let mut t = ImageTable::new(2);
        t.push_face(vec![vec![q(0, 0), q(4, 0), q(0, 4)]]).unwrap();
        t.push_face(vec![vec![q(1, 1), q(5, 1), q(1, 5)]]).unwrap();
        let c = t.candidates(&[], DEFAULT_CANDIDATE_BUDGET).unwrap();
        // 6 vertices, crossings (3,1) (1,3) and the shared hypotenuse is parallel
        assert!(c.contains(&q(3, 1)) && c.contains(&q(1, 3)));
        assert_eq!(&c[..6], &[q(0, 0), q(4, 0), q(0, 4), q(1, 1), q(5, 1), q(1, 5)]);
        assert_eq!(t.covering_faces(&q(1, 1)), vec![0, 1]);
        assert_eq!(t.covering_faces(&q(5, 1)), vec![1]);
    }

    #[test]
    fn shared_pieces_are_interned() {
        let mut t = ImageTable::new(1);
        let seg = vec![QPoint::from_ints(&[0]), QPoint::from_ints(&[2])];
        t.push_face(vec![seg.clone()]).unwrap();
        t.push_face(vec![seg, vec![QPoint::from_ints(&[5])]]).unwrap();
        assert_eq!(t.pieces().len(), 2);
        assert!(t.face_contains(1, &QPoint::from_ints(&[5])));
        assert!(!t.face_contains(0, &QPoint::from_ints(&[5])));
        let c = t.candidates(&[], 100).unwrap();
        assert_eq!(c, vec![QPoint::from_ints(&[0]), QPoint::from_ints(&[2]), QPoint::from_ints(&[5]), QPoint::from_ints(&[1])]);
    }

    #[test]
    fn budget() {
        let mut t = ImageTable::new(2);
        t.push_face(vec![vec![q(0, 0), q(4, 0), q(0, 4)]]).unwrap();
        assert!(t.candidates(&[], 2).is_err());
        assert!(t.push_face(vec![vec![QPoint::from_ints(&[1])]]).is_err());
    }
}
