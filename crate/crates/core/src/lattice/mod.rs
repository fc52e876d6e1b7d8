//! Finite graded lattices, chiefly the lattice L(r, q) of subspaces of F_q^r.

mod field;
mod graded;
mod json;
mod prime;
mod validate;

pub use field::{is_prime, Fq, FqMatrix, Subspace};
pub use graded::{build_subspace_lattice, Element, ElementId, GradedLattice, SUBSPACE_CAPACITY};
pub use json::{lattice_from_json, lattice_to_json, OrderEncoding};
pub use prime::{find_prime_q, PrimeWindow};
pub use validate::{validate_lattice, Check, ValidationReport};

#[cfg(test)]
pub(crate) use graded::boolean_lattice;

/// `N_k = (q^(k+1) - 1)/(q - 1)`, the number of points of projective k-space
/// over F_q. `N_{-1} = 0`.
pub fn projective_count(q: u64, k: i64) -> u64 {
    if k < 0 {
        return 0;
    }
    (0..=k as u32).map(|i| q.pow(i)).sum()
}
