use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::graded::{ElementId, GradedLattice};
use crate::error::Error;

/// Pairs are checked exhaustively up to this many elements, sampled beyond.
const EXHAUSTIVE_PAIRS: usize = 200;
const SAMPLED_PAIRS: usize = 20_000;
const SAMPLED_TRIPLES: usize = 500;
const SAMPLE_SEED: u64 = 0x1a77_1ce5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub rank_profile: Vec<usize>,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, failure: Option<String>, ok_detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed: failure.is_none(),
        detail: failure.unwrap_or(ok_detail),
    }
}

fn pairs(l: &GradedLattice, rng: &mut ChaCha8Rng) -> (Vec<(ElementId, ElementId)>, &'static str) {
    let n = l.len();
    if n <= EXHAUSTIVE_PAIRS {
        ((0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect(), "all pairs")
    } else {
        ((0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect(), "sampled pairs")
    }
}

/// Checks the lattice axioms on any loaded lattice. Failures are report
/// entries, never errors.
pub fn validate_lattice(l: &GradedLattice) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut checks = Vec::new();
    let n = l.len();

    let bottom_fail = match l.minimal_elements() {
        [b] if l.rank(*b) == 0 => None,
        [b] => Some(format!("minimal element {b} has rank {}", l.rank(*b))),
        m => Some(format!("{} minimal elements", m.len())),
    };
    checks.push(check("unique bottom", bottom_fail, format!("bottom = {}", l.bottom())));
    let top_fail = match l.maximal_elements() {
        [_] => None,
        m => Some(format!("{} maximal elements", m.len())),
    };
    checks.push(check("unique top", top_fail, format!("top = {}, rank {}", l.top(), l.rank(l.top()))));

    let (pair_list, how) = pairs(l, &mut rng);
    let mut join_fail = None;
    let mut meet_fail = None;
    for &(x, y) in &pair_list {
        if join_fail.is_none() {
            match l.join(x, y) {
                Ok(j) if l.leq(x, j) && l.leq(y, j) => {}
                Ok(j) => join_fail = Some(format!("join({x},{y}) = {j} is not an upper bound")),
                Err(Error::NotALattice(m)) => join_fail = Some(m),
                Err(e) => join_fail = Some(e.to_string()),
            }
        }
        if meet_fail.is_none() {
            match l.meet(x, y) {
                Ok(m) if l.leq(m, x) && l.leq(m, y) => {}
                Ok(m) => meet_fail = Some(format!("meet({x},{y}) = {m} is not a lower bound")),
                Err(Error::NotALattice(m)) => meet_fail = Some(m),
                Err(e) => meet_fail = Some(e.to_string()),
            }
        }
    }
    checks.push(check("join uniqueness", join_fail, format!("{} {how}", pair_list.len())));
    checks.push(check("meet uniqueness", meet_fail, format!("{} {how}", pair_list.len())));

    // grading: covers raise rank by one, rank strictly monotone along <
    let mut grade_fail = None;
    let mut covers = 0usize;
    'outer: for &(x, y) in &pair_list {
        if !l.lt(x, y) {
            continue;
        }
        if l.rank(y) <= l.rank(x) {
            grade_fail = Some(format!("{x} < {y} but rank does not increase"));
            break;
        }
        let is_cover = (0..n).all(|z| !(l.lt(x, z) && l.lt(z, y)));
        if is_cover {
            covers += 1;
            if l.rank(y) != l.rank(x) + 1 {
                grade_fail = Some(format!("{y} covers {x} with rank jump {}", l.rank(y) - l.rank(x)));
                break 'outer;
            }
        }
    }
    checks.push(check("grading via covers", grade_fail, format!("{covers} covers checked")));

    let mut ident_fail = None;
    if n > 0 {
        for _ in 0..SAMPLED_TRIPLES {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let r = (|| -> Result<Option<String>, Error> {
                if l.join(x, y)? != l.join(y, x)? || l.meet(x, y)? != l.meet(y, x)? {
                    return Ok(Some(format!("commutativity fails on ({x},{y})")));
                }
                if l.join(l.join(x, y)?, z)? != l.join(x, l.join(y, z)?)?
                    || l.meet(l.meet(x, y)?, z)? != l.meet(x, l.meet(y, z)?)?
                {
                    return Ok(Some(format!("associativity fails on ({x},{y},{z})")));
                }
                if l.join(x, l.meet(x, y)?)? != x || l.meet(x, l.join(x, y)?)? != x {
                    return Ok(Some(format!("absorption fails on ({x},{y})")));
                }
                Ok(None)
            })();
            match r {
                Ok(None) => {}
                Ok(Some(m)) => {
                    ident_fail = Some(m);
                    break;
                }
                Err(e) => {
                    ident_fail = Some(e.to_string());
                    break;
                }
            }
        }
    }
    checks.push(check(
        "commutativity, associativity, absorption",
        ident_fail,
        format!("{SAMPLED_TRIPLES} sampled triples"),
    ));

    ValidationReport { rank_profile: l.rank_profile(), checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::graded::boolean_lattice;
    use crate::lattice::build_subspace_lattice;

    #[test]
    fn subspace_lattices_pass() {
        for (r, q) in [(3, 2), (2, 3), (3, 3)] {
            let rep = validate_lattice(&build_subspace_lattice(r, q).unwrap());
            assert!(rep.all_passed(), "{rep:?}");
        }
    }

    #[test]
    fn boolean_rank_three_passes() {
        let rep = validate_lattice(&boolean_lattice(3));
        assert!(rep.all_passed(), "{rep:?}");
        assert_eq!(rep.rank_profile, vec![1, 3, 3, 1]);
    }

    #[test]
    fn missing_join_is_reported() {
        let ranks = [0, 1, 1, 2, 2, 3];
        let pairs = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
        let rep = validate_lattice(&GradedLattice::from_poset(&ranks, &pairs).unwrap());
        assert!(!rep.check("join uniqueness").unwrap().passed);
        assert!(rep.check("unique bottom").unwrap().passed);
        assert!(!rep.all_passed());
    }

    #[test]
    fn skipped_rank_is_reported() {
        // 0 < a < 1 with rank(1) = 3: cover a ⋖ 1 jumps by two
        let rep = validate_lattice(&GradedLattice::from_poset(&[0, 1, 3], &[(0, 1), (1, 2)]).unwrap());
        assert!(!rep.check("grading via covers").unwrap().passed);
    }

    #[test]
    fn two_minima_fail_bottom_check() {
        let rep = validate_lattice(&GradedLattice::from_poset(&[0, 0, 1], &[(0, 2), (1, 2)]).unwrap());
        assert!(!rep.check("unique bottom").unwrap().passed);
    }
}
