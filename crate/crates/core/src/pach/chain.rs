use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::comparison::{Comparison, Relation, R};
use crate::error::Result;
use crate::exact::{Rational, Surd};
use crate::expander::{corradi_lower_bound, theorem21_rhs, BipartiteIncidence};
use crate::lattice::{build_subspace_lattice, find_prime_q, projective_count, PrimeWindow};

/// Lattices up to this many vectors are built to cross-check the counts.
const CROSS_CHECK_LIMIT: u64 = 30_000;

/// Exact verification of the arithmetic behind the upper bound
/// `m ≤ 4(d+1)((d+1)² n)^(1/d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub n: u64,
    pub d: u32,
    pub q: u64,
    pub window: PrimeWindow,
    /// `[N_d, N_{d-1}, N_{d-2}]`.
    pub counts: [u64; 3],
    /// Corrádi weakening chains checked, one per m in `1..=N_d`.
    pub corradi_checked: u64,
    /// Largest integer m compatible with the rearranged expansion inequality.
    pub implied_m_max: u64,
    pub final_bound: String,
    /// `c_2(d) = 4(d+1)(d+1)^(2/d)`, the coefficient of `n^(1/d)`.
    pub c2: String,
    pub comparisons: Vec<Comparison>,
}

impl ChainReport {
    pub fn all_hold(&self) -> bool {
        self.comparisons.iter().all(|c| c.holds)
    }
}

fn big(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn surd_le(label: &str, a: &Surd, b: &Surd) -> Comparison {
    Comparison::decided(label, a.to_string(), Relation::Le, b.to_string(), a <= b)
}

/// Selects q and checks every step from the prime window to the final bound.
pub fn theorem12_chain(n: u64, d: u32) -> Result<ChainReport> {
    let window = find_prime_q(n, d)?;
    let q = window.q;
    let (nd, nd1, nd2) = (
        projective_count(q, d as i64),
        projective_count(q, d as i64 - 1),
        projective_count(q, d as i64 - 2),
    );
    let dn = d as u64;
    let qd: u64 = q.pow(d);
    let mut cmp = Vec::new();

    // prime window
    let two_d = Surd::rational(big(2 * dn));
    cmp.push(surd_le("2d <= ((d+1)n)^(1/d)", &two_d, &window.lower));
    cmp.push(surd_le("((d+1)n)^(1/d) <= q", &window.lower, &Surd::rational(big(q))));
    cmp.push(surd_le("q <= 2((d+1)n)^(1/d)", &Surd::rational(big(q)), &window.upper));
    cmp.push(Comparison::le("2d <= q", &(2 * dn), &q));
    cmp.push(Comparison::le("q^d <= N_d", &qd, &nd));
    cmp.push(Comparison::le("(d+1)n <= q^d", &((dn + 1) * n), &qd));

    // counts and the expansion right-hand side
    let rhs_formula = Rational::new(BigInt::from(dn * (nd1 + nd)), BigInt::from(dn + 1));
    if q.pow(d + 1) <= CROSS_CHECK_LIMIT {
        let l = build_subspace_lattice(d as usize + 1, q as u32)?;
        let g = BipartiteIncidence::from_lattice(&l);
        cmp.push(Comparison::eq("|A| = N_d", &(l.atoms().len() as u64), &nd));
        cmp.push(Comparison::eq("|C| = N_d", &(l.coatoms().len() as u64), &nd));
        cmp.push(Comparison::eq("max|C_a| = N_{d-1}", &(g.max_degree() as u64), &nd1));
        let rhs = theorem21_rhs(&l)?;
        cmp.push(Comparison::eq(
            "(d/(d+1))(max|C_a| + |C|) = (d/(d+1))(N_{d-1} + N_d)",
            &R(&rhs),
            &R(&rhs_formula),
        ));
    }

    // expansion chain for every admissible subset size
    let mut chain_ok = true;
    for m in 1..=nd {
        chain_ok &= corradi_lower_bound(m, q, d).chain_holds();
    }
    cmp.push(Comparison::decided(
        "Corrádi weakening chain for all m in 1..=N_d",
        format!("{nd} chains"),
        Relation::Eq,
        "all hold".into(),
        chain_ok,
    ));

    // (d+1)(N_d - N_d^(1+1/d)/m) <= d(N_{d-1} + N_d) rearranges to
    // m <= (d+1) N_d^(1+1/d) / (N_d - d N_{d-1})
    let gap = big(nd) - big(dn * nd1);
    cmp.push(Comparison::le("1 <= N_d - d N_{d-1}", &R(&Rational::one()), &R(&gap)));
    let step1 = Surd::new(big(dn + 1) * big(nd) / &gap, big(nd), d);

    // N_d / (N_d - d N_{d-1}) <= q/(q-d) <= 2
    let ratio = big(nd) / &gap;
    let q_d1: Rational = Pow::pow(big(q), d + 1);
    let q_d: Rational = Pow::pow(big(q), d);
    let expanded = (&q_d1 - Rational::one()) / (&q_d1 - Rational::one() - big(dn) * (&q_d - Rational::one()));
    let q_ratio = big(q) / (big(q) - big(dn));
    let q_form = &q_d1 / (&q_d1 - big(dn) * &q_d);
    cmp.push(Comparison::eq(
        "N_d/(N_d - dN_{d-1}) = (q^(d+1)-1)/(q^(d+1)-1-d(q^d-1))",
        &R(&ratio),
        &R(&expanded),
    ));
    cmp.push(Comparison::le("(q^(d+1)-1)/(q^(d+1)-1-d(q^d-1)) <= q^(d+1)/(q^(d+1)-dq^d)", &R(&expanded), &R(&q_form)));
    cmp.push(Comparison::eq("q^(d+1)/(q^(d+1)-dq^d) = q/(q-d)", &R(&q_form), &R(&q_ratio)));
    cmp.push(Comparison::le("q/(q-d) <= 2", &R(&q_ratio), &R(&big(2))));

    // final display
    let coef = big(2 * (dn + 1));
    let step2 = Surd::new(coef.clone(), big(nd), d);
    let step3 = Surd::new(coef.clone(), big((dn + 1) * qd), d);
    let two_pow: u64 = 2u64.pow(d);
    let step4 = Surd::new(coef, big((dn + 1) * two_pow * (dn + 1) * n), d);
    let final_bound = Surd::new(big(4 * (dn + 1)), big((dn + 1) * (dn + 1) * n), d);
    cmp.push(surd_le("(d+1)N_d^(1+1/d)/(N_d - dN_{d-1}) <= 2(d+1)N_d^(1/d)", &step1, &step2));
    cmp.push(surd_le("2(d+1)N_d^(1/d) <= 2(d+1)((d+1)q^d)^(1/d)", &step2, &step3));
    cmp.push(surd_le("2(d+1)((d+1)q^d)^(1/d) <= 2(d+1)((d+1)2^d(d+1)n)^(1/d)", &step3, &step4));
    cmp.push(Comparison::decided(
        "2(d+1)((d+1)2^d(d+1)n)^(1/d) = 4(d+1)((d+1)^2 n)^(1/d)",
        step4.to_string(),
        Relation::Eq,
        final_bound.to_string(),
        step4.cmp(&final_bound).is_eq(),
    ));

    // largest integer m with m <= step1
    let mut implied_m_max = 0u64;
    while Surd::rational(big(implied_m_max + 1)) <= step1 {
        implied_m_max += 1;
    }
    let lhs_at = |m: u64| {
        // N_d - N_d^(1+1/d)/m  <=  (d/(d+1))(N_{d-1}+N_d)
        // ⇔ N_d - (d/(d+1))(N_{d-1}+N_d) <= N_d^(1+1/d)/m
        let left = big(nd) - &rhs_formula;
        let right = Surd::new(big(nd) / big(m), big(nd), d);
        left <= Rational::zero() || Surd::rational(left) <= right
    };
    cmp.push(Comparison::decided(
        "implied m_max satisfies the expansion inequality and m_max + 1 does not",
        implied_m_max.to_string(),
        Relation::Le,
        step1.to_string(),
        implied_m_max >= 1 && lhs_at(implied_m_max) && !lhs_at(implied_m_max + 1),
    ));

    Ok(ChainReport {
        n,
        d,
        q,
        window,
        counts: [nd, nd1, nd2],
        corradi_checked: nd,
        implied_m_max,
        final_bound: final_bound.to_string(),
        c2: Surd::new(big(4 * (dn + 1)), big((dn + 1) * (dn + 1)), d).to_string(),
        comparisons: cmp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn sixteen_in_the_plane() {
        let r = theorem12_chain(16, 2).unwrap();
        assert_eq!(r.q, 7);
        assert_eq!(r.counts, [57, 8, 1]);
        assert_eq!(r.final_bound, "144/1");
        assert!(r.all_hold(), "{:#?}", r.comparisons.iter().filter(|c| !c.holds).collect::<Vec<_>>());
        let eq24 = r.comparisons.iter().find(|c| c.label == "q/(q-d) <= 2").unwrap();
        assert_eq!((eq24.lhs.as_str(), eq24.rhs.as_str()), ("7/5", "2/1"));
        assert_eq!(r.c2, "36/1");
    }

    #[test]
    fn larger_instances() {
        for (n, q, bound) in [(81, 17, "324/1"), (256, 29, "576/1")] {
            let r = theorem12_chain(n, 2).unwrap();
            assert_eq!(r.q, q);
            assert_eq!(r.final_bound, bound);
            assert!(r.all_hold());
        }
    }

    #[test]
    fn small_n_is_rejected() {
        assert!(matches!(theorem12_chain(15, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn dimension_one() {
        let r = theorem12_chain(2, 1).unwrap();
        assert!(r.all_hold(), "{:#?}", r.comparisons);
    }
}
