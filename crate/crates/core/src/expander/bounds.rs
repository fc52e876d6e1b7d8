use num_bigint::BigInt;
use num_traits::{One, Pow};

use super::BipartiteIncidence;
use crate::comparison::{Comparison, Relation, R};
use crate::error::Result;
use crate::exact::{rat_to_string, Rational, Surd};
use crate::lattice::{projective_count, GradedLattice};

/// The Corrádi bound for an m-set of atoms in L(d+1, q) together with its
/// successive weakenings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorradiBound {
    pub m: u64,
    pub q: u64,
    pub d: u32,
    /// `m N_{d-1}^2 / (N_{d-1} + (m-1) N_{d-2})`.
    pub first: Rational,
    /// `N_d - q^(d-1) N_d / (m N_{d-2})`; undefined when `N_{d-2} = 0` (d = 1).
    pub second: Option<Rational>,
    /// `N_d - q N_d / m`.
    pub third: Rational,
    /// `N_d - N_d^(1+1/d) / m`, kept as `N_d` minus a surd.
    pub fourth_subtrahend: Surd,
    /// Identities and inequalities of the chain, each decided exactly.
    pub steps: Vec<Comparison>,
}

impl CorradiBound {
    pub fn chain_holds(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }
}

fn big(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Lower bound on |Γ(Z)| for |Z| = m in L(d+1, q), from the pairwise
/// intersection structure of the sets C_a.
pub fn corradi_lower_bound(m: u64, q: u64, d: u32) -> CorradiBound {
    assert!(m >= 1 && d >= 1 && q >= 2);
    let nd = big(projective_count(q, d as i64));
    let nd1 = big(projective_count(q, d as i64 - 1));
    let nd2 = big(projective_count(q, d as i64 - 2));
    let mm = big(m);
    let qq = big(q);
    let q_pow: Rational = Pow::pow(&qq, d - 1);

    let first = &mm * &nd1 * &nd1 / (&nd1 + (&mm - Rational::one()) * &nd2);
    let via_q = &mm * &nd1 * &nd1 / (&q_pow + &mm * &nd2);
    let complement_form = &nd - &q_pow * (&nd - &mm) / (&q_pow + &mm * &nd2);
    let second = (nd2 != Rational::from_integer(0.into())).then(|| &nd - &q_pow * &nd / (&mm * &nd2));
    let third = &nd - &qq * &nd / &mm;
    let nd_power: Rational = Pow::pow(&nd, d + 1);
    let fourth_subtrahend = Surd::new(Rational::one() / &mm, nd_power, d);

    let mut steps = vec![
        Comparison::eq("N_{d-1} + (m-1) N_{d-2} = q^(d-1) + m N_{d-2}", &R(&first), &R(&via_q)),
        Comparison::eq("first form = N_d - q^(d-1)(N_d - m)/(q^(d-1) + m N_{d-2})", &R(&first), &R(&complement_form)),
    ];
    if let Some(second) = &second {
        steps.push(Comparison::le("N_d - q^(d-1)N_d/(m N_{d-2}) <= first", &R(second), &R(&complement_form)));
        steps.push(Comparison::le("N_d - q N_d/m <= N_d - q^(d-1)N_d/(m N_{d-2})", &R(&third), &R(second)));
    } else {
        steps.push(Comparison::le("N_d - q N_d/m <= first", &R(&third), &R(&first)));
    }
    // N_d - N_d^(1+1/d)/m <= N_d - q N_d/m  <=>  q N_d / m <= N_d^(1+1/d) / m
    let lhs = Surd::rational(&qq * &nd / &mm);
    steps.push(Comparison::decided(
        "N_d - N_d^(1+1/d)/m <= N_d - q N_d/m",
        format!("{} - {}", rat_to_string(&nd), fourth_subtrahend),
        Relation::Le,
        rat_to_string(&third),
        lhs <= fourth_subtrahend,
    ));

    CorradiBound { m, q, d, first, second, third, fourth_subtrahend, steps }
}

/// `(d/(d+1)) · (max_a |C_a| + |C|)` for a graded lattice of rank `d + 1 ≥ 2`.
pub fn theorem21_rhs(l: &GradedLattice) -> Result<Rational> {
    BipartiteIncidence::from_lattice(l).theorem21_rhs()
}
