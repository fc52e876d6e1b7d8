use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use super::field::is_prime;
use crate::error::{Error, Result};
use crate::exact::{Rational, Surd};

/// The admissible window for the field size: `((d+1)n)^(1/d) ≤ q ≤ 2((d+1)n)^(1/d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeWindow {
    pub n: u64,
    pub d: u32,
    pub lower: Surd,
    pub upper: Surd,
    pub q: u64,
}

#[derive(Serialize)]
struct PrimeWindowJson {
    n: u64,
    d: u32,
    lower: String,
    upper: String,
    q: u64,
}

impl Serialize for PrimeWindow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PrimeWindowJson {
            n: self.n,
            d: self.d,
            lower: self.lower.to_string(),
            upper: self.upper.to_string(),
            q: self.q,
        }
        .serialize(s)
    }
}

fn big(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Smallest prime `q` in the window, which also satisfies `q ≥ 2d`.
///
/// Requires `n ≥ (2d)^d`. All comparisons are done on integer powers.
pub fn find_prime_q(n: u64, d: u32) -> Result<PrimeWindow> {
    if d == 0 {
        return Err(Error::Parameter("d must be at least 1".into()));
    }
    let threshold: BigInt = Pow::pow(BigInt::from(2 * d as u64), d);
    if BigInt::from(n) < threshold {
        return Err(Error::Precondition(format!("n = {n} is below (2d)^d = {threshold}")));
    }
    let radicand = big((d as u64 + 1) * n);
    let lower = Surd::new(big(1), radicand.clone(), d);
    let upper = Surd::new(big(2), radicand, d);
    let mut q = 2u64;
    loop {
        let candidate = Surd::rational(big(q));
        if candidate > upper {
            // Bertrand's postulate rules this out.
            return Err(Error::Precondition(format!("no prime in the window for n = {n}, d = {d}")));
        }
        if candidate >= lower && is_prime(q) {
            debug_assert!(q >= 2 * d as u64);
            return Ok(PrimeWindow { n, d, lower, upper, q });
        }
        q += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent scan: smallest prime with q^d ≥ (d+1)n, in plain integers.
    fn scan(n: u64, d: u32) -> u64 {
        (2..).find(|&q| is_prime(q) && q.pow(d) >= (d as u64 + 1) * n).unwrap()
    }

    #[test]
    fn window_examples() {
        assert_eq!(find_prime_q(16, 2).unwrap().q, 7);
        assert_eq!(find_prime_q(256, 2).unwrap().q, 29);
        assert_eq!(find_prime_q(81, 2).unwrap().q, 17);
        assert!(matches!(find_prime_q(2, 2), Err(Error::Precondition(_))));
        assert!(matches!(find_prime_q(15, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn matches_integer_scan_and_stays_in_window() {
        for d in 1..=4u32 {
            let start = (2 * d as u64).pow(d);
            for n in start..start + 200 {
                let w = find_prime_q(n, d).unwrap();
                assert_eq!(w.q, scan(n, d));
                assert!(w.q.pow(d) <= 2u64.pow(d) * (d as u64 + 1) * n);
                assert!(w.q >= 2 * d as u64);
            }
        }
    }
}
