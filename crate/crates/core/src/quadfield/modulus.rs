use num_bigint::BigInt;
use num_traits::One;

use super::{split_prime, Ideal, PrimeIdeal, QuadError, QuadField};

/// Integral modulus as a product of prime ideal powers, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    factors: Vec<(PrimeIdeal, u32)>,
}

impl Modulus {
    pub fn unit() -> Self {
        Modulus {
            factors: Vec::new(),
        }
    }

    pub fn new(factors: Vec<(PrimeIdeal, u32)>) -> Self {
        let mut merged: Vec<(PrimeIdeal, u32)> = Vec::new();
        for (p, e) in factors {
            if e == 0 {
                continue;
            }
            match merged.iter_mut().find(|(q, _)| q.ideal == p.ideal) {
                Some((_, f)) => *f += e,
                None => merged.push((p, e)),
            }
        }
        merged.sort_by(|(p, _), (q, _)| (p.norm(), p.ideal.b()).cmp(&(q.norm(), q.ideal.b())));
        Modulus { factors: merged }
    }

    pub fn from_prime(p: &PrimeIdeal, e: u32) -> Self {
        Modulus::new(vec![(p.clone(), e)])
    }

    pub fn factors(&self) -> &[(PrimeIdeal, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> Vec<PrimeIdeal> {
        self.factors.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn ideal(&self, k: &QuadField) -> Ideal {
        self.factors.iter().fold(Ideal::unit(), |acc, (p, e)| {
            acc.mul(k, &p.ideal.pow(k, *e as u64))
        })
    }

    pub fn norm(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * p.norm_big().pow(*e))
    }

    /// The ideal is not divisible by any prime of the modulus.
    pub fn is_coprime_to(&self, ideal: &Ideal) -> bool {
        self.factors
            .iter()
            .all(|(p, _)| !ideal.is_subset_of(&p.ideal))
    }

    pub fn divides_prime(&self, p: &PrimeIdeal) -> bool {
        self.factors.iter().any(|(q, _)| q.ideal == p.ideal)
    }

    /// Parse `term(*term)*` where a term is `ell[.index][^exp]`. A bare
    /// `ell` stands for the ideal ell*O_K (all primes above ell); `.index`
    /// picks one prime above ell, counting from 1 in order of the b-coordinate.
    pub fn parse(k: &QuadField, spec: &str) -> Result<Self, QuadError> {
        let bad = |msg: &str| QuadError::BadModulus(spec.to_string(), msg.to_string());
        let spec_t = spec.trim();
        if spec_t == "1" {
            return Ok(Modulus::unit());
        }
        let mut factors = Vec::new();
        for term in spec_t.split([',', '*']) {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad("empty factor"));
            }
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b, e.trim().parse::<u32>().map_err(|_| bad("bad exponent"))?),
                None => (term, 1),
            };
            if exp == 0 {
                return Err(bad("exponent must be positive"));
            }
            let (ell_s, idx) = match base.split_once('.') {
                Some((l, i)) => (
                    l,
                    Some(
                        i.trim()
                            .parse::<usize>()
                            .map_err(|_| bad("bad prime index"))?,
                    ),
                ),
                None => (base, None),
            };
            let ell: u64 = ell_s
                .trim()
                .parse()
                .map_err(|_| bad("bad rational prime"))?;
            let (_, primes) = split_prime(k, ell).map_err(|e| bad(&e.to_string()))?;
            match idx {
                Some(i) => {
                    let p = primes.get(i.wrapping_sub(1)).ok_or_else(|| {
                        bad(&format!("{ell} has {} prime(s) above it", primes.len()))
                    })?;
                    factors.push((p.clone(), exp));
                }
                None => {
                    for p in primes {
                        let e = p.e * exp;
                        factors.push((p, e));
                    }
                }
            }
        }
        Ok(Modulus::new(factors))
    }

    /// Canonical textual form, parseable by `parse`.
    pub fn label(&self) -> String {
        if self.is_unit() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(p, e)| {
                let base = p.label();
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}
