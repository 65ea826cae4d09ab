use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{QuadError, QuadField, QuadInt};
use crate::arith::{hnf_with_transform, is_prime_u64, sqrt_mod_prime, IntMatrix};

/// Nonzero ideal with Z-basis {a, b + c*w}, 0 <= b < a, c | a, c | b.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

/// Hermite basis of the Z-span of the given elements, with the transform.
fn lattice_hnf(vecs: &[QuadInt]) -> (Ideal, IntMatrix) {
    let rows: Vec<Vec<BigInt>> = vecs
        .iter()
        .map(|v| vec![v.y.clone(), v.x.clone()])
        .collect();
    let (h, u) = hnf_with_transform(&IntMatrix::from_rows(&rows));
    assert!(
        h.rows() >= 2 && !h[(0, 0)].is_zero() && !h[(1, 1)].is_zero(),
        "lattice is not of full rank"
    );
    let ideal = Ideal {
        a: h[(1, 1)].clone(),
        b: h[(0, 1)].clone(),
        c: h[(0, 0)].clone(),
    };
    (ideal, u)
}

impl Ideal {
    pub fn unit() -> Self {
        Ideal {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    /// Ideal from Hermite data; panics if the data do not describe an ideal of K.
    pub fn from_hnf(
        k: &QuadField,
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Self {
        let a = a.into();
        let b = b.into();
        let c = c.into();
        let spanned = Ideal::from_generators(
            k,
            &[
                QuadInt::new(a.clone(), 0),
                QuadInt::new(b.clone(), c.clone()),
            ],
        );
        let direct = Ideal { a, b, c };
        assert_eq!(spanned, direct, "Hermite data do not describe an ideal");
        direct
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn basis(&self) -> [QuadInt; 2] {
        [
            QuadInt::new(self.a.clone(), 0),
            QuadInt::new(self.b.clone(), self.c.clone()),
        ]
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_one()
    }

    /// Ideal generated (as an O_K-module) by the given elements.
    pub fn from_generators(k: &QuadField, gens: &[QuadInt]) -> Self {
        let w = k.omega();
        let mut vecs = Vec::with_capacity(2 * gens.len());
        for g in gens {
            vecs.push(g.clone());
            vecs.push(k.mul(g, &w));
        }
        lattice_hnf(&vecs).0
    }

    pub fn principal(k: &QuadField, alpha: &QuadInt) -> Self {
        assert!(!alpha.is_zero(), "zero ideal");
        Ideal::from_generators(k, std::slice::from_ref(alpha))
    }

    pub fn mul(&self, k: &QuadField, other: &Ideal) -> Ideal {
        let mut vecs = Vec::with_capacity(4);
        for x in self.basis() {
            for y in other.basis() {
                vecs.push(k.mul(&x, &y));
            }
        }
        lattice_hnf(&vecs).0
    }

    pub fn pow(&self, k: &QuadField, mut e: u64) -> Ideal {
        let mut result = Ideal::unit();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(k, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(k, &base);
            }
        }
        result
    }

    pub fn add(&self, other: &Ideal) -> Ideal {
        let [a1, b1] = self.basis();
        let [a2, b2] = other.basis();
        lattice_hnf(&[a1, b1, a2, b2]).0
    }

    pub fn conj(&self, k: &QuadField) -> Ideal {
        let [x, y] = self.basis();
        lattice_hnf(&[k.conj(&x), k.conj(&y)]).0
    }

    pub fn contains(&self, alpha: &QuadInt) -> bool {
        if !alpha.y.is_multiple_of(&self.c) {
            return false;
        }
        let q = &alpha.y / &self.c;
        (&alpha.x - q * &self.b).is_multiple_of(&self.a)
    }

    /// I is contained in J.
    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    pub fn is_coprime(&self, other: &Ideal) -> bool {
        self.add(other).is_unit()
    }

    /// Canonical representative of alpha modulo the ideal: 0 <= y < c, 0 <= x < a.
    pub fn reduce(&self, alpha: &QuadInt) -> QuadInt {
        let q = alpha.y.div_floor(&self.c);
        let y = &alpha.y - &q * &self.c;
        let x = (&alpha.x - &q * &self.b).mod_floor(&self.a);
        QuadInt { x, y }
    }

    /// Largest rational integer dividing the ideal, and the quotient.
    pub fn content_and_primitive(&self) -> (BigInt, Ideal) {
        let g = self.c.clone();
        let prim = Ideal {
            a: &self.a / &g,
            b: &self.b / &g,
            c: BigInt::one(),
        };
        (g, prim)
    }

    /// e in `self` with e = 1 modulo `other`; the two ideals must be coprime.
    pub fn crt_idempotent(&self, other: &Ideal) -> Option<QuadInt> {
        let [a1, b1] = self.basis();
        let [a2, b2] = other.basis();
        let (h, u) = lattice_hnf(&[a1.clone(), b1.clone(), a2, b2]);
        if !h.is_unit() {
            return None;
        }
        // row 1 of the transform expresses (y=0, x=1) = 1
        let e = a1.scale(&u[(1, 0)]).add(&b1.scale(&u[(1, 1)]));
        debug_assert!(self.contains(&e));
        Some(e)
    }

    /// Exponent of the prime ideal p in this ideal.
    pub fn valuation(&self, k: &QuadField, p: &Ideal) -> u32 {
        let mut v = 0;
        let mut pk = p.clone();
        while self.is_subset_of(&pk) {
            v += 1;
            pk = pk.mul(k, p);
        }
        v
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let second = QuadInt::new(self.b.clone(), self.c.clone());
        write!(f, "({}, {})", self.a, second)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal together with the rational prime below it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub ell: u64,
    /// 1-based position among the primes above ell, ordered by b.
    pub index: u32,
    pub f: u32,
    pub e: u32,
    pub ideal: Ideal,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.ell.pow(self.f)
    }

    pub fn norm_big(&self) -> BigInt {
        self.ideal.norm()
    }

    /// Short label: `ell` for an inert prime, `ell.index` otherwise.
    pub fn label(&self) -> String {
        if self.f == 2 {
            self.ell.to_string()
        } else {
            format!("{}.{}", self.ell, self.index)
        }
    }

    /// Recognise a prime ideal from its Hermite form.
    pub fn from_ideal(k: &QuadField, ideal: &Ideal) -> Result<PrimeIdeal, QuadError> {
        let a = ideal
            .a()
            .to_u64()
            .ok_or_else(|| QuadError::NotPrimeIdeal(ideal.to_string()))?;
        if !is_prime_u64(a) {
            return Err(QuadError::NotPrimeIdeal(ideal.to_string()));
        }
        let (_, primes) = split_prime(k, a)?;
        primes
            .into_iter()
            .find(|p| &p.ideal == ideal)
            .ok_or_else(|| QuadError::NotPrimeIdeal(ideal.to_string()))
    }
}

fn omega_roots_mod(k: &QuadField, ell: u64) -> Vec<u64> {
    let [n, t, _] = k.omega_poly();
    // roots of x^2 + t x + n mod ell
    if ell == 2 {
        return (0..2u64)
            .filter(|&x| ((x * x) as i64 + t * x as i64 + n).rem_euclid(2) == 0)
            .collect();
    }
    let disc = k.discriminant();
    let Some(s) = sqrt_mod_prime(disc, ell) else {
        return Vec::new();
    };
    let inv2 = (ell + 1) / 2;
    let mt = (-t).rem_euclid(ell as i64) as u64;
    let r1 = ((mt + s) % ell) as u128 * inv2 as u128 % ell as u128;
    let r2 = ((mt + ell - s) % ell) as u128 * inv2 as u128 % ell as u128;
    let mut v = vec![r1 as u64, r2 as u64];
    v.sort_unstable();
    v.dedup();
    v
}

/// Decomposition of a rational prime in K.
pub fn split_prime(k: &QuadField, ell: u64) -> Result<(SplitType, Vec<PrimeIdeal>), QuadError> {
    if !is_prime_u64(ell) {
        return Err(QuadError::NotPrime(ell));
    }
    let kr = k.kronecker(ell as i64);
    let l = BigInt::from(ell);
    if kr == -1 {
        let ideal = Ideal {
            a: l.clone(),
            b: BigInt::zero(),
            c: l,
        };
        return Ok((
            SplitType::Inert,
            vec![PrimeIdeal {
                ell,
                index: 1,
                f: 2,
                e: 1,
                ideal,
            }],
        ));
    }
    let roots = omega_roots_mod(k, ell);
    // w = r mod P, so P = (ell, w - r) has b = -r mod ell
    let mut bs: Vec<u64> = roots.iter().map(|&r| (ell - r) % ell).collect();
    bs.sort_unstable();
    bs.dedup();
    let (ty, e) = if kr == 0 {
        (SplitType::Ramified, 2)
    } else {
        (SplitType::Split, 1)
    };
    assert_eq!(
        bs.len(),
        if kr == 0 { 1 } else { 2 },
        "root count mismatch at {ell}"
    );
    let primes = bs
        .into_iter()
        .enumerate()
        .map(|(i, b)| PrimeIdeal {
            ell,
            index: i as u32 + 1,
            f: 1,
            e,
            ideal: Ideal {
                a: l.clone(),
                b: BigInt::from(b),
                c: BigInt::one(),
            },
        })
        .collect();
    Ok((ty, primes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fields() -> Vec<i64> {
        vec![-1, -2, -3, -5, -6, -7, -23, -47, -71, -14]
    }

    #[test]
    fn primes_above_151_in_q_sqrt_minus_23() {
        let k = QuadField::new(-23).unwrap();
        let (ty, ps) = split_prime(&k, 151).unwrap();
        assert_eq!(ty, SplitType::Split);
        let bs: Vec<BigInt> = ps.iter().map(|p| p.ideal.b().clone()).collect();
        // (151, (sqrt(-23)+85)/2) = (151, 42 + w) and (151, (sqrt(-23)+217)/2) = (151, 108 + w)
        assert_eq!(bs, vec![BigInt::from(42), BigInt::from(108)]);
        let prod = ps[0].ideal.mul(&k, &ps[1].ideal);
        assert_eq!(prod, Ideal::principal(&k, &QuadInt::new(151, 0)));
    }

    #[test]
    fn decomposition_types() {
        let g = QuadField::new(-1).unwrap();
        assert_eq!(split_prime(&g, 7).unwrap().0, SplitType::Inert);
        assert_eq!(split_prime(&g, 31).unwrap().0, SplitType::Inert);
        assert_eq!(split_prime(&g, 2).unwrap().0, SplitType::Ramified);
        assert_eq!(split_prime(&g, 5).unwrap().0, SplitType::Split);
        let (_, p2) = split_prime(&g, 2).unwrap();
        let sq = p2[0].ideal.pow(&g, 2);
        assert_eq!(sq, Ideal::principal(&g, &QuadInt::new(2, 0)));
    }

    #[test]
    fn prime_products_recover_ell() {
        for d in fields() {
            let k = QuadField::new(d).unwrap();
            for ell in crate::arith::primes_up_to(60) {
                let (ty, ps) = split_prime(&k, ell).unwrap();
                let mut prod = Ideal::unit();
                for p in &ps {
                    prod = prod.mul(&k, &p.ideal.pow(&k, p.e as u64));
                    assert_eq!(p.ideal.norm(), BigInt::from(p.norm()));
                }
                assert_eq!(
                    prod,
                    Ideal::principal(&k, &QuadInt::new(ell, 0)),
                    "d={d} ell={ell} {ty:?}"
                );
            }
        }
    }

    #[test]
    fn crt_idempotents() {
        let k = QuadField::new(-1).unwrap();
        let a = Ideal::principal(&k, &QuadInt::new(7, 0));
        let b = Ideal::principal(&k, &QuadInt::new(31, 0));
        let e = a.crt_idempotent(&b).unwrap();
        assert!(a.contains(&e));
        assert!(b.contains(&e.sub(&QuadInt::one())));
        assert!(a.crt_idempotent(&a).is_none());
    }

    proptest! {
        #[test]
        fn principal_ideal_norm(d in prop::sample::select(fields()), x in -40i64..40, y in -40i64..40) {
            prop_assume!(x != 0 || y != 0);
            let k = QuadField::new(d).unwrap();
            let alpha = QuadInt::new(x, y);
            let i = Ideal::principal(&k, &alpha);
            prop_assert_eq!(i.norm(), k.norm(&alpha));
            prop_assert!(i.contains(&alpha));
            prop_assert!(i.reduce(&alpha).is_zero());
        }

        #[test]
        fn ideal_norm_is_multiplicative(d in prop::sample::select(fields()),
                                        x1 in -20i64..20, y1 in -20i64..20, x2 in -20i64..20, y2 in -20i64..20,
                                        l in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
            prop_assume!((x1 != 0 || y1 != 0) && (x2 != 0 || y2 != 0));
            let k = QuadField::new(d).unwrap();
            let i = Ideal::from_generators(&k, &[QuadInt::new(x1, y1), QuadInt::new(l, 0)]);
            let j = Ideal::from_generators(&k, &[QuadInt::new(x2, y2)]);
            let ij = i.mul(&k, &j);
            prop_assert_eq!(ij.norm(), i.norm() * j.norm());
            prop_assert!(ij.is_subset_of(&i) && ij.is_subset_of(&j));
            prop_assert_eq!(i.conj(&k).norm(), i.norm());
            prop_assert_eq!(i.mul(&k, &i.conj(&k)), Ideal::principal(&k, &QuadInt::new(i.norm(), 0)));
        }

        #[test]
        fn reduction_is_canonical(d in prop::sample::select(fields()), x in -500i64..500, y in -500i64..500,
                                  s in -30i64..30, t in -30i64..30) {
            let k = QuadField::new(d).unwrap();
            let m = Ideal::from_generators(&k, &[QuadInt::new(12, 0), QuadInt::new(3, 1)]);
            let alpha = QuadInt::new(x, y);
            let [b1, b2] = m.basis();
            let shifted = alpha.add(&b1.scale(&BigInt::from(s))).add(&b2.scale(&BigInt::from(t)));
            prop_assert_eq!(m.reduce(&alpha), m.reduce(&shifted));
        }
    }
}
