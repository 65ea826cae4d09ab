use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{
    form::principal_generator, split_prime, Form, Ideal, PrimeIdeal, QuadError, QuadField, QuadInt,
};
use crate::abelian::{Closure, FinAbGroup};
use crate::arith::primes_up_to;

/// Class group of an imaginary quadratic field, computed from reduced forms.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    field: QuadField,
    h: u64,
    group: FinAbGroup,
    table: HashMap<Form, Vec<i64>>,
    gens: Vec<PrimeIdeal>,
}

/// All reduced primitive forms of discriminant `disc` (< 0).
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let d = disc as i128;
    let mut out = Vec::new();
    let mut a: i128 = 1;
    while 3 * a * a <= -d {
        let mut b = -a + 1;
        while b <= a {
            if (b - d).rem_euclid(2) == 0 && (b * b - d) % (4 * a) == 0 {
                let c = (b * b - d) / (4 * a);
                let ok_order = c >= a && !((b.abs() == a || a == c) && b < 0);
                if ok_order && a.gcd(&b).gcd(&c) == 1 {
                    out.push(Form::new(a, b, c));
                }
            }
            b += 1;
        }
        a += 1;
    }
    out
}

impl ClassGroup {
    pub fn compute(k: &QuadField) -> ClassGroup {
        let disc = k.discriminant();
        let h = reduced_forms(disc).len() as u64;
        let mut closure = Closure::new(Form::identity(&BigInt::from(disc)), usize::MAX);
        let mut gens = Vec::new();
        let mut ell_bound = 64u64;
        'outer: while (closure.size() as u64) < h {
            for ell in primes_up_to(ell_bound) {
                if closure.size() as u64 == h {
                    break 'outer;
                }
                if gens.iter().any(|p: &PrimeIdeal| p.ell == ell) {
                    continue;
                }
                let (_, ps) = split_prime(k, ell).expect("prime");
                let p = &ps[0];
                if p.f != 1 {
                    continue;
                }
                let f = Form::of_ideal(k, &p.ideal).reduce();
                if closure.add(f, |x, y| x.compose(y)).expect("unbounded") {
                    gens.push(p.clone());
                }
            }
            ell_bound *= 2;
        }
        let labels = gens.iter().map(|p| format!("P{}", p.ell)).collect();
        let group = closure.group(labels);
        let table = closure
            .elements()
            .map(|f| (f.clone(), closure.log(f).unwrap()))
            .collect();
        assert_eq!(group.order(), Some(BigInt::from(h)));
        ClassGroup {
            field: k.clone(),
            h,
            group,
            table,
            gens,
        }
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn class_number(&self) -> u64 {
        self.h
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// Order of the i-th Smith generator.
    pub fn generator_order(&self, i: usize) -> u64 {
        self.group.invariants()[i].to_u64().unwrap()
    }

    /// Smith coordinates of the class of an ideal.
    pub fn class_of(&self, ideal: &Ideal) -> Vec<BigInt> {
        let f = Form::of_ideal(&self.field, ideal).reduce();
        let v = &self.table[&f];
        let mut v = v.clone();
        v.resize(self.gens.len(), 0);
        self.group.coords_i64(&v)
    }

    pub fn is_principal(&self, ideal: &Ideal) -> bool {
        self.class_of(ideal).iter().all(|x| x.is_zero())
    }

    pub fn principal_generator(&self, ideal: &Ideal) -> Option<QuadInt> {
        principal_generator(&self.field, ideal)
    }

    /// Reduced form representing the i-th Smith generator.
    pub fn generator_form(&self, i: usize) -> Form {
        let v = self.group.snf_generator(i);
        let disc = BigInt::from(self.field.discriminant());
        let mut f = Form::identity(&disc);
        for (g, e) in self.gens.iter().zip(&v) {
            let gf = Form::of_ideal(&self.field, &g.ideal);
            f = f.compose(&gf.pow(e));
        }
        f
    }

    /// Smallest-norm prime ideal in the given class that avoids `avoid`.
    pub fn prime_in_class(
        &self,
        class: &[BigInt],
        avoid: &[PrimeIdeal],
    ) -> Result<PrimeIdeal, QuadError> {
        let mut bound = 512u64;
        while bound <= 1 << 24 {
            let mut cands: Vec<PrimeIdeal> = Vec::new();
            for ell in primes_up_to(bound) {
                let (_, ps) = split_prime(&self.field, ell)?;
                for p in ps {
                    if p.norm() <= bound && !avoid.iter().any(|q| q.ideal == p.ideal) {
                        cands.push(p);
                    }
                }
            }
            cands.sort_by(|x, y| (x.norm(), x.ideal.b()).cmp(&(y.norm(), y.ideal.b())));
            if let Some(p) = cands.into_iter().find(|p| self.class_of(&p.ideal) == class) {
                return Ok(p);
            }
            bound *= 4;
        }
        Err(QuadError::NoPrimeInClass {
            class: format!("{class:?}"),
            bound,
        })
    }

    /// Exponent of p in the class number.
    pub fn ord_p(&self, p: u64) -> u32 {
        if self.h % p == 0 {
            crate::arith::valuation_u64(self.h, p)
        } else {
            0
        }
    }

    pub fn is_trivial_element(coords: &[BigInt]) -> bool {
        coords.iter().all(|x| x.is_zero())
    }

    pub fn one_class(&self) -> Vec<BigInt> {
        vec![BigInt::from(0); self.group.rank()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    /// Independent class number count: all (not necessarily reduced) forms
    /// counted via Hurwitz-style brute force over a, b with |b| <= a <= c.
    fn brute_class_number(disc: i64) -> usize {
        let mut count = 0;
        let d = disc;
        for a in 1..=((-d) as f64).sqrt() as i64 + 1 {
            for b in -a..=a {
                if (b * b - d) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b - d) / (4 * a);
                if c < a {
                    continue;
                }
                if (b < 0) && (b == -a || a == c) {
                    continue;
                }
                if num_integer::gcd(num_integer::gcd(a, b), c) != 1 {
                    continue;
                }
                count += 1;
            }
        }
        count
    }

    #[test]
    fn known_class_groups() {
        let cases: &[(i64, &[i64])] = &[
            (-1, &[]),
            (-3, &[]),
            (-5, &[2]),
            (-23, &[3]),
            (-14, &[4]),
            (-21, &[2, 2]),
            (-47, &[5]),
            (-71, &[7]),
            (-105, &[2, 2, 2]),
            (-255, &[2, 6]),
            (-199, &[9]),
            (-4027, &[3, 3]),
            (-3299, &[3, 9]),
        ];
        for &(d, inv) in cases {
            let k = QuadField::new(d).unwrap();
            let cl = ClassGroup::compute(&k);
            let expect: Vec<BigInt> = inv.iter().map(|&x| BigInt::from(x)).collect();
            assert_eq!(cl.group().invariants(), &expect[..], "d = {d}");
        }
    }

    #[test]
    fn class_numbers_agree_with_brute_force() {
        for d in (-300i64..0).filter(|&d| QuadField::new(d).is_ok()) {
            let k = QuadField::new(d).unwrap();
            let cl = ClassGroup::compute(&k);
            assert_eq!(
                cl.class_number() as usize,
                brute_class_number(k.discriminant()),
                "d = {d}"
            );
        }
    }

    #[test]
    fn primes_above_151_are_nonprincipal() {
        let k = QuadField::new(-23).unwrap();
        let cl = ClassGroup::compute(&k);
        let (_, ps) = split_prime(&k, 151).unwrap();
        for p in &ps {
            assert!(!cl.is_principal(&p.ideal));
        }
        // the two are inverse classes
        let prod = ps[0].ideal.mul(&k, &ps[1].ideal);
        assert!(cl.is_principal(&prod));
    }

    #[test]
    fn generator_forms_have_invariant_order() {
        let k = QuadField::new(-3299).unwrap();
        let cl = ClassGroup::compute(&k);
        for i in 0..cl.group().rank() {
            let f = cl.generator_form(i);
            let ord = cl.group().invariants()[i].clone();
            assert_eq!(f.pow(&ord), Form::identity(&BigInt::from(k.discriminant())));
            let ideal = f.to_ideal(&k);
            let c = cl.class_of(&ideal);
            let mut e = vec![BigInt::from(0); cl.group().rank()];
            e[i] = BigInt::one();
            assert_eq!(c, e);
        }
    }
}
