use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::PolyZ;
use crate::quadfield::QuadField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("profile {label}: {msg}")]
    Inconsistent { label: String, msg: String },
}

/// Stored invariants of a number field. Units are given in the power basis
/// of a root of `defining`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberFieldProfile {
    pub label: String,
    pub defining: PolyZ,
    pub degree: usize,
    pub signature: (u32, u32),
    pub class_number: BigInt,
    pub class_group: Vec<BigInt>,
    pub unit_rank: usize,
    pub torsion_order: u64,
    pub fundamental_units: Vec<Vec<BigRational>>,
    /// A generator of the roots of unity; only needed when p divides the
    /// torsion order.
    pub torsion_generator: Option<Vec<BigRational>>,
}

impl NumberFieldProfile {
    pub fn validate(&self) -> Result<(), ProfileError> {
        let bad = |msg: String| {
            Err(ProfileError::Inconsistent {
                label: self.label.clone(),
                msg,
            })
        };
        let (r1, r2) = self.signature;
        if self.defining.deg() != self.degree {
            return bad(format!(
                "polynomial degree {} != degree {}",
                self.defining.deg(),
                self.degree
            ));
        }
        if (r1 + 2 * r2) as usize != self.degree {
            return bad(format!(
                "signature ({r1},{r2}) does not match degree {}",
                self.degree
            ));
        }
        if (r1 + r2) as usize != self.unit_rank + 1 {
            return bad(format!("unit rank {} != r1 + r2 - 1", self.unit_rank));
        }
        let prod: BigInt = self.class_group.iter().product();
        if prod != self.class_number {
            return bad(format!(
                "class group product {prod} != class number {}",
                self.class_number
            ));
        }
        if self
            .class_group
            .windows(2)
            .any(|w| !(&w[1] % &w[0]).is_zero())
        {
            return bad("class group invariants do not form a divisor chain".into());
        }
        if self.torsion_order == 0 || self.torsion_order % 2 != 0 {
            return bad(format!("torsion order {} is not even", self.torsion_order));
        }
        let n = self.degree;
        if self.fundamental_units.iter().any(|u| u.len() != n) {
            return bad("fundamental unit of wrong length".into());
        }
        if !self.fundamental_units.is_empty() && self.fundamental_units.len() != self.unit_rank {
            return bad(format!(
                "{} fundamental units for unit rank {}",
                self.fundamental_units.len(),
                self.unit_rank
            ));
        }
        if let Some(t) = &self.torsion_generator {
            if t.len() != n {
                return bad("torsion generator of wrong length".into());
            }
        }
        Ok(())
    }

    pub fn discriminant_sign(&self) -> i32 {
        if self.signature.1 % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Profile of an imaginary quadratic field in the basis 1, w.
    pub fn imaginary_quadratic(k: &QuadField) -> Self {
        let [c0, c1, c2] = k.omega_poly();
        let z = k.torsion_generator();
        let q = |x: &BigInt| BigRational::from_integer(x.clone());
        NumberFieldProfile {
            label: format!("2.0.{}.1", k.discriminant().unsigned_abs()),
            defining: PolyZ::from_i64(&[c0, c1, c2]),
            degree: 2,
            signature: (0, 1),
            class_number: BigInt::from(crate::quadfield::reduced_forms(k.discriminant()).len()),
            class_group: Vec::new(),
            unit_rank: 0,
            torsion_order: k.unit_torsion() as u64,
            fundamental_units: Vec::new(),
            torsion_generator: Some(vec![q(&z.x), q(&z.y)]),
        }
        .with_class_group_from(k)
    }

    fn with_class_group_from(mut self, k: &QuadField) -> Self {
        let cl = crate::quadfield::ClassGroup::compute(k);
        self.class_group = cl
            .group()
            .invariants()
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_profiles_validate() {
        for d in [-1, -3, -5, -23, -47, -105] {
            let k = QuadField::new(d).unwrap();
            let p = NumberFieldProfile::imaginary_quadratic(&k);
            p.validate().unwrap();
        }
        let k = QuadField::new(-23).unwrap();
        let mut p = NumberFieldProfile::imaginary_quadratic(&k);
        assert_eq!(p.class_number, BigInt::from(3));
        p.unit_rank = 1;
        assert!(p.validate().is_err());
    }
}
