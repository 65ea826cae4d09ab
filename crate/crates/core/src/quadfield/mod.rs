//! Imaginary quadratic fields K = Q(sqrt d): integral elements, ideals in
//! Hermite form, binary quadratic forms and the class group.

mod classgroup;
mod form;
mod ideal;
mod modulus;

pub use classgroup::{reduced_forms, ClassGroup};
pub use form::Form;
pub use ideal::{split_prime, Ideal, PrimeIdeal, SplitType};
pub use modulus::Modulus;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::kronecker;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("d = {0} is not a negative squarefree integer")]
    BadDiscriminant(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ideal is not a prime ideal: {0}")]
    NotPrimeIdeal(String),
    #[error("malformed modulus '{0}': {1}")]
    BadModulus(String, String),
    #[error("ideal is not coprime to the modulus: {0}")]
    NotCoprime(String),
    #[error("no prime of norm <= {bound} represents class {class}")]
    NoPrimeInClass { class: String, bound: u64 },
}

/// An imaginary quadratic field, with integral basis {1, w}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
    disc: i64,
    trace: i64,
    norm: i64,
}

fn is_squarefree(n: u64) -> bool {
    crate::arith::factorize_u64(n).iter().all(|&(_, e)| e == 1)
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self, QuadError> {
        if d >= 0 || !is_squarefree(d.unsigned_abs()) {
            return Err(QuadError::BadDiscriminant(d));
        }
        let (disc, trace, norm) = if d.rem_euclid(4) == 1 {
            (d, 1, (1 - d) / 4)
        } else {
            (4 * d, 0, -d)
        };
        Ok(QuadField {
            d,
            disc,
            trace,
            norm,
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// Trace of w.
    pub fn trace_omega(&self) -> i64 {
        self.trace
    }

    /// Norm of w; w^2 = trace*w - norm.
    pub fn norm_omega(&self) -> i64 {
        self.norm
    }

    pub fn unit_torsion(&self) -> u32 {
        match self.d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// Minimal polynomial of w, coefficients from the constant term up.
    pub fn omega_poly(&self) -> [i64; 3] {
        [self.norm, -self.trace, 1]
    }

    /// A generator of the roots of unity.
    pub fn torsion_generator(&self) -> QuadInt {
        match self.d {
            // i = w, and w = (1 + sqrt -3)/2 is a primitive 6th root of unity
            -1 | -3 => QuadInt::new(0, 1),
            _ => QuadInt::new(-1, 0),
        }
    }

    pub fn roots_of_unity(&self) -> Vec<QuadInt> {
        let z = self.torsion_generator();
        let mut out = vec![QuadInt::one()];
        let mut cur = z.clone();
        while !cur.is_one() {
            out.push(cur.clone());
            cur = self.mul(&cur, &z);
        }
        out
    }

    pub fn kronecker(&self, ell: i64) -> i32 {
        kronecker(self.disc, ell)
    }

    pub fn mul(&self, a: &QuadInt, b: &QuadInt) -> QuadInt {
        let yy = &a.y * &b.y;
        QuadInt {
            x: &a.x * &b.x - &yy * self.norm,
            y: &a.x * &b.y + &a.y * &b.x + yy * self.trace,
        }
    }

    pub fn pow(&self, a: &QuadInt, mut e: u64) -> QuadInt {
        let mut result = QuadInt::one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn norm(&self, a: &QuadInt) -> BigInt {
        &a.x * &a.x + &a.x * &a.y * self.trace + &a.y * &a.y * self.norm
    }

    pub fn conj(&self, a: &QuadInt) -> QuadInt {
        QuadInt {
            x: &a.x + &a.y * self.trace,
            y: -&a.y,
        }
    }

    pub fn omega(&self) -> QuadInt {
        QuadInt::new(0, 1)
    }

    /// Human-readable name, e.g. `Q(sqrt(-23))`.
    pub fn name(&self) -> String {
        if self.d == -1 {
            "Q(i)".into()
        } else {
            format!("Q(sqrt({}))", self.d)
        }
    }
}

/// x + y*w with integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &QuadInt) -> QuadInt {
        QuadInt {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }

    pub fn sub(&self, o: &QuadInt) -> QuadInt {
        QuadInt {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }

    pub fn scale(&self, k: &BigInt) -> QuadInt {
        QuadInt {
            x: &self.x * k,
            y: &self.y * k,
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x.is_zero(), self.y.is_zero()) {
            (_, true) => write!(f, "{}", self.x),
            (true, false) if self.y.is_one() => write!(f, "w"),
            (true, false) => write!(f, "{}*w", self.y),
            (false, false) => {
                let sign = if self.y.is_negative() { "-" } else { "+" };
                let ay = self.y.abs();
                if ay.is_one() {
                    write!(f, "{} {} w", self.x, sign)
                } else {
                    write!(f, "{} {} {}*w", self.x, sign, ay)
                }
            }
        }
    }
}
