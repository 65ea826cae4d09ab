use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Ideal, QuadField, QuadInt};
use crate::arith::xgcd;

/// Positive definite binary quadratic form a x^2 + b x y + c y^2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// 2x2 integer matrix acting on (x, y) column vectors.
pub type Mat2 = [[BigInt; 2]; 2];

fn mat_mul(m: &Mat2, n: &Mat2) -> Mat2 {
    [
        [
            &m[0][0] * &n[0][0] + &m[0][1] * &n[1][0],
            &m[0][0] * &n[0][1] + &m[0][1] * &n[1][1],
        ],
        [
            &m[1][0] * &n[0][0] + &m[1][1] * &n[1][0],
            &m[1][0] * &n[0][1] + &m[1][1] * &n[1][1],
        ],
    ]
}

fn mat_identity() -> Mat2 {
    [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ]
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Form {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn identity(disc: &BigInt) -> Form {
        let b = disc.mod_floor(&BigInt::from(2));
        let c = (&b * &b - disc) / 4;
        Form {
            a: BigInt::one(),
            b,
            c,
        }
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn is_reduced(&self) -> bool {
        let ab = self.b.abs();
        ab <= self.a
            && self.a <= self.c
            && !((ab == self.a || self.a == self.c) && self.b.is_negative())
    }

    pub fn reduce(&self) -> Form {
        self.reduce_with_transform().0
    }

    /// Reduced form g and M in SL2(Z) with g(X) = f(M X).
    pub fn reduce_with_transform(&self) -> (Form, Mat2) {
        let mut f = self.clone();
        let mut m = mat_identity();
        let two = BigInt::from(2);
        loop {
            // normalize b into (-a, a]
            let two_a = &two * &f.a;
            let k = (&f.a - &f.b).div_floor(&two_a);
            if !k.is_zero() {
                let nb = &f.b + &two_a * &k;
                let nc = &f.a * &k * &k + &f.b * &k + &f.c;
                f = Form {
                    a: f.a,
                    b: nb,
                    c: nc,
                };
                m = mat_mul(&m, &[[BigInt::one(), k], [BigInt::zero(), BigInt::one()]]);
            }
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                f = Form {
                    a: f.c,
                    b: -f.b,
                    c: f.a,
                };
                m = mat_mul(
                    &m,
                    &[
                        [BigInt::zero(), -BigInt::one()],
                        [BigInt::one(), BigInt::zero()],
                    ],
                );
                continue;
            }
            break;
        }
        debug_assert!(f.is_reduced(), "{f:?}");
        (f, m)
    }

    pub fn inverse(&self) -> Form {
        Form {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
        }
        .reduce()
    }

    /// Composition of primitive forms of the same discriminant (reduced result).
    pub fn compose(&self, other: &Form) -> Form {
        let disc = self.discriminant();
        let (f1, f2) = if self.a > other.a {
            (other, self)
        } else {
            (self, other)
        };
        let s: BigInt = (&f1.b + &f2.b) / 2;
        let n = &f2.b - &s;
        let (d, y1) = if f2.a.is_multiple_of(&f1.a) {
            (f1.a.clone(), BigInt::zero())
        } else {
            let (d, u, _) = xgcd(&f2.a, &f1.a);
            (d, u)
        };
        let (d1, x2, y2) = if s.is_multiple_of(&d) {
            (d.clone(), BigInt::zero(), -BigInt::one())
        } else {
            let (d1, x2, y2) = xgcd(&s, &d);
            (d1, x2, -y2)
        };
        let v1 = &f1.a / &d1;
        let v2 = &f2.a / &d1;
        let r = (&y1 * &y2 * &n - &x2 * &f2.c).mod_floor(&v1);
        let b3 = &f2.b + BigInt::from(2) * &v2 * &r;
        let a3 = &v1 * &v2;
        let c3 = (&b3 * &b3 - &disc) / (BigInt::from(4) * &a3);
        Form {
            a: a3,
            b: b3,
            c: c3,
        }
        .reduce()
    }

    pub fn pow(&self, e: &BigInt) -> Form {
        let disc = self.discriminant();
        if e.is_negative() {
            return self.inverse().pow(&-e);
        }
        let mut result = Form::identity(&disc);
        let mut base = self.reduce();
        let mut e = e.clone();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                result = result.compose(&base);
            }
            e /= &two;
            if !e.is_zero() {
                base = base.compose(&base);
            }
        }
        result
    }

    /// Form attached to an ideal: for I = a Z + (b + w) Z (after removing the
    /// content), N(x a + y (b + w)) = a * f(x, y).
    pub fn of_ideal(k: &QuadField, ideal: &Ideal) -> Form {
        let (_, p) = ideal.content_and_primitive();
        let a = p.a().clone();
        let b = p.b().clone();
        let t = BigInt::from(k.trace_omega());
        let nw = BigInt::from(k.norm_omega());
        let c = (&b * &b + &b * &t + &nw) / &a;
        Form {
            b: BigInt::from(2) * &b + &t,
            a,
            c,
        }
    }

    /// Inverse of `of_ideal` on primitive ideals.
    pub fn to_ideal(&self, k: &QuadField) -> Ideal {
        let t = BigInt::from(k.trace_omega());
        let b: BigInt = (&self.b - &t) / 2;
        let b = b.mod_floor(&self.a);
        Ideal::from_hnf(k, self.a.clone(), b, 1)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// A generator of the ideal if it is principal.
pub fn principal_generator(k: &QuadField, ideal: &Ideal) -> Option<QuadInt> {
    let (content, prim) = ideal.content_and_primitive();
    let f = Form::of_ideal(k, &prim);
    let (g, m) = f.reduce_with_transform();
    if !g.a.is_one() {
        return None;
    }
    let x = &m[0][0];
    let y = &m[1][0];
    let alpha = QuadInt::new(x * prim.a() + y * prim.b(), y.clone());
    debug_assert_eq!(k.norm(&alpha), prim.norm());
    Some(alpha.scale(&content))
}
