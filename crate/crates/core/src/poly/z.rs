use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{parse_rational_poly, ParseError, PolyFp};
use crate::arith::IntMatrix;

/// Polynomial with integer coefficients, from the constant term up.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyZ {
    c: Vec<BigInt>,
}

impl PolyZ {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        PolyZ { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        PolyZ::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        PolyZ { c: Vec::new() }
    }

    pub fn one() -> Self {
        PolyZ::from_i64(&[1])
    }

    pub fn x() -> Self {
        PolyZ::from_i64(&[0, 1])
    }

    pub fn constant(a: BigInt) -> Self {
        PolyZ::new(vec![a])
    }

    /// Parse text such as `x^3 + x^2 - 2*x - 1`; coefficients must be integers.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let q = parse_rational_poly(s, 'x')?;
        let mut c = Vec::with_capacity(q.len());
        for (i, a) in q.into_iter().enumerate() {
            if !a.is_integer() {
                return Err(ParseError {
                    pos: 0,
                    msg: format!("coefficient of x^{i} is not an integer"),
                });
            }
            c.push(a.to_integer());
        }
        Ok(PolyZ::new(c))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lead(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn add(&self, o: &PolyZ) -> PolyZ {
        let n = self.c.len().max(o.c.len());
        PolyZ::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &PolyZ) -> PolyZ {
        let n = self.c.len().max(o.c.len());
        PolyZ::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> PolyZ {
        PolyZ::new(self.c.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, k: &BigInt) -> PolyZ {
        PolyZ::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn mul(&self, o: &PolyZ) -> PolyZ {
        if self.is_zero() || o.is_zero() {
            return PolyZ::zero();
        }
        let mut out = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyZ::new(out)
    }

    pub fn pow(&self, e: u32) -> PolyZ {
        (0..e).fold(PolyZ::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> PolyZ {
        PolyZ::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * i)
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.c
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, a| {
            acc * x + BigRational::from_integer(a.clone())
        })
    }

    /// f(a*x + b).
    pub fn compose_linear(&self, a: &BigInt, b: &BigInt) -> PolyZ {
        let lin = PolyZ::new(vec![b.clone(), a.clone()]);
        self.c.iter().rev().fold(PolyZ::zero(), |acc, coef| {
            acc.mul(&lin).add(&PolyZ::constant(coef.clone()))
        })
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> PolyZ {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        PolyZ::new(self.c.iter().map(|x| x / &g).collect())
    }

    /// Quotient if `d` divides `self` exactly in Z[x].
    pub fn div_exact(&self, d: &PolyZ) -> Option<PolyZ> {
        assert!(!d.is_zero());
        if self.is_zero() {
            return Some(PolyZ::zero());
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        let dn = d.deg();
        let ld = d.lead();
        let mut r = self.c.clone();
        let mut q = vec![BigInt::zero(); self.c.len() - dn];
        for i in (dn..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let (coef, rem) = r[i].div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.c.iter().enumerate() {
                r[i - dn + j] -= &coef * dc;
            }
            q[i - dn] = coef;
        }
        r.iter().all(|x| x.is_zero()).then(|| PolyZ::new(q))
    }

    /// Pseudo-remainder: lc(d)^(deg f - deg d + 1) f mod d.
    pub fn pseudo_rem(&self, d: &PolyZ) -> PolyZ {
        let dn = d.deg();
        let ld = d.lead();
        let mut r = self.clone();
        while !r.is_zero() && r.deg() >= dn {
            let shift = r.deg() - dn;
            let lr = r.lead();
            let mut t = vec![BigInt::zero(); shift];
            t.extend(d.c.iter().map(|x| x * &lr));
            r = r.scale(&ld).sub(&PolyZ::new(t));
        }
        r
    }

    /// Gcd in Z[x] (primitive, positive leading coefficient).
    pub fn gcd(&self, o: &PolyZ) -> PolyZ {
        let mut a = self.primitive_part();
        let mut b = o.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let g = self.content().gcd(&o.content());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale(&g)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Reduction modulo a prime.
    pub fn reduce_mod(&self, p: u64) -> PolyFp {
        let pb = BigInt::from(p);
        PolyFp::new(
            p,
            self.c
                .iter()
                .map(|x| x.mod_floor(&pb).to_u64().unwrap())
                .collect(),
        )
    }

    pub fn from_fp(f: &PolyFp) -> PolyZ {
        PolyZ::new(f.coeffs().iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, o: &PolyZ) -> BigInt {
        let (m, n) = (self.deg(), o.deg());
        if m + n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut s = IntMatrix::zeros(size, size);
        for i in 0..n {
            for (j, a) in self.c.iter().rev().enumerate() {
                s[(i, i + j)] = a.clone();
            }
        }
        for i in 0..m {
            for (j, b) in o.c.iter().rev().enumerate() {
                s[(n + i, i + j)] = b.clone();
            }
        }
        s.determinant()
    }

    pub fn discriminant(&self) -> BigInt {
        let n = self.deg();
        let r = self.resultant(&self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        sign * r / self.lead()
    }
}

impl fmt::Debug for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let abs = a.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse_roundtrip() {
        let f = PolyZ::from_i64(&[-1, -2, 1, 1]);
        assert_eq!(f.to_string(), "x^3 + x^2 - 2*x - 1");
        assert_eq!(PolyZ::parse(&f.to_string()).unwrap(), f);
        assert!(PolyZ::parse("x/2").is_err());
    }

    #[test]
    fn discriminants() {
        assert_eq!(
            PolyZ::from_i64(&[-1, -2, 1, 1]).discriminant(),
            BigInt::from(49)
        );
        assert_eq!(PolyZ::from_i64(&[1, 0, 1]).discriminant(), BigInt::from(-4));
        assert_eq!(
            PolyZ::from_i64(&[6, -1, 1]).discriminant(),
            BigInt::from(-23)
        );
        // x^3 - x^2 - 10x + 8 defines the cubic field of conductor 31
        assert_eq!(
            PolyZ::from_i64(&[8, -10, -1, 1]).discriminant(),
            BigInt::from(961 * 4)
        );
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = PolyZ::from_i64(&[1, 1]);
        let b = PolyZ::from_i64(&[1, 0, 1]);
        let f = a.mul(&a).mul(&b);
        assert!(!f.is_squarefree());
        assert!(a.mul(&b).is_squarefree());
        assert_eq!(f.gcd(&f.derivative()), a);
        assert_eq!(f.div_exact(&b).unwrap(), a.mul(&a));
        assert!(f.div_exact(&PolyZ::from_i64(&[2, 1])).is_none());
    }

    fn small_poly() -> impl Strategy<Value = PolyZ> {
        proptest::collection::vec(-9i64..9, 1..6).prop_map(|mut v| {
            let n = v.len();
            v[n - 1] = if v[n - 1] == 0 { 1 } else { v[n - 1] };
            PolyZ::from_i64(&v)
        })
    }

    proptest! {
        #[test]
        fn resultant_is_multiplicative(f in small_poly(), g in small_poly(), h in small_poly()) {
            prop_assume!(f.deg() > 0 && g.deg() > 0 && h.deg() > 0);
            prop_assert_eq!(f.resultant(&g.mul(&h)), f.resultant(&g) * f.resultant(&h));
        }

        #[test]
        fn exact_division_inverts_multiplication(f in small_poly(), g in small_poly()) {
            prop_assert_eq!(f.mul(&g).div_exact(&g), Some(f.clone()));
        }

        #[test]
        fn resultant_by_roots_for_linear(a in -20i64..20, g in small_poly()) {
            // Res(x - a, g) = g(a)
            let f = PolyZ::from_i64(&[-a, 1]);
            let expect = g.eval(&BigInt::from(a));
            let sign = BigInt::one();
            prop_assert_eq!(f.resultant(&g), sign * expect);
        }
    }
}
