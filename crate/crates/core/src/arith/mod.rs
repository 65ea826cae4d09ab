//! Integer arithmetic: Kronecker symbol, factorization, CRT, integer
//! matrices with Smith and Hermite normal forms.

mod factor;
mod matrix;

pub use factor::{
    factorize, factorize_u64, is_prime_u64, is_probable_prime, primes_up_to, FactorError,
};
pub use matrix::{add_row_mod_d, hnf_mod_d, hnf_with_transform, smith_normal_form, IntMatrix, Snf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(BigInt),
    #[error("incompatible congruences: {r1} mod {m1} and {r2} mod {m2}")]
    Inconsistent {
        r1: BigInt,
        m1: BigInt,
        r2: BigInt,
        m2: BigInt,
    },
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(BigInt, BigInt),
}

/// Kronecker symbol (a/n), extending the Jacobi symbol to all integers n.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        // (a/2) = 1 for a = ±1 mod 8, -1 for a = ±3 mod 8
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn xgcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt, ArithError> {
    let (g, s, _) = xgcd(&a.mod_floor(m), m);
    if !g.is_one() {
        return Err(ArithError::NotInvertible(a.clone(), m.clone()));
    }
    Ok(s.mod_floor(m))
}

pub fn mod_inverse_i128(a: i128, m: i128) -> Option<i128> {
    let (g, s, _) = xgcd_i128(a.rem_euclid(m), m);
    (g == 1).then(|| s.rem_euclid(m))
}

pub fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod_u64(result, b, m);
        }
        b = mul_mod_u64(b, b, m);
        exp >>= 1;
    }
    result
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Exponent of the prime p in n (n != 0).
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Combine congruences x = r_i mod m_i. Moduli need not be coprime; the
/// result is (r, lcm) with 0 <= r < lcm.
pub fn crt(pairs: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt), ArithError> {
    let mut r = BigInt::zero();
    let mut m = BigInt::one();
    for (ri, mi) in pairs {
        if !mi.is_positive() {
            return Err(ArithError::NonPositiveModulus(mi.clone()));
        }
        let (g, s, _) = xgcd(&m, mi);
        let diff = ri - &r;
        if !diff.is_multiple_of(&g) {
            return Err(ArithError::Inconsistent {
                r1: r,
                m1: m,
                r2: ri.clone(),
                m2: mi.clone(),
            });
        }
        let lcm = &m / &g * mi;
        // r + m * s * (diff / g) solves both congruences
        r = (&r + &m * s * (diff / &g)).mod_floor(&lcm);
        m = lcm;
    }
    Ok((r, m))
}

/// Square root of a modulo an odd prime p (Tonelli-Shanks), or None if a is
/// a non-residue. For p = 2 returns a mod 2.
pub fn sqrt_mod_prime(a: i64, p: u64) -> Option<u64> {
    let a = a.rem_euclid(p as i64) as u64;
    if p == 2 || a == 0 {
        return Some(a % p);
    }
    if pow_mod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2u64;
    while pow_mod_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(a, q, p);
    let mut r = pow_mod_u64(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod_u64(tt, tt, p);
            i += 1;
        }
        let b = pow_mod_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod_u64(b, b, p);
        t = mul_mod_u64(t, c, p);
        r = mul_mod_u64(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jacobi_by_euler(a: i64, p: i64) -> i32 {
        let r = pow_mod_u64(a.rem_euclid(p) as u64, ((p - 1) / 2) as u64, p as u64);
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    #[test]
    fn kronecker_known_values() {
        assert_eq!(kronecker(-23, 151), 1);
        assert_eq!(kronecker(-1, 7), -1);
        assert_eq!(kronecker(-1, 31), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(-5, -1), -1);
    }

    #[test]
    fn kronecker_matches_euler_for_odd_primes() {
        for &p in &[3i64, 5, 7, 11, 13, 101, 151, 997] {
            for a in -60..60 {
                assert_eq!(kronecker(a, p), jacobi_by_euler(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn crt_examples() {
        let (r, m) = crt(&[(4.into(), 7.into()), (16.into(), 31.into())]).unwrap();
        assert_eq!((r, m), (109.into(), 217.into()));
        assert!(crt(&[(1.into(), 4.into()), (2.into(), 6.into())]).is_err());
        let (r, m) = crt(&[(1.into(), 4.into()), (3.into(), 6.into())]).unwrap();
        assert_eq!((r, m), (9.into(), 12.into()));
    }

    #[test]
    fn square_roots_mod_p() {
        for &p in &[3u64, 5, 7, 13, 17, 151, 257, 65537] {
            for a in 0..p.min(300) {
                match sqrt_mod_prime(a as i64, p) {
                    Some(r) => assert_eq!(mul_mod_u64(r, r, p), a % p),
                    None => assert_eq!(kronecker(a as i64, p as i64), -1),
                }
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(150), 3), 1);
        assert_eq!(valuation(&BigInt::from(-1350), 3), 3);
        assert_eq!(valuation_u64(960, 2), 6);
    }
}
