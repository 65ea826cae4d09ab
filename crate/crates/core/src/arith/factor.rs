use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::{mul_mod_u64, pow_mod_u64};

const TRIAL_BOUND: u64 = 1_000_000;
const RHO_BUDGET: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("cannot factor zero")]
    Zero,
    #[error("factorization budget exhausted on cofactor {0}")]
    TooHard(BigUint),
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| primes_up_to(TRIAL_BOUND))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with fixed bases; deterministic below 2^64, probabilistic above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let bases: [u64; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    'witness: for a in bases {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64, seed: u64) -> Option<u64> {
    // Brent's variant with batched gcds
    let f = |x: u64| (mul_mod_u64(x, x, n) + seed) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let m = 128u64;
    let mut x;
    let mut ys;
    let mut iterations = 0u64;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            let g = q.gcd(&n);
            k += m;
            iterations += m;
            if g != 1 {
                if g != n {
                    return Some(g);
                }
                // backtrack one step at a time
                loop {
                    ys = f(ys);
                    let g = x.abs_diff(ys).gcd(&n);
                    if g != 1 {
                        return (g != n).then_some(g);
                    }
                }
            }
            if k >= r {
                break;
            }
        }
        r *= 2;
        if iterations > RHO_BUDGET {
            return None;
        }
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    for seed in 1..64 {
        if let Some(d) = rho_u64(n, seed) {
            factor_u64_into(d, out);
            factor_u64_into(n / d, out);
            return;
        }
    }
    // rho cannot fail on 64-bit composites with this many seeds in practice;
    // fall back to trial division for robustness
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        while m % p == 0 {
            out.push(p);
            m /= p;
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
}

fn collect(mut primes: Vec<u64>) -> Vec<(u64, u32)> {
    primes.sort_unstable();
    let mut res: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match res.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => res.push((p, 1)),
        }
    }
    res
}

/// Prime factorization of a positive 64-bit integer, sorted by prime.
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize_u64(0)");
    let mut primes = Vec::new();
    let mut m = n;
    for &p in small_primes()
        .iter()
        .take_while(|&&p| p * p <= n && p < 1000)
    {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
    }
    factor_u64_into(m, &mut primes);
    collect(primes)
}

fn rho_big(n: &BigUint, seed: u64) -> Option<BigUint> {
    let c = BigUint::from(seed);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let m = 64u64;
    let mut iterations = 0u64;
    loop {
        let x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r {
            let mut ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            let g = q.gcd(n);
            k += m;
            iterations += m;
            if !g.is_one() {
                if &g != n {
                    return Some(g);
                }
                loop {
                    ys = f(&ys);
                    let diff = if x > ys { &x - &ys } else { &ys - &x };
                    let g = diff.gcd(n);
                    if !g.is_one() {
                        return (&g != n).then_some(g);
                    }
                }
            }
        }
        r *= 2;
        if iterations > RHO_BUDGET {
            return None;
        }
    }
}

fn factor_big_into(n: BigUint, out: &mut Vec<BigUint>) -> Result<(), FactorError> {
    if n.is_one() {
        return Ok(());
    }
    if let Some(small) = n.to_u64() {
        let mut v = Vec::new();
        factor_u64_into(small, &mut v);
        out.extend(v.into_iter().map(BigUint::from));
        return Ok(());
    }
    if is_probable_prime(&n) {
        out.push(n);
        return Ok(());
    }
    for seed in 1..8 {
        if let Some(d) = rho_big(&n, seed) {
            let other = &n / &d;
            factor_big_into(d, out)?;
            return factor_big_into(other, out);
        }
    }
    Err(FactorError::TooHard(n))
}

/// Full prime factorization of |n|, sorted by prime.
pub fn factorize(n: &BigInt) -> Result<Vec<(BigUint, u32)>, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    let mut m = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    if let Some(small) = m.to_u64() {
        return Ok(factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect());
    }
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            primes.push(pb.clone());
            m = q;
        }
    }
    factor_big_into(m, &mut primes)?;
    primes.sort();
    let mut res: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match res.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => res.push((p, 1)),
        }
    }
    Ok(res)
}
