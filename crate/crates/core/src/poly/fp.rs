use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{mul_mod_u64, pow_mod_u64};

/// Polynomial over F_p, coefficients from the constant term up, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFp {
    p: u64,
    c: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    pow_mod_u64(a, p - 2, p)
}

impl PolyFp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyFp { p, c }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        PolyFp::new(
            p,
            coeffs
                .iter()
                .map(|&x| x.rem_euclid(p as i64) as u64)
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        PolyFp { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        PolyFp::constant(p, 1)
    }

    pub fn constant(p: u64, a: u64) -> Self {
        PolyFp::new(p, vec![a])
    }

    pub fn x(p: u64) -> Self {
        PolyFp::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree; the zero polynomial has degree None.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> Self {
        PolyFp::new(
            self.p,
            self.c
                .iter()
                .map(|&x| mul_mod_u64(x, k % self.p, self.p))
                .collect(),
        )
    }

    pub fn add(&self, o: &PolyFp) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        PolyFp::new(
            p,
            (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % p).collect(),
        )
    }

    pub fn sub(&self, o: &PolyFp) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        PolyFp::new(
            p,
            (0..n)
                .map(|i| (self.coeff(i) + p - o.coeff(i)) % p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &PolyFp) -> Self {
        if self.is_zero() || o.is_zero() {
            return PolyFp::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        PolyFp::new(self.p, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn divrem(&self, d: &PolyFp) -> (PolyFp, PolyFp) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (PolyFp::zero(p), self.clone());
        }
        let inv = inv_mod(d.lead(), p);
        let dn = d.deg();
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len() - dn];
        for i in (dn..r.len()).rev() {
            let coef = mul_mod_u64(r[i], inv, p);
            if coef == 0 {
                continue;
            }
            q[i - dn] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                let idx = i - dn + j;
                r[idx] = (r[idx] + p - mul_mod_u64(coef, dc, p)) % p;
            }
        }
        (PolyFp::new(p, q), PolyFp::new(p, r))
    }

    pub fn rem(&self, d: &PolyFp) -> PolyFp {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &PolyFp) -> PolyFp {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> PolyFp {
        let p = self.p;
        PolyFp::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| mul_mod_u64(a, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn mulmod(&self, o: &PolyFp, m: &PolyFp) -> PolyFp {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: &BigUint, m: &PolyFp) -> PolyFp {
        let mut result = PolyFp::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mulmod(&result, m);
            if e.bit(i) {
                result = result.mulmod(&base, m);
            }
        }
        result
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| (mul_mod_u64(acc, x, p) + a) % p)
    }

    /// g with g(x^p) = self, assuming only exponents divisible by p occur.
    fn pth_root(&self) -> PolyFp {
        let p = self.p as usize;
        PolyFp::new(self.p, self.c.iter().step_by(p).copied().collect())
    }

    fn random_below(p: u64, deg: usize, rng: &mut ChaCha8Rng) -> PolyFp {
        PolyFp::new(p, (0..deg).map(|_| rng.gen_range(0..p)).collect())
    }
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (a, i) {
                (_, 0) => a.to_string(),
                (1, _) => mono,
                _ => format!("{a}*{mono}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// Extended gcd over F_p: (g, s, t) with s*a + t*b = g monic.
pub fn xgcd(a: &PolyFp, b: &PolyFp) -> (PolyFp, PolyFp, PolyFp) {
    let p = a.modulus();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (PolyFp::one(p), PolyFp::zero(p));
    let (mut t0, mut t1) = (PolyFp::zero(p), PolyFp::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        let t2 = t0.sub(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_zero() {
        return (r0, s0, t0);
    }
    let inv = inv_mod(r0.lead(), p);
    (r0.scale(inv), s0.scale(inv), t0.scale(inv))
}

/// Square-free decomposition: f = lc * prod g_i^{e_i} with g_i monic squarefree, pairwise coprime.
pub fn squarefree_decomposition(f: &PolyFp) -> Vec<(PolyFp, u32)> {
    let p = f.modulus();
    let mut out = Vec::new();
    sqf_rec(&f.monic(), 1, p, &mut out);
    out.sort();
    out
}

fn sqf_rec(f: &PolyFp, mult: u32, p: u64, out: &mut Vec<(PolyFp, u32)>) {
    if f.deg() == 0 {
        return;
    }
    let df = f.derivative();
    if df.is_zero() {
        sqf_rec(&f.pth_root(), mult * p as u32, p, out);
        return;
    }
    let mut c = f.gcd(&df);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let fac = w.divrem(&y).0;
        if fac.deg() > 0 {
            out.push((fac.monic(), i * mult));
        }
        w = y;
        c = c.divrem(&w).0;
        i += 1;
    }
    if c.deg() > 0 {
        // remaining part is a p-th power
        sqf_rec(&c.pth_root().monic(), mult * p as u32, p, out);
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let p = f.modulus();
    let pb = BigUint::from(p);
    let mut out = Vec::new();
    let mut g = f.monic();
    let x = PolyFp::x(p);
    let mut h = x.clone();
    let mut d = 0;
    while g.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&pb, &g);
        let fac = g.gcd(&h.sub(&x));
        if fac.deg() > 0 {
            g = g.divrem(&fac).0;
            h = h.rem(&g);
            out.push((fac, d));
        }
    }
    if g.deg() > 0 {
        let dg = g.deg();
        out.push((g, dg));
    }
    out
}

/// Split a monic squarefree product of irreducibles of degree d.
pub fn equal_degree(f: &PolyFp, d: usize, rng: &mut ChaCha8Rng) -> Vec<PolyFp> {
    let n = f.deg();
    if n == d {
        return vec![f.monic()];
    }
    let p = f.modulus();
    loop {
        let a = PolyFp::random_below(p, n, rng);
        if a.deg_or_zero() == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mulmod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
            a.powmod(&e, f).sub(&PolyFp::one(p))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < n {
            let h = f.divrem(&g).0.monic();
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

impl PolyFp {
    fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficients). Deterministic for a given seed.
pub fn factor(f: &PolyFp, seed: u64) -> Vec<(PolyFp, u32)> {
    use rand::SeedableRng;
    assert!(!f.is_zero(), "factoring the zero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| (a.deg(), &a.c).cmp(&(b.deg(), &b.c)));
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &PolyFp) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let p = f.modulus();
    let g = f.monic();
    let x = PolyFp::x(p);
    let pb = BigUint::from(p);
    let xpn = x.powmod(&pb.pow(n as u32), &g);
    if !xpn.sub(&x).rem(&g).is_zero() {
        return false;
    }
    for (q, _) in crate::arith::factorize_u64(n as u64) {
        let m = n / q as usize;
        let h = x.powmod(&pb.pow(m as u32), &g).sub(&x);
        if g.gcd(&h).deg() != 0 {
            return false;
        }
    }
    true
}
