//! Factorization in Z[x]: square-free decomposition, Hensel lifting of a
//! modular factorization and recombination of lifted factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::fp::{self, PolyFp};
use super::PolyZ;
use crate::arith::{is_prime_u64, mod_inverse};

const SEED: u64 = 0x5eed;

/// Irreducible factors of f over Z with multiplicities (content dropped),
/// sorted by degree then coefficients.
pub fn factor_z(f: &PolyZ) -> Vec<(PolyZ, u32)> {
    assert!(!f.is_zero(), "factoring the zero polynomial");
    let f = f.primitive_part();
    let mut out = Vec::new();
    for (g, e) in squarefree_z(&f) {
        for h in factor_squarefree(&g) {
            out.push((h, e));
        }
    }
    out.sort_by(|(a, _), (b, _)| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
    out
}

/// Yun's square-free decomposition of a primitive polynomial.
fn squarefree_z(f: &PolyZ) -> Vec<(PolyZ, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides").primitive_part();
    let mut c = df.div_exact(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.deg() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides").primitive_part();
        if b.deg() == 0 {
            break;
        }
        c = d.div_exact(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

fn norm2_bound(f: &PolyZ) -> BigInt {
    let s: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    s.sqrt() + BigInt::one()
}

fn symmetric_mod(f: &PolyZ, m: &BigInt) -> PolyZ {
    let half = m / 2;
    PolyZ::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn reduce_mod(f: &PolyZ, m: &BigInt) -> PolyZ {
    PolyZ::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn factor_squarefree(f: &PolyZ) -> Vec<PolyZ> {
    let n = f.deg();
    if n <= 1 {
        return vec![f.primitive_part()];
    }
    let lc = f.lead();
    // choose the admissible prime giving the fewest modular factors among a few
    let mut best: Option<(u64, Vec<PolyFp>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 6 && p < 10_000 {
        if is_prime_u64(p) && !(&lc % p).is_zero() {
            let fp = f.reduce_mod(p);
            if fp.deg() == n && fp.gcd(&fp.derivative()).deg() == 0 {
                let facs: Vec<PolyFp> = fp::factor(&fp, SEED).into_iter().map(|(g, _)| g).collect();
                tried += 1;
                if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
                    best = Some((p, facs));
                }
                if best.as_ref().unwrap().1.len() == 1 {
                    break;
                }
            }
        }
        p += 2;
    }
    let (p, facs) = best.expect("no admissible prime");
    if facs.len() == 1 {
        return vec![f.primitive_part()];
    }
    // factor coefficients are bounded by 2^n * ||f||_2 * |lc|
    let bound = BigInt::from(2).pow(n as u32) * norm2_bound(f) * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        k += 1;
    }
    let lifted = multifactor_lift(f, &facs, p, k);
    recombine(f, &lifted, &m)
}

/// Lift f = lc * prod(facs) mod p to a factorization mod p^k with monic factors.
fn multifactor_lift(f: &PolyZ, facs: &[PolyFp], p: u64, k: u32) -> Vec<PolyZ> {
    let m = BigInt::from(p).pow(k);
    if facs.len() == 1 {
        let inv = mod_inverse(&f.lead(), &m).expect("leading coefficient invertible");
        return vec![reduce_mod(&f.scale(&inv), &m)];
    }
    let half = facs.len() / 2;
    let g0 = facs[..half]
        .iter()
        .fold(PolyFp::one(p), |acc, g| acc.mul(g));
    let h0 = f.reduce_mod(p).divrem(&g0).0;
    let (g, h) = hensel_two(f, &g0, &h0, p, k);
    let mut out = multifactor_lift(&g, &facs[..half], p, k);
    out.extend(multifactor_lift(&h, &facs[half..], p, k));
    out
}

/// Lift f = g0 * h0 (mod p), g0 monic, to f = g * h (mod p^k) with g monic.
fn hensel_two(f: &PolyZ, g0: &PolyFp, h0: &PolyFp, p: u64, k: u32) -> (PolyZ, PolyZ) {
    let (one, s, t) = fp::xgcd(g0, h0);
    assert!(one.is_one(), "modular factors not coprime");
    let pb = BigInt::from(p);
    let mut g = PolyZ::from_fp(g0);
    let mut h = PolyZ::from_fp(h0);
    let mut pj = pb.clone();
    for _ in 1..k {
        // e = (f - g h) / p^j mod p
        let diff = f.sub(&g.mul(&h));
        let e = PolyZ::new(diff.coeffs().iter().map(|c| c / &pj).collect()).reduce_mod(p);
        let hp = h.reduce_mod(p);
        let gp = g.reduce_mod(p);
        let (q, r) = e.mul(&s).divrem(&hp);
        let dg = e.mul(&t).add(&q.mul(&gp));
        let dh = r;
        g = g.add(&PolyZ::from_fp(&dg).scale(&pj));
        h = h.add(&PolyZ::from_fp(&dh).scale(&pj));
        pj *= &pb;
        g = reduce_mod(&g, &pj);
        h = reduce_mod(&h, &pj);
    }
    (g, h)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn recombine(f: &PolyZ, lifted: &[PolyZ], m: &BigInt) -> Vec<PolyZ> {
    let mut remaining: Vec<PolyZ> = lifted.to_vec();
    let mut cur = f.primitive_part();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for sub in subsets(remaining.len(), s) {
            let lc = cur.lead();
            let prod = sub.iter().fold(PolyZ::constant(lc.clone()), |acc, &i| {
                reduce_mod(&acc.mul(&remaining[i]), m)
            });
            let cand = symmetric_mod(&prod, m).primitive_part();
            if cand.deg() == 0 {
                continue;
            }
            if let Some(q) = cur.div_exact(&cand) {
                found = Some((sub, cand, q));
                break;
            }
        }
        match found {
            Some((sub, cand, q)) => {
                out.push(cand);
                cur = q.primitive_part();
                for &i in sub.iter().rev() {
                    remaining.remove(i);
                }
            }
            None => s += 1,
        }
    }
    if cur.deg() > 0 {
        out.push(cur);
    }
    out
}

/// Convenience: true if f is irreducible over Q (f primitive, degree >= 1).
pub fn is_irreducible_z(f: &PolyZ) -> bool {
    let fs = factor_z(f);
    fs.len() == 1 && fs[0].1 == 1 && fs[0].0.deg() == f.deg()
}
