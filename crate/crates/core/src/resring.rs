//! Unit groups (O_K/m)^* of residue rings of an imaginary quadratic field,
//! decomposed over the prime-power factors of m, and multiplicative groups
//! of finite fields F_ell[x]/(g).

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::abelian::{Closure, ClosureError, FinAbGroup};
use crate::arith::{factorize_u64, mod_inverse_i128, IntMatrix};
use crate::poly::{fp, PolyFp};
use crate::quadfield::{Ideal, Modulus, PrimeIdeal, QuadField, QuadInt};

/// Largest supported norm of a modulus for residue arithmetic.
const MAX_NORM: u128 = 1 << 40;
/// Largest component 1-unit group enumerated explicitly.
const MAX_G2: usize = 1 << 21;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResError {
    #[error("modulus norm {0} exceeds the supported range")]
    TooLarge(BigInt),
    #[error("exponent {0} > 1 at a ramified prime above 2 is not supported")]
    RamifiedTwo(u32),
    #[error("{0} is not invertible modulo the modulus")]
    NotInvertible(String),
    #[error(transparent)]
    Enumeration(#[from] ClosureError),
    #[error("{0} is not irreducible modulo {1}")]
    NotIrreducible(String, u64),
    #[error("zero has no multiplicative order")]
    Zero,
}

/// Residue class x + y*w, reduced against a Hermite basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Res {
    pub x: i128,
    pub y: i128,
}

/// Arithmetic in O_K / I for an ideal I of moderate norm.
#[derive(Clone, Copy, Debug)]
pub struct ResArith {
    a: i128,
    b: i128,
    c: i128,
    t: i128,
    n: i128,
}

impl ResArith {
    pub fn new(k: &QuadField, ideal: &Ideal) -> Result<Self, ResError> {
        let norm = ideal.norm();
        if norm > BigInt::from(MAX_NORM) {
            return Err(ResError::TooLarge(norm));
        }
        Ok(ResArith {
            a: ideal.a().to_i128().unwrap(),
            b: ideal.b().to_i128().unwrap(),
            c: ideal.c().to_i128().unwrap(),
            t: k.trace_omega() as i128,
            n: k.norm_omega() as i128,
        })
    }

    pub fn size(&self) -> u128 {
        (self.a * self.c) as u128
    }

    #[inline]
    pub fn reduce(&self, x: i128, y: i128) -> Res {
        let q = y.div_euclid(self.c);
        let y = y - q * self.c;
        let x = (x - q * self.b).rem_euclid(self.a);
        Res { x, y }
    }

    pub fn from_quad(&self, v: &QuadInt) -> Res {
        let c = BigInt::from(self.c);
        let y = v.y.mod_floor(&c);
        let q = (&v.y - &y) / &c;
        let x = (&v.x - q * BigInt::from(self.b)).mod_floor(&BigInt::from(self.a));
        Res {
            x: x.to_i128().unwrap(),
            y: y.to_i128().unwrap(),
        }
    }

    pub fn to_quad(&self, r: Res) -> QuadInt {
        QuadInt::new(r.x, r.y)
    }

    pub fn one(&self) -> Res {
        self.reduce(1, 0)
    }

    pub fn is_one(&self, r: Res) -> bool {
        r == self.one()
    }

    pub fn is_zero(&self, r: Res) -> bool {
        r.x == 0 && r.y == 0
    }

    #[inline]
    pub fn mul(&self, u: Res, v: Res) -> Res {
        let yy = u.y * v.y;
        let x = u.x * v.x - yy * self.n;
        let y = u.x * v.y + u.y * v.x + yy * self.t;
        // a and a*w both lie in the ideal
        self.reduce(x.rem_euclid(self.a), y.rem_euclid(self.a))
    }

    pub fn add(&self, u: Res, v: Res) -> Res {
        self.reduce(u.x + v.x, u.y + v.y)
    }

    pub fn sub(&self, u: Res, v: Res) -> Res {
        self.reduce(u.x - v.x, u.y - v.y)
    }

    pub fn pow(&self, u: Res, mut e: u128) -> Res {
        let mut result = self.one();
        let mut base = u;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Reduce a residue of a finer modulus (one contained in this ideal).
    pub fn project(&self, r: Res) -> Res {
        self.reduce(r.x, r.y)
    }
}

/// Exact order of the p-primary part of x in a group of the given order:
/// the least p^k with (x^(order/p^v))^(p^k) = 1.
pub fn p_primary_order<E: Clone>(
    x: &E,
    order: &BigUint,
    p: u64,
    pow: impl Fn(&E, &BigUint) -> E,
    is_one: impl Fn(&E) -> bool,
) -> BigUint {
    let pb = BigUint::from(p);
    let mut cofactor = order.clone();
    while (&cofactor % &pb).is_zero() {
        cofactor /= &pb;
    }
    let mut y = pow(x, &cofactor);
    let mut pk = BigUint::one();
    while !is_one(&y) {
        y = pow(&y, &pb);
        pk *= &pb;
    }
    pk
}

/// Exact multiplicative order of x given the factored group order.
pub fn order_from_factored<E: Clone>(
    x: &E,
    factored: &[(BigUint, u32)],
    pow: impl Fn(&E, &BigUint) -> E,
    is_one: impl Fn(&E) -> bool,
) -> BigUint {
    let mut order: BigUint = factored.iter().map(|(p, e)| p.pow(*e)).product();
    for (p, e) in factored {
        for _ in 0..*e {
            let cand = &order / p;
            if is_one(&pow(x, &cand)) {
                order = cand;
            } else {
                break;
            }
        }
    }
    order
}

/// Discrete log of h to base g in a cyclic group of order `n` with known
/// factorization, by Pohlig-Hellman and baby-step giant-step.
fn dlog_cyclic(ar: &ResArith, g: Res, h: Res, n: u128, factors: &[(u128, u32)]) -> u128 {
    let mut residues = Vec::new();
    for &(r, e) in factors {
        let re = r.pow(e);
        let gi = ar.pow(g, n / re);
        let hi = ar.pow(h, n / re);
        let gamma = ar.pow(gi, re / r);
        let mut k: u128 = 0;
        let mut rj: u128 = 1;
        for j in 0..e {
            let gk_inv = ar.pow(gi, (re - k % re) % re);
            let hk = ar.pow(ar.mul(gk_inv, hi), re / r / r.pow(j));
            let d = bsgs(ar, gamma, hk, r);
            k += d * rj;
            rj *= r;
        }
        residues.push((k % re, re));
    }
    let (x, _) = crate::arith::crt(
        &residues
            .iter()
            .map(|&(a, m)| (BigInt::from(a), BigInt::from(m)))
            .collect::<Vec<_>>(),
    )
    .expect("coprime prime powers");
    x.to_u128().unwrap()
}

fn bsgs(ar: &ResArith, g: Res, h: Res, order: u128) -> u128 {
    let m = (order as f64).sqrt().ceil() as u128 + 1;
    let mut table = HashMap::with_capacity(m as usize);
    let mut cur = ar.one();
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = ar.mul(cur, g);
    }
    let ginv_m = ar.pow(ar.pow(g, order - 1), m);
    let mut gamma = h;
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma) {
            return (i * m + j) % order;
        }
        gamma = ar.mul(gamma, ginv_m);
    }
    panic!("discrete log does not exist");
}

/// Which part of a component a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    /// The cyclic group of order N(q) - 1.
    Cyclic,
    /// The i-th Smith generator of the 1-unit group (1 + q)/(1 + q^n).
    OneUnits(usize),
}

struct OneUnits {
    group: FinAbGroup,
    table: HashMap<Res, Vec<i64>>,
    elements: Vec<Res>,
}

/// (O_K/q^n)^* = G1 x G2 with G1 cyclic of order N(q) - 1 and G2 of order N(q)^(n-1).
pub struct Component {
    pub prime: PrimeIdeal,
    pub exp: u32,
    local: ResArith,
    residue: ResArith,
    norm_q: u128,
    g1_factors: Vec<(u128, u32)>,
    g1_gen: Res,
    g2_order: u128,
    g2: Option<OneUnits>,
    s1: u128,
    s2: u128,
}

impl Component {
    pub fn new(
        k: &QuadField,
        prime: &PrimeIdeal,
        exp: u32,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self, ResError> {
        if exp > 1 && prime.ell == 2 && prime.e > 1 {
            return Err(ResError::RamifiedTwo(exp));
        }
        let local = ResArith::new(k, &prime.ideal.pow(k, exp as u64))?;
        let residue = ResArith::new(k, &prime.ideal)?;
        let norm_q = prime.norm() as u128;
        let g1_order = norm_q - 1;
        let g2_order = norm_q.pow(exp - 1);
        let g1_factors: Vec<(u128, u32)> = if g1_order > 1 {
            factorize_u64(g1_order as u64)
                .into_iter()
                .map(|(p, e)| (p as u128, e))
                .collect()
        } else {
            Vec::new()
        };
        let full = g1_order * g2_order;
        // x^s1 projects onto G1, x^s2 onto G2
        let (s1, s2) = if g2_order == 1 {
            (1, 0)
        } else {
            let u = mod_inverse_i128(
                g2_order as i128 % g1_order.max(1) as i128,
                g1_order.max(1) as i128,
            )
            .unwrap_or(0) as u128;
            let v = mod_inverse_i128(g1_order as i128 % g2_order as i128, g2_order as i128).unwrap()
                as u128;
            ((g2_order * u) % full, (g1_order * v) % full)
        };
        let mut comp = Component {
            prime: prime.clone(),
            exp,
            local,
            residue,
            norm_q,
            g1_factors,
            g1_gen: local.one(),
            g2_order,
            g2: None,
            s1,
            s2,
        };
        comp.g1_gen = comp.find_g1_generator(rng);
        if exp > 1 {
            comp.g2 = Some(comp.enumerate_one_units()?);
        }
        Ok(comp)
    }

    fn random_unit(&self, rng: &mut ChaCha8Rng) -> Res {
        loop {
            let r = self.local.reduce(
                rng.gen_range(0..self.local.a),
                rng.gen_range(0..self.local.c),
            );
            if !self.residue.is_zero(self.residue.project(r)) {
                return r;
            }
        }
    }

    fn find_g1_generator(&self, rng: &mut ChaCha8Rng) -> Res {
        let n = self.norm_q - 1;
        if n == 1 {
            return self.local.one();
        }
        loop {
            let g = self.local.pow(self.random_unit(rng), self.g2_order);
            if self
                .g1_factors
                .iter()
                .all(|&(r, _)| !self.local.is_one(self.local.pow(g, n / r)))
            {
                return g;
            }
        }
    }

    fn enumerate_one_units(&self) -> Result<OneUnits, ResError> {
        let q = &self.residue;
        let l = &self.local;
        let size = self.g2_order as usize;
        if size > MAX_G2 {
            return Err(ClosureError::TooLarge(MAX_G2).into());
        }
        let mut closure = Closure::new(l.one(), 4 * MAX_G2);
        let (ni, nj) = (l.a / q.a, l.c / q.c);
        'outer: for j in 0..nj {
            for i in 0..ni {
                if closure.size() == size {
                    break 'outer;
                }
                if i == 0 && j == 0 {
                    continue;
                }
                let z = l.reduce(1 + i * q.a + j * q.b, j * q.c);
                closure.add(z, |u, v| l.mul(*u, *v))?;
            }
        }
        assert_eq!(closure.size(), size, "1-unit enumeration incomplete");
        let labels = (0..closure.generators().len())
            .map(|i| format!("u{}", i + 1))
            .collect();
        let group = closure.group(labels);
        let gens = closure.generators().to_vec();
        let elements = (0..group.rank())
            .map(|i| {
                let v = group.snf_generator(i);
                gens.iter().zip(&v).fold(l.one(), |acc, (g, e)| {
                    let e = e.mod_floor(&BigInt::from(self.g2_order)).to_u128().unwrap();
                    l.mul(acc, l.pow(*g, e))
                })
            })
            .collect();
        let table = closure
            .elements()
            .map(|e| (*e, closure.log(e).unwrap()))
            .collect();
        Ok(OneUnits {
            group,
            table,
            elements,
        })
    }

    pub fn order(&self) -> u128 {
        (self.norm_q - 1) * self.g2_order
    }

    pub fn g1_order(&self) -> u128 {
        self.norm_q - 1
    }

    pub fn g2_order(&self) -> u128 {
        self.g2_order
    }

    /// Generators (component-local residues) with their orders.
    pub fn generators(&self) -> Vec<(Part, Res, BigInt)> {
        let mut out = Vec::new();
        if self.norm_q > 2 {
            out.push((Part::Cyclic, self.g1_gen, BigInt::from(self.norm_q - 1)));
        }
        if let Some(g2) = &self.g2 {
            for (i, (e, d)) in g2.elements.iter().zip(g2.group.invariants()).enumerate() {
                out.push((Part::OneUnits(i), *e, d.clone()));
            }
        }
        out
    }

    /// Structure of the 1-unit group, if n > 1.
    pub fn one_unit_structure(&self) -> Option<&FinAbGroup> {
        self.g2.as_ref().map(|g| &g.group)
    }

    pub fn local(&self) -> &ResArith {
        &self.local
    }

    /// Coordinates of a local unit on `generators()`.
    pub fn log(&self, r: Res) -> Result<Vec<BigInt>, ResError> {
        if self.residue.is_zero(self.residue.project(r)) {
            return Err(ResError::NotInvertible(format!("{r:?}")));
        }
        let mut out = Vec::new();
        let x1 = self.local.pow(r, self.s1);
        if self.norm_q > 2 {
            let n = self.norm_q - 1;
            out.push(BigInt::from(dlog_cyclic(
                &self.local,
                self.g1_gen,
                x1,
                n,
                &self.g1_factors,
            )));
        }
        if let Some(g2) = &self.g2 {
            let x2 = self.local.pow(r, self.s2);
            let v = g2.table.get(&x2).expect("1-unit table is complete");
            let mut v = v.clone();
            v.resize(g2.group.generator_labels().len(), 0);
            out.extend(g2.group.coords_i64(&v));
        }
        Ok(out)
    }
}

/// Residue-ring unit group of one field for one modulus.
pub struct ResidueRing {
    field: QuadField,
    modulus: Modulus,
    global: ResArith,
    components: Vec<Component>,
    idempotents: Vec<Res>,
    gens: Vec<(usize, Part, Res, BigInt)>,
}

impl ResidueRing {
    pub fn new(k: &QuadField, modulus: &Modulus, seed: u64) -> Result<Self, ResError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let global = ResArith::new(k, &modulus.ideal(k))?;
        let mut components = Vec::new();
        for (p, e) in modulus.factors() {
            components.push(Component::new(k, p, *e, &mut rng)?);
        }
        let mut idempotents = Vec::new();
        for (i, (p, e)) in modulus.factors().iter().enumerate() {
            let own = p.ideal.pow(k, *e as u64);
            let rest = modulus
                .factors()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(Ideal::unit(), |acc, (_, (q, f))| {
                    acc.mul(k, &q.ideal.pow(k, *f as u64))
                });
            let e_i = rest
                .crt_idempotent(&own)
                .expect("distinct primes are coprime");
            idempotents.push(global.from_quad(&e_i));
        }
        let mut ring = ResidueRing {
            field: k.clone(),
            modulus: modulus.clone(),
            global,
            components,
            idempotents,
            gens: Vec::new(),
        };
        let mut gens = Vec::new();
        for (i, c) in ring.components.iter().enumerate() {
            for (part, r, ord) in c.generators() {
                gens.push((i, part, ring.lift(i, r), ord));
            }
        }
        ring.gens = gens;
        Ok(ring)
    }

    /// Global residue congruent to r modulo component i and to 1 elsewhere.
    fn lift(&self, i: usize, r: Res) -> Res {
        let g = &self.global;
        let one = g.one();
        let r_global = g.reduce(r.x, r.y);
        g.add(one, g.mul(self.idempotents[i], g.sub(r_global, one)))
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn arith(&self) -> &ResArith {
        &self.global
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn order(&self) -> BigInt {
        self.components
            .iter()
            .map(|c| BigInt::from(c.order()))
            .product()
    }

    /// Generator orders, one per generator (relations are diagonal).
    pub fn generator_orders(&self) -> Vec<BigInt> {
        self.gens.iter().map(|g| g.3.clone()).collect()
    }

    pub fn generator_labels(&self) -> Vec<String> {
        self.gens
            .iter()
            .map(|(i, part, _, _)| {
                let p = self.components[*i].prime.label();
                match part {
                    Part::Cyclic => format!("g[{p}]"),
                    Part::OneUnits(j) => format!("u{}[{p}]", j + 1),
                }
            })
            .collect()
    }

    pub fn generator_components(&self) -> Vec<usize> {
        self.gens.iter().map(|g| g.0).collect()
    }

    pub fn generator_elements(&self) -> Vec<QuadInt> {
        self.gens.iter().map(|g| self.global.to_quad(g.2)).collect()
    }

    pub fn structure(&self) -> FinAbGroup {
        FinAbGroup::from_relations(
            self.generator_labels(),
            &IntMatrix::diagonal(&self.generator_orders()),
        )
    }

    /// Coordinates of x on the generators; x must be coprime to the modulus.
    pub fn log(&self, x: &QuadInt) -> Result<Vec<BigInt>, ResError> {
        let mut out = Vec::with_capacity(self.gens.len());
        for c in &self.components {
            let r = c.local.from_quad(x);
            out.extend(
                c.log(r)
                    .map_err(|_| ResError::NotInvertible(x.to_string()))?,
            );
        }
        Ok(out)
    }

    pub fn log_res(&self, r: Res) -> Result<Vec<BigInt>, ResError> {
        self.log(&self.global.to_quad(r))
    }

    /// Order of the image of the roots of unity of K.
    pub fn unit_image_order(&self) -> u64 {
        let z = self.global.from_quad(&self.field.torsion_generator());
        let mut cur = z;
        let mut n = 1;
        while !self.global.is_one(cur) {
            cur = self.global.mul(cur, z);
            n += 1;
        }
        n
    }
}

/// [E_K : E_K(m)], the order of the image of the roots of unity in (O_K/m)^*.
pub fn unit_image_index(k: &QuadField, modulus: &Modulus) -> Result<u64, ResError> {
    if modulus.is_unit() {
        return Ok(1);
    }
    let ar = ResArith::new(k, &modulus.ideal(k))?;
    let z = ar.from_quad(&k.torsion_generator());
    let mut cur = z;
    let mut n = 1;
    while !ar.is_one(cur) {
        cur = ar.mul(cur, z);
        n += 1;
    }
    Ok(n)
}

/// Unit group component of (O_K/q^n)^*.
pub fn residue_unit_structure(
    k: &QuadField,
    q: &PrimeIdeal,
    n: u32,
    seed: u64,
) -> Result<Component, ResError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Component::new(k, q, n, &mut rng)
}

/// The finite field F_ell[x]/(g) for a monic irreducible g.
#[derive(Clone, Debug)]
pub struct FiniteField {
    ell: u64,
    modulus: PolyFp,
    order_factors: Vec<(BigUint, u32)>,
}

impl FiniteField {
    pub fn new(modulus: &PolyFp) -> Result<Self, ResError> {
        let ell = modulus.modulus();
        if !fp::is_irreducible(modulus) {
            return Err(ResError::NotIrreducible(modulus.to_string(), ell));
        }
        let modulus = modulus.monic();
        let q = BigUint::from(ell).pow(modulus.deg() as u32) - BigUint::one();
        let order_factors = crate::arith::factorize(&BigInt::from(q))
            .expect("residue field orders are factorable")
            .into_iter()
            .collect();
        Ok(FiniteField {
            ell,
            modulus,
            order_factors,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn modulus(&self) -> &PolyFp {
        &self.modulus
    }

    /// ell^f - 1.
    pub fn unit_group_order(&self) -> BigUint {
        self.order_factors.iter().map(|(p, e)| p.pow(*e)).product()
    }

    pub fn unit_group_factors(&self) -> &[(BigUint, u32)] {
        &self.order_factors
    }

    pub fn element(&self, coeffs: Vec<u64>) -> PolyFp {
        PolyFp::new(self.ell, coeffs).rem(&self.modulus)
    }

    pub fn mul(&self, a: &PolyFp, b: &PolyFp) -> PolyFp {
        a.mulmod(b, &self.modulus)
    }

    pub fn pow(&self, a: &PolyFp, e: &BigUint) -> PolyFp {
        a.powmod(e, &self.modulus)
    }

    /// Multiplicative order via the factored group order.
    pub fn element_order(&self, x: &PolyFp) -> Result<BigUint, ResError> {
        let x = x.rem(&self.modulus);
        if x.is_zero() {
            return Err(ResError::Zero);
        }
        Ok(order_from_factored(
            &x,
            &self.order_factors,
            |a, e| self.pow(a, e),
            |a| a.is_one(),
        ))
    }

    /// Exact order of the p-primary component of x.
    pub fn p_primary_order(&self, x: &PolyFp, p: u64) -> Result<BigUint, ResError> {
        let x = x.rem(&self.modulus);
        if x.is_zero() {
            return Err(ResError::Zero);
        }
        Ok(p_primary_order(
            &x,
            &self.unit_group_order(),
            p,
            |a, e| self.pow(a, e),
            |a| a.is_one(),
        ))
    }

    /// A generator of the unit group, found by seeded search.
    pub fn generator(&self, seed: u64) -> PolyFp {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.unit_group_order();
        loop {
            let x = self.element(
                (0..self.degree())
                    .map(|_| rng.gen_range(0..self.ell))
                    .collect(),
            );
            if x.is_zero() {
                continue;
            }
            if self
                .order_factors
                .iter()
                .all(|(p, _)| !self.pow(&x, &(&n / p)).is_one())
            {
                return x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::split_prime;
    use proptest::prelude::*;

    fn prime(k: &QuadField, ell: u64, idx: usize) -> PrimeIdeal {
        split_prime(k, ell).unwrap().1[idx].clone()
    }

    /// Units of O_K/I by brute force over all residues.
    fn brute_unit_count(k: &QuadField, q: &PrimeIdeal, n: u32) -> usize {
        let ideal = q.ideal.pow(k, n as u64);
        let ar = ResArith::new(k, &ideal).unwrap();
        let qa = ResArith::new(k, &q.ideal).unwrap();
        let mut count = 0;
        for x in 0..ar.a {
            for y in 0..ar.c {
                let r = ar.reduce(x, y);
                if !qa.is_zero(qa.project(r)) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn component_orders() {
        let g = QuadField::new(-1).unwrap();
        let c7 = residue_unit_structure(&g, &prime(&g, 7, 0), 1, 1).unwrap();
        assert_eq!((c7.g1_order(), c7.g2_order()), (48, 1));
        let c31 = residue_unit_structure(&g, &prime(&g, 31, 0), 2, 1).unwrap();
        assert_eq!((c31.g1_order(), c31.g2_order()), (960, 961));
        assert_eq!(brute_unit_count(&g, &prime(&g, 31, 0), 2), 960 * 961);
        let k = QuadField::new(-23).unwrap();
        let c151 = residue_unit_structure(&k, &prime(&k, 151, 0), 1, 1).unwrap();
        assert_eq!(c151.order(), 150);
    }

    #[test]
    fn ramified_two_is_rejected_for_higher_powers() {
        let g = QuadField::new(-1).unwrap();
        assert!(residue_unit_structure(&g, &prime(&g, 2, 0), 1, 0).is_ok());
        assert_eq!(
            residue_unit_structure(&g, &prime(&g, 2, 0), 2, 0).err(),
            Some(ResError::RamifiedTwo(2))
        );
    }

    #[test]
    fn brute_force_orders_small_primes() {
        for d in [-1i64, -2, -23] {
            let k = QuadField::new(d).unwrap();
            for ell in crate::arith::primes_up_to(60)
                .into_iter()
                .filter(|&l| l > 2)
            {
                for p in split_prime(&k, ell).unwrap().1 {
                    let max_n = if p.norm() > 60 {
                        1
                    } else if p.norm() > 20 {
                        2
                    } else {
                        3
                    };
                    for n in 1..=max_n {
                        let c = residue_unit_structure(&k, &p, n, 3).unwrap();
                        assert_eq!(
                            c.order() as usize,
                            brute_unit_count(&k, &p, n),
                            "d={d} ell={ell} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn unit_image_indices() {
        let g = QuadField::new(-1).unwrap();
        assert_eq!(
            unit_image_index(&g, &Modulus::parse(&g, "7").unwrap()).unwrap(),
            4
        );
        assert_eq!(unit_image_index(&g, &Modulus::unit()).unwrap(), 1);
        assert_eq!(
            unit_image_index(&g, &Modulus::parse(&g, "2.1").unwrap()).unwrap(),
            1
        );
        let k = QuadField::new(-23).unwrap();
        for m in ["3.1", "151.2", "5", "7,13.1"] {
            assert_eq!(
                unit_image_index(&k, &Modulus::parse(&k, m).unwrap()).unwrap(),
                2
            );
        }
    }

    #[test]
    fn p_primary_orders() {
        let g = QuadField::new(-1).unwrap();
        let ring = ResidueRing::new(&g, &Modulus::parse(&g, "7").unwrap(), 5).unwrap();
        let ar = *ring.arith();
        let order = BigUint::from(48u32);
        let pw = |a: &Res, e: &BigUint| ar.pow(*a, e.to_u128().unwrap());
        let is1 = |a: &Res| ar.is_one(*a);
        let gen = ar.from_quad(&ring.generator_elements()[0]);
        assert_eq!(
            p_primary_order(&gen, &order, 3, pw, is1),
            BigUint::from(3u32)
        );
        assert_eq!(
            p_primary_order(&ar.one(), &order, 3, pw, is1),
            BigUint::one()
        );
        let i = ar.from_quad(&QuadInt::new(0, 1));
        assert_eq!(p_primary_order(&i, &order, 3, pw, is1), BigUint::one());
        assert_eq!(p_primary_order(&i, &order, 2, pw, is1), BigUint::from(4u32));
    }

    #[test]
    fn finite_field_orders() {
        let f49 = FiniteField::new(&PolyFp::from_i64(7, &[1, 0, 1])).unwrap();
        let g = f49.generator(11);
        assert_eq!(f49.element_order(&g).unwrap(), BigUint::from(48u32));
        assert_eq!(
            f49.element_order(&f49.element(vec![1])).unwrap(),
            BigUint::one()
        );
        let g2 = f49.mul(&g, &g);
        assert_eq!(f49.element_order(&g2).unwrap(), BigUint::from(24u32));
        assert_eq!(
            f49.element_order(&f49.element(vec![0])),
            Err(ResError::Zero)
        );
        assert!(FiniteField::new(&PolyFp::from_i64(5, &[1, 0, 1])).is_err());
    }

    fn moduli() -> Vec<(i64, &'static str)> {
        vec![
            (-1, "7,31"),
            (-1, "5.1^2,3"),
            (-23, "151.1"),
            (-23, "2.1,3.2^2"),
            (-3, "7.1,2"),
            (-2, "3.1^3"),
            (-1, "2.1,13.2"),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn log_is_a_homomorphism(idx in 0usize..7, x1 in -500i64..500, y1 in -500i64..500,
                                 x2 in -500i64..500, y2 in -500i64..500) {
            let (d, m) = moduli()[idx];
            let k = QuadField::new(d).unwrap();
            let modulus = Modulus::parse(&k, m).unwrap();
            let ring = ResidueRing::new(&k, &modulus, 9).unwrap();
            let a = QuadInt::new(x1, y1);
            let b = QuadInt::new(x2, y2);
            let (Ok(la), Ok(lb)) = (ring.log(&a), ring.log(&b)) else {
                return Ok(());
            };
            let lab = ring.log(&k.mul(&a, &b)).unwrap();
            let orders = ring.generator_orders();
            for i in 0..orders.len() {
                prop_assert_eq!((&la[i] + &lb[i]).mod_floor(&orders[i]), lab[i].mod_floor(&orders[i]));
            }
            // exponentiating the generators by the log recovers the element
            let ar = ring.arith();
            let rebuilt = ring.generator_elements().iter().zip(&la).fold(ar.one(), |acc, (g, e)| {
                ar.mul(acc, ar.pow(ar.from_quad(g), e.to_u128().unwrap()))
            });
            prop_assert_eq!(rebuilt, ar.from_quad(&a));
            prop_assert_eq!(ring.structure().order().unwrap(), ring.order());
        }
    }
}
