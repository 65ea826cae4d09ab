//! Small finite groups realized by an explicit multiplication law, the
//! modular p-groups M(p^n), and invariants used by the structure theorems.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::abelian::GroupShape;
use crate::arith::{factorize_u64, valuation_u64};
use crate::quadfield::{ClassGroup, Modulus, PrimeIdeal, QuadField};
use crate::rayclass::{RayClassGroup, RayError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PGroupError {
    #[error("modular group needs n >= 3, got {0}")]
    ExponentTooSmall(u32),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invariants {0:?} do not form a divisor chain n_(i+1) | n_i")]
    InvalidChain(Vec<String>),
    #[error("ramification set contains a prime above p = {0}")]
    WildPlace(u64),
    #[error(transparent)]
    Ray(#[from] RayError),
}

pub type Elem = (u64, u64, u64);
type Law = Box<dyn Fn(&Elem, &Elem) -> Elem + Send + Sync>;

/// A finite group given by its element list and multiplication law.
pub struct FiniteGroup {
    name: String,
    elements: Vec<Elem>,
    index: HashMap<Elem, usize>,
    identity: usize,
    law: Law,
}

impl FiniteGroup {
    /// Enumerate the group generated by `gens` under `law`.
    pub fn generated(name: &str, identity: Elem, gens: &[Elem], law: Law) -> Self {
        let mut elements = vec![identity];
        let mut index = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = law(&x, g);
                if !index.contains_key(&y) {
                    index.insert(y, elements.len());
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        FiniteGroup {
            name: name.to_string(),
            elements,
            index,
            identity: 0,
            law,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::generated(
            &format!("Z/{n}"),
            (0, 0, 0),
            &[(1 % n, 0, 0)],
            Box::new(move |x, y| ((x.0 + y.0) % n, 0, 0)),
        )
    }

    /// Direct product of cyclic groups of orders m and n.
    pub fn abelian2(m: u64, n: u64) -> Self {
        Self::generated(
            &format!("Z/{m} x Z/{n}"),
            (0, 0, 0),
            &[(1 % m, 0, 0), (0, 1 % n, 0)],
            Box::new(move |x, y| ((x.0 + y.0) % m, (x.1 + y.1) % n, 0)),
        )
    }

    /// Upper unitriangular 3x3 matrices over F_p.
    pub fn heisenberg(p: u64) -> Self {
        Self::generated(
            &format!("Heis(F_{p})"),
            (0, 0, 0),
            &[(1, 0, 0), (0, 1, 0)],
            Box::new(move |x, y| {
                (
                    (x.0 + y.0) % p,
                    (x.1 + y.1) % p,
                    (x.2 + y.2 + x.0 * y.1) % p,
                )
            }),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.index[&(self.law)(&self.elements[x], &self.elements[y])]
    }

    pub fn pow(&self, x: usize, e: u64) -> usize {
        let mut r = self.identity;
        for _ in 0..e {
            r = self.mul(r, x);
        }
        r
    }

    pub fn inv(&self, x: usize) -> usize {
        let mut prev = self.identity;
        let mut cur = x;
        while cur != self.identity {
            prev = cur;
            cur = self.mul(cur, x);
        }
        prev
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut cur = x;
        let mut k = 1;
        while cur != self.identity {
            cur = self.mul(cur, x);
            k += 1;
        }
        k
    }

    /// [x, y] = x^-1 y^-1 x y.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        let a = self.mul(self.inv(x), self.inv(y));
        self.mul(self.mul(a, x), y)
    }

    /// Subgroup generated by a set of elements, as a sorted index list.
    pub fn subgroup(&self, gens: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let gens: Vec<usize> = gens
            .into_iter()
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        let mut seen = HashSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut v: Vec<usize> = seen.into_iter().collect();
        v.sort();
        v
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order())
            .map(|x| self.element_order(x))
            .fold(1, |a, b| a.lcm(&b))
    }

    pub fn center(&self) -> Vec<usize> {
        let n = self.order();
        (0..n)
            .filter(|&z| (0..n).all(|x| self.mul(z, x) == self.mul(x, z)))
            .collect()
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let n = self.order();
        let comms: HashSet<usize> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| self.commutator(x, y))
            .collect();
        self.subgroup(comms)
    }

    /// Subgroup generated by all k-th powers.
    pub fn power_subgroup(&self, k: u64) -> Vec<usize> {
        let powers: HashSet<usize> = (0..self.order()).map(|x| self.pow(x, k)).collect();
        self.subgroup(powers)
    }

    pub fn is_abelian(&self) -> bool {
        self.center().len() == self.order()
    }

    /// Invariant factors of G/G'.
    pub fn abelianization(&self) -> GroupShape {
        let derived: HashSet<usize> = self.derived_subgroup().into_iter().collect();
        let n = self.order();
        // coset representatives and the quotient law
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &d in &derived {
                coset_of[self.mul(x, d)] = c;
            }
        }
        let q = reps.len() as u64;
        // |{x in G/G' : x^(l^k) = 1}| determines the l-primary invariants
        let mut invariants: Vec<u64> = Vec::new();
        for (l, e) in factorize_u64(q) {
            let mut counts = vec![0u32];
            for k in 1..=e {
                let lk = l.pow(k);
                let c = reps
                    .iter()
                    .filter(|&&x| derived.contains(&self.pow(x, lk)))
                    .count() as u64;
                counts.push(valuation_u64(c, l));
            }
            // number of invariants with exponent >= k is counts[k] - counts[k-1]
            let mut at_least: Vec<u32> = (1..=e as usize)
                .map(|k| counts[k] - counts[k - 1])
                .collect();
            at_least.push(0);
            for k in 1..=e as usize {
                for _ in 0..(at_least[k - 1] - at_least[k]) {
                    invariants.push(l.pow(k as u32));
                }
            }
        }
        GroupShape::normalized(&invariants)
    }

    /// Whether G/G^p (odd p) or G/G^4 (p = 2) is abelian.
    pub fn is_powerful(&self, p: u64) -> bool {
        let k = if p == 2 { 4 } else { p };
        let power: HashSet<usize> = self.power_subgroup(k).into_iter().collect();
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| power.contains(&self.commutator(x, y))))
    }

    pub fn invariants(&self) -> GroupInvariants {
        GroupInvariants {
            order: self.order(),
            exponent: self.exponent(),
            center_order: self.center().len(),
            derived_order: self.derived_subgroup().len(),
            abelianization: self.abelianization(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub order: usize,
    pub exponent: u64,
    pub center_order: usize,
    pub derived_order: usize,
    pub abelianization: GroupShape,
}

/// <a, b | a^(p^(n-1)), b^p, b^-1 a b = a^(1 + p^(n-2))>, of order p^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularGroup {
    pub p: u64,
    pub n: u32,
    pub a_order: u64,
    pub b_order: u64,
    /// b^-1 a b = a^conjugation_exponent.
    pub conjugation_exponent: u64,
    /// [a, b] = a^commutator_exponent.
    pub commutator_exponent: u64,
}

impl ModularGroup {
    pub fn new(p: u64, n: u32) -> Result<Self, PGroupError> {
        if p < 3 || !crate::arith::is_prime_u64(p) {
            return Err(PGroupError::NotOddPrime(p));
        }
        if n < 3 {
            return Err(PGroupError::ExponentTooSmall(n));
        }
        Ok(ModularGroup {
            p,
            n,
            a_order: p.pow(n - 1),
            b_order: p,
            conjugation_exponent: 1 + p.pow(n - 2),
            commutator_exponent: p.pow(n - 2),
        })
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// Pairs (i mod p^(n-1), j mod p) with (i1, j1)(i2, j2) = (i1 + i2 r^j1, j1 + j2).
    pub fn realization(&self) -> FiniteGroup {
        let (m, p, r) = (self.a_order, self.p, self.conjugation_exponent);
        let rpow: Vec<u64> = (0..p).map(|j| crate::arith::pow_mod_u64(r, j, m)).collect();
        FiniteGroup::generated(
            &self.to_string(),
            (0, 0, 0),
            &[self.a(), self.b()],
            Box::new(move |x, y| ((x.0 + y.0 * rpow[x.1 as usize]) % m, (x.1 + y.1) % p, 0)),
        )
    }

    pub fn a(&self) -> Elem {
        (1, 0, 0)
    }

    /// With this law (0, 1)^-1 (1, 0) (0, 1) = a^(r^-1), so b is (0, p - 1).
    pub fn b(&self) -> Elem {
        (0, self.p - 1, 0)
    }

    /// The presentation with the conjugation relation, e.g.
    /// `⟨a,b | a^9, b^3, b^-1ab = a^4⟩`.
    pub fn presentation(&self) -> String {
        format!(
            "⟨a,b | a^{}, b^{}, b^-1ab = a^{}⟩",
            self.a_order, self.b_order, self.conjugation_exponent
        )
    }

    /// Check the three defining relations in the realization.
    pub fn verify(&self) -> bool {
        let g = self.realization();
        let a = g.index[&self.a()];
        let b = g.index[&self.b()];
        let lhs = g.mul(g.mul(g.inv(b), a), b);
        g.order() as u64 == self.order()
            && g.element_order(a) == self.a_order
            && g.element_order(b) == self.b_order
            && lhs == g.pow(a, self.conjugation_exponent)
            && g.commutator(a, b) == g.pow(a, self.commutator_exponent)
    }
}

impl fmt::Display for ModularGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "⟨a,b | a^{}, b^{}, [a,b]=a^{}⟩",
            self.a_order, self.b_order, self.commutator_exponent
        )
    }
}

pub fn modular_group(p: u64, n: u32) -> Result<ModularGroup, PGroupError> {
    ModularGroup::new(p, n)
}

/// M(G) for an abelian G with invariants n_1, n_2, ... (n_(i+1) | n_i):
/// Z/n_2 + (Z/n_3)^2 + ... + (Z/n_k)^(k-1).
pub fn schur_multiplier_abelian(chain: &[BigInt]) -> Result<GroupShape, PGroupError> {
    let chain: Vec<BigInt> = chain.iter().filter(|d| !d.is_one()).cloned().collect();
    if chain.iter().any(|d| d <= &BigInt::zero())
        || chain.windows(2).any(|w| !(&w[0] % &w[1]).is_zero())
    {
        return Err(PGroupError::InvalidChain(
            chain.iter().map(|d| d.to_string()).collect(),
        ));
    }
    let mut out = Vec::new();
    for (i, d) in chain.iter().enumerate().skip(1) {
        for _ in 0..i {
            out.push(d.clone());
        }
    }
    Ok(GroupShape::normalized(&out))
}

/// d^2 / 4 >= r.
pub fn golod_shafarevich_infinite(d: u64, r: u64) -> bool {
    d * d >= 4 * r
}

/// Generator rank of the maximal pro-p extension unramified outside S.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorRank {
    /// p-rank of Cl_K(prod S).
    pub exact: usize,
    /// sum [p | N q - 1] - delta(K) + rank_p Cl_K + rank_p(mu_K / p).
    pub bound: usize,
}

pub fn generator_rank(
    k: &QuadField,
    s: &[PrimeIdeal],
    p: u64,
) -> Result<GeneratorRank, PGroupError> {
    if s.iter().any(|q| q.ell == p) {
        return Err(PGroupError::WildPlace(p));
    }
    let cl = ClassGroup::compute(k);
    let m = Modulus::new(s.iter().map(|q| (q.clone(), 1)).collect());
    let ray = RayClassGroup::with_class_group(k, &m, cl)?;
    let exact = ray.group().p_rank(p);
    // delta(K) = 1 iff K contains the p-th roots of unity; then mu_K / p has rank 1
    let delta = (k.unit_torsion() as u64 % p == 0) as usize;
    let mu_rank = delta;
    let tame: usize = s.iter().filter(|q| (q.norm() - 1) % p == 0).count();
    let bound = tame + ray.class_group().group().p_rank(p) + mu_rank - delta;
    assert!(
        exact <= bound,
        "generator rank {exact} exceeds bound {bound}"
    );
    Ok(GeneratorRank { exact, bound })
}
