//! Finite abelian groups given by generators and relations, and a generic
//! closure routine that finds the structure of a subgroup of a black-box
//! abelian group by enumeration.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{smith_normal_form, valuation, IntMatrix};

/// Z^n / (row span of a relation matrix), kept in Smith form.
#[derive(Clone, Debug)]
pub struct FinAbGroup {
    invariants: Vec<BigInt>,
    labels: Vec<String>,
    to_snf: IntMatrix,
    snf_gens: IntMatrix,
}

impl FinAbGroup {
    /// `relations` has one row per relation and one column per generator.
    pub fn from_relations(labels: Vec<String>, relations: &IntMatrix) -> Self {
        let n = labels.len();
        let rel = if relations.rows() == 0 {
            IntMatrix::zeros(0, n)
        } else {
            assert_eq!(relations.cols(), n, "relation width != generator count");
            relations.clone()
        };
        let snf = smith_normal_form(&rel);
        let mut diag = snf.invariants.clone();
        diag.resize(n, BigInt::zero());
        let keep: Vec<usize> = (0..n).filter(|&i| !diag[i].is_one()).collect();
        let mut to_snf = IntMatrix::zeros(n, keep.len());
        let mut snf_gens = IntMatrix::zeros(keep.len(), n);
        for (k, &i) in keep.iter().enumerate() {
            for j in 0..n {
                to_snf[(j, k)] = snf.right[(j, i)].clone();
                snf_gens[(k, j)] = snf.right_inverse[(i, j)].clone();
            }
        }
        FinAbGroup {
            invariants: keep.iter().map(|&i| diag[i].clone()).collect(),
            labels,
            to_snf,
            snf_gens,
        }
    }

    /// Abstract group with the given cyclic factors (any order, 1s allowed).
    pub fn from_cyclic_orders<T: Clone + Into<BigInt>>(orders: &[T]) -> Self {
        let labels = (0..orders.len()).map(|i| format!("g{}", i + 1)).collect();
        FinAbGroup::from_relations(labels, &IntMatrix::diagonal(orders))
    }

    pub fn trivial() -> Self {
        FinAbGroup::from_relations(Vec::new(), &IntMatrix::zeros(0, 0))
    }

    /// Invariant factors d_1 | d_2 | ... | d_k, all != 1 (0 means Z).
    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn generator_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_finite(&self) -> bool {
        self.invariants.iter().all(|d| !d.is_zero())
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariants.iter().fold(BigInt::one(), |a, d| a * d))
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Smith coordinates of the element with the given generator exponents.
    pub fn coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        let raw = self.to_snf.vec_mul(v);
        raw.into_iter()
            .zip(&self.invariants)
            .map(|(x, d)| if d.is_zero() { x } else { x.mod_floor(d) })
            .collect()
    }

    pub fn coords_i64(&self, v: &[i64]) -> Vec<BigInt> {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.coords(&big)
    }

    /// Exponent vector (over the original generators) of the i-th Smith generator.
    pub fn snf_generator(&self, i: usize) -> Vec<BigInt> {
        self.snf_gens.row(i).to_vec()
    }

    pub fn element_order(&self, coords: &[BigInt]) -> Option<BigInt> {
        let mut acc = BigInt::one();
        for (x, d) in coords.iter().zip(&self.invariants) {
            if d.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let o = d / x.gcd(d);
            acc = acc.lcm(&o);
        }
        Some(acc)
    }

    /// Invariants of the p-primary part (ascending, each a power of p).
    pub fn p_part(&self, p: u64) -> Vec<BigInt> {
        let pb = BigInt::from(p);
        self.invariants
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| pb.pow(valuation(d, p)))
            .filter(|q| !q.is_one())
            .collect()
    }

    pub fn p_rank(&self, p: u64) -> usize {
        let pb = BigInt::from(p);
        self.invariants
            .iter()
            .filter(|d| d.is_zero() || d.is_multiple_of(&pb))
            .count()
    }

    pub fn ord_p(&self, p: u64) -> Option<u32> {
        self.order().map(|o| valuation(&o, p))
    }

    /// Coordinates of the image of `coords` in G/pG over F_p, one entry per
    /// invariant divisible by p.
    pub fn mod_p_image(&self, coords: &[BigInt], p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        coords
            .iter()
            .zip(&self.invariants)
            .filter(|(_, d)| d.is_zero() || d.is_multiple_of(&pb))
            .map(|(x, _)| x.mod_floor(&pb).to_u64().unwrap())
            .collect()
    }

    pub fn shape(&self) -> GroupShape {
        GroupShape(self.invariants.clone())
    }
}

/// Invariant factor list with a compact textual form, e.g. `Z/3 x Z/75`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupShape(pub Vec<BigInt>);

impl Serialize for GroupShape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|d| d.to_string()))
    }
}

impl GroupShape {
    pub fn from_u64(v: &[u64]) -> Self {
        GroupShape(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Normalize an arbitrary list of cyclic orders to invariant factors.
    pub fn normalized<T: Clone + Into<BigInt>>(orders: &[T]) -> Self {
        FinAbGroup::from_cyclic_orders(orders).shape()
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z/{d}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("subgroup enumeration exceeded {0} elements")]
    TooLarge(usize),
}

/// Enumerates the subgroup generated by elements added one at a time and
/// records the relations among them.
pub struct Closure<E> {
    table: HashMap<E, Vec<i64>>,
    gens: Vec<E>,
    relations: Vec<Vec<i64>>,
    max_size: usize,
}

impl<E: Clone + Eq + Hash> Closure<E> {
    pub fn new(identity: E, max_size: usize) -> Self {
        let mut table = HashMap::new();
        table.insert(identity, Vec::new());
        Closure {
            table,
            gens: Vec::new(),
            relations: Vec::new(),
            max_size,
        }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn generators(&self) -> &[E] {
        &self.gens
    }

    /// Exponent vector of `e` over the generators added so far.
    pub fn log(&self, e: &E) -> Option<Vec<i64>> {
        self.table.get(e).map(|v| {
            let mut v = v.clone();
            v.resize(self.gens.len(), 0);
            v
        })
    }

    /// Adds `g`; returns false if it was already in the subgroup.
    pub fn add(&mut self, g: E, mul: impl Fn(&E, &E) -> E) -> Result<bool, ClosureError> {
        if self.table.contains_key(&g) {
            return Ok(false);
        }
        let j = self.gens.len();
        let mut powers = vec![g.clone()];
        loop {
            let next = mul(powers.last().unwrap(), &g);
            if let Some(v) = self.table.get(&next) {
                let k = powers.len() as i64 + 1;
                let mut rel: Vec<i64> = v.iter().map(|x| -x).collect();
                rel.resize(j + 1, 0);
                rel[j] += k;
                self.relations.push(rel);
                break;
            }
            powers.push(next);
            if self.table.len() * (powers.len() + 1) > self.max_size {
                return Err(ClosureError::TooLarge(self.max_size));
            }
        }
        let old: Vec<(E, Vec<i64>)> = self
            .table
            .iter()
            .map(|(e, v)| (e.clone(), v.clone()))
            .collect();
        for (i, gi) in powers.iter().enumerate() {
            for (h, v) in &old {
                let mut w = v.clone();
                w.resize(j + 1, 0);
                w[j] = i as i64 + 1;
                self.table.insert(mul(gi, h), w);
            }
        }
        self.gens.push(g);
        Ok(true)
    }

    /// Structure of the enumerated subgroup.
    pub fn group(&self, labels: Vec<String>) -> FinAbGroup {
        let n = self.gens.len();
        assert_eq!(labels.len(), n);
        let mut m = IntMatrix::zeros(0, n);
        for r in &self.relations {
            let mut row: Vec<BigInt> = r.iter().map(|&x| BigInt::from(x)).collect();
            row.resize(n, BigInt::zero());
            m.push_row(row);
        }
        FinAbGroup::from_relations(labels, &m)
    }

    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.table.keys()
    }
}

/// Order of a p-power invariant as an exponent; panics if not a power of p.
pub fn p_exponent(q: &BigInt, p: u64) -> u32 {
    let v = valuation(q, p);
    assert_eq!(BigInt::from(p).pow(v), q.abs(), "{q} is not a power of {p}");
    v
}
