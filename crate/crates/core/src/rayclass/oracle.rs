//! Brute-force ray class groups: classes of small primes modulo the
//! principal ideals (alpha) with alpha = 1 mod m, found by enumeration.
//! Shares no code with the extension-based presentation beyond ideal
//! arithmetic and the class number.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::ToPrimitive;
use thiserror::Error;

use super::ray_class_number_with;
use crate::abelian::FinAbGroup;
use crate::arith::{add_row_mod_d, primes_up_to, IntMatrix};
use crate::par::{self, Execution};
use crate::quadfield::{split_prime, Modulus, PrimeIdeal, QuadField, SplitType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("relations up to norm {bound} give a group of order {found}, expected {expected}; raise the relation bound")]
    RelationBoundTooSmall {
        bound: u128,
        found: BigInt,
        expected: BigInt,
    },
    #[error("primes of norm <= {norm_bound} generate a subgroup of order {found} < {expected}; raise the factor base bound")]
    FactorBaseTooSmall {
        norm_bound: u64,
        found: BigInt,
        expected: BigInt,
    },
    #[error("modulus norm out of range for the oracle")]
    TooLarge,
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Factor base: primes coprime to m with norm at most this.
    pub norm_bound: u64,
    /// Initial relation bound on N(alpha); defaults to N(m)^2 |disc|.
    pub relation_bound: Option<u128>,
    /// The relation bound is doubled at most this many times.
    pub doublings: u32,
    pub exec: Execution,
}

impl OracleConfig {
    pub fn new(norm_bound: u64) -> Self {
        OracleConfig {
            norm_bound,
            relation_bound: None,
            doublings: 8,
            exec: Execution::default(),
        }
    }
}

struct FbPrime {
    ell: u64,
    kind: SplitType,
    b: i128,
}

pub fn oracle_ray_class(
    k: &QuadField,
    m: &Modulus,
    norm_bound: u64,
) -> Result<FinAbGroup, OracleError> {
    oracle_ray_class_with(k, m, &OracleConfig::new(norm_bound))
}

pub fn oracle_ray_class_with(
    k: &QuadField,
    m: &Modulus,
    cfg: &OracleConfig,
) -> Result<FinAbGroup, OracleError> {
    let h = crate::quadfield::reduced_forms(k.discriminant()).len() as u64;
    let expected = ray_class_number_with(k, m, h);

    let mut fb: Vec<PrimeIdeal> = Vec::new();
    for ell in primes_up_to(cfg.norm_bound) {
        let (_, ps) = split_prime(k, ell).expect("rational prime");
        fb.extend(
            ps.into_iter()
                .filter(|p| p.norm() <= cfg.norm_bound && !m.divides_prime(p)),
        );
    }
    let info: Vec<FbPrime> = fb
        .iter()
        .map(|p| FbPrime {
            ell: p.ell,
            kind: match (p.e, p.f) {
                (2, _) => SplitType::Ramified,
                (_, 2) => SplitType::Inert,
                _ => SplitType::Split,
            },
            b: p.ideal.b().to_i128().unwrap(),
        })
        .collect();
    let n = fb.len();
    let labels: Vec<String> = fb.iter().map(|p| format!("P[{}]", p.label())).collect();

    let mi = m.ideal(k);
    let (a, b, c) = (
        mi.a().to_i128().ok_or(OracleError::TooLarge)?,
        mi.b().to_i128().ok_or(OracleError::TooLarge)?,
        mi.c().to_i128().ok_or(OracleError::TooLarge)?,
    );
    let disc = k.discriminant().unsigned_abs() as u128;
    let norm_m = (a * c) as u128;
    let mut bound = cfg
        .relation_bound
        .unwrap_or((norm_m * norm_m * disc).max(64));
    let mut lower = 0u128;
    let mut h_mat = IntMatrix::diagonal(&vec![expected.clone(); n]);
    let t = k.trace_omega() as i128;
    let nw = k.norm_omega() as i128;

    for round in 0..=cfg.doublings {
        // alpha = (1 + u a + v b) + v c w, lower < N(alpha) <= bound
        let vmax = ((4 * bound / disc).sqrt() as i128) / c + 1;
        let vs: Vec<i128> = (-vmax..=vmax).collect();
        let batches = par::map(cfg.exec, &vs, |&v| {
            let y = v * c;
            let mut rels = Vec::new();
            let ry = (disc as i128) * y * y;
            if ry > 4 * bound as i128 {
                return rels;
            }
            // 4N = (2x + T y)^2 + |D| y^2
            let r = ((4 * bound as i128 - ry) as u128).sqrt() as i128 + 1;
            let xlo = Integer::div_floor(&(-t * y - r), &2);
            let xhi = Integer::div_ceil(&(-t * y + r), &2);
            let ulo = Integer::div_floor(&(xlo - 1 - v * b), &a);
            let uhi = Integer::div_ceil(&(xhi - 1 - v * b), &a);
            for u in ulo..=uhi {
                let x = 1 + u * a + v * b;
                let nrm = x * x + t * x * y + nw * y * y;
                if nrm <= lower as i128 || nrm > bound as i128 || nrm == 0 {
                    continue;
                }
                if let Some(rel) = factor_over(&info, x, y, nrm as u128) {
                    rels.push(rel);
                }
            }
            rels
        });
        for rel in batches.into_iter().flatten() {
            let row: Vec<BigInt> = rel.into_iter().map(BigInt::from).collect();
            add_row_mod_d(&mut h_mat, &row, &expected);
        }
        let index: BigInt = (0..n).map(|i| h_mat[(i, i)].clone()).product();
        if index == expected {
            return Ok(FinAbGroup::from_relations(labels, &h_mat));
        }
        if index < expected {
            return Err(OracleError::FactorBaseTooSmall {
                norm_bound: cfg.norm_bound,
                found: index,
                expected,
            });
        }
        if round == cfg.doublings {
            return Err(OracleError::RelationBoundTooSmall {
                bound,
                found: index,
                expected,
            });
        }
        lower = bound;
        bound *= 2;
    }
    unreachable!()
}

/// Exponent vector of (x + y w) over the factor base, if it is smooth.
fn factor_over(fb: &[FbPrime], x: i128, y: i128, mut nrm: u128) -> Option<Vec<i64>> {
    let mut rel = vec![0i64; fb.len()];
    let mut i = 0;
    while i < fb.len() {
        let ell = fb[i].ell;
        let mut j = i;
        while j < fb.len() && fb[j].ell == ell {
            j += 1;
        }
        let l = ell as u128;
        let mut cnt = 0i64;
        while nrm % l == 0 {
            nrm /= l;
            cnt += 1;
        }
        if cnt > 0 {
            match fb[i].kind {
                SplitType::Inert => rel[i] = cnt / 2,
                SplitType::Ramified => rel[i] = cnt,
                SplitType::Split => {
                    let li = ell as i128;
                    let (mut xs, mut ys, mut g) = (x, y, 0i64);
                    while xs % li == 0 && ys % li == 0 {
                        xs /= li;
                        ys /= li;
                        g += 1;
                    }
                    let rest = cnt - 2 * g;
                    for p in i..j {
                        rel[p] = g;
                        if rest > 0 && (xs - fb[p].b * ys).rem_euclid(li) == 0 {
                            rel[p] += rest;
                        }
                    }
                    // the remaining valuation sits at a prime dividing m
                    if rest > 0 && rel[i..j].iter().sum::<i64>() != cnt {
                        return None;
                    }
                }
            }
        }
        i = j;
    }
    (nrm == 1).then_some(rel)
}

/// Oracle run for one instance, doubling the factor base bound until the
/// primes generate the whole group.
pub fn oracle_grid_instance(
    k: &QuadField,
    m: &Modulus,
    exec: Execution,
) -> Result<(FinAbGroup, u64), OracleError> {
    let mut norm_bound = 32u64;
    loop {
        let mut cfg = OracleConfig::new(norm_bound);
        cfg.exec = exec;
        match oracle_ray_class_with(k, m, &cfg) {
            Err(OracleError::FactorBaseTooSmall { .. }) if norm_bound < 1 << 14 => norm_bound *= 2,
            other => return other.map(|g| (g, norm_bound)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupShape;
    use crate::rayclass::ray_class_structure;

    #[test]
    fn small_examples() {
        let k5 = QuadField::new(-5).unwrap();
        let g = oracle_ray_class(&k5, &Modulus::unit(), 50).unwrap();
        assert_eq!(g.shape().to_string(), "Z/2");
        let gi = QuadField::new(-1).unwrap();
        let g7 = oracle_ray_class(&gi, &Modulus::parse(&gi, "7").unwrap(), 100).unwrap();
        assert_eq!(g7.shape(), GroupShape::from_u64(&[12]));
    }

    #[test]
    fn reports_a_small_factor_base() {
        let gi = QuadField::new(-1).unwrap();
        let r = oracle_ray_class(&gi, &Modulus::parse(&gi, "7,31").unwrap(), 4);
        assert!(
            matches!(r, Err(OracleError::FactorBaseTooSmall { .. })),
            "{r:?}"
        );
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let k = QuadField::new(-23).unwrap();
        let m = Modulus::parse(&k, "13.1,3.2").unwrap();
        let a = oracle_grid_instance(&k, &m, Execution::Sequential).unwrap();
        let b = oracle_grid_instance(&k, &m, Execution::Parallel).unwrap();
        assert_eq!(a.0.invariants(), b.0.invariants());
        assert_eq!(
            a.0.shape(),
            ray_class_structure(&k, &m).unwrap().group().shape()
        );
    }
}
