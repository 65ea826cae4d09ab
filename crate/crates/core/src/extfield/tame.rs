use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{dedekind_maximal, poly_factor_mod, ExtError, NumberFieldProfile};
use crate::abelian::FinAbGroup;
use crate::arith::{mod_inverse, valuation, IntMatrix};
use crate::poly::{PolyFp, PolyZ};
use crate::resring::FiniteField;

/// ord_p(ell^f - 1).
pub fn ord_p_pow_minus_one(ell: u64, f: u32, p: u64) -> u32 {
    let v = BigInt::from(ell).pow(f) - 1;
    valuation(&v, p)
}

/// A prime of F selected by (ell, f, e); repeated triples select distinct
/// primes above ell in the order of the factorization mod ell. `nth` skips
/// that many of the remaining matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResiduePrime {
    pub ell: u64,
    pub f: u32,
    pub e: u32,
    pub nth: u32,
}

impl ResiduePrime {
    pub fn new(ell: u64, f: u32, e: u32) -> Self {
        ResiduePrime { ell, f, e, nth: 0 }
    }
}

/// Number of primes of the field defined by f above ell with the given
/// residue degree and ramification index.
pub fn count_primes_of_type(f: &PolyZ, ell: u64, rf: u32, re: u32) -> Result<usize, ExtError> {
    Ok(poly_factor_mod(f, ell)?
        .iter()
        .filter(|(g, e)| g.deg() as u32 == rf && *e == re)
        .count())
}

/// p-part of |Cl_F(m)| for m a squarefree product of primes coprime to p,
/// split into its ingredients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameRayPart {
    pub ord_p: u32,
    pub class_number_part: u32,
    /// ord_p |(O/Q_i)^*| per prime.
    pub residue_parts: Vec<u32>,
    /// ord_p [E_F : E_F(m)].
    pub unit_index_part: u32,
    /// Invariants of the p-part of Cl_F(m), known when p does not divide h_F.
    pub structure: Option<Vec<BigInt>>,
}

fn reduce_rational(c: &BigRational, ell: u64) -> Option<u64> {
    let l = BigInt::from(ell);
    let inv = mod_inverse(&c.denom().mod_floor(&l), &l).ok()?;
    (c.numer() * inv).mod_floor(&l).to_u64()
}

/// Image of a power-basis element in F_ell[x]/(g).
fn residue_image(coords: &[BigRational], field: &FiniteField) -> Option<PolyFp> {
    let ell = field.characteristic();
    let c: Option<Vec<u64>> = coords.iter().map(|c| reduce_rational(c, ell)).collect();
    Some(field.element(c?))
}

pub fn tame_ray_p_part(
    profile: &NumberFieldProfile,
    primes: &[ResiduePrime],
    p: u64,
) -> Result<TameRayPart, ExtError> {
    profile.validate()?;
    let missing = |what: &str| ExtError::MissingUnitData {
        label: profile.label.clone(),
        what: what.to_string(),
    };
    if profile.fundamental_units.len() != profile.unit_rank {
        return Err(missing("fundamental units"));
    }
    let mut units: Vec<&Vec<BigRational>> = profile.fundamental_units.iter().collect();
    if profile.torsion_order % p == 0 {
        units.push(
            profile
                .torsion_generator
                .as_ref()
                .ok_or_else(|| missing("torsion generator"))?,
        );
    }

    let mut fields = Vec::new();
    let mut used: Vec<(u64, PolyFp)> = Vec::new();
    for rp in primes {
        if rp.ell == p {
            return Err(ExtError::NotTame(p));
        }
        let no_data = |why: &str| ExtError::MissingResidueData {
            ell: rp.ell,
            f: rp.f,
            e: rp.e,
            why: why.to_string(),
        };
        if !profile.defining.is_monic() || !dedekind_maximal(&profile.defining, rp.ell) {
            return Err(no_data("the power basis is not maximal at this prime"));
        }
        let g = poly_factor_mod(&profile.defining, rp.ell)?
            .into_iter()
            .filter(|(g, e)| {
                g.deg() as u32 == rp.f && *e == rp.e && !used.contains(&(rp.ell, g.clone()))
            })
            .nth(rp.nth as usize)
            .map(|(g, _)| g)
            .ok_or_else(|| no_data("no such prime above ell"))?;
        used.push((rp.ell, g.clone()));
        fields.push(FiniteField::new(&g).expect("irreducible factor"));
    }

    let class_number_part = valuation(&profile.class_number, p);
    let residue_parts: Vec<u32> = primes
        .iter()
        .map(|rp| ord_p_pow_minus_one(rp.ell, rp.f, p))
        .collect();
    let total: u32 = residue_parts.iter().sum();

    // exponent vectors of the unit images in the cyclic p-parts
    let s = fields.len();
    let mut rel = IntMatrix::zeros(0, s);
    for (i, &k) in residue_parts.iter().enumerate() {
        let mut row = vec![BigInt::zero(); s];
        row[i] = BigInt::from(p).pow(k);
        rel.push_row(row);
    }
    for u in &units {
        let mut row = Vec::with_capacity(s);
        for (field, &k) in fields.iter().zip(&residue_parts) {
            let x = residue_image(u, field).ok_or_else(|| ExtError::MissingResidueData {
                ell: field.characteristic(),
                f: field.degree() as u32,
                e: 0,
                why: "unit coordinates have a denominator divisible by ell".into(),
            })?;
            row.push(BigInt::from(p_part_log(field, &x, p, k)));
        }
        rel.push_row(row);
    }
    let labels = (0..s).map(|i| format!("Q{}", i + 1)).collect();
    let coker = FinAbGroup::from_relations(labels, &rel);
    let coker_ord = valuation(&coker.order().expect("finite"), p);
    let structure = (class_number_part == 0).then(|| {
        coker
            .invariants()
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    });
    Ok(TameRayPart {
        ord_p: class_number_part + coker_ord,
        class_number_part,
        residue_parts,
        unit_index_part: total - coker_ord,
        structure,
    })
}

/// Discrete log of the projection of x to the cyclic p-part (order p^k) of
/// the unit group, with respect to the projection of a fixed generator.
fn p_part_log(field: &FiniteField, x: &PolyFp, p: u64, k: u32) -> u64 {
    if k == 0 {
        return 0;
    }
    let pk = BigUint::from(p).pow(k);
    let cof = field.unit_group_order() / &pk;
    let gamma = field.pow(&field.generator(super::FACTOR_SEED), &cof);
    let y = field.pow(x, &cof);
    let mut cur = PolyFp::one(field.characteristic()).rem(field.modulus());
    let n = pk.to_u64().expect("small p-part");
    for j in 0..n {
        if cur == y {
            return j;
        }
        cur = field.mul(&cur, &gamma);
    }
    unreachable!("p-part is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{split_prime, Modulus, QuadField};
    use crate::rayclass::ray_p_data;
    use proptest::prelude::*;

    #[test]
    fn lifting_the_exponent_examples() {
        assert_eq!(ord_p_pow_minus_one(7, 2, 3), 1);
        assert_eq!(ord_p_pow_minus_one(31, 6, 3), 2);
        assert_eq!(ord_p_pow_minus_one(2, 6, 3), 2);
        assert_eq!(ord_p_pow_minus_one(5, 1, 3), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn lifting_the_exponent(li in 0usize..20, f in 1u32..40, pi in 0usize..4) {
            let ell = crate::arith::primes_up_to(100)[li + 3];
            let p = [3u64, 5, 7, 11][pi];
            prop_assume!(ell != p);
            let f0 = (1..p as u32).find(|&j| crate::arith::pow_mod_u64(ell, j as u64, p) == 1).unwrap();
            let lhs = ord_p_pow_minus_one(ell, f, p);
            if f % f0 != 0 {
                prop_assert_eq!(lhs, 0);
            } else {
                let rhs = ord_p_pow_minus_one(ell, f0, p) + crate::arith::valuation_u64((f / f0) as u64, p);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    fn sextic_profile() -> NumberFieldProfile {
        let q = |v: &[i64]| {
            v.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect::<Vec<_>>()
        };
        NumberFieldProfile {
            label: "6.0.153664.1".into(),
            defining: crate::poly::PolyZ::from_i64(&[1, 0, 6, 0, 5, 0, 1]),
            degree: 6,
            signature: (0, 3),
            class_number: BigInt::one(),
            class_group: vec![],
            unit_rank: 2,
            torsion_order: 4,
            fundamental_units: vec![q(&[2, 0, 4, 0, 1, 0]), q(&[-3, 0, -4, 0, -1, 0])],
            torsion_generator: None,
        }
    }

    #[test]
    fn cubic_extension_of_gaussian_field() {
        // Q(i)(zeta7 + 1/zeta7) with the prime above 7 (e = 3, f = 2) and 31 (inert)
        let prof = sextic_profile();
        let primes = [ResiduePrime::new(7, 2, 3), ResiduePrime::new(31, 6, 1)];
        let t = tame_ray_p_part(&prof, &primes, 3).unwrap();
        assert_eq!(t.residue_parts, vec![1, 2]);
        assert_eq!(t.class_number_part, 0);
        assert_eq!(t.unit_index_part, 1);
        assert_eq!(t.ord_p, 2);
        assert_eq!(t.structure, Some(vec![BigInt::from(9)]));
        let t7 = tame_ray_p_part(&prof, &primes[..1], 3).unwrap();
        assert_eq!(t7.ord_p, 0);
        let mut no_units = prof.clone();
        no_units.fundamental_units.clear();
        assert!(matches!(
            tame_ray_p_part(&no_units, &primes, 3),
            Err(ExtError::MissingUnitData { .. })
        ));
        assert!(matches!(
            tame_ray_p_part(&prof, &[ResiduePrime::new(7, 1, 1)], 3),
            Err(ExtError::MissingResidueData { .. })
        ));
    }

    #[test]
    fn trivial_case() {
        let k = QuadField::new(-1).unwrap();
        let prof = NumberFieldProfile::imaginary_quadratic(&k);
        let r = tame_ray_p_part(&prof, &[ResiduePrime::new(13, 1, 1)], 5).unwrap();
        assert_eq!(r.ord_p, 0);
        assert_eq!(r.structure, Some(vec![]));
    }

    #[test]
    fn missing_torsion_generator() {
        let k = QuadField::new(-3).unwrap();
        let mut prof = NumberFieldProfile::imaginary_quadratic(&k);
        prof.torsion_generator = None;
        let r = tame_ray_p_part(&prof, &[ResiduePrime::new(7, 1, 1)], 3);
        assert!(matches!(r, Err(ExtError::MissingUnitData { .. })));
    }

    #[test]
    fn agrees_with_ray_class_groups_of_quadratic_fields() {
        // (d, ell, p): every prime above ell, squarefree modulus
        let cases = [
            (-1i64, 7u64, 3u64),
            (-1, 13, 3),
            (-23, 151, 3),
            (-23, 13, 3),
            (-3, 7, 3),
            (-2, 11, 5),
            (-47, 11, 5),
            (-5, 31, 3),
            (-1, 3, 5),
            (-14, 19, 3),
        ];
        for (d, ell, p) in cases {
            let k = QuadField::new(d).unwrap();
            let prof = NumberFieldProfile::imaginary_quadratic(&k);
            let (_, ps) = split_prime(&k, ell).unwrap();
            let rps: Vec<ResiduePrime> = ps
                .iter()
                .map(|q| ResiduePrime::new(ell, q.f, q.e))
                .collect();
            let t = tame_ray_p_part(&prof, &rps, p).unwrap();
            let m = Modulus::new(ps.iter().map(|q| (q.clone(), 1)).collect());
            let (ord, _) = ray_p_data(&k, &m, p).unwrap();
            assert_eq!(t.ord_p, ord, "d={d} ell={ell} p={p}");
            // a single prime of each split prime too
            let t1 = tame_ray_p_part(&prof, &rps[..1], p).unwrap();
            let (ord1, _) = ray_p_data(&k, &Modulus::from_prime(&ps[0], 1), p).unwrap();
            assert_eq!(t1.ord_p, ord1, "d={d} ell={ell} p={p} one prime");
        }
    }
}
