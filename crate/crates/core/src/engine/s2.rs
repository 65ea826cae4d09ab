//! Two ramified primes: K with trivial p-class group.

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::{
    certify_group, class_group_witness, group_shape, p_part_shape, require_no_roots_of_unity,
    require_odd_prime, require_tame, shape_json, Certificate, Checklist, Conclusion, Engine,
    EngineError, Status, SPLITTING_BOUND,
};
use crate::arith::valuation;
use crate::extfield::{
    compositum, count_primes_of_type, gaussian_period_subfield, inert_in_cyclotomic_m,
    same_splitting_patterns, subfield_obstruction, tame_ray_p_part, NumberFieldProfile,
    ResiduePrime,
};
use crate::lmfdbio::Provenance;
use crate::pgroups::{generator_rank, modular_group};
use crate::quadfield::{ClassGroup, Modulus, PrimeIdeal, QuadField};
use crate::rayclass::RayClassGroup;

pub const THEOREM: &str = "Thm1.2";

/// Inertness of q2 in the degree-p subextension of K(q1), by two routes.
pub(super) struct Inertness {
    pub witness: Value,
    pub inert: bool,
}

/// Route A: the Artin class of q2 in Cl_K(q1)/p. Route B, when q1 = ℓO_K:
/// the Frobenius of ℓ2 in the degree-p subfield of Q(zeta_ℓ). The routes
/// must agree.
pub(super) fn inert_in_m(
    k: &QuadField,
    cl: &ClassGroup,
    p: u64,
    q1: &PrimeIdeal,
    q2: &PrimeIdeal,
) -> Result<Inertness, EngineError> {
    let ray1 = RayClassGroup::with_class_group(k, &Modulus::from_prime(q1, 1), cl.clone())?;
    let (ord1, rank1) = ray1.p_data(p);
    let artin = ray1.artin_class(&q2.ideal)?;
    let image = ray1.mod_p(&artin, p);
    let exists = rank1 == 1;
    let route_a = exists && image.iter().any(|&x| x != 0);
    let mut witness = json!({
        "Cl_K(q1)": shape_json(&group_shape(ray1.group())),
        "ord_p|Cl_K(q1)|": ord1,
        "artin_class": artin.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "artin_image_mod_p": image,
    });
    if q1.f == 2 && exists {
        // the Frobenius of q2 restricts to Frob_ℓ2^f(q2) on Q(zeta_ℓ1)
        let base = crate::arith::pow_mod_u64(q2.ell % q1.ell, u64::from(q2.f), q1.ell);
        let frob_ell2 = inert_in_cyclotomic_m(q1.ell, p, q2.ell)?;
        let route_b = if q2.f == 1 {
            frob_ell2
        } else {
            crate::arith::pow_mod_u64(base, (q1.ell - 1) / p, q1.ell) != 1
        };
        witness["cyclotomic_route"] = json!({
            "ell1": q1.ell,
            "ell2": q2.ell,
            "f(q2)": q2.f,
            "N(q2)^((ell1-1)/p) mod ell1": crate::arith::pow_mod_u64(base, (q1.ell - 1) / p, q1.ell),
            "inert": route_b,
        });
        if route_b != route_a {
            return Err(EngineError::Internal(format!(
                "inertness of {} in M({},{p}): Artin route says {route_a}, cyclotomic route says {route_b}",
                q2.label(),
                q1.label()
            )));
        }
    }
    Ok(Inertness {
        witness,
        inert: route_a,
    })
}

impl Engine {
    /// M(q1, p): degree 2p, |D| = |d_K|^p N(q1)^(p-1), with q1 totally
    /// ramified. When q1 = ℓO_K the candidate must also match K times the
    /// degree-p subfield of Q(zeta_ℓ) prime by prime.
    pub fn m_profile(
        &self,
        k: &QuadField,
        p: u64,
        q1: &PrimeIdeal,
    ) -> Result<(NumberFieldProfile, Provenance), EngineError> {
        let dk = BigInt::from(k.discriminant().unsigned_abs());
        let disc = dk.pow(p as u32) * q1.norm_big().pow(p as u32 - 1);
        let kpoly = NumberFieldProfile::imaginary_quadratic(k).defining;
        let model = if q1.f == 2 {
            Some(compositum(&kpoly, &gaussian_period_subfield(q1.ell, p)?)?)
        } else {
            None
        };
        self.find_profile(
            2 * p as usize,
            &disc,
            &format!("M({}, {p})", q1.label()),
            |prof| {
                if subfield_obstruction(&kpoly, &prof.defining, SPLITTING_BOUND).is_some() {
                    return Ok(false);
                }
                if count_primes_of_type(&prof.defining, q1.ell, q1.f, p as u32 * q1.e)? == 0 {
                    return Ok(false);
                }
                Ok(model.as_ref().map_or(true, |m| {
                    same_splitting_patterns(m, &prof.defining, SPLITTING_BOUND)
                }))
            },
        )
    }

    pub fn check_thm_s2(
        &self,
        k: &QuadField,
        p: u64,
        q1: &PrimeIdeal,
        q2: &PrimeIdeal,
    ) -> Result<Certificate, EngineError> {
        require_odd_prime(p)?;
        require_no_roots_of_unity(k, p)?;
        require_tame(q1, p, "--q")?;
        require_tame(q2, p, "--q2")?;
        if q1 == q2 {
            return Err(EngineError::Usage {
                flag: "--q2".into(),
                msg: "must differ from --q".into(),
            });
        }
        let s = [q1.clone(), q2.clone()];
        let cl = ClassGroup::compute(k);
        let mut h = Checklist::new();

        let pcl = p_part_shape(cl.group(), p);
        if !h.check(
            "p-class group of K is trivial",
            class_group_witness(&cl, &pcl),
            pcl.0.is_empty(),
        ) {
            return Ok(h.not_met(THEOREM, k, p, &s));
        }

        let n1 = q1.norm_big();
        let v1 = valuation(&(&n1 - 1), p);
        if !h.check(
            "(i) p || N(q1) - 1",
            json!({"norm": n1.to_string(), "ord_p(N(q1)-1)": v1}),
            v1 == 1,
        ) {
            return Ok(h.not_met(THEOREM, k, p, &s));
        }

        let n2 = q2.norm_big();
        let v2 = valuation(&(&n2 - 1), p);
        if !h.check(
            "(ii) p | N(q2) - 1",
            json!({"norm": n2.to_string(), "ord_p(N(q2)-1)": v2}),
            v2 >= 1,
        ) {
            return Ok(h.not_met(THEOREM, k, p, &s));
        }

        let inert = inert_in_m(k, &cl, p, q1, q2)?;
        if !h.check("(iii) q2 inert in M(q1,p)", inert.witness, inert.inert) {
            return Ok(h.not_met(THEOREM, k, p, &s));
        }

        let m = Modulus::new(vec![(q1.clone(), 1), (q2.clone(), 1)]);
        let ray = RayClassGroup::with_class_group(k, &m, cl)?;
        let mut c = Conclusion::new(Status::Presentation);
        c.generator_rank = Some(generator_rank(k, &s, p)?);

        let (prof, src) = self.m_profile(k, p, q1)?;
        // Q1: totally ramified over q1; Q2: inert over q2
        let t1 = ResiduePrime::new(q1.ell, q1.f, p as u32 * q1.e);
        let t2 = ResiduePrime::new(q2.ell, p as u32 * q2.f, q2.e);
        let c1 = count_primes_of_type(&prof.defining, t1.ell, t1.f, t1.e)?;
        let c2 = count_primes_of_type(&prof.defining, t2.ell, t2.f, t2.e)?;
        if c1 == 0 || c2 == 0 {
            return Err(EngineError::Internal(format!(
                "{} has no prime of the expected type above {} or {}",
                prof.label, q1.ell, q2.ell
            )));
        }
        let mut parts = Vec::new();
        for a in 0..c1 as u32 {
            for b in 0..c2 as u32 {
                let t = tame_ray_p_part(
                    &prof,
                    &[ResiduePrime { nth: a, ..t1 }, ResiduePrime { nth: b, ..t2 }],
                    p,
                )?;
                parts.push(t);
            }
        }
        let ords: Vec<u32> = parts.iter().map(|t| t.ord_p).collect();
        c.notes.push(format!(
            "M(q1,p) = {} ({src}); ord_p |Cl_M(Q1 Q2)| = {}; split {} (class number) + {:?} (residues) - {} (units)",
            prof.label, ords[0], parts[0].class_number_part, parts[0].residue_parts, parts[0].unit_index_part
        ));
        if ords.iter().any(|&o| o != ords[0]) {
            c.status = Status::Undetermined;
            c.notes.push(format!(
                "primes of {} above q1, q2 cannot be told apart and give valuations {ords:?}",
                prof.label
            ));
            return Ok(h.finish(THEOREM, k, p, &s, c));
        }
        let n = ords[0] + 1;
        if n < 3 {
            return Err(EngineError::Internal(format!("n - 1 = {} < 2", n - 1)));
        }
        let g = modular_group(p, n)?;
        certify_group(&g, &p_part_shape(ray.group(), p))?;
        c.order = Some(g.order().to_string());
        c.presentation = Some(g.presentation());
        c.group = Some(g);
        c.powerful = Some(true);
        Ok(h.finish(THEOREM, k, p, &s, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::parse_prime;

    fn qi() -> QuadField {
        QuadField::new(-1).unwrap()
    }

    #[test]
    fn gaussian_field_7_31() {
        let e = Engine::default();
        let k = qi();
        let q1 = parse_prime(&k, "7", "--q").unwrap();
        let q2 = parse_prime(&k, "31", "--q2").unwrap();
        let c = e.check_thm_s2(&k, 3, &q1, &q2).unwrap();
        assert_eq!(c.conclusion.status, Status::Presentation, "{}", c.to_text());
        assert_eq!(c.conclusion.order.as_deref(), Some("27"));
        assert_eq!(
            c.conclusion.presentation.as_deref(),
            Some("⟨a,b | a^9, b^3, b^-1ab = a^4⟩")
        );
        let gr = c.conclusion.generator_rank.clone().unwrap();
        assert_eq!((gr.exact, gr.bound), (2, 2));
        let iii = &c.hypotheses[3];
        assert!(iii.witness["cyclotomic_route"]["inert"].as_bool().unwrap());
        assert!(c.conclusion.notes[0].contains("6.0.153664.1"));
    }

    #[test]
    fn failing_hypotheses() {
        let e = Engine::default();
        let k = qi();
        let q1 = parse_prime(&k, "7", "--q").unwrap();
        // 43 = 1 mod 7 is a cube: 43O_K splits in M
        let q2 = parse_prime(&k, "43", "--q2").unwrap();
        let c = e.check_thm_s2(&k, 3, &q1, &q2).unwrap();
        assert_eq!(
            c.conclusion.first_failing.as_deref(),
            Some("(iii) q2 inert in M(q1,p)")
        );
        // 37 - 1 = 36
        let q1 = parse_prime(&k, "37.1", "--q").unwrap();
        let q2 = parse_prime(&k, "31", "--q2").unwrap();
        let c = e.check_thm_s2(&k, 3, &q1, &q2).unwrap();
        assert_eq!(
            c.conclusion.first_failing.as_deref(),
            Some("(i) p || N(q1) - 1")
        );
        assert_eq!(c.hypotheses[1].witness["ord_p(N(q1)-1)"], 2);
    }
}
