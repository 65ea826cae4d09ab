//! One ramified prime: K with p-class group of order p.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use super::{
    certify_group, class_group_witness, group_shape, p_part_shape, require_no_roots_of_unity,
    require_odd_prime, require_tame, shape_json, Certificate, Checklist, Conclusion, Engine,
    EngineError, PrimeRecord, Status,
};
use crate::arith::{primes_up_to, valuation};
use crate::extfield::{count_primes_of_type, tame_ray_p_part, ResiduePrime, TameRayPart};
use crate::pgroups::{generator_rank, modular_group};
use crate::quadfield::{split_prime, ClassGroup, Modulus, PrimeIdeal, QuadField};
use crate::rayclass::RayClassGroup;

pub const THEOREM: &str = "Thm1.1";
const EXISTENCE_NOTE: &str = "existence via direct search";

/// A prime found by the search, with its certificate.
#[derive(Clone, Debug, Serialize)]
pub struct SearchHit {
    pub prime: PrimeRecord,
    pub certificate: Certificate,
}

impl Engine {
    pub fn check_thm_s1(
        &self,
        k: &QuadField,
        p: u64,
        q: &PrimeIdeal,
    ) -> Result<Certificate, EngineError> {
        let cl = ClassGroup::compute(k);
        self.s1_certificate(k, &cl, p, q, true)
    }

    /// Every prime of norm at most `norm_bound` satisfying the hypotheses.
    pub fn search_q_s1(
        &self,
        k: &QuadField,
        p: u64,
        norm_bound: u64,
    ) -> Result<Vec<SearchHit>, EngineError> {
        require_odd_prime(p)?;
        require_no_roots_of_unity(k, p)?;
        let cl = ClassGroup::compute(k);
        let mut candidates = Vec::new();
        for ell in primes_up_to(norm_bound) {
            if ell == p {
                continue;
            }
            let (_, primes) = split_prime(k, ell)?;
            for q in primes {
                if u128::from(ell).pow(q.f) <= u128::from(norm_bound) && (q.norm() - 1) % p == 0 {
                    candidates.push(q);
                }
            }
        }
        let results = crate::par::map(self.exec, &candidates, |q| {
            self.s1_certificate(k, &cl, p, q, false)
        });
        let mut hits = Vec::new();
        for (q, r) in candidates.iter().zip(results) {
            let c = r?;
            if c.conclusion.status != Status::HypothesesNotMet {
                hits.push(SearchHit {
                    prime: PrimeRecord::new(q),
                    certificate: c,
                });
            }
        }
        Ok(hits)
    }

    /// With `require_profile` false a missing H_p(K) profile yields an
    /// undetermined conclusion instead of an error.
    fn s1_certificate(
        &self,
        k: &QuadField,
        cl: &ClassGroup,
        p: u64,
        q: &PrimeIdeal,
        require_profile: bool,
    ) -> Result<Certificate, EngineError> {
        require_odd_prime(p)?;
        require_no_roots_of_unity(k, p)?;
        require_tame(q, p, "--q")?;
        let s = std::slice::from_ref(q);
        let mut h = Checklist::new();

        let pcl = p_part_shape(cl.group(), p);
        let cyclic_p = pcl.0 == vec![BigInt::from(p)];
        if !h.check(
            "p-class group of K is Z/p",
            class_group_witness(&cl, &pcl),
            cyclic_p,
        ) {
            return Ok(h.not_met(THEOREM, k, p, s));
        }

        let nq = q.norm_big();
        let v = valuation(&(&nq - 1), p);
        if !h.check(
            "(i) p | N(q) - 1",
            json!({"norm": nq.to_string(), "ord_p(N(q)-1)": v}),
            v >= 1,
        ) {
            return Ok(h.not_met(THEOREM, k, p, s));
        }

        let class = cl.class_of(&q.ideal);
        let image = cl.group().mod_p_image(&class, p);
        if !h.check(
            "(ii) q inert in H_p(K)",
            json!({
                "class": class.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "image_mod_p": image,
            }),
            image.iter().any(|&x| x != 0),
        ) {
            return Ok(h.not_met(THEOREM, k, p, s));
        }

        let ray = RayClassGroup::with_class_group(k, &Modulus::from_prime(q, 1), cl.clone())?;
        let (ord, rank) = ray.p_data(p);
        if !h.check(
            "(iii) p-rank of Cl_K(q) >= 2",
            json!({"ray_class_group": shape_json(&group_shape(ray.group())), "ord_p": ord, "p_rank": rank}),
            rank >= 2,
        ) {
            return Ok(h.not_met(THEOREM, k, p, s));
        }

        let gr = generator_rank(k, s, p)?;
        let mut c = Conclusion::new(Status::Presentation);
        c.notes.push(EXISTENCE_NOTE.into());
        c.generator_rank = Some(gr);

        let h_level = match self.h_level_part(k, p, q) {
            Ok((label, src, t)) => {
                let structure = t
                    .structure
                    .as_ref()
                    .map(|s| crate::abelian::GroupShape(s.clone()).to_string())
                    .unwrap_or_else(|| "unknown".into());
                c.notes.push(format!(
                    "H_p(K) = {label} ({src}); ord_p |Cl_H(q')| = {}, p-part {structure}",
                    t.ord_p
                ));
                Some(t)
            }
            Err(e @ EngineError::Internal(_)) => return Err(e),
            Err(e) if v >= 2 && require_profile => return Err(e),
            Err(e) => {
                c.notes.push(format!("H_p(K) data unavailable: {e}"));
                None
            }
        };

        let n = if v == 1 {
            c.notes.push("p || N(q) - 1: order p^3 (Cor4.6)".into());
            if let Some(t) = &h_level {
                if t.ord_p != 2 {
                    return Err(EngineError::Internal(format!(
                        "ord_p |Cl_H(q')| = {} but p || N(q) - 1 forces 2",
                        t.ord_p
                    )));
                }
            }
            3
        } else {
            match &h_level {
                Some(t) => t.ord_p + 1,
                None => {
                    c.status = Status::Undetermined;
                    c.generator_rank = None;
                    return Ok(h.finish(THEOREM, k, p, s, c));
                }
            }
        };
        if n < 3 {
            return Err(EngineError::Internal(format!("n - 1 = {} < 2", n - 1)));
        }
        let g = modular_group(p, n)?;
        certify_group(&g, &p_part_shape(ray.group(), p))?;
        c.order = Some(g.order().to_string());
        c.presentation = Some(g.presentation());
        c.group = Some(g);
        c.powerful = Some(true);
        Ok(h.finish(THEOREM, k, p, s, c))
    }

    /// The p-part of Cl_H(q') for q' the prime of H_p(K) above q: residue
    /// degree p f(q), same ramification index. Conjugate choices must agree.
    fn h_level_part(
        &self,
        k: &QuadField,
        p: u64,
        q: &PrimeIdeal,
    ) -> Result<(String, crate::lmfdbio::Provenance, TameRayPart), EngineError> {
        let (prof, src) = self.hilbert_p_profile(k, p)?;
        let rp = ResiduePrime::new(q.ell, p as u32 * q.f, q.e);
        let count = count_primes_of_type(&prof.defining, q.ell, rp.f, rp.e)?;
        let mut parts: Vec<TameRayPart> = Vec::new();
        for nth in 0..count as u32 {
            parts.push(tame_ray_p_part(&prof, &[ResiduePrime { nth, ..rp }], p)?);
        }
        if parts.is_empty() {
            return Err(EngineError::Internal(format!(
                "q is not inert in {}: no prime above {} with f = {}, e = {}",
                prof.label, q.ell, rp.f, rp.e
            )));
        }
        if parts.windows(2).any(|w| w[0].ord_p != w[1].ord_p) {
            return Err(EngineError::Internal(format!(
                "conjugate primes of {} above {} give different ray class valuations",
                prof.label, q.ell
            )));
        }
        Ok((prof.label, src, parts.swap_remove(0)))
    }
}
