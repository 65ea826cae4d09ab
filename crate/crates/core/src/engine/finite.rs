//! Finiteness criteria: odd p with two primes, p = 2 with two primes, and
//! p = 2 with one prime and a cyclic 2-class group.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::s2::inert_in_m;
use super::{
    class_group_witness, group_shape, p_part_shape, require_odd_prime, require_tame, shape_json,
    Certificate, Checklist, Conclusion, Engine, EngineError, Status,
};
use crate::arith::{primes_up_to, valuation};
use crate::quadfield::{split_prime, ClassGroup, Modulus, PrimeIdeal, QuadField};
use crate::rayclass::RayClassGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteTheorem {
    /// Odd p, S = {q1, q2}, q2 inert in M(q1, p): finite and powerful.
    T37,
    /// p = 2, S = {q1, q2}, 4 | N(qi) - 1, q2 inert in M(q1, 2).
    T38,
    /// p = 2, S = {q}, cyclic 2-class group, q not split in the 2-class field.
    T39,
}

impl FiniteTheorem {
    pub fn id(self) -> &'static str {
        match self {
            FiniteTheorem::T37 => "Thm3.7",
            FiniteTheorem::T38 => "Thm3.8",
            FiniteTheorem::T39 => "Thm3.9",
        }
    }
}

impl FromStr for FiniteTheorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim_start_matches("Thm") {
            "3.7" => Ok(FiniteTheorem::T37),
            "3.8" => Ok(FiniteTheorem::T38),
            "3.9" => Ok(FiniteTheorem::T39),
            _ => Err(format!("unknown theorem '{s}' (expected 3.7, 3.8 or 3.9)")),
        }
    }
}

/// Whether the decomposition group of q in Gal(M/K) is everything, M the
/// Frattini field of the tame abelian quotient: the inertia image has
/// dimension rank_p Cl(m) - rank_p Cl(m/q), and the Frobenius adds one more
/// when its class in Cl(m/q)/p is nonzero.
pub fn decomposition_is_full(
    k: &QuadField,
    cl: &ClassGroup,
    p: u64,
    s: &[PrimeIdeal],
    q: &PrimeIdeal,
) -> Result<(Value, bool), EngineError> {
    let m = Modulus::new(s.iter().map(|x| (x.clone(), 1)).collect());
    let rest = Modulus::new(
        s.iter()
            .filter(|x| *x != q)
            .map(|x| (x.clone(), 1))
            .collect(),
    );
    let full = RayClassGroup::with_class_group(k, &m, cl.clone())?;
    let quotient = RayClassGroup::with_class_group(k, &rest, cl.clone())?;
    let d = full.group().p_rank(p);
    let inertia = d - quotient.group().p_rank(p);
    let frob = quotient.artin_class(&q.ideal)?;
    let frob_nontrivial = quotient.mod_p(&frob, p).iter().any(|&x| x != 0);
    let witness = json!({
        "d": d,
        "inertia_dim": inertia,
        "frobenius_mod_inertia_nontrivial": frob_nontrivial,
        "Cl_K(m)": shape_json(&group_shape(full.group())),
    });
    Ok((witness, inertia + frob_nontrivial as usize == d))
}

impl Engine {
    pub fn check_finiteness(
        &self,
        theorem: FiniteTheorem,
        k: &QuadField,
        p: u64,
        s: &[PrimeIdeal],
    ) -> Result<Certificate, EngineError> {
        let want = if theorem == FiniteTheorem::T39 { 1 } else { 2 };
        if s.len() != want {
            return Err(EngineError::Usage {
                flag: "--q2".into(),
                msg: format!("{} takes {want} prime(s), got {}", theorem.id(), s.len()),
            });
        }
        for (i, q) in s.iter().enumerate() {
            require_tame(q, p, if i == 0 { "--q" } else { "--q2" })?;
        }
        if want == 2 && s[0] == s[1] {
            return Err(EngineError::Usage {
                flag: "--q2".into(),
                msg: "must differ from --q".into(),
            });
        }
        match theorem {
            FiniteTheorem::T37 => {
                require_odd_prime(p)?;
                self.thm37(k, p, s)
            }
            FiniteTheorem::T38 | FiniteTheorem::T39 if p != 2 => Err(EngineError::NotTwo {
                theorem: theorem.id().into(),
                p,
            }),
            FiniteTheorem::T38 => self.thm38(k, s),
            FiniteTheorem::T39 => self.thm39(k, &s[0]),
        }
    }

    fn thm37(&self, k: &QuadField, p: u64, s: &[PrimeIdeal]) -> Result<Certificate, EngineError> {
        let id = FiniteTheorem::T37.id();
        let (q1, q2) = (&s[0], &s[1]);
        let cl = ClassGroup::compute(k);
        let mut h = Checklist::new();
        let pcl = p_part_shape(cl.group(), p);
        if !h.check(
            "p-class group of K is trivial",
            class_group_witness(&cl, &pcl),
            pcl.0.is_empty(),
        ) {
            return Ok(h.not_met(id, k, p, s));
        }
        let w = k.unit_torsion() as u64;
        if !h.check("p does not divide |mu_K|", json!({"|mu_K|": w}), w % p != 0) {
            return Ok(h.not_met(id, k, p, s));
        }
        if !norm_condition(&mut h, "(i) p | N(q1) - 1", q1, p, 1)
            || !norm_condition(&mut h, "(ii) p | N(q2) - 1", q2, p, 1)
        {
            return Ok(h.not_met(id, k, p, s));
        }
        let inert = inert_in_m(k, &cl, p, q1, q2)?;
        if !h.check("(iii) q2 inert in M(q1,p)", inert.witness, inert.inert) {
            return Ok(h.not_met(id, k, p, s));
        }
        let (w, full) = decomposition_is_full(k, &cl, p, s, q2)?;
        if !h.check(
            "(iv) q2 does not split in the Frattini field (Lemma3.5)",
            w,
            full,
        ) {
            return Ok(h.not_met(id, k, p, s));
        }
        let mut c = Conclusion::new(Status::Finite);
        c.powerful = Some(true);
        c.generator_rank = Some(crate::pgroups::generator_rank(k, s, p)?);
        Ok(h.finish(id, k, p, s, c))
    }

    fn thm38(&self, k: &QuadField, s: &[PrimeIdeal]) -> Result<Certificate, EngineError> {
        let id = FiniteTheorem::T38.id();
        let (q1, q2) = (&s[0], &s[1]);
        let cl = ClassGroup::compute(k);
        let mut h = Checklist::new();
        let pcl = p_part_shape(cl.group(), 2);
        if !h.check(
            "2-class group of K is trivial",
            class_group_witness(&cl, &pcl),
            pcl.0.is_empty(),
        ) {
            return Ok(h.not_met(id, k, 2, s));
        }
        if !norm_condition(&mut h, "(i) 4 | N(q1) - 1", q1, 2, 2) {
            return Ok(h.not_met(id, k, 2, s));
        }
        let inert = inert_in_m(k, &cl, 2, q1, q2)?;
        let exists = inert.witness["ord_p|Cl_K(q1)|"].as_u64().unwrap_or(0) >= 1;
        if !h.check(
            "(i') M(q1,2) exists: 2 | |Cl_K(q1)|",
            json!({"Cl_K(q1)": inert.witness["Cl_K(q1)"].clone(), "ord_2": inert.witness["ord_p|Cl_K(q1)|"].clone()}),
            exists,
        ) {
            return Ok(h.not_met(id, k, 2, s));
        }
        if !norm_condition(&mut h, "(ii) 4 | N(q2) - 1", q2, 2, 2) {
            return Ok(h.not_met(id, k, 2, s));
        }
        if !h.check("(iii) q2 inert in M(q1,2)", inert.witness, inert.inert) {
            return Ok(h.not_met(id, k, 2, s));
        }
        let mut c = Conclusion::new(Status::Finite);
        c.generator_rank = Some(crate::pgroups::generator_rank(k, s, 2)?);
        let (w, full) = decomposition_is_full(k, &cl, 2, s, q2)?;
        c.notes.push(format!(
            "decomposition group of q2 in the Frattini quotient is full: {full} ({w})"
        ));
        Ok(h.finish(id, k, 2, s, c))
    }

    fn thm39(&self, k: &QuadField, q: &PrimeIdeal) -> Result<Certificate, EngineError> {
        let id = FiniteTheorem::T39.id();
        let s = std::slice::from_ref(q);
        let cl = ClassGroup::compute(k);
        let mut h = Checklist::new();
        let pcl = p_part_shape(cl.group(), 2);
        if !h.check(
            "2-class group of K is nontrivial cyclic",
            class_group_witness(&cl, &pcl),
            pcl.0.len() == 1,
        ) {
            return Ok(h.not_met(id, k, 2, s));
        }
        let class = cl.class_of(&q.ideal);
        let image = cl.group().mod_p_image(&class, 2);
        if !h.check(
            "(i) q not split in the 2-class field tower",
            json!({
                "class": class.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "image_mod_2": image,
            }),
            image.iter().any(|&x| x != 0),
        ) {
            return Ok(h.not_met(id, k, 2, s));
        }
        let mut c = Conclusion::new(Status::Finite);
        c.generator_rank = Some(crate::pgroups::generator_rank(k, s, 2)?);
        c.notes
            .push("a cyclic 2-class group makes the 2-class field tower stop at H_2(K)".into());
        Ok(h.finish(id, k, 2, s, c))
    }

    /// First pair (q1, q2) of odd primes of norm at most `norm_bound`, in
    /// order of norms, meeting the p = 2 two-prime criterion.
    pub fn search_pair_thm38(
        &self,
        k: &QuadField,
        norm_bound: u64,
    ) -> Result<Option<Certificate>, EngineError> {
        let mut primes = Vec::new();
        for ell in primes_up_to(norm_bound).into_iter().filter(|&l| l != 2) {
            let (_, ps) = split_prime(k, ell)?;
            primes.extend(
                ps.into_iter()
                    .filter(|q| q.norm() <= norm_bound && (q.norm() - 1) % 4 == 0),
            );
        }
        primes.sort_by_key(|q| (q.norm(), q.index));
        let cl = ClassGroup::compute(k);
        if !p_part_shape(cl.group(), 2).0.is_empty() {
            return Ok(None);
        }
        for q1 in &primes {
            let ray1 = RayClassGroup::with_class_group(k, &Modulus::from_prime(q1, 1), cl.clone())?;
            if ray1.group().p_rank(2) != 1 {
                continue;
            }
            let pairs: Vec<&PrimeIdeal> = primes.iter().filter(|q2| *q2 != q1).collect();
            let found = crate::par::map(self.exec, &pairs, |q2| {
                self.check_finiteness(FiniteTheorem::T38, k, 2, &[q1.clone(), (*q2).clone()])
            });
            for c in found {
                let c = c?;
                if c.conclusion.status == Status::Finite {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }
}

/// p^v | N(q) - 1, recorded with the valuation.
fn norm_condition(h: &mut Checklist, name: &str, q: &PrimeIdeal, p: u64, v: u32) -> bool {
    let n = q.norm_big();
    let val = valuation(&(&n - BigInt::from(1)), p);
    h.check(
        name,
        json!({"norm": n.to_string(), "ord_p(N-1)": val}),
        val >= v,
    )
}
