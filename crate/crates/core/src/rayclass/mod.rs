//! Ray class groups Cl_K(m) of imaginary quadratic fields.
//!
//! The group is presented on the residue-unit generators of (O_K/m)^* and
//! prime lifts L_i of the Smith generators of Cl_K, with relations: the
//! residue generator orders, the image of the roots of unity, and
//! h_i [L_i] = [alpha_i] where L_i^{h_i} = (alpha_i).

mod oracle;

pub use oracle::{
    oracle_grid_instance, oracle_ray_class, oracle_ray_class_with, OracleConfig, OracleError,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abelian::FinAbGroup;
use crate::arith::{valuation, IntMatrix};
use crate::quadfield::{ClassGroup, Ideal, Modulus, PrimeIdeal, QuadError, QuadField, QuadInt};
use crate::resring::{ResError, ResidueRing};

/// Seed for residue-generator searches; fixed so output is reproducible.
pub const RESIDUE_SEED: u64 = 0x7a3e_c0de;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RayError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Res(#[from] ResError),
    #[error("ideal {0} is not coprime to the modulus")]
    NotCoprime(String),
    #[error("modulus {modulus} is not coprime to p = {p}")]
    NotTame { modulus: String, p: u64 },
}

/// [E_K : E_K(m)]: the order of the image of the roots of unity mod m.
pub fn unit_index(k: &QuadField, m: &Modulus) -> u64 {
    if m.is_unit() {
        return 1;
    }
    let ideal = m.ideal(k);
    let z = k.torsion_generator();
    let w = k.unit_torsion() as u64;
    (1..=w)
        .find(|&j| w % j == 0 && ideal.contains(&k.pow(&z, j).sub(&QuadInt::one())))
        .expect("z^w = 1")
}

/// |(O_K/q^n)^*| = (N q - 1) N q^(n-1).
pub fn residue_unit_order(q: &PrimeIdeal, n: u32) -> BigInt {
    let nq = q.norm_big();
    (&nq - 1) * nq.pow(n - 1)
}

/// |Cl_K(m)| = h_K * prod |(O_K/q^n)^*| / [E_K : E_K(m)].
pub fn ray_class_number(k: &QuadField, m: &Modulus) -> BigInt {
    let h = ClassGroup::compute(k).class_number();
    ray_class_number_with(k, m, h)
}

pub fn ray_class_number_with(k: &QuadField, m: &Modulus, h: u64) -> BigInt {
    let units: BigInt = m
        .factors()
        .iter()
        .map(|(q, n)| residue_unit_order(q, *n))
        .product();
    BigInt::from(h) * units / BigInt::from(unit_index(k, m))
}

/// Lift of a class-group Smith generator: a prime L in the class, its
/// order h and a generator alpha of L^h.
#[derive(Clone, Debug)]
pub struct ClassLift {
    pub prime: PrimeIdeal,
    pub order: u64,
    pub alpha: QuadInt,
}

/// Cl_K(m) with the data needed to compute Artin classes.
pub struct RayClassGroup {
    field: QuadField,
    modulus: Modulus,
    cl: ClassGroup,
    ring: Option<ResidueRing>,
    lifts: Vec<ClassLift>,
    group: FinAbGroup,
}

impl RayClassGroup {
    pub fn compute(k: &QuadField, m: &Modulus) -> Result<Self, RayError> {
        Self::with_class_group(k, m, ClassGroup::compute(k))
    }

    pub fn with_class_group(k: &QuadField, m: &Modulus, cl: ClassGroup) -> Result<Self, RayError> {
        Self::with_seed(k, m, cl, RESIDUE_SEED)
    }

    /// `seed` drives the search for residue-ring generators; the group
    /// structure does not depend on it.
    pub fn with_seed(
        k: &QuadField,
        m: &Modulus,
        cl: ClassGroup,
        seed: u64,
    ) -> Result<Self, RayError> {
        let ring = if m.is_unit() {
            None
        } else {
            Some(ResidueRing::new(k, m, seed)?)
        };
        let avoid = m.primes();
        let mut lifts = Vec::new();
        for i in 0..cl.group().rank() {
            let mut class = cl.one_class();
            class[i] = BigInt::one();
            let prime = cl.prime_in_class(&class, &avoid)?;
            let order = cl.generator_order(i);
            let alpha = cl
                .principal_generator(&prime.ideal.pow(k, order))
                .expect("L^h is principal");
            lifts.push(ClassLift {
                prime,
                order,
                alpha,
            });
        }

        let r = ring.as_ref().map_or(0, |g| g.generator_orders().len());
        let n = r + lifts.len();
        let mut rel = IntMatrix::zeros(0, n);
        let mut labels = Vec::with_capacity(n);
        if let Some(ring) = &ring {
            labels.extend(ring.generator_labels());
            for (j, d) in ring.generator_orders().iter().enumerate() {
                let mut row = vec![BigInt::zero(); n];
                row[j] = d.clone();
                rel.push_row(row);
            }
            let mut row = ring.log(&k.torsion_generator())?;
            row.resize(n, BigInt::zero());
            rel.push_row(row);
        }
        for (i, lift) in lifts.iter().enumerate() {
            labels.push(format!("L[{}]", lift.prime.label()));
            let mut row = match &ring {
                Some(ring) => ring.log(&lift.alpha)?.into_iter().map(|x| -x).collect(),
                None => Vec::new(),
            };
            row.resize(n, BigInt::zero());
            row[r + i] = BigInt::from(lift.order);
            rel.push_row(row);
        }
        let group = FinAbGroup::from_relations(labels, &rel);
        Ok(RayClassGroup {
            field: k.clone(),
            modulus: m.clone(),
            cl,
            ring,
            lifts,
            group,
        })
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.cl
    }

    pub fn residue_ring(&self) -> Option<&ResidueRing> {
        self.ring.as_ref()
    }

    pub fn lifts(&self) -> &[ClassLift] {
        &self.lifts
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn order(&self) -> BigInt {
        self.group.order().expect("ray class groups are finite")
    }

    pub fn invariants(&self) -> &[BigInt] {
        self.group.invariants()
    }

    /// Smith coordinates of the class of (beta), beta coprime to m.
    pub fn principal_class(&self, beta: &QuadInt) -> Result<Vec<BigInt>, RayError> {
        let mut v = match &self.ring {
            Some(ring) => ring
                .log(beta)
                .map_err(|_| RayError::NotCoprime(beta.to_string()))?,
            None => Vec::new(),
        };
        v.resize(self.group.generator_labels().len(), BigInt::zero());
        Ok(self.group.coords(&v))
    }

    /// Raw exponent vector of the class of I on the presentation generators.
    fn artin_vector(&self, ideal: &Ideal) -> Result<Vec<BigInt>, RayError> {
        let k = &self.field;
        if !self.modulus.is_coprime_to(ideal) {
            return Err(RayError::NotCoprime(format!("{ideal:?}")));
        }
        let c = self.cl.class_of(ideal);
        let mut j = ideal.clone();
        let mut shifts = Vec::with_capacity(self.lifts.len());
        for (lift, ci) in self.lifts.iter().zip(&c) {
            let h = BigInt::from(lift.order);
            let s = ((&h - ci) % &h + &h) % &h;
            let s_u = u64::try_from(&s).unwrap();
            if s_u > 0 {
                j = j.mul(k, &lift.prime.ideal.pow(k, s_u));
            }
            shifts.push(s);
        }
        let beta = self
            .cl
            .principal_generator(&j)
            .expect("shifted ideal is principal");
        let mut v = match &self.ring {
            Some(ring) => ring.log(&beta)?,
            None => Vec::new(),
        };
        v.extend(shifts.into_iter().map(|s| -s));
        Ok(v)
    }

    /// Smith coordinates of the class of an ideal coprime to m.
    pub fn artin_class(&self, ideal: &Ideal) -> Result<Vec<BigInt>, RayError> {
        Ok(self.group.coords(&self.artin_vector(ideal)?))
    }

    /// ord_p |Cl_K(m)| and the p-rank.
    pub fn p_data(&self, p: u64) -> (u32, usize) {
        (valuation(&self.order(), p), self.group.p_rank(p))
    }

    /// Image of a class in Cl_K(m)/p, as a vector over F_p on the p-divisible invariants.
    pub fn mod_p(&self, coords: &[BigInt], p: u64) -> Vec<u64> {
        self.group.mod_p_image(coords, p)
    }
}

pub fn ray_class_structure(k: &QuadField, m: &Modulus) -> Result<RayClassGroup, RayError> {
    RayClassGroup::compute(k, m)
}

pub fn artin_class(k: &QuadField, m: &Modulus, ideal: &Ideal) -> Result<Vec<BigInt>, RayError> {
    RayClassGroup::compute(k, m)?.artin_class(ideal)
}

/// (ord_p |Cl_K(m)|, p-rank of Cl_K(m)) for m coprime to p.
pub fn ray_p_data(k: &QuadField, m: &Modulus, p: u64) -> Result<(u32, usize), RayError> {
    if m.primes().iter().any(|q| q.ell == p) {
        return Err(RayError::NotTame {
            modulus: m.label(),
            p,
        });
    }
    Ok(RayClassGroup::compute(k, m)?.p_data(p))
}
