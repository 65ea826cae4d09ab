//! Number fields given by a defining polynomial: splitting of rational
//! primes, cyclotomic subfields, composita and p-parts of tame ray class
//! numbers from stored class group and unit data.

mod compositum;
mod periods;
mod profile;
mod tame;

pub use compositum::{
    clean_pattern, compositum, compositum_discriminant, same_splitting_patterns,
    subfield_obstruction,
};
pub use periods::{gaussian_period_subfield, inert_in_cyclotomic_m};
pub use profile::{NumberFieldProfile, ProfileError};
pub use tame::{
    count_primes_of_type, ord_p_pow_minus_one, tame_ray_p_part, ResiduePrime, TameRayPart,
};

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::poly::{fp, PolyFp, PolyZ};

/// Seed for the randomized equal-degree splitting.
pub const FACTOR_SEED: u64 = 0xfac7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error("leading coefficient of {poly} vanishes modulo {ell}")]
    LeadingVanishes { poly: String, ell: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{p} does not divide {ell} - 1")]
    NoSubfield { ell: u64, p: u64 },
    #[error("{0} must differ from the conductor and from p")]
    BadPrime(u64),
    #[error("input polynomial {0} is not irreducible")]
    Reducible(String),
    #[error("fields are not linearly disjoint; resultant factors: {}", .factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", "))]
    NotLinearlyDisjoint { factors: Vec<PolyZ> },
    #[error("profile {label} lacks unit data: {what}")]
    MissingUnitData { label: String, what: String },
    #[error("no residue data for the prime above {ell} with f = {f}, e = {e}: {why}")]
    MissingResidueData {
        ell: u64,
        f: u32,
        e: u32,
        why: String,
    },
    #[error("modulus must be coprime to p = {0}")]
    NotTame(u64),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Irreducible factors of f modulo ell with multiplicities, monic.
pub fn poly_factor_mod(f: &PolyZ, ell: u64) -> Result<Vec<(PolyFp, u32)>, ExtError> {
    if !crate::arith::is_prime_u64(ell) {
        return Err(ExtError::NotPrime(ell));
    }
    let fb = f.reduce_mod(ell);
    if fb.degree() != f.degree() {
        return Err(ExtError::LeadingVanishes {
            poly: f.to_string(),
            ell,
        });
    }
    Ok(fp::factor(&fb, FACTOR_SEED))
}

/// Dedekind's criterion: true iff ell does not divide [O_F : Z[theta]] for
/// a monic f with root theta.
pub fn dedekind_maximal(f: &PolyZ, ell: u64) -> bool {
    let Ok(factors) = poly_factor_mod(f, ell) else {
        return false;
    };
    if factors.iter().all(|(_, e)| *e == 1) {
        return true;
    }
    let lift = |g: &PolyFp| PolyZ::from_fp(g);
    let mut g = PolyZ::one();
    let mut h = PolyZ::one();
    let mut repeated = PolyFp::one(ell);
    for (gi, e) in &factors {
        g = g.mul(&lift(gi));
        h = h.mul(&lift(gi).pow(e - 1));
        if *e > 1 {
            repeated = repeated.mul(gi);
        }
    }
    let diff = f.sub(&g.mul(&h));
    let l = BigInt::from(ell);
    debug_assert!(diff.coeffs().iter().all(|c| c.is_multiple_of(&l)));
    let big_f = PolyZ::new(diff.coeffs().iter().map(|c| c / &l).collect()).reduce_mod(ell);
    if big_f.is_zero() {
        return false;
    }
    big_f.gcd(&repeated).deg() == 0
}

/// Decomposition of ell in the field defined by f, as (e, f) pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingData {
    pub ell: u64,
    pub primes: Vec<(u32, u32)>,
    /// Set when ell may divide the index of Z[theta]; the pairs are then
    /// read from the factorization mod ell and need not be the true ones.
    pub index_caveat: bool,
}

impl SplittingData {
    pub fn is_inert(&self) -> bool {
        self.primes.len() == 1 && self.primes[0].0 == 1
    }

    pub fn is_unramified(&self) -> bool {
        self.primes.iter().all(|&(e, _)| e == 1)
    }

    pub fn degree(&self) -> u32 {
        self.primes.iter().map(|&(e, f)| e * f).sum()
    }
}

pub fn splitting_data(f: &PolyZ, ell: u64) -> Result<SplittingData, ExtError> {
    let factors = poly_factor_mod(f, ell)?;
    let mut primes: Vec<(u32, u32)> = factors.iter().map(|(g, e)| (*e, g.deg() as u32)).collect();
    primes.sort();
    Ok(SplittingData {
        ell,
        primes,
        index_caveat: !f.is_monic() || !dedekind_maximal(f, ell),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PolyZ {
        PolyZ::parse(s).unwrap()
    }

    #[test]
    fn factor_mod_examples() {
        let f = p("x^2 + 1");
        let f7 = poly_factor_mod(&f, 7).unwrap();
        assert_eq!(f7.len(), 1);
        assert_eq!(f7[0].0.deg(), 2);
        let f5 = poly_factor_mod(&f, 5).unwrap();
        assert_eq!(
            f5,
            vec![
                (PolyFp::from_i64(5, &[2, 1]), 1),
                (PolyFp::from_i64(5, &[3, 1]), 1)
            ]
        );
        assert!(matches!(
            poly_factor_mod(&p("7*x^2 + 1"), 7),
            Err(ExtError::LeadingVanishes { .. })
        ));
        assert!(matches!(poly_factor_mod(&f, 9), Err(ExtError::NotPrime(9))));
    }

    #[test]
    fn splitting_examples() {
        // Hilbert class field of Q(sqrt(-23)): 151 splits in K, each factor inert in H/K
        let h = p("x^6 - 2*x^5 + 70*x^4 - 90*x^3 + 1631*x^2 - 1196*x + 12743");
        let s = splitting_data(&h, 151).unwrap();
        assert_eq!(s.primes, vec![(1, 3), (1, 3)]);
        assert!(!s.index_caveat);
        // Q(i, zeta7 + zeta7^-1) at 7: totally ramified over Q(i), 7 inert in Q(i)
        let m = p("x^6 + 5*x^4 + 6*x^2 + 1");
        let s7 = splitting_data(&m, 7).unwrap();
        assert_eq!(s7.primes, vec![(3, 2)]);
        assert!(!s7.index_caveat);
        assert_eq!(s7.degree(), 6);
        let s31 = splitting_data(&m, 31).unwrap();
        assert!(s31.is_inert());
        assert_eq!(s31.primes, vec![(1, 6)]);
    }

    #[test]
    fn dedekind_detects_index() {
        // Z[sqrt(-3)] has index 2 in the maximal order
        assert!(!dedekind_maximal(&p("x^2 + 3"), 2));
        assert!(dedekind_maximal(&p("x^2 + x + 1"), 2));
        assert!(dedekind_maximal(&p("x^2 + 1"), 2));
        assert!(dedekind_maximal(&p("x^2 + 3"), 3));
        // Z[2i] has index 2
        assert!(!dedekind_maximal(&p("x^2 + 4"), 2));
        assert!(splitting_data(&p("x^2 + 3"), 2).unwrap().index_caveat);
    }

    proptest! {
        #[test]
        fn factor_mod_reconstructs(coeffs in proptest::collection::vec(-50i64..50, 2..8), li in 0usize..6) {
            let ell = [2u64, 3, 5, 7, 31, 151][li];
            let mut c = coeffs.clone();
            c.push(1);
            let f = PolyZ::from_i64(&c);
            let fs = poly_factor_mod(&f, ell).unwrap();
            let prod = fs.iter().fold(PolyFp::one(ell), |acc, (g, e)| {
                (0..*e).fold(acc, |a, _| a.mul(g))
            });
            prop_assert_eq!(prod, f.reduce_mod(ell));
            for (g, _) in &fs {
                prop_assert!(fp::is_irreducible(g));
            }
            let s = splitting_data(&f, ell).unwrap();
            prop_assert_eq!(s.degree() as usize, f.deg());
        }
    }
}
