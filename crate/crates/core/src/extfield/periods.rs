use num_bigint::BigInt;
use num_traits::Zero;

use super::ExtError;
use crate::arith::{factorize_u64, is_prime_u64, pow_mod_u64};
use crate::poly::PolyZ;

/// Element of the group ring Z[C_ell]; maps onto Z[zeta_ell].
type GroupRing = Vec<BigInt>;

fn gr_mul(a: &GroupRing, b: &GroupRing) -> GroupRing {
    let n = a.len();
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[(i + j) % n] += x * y;
            }
        }
    }
    out
}

/// The integer represented by a group-ring element, if it is rational
/// (all non-identity coordinates equal, since 1 + zeta + ... = 0).
fn gr_to_integer(a: &GroupRing) -> Option<BigInt> {
    let c1 = &a[1];
    a[1..].iter().all(|x| x == c1).then(|| &a[0] - c1)
}

fn primitive_root(ell: u64) -> u64 {
    let fs = factorize_u64(ell - 1);
    (2..ell)
        .find(|&g| {
            fs.iter()
                .all(|&(q, _)| pow_mod_u64(g, (ell - 1) / q, ell) != 1)
        })
        .unwrap_or(1)
}

/// Defining polynomial of the degree-p subfield of Q(zeta_ell): the product
/// of (x - eta_i) over the Gaussian periods of the index-p subgroup.
pub fn gaussian_period_subfield(ell: u64, p: u64) -> Result<PolyZ, ExtError> {
    if !is_prime_u64(ell) {
        return Err(ExtError::NotPrime(ell));
    }
    if !is_prime_u64(p) {
        return Err(ExtError::NotPrime(p));
    }
    if (ell - 1) % p != 0 {
        return Err(ExtError::NoSubfield { ell, p });
    }
    let n = ell as usize;
    let g = primitive_root(ell);
    let gp = pow_mod_u64(g, p, ell);
    let sub_len = (ell - 1) / p;
    let mut periods = Vec::with_capacity(p as usize);
    for i in 0..p {
        let mut eta = vec![BigInt::zero(); n];
        let mut e = pow_mod_u64(g, i, ell);
        for _ in 0..sub_len {
            eta[e as usize] += 1;
            e = e * gp % ell;
        }
        periods.push(eta);
    }
    // coefficients (lowest first) of prod (x - eta_i), as group-ring elements
    let mut one = vec![BigInt::zero(); n];
    one[0] = BigInt::from(1);
    let mut poly: Vec<GroupRing> = vec![one];
    for eta in &periods {
        let neg: GroupRing = eta.iter().map(|x| -x).collect();
        let mut next = vec![vec![BigInt::zero(); n]; poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            for (t, x) in c.iter().enumerate() {
                next[k + 1][t] += x;
            }
            let prod = gr_mul(c, &neg);
            for (t, x) in prod.into_iter().enumerate() {
                next[k][t] += x;
            }
        }
        poly = next;
    }
    let coeffs = poly
        .iter()
        .map(|c| gr_to_integer(c).expect("period polynomial has rational coefficients"))
        .collect();
    Ok(PolyZ::new(coeffs))
}

/// Whether ell2 lies outside the index-p subgroup of (Z/ell)^*, i.e. its
/// Frobenius is nontrivial in the degree-p subfield of Q(zeta_ell).
pub fn inert_in_cyclotomic_m(ell: u64, p: u64, ell2: u64) -> Result<bool, ExtError> {
    for q in [ell, p, ell2] {
        if !is_prime_u64(q) {
            return Err(ExtError::NotPrime(q));
        }
    }
    if (ell - 1) % p != 0 {
        return Err(ExtError::NoSubfield { ell, p });
    }
    if ell2 == ell || ell2 == p {
        return Err(ExtError::BadPrime(ell2));
    }
    Ok(pow_mod_u64(ell2 % ell, (ell - 1) / p, ell) != 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use crate::poly::is_irreducible_z;
    use num_integer::Integer;
    use num_traits::Signed;

    #[test]
    fn period_polynomials() {
        assert_eq!(
            gaussian_period_subfield(7, 3).unwrap(),
            PolyZ::from_i64(&[-1, -2, 1, 1])
        );
        assert_eq!(
            gaussian_period_subfield(7, 2).unwrap(),
            PolyZ::from_i64(&[2, 1, 1])
        );
        let c13 = gaussian_period_subfield(13, 3).unwrap();
        assert_eq!(c13.discriminant(), BigInt::from(169));
        assert!(matches!(
            gaussian_period_subfield(7, 5),
            Err(ExtError::NoSubfield { .. })
        ));
        assert!(matches!(
            gaussian_period_subfield(9, 2),
            Err(ExtError::NotPrime(9))
        ));
    }

    #[test]
    fn period_polynomials_are_irreducible_and_ramify_only_at_ell() {
        for ell in primes_up_to(80).into_iter().filter(|&l| l > 2) {
            for (p, _) in factorize_u64(ell - 1) {
                let f = gaussian_period_subfield(ell, p).unwrap();
                assert_eq!(f.deg() as u64, p);
                assert!(is_irreducible_z(&f), "ell={ell} p={p}");
                // disc = ell^(p-1) times the square of the index of Z[eta]
                let d = f.discriminant();
                let field = BigInt::from(ell).pow(p as u32 - 1);
                assert!(
                    d.is_positive() == (p % 2 == 1 || ell % 4 == 1),
                    "ell={ell} p={p}"
                );
                let (q, r) = d.abs().div_rem(&field);
                assert!(r.is_zero(), "ell={ell} p={p}");
                assert_eq!(q.sqrt().pow(2), q, "ell={ell} p={p}");
            }
        }
    }

    #[test]
    fn inertness_examples() {
        assert!(inert_in_cyclotomic_m(7, 3, 31).unwrap());
        assert!(!inert_in_cyclotomic_m(7, 3, 29).unwrap());
        assert!(!inert_in_cyclotomic_m(7, 3, 43).unwrap());
        assert!(inert_in_cyclotomic_m(13, 3, 2).unwrap());
        assert!(inert_in_cyclotomic_m(7, 3, 7).is_err());
        assert!(inert_in_cyclotomic_m(7, 3, 3).is_err());
        assert!(inert_in_cyclotomic_m(7, 5, 11).is_err());
    }

    #[test]
    fn inertness_matches_factorization() {
        for ell2 in primes_up_to(200).into_iter().filter(|&l| l != 7 && l != 3) {
            let f = gaussian_period_subfield(7, 3).unwrap();
            let s = super::super::splitting_data(&f, ell2).unwrap();
            assert_eq!(
                inert_in_cyclotomic_m(7, 3, ell2).unwrap(),
                s.is_inert(),
                "{ell2}"
            );
        }
    }
}
