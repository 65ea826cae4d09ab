use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{poly_factor_mod, ExtError};
use crate::arith::primes_up_to;
use crate::poly::{factor_z, is_irreducible_z, PolyZ};

/// R_k(x) = Res_y(f(y), g(x - k y)), by evaluation at deg f * deg g + 1
/// integers and exact interpolation.
fn shifted_resultant(f: &PolyZ, g: &PolyZ, k: i64) -> PolyZ {
    let n = f.deg() * g.deg();
    let xs: Vec<BigInt> = (0..=n as i64).map(BigInt::from).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x| {
            let gy = g.compose_linear(&BigInt::from(-k), x);
            BigRational::from_integer(f.resultant(&gy))
        })
        .collect();
    // Newton divided differences
    let mut dd = ys;
    for j in 1..=n {
        for i in (j..=n).rev() {
            let den = BigRational::from_integer(&xs[i] - &xs[i - j]);
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    let mut poly: Vec<BigRational> = vec![BigRational::zero()];
    for i in (0..=n).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (t, c) in poly.iter().enumerate() {
            next[t + 1] += c;
            next[t] -= c * BigRational::from_integer(xs[i].clone());
        }
        next[0] += &dd[i];
        poly = next;
    }
    let coeffs = poly
        .into_iter()
        .map(|c| {
            assert!(c.is_integer(), "resultant has integer coefficients");
            c.to_integer()
        })
        .collect();
    let r = PolyZ::new(coeffs).primitive_part();
    if r.lead().is_negative() {
        r.neg()
    } else {
        r
    }
}

/// A defining polynomial of the compositum of the fields defined by f and g,
/// when they are linearly disjoint.
pub fn compositum(f: &PolyZ, g: &PolyZ) -> Result<PolyZ, ExtError> {
    for h in [f, g] {
        if !is_irreducible_z(h) {
            return Err(ExtError::Reducible(h.to_string()));
        }
    }
    let full = f.deg() * g.deg();
    let mut last = None;
    for k in 1..=10 {
        let r = shifted_resultant(f, g, k);
        if !r.is_squarefree() {
            continue;
        }
        let factors = factor_z(&r);
        if let Some((h, _)) = factors.iter().find(|(h, _)| h.deg() == full) {
            return Ok(h.clone());
        }
        last = Some(factors.into_iter().map(|(h, _)| h).collect());
        break;
    }
    Err(ExtError::NotLinearlyDisjoint {
        factors: last.unwrap_or_default(),
    })
}

/// Discriminant of a compositum of fields with coprime discriminants d1, d2
/// and degrees n1, n2: d1^n2 * d2^n1.
pub fn compositum_discriminant(d1: &BigInt, n1: u32, d2: &BigInt, n2: u32) -> Option<BigInt> {
    d1.gcd(d2).is_one().then(|| d1.pow(n2) * d2.pow(n1))
}

/// Compare the factorization degree patterns of f and g modulo every prime
/// up to `bound` that divides neither discriminant nor leading coefficient.
/// Equal patterns are necessary for f and g to define the same field.
pub fn same_splitting_patterns(f: &PolyZ, g: &PolyZ, bound: u64) -> bool {
    if f.deg() != g.deg() {
        return false;
    }
    let bad = f.discriminant() * g.discriminant() * f.lead() * g.lead();
    for ell in primes_up_to(bound) {
        if (&bad % BigInt::from(ell)).is_zero() {
            continue;
        }
        let pattern = |h: &PolyZ| {
            let mut v: Vec<usize> = poly_factor_mod(h, ell)
                .expect("leading coefficient is a unit")
                .iter()
                .map(|(q, _)| q.deg())
                .collect();
            v.sort();
            v
        };
        if pattern(f) != pattern(g) {
            return false;
        }
    }
    true
}

/// Factor degrees of f mod ell when f is squarefree there with a unit
/// leading coefficient; such primes are unramified and prime to the index.
pub fn clean_pattern(f: &PolyZ, ell: u64) -> Option<Vec<usize>> {
    let fp = f.reduce_mod(ell);
    if fp.deg() != f.deg() || !fp.gcd(&fp.derivative()).is_one() {
        return None;
    }
    let mut v: Vec<usize> = poly_factor_mod(f, ell)
        .ok()?
        .iter()
        .map(|(q, _)| q.deg())
        .collect();
    v.sort();
    Some(v)
}

/// Splitting-data test of whether the field of `small` can be a subfield of
/// the field of `big`: the degree divides, and at every clean prime up to
/// `bound` each residue degree of `big` is a multiple of some residue degree
/// of `small`. Returns the first prime contradicting the inclusion.
pub fn subfield_obstruction(small: &PolyZ, big: &PolyZ, bound: u64) -> Option<u64> {
    if small.deg() == 0 || big.deg() % small.deg() != 0 {
        return Some(0);
    }
    for ell in primes_up_to(bound) {
        let (Some(ps), Some(pb)) = (clean_pattern(small, ell), clean_pattern(big, ell)) else {
            continue;
        };
        if pb.iter().any(|fb| !ps.iter().any(|fs| fb % fs == 0)) {
            return Some(ell);
        }
    }
    None
}
