//! The extension-based ray class group against the brute-force oracle on
//! every modulus of norm <= 200 over the fields with |d| <= 40.

use num_bigint::BigInt;
use tamecf::arith::{primes_up_to, valuation};
use tamecf::par::{self, Execution};
use tamecf::quadfield::{split_prime, Modulus, PrimeIdeal, QuadField};
use tamecf::rayclass::{oracle_grid_instance, ray_class_structure};

const MAX_NORM: u64 = 200;

fn moduli(k: &QuadField) -> Vec<Modulus> {
    let primes: Vec<PrimeIdeal> = primes_up_to(MAX_NORM)
        .into_iter()
        .flat_map(|l| split_prime(k, l).unwrap().1)
        .filter(|p| p.norm() <= MAX_NORM)
        .collect();
    let mut out = vec![Modulus::unit()];
    let mut frontier: Vec<(Vec<(PrimeIdeal, u32)>, u64, usize)> = vec![(Vec::new(), 1, 0)];
    while let Some((factors, norm, start)) = frontier.pop() {
        for (i, p) in primes.iter().enumerate().skip(start) {
            let mut n = 1;
            let mut nn = norm * p.norm();
            while nn <= MAX_NORM {
                if !(p.ell == 2 && p.e == 2 && n > 1) {
                    let mut f = factors.clone();
                    f.push((p.clone(), n));
                    out.push(Modulus::new(f.clone()));
                    frontier.push((f, nn, i + 1));
                }
                n += 1;
                nn *= p.norm();
            }
        }
    }
    out
}

#[test]
fn oracle_matches_structure_on_grid() {
    let ds: Vec<i64> = (1..=40i64)
        .filter(|d| (2..=6i64).all(|q| d % (q * q) != 0))
        .map(|d| -d)
        .collect();
    let mut instances = Vec::new();
    for &d in &ds {
        let k = QuadField::new(d).unwrap();
        for m in moduli(&k) {
            instances.push((d, m));
        }
    }
    assert!(instances.len() > 1000);
    let mismatches = par::filter_map(Execution::Parallel, &instances, |(d, m)| {
        let k = QuadField::new(*d).unwrap();
        let r = ray_class_structure(&k, m).unwrap();
        let (o, _) = oracle_grid_instance(&k, m, Execution::Sequential)
            .unwrap_or_else(|e| panic!("d={d} m={}: {e}", m.label()));
        let mut bad = r.invariants() != o.invariants();
        for p in [3u64, 5] {
            let ord = valuation(&o.order().unwrap(), p);
            bad |= r.p_data(p) != (ord, o.p_rank(p));
        }
        bad.then(|| {
            format!(
                "d={d} m={} {:?} vs {:?}",
                m.label(),
                r.invariants(),
                o.invariants()
            )
        })
    });
    assert!(mismatches.is_empty(), "{mismatches:#?}");
}

#[test]
fn oracle_confirms_larger_examples() {
    let g = QuadField::new(-1).unwrap();
    let m = Modulus::parse(&g, "7,31").unwrap();
    let (o, _) = oracle_grid_instance(&g, &m, Execution::Parallel).unwrap();
    assert_eq!(o.invariants(), &[BigInt::from(12), BigInt::from(960)][..]);
    let k = QuadField::new(-23).unwrap();
    let m = Modulus::parse(&k, "151.1").unwrap();
    let (o, _) = oracle_grid_instance(&k, &m, Execution::Parallel).unwrap();
    assert_eq!(
        o.invariants(),
        ray_class_structure(&k, &m).unwrap().invariants()
    );
}
