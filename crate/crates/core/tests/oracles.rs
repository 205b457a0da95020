//! The library checked against small independent reimplementations.

mod common;

use polycomp::arith::{gcd, multiplicative_order};
use polycomp::poly::factor_degrees;
use polycomp::search::{fiber_iterate, search_lin};
use polycomp::{FieldElement, FieldSpec, Polynomial};

/// All polynomials over F_p of degree 1..=max_deg with zero constant term.
fn normalized_polys(p: u64, max_deg: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for d in 1..=max_deg {
        let count = p.pow(d as u32 - 1) * (p - 1);
        for mut code in 0..count {
            let mut c = vec![0u64; d + 1];
            for slot in c.iter_mut().take(d).skip(1) {
                *slot = code % p;
                code /= p;
            }
            c[d] = 1 + code;
            out.push(c);
        }
    }
    out
}

fn to_poly(k: &FieldSpec, c: &[u64]) -> Polynomial {
    Polynomial::from_ints(k, &c.iter().map(|&v| v as i64).collect::<Vec<_>>())
}

#[test]
fn minimal_degree_matches_rank_oracle() {
    for (p, max_deg, bound) in [(2u64, 3usize, 24usize), (3, 2, 27)] {
        let k = FieldSpec::prime(p).unwrap();
        let polys = normalized_polys(p, max_deg);
        for a in &polys {
            for b in &polys {
                let expected = common::min_composite_degree(a, b, bound, p);
                let got = search_lin(&to_poly(&k, a), &to_poly(&k, b), bound as u64).unwrap();
                assert_eq!(
                    got.found().map(|c| c.h.deg()),
                    expected,
                    "{a:?} {b:?} over F_{p}"
                );
                if let Some(c) = got.found() {
                    let fib =
                        fiber_iterate(&to_poly(&k, a), &to_poly(&k, b), bound as u64).unwrap();
                    assert_eq!(
                        fib.outcome.found().map(|d| &d.h),
                        Some(&c.h),
                        "{a:?} {b:?} over F_{p}"
                    );
                }
            }
        }
    }
}

#[test]
fn multiplicative_order_matches_brute_force() {
    for n in 2..400u64 {
        for a in 1..n.min(40) {
            let expected = (gcd(a, n) == 1).then(|| common::naive_order(a, n));
            assert_eq!(multiplicative_order(a, n), expected, "order of {a} mod {n}");
        }
    }
}

#[test]
fn binary_extension_arithmetic_matches_bitmask_model() {
    // x^10 + x^9 + x^4 + x^2 + 1
    let m = (1u64 << 10) | (1 << 9) | (1 << 4) | (1 << 2) | 1;
    let k = FieldSpec::parse("GF(2^10; m=t^10+t^9+t^4+t^2+1)", 0).unwrap();
    let to_elem =
        |v: u64| FieldElement::from_coeffs(&k, &(0..10).map(|i| (v >> i) & 1).collect::<Vec<_>>());
    for (a, b) in [
        (3u64, 5u64),
        (1023, 512),
        (777, 1),
        (0x155, 0x2aa),
        (1000, 999),
    ] {
        assert_eq!(
            to_elem(a).mul(&to_elem(b)),
            to_elem(common::gf2_mul(a, b, m))
        );
        assert_eq!(to_elem(a).pow(300), to_elem(common::gf2_pow(a, 300, m)));
    }
}

#[test]
fn irreducibility_matches_trial_division() {
    // over F_2, degree <= 8: irreducible iff no factor of degree <= deg/2
    let k = FieldSpec::prime(2).unwrap();
    let divides = |f: u64, g: u64| {
        let mut r = f;
        let dg = 63 - g.leading_zeros();
        while r != 0 && 63 - r.leading_zeros() >= dg {
            r ^= g << (63 - r.leading_zeros() - dg);
        }
        r == 0
    };
    for f in 2u64..512 {
        let d = 63 - f.leading_zeros();
        let irreducible = (2u64..f)
            .filter(|&g| 2 * (63 - g.leading_zeros()) <= d)
            .all(|g| !divides(f, g));
        let c: Vec<u64> = (0..=d).map(|i| (f >> i) & 1).collect();
        let fd = factor_degrees(&to_poly(&k, &c)).unwrap();
        assert_eq!(fd == vec![(d as u64, 1)], irreducible, "{f:#b}: {fd:?}");
    }
}
