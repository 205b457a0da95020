//! Roots in a chosen ambient field, squarefree parts and distinct-degree
//! factorization.
//!
//! Over a finite ambient field of size `q` the roots are isolated by
//! `gcd(f, x^q - x)` and split by equal-degree splitting (Cantor-Zassenhaus,
//! trace map in characteristic 2). Small ambients are scanned exhaustively.
//! Over Q only rational roots are produced.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Ambients up to this size are scanned element by element.
const SCAN_LIMIT: u128 = 1024;

/// A root together with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootWithMultiplicity {
    pub root: FieldElement,
    pub multiplicity: u64,
}

/// Largest `m` with `(x - a)^m | f`; `f` must be nonzero.
pub(crate) fn root_multiplicity(f: &Polynomial, a: &FieldElement) -> u64 {
    let mut cur = f.clone();
    let mut m = 0;
    while !cur.is_zero() {
        // synthetic division by (x - a)
        let c = cur.coeffs();
        let n = c.len();
        if n == 1 {
            break;
        }
        let mut q = vec![FieldElement::zero(cur.spec()); n - 1];
        let mut carry = c[n - 1].clone();
        for i in (0..n - 1).rev() {
            q[i] = carry.clone();
            carry = c[i].add(&carry.mul(a));
        }
        if !carry.is_zero() {
            break;
        }
        m += 1;
        cur = Polynomial::new(cur.spec(), q);
    }
    m
}

fn mulmod(a: &Polynomial, b: &Polynomial, m: &Polynomial) -> Polynomial {
    a.mul(b).rem(m).expect("nonzero modulus")
}

fn powmod_u64(base: &Polynomial, mut e: u64, m: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::one(base.spec())
        .rem(m)
        .expect("nonzero modulus");
    let mut b = base.rem(m).expect("nonzero modulus");
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(&b, &b, m);
        }
    }
    acc
}

fn powmod_big(base: &Polynomial, e: &BigUint, m: &Polynomial) -> Polynomial {
    let b = base.rem(m).expect("nonzero modulus");
    let mut acc = Polynomial::one(base.spec())
        .rem(m)
        .expect("nonzero modulus");
    for i in (0..e.bits()).rev() {
        acc = mulmod(&acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(&acc, &b, m);
        }
    }
    acc
}

/// `a^q mod m` for `q = |field|`, by `n` successive `p`-th powers.
fn pow_field_order(a: &Polynomial, m: &Polynomial) -> Polynomial {
    let spec = a.spec();
    let p = spec.characteristic();
    let mut cur = a.rem(m).expect("nonzero modulus");
    for _ in 0..spec.degree() {
        cur = powmod_u64(&cur, p, m);
    }
    cur
}

/// Monic squarefree part (product of the distinct irreducible factors).
pub fn radical(f: &Polynomial) -> Polynomial {
    if f.is_constant() {
        return Polynomial::one(f.spec());
    }
    let d = f.derivative();
    let spec = f.spec();
    if d.is_zero() {
        // f = g(x^p) = (g with p-th-rooted coefficients)^p
        let p = spec.characteristic() as usize;
        let k = spec.degree() - 1;
        let v = (0..=f.deg() / p)
            .map(|i| f.coeff(i * p).frobenius(k).expect("finite field"))
            .collect();
        return radical(&Polynomial::new(spec, v));
    }
    let u = f.gcd_monic(&d);
    let w = f.exact_div(&u).expect("gcd divides").monic();
    if u.is_constant() || !spec.is_finite() {
        return w;
    }
    w.lcm_monic(&radical(&u))
}

/// Degrees of the irreducible factors of the squarefree part of `f`, over the
/// coefficient field of `f`, as ascending `(degree, count)` pairs.
pub fn factor_degrees(f: &Polynomial) -> Result<Vec<(u64, usize)>> {
    let spec = f.spec();
    if !spec.is_finite() {
        return Err(Error::Unsupported("factor degrees over QQ".into()));
    }
    let mut h = radical(f);
    let x = Polynomial::x(spec);
    let mut cur = x.clone();
    let mut out = Vec::new();
    let mut i = 1usize;
    while h.deg() > 0 {
        if h.deg() < 2 * i {
            out.push((h.deg() as u64, 1));
            break;
        }
        cur = pow_field_order(&cur, &h);
        let g = h.gcd_monic(&cur.sub(&x));
        if g.deg() > 0 {
            out.push((i as u64, g.deg() / i));
            h = h.exact_div(&g).expect("gcd divides");
            cur = cur.rem(&h).expect("nonzero");
        }
        i += 1;
    }
    Ok(out)
}

/// Distinct roots of `f` lying in `ambient`, in canonical order.
pub fn distinct_roots(f: &Polynomial, ambient: &FieldSpec) -> Result<Vec<FieldElement>> {
    Ok(roots_in(f, ambient)?.into_iter().map(|r| r.root).collect())
}

/// All roots of `f` in `ambient` with multiplicities, in canonical order.
///
/// `ambient` must extend the coefficient field of `f`; over Q only rational
/// roots are returned.
pub fn roots_in(f: &Polynomial, ambient: &FieldSpec) -> Result<Vec<RootWithMultiplicity>> {
    let g = f.embed(ambient)?;
    if g.is_constant() {
        return Ok(Vec::new());
    }
    let mut roots = if ambient.is_finite() {
        finite_roots(&g)
    } else {
        rational_roots(&g)?
    };
    roots.sort();
    Ok(roots
        .into_iter()
        .map(|root| {
            let multiplicity = root_multiplicity(&g, &root);
            RootWithMultiplicity { root, multiplicity }
        })
        .collect())
}

fn finite_roots(g: &Polynomial) -> Vec<FieldElement> {
    let spec = g.spec();
    if let Some(all) = FieldElement::enumerate(spec, SCAN_LIMIT) {
        return all.into_iter().filter(|a| g.eval(a).is_zero()).collect();
    }
    let x = Polynomial::x(spec);
    let xq = pow_field_order(&x, &g.monic());
    let split = g.gcd_monic(&xq.sub(&x));
    if split.deg() == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0000 ^ split.deg() as u64);
    let mut out = Vec::new();
    equal_degree_split(&split, &mut rng, &mut out);
    out
}

/// Split a monic product of distinct linear factors into its roots.
fn equal_degree_split(g: &Polynomial, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElement>) {
    let spec = g.spec();
    if g.deg() == 1 {
        out.push(g.coeff(0).neg());
        return;
    }
    let p = spec.characteristic();
    let n = spec.degree();
    let half = (BigUint::from(p).pow(n as u32) - 1u32) / 2u32;
    loop {
        let a = Polynomial::new(
            spec,
            (0..g.deg())
                .map(|_| FieldElement::random(spec, rng))
                .collect(),
        );
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(n-1)) mod g
            let mut t = a.rem(g).expect("nonzero");
            let mut acc = t.clone();
            for _ in 1..n {
                t = mulmod(&t, &t, g);
                acc = acc.add(&t);
            }
            acc
        } else {
            powmod_big(&a, &half, g).sub(&Polynomial::one(spec))
        };
        let d = g.gcd_monic(&b);
        if d.deg() > 0 && d.deg() < g.deg() {
            let e = g.exact_div(&d).expect("gcd divides").monic();
            equal_degree_split(&d, rng, out);
            equal_degree_split(&e, rng, out);
            return;
        }
    }
}

/// Divisors of a small nonnegative integer by trial division.
fn small_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    const LIMIT: u64 = 1_000_000_000_000;
    let v = n
        .to_u64()
        .filter(|&v| v <= LIMIT)
        .ok_or_else(|| Error::Unsupported(format!("rational roots with coefficient {n}")))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

/// Rational roots by the rational root theorem.
fn rational_roots(g: &Polynomial) -> Result<Vec<FieldElement>> {
    let spec = g.spec();
    let rats: Vec<BigRational> = g
        .coeffs()
        .iter()
        .map(|c| c.as_rational().unwrap().clone())
        .collect();
    let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut out = Vec::new();
    let low = ints
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial");
    if low > 0 {
        out.push(FieldElement::zero(spec));
    }
    let trimmed = &ints[low..];
    if trimmed.len() < 2 {
        return Ok(out);
    }
    let nums = small_divisors(&trimmed[0].abs())?;
    let dens = small_divisors(&trimmed[trimmed.len() - 1].abs())?;
    let mut seen = std::collections::BTreeSet::new();
    for u in &nums {
        for v in &dens {
            for s in [u.clone(), -u.clone()] {
                let cand = BigRational::new(s, v.clone());
                if !seen.insert(cand.clone()) {
                    continue;
                }
                let mut acc = BigRational::zero();
                for c in trimmed.iter().rev() {
                    acc = acc * &cand + BigRational::from_integer(c.clone());
                }
                if acc.is_zero() {
                    out.push(FieldElement::from_rational(spec, &cand)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_extension;
    use crate::poly::parse_poly;

    #[test]
    fn cube_roots_of_unity_in_f4() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f4 = make_extension(2, 2, 0).unwrap();
        let roots = roots_in(&parse_poly("x^3 - 1", &f2).unwrap(), &f4).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots
            .iter()
            .all(|r| r.multiplicity == 1 && r.root.pow(3).is_one()));
    }

    #[test]
    fn simple_cases() {
        for spec in [
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(7).unwrap(),
            FieldSpec::rationals(),
        ] {
            let r = roots_in(&parse_poly("x^2 - x", &spec).unwrap(), &spec).unwrap();
            assert_eq!(r.len(), 2);
            assert!(r[0].root.is_zero() && r[1].root.is_one());
        }
        let q = FieldSpec::rationals();
        assert!(roots_in(&parse_poly("x^2 - 2", &q).unwrap(), &q)
            .unwrap()
            .is_empty());
        let r = roots_in(&parse_poly("(2*x - 3)^2*(x + 5)", &q).unwrap(), &q).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].multiplicity, 2);
        assert_eq!(r[1].root.to_string(), "3/2");
    }

    #[test]
    fn splitting_matches_scan_in_large_fields() {
        for (p, n) in [(2u64, 12u64), (3, 7), (5, 5), (1009, 2)] {
            let k = make_extension(p, n, 4).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p * 100 + n);
            let chosen: Vec<FieldElement> =
                (0..5).map(|_| FieldElement::random(&k, &mut rng)).collect();
            let mut f = Polynomial::one(&k);
            for c in &chosen {
                f = f.mul(&Polynomial::linear_root(c));
            }
            // a factor without roots in k
            f = f.mul(&parse_poly("x^2 + x + w", &k).unwrap().pow(1));
            let got = distinct_roots(&f, &k).unwrap();
            let mut want: Vec<FieldElement> = chosen.clone();
            want.sort();
            want.dedup();
            let extra: Vec<_> = got.iter().filter(|r| !want.contains(r)).collect();
            assert!(extra.iter().all(|r| f.eval(r).is_zero()));
            assert!(want.iter().all(|r| got.contains(r)));
        }
    }

    #[test]
    fn factor_degree_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let psi = parse_poly("x^14+x^10+x^9+x^8+x^7+x^6+x^4+x+1", &f2).unwrap();
        assert_eq!(factor_degrees(&psi).unwrap(), vec![(14, 1)]);
        assert_eq!(
            factor_degrees(&parse_poly("x^2-x", &f2).unwrap()).unwrap(),
            vec![(1, 2)]
        );
        assert_eq!(
            factor_degrees(&parse_poly("x^3-1", &f2).unwrap()).unwrap(),
            vec![(1, 1), (2, 1)]
        );
    }

    #[test]
    fn radical_handles_pth_powers() {
        let f3 = FieldSpec::prime(3).unwrap();
        let f = parse_poly("(x^2+1)^3*(x+1)^2*x", &f3).unwrap();
        assert_eq!(radical(&f), parse_poly("(x^2+1)*(x+1)*x", &f3).unwrap());
        let f9 = make_extension(3, 2, 0).unwrap();
        let g = parse_poly("(x + w)^9", &f9).unwrap();
        assert_eq!(radical(&g), parse_poly("x + w", &f9).unwrap());
    }
}
