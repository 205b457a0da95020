//! Pairs with a known minimal common composite, and right-component recovery.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd, lcm, multiplicative_order, pow_mod};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::Polynomial;
use crate::search::extract_cofactor;

/// Largest `expected_h` degree that is built explicitly.
pub const MATERIALIZE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    CyclicAdditive,
    CyclicShifted,
    TameCyclic,
    TameDickson,
    Deg2Pair,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::CyclicAdditive => "CyclicAdditive",
            FamilyTag::CyclicShifted => "CyclicShifted",
            FamilyTag::TameCyclic => "TameCyclic",
            FamilyTag::TameDickson => "TameDickson",
            FamilyTag::Deg2Pair => "Deg2Pair",
        })
    }
}

impl std::str::FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "CyclicAdditive" => FamilyTag::CyclicAdditive,
            "CyclicShifted" => FamilyTag::CyclicShifted,
            "TameCyclic" => FamilyTag::TameCyclic,
            "TameDickson" => FamilyTag::TameDickson,
            "Deg2Pair" => FamilyTag::Deg2Pair,
            other => return Err(Error::Format(format!("unknown family tag `{other}`"))),
        })
    }
}

/// The degree `base * p^exp`, kept symbolic because it can be astronomically large.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeFormula {
    pub base: u64,
    pub p: u64,
    pub exp: u64,
}

impl DegreeFormula {
    pub fn plain(n: u64) -> Self {
        DegreeFormula {
            base: n,
            p: 1,
            exp: 0,
        }
    }

    /// The value, when it fits in a `u128`.
    pub fn value(&self) -> Option<u128> {
        let e = u32::try_from(self.exp).ok()?;
        (self.p as u128)
            .checked_pow(e)?
            .checked_mul(self.base as u128)
    }
}

impl fmt::Display for DegreeFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            0 => write!(f, "{}", self.base),
            1 => write!(f, "{}*{}", self.base, self.p),
            e => write!(f, "{}*{}^{}", self.base, self.p, e),
        }
    }
}

impl std::str::FromStr for DegreeFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("bad degree `{s}`"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        match s.split_once('*') {
            None => Ok(DegreeFormula::plain(num(s)?)),
            Some((b, rest)) => {
                let (p, e) = match rest.split_once('^') {
                    Some((p, e)) => (num(p)?, num(e)?),
                    None => (num(rest)?, 1),
                };
                Ok(DegreeFormula {
                    base: num(b)?,
                    p,
                    exp: e,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    pub tag: FamilyTag,
    pub f1: Polynomial,
    pub f2: Polynomial,
    /// Normalized minimal common composite, when small enough to build.
    pub expected_h: Option<Polynomial>,
    pub expected_min_degree: DegreeFormula,
    /// Generator parameters as `name=value` pairs, for reports and corpora.
    pub params: Vec<(String, String)>,
}

fn param(name: &str, v: impl fmt::Display) -> (String, String) {
    (name.to_string(), v.to_string())
}

/// `D_n(x, alpha)` by `D_n = x D_{n-1} - alpha D_{n-2}`, `D_0 = 2`, `D_1 = x`.
pub fn dickson(n: u64, alpha: &FieldElement) -> Polynomial {
    let spec = alpha.spec();
    let x = Polynomial::x(spec);
    let mut prev = Polynomial::constant(FieldElement::from_i64(spec, 2));
    if n == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..n {
        let next = x.mul(&cur).sub(&prev.scale(alpha));
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `D_n(x, alpha) = sum n/(n-i) C(n-i, i) (-alpha)^i x^(n-2i)`, coefficients formed over Z.
pub fn dickson_closed_form(n: u64, alpha: &FieldElement) -> Polynomial {
    let spec = alpha.spec();
    if n == 0 {
        return Polynomial::constant(FieldElement::from_i64(spec, 2));
    }
    let mut out = Polynomial::zero(spec);
    let neg_alpha = alpha.neg();
    for i in 0..=n / 2 {
        let binom = binomial(n - i, i);
        let (q, r) = (BigInt::from(n) * binom).div_rem(&BigInt::from(n - i));
        debug_assert!(r == BigInt::from(0));
        let c = FieldElement::from_bigint(spec, &q).mul(&neg_alpha.pow(i));
        out = out.add(&Polynomial::monomial(c, (n - 2 * i) as usize));
    }
    out
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn additive(spec: &FieldSpec, q_exp: u64) -> Polynomial {
    // x^(p^q_exp) - x
    let p = spec.characteristic();
    let deg = p.pow(q_exp as u32) as usize;
    Polynomial::monomial(FieldElement::one(spec), deg).sub(&Polynomial::x(spec))
}

fn materialize(
    spec: &FieldSpec,
    degree: &DegreeFormula,
    power: u64,
    q_exp: u64,
) -> Option<Polynomial> {
    // (x^(p^q_exp) - x)^power, normalized (already monic with zero constant)
    (degree.value()? <= MATERIALIZE_LIMIT as u128).then(|| additive(spec, q_exp).pow(power))
}

/// `(x^n, x^(p^r) - x)` over F_p with minimal composite `(x^(p^(rd)) - x)^n`,
/// `d` the order of `p^r` modulo `n`.
pub fn additive_family(n: u64, p: u64, r: u64) -> Result<FamilyInstance> {
    let spec =
        FieldSpec::prime(p).map_err(|_| Error::InvalidParams(format!("{p} is not prime")))?;
    if n == 0 || r == 0 || n.is_multiple_of(p) {
        return Err(Error::InvalidParams(format!(
            "need n, r >= 1 and p not dividing n (n={n}, p={p}, r={r})"
        )));
    }
    let d = multiplicative_order(pow_mod(p, r, n), n).expect("p is a unit mod n");
    let degree = DegreeFormula {
        base: n,
        p,
        exp: r * d,
    };
    let expected_h = materialize(&spec, &degree, n, r * d);
    if p.checked_pow(r as u32).is_none_or(|q| q > 1 << 20) {
        return Err(Error::InvalidParams(format!(
            "{p}^{r} is too large to build"
        )));
    }
    Ok(FamilyInstance {
        tag: FamilyTag::CyclicAdditive,
        f1: Polynomial::monomial(FieldElement::one(&spec), n as usize),
        f2: additive(&spec, r),
        expected_h,
        expected_min_degree: degree,
        params: vec![param("n", n), param("p", p), param("r", r), param("d", d)],
    })
}

/// `(x^n, (x-1)^m)` over F_p with minimal composite `(x^(p^d) - x)^lcm(m,n)`,
/// `d` the order of `p` modulo `lcm(m, n)`.
pub fn shifted_family(n: u64, m: u64, p: u64) -> Result<FamilyInstance> {
    let spec =
        FieldSpec::prime(p).map_err(|_| Error::InvalidParams(format!("{p} is not prime")))?;
    if n < 2 || m < 2 || n.is_multiple_of(p) || m.is_multiple_of(p) {
        return Err(Error::InvalidParams(format!(
            "need n, m > 1 prime to p (n={n}, m={m}, p={p})"
        )));
    }
    let l = lcm(n, m);
    let d = multiplicative_order(p % l, l).expect("p is a unit mod lcm");
    let degree = DegreeFormula { base: l, p, exp: d };
    let one = FieldElement::one(&spec);
    Ok(FamilyInstance {
        tag: FamilyTag::CyclicShifted,
        f1: Polynomial::monomial(one.clone(), n as usize),
        f2: Polynomial::x(&spec).sub(&Polynomial::constant(one)).pow(m),
        expected_h: materialize(&spec, &degree, l, d),
        expected_min_degree: degree,
        params: vec![param("n", n), param("m", m), param("p", p), param("d", d)],
    })
}

/// `(x^2 + a x, x^2 + b x)` over a field of characteristic `p > 0`: minimal
/// degree `2p` when `a != b`, with the composite written down explicitly.
pub fn deg2_pair(a: &FieldElement, b: &FieldElement) -> Result<FamilyInstance> {
    let spec = a.spec().clone();
    let p = spec.characteristic();
    if p == 0 || b.spec() != &spec {
        return Err(Error::InvalidParams(
            "need a, b in one field of positive characteristic".into(),
        ));
    }
    let x = Polynomial::x(&spec);
    let f1 = x.mul(&x).add(&x.scale(a));
    let f2 = x.mul(&x).add(&x.scale(b));
    let params = vec![
        param("a", a.to_vector_string()),
        param("b", b.to_vector_string()),
        param("p", p),
    ];
    if a == b {
        return Ok(FamilyInstance {
            tag: FamilyTag::Deg2Pair,
            expected_h: Some(f1.normalized()),
            f1,
            f2,
            expected_min_degree: DegreeFormula::plain(2),
            params,
        });
    }
    let h = if p == 2 {
        // (x^2 + b(a+b)x) o f1
        let s = a.add(b);
        x.mul(&x).add(&x.scale(&b.mul(&s))).compose(&f1)
    } else {
        // f1 = (x - u)^2 - u^2 with u = -a/2; likewise f2 with v = -b/2
        let two = FieldElement::from_i64(&spec, 2);
        let u = a.neg().div(&two)?;
        let v = b.neg().div(&two)?;
        let c = u.sub(&v);
        let cp = c.pow(p - 1);
        let outer = Polynomial::monomial(FieldElement::one(&spec), p as usize)
            .sub(&Polynomial::monomial(
                two.mul(&cp),
                (p as usize).div_ceil(2),
            ))
            .add(&x.scale(&cp.mul(&cp)));
        let sq = x.sub(&Polynomial::constant(u)).pow(2);
        outer.compose(&sq)
    };
    Ok(FamilyInstance {
        tag: FamilyTag::Deg2Pair,
        f1,
        f2,
        expected_h: Some(h.normalized()),
        expected_min_degree: DegreeFormula::plain(2 * p),
        params,
    })
}

/// The two shapes of tame pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TameKind {
    /// `x^r P(x^n)` against `x^n`.
    Cyclic { r: u64, n: u64, p_poly: Polynomial },
    /// `D_m(x, alpha)` against `D_n(x, alpha)`.
    Dickson { m: u64, n: u64, alpha: FieldElement },
}

/// Outer and inner degree-one maps and the shared right factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameParams {
    pub l1: Polynomial,
    pub l2: Polynomial,
    pub h: Polynomial,
}

impl TameParams {
    pub fn identity(spec: &FieldSpec) -> Self {
        let x = Polynomial::x(spec);
        TameParams {
            l1: x.clone(),
            l2: x.clone(),
            h: x,
        }
    }
}

/// `f1 = l1 o A o h`, `f2 = l2 o B o h` with `A`, `B` a cyclic or Dickson pair
/// of coprime degrees, so the minimal composite has degree `lcm(deg f1, deg f2)`.
pub fn tame_family(kind: &TameKind, params: &TameParams) -> Result<FamilyInstance> {
    let spec = params.h.spec().clone();
    let p = spec.characteristic();
    if params.l1.deg() != 1 || params.l2.deg() != 1 || params.h.is_constant() {
        return Err(Error::InvalidParams(
            "l1, l2 must have degree one and h must be nonconstant".into(),
        ));
    }
    let (a, b, composite, tag, mut list) = match kind {
        TameKind::Cyclic { r, n, p_poly } => {
            if *r == 0 || *n == 0 || gcd(*r, *n) != 1 {
                return Err(Error::InvalidParams(format!(
                    "need r, n >= 1 coprime (r={r}, n={n})"
                )));
            }
            let xn = Polynomial::monomial(FieldElement::one(&spec), *n as usize);
            let a = Polynomial::monomial(FieldElement::one(&spec), *r as usize)
                .mul(&p_poly.compose(&xn));
            let composite = xn.compose(&a);
            (
                a,
                xn,
                composite,
                FamilyTag::TameCyclic,
                vec![param("r", r), param("n", n), param("P", p_poly)],
            )
        }
        TameKind::Dickson { m, n, alpha } => {
            if *m == 0 || *n == 0 || gcd(*m, *n) != 1 {
                return Err(Error::InvalidParams(format!(
                    "need m, n >= 1 coprime (m={m}, n={n})"
                )));
            }
            let composite = dickson(m * n, alpha);
            let alpha_s = alpha.to_vector_string();
            (
                dickson(*m, alpha),
                dickson(*n, alpha),
                composite,
                FamilyTag::TameDickson,
                vec![param("m", m), param("n", n), param("alpha", alpha_s)],
            )
        }
    };
    let k = params.h.deg() as u64;
    let (da, db) = (a.deg() as u64 * k, b.deg() as u64 * k);
    if a.deg() < 1 || b.deg() < 1 || (p != 0 && (da % p == 0 || db % p == 0)) {
        return Err(Error::InvalidParams(format!(
            "degrees {da}, {db} must be positive and prime to {p}"
        )));
    }
    let f1 = params.l1.compose(&a).compose(&params.h);
    let f2 = params.l2.compose(&b).compose(&params.h);
    list.push(param("h", &params.h));
    list.push(param("l1", &params.l1));
    list.push(param("l2", &params.l2));
    Ok(FamilyInstance {
        tag,
        f1,
        f2,
        expected_h: Some(composite.compose(&params.h).normalized()),
        expected_min_degree: DegreeFormula::plain(lcm(da, db)),
        params: list,
    })
}

/// Write `f = g o r` with `deg r = n`, `r` monic and `r(0) = 0`, when the
/// cofactor degree `m = deg f / n` is invertible in the field.
///
/// The coefficients of `r` below `x^n` are fixed one at a time from the top
/// `n` coefficients of `f`, then `g` is recovered by expansion in `r`.
pub fn tame_right_component(f: &Polynomial, n: u64) -> Result<Option<(Polynomial, Polynomial)>> {
    let spec = f.spec();
    let deg = f.deg() as u64;
    if n == 0 || f.is_constant() || !deg.is_multiple_of(n) {
        return Err(Error::InvalidParams(format!(
            "{n} does not divide deg f = {deg}"
        )));
    }
    let m = deg / n;
    let p = spec.characteristic();
    if p != 0 && m.is_multiple_of(p) {
        return Err(Error::InvalidParams(format!(
            "cofactor degree {m} is divisible by the characteristic"
        )));
    }
    let lead_inv = f.leading().inv()?;
    let target = f.scale(&lead_inv);
    let m_inv = FieldElement::from_i64(spec, m as i64).inv()?;
    let (n, m_us) = (n as usize, m);
    let mut coeffs = vec![FieldElement::zero(spec); n + 1];
    coeffs[n] = FieldElement::one(spec);
    for j in 1..n {
        let r = Polynomial::new(spec, coeffs.clone());
        let cur = r.pow(m_us).coeff(n * m as usize - j);
        coeffs[n - j] = target.coeff(n * m as usize - j).sub(&cur).mul(&m_inv);
    }
    let r = Polynomial::new(spec, coeffs);
    Ok(extract_cofactor(f, &r).map(|g| (g, r)))
}

/// A shared normalized right component of degree `gcd(deg f1, deg f2)`, if the
/// tame construction finds one for both.
pub fn common_right_component(f1: &Polynomial, f2: &Polynomial) -> Option<Polynomial> {
    let n = gcd(f1.deg() as u64, f2.deg() as u64);
    let (_, r1) = tame_right_component(f1, n).ok()??;
    let (_, r2) = tame_right_component(f2, n).ok()??;
    (r1 == r2).then_some(r1)
}

fn random_poly<R: Rng + ?Sized>(
    spec: &FieldSpec,
    deg: usize,
    monic: bool,
    rng: &mut R,
) -> Polynomial {
    let mut c: Vec<FieldElement> = (0..=deg).map(|_| FieldElement::random(spec, rng)).collect();
    if monic {
        c[deg] = FieldElement::one(spec);
    }
    while c[deg].is_zero() {
        c[deg] = FieldElement::random(spec, rng);
    }
    Polynomial::new(spec, c)
}

fn random_nonzero<R: Rng + ?Sized>(spec: &FieldSpec, rng: &mut R) -> FieldElement {
    loop {
        let e = FieldElement::random(spec, rng);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A random tame pair with a nontrivial shared right factor, over a field
/// whose characteristic is zero or large enough for small degrees.
pub fn random_tame_instance<R: Rng + ?Sized>(
    spec: &FieldSpec,
    rng: &mut R,
) -> Result<FamilyInstance> {
    const SHAPES: [(u64, u64); 6] = [(2, 3), (3, 2), (3, 4), (2, 5), (4, 3), (3, 5)];
    for _ in 0..100 {
        let (a, b) = SHAPES[rng.gen_range(0..SHAPES.len())];
        let k = rng.gen_range(1..=3usize);
        let mut h = random_poly(spec, k, false, rng);
        if k == 1 {
            h = Polynomial::x(spec);
        }
        let params = TameParams {
            l1: random_poly(spec, 1, false, rng),
            l2: random_poly(spec, 1, false, rng),
            h,
        };
        let kind = if rng.gen_bool(0.5) {
            // x^r P(x^n) with deg = a, against x^b
            let deg_p = (a / b) as usize;
            let r = a - b * deg_p as u64;
            if r == 0 {
                continue;
            }
            let mut p_poly = random_poly(spec, deg_p, false, rng);
            let mut c = p_poly.coeffs().to_vec();
            c[0] = random_nonzero(spec, rng);
            p_poly = Polynomial::new(spec, c);
            TameKind::Cyclic { r, n: b, p_poly }
        } else {
            TameKind::Dickson {
                m: a,
                n: b,
                alpha: random_nonzero(spec, rng),
            }
        };
        match tame_family(&kind, &params) {
            Ok(inst) => return Ok(inst),
            Err(Error::InvalidParams(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidParams(format!("no tame shape fits {spec}")))
}

/// A small corpus covering every family, deterministic in `seed`.
pub fn sample_corpus(seed: u64, count: usize) -> Result<Vec<FamilyInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (n, p, r) in [(3, 2, 1), (2, 3, 1), (5, 2, 1), (4, 3, 1), (3, 2, 2)] {
        out.push(additive_family(n, p, r)?);
    }
    for (n, m, p) in [(2, 3, 5), (3, 2, 7), (11, 13, 2), (1447, 1451, 2)] {
        out.push(shifted_family(n, m, p)?);
    }
    for p in [2u64, 3, 5, 7, 11] {
        let spec = FieldSpec::prime(p)?;
        for _ in 0..count {
            let a = FieldElement::random(&spec, &mut rng);
            let b = FieldElement::random(&spec, &mut rng);
            out.push(deg2_pair(&a, &b)?);
        }
    }
    for spec in [FieldSpec::rationals(), FieldSpec::prime(101)?] {
        for _ in 0..count {
            out.push(random_tame_instance(&spec, &mut rng)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn small_dickson() {
        let q = FieldSpec::rationals();
        let one = FieldElement::one(&q);
        assert_eq!(dickson(1, &one), parse_poly("x", &q).unwrap());
        assert_eq!(dickson(3, &one), parse_poly("x^3-3*x", &q).unwrap());
        let a = FieldElement::from_i64(&q, 5);
        assert_eq!(dickson(2, &a), parse_poly("x^2-10", &q).unwrap());
    }

    #[test]
    fn degree_formula_text() {
        let d = DegreeFormula {
            base: 143,
            p: 2,
            exp: 60,
        };
        assert_eq!(d.to_string(), "143*2^60");
        assert_eq!("143*2^60".parse::<DegreeFormula>().unwrap(), d);
        assert_eq!(d.value(), Some(143u128 << 60));
        assert_eq!("12".parse::<DegreeFormula>().unwrap().value(), Some(12));
    }

    #[test]
    fn additive_examples() {
        let inst = additive_family(3, 2, 1).unwrap();
        let k = FieldSpec::prime(2).unwrap();
        assert_eq!(inst.expected_h, Some(parse_poly("(x^4-x)^3", &k).unwrap()));
        assert!(matches!(
            additive_family(4, 2, 1),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn right_component_examples() {
        let q = FieldSpec::rationals();
        let f = parse_poly("(x^2+1)^3 + (x^2+1)", &q).unwrap();
        let (g, r) = tame_right_component(&f, 2).unwrap().unwrap();
        assert_eq!(r, parse_poly("x^2", &q).unwrap());
        assert_eq!(g.compose(&r), f);
        let (g, r) = tame_right_component(&parse_poly("x^6", &q).unwrap(), 3)
            .unwrap()
            .unwrap();
        assert_eq!(
            (g.to_string(), r.to_string()),
            ("x^2".to_string(), "x^3".to_string())
        );
        let k = FieldSpec::prime(2).unwrap();
        let f = parse_poly("x^2+x", &k).unwrap();
        let (g, r) = tame_right_component(&f, 2).unwrap().unwrap();
        assert_eq!((g.deg(), &r), (1, &f));
        assert!(tame_right_component(&parse_poly("x^4+x", &k).unwrap(), 2).is_err());
    }
}
