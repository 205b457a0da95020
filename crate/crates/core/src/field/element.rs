use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::{fp_poly, FieldSpec, Inner};
use crate::arith::{divisors, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::print;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Prime(u64),
    /// Exactly `degree` ascending coefficients.
    Ext(Vec<u64>),
    Rational(BigRational),
}

/// An exact element of a [`FieldSpec`].
#[derive(Clone)]
pub struct FieldElement {
    spec: FieldSpec,
    repr: Repr,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.spec == other.spec
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: residues by value, extension elements as base-p integers
/// (highest coefficient most significant), rationals by value.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => a.cmp(b),
            (Repr::Ext(a), Repr::Ext(b)) => a.iter().rev().cmp(b.iter().rev()),
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (a, b) => rank(a).cmp(&rank(b)),
        }
    }
}

fn rank(r: &Repr) -> u8 {
    match r {
        Repr::Prime(_) => 0,
        Repr::Ext(_) => 1,
        Repr::Rational(_) => 2,
    }
}

fn check_same(a: &FieldElement, b: &FieldElement) {
    assert!(a.spec == b.spec, "field mismatch: {} vs {}", a.spec, b.spec);
}

fn ext_parts(spec: &FieldSpec) -> (u64, &[u64]) {
    match &*spec.0 {
        Inner::Extension { p, modulus } => (*p, modulus),
        _ => unreachable!("not an extension field"),
    }
}

fn pad(mut v: Vec<u64>, n: usize) -> Vec<u64> {
    v.resize(n, 0);
    v
}

impl FieldElement {
    pub fn zero(spec: &FieldSpec) -> Self {
        let repr = match &*spec.0 {
            Inner::Prime { .. } => Repr::Prime(0),
            Inner::Extension { modulus, .. } => Repr::Ext(vec![0; modulus.len() - 1]),
            Inner::Rationals => Repr::Rational(BigRational::zero()),
        };
        FieldElement {
            spec: spec.clone(),
            repr,
        }
    }

    pub fn one(spec: &FieldSpec) -> Self {
        Self::from_i64(spec, 1)
    }

    pub fn from_i64(spec: &FieldSpec, v: i64) -> Self {
        Self::from_bigint(spec, &BigInt::from(v))
    }

    pub fn from_bigint(spec: &FieldSpec, v: &BigInt) -> Self {
        let reduce = |p: u64| -> u64 {
            let r = v.mod_floor(&BigInt::from(p));
            r.to_u64().expect("residue fits")
        };
        let repr = match &*spec.0 {
            Inner::Prime { p } => Repr::Prime(reduce(*p)),
            Inner::Extension { p, modulus } => {
                let mut c = vec![0; modulus.len() - 1];
                c[0] = reduce(*p);
                Repr::Ext(c)
            }
            Inner::Rationals => Repr::Rational(BigRational::from_integer(v.clone())),
        };
        FieldElement {
            spec: spec.clone(),
            repr,
        }
    }

    /// Image of a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(spec: &FieldSpec, v: &BigRational) -> Result<Self> {
        if !spec.is_finite() {
            return Ok(FieldElement {
                spec: spec.clone(),
                repr: Repr::Rational(v.clone()),
            });
        }
        let num = Self::from_bigint(spec, v.numer());
        let den = Self::from_bigint(spec, v.denom());
        num.div(&den)
    }

    /// Element with ascending coefficients in the generator `w` (reduced mod the modulus).
    pub fn from_coeffs(spec: &FieldSpec, coeffs: &[u64]) -> Self {
        match &*spec.0 {
            Inner::Prime { p } => {
                // evaluate at w = (nothing): only the constant term is meaningful
                let v = coeffs.first().copied().unwrap_or(0) % p;
                FieldElement {
                    spec: spec.clone(),
                    repr: Repr::Prime(v),
                }
            }
            Inner::Extension { p, modulus } => {
                let c: Vec<u64> = coeffs.iter().map(|x| x % p).collect();
                let r = fp_poly::rem(&c, modulus, *p);
                FieldElement {
                    spec: spec.clone(),
                    repr: Repr::Ext(pad(r, modulus.len() - 1)),
                }
            }
            Inner::Rationals => Self::from_i64(spec, coeffs.first().copied().unwrap_or(0) as i64),
        }
    }

    /// The generator `w` of an extension field.
    pub fn generator(spec: &FieldSpec) -> Option<Self> {
        match &*spec.0 {
            Inner::Extension { .. } => Some(Self::from_coeffs(spec, &[0, 1])),
            _ => None,
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Prime(v) => *v == 0,
            Repr::Ext(c) => c.iter().all(|&x| x == 0),
            Repr::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Prime(v) => *v == 1,
            Repr::Ext(c) => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
            Repr::Rational(q) => q.is_one(),
        }
    }

    /// Residue of a prime-field element.
    pub fn prime_value(&self) -> Option<u64> {
        match &self.repr {
            Repr::Prime(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Coefficients in the generator (length = degree); `None` over Q.
    pub fn coefficients(&self) -> Option<Vec<u64>> {
        match &self.repr {
            Repr::Prime(v) => Some(vec![*v]),
            Repr::Ext(c) => Some(c.clone()),
            Repr::Rational(_) => None,
        }
    }

    fn with(&self, repr: Repr) -> Self {
        FieldElement {
            spec: self.spec.clone(),
            repr,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        check_same(self, other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => {
                let p = self.spec.characteristic();
                Repr::Prime(((*a as u128 + *b as u128) % p as u128) as u64)
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let p = self.spec.characteristic();
                Repr::Ext(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            _ => unreachable!(),
        };
        self.with(repr)
    }

    pub fn neg(&self) -> Self {
        let repr = match &self.repr {
            Repr::Prime(a) => {
                let p = self.spec.characteristic();
                Repr::Prime((p - a) % p)
            }
            Repr::Ext(a) => {
                let p = self.spec.characteristic();
                Repr::Ext(a.iter().map(|x| (p - x) % p).collect())
            }
            Repr::Rational(a) => Repr::Rational(-a),
        };
        self.with(repr)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        check_same(self, other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => {
                Repr::Prime(mul_mod(*a, *b, self.spec.characteristic()))
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let (p, m) = ext_parts(&self.spec);
                Repr::Ext(pad(fp_poly::mulmod(a, b, m, p), a.len()))
            }
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            _ => unreachable!(),
        };
        self.with(repr)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivideByZero);
        }
        let repr = match &self.repr {
            Repr::Prime(a) => {
                let p = self.spec.characteristic();
                Repr::Prime(pow_mod(*a, p - 2, p))
            }
            Repr::Ext(a) => {
                let (p, m) = ext_parts(&self.spec);
                let mut t = a.clone();
                fp_poly::trim(&mut t);
                let inv = fp_poly::inv_mod(&t, m, p).expect("modulus is irreducible");
                Repr::Ext(pad(inv, a.len()))
            }
            Repr::Rational(a) => Repr::Rational(a.recip()),
        };
        Ok(self.with(repr))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.spec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        let mut acc = Self::one(&self.spec);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// `self^(p^k)`. Over Q only `k = 0` is allowed.
    pub fn frobenius(&self, k: u64) -> Result<Self> {
        if !self.spec.is_finite() {
            if k == 0 {
                return Ok(self.clone());
            }
            return Err(Error::Unsupported("Frobenius over QQ".into()));
        }
        let p = self.spec.characteristic();
        let n = self.spec.degree();
        let mut x = self.clone();
        for _ in 0..(k % n) {
            x = x.pow(p);
        }
        Ok(x)
    }

    /// Degree of the element over the prime field: least `d` with `self^(p^d) = self`.
    pub fn element_degree(&self) -> Result<u64> {
        if !self.spec.is_finite() {
            return Err(Error::Unsupported("element degree over QQ".into()));
        }
        let n = self.spec.degree();
        for d in divisors(n) {
            if &self.frobenius(d)? == self {
                return Ok(d);
            }
        }
        unreachable!("x^(p^n) = x holds for every element")
    }

    /// Image under the canonical embedding into `target`.
    ///
    /// Prime-field and rational elements map to constants. An element of
    /// F_{p^a} maps into F_{p^b} (a | b) by sending the generator to the least
    /// root (in canonical order) of its modulus in the target.
    pub fn embed(&self, target: &FieldSpec) -> Result<Self> {
        if &self.spec == target {
            return Ok(self.clone());
        }
        if !self.spec.embeds_into(target) {
            return Err(Error::IncompatibleFields(format!(
                "{} does not embed into {}",
                self.spec, target
            )));
        }
        match &self.repr {
            Repr::Prime(v) => Ok(Self::from_coeffs(target, &[*v])),
            Repr::Rational(_) => Ok(self.clone()),
            Repr::Ext(c) => {
                let image = generator_image(&self.spec, target)?;
                let g = Self::from_coeffs(target, &image);
                let mut acc = Self::zero(target);
                for &ci in c.iter().rev() {
                    acc = acc.mul(&g).add(&Self::from_coeffs(target, &[ci]));
                }
                Ok(acc)
            }
        }
    }

    /// Preimage under [`embed`](Self::embed) from `base`, if `self` lies in its image.
    pub fn descend(&self, base: &FieldSpec) -> Option<Self> {
        if &self.spec == base {
            return Some(self.clone());
        }
        if !base.embeds_into(&self.spec) {
            return None;
        }
        match (&self.repr, &*base.0) {
            (Repr::Ext(c), Inner::Prime { .. }) => c[1..]
                .iter()
                .all(|&x| x == 0)
                .then(|| Self::from_coeffs(base, &[c[0]])),
            (Repr::Ext(c), Inner::Extension { p, modulus }) => {
                let k = modulus.len() - 1;
                let image = generator_image(base, &self.spec).ok()?;
                let g = Self::from_coeffs(&self.spec, &image);
                // columns: coefficient vectors of g^i, i < k
                let mut cols = Vec::with_capacity(k);
                let mut cur = Self::one(&self.spec);
                for _ in 0..k {
                    cols.push(cur.coefficients().unwrap());
                    cur = cur.mul(&g);
                }
                let sol = solve_fp(&cols, c, *p)?;
                Some(Self::from_coeffs(base, &sol))
            }
            _ => None,
        }
    }

    /// All elements of a finite field with at most `limit` elements, in index order.
    pub fn enumerate(spec: &FieldSpec, limit: u128) -> Option<Vec<Self>> {
        let q = spec.order()?;
        if q > limit {
            return None;
        }
        let p = spec.characteristic();
        let n = spec.degree() as usize;
        Some(
            (0..q as u64)
                .map(|mut idx| {
                    let mut c = vec![0u64; n];
                    for slot in c.iter_mut() {
                        *slot = idx % p;
                        idx /= p;
                    }
                    Self::from_coeffs(spec, &c)
                })
                .collect(),
        )
    }

    /// Uniform element of a finite field; over Q a small random integer.
    pub fn random<R: Rng + ?Sized>(spec: &FieldSpec, rng: &mut R) -> Self {
        match &*spec.0 {
            Inner::Prime { p } => Self::from_coeffs(spec, &[rng.gen_range(0..*p)]),
            Inner::Extension { p, modulus } => {
                let c: Vec<u64> = (0..modulus.len() - 1)
                    .map(|_| rng.gen_range(0..*p))
                    .collect();
                Self::from_coeffs(spec, &c)
            }
            Inner::Rationals => Self::from_i64(spec, rng.gen_range(-20..=20)),
        }
    }

    /// `[c0,c1,...]` for finite fields, `a` or `a/b` for rationals.
    pub fn to_vector_string(&self) -> String {
        match &self.repr {
            Repr::Prime(v) => format!("[{v}]"),
            Repr::Ext(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
            Repr::Rational(q) => q.to_string(),
        }
    }

    /// Inverse of [`to_vector_string`](Self::to_vector_string).
    pub fn from_vector_string(spec: &FieldSpec, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            if !spec.is_finite() {
                return Err(Error::Format(format!("vector `{s}` for QQ element")));
            }
            let coeffs = body
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Format(format!("bad coefficient vector `{s}`")))?;
            if coeffs.len() as u64 != spec.degree() {
                return Err(Error::Format(format!(
                    "vector `{s}` has wrong length for {spec}"
                )));
            }
            return Ok(Self::from_coeffs(spec, &coeffs));
        }
        if spec.is_finite() {
            return Err(Error::Format(format!(
                "expected coefficient vector, got `{s}`"
            )));
        }
        let q: BigRational = s
            .parse()
            .map_err(|_| Error::Format(format!("bad rational `{s}`")))?;
        Ok(FieldElement {
            spec: spec.clone(),
            repr: Repr::Rational(q),
        })
    }

    /// Rendering as a coefficient inside a polynomial: (negative, magnitude, compound).
    pub(crate) fn as_coef(&self) -> print::Coef {
        match &self.repr {
            Repr::Prime(v) => print::int_coef(print::symmetric(*v, self.spec.characteristic())),
            Repr::Rational(q) => {
                let mag = q.abs();
                print::Coef {
                    negative: q.is_negative(),
                    magnitude: if mag.is_one() {
                        String::new()
                    } else {
                        mag.to_string()
                    },
                    compound: false,
                }
            }
            Repr::Ext(c) => {
                let p = self.spec.characteristic();
                let nonzero: Vec<usize> = (0..c.len()).filter(|&i| c[i] != 0).collect();
                if nonzero.len() == 1 {
                    let i = nonzero[0];
                    let s = print::symmetric(c[i], p);
                    let body = print::render(vec![(i, print::int_coef(s.abs()))], "w");
                    print::Coef {
                        negative: s < 0,
                        magnitude: if body == "1" { String::new() } else { body },
                        compound: false,
                    }
                } else {
                    print::Coef {
                        negative: false,
                        magnitude: print::render_fp(c, p, "w"),
                        compound: true,
                    }
                }
            }
        }
    }
}

/// Solve `sum_i x_i * cols[i] = target` over F_p, returning `x` when solvable.
fn solve_fp(cols: &[Vec<u64>], target: &[u64], p: u64) -> Option<Vec<u64>> {
    let k = cols.len();
    let rows = target.len();
    // augmented matrix rows x (k + 1)
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[r]).collect();
            row.push(target[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = fp_poly::inv_scalar(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..=k {
                    let t = mul_mod(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - t) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[k] != 0) {
        return None;
    }
    let mut x = vec![0u64; k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][k];
    }
    Some(x)
}

type EmbedKey = (FieldSpec, FieldSpec);

fn embed_cache() -> &'static Mutex<HashMap<EmbedKey, Vec<u64>>> {
    static CACHE: OnceLock<Mutex<HashMap<EmbedKey, Vec<u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (in the target generator) of the image of the source generator.
fn generator_image(source: &FieldSpec, target: &FieldSpec) -> Result<Vec<u64>> {
    let key = (source.clone(), target.clone());
    if let Some(v) = embed_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let (p, modulus) = ext_parts(source);
    let base = source.prime_subfield();
    let coeffs: Vec<FieldElement> = modulus
        .iter()
        .map(|&c| FieldElement::from_coeffs(&base, &[c]))
        .collect();
    let poly = crate::poly::Polynomial::new(&base, coeffs);
    let roots = crate::poly::roots::distinct_roots(&poly, target)?;
    let root = roots.into_iter().min().ok_or_else(|| {
        Error::IncompatibleFields(format!(
            "modulus of {source} has no root in {target} (p = {p})"
        ))
    })?;
    let image = root.coefficients().unwrap();
    embed_cache().lock().unwrap().insert(key, image.clone());
    Ok(image)
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Prime(v) => write!(f, "{}", print::symmetric(*v, self.spec.characteristic())),
            Repr::Ext(c) => write!(
                f,
                "{}",
                print::render_fp(c, self.spec.characteristic(), "w")
            ),
            Repr::Rational(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                FieldElement::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}
