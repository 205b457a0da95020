//! Dense univariate polynomials over a [`FieldSpec`].

pub mod parse;
pub mod roots;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::print;

pub use parse::parse_poly;
pub use roots::{factor_degrees, radical, roots_in, RootWithMultiplicity};

/// Polynomial with ascending coefficients; the zero polynomial has none.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(spec: &FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.spec() == spec));
        Polynomial {
            spec: spec.clone(),
            coeffs,
        }
    }

    pub fn zero(spec: &FieldSpec) -> Self {
        Polynomial {
            spec: spec.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(spec: &FieldSpec) -> Self {
        Self::constant(FieldElement::one(spec))
    }

    pub fn x(spec: &FieldSpec) -> Self {
        Self::monomial(FieldElement::one(spec), 1)
    }

    pub fn constant(c: FieldElement) -> Self {
        let spec = c.spec().clone();
        Self::new(&spec, vec![c])
    }

    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let spec = c.spec().clone();
        let mut v = vec![FieldElement::zero(&spec); k];
        v.push(c);
        Self::new(&spec, v)
    }

    /// Polynomial from ascending integer coefficients.
    pub fn from_ints(spec: &FieldSpec, coeffs: &[i64]) -> Self {
        Self::new(
            spec,
            coeffs
                .iter()
                .map(|&c| FieldElement::from_i64(spec, c))
                .collect(),
        )
    }

    /// `x - a`.
    pub fn linear_root(a: &FieldElement) -> Self {
        let spec = a.spec().clone();
        Self::new(&spec, vec![a.neg(), FieldElement::one(&spec)])
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(&self.spec))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(&self.spec))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    fn check(&self, other: &Self) {
        assert!(
            self.spec == other.spec,
            "polynomials over different fields: {} vs {}",
            self.spec,
            other.spec
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self::new(&self.spec, v)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.spec, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(&self.spec, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.spec);
        }
        let mut v =
            vec![FieldElement::zero(&self.spec); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(&self.spec, v)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::one(&self.spec);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder; fails on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor);
        if divisor.is_zero() {
            return Err(Error::DivideByZero);
        }
        let dd = divisor.deg();
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(&self.spec), self.clone()));
        }
        let lead_inv = divisor.leading().inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![FieldElement::zero(&self.spec); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let f = r[i].mul(&lead_inv);
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = r[k].sub(&f.mul(dj));
            }
            q[i - dd] = f;
        }
        r.truncate(dd);
        Ok((Self::new(&self.spec, q), Self::new(&self.spec, r)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic associate (zero stays zero).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd_monic(&self, other: &Self) -> Self {
        self.check(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic lcm of two nonzero polynomials.
    pub fn lcm_monic(&self, other: &Self) -> Self {
        let g = self.gcd_monic(other);
        self.mul(other).exact_div(&g).expect("gcd divides").monic()
    }

    /// `self(inner(x))` by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Self {
        self.check(inner);
        let mut acc = Self::zero(&self.spec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&FieldElement::from_i64(&self.spec, i as i64)))
            .collect();
        Self::new(&self.spec, v)
    }

    /// Value at `a`, which may lie in an extension of the coefficient field.
    pub fn eval(&self, a: &FieldElement) -> FieldElement {
        if a.spec() == &self.spec {
            let mut acc = FieldElement::zero(&self.spec);
            for c in self.coeffs.iter().rev() {
                acc = acc.mul(a).add(c);
            }
            return acc;
        }
        self.embed(a.spec())
            .expect("evaluation point in an extension")
            .eval(a)
    }

    /// Whether the formal derivative vanishes, i.e. `f` is a polynomial in `x^p`.
    /// Always false in characteristic 0.
    pub fn in_kxp(&self) -> bool {
        self.spec.characteristic() != 0 && self.derivative().is_zero()
    }

    /// Multiplicity of `a` as a root of `f(x) - f(a)`.
    pub fn multiplicity(&self, a: &FieldElement) -> u64 {
        let f = if a.spec() == &self.spec {
            self.clone()
        } else {
            self.embed(a.spec()).expect("point in an extension")
        };
        let shifted = f.sub(&Self::constant(f.eval(a)));
        roots::root_multiplicity(&shifted, a)
    }

    /// Coefficientwise image in an extension field.
    pub fn embed(&self, target: &FieldSpec) -> Result<Self> {
        if &self.spec == target {
            return Ok(self.clone());
        }
        let v = self
            .coeffs
            .iter()
            .map(|c| c.embed(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(target, v))
    }

    /// Coefficientwise preimage in a subfield, if every coefficient lies in it.
    pub fn descend(&self, base: &FieldSpec) -> Option<Self> {
        let v = self
            .coeffs
            .iter()
            .map(|c| c.descend(base))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(base, v))
    }

    /// `(f - f(0)) / lc(f)`: monic with zero constant term.
    pub fn normalized(&self) -> Self {
        if self.is_constant() {
            return self.clone();
        }
        let c0 = self.coeff(0);
        self.sub(&Self::constant(c0)).monic()
    }

    pub fn is_normalized(&self) -> bool {
        self.is_monic() && self.coeff(0).is_zero()
    }

    /// Canonical text using `var` as the indeterminate.
    pub fn to_string_in(&self, var: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.as_coef()))
            .collect();
        print::render(terms, var)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.spec)
    }
}
