//! Exact arithmetic in F_p, F_{p^n} and Q.
//!
//! A [`FieldSpec`] names the field; a [`FieldElement`] carries its spec and an
//! exact representation. Extension fields are F_p[t]/(m(t)) for a recorded
//! monic irreducible modulus `m`; the generator `t mod m` prints as `w`.

mod element;
pub(crate) mod fp_poly;

pub use element::FieldElement;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// The three supported kinds of field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Extension,
    Rationals,
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum Inner {
    Prime { p: u64 },
    Extension { p: u64, modulus: Vec<u64> },
    Rationals,
}

/// Identifies a field: F_p, F_p[t]/(m), or Q. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > (1 << 62) {
            return Err(Error::InvalidField(format!("characteristic {p} too large")));
        }
        Ok(FieldSpec(Arc::new(Inner::Prime { p })))
    }

    pub fn rationals() -> Self {
        FieldSpec(Arc::new(Inner::Rationals))
    }

    /// Extension F_p[t]/(modulus); `modulus` is ascending and must be monic irreducible.
    ///
    /// A degree-1 modulus yields the prime field itself.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Self> {
        Self::prime(p)?;
        let mut m: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        fp_poly::trim(&mut m);
        if m.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        if m.last() != Some(&1) {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&m, p) {
            return Err(Error::InvalidField(format!(
                "modulus {} is reducible over GF({p})",
                crate::print::render_fp(&m, p, "t")
            )));
        }
        if m.len() == 2 {
            return Self::prime(p);
        }
        Ok(FieldSpec(Arc::new(Inner::Extension { p, modulus: m })))
    }

    pub fn kind(&self) -> FieldKind {
        match &*self.0 {
            Inner::Prime { .. } => FieldKind::Prime,
            Inner::Extension { .. } => FieldKind::Extension,
            Inner::Rationals => FieldKind::Rationals,
        }
    }

    /// Characteristic; 0 for Q.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Inner::Prime { p } | Inner::Extension { p, .. } => *p,
            Inner::Rationals => 0,
        }
    }

    /// Degree over the prime field (1 for F_p and for Q).
    pub fn degree(&self) -> u64 {
        match &*self.0 {
            Inner::Extension { modulus, .. } => (modulus.len() - 1) as u64,
            _ => 1,
        }
    }

    /// Ascending modulus coefficients, for extension fields.
    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.0 {
            Inner::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(&*self.0, Inner::Rationals)
    }

    /// Number of elements, when finite and representable.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        (self.characteristic() as u128).checked_pow(self.degree() as u32)
    }

    /// The prime subfield (Q for Q).
    pub fn prime_subfield(&self) -> FieldSpec {
        match &*self.0 {
            Inner::Extension { p, .. } => FieldSpec(Arc::new(Inner::Prime { p: *p })),
            _ => self.clone(),
        }
    }

    /// Whether `self` embeds into `target`.
    pub fn embeds_into(&self, target: &FieldSpec) -> bool {
        self.characteristic() == target.characteristic()
            && (!self.is_finite() || target.degree().is_multiple_of(self.degree()))
    }

    /// Parse `GF(p)`, `GF(p^n)`, `GF(p^n; m=<poly in t>)` or `QQ`.
    ///
    /// `GF(p^n)` without a modulus uses [`make_extension`] with `seed`.
    pub fn parse(text: &str, seed: u64) -> Result<Self> {
        let t = text.trim();
        if t == "QQ" || t == "Q" {
            return Ok(Self::rationals());
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidField(format!("expected GF(..) or QQ, got `{t}`")))?;
        let (size, modulus) = match inner.split_once(';') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (inner.trim(), None),
        };
        let num = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidField(format!("bad integer `{s}`")))
        };
        let (p, n) = match size.split_once('^') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(size)?, 1),
        };
        if n == 0 {
            return Err(Error::InvalidField(
                "extension degree must be positive".into(),
            ));
        }
        match modulus {
            None => make_extension(p, n, seed),
            Some(m) => {
                let body = m
                    .strip_prefix("m=")
                    .or_else(|| m.strip_prefix("m ="))
                    .ok_or_else(|| {
                        Error::InvalidField(format!("expected `m=<poly>`, got `{m}`"))
                    })?;
                let base = Self::prime(p)?;
                let poly = crate::poly::parse::parse_in_var(body, &base, 't')?;
                let coeffs: Vec<u64> = poly
                    .coeffs()
                    .iter()
                    .map(|c| c.prime_value().expect("prime field coefficient"))
                    .collect();
                if coeffs.len() as u64 != n + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus degree {} does not match extension degree {n}",
                        coeffs.len().saturating_sub(1)
                    )));
                }
                Self::extension(p, coeffs)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Inner::Prime { p } => write!(f, "GF({p})"),
            Inner::Extension { p, modulus } => write!(
                f,
                "GF({p}^{}; m={})",
                modulus.len() - 1,
                crate::print::render_fp(modulus, *p, "t")
            ),
            Inner::Rationals => write!(f, "QQ"),
        }
    }
}

/// Deterministic extension of degree `n` over F_p.
///
/// Candidates are monic polynomials whose lower coefficients come from a
/// ChaCha stream keyed by `(seed, p, n)`; the first one passing Rabin's
/// irreducibility test is used. `n = 1` returns the prime field.
pub fn make_extension(p: u64, n: u64, seed: u64) -> Result<FieldSpec> {
    let base = FieldSpec::prime(p)?;
    if n == 0 {
        return Err(Error::InvalidField(
            "extension degree must be positive".into(),
        ));
    }
    if n == 1 {
        return Ok(base);
    }
    let key = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(p.rotate_left(21))
        .wrapping_add(n.rotate_left(43));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    loop {
        let mut m: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        if m[0] == 0 {
            continue;
        }
        m.push(1);
        if fp_poly::is_irreducible(&m, p) {
            return Ok(FieldSpec(Arc::new(Inner::Extension { p, modulus: m })));
        }
    }
}
