//! Constructive search for common composites.
//!
//! Two independent procedures: [`search_lin`] looks for the first linear
//! dependence among `1, f1, f2, f1^2, f2^2, ...` ordered by degree, and
//! [`fiber_iterate`] grows `r_{j+1} = m_j(f)`, with `m_j` the minimal
//! polynomial of the alternating `f` modulo `r_j` until it stabilizes.

use crate::arith::lcm;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::DependencyFinder;
use crate::poly::Polynomial;

/// `h = g1(f1) = g2(f2)`, re-checkable with [`check_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeCertificate {
    pub f1: Polynomial,
    pub f2: Polynomial,
    pub h: Polynomial,
    pub g1: Polynomial,
    pub g2: Polynomial,
    /// Claims no common composite of smaller degree exists.
    pub minimal: bool,
    /// Claims `h` is monic with zero constant term.
    pub normalized: bool,
}

impl CompositeCertificate {
    /// Certificate for `h`, with both cofactors recovered by expansion.
    /// `None` when `h` is not a composite of both inputs.
    pub fn from_composite(
        f1: &Polynomial,
        f2: &Polynomial,
        h: Polynomial,
        minimal: bool,
    ) -> Option<Self> {
        let g1 = extract_cofactor(&h, f1)?;
        let g2 = extract_cofactor(&h, f2)?;
        if g1.is_constant() || g2.is_constant() {
            return None;
        }
        let normalized = h.is_normalized();
        Some(CompositeCertificate {
            f1: f1.clone(),
            f2: f2.clone(),
            h,
            g1,
            g2,
            minimal,
            normalized,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(CompositeCertificate),
    /// No common composite of degree at most the bound exists.
    NoneBelow(u64),
    /// The degree cap fired; the degrees produced so far, last one over the cap.
    CapExceeded {
        cap: u64,
        trace: Vec<usize>,
    },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&CompositeCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Result of [`fiber_iterate`] with the full sequence `r_1, r_2, ...`.
#[derive(Debug, Clone)]
pub struct FiberRun {
    pub trace: Vec<Polynomial>,
    pub outcome: SearchOutcome,
}

impl FiberRun {
    pub fn degrees(&self) -> Vec<usize> {
        self.trace.iter().map(|r| r.deg()).collect()
    }
}

fn check_pair(f1: &Polynomial, f2: &Polynomial) -> Result<()> {
    if f1.spec() != f2.spec() {
        return Err(Error::IncompatibleFields(format!(
            "{} vs {}",
            f1.spec(),
            f2.spec()
        )));
    }
    if f1.is_constant() || f2.is_constant() {
        return Err(Error::InvalidParams(
            "both polynomials must be nonconstant".into(),
        ));
    }
    Ok(())
}

/// Default search bound: `4 lcm(n1, n2) p^2` in characteristic p, `lcm` in characteristic 0.
pub fn default_bound(f1: &Polynomial, f2: &Polynomial) -> u64 {
    let l = lcm(f1.deg() as u64, f2.deg() as u64);
    match f1.spec().characteristic() {
        0 => l,
        p => l.saturating_mul(4).saturating_mul(p.saturating_mul(p)),
    }
}

fn coefficient_vector(f: &Polynomial) -> Vec<FieldElement> {
    f.coeffs().to_vec()
}

/// Least-degree common composite of degree at most `bound`, by exact linear algebra.
///
/// Candidate vectors `f_i^k` (`k deg f_i <= bound`) are inserted by ascending
/// degree, an `f1` power before an `f2` power of the same degree. The first
/// dependence involves powers of both and yields `h` of the least possible degree.
pub fn search_lin(f1: &Polynomial, f2: &Polynomial, bound: u64) -> Result<SearchOutcome> {
    check_pair(f1, f2)?;
    let (n1, n2) = (f1.deg() as u64, f2.deg() as u64);
    if bound < n1.max(n2) {
        return Err(Error::InvalidBound(format!(
            "bound {bound} is below max(deg f1, deg f2) = {}",
            n1.max(n2)
        )));
    }
    let spec = f1.spec();
    // (degree, which, power)
    let mut order: Vec<(u64, u8, u64)> = Vec::new();
    for (which, n) in [(1u8, n1), (2u8, n2)] {
        for k in 1..=bound / n {
            order.push((k * n, which, k));
        }
    }
    order.sort();

    let mut finder = DependencyFinder::new(spec);
    let mut tags: Vec<(u8, u64)> = vec![(0, 0)];
    finder.insert(&[FieldElement::one(spec)]);
    let mut pow1 = Polynomial::one(spec);
    let mut pow2 = Polynomial::one(spec);
    for &(_, which, k) in &order {
        let v = if which == 1 {
            pow1 = pow1.mul(f1);
            debug_assert_eq!(pow1.deg() as u64, k * n1);
            coefficient_vector(&pow1)
        } else {
            pow2 = pow2.mul(f2);
            coefficient_vector(&pow2)
        };
        tags.push((which, k));
        if let Some(combo) = finder.insert(&v) {
            // sum c_j v_j = 0 splits into G1(f1) = -(c_0 + G2(f2))
            let mut g1 = vec![FieldElement::zero(spec)];
            let mut g2 = vec![combo[0].neg()];
            for (c, &(w, k)) in combo.iter().zip(&tags).skip(1) {
                let (target, val) = if w == 1 {
                    (&mut g1, c.clone())
                } else {
                    (&mut g2, c.neg())
                };
                let k = k as usize;
                if target.len() <= k {
                    target.resize(k + 1, FieldElement::zero(spec));
                }
                target[k] = val;
            }
            let g1 = Polynomial::new(spec, g1);
            let h = g1.compose(f1).normalized();
            let cert = CompositeCertificate::from_composite(f1, f2, h, true)
                .expect("dependence yields a common composite");
            return Ok(SearchOutcome::Found(cert));
        }
    }
    Ok(SearchOutcome::NoneBelow(bound))
}

/// Monic `m` of least degree with `r | m(f)`.
pub fn minimal_poly_mod(f: &Polynomial, r: &Polynomial) -> Polynomial {
    let spec = f.spec();
    assert!(!r.is_constant(), "modulus must be nonconstant");
    let base = f.rem(r).expect("nonzero modulus");
    let mut finder = DependencyFinder::new(spec);
    let mut power = Polynomial::one(spec);
    loop {
        if let Some(combo) = finder.insert(&coefficient_vector(&power)) {
            return Polynomial::new(spec, combo).monic();
        }
        power = power.mul(&base).rem(r).expect("nonzero modulus");
    }
}

/// `g` with `g(f) = h`, found by the `f`-adic expansion of `h`.
pub fn extract_cofactor(h: &Polynomial, f: &Polynomial) -> Option<Polynomial> {
    if f.is_constant() || h.spec() != f.spec() || !h.deg().is_multiple_of(f.deg()) {
        return None;
    }
    let mut digits = Vec::new();
    let mut cur = h.clone();
    while !cur.is_zero() {
        let (q, r) = cur.divrem(f).ok()?;
        if !r.is_constant() {
            return None;
        }
        digits.push(r.coeff(0));
        cur = q;
    }
    Some(Polynomial::new(h.spec(), digits))
}

/// The alternating minimal-polynomial iteration.
///
/// Inputs are first replaced by their normalized forms (monic, zero constant
/// term), which changes neither existence nor the minimal degree. Starting
/// from `r_1 = f1`, each step composes the minimal polynomial of the next `f`
/// modulo `r_j` with that `f`. Stabilization `r_j = r_{j+1}` yields the
/// normalized minimal composite; a degree above `cap` stops the run.
pub fn fiber_iterate(f1: &Polynomial, f2: &Polynomial, cap: u64) -> Result<FiberRun> {
    check_pair(f1, f2)?;
    if cap == 0 {
        return Err(Error::InvalidCap("degree cap must be positive".into()));
    }
    let fs = [f1.normalized(), f2.normalized()];
    let mut trace = vec![fs[0].clone()];
    let mut next = 1;
    loop {
        let r = trace.last().unwrap();
        if r.deg() as u64 > cap {
            let degrees = trace.iter().map(|t| t.deg()).collect();
            return Ok(FiberRun {
                trace,
                outcome: SearchOutcome::CapExceeded {
                    cap,
                    trace: degrees,
                },
            });
        }
        let f = &fs[next];
        let m = minimal_poly_mod(f, r);
        let r_next = m.compose(f);
        if &r_next == r {
            let h = r.clone();
            let cert = CompositeCertificate::from_composite(f1, f2, h, true)
                .expect("stable iterate is a common composite");
            return Ok(FiberRun {
                trace,
                outcome: SearchOutcome::Found(cert),
            });
        }
        trace.push(r_next);
        next = 1 - next;
    }
}

/// Re-derive every claim of a certificate; `Err` carries the first failure.
pub fn check_certificate(c: &CompositeCertificate) -> std::result::Result<(), String> {
    let spec = c.f1.spec();
    for (name, p) in [("f2", &c.f2), ("h", &c.h), ("g1", &c.g1), ("g2", &c.g2)] {
        if p.spec() != spec {
            return Err(format!("{name} is over {} but f1 is over {spec}", p.spec()));
        }
    }
    for (name, p) in [("f1", &c.f1), ("f2", &c.f2), ("g1", &c.g1), ("g2", &c.g2)] {
        if p.is_constant() {
            return Err(format!("{name} is constant"));
        }
    }
    if c.g1.compose(&c.f1) != c.h {
        return Err("g1(f1) differs from h".into());
    }
    if c.g2.compose(&c.f2) != c.h {
        return Err("g2(f2) differs from h".into());
    }
    if c.h.deg() != c.g1.deg() * c.f1.deg() || c.h.deg() != c.g2.deg() * c.f2.deg() {
        return Err("degrees do not multiply".into());
    }
    if c.normalized && !c.h.is_normalized() {
        return Err("h is claimed normalized but is not monic with zero constant term".into());
    }
    if c.minimal {
        let l = lcm(c.f1.deg() as u64, c.f2.deg() as u64);
        let n = c.h.deg() as u64;
        if n != l {
            match search_lin(&c.f1, &c.f2, n - 1) {
                Ok(SearchOutcome::NoneBelow(_)) => {}
                Ok(SearchOutcome::Found(lower)) => {
                    return Err(format!(
                        "claimed minimal but a composite of degree {} exists",
                        lower.h.deg()
                    ))
                }
                Ok(other) => return Err(format!("minimality check inconclusive: {other:?}")),
                Err(e) => return Err(format!("minimality check failed: {e}")),
            }
        }
    }
    Ok(())
}

pub fn verify_certificate(c: &CompositeCertificate) -> bool {
    check_certificate(c).is_ok()
}

/// Minimal degrees over a base field and over an extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentReport {
    pub base_degree: Option<usize>,
    pub ext_degree: Option<usize>,
    /// Whether the normalized minimal `h` found over the extension has all
    /// coefficients in the base field.
    pub coefficients_in_base: bool,
}

impl DescentReport {
    pub fn holds(&self) -> bool {
        self.base_degree == self.ext_degree && self.coefficients_in_base
    }
}

/// Search over `K` and over `ext` with the same bound and compare.
pub fn descend_check(
    f1: &Polynomial,
    f2: &Polynomial,
    ext: &FieldSpec,
    bound: u64,
) -> Result<DescentReport> {
    let base = f1.spec().clone();
    let over_base = search_lin(f1, f2, bound)?;
    let over_ext = search_lin(&f1.embed(ext)?, &f2.embed(ext)?, bound)?;
    let base_degree = over_base.found().map(|c| c.h.deg());
    let ext_degree = over_ext.found().map(|c| c.h.deg());
    let coefficients_in_base = match over_ext.found() {
        Some(c) => c.h.descend(&base).is_some(),
        None => true,
    };
    Ok(DescentReport {
        base_degree,
        ext_degree,
        coefficients_in_base,
    })
}
