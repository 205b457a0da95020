//! Refutations: cycles in the fiber graph whose multiplicity or derivative
//! products rule out any common composite.
//!
//! A fiber cycle is a sequence `c_1, ..., c_2d` of distinct points with
//! `f1(c_1) = f1(c_2)`, `f2(c_2) = f2(c_3)`, ..., `f2(c_2d) = f2(c_1)`. If a
//! composite existed, the multiplicity product around the cycle would be one,
//! and (when `[K(c_1):K]` has a prime factor above both degrees) the two
//! derivative products would agree.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::arith::{is_prime, largest_prime_factor, lcm};
use crate::closure::multiplicity_product;
use crate::error::{Error, Result};
use crate::field::{make_extension, FieldElement, FieldSpec};
use crate::poly::Polynomial;

/// Largest ambient that is enumerated element by element.
pub const ENUMERATION_LIMIT: u128 = 1 << 16;

/// Default number of cycles kept per cycle length and ambient.
pub const DEFAULT_MAX_CYCLES: usize = 10_000;

/// Default budget of search nodes per cycle length and ambient.
const NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCycle {
    pub points: Vec<FieldElement>,
    pub ambient: FieldSpec,
}

impl FiberCycle {
    pub fn new(points: Vec<FieldElement>) -> Result<Self> {
        let ambient = points
            .first()
            .ok_or_else(|| Error::InvalidCycle("empty cycle".into()))?
            .spec()
            .clone();
        Ok(FiberCycle { points, ambient })
    }

    /// Half the cycle length.
    pub fn d(&self) -> usize {
        self.points.len() / 2
    }

    /// Check shape, distinctness and the alternating fiber conditions.
    pub fn validate(&self, f1: &Polynomial, f2: &Polynomial) -> Result<()> {
        let n = self.points.len();
        if n < 2 || n % 2 == 1 {
            return Err(Error::InvalidCycle(format!(
                "length {n} is not a positive even number"
            )));
        }
        if self.points.iter().any(|p| p.spec() != &self.ambient) {
            return Err(Error::InvalidCycle("points lie in different fields".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.points[i] == self.points[j] {
                    return Err(Error::InvalidCycle(format!(
                        "points {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let fs = [f1.embed(&self.ambient)?, f2.embed(&self.ambient)?];
        for i in 0..n {
            let f = &fs[i % 2];
            let (a, b) = (&self.points[i], &self.points[(i + 1) % n]);
            if f.eval(a) != f.eval(b) {
                return Err(Error::InvalidCycle(format!(
                    "f{}(c{}) != f{}(c{})",
                    i % 2 + 1,
                    i + 1,
                    i % 2 + 1,
                    (i + 1) % n + 1
                )));
            }
        }
        Ok(())
    }

    /// Representative under even rotations and reversal.
    pub fn canonical(&self) -> FiberCycle {
        let n = self.points.len();
        let rev: Vec<FieldElement> = (0..n)
            .map(|i| self.points[(n + 1 - i) % n].clone())
            .collect();
        let mut best: Option<Vec<FieldElement>> = None;
        for seq in [&self.points, &rev] {
            for s in (0..n).step_by(2) {
                let mut cand = seq.clone();
                cand.rotate_left(s);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        FiberCycle {
            points: best.unwrap(),
            ambient: self.ambient.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefutationKind {
    MultiplicityCycle,
    DerivativeCycle,
    InconsistentSet,
}

impl fmt::Display for RefutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RefutationKind::MultiplicityCycle => "MultiplicityCycle",
            RefutationKind::DerivativeCycle => "DerivativeCycle",
            RefutationKind::InconsistentSet => "InconsistentSet",
        })
    }
}

impl std::str::FromStr for RefutationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "MultiplicityCycle" => Ok(RefutationKind::MultiplicityCycle),
            "DerivativeCycle" => Ok(RefutationKind::DerivativeCycle),
            "InconsistentSet" => Ok(RefutationKind::InconsistentSet),
            other => Err(Error::Format(format!("unknown refutation kind `{other}`"))),
        }
    }
}

/// Evidence that `f1` and `f2` have no common composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutationCertificate {
    pub kind: RefutationKind,
    pub f1: Polynomial,
    pub f2: Polynomial,
    pub ambient: FieldSpec,
    /// The cycle `c_1, ..., c_2d`.
    pub points: Vec<FieldElement>,
    /// For an inconsistent set, the whole set (containing the cycle).
    pub set: Vec<FieldElement>,
    pub product: Option<BigRational>,
    pub lhs: Option<FieldElement>,
    pub rhs: Option<FieldElement>,
    /// `[K(c_1):K]`.
    pub degree: Option<u64>,
    /// Prime factor of `degree` exceeding both input degrees.
    pub prime: Option<u64>,
}

fn multiplicities(f1: &Polynomial, f2: &Polynomial, points: &[FieldElement]) -> Vec<(u64, u64)> {
    points
        .iter()
        .map(|c| (f1.multiplicity(c), f2.multiplicity(c)))
        .collect()
}

/// Multiplicity product of a cycle; a certificate when it is not one.
pub fn multiplicity_cycle_test(
    f1: &Polynomial,
    f2: &Polynomial,
    cycle: &FiberCycle,
) -> Result<Option<RefutationCertificate>> {
    cycle.validate(f1, f2)?;
    let product = multiplicity_product(&multiplicities(f1, f2, &cycle.points));
    if product.is_one() {
        return Ok(None);
    }
    Ok(Some(RefutationCertificate {
        kind: RefutationKind::MultiplicityCycle,
        f1: f1.clone(),
        f2: f2.clone(),
        ambient: cycle.ambient.clone(),
        points: cycle.points.clone(),
        set: Vec::new(),
        product: Some(product),
        lhs: None,
        rhs: None,
        degree: None,
        prime: None,
    }))
}

/// Outcome of the derivative test on one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivativeVerdict {
    Certificate(RefutationCertificate),
    /// `[K(c_1):K]` has no prime factor above both degrees.
    HypothesisNotMet {
        degree: u64,
        products_differ: bool,
    },
    ProductsEqual,
}

/// `[K(c):K]` for `c` in an extension of the finite field `K`.
fn relative_degree(c: &FieldElement, base: &FieldSpec) -> Result<u64> {
    let k = base.degree();
    Ok(lcm(c.element_degree()?, k) / k)
}

fn derivative_products(
    f1: &Polynomial,
    f2: &Polynomial,
    points: &[FieldElement],
) -> Result<(FieldElement, FieldElement)> {
    let amb = points[0].spec();
    let d1 = f1.derivative().embed(amb)?;
    let d2 = f2.derivative().embed(amb)?;
    let mut lhs = FieldElement::one(amb);
    let mut rhs = FieldElement::one(amb);
    for (i, c) in points.iter().enumerate() {
        let (a, b) = (d1.eval(c), d2.eval(c));
        if i % 2 == 0 {
            lhs = lhs.mul(&a);
            rhs = rhs.mul(&b);
        } else {
            lhs = lhs.mul(&b);
            rhs = rhs.mul(&a);
        }
    }
    Ok((lhs, rhs))
}

/// Compare `prod f1'(c_odd) f2'(c_even)` with `prod f2'(c_odd) f1'(c_even)`,
/// certifying nonexistence when they differ and the degree hypothesis holds.
pub fn derivative_cycle_test(
    f1: &Polynomial,
    f2: &Polynomial,
    cycle: &FiberCycle,
) -> Result<DerivativeVerdict> {
    let base = f1.spec();
    if !base.is_finite() {
        return Err(Error::Unsupported("derivative cycle test over QQ".into()));
    }
    for (name, f) in [("f1", f1), ("f2", f2)] {
        if f.in_kxp() {
            return Err(Error::FInKxp(format!("{name} = {f}")));
        }
    }
    cycle.validate(f1, f2)?;
    let degree = relative_degree(&cycle.points[0], base)?;
    let (lhs, rhs) = derivative_products(f1, f2, &cycle.points)?;
    let bound = f1.deg().max(f2.deg()) as u64;
    let prime = largest_prime_factor(degree);
    if prime <= bound {
        return Ok(DerivativeVerdict::HypothesisNotMet {
            degree,
            products_differ: lhs != rhs,
        });
    }
    if lhs == rhs {
        return Ok(DerivativeVerdict::ProductsEqual);
    }
    Ok(DerivativeVerdict::Certificate(RefutationCertificate {
        kind: RefutationKind::DerivativeCycle,
        f1: f1.clone(),
        f2: f2.clone(),
        ambient: cycle.ambient.clone(),
        points: cycle.points.clone(),
        set: Vec::new(),
        product: None,
        lhs: Some(lhs),
        rhs: Some(rhs),
        degree: Some(degree),
        prime: Some(prime),
    }))
}

/// Values of `f1` and `f2` on every element of a small finite field.
struct FiberGraph {
    elements: Vec<FieldElement>,
    /// Bucket id of each element under f1 and f2.
    class: [Vec<usize>; 2],
    buckets: [Vec<Vec<usize>>; 2],
}

impl FiberGraph {
    fn build(f1: &Polynomial, f2: &Polynomial, ambient: &FieldSpec) -> Result<Self> {
        let elements = FieldElement::enumerate(ambient, ENUMERATION_LIMIT)
            .ok_or_else(|| Error::Unsupported(format!("{ambient} is too large to enumerate")))?;
        let mut class = [Vec::new(), Vec::new()];
        let mut buckets = [Vec::new(), Vec::new()];
        for (which, f) in [f1, f2].into_iter().enumerate() {
            let f = f.embed(ambient)?;
            let mut ids: HashMap<FieldElement, usize> = HashMap::new();
            for (i, e) in elements.iter().enumerate() {
                let next = ids.len();
                let id = *ids.entry(f.eval(e)).or_insert(next);
                if id == buckets[which].len() {
                    buckets[which].push(Vec::new());
                }
                buckets[which][id].push(i);
                class[which].push(id);
            }
        }
        Ok(FiberGraph {
            elements,
            class,
            buckets,
        })
    }

    /// All cycles of length exactly `2d`, each reported once with its least
    /// point (in enumeration order) first.
    fn cycles(&self, d: usize, max_cycles: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut budget = NODE_BUDGET;
        let mut path = Vec::with_capacity(2 * d);
        for start in 0..self.elements.len() {
            // only starts whose f1-fiber and f2-fiber are both nontrivial
            if self.buckets[0][self.class[0][start]].len() < 2
                || self.buckets[1][self.class[1][start]].len() < 2
            {
                continue;
            }
            path.clear();
            path.push(start);
            self.extend(d, &mut path, &mut out, max_cycles, &mut budget);
            if out.len() >= max_cycles || budget == 0 {
                break;
            }
        }
        out
    }

    fn extend(
        &self,
        d: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        max: usize,
        budget: &mut u64,
    ) {
        if out.len() >= max || *budget == 0 {
            return;
        }
        *budget -= 1;
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() == 2 * d {
            if self.class[1][last] == self.class[1][start] {
                out.push(path.clone());
            }
            return;
        }
        let which = (path.len() - 1) % 2;
        for &next in &self.buckets[which][self.class[which][last]] {
            if next <= start || path.contains(&next) {
                continue;
            }
            path.push(next);
            self.extend(d, path, out, max, budget);
            path.pop();
        }
    }
}

/// Fiber cycles of length at most `2 max_d` among the elements of `ambient`,
/// canonicalized and sorted by length, then by points.
pub fn cycle_search(
    f1: &Polynomial,
    f2: &Polynomial,
    max_d: usize,
    ambient: &FieldSpec,
    max_ext: u64,
) -> Result<Vec<FiberCycle>> {
    if !ambient.is_finite() {
        return Err(Error::Unsupported(
            "cycle search needs a finite field".into(),
        ));
    }
    if ambient.degree() > max_ext {
        return Err(Error::ExtensionCapExceeded {
            required: ambient.degree(),
            cap: max_ext,
        });
    }
    let graph = FiberGraph::build(f1, f2, ambient)?;
    let mut out = Vec::new();
    for d in 1..=max_d {
        out.extend(cycles_of(&graph, d, ambient, DEFAULT_MAX_CYCLES));
    }
    Ok(out)
}

fn cycles_of(
    graph: &FiberGraph,
    d: usize,
    ambient: &FieldSpec,
    max_cycles: usize,
) -> Vec<FiberCycle> {
    let mut found: Vec<FiberCycle> = graph
        .cycles(d, max_cycles)
        .into_iter()
        .map(|idx| {
            FiberCycle {
                points: idx.into_iter().map(|i| graph.elements[i].clone()).collect(),
                ambient: ambient.clone(),
            }
            .canonical()
        })
        .collect();
    found.sort_by(|a, b| a.points.cmp(&b.points));
    found.dedup();
    found
}

/// Search limits for [`refute`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefuteConfig {
    pub max_d: usize,
    pub max_ext: u64,
    pub max_cycles: usize,
    /// Seed for the moduli of the ambient fields.
    pub field_seed: u64,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        RefuteConfig {
            max_d: 5,
            max_ext: 60,
            max_cycles: DEFAULT_MAX_CYCLES,
            field_seed: 0,
        }
    }
}

/// One searched (cycle length, ambient) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStep {
    pub d: usize,
    pub ambient_degree: u64,
    pub cycles: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefuteRun {
    pub certificate: Option<RefutationCertificate>,
    pub steps: Vec<SearchStep>,
}

/// Search cycles by increasing half-length `d`, and for each `d` through
/// ambients `K_e` of degree `e` over `K` (while small enough to enumerate),
/// applying the multiplicity test and then the derivative test to every cycle.
pub fn refute(f1: &Polynomial, f2: &Polynomial, cfg: RefuteConfig) -> Result<RefuteRun> {
    let base = f1.spec();
    if !base.is_finite() {
        return Err(Error::Unsupported(
            "cycle search needs a finite field".into(),
        ));
    }
    if f1.is_constant() || f2.is_constant() || f2.spec() != base {
        return Err(Error::InvalidParams(
            "two nonconstant polynomials over one field".into(),
        ));
    }
    let derivative_ok = !f1.in_kxp() && !f2.in_kxp();
    let p = base.characteristic();
    let k = base.degree();
    // ambient degrees over K that are small enough to enumerate
    let mut degrees = Vec::new();
    for e in 1.. {
        let n = k * e;
        if n > cfg.max_ext
            || (p as u128)
                .checked_pow(n as u32)
                .is_none_or(|q| q > ENUMERATION_LIMIT)
        {
            break;
        }
        degrees.push(n);
    }
    let mut graphs: Vec<Option<(FieldSpec, FiberGraph)>> = degrees.iter().map(|_| None).collect();
    let mut steps = Vec::new();
    for d in 1..=cfg.max_d {
        for (slot, &n) in graphs.iter_mut().zip(&degrees) {
            if slot.is_none() {
                let ambient = if n == k {
                    base.clone()
                } else {
                    make_extension(p, n, cfg.field_seed)?
                };
                let graph = FiberGraph::build(f1, f2, &ambient)?;
                *slot = Some((ambient, graph));
            }
            let (ambient, graph) = slot.as_ref().unwrap();
            let cycles = cycles_of(graph, d, ambient, cfg.max_cycles);
            steps.push(SearchStep {
                d,
                ambient_degree: ambient.degree(),
                cycles: cycles.len(),
            });
            for cycle in &cycles {
                if let Some(cert) = multiplicity_cycle_test(f1, f2, cycle)? {
                    return Ok(RefuteRun {
                        certificate: Some(cert),
                        steps,
                    });
                }
                if derivative_ok {
                    if let DerivativeVerdict::Certificate(cert) =
                        derivative_cycle_test(f1, f2, cycle)?
                    {
                        return Ok(RefuteRun {
                            certificate: Some(cert),
                            steps,
                        });
                    }
                }
            }
        }
    }
    Ok(RefuteRun {
        certificate: None,
        steps,
    })
}

/// Re-derive every recorded value of a refutation from `f1`, `f2` and the points.
pub fn check_refutation(c: &RefutationCertificate) -> std::result::Result<(), String> {
    let cycle = FiberCycle {
        points: c.points.clone(),
        ambient: c.ambient.clone(),
    };
    if c.f1.spec() != c.f2.spec() {
        return Err("f1 and f2 lie over different fields".into());
    }
    match c.kind {
        RefutationKind::MultiplicityCycle | RefutationKind::InconsistentSet => {
            cycle.validate(&c.f1, &c.f2).map_err(|e| e.to_string())?;
            let product = multiplicity_product(&multiplicities(&c.f1, &c.f2, &c.points));
            if product.is_one() {
                return Err("multiplicity product equals 1".into());
            }
            if c.product.as_ref() != Some(&product) {
                return Err(format!(
                    "recorded product does not match recomputed {product}"
                ));
            }
            if c.kind == RefutationKind::InconsistentSet
                && c.points.iter().any(|p| !c.set.contains(p))
            {
                return Err("cycle is not contained in the set".into());
            }
            Ok(())
        }
        RefutationKind::DerivativeCycle => {
            let verdict = derivative_cycle_test(&c.f1, &c.f2, &cycle).map_err(|e| e.to_string())?;
            let fresh = match verdict {
                DerivativeVerdict::Certificate(fresh) => fresh,
                DerivativeVerdict::HypothesisNotMet { degree, .. } => {
                    return Err(format!(
                        "degree {degree} has no prime factor above both degrees"
                    ))
                }
                DerivativeVerdict::ProductsEqual => return Err("derivative products agree".into()),
            };
            if c.lhs != fresh.lhs || c.rhs != fresh.rhs {
                return Err("recorded derivative products do not match".into());
            }
            if c.degree != fresh.degree {
                return Err("recorded degree does not match".into());
            }
            let prime = c.prime.ok_or("missing prime witness")?;
            let degree = fresh.degree.unwrap();
            let bound = c.f1.deg().max(c.f2.deg()) as u64;
            if !is_prime(prime) || degree % prime != 0 || prime <= bound {
                return Err(format!(
                    "{prime} is not a prime factor of {degree} above {bound}"
                ));
            }
            Ok(())
        }
    }
}

pub fn verify_refutation(c: &RefutationCertificate) -> bool {
    check_refutation(c).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn canonical_form_is_rotation_and_reflection_invariant() {
        let f = FieldSpec::prime(11).unwrap();
        let pts: Vec<FieldElement> = [5, 3, 8, 1, 9, 2]
            .iter()
            .map(|&v| FieldElement::from_i64(&f, v))
            .collect();
        let c = FiberCycle {
            points: pts.clone(),
            ambient: f.clone(),
        };
        let mut rot = pts.clone();
        rot.rotate_left(2);
        let n = pts.len();
        let refl: Vec<_> = (0..n).map(|i| pts[(n + 1 - i) % n].clone()).collect();
        let canon = c.canonical();
        assert_eq!(
            FiberCycle {
                points: rot,
                ambient: f.clone()
            }
            .canonical(),
            canon
        );
        assert_eq!(
            FiberCycle {
                points: refl,
                ambient: f.clone()
            }
            .canonical(),
            canon
        );
        assert_eq!(canon.points[0], FieldElement::from_i64(&f, 1));
    }

    #[test]
    fn square_map_has_no_cycles_in_char_two() {
        let f2 = FieldSpec::prime(2).unwrap();
        let x2 = parse_poly("x^2", &f2).unwrap();
        for n in 1..=4 {
            let amb = make_extension(2, n, 0).unwrap();
            assert!(cycle_search(&x2, &x2, 3, &amb, 60).unwrap().is_empty());
        }
    }

    #[test]
    fn two_cycle_multiplicity_certificate() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f1 = parse_poly("x^2-x", &f2).unwrap();
        let g = parse_poly("x^3-x^2", &f2).unwrap();
        let cycle = FiberCycle::new(vec![FieldElement::zero(&f2), FieldElement::one(&f2)]).unwrap();
        let cert = multiplicity_cycle_test(&f1, &g, &cycle).unwrap().unwrap();
        assert_eq!(cert.product, Some(BigRational::new(1.into(), 2.into())));
        assert!(verify_refutation(&cert));
        let mut bad = cert.clone();
        bad.product = Some(BigRational::new(2.into(), 1.into()));
        assert!(!verify_refutation(&bad));
    }

    #[test]
    fn invalid_cycles_rejected() {
        let f3 = FieldSpec::prime(3).unwrap();
        let f = parse_poly("x^2", &f3).unwrap();
        let one = FieldElement::one(&f3);
        let c = FiberCycle::new(vec![one.clone(), one.clone()]).unwrap();
        assert!(matches!(
            multiplicity_cycle_test(&f, &f, &c),
            Err(Error::InvalidCycle(_))
        ));
        let c = FiberCycle::new(vec![one.clone()]).unwrap();
        assert!(matches!(
            multiplicity_cycle_test(&f, &f, &c),
            Err(Error::InvalidCycle(_))
        ));
        let sq = parse_poly("x^3", &f3).unwrap();
        let c = FiberCycle::new(vec![one.clone(), one.neg()]).unwrap();
        assert!(matches!(
            derivative_cycle_test(&sq, &f, &c),
            Err(Error::FInKxp(_))
        ));
    }
}
