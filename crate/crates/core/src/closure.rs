//! Compatible sets, consistent labelings and the composite they determine.
//!
//! A compatible set is a finite set of points that is a union of `f1`-fibers
//! and of `f2`-fibers. A consistent labeling assigns each point a positive
//! integer `l(a)`, divisible by both multiplicities, with `l(a)/m_i(a)`
//! constant on every `f_i`-fiber. Such a pair yields the common composite
//! `prod (x - a)^l(a)`; a cycle along which the multiplicity ratios do not
//! multiply to one shows that no labeling, hence no composite, exists.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::lcm;
use crate::error::{Error, Result};
use crate::field::{make_extension, FieldElement, FieldSpec};
use crate::poly::{factor_degrees, roots_in, Polynomial, RootWithMultiplicity};
use crate::refute::FiberCycle;
use crate::search::CompositeCertificate;

/// Limits on closure growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_size: usize,
    /// Largest ambient degree over the prime field.
    pub max_ext: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_size: 4096,
            max_ext: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosurePoint {
    pub value: FieldElement,
    pub m1: u64,
    pub m2: u64,
    pub label: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleSet {
    pub points: Vec<ClosurePoint>,
    pub ambient: FieldSpec,
    pub seed: FieldElement,
    pub closed: bool,
}

impl CompatibleSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> Vec<FieldElement> {
        self.points.iter().map(|p| p.value.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapKind {
    Size(usize),
    Extension { required: u64, cap: u64 },
}

/// Three points `a, a + t, a + 2t` of a rational closure, where `t` is the
/// translation obtained by composing the two fiber involutions `x -> s_i - x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitEvidence {
    pub translation: BigRational,
    pub points: [FieldElement; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureTrace {
    pub cap: CapKind,
    pub ambient: FieldSpec,
    /// Points discovered before the cap fired, in discovery order.
    pub points: Vec<FieldElement>,
    pub orbit: Option<OrbitEvidence>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureOutcome {
    Closed(CompatibleSet),
    CapExceeded(ClosureTrace),
}

/// All roots of `f(x) - f(a)` with multiplicities, growing `ambient` until
/// the polynomial splits.
///
/// Over a finite field the new ambient has degree `n * lcm(factor degrees)`
/// and is built with [`make_extension`] from `field_seed`. Over Q only
/// rational fibers are supported.
pub fn fiber(
    f: &Polynomial,
    a: &FieldElement,
    ambient: &FieldSpec,
    max_ext: u64,
    field_seed: u64,
) -> Result<(Vec<RootWithMultiplicity>, FieldSpec)> {
    let a = a.embed(ambient)?;
    let g = f.embed(ambient)?;
    let shifted = g.sub(&Polynomial::constant(g.eval(&a)));
    if !ambient.is_finite() {
        let roots = roots_in(&shifted, ambient)?;
        let total: u64 = roots.iter().map(|r| r.multiplicity).sum();
        if total != shifted.deg() as u64 {
            return Err(Error::UnsupportedAlgebraicExtension);
        }
        return Ok((roots, ambient.clone()));
    }
    let k = factor_degrees(&shifted)?
        .iter()
        .fold(1, |acc, &(d, _)| lcm(acc, d));
    let target = if k == 1 {
        ambient.clone()
    } else {
        let required = ambient.degree() * k;
        if required > max_ext {
            return Err(Error::ExtensionCapExceeded {
                required,
                cap: max_ext,
            });
        }
        make_extension(ambient.characteristic(), required, field_seed)?
    };
    let roots = roots_in(&shifted, &target)?;
    debug_assert_eq!(
        roots.iter().map(|r| r.multiplicity).sum::<u64>(),
        shifted.deg() as u64
    );
    Ok((roots, target))
}

fn quadratic_involution_center(f: &Polynomial) -> Option<BigRational> {
    if f.deg() != 2 {
        return None;
    }
    let b = f.coeff(1).as_rational()?.clone();
    let a = f.coeff(2).as_rational()?.clone();
    Some(-(b / a))
}

fn orbit_evidence(
    f1: &Polynomial,
    f2: &Polynomial,
    seed: &FieldElement,
    points: &[FieldElement],
) -> Option<OrbitEvidence> {
    let s1 = quadratic_involution_center(f1)?;
    let s2 = quadratic_involution_center(f2)?;
    let t = s2 - s1;
    if t.is_zero() {
        return None;
    }
    let spec = seed.spec();
    let base = seed.as_rational()?.clone();
    let step = |k: i64| {
        FieldElement::from_rational(
            spec,
            &(base.clone() + t.clone() * BigRational::from_integer(k.into())),
        )
        .expect("rational")
    };
    let three = [step(0), step(1), step(2)];
    three
        .iter()
        .all(|p| points.contains(p))
        .then_some(OrbitEvidence {
            translation: t,
            points: three,
        })
}

/// The least compatible set containing `seed`, by alternating fiber saturation.
///
/// Points are processed in insertion order, `f1`-fiber before `f2`-fiber. The
/// ambient starts at the field of `seed` and grows as fibers require.
pub fn compatible_closure(
    f1: &Polynomial,
    f2: &Polynomial,
    seed: &FieldElement,
    caps: Caps,
    field_seed: u64,
) -> Result<ClosureOutcome> {
    let mut ambient = seed.spec().clone();
    let fs = [f1, f2];
    let mut points: Vec<FieldElement> = vec![seed.clone()];
    let mut mult: Vec<[Option<u64>; 2]> = vec![[None, None]];
    let mut index: HashMap<FieldElement, usize> = HashMap::from([(seed.clone(), 0)]);
    let mut i = 0;
    while i < points.len() {
        for which in 0..2 {
            if mult[i][which].is_some() {
                continue;
            }
            let (roots, new_ambient) =
                match fiber(fs[which], &points[i], &ambient, caps.max_ext, field_seed) {
                    Ok(r) => r,
                    Err(Error::ExtensionCapExceeded { required, cap }) => {
                        return Ok(ClosureOutcome::CapExceeded(ClosureTrace {
                            cap: CapKind::Extension { required, cap },
                            ambient,
                            points,
                            orbit: None,
                        }));
                    }
                    Err(e) => return Err(e),
                };
            if new_ambient != ambient {
                points = points
                    .iter()
                    .map(|p| p.embed(&new_ambient))
                    .collect::<Result<_>>()?;
                index = points
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(k, p)| (p, k))
                    .collect();
                ambient = new_ambient;
            }
            for r in roots {
                match index.get(&r.root) {
                    Some(&k) => mult[k][which] = Some(r.multiplicity),
                    None => {
                        index.insert(r.root.clone(), points.len());
                        points.push(r.root);
                        let mut m = [None, None];
                        m[which] = Some(r.multiplicity);
                        mult.push(m);
                    }
                }
            }
            if points.len() > caps.max_size {
                let orbit = orbit_evidence(f1, f2, seed, &points);
                return Ok(ClosureOutcome::CapExceeded(ClosureTrace {
                    cap: CapKind::Size(caps.max_size),
                    ambient,
                    points,
                    orbit,
                }));
            }
        }
        i += 1;
    }
    let seed = seed.embed(&ambient)?;
    let points = points
        .into_iter()
        .zip(mult)
        .map(|(value, [m1, m2])| ClosurePoint {
            value,
            m1: m1.expect("processed"),
            m2: m2.expect("processed"),
            label: None,
        })
        .collect();
    Ok(ClosureOutcome::Closed(CompatibleSet {
        points,
        ambient,
        seed,
        closed: true,
    }))
}

/// A cycle `c_1, ..., c_2d` with `f1(c_odd) = f1(c_next)`, `f2(c_even) = f2(c_next)`
/// along which the multiplicity product differs from one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InconsistencyCertificate {
    pub cycle: Vec<ClosurePoint>,
    pub product: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency {
    /// Minimal labels, one per input point, scaled per connected component.
    Consistent(Vec<u64>),
    Inconsistent(InconsistencyCertificate),
}

/// `prod m1(c_odd)/m2(c_odd) * m2(c_even)/m1(c_even)` over an alternating cycle.
pub fn multiplicity_product(m: &[(u64, u64)]) -> BigRational {
    let mut acc = BigRational::one();
    for (i, &(m1, m2)) in m.iter().enumerate() {
        let r = BigRational::new(BigInt::from(m1), BigInt::from(m2));
        acc = if i % 2 == 0 { acc * r } else { acc / r };
    }
    acc
}

fn group_by_value(values: &[FieldElement]) -> HashMap<FieldElement, Vec<usize>> {
    let mut groups: HashMap<FieldElement, Vec<usize>> = HashMap::new();
    for (i, v) in values.iter().enumerate() {
        groups.entry(v.clone()).or_default().push(i);
    }
    groups
}

/// Solve for the minimal consistent labeling, or exhibit an inconsistent cycle.
///
/// Labels are propagated as exact rationals along a breadth-first spanning
/// forest of the graph whose edges join points with equal `f_i`-values; each
/// component is then scaled by the least factor making every `l/m_i` a
/// positive integer.
pub fn consistency_solve(
    points: &[ClosurePoint],
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<Consistency> {
    let n = points.len();
    if n == 0 {
        return Ok(Consistency::Consistent(Vec::new()));
    }
    let ambient = points[0].value.spec().clone();
    let fs = [f1.embed(&ambient)?, f2.embed(&ambient)?];
    let vals: [Vec<FieldElement>; 2] = [
        points.iter().map(|p| fs[0].eval(&p.value)).collect(),
        points.iter().map(|p| fs[1].eval(&p.value)).collect(),
    ];
    let groups = [group_by_value(&vals[0]), group_by_value(&vals[1])];
    let m = |i: usize, which: usize| {
        if which == 0 {
            points[i].m1
        } else {
            points[i].m2
        }
    };

    let mut label: Vec<Option<BigRational>> = vec![None; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut component = vec![usize::MAX; n];
    let mut components = Vec::new();
    for root in 0..n {
        if label[root].is_some() {
            continue;
        }
        let cid = components.len();
        components.push(vec![root]);
        label[root] = Some(BigRational::one());
        component[root] = cid;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for which in 0..2 {
                for &v in &groups[which][&vals[which][u]] {
                    if v == u {
                        continue;
                    }
                    let lu = label[u].clone().unwrap();
                    let expected = lu * BigRational::new(m(v, which).into(), m(u, which).into());
                    match &label[v] {
                        None => {
                            label[v] = Some(expected);
                            parent[v] = Some((u, which));
                            depth[v] = depth[u] + 1;
                            component[v] = cid;
                            components[cid].push(v);
                            queue.push_back(v);
                        }
                        Some(lv) if *lv != expected => {
                            let idx = conflict_cycle(u, v, which, &parent, &depth);
                            // report the orientation that is least as a point sequence
                            let values = idx.iter().map(|&i| points[i].value.clone()).collect();
                            let canon = FiberCycle {
                                points: values,
                                ambient: ambient.clone(),
                            }
                            .canonical();
                            let cycle: Vec<ClosurePoint> = canon
                                .points
                                .iter()
                                .map(|c| {
                                    idx.iter()
                                        .map(|&i| &points[i])
                                        .find(|p| &p.value == c)
                                        .unwrap()
                                        .clone()
                                })
                                .collect();
                            let ms: Vec<(u64, u64)> = cycle.iter().map(|p| (p.m1, p.m2)).collect();
                            let product = multiplicity_product(&ms);
                            debug_assert!(!product.is_one());
                            return Ok(Consistency::Inconsistent(InconsistencyCertificate {
                                cycle,
                                product,
                            }));
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    let mut out = vec![0u64; n];
    for members in &components {
        let ratios: Vec<BigRational> = members
            .iter()
            .flat_map(|&i| {
                let w = label[i].clone().unwrap();
                [
                    &w / BigRational::from_integer(points[i].m1.into()),
                    &w / BigRational::from_integer(points[i].m2.into()),
                ]
            })
            .collect();
        let l = ratios
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let g = ratios.iter().fold(BigInt::zero(), |acc, r| {
            acc.gcd(&(r.numer() * (&l / r.denom())))
        });
        let t = BigRational::new(l, g);
        for &i in members {
            let li = (label[i].clone().unwrap() * &t).to_integer();
            out[i] = li
                .to_u64()
                .ok_or_else(|| Error::Unsupported(format!("label {li} exceeds 64 bits")))?;
        }
    }
    Ok(Consistency::Consistent(out))
}

/// The closed walk lca -> ... -> u -> v -> ... -> lca, reduced to alternating
/// form and rotated so the first edge is an `f1`-edge. Returns point indices.
fn conflict_cycle(
    u: usize,
    v: usize,
    which: usize,
    parent: &[Option<(usize, usize)>],
    depth: &[usize],
) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut up_u = vec![u];
    let mut up_v = vec![v];
    while depth[a] > depth[b] {
        a = parent[a].unwrap().0;
        up_u.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b].unwrap().0;
        up_v.push(b);
    }
    while a != b {
        a = parent[a].unwrap().0;
        b = parent[b].unwrap().0;
        up_u.push(a);
        up_v.push(b);
    }
    // vertices with the label of the edge leaving each one
    let mut walk: Vec<(usize, usize)> = Vec::new();
    let down: Vec<usize> = up_u.iter().rev().copied().collect();
    for w in down.windows(2) {
        walk.push((w[0], parent[w[1]].unwrap().1));
    }
    walk.push((u, which));
    for &x in &up_v[..up_v.len() - 1] {
        walk.push((x, parent[x].unwrap().1));
    }
    // drop vertices interior to a run of equal labels
    loop {
        let k = walk.len();
        let Some(i) = (0..k).find(|&i| walk[i].1 == walk[(i + k - 1) % k].1) else {
            break;
        };
        if k <= 2 {
            break;
        }
        walk.remove(i);
    }
    let start = walk
        .iter()
        .position(|&(_, l)| l == 0)
        .expect("cycle uses both maps");
    walk.rotate_left(start);
    walk.into_iter().map(|(x, _)| x).collect()
}

/// Build `h = prod (x - a)^l(a)` and its cofactors, after re-validating that
/// the set is compatible and the labeling consistent.
///
/// The returned certificate is over the coefficient field of `f1`, with `h`
/// normalized; it is marked minimal only when `deg h = lcm(deg f1, deg f2)`.
pub fn build_composite_from_set(
    set: &CompatibleSet,
    labels: &[u64],
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<CompositeCertificate> {
    if labels.len() != set.points.len() || set.points.is_empty() {
        return Err(Error::NotConsistent(
            "one positive label per point is required".into(),
        ));
    }
    let ambient = &set.ambient;
    let base = f1.spec();
    let fs = [f1.embed(ambient)?, f2.embed(ambient)?];
    let x = Polynomial::x(ambient);
    let mut gs = Vec::new();
    for (which, f) in fs.iter().enumerate() {
        let vals: Vec<FieldElement> = set.points.iter().map(|p| f.eval(&p.value)).collect();
        let groups = group_by_value(&vals);
        let mut g = Polynomial::one(ambient);
        let lead_inv = f.leading().inv()?;
        let mut keys: Vec<&FieldElement> = groups.keys().collect();
        keys.sort();
        for value in keys {
            let members = &groups[value];
            let mut total = 0u64;
            let mut ratio = None;
            for &i in members {
                let p = &set.points[i];
                let m = f.multiplicity(&p.value);
                let claimed = if which == 0 { p.m1 } else { p.m2 };
                if m != claimed {
                    return Err(Error::NotCompatible(format!(
                        "point {} has multiplicity {m}, recorded {claimed}",
                        p.value
                    )));
                }
                total += m;
                let l = labels[i];
                if l == 0 || !l.is_multiple_of(m) {
                    return Err(Error::NotConsistent(format!(
                        "label {l} of {} is not a multiple of {m}",
                        p.value
                    )));
                }
                match ratio {
                    None => ratio = Some(l / m),
                    Some(r) if r != l / m => {
                        return Err(Error::NotConsistent(format!(
                            "l/m{} varies on a fiber",
                            which + 1
                        )))
                    }
                    _ => {}
                }
            }
            if total != f.deg() as u64 {
                return Err(Error::NotCompatible(format!(
                    "the f{}-fiber of {} is incomplete",
                    which + 1,
                    set.points[members[0]].value
                )));
            }
            let factor = x.sub(&Polynomial::constant(value.clone())).scale(&lead_inv);
            g = g.mul(&factor.pow(ratio.unwrap()));
        }
        gs.push(g);
    }
    let mut h = Polynomial::one(ambient);
    for (p, &l) in set.points.iter().zip(labels) {
        h = h.mul(&Polynomial::linear_root(&p.value).pow(l));
    }
    if gs[0].compose(&fs[0]) != h || gs[1].compose(&fs[1]) != h {
        return Err(Error::NotCompatible(
            "regrouped product is not a common composite".into(),
        ));
    }
    let hn = h.normalized().descend(base).ok_or_else(|| {
        Error::NotCompatible("composite is not defined over the base field".into())
    })?;
    let minimal = hn.deg() as u64 == lcm(f1.deg() as u64, f2.deg() as u64);
    CompositeCertificate::from_composite(f1, f2, hn, minimal)
        .ok_or_else(|| Error::NotCompatible("cofactor extraction failed".into()))
}
