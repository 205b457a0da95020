//! The decision report: constructive search, closure from seeds, then cycle refutation.
//!
//! The first decisive step wins. A composite found by the fiber iteration or
//! built from a closed, consistent set gives `Exists`; an inconsistent closure
//! or a refuting cycle gives `NotExists`. Anything else is `Inconclusive`, with
//! the cap or limitation that stopped each step.

use crate::closure::{
    build_composite_from_set, compatible_closure, consistency_solve, CapKind, Caps, ClosureOutcome,
    ClosurePoint, ClosureTrace, Consistency, InconsistencyCertificate,
};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::Polynomial;
use crate::refute::{refute, RefutationCertificate, RefutationKind, RefuteConfig, SearchStep};
use crate::search::{
    default_bound, fiber_iterate, search_lin, CompositeCertificate, FiberRun, SearchOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzeConfig {
    pub caps: Caps,
    /// Degree cap for the fiber iteration; `None` uses [`default_bound`].
    pub bound: Option<u64>,
    pub max_d: usize,
    pub max_cycles: usize,
    pub field_seed: u64,
    /// Skip the cycle search even when nothing else is decisive.
    pub skip_refute: bool,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        let r = RefuteConfig::default();
        AnalyzeConfig {
            caps: Caps::default(),
            bound: None,
            max_d: r.max_d,
            max_cycles: r.max_cycles,
            field_seed: 0,
            skip_refute: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedReport {
    pub seed: FieldElement,
    pub closure: ClosureOutcome,
    pub consistency: Option<Consistency>,
    /// Composite built from the closure and its minimal labels, or why that failed.
    pub composite: Option<std::result::Result<CompositeCertificate, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Exists(CompositeCertificate),
    NotExists(RefutationCertificate),
    Inconclusive(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub f1: Polynomial,
    pub f2: Polynomial,
    pub fiber: FiberRun,
    pub seeds: Vec<SeedReport>,
    /// Cycle search cells, when the refutation step ran.
    pub refute_steps: Option<Vec<SearchStep>>,
    pub verdict: Verdict,
}

/// Turn an inconsistent cycle of a compatible set into a standalone refutation.
pub fn inconsistency_refutation(
    f1: &Polynomial,
    f2: &Polynomial,
    ambient: &FieldSpec,
    set: &[FieldElement],
    cert: &InconsistencyCertificate,
) -> RefutationCertificate {
    RefutationCertificate {
        kind: RefutationKind::InconsistentSet,
        f1: f1.clone(),
        f2: f2.clone(),
        ambient: ambient.clone(),
        points: cert.cycle.iter().map(|p| p.value.clone()).collect(),
        set: set.to_vec(),
        product: Some(cert.product.clone()),
        lhs: None,
        rhs: None,
        degree: None,
        prime: None,
    }
}

/// Partial-set inconsistency, if the capped closure already shows one.
fn partial_conflict(
    f1: &Polynomial,
    f2: &Polynomial,
    closure: &ClosureOutcome,
) -> Result<Option<Consistency>> {
    let ClosureOutcome::CapExceeded(t) = closure else {
        return Ok(None);
    };
    // the fiber relations hold pairwise, so a partial set can still be inconsistent
    Ok(
        match consistency_solve(&partial_points(f1, f2, t)?, f1, f2)? {
            c @ Consistency::Inconsistent(_) => Some(c),
            Consistency::Consistent(_) => None,
        },
    )
}

fn analyze_seed(
    f1: &Polynomial,
    f2: &Polynomial,
    seed: &FieldElement,
    cfg: &AnalyzeConfig,
) -> Result<SeedReport> {
    // small ambient caps first: conflicts often show up long before the full closure
    let mut ext = 4;
    while ext < cfg.caps.max_ext {
        let caps = Caps {
            max_ext: ext,
            ..cfg.caps
        };
        let closure = compatible_closure(f1, f2, seed, caps, cfg.field_seed)?;
        if let ClosureOutcome::CapExceeded(t) = &closure {
            if !matches!(t.cap, CapKind::Extension { .. }) {
                break;
            }
            if let Some(c) = partial_conflict(f1, f2, &closure)? {
                return Ok(SeedReport {
                    seed: seed.clone(),
                    closure,
                    consistency: Some(c),
                    composite: None,
                });
            }
        } else {
            break;
        }
        ext *= 3;
    }
    let closure = compatible_closure(f1, f2, seed, cfg.caps, cfg.field_seed)?;
    let ClosureOutcome::Closed(set) = &closure else {
        let consistency = partial_conflict(f1, f2, &closure)?;
        return Ok(SeedReport {
            seed: seed.clone(),
            closure,
            consistency,
            composite: None,
        });
    };
    let consistency = consistency_solve(&set.points, f1, f2)?;
    let composite = match &consistency {
        Consistency::Consistent(labels) => {
            Some(match build_composite_from_set(set, labels, f1, f2) {
                Ok(mut c) => {
                    if !c.minimal {
                        let below = c.h.deg() as u64 - 1;
                        c.minimal =
                            matches!(search_lin(f1, f2, below)?, SearchOutcome::NoneBelow(_));
                    }
                    Ok(c)
                }
                Err(e) => Err(e.to_string()),
            })
        }
        Consistency::Inconsistent(_) => None,
    };
    Ok(SeedReport {
        seed: seed.clone(),
        closure,
        consistency: Some(consistency),
        composite,
    })
}

fn partial_points(f1: &Polynomial, f2: &Polynomial, t: &ClosureTrace) -> Result<Vec<ClosurePoint>> {
    let (g1, g2) = (f1.embed(&t.ambient)?, f2.embed(&t.ambient)?);
    t.points
        .iter()
        .map(|a| {
            let a = a.embed(&t.ambient)?;
            Ok(ClosurePoint {
                m1: g1.multiplicity(&a),
                m2: g2.multiplicity(&a),
                value: a,
                label: None,
            })
        })
        .collect()
}

/// Run every step for `f1`, `f2` and report the first decisive verdict.
///
/// Seeds may lie in the coefficient field or any extension of it; an empty
/// list means the single seed `0`.
pub fn analyze(
    f1: &Polynomial,
    f2: &Polynomial,
    seeds: &[FieldElement],
    cfg: &AnalyzeConfig,
) -> Result<AnalysisReport> {
    if f1.spec() != f2.spec() {
        return Err(Error::IncompatibleFields(format!(
            "{} vs {}",
            f1.spec(),
            f2.spec()
        )));
    }
    let base = f1.spec();
    let bound = cfg.bound.unwrap_or_else(|| default_bound(f1, f2));
    let fiber = fiber_iterate(f1, f2, bound)?;
    let default_seed = [FieldElement::zero(base)];
    let seeds = if seeds.is_empty() {
        &default_seed[..]
    } else {
        seeds
    };
    let reports = seeds
        .iter()
        .map(|s| analyze_seed(f1, f2, s, cfg))
        .collect::<Result<Vec<_>>>()?;

    let mut reasons = Vec::new();
    if let SearchOutcome::Found(c) = &fiber.outcome {
        return Ok(finish(
            f1,
            f2,
            fiber.clone(),
            reports,
            None,
            Verdict::Exists(c.clone()),
        ));
    }
    if let SearchOutcome::CapExceeded { cap, trace } = &fiber.outcome {
        reasons.push(format!(
            "fiber iteration passed degree cap {cap} (degrees {trace:?})"
        ));
    }
    for r in &reports {
        match (&r.closure, &r.consistency, &r.composite) {
            (ClosureOutcome::Closed(set), Some(Consistency::Inconsistent(cert)), _) => {
                let refutation =
                    inconsistency_refutation(f1, f2, &set.ambient, &set.values(), cert);
                return Ok(finish(
                    f1,
                    f2,
                    fiber,
                    reports.clone(),
                    None,
                    Verdict::NotExists(refutation),
                ));
            }
            (ClosureOutcome::CapExceeded(_), Some(Consistency::Inconsistent(cert)), _) => {
                let set: Vec<FieldElement> = cert.cycle.iter().map(|p| p.value.clone()).collect();
                let refutation =
                    inconsistency_refutation(f1, f2, &set[0].spec().clone(), &set, cert);
                return Ok(finish(
                    f1,
                    f2,
                    fiber,
                    reports.clone(),
                    None,
                    Verdict::NotExists(refutation),
                ));
            }
            (_, _, Some(Ok(c))) => {
                return Ok(finish(
                    f1,
                    f2,
                    fiber,
                    reports.clone(),
                    None,
                    Verdict::Exists(c.clone()),
                ));
            }
            (_, _, Some(Err(e))) => reasons.push(format!(
                "seed {}: composite construction failed: {e}",
                r.seed
            )),
            (ClosureOutcome::CapExceeded(t), _, _) => {
                let mut msg = format!(
                    "seed {}: closure stopped at {} points by {:?}",
                    r.seed,
                    t.points.len(),
                    t.cap
                );
                if let Some(o) = &t.orbit {
                    msg.push_str(&format!(
                        "; translation orbit by {} through {}, {}, {}",
                        o.translation, o.points[0], o.points[1], o.points[2]
                    ));
                }
                reasons.push(msg);
            }
            _ => {}
        }
    }
    if cfg.skip_refute {
        reasons.push("cycle search skipped".into());
        return Ok(finish(
            f1,
            f2,
            fiber,
            reports,
            None,
            Verdict::Inconclusive(reasons),
        ));
    }
    if !base.is_finite() {
        reasons.push("cycle search is only available over finite fields".into());
        return Ok(finish(
            f1,
            f2,
            fiber,
            reports,
            None,
            Verdict::Inconclusive(reasons),
        ));
    }
    let rcfg = RefuteConfig {
        max_d: cfg.max_d,
        max_ext: cfg.caps.max_ext,
        max_cycles: cfg.max_cycles,
        field_seed: cfg.field_seed,
    };
    let run = refute(f1, f2, rcfg)?;
    let verdict = match run.certificate {
        Some(c) => Verdict::NotExists(c),
        None => {
            reasons.push(format!("no refuting cycle with d <= {}", cfg.max_d));
            Verdict::Inconclusive(reasons)
        }
    };
    Ok(finish(f1, f2, fiber, reports, Some(run.steps), verdict))
}

fn finish(
    f1: &Polynomial,
    f2: &Polynomial,
    fiber: FiberRun,
    seeds: Vec<SeedReport>,
    refute_steps: Option<Vec<SearchStep>>,
    verdict: Verdict,
) -> AnalysisReport {
    AnalysisReport {
        f1: f1.clone(),
        f2: f2.clone(),
        fiber,
        seeds,
        refute_steps,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::refute::verify_refutation;
    use crate::search::verify_certificate;

    #[test]
    fn inconsistent_pair_is_refuted() {
        for spec in [FieldSpec::prime(2).unwrap(), FieldSpec::rationals()] {
            let f1 = parse_poly("x^2-x", &spec).unwrap();
            let f2 = parse_poly("x^3-x^2", &spec).unwrap();
            let r = analyze(&f1, &f2, &[], &AnalyzeConfig::default()).unwrap();
            let Verdict::NotExists(c) = &r.verdict else {
                panic!("{:?}", r.verdict)
            };
            assert_eq!(c.kind, RefutationKind::InconsistentSet);
            assert!(verify_refutation(c));
        }
    }

    #[test]
    fn composite_found() {
        let k = FieldSpec::prime(3).unwrap();
        let f1 = parse_poly("x^2", &k).unwrap();
        let f2 = parse_poly("x^3+x^2+x", &k).unwrap();
        let r = analyze(&f1, &f2, &[], &AnalyzeConfig::default()).unwrap();
        let Verdict::Exists(c) = &r.verdict else {
            panic!()
        };
        assert_eq!(c.h.deg(), 18);
        assert!(verify_certificate(c));
        let built = r.seeds[0].composite.clone().unwrap().unwrap();
        assert_eq!(built.h, c.h);
    }

    #[test]
    fn rational_translation_is_inconclusive() {
        let q = FieldSpec::rationals();
        let f1 = parse_poly("x^2", &q).unwrap();
        let f2 = parse_poly("(x-1)^2", &q).unwrap();
        let cfg = AnalyzeConfig {
            caps: Caps {
                max_size: 50,
                max_ext: 60,
            },
            ..AnalyzeConfig::default()
        };
        let r = analyze(&f1, &f2, &[FieldElement::from_i64(&q, 3)], &cfg).unwrap();
        let Verdict::Inconclusive(reasons) = &r.verdict else {
            panic!()
        };
        assert!(reasons.iter().any(|m| m.contains("translation orbit")));
    }
}
