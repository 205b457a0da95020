//! Acceptance checks, one line per criterion. Runs as a plain binary so the
//! verdict lines always reach the terminal; exits nonzero if any check fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use polycomp::analyze::{analyze, AnalyzeConfig, Verdict};
use polycomp::arith::lcm;
use polycomp::closure::{
    build_composite_from_set, compatible_closure, consistency_solve, Caps, ClosureOutcome,
    ClosurePoint, Consistency,
};
use polycomp::families::{
    additive_family, common_right_component, deg2_pair, dickson, dickson_closed_form,
    random_tame_instance, shifted_family, DegreeFormula,
};
use polycomp::format::{parse_records, refutation_from_record, refutation_record};
use polycomp::poly::factor_degrees;
use polycomp::refute::{
    derivative_cycle_test, refute, verify_refutation, DerivativeVerdict, FiberCycle,
    RefutationKind, RefuteConfig,
};
use polycomp::search::{
    descend_check, fiber_iterate, search_lin, verify_certificate, SearchOutcome,
};
use polycomp::{make_extension, parse_poly, FieldElement, FieldSpec, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Check {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(())
}

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn poly(s: &str, k: &FieldSpec) -> Polynomial {
    parse_poly(s, k).unwrap()
}

fn ints(f: &Polynomial) -> Vec<u64> {
    f.coeffs()
        .iter()
        .map(|c| c.prime_value().unwrap())
        .collect()
}

fn bits(f: &Polynomial) -> u64 {
    ints(f)
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &c)| acc | (c << i))
}

fn found_degree(o: &SearchOutcome) -> Option<usize> {
    o.found().map(|c| c.h.deg())
}

fn example_iteration_trace() -> Check {
    let start = Instant::now();
    let k = gf(3);
    let (f1, f2) = (poly("x^2", &k), poly("x^3+x^2+x", &k));
    let run = fiber_iterate(&f1, &f2, 18).map_err(|e| e.to_string())?;
    let expected: Vec<Polynomial> = [
        "x^2",
        "x^6-x^5-x^3+x^2",
        "x^10-x^8-x^4+x^2",
        "x^18-x^14-x^6+x^2",
    ]
    .iter()
    .map(|s| poly(s, &k))
    .collect();
    ensure!(
        run.trace == expected,
        "trace {:?}",
        run.trace.iter().map(|r| r.to_string()).collect::<Vec<_>>()
    );
    let h = run
        .outcome
        .found()
        .ok_or("iteration did not stabilize")?
        .h
        .clone();
    let lin = search_lin(&f1, &f2, 18).map_err(|e| e.to_string())?;
    let c = lin
        .found()
        .ok_or("linear search found nothing at bound 18")?;
    ensure!(c.h == h && c.h.deg() == 18, "linear search gave {}", c.h);
    ensure!(
        search_lin(&f1, &f2, 17).unwrap() == SearchOutcome::NoneBelow(17),
        "composite below 18"
    );
    ensure!(
        common::min_composite_degree(&ints(&f1), &ints(&f2), 18, 3) == Some(18),
        "rank oracle disagrees"
    );
    within(start, Duration::from_secs(1))
}

fn quadratic_pairs() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for p in [2u64, 3, 5, 7, 11] {
        let k = gf(p);
        let mut done = 0;
        while done < 5 {
            let a = rng.gen_range(0..p) as i64;
            let b = rng.gen_range(0..p) as i64;
            if a == b {
                continue;
            }
            done += 1;
            let inst = deg2_pair(
                &FieldElement::from_i64(&k, a),
                &FieldElement::from_i64(&k, b),
            )
            .unwrap();
            let below = 2 * p - 1;
            let r = search_lin(&inst.f1, &inst.f2, below).unwrap();
            ensure!(
                r == SearchOutcome::NoneBelow(below),
                "p={p} a={a} b={b}: {:?} below {below}",
                found_degree(&r)
            );
            let r = search_lin(&inst.f1, &inst.f2, 2 * p).unwrap();
            let c = r
                .found()
                .ok_or(format!("p={p} a={a} b={b}: nothing at {}", 2 * p))?;
            ensure!(c.h.deg() as u64 == 2 * p, "degree {}", c.h.deg());
            ensure!(
                Some(&c.h) == inst.expected_h.as_ref(),
                "explicit composite differs for p={p}"
            );
        }
        let same = FieldElement::from_i64(&k, 1);
        let inst = deg2_pair(&same, &same).unwrap();
        ensure!(
            found_degree(&search_lin(&inst.f1, &inst.f2, 2).unwrap()) == Some(2),
            "a = b over F_{p}"
        );
    }
    within(start, Duration::from_secs(5))
}

fn explicit_minimal_composites() -> Check {
    let start = Instant::now();
    let f2k = gf(2);
    let r = search_lin(&poly("x^3", &f2k), &poly("x^2-x", &f2k), 12).unwrap();
    ensure!(
        r.found().map(|c| &c.h) == Some(&poly("(x^4-x)^3", &f2k)),
        "F_2 pair: {:?}",
        found_degree(&r)
    );
    ensure!(
        search_lin(&poly("x^3", &f2k), &poly("x^2-x", &f2k), 11).unwrap()
            == SearchOutcome::NoneBelow(11),
        "F_2 pair below 12"
    );
    let f3k = gf(3);
    let r = search_lin(&poly("x^2", &f3k), &poly("x^3-x", &f3k), 6).unwrap();
    ensure!(
        r.found().map(|c| &c.h) == Some(&poly("(x^3-x)^2", &f3k)),
        "F_3 pair: {:?}",
        found_degree(&r)
    );

    let inst = additive_family(3, 2, 1).unwrap();
    ensure!(
        inst.expected_h == Some(poly("(x^4-x)^3", &f2k)),
        "additive family h"
    );
    let inst = additive_family(2, 3, 1).unwrap();
    ensure!(
        inst.expected_h == Some(poly("(x^3-x)^2", &f3k)),
        "companion additive family h"
    );

    let inst = shifted_family(11, 13, 2).unwrap();
    ensure!(
        inst.params.contains(&("d".into(), "60".into())),
        "d for (11, 13): {:?}",
        inst.params
    );
    ensure!(
        inst.expected_min_degree
            == DegreeFormula {
                base: 143,
                p: 2,
                exp: 60
            },
        "degree {}",
        inst.expected_min_degree
    );
    ensure!(inst.expected_h.is_none(), "143*2^60 must stay symbolic");
    ensure!(common::naive_order(2, 143) == 60, "order oracle");
    let inst = shifted_family(1447, 1451, 2).unwrap();
    ensure!(
        inst.params.contains(&("d".into(), "1048350".into())),
        "d for (1447, 1451): {:?}",
        inst.params
    );
    ensure!(
        inst.expected_min_degree.to_string() == "2099597*2^1048350",
        "degree {}",
        inst.expected_min_degree
    );
    ensure!(
        common::naive_order(2, 1447 * 1451) == 1048350,
        "order oracle"
    );
    within(start, Duration::from_secs(10))
}

fn point(f1: &Polynomial, f2: &Polynomial, a: FieldElement) -> ClosurePoint {
    let (g1, g2) = (f1.embed(a.spec()).unwrap(), f2.embed(a.spec()).unwrap());
    ClosurePoint {
        m1: g1.multiplicity(&a),
        m2: g2.multiplicity(&a),
        value: a,
        label: None,
    }
}

fn certificate_round_trips(c: &polycomp::refute::RefutationCertificate) -> Check {
    let text = refutation_record(c).to_string();
    let back = refutation_from_record(&parse_records(&text).map_err(|e| e.to_string())?[0])
        .map_err(|e| e.to_string())?;
    ensure!(
        verify_refutation(&back),
        "re-read certificate does not verify:\n{text}"
    );
    Ok(())
}

fn inconsistency_certificates() -> Check {
    for k in [gf(2), FieldSpec::rationals()] {
        let start = Instant::now();
        let (f1, f2) = (poly("x^2-x", &k), poly("x^3-x^2", &k));
        let pts = vec![
            point(&f1, &f2, FieldElement::zero(&k)),
            point(&f1, &f2, FieldElement::one(&k)),
        ];
        let Consistency::Inconsistent(c) = consistency_solve(&pts, &f1, &f2).unwrap() else {
            return Err(format!("{{0,1}} over {k} judged consistent"));
        };
        ensure!(
            c.product == BigRational::new(1.into(), 2.into()),
            "product {} over {k}",
            c.product
        );
        let rep = analyze(&f1, &f2, &[], &AnalyzeConfig::default()).unwrap();
        let Verdict::NotExists(cert) = &rep.verdict else {
            return Err(format!("analyze over {k}: {:?}", rep.verdict));
        };
        certificate_round_trips(cert)?;
        within(start, Duration::from_secs(1))?;
    }
    let start = Instant::now();
    let k = gf(3);
    let f9 = FieldSpec::parse("GF(3^2; m=t^2+1)", 0).unwrap();
    let i = FieldElement::generator(&f9).unwrap();
    ensure!(i.mul(&i) == FieldElement::from_i64(&f9, -1), "i^2 != -1");
    let (f1, f2) = (poly("x^3+x+1", &k), poly("x^4+x+1", &k));
    let one = FieldElement::one(&f9);
    let vals = [FieldElement::zero(&f9), one.neg(), i.clone(), i.sub(&one)];
    let pts: Vec<ClosurePoint> = vals.iter().map(|v| point(&f1, &f2, v.clone())).collect();
    let Consistency::Inconsistent(c) = consistency_solve(&pts, &f1, &f2).unwrap() else {
        return Err("{0, -1, i, i-1} judged consistent".into());
    };
    let three = BigRational::from_integer(3.into());
    ensure!(
        c.product == three || c.product == three.recip(),
        "product {}",
        c.product
    );
    let rep = analyze(&f1, &f2, &[], &AnalyzeConfig::default()).unwrap();
    let Verdict::NotExists(cert) = &rep.verdict else {
        return Err(format!("analyze over F_3: {:?}", rep.verdict));
    };
    certificate_round_trips(cert)?;
    within(start, Duration::from_secs(1))
}

fn omega_example() -> Check {
    let k = gf(2);
    let (f1, f2) = (poly("x^3", &k), poly("x^2+x", &k));
    let r = search_lin(&f1, &f2, 12).unwrap();
    let c = r.found().ok_or("no composite at degree 12")?;
    ensure!(c.h.deg() == 12 && c.minimal, "degree {}", c.h.deg());
    ensure!(c.h == poly("(x^4+x)^3", &k), "h = {}", c.h);
    let f4 = make_extension(2, 2, 0).unwrap();
    let w = FieldElement::generator(&f4).unwrap();
    ensure!(
        !w.is_one() && w.pow(3).is_one(),
        "generator of F_4 is not a cube root of unity"
    );
    let dh = c.h.derivative().embed(&f4).unwrap();
    ensure!(
        dh.eval(&w).is_zero() && dh.eval(&w.mul(&w)).is_zero(),
        "h' does not vanish at omega, omega^2"
    );
    // the derivative criterion does fire on (omega, omega^2) when its degree hypothesis is ignored
    let (d1, d2) = (
        f1.derivative().embed(&f4).unwrap(),
        f2.derivative().embed(&f4).unwrap(),
    );
    let (a, b) = (w.clone(), w.mul(&w));
    ensure!(
        f1.embed(&f4).unwrap().eval(&a) == f1.embed(&f4).unwrap().eval(&b),
        "f1(omega) != f1(omega^2)"
    );
    ensure!(
        d1.eval(&a).mul(&d2.eval(&b)) != d1.eval(&b).mul(&d2.eval(&a)),
        "derivative products agree"
    );
    Ok(())
}

const PSI: u64 =
    (1 << 14) | (1 << 10) | (1 << 9) | (1 << 8) | (1 << 7) | (1 << 6) | (1 << 4) | (1 << 1) | 1;

fn psi_example() -> Check {
    let start = Instant::now();
    let k = gf(2);
    let psi = poly("x^14+x^10+x^9+x^8+x^7+x^6+x^4+x+1", &k);
    ensure!(
        factor_degrees(&psi).unwrap() == vec![(14, 1)],
        "psi is not irreducible"
    );
    let ext = FieldSpec::parse("GF(2^14; m=t^14+t^10+t^9+t^8+t^7+t^6+t^4+t+1)", 0)
        .map_err(|e| e.to_string())?;
    let alpha = FieldElement::generator(&ext).unwrap();
    let beta = alpha.frobenius(7).unwrap();
    ensure!(beta == alpha.pow(128), "frobenius(7) != alpha^128");
    let (f1, f2) = (poly("x^4+x^3", &k), poly("x^6+x^2+x", &k));
    for f in [&f1, &f2] {
        let g = f.embed(&ext).unwrap();
        ensure!(
            g.eval(&alpha) == g.eval(&beta),
            "{f} separates alpha and beta"
        );
        // bit-mask oracle: 2 is alpha, 1 << 7 squared to 1 << 128 by repeated squaring
        let b = common::gf2_pow(2, 128, PSI);
        ensure!(
            common::gf2_eval(bits(f), 2, PSI) == common::gf2_eval(bits(f), b, PSI),
            "oracle: {f} separates"
        );
    }
    let cycle = FiberCycle::new(vec![alpha.clone(), beta.clone()]).unwrap();
    let DerivativeVerdict::Certificate(cert) = derivative_cycle_test(&f1, &f2, &cycle).unwrap()
    else {
        return Err("derivative test on (alpha, alpha^128) gave no certificate".into());
    };
    ensure!(
        cert.degree == Some(14) && cert.prime == Some(7),
        "degree {:?}, prime {:?}",
        cert.degree,
        cert.prime
    );
    // oracle: f1' = x^2, f2' = 1, so the products are alpha^2 and beta^2
    let b = common::gf2_pow(2, 128, PSI);
    ensure!(
        common::gf2_mul(2, 2, PSI) != common::gf2_mul(b, b, PSI),
        "oracle: products agree"
    );
    let run = refute(&f1, &f2, RefuteConfig::default()).unwrap();
    let c = run.certificate.ok_or("refute found nothing")?;
    ensure!(
        c.kind == RefutationKind::DerivativeCycle,
        "refute gave {}",
        c.kind
    );
    certificate_round_trips(&c)?;
    within(start, Duration::from_secs(2))
}

const W10: u64 = (1 << 10) | (1 << 9) | (1 << 4) | (1 << 2) | 1;
const CYCLE_EXPONENTS: [u64; 10] = [1, 268, 4, 49, 16, 196, 64, 784, 256, 67];

fn ten_point_cycle() -> Check {
    let start = Instant::now();
    let k = gf(2);
    let (f1, f2) = (poly("x^2+x", &k), poly("x^4+x^3+x", &k));
    let ext = FieldSpec::parse("GF(2^10; m=t^10+t^9+t^4+t^2+1)", 0).map_err(|e| e.to_string())?;
    let w = FieldElement::generator(&ext).unwrap();
    let points: Vec<FieldElement> = CYCLE_EXPONENTS.iter().map(|&e| w.pow(e)).collect();
    let cycle = FiberCycle::new(points).unwrap();
    cycle
        .validate(&f1, &f2)
        .map_err(|e| format!("not a fiber cycle: {e}"))?;
    ensure!(!f1.in_kxp() && !f2.in_kxp(), "an input lies in K[x^2]");
    ensure!(
        cycle.points[0].element_degree().unwrap() == 10,
        "c_1 does not have degree 10"
    );
    // oracle for the products: f1' = 1, f2' = x^2 + 1
    let vals: Vec<u64> = CYCLE_EXPONENTS
        .iter()
        .map(|&e| common::gf2_pow(2, e, W10))
        .collect();
    let d2 = |c: u64| common::gf2_mul(c, c, W10) ^ 1;
    let lhs = vals
        .iter()
        .skip(1)
        .step_by(2)
        .fold(1, |acc, &c| common::gf2_mul(acc, d2(c), W10));
    let rhs = vals
        .iter()
        .step_by(2)
        .fold(1, |acc, &c| common::gf2_mul(acc, d2(c), W10));
    let verdict = derivative_cycle_test(&f1, &f2, &cycle).unwrap();
    match verdict {
        DerivativeVerdict::Certificate(c) => {
            ensure!(
                lhs != rhs,
                "certificate issued although the oracle products agree"
            );
            certificate_round_trips(&c)?;
            within(start, Duration::from_secs(5))
        }
        DerivativeVerdict::ProductsEqual => Err(format!(
            "valid cycle, degree 10 with prime 5 > 4, but the derivative products agree \
             (reference arithmetic: {lhs:#x} vs {rhs:#x}), so no certificate can be issued"
        )),
        DerivativeVerdict::HypothesisNotMet { degree, .. } => {
            Err(format!("degree hypothesis failed at degree {degree}"))
        }
    }
}

fn inconsistent_pair_verdict() -> Check {
    let k = gf(2);
    let (f1, f2) = (poly("x^2-x", &k), poly("x^3-x^2", &k));
    let rep = analyze(
        &f1,
        &f2,
        &[],
        &AnalyzeConfig {
            bound: Some(64),
            ..AnalyzeConfig::default()
        },
    )
    .unwrap();
    ensure!(
        matches!(rep.verdict, Verdict::NotExists(_)),
        "verdict {:?}",
        rep.verdict
    );
    ensure!(
        matches!(
            rep.fiber.outcome,
            SearchOutcome::CapExceeded { cap: 64, .. }
        ),
        "fiber iteration did not hit the cap"
    );
    for (j, r) in rep.fiber.trace.iter().enumerate() {
        let (f, e) = if j % 2 == 0 {
            (&f1, j / 2)
        } else {
            (&f2, j / 2)
        };
        ensure!(*r == f.pow(1 << e), "r_{} = {r}", j + 1);
    }
    let odd: Vec<usize> = rep.fiber.degrees().into_iter().step_by(2).collect();
    ensure!(
        odd.starts_with(&[2, 4, 8, 16, 32, 64]),
        "doubling degrees {odd:?}"
    );
    Ok(())
}

/// Random pairs with a composite of degree at most 32, in a fixed order.
fn random_pairs() -> Vec<(Polynomial, Polynomial)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let k = gf(p);
        for _ in 0..150 {
            let gen = |rng: &mut ChaCha8Rng| {
                let d = rng.gen_range(1..=4usize);
                let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(0..p) as i64).collect();
                c[d] = rng.gen_range(1..p) as i64;
                Polynomial::from_ints(&k, &c)
            };
            out.push((gen(&mut rng), gen(&mut rng)));
        }
    }
    out
}

fn degree_law() -> Check {
    let start = Instant::now();
    let pairs = random_pairs();
    let mut found = 0;
    for (f1, f2) in &pairs {
        let p = f1.spec().characteristic();
        let lin = search_lin(f1, f2, 32).unwrap();
        let fib = fiber_iterate(f1, f2, 32).unwrap();
        let oracle = common::min_composite_degree(&ints(f1), &ints(f2), 32, p);
        ensure!(
            found_degree(&lin) == oracle,
            "({f1}, {f2}): search {:?}, rank oracle {oracle:?}",
            found_degree(&lin)
        );
        match lin.found() {
            Some(c) => {
                found += 1;
                let l = lcm(f1.deg() as u64, f2.deg() as u64);
                let mut q = c.h.deg() as u64;
                ensure!(
                    q.is_multiple_of(l),
                    "({f1}, {f2}): degree {q} not a multiple of {l}"
                );
                q /= l;
                while q.is_multiple_of(p) {
                    q /= p;
                }
                ensure!(
                    q == 1,
                    "({f1}, {f2}): degree {} is not lcm * p^s",
                    c.h.deg()
                );
                ensure!(
                    fib.outcome.found().map(|d| &d.h) == Some(&c.h),
                    "({f1}, {f2}): fiber iteration differs"
                );
            }
            None => ensure!(
                fib.outcome.found().is_none(),
                "({f1}, {f2}): only the fiber iteration found one"
            ),
        }
    }
    ensure!(
        pairs.len() >= 200 && found >= 50,
        "{} pairs, {found} with composites",
        pairs.len()
    );
    let mut descents = 0;
    for (f1, f2) in pairs
        .iter()
        .filter(|(a, b)| a.deg() <= 3 && b.deg() <= 3)
        .take(20)
    {
        let p = f1.spec().characteristic();
        let ext = make_extension(p, 2, 0).unwrap();
        let rep = descend_check(f1, f2, &ext, 32).unwrap();
        ensure!(rep.holds(), "({f1}, {f2}) over {ext}: {rep:?}");
        descents += 1;
    }
    ensure!(descents == 20, "only {descents} descent pairs");
    within(start, Duration::from_secs(60))
}

fn closure_structure() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let caps = Caps {
        max_size: 4096,
        max_ext: 200,
    };
    let mut checked = 0;
    for (f1, f2) in random_pairs() {
        let Some(c) = search_lin(&f1, &f2, 32).unwrap().found().cloned() else {
            continue;
        };
        let k = f1.spec();
        let seed = FieldElement::from_i64(k, rng.gen_range(0..k.characteristic()) as i64);
        let ClosureOutcome::Closed(set) = compatible_closure(&f1, &f2, &seed, caps, 0).unwrap()
        else {
            return Err(format!("({f1}, {f2}) seed {seed}: closure hit a cap"));
        };
        ensure!(
            set.len() <= c.h.deg(),
            "({f1}, {f2}): {} points for degree {}",
            set.len(),
            c.h.deg()
        );
        let Consistency::Consistent(labels) = consistency_solve(&set.points, &f1, &f2).unwrap()
        else {
            return Err(format!(
                "({f1}, {f2}) seed {seed}: inconsistent although h exists"
            ));
        };
        let total: u64 = labels.iter().sum();
        ensure!(
            total == c.h.deg() as u64,
            "({f1}, {f2}) seed {seed}: labels sum to {total}, degree {}",
            c.h.deg()
        );
        let h = c.h.embed(&set.ambient).unwrap();
        for (pt, &l) in set.points.iter().zip(&labels) {
            let shifted = h.sub(&Polynomial::constant(h.eval(&pt.value)));
            ensure!(
                shifted.multiplicity(&pt.value) == l,
                "({f1}, {f2}): label {l} at {}",
                pt.value
            );
        }
        let built = build_composite_from_set(&set, &labels, &f1, &f2)
            .map_err(|e| format!("({f1}, {f2}): {e}"))?;
        ensure!(
            verify_certificate(&built),
            "({f1}, {f2}): built certificate does not verify"
        );
        ensure!(
            built.h == c.h,
            "({f1}, {f2}): built {} vs minimal {}",
            built.h,
            c.h
        );
        checked += 1;
    }
    ensure!(checked >= 50, "only {checked} pairs checked");
    Ok(())
}

fn dickson_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields = [gf(2), gf(3), gf(5), FieldSpec::rationals()];
    for k in &fields {
        for a in -2..=3 {
            let alpha = FieldElement::from_i64(k, a);
            for n in 0..=12 {
                ensure!(
                    dickson(n, &alpha) == dickson_closed_form(n, &alpha),
                    "D_{n}(x, {alpha}) over {k}"
                );
            }
        }
    }
    for k in [gf(5), gf(7), FieldSpec::rationals()] {
        for _ in 0..100 {
            let n = rng.gen_range(1..=12);
            let nonzero = |rng: &mut ChaCha8Rng| loop {
                let e = FieldElement::random(&k, rng);
                if !e.is_zero() {
                    return e;
                }
            };
            let (beta, alpha) = (nonzero(&mut rng), nonzero(&mut rng));
            let t = alpha.div(&beta).unwrap();
            let lhs = dickson(n, &alpha).eval(&beta.add(&t));
            ensure!(
                lhs == beta.pow(n).add(&t.pow(n)),
                "functional equation n={n} over {k}"
            );
            let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            let x = FieldElement::random(&k, &mut rng);
            let inner = dickson(n, &alpha).eval(&x);
            ensure!(
                dickson(m, &alpha.pow(n)).eval(&inner) == dickson(m * n, &alpha).eval(&x),
                "D_{m}(D_{n}) != D_{} over {k}",
                m * n
            );
        }
    }
    Ok(())
}

fn right_components() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in [FieldSpec::rationals(), gf(101)] {
        for _ in 0..10 {
            let inst = random_tame_instance(&k, &mut rng).unwrap();
            let h = inst
                .params
                .iter()
                .find(|(n, _)| n == "h")
                .map(|(_, v)| poly(v, &k))
                .unwrap();
            let r = common_right_component(&inst.f1, &inst.f2)
                .ok_or(format!("no component for ({}, {})", inst.f1, inst.f2))?;
            let g = polycomp::arith::gcd(inst.f1.deg() as u64, inst.f2.deg() as u64);
            ensure!(
                r.deg() as u64 == g,
                "component degree {} vs gcd {g}",
                r.deg()
            );
            ensure!(r == h.normalized(), "recovered {r}, generated {h}");
        }
    }
    for p in [3u64, 5, 7] {
        let k = gf(p);
        let inst = deg2_pair(
            &FieldElement::from_i64(&k, 1),
            &FieldElement::from_i64(&k, 2),
        )
        .unwrap();
        ensure!(
            common_right_component(&inst.f1, &inst.f2).is_none(),
            "x^2+x, x^2+2x over F_{p} share a component"
        );
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        (
            "fiber iteration trace for x^2, x^3+x^2+x over F_3",
            example_iteration_trace,
        ),
        ("quadratic pairs reach degree 2p", quadratic_pairs),
        (
            "explicit minimal composites and order formulas",
            explicit_minimal_composites,
        ),
        ("inconsistency certificates", inconsistency_certificates),
        ("x^3, x^2+x: h'(omega) = h'(omega^2) = 0", omega_example),
        ("degree-14 derivative cycle certificate", psi_example),
        ("ten-point derivative cycle certificate", ten_point_cycle),
        (
            "capped iteration, inconsistent verdict",
            inconsistent_pair_verdict,
        ),
        ("degree law, iteration agreement, descent", degree_law),
        ("closure, labels and built composites", closure_structure),
        (
            "Dickson recurrence, functional equation, composition",
            dickson_suite,
        ),
        ("shared right components of tame pairs", right_components),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
