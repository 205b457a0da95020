//! Line-oriented `key=value` records for certificates, reports and corpora.
//!
//! A file holds one or more records separated by blank lines; `#` starts a
//! comment line. Every record that mentions field elements carries the field
//! with its modulus, so it can be re-checked without any other context.

use std::fmt;

use num_rational::BigRational;

use crate::analyze::{AnalysisReport, Verdict};
use crate::closure::{ClosureOutcome, Consistency};
use crate::error::{Error, Result};
use crate::families::{FamilyInstance, FamilyTag};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{parse_poly, Polynomial};
use crate::refute::{RefutationCertificate, RefutationKind};
use crate::search::{CompositeCertificate, SearchOutcome};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Record {
    pub entries: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        let mut r = Record::default();
        r.push("kind", kind);
        r
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Format(format!("missing key `{key}`")))
    }

    pub fn kind(&self) -> &str {
        self.get("kind").unwrap_or("")
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Split `text` into records; duplicate keys within a record are an error.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    let mut cur = Record::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.trim().is_empty() {
            if !cur.entries.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            continue;
        }
        if line.trim_start().starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("line {}: expected key=value", lineno + 1)))?;
        let k = k.trim();
        if cur.get(k).is_some() {
            return Err(Error::Format(format!(
                "line {}: duplicate key `{k}`",
                lineno + 1
            )));
        }
        cur.entries.push((k.to_string(), v.trim().to_string()));
    }
    if !cur.entries.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

/// Records joined by blank lines.
pub fn write_records(records: &[Record]) -> String {
    records
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn field_of(r: &Record, key: &str) -> Result<FieldSpec> {
    FieldSpec::parse(r.require(key)?, 0)
}

fn poly_of(r: &Record, key: &str, spec: &FieldSpec) -> Result<Polynomial> {
    parse_poly(r.require(key)?, spec)
}

fn bool_of(r: &Record, key: &str) -> Result<bool> {
    match r.require(key)? {
        "true" => Ok(true),
        "false" => Ok(false),
        v => Err(Error::Format(format!(
            "`{key}` must be true or false, got `{v}`"
        ))),
    }
}

fn int_of<T: std::str::FromStr>(r: &Record, key: &str) -> Result<T> {
    let v = r.require(key)?;
    v.parse()
        .map_err(|_| Error::Format(format!("`{key}` is not an integer: `{v}`")))
}

fn points_text(points: &[FieldElement]) -> String {
    points
        .iter()
        .map(|p| p.to_vector_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn points_of(text: &str, spec: &FieldSpec) -> Result<Vec<FieldElement>> {
    text.split_whitespace()
        .map(|t| FieldElement::from_vector_string(spec, t))
        .collect()
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn composite_record(c: &CompositeCertificate) -> Record {
    let mut r = Record::new("CompositeCertificate");
    r.push("field", c.f1.spec());
    r.push("f1", &c.f1);
    r.push("f2", &c.f2);
    r.push("h", &c.h);
    r.push("degree", c.h.deg());
    r.push("g1", &c.g1);
    r.push("g2", &c.g2);
    r.push("minimal", c.minimal);
    r.push("normalized", c.normalized);
    r
}

pub fn composite_from_record(r: &Record) -> Result<CompositeCertificate> {
    if r.kind() != "CompositeCertificate" {
        return Err(Error::Format(format!(
            "expected a CompositeCertificate, got `{}`",
            r.kind()
        )));
    }
    let spec = field_of(r, "field")?;
    Ok(CompositeCertificate {
        f1: poly_of(r, "f1", &spec)?,
        f2: poly_of(r, "f2", &spec)?,
        h: poly_of(r, "h", &spec)?,
        g1: poly_of(r, "g1", &spec)?,
        g2: poly_of(r, "g2", &spec)?,
        minimal: bool_of(r, "minimal")?,
        normalized: bool_of(r, "normalized")?,
    })
}

pub fn refutation_record(c: &RefutationCertificate) -> Record {
    let mut r = Record::new(&c.kind.to_string());
    r.push("field", c.f1.spec());
    r.push("f1", &c.f1);
    r.push("f2", &c.f2);
    r.push("ambient", &c.ambient);
    r.push("points", points_text(&c.points));
    if !c.set.is_empty() {
        r.push("set", points_text(&c.set));
    }
    if let Some(p) = &c.product {
        r.push("product", p);
    }
    if let Some(v) = &c.lhs {
        r.push("lhs", v.to_vector_string());
    }
    if let Some(v) = &c.rhs {
        r.push("rhs", v.to_vector_string());
    }
    if let Some(d) = c.degree {
        r.push("degree", d);
    }
    if let Some(p) = c.prime {
        r.push("prime", p);
    }
    r
}

pub fn refutation_from_record(r: &Record) -> Result<RefutationCertificate> {
    let kind: RefutationKind = r.kind().parse()?;
    let spec = field_of(r, "field")?;
    let ambient = field_of(r, "ambient")?;
    let element = |key: &str| -> Result<Option<FieldElement>> {
        r.get(key)
            .map(|v| FieldElement::from_vector_string(&ambient, v))
            .transpose()
    };
    let product = r
        .get("product")
        .map(|v| {
            v.parse::<BigRational>()
                .map_err(|_| Error::Format(format!("bad product `{v}`")))
        })
        .transpose()?;
    Ok(RefutationCertificate {
        kind,
        f1: poly_of(r, "f1", &spec)?,
        f2: poly_of(r, "f2", &spec)?,
        points: points_of(r.require("points")?, &ambient)?,
        set: points_of(r.get("set").unwrap_or(""), &ambient)?,
        lhs: element("lhs")?,
        rhs: element("rhs")?,
        ambient,
        product,
        degree: r.get("degree").map(|_| int_of(r, "degree")).transpose()?,
        prime: r.get("prime").map(|_| int_of(r, "prime")).transpose()?,
    })
}

/// Any certificate a record can hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Composite(CompositeCertificate),
    Refutation(RefutationCertificate),
}

impl Certificate {
    pub fn record(&self) -> Record {
        match self {
            Certificate::Composite(c) => composite_record(c),
            Certificate::Refutation(c) => refutation_record(c),
        }
    }

    /// `None` for records that are not certificates (reports, corpus entries).
    pub fn from_record(r: &Record) -> Result<Option<Self>> {
        match r.kind() {
            "CompositeCertificate" => Ok(Some(Certificate::Composite(composite_from_record(r)?))),
            k if k.parse::<RefutationKind>().is_ok() => {
                Ok(Some(Certificate::Refutation(refutation_from_record(r)?)))
            }
            _ => Ok(None),
        }
    }
}

/// Outcome summary of a constructive search; a found certificate goes in its own record.
pub fn search_record(
    f1: &Polynomial,
    f2: &Polynomial,
    method: &str,
    outcome: &SearchOutcome,
) -> Record {
    let mut r = Record::new("SearchOutcome");
    r.push("field", f1.spec());
    r.push("f1", f1);
    r.push("f2", f2);
    r.push("method", method);
    match outcome {
        SearchOutcome::Found(c) => {
            r.push("outcome", "Found");
            r.push("degree", c.h.deg());
        }
        SearchOutcome::NoneBelow(b) => {
            r.push("outcome", "NoneBelow");
            r.push("bound", b);
        }
        SearchOutcome::CapExceeded { cap, trace } => {
            r.push("outcome", "CapExceeded");
            r.push("cap", cap);
            r.push("trace", join(trace));
        }
    }
    r
}

/// The report record followed by the verdict's certificate, if any.
pub fn report_records(rep: &AnalysisReport) -> Vec<Record> {
    let mut r = Record::new("AnalysisReport");
    r.push("field", rep.f1.spec());
    r.push("f1", &rep.f1);
    r.push("f2", &rep.f2);
    r.push("fiber_degrees", join(&rep.fiber.degrees()));
    r.push(
        "fiber_outcome",
        match &rep.fiber.outcome {
            SearchOutcome::Found(_) => "Found",
            SearchOutcome::NoneBelow(_) => "NoneBelow",
            SearchOutcome::CapExceeded { .. } => "CapExceeded",
        },
    );
    for (i, s) in rep.seeds.iter().enumerate() {
        let key = |k: &str| format!("seed.{i}.{k}");
        r.push(&key("value"), s.seed.to_vector_string());
        match &s.closure {
            ClosureOutcome::Closed(set) => {
                r.push(&key("closure"), "Closed");
                r.push(&key("ambient"), &set.ambient);
                r.push(&key("points"), points_text(&set.values()));
                let mult: Vec<String> = set
                    .points
                    .iter()
                    .map(|p| format!("{}/{}", p.m1, p.m2))
                    .collect();
                r.push(&key("multiplicities"), mult.join(","));
            }
            ClosureOutcome::CapExceeded(t) => {
                r.push(&key("closure"), "CapExceeded");
                r.push(&key("ambient"), &t.ambient);
                r.push(&key("cap"), format!("{:?}", t.cap));
                r.push(&key("size"), t.points.len());
                if let Some(o) = &t.orbit {
                    r.push(&key("orbit_translation"), &o.translation);
                    r.push(&key("orbit_points"), points_text(&o.points));
                }
            }
        }
        match &s.consistency {
            Some(Consistency::Consistent(labels)) => {
                r.push(&key("consistency"), "Consistent");
                r.push(&key("labels"), join(labels));
            }
            Some(Consistency::Inconsistent(c)) => {
                r.push(&key("consistency"), "Inconsistent");
                r.push(&key("product"), &c.product);
            }
            None => {}
        }
        match &s.composite {
            Some(Ok(c)) => r.push(&key("composite_degree"), c.h.deg()),
            Some(Err(e)) => r.push(&key("composite_error"), e),
            None => {}
        }
    }
    if let Some(steps) = &rep.refute_steps {
        let cells: Vec<String> = steps
            .iter()
            .map(|s| format!("{}:{}:{}", s.d, s.ambient_degree, s.cycles))
            .collect();
        r.push("cycle_search", cells.join(","));
    }
    let mut out = vec![r];
    match &rep.verdict {
        Verdict::Exists(c) => {
            out[0].push("verdict", "Exists");
            out.push(composite_record(c));
        }
        Verdict::NotExists(c) => {
            out[0].push("verdict", "NotExists");
            out.push(refutation_record(c));
        }
        Verdict::Inconclusive(reasons) => {
            out[0].push("verdict", "Inconclusive");
            for (i, m) in reasons.iter().enumerate() {
                out[0].push(&format!("reason.{i}"), m);
            }
        }
    }
    out
}

pub fn instance_record(inst: &FamilyInstance) -> Record {
    let mut r = Record::new("FamilyInstance");
    r.push("family", inst.tag);
    r.push("field", inst.f1.spec());
    for (k, v) in &inst.params {
        r.push(&format!("param.{k}"), v);
    }
    r.push("f1", &inst.f1);
    r.push("f2", &inst.f2);
    r.push("expected_min_degree", inst.expected_min_degree);
    if let Some(h) = &inst.expected_h {
        r.push("expected_h", h);
    }
    r
}

pub fn instance_from_record(r: &Record) -> Result<FamilyInstance> {
    if r.kind() != "FamilyInstance" {
        return Err(Error::Format(format!(
            "expected a FamilyInstance, got `{}`",
            r.kind()
        )));
    }
    let spec = field_of(r, "field")?;
    let params = r
        .entries
        .iter()
        .filter_map(|(k, v)| k.strip_prefix("param.").map(|k| (k.to_string(), v.clone())))
        .collect();
    Ok(FamilyInstance {
        tag: r.require("family")?.parse::<FamilyTag>()?,
        f1: poly_of(r, "f1", &spec)?,
        f2: poly_of(r, "f2", &spec)?,
        expected_h: r
            .get("expected_h")
            .map(|_| poly_of(r, "expected_h", &spec))
            .transpose()?,
        expected_min_degree: r.require("expected_min_degree")?.parse()?,
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refute::{multiplicity_cycle_test, verify_refutation, FiberCycle};
    use crate::search::{search_lin, verify_certificate};

    #[test]
    fn records_split_and_reject_duplicates() {
        let rs = parse_records("# c\nkind=A\nx=1\n\n\nkind=B\n").unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[1].kind(), "B");
        assert!(parse_records("kind=A\nkind=B\n").is_err());
        assert!(parse_records("nonsense\n").is_err());
    }

    #[test]
    fn composite_round_trip_over_extension() {
        let k = FieldSpec::parse("GF(3^2; m=t^2+1)", 0).unwrap();
        let f1 = parse_poly("x^2 + w*x", &k).unwrap();
        let f2 = parse_poly("x^2", &k).unwrap();
        let c = search_lin(&f1, &f2, 6).unwrap().found().unwrap().clone();
        let text = composite_record(&c).to_string();
        let back = composite_from_record(&parse_records(&text).unwrap()[0]).unwrap();
        assert_eq!(back, c);
        assert!(verify_certificate(&back));
    }

    #[test]
    fn refutation_round_trip() {
        let k = FieldSpec::prime(2).unwrap();
        let f1 = parse_poly("x^2-x", &k).unwrap();
        let f2 = parse_poly("x^3-x^2", &k).unwrap();
        let cycle = FiberCycle::new(vec![FieldElement::zero(&k), FieldElement::one(&k)]).unwrap();
        let c = multiplicity_cycle_test(&f1, &f2, &cycle).unwrap().unwrap();
        let text = refutation_record(&c).to_string();
        let back = refutation_from_record(&parse_records(&text).unwrap()[0]).unwrap();
        assert_eq!(back, c);
        assert!(verify_refutation(&back));
    }
}
