//! Incremental detection of linear dependencies among coefficient vectors.
//!
//! Vectors are inserted one at a time. Each stored row is keyed by its highest
//! nonzero index, so reducing a new vector only ever touches rows below its
//! current top entry. Over Q the rows hold integers and are reduced
//! fraction-free, dividing out the content after every step.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{FieldElement, FieldSpec};

/// Accumulates vectors and reports the first one that depends on its predecessors.
pub struct DependencyFinder {
    spec: FieldSpec,
    count: usize,
    backend: Backend,
}

struct Row<T> {
    vec: Vec<T>,
    combo: Vec<T>,
}

enum Backend {
    Field(BTreeMap<usize, Row<FieldElement>>),
    Integer(BTreeMap<usize, Row<BigInt>>),
}

fn top_index<T>(v: &[T], is_zero: impl Fn(&T) -> bool) -> Option<usize> {
    v.iter().rposition(|c| !is_zero(c))
}

impl DependencyFinder {
    pub fn new(spec: &FieldSpec) -> Self {
        let backend = if spec.is_finite() {
            Backend::Field(BTreeMap::new())
        } else {
            Backend::Integer(BTreeMap::new())
        };
        DependencyFinder {
            spec: spec.clone(),
            count: 0,
            backend,
        }
    }

    /// Number of vectors inserted so far.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Insert `v`. If it is a combination of the earlier vectors, returns
    /// coefficients `c_0..c_k` (one per inserted vector, `c_k = 1` for `v`)
    /// with `sum c_j v_j = 0`; the vector is then not stored.
    pub fn insert(&mut self, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        let k = self.count;
        self.count += 1;
        match &mut self.backend {
            Backend::Field(rows) => insert_field(&self.spec, rows, v, k),
            Backend::Integer(rows) => insert_integer(&self.spec, rows, v, k),
        }
    }
}

fn insert_field(
    spec: &FieldSpec,
    rows: &mut BTreeMap<usize, Row<FieldElement>>,
    v: &[FieldElement],
    k: usize,
) -> Option<Vec<FieldElement>> {
    let zero = FieldElement::zero(spec);
    let mut vec = v.to_vec();
    let mut combo = vec![zero.clone(); k + 1];
    combo[k] = FieldElement::one(spec);
    loop {
        let Some(top) = top_index(&vec, |c| c.is_zero()) else {
            return Some(combo);
        };
        let Some(row) = rows.get(&top) else {
            let inv = vec[top].inv().expect("nonzero pivot");
            vec.truncate(top + 1);
            let vec = vec.iter().map(|c| c.mul(&inv)).collect();
            let combo = combo.iter().map(|c| c.mul(&inv)).collect();
            rows.insert(top, Row { vec, combo });
            return None;
        };
        let f = vec[top].clone();
        for (i, r) in row.vec.iter().enumerate() {
            if !r.is_zero() {
                vec[i] = vec[i].sub(&f.mul(r));
            }
        }
        for (i, r) in row.combo.iter().enumerate() {
            if !r.is_zero() {
                combo[i] = combo[i].sub(&f.mul(r));
            }
        }
    }
}

fn remove_content(vec: &mut [BigInt], combo: &mut [BigInt]) {
    let g = vec
        .iter()
        .chain(combo.iter())
        .fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in vec.iter_mut().chain(combo.iter_mut()) {
            *c /= &g;
        }
    }
}

fn insert_integer(
    spec: &FieldSpec,
    rows: &mut BTreeMap<usize, Row<BigInt>>,
    v: &[FieldElement],
    k: usize,
) -> Option<Vec<FieldElement>> {
    let rats: Vec<&BigRational> = v
        .iter()
        .map(|c| c.as_rational().expect("rational"))
        .collect();
    let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut vec: Vec<BigInt> = rats
        .iter()
        .map(|r| r.numer() * (&den / r.denom()))
        .collect();
    let mut combo = vec![BigInt::zero(); k + 1];
    combo[k] = den;
    loop {
        let Some(top) = top_index(&vec, |c| c.is_zero()) else {
            let last = combo[k].clone();
            return Some(
                combo
                    .iter()
                    .map(|c| {
                        FieldElement::from_rational(
                            spec,
                            &BigRational::new(c.clone(), last.clone()),
                        )
                        .expect("rational")
                    })
                    .collect(),
            );
        };
        let Some(row) = rows.get(&top) else {
            vec.truncate(top + 1);
            remove_content(&mut vec, &mut combo);
            rows.insert(top, Row { vec, combo });
            return None;
        };
        let a = row.vec[top].clone();
        let b = vec[top].clone();
        for c in vec.iter_mut().chain(combo.iter_mut()) {
            *c *= &a;
        }
        for (i, r) in row.vec.iter().enumerate() {
            vec[i] -= &b * r;
        }
        for (i, r) in row.combo.iter().enumerate() {
            combo[i] -= &b * r;
        }
        remove_content(&mut vec, &mut combo);
    }
}
