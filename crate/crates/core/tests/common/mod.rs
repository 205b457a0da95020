//! Independent reference computations for the integration tests. Nothing here
//! calls into the library's arithmetic.

#![allow(dead_code)]

/// Product in GF(2)[t]/(m), elements and modulus as bit masks (bit i = t^i).
pub fn gf2_mul(mut a: u64, mut b: u64, m: u64) -> u64 {
    let deg = 63 - m.leading_zeros();
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> deg & 1 == 1 {
            a ^= m;
        }
    }
    acc
}

pub fn gf2_pow(a: u64, mut e: u64, m: u64) -> u64 {
    let (mut base, mut acc) = (a, 1);
    while e > 0 {
        if e & 1 == 1 {
            acc = gf2_mul(acc, base, m);
        }
        base = gf2_mul(base, base, m);
        e >>= 1;
    }
    acc
}

/// Evaluate a polynomial over F_2 (bit i = coefficient of x^i) at a field element.
pub fn gf2_eval(poly: u64, a: u64, m: u64) -> u64 {
    let mut acc = 0;
    for i in (0..64).rev() {
        acc = gf2_mul(acc, a, m);
        if poly >> i & 1 == 1 {
            acc ^= 1;
        }
    }
    acc
}

/// Rank of a matrix over F_p by plain Gaussian elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(cols, 0);
    }
    let inv = |a: u64| {
        let (mut e, mut acc, mut b) = (p - 2, 1u64, a % p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let iv = inv(rows[rank][c]);
        for j in 0..cols {
            rows[rank][j] = rows[rank][j] * iv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dense product of integer coefficient vectors modulo p.
pub fn mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Dimension of span{f1^i : i deg f1 <= d} intersected with span{f2^j : j deg f2 <= d}
/// over F_p. A common composite of degree at most d exists iff this exceeds one.
pub fn shared_dimension(f1: &[u64], f2: &[u64], d: usize, p: u64) -> usize {
    let powers = |f: &[u64]| {
        let n = f.len() - 1;
        let mut out = vec![vec![1u64]];
        while out.len() * n <= d {
            let next = mul_mod_p(out.last().unwrap(), f, p);
            out.push(next);
        }
        out
    };
    let a = powers(f1);
    let b = powers(f2);
    let total = a.len() + b.len();
    let mut rows = a;
    rows.extend(b);
    total - rank_mod_p(rows, p)
}

/// Least degree of a common composite over F_p, up to `limit`, by rank counting.
pub fn min_composite_degree(f1: &[u64], f2: &[u64], limit: usize, p: u64) -> Option<usize> {
    (1..=limit).find(|&d| shared_dimension(f1, f2, d, p) > 1)
}

/// Order of a modulo n by repeated multiplication.
pub fn naive_order(a: u64, n: u64) -> u64 {
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = x * (a % n) % n;
        k += 1;
    }
    k
}
