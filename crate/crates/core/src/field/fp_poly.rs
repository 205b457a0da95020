//! Dense polynomials over F_p stored as ascending `u64` residues.
//!
//! These back the extension-field representation (moduli, products, inverses)
//! and the irreducibility test. The zero polynomial is the empty vector.

use crate::arith::{mul_mod, pow_mod};

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn inv_scalar(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u128 * y as u128) % pp;
        }
    }
    let mut out: Vec<u64> = acc.into_iter().map(|c| c as u64).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    divrem(a, m, p).1
}

pub(crate) fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!m.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < m.len() {
        return (Vec::new(), r);
    }
    let dm = m.len() - 1;
    let lead_inv = inv_scalar(m[dm], p);
    let mut q = vec![0u64; r.len() - dm];
    for i in (dm..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        let f = mul_mod(c, lead_inv, p);
        q[i - dm] = f;
        for (j, &mj) in m.iter().enumerate() {
            let k = i - dm + j;
            r[k] = (r[k] + p - mul_mod(f, mj, p)) % p;
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn make_monic(a: &mut [u64], p: u64) {
    if let Some(&lead) = a.last() {
        let inv = inv_scalar(lead, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

/// Inverse of `a` modulo `m` (extended Euclid); `None` if not coprime.
pub(crate) fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, p);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_scalar(r0[0], p);
    let mut out: Vec<u64> = s0.into_iter().map(|x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    Some(rem(&out, m, p))
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// Rabin's test: `x^(p^n) = x mod f` and `gcd(x^(p^(n/l)) - x, f) = 1` for each prime `l | n`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    if f.len() < 2 {
        return false;
    }
    let n = (f.len() - 1) as u64;
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // frob[k] = x^(p^k) mod f
    let mut frob = Vec::with_capacity(n as usize + 1);
    let mut cur = rem(&x, f, p);
    frob.push(cur.clone());
    for _ in 0..n {
        cur = powmod(&cur, p, f, p);
        frob.push(cur.clone());
    }
    if frob[n as usize] != rem(&x, f, p) {
        return false;
    }
    crate::arith::prime_factors(n).into_iter().all(|l| {
        let t = sub(&frob[(n / l) as usize], &x, p);
        gcd(&t, f, p) == vec![1]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small() {
        // x^2 + x + 1 over F_2 is irreducible, x^2 + 1 = (x+1)^2 is not
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // x^2 + 1 over F_3 is irreducible
        assert!(is_irreducible(&[1, 0, 1], 3));
        // x^4 + x^2 + 1 = (x^2+x+1)^2 over F_2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn inverse_mod_modulus() {
        let m = [1u64, 1, 0, 1]; // x^3 + x + 1 over F_2
        for a in 1u64..8 {
            let v: Vec<u64> = (0..3).map(|i| (a >> i) & 1).collect();
            let mut v = v;
            trim(&mut v);
            let inv = inv_mod(&v, &m, 2).unwrap();
            assert_eq!(mulmod(&v, &inv, &m, 2), vec![1]);
        }
    }
}
