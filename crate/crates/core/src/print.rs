//! Canonical text rendering shared by polynomials, field elements and moduli.
//!
//! Terms are written with descending exponents, negative coefficients folded
//! into the joining sign, and an explicit `*` between a coefficient and a
//! power of the variable, so the output is accepted back by the parser.

use std::fmt::Write;

/// Rendered coefficient of one term.
pub(crate) struct Coef {
    pub negative: bool,
    /// Magnitude text; empty means the coefficient is exactly one.
    pub magnitude: String,
    /// Whether the magnitude must be parenthesized when multiplied.
    pub compound: bool,
}

/// Symmetric residue of `c` modulo `p`, in `(-p/2, p/2]`.
pub(crate) fn symmetric(c: u64, p: u64) -> i128 {
    if c as u128 * 2 > p as u128 {
        c as i128 - p as i128
    } else {
        c as i128
    }
}

pub(crate) fn int_coef(v: i128) -> Coef {
    let mag = v.unsigned_abs();
    Coef {
        negative: v < 0,
        magnitude: if mag == 1 {
            String::new()
        } else {
            mag.to_string()
        },
        compound: false,
    }
}

/// Render `terms` (exponent, coefficient) given in descending exponent order.
pub(crate) fn render(terms: Vec<(usize, Coef)>, var: &str) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (exp, c)) in terms.into_iter().enumerate() {
        if idx == 0 {
            if c.negative {
                out.push('-');
            }
        } else {
            out.push_str(if c.negative { " - " } else { " + " });
        }
        let mag = if c.compound {
            format!("({})", c.magnitude)
        } else {
            c.magnitude
        };
        match (exp, mag.is_empty()) {
            (0, true) => out.push('1'),
            (0, false) => out.push_str(&mag),
            (_, empty) => {
                if !empty {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(var);
                if exp > 1 {
                    let _ = write!(out, "^{exp}");
                }
            }
        }
    }
    out
}

/// Render an ascending `F_p` coefficient vector as a polynomial in `var`.
pub(crate) fn render_fp(coeffs: &[u64], p: u64, var: &str) -> String {
    let terms = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, int_coef(symmetric(c, p))))
        .collect();
    render(terms, var)
}
