//! Tricomi's confluent hypergeometric function U(a; b; x), x > 0.

use super::gamma::{ln_gamma_abs, pochhammer};
use crate::error::{Error, Result};
use crate::quad::{integrate_to_infinity, QuadOptions};

fn nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.floor()
}

/// U(-m, b, x) as a finite sum.
fn polynomial(m: u32, b: f64, x: f64) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for s in 0..=m {
        if s > 0 {
            binom *= (m - s + 1) as f64 / s as f64;
        }
        acc += binom * pochhammer(b + s as f64, m - s) * (-x).powi(s as i32);
    }
    if m % 2 == 1 {
        -acc
    } else {
        acc
    }
}

/// Laplace-type integral, valid for a > 0.
fn integral(a: f64, b: f64, x: f64) -> Result<f64> {
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 4000 };
    let e = b - a - 1.0;
    let r = if a >= 1.0 {
        // x^{-a}/Γ(a) ∫ e^{-u} u^{a-1} (1+u/x)^{b-a-1} du
        let v = integrate_to_infinity(
            |u| {
                if u == 0.0 {
                    return if a == 1.0 { 1.0 } else { 0.0 };
                }
                ((a - 1.0) * u.ln() - u + e * (u / x).ln_1p()).exp()
            },
            0.0,
            &opts,
        )?;
        v.value * (-a * x.ln() - ln_gamma_abs(a)?).exp()
    } else {
        // u = v^{1/a} removes the endpoint singularity
        let inv = 1.0 / a;
        let v = integrate_to_infinity(
            |v| {
                if v == 0.0 {
                    return 1.0;
                }
                let u = v.powf(inv);
                (-u + e * (u / x).ln_1p()).exp()
            },
            0.0,
            &opts,
        )?;
        v.value * (-a * x.ln() - ln_gamma_abs(a + 1.0)?).exp()
    };
    if !r.is_finite() {
        return Err(Error::Overflow(format!("U({a}, {b}, {x})")));
    }
    Ok(r)
}

/// Tricomi's U(a; b; x) for real a, b and x > 0.
pub fn tricomi_u(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { func: "tricomi_u", msg: format!("x = {x} must be finite and > 0") });
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    if nonpositive_integer(a) {
        return Ok(polynomial((-a) as u32, b, x));
    }
    // Kummer: U(a,b,x) = x^{1-b} U(a-b+1, 2-b, x)
    let ap = a - b + 1.0;
    let pref = x.powf(1.0 - b);
    if nonpositive_integer(ap) {
        return Ok(pref * polynomial((-ap) as u32, 2.0 - b, x));
    }
    if a > 0.0 {
        return integral(a, b, x);
    }
    if ap > 0.0 {
        return Ok(pref * integral(ap, 2.0 - b, x)?);
    }
    // both a and a-b+1 negative: recur downward in a from a positive start
    let k = (-a).ceil();
    let mut c = a + k;
    let mut u_c = integral(c, b, x)?;
    let mut u_next = integral(c + 1.0, b, x)?;
    for _ in 0..(k as usize) {
        let u_prev = (2.0 * c + x - b) * u_c - c * (c - b + 1.0) * u_next;
        u_next = u_c;
        u_c = u_prev;
        c -= 1.0;
    }
    Ok(u_c)
}
