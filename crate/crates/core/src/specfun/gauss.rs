//! Gauss hypergeometric function 2F1 on the real line up to x = 1.

use super::gamma::{digamma, gamma_sign, ln_gamma_abs};
use super::hypergeometric::pfq_with;
use super::{SeriesOptions, SeriesResult};
use crate::error::{Error, Result};

fn nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.floor()
}

/// Π Γ(num) / Π Γ(den); zero when a denominator sits on a pole.
fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    if den.iter().any(|&d| nonpositive_integer(d)) {
        return Ok(0.0);
    }
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &v in num {
        ln += ln_gamma_abs(v)?;
        sign *= gamma_sign(v);
    }
    for &v in den {
        ln -= ln_gamma_abs(v)?;
        sign *= gamma_sign(v);
    }
    let r = sign * ln.exp();
    if !r.is_finite() {
        return Err(Error::Overflow("gamma ratio".into()));
    }
    Ok(r)
}

fn direct(a1: f64, a2: f64, b: f64, x: f64, opts: &SeriesOptions) -> Result<SeriesResult<f64>> {
    pfq_with(&[a1, a2], &[b], x, opts)
}

fn ok(value: f64, terms: usize, tail: f64) -> Result<SeriesResult<f64>> {
    if !value.is_finite() {
        return Err(Error::Overflow("gauss_2f1".into()));
    }
    Ok(SeriesResult { value, terms_used: terms.max(1), tail_estimate: tail, converged: true })
}

/// m = b - a1 - a2 = 0.
fn log_case_zero(a1: f64, a2: f64, x: f64, opts: &SeriesOptions) -> Result<SeriesResult<f64>> {
    let w = 1.0 - x;
    let lw = w.ln();
    let pre = gamma_ratio(&[a1 + a2], &[a1, a2])?;
    let mut psi1 = digamma(1.0)?;
    let mut psia = digamma(a1)?;
    let mut psib = digamma(a2)?;
    let mut coef = 1.0;
    let mut sum = 0.0;
    let neg = (-a1).max(-a2).max(0.0);
    let mut small = 0;
    for n in 0..opts.max_terms {
        let nf = n as f64;
        let term = coef * (2.0 * psi1 - psia - psib - lw);
        sum += term;
        if term.abs() <= opts.tol * sum.abs() {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 && nf > neg {
            return ok(pre * sum, n + 1, (pre * term).abs());
        }
        coef *= (a1 + nf) * (a2 + nf) / ((nf + 1.0) * (nf + 1.0)) * w;
        psi1 += 1.0 / (nf + 1.0);
        psia += 1.0 / (a1 + nf);
        psib += 1.0 / (a2 + nf);
    }
    Err(Error::NonConvergence { terms: opts.max_terms, tail: f64::NAN })
}

/// m = b - a1 - a2 a positive integer.
fn log_case_positive(a1: f64, a2: f64, m: u32, x: f64, opts: &SeriesOptions) -> Result<SeriesResult<f64>> {
    let w = 1.0 - x;
    let mf = m as f64;
    let b = a1 + a2 + mf;
    // finite part
    let pre1 = gamma_ratio(&[mf, b], &[a1 + mf, a2 + mf])?;
    let mut finite = 0.0;
    let mut c = 1.0;
    for n in 0..m {
        finite += c;
        let nf = n as f64;
        c *= (a1 + nf) * (a2 + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
    }
    // logarithmic part
    let pre2 = gamma_ratio(&[b], &[a1, a2])? * (-w).powi(m as i32);
    let lw = w.ln();
    let mut psi_n1 = digamma(1.0)?;
    let mut psi_nm1 = digamma(mf + 1.0)?;
    let mut psi_a = digamma(a1 + mf)?;
    let mut psi_b = digamma(a2 + mf)?;
    // (a1+m)_n (a2+m)_n / (n! (n+m)!) w^n
    let mut coef = 1.0 / (1..=m).map(|k| k as f64).product::<f64>();
    let mut sum = 0.0;
    let neg = (-a1 - mf).max(-a2 - mf).max(0.0);
    let mut small = 0;
    for n in 0..opts.max_terms {
        let nf = n as f64;
        let term = coef * (lw - psi_n1 - psi_nm1 + psi_a + psi_b);
        sum += term;
        if term.abs() <= opts.tol * sum.abs() {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 && nf > neg {
            let value = pre1 * finite - pre2 * sum;
            let tail = (pre2 * term).abs() + 4.0 * f64::EPSILON * (pre1 * finite).abs();
            return ok(value, n + 1 + m as usize, tail);
        }
        coef *= (a1 + mf + nf) * (a2 + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * w;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a1 + mf + nf);
        psi_b += 1.0 / (a2 + mf + nf);
    }
    Err(Error::NonConvergence { terms: opts.max_terms, tail: f64::NAN })
}

fn upper_half(a1: f64, a2: f64, b: f64, x: f64, opts: &SeriesOptions) -> Result<SeriesResult<f64>> {
    let m = b - a1 - a2;
    let k = m.round();
    let dist = (m - k).abs();
    if dist <= 1e-12 * m.abs().max(1.0) {
        if k < 0.0 {
            // Euler: (1-x)^m 2F1(b-a1, b-a2; b; x)
            let inner = gauss_with(b - a1, b - a2, b, x, opts)?;
            let f = (1.0 - x).powf(m);
            return ok(f * inner.value, inner.terms_used, f * inner.tail_estimate);
        }
        if k == 0.0 {
            return log_case_zero(a1, a2, x, opts);
        }
        return log_case_positive(a1, a2, k as u32, x, opts);
    }
    if dist < 1e-5 {
        // the connection formula cancels here; the direct series still converges
        return direct(a1, a2, b, x, opts);
    }
    let w = 1.0 - x;
    let ca = gamma_ratio(&[b, m], &[b - a1, b - a2])?;
    let cb = gamma_ratio(&[b, -m], &[a1, a2])?;
    let mut value = 0.0;
    let mut terms = 0;
    let mut tail = 0.0;
    if ca != 0.0 {
        let f1 = direct(a1, a2, 1.0 - m, w, opts)?;
        value += ca * f1.value;
        terms += f1.terms_used;
        tail += (ca * f1.tail_estimate).abs();
    }
    if cb != 0.0 {
        let f2 = direct(b - a1, b - a2, 1.0 + m, w, opts)?;
        let wm = w.powf(m);
        value += cb * wm * f2.value;
        terms += f2.terms_used;
        tail += (cb * wm * f2.tail_estimate).abs();
    }
    ok(value, terms, tail)
}

fn gauss_with(a1: f64, a2: f64, b: f64, x: f64, opts: &SeriesOptions) -> Result<SeriesResult<f64>> {
    if nonpositive_integer(b) {
        return Err(Error::Pole { func: "gauss_2f1", at: b });
    }
    if nonpositive_integer(a1) || nonpositive_integer(a2) || x == 0.0 {
        return direct(a1, a2, b, x, opts);
    }
    if x > 1.0 || !x.is_finite() {
        return Err(Error::OutsideDomain(format!("gauss_2f1 needs x <= 1, got {x}")));
    }
    if x == 1.0 {
        let m = b - a1 - a2;
        if m <= 0.0 {
            return Err(Error::Divergence(format!("2F1 at x = 1 needs b - a1 - a2 > 0, got {m}")));
        }
        return ok(gamma_ratio(&[b, m], &[b - a1, b - a2])?, 1, 0.0);
    }
    if x.abs() <= 0.5 {
        return direct(a1, a2, b, x, opts);
    }
    if x < -0.5 {
        // Pfaff: (1-x)^{-a1} 2F1(a1, b-a2; b; x/(x-1))
        let inner = gauss_with(a1, b - a2, b, x / (x - 1.0), opts)?;
        let f = (1.0 - x).powf(-a1);
        return ok(f * inner.value, inner.terms_used, f * inner.tail_estimate);
    }
    upper_half(a1, a2, b, x, opts)
}

/// 2F1(a1, a2; b; x) for real arguments, x ≤ 1.
pub fn gauss_2f1(a1: f64, a2: f64, b: f64, x: f64, tol: f64) -> Result<SeriesResult<f64>> {
    gauss_with(a1, a2, b, x, &SeriesOptions::with_tol(tol))
}
