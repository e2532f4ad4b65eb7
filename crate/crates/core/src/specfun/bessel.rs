//! Modified Bessel functions I_ν (ascending series) and K_ν
//! (Temme series for small x, Steed's continued fraction otherwise).

use std::f64::consts::PI;

use super::gamma::{gamma_sign, ln_gamma_abs, rgamma1p_small, RGAMMA1P_TAYLOR};
use super::hypergeometric::pfq;
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;

/// I_ν(x) for any real order that is not a negative integer; negative
/// integers are folded onto |ν|.
pub(crate) fn bessel_i_any(nu: f64, x: f64) -> Result<f64> {
    if x < 0.0 || !x.is_finite() {
        return Err(Error::Domain { func: "bessel_i", msg: format!("x = {x} must be finite and >= 0") });
    }
    let nu = if nu < 0.0 && nu == nu.floor() { -nu } else { nu };
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain { func: "bessel_i", msg: format!("I_{nu}(0) is infinite") })
        };
    }
    let series = pfq(&[], &[nu + 1.0], 0.25 * x * x, 1e-15)?.value;
    let ln_pref = nu * (0.5 * x).ln() - ln_gamma_abs(nu + 1.0)?;
    let v = gamma_sign(nu + 1.0) * ln_pref.exp() * series;
    if !v.is_finite() {
        return Err(Error::Overflow(format!("I_{nu}({x})")));
    }
    Ok(v)
}

/// Modified Bessel function of the first kind, ν > -1, x ≥ 0.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if nu <= -1.0 || nu.is_nan() {
        return Err(Error::Domain { func: "bessel_i", msg: format!("order {nu} must exceed -1") });
    }
    bessel_i_any(nu, x)
}

/// (K_μ(x), K_{μ+1}(x)) for |μ| ≤ 1/2, 0 < x < 2.
fn temme(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    // gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ), gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mu2 = mu * mu;
    let mut p_even = 1.0;
    for (j, c) in RGAMMA1P_TAYLOR.iter().enumerate() {
        if j % 2 == 0 {
            gam2 += c * p_even;
        } else {
            gam1 -= c * p_even;
            p_even *= mu2;
        }
    }
    let gampl = rgamma1p_small(mu);
    let gammi = rgamma1p_small(-mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            return Ok((sum, sum1 * 2.0 / x));
        }
    }
    Err(Error::NonConvergence { terms: MAX_ITER, tail: f64::NAN })
}

/// (K_μ(x), K_{μ+1}(x)) for |μ| ≤ 1/2, x ≥ 2.
fn steed(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            let kmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
            let k1 = kmu * (mu + x + 0.5 - a1 * h) / x;
            return Ok((kmu, k1));
        }
    }
    Err(Error::NonConvergence { terms: MAX_ITER, tail: f64::NAN })
}

/// Modified Bessel function of the second kind, any real order, x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { func: "bessel_k", msg: format!("x = {x} must be finite and > 0") });
    }
    let anu = nu.abs();
    let nl = (anu + 0.5).floor();
    let mu = anu - nl;
    let (mut kmu, mut k1) = if x < 2.0 { temme(mu, x)? } else { steed(mu, x)? };
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * (2.0 / x) * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    if kmu.is_infinite() {
        return Err(Error::Overflow(format!("K_{nu}({x})")));
    }
    Ok(kmu)
}
