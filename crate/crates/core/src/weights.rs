//! Resolution-of-unity weights for the closed-form families and their
//! moment checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, FamilyTag};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::specfun::{bessel_i, bessel_k, gamma, gauss_2f1, kummer_m, ln_gamma_abs, tricomi_u};
use crate::states::{rho, ParameterSet};

/// Default relative tolerance for weighted integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Power of the substitution x = s·u^M used next to the endpoints.
const ENDPOINT_POWER: i32 = 6;

const GAUSS_TOL: f64 = 1e-14;

fn bad(family: &Family, why: &str) -> Error {
    Error::Unsupported(format!("{} has no weight function here: {why}", family.params()))
}

/// Parameter conditions under which the closed-form weight solves the
/// moment problem.
pub fn check_weight_params(family: &Family) -> Result<()> {
    match *family {
        Family::Cs => Ok(()),
        Family::F01 { b } if b > 0.0 => Ok(()),
        Family::F01 { .. } => Err(bad(family, "needs b > 0")),
        Family::F11 { a, b } if a > 0.0 && b > 0.0 => Ok(()),
        Family::F11 { .. } => Err(bad(family, "needs a > 0 and b > 0")),
        Family::F10 { a } if a > 1.0 => Ok(()),
        Family::F10 { .. } => Err(bad(family, "needs a > 1")),
        Family::F21 { a1, a2, b } if a1 > 0.0 && a2 > 0.0 && b > 0.0 && a1 + a2 - b > 1.0 => Ok(()),
        Family::F21 { .. } => Err(bad(family, "needs a1, a2, b > 0 and a1 + a2 - b > 1")),
    }
}

fn check_x(family: &Family, x: f64) -> Result<()> {
    if !(x >= 0.0) || x >= family.x_max() {
        return Err(Error::OutsideDomain(format!("x = {x} for the {} weight", family.tag())));
    }
    Ok(())
}

/// w̃ = w/N at x, with 1 - x passed separately for the disk families.
fn tilde_split(family: &Family, x: f64, omx: f64) -> Result<f64> {
    Ok(match *family {
        Family::Cs => (-x).exp(),
        Family::F01 { b } => {
            let nu = b - 1.0;
            let r = x.sqrt();
            2.0 * x.powf(0.5 * nu) * bessel_k(nu, 2.0 * r)? / gamma(b)?
        }
        Family::F11 { a, b } => {
            if x > 745.0 {
                return Ok(0.0);
            }
            let pre = (ln_gamma_abs(a)? - ln_gamma_abs(b)? - x).exp();
            pre * tricomi_u(a - b, 2.0 - b, x)?
        }
        Family::F10 { a } => (a - 1.0) * omx.powf(a - 2.0),
        Family::F21 { a1, a2, b } => {
            let c = a1 + a2 - b - 1.0;
            let pre = (ln_gamma_abs(a1)? + ln_gamma_abs(a2)? - ln_gamma_abs(b)? - ln_gamma_abs(c)?).exp();
            pre * omx.powf(c - 1.0) * gauss_2f1(a2 - b, a1 - b, c, omx, GAUSS_TOL)?.value
        }
    })
}

/// w̃(x) = w(x)/N(x), the density of the moment problem ∫ xⁿ w̃ = ρ(n).
pub fn weight_tilde_family(family: &Family, x: f64) -> Result<f64> {
    check_weight_params(family)?;
    check_x(family, x)?;
    tilde_split(family, x, 1.0 - x)
}

/// w(x) in closed form.
pub fn weight_family(family: &Family, x: f64) -> Result<f64> {
    check_weight_params(family)?;
    check_x(family, x)?;
    Ok(match *family {
        Family::Cs => 1.0,
        Family::F01 { b } => {
            let r = 2.0 * x.sqrt();
            2.0 * bessel_i(b - 1.0, r)? * bessel_k(b - 1.0, r)?
        }
        Family::F11 { a, b } => {
            let pre = (ln_gamma_abs(a)? - ln_gamma_abs(b)?).exp();
            pre * kummer_m(a, b, x)? * (-x).exp() * tricomi_u(a - b, 2.0 - b, x)?
        }
        Family::F10 { a } => (a - 1.0) / ((1.0 - x) * (1.0 - x)),
        Family::F21 { a1, a2, b } => {
            let n = gauss_2f1(a1, a2, b, x, GAUSS_TOL)?.value;
            n * tilde_split(family, x, 1.0 - x)?
        }
    })
}

pub fn weight(tag: FamilyTag, params: &ParameterSet, x: f64) -> Result<f64> {
    weight_family(&Family::new(tag, params)?, x)
}

pub fn weight_tilde(tag: FamilyTag, params: &ParameterSet, x: f64) -> Result<f64> {
    weight_tilde_family(&Family::new(tag, params)?, x)
}

/// ∫₀^R f(x) w̃(x) dx. Near each endpoint x = s·u^M (or 1 - x = s·u^M)
/// flattens power-law and logarithmic singularities of the weight.
pub fn weighted_integral(family: &Family, f: impl FnMut(f64) -> f64, rel_tol: f64) -> Result<f64> {
    weighted_integral_with(family, f, &QuadOptions { abs_tol: 0.0, rel_tol, max_intervals: 4000 })
}

pub fn weighted_integral_with(family: &Family, mut f: impl FnMut(f64) -> f64, opts: &QuadOptions) -> Result<f64> {
    check_weight_params(family)?;
    let opts = *opts;
    let m = ENDPOINT_POWER;
    let mf = m as f64;
    let mut failure: Option<Error> = None;
    let mut eval = |x: f64, omx: f64| -> f64 {
        if failure.is_some() {
            return 0.0;
        }
        let g = f(x);
        if g == 0.0 {
            return 0.0;
        }
        match tilde_split(family, x, omx) {
            Ok(w) if w.is_finite() => g * w,
            // endpoint evaluations after underflow carry zero measure
            Ok(_) if x == 0.0 || omx == 0.0 => 0.0,
            Ok(w) => {
                failure = Some(Error::Quadrature(format!("weight is {w} at x = {x}")));
                0.0
            }
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let total = if family.x_max().is_infinite() {
        let head = integrate(|u| eval(u.powi(m), 1.0 - u.powi(m)) * mf * u.powi(m - 1), 0.0, 1.0, &opts)?;
        let tail = integrate_to_infinity(|x| eval(x, 1.0 - x), 1.0, &opts)?;
        head.value + tail.value
    } else {
        let lower = integrate(
            |u| {
                let x = 0.5 * u.powi(m);
                eval(x, 1.0 - x) * 0.5 * mf * u.powi(m - 1)
            },
            0.0,
            1.0,
            &opts,
        )?;
        let upper = integrate(
            |u| {
                let omx = 0.5 * u.powi(m);
                eval(1.0 - omx, omx) * 0.5 * mf * u.powi(m - 1)
            },
            0.0,
            1.0,
            &opts,
        )?;
        lower.value + upper.value
    };
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRecord {
    pub n: usize,
    pub quad: f64,
    pub rho: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub family: FamilyTag,
    pub records: Vec<MomentRecord>,
    pub max_rel_error: f64,
}

/// Compare ∫₀^R xⁿ w̃(x) dx with ρ(n) for n = 0..=n_max.
pub fn moment_check(tag: FamilyTag, params: &ParameterSet, n_max: usize, quad_tol: f64) -> Result<MomentReport> {
    let family = Family::new(tag, params)?;
    let mut records = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let quad = weighted_integral(&family, |x| x.powi(n as i32), quad_tol)?;
        let r = rho(params, n)?;
        records.push(MomentRecord { n, quad, rho: r, rel_error: ((quad - r) / r).abs() });
    }
    let max_rel_error = records.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok(MomentReport { family: tag, records, max_rel_error })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub family: FamilyTag,
    pub min: f64,
    pub argmin: f64,
    pub negative: bool,
    pub points: usize,
}

/// Weight sampled on a log-dense grid over (0, R).
pub fn positivity_scan(tag: FamilyTag, params: &ParameterSet, grid_size: usize) -> Result<PositivityReport> {
    let family = Family::new(tag, params)?;
    check_weight_params(&family)?;
    let n = grid_size.max(2);
    let mut xs = Vec::with_capacity(n);
    if family.x_max().is_infinite() {
        for k in 0..n {
            xs.push(10f64.powf(-8.0 + 11.0 * k as f64 / (n - 1) as f64));
        }
    } else {
        let half = n / 2;
        for k in 0..half.max(1) {
            xs.push(0.5 * 10f64.powf(-8.0 * (1.0 - k as f64 / half.max(1) as f64)));
        }
        for k in 0..(n - half) {
            xs.push(1.0 - 0.5 * 10f64.powf(-8.0 * k as f64 / (n - half).max(1) as f64));
        }
    }
    let (mut min, mut argmin) = (f64::INFINITY, f64::NAN);
    for &x in &xs {
        if x >= family.x_max() {
            continue;
        }
        let w = weight_family(&family, x)?;
        if w < min {
            min = w;
            argmin = x;
        }
    }
    Ok(PositivityReport { family: tag, min, argmin, negative: min < 0.0, points: xs.len() })
}

/// Circle families admit no resolution of unity, with the single
/// exception of the phase states (1;0), a = 1, where w̃ = 1/(2π).
pub fn circle_weight_attempt(params: &ParameterSet) -> Result<f64> {
    let red = params.reduced();
    if red.p() != red.q() + 1 {
        return Err(Error::CircleRefusal(format!("{params} is not a unit-circle family (needs p = q + 1)")));
    }
    if red.p() == 1 && red.a()[0].re == 1.0 && red.a()[0].im == 0.0 {
        return Ok(1.0 / (2.0 * std::f64::consts::PI));
    }
    Err(Error::CircleRefusal(format!(
        "{params}: the moment conditions on |z| = 1 force w̃ to reproduce ρ(n) for every n \
         from a single Fourier mode, which has no solution"
    )))
}
