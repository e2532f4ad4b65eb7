//! Photon-number distributions, factorial moments and the Mandel parameter.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, FamilyTag};
use crate::specfun::{bessel_i, gauss_2f1, kummer_m, ln_gamma_abs, Neumaier, SeriesOptions};
use crate::states::{ln_rho_table, normalization_with, DomainKind, ParameterSet, StateSpec, DEFAULT_FOCK_CAP};

/// Stop once the cumulative mass reaches 1 - CUMULATIVE_GAP ...
pub const CUMULATIVE_GAP: f64 = 1e-12;
/// ... and the current term is below this fraction of the largest one.
pub const RELATIVE_FLOOR: f64 = 1e-16;

const STAT_TOL: f64 = 1e-15;

fn series_opts() -> SeriesOptions {
    SeriesOptions { tol: STAT_TOL, compensated: true, ..Default::default() }
}

/// Values on an integer or real grid; `residual` is 1 - Σ values for
/// distributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionSeries {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonStats {
    pub pn: DistributionSeries,
    pub mean: f64,
    pub mandel_q: f64,
    pub x: f64,
}

/// P(n) = exp(ln_p(n)) until the truncation rule fires or `cap` is reached.
fn truncated(mut ln_p: impl FnMut(usize) -> Result<f64>, cap: usize) -> Result<DistributionSeries> {
    let mut values = Vec::new();
    let mut cum = Neumaier::new();
    let mut max = 0.0f64;
    for n in 0..=cap {
        let p = ln_p(n)?.exp();
        if !p.is_finite() {
            return Err(Error::Overflow(format!("P({n}) is not finite")));
        }
        values.push(p);
        cum.add(p);
        max = max.max(p);
        if cum.value() >= 1.0 - CUMULATIVE_GAP && p < RELATIVE_FLOOR * max {
            break;
        }
    }
    let grid = (0..values.len()).map(|n| n as f64).collect();
    Ok(DistributionSeries { grid, values, residual: 1.0 - cum.value() })
}

fn vacuum() -> DistributionSeries {
    DistributionSeries { grid: vec![0.0], values: vec![1.0], residual: 0.0 }
}

/// P(n) = xⁿ / (ρ(n) N(x)), x = |z|².
pub fn pn_distribution(spec: &StateSpec) -> Result<DistributionSeries> {
    let x = spec.z.norm_sqr();
    if x == 0.0 {
        return Ok(vacuum());
    }
    match spec.domain.kind {
        DomainKind::CircleUnnormalizable => {
            return Err(Error::Divergence(format!("{} is not normalizable on the unit circle", spec.params)))
        }
        DomainKind::Divergent => return Err(Error::Divergence(format!("{} admits only z = 0", spec.params))),
        _ => {}
    }
    let x = if spec.domain.kind == DomainKind::CircleNormalized { 1.0 } else { x };
    let ln_n = normalization_with(&spec.params, x, &series_opts())?.ln();
    let ln_x = x.ln();
    let table = ln_rho_table(&spec.params, DEFAULT_FOCK_CAP)?;
    truncated(|n| Ok(n as f64 * ln_x - table[n] - ln_n), DEFAULT_FOCK_CAP)
}

/// n⁽ᵏ⁾ = xᵏ Π(a)_k / Π(b)_k · pFq(a+k; b+k; x) / pFq(a; b; x).
pub fn factorial_moment(params: &ParameterSet, x: f64, k: u32) -> Result<f64> {
    if x == 0.0 && k >= 1 {
        return Ok(0.0);
    }
    if k == 0 {
        return Ok(1.0);
    }
    let opts = series_opts();
    let shifted = normalization_with(&params.shifted(k as f64), x, &opts)?;
    let base = normalization_with(params, x, &opts)?;
    let mut poch = num_complex::Complex64::new(x.powi(k as i32), 0.0);
    for j in 0..k {
        let j = j as f64;
        for &a in params.a() {
            poch *= a + j;
        }
        for &b in params.b() {
            poch /= b + j;
        }
    }
    Ok(poch.re * shifted / base)
}

/// (n̄, Q) with Q = -n̄ + n⁽²⁾/n̄; (0, 0) at x = 0 by continuity.
pub fn mean_and_mandel(params: &ParameterSet, x: f64) -> Result<(f64, f64)> {
    if x == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mean = factorial_moment(params, x, 1)?;
    let second = factorial_moment(params, x, 2)?;
    Ok((mean, -mean + second / mean))
}

/// Generic statistics: distribution plus factorial-moment mean and Q.
pub fn photon_stats(spec: &StateSpec) -> Result<PhotonStats> {
    let x = spec.z.norm_sqr();
    let pn = pn_distribution(spec)?;
    let (mean, mandel_q) = mean_and_mandel(&spec.params, x)?;
    Ok(PhotonStats { pn, mean, mandel_q, x })
}

fn ln_poch(a: f64, n: usize) -> Result<f64> {
    Ok(ln_gamma_abs(a + n as f64)? - ln_gamma_abs(a)?)
}

fn ln_fact(n: usize) -> Result<f64> {
    ln_gamma_abs(n as f64 + 1.0)
}

/// Closed forms for the five families, independent of the generic path.
pub fn closed_form_stats(tag: FamilyTag, params: &ParameterSet, x: f64) -> Result<PhotonStats> {
    let family = Family::new(tag, params)?;
    if !(x >= 0.0) || x >= family.x_max() {
        return Err(Error::OutsideDomain(format!("x = {x} for {tag}")));
    }
    if x == 0.0 {
        return Ok(PhotonStats { pn: vacuum(), mean: 0.0, mandel_q: 0.0, x });
    }
    let cap = DEFAULT_FOCK_CAP;
    let lx = x.ln();
    let (pn, mean, mandel_q) = match family {
        Family::Cs => {
            let pn = truncated(|n| Ok(n as f64 * lx - x - ln_fact(n)?), cap)?;
            (pn, x, 0.0)
        }
        Family::F01 { b } => {
            let r = x.sqrt();
            let i_m = bessel_i(b - 1.0, 2.0 * r)?;
            let i_0 = bessel_i(b, 2.0 * r)?;
            let i_p = bessel_i(b + 1.0, 2.0 * r)?;
            let ln_i = i_m.ln();
            let pn = truncated(
                |n| Ok((2.0 * n as f64 + b - 1.0) * r.ln() - ln_fact(n)? - ln_gamma_abs(b + n as f64)? - ln_i),
                cap,
            )?;
            (pn, r * i_0 / i_m, r * (i_p / i_0 - i_0 / i_m))
        }
        Family::F11 { a, b } => {
            let m0 = kummer_m(a, b, x)?;
            let m1 = kummer_m(a + 1.0, b + 1.0, x)?;
            let m2 = kummer_m(a + 2.0, b + 2.0, x)?;
            let ln_m = m0.ln();
            let pn = truncated(|n| Ok(n as f64 * lx + ln_poch(a, n)? - ln_poch(b, n)? - ln_fact(n)? - ln_m), cap)?;
            let mean = x * a / b * m1 / m0;
            (pn, mean, -mean + (a + 1.0) / (b + 1.0) * x * m2 / m1)
        }
        Family::F10 { a } => {
            let l1 = (-x).ln_1p();
            let pn = truncated(|n| Ok(n as f64 * lx + ln_poch(a, n)? - ln_fact(n)? + a * l1), cap)?;
            (pn, a * x / (1.0 - x), x / (1.0 - x))
        }
        Family::F21 { a1, a2, b } => {
            let f0 = gauss_2f1(a1, a2, b, x, STAT_TOL)?.value;
            let f1 = gauss_2f1(a1 + 1.0, a2 + 1.0, b + 1.0, x, STAT_TOL)?.value;
            let f2 = gauss_2f1(a1 + 2.0, a2 + 2.0, b + 2.0, x, STAT_TOL)?.value;
            let ln_f = f0.ln();
            let pn = truncated(
                |n| Ok(n as f64 * lx + ln_poch(a1, n)? + ln_poch(a2, n)? - ln_poch(b, n)? - ln_fact(n)? - ln_f),
                cap,
            )?;
            let mean = x * a1 * a2 / b * f1 / f0;
            (pn, mean, -mean + x * (a1 + 1.0) * (a2 + 1.0) / (b + 1.0) * f2 / f1)
        }
    };
    Ok(PhotonStats { pn, mean, mandel_q, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn spec(params: &ParameterSet, r: f64) -> StateSpec {
        StateSpec::new(params.clone(), Complex64::new(r, 0.0)).unwrap()
    }

    #[test]
    fn poisson_reduction() {
        let cs = ParameterSet::coherent();
        let pn = pn_distribution(&spec(&cs, 3.0)).unwrap();
        let mut want = (-9.0f64).exp();
        for (n, &p) in pn.values.iter().enumerate() {
            if n > 0 {
                want *= 9.0 / n as f64;
            }
            assert!((p - want).abs() < 1e-14, "n={n}");
        }
        assert!(pn.residual.abs() < 1e-10);
        let (m, q) = mean_and_mandel(&cs, 9.0).unwrap();
        assert!(rel(m, 9.0) < 1e-13 && q.abs() < 1e-12);
    }

    #[test]
    fn vacuum_distribution() {
        let p = ParameterSet::real(&[2.0], &[3.0]).unwrap();
        assert_eq!(pn_distribution(&spec(&p, 0.0)).unwrap().values, vec![1.0]);
        assert_eq!(mean_and_mandel(&p, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(factorial_moment(&p, 0.0, 3).unwrap(), 0.0);
    }

    #[test]
    fn negative_binomial_mean() {
        let p = ParameterSet::real(&[2.0], &[]).unwrap();
        let (m, q) = mean_and_mandel(&p, 0.25).unwrap();
        assert!(rel(m, 2.0 / 3.0) < 1e-13 && rel(q, 1.0 / 3.0) < 1e-12);
        let pn = pn_distribution(&spec(&p, 0.5)).unwrap();
        // (2)_n/n! xⁿ (1-x)² = (n+1) xⁿ (1-x)²
        for (n, &v) in pn.values.iter().enumerate().take(40) {
            let want = (n as f64 + 1.0) * 0.25f64.powi(n as i32) * 0.75 * 0.75;
            assert!(rel(v, want) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn factorial_moment_matches_distribution() {
        let p = ParameterSet::real(&[], &[2.0]).unwrap();
        assert!(factorial_moment(&ParameterSet::coherent(), 1.7, 3).unwrap() - 1.7f64.powi(3) < 1e-13);
        let pn = pn_distribution(&spec(&p, 2.0)).unwrap();
        let brute: f64 = pn.values.iter().enumerate().map(|(n, v)| n as f64 * v).sum();
        assert!(rel(factorial_moment(&p, 4.0, 1).unwrap(), brute) < 1e-9);
    }

    #[test]
    fn closed_forms_agree_with_generic() {
        let cases: Vec<(FamilyTag, Vec<f64>, Vec<f64>, f64)> = vec![
            (FamilyTag::F01, vec![], vec![1.0], 9.0),
            (FamilyTag::F01, vec![], vec![0.2], 0.0625),
            (FamilyTag::F11, vec![2.0], vec![4.0], 9.0),
            (FamilyTag::F11, vec![4.0], vec![2.0], 0.5625),
            (FamilyTag::F10, vec![1.5], vec![], 0.5625),
            (FamilyTag::F21, vec![3.0, 3.0], vec![2.0], 0.5625),
        ];
        for (tag, a, b, x) in cases {
            let p = ParameterSet::real(&a, &b).unwrap();
            let c = closed_form_stats(tag, &p, x).unwrap();
            let (m, q) = mean_and_mandel(&p, x).unwrap();
            assert!(rel(m, c.mean) < 1e-10, "{tag} mean {m} vs {}", c.mean);
            assert!(rel(q, c.mandel_q) < 1e-9, "{tag} Q {q} vs {}", c.mandel_q);
            let g = pn_distribution(&spec(&p, x.sqrt())).unwrap();
            for (u, v) in g.values.iter().zip(&c.pn.values).take(30) {
                assert!((u - v).abs() < 1e-12 * v.max(1e-3), "{tag}");
            }
        }
    }

    #[test]
    fn family_reductions() {
        let f11 = ParameterSet::real(&[2.5], &[2.5]).unwrap();
        let s = closed_form_stats(FamilyTag::F11, &f11, 4.0).unwrap();
        assert!(rel(s.mean, 4.0) < 1e-12 && s.mandel_q.abs() < 1e-11);
        let f21 = ParameterSet::real(&[1.5, 3.0], &[3.0]).unwrap();
        let s = closed_form_stats(FamilyTag::F21, &f21, 0.5).unwrap();
        assert!(rel(s.mean, 1.5) < 1e-12 && rel(s.mandel_q, 1.0) < 1e-12);
        assert!(closed_form_stats(FamilyTag::F10, &f11, 0.5).is_err());
    }

    #[test]
    fn circle_and_divergent_states() {
        let p = ParameterSet::real(&[1.0], &[]).unwrap();
        let s = StateSpec::new(p, Complex64::new(0.0, 1.0)).unwrap();
        assert!(matches!(pn_distribution(&s), Err(Error::Divergence(_))));
    }
}
