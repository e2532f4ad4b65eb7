//! Self-check suites behind `ghcs verify`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::family::{Family, FamilyTag};
use crate::ladder::{eigenvalue_residual, f_coeff};
use crate::phase::{default_grid, g_coefficients, phase_distribution, Analyzer, Signal};
use crate::photstat::mean_and_mandel;
use crate::states::{fock_vector, rho, FockVector, ParameterSet, StateSpec};
use crate::weights::{moment_check, weight_tilde_family, DEFAULT_QUAD_TOL};

pub const MOMENT_TOL: f64 = 1e-6;
pub const EIGEN_TOL: f64 = 1e-6;
pub const PHASE_NORM_TOL: f64 = 1e-8;
pub const UNIFORM_TOL: f64 = 1e-12;
pub const COALESCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Moments,
    Eigen,
    PhaseNorm,
    Coalesce,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: String, measured: f64, tolerance: f64) -> Check {
        Check { name, measured, tolerance, pass: measured <= tolerance }
    }
}

fn set(a: &[f64], b: &[f64]) -> ParameterSet {
    ParameterSet::real(a, b).expect("built-in parameter sets are valid")
}

fn family_grid() -> Vec<(FamilyTag, ParameterSet)> {
    let mut v = vec![(FamilyTag::Cs, ParameterSet::coherent())];
    for b in [0.2, 1.0, 5.0] {
        v.push((FamilyTag::F01, set(&[], &[b])));
    }
    for (a, b) in [(2.0, 4.0), (3.0, 3.0), (4.0, 2.0)] {
        v.push((FamilyTag::F11, set(&[a], &[b])));
    }
    for a in [1.5, 2.0, 4.0] {
        v.push((FamilyTag::F10, set(&[a], &[])));
    }
    v.push((FamilyTag::F21, set(&[3.0, 3.0], &[2.0])));
    v
}

fn moments() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (tag, p) in family_grid() {
        let r = moment_check(tag, &p, 20, DEFAULT_QUAD_TOL)?;
        out.push(Check::new(format!("moments {}", p.label()), r.max_rel_error, MOMENT_TOL));
    }
    Ok(out)
}

fn eigen() -> Result<Vec<Check>> {
    let c = Complex64::new;
    let states = [
        (ParameterSet::coherent(), c(2.0, -1.0)),
        (set(&[], &[0.5]), c(3.0, 0.5)),
        (set(&[2.0], &[4.0]), c(-1.5, 2.0)),
        (set(&[], &[1.0, 2.5]), c(4.0, 0.0)),
        (set(&[1.5], &[]), c(0.6, 0.3)),
        (set(&[3.0, 3.0], &[2.0]), c(-0.2, 0.5)),
        (set(&[1.0], &[7.0]), c(0.0, 1.0)),
        (set(&[2.0, 1.0], &[9.0]), c(0.6, -0.8)),
    ];
    let mut out = Vec::new();
    for (p, z) in states {
        let r = eigenvalue_residual(&StateSpec::new(p.clone(), z)?, 1e-14)?;
        out.push(Check::new(format!("eigen {} z={}", p.label(), z), r, EIGEN_TOL));
    }
    Ok(out)
}

fn phase_norm() -> Result<Vec<Check>> {
    let grid = default_grid();
    let z = Complex64::from_polar(0.75, 0.4);
    let mut out = Vec::new();
    let analyzers = [Analyzer::Q, Analyzer::PB, Analyzer::Params(set(&[2.0], &[]))];
    for (_, p) in family_grid() {
        let v = fock_vector(&StateSpec::new(p.clone(), z)?, 1e-14)?;
        for an in &analyzers {
            let d = phase_distribution(&Signal::Vector(v.clone()), an, &grid)?;
            out.push(Check::new(format!("phase-norm {} {}", p.label(), an.label()), d.residual.abs(), PHASE_NORM_TOL));
        }
    }
    let fock = Signal::Vector(FockVector::basis(5));
    let d = phase_distribution(&fock, &Analyzer::Q, &grid)?;
    let dev = d.values.iter().map(|v| (v - 1.0 / (2.0 * std::f64::consts::PI)).abs()).fold(0.0, f64::max);
    out.push(Check::new("phase-norm fock uniform".into(), dev, UNIFORM_TOL));
    Ok(out)
}

fn rel(u: f64, v: f64) -> f64 {
    if u == v {
        0.0
    } else {
        (u - v).abs() / v.abs().max(u.abs()).max(f64::MIN_POSITIVE)
    }
}

fn coalesce() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let extra = Complex64::new(2.7, 0.0);
    for (tag, p) in family_grid() {
        let big = p.with_matched_pair(extra).map_err(crate::Error::InvalidParameters)?;
        let label = p.label();
        let mut err = 0.0f64;
        for n in 0..=30usize {
            err = err.max(rel(rho(&big, n)?, rho(&p, n)?));
            err = err.max(rel(f_coeff(&big, n as i64), f_coeff(&p, n as i64)));
        }
        out.push(Check::new(format!("coalesce rho/f {label}"), err, COALESCE_TOL));

        let x = if Family::new(tag, &p)?.x_max().is_finite() { 0.5 } else { 2.0 };
        let (m0, q0) = mean_and_mandel(&p, x)?;
        let (m1, q1) = mean_and_mandel(&big, x)?;
        let stat = rel(m1, m0).max((q1 - q0).abs() / q0.abs().max(1.0));
        out.push(Check::new(format!("coalesce stats {label}"), stat, COALESCE_TOL));

        // only CS -> (1;1) and (1;0) -> (2;1) land in another closed-form family
        if let Ok(bigf) = Family::detect(&big) {
            let w0 = weight_tilde_family(&Family::detect(&p)?, x)?;
            let w1 = weight_tilde_family(&bigf, x)?;
            out.push(Check::new(format!("coalesce weight {label}"), rel(w1, w0), COALESCE_TOL));
        }

        let g0 = g_coefficients(&Analyzer::Params(p.clone()), 40)?;
        let g1 = g_coefficients(&Analyzer::Params(big.clone()), 40)?;
        let mut gerr = 0.0f64;
        for n in 0..=40 {
            for m in 0..=40 {
                gerr = gerr.max(rel(g1.get(n, m), g0.get(n, m)));
            }
        }
        out.push(Check::new(format!("coalesce G {label}"), gerr, COALESCE_TOL));
    }
    Ok(out)
}

pub fn run(suite: Suite) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Moments | Suite::All) {
        out.extend(moments()?);
    }
    if matches!(suite, Suite::Eigen | Suite::All) {
        out.extend(eigen()?);
    }
    if matches!(suite, Suite::PhaseNorm | Suite::All) {
        out.extend(phase_norm()?);
    }
    if matches!(suite, Suite::Coalesce | Suite::All) {
        out.extend(coalesce()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_suite_passes() {
        let checks = run(Suite::Eigen).unwrap();
        assert_eq!(checks.len(), 8);
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }

    #[test]
    fn coalesce_suite_passes() {
        let checks = run(Suite::Coalesce).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }
}
