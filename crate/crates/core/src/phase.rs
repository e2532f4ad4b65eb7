//! Husimi functions, G-coefficient tables and phase distributions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::specfun::pfq_complex;
use crate::states::{ln_rho_real, ln_rho_table, normalization, FockVector, ParameterSet};
use crate::weights::{check_weight_params, weight_tilde_family, weighted_integral, DEFAULT_QUAD_TOL};

/// Largest cutoff for a G table.
pub const G_CAP: usize = 2048;
/// Default number of θ samples.
pub const DEFAULT_GRID: usize = 721;
/// Tolerance on ρ_{n,n'} - ρ*_{n',n} for density-matrix signals.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Uniform grid of `n` points on [start, start + 2π].
pub fn theta_grid(n: usize, start: f64) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|k| start + 2.0 * PI * k as f64 / (n - 1) as f64).collect()
}

/// The default grid: 721 points on [-π, π].
pub fn default_grid() -> Vec<f64> {
    theta_grid(DEFAULT_GRID, -PI)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Analyzer {
    /// Coherent-state (Husimi) analyzer.
    Q,
    /// Pegg-Barnett: every coefficient 1.
    PB,
    Params(ParameterSet),
}

impl Analyzer {
    pub fn label(&self) -> String {
        match self {
            Analyzer::Q => "Q".into(),
            Analyzer::PB => "PB".into(),
            Analyzer::Params(p) => p.label(),
        }
    }
}

/// Symmetric table G(n, n') for n, n' ≤ cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct GCoefficientTable {
    pub analyzer: Analyzer,
    pub cutoff: usize,
    table: Vec<f64>,
}

impl GCoefficientTable {
    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.table[n * (self.cutoff + 1) + m]
    }
}

/// G(n, n') = ρ((n+n')/2) / sqrt(ρ(n) ρ(n')), evaluated in log space.
pub fn g_coefficients(analyzer: &Analyzer, cutoff: usize) -> Result<GCoefficientTable> {
    if cutoff > G_CAP {
        return Err(Error::CutoffCap { requested: cutoff, cap: G_CAP });
    }
    let dim = cutoff + 1;
    let mut table = vec![1.0; dim * dim];
    let params = match analyzer {
        Analyzer::PB => None,
        Analyzer::Q => Some(ParameterSet::coherent()),
        Analyzer::Params(p) => Some(p.reduced()),
    };
    if let Some(p) = params {
        let half: Vec<f64> = (0..=2 * cutoff).map(|k| ln_rho_real(&p, 0.5 * k as f64)).collect::<Result<_>>()?;
        for n in 0..dim {
            for m in 0..n {
                let g = (half[n + m] - 0.5 * (half[2 * n] + half[2 * m])).exp();
                table[n * dim + m] = g;
                table[m * dim + n] = g;
            }
        }
    }
    Ok(GCoefficientTable { analyzer: analyzer.clone(), cutoff, table })
}

/// A pure state or a hermitian density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    Vector(FockVector),
    Density(DMatrix<Complex64>),
}

impl Signal {
    /// Accept a density matrix after checking hermiticity.
    pub fn density(m: DMatrix<Complex64>) -> Result<Signal> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Invalid(format!("density matrix must be square and nonempty, got {}x{}", m.nrows(), m.ncols())));
        }
        let dev = (&m - m.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if dev > HERMITICITY_TOL {
            return Err(Error::Invalid(format!("density matrix is not hermitian (deviation {dev:e})")));
        }
        Ok(Signal::Density(m))
    }

    pub fn cutoff(&self) -> usize {
        match self {
            Signal::Vector(v) => v.cutoff(),
            Signal::Density(m) => m.nrows() - 1,
        }
    }

    fn element(&self, n: usize, m: usize) -> Complex64 {
        match self {
            Signal::Vector(v) => v.coeffs[n] * v.coeffs[m].conj(),
            Signal::Density(d) => d[(n, m)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDistribution {
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
    /// Trapezoid integral over the grid minus 1.
    pub residual: f64,
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(a, b)| 0.5 * (a[1] - a[0]) * (b[0] + b[1])).sum()
}

/// 𝒫(θ) = (1/2π) Σ ρ_{n,n'} G(n,n') e^{-i(n-n')θ}, folded over m = n - n'.
pub fn phase_distribution_with(signal: &Signal, table: &GCoefficientTable, grid: &[f64]) -> Result<PhaseDistribution> {
    let dim = signal.cutoff() + 1;
    if table.cutoff + 1 < dim {
        return Err(Error::Invalid(format!("G table cutoff {} below signal cutoff {}", table.cutoff, dim - 1)));
    }
    let mut c = vec![Complex64::new(0.0, 0.0); dim];
    for (m, cm) in c.iter_mut().enumerate() {
        for n in 0..dim - m {
            *cm += signal.element(n + m, n) * table.get(n + m, n);
        }
    }
    let values: Vec<f64> = grid
        .iter()
        .map(|&th| {
            let mut acc = c[0].re;
            for (m, cm) in c.iter().enumerate().skip(1) {
                let ph = Complex64::from_polar(1.0, -(m as f64) * th);
                acc += 2.0 * (cm * ph).re;
            }
            acc / (2.0 * PI)
        })
        .collect();
    let residual = trapezoid(grid, &values) - 1.0;
    Ok(PhaseDistribution { theta: grid.to_vec(), values, residual })
}

pub fn phase_distribution(signal: &Signal, analyzer: &Analyzer, grid: &[f64]) -> Result<PhaseDistribution> {
    let table = g_coefficients(analyzer, signal.cutoff())?;
    phase_distribution_with(signal, &table, grid)
}

/// (1/π) |⟨α|ψ⟩|² for the coherent-state analyzer.
pub fn husimi_q(signal: &FockVector, alpha: Complex64) -> f64 {
    let ac = alpha.conj();
    let mut term = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &psi) in signal.coeffs.iter().enumerate() {
        if n > 0 {
            term *= ac / (n as f64).sqrt();
        }
        acc += term * psi;
    }
    acc.norm_sqr() / PI
}

/// Σ z̄ⁿ ψ_n / sqrt(ρ(n)), the unnormalized overlap with the analyzer.
pub(crate) fn kernel_sum(params: &ParameterSet, psi: &FockVector, z: Complex64) -> Result<Complex64> {
    let table = ln_rho_table(params, psi.cutoff())?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(psi.coeffs[0]);
    }
    let (lr, arg) = (z.norm().ln(), -z.arg());
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &c) in psi.coeffs.iter().enumerate() {
        let k = n as f64;
        acc += c * Complex64::from_polar((k * lr - 0.5 * table[n]).exp(), k * arg);
    }
    Ok(acc)
}

/// (1/π) w(|z|²) |⟨p;q;z|ψ⟩|² = (1/π) w̃(|z|²) |Σ z̄ⁿ ψ_n/√ρ(n)|².
pub fn gh_husimi(signal: &FockVector, analyzer: &Family, z: Complex64) -> Result<f64> {
    let wt = weight_tilde_family(analyzer, z.norm_sqr())?;
    let s = kernel_sum(&analyzer.params(), signal, z)?;
    Ok(wt * s.norm_sqr() / PI)
}

/// (1/π) w̃(|z|²) |N(z̄ z̃)|² / N(|z̃|²): the self-dual distribution in closed form.
pub fn self_dual_husimi(family: &Family, z: Complex64, z_tilde: Complex64) -> Result<f64> {
    let params = family.params();
    let wt = weight_tilde_family(family, z.norm_sqr())?;
    let cross = pfq_complex(params.a(), params.b(), z.conj() * z_tilde, &Default::default())?.value;
    Ok(wt * cross.norm_sqr() / normalization(&params, z_tilde.norm_sqr())? / PI)
}

/// Max |∫ r dr Q_gh(r e^{iθ}) - 𝒫(θ)| over the grid, the second pipeline
/// using the analyzer's G table.
pub fn radial_phase_check(signal: &FockVector, analyzer: &Family, grid: &[f64]) -> Result<f64> {
    check_weight_params(analyzer)?;
    let params = analyzer.params();
    let table = ln_rho_table(&params, signal.cutoff())?;
    let dist = phase_distribution(&Signal::Vector(signal.clone()), &Analyzer::Params(params), grid)?;
    let mut worst = 0.0f64;
    for (&th, &p) in grid.iter().zip(&dist.values) {
        let radial = weighted_integral(
            analyzer,
            |x| {
                if x == 0.0 {
                    return signal.coeffs[0].norm_sqr() / (2.0 * PI);
                }
                let lr = 0.5 * x.ln();
                let mut acc = Complex64::new(0.0, 0.0);
                for (n, &c) in signal.coeffs.iter().enumerate() {
                    let k = n as f64;
                    acc += c * Complex64::from_polar((k * lr - 0.5 * table[n]).exp(), -k * th);
                }
                acc.norm_sqr() / (2.0 * PI)
            },
            DEFAULT_QUAD_TOL,
        )?;
        worst = worst.max((radial - p).abs());
    }
    Ok(worst)
}
