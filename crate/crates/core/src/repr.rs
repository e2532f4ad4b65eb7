//! GHCS wavefunctions, analytic representations and inner products through
//! the resolution-of-unity measure.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::phase::kernel_sum;
use crate::quad::QuadOptions;
use crate::states::{classify, ln_rho_table, normalization, DomainKind, FockVector, ParameterSet};
use crate::weights::{weight_tilde_family, weighted_integral_with};

/// Minimum number of angular nodes in the measure integral.
pub const MIN_ANGULAR: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSample {
    pub zeta: Complex64,
    pub value: Complex64,
    pub params: ParameterSet,
    /// Bound on the contribution of the coefficients past the cutoff.
    pub tail_bound: f64,
}

/// √w(|z|²) ⟨p;q;z|ψ⟩ = √w̃(|z|²) Σ z̄ⁿ ψ_n / √ρ(n).
pub fn ghcs_wavefunction(family: &Family, psi: &FockVector, z: Complex64) -> Result<Complex64> {
    let wt = weight_tilde_family(family, z.norm_sqr())?;
    Ok(wt.sqrt() * kernel_sum(&family.params(), psi, z)?)
}

/// Ψ̃(ζ) = Σ ζⁿ ψ_n / √ρ(n).
pub fn analytic_rep(params: &ParameterSet, psi: &FockVector, zeta: Complex64) -> Result<AnalyticSample> {
    let x = zeta.norm_sqr();
    match classify(params).kind {
        DomainKind::Divergent if x > 0.0 => {
            return Err(Error::Divergence(format!("{params} has zero radius of convergence")));
        }
        DomainKind::UnitDisk | DomainKind::CircleNormalized | DomainKind::CircleUnnormalizable if x >= 1.0 => {
            return Err(Error::Divergence(format!("|zeta| = {} outside the unit disk for {params}", zeta.norm())));
        }
        _ => {}
    }
    let value = kernel_sum(params, psi, zeta.conj())?;
    // Cauchy-Schwarz on the omitted coefficients
    let tail_bound = if psi.tail_bound == 0.0 || x == 0.0 {
        0.0
    } else {
        (psi.tail_bound * normalization(params, x)?).sqrt()
    };
    Ok(AnalyticSample { zeta, value, params: params.clone(), tail_bound })
}

/// ∫ (d²ζ/π) w̃(|ζ|²) Φ̃*(ζ) Ψ̃(ζ) with a uniform angular rule, exact for
/// the trigonometric polynomials that appear, times the radial weighted
/// integral.
pub fn inner_product_via_measure(family: &Family, phi: &FockVector, psi: &FockVector, quad_tol: f64) -> Result<Complex64> {
    let params = family.params();
    let n = phi.cutoff().max(psi.cutoff());
    let table = ln_rho_table(&params, n)?;
    let k = MIN_ANGULAR.max(2 * n + 2);
    let angles: Vec<Complex64> = (0..k).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)).collect();
    let series = |v: &FockVector, x: f64, w: Complex64| -> Complex64 {
        if x == 0.0 {
            return v.coeffs[0];
        }
        let lr = 0.5 * x.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut ph = Complex64::new(1.0, 0.0);
        for (m, &c) in v.coeffs.iter().enumerate() {
            acc += c * ph * (m as f64 * lr - 0.5 * table[m]).exp();
            ph *= w;
        }
        acc
    };
    // angular mean of Φ̃*Ψ̃ at radius √x; d²ζ/π = dx dθ / (2π)
    let angular = |x: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &w in &angles {
            acc += series(phi, x, w).conj() * series(psi, x, w);
        }
        acc / k as f64
    };
    let scale = (phi.norm_sqr() * psi.norm_sqr()).sqrt().max(f64::MIN_POSITIVE);
    let opts = QuadOptions { abs_tol: quad_tol * scale, rel_tol: quad_tol, max_intervals: 4000 };
    let re = weighted_integral_with(family, |x| angular(x).re, &opts)?;
    let im = weighted_integral_with(family, |x| angular(x).im, &opts)?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{fock_vector, StateSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn wavefunction_examples() {
        let cs = ParameterSet::coherent();
        let alpha = c(0.7, -0.4);
        let psi = fock_vector(&StateSpec::new(cs, alpha).unwrap(), 1e-15).unwrap();
        let z = c(0.3, 0.5);
        let want = (-0.5 * z.norm_sqr() - 0.5 * alpha.norm_sqr() + z.conj() * alpha).exp();
        assert!((ghcs_wavefunction(&Family::Cs, &psi, z).unwrap() - want).norm() < 1e-14);
        let f = Family::F10 { a: 3.0 };
        let v = ghcs_wavefunction(&f, &FockVector::basis(0), c(0.5, 0.0)).unwrap();
        assert!((v.re - weight_tilde_family(&f, 0.25).unwrap().sqrt()).abs() < 1e-15);
    }

    #[test]
    fn analytic_examples() {
        let cs = ParameterSet::coherent();
        let alpha = c(0.9, 0.2);
        let psi = fock_vector(&StateSpec::new(cs.clone(), alpha).unwrap(), 1e-15).unwrap();
        let zeta = c(-0.4, 0.8);
        let got = analytic_rep(&cs, &psi, zeta).unwrap();
        let want = (zeta * alpha - 0.5 * alpha.norm_sqr()).exp();
        assert!((got.value - want).norm() < 1e-13 && got.tail_bound < 1e-6);
        let p = ParameterSet::real(&[2.0], &[3.0]).unwrap();
        let one = analytic_rep(&p, &FockVector::basis(1), zeta).unwrap();
        assert!((one.value - zeta / crate::states::rho(&p, 1).unwrap().sqrt()).norm() < 1e-15);
        let hardy = ParameterSet::real(&[1.0], &[]).unwrap();
        let v = FockVector::from_coeffs(vec![c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0)]);
        let h = analytic_rep(&hardy, &v, zeta).unwrap();
        let want = v.coeffs[0] + v.coeffs[1] * zeta + v.coeffs[2] * zeta * zeta;
        assert!((h.value - want).norm() < 1e-15);
        assert!(analytic_rep(&hardy, &v, c(1.0, 0.1)).is_err());
    }

    #[test]
    fn measure_inner_products() {
        let vac = FockVector::basis(0);
        let r = inner_product_via_measure(&Family::Cs, &vac, &vac, 1e-10).unwrap();
        assert!((r - 1.0).norm() < 1e-9);
        let phi = FockVector::from_coeffs((0..=8).map(|n| c(1.0 / (n as f64 + 1.0), 0.3 * n as f64 / 8.0)).collect());
        let psi = FockVector::from_coeffs((0..=8).map(|n| c((n as f64 * 0.7).cos(), (n as f64).sin() * 0.2)).collect());
        let want = phi.inner(&psi);
        let got = inner_product_via_measure(&Family::Cs, &phi, &psi, 1e-10).unwrap();
        assert!((got - want).norm() < 1e-6, "{got} vs {want}");
        let got = inner_product_via_measure(&Family::F10 { a: 3.0 }, &phi, &psi, 1e-10).unwrap();
        assert!((got - want).norm() < 1e-5, "{got} vs {want}");
    }

    #[test]
    fn cauchy_riemann() {
        let p = ParameterSet::real(&[1.5], &[0.5]).unwrap();
        let psi = FockVector::from_coeffs((0..12).map(|n| c(0.5f64.powi(n), 0.1 * n as f64)).collect());
        let z = c(0.3, -0.7);
        let h = 1e-5;
        let f = |w: Complex64| analytic_rep(&p, &psi, w).unwrap().value;
        let dx = (f(z + h) - f(z - h)) / (2.0 * h);
        let dy = (f(z + c(0.0, h)) - f(z - c(0.0, h))) / (2.0 * h);
        assert!((dx * c(0.0, 1.0) - dy).norm() < 1e-6);
    }
}
