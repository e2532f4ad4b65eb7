//! Lowering and raising operators on truncated Fock space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{fock_vector, FockVector, ParameterSet, StateSpec, DEFAULT_FOCK_CAP};

/// Largest cutoff for which dense matrices are assembled.
pub const MAX_DENSE: usize = 512;

/// f(n) = sqrt((n+1) Π(n+b) / Π(n+a)), with f(-1) = 0.
pub fn f_coeff(params: &ParameterSet, n: i64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    params.ratio(n as f64).sqrt()
}

/// Memoized f(0), f(1), ... for one parameter set.
#[derive(Debug, Clone)]
pub struct LadderCoefficients {
    params: ParameterSet,
    f: Vec<f64>,
}

impl LadderCoefficients {
    pub fn new(params: &ParameterSet, n_max: usize) -> Self {
        let f = (0..=n_max).map(|n| f_coeff(params, n as i64)).collect();
        LadderCoefficients { params: params.clone(), f }
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn get(&self, n: i64) -> f64 {
        if n < 0 {
            0.0
        } else if (n as usize) < self.f.len() {
            self.f[n as usize]
        } else {
            f_coeff(&self.params, n)
        }
    }
}

/// (Û v)_n = f(n) v_{n+1}.
pub fn apply_lowering(params: &ParameterSet, v: &FockVector) -> FockVector {
    let n = v.cutoff();
    if n == 0 {
        return FockVector { coeffs: vec![Complex64::new(0.0, 0.0)], tail_bound: 0.0, normalized: false };
    }
    let coeffs = (0..n).map(|k| v.coeffs[k + 1] * f_coeff(params, k as i64)).collect();
    let fn_ = f_coeff(params, n as i64);
    FockVector { coeffs, tail_bound: fn_ * fn_ * v.tail_bound, normalized: false }
}

/// (Û† v)_{n+1} = f(n) v_n, refusing to grow past `cap`.
pub fn apply_raising_capped(params: &ParameterSet, v: &FockVector, cap: usize) -> Result<FockVector> {
    let n = v.cutoff();
    if n + 1 > cap {
        return Err(Error::CutoffCap { requested: n + 1, cap });
    }
    let mut coeffs = Vec::with_capacity(n + 2);
    coeffs.push(Complex64::new(0.0, 0.0));
    for k in 0..=n {
        coeffs.push(v.coeffs[k] * f_coeff(params, k as i64));
    }
    let fn_ = f_coeff(params, n as i64 + 1);
    Ok(FockVector { coeffs, tail_bound: fn_ * fn_ * v.tail_bound, normalized: false })
}

pub fn apply_raising(params: &ParameterSet, v: &FockVector) -> Result<FockVector> {
    apply_raising_capped(params, v, DEFAULT_FOCK_CAP)
}

/// Diagonal of [Û, Û†]: f(n)² - f(n-1)².
pub fn commutator_diagonal(params: &ParameterSet, n: usize) -> f64 {
    let a = f_coeff(params, n as i64);
    let b = f_coeff(params, n as i64 - 1);
    a * a - b * b
}

/// ‖Û v - z v‖ for v the truncated state. The last component, which Ûv
/// lacks, is counted in full, so the result is about |z| |v_N| ≤ |z| √tol.
pub fn eigenvalue_residual(spec: &StateSpec, tol: f64) -> Result<f64> {
    let v = fock_vector(spec, tol)?;
    let lowered = apply_lowering(&spec.params, &v);
    let z = spec.z;
    let mut acc = 0.0;
    for (k, c) in v.coeffs.iter().enumerate() {
        let u = lowered.coeffs.get(k).copied().unwrap_or_default();
        acc += (u - z * c).norm_sqr();
    }
    Ok(acc.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrices {
    pub q: DMatrix<Complex64>,
    pub p: DMatrix<Complex64>,
    pub c: DMatrix<Complex64>,
    pub s: DMatrix<Complex64>,
}

/// Dense lowering matrix on |0⟩..|N⟩; the row coupling to |N+1⟩ is dropped.
pub fn lowering_matrix(params: &ParameterSet, n: usize) -> Result<DMatrix<Complex64>> {
    if n > MAX_DENSE {
        return Err(Error::CutoffCap { requested: n, cap: MAX_DENSE });
    }
    let mut u = DMatrix::<Complex64>::zeros(n + 1, n + 1);
    for k in 0..n {
        u[(k, k + 1)] = Complex64::new(f_coeff(params, k as i64), 0.0);
    }
    Ok(u)
}

/// Q = (Û†+Û)/√2, P = i(Û†-Û)/√2, C = (Û†+Û)/2, S = i(Û†-Û)/2.
pub fn hermitian_matrices(params: &ParameterSet, n: usize) -> Result<HermitianMatrices> {
    if n < 1 {
        return Err(Error::Invalid("hermitian matrices need a cutoff of at least 1".into()));
    }
    let u = lowering_matrix(params, n)?;
    let ud = u.adjoint();
    let i = Complex64::new(0.0, 1.0);
    let sum = &ud + &u;
    let diff = (&ud - &u) * i;
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    Ok(HermitianMatrices {
        q: sum.map(|v| v * r2),
        p: diff.map(|v| v * r2),
        c: sum.map(|v| v * 0.5),
        s: diff.map(|v| v * 0.5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::rho;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn f_examples() {
        let cs = ParameterSet::coherent();
        assert_eq!(f_coeff(&cs, 3), 2.0);
        assert_eq!(f_coeff(&cs, -1), 0.0);
        let d = ParameterSet::real(&[2.0], &[]).unwrap();
        assert!((f_coeff(&d, 0) - 0.5f64.sqrt()).abs() < 1e-16);
        let m = ParameterSet::real(&[2.0], &[3.0]).unwrap();
        assert!((f_coeff(&m, 1) - (8.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let memo = LadderCoefficients::new(&m, 4);
        assert_eq!(memo.get(1), f_coeff(&m, 1));
        assert_eq!(memo.get(9), f_coeff(&m, 9));
        assert_eq!(memo.get(-1), 0.0);
    }

    #[test]
    fn product_identity() {
        let p = ParameterSet::new(&[c(1.5, 0.4), c(1.5, -0.4)], &[c(0.7, 0.0)]).unwrap();
        let mut prod = 1.0;
        for n in 0..=100usize {
            let r = rho(&p, n).unwrap();
            assert!(((prod * prod - r) / r).abs() < 1e-12, "n={n}");
            prod *= f_coeff(&p, n as i64);
        }
    }

    #[test]
    fn ladder_on_basis_states() {
        let cs = ParameterSet::coherent();
        let low = apply_lowering(&cs, &FockVector::basis(3));
        assert_eq!(low.cutoff(), 2);
        assert!((low.coeffs[2].re - 3f64.sqrt()).abs() < 1e-15);
        let zero = apply_lowering(&cs, &FockVector::basis(0));
        assert_eq!(zero.coeffs, vec![c(0.0, 0.0)]);
        let up = apply_raising(&cs, &FockVector::basis(0)).unwrap();
        assert_eq!(up.coeffs, vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(apply_raising_capped(&cs, &FockVector::basis(5), 5), Err(Error::CutoffCap { .. })));
    }

    #[test]
    fn coherent_state_eigenvector() {
        let spec = StateSpec::new(ParameterSet::coherent(), c(1.0, 0.0)).unwrap();
        let r = eigenvalue_residual(&spec, 1e-14).unwrap();
        assert!(r < 1e-6, "{r}");
        let v = fock_vector(&spec, 1e-14).unwrap();
        let low = apply_lowering(&spec.params, &v);
        let common: f64 = low.coeffs.iter().zip(&v.coeffs).map(|(u, w)| (u - w).norm_sqr()).sum();
        assert!(common.sqrt() < 1e-9);
        let vac = StateSpec::new(ParameterSet::coherent(), c(0.0, 0.0)).unwrap();
        assert_eq!(eigenvalue_residual(&vac, 1e-14).unwrap(), 0.0);
    }

    #[test]
    fn commutator_examples() {
        let cs = ParameterSet::coherent();
        for n in 0..10 {
            assert!((commutator_diagonal(&cs, n) - 1.0).abs() < 1e-13);
        }
        let phase = ParameterSet::real(&[1.0], &[]).unwrap();
        assert_eq!(commutator_diagonal(&phase, 0), 1.0);
        for n in 1..10 {
            assert_eq!(commutator_diagonal(&phase, n), 0.0);
        }
    }

    #[test]
    fn hermitian_examples() {
        let h = hermitian_matrices(&ParameterSet::coherent(), 2).unwrap();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h.q[(0, 1)].re - r2).abs() < 1e-16 && (h.q[(1, 0)].re - r2).abs() < 1e-16);
        for m in [&h.q, &h.p, &h.c, &h.s] {
            assert_eq!((m - m.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max), 0.0);
        }
        let phase = ParameterSet::real(&[1.0], &[]).unwrap();
        let h = hermitian_matrices(&phase, 6).unwrap();
        let cs2 = &h.c * &h.c + &h.s * &h.s;
        for k in 1..6 {
            assert!((cs2[(k, k)].re - 1.0).abs() < 1e-15);
        }
        assert!((cs2[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(hermitian_matrices(&phase, MAX_DENSE + 1).is_err());
    }
}
