use std::f64::consts::PI;

use ghcs::family::Family;
use ghcs::ladder::{apply_lowering, apply_raising, commutator_diagonal, f_coeff, lowering_matrix};
use ghcs::phase::{g_coefficients, phase_distribution, theta_grid, Analyzer, Signal};
use ghcs::photstat::pn_distribution;
use ghcs::specfun::ln_gamma;
use ghcs::states::{fock_vector, ln_rho_table, normalization, rho, FockVector, ParameterSet, StateSpec};
use ghcs::weights::{weight_tilde_family, weighted_integral};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(u: f64, v: f64) -> f64 {
    if u == v {
        0.0
    } else {
        (u - v).abs() / u.abs().max(v.abs())
    }
}

/// Positive real parameter lists with p ≤ q + 1 and a point inside the domain.
fn state_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Complex64)> {
    (prop::collection::vec(0.1f64..5.0, 0..=2), prop::collection::vec(0.1f64..5.0, 0..=2), 0.0f64..1.0, -PI..PI)
        .prop_filter("p <= q + 1", |(a, b, _, _)| a.len() <= b.len() + 1)
        .prop_map(|(a, b, s, phi)| {
            let r = if a.len() == b.len() + 1 { 0.9 * s } else { 3.0 * s };
            (a, b, Complex64::from_polar(r, phi))
        })
}

fn vector(len: usize) -> impl Strategy<Value = FockVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| FockVector::from_coeffs(v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()))
}

fn coeff_dev(u: &FockVector, v: &FockVector) -> f64 {
    let scale = u.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let n = u.coeffs.len().max(v.coeffs.len());
    (0..n).map(|k| (u.get(k) - v.get(k)).norm()).fold(0.0, f64::max) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_symmetry((a, b, z) in state_strategy()) {
        let p = ParameterSet::real(&a, &b).unwrap();
        let ar: Vec<f64> = a.iter().rev().copied().collect();
        let br: Vec<f64> = b.iter().rev().copied().collect();
        let q = ParameterSet::real(&ar, &br).unwrap();
        for n in [0usize, 1, 7, 40] {
            prop_assert_eq!(rho(&p, n).unwrap().to_bits(), rho(&q, n).unwrap().to_bits());
        }
        let x = z.norm_sqr();
        prop_assert_eq!(normalization(&p, x).unwrap().to_bits(), normalization(&q, x).unwrap().to_bits());
        let u = fock_vector(&StateSpec::new(p, z).unwrap(), 1e-12).unwrap();
        let v = fock_vector(&StateSpec::new(q, z).unwrap(), 1e-12).unwrap();
        prop_assert_eq!(u, v);
    }

    #[test]
    fn coalescence((a, b, z) in state_strategy(), c in 0.1f64..6.0) {
        let p = ParameterSet::real(&a, &b).unwrap();
        let big = p.with_matched_pair(Complex64::new(c, 0.0)).unwrap();
        for n in 0..=60usize {
            prop_assert!(rel(rho(&big, n).unwrap(), rho(&p, n).unwrap()) <= 1e-12);
            prop_assert!(rel(f_coeff(&big, n as i64), f_coeff(&p, n as i64)) <= 1e-12);
        }
        let x = z.norm_sqr();
        prop_assert!(rel(normalization(&big, x).unwrap(), normalization(&p, x).unwrap()) <= 1e-12);
        let u = fock_vector(&StateSpec::new(p, z).unwrap(), 1e-12).unwrap();
        let v = fock_vector(&StateSpec::new(big, z).unwrap(), 1e-12).unwrap();
        prop_assert!(coeff_dev(&u, &v) <= 1e-12);
    }

    #[test]
    fn rho_positive_and_recurrent((a, b, _z) in state_strategy()) {
        let p = ParameterSet::real(&a, &b).unwrap();
        // ρ(n) leaves the f64 range before n = 200 for most sets; past that
        // point positivity is read off the log table
        let table = ln_rho_table(&p, 200).unwrap();
        prop_assert_eq!(rho(&p, 0).unwrap(), 1.0);
        for n in 0..200usize {
            prop_assert!(table[n + 1].is_finite());
            if let Ok(r) = rho(&p, n + 1) {
                prop_assert!(r > 0.0);
            }
            let nf = n as f64;
            let want = (nf + 1.0) * b.iter().map(|v| v + nf).product::<f64>() / a.iter().map(|v| v + nf).product::<f64>();
            if let (Ok(u), Ok(v)) = (rho(&p, n), rho(&p, n + 1)) {
                prop_assert!(rel(v / u, want) <= 1e-13, "n={} {} vs {}", n, v / u, want);
            }
        }
    }

    #[test]
    fn product_identity((a, b, _z) in state_strategy()) {
        let p = ParameterSet::real(&a, &b).unwrap();
        let table = ln_rho_table(&p, 100).unwrap();
        let mut ln_prod = 0.0;
        for n in 1..=100usize {
            ln_prod += 2.0 * f_coeff(&p, n as i64 - 1).ln();
            prop_assert!((ln_prod - table[n]).exp_m1().abs() <= 1e-12, "n={} {} vs {}", n, ln_prod, table[n]);
        }
    }

    #[test]
    fn fock_self_inner((a, b, z) in state_strategy()) {
        let p = ParameterSet::real(&a, &b).unwrap();
        let v = fock_vector(&StateSpec::new(p, z).unwrap(), 1e-12).unwrap();
        prop_assert!((v.norm_sqr() - 1.0).abs() <= 2.0 * v.tail_bound + 4.0 * f64::EPSILON);
    }

    #[test]
    fn pn_sums_to_one((a, b, z) in state_strategy()) {
        let p = ParameterSet::real(&a, &b).unwrap();
        let d = pn_distribution(&StateSpec::new(p, z).unwrap()).unwrap();
        let total: f64 = d.values.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn adjointness((a, b, _z) in state_strategy(), u in vector(12), v in vector(13)) {
        let p = ParameterSet::real(&a, &b).unwrap();
        let lhs = apply_raising(&p, &u).unwrap().inner(&v);
        let rhs = u.inner(&apply_lowering(&p, &v));
        let scale = (u.norm_sqr() * v.norm_sqr()).sqrt() * f_coeff(&p, 12);
        prop_assert!((lhs - rhs).norm() <= 1e-14 * scale.max(1.0));
    }

    #[test]
    fn commutator_matrix((a, b, _z) in state_strategy(), n in 2usize..30) {
        let p = ParameterSet::real(&a, &b).unwrap();
        let u = lowering_matrix(&p, n).unwrap();
        let c = &u * u.adjoint() - u.adjoint() * &u;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { commutator_diagonal(&p, i) } else { 0.0 };
                let scale = f_coeff(&p, i as i64).powi(2).max(1.0);
                prop_assert!((c[(i, j)] - want).norm() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn theta_shift_covariance((a, b, z) in state_strategy(), shift in 1usize..40) {
        let p = ParameterSet::real(&a, &b).unwrap();
        let v = fock_vector(&StateSpec::new(p, z).unwrap(), 1e-12).unwrap();
        // periodic grid without the duplicated endpoint, so a shift by whole
        // steps is exact
        let n = 240;
        let grid: Vec<f64> = (0..n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect();
        let delta = 2.0 * PI * shift as f64 / n as f64;
        let rotated = FockVector::from_coeffs(
            v.coeffs.iter().enumerate().map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * delta)).collect(),
        );
        let p0 = phase_distribution(&Signal::Vector(v), &Analyzer::Q, &grid).unwrap();
        let p1 = phase_distribution(&Signal::Vector(rotated), &Analyzer::Q, &grid).unwrap();
        let peak = p0.values.iter().copied().fold(0.0, f64::max);
        for k in 0..n {
            let back = (k + n - shift) % n;
            prop_assert!((p1.values[k] - p0.values[back]).abs() <= 1e-12 * peak.max(1.0));
        }
    }
}

#[test]
fn pb_dominates_q() {
    let pb = g_coefficients(&Analyzer::PB, 400).unwrap();
    let q = g_coefficients(&Analyzer::Q, 400).unwrap();
    for n in 0..=400 {
        for m in 0..=400 {
            assert!(pb.get(n, m) >= q.get(n, m), "n={n} m={m}");
        }
    }
}

#[test]
fn f11_equal_parameters_give_unit_weight() {
    for c in [0.3, 1.0, 2.5, 7.0] {
        let f = Family::F11 { a: c, b: c };
        for x in [1e-6, 0.1, 1.0, 5.0, 30.0] {
            assert!((weight_tilde_family(&f, x).unwrap() * x.exp() - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn f10_beta_moments() {
    for a in [1.5, 2.0, 4.0] {
        let f = Family::F10 { a };
        for s in [0.0, 0.5, 1.7, 3.0, 9.25] {
            let quad = weighted_integral(&f, |x| x.powf(s), 1e-11).unwrap();
            let beta = (a - 1.0) * (ln_gamma(s + 1.0).unwrap().re + ln_gamma(a - 1.0).unwrap().re - ln_gamma(s + a).unwrap().re).exp();
            assert!(rel(quad, beta) <= 1e-9, "a={a} s={s}: {quad} vs {beta}");
        }
    }
}

#[test]
fn default_theta_grid_is_closed() {
    let g = theta_grid(721, -PI);
    assert_eq!(g.len(), 721);
    assert!((g[720] - PI).abs() < 1e-15);
}
