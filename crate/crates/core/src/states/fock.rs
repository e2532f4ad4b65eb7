//! ρ(n), the normalization function and truncated Fock representations.

use num_complex::Complex64;

use super::params::{classify_point, DomainClass, DomainKind, ParameterSet};
use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, pfq_complex, Neumaier, SeriesOptions};

pub const DEFAULT_FOCK_TOL: f64 = 1e-12;
pub const DEFAULT_FOCK_CAP: usize = 4096;

/// Floor on reported tail bounds: rounding in the normalized coefficients.
const ROUNDING_FLOOR: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub params: ParameterSet,
    pub z: Complex64,
    pub domain: DomainClass,
}

impl StateSpec {
    pub fn new(params: ParameterSet, z: Complex64) -> Result<Self> {
        match classify_point(&params, z) {
            Some(domain) => Ok(StateSpec { params, z, domain }),
            None => Err(Error::OutsideDomain(format!("z = {z} for {params}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub coeffs: Vec<Complex64>,
    pub tail_bound: f64,
    pub normalized: bool,
}

impl FockVector {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![Complex64::new(0.0, 0.0)] } else { coeffs };
        FockVector { coeffs, tail_bound: 0.0, normalized: false }
    }

    /// Number state |n⟩.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        FockVector { coeffs, tail_bound: 0.0, normalized: true }
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut s = Neumaier::new();
        for c in &self.coeffs {
            s.add(c.norm_sqr());
        }
        s.value()
    }

    /// ⟨self|other⟩ over the common support.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        let (mut re, mut im) = (Neumaier::new(), Neumaier::new());
        for (u, v) in self.coeffs.iter().zip(other.coeffs.iter()) {
            let t = u.conj() * v;
            re.add(t.re);
            im.add(t.im);
        }
        Complex64::new(re.value(), im.value())
    }
}

/// Running product kept as mantissa × 2^exp.
#[derive(Debug, Clone, Copy)]
struct ScaledProduct {
    mant: f64,
    exp: i64,
}

impl ScaledProduct {
    fn one() -> Self {
        ScaledProduct { mant: 1.0, exp: 0 }
    }

    fn mul(&mut self, v: f64) {
        self.mant *= v;
        let e = self.mant.abs().log2().floor();
        if e.abs() > 512.0 {
            self.mant *= (-e).exp2();
            self.exp += e as i64;
        }
    }

    fn ln(&self) -> f64 {
        self.mant.ln() + self.exp as f64 * std::f64::consts::LN_2
    }

    fn value(&self) -> Option<f64> {
        let e = self.exp as f64;
        let v = self.mant * e.exp2();
        (v.is_finite() && (v != 0.0 || self.mant == 0.0)).then_some(v)
    }
}

fn checked_ratio(params: &ParameterSet, k: usize) -> Result<f64> {
    let r = params.ratio(k as f64);
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Invalid(format!("non-positive ratio {r} at n = {k} for {params}")));
    }
    Ok(r)
}

/// ln ρ(k) for k = 0..=n.
pub fn ln_rho_table(params: &ParameterSet, n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut prod = ScaledProduct::one();
    out.push(0.0);
    for k in 0..n {
        prod.mul(checked_ratio(params, k)?);
        out.push(prod.ln());
    }
    Ok(out)
}

/// ρ(n) = n! Π(b)_n / Π(a)_n through the ratio recurrence.
pub fn rho(params: &ParameterSet, n: usize) -> Result<f64> {
    let mut prod = ScaledProduct::one();
    for k in 0..n {
        prod.mul(checked_ratio(params, k)?);
    }
    prod.value().ok_or_else(|| Error::Overflow(format!("rho({n}) for {params}")))
}

/// ln ρ at a real (possibly half-integer) argument through gamma functions.
pub fn ln_rho_real(params: &ParameterSet, x: f64) -> Result<f64> {
    let mut acc = ln_gamma(x + 1.0)?;
    for &bj in params.b() {
        acc += ln_gamma(bj + x)? - ln_gamma(bj)?;
    }
    for &ai in params.a() {
        acc -= ln_gamma(ai + x)? - ln_gamma(ai)?;
    }
    Ok(acc.re)
}

fn unit_gauss(a1: Complex64, a2: Complex64, b: Complex64) -> Result<f64> {
    let m = b - a1 - a2;
    let v = (ln_gamma(b)? + ln_gamma(m)? - ln_gamma(b - a1)? - ln_gamma(b - a2)?).exp();
    Ok(v.re)
}

/// N(x) = pFq(a; b; x); at x = 1 the circle constant.
pub fn normalization(params: &ParameterSet, x: f64) -> Result<f64> {
    normalization_with(params, x, &SeriesOptions::default())
}

pub fn normalization_with(params: &ParameterSet, x: f64, opts: &SeriesOptions) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::OutsideDomain(format!("normalization needs x >= 0, got {x}")));
    }
    let red = params.reduced();
    if red.p() == red.q() + 1 && (x - 1.0).abs() <= super::params::CIRCLE_TOL {
        if red.eta() >= 0.0 {
            return Err(Error::Divergence(format!("{params} has no normalization on the unit circle (eta = {})", red.eta())));
        }
        if red.p() == 2 {
            return unit_gauss(red.a()[0], red.a()[1], red.b()[0]);
        }
        let r = pfq_complex(red.a(), red.b(), Complex64::new(1.0, 0.0), opts)?;
        return Ok(r.value.re);
    }
    let r = pfq_complex(params.a(), params.b(), Complex64::new(x, 0.0), opts)?;
    Ok(r.value.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockOptions {
    pub tol: f64,
    pub cap: usize,
}

impl Default for FockOptions {
    fn default() -> Self {
        FockOptions { tol: DEFAULT_FOCK_TOL, cap: DEFAULT_FOCK_CAP }
    }
}

/// sup_{k ≥ k0} of |c_{k+1}|²/|c_k|², bounded factor by factor.
fn ratio_bound(red: &ParameterSet, x: f64, k0: f64) -> f64 {
    let mut nums: Vec<f64> = red.a().iter().map(|v| v.norm()).collect();
    let mut dens: Vec<f64> = red.b().iter().map(|v| v.re).collect();
    dens.push(1.0);
    nums.sort_by(|u, v| v.total_cmp(u));
    dens.sort_by(f64::total_cmp);
    let mut bound = x;
    for (i, d) in dens.iter().enumerate() {
        let den = k0 + d;
        if i < nums.len() {
            bound *= ((k0 + nums[i]) / den).max(1.0);
        } else {
            bound /= den;
        }
    }
    bound
}

fn first_safe_index(red: &ParameterSet) -> f64 {
    red.a()
        .iter()
        .chain(red.b().iter())
        .map(|v| (-v.re).max(0.0).ceil() + 1.0)
        .fold(0.0, f64::max)
}

pub fn fock_vector(spec: &StateSpec, tol: f64) -> Result<FockVector> {
    fock_vector_with(spec, &FockOptions { tol, ..Default::default() })
}

pub fn fock_vector_with(spec: &StateSpec, opts: &FockOptions) -> Result<FockVector> {
    let z = spec.z;
    let zero = Complex64::new(0.0, 0.0);
    if z == zero {
        return Ok(FockVector { coeffs: vec![Complex64::new(1.0, 0.0)], tail_bound: 0.0, normalized: true });
    }
    match spec.domain.kind {
        DomainKind::Plane | DomainKind::UnitDisk => plane_or_disk(spec, opts),
        DomainKind::CircleNormalized => circle_normalized(spec, opts),
        DomainKind::CircleUnnormalizable => circle_unnormalized(spec, opts),
        DomainKind::Divergent => Err(Error::Divergence(format!("{} admits only z = 0", spec.params))),
    }
}

fn phase_power(z: Complex64, n: usize) -> Complex64 {
    let arg = z.arg() * n as f64;
    Complex64::new(arg.cos(), arg.sin())
}

fn plane_or_disk(spec: &StateSpec, opts: &FockOptions) -> Result<FockVector> {
    let params = &spec.params;
    let red = params.reduced();
    let x = spec.z.norm_sqr();
    let lnx = x.ln();
    let safe = first_safe_index(&red);
    let mut ln_terms: Vec<f64> = Vec::new();
    let mut prod = ScaledProduct::one();
    let mut ln_t = 0.0; // ln(x^n / ρ(n))
    let mut lmax = f64::NEG_INFINITY;
    let mut n = 0usize;
    loop {
        ln_terms.push(ln_t);
        lmax = lmax.max(ln_t);
        prod.mul(checked_ratio(params, n)?);
        let ln_next = (n as f64 + 1.0) * lnx - prod.ln();
        // both bounds are relative to the largest term, hence to the sum
        let mut rel_tail = f64::INFINITY;
        if n as f64 >= safe {
            let rb = ratio_bound(&red, x, n as f64 + 1.0);
            if rb < 1.0 {
                rel_tail = (ln_next - lmax).exp() / (1.0 - rb);
                if rel_tail <= opts.tol && (ln_t - lmax).exp() <= opts.tol {
                    return finish(spec.z, &ln_terms, rel_tail);
                }
            }
        }
        if n + 1 > opts.cap {
            return Err(Error::TailBound { bound: rel_tail, tol: opts.tol, cap: opts.cap });
        }
        ln_t = ln_next;
        n += 1;
    }
}

/// Normalize exp(ln_terms) by their compensated sum.
fn finish(z: Complex64, ln_terms: &[f64], rel_tail: f64) -> Result<FockVector> {
    let lmax = ln_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = Neumaier::new();
    for &l in ln_terms {
        s.add((l - lmax).exp());
    }
    let sum = s.value();
    let coeffs: Vec<Complex64> = ln_terms
        .iter()
        .enumerate()
        .map(|(k, &l)| phase_power(z, k) * (0.5 * (l - lmax)).exp() / sum.sqrt())
        .collect();
    Ok(FockVector { coeffs, tail_bound: rel_tail.max(ROUNDING_FLOOR), normalized: true })
}

fn circle_terms(params: &ParameterSet, cap: usize, mut stop: impl FnMut(usize, f64, &[f64]) -> bool) -> Result<Vec<f64>> {
    let mut ln_terms = vec![0.0];
    let mut prod = ScaledProduct::one();
    for n in 0..cap {
        prod.mul(checked_ratio(params, n)?);
        ln_terms.push(-prod.ln());
        if stop(n + 1, ln_terms[n + 1], &ln_terms) {
            return Ok(ln_terms);
        }
    }
    Err(Error::TailBound { bound: f64::NAN, tol: 0.0, cap })
}

fn circle_normalized(spec: &StateSpec, opts: &FockOptions) -> Result<FockVector> {
    let params = &spec.params;
    let red = params.reduced();
    let eta = red.eta();
    if red.p() == 2 {
        // exact constant: tail = 1 - S_N / N(1)
        let total = normalization(params, 1.0)?;
        let mut s = Neumaier::new();
        s.add(1.0);
        let mut last_tail = f64::INFINITY;
        let res = circle_terms(params, opts.cap, |_, l, _| {
            let t = l.exp();
            s.add(t);
            let tail = (1.0 - s.value() / total).max(0.0) + 8.0 * f64::EPSILON;
            last_tail = tail;
            tail <= opts.tol && t / total <= opts.tol
        });
        let ln_terms = res.map_err(|_| Error::TailBound { bound: last_tail, tol: opts.tol, cap: opts.cap })?;
        let lnz: Vec<f64> = ln_terms.iter().map(|l| l - total.ln()).collect();
        let coeffs: Vec<Complex64> =
            lnz.iter().enumerate().map(|(k, &l)| phase_power(spec.z, k) * (0.5 * l).exp()).collect();
        return Ok(FockVector { coeffs, tail_bound: last_tail, normalized: true });
    }
    // terms behave like C n^{η-1}; the remainder is about t_N N / |η|
    let mut est = f64::INFINITY;
    let mut sum = 1.0;
    let res = circle_terms(params, opts.cap, |n, l, _| {
        let t = l.exp();
        sum += t;
        est = 2.0 * t * n as f64 / (-eta);
        est / sum <= opts.tol && t / sum <= opts.tol
    });
    let ln_terms = res.map_err(|_| Error::TailBound { bound: est, tol: opts.tol, cap: opts.cap })?;
    let total = sum + est;
    let coeffs: Vec<Complex64> = ln_terms
        .iter()
        .enumerate()
        .map(|(k, &l)| phase_power(spec.z, k) * (0.5 * (l - total.ln())).exp())
        .collect();
    Ok(FockVector { coeffs, tail_bound: (est / total).max(ROUNDING_FLOOR), normalized: true })
}

fn circle_unnormalized(spec: &StateSpec, opts: &FockOptions) -> Result<FockVector> {
    let pre = -0.5 * (2.0 * std::f64::consts::PI).ln();
    let ln_terms = ln_rho_table(&spec.params, opts.cap)?;
    let coeffs = ln_terms
        .iter()
        .enumerate()
        .map(|(k, &l)| phase_power(spec.z, k) * (pre - 0.5 * l).exp())
        .collect();
    Ok(FockVector { coeffs, tail_bound: f64::INFINITY, normalized: false })
}

/// ⟨z|z'⟩ = N(z* z') / sqrt(N(|z|²) N(|z'|²)).
pub fn overlap(params: &ParameterSet, z: Complex64, zp: Complex64) -> Result<Complex64> {
    for w in [z, zp] {
        match classify_point(params, w) {
            Some(d) if d.kind != DomainKind::CircleUnnormalizable => {}
            _ => return Err(Error::OutsideDomain(format!("z = {w} for {params}"))),
        }
    }
    let opts = SeriesOptions::default();
    let cross = pfq_complex(params.a(), params.b(), z.conj() * zp, &opts);
    let cross = match cross {
        Ok(r) => r.value,
        Err(e) => {
            if (z.conj() * zp - 1.0).norm() <= super::params::CIRCLE_TOL {
                Complex64::new(normalization(params, 1.0)?, 0.0)
            } else {
                return Err(e);
            }
        }
    };
    let n1 = normalization(params, z.norm_sqr())?;
    let n2 = normalization(params, zp.norm_sqr())?;
    Ok(cross / (n1 * n2).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&ParameterSet::coherent(), 3).unwrap(), 6.0);
        let p = ParameterSet::real(&[2.0], &[]).unwrap();
        assert_eq!(rho(&p, 0).unwrap(), 1.0);
        assert!(rel(rho(&p, 2).unwrap(), 1.0 / 3.0) < 1e-15);
    }

    #[test]
    fn rho_overflow_is_reported() {
        assert!(matches!(rho(&ParameterSet::coherent(), 200), Err(Error::Overflow(_))));
        let t = ln_rho_table(&ParameterSet::coherent(), 200).unwrap();
        assert!(rel(t[200], crate::specfun::ln_gamma_abs(201.0).unwrap()) < 1e-13);
    }

    #[test]
    fn half_integer_rho_agrees_with_recurrence() {
        let p = ParameterSet::new(&[c(1.5, 0.7), c(1.5, -0.7)], &[c(2.2, 0.0)]).unwrap();
        for n in 0..30 {
            let direct = rho(&p, n).unwrap().ln();
            assert!((ln_rho_real(&p, n as f64).unwrap() - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn normalization_examples() {
        let cs = ParameterSet::coherent();
        assert!(rel(normalization(&cs, 2.5).unwrap(), 2.5f64.exp()) < 1e-14);
        let d = ParameterSet::real(&[2.0], &[]).unwrap();
        assert!(rel(normalization(&d, 0.5).unwrap(), 4.0) < 1e-11);
        let circ = ParameterSet::real(&[0.3, 0.4], &[1.5]).unwrap();
        let want = gamma(1.5).unwrap() * gamma(0.8).unwrap() / (gamma(1.2).unwrap() * gamma(1.1).unwrap());
        assert!(rel(normalization(&circ, 1.0).unwrap(), want) < 1e-13);
        assert!(normalization(&d, 1.0).is_err());
    }

    #[test]
    fn vacuum_and_phase_state() {
        let v = fock_vector(&StateSpec::new(ParameterSet::coherent(), c(0.0, 0.0)).unwrap(), 1e-12).unwrap();
        assert_eq!(v.coeffs, vec![c(1.0, 0.0)]);
        let eps = 0.3;
        let p = ParameterSet::real(&[1.0], &[]).unwrap();
        let v = fock_vector(&StateSpec::new(p, c(eps, 0.0)).unwrap(), 1e-14).unwrap();
        for (n, cn) in v.coeffs.iter().enumerate() {
            let want = (1.0 - eps * eps).sqrt() * eps.powi(n as i32);
            assert!((cn.re - want).abs() < 1e-14 * want.max(1e-300) + 1e-16, "n={n}");
        }
    }

    #[test]
    fn normalized_sum_within_tail() {
        let p = ParameterSet::real(&[], &[1.0]).unwrap();
        let v = fock_vector(&StateSpec::new(p, c(0.0, 3.0)).unwrap(), 1e-12).unwrap();
        assert!(v.tail_bound <= 1e-12);
        assert!((v.norm_sqr() - 1.0).abs() <= 2.0 * v.tail_bound);
    }

    #[test]
    fn coefficients_match_closed_formula() {
        let p = ParameterSet::real(&[2.0], &[3.0]).unwrap();
        let z = c(0.8, 0.3);
        let v = fock_vector(&StateSpec::new(p.clone(), z).unwrap(), 1e-14).unwrap();
        let nz = normalization(&p, z.norm_sqr()).unwrap();
        for n in 0..10 {
            let want = z.powi(n as i32) / (rho(&p, n).unwrap() * nz).sqrt();
            assert!((v.coeffs[n] - want).norm() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn circle_state_normalizes() {
        let p = ParameterSet::real(&[0.3, 0.4], &[5.7]).unwrap();
        let z = Complex64::from_polar(1.0, 0.7);
        let v = fock_vector(&StateSpec::new(p, z).unwrap(), 1e-12).unwrap();
        assert!((v.norm_sqr() - 1.0).abs() <= 2.0 * v.tail_bound);
        let q = ParameterSet::real(&[1.5], &[]).unwrap();
        let u = fock_vector(&StateSpec::new(q, c(1.0, 0.0)).unwrap(), 1e-12).unwrap();
        assert!(!u.normalized);
        assert!(rel(u.coeffs[0].re, 1.0 / (2.0 * std::f64::consts::PI).sqrt()) < 1e-15);
    }

    #[test]
    fn overlap_examples() {
        let cs = ParameterSet::coherent();
        let (a, b) = (c(0.4, -1.1), c(-0.9, 0.3));
        let o = overlap(&cs, a, b).unwrap();
        let want = (a.conj() * b - 0.5 * a.norm_sqr() - 0.5 * b.norm_sqr()).exp();
        assert!((o - want).norm() < 1e-13);
        let p = ParameterSet::real(&[1.5, 2.5], &[0.7]).unwrap();
        let z = c(0.3, 0.5);
        assert!((overlap(&p, z, z).unwrap() - 1.0).norm() < 1e-13);
        assert!(overlap(&p, z, c(2.0, 0.0)).is_err());
    }

    #[test]
    fn outside_domain_rejected() {
        let p = ParameterSet::real(&[2.0], &[]).unwrap();
        assert!(StateSpec::new(p, c(1.2, 0.0)).is_err());
    }
}
