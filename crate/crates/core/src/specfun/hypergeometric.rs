//! Generalized hypergeometric series pFq and Kummer's M.

use num_complex::Complex64;

use super::{Neumaier, SeriesOptions, SeriesResult};
use crate::error::{Error, Result};

fn nonpositive_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.floor()
}

struct ComplexSum {
    plain: Complex64,
    re: Neumaier,
    im: Neumaier,
    compensated: bool,
}

impl ComplexSum {
    fn new(compensated: bool) -> Self {
        ComplexSum { plain: Complex64::new(0.0, 0.0), re: Neumaier::new(), im: Neumaier::new(), compensated }
    }

    fn add(&mut self, v: Complex64) {
        if self.compensated {
            self.re.add(v.re);
            self.im.add(v.im);
        } else {
            self.plain += v;
        }
    }

    fn value(&self) -> Complex64 {
        if self.compensated {
            Complex64::new(self.re.value(), self.im.value())
        } else {
            self.plain
        }
    }
}

fn check_domain(a: &[Complex64], b: &[Complex64], x: Complex64) -> Result<()> {
    let (p, q) = (a.len(), b.len());
    if p < q + 1 {
        return Ok(());
    }
    if p > q + 1 {
        return Err(Error::Divergence(format!("{p}F{q} has zero radius of convergence (x = {x})")));
    }
    let r = x.norm();
    if r > 1.0 + 1e-15 {
        return Err(Error::Divergence(format!("{p}F{q} needs |x| < 1, got |x| = {r}")));
    }
    if (r - 1.0).abs() <= 1e-15 {
        let s: f64 = b.iter().map(|v| v.re).sum::<f64>() - a.iter().map(|v| v.re).sum::<f64>();
        let at_one = (x - 1.0).norm() <= 1e-15;
        if s <= -1.0 || (at_one && s <= 0.0) {
            return Err(Error::Divergence(format!(
                "{p}F{q} on |x| = 1 diverges when Re(Σa - Σb) = {}",
                -s
            )));
        }
    }
    Ok(())
}

/// Σ_n (a)_n / (b)_n x^n / n! for complex parameters and argument.
pub fn pfq_complex(
    a: &[Complex64],
    b: &[Complex64],
    x: Complex64,
    opts: &SeriesOptions,
) -> Result<SeriesResult<Complex64>> {
    if let Some(bad) = b.iter().find(|&&v| nonpositive_integer(v)) {
        return Err(Error::Pole { func: "pfq", at: bad.re });
    }
    let one = Complex64::new(1.0, 0.0);
    if x == Complex64::new(0.0, 0.0) {
        return Ok(SeriesResult { value: one, terms_used: 1, tail_estimate: 0.0, converged: true });
    }
    let terminating = a.iter().any(|&v| nonpositive_integer(v));
    if !terminating {
        check_domain(a, b, x)?;
    }
    let neg_max = a
        .iter()
        .chain(b.iter())
        .map(|v| (-v.re).ceil())
        .fold(0.0f64, f64::max);

    let mut sum = ComplexSum::new(opts.compensated);
    sum.add(one);
    let mut t = one;
    let mut small_run = 0usize;
    let mut last = [0.0f64; 3];
    let mut n = 0usize;
    loop {
        if n + 1 >= opts.max_terms {
            let s = sum.value().norm();
            return Err(Error::NonConvergence { terms: n + 1, tail: t.norm() / s.max(f64::MIN_POSITIVE) });
        }
        let nf = n as f64;
        let mut num = x;
        for &ai in a {
            num *= ai + nf;
        }
        let mut den = Complex64::new(nf + 1.0, 0.0);
        for &bj in b {
            den *= bj + nf;
        }
        let ratio = num / den;
        t *= ratio;
        n += 1;
        if ratio == Complex64::new(0.0, 0.0) {
            // terminating polynomial
            return Ok(SeriesResult { value: sum.value(), terms_used: n, tail_estimate: 0.0, converged: true });
        }
        sum.add(t);
        let s = sum.value();
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::Overflow(format!("pfq partial sum overflowed at term {n}")));
        }
        let at = t.norm();
        last = [last[1], last[2], at];
        let sn = s.norm();
        if at <= opts.tol * sn {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 && nf + 1.0 > neg_max {
            let r = ratio.norm();
            let tail = if r < 1.0 { at / (1.0 - r) } else { last.iter().sum() };
            if tail <= opts.tol * sn.max(1.0) {
                return Ok(SeriesResult { value: s, terms_used: n + 1, tail_estimate: tail, converged: true });
            }
        }
    }
}

/// Real pFq with explicit options.
pub fn pfq_with(a: &[f64], b: &[f64], x: f64, opts: &SeriesOptions) -> Result<SeriesResult<f64>> {
    let ac: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let bc: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(pfq_complex(&ac, &bc, Complex64::new(x, 0.0), opts)?.map(|v| v.re))
}

/// Real pFq with relative tolerance `tol`.
pub fn pfq(a: &[f64], b: &[f64], x: f64, tol: f64) -> Result<SeriesResult<f64>> {
    pfq_with(a, b, x, &SeriesOptions::with_tol(tol))
}

/// Kummer's confluent function M(a; b; x) = 1F1(a; b; x).
pub fn kummer_m(a: f64, b: f64, x: f64) -> Result<f64> {
    let poly = a <= 0.0 && a == a.floor();
    if x < 0.0 && !poly {
        // M(a;b;x) = e^x M(b-a;b;-x) keeps all terms positive
        let r = pfq(&[b - a], &[b], -x, super::DEFAULT_TOL)?;
        return Ok(x.exp() * r.value);
    }
    Ok(pfq(&[a], &[b], x, super::DEFAULT_TOL)?.value)
}
