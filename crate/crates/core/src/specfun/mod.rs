//! Special functions: gamma family, hypergeometric series, Bessel I/K,
//! Kummer and Tricomi confluent functions, Gauss 2F1.

mod bessel;
mod gamma;
mod gauss;
mod hypergeometric;
mod tricomi;

pub use bessel::{bessel_i, bessel_k};
pub use gamma::{digamma, gamma, gamma_sign, ln_gamma, ln_gamma_abs, pochhammer, pochhammer_complex, rgamma};
pub use gauss::gauss_2f1;
pub use hypergeometric::{kummer_m, pfq, pfq_complex, pfq_with};
// compensated summation shared by the series and quadrature code
pub use tricomi::tricomi_u;

/// Hard cap on series terms unless `GHCS_MAX_TERMS` says otherwise.
pub const DEFAULT_MAX_TERMS: usize = 100_000;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub tol: f64,
    pub max_terms: usize,
    /// Neumaier-compensated partial sums.
    pub compensated: bool,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { tol: DEFAULT_TOL, max_terms: max_terms_from_env(), compensated: false }
    }
}

impl SeriesOptions {
    pub fn with_tol(tol: f64) -> Self {
        SeriesOptions { tol, ..Default::default() }
    }
}

pub fn max_terms_from_env() -> usize {
    std::env::var("GHCS_MAX_TERMS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_TERMS)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult<T> {
    pub value: T,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub converged: bool,
}

impl<T> SeriesResult<T> {
    pub(crate) fn map<U>(self, f: impl FnOnce(T) -> U) -> SeriesResult<U> {
        SeriesResult {
            value: f(self.value),
            terms_used: self.terms_used,
            tail_estimate: self.tail_estimate,
            converged: self.converged,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Neumaier { sum: 0.0, comp: 0.0 }
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
