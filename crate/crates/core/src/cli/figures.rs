//! Data series for the thirteen figures.

use num_complex::Complex64;

use super::output::Series;
use super::parse::{parse_pairs, parse_reals};
use crate::error::{Error, Result};
use crate::phase::{phase_distribution, theta_grid, Analyzer, Signal, DEFAULT_GRID};
use crate::photstat::{mean_and_mandel, pn_distribution};
use crate::states::{classify, fock_vector, ParameterSet, StateSpec};

pub const F01_VALUES: &str = "0.2,1,5";
pub const F11_VALUES: &str = "2:4,3:3,4:2";
pub const F10_VALUES: &str = "1.5,2,4";
pub const PHASE_F01_VALUES: &str = "0.5,1,3";
pub const DISTRIBUTION_RADIUS: f64 = 3.0;
pub const PHASE_RADIUS: f64 = 0.75;
pub const SWEEP_MAX: f64 = 6.0;
pub const SWEEP_POINTS: usize = 61;

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub r: Option<f64>,
    pub values: Option<String>,
    pub phi: f64,
    pub points: Option<usize>,
    pub r_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Pn,
    Mean,
    Mandel,
    /// Husimi phase distribution of the GHCS.
    QPhase,
    /// GH analyzer applied to a coherent state.
    GhPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    F01,
    F11,
    F10,
}

fn layout(id: u8) -> (Kind, Shape, &'static str) {
    match id {
        1 => (Kind::Pn, Shape::F01, F01_VALUES),
        2 => (Kind::Mean, Shape::F01, F01_VALUES),
        3 => (Kind::Mandel, Shape::F01, F01_VALUES),
        4 => (Kind::Pn, Shape::F11, F11_VALUES),
        5 => (Kind::Mean, Shape::F11, F11_VALUES),
        6 => (Kind::Mandel, Shape::F11, F11_VALUES),
        7 => (Kind::Pn, Shape::F10, F10_VALUES),
        8 => (Kind::QPhase, Shape::F01, PHASE_F01_VALUES),
        9 => (Kind::QPhase, Shape::F11, F11_VALUES),
        10 => (Kind::QPhase, Shape::F10, F10_VALUES),
        11 => (Kind::GhPhase, Shape::F01, PHASE_F01_VALUES),
        12 => (Kind::GhPhase, Shape::F11, F11_VALUES),
        _ => (Kind::GhPhase, Shape::F10, F10_VALUES),
    }
}

fn param_sets(shape: Shape, values: &str) -> Result<Vec<ParameterSet>> {
    let bad = |e: String| Error::Invalid(e);
    let sets: Vec<(Vec<f64>, Vec<f64>)> = match shape {
        Shape::F01 => parse_reals(values).map_err(bad)?.into_iter().map(|b| (vec![], vec![b])).collect(),
        Shape::F11 => parse_pairs(values).map_err(bad)?.into_iter().map(|(a, b)| (vec![a], vec![b])).collect(),
        Shape::F10 => parse_reals(values).map_err(bad)?.into_iter().map(|a| (vec![a], vec![])).collect(),
    };
    if sets.is_empty() {
        return Err(Error::Invalid("no parameter values given".into()));
    }
    sets.iter().map(|(a, b)| ParameterSet::real(a, b).map_err(Error::InvalidParameters)).collect()
}

pub struct Figure {
    pub x_label: &'static str,
    pub meta: Vec<(String, String)>,
    pub series: Vec<Series>,
}

fn series_for(params: &ParameterSet, label: String, tol: f64) -> Series {
    Series::new(label, params.label(), classify(params).kind.name(), tol)
}

pub fn build(id: u8, ov: &Overrides, tol: f64) -> Result<Figure> {
    if !(1..=13).contains(&id) {
        return Err(Error::Invalid(format!("figure {id} does not exist")));
    }
    let (kind, shape, default_values) = layout(id);
    let values = ov.values.clone().unwrap_or_else(|| default_values.to_string());
    let mut sets = param_sets(shape, &values)?;
    let mut meta = vec![("figure".to_string(), id.to_string()), ("values".to_string(), values.clone())];
    let cs = ParameterSet::coherent();
    let mut out = Vec::new();
    let x_label;
    match kind {
        Kind::Pn => {
            let r = ov.r.unwrap_or(if shape == Shape::F10 { PHASE_RADIUS } else { DISTRIBUTION_RADIUS });
            meta.push(("r".into(), r.to_string()));
            meta.push(("phi".into(), ov.phi.to_string()));
            x_label = "n";
            let z = Complex64::from_polar(r, ov.phi);
            sets.push(cs);
            for p in &sets {
                let d = pn_distribution(&StateSpec::new(p.clone(), z)?)?;
                out.push(series_for(p, p.label(), tol).with_points(&d.grid, &d.values));
            }
        }
        Kind::Mean | Kind::Mandel => {
            let r_max = ov.r_max.unwrap_or(SWEEP_MAX);
            let n = ov.points.unwrap_or(SWEEP_POINTS).max(2);
            meta.push(("r_max".into(), r_max.to_string()));
            meta.push(("points".into(), n.to_string()));
            x_label = "r";
            let rs: Vec<f64> = (0..n).map(|k| r_max * k as f64 / (n - 1) as f64).collect();
            sets.push(cs);
            for p in &sets {
                let mut ys = Vec::with_capacity(n);
                for &r in &rs {
                    let (mean, q) = mean_and_mandel(p, r * r)?;
                    ys.push(if kind == Kind::Mean { mean } else { q });
                }
                out.push(series_for(p, p.label(), tol).with_points(&rs, &ys));
            }
        }
        Kind::QPhase | Kind::GhPhase => {
            let r = ov.r.unwrap_or(PHASE_RADIUS);
            let n = ov.points.unwrap_or(DEFAULT_GRID).max(2);
            meta.push(("r".into(), r.to_string()));
            meta.push(("phi".into(), ov.phi.to_string()));
            meta.push(("points".into(), n.to_string()));
            x_label = "theta";
            let grid = theta_grid(n, -std::f64::consts::PI);
            let z = Complex64::from_polar(r, ov.phi);
            let signal_of = |p: &ParameterSet| -> Result<Signal> {
                Ok(Signal::Vector(fock_vector(&StateSpec::new(p.clone(), z)?, tol)?))
            };
            let cs_signal = signal_of(&cs)?;
            for p in &sets {
                let (signal, analyzer) = match kind {
                    Kind::QPhase => (signal_of(p)?, Analyzer::Q),
                    _ => (cs_signal.clone(), Analyzer::Params(p.clone())),
                };
                let d = phase_distribution(&signal, &analyzer, &grid)?;
                out.push(series_for(p, p.label(), tol).with_points(&d.theta, &d.values));
            }
            let d = phase_distribution(&cs_signal, &Analyzer::Q, &grid)?;
            out.push(series_for(&cs, cs.label(), tol).with_points(&d.theta, &d.values));
        }
    }
    if let Some(last) = out.last_mut() {
        last.label = format!("CS {}", last.label);
    }
    Ok(Figure { x_label, meta, series: out })
}
