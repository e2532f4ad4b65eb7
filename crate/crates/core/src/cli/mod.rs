//! `ghcs` command-line front end.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 invalid parameters or point
//! outside the domain, 64 usage error, 65 numeric failure.

pub mod figures;
pub mod output;
pub mod parse;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::family::{Family, FamilyTag};
use crate::phase::{phase_distribution, radial_phase_check, theta_grid, Analyzer, Signal, DEFAULT_GRID};
use crate::photstat::{closed_form_stats, mean_and_mandel, pn_distribution};
use crate::states::{classify, fock_vector, validate, DomainKind, ParameterSet, StateSpec};
use crate::weights::{check_weight_params, moment_check, weight_family, weight_tilde_family, DEFAULT_QUAD_TOL};
use output::{emit, Document, Series, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NUMERIC: i32 = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalyzerKind {
    Q,
    Pb,
    Gh,
}

fn list_arg(s: &str) -> Result<String, String> {
    parse::parse_list(s).map(|_| s.to_string())
}

fn complex_arg(s: &str) -> Result<String, String> {
    parse::parse_complex(s).map(|_| s.to_string())
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

fn family_arg(s: &str) -> Result<FamilyTag, String> {
    s.parse::<FamilyTag>().map_err(|e| e.to_string())
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "ghcs", version, about = "Coherent states built on pFq series: states, statistics, weights, phase distributions")]
pub struct Cli {
    /// Series and Fock-cutoff tolerance.
    #[arg(long, global = true, default_value = "1e-12", value_parser = positive)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

/// Numerator and denominator lists, e.g. `--a 1+2i,1-2i --b 0.5`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "", value_parser = list_arg)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true, default_value = "", value_parser = list_arg)]
    pub b: String,
}

impl ParamArgs {
    fn lists(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        // both were checked by the value parser
        (parse::parse_list(&self.a).unwrap_or_default(), parse::parse_list(&self.b).unwrap_or_default())
    }

    fn params(&self) -> Result<ParameterSet, Error> {
        let (a, b) = self.lists();
        validate(&a, &b).map_err(Error::InvalidParameters)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PointArg {
    /// Complex label of the state, `re+imi`.
    #[arg(long, allow_hyphen_values = true, value_parser = complex_arg)]
    pub z: String,
}

impl PointArg {
    fn value(&self) -> Complex64 {
        parse::parse_complex(&self.z).unwrap_or_default()
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Check the parameter rules and report the convergence domain (JSON).
    Validate {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
    },
    /// Fock coefficients of |p;q;z⟩.
    State {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        #[serde(flatten)]
        z: PointArg,
    },
    /// Photon number distribution.
    Pn {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        #[serde(flatten)]
        z: PointArg,
    },
    /// Mean photon number and Mandel Q as functions of |z|.
    Stats {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = positive)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 61)]
        points: usize,
    },
    /// Weight functions w and w/N on a grid in x = |z|².
    Weight {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = family_arg)]
        family: Option<FamilyTag>,
        #[arg(long, value_parser = positive)]
        x_max: Option<f64>,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Compare weight moments with ρ(n) (JSON, exit 1 above the threshold).
    MomentCheck {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = family_arg)]
        family: Option<FamilyTag>,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-6, value_parser = positive)]
        threshold: f64,
    },
    /// Phase distribution of |p;q;z⟩ under a Q, PB or GH analyzer.
    Phase {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        #[serde(flatten)]
        z: PointArg,
        #[arg(long, value_enum, default_value_t = AnalyzerKind::Q)]
        analyzer: AnalyzerKind,
        #[arg(long, allow_hyphen_values = true, default_value = "", value_parser = list_arg)]
        an_a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "", value_parser = list_arg)]
        an_b: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        points: usize,
    },
    /// GH phase distribution: analyzer from --a/--b, signal from --sig-a/--sig-b.
    GhPhase {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "", value_parser = list_arg)]
        sig_a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "", value_parser = list_arg)]
        sig_b: String,
        #[command(flatten)]
        #[serde(flatten)]
        z: PointArg,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        points: usize,
        /// Also integrate the GH Husimi function radially and report the
        /// largest deviation from the series result.
        #[arg(long)]
        radial: bool,
    },
    /// Data series of a figure, 1 to 13.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=13))]
        id: u8,
        /// |z| of the figure states.
        #[arg(long, value_parser = positive)]
        r: Option<f64>,
        /// Parameter values: `b1,b2,..`, `a1,a2,..` or `a:b,a:b,..`.
        #[arg(long)]
        values: Option<String>,
        /// Phase of z.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        phi: f64,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_parser = positive)]
        r_max: Option<f64>,
    },
    /// Run self-check suites (JSON, exit 1 on any failed check).
    Verify {
        #[arg(value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_NUMERIC,
            Failure::Lib(e) => exit_code(e),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Usage(m) => f.write_str(m),
            Failure::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameters(_)
        | Error::OutsideDomain(_)
        | Error::Divergence(_)
        | Error::CircleRefusal(_)
        | Error::Unsupported(_)
        | Error::Invalid(_) => EXIT_INVALID,
        _ => EXIT_NUMERIC,
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

fn config(cli: &Cli) -> Value {
    serde_json::to_value(cli).expect("config serializes")
}

fn json_report(cli: &Cli, body: Value) -> String {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "config": config(cli) });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn write_document(cli: &Cli, x_label: &str, meta: Vec<(String, String)>, series: Vec<Series>) -> Result<(), Failure> {
    let doc = Document { config: config(cli), meta, x_label: x_label.into(), series };
    let text = match cli.format {
        Format::Csv => doc.to_csv(),
        Format::Json => doc.to_json(),
    };
    emit(&text, cli.output.as_deref())?;
    Ok(())
}

fn series(params: &ParameterSet, label: &str, tol: f64) -> Series {
    Series::new(label, params.label(), classify(params).kind.name(), tol)
}

fn resolve_family(params: &ParameterSet, tag: Option<FamilyTag>) -> Result<Family, Error> {
    let fam = match tag {
        Some(t) => Family::new(t, params)?,
        None => Family::detect(params)?,
    };
    check_weight_params(&fam)?;
    Ok(fam)
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let tol = cli.tol;
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Validate { params } => {
            let (a, b) = params.lists();
            let (body, code) = match validate(&a, &b) {
                Ok(p) => {
                    let d = classify(&p);
                    (json!({"valid": true, "params": p.label(), "domain": d.kind.name(), "eta": d.eta}), EXIT_OK)
                }
                Err(v) => (
                    json!({"valid": false, "violation": v, "reason": v.to_string()}),
                    EXIT_INVALID,
                ),
            };
            emit(&json_report(cli, body), out)?;
            Ok(code)
        }
        Command::State { params, z } => {
            let p = params.params()?;
            let v = fock_vector(&StateSpec::new(p.clone(), z.value())?, tol)?;
            let n: Vec<f64> = (0..v.coeffs.len()).map(|k| k as f64).collect();
            let re: Vec<f64> = v.coeffs.iter().map(|c| c.re).collect();
            let im: Vec<f64> = v.coeffs.iter().map(|c| c.im).collect();
            let abs2: Vec<f64> = v.coeffs.iter().map(|c| c.norm_sqr()).collect();
            let meta = vec![
                ("cutoff".into(), v.cutoff().to_string()),
                ("tail_bound".into(), format!("{:e}", v.tail_bound)),
                ("normalized".into(), v.normalized.to_string()),
            ];
            let s = vec![
                series(&p, "re", tol).with_points(&n, &re),
                series(&p, "im", tol).with_points(&n, &im),
                series(&p, "abs2", tol).with_points(&n, &abs2),
            ];
            write_document(cli, "n", meta, s)?;
            Ok(EXIT_OK)
        }
        Command::Pn { params, z } => {
            let p = params.params()?;
            let d = pn_distribution(&StateSpec::new(p.clone(), z.value())?)?;
            let meta = vec![("residual".into(), format!("{:e}", d.residual))];
            write_document(cli, "n", meta, vec![series(&p, "P", tol).with_points(&d.grid, &d.values)])?;
            Ok(EXIT_OK)
        }
        Command::Stats { params, r_max, points } => {
            let p = params.params()?;
            let kind = classify(&p).kind;
            let r_max = match (r_max, kind) {
                (Some(r), _) => *r,
                (None, DomainKind::Plane) => figures::SWEEP_MAX,
                (None, DomainKind::Divergent) => {
                    return Err(Error::Divergence(format!("{p} converges only at z = 0")).into());
                }
                (None, _) => 0.95,
            };
            let n = (*points).max(2);
            let rs: Vec<f64> = (0..n).map(|k| r_max * k as f64 / (n - 1) as f64).collect();
            let fam = Family::detect(&p).ok();
            let (mut mean, mut q, mut mean_cf, mut q_cf) = (vec![], vec![], vec![], vec![]);
            for &r in &rs {
                let (m, qq) = mean_and_mandel(&p, r * r)?;
                mean.push(m);
                q.push(qq);
                if let Some(f) = fam {
                    let s = closed_form_stats(f.tag(), &p, r * r)?;
                    mean_cf.push(s.mean);
                    q_cf.push(s.mandel_q);
                }
            }
            let mut s = vec![
                series(&p, "mean", tol).with_points(&rs, &mean),
                series(&p, "mandel_q", tol).with_points(&rs, &q),
            ];
            if fam.is_some() {
                s.push(series(&p, "mean_closed_form", tol).with_points(&rs, &mean_cf));
                s.push(series(&p, "mandel_q_closed_form", tol).with_points(&rs, &q_cf));
            }
            let meta = vec![("r_max".into(), r_max.to_string())];
            write_document(cli, "r", meta, s)?;
            Ok(EXIT_OK)
        }
        Command::Weight { params, family, x_max, points } => {
            let p = params.params()?;
            let fam = resolve_family(&p, *family)?;
            let big_r = fam.x_max();
            let x_max = x_max.unwrap_or(if big_r.is_finite() { big_r } else { 10.0 });
            let n = (*points).max(2);
            let (mut xs, mut w, mut wt) = (vec![], vec![], vec![]);
            for k in 0..n {
                let x = x_max * k as f64 / (n - 1) as f64;
                if x >= big_r {
                    continue;
                }
                let (a, b) = (weight_family(&fam, x)?, weight_tilde_family(&fam, x)?);
                if a.is_finite() && b.is_finite() {
                    xs.push(x);
                    w.push(a);
                    wt.push(b);
                }
            }
            let meta = vec![("family".into(), fam.tag().to_string()), ("x_max".into(), x_max.to_string())];
            let s = vec![series(&p, "w", tol).with_points(&xs, &w), series(&p, "w_tilde", tol).with_points(&xs, &wt)];
            write_document(cli, "x", meta, s)?;
            Ok(EXIT_OK)
        }
        Command::MomentCheck { params, family, n_max, threshold } => {
            let p = params.params()?;
            let fam = resolve_family(&p, *family)?;
            let report = moment_check(fam.tag(), &p, *n_max, DEFAULT_QUAD_TOL)?;
            let pass = report.max_rel_error <= *threshold;
            let body = json!({"params": p.label(), "threshold": threshold, "pass": pass, "report": report});
            emit(&json_report(cli, body), out)?;
            Ok(if pass { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Phase { params, z, analyzer, an_a, an_b, points } => {
            let p = params.params()?;
            let an = match analyzer {
                AnalyzerKind::Q => Analyzer::Q,
                AnalyzerKind::Pb => Analyzer::PB,
                AnalyzerKind::Gh => {
                    let a = parse::parse_list(an_a).unwrap_or_default();
                    let b = parse::parse_list(an_b).unwrap_or_default();
                    Analyzer::Params(validate(&a, &b).map_err(Error::InvalidParameters)?)
                }
            };
            let v = fock_vector(&StateSpec::new(p.clone(), z.value())?, tol)?;
            let grid = theta_grid((*points).max(2), -std::f64::consts::PI);
            let d = phase_distribution(&Signal::Vector(v), &an, &grid)?;
            let meta = vec![("analyzer".into(), an.label()), ("residual".into(), format!("{:e}", d.residual))];
            write_document(cli, "theta", meta, vec![series(&p, "P", tol).with_points(&d.theta, &d.values)])?;
            Ok(EXIT_OK)
        }
        Command::GhPhase { params, sig_a, sig_b, z, points, radial } => {
            let an = params.params()?;
            let sa = parse::parse_list(sig_a).unwrap_or_default();
            let sb = parse::parse_list(sig_b).unwrap_or_default();
            let sig = validate(&sa, &sb).map_err(Error::InvalidParameters)?;
            let v = fock_vector(&StateSpec::new(sig.clone(), z.value())?, tol)?;
            let grid = theta_grid((*points).max(2), -std::f64::consts::PI);
            let d = phase_distribution(&Signal::Vector(v.clone()), &Analyzer::Params(an.clone()), &grid)?;
            let mut meta = vec![
                ("analyzer".into(), an.label()),
                ("signal".into(), sig.label()),
                ("residual".into(), format!("{:e}", d.residual)),
            ];
            if *radial {
                let fam = resolve_family(&an, None)?;
                meta.push(("radial_max_deviation".into(), format!("{:e}", radial_phase_check(&v, &fam, &grid)?)));
            }
            write_document(cli, "theta", meta, vec![series(&sig, "P", tol).with_points(&d.theta, &d.values)])?;
            Ok(EXIT_OK)
        }
        Command::Figure { id, r, values, phi, points, r_max } => {
            let ov = figures::Overrides { r: *r, values: values.clone(), phi: *phi, points: *points, r_max: *r_max };
            let fig = figures::build(*id, &ov, tol).map_err(|e| match e {
                Error::Invalid(m) => Failure::Usage(m),
                other => Failure::Lib(other),
            })?;
            write_document(cli, fig.x_label, fig.meta, fig.series)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let checks = verify::run(*suite)?;
            let pass = checks.iter().all(|c| c.pass);
            let failed = checks.iter().filter(|c| !c.pass).count();
            let body = json!({"pass": pass, "failed": failed, "checks": checks});
            emit(&json_report(cli, body), out)?;
            Ok(if pass { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out");
        let mut v = vec!["ghcs"];
        v.extend_from_slice(args);
        v.extend_from_slice(&["--output", path.to_str().unwrap()]);
        run_from(v)
    }

    #[test]
    fn validate_codes() {
        assert_eq!(code(&["validate", "--a", "2", "--b", "3"]), 0);
        assert_eq!(code(&["validate", "--a", "-2"]), 2);
        assert_eq!(code(&["validate", "--a", "1+2i,1-2i", "--b", "0.5"]), 0);
        assert_eq!(code(&["validate", "--a", "zz"]), 64);
    }

    #[test]
    fn usage_and_domain_codes() {
        assert_eq!(code(&["figure", "99"]), 64);
        assert_eq!(code(&["frobnicate"]), 64);
        assert_eq!(code(&["pn", "--a", "2", "--z", "1.5"]), 2);
        assert_eq!(code(&["pn", "--z", "1+i"]), 0);
        assert_eq!(code(&["weight", "--a", "0.5"]), 2);
    }
}
