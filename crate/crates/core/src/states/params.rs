//! Parameter lists, their positivity rules and the convergence domain.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

/// Matched numerator/denominator entries closer than this are cancelled by
/// [`ParameterSet::reduced`].
pub const COALESCE_TOL: f64 = 1e-12;

/// Tolerance on |z| = 1 for circle states.
pub const CIRCLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "a",
            Side::B => "b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    NonFinite,
    NonPositiveInteger,
    /// complex entry without its conjugate in the same list
    UnpairedComplex,
    /// real negative entry whose sign changes are not compensated
    UnpairedNegative,
}

impl Rule {
    pub fn code(&self) -> &'static str {
        match self {
            Rule::NonFinite => "non-finite",
            Rule::NonPositiveInteger => "non-positive-integer",
            Rule::UnpairedComplex => "unpaired-complex",
            Rule::UnpairedNegative => "unpaired-negative",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub side: Side,
    pub index: usize,
    pub value: (f64, f64),
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = fmt_complex(Complex64::new(self.value.0, self.value.1));
        let why = match self.rule {
            Rule::NonFinite => "entry is not finite".to_string(),
            Rule::NonPositiveInteger => "zero and negative integers are excluded".to_string(),
            Rule::UnpairedComplex => format!("complex entry has no conjugate partner in the {} list", self.side),
            Rule::UnpairedNegative => {
                "negative entry has no partner with the same negative integer part".to_string()
            }
        };
        write!(f, "{}[{}] = {}: {} ({})", self.side, self.index, v, why, self.rule.code())
    }
}

pub(crate) fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

fn canonical_cmp(x: &Complex64, y: &Complex64) -> Ordering {
    x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
}

/// Numerator list a and denominator list b, stored in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl ParameterSet {
    pub fn new(a: &[Complex64], b: &[Complex64]) -> Result<Self, Violation> {
        validate(a, b)
    }

    pub fn real(a: &[f64], b: &[f64]) -> Result<Self, Violation> {
        let ac: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let bc: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        validate(&ac, &bc)
    }

    /// The coherent-state set (0;0).
    pub fn coherent() -> Self {
        ParameterSet { a: vec![], b: vec![] }
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    /// Re(Σa - Σb).
    pub fn eta(&self) -> f64 {
        self.a.iter().map(|v| v.re).sum::<f64>() - self.b.iter().map(|v| v.re).sum::<f64>()
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|v| v.im == 0.0)
    }

    pub fn real_a(&self) -> Option<Vec<f64>> {
        self.is_real().then(|| self.a.iter().map(|v| v.re).collect())
    }

    pub fn real_b(&self) -> Option<Vec<f64>> {
        self.is_real().then(|| self.b.iter().map(|v| v.re).collect())
    }

    /// Cancel numerator/denominator pairs that agree within [`COALESCE_TOL`].
    pub fn reduced(&self) -> ParameterSet {
        let mut a = self.a.clone();
        let mut b = Vec::with_capacity(self.b.len());
        for &bj in &self.b {
            if let Some(pos) = a.iter().position(|&ai| (ai - bj).norm() <= COALESCE_TOL * bj.norm().max(1.0)) {
                a.remove(pos);
            } else {
                b.push(bj);
            }
        }
        ParameterSet { a, b }
    }

    /// Append c to both lists.
    pub fn with_matched_pair(&self, c: Complex64) -> Result<ParameterSet, Violation> {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.push(c);
        b.push(c);
        if c.im != 0.0 {
            a.push(c.conj());
            b.push(c.conj());
        }
        validate(&a, &b)
    }

    /// Every entry shifted by k, as used by the factorial moments.
    pub fn shifted(&self, k: f64) -> ParameterSet {
        ParameterSet {
            a: self.a.iter().map(|&v| v + k).collect(),
            b: self.b.iter().map(|&v| v + k).collect(),
        }
    }

    /// (n+1) Π(b+n) / Π(a+n), real and positive for a valid set.
    pub fn ratio(&self, n: f64) -> f64 {
        let mut num = Complex64::new(n + 1.0, 0.0);
        for &bj in &self.b {
            num *= bj + n;
        }
        let mut den = Complex64::new(1.0, 0.0);
        for &ai in &self.a {
            den *= ai + n;
        }
        (num / den).re
    }

    pub fn label(&self) -> String {
        let join = |v: &[Complex64]| v.iter().map(|&c| fmt_complex(c)).collect::<Vec<_>>().join(",");
        format!("({};{}) a=[{}] b=[{}]", self.p(), self.q(), join(&self.a), join(&self.b))
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn nonpositive_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.floor()
}

/// Number of n ≥ 0 for which c + n < 0.
fn negative_run(c: f64) -> u64 {
    (-c).ceil() as u64
}

/// Check the positivity rules and return the canonical set.
pub fn validate(a: &[Complex64], b: &[Complex64]) -> Result<ParameterSet, Violation> {
    let lists = [(Side::A, a), (Side::B, b)];
    let violation = |side, index, v: Complex64, rule| Violation { side, index, value: (v.re, v.im), rule };
    for (side, list) in lists {
        for (i, &v) in list.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(violation(side, i, v, Rule::NonFinite));
            }
        }
    }
    for (side, list) in lists {
        for (i, &v) in list.iter().enumerate() {
            if nonpositive_integer(v) {
                return Err(violation(side, i, v, Rule::NonPositiveInteger));
            }
        }
    }
    for (side, list) in lists {
        let mut used = vec![false; list.len()];
        for (i, &v) in list.iter().enumerate() {
            if v.im == 0.0 || used[i] {
                continue;
            }
            let partner = (0..list.len()).find(|&j| j != i && !used[j] && list[j] == v.conj());
            match partner {
                Some(j) => {
                    used[i] = true;
                    used[j] = true;
                }
                None => return Err(violation(side, i, v, Rule::UnpairedComplex)),
            }
        }
    }
    // real negatives from both lists, grouped by how many leading factors they flip
    let mut negatives: Vec<(u64, Side, usize, Complex64)> = Vec::new();
    for (side, list) in lists {
        for (i, &v) in list.iter().enumerate() {
            if v.im == 0.0 && v.re < 0.0 {
                negatives.push((negative_run(v.re), side, i, v));
            }
        }
    }
    negatives.sort_by(|x, y| x.0.cmp(&y.0).then((x.1 as u8).cmp(&(y.1 as u8))).then(x.2.cmp(&y.2)));
    let mut k = 0;
    while k < negatives.len() {
        if k + 1 < negatives.len() && negatives[k].0 == negatives[k + 1].0 {
            k += 2;
        } else {
            let (_, side, i, v) = negatives[k];
            return Err(violation(side, i, v, Rule::UnpairedNegative));
        }
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(canonical_cmp);
    b.sort_by(canonical_cmp);
    Ok(ParameterSet { a, b })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DomainKind {
    Plane,
    UnitDisk,
    CircleNormalized,
    CircleUnnormalizable,
    /// p > q + 1: only z = 0 is admissible
    Divergent,
}

impl DomainKind {
    pub fn name(&self) -> &'static str {
        match self {
            DomainKind::Plane => "plane",
            DomainKind::UnitDisk => "unit-disk",
            DomainKind::CircleNormalized => "circle-normalized",
            DomainKind::CircleUnnormalizable => "circle-unnormalizable",
            DomainKind::Divergent => "divergent",
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, DomainKind::CircleNormalized | DomainKind::CircleUnnormalizable)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainClass {
    pub kind: DomainKind,
    pub eta: f64,
}

/// Class of the parameter set: plane for p < q+1; for p = q+1 the
/// circle-normalized class when η < 0 and the disk otherwise.
pub fn classify(params: &ParameterSet) -> DomainClass {
    let eta = params.eta();
    let kind = if params.p() < params.q() + 1 {
        DomainKind::Plane
    } else if params.p() > params.q() + 1 {
        DomainKind::Divergent
    } else if eta < 0.0 {
        DomainKind::CircleNormalized
    } else {
        DomainKind::UnitDisk
    };
    DomainClass { kind, eta }
}

/// Class of a specific point z, or `None` when z lies outside the domain.
pub fn classify_point(params: &ParameterSet, z: Complex64) -> Option<DomainClass> {
    let eta = params.eta();
    if !(z.re.is_finite() && z.im.is_finite()) {
        return None;
    }
    if params.p() < params.q() + 1 {
        return Some(DomainClass { kind: DomainKind::Plane, eta });
    }
    if params.p() > params.q() + 1 {
        return (z.norm() == 0.0).then_some(DomainClass { kind: DomainKind::Divergent, eta });
    }
    let r = z.norm();
    if (r - 1.0).abs() <= CIRCLE_TOL {
        if eta < 0.0 {
            return Some(DomainClass { kind: DomainKind::CircleNormalized, eta });
        }
        if eta < 1.0 && (z - 1.0).norm() > CIRCLE_TOL {
            log::warn!("{params} at z = {}: the normalization series converges only conditionally", fmt_complex(z));
        }
        return Some(DomainClass { kind: DomainKind::CircleUnnormalizable, eta });
    }
    if r < 1.0 {
        Some(DomainClass { kind: DomainKind::UnitDisk, eta })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation_examples() {
        assert!(ParameterSet::real(&[], &[2.5]).is_ok());
        assert!(ParameterSet::real(&[-1.5, -1.2], &[]).is_ok());
        let e = ParameterSet::real(&[-2.0], &[]).unwrap_err();
        assert_eq!(e.rule, Rule::NonPositiveInteger);
        assert_eq!((e.side, e.index), (Side::A, 0));
        assert!(ParameterSet::new(&[c(1.0, 2.0), c(1.0, -2.0)], &[c(0.5, 0.0)]).is_ok());
    }

    #[test]
    fn pairing_rules() {
        let e = ParameterSet::real(&[-1.5], &[]).unwrap_err();
        assert_eq!(e.rule, Rule::UnpairedNegative);
        let e = ParameterSet::real(&[-1.5, -2.5], &[]).unwrap_err();
        assert_eq!(e.rule, Rule::UnpairedNegative);
        let e = ParameterSet::new(&[c(1.0, 2.0)], &[c(1.0, -2.0)]).unwrap_err();
        assert_eq!(e.rule, Rule::UnpairedComplex);
        assert_eq!(e.side, Side::A);
        // a negative pair spread across both lists keeps every ratio positive
        let s = ParameterSet::real(&[-0.3, 2.0], &[-0.7]).unwrap();
        for n in 0..10 {
            assert!(s.ratio(n as f64) > 0.0);
        }
    }

    #[test]
    fn violations_render() {
        let e = ParameterSet::real(&[1.0], &[0.0]).unwrap_err();
        let s = e.to_string();
        assert!(s.starts_with("b[0] = 0"), "{s}");
        assert!(s.contains("non-positive-integer"));
    }

    #[test]
    fn classification_examples() {
        let cs = classify(&ParameterSet::coherent());
        assert_eq!(cs.kind, DomainKind::Plane);
        assert_eq!(cs.eta, 0.0);
        let d = classify(&ParameterSet::real(&[2.0], &[]).unwrap());
        assert_eq!((d.kind, d.eta), (DomainKind::UnitDisk, 2.0));
        let circ = classify(&ParameterSet::real(&[0.3, 0.4], &[1.5]).unwrap());
        assert_eq!(circ.kind, DomainKind::CircleNormalized);
        assert!((circ.eta + 0.8).abs() < 1e-15);
        let div = ParameterSet::real(&[-1.5, -1.2], &[]).unwrap();
        assert_eq!(classify(&div).kind, DomainKind::Divergent);
        assert!(classify_point(&div, c(0.1, 0.0)).is_none());
    }

    #[test]
    fn point_classification() {
        let p = ParameterSet::real(&[0.3, 0.4], &[1.5]).unwrap();
        assert_eq!(classify_point(&p, c(0.5, 0.2)).unwrap().kind, DomainKind::UnitDisk);
        assert_eq!(classify_point(&p, c(0.0, 1.0)).unwrap().kind, DomainKind::CircleNormalized);
        assert!(classify_point(&p, c(1.1, 0.0)).is_none());
        let q = ParameterSet::real(&[1.5], &[]).unwrap();
        assert_eq!(classify_point(&q, c(-1.0, 0.0)).unwrap().kind, DomainKind::CircleUnnormalizable);
    }

    #[test]
    fn canonical_order_and_reduction() {
        let x = ParameterSet::real(&[3.0, 1.0, 2.0], &[5.0, 4.0]).unwrap();
        let y = ParameterSet::real(&[2.0, 3.0, 1.0], &[4.0, 5.0]).unwrap();
        assert_eq!(x, y);
        let r = ParameterSet::real(&[2.0, 3.0], &[3.0]).unwrap().reduced();
        assert_eq!(r, ParameterSet::real(&[2.0], &[]).unwrap());
    }
}
