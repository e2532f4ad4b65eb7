//! The five families with closed-form weights and statistics.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::ParameterSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyTag {
    Cs,
    F01,
    F11,
    F10,
    F21,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 5] = [FamilyTag::Cs, FamilyTag::F01, FamilyTag::F11, FamilyTag::F10, FamilyTag::F21];

    pub fn shape(&self) -> (usize, usize) {
        match self {
            FamilyTag::Cs => (0, 0),
            FamilyTag::F01 => (0, 1),
            FamilyTag::F11 => (1, 1),
            FamilyTag::F10 => (1, 0),
            FamilyTag::F21 => (2, 1),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::Cs => "cs",
            FamilyTag::F01 => "f01",
            FamilyTag::F11 => "f11",
            FamilyTag::F10 => "f10",
            FamilyTag::F21 => "f21",
        }
    }

    /// Tag whose (p;q) shape matches the set as given, without reduction.
    pub fn of(params: &ParameterSet) -> Option<FamilyTag> {
        FamilyTag::ALL.into_iter().find(|t| t.shape() == (params.p(), params.q()))
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cs" | "00" => Ok(FamilyTag::Cs),
            "f01" | "01" => Ok(FamilyTag::F01),
            "f11" | "11" => Ok(FamilyTag::F11),
            "f10" | "10" => Ok(FamilyTag::F10),
            "f21" | "21" => Ok(FamilyTag::F21),
            _ => Err(Error::Invalid(format!("unknown family '{s}' (cs, f01, f11, f10, f21)"))),
        }
    }
}

/// A family member with its real parameters unpacked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Cs,
    F01 { b: f64 },
    F11 { a: f64, b: f64 },
    F10 { a: f64 },
    F21 { a1: f64, a2: f64, b: f64 },
}

impl Family {
    pub fn new(tag: FamilyTag, params: &ParameterSet) -> Result<Family> {
        if tag.shape() != (params.p(), params.q()) {
            return Err(Error::Unsupported(format!("{params} does not have the ({};{}) shape of {tag}", tag.shape().0, tag.shape().1)));
        }
        let (Some(a), Some(b)) = (params.real_a(), params.real_b()) else {
            return Err(Error::Unsupported(format!("{tag} closed forms need real parameters, got {params}")));
        };
        Ok(match tag {
            FamilyTag::Cs => Family::Cs,
            FamilyTag::F01 => Family::F01 { b: b[0] },
            FamilyTag::F11 => Family::F11 { a: a[0], b: b[0] },
            FamilyTag::F10 => Family::F10 { a: a[0] },
            FamilyTag::F21 => Family::F21 { a1: a[0], a2: a[1], b: b[0] },
        })
    }

    pub fn detect(params: &ParameterSet) -> Result<Family> {
        let tag = FamilyTag::of(params)
            .ok_or_else(|| Error::Unsupported(format!("no closed-form family of shape ({};{})", params.p(), params.q())))?;
        Family::new(tag, params)
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            Family::Cs => FamilyTag::Cs,
            Family::F01 { .. } => FamilyTag::F01,
            Family::F11 { .. } => FamilyTag::F11,
            Family::F10 { .. } => FamilyTag::F10,
            Family::F21 { .. } => FamilyTag::F21,
        }
    }

    pub fn params(&self) -> ParameterSet {
        let r = match *self {
            Family::Cs => ParameterSet::real(&[], &[]),
            Family::F01 { b } => ParameterSet::real(&[], &[b]),
            Family::F11 { a, b } => ParameterSet::real(&[a], &[b]),
            Family::F10 { a } => ParameterSet::real(&[a], &[]),
            Family::F21 { a1, a2, b } => ParameterSet::real(&[a1, a2], &[b]),
        };
        r.expect("family parameters were validated on construction")
    }

    /// Radius R² of the x = |z|² domain: infinite for plane families, 1 for disks.
    pub fn x_max(&self) -> f64 {
        match self {
            Family::F10 { .. } | Family::F21 { .. } => 1.0,
            _ => f64::INFINITY,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_detection() {
        let p = ParameterSet::real(&[2.0], &[2.0]).unwrap();
        assert_eq!(Family::detect(&p).unwrap(), Family::F11 { a: 2.0, b: 2.0 });
        let p = ParameterSet::real(&[3.0, 1.5], &[2.0]).unwrap();
        assert_eq!(Family::detect(&p).unwrap(), Family::F21 { a1: 1.5, a2: 3.0, b: 2.0 });
        assert!(Family::new(FamilyTag::F01, &ParameterSet::coherent()).is_err());
        assert!(Family::detect(&ParameterSet::real(&[1.0, 2.0, 3.0], &[]).unwrap()).is_err());
        assert_eq!("F10".parse::<FamilyTag>().unwrap(), FamilyTag::F10);
        assert_eq!(Family::F10 { a: 2.0 }.params(), ParameterSet::real(&[2.0], &[]).unwrap());
    }
}
