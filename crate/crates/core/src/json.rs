//! JSON plumbing: big-integer encoding and the surface description format.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise; both forms are accepted on input.

use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{Int, Rational};
use crate::lattice::{IntersectionLattice, LatticeClass, LatticeError};
use crate::surface::{preset, ConstraintClass, NumericalConstraint, Preset, SurfaceError, SurfaceModel};

pub fn serialize_int<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn serialize_ints<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&IntOut(x))?;
    }
    seq.end()
}

pub fn serialize_opt_int<S: Serializer>(v: &Option<Int>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_int(x, s),
        None => s.serialize_none(),
    }
}

/// Rationals as `"p/q"`, or as an integer when the denominator is 1.
pub fn serialize_rational<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    if v.is_integer() {
        serialize_int(v.numer(), s)
    } else {
        s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
    }
}

struct IntOut<'a>(&'a Int);

impl Serialize for IntOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_int(self.0, s)
    }
}

/// An integer read from JSON as a number or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum IntInput {
    Small(i64),
    Text(String),
}

impl IntInput {
    pub fn value(&self) -> Result<Int, InputError> {
        match self {
            IntInput::Small(v) => Ok(Int::from(*v)),
            IntInput::Text(t) => t.trim().parse().map_err(|_| InputError::BadInteger(t.clone())),
        }
    }
}

impl Serialize for IntInput {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            IntInput::Small(v) => s.serialize_i64(*v),
            IntInput::Text(t) => s.serialize_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("`{0}` is not an integer")]
    BadInteger(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("missing field `{0}` (and no preset to inherit it from)")]
    Missing(&'static str),
    #[error("declared rank {declared} but the gram matrix has {found} rows")]
    RankMismatch { declared: usize, found: usize },
    #[error("unknown constraint type `{0}`")]
    UnknownConstraint(String),
    #[error("constraint class must be \"K\" or a coordinate vector, got `{0}`")]
    BadConstraintClass(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

pub fn ints(v: &[IntInput]) -> Result<Vec<Int>, InputError> {
    v.iter().map(IntInput::value).collect()
}

/// Either the literal `"K"` or an explicit coordinate vector.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ConstraintClassSpec {
    Named(String),
    Coords(Vec<IntInput>),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct ConstraintSpec {
    #[serde(rename = "type")]
    pub kind: String,
    pub class: ConstraintClassSpec,
    pub bound: IntInput,
}

/// A surface description. Every field may be omitted when `preset` is
/// given; explicit fields override the preset's values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<IntInput>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2_plus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2_minus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<IntInput>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pg: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_generators: Option<Vec<Vec<IntInput>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<ConstraintSpec>>,
}

pub fn parse_preset(name: &str) -> Result<Preset, InputError> {
    let key: String = name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
    Preset::ALL
        .into_iter()
        .find(|p| p.name().to_ascii_lowercase() == key)
        .ok_or_else(|| InputError::UnknownPreset(name.to_string()))
}

impl SurfaceSpec {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))
    }

    pub fn build(&self) -> Result<SurfaceModel, InputError> {
        let base = self.preset.as_deref().map(parse_preset).transpose()?.map(preset);
        let lattice_overridden = self.gram.is_some();
        let pic = match &self.gram {
            Some(rows) => {
                let gram: Vec<Vec<Int>> = rows.iter().map(|r| ints(r)).collect::<Result<_, _>>()?;
                if let Some(r) = self.rank {
                    if r != gram.len() {
                        return Err(InputError::RankMismatch { declared: r, found: gram.len() });
                    }
                }
                let lat = match (self.b2_plus, self.b2_minus) {
                    (None, None) => IntersectionLattice::new(gram)?,
                    (p, m) => {
                        let (ap, am, _) = crate::linalg::inertia(&gram);
                        IntersectionLattice::with_signature(gram, p.unwrap_or(ap), m.unwrap_or(am))?
                    }
                };
                match &self.labels {
                    Some(l) if l.len() == lat.rank() => lat.with_labels(l.clone()),
                    Some(l) => {
                        return Err(LatticeError::DimensionMismatch { expected: lat.rank(), found: l.len() }.into())
                    }
                    None => lat,
                }
            }
            None => {
                let s = base.as_ref().ok_or(InputError::Missing("gram"))?;
                let lat = s.pic().clone();
                if let Some(r) = self.rank {
                    if r != lat.rank() {
                        return Err(InputError::RankMismatch { declared: r, found: lat.rank() });
                    }
                }
                match &self.labels {
                    Some(l) if l.len() == lat.rank() => lat.with_labels(l.clone()),
                    Some(l) => {
                        return Err(LatticeError::DimensionMismatch { expected: lat.rank(), found: l.len() }.into())
                    }
                    None => lat,
                }
            }
        };
        let class = |v: &[Int]| pic.class(v.iter().cloned());
        let inherit = |c: &LatticeClass| pic.class(c.coords().iter().cloned());

        let k = match (&self.k, &base) {
            (Some(v), _) => class(&ints(v)?)?,
            (None, Some(s)) if !lattice_overridden => inherit(s.canonical())?,
            _ => return Err(InputError::Missing("K")),
        };
        let pg = match (self.pg, &base) {
            (Some(p), _) => p,
            (None, Some(s)) => s.pg(),
            (None, None) => return Err(InputError::Missing("pg")),
        };
        let gens = match (&self.effective_generators, &base) {
            (Some(v), _) => v.iter().map(|g| Ok(class(&ints(g)?)?)).collect::<Result<Vec<_>, InputError>>()?,
            (None, Some(s)) if !lattice_overridden => {
                s.effective_generators().iter().map(inherit).collect::<Result<Vec<_>, _>>()?
            }
            _ => Vec::new(),
        };
        let constraints = match (&self.constraints, &base) {
            (Some(v), _) => v
                .iter()
                .map(|c| {
                    if c.kind != "dot_ge" {
                        return Err(InputError::UnknownConstraint(c.kind.clone()));
                    }
                    let cc = match &c.class {
                        ConstraintClassSpec::Named(n) if n == "K" => ConstraintClass::Canonical,
                        ConstraintClassSpec::Named(n) => return Err(InputError::BadConstraintClass(n.clone())),
                        ConstraintClassSpec::Coords(v) => ConstraintClass::Explicit(class(&ints(v)?)?),
                    };
                    Ok(NumericalConstraint { class: cc, bound: c.bound.value()? })
                })
                .collect::<Result<Vec<_>, _>>()?,
            (None, Some(s)) if !lattice_overridden => s
                .constraints()
                .iter()
                .map(|c| {
                    let cc = match &c.class {
                        ConstraintClass::Canonical => ConstraintClass::Canonical,
                        ConstraintClass::Explicit(x) => ConstraintClass::Explicit(inherit(x)?),
                    };
                    Ok(NumericalConstraint { class: cc, bound: c.bound.clone() })
                })
                .collect::<Result<Vec<_>, LatticeError>>()?,
            _ => Vec::new(),
        };
        let name = self
            .name
            .clone()
            .or_else(|| base.as_ref().map(|s| s.name().to_string()))
            .unwrap_or_else(|| "surface".to_string());
        let mut model = SurfaceModel::new(name, pic, k.clone(), pg, gens, constraints)?;
        if let Some(s) = &base {
            let same_k = !lattice_overridden && s.canonical().coords() == k.coords();
            if let (true, Some(o)) = (same_k, s.oracle()) {
                model = model.with_oracle(o);
            }
        }
        Ok(model)
    }
}

/// Parses `"3,-1,0"` into integers.
pub fn parse_vector(text: &str) -> Result<Vec<Int>, InputError> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(|x| x.trim().parse().map_err(|_| InputError::BadInteger(x.trim().to_string()))).collect()
}

/// A single-surface status query.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    pub surface: SurfaceSpec,
    #[serde(rename = "H")]
    pub h: Vec<IntInput>,
    /// Spin^c class; −K when omitted.
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<IntInput>>,
    pub c1: Vec<IntInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<IntInput>,
}

/// Two surfaces, f* as a matrix in target→source coordinates, and the
/// target-side type and polarization.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub source: SurfaceSpec,
    pub target: SurfaceSpec,
    /// Identity when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullback: Option<Vec<Vec<IntInput>>>,
    #[serde(rename = "H")]
    pub h: Vec<IntInput>,
    pub c1: Vec<IntInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<IntInput>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictFile {
    Query(QueryFile),
    Scenario(ScenarioFile),
}

impl VerdictFile {
    /// Files with a `source` key are scenarios.
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
        let scenario = value.get("source").is_some();
        let bad = |e: serde_json::Error| InputError::Json(e.to_string());
        if scenario {
            serde_json::from_value(value).map(VerdictFile::Scenario).map_err(bad)
        } else {
            serde_json::from_value(value).map(VerdictFile::Query).map_err(bad)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn big_integers_become_strings() {
        let small = serde_json::to_string(&IntOut(&int(-7))).unwrap();
        assert_eq!(small, "-7");
        let big: Int = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(serde_json::to_string(&IntOut(&big)).unwrap(), "\"123456789012345678901234567890\"");
    }

    #[test]
    fn preset_by_name() {
        let s = SurfaceSpec::from_json(r#"{"preset":"F1Partner"}"#).unwrap().build().unwrap();
        assert_eq!(s.canonical().to_string(), "3h - e");
        assert_eq!(s.constraints().len(), 1);
        assert_eq!(parse_preset("fake-plane-partner").unwrap(), Preset::FakePlanePartner);
    }

    #[test]
    fn explicit_surface() {
        let text = r#"{
            "rank": 2, "gram": [[1,0],[0,-1]], "K": [3,-1], "pg": 0,
            "labels": ["h","e"],
            "constraints": [{"type":"dot_ge","class":"K","bound":1}]
        }"#;
        let s = SurfaceSpec::from_json(text).unwrap().build().unwrap();
        assert_eq!(s.pic().b2_plus(), 1);
        assert_eq!(s.canonical().to_string(), "3h - e");
        assert!(s.oracle().is_none());
    }

    #[test]
    fn overrides_and_errors() {
        let s = SurfaceSpec::from_json(r#"{"preset":"CP2","pg":0,"K":["-3"]}"#).unwrap().build().unwrap();
        assert!(s.oracle().is_some());
        let s = SurfaceSpec::from_json(r#"{"preset":"CP2","K":[3]}"#).unwrap().build().unwrap();
        assert!(s.oracle().is_none());
        assert!(matches!(
            SurfaceSpec::from_json(r#"{"gram":[[1]],"pg":0}"#).unwrap().build(),
            Err(InputError::Missing("K"))
        ));
        assert!(matches!(
            SurfaceSpec::from_json(r#"{"gram":[[2]],"K":[0],"pg":0}"#).unwrap().build(),
            Err(InputError::Lattice(LatticeError::NotUnimodular { .. }))
        ));
        assert!(matches!(
            SurfaceSpec::from_json(r#"{"gram":[[1]],"K":[2],"pg":0}"#).unwrap().build(),
            Err(InputError::Surface(SurfaceError::CanonicalNotCharacteristic(_)))
        ));
        assert!(SurfaceSpec::from_json(r#"{"gram":[[1]],"bogus":1}"#).is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("3,-1, 0").unwrap(), vec![int(3), int(-1), int(0)]);
        assert_eq!(parse_vector("[2]").unwrap(), vec![int(2)]);
        assert!(parse_vector("1,x").is_err());
    }

    #[test]
    fn verdict_files() {
        let q = VerdictFile::from_json(r#"{"surface":{"preset":"CP2"},"H":[1],"c1":[-5],"c2":13}"#).unwrap();
        assert!(matches!(q, VerdictFile::Query(_)));
        let s = VerdictFile::from_json(
            r#"{"source":{"preset":"CP2"},"target":{"preset":"FakePlanePartner"},"pullback":[[1]],"H":[1],"c1":[1]}"#,
        )
        .unwrap();
        assert!(matches!(s, VerdictFile::Scenario(_)));
        assert!(VerdictFile::from_json(r#"{"surface":{"preset":"CP2"},"H":[1],"c1":[1],"x":0}"#).is_err());
    }
}
