//! Algebraic surfaces as Picard lattices with a canonical class.
//!
//! Effectivity is only approximated numerically: a [`NumericalConstraint`]
//! prunes candidate curve classes, and a [`Polarization`] is checked against
//! the known effective classes. Nothing here knows about actual curves.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{binomial, exact_half, int, Int};
use crate::lattice::{is_characteristic, make_spin_c, IntersectionLattice, LatticeClass, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("canonical class {0} is not characteristic")]
    CanonicalNotCharacteristic(String),
    #[error("L² − L·K = {0} is odd")]
    ParityViolation(Int),
    #[error("no section-count oracle for surface `{0}`")]
    OracleUnavailable(String),
    #[error("polarization {class} has square {square}, need > 0")]
    NonPositiveSquare { class: String, square: Int },
    #[error("polarization {class} pairs to {value} with effective class {generator}")]
    NotAmple { class: String, generator: String, value: Int },
    #[error("b2+ = {b2_plus} of the Picard lattice does not match 2·pg + 1 = {expected}")]
    B2PlusMismatch { b2_plus: usize, expected: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    CP2,
    FakePlanePartner,
    F1,
    F1Partner,
    QuadricBlowupPartner,
}

impl Preset {
    pub const ALL: [Preset; 5] =
        [Preset::CP2, Preset::FakePlanePartner, Preset::F1, Preset::F1Partner, Preset::QuadricBlowupPartner];

    pub fn name(self) -> &'static str {
        match self {
            Preset::CP2 => "CP2",
            Preset::FakePlanePartner => "FakePlanePartner",
            Preset::F1 => "F1",
            Preset::F1Partner => "F1Partner",
            Preset::QuadricBlowupPartner => "QuadricBlowupPartner",
        }
    }
}

/// Which class a constraint pairs against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintClass {
    /// The model's canonical class, whatever it is.
    Canonical,
    Explicit(LatticeClass),
}

/// `C · class ≥ bound`, required of every nonzero effective candidate `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalConstraint {
    pub class: ConstraintClass,
    pub bound: Int,
}

impl NumericalConstraint {
    pub fn canonical_at_least(bound: i64) -> Self {
        Self { class: ConstraintClass::Canonical, bound: int(bound) }
    }
}

/// Exact h⁰ formulas for rational surfaces in their standard bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SectionOracle {
    /// ℂP² with basis `l`.
    ProjectivePlane,
    /// ℂP² blown up in one point, basis `l, E`.
    PlaneBlownUpOnce,
    /// ℂP¹ × ℂP¹, basis of the two rulings.
    Quadric,
}

impl SectionOracle {
    fn h0(self, coords: &[Int]) -> Int {
        match self {
            SectionOracle::ProjectivePlane => plane_sections(&coords[0]),
            SectionOracle::PlaneBlownUpOnce => {
                let (a, b) = (&coords[0], &coords[1]);
                if !b.is_negative() {
                    // E is a fixed component of |al + bE| for b > 0.
                    return plane_sections(a);
                }
                // Degree-a forms vanishing to order m at a point: the
                // C(m+1, 2) conditions are independent while m <= a + 1.
                let m = -b;
                if a.is_negative() || m > a + int(1) {
                    return Int::zero();
                }
                plane_sections(a) - binomial(&(&m + int(1)), 2)
            }
            SectionOracle::Quadric => {
                let (a, b) = (&coords[0], &coords[1]);
                if a.is_negative() || b.is_negative() {
                    Int::zero()
                } else {
                    (a + int(1)) * (b + int(1))
                }
            }
        }
    }
}

fn plane_sections(d: &Int) -> Int {
    binomial(&(d + int(2)), 2)
}

/// Picard lattice, canonical class, geometric genus and numerical effectivity data.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    name: String,
    pic: IntersectionLattice,
    k: LatticeClass,
    pg: u64,
    effective_generators: Vec<LatticeClass>,
    constraints: Vec<NumericalConstraint>,
    oracle: Option<SectionOracle>,
}

impl SurfaceModel {
    pub fn new(
        name: impl Into<String>,
        pic: IntersectionLattice,
        k: LatticeClass,
        pg: u64,
        effective_generators: Vec<LatticeClass>,
        constraints: Vec<NumericalConstraint>,
    ) -> Result<Self, SurfaceError> {
        if k.lattice() != &pic {
            return Err(LatticeError::LatticeMismatch.into());
        }
        for g in &effective_generators {
            if g.lattice() != &pic {
                return Err(LatticeError::LatticeMismatch.into());
            }
        }
        for c in &constraints {
            if let ConstraintClass::Explicit(x) = &c.class {
                if x.lattice() != &pic {
                    return Err(LatticeError::LatticeMismatch.into());
                }
            }
        }
        if !is_characteristic(&k) {
            return Err(SurfaceError::CanonicalNotCharacteristic(k.to_string()));
        }
        make_spin_c(-&k)?;
        Ok(Self { name: name.into(), pic, k, pg, effective_generators, constraints, oracle: None })
    }

    pub fn with_oracle(mut self, oracle: SectionOracle) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pic(&self) -> &IntersectionLattice {
        &self.pic
    }

    pub fn canonical(&self) -> &LatticeClass {
        &self.k
    }

    pub fn pg(&self) -> u64 {
        self.pg
    }

    /// χ(O_S) = p_g + 1 for a simply connected surface.
    pub fn chi_o(&self) -> Int {
        int(self.pg as i64 + 1)
    }

    pub fn effective_generators(&self) -> &[LatticeClass] {
        &self.effective_generators
    }

    pub fn constraints(&self) -> &[NumericalConstraint] {
        &self.constraints
    }

    pub fn oracle(&self) -> Option<SectionOracle> {
        self.oracle
    }

    /// The class a constraint pairs against, resolved in this model.
    pub fn constraint_class<'a>(&'a self, c: &'a NumericalConstraint) -> &'a LatticeClass {
        match &c.class {
            ConstraintClass::Canonical => &self.k,
            ConstraintClass::Explicit(x) => x,
        }
    }

    /// Whether a nonzero class passes every numerical constraint.
    pub fn satisfies_constraints(&self, c: &LatticeClass) -> Result<bool, SurfaceError> {
        for con in &self.constraints {
            if c.dot(self.constraint_class(con))? < con.bound {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// b₂⁺ = 2·p_g + 1, required before any index computation.
    pub fn check_b2_plus(&self) -> Result<(), SurfaceError> {
        let expected = 2 * self.pg + 1;
        if self.pic.b2_plus() as u64 != expected {
            return Err(SurfaceError::B2PlusMismatch { b2_plus: self.pic.b2_plus(), expected });
        }
        Ok(())
    }

    pub fn class<T: Into<Int>>(&self, coords: impl IntoIterator<Item = T>) -> Result<LatticeClass, LatticeError> {
        self.pic.class(coords)
    }

    /// Same data under a different name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {}, K = {}, pg = {})", self.name, self.pic.rank(), self.k, self.pg)
    }
}

fn lattice(rows: &[&[i64]], labels: &[&str]) -> IntersectionLattice {
    IntersectionLattice::from_rows(rows).expect("preset lattices are unimodular").with_labels(labels.iter().copied())
}

fn cls(lat: &IntersectionLattice, coords: &[i64]) -> LatticeClass {
    lat.class(coords.iter().copied()).expect("preset coordinates match rank")
}

/// ℂP¹ × ℂP¹ in the basis of its rulings, K = −2h₊ − 2h₋.
pub fn quadric() -> SurfaceModel {
    let lat = lattice(&[&[0, 1], &[1, 0]], &["h+", "h-"]);
    let k = cls(&lat, &[-2, -2]);
    let gens = vec![cls(&lat, &[1, 0]), cls(&lat, &[0, 1])];
    SurfaceModel::new("Quadric", lat, k, 0, gens, vec![])
        .expect("quadric data is consistent")
        .with_oracle(SectionOracle::Quadric)
}

/// Minimal surface of general type with the quadric's lattice and K = 2h₊ + 2h₋.
pub fn quadric_partner() -> SurfaceModel {
    let lat = lattice(&[&[0, 1], &[1, 0]], &["h+", "h-"]);
    let k = cls(&lat, &[2, 2]);
    SurfaceModel::new("QuadricPartner", lat, k, 0, vec![], vec![NumericalConstraint::canonical_at_least(1)])
        .expect("quadric partner data is consistent")
}

pub fn preset(name: Preset) -> SurfaceModel {
    match name {
        Preset::CP2 => {
            let lat = lattice(&[&[1]], &["l"]);
            let k = cls(&lat, &[-3]);
            let gens = vec![cls(&lat, &[1])];
            SurfaceModel::new("CP2", lat, k, 0, gens, vec![])
                .expect("CP2 data is consistent")
                .with_oracle(SectionOracle::ProjectivePlane)
        }
        Preset::FakePlanePartner => {
            let lat = lattice(&[&[1]], &["h"]);
            let k = cls(&lat, &[3]);
            let gens = vec![cls(&lat, &[1])];
            SurfaceModel::new("FakePlanePartner", lat, k, 0, gens, vec![NumericalConstraint::canonical_at_least(1)])
                .expect("fake plane data is consistent")
        }
        Preset::F1 => {
            let lat = lattice(&[&[1, 0], &[0, -1]], &["l", "E"]);
            let k = cls(&lat, &[-3, 1]);
            let gens = vec![cls(&lat, &[0, 1]), cls(&lat, &[1, -1])];
            SurfaceModel::new("F1", lat, k, 0, gens, vec![])
                .expect("F1 data is consistent")
                .with_oracle(SectionOracle::PlaneBlownUpOnce)
        }
        Preset::F1Partner => {
            let lat = lattice(&[&[1, 0], &[0, -1]], &["h", "e"]);
            let k = cls(&lat, &[3, -1]);
            SurfaceModel::new("F1Partner", lat, k, 0, vec![], vec![NumericalConstraint::canonical_at_least(1)])
                .expect("F1 partner data is consistent")
        }
        Preset::QuadricBlowupPartner => blow_up(&quadric_partner()).renamed("QuadricBlowupPartner"),
    }
}

/// Blows up one point: appends `E` with E² = −1 orthogonal to the old
/// lattice and sends K to K + E.
///
/// Constraints against the canonical class are dropped, since the blow-up
/// is no longer minimal; explicit ones are carried over.
pub fn blow_up(s: &SurfaceModel) -> SurfaceModel {
    let n = s.pic.rank();
    let mut gram = s.pic.gram().clone();
    for row in gram.iter_mut() {
        row.push(Int::zero());
    }
    let mut last = vec![Int::zero(); n];
    last.push(int(-1));
    gram.push(last);
    let mut labels: Vec<String> = s.pic.labels().to_vec();
    let mut e_label = "E".to_string();
    let mut suffix = 1;
    while labels.contains(&e_label) {
        suffix += 1;
        e_label = format!("E{suffix}");
    }
    labels.push(e_label);
    let pic = IntersectionLattice::new(gram).expect("blow-up of a unimodular lattice is unimodular").with_labels(labels);
    let embed = |c: &LatticeClass| {
        let mut coords = c.coords().to_vec();
        coords.push(Int::zero());
        pic.class(coords).expect("embedded class has the new rank")
    };
    let e = pic.basis(n);
    let k = &embed(&s.k) + &e;
    let mut gens: Vec<LatticeClass> = s.effective_generators.iter().map(embed).collect();
    gens.push(e);
    let constraints = s
        .constraints
        .iter()
        .filter_map(|c| match &c.class {
            ConstraintClass::Canonical => None,
            ConstraintClass::Explicit(x) => {
                Some(NumericalConstraint { class: ConstraintClass::Explicit(embed(x)), bound: c.bound.clone() })
            }
        })
        .collect();
    let oracle = match s.oracle {
        Some(SectionOracle::ProjectivePlane) => Some(SectionOracle::PlaneBlownUpOnce),
        _ => None,
    };
    SurfaceModel {
        name: format!("{} blown up", s.name),
        pic,
        k,
        pg: s.pg,
        effective_generators: gens,
        constraints,
        oracle,
    }
}

/// χ(O_S(L)) = χ(O_S) + (L² − L·K)/2.
pub fn riemann_roch_chi(s: &SurfaceModel, l: &LatticeClass) -> Result<Int, SurfaceError> {
    let twice = l.square() - l.dot(&s.k)?;
    let half = exact_half(&twice).ok_or(SurfaceError::ParityViolation(twice))?;
    Ok(s.chi_o() + half)
}

/// Exact h⁰(O_S(L)) from the model's oracle.
pub fn h0(s: &SurfaceModel, l: &LatticeClass) -> Result<Int, SurfaceError> {
    if l.lattice() != &s.pic {
        return Err(LatticeError::LatticeMismatch.into());
    }
    match s.oracle {
        Some(o) => Ok(o.h0(l.coords())),
        None => Err(SurfaceError::OracleUnavailable(s.name.clone())),
    }
}

/// h⁰ with the negative-degree shortcut: zero whenever L·H < 0 for an ample H.
pub fn h0_against(s: &SurfaceModel, h: &Polarization, l: &LatticeClass) -> Result<Int, SurfaceError> {
    if h.is_ample() && l.dot(h.class())?.is_negative() {
        return Ok(Int::zero());
    }
    h0(s, l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationKind {
    /// H² > 0 and H·g > 0 for every known effective class g.
    Ample,
    /// H² > 0 and H·g ≥ 0: the limit ray of a family of ample classes.
    NefLimit,
}

/// A numerically ample (or nef, positive-square) class H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarization {
    h: LatticeClass,
    kind: PolarizationKind,
}

impl Polarization {
    pub fn ample(s: &SurfaceModel, h: LatticeClass) -> Result<Self, SurfaceError> {
        Self::check(s, h, PolarizationKind::Ample)
    }

    pub fn nef_limit(s: &SurfaceModel, h: LatticeClass) -> Result<Self, SurfaceError> {
        Self::check(s, h, PolarizationKind::NefLimit)
    }

    /// Ample when possible, otherwise a nef limit.
    pub fn best(s: &SurfaceModel, h: LatticeClass) -> Result<Self, SurfaceError> {
        Self::ample(s, h.clone()).or_else(|_| Self::nef_limit(s, h))
    }

    fn check(s: &SurfaceModel, h: LatticeClass, kind: PolarizationKind) -> Result<Self, SurfaceError> {
        if h.lattice() != &s.pic {
            return Err(LatticeError::LatticeMismatch.into());
        }
        let sq = h.square();
        if !sq.is_positive() {
            return Err(SurfaceError::NonPositiveSquare { class: h.to_string(), square: sq });
        }
        for g in &s.effective_generators {
            let v = h.dot(g)?;
            let ok = match kind {
                PolarizationKind::Ample => v.is_positive(),
                PolarizationKind::NefLimit => !v.is_negative(),
            };
            if !ok {
                return Err(SurfaceError::NotAmple { class: h.to_string(), generator: g.to_string(), value: v });
            }
        }
        Ok(Self { h, kind })
    }

    pub fn class(&self) -> &LatticeClass {
        &self.h
    }

    pub fn kind(&self) -> PolarizationKind {
        self.kind
    }

    pub fn is_ample(&self) -> bool {
        self.kind == PolarizationKind::Ample
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.h.fmt(f)
    }
}
