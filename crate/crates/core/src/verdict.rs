//! Status of the Spin-polynomial for a bundle type, transport along a
//! hypothetical diffeomorphism, and the contradiction report that compares
//! the two sides.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{int, Int};
use crate::gam::{asymptotic_threshold, AsymptoticThreshold};
use crate::index::{nonvanishing_parity, twist, vanishing_window, vdim, BundleTopology, IndexError, VanishingWindow};
use crate::lattice::{make_spin_c, LatticeClass, LatticeError, SpinCStructure};
use crate::linalg::{determinant, mat_mul, mat_vec, transpose, IntMatrix};
use crate::simplicity::{candidate_systems, check_simple, SimplicityCertificate, SimplicityError};
use crate::surface::{blow_up, preset, quadric, quadric_partner, Polarization, Preset, SurfaceError, SurfaceModel};
use crate::walls::{close_polarization, wall_on_ray, ClosePolarization, DegreeInequality, SearchBudget, Wall, WallError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerdictError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Walls(#[from] WallError),
    #[error(transparent)]
    Simplicity(#[from] SimplicityError),
    #[error("pullback is {rows}×{cols}, expected {expected}×{expected}")]
    PullbackShape { rows: usize, cols: usize, expected: usize },
    #[error("pullback does not carry the target form to the source form")]
    NonIsometry,
    #[error("pullback of the target canonical class, {0}, is not characteristic")]
    NonCharacteristicImage(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

/// f: source → target with f* the given integer matrix on H², mapping
/// target coordinates to source coordinates.
#[derive(Debug, Clone)]
pub struct DiffeoHypothesis {
    pub source: SurfaceModel,
    pub target: SurfaceModel,
    pub pullback: IntMatrix,
    /// δ_f(K) = (f*K_target − K_source)/2.
    pub canonical_increment: LatticeClass,
}

impl DiffeoHypothesis {
    pub fn new(source: SurfaceModel, target: SurfaceModel, pullback: IntMatrix) -> Result<Self, VerdictError> {
        let n = source.pic().rank();
        let cols = pullback.first().map_or(0, Vec::len);
        if target.pic().rank() != n || pullback.len() != n || pullback.iter().any(|r| r.len() != n) {
            return Err(VerdictError::PullbackShape { rows: pullback.len(), cols, expected: n });
        }
        let pulled_form = mat_mul(&mat_mul(&transpose(&pullback), source.pic().gram()), &pullback);
        if &pulled_form != target.pic().gram() || determinant(&pullback).abs() != Int::one() {
            return Err(VerdictError::NonIsometry);
        }
        let k = source.pic().class(mat_vec(&pullback, target.canonical().coords()))?;
        if !crate::lattice::is_characteristic(&k) {
            return Err(VerdictError::NonCharacteristicImage(k.to_string()));
        }
        let canonical_increment = k.try_sub(source.canonical())?.halve()?;
        Ok(Self { source, target, pullback, canonical_increment })
    }

    pub fn identity(source: SurfaceModel, target: SurfaceModel) -> Result<Self, VerdictError> {
        let n = source.pic().rank();
        let id = (0..n).map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
        Self::new(source, target, id)
    }

    /// f* of a target class.
    pub fn pull(&self, x: &LatticeClass) -> Result<LatticeClass, VerdictError> {
        if x.lattice() != self.target.pic() {
            return Err(LatticeError::LatticeMismatch.into());
        }
        Ok(self.source.pic().class(mat_vec(&self.pullback, x.coords()))?)
    }

    /// (f*)⁻¹ of a source class, via (f*)⁻¹ = G_t⁻¹·(f*)ᵀ·G_s.
    pub fn push(&self, y: &LatticeClass) -> Result<LatticeClass, VerdictError> {
        if y.lattice() != self.source.pic() {
            return Err(LatticeError::LatticeMismatch.into());
        }
        let gs_y = mat_vec(self.source.pic().gram(), y.coords());
        let pt = mat_vec(&transpose(&self.pullback), &gs_y);
        let inv = crate::linalg::rational_inverse(&crate::linalg::to_rational(self.target.pic().gram()))
            .expect("unimodular forms are invertible");
        let coords: Vec<Int> = inv
            .iter()
            .map(|row| row.iter().zip(&pt).map(|(a, b)| a * crate::arith::rat_from_int(b)).sum::<crate::Rational>())
            .map(|r| r.to_integer())
            .collect();
        Ok(self.target.pic().class(coords)?)
    }
}

/// Pulls (c₁, C) back to the source and moves the Spin^c structure to
/// −K_source: with δ = (f*C + K_source)/2 the source type is
/// (2, f*c₁ + 2δ, c₂ + f*c₁·δ + δ²).
pub fn transport(
    hyp: &DiffeoHypothesis,
    e_target: &BundleTopology,
    c_target: &SpinCStructure,
) -> Result<(BundleTopology, SpinCStructure, LatticeClass), VerdictError> {
    let c1 = hyp.pull(&e_target.c1)?;
    let c = hyp.pull(c_target.class())?;
    let delta = c.try_add(hyp.source.canonical())?.halve()?;
    let moved = twist(&BundleTopology::new(c1, e_target.c2.clone()), &delta)?;
    Ok((moved, make_spin_c(-hyp.source.canonical())?, delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    CertifiedZero,
    CertifiedNonzero,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::CertifiedZero => "CertifiedZero",
            Status::CertifiedNonzero => "CertifiedNonzero",
            Status::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// One named check with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub rule: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Reason {
    fn new(rule: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self { rule, passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub surface: String,
    pub polarization: LatticeClass,
    pub polarization_text: String,
    pub spin_c: LatticeClass,
    pub queried_type: BundleTopology,
    pub queried_type_text: String,
    /// The type after moving the Spin^c structure to −K.
    pub transported_type: BundleTopology,
    pub transported_type_text: String,
    pub reasons: Vec<Reason>,
    pub chamber_warning: bool,
    pub walls_through_polarization: Vec<Wall>,
    pub vanishing: VanishingWindow,
    pub simplicity: Option<SimplicityCertificate>,
    pub threshold: Option<AsymptoticThreshold>,
}

#[derive(Debug, Clone, Default)]
pub struct StatusOptions {
    /// Polarization at which simplicity is certified, if not H itself.
    pub simplicity_polarization: Option<LatticeClass>,
}

/// Classes of the zero-parameter candidate families for c₁ and 2K − c₁.
pub fn finite_candidates(s: &SurfaceModel, h: &LatticeClass, c1: &LatticeClass) -> Result<Vec<LatticeClass>, VerdictError> {
    let mut out = Vec::new();
    for fam in candidate_systems(s, h, c1)? {
        if fam.directions.is_empty() && !out.contains(&fam.base) {
            out.push(fam.base);
        }
    }
    Ok(out)
}

pub fn spin_poly_status(
    s: &SurfaceModel,
    h: &Polarization,
    c: &SpinCStructure,
    e: &BundleTopology,
    opts: &StatusOptions,
) -> Result<Verdict, VerdictError> {
    let hc = h.class();
    let mut reasons = Vec::new();
    let anti = make_spin_c(-s.canonical())?;
    let delta = c.class().try_add(s.canonical())?.halve()?;
    let t = twist(e, &delta)?;
    reasons.push(Reason::new(
        "spin-c-change",
        true,
        format!("C = {} equals -K + 2δ with δ = {}; type becomes {}", c, delta, t),
    ));

    let walls = if s.pic().b2_plus() == 1 { wall_on_ray(s.pic(), &t.c1, &t.c2, hc)? } else { Vec::new() };
    let off_walls = walls.is_empty();
    let wall_detail = if s.pic().b2_plus() != 1 {
        "b2+ > 1: no chamber structure".to_string()
    } else if off_walls {
        format!("no wall of type {t} contains H = {hc}")
    } else {
        format!("H lies on {} wall(s), first {}", walls.len(), walls[0])
    };

    let window = vanishing_window(s, h, &t.c1)?;
    let window_detail = format!("2K·H = {}, c1·H = {}", window.twice_k_h, window.c1_h);
    let mut verdict = Verdict {
        status: Status::Unknown,
        surface: s.name().to_string(),
        polarization: hc.clone(),
        polarization_text: hc.to_string(),
        spin_c: c.class().clone(),
        queried_type: e.clone(),
        queried_type_text: e.to_string(),
        transported_type: t.clone(),
        transported_type_text: t.to_string(),
        reasons: Vec::new(),
        chamber_warning: !off_walls,
        walls_through_polarization: walls,
        vanishing: window.clone(),
        simplicity: None,
        threshold: None,
    };

    if window.holds && h.is_ample() {
        reasons.push(Reason::new("vanishing-window", true, window_detail));
        reasons.push(Reason::new("polarization-off-walls", off_walls, wall_detail));
        verdict.status = Status::CertifiedZero;
        verdict.reasons = reasons;
        return Ok(verdict);
    }
    let window_rule_detail = if window.holds { format!("{window_detail}; H is only a nef limit") } else { window_detail };
    reasons.push(Reason::new("vanishing-window", false, window_rule_detail));

    let positive = window.c1_h.is_positive();
    reasons.push(Reason::new("positive-degree", positive, format!("c1·H = {}", window.c1_h)));
    if !positive {
        verdict.reasons = reasons;
        return Ok(verdict);
    }

    let hs = opts.simplicity_polarization.clone().unwrap_or_else(|| hc.clone());
    let simple = check_simple(s, &hs, &t.c1);
    let simple_ok = match &simple {
        Ok(cert) => {
            reasons.push(Reason::new(
                "simplicity",
                cert.simple,
                format!(
                    "{} is {}-semisimple: {}; partner {} semisimple: {}",
                    t.c1, hs, cert.primary.semisimple, cert.partner.class_text, cert.partner.semisimple
                ),
            ));
            cert.simple
        }
        Err(err) => {
            reasons.push(Reason::new("simplicity", false, format!("certificate refused: {err}")));
            false
        }
    };
    verdict.simplicity = simple.ok();

    let parity = nonvanishing_parity(s, &t)?;
    reasons.push(Reason::new(
        "parity",
        parity,
        format!("c2 = {} against (c1² − c1·K)/2 + pg mod 2", t.c2),
    ));

    let candidates = finite_candidates(s, &hs, &t.c1)?;
    let threshold = asymptotic_threshold(s, &t.c1, &anti, &candidates)?;
    let above = threshold.admits(&t.c2);
    let missing: Vec<&str> =
        threshold.contributions.iter().filter(|c| c.min_c2.is_none()).map(|c| c.name.as_str()).collect();
    let mut detail = format!("c2 = {} against N(H, c1) = {}", t.c2, threshold.n_h_c1);
    if !missing.is_empty() {
        detail.push_str(&format!("; not evaluable: {}", missing.join(", ")));
    }
    reasons.push(Reason::new("threshold", above, detail));
    verdict.threshold = Some(threshold);

    reasons.push(Reason::new("polarization-off-walls", off_walls, wall_detail));
    let ample = h.is_ample();
    reasons.push(Reason::new("polarization-ample", ample, format!("{hc} is {:?}", h.kind())));

    if simple_ok && parity && above && off_walls && ample {
        verdict.status = Status::CertifiedNonzero;
    }
    verdict.reasons = reasons;
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Contradiction,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Contradiction => "Contradiction",
            Outcome::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideReport {
    pub surface: String,
    pub polarization_search: Option<ClosePolarization>,
    pub verdict: Option<Verdict>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContradictionReport {
    pub outcome: Outcome,
    pub target_type: BundleTopology,
    pub target_type_text: String,
    pub transported_type: BundleTopology,
    pub transported_type_text: String,
    pub spin_c_delta: LatticeClass,
    pub canonical_increment: LatticeClass,
    pub target: SideReport,
    pub source: SideReport,
}

fn status_of(side: &SideReport) -> Option<Status> {
    side.verdict.as_ref().map(|v| v.status)
}

fn degree_constraints(s: &SurfaceModel, h: &LatticeClass, c1: &LatticeClass) -> Result<Vec<DegreeInequality>, VerdictError> {
    let zero = s.pic().zero();
    let mut out = vec![DegreeInequality::new(zero, c1.clone())];
    let partner = s.canonical().scale(&int(2)).try_sub(c1)?;
    for class in [c1, &partner] {
        for fam in candidate_systems(s, h, class)? {
            if fam.directions.is_empty() {
                out.push(DegreeInequality::small_degree(&fam.base, class));
            }
        }
    }
    Ok(out)
}

/// Target side at a close polarization of `h_target`, source side at the
/// pulled-back ray (or a close polarization in its chamber).
pub fn contradiction_report(
    hyp: &DiffeoHypothesis,
    e_target: &BundleTopology,
    h_target: &LatticeClass,
    budget: SearchBudget,
) -> Result<ContradictionReport, VerdictError> {
    let t = &hyp.target;
    let s = &hyp.source;
    let c_target = make_spin_c(-t.canonical())?;
    let (moved, anti_src, delta) = transport(hyp, e_target, &c_target)?;

    let mut target = SideReport { surface: t.name().to_string(), polarization_search: None, verdict: None, notes: Vec::new() };
    let h0 = Polarization::best(t, h_target.clone())?;
    let constraints = degree_constraints(t, h_target, &e_target.c1)?;
    let mut h_eps_target = None;
    match close_polarization(t, &h0, &e_target.c1, &e_target.c2, &constraints, budget) {
        Ok(close) => {
            let opts = StatusOptions { simplicity_polarization: Some(h_target.clone()) };
            target.verdict = Some(spin_poly_status(t, &close.polarization, &c_target, e_target, &opts)?);
            target.notes.push(format!(
                "H^ε = {} = {}·({}) + ({})",
                close.class(),
                close.scale,
                h_target,
                close.correction
            ));
            h_eps_target = Some(close.class().clone());
            target.polarization_search = Some(close);
        }
        Err(err) => target.notes.push(format!("no close polarization: {err}")),
    }

    let mut source = SideReport { surface: s.name().to_string(), polarization_search: None, verdict: None, notes: Vec::new() };
    if let Some(he) = h_eps_target {
        let pulled = hyp.pull(&he)?;
        source.notes.push(format!("pulled-back ray f*(H^ε) = {pulled}"));
        let opts = StatusOptions::default();
        match Polarization::ample(s, pulled.clone()) {
            Ok(p) => source.verdict = Some(spin_poly_status(s, &p, &anti_src, &moved, &opts)?),
            Err(why) => {
                source.notes.push(format!("f*(H^ε) is not ample on the source: {why}"));
                match Polarization::best(s, pulled.clone()) {
                    Ok(p) => match close_polarization(s, &p, &moved.c1, &moved.c2, &[], budget) {
                        Ok(close) => {
                            source.verdict = Some(spin_poly_status(s, &close.polarization, &anti_src, &moved, &opts)?);
                            source.polarization_search = Some(close);
                        }
                        Err(err) => source.notes.push(format!("no close polarization: {err}")),
                    },
                    Err(err) => source.notes.push(format!("f*(H^ε) is not even nef: {err}")),
                }
            }
        }
    }

    let pair = (status_of(&target), status_of(&source));
    let outcome = match pair {
        (Some(Status::CertifiedNonzero), Some(Status::CertifiedZero))
        | (Some(Status::CertifiedZero), Some(Status::CertifiedNonzero)) => Outcome::Contradiction,
        _ => Outcome::Inconclusive,
    };
    Ok(ContradictionReport {
        outcome,
        target_type_text: e_target.to_string(),
        target_type: e_target.clone(),
        transported_type_text: moved.to_string(),
        transported_type: moved,
        spin_c_delta: delta,
        canonical_increment: hyp.canonical_increment.clone(),
        target,
        source,
    })
}

/// Named scenario presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScenarioName {
    FakePlane,
    FakeF1,
    FakeQuadric,
    /// F1 against itself: no contradiction is expected.
    Identity,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 4] =
        [ScenarioName::FakePlane, ScenarioName::FakeF1, ScenarioName::FakeQuadric, ScenarioName::Identity];

    pub fn key(self) -> &'static str {
        match self {
            ScenarioName::FakePlane => "fake-plane",
            ScenarioName::FakeF1 => "fake-f1",
            ScenarioName::FakeQuadric => "fake-quadric",
            ScenarioName::Identity => "identity",
        }
    }

    pub fn parse(s: &str) -> Result<Self, VerdictError> {
        Self::ALL.into_iter().find(|n| n.key() == s).ok_or_else(|| VerdictError::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: ScenarioName,
    pub hypothesis: DiffeoHypothesis,
    /// c₁ of the target type, in target coordinates.
    pub c1: LatticeClass,
    /// Polarization on the target (possibly a nef limit).
    pub polarization: LatticeClass,
}

impl Scenario {
    pub fn bundle(&self, c2: impl Into<Int>) -> BundleTopology {
        BundleTopology::new(self.c1.clone(), c2)
    }

    pub fn run(&self, c2: impl Into<Int>, budget: SearchBudget) -> Result<ContradictionReport, VerdictError> {
        contradiction_report(&self.hypothesis, &self.bundle(c2), &self.polarization, budget)
    }
}

pub fn scenario(name: ScenarioName) -> Result<Scenario, VerdictError> {
    let (source, target, c1, h): (SurfaceModel, SurfaceModel, Vec<i64>, Vec<i64>) = match name {
        ScenarioName::FakePlane => (preset(Preset::CP2), preset(Preset::FakePlanePartner), vec![1], vec![1]),
        ScenarioName::FakeF1 => (preset(Preset::F1), preset(Preset::F1Partner), vec![1, 0], vec![3, -1]),
        ScenarioName::FakeQuadric => {
            (blow_up(&quadric()), preset(Preset::QuadricBlowupPartner), vec![1, 1, 1], vec![1, 1, 0])
        }
        ScenarioName::Identity => (preset(Preset::F1), preset(Preset::F1), vec![1, 0], vec![3, -1]),
    };
    let c1 = target.class(c1)?;
    let polarization = target.class(h)?;
    let hypothesis = DiffeoHypothesis::identity(source, target)?;
    Ok(Scenario { name, hypothesis, c1, polarization })
}

/// On the quadric's even lattice c₁² is even, so d = 4c₂ − c₁² − 3 is odd.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadricParityCheck {
    pub c1: LatticeClass,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub d: Int,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub d1: Int,
    pub d_is_odd: bool,
}

pub fn quadric_parity_check(c1: &[i64], c2: impl Into<Int>) -> Result<QuadricParityCheck, VerdictError> {
    let s = quadric_partner();
    let c1 = s.class(c1.iter().copied())?;
    let c = make_spin_c(-s.canonical())?;
    let e = BundleTopology::new(c1.clone(), c2);
    let r = vdim(&e, s.pic(), &c, &c.mod8_quotient())?;
    let d_is_odd = !(&r.d % int(2)).is_zero();
    Ok(QuadricParityCheck { c1, d: r.d, d1: r.d1, d_is_odd })
}
