//! H-semisimplicity and H-simplicity certificates.
//!
//! A class c₁ is H-semisimple when every candidate curve class C with
//! 2C·H < c₁·H satisfies C·K + C² ≤ c₁·C. Candidates are C = 0 and the
//! nonzero classes with C·H ≥ 0 passing the surface's numerical
//! constraints. They are sliced by D = C·H, and each slice is an affine
//! lattice parameterized by at most two integers, on which the inequality
//! becomes a quadratic decided exactly by [`kernel`].

pub mod kernel;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{floor_rational, int, rational, Int};
use crate::lattice::{LatticeClass, LatticeError};
use crate::linalg::row_reduction;
use crate::surface::{SurfaceError, SurfaceModel};

pub use kernel::{decide_quadratic_nonpositive, Decision, Domain, KernelError, LinearFilter, Quadratic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicityError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("slices of rank {rank} leave {params} free parameters; at most 2 are supported")]
    UnboundedDegree { rank: usize, params: usize },
    #[error("polarization {0} has non-positive square")]
    NonPositivePolarization(String),
}

/// Which part of the candidate set a family covers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKey {
    /// The empty curve C = 0.
    Zero,
    /// Nonzero classes with C·H = degree.
    Degree {
        #[serde(serialize_with = "crate::json::serialize_int")]
        degree: Int,
    },
}

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKey::Zero => write!(f, "C = 0"),
            FamilyKey::Degree { degree } => write!(f, "C·H = {degree}"),
        }
    }
}

/// `base + Σ tᵢ·directionsᵢ` over integer parameters passing `filters`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveFamily {
    pub key: FamilyKey,
    pub base: LatticeClass,
    pub directions: Vec<LatticeClass>,
    pub filters: Vec<LinearFilter>,
}

impl CurveFamily {
    pub fn params(&self) -> usize {
        self.directions.len()
    }

    pub fn instantiate(&self, t: &[Int]) -> LatticeClass {
        let mut c = self.base.clone();
        for (ti, d) in t.iter().zip(&self.directions) {
            c = &c + &d.scale(ti);
        }
        c
    }

    pub fn domain(&self) -> Domain {
        Domain { lower: vec![None; self.params()], upper: vec![None; self.params()], filters: self.filters.clone() }
    }

    /// Parameters t with `instantiate(t) = c` inside the domain, if any.
    pub fn locate(&self, c: &LatticeClass) -> Option<Vec<Int>> {
        let diff = c.try_sub(&self.base).ok()?;
        let n = diff.coords().len();
        let t: Vec<Int> = match self.params() {
            0 => Vec::new(),
            1 => {
                let d = self.directions[0].coords();
                let i = (0..n).find(|&i| !d[i].is_zero())?;
                vec![&diff.coords()[i] / &d[i]]
            }
            _ => {
                let (d, e) = (self.directions[0].coords(), self.directions[1].coords());
                let (i, j, det) = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .map(|(i, j)| (i, j, &d[i] * &e[j] - &d[j] * &e[i]))
                    .find(|(_, _, det)| !det.is_zero())?;
                let x = diff.coords();
                let t1 = &x[i] * &e[j] - &x[j] * &e[i];
                let t2 = &d[i] * &x[j] - &d[j] * &x[i];
                vec![&t1 / &det, &t2 / &det]
            }
        };
        (self.instantiate(&t) == *c && self.domain().contains(&t)).then_some(t)
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        let names: &[&str] = if self.params() == 1 { &["t"] } else { &["s", "t"] };
        for (n, d) in names.iter().zip(&self.directions) {
            write!(f, " + {n}·({d})")?;
        }
        Ok(())
    }
}

/// The degree D = C·H ranges over 0 ≤ D ≤ ⌊(c₁·H − 1)/2⌋.
fn degree_cap(c1h: &Int) -> Int {
    floor_rational(&rational(c1h - int(1), int(2)))
}

/// Families covering every candidate C with 2C·H < c₁·H exactly once.
pub fn candidate_systems(s: &SurfaceModel, h: &LatticeClass, c1: &LatticeClass) -> Result<Vec<CurveFamily>, SimplicityError> {
    if !h.square().is_positive() {
        return Err(SimplicityError::NonPositivePolarization(h.to_string()));
    }
    let pic = s.pic();
    let n = pic.rank();
    if n > 3 {
        return Err(SimplicityError::UnboundedDegree { rank: n, params: n - 1 });
    }
    let c1h = c1.dot(h)?;
    let mut out = Vec::new();
    if !c1h.is_positive() {
        return Ok(out);
    }
    let zero = pic.zero();
    if !s.satisfies_constraints(&zero)? {
        out.push(CurveFamily { key: FamilyKey::Zero, base: zero.clone(), directions: Vec::new(), filters: Vec::new() });
    }
    let gh: Vec<Int> = pic.gram().iter().map(|r| r.iter().zip(h.coords()).map(|(a, b)| a * b).sum()).collect();
    let (g, u) = row_reduction(&gh);
    let column = |j: usize| pic.class((0..n).map(|i| u[i][j].clone()));
    let directions: Vec<LatticeClass> = (1..n).map(column).collect::<Result<_, _>>()?;
    let particular = column(0)?;
    let cap = degree_cap(&c1h);
    let mut d = Int::zero();
    while d <= cap {
        let degree = d.clone();
        d += 1;
        if g.is_zero() || !(&degree % &g).is_zero() {
            continue;
        }
        let base = particular.scale(&(&degree / &g));
        let mut filters = Vec::new();
        let mut empty = false;
        for con in s.constraints() {
            let x = s.constraint_class(con);
            let coeffs: Vec<Int> = directions.iter().map(|dir| dir.dot(x)).collect::<Result<_, _>>()?;
            let constant = base.dot(x)? - &con.bound;
            let f = LinearFilter { coeffs, constant };
            if f.is_constant() {
                empty |= f.constant.is_negative();
            } else {
                filters.push(f);
            }
        }
        if empty || family_is_empty(&filters) {
            continue;
        }
        out.push(CurveFamily { key: FamilyKey::Degree { degree }, base, directions: directions.clone(), filters });
    }
    Ok(out)
}

/// Detects one-parameter families whose filters leave no integer.
fn family_is_empty(filters: &[LinearFilter]) -> bool {
    if filters.is_empty() || filters[0].coeffs.len() != 1 {
        return false;
    }
    let (mut lo, mut hi): (Option<Int>, Option<Int>) = (None, None);
    for f in filters {
        let (a, c) = (&f.coeffs[0], &f.constant);
        let q = rational(-c.clone(), a.clone());
        if a.is_positive() {
            let v = crate::arith::ceil_rational(&q);
            lo = Some(lo.map_or(v.clone(), |l: Int| l.max(v)));
        } else {
            let v = floor_rational(&q);
            hi = Some(hi.map_or(v.clone(), |h: Int| h.min(v)));
        }
    }
    matches!((lo, hi), (Some(l), Some(h)) if l > h)
}

/// C·K + C² − c₁·C on the family, as a polynomial in its parameters.
pub fn family_polynomial(s: &SurfaceModel, c1: &LatticeClass, fam: &CurveFamily) -> Result<Quadratic, SimplicityError> {
    let k = s.canonical();
    let b = &fam.base;
    let dirs = &fam.directions;
    let m = dirs.len();
    let mut quad = vec![vec![Int::zero(); m]; m];
    for i in 0..m {
        quad[i][i] = dirs[i].square();
        for j in i + 1..m {
            quad[i][j] = int(2) * dirs[i].dot(&dirs[j])?;
        }
    }
    let lin = dirs
        .iter()
        .map(|d| Ok(int(2) * b.dot(d)? + d.dot(k)? - c1.dot(d)?))
        .collect::<Result<Vec<_>, LatticeError>>()?;
    let constant = b.dot(k)? + b.square() - c1.dot(b)?;
    Ok(Quadratic::new(quad, lin, constant))
}

/// The outcome for one family: its polynomial, the decision, and a
/// violating class when the inequality fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyOutcome {
    pub family: CurveFamily,
    pub family_text: String,
    pub polynomial: Quadratic,
    pub polynomial_text: String,
    pub decision: Decision,
    pub violating_class: Option<LatticeClass>,
    /// C² + C·K and c₁·C for a single class.
    #[serde(serialize_with = "crate::json::serialize_opt_int")]
    pub lhs: Option<Int>,
    #[serde(serialize_with = "crate::json::serialize_opt_int")]
    pub rhs: Option<Int>,
}

impl FamilyOutcome {
    pub fn holds(&self) -> bool {
        self.decision.holds()
    }
}

/// Decides C·K + C² ≤ c₁·C on every member of `fam`.
pub fn check_inequality(s: &SurfaceModel, c1: &LatticeClass, fam: &CurveFamily) -> Result<FamilyOutcome, SimplicityError> {
    let polynomial = family_polynomial(s, c1, fam)?;
    let decision = decide_quadratic_nonpositive(&polynomial, &fam.domain())?;
    let violating_class = decision.witness().map(|w| fam.instantiate(w));
    let (lhs, rhs) = if fam.directions.is_empty() {
        let b = &fam.base;
        (Some(b.square() + b.dot(s.canonical())?), Some(c1.dot(b)?))
    } else {
        (None, None)
    };
    Ok(FamilyOutcome {
        lhs,
        rhs,
        family_text: fam.to_string(),
        polynomial_text: format!("{polynomial} ≤ 0"),
        family: fam.clone(),
        polynomial,
        decision,
        violating_class,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemisimplicityReport {
    pub class_checked: LatticeClass,
    pub class_text: String,
    pub polarization: LatticeClass,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub degree: Int,
    pub families: Vec<FamilyOutcome>,
    pub semisimple: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicityCertificate {
    pub class_checked: LatticeClass,
    pub polarization: LatticeClass,
    pub primary: SemisimplicityReport,
    /// The same check for 2K − c₁.
    pub partner: SemisimplicityReport,
    pub semisimple: bool,
    pub simple: bool,
}

pub fn check_semisimple(s: &SurfaceModel, h: &LatticeClass, c1: &LatticeClass) -> Result<SemisimplicityReport, SimplicityError> {
    let families = candidate_systems(s, h, c1)?
        .iter()
        .map(|f| check_inequality(s, c1, f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SemisimplicityReport {
        class_checked: c1.clone(),
        class_text: c1.to_string(),
        polarization: h.clone(),
        degree: c1.dot(h)?,
        semisimple: families.iter().all(FamilyOutcome::holds),
        families,
    })
}

pub fn check_simple(s: &SurfaceModel, h: &LatticeClass, c1: &LatticeClass) -> Result<SimplicityCertificate, SimplicityError> {
    let primary = check_semisimple(s, h, c1)?;
    let partner_class = s.canonical().scale(&int(2)).try_sub(c1)?;
    let partner = check_semisimple(s, h, &partner_class)?;
    Ok(SimplicityCertificate {
        class_checked: c1.clone(),
        polarization: h.clone(),
        semisimple: primary.semisimple,
        simple: primary.semisimple && partner.semisimple,
        primary,
        partner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{preset, Preset};

    fn cls(s: &SurfaceModel, v: &[i64]) -> LatticeClass {
        s.class(v.iter().copied()).unwrap()
    }

    #[test]
    fn fake_plane_families() {
        let s = preset(Preset::FakePlanePartner);
        let h = cls(&s, &[1]);
        let fams = candidate_systems(&s, &h, &cls(&s, &[5])).unwrap();
        let members: Vec<String> = fams.iter().map(|f| f.base.to_string()).collect();
        assert_eq!(members, vec!["0", "h", "2h"]);
        assert!(fams.iter().all(|f| f.params() == 0));
        let fams = candidate_systems(&s, &h, &h).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].key, FamilyKey::Zero);
    }

    #[test]
    fn fake_plane_is_simple() {
        let s = preset(Preset::FakePlanePartner);
        let h = cls(&s, &[1]);
        let cert = check_simple(&s, &h, &h).unwrap();
        assert!(cert.simple);
        let tails: Vec<Int> = cert.partner.families.iter().map(|f| f.polynomial.constant.clone()).collect();
        assert_eq!(tails, vec![int(0), int(-1), int(0)]);
        let sides: Vec<(Int, Int)> =
            cert.partner.families.iter().map(|f| (f.lhs.clone().unwrap(), f.rhs.clone().unwrap())).collect();
        assert_eq!(sides, vec![(int(0), int(0)), (int(4), int(5)), (int(10), int(10))]);
    }

    #[test]
    fn f1_partner_family() {
        let s = preset(Preset::F1Partner);
        let k = s.canonical().clone();
        let h = cls(&s, &[1, 0]);
        let fams = candidate_systems(&s, &k, &h).unwrap();
        assert_eq!(fams.len(), 2);
        let fam = &fams[1];
        assert_eq!(fam.key, FamilyKey::Degree { degree: int(1) });
        for x in -5..5 {
            let c = cls(&s, &[x, 1 - 3 * x]);
            let t = fam.locate(&c).expect("C = xh − (3x − 1)e lies in the family");
            let p = family_polynomial(&s, &h, fam).unwrap();
            assert_eq!(p.eval(&t), int(-8 * x * x + 5 * x));
        }
        assert!(check_simple(&s, &k, &h).unwrap().simple);
    }

    #[test]
    fn quadric_partner_families() {
        let s = preset(Preset::QuadricBlowupPartner);
        let h = cls(&s, &[1, 1, 0]);
        let c1 = cls(&s, &[1, 1, 1]);
        let fams = candidate_systems(&s, &h, &c1).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].params(), 2);
        let cert = check_simple(&s, &h, &c1).unwrap();
        assert!(cert.simple);
        assert_eq!(cert.partner.families.len(), 3);
    }

    #[test]
    fn failing_class_has_witness() {
        let s = preset(Preset::F1);
        let h = cls(&s, &[3, -1]);
        let c1 = cls(&s, &[-5, 2]);
        let r = check_semisimple(&s, &h, &c1).unwrap();
        assert!(r.families.is_empty() && r.semisimple);
        let c1 = cls(&s, &[7, -3]);
        let r = check_semisimple(&s, &h, &c1).unwrap();
        for f in &r.families {
            if let Some(c) = &f.violating_class {
                let lhs = c.dot(s.canonical()).unwrap() + c.square();
                assert!(lhs > c1.dot(c).unwrap());
            }
        }
    }
}
