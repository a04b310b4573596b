//! Index, dimension, parity and vanishing formulas for rank-2 bundles.
//!
//! Sign conventions: the Brill–Noether dimension is defined as
//! `d₁ = d − (1 − χ_C(E))`, which carries `+2χ_C(L₀)`; a Spin^c change by
//! `2δ` adds `c₁·δ + δ(δ + C)`; and `γ^{C+2δ}(c₁, c₂) = γ^{C}(c₁ + 2δ,
//! c₂ + c₁·δ + δ²)`. The derivation tests in `tests/sign_derivations.rs`
//! check each of these against the other formulas in this module.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ceil_rational, exact_half, int, modulo, rat_from_int, rational, Int, Rational};
use crate::lattice::{IntersectionLattice, LatticeClass, LatticeError, SpinCStructure};
use crate::surface::{Polarization, SurfaceError, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("c1·(c1 + C) = {0} is odd; C is not characteristic")]
    ParityViolation(Int),
    #[error("b2+ = {0} is even; dimensions need b2+ odd")]
    EvenB2Plus(usize),
    #[error("χ_C(L0) = {computed} for C = −K but χ(O_S) = {expected}")]
    ChiMismatch { computed: Int, expected: Int },
}

/// Topological type (2, c₁, c₂) of a U(2)-bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleTopology {
    pub c1: LatticeClass,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub c2: Int,
}

impl BundleTopology {
    pub fn new(c1: LatticeClass, c2: impl Into<Int>) -> Self {
        Self { c1, c2: c2.into() }
    }

    pub const fn rank(&self) -> u32 {
        2
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        self.c1.lattice()
    }

    /// Bogomolov-type discriminant 4c₂ − c₁², unchanged by twisting.
    pub fn discriminant(&self) -> Int {
        int(4) * &self.c2 - self.c1.square()
    }
}

impl fmt::Display for BundleTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(2, {}, {})", self.c1, self.c2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub chi_c_e: Int,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub chi_c_l0: Int,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub d: Int,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub d1: Int,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub vcodim: Int,
}

/// χ_C(L₀) = (C² − I)/8.
pub fn chi_c_l0(lattice: &IntersectionLattice, c: &SpinCStructure) -> Result<Int, IndexError> {
    if c.lattice() != lattice {
        return Err(LatticeError::LatticeMismatch.into());
    }
    Ok(c.mod8_quotient())
}

/// χ_C(L₀) on a surface, cross-checked against χ(O_S) when C = −K.
pub fn chi_c_l0_on(s: &SurfaceModel, c: &SpinCStructure) -> Result<Int, IndexError> {
    let v = chi_c_l0(s.pic(), c)?;
    if c.class() == &(-s.canonical()) && v != s.chi_o() {
        return Err(IndexError::ChiMismatch { computed: v, expected: s.chi_o() });
    }
    Ok(v)
}

/// χ_C(E) = c₁(c₁ + C)/2 + 2χ_C(L₀) − c₂.
pub fn chi_c(e: &BundleTopology, c: &SpinCStructure, chi_l0: &Int) -> Result<Int, IndexError> {
    let twice = e.c1.dot(&e.c1.try_add(c.class())?)?;
    let half = exact_half(&twice).ok_or(IndexError::ParityViolation(twice))?;
    Ok(half + int(2) * chi_l0 - &e.c2)
}

/// E ⊗ L_δ: (2, c₁ + 2δ, c₂ + c₁·δ + δ²).
pub fn twist(e: &BundleTopology, delta: &LatticeClass) -> Result<BundleTopology, IndexError> {
    let c1 = e.c1.try_add(&delta.scale(&int(2)))?;
    let c2 = &e.c2 + e.c1.dot(delta)? + delta.square();
    Ok(BundleTopology { c1, c2 })
}

/// χ_{C+2δ}(E), evaluated as χ_C(E ⊗ L_δ).
pub fn spin_c_change_chi(
    e: &BundleTopology,
    c: &SpinCStructure,
    delta: &LatticeClass,
    chi_l0: &Int,
) -> Result<Int, IndexError> {
    chi_c(&twist(e, delta)?, c, chi_l0)
}

fn half_b2_term(b2_plus: usize) -> Result<Int, IndexError> {
    if b2_plus % 2 == 0 {
        return Err(IndexError::EvenB2Plus(b2_plus));
    }
    Ok(int(3 * (b2_plus as i64 + 1) / 2))
}

/// d = 4c₂ − c₁² − 3(b₂⁺ + 1)/2 and d₁ = d − (1 − χ_C(E)).
pub fn vdim(
    e: &BundleTopology,
    lattice: &IntersectionLattice,
    c: &SpinCStructure,
    chi_l0: &Int,
) -> Result<IndexReport, IndexError> {
    if e.lattice() != lattice {
        return Err(LatticeError::LatticeMismatch.into());
    }
    let chi = chi_c(e, c, chi_l0)?;
    let d = int(4) * &e.c2 - e.c1.square() - half_b2_term(lattice.b2_plus())?;
    let d1 = &d - (int(1) - &chi);
    let vcodim = int(2) - int(2) * &chi;
    Ok(IndexReport { chi_c_e: chi, chi_c_l0: chi_l0.clone(), d, d1, vcodim })
}

/// 3c₂ − 1 − c₁(c₁ + K)/2 − (p_g + 1): expected dimension of the
/// section-carrying stratum for the anticanonical structure.
pub fn expected_dimension(s: &SurfaceModel, e: &BundleTopology) -> Result<Int, IndexError> {
    let twice = e.c1.dot(&e.c1.try_add(s.canonical())?)?;
    let half = exact_half(&twice).ok_or(IndexError::ParityViolation(twice))?;
    Ok(int(3) * &e.c2 - int(1) - half - s.chi_o())
}

/// Lower bound on c₂ for compactness of the cut-down moduli space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompactnessBound {
    /// 3(b₂⁺+1)/2 − c₁·C/2 + 2χ_C(L₀), exact.
    #[serde(serialize_with = "crate::json::serialize_rational")]
    pub threshold: Rational,
    /// Smallest integer c₂ meeting the threshold.
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub min_c2: Int,
}

impl CompactnessBound {
    pub fn admits(&self, c2: &Int) -> bool {
        rat_from_int(c2) >= self.threshold
    }
}

pub fn compactness_bound(
    e: &BundleTopology,
    c: &SpinCStructure,
    b2_plus: usize,
    chi_l0: &Int,
) -> Result<CompactnessBound, IndexError> {
    let c1c = e.c1.dot(c.class())?;
    let threshold = rat_from_int(&half_b2_term(b2_plus)?) - rational(c1c, int(2)) + rat_from_int(&(int(2) * chi_l0));
    let min_c2 = ceil_rational(&threshold);
    Ok(CompactnessBound { threshold, min_c2 })
}

/// How the two Brill–Noether components combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParityMode {
    Sum,
    Difference,
}

fn half_c1_minus_c1k(s: &SurfaceModel, e: &BundleTopology) -> Result<Int, IndexError> {
    let twice = e.c1.square() - e.c1.dot(s.canonical())?;
    exact_half(&twice).ok_or(IndexError::ParityViolation(twice))
}

/// Sum iff c₂ ≡ (c₁² − c₁·K)/2 + 1 (mod 2), i.e. iff 1 − χ(E) is even.
pub fn parity_mode(s: &SurfaceModel, e: &BundleTopology) -> Result<ParityMode, IndexError> {
    let base = half_c1_minus_c1k(s, e)?;
    if modulo(&(&e.c2 - base - int(1)), 2).is_zero() {
        Ok(ParityMode::Sum)
    } else {
        Ok(ParityMode::Difference)
    }
}

/// c₂ ≡ (c₁² − c₁·K)/2 + p_g (mod 2), the parity under which the
/// nonvanishing criterion applies.
pub fn nonvanishing_parity(s: &SurfaceModel, e: &BundleTopology) -> Result<bool, IndexError> {
    let base = half_c1_minus_c1k(s, e)?;
    Ok(modulo(&(&e.c2 - base - int(s.pg() as i64)), 2).is_zero())
}

/// The degrees entering the vanishing window 2K·H ≤ c₁·H ≤ 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingWindow {
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub twice_k_h: Int,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub c1_h: Int,
    pub holds: bool,
}

pub fn vanishing_window(s: &SurfaceModel, h: &Polarization, c1: &LatticeClass) -> Result<VanishingWindow, IndexError> {
    let twice_k_h = int(2) * s.canonical().dot(h.class())?;
    let c1_h = c1.dot(h.class())?;
    let holds = twice_k_h <= c1_h && !c1_h.is_positive();
    Ok(VanishingWindow { twice_k_h, c1_h, holds })
}

/// Certified vanishing for every c₂ when 2K·H ≤ c₁·H ≤ 0.
pub fn vanishing_test(s: &SurfaceModel, h: &Polarization, c1: &LatticeClass) -> Result<bool, IndexError> {
    Ok(vanishing_window(s, h, c1)?.holds)
}

/// E ↦ E*(K): (2, 2K − c₁, c₂ − c₁·K + K²).
pub fn serre_partner(s: &SurfaceModel, e: &BundleTopology) -> Result<BundleTopology, IndexError> {
    let k = s.canonical();
    let c1 = k.scale(&int(2)).try_sub(&e.c1)?;
    let c2 = &e.c2 - e.c1.dot(k)? + k.square();
    Ok(BundleTopology { c1, c2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_spin_c;
    use crate::surface::{preset, Preset};

    fn cls(s: &SurfaceModel, v: &[i64]) -> LatticeClass {
        s.class(v.iter().copied()).unwrap()
    }

    fn anti(s: &SurfaceModel) -> SpinCStructure {
        make_spin_c(-s.canonical()).unwrap()
    }

    #[test]
    fn chi_l0_examples() {
        for p in [Preset::CP2, Preset::F1, Preset::QuadricBlowupPartner] {
            let s = preset(p);
            assert_eq!(chi_c_l0_on(&s, &anti(&s)).unwrap(), int(1), "{p:?}");
        }
        let q = preset(Preset::QuadricBlowupPartner);
        assert_eq!(anti(&q).class().square(), int(7));
        assert_eq!(q.pic().signature(), -1);
    }

    #[test]
    fn chi_c_examples() {
        let cp2 = preset(Preset::CP2);
        let c = anti(&cp2);
        let trivial = BundleTopology::new(cp2.pic().zero(), 0);
        assert_eq!(chi_c(&trivial, &c, &int(1)).unwrap(), int(2));
        for c2 in -5..10 {
            let e = BundleTopology::new(cls(&cp2, &[1]), c2);
            assert_eq!(chi_c(&e, &c, &int(1)).unwrap(), int(4 - c2));
        }
        let f1 = preset(Preset::F1);
        let e = BundleTopology::new(cls(&f1, &[1, 0]), 1);
        assert_eq!(chi_c(&e, &anti(&f1), &int(1)).unwrap(), int(3));
    }

    #[test]
    fn twist_examples() {
        let cp2 = preset(Preset::CP2);
        let e = BundleTopology::new(cls(&cp2, &[1]), 4);
        let t = twist(&e, &cls(&cp2, &[-3])).unwrap();
        assert_eq!(t, BundleTopology::new(cls(&cp2, &[-5]), 10));
        assert_eq!(twist(&e, &cp2.pic().zero()).unwrap(), e);
        let f1 = preset(Preset::F1);
        let e = BundleTopology::new(cls(&f1, &[1, 0]), 0);
        let t = twist(&e, &cls(&f1, &[-3, 1])).unwrap();
        assert_eq!(t, BundleTopology::new(cls(&f1, &[-5, 2]), 5));
    }

    #[test]
    fn spin_c_change_examples() {
        let cp2 = preset(Preset::CP2);
        let c = anti(&cp2);
        for c2 in 0..6 {
            let e = BundleTopology::new(cls(&cp2, &[1]), c2);
            assert_eq!(
                spin_c_change_chi(&e, &c, &cp2.pic().zero(), &int(1)).unwrap(),
                chi_c(&e, &c, &int(1)).unwrap()
            );
            assert_eq!(spin_c_change_chi(&e, &c, &cls(&cp2, &[-3]), &int(1)).unwrap(), int(1 - c2));
        }
    }

    #[test]
    fn vdim_examples() {
        let cp2 = preset(Preset::CP2);
        for c2 in 0..8 {
            let e = BundleTopology::new(cls(&cp2, &[1]), c2);
            let r = vdim(&e, cp2.pic(), &anti(&cp2), &int(1)).unwrap();
            assert_eq!(r.d, int(4 * c2 - 4));
            assert_eq!(r.d1, int(3 * c2 - 1));
            assert_eq!(&r.d - &r.d1, int(1) - &r.chi_c_e);
            assert_eq!(r.vcodim, int(2) - int(2) * &r.chi_c_e);
        }
        let p = preset(Preset::F1Partner);
        for c2 in 0..8 {
            let e = BundleTopology::new(cls(&p, &[1, 0]), c2);
            let r = vdim(&e, p.pic(), &anti(&p), &int(1)).unwrap();
            assert_eq!(r.d1, int(3 * c2 - 4));
            assert_eq!(r.d1, expected_dimension(&p, &e).unwrap());
        }
    }

    #[test]
    fn vdim_rejects_even_b2_plus() {
        let lat = IntersectionLattice::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
        let c = make_spin_c(lat.class([1, 1]).unwrap()).unwrap();
        let e = BundleTopology::new(lat.zero(), 1);
        assert_eq!(vdim(&e, &lat, &c, &int(0)).unwrap_err(), IndexError::EvenB2Plus(2));
    }

    #[test]
    fn compactness_examples() {
        let cp2 = preset(Preset::CP2);
        let e = BundleTopology::new(cls(&cp2, &[1]), 0);
        let b = compactness_bound(&e, &anti(&cp2), 1, &int(1)).unwrap();
        assert_eq!(b.threshold, rational(int(7), int(2)));
        assert_eq!(b.min_c2, int(4));
        assert!(b.admits(&int(4)) && !b.admits(&int(3)));

        let f1 = preset(Preset::F1);
        let e = BundleTopology::new(f1.pic().zero(), 0);
        assert_eq!(compactness_bound(&e, &anti(&f1), 1, &int(1)).unwrap().min_c2, int(5));
    }

    #[test]
    fn parity_examples() {
        let fake = preset(Preset::FakePlanePartner);
        for c2 in 0..10 {
            let e = BundleTopology::new(cls(&fake, &[1]), c2);
            let mode = parity_mode(&fake, &e).unwrap();
            assert_eq!(mode == ParityMode::Sum, c2 % 2 == 0);
            assert_eq!(nonvanishing_parity(&fake, &e).unwrap(), c2 % 2 == 1);
        }
        let cp2 = preset(Preset::CP2);
        for c2 in 0..6 {
            let zero = BundleTopology::new(cp2.pic().zero(), c2);
            assert_eq!(parity_mode(&cp2, &zero).unwrap() == ParityMode::Sum, c2 % 2 == 1);
            let e = BundleTopology::new(cls(&cp2, &[1]), c2);
            assert_eq!(parity_mode(&cp2, &e).unwrap() == ParityMode::Sum, c2 % 2 == 1);
        }
    }

    #[test]
    fn vanishing_examples() {
        let cp2 = preset(Preset::CP2);
        let h = Polarization::ample(&cp2, cls(&cp2, &[1])).unwrap();
        let w = vanishing_window(&cp2, &h, &cls(&cp2, &[-5])).unwrap();
        assert_eq!((w.twice_k_h.clone(), w.c1_h.clone(), w.holds), (int(-6), int(-5), true));
        assert!(!vanishing_test(&cp2, &h, &cls(&cp2, &[1])).unwrap());

        let f1 = preset(Preset::F1);
        let h = Polarization::ample(&f1, cls(&f1, &[3, -1])).unwrap();
        let w = vanishing_window(&f1, &h, &cls(&f1, &[-5, 2])).unwrap();
        assert_eq!((w.twice_k_h, w.c1_h, w.holds), (int(-16), int(-13), true));
    }

    #[test]
    fn serre_partner_examples() {
        let fake = preset(Preset::FakePlanePartner);
        let e = BundleTopology::new(cls(&fake, &[1]), 3);
        assert_eq!(serre_partner(&fake, &e).unwrap(), BundleTopology::new(cls(&fake, &[5]), 9));
        assert_eq!(serre_partner(&fake, &serre_partner(&fake, &e).unwrap()).unwrap(), e);
        let p = preset(Preset::F1Partner);
        let e = BundleTopology::new(cls(&p, &[1, 0]), 3);
        assert_eq!(serre_partner(&p, &e).unwrap(), BundleTopology::new(cls(&p, &[5, -2]), 8));
    }
}
