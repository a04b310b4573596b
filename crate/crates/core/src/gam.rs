//! Dimension counts for extension varieties and the asymptotic threshold
//! N(H, c₁) as an explicit maximum of named bounds.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{int, Int};
use crate::index::{compactness_bound, expected_dimension, serre_partner, vdim, BundleTopology, IndexError};
use crate::lattice::{LatticeClass, SpinCStructure};
use crate::surface::{h0, riemann_roch_chi, SurfaceError, SurfaceModel};

/// E ↦ (2, c₁ − 2Cᵢ, c₂ − c₁·Cᵢ + Cᵢ²).
pub fn gam_shift(e: &BundleTopology, ci: &LatticeClass) -> Result<BundleTopology, IndexError> {
    let c1 = e.c1.try_sub(&ci.scale(&int(2)))?;
    let c2 = &e.c2 - e.c1.dot(ci)? + ci.square();
    Ok(BundleTopology { c1, c2 })
}

/// Cᵢ·K + Cᵢ² − c₁·Cᵢ.
pub fn tail_term(s: &SurfaceModel, c1: &LatticeClass, ci: &LatticeClass) -> Result<Int, IndexError> {
    Ok(ci.dot(s.canonical())? + ci.square() - c1.dot(ci)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailTerm {
    pub class: LatticeClass,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub value: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GamReport {
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub target_vdim: Int,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub fibre_dim_generic: Int,
    /// Negative generic fibre dimension: the extension space is generically empty.
    pub extension_space_empty: bool,
    #[serde(serialize_with = "crate::json::serialize_opt_int")]
    pub h0_c1_plus_k: Option<Int>,
    #[serde(serialize_with = "crate::json::serialize_opt_int")]
    pub h1_c1_plus_k: Option<Int>,
    #[serde(serialize_with = "crate::json::serialize_opt_int")]
    pub delta_locus_bound: Option<Int>,
    #[serde(serialize_with = "crate::json::serialize_opt_int")]
    pub delta_preimage_bound: Option<Int>,
    #[serde(serialize_with = "crate::json::serialize_opt_int")]
    pub c2_threshold_delta: Option<Int>,
    pub tail_terms: Vec<TailTerm>,
}

fn known(r: Result<Int, SurfaceError>) -> Result<Option<Int>, IndexError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(SurfaceError::OracleUnavailable(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Dimension estimates for E, with tail terms over the listed classes.
pub fn gam_dimension_report(
    s: &SurfaceModel,
    e: &BundleTopology,
    candidates: &[LatticeClass],
) -> Result<GamReport, IndexError> {
    let l = e.c1.try_add(s.canonical())?;
    let chi = riemann_roch_chi(s, &l)?;
    let target_vdim = expected_dimension(s, e)?;
    let fibre = &e.c2 - &chi - int(1);
    let h0_l = known(h0(s, &l))?;
    // h² (L) = h⁰(K − L) = h⁰(−c₁).
    let h2_l = known(h0(s, &-&e.c1))?;
    let h1_l = match (&h0_l, &h2_l) {
        (Some(a), Some(b)) => Some(a + b - &chi),
        _ => None,
    };
    let delta_locus_bound = h0_l.as_ref().map(|h| &e.c2 + h - int(1));
    let delta_preimage_bound = match (&h0_l, &h1_l) {
        (Some(a), Some(b)) => Some(int(2) * &e.c2 - int(2) + a + b),
        _ => None,
    };
    let c2_threshold_delta = h0_l.as_ref().map(|h| int(2) * h + int(1));
    let tail_terms = candidates
        .iter()
        .map(|c| Ok(TailTerm { class: c.clone(), value: tail_term(s, &e.c1, c)? }))
        .collect::<Result<Vec<_>, IndexError>>()?;
    Ok(GamReport {
        target_vdim,
        extension_space_empty: fibre.is_negative(),
        fibre_dim_generic: fibre,
        h0_c1_plus_k: h0_l,
        h1_c1_plus_k: h1_l,
        delta_locus_bound,
        delta_preimage_bound,
        c2_threshold_delta,
        tail_terms,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub name: String,
    /// Minimal c₂ forced by this bound; `None` when it could not be evaluated.
    #[serde(serialize_with = "crate::json::serialize_opt_int")]
    pub min_c2: Option<Int>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsymptoticThreshold {
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub n_h_c1: Int,
    pub contributions: Vec<Contribution>,
    /// Some contribution could not be evaluated and was left out of the max.
    pub incomplete: bool,
}

impl AsymptoticThreshold {
    pub fn from_contributions(contributions: Vec<Contribution>) -> Self {
        let n = contributions.iter().filter_map(|c| c.min_c2.clone()).max().unwrap_or_else(Int::zero);
        let incomplete = contributions.iter().any(|c| c.min_c2.is_none());
        Self { n_h_c1: n, contributions, incomplete }
    }

    pub fn admits(&self, c2: &Int) -> bool {
        *c2 >= self.n_h_c1
    }
}

/// Smallest integer c₂ with 3c₂ + offset > 0.
fn first_positive(offset: &Int) -> Int {
    use num_integer::Integer;
    (-offset).div_floor(&int(3)) + int(1)
}

/// N(H, c₁): the largest of the compactness bound, positivity of d₁ for
/// E and its Serre partner, and the extension bounds c₂ > 2h⁰(c₁ + K)
/// for E and for each shift by a listed candidate class.
pub fn asymptotic_threshold(
    s: &SurfaceModel,
    c1: &LatticeClass,
    c: &SpinCStructure,
    candidates: &[LatticeClass],
) -> Result<AsymptoticThreshold, IndexError> {
    let chi_l0 = c.mod8_quotient();
    let at0 = BundleTopology::new(c1.clone(), 0);
    let mut out = Vec::new();

    let cb = compactness_bound(&at0, c, s.pic().b2_plus(), &chi_l0)?;
    out.push(Contribution {
        name: "compactness".into(),
        min_c2: Some(cb.min_c2.clone()),
        detail: format!("c2 >= {} (exact threshold {})", cb.min_c2, cb.threshold),
    });

    let d1_0 = vdim(&at0, s.pic(), c, &chi_l0)?.d1;
    out.push(Contribution {
        name: "positive_dimension".into(),
        min_c2: Some(first_positive(&d1_0)),
        detail: format!("d1 = 3c2 {} > 0", signed(&d1_0)),
    });

    let partner = serre_partner(s, &at0)?;
    let p0 = vdim(&partner, s.pic(), c, &chi_l0)?.d1;
    out.push(Contribution {
        name: "positive_dimension_partner".into(),
        min_c2: Some(first_positive(&p0)),
        detail: format!("partner type {partner} at c2 = 0 shifts by c2; d1 = 3c2 {} > 0", signed(&p0)),
    });

    let mut shifts: Vec<LatticeClass> = vec![s.pic().zero()];
    shifts.extend(candidates.iter().filter(|x| !x.is_zero()).cloned());
    for ci in shifts {
        let shifted = gam_shift(&at0, &ci)?;
        let l = shifted.c1.try_add(s.canonical())?;
        let name = if ci.is_zero() { "extension".to_string() } else { format!("extension_shift[{ci}]") };
        match known(h0(s, &l))? {
            Some(h) => {
                // Shifted c₂ is c₂ + shifted.c2 and must exceed 2h⁰.
                let min = int(2) * &h + int(1) - &shifted.c2;
                out.push(Contribution {
                    name,
                    min_c2: Some(min),
                    detail: format!("h0({l}) = {h}; shifted c2 = c2 {} must exceed {}", signed(&shifted.c2), int(2) * &h),
                });
            }
            None => out.push(Contribution {
                name,
                min_c2: None,
                detail: format!("h0({l}) unavailable on {}", s.name()),
            }),
        }
    }
    Ok(AsymptoticThreshold::from_contributions(out))
}

fn signed(v: &Int) -> String {
    if v.is_negative() {
        format!("- {}", -v)
    } else {
        format!("+ {v}")
    }
}
