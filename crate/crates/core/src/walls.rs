//! Walls of type (c₁, c₂) in the positive cone of a b₂⁺ = 1 lattice,
//! chamber comparison of polarizations and the close-polarization search.
//!
//! A wall is a class e ≢ 0 with e ≡ c₁ (mod 2) and c₁² − 4c₂ ≤ e² ≤ 0; it
//! separates H₁ from H₂ when e·H₁ and e·H₂ have strictly opposite signs.
//!
//! Enumeration is certified. Put M = 4c₂ − c₁². If e separates H₁ and H₂,
//! project e onto the hyperbolic plane P = ⟨H₁, H₂⟩. With x = e·H₁ the
//! projection p satisfies p² ≤ −H₂²x²/(b² − H₁²H₂²), b = H₁·H₂, and
//! p² ≥ e² ≥ −M, so x² ≤ X := M(b² − H₁²H₂²)/H₂². The majorant
//! Q(e) = 2(e·H₁)²/H₁² − e² is positive definite and bounded by
//! R = M + 2X/H₁² on every separating wall, so |eᵢ| ≤ ⌊√(R·(Q⁻¹)ᵢᵢ)⌋.
//! For walls through a ray H the same argument gives R = M.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{exact_half, floor_sqrt_rational, int, modulo, rat_from_int, Int, Rational};
use crate::index::{serre_partner, BundleTopology, IndexError};
use crate::lattice::{IntersectionLattice, LatticeClass, LatticeError, SpinCStructure};
use crate::linalg::{rational_inverse, RatMatrix};
use crate::surface::{Polarization, SurfaceError, SurfaceModel};

/// Upper limit on the number of box points visited by one enumeration.
pub const MAX_BOX_POINTS: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("wall geometry needs b2+ = 1, lattice has b2+ = {0}")]
    B2PlusNotOne(usize),
    #[error("polarization {0} has non-positive square")]
    NonPositiveSquare(String),
    #[error("majorant form is degenerate; enumeration would be infinite")]
    InfiniteEnumeration,
    #[error("certified box has {points} points, above the limit of {limit}")]
    EnumerationTooLarge { points: u128, limit: u128 },
    #[error("{class} is not a wall of type ({c1}, {c2})")]
    NotAWall { class: String, c1: String, c2: Int },
    #[error("no close polarization within scale {max_scale} and correction box {max_box}; obstructions: {obstructions:?}")]
    SearchExhausted { max_scale: u32, max_box: u32, obstructions: Vec<String> },
}

/// A wall class e, normalized so its first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub e: LatticeClass,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub e_square: Int,
}

impl Wall {
    /// Validates the wall conditions and normalizes the sign.
    pub fn new(e: LatticeClass, c1: &LatticeClass, c2: &Int) -> Result<Self, WallError> {
        let not_wall = || WallError::NotAWall { class: e.to_string(), c1: c1.to_string(), c2: c2.clone() };
        if e.is_zero() || e.try_sub(c1)?.halve().is_err() {
            return Err(not_wall());
        }
        let sq = e.square();
        if sq.is_positive() || sq < c1.square() - int(4) * c2 {
            return Err(not_wall());
        }
        let flip = e.coords().iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative);
        let e = if flip { -&e } else { e };
        Ok(Self { e, e_square: sq })
    }

    pub fn class(&self) -> &LatticeClass {
        &self.e
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (e² = {})", self.e, self.e_square)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChamberSeparation {
    pub separating_walls: Vec<Wall>,
    pub same_chamber: bool,
}

fn check_setting(lattice: &IntersectionLattice, c1: &LatticeClass, hs: &[&LatticeClass]) -> Result<(), WallError> {
    if lattice.b2_plus() != 1 {
        return Err(WallError::B2PlusNotOne(lattice.b2_plus()));
    }
    if c1.lattice() != lattice {
        return Err(LatticeError::LatticeMismatch.into());
    }
    for h in hs {
        if h.lattice() != lattice {
            return Err(LatticeError::LatticeMismatch.into());
        }
        if !h.square().is_positive() {
            return Err(WallError::NonPositiveSquare(h.to_string()));
        }
    }
    Ok(())
}

fn small(v: &Int) -> Result<i128, WallError> {
    v.to_i128().ok_or(WallError::EnumerationTooLarge { points: u128::MAX, limit: MAX_BOX_POINTS })
}

/// Coordinate bounds |eᵢ| ≤ ⌊√(R·(Q⁻¹)ᵢᵢ)⌋ for Q(e) = 2(e·H)²/H² − e².
pub fn majorant_box(lattice: &IntersectionLattice, h: &LatticeClass, r: &Rational) -> Result<Vec<Int>, WallError> {
    let g = lattice.gram();
    let n = lattice.rank();
    let gh: Vec<Int> = (0..n).map(|i| g[i].iter().zip(h.coords()).map(|(a, b)| a * b).sum()).collect();
    let h2 = rat_from_int(&h.square());
    let q: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rat_from_int(&(int(2) * &gh[i] * &gh[j])) / &h2 - rat_from_int(&g[i][j]))
                .collect()
        })
        .collect();
    let inv = rational_inverse(&q).ok_or(WallError::InfiniteEnumeration)?;
    Ok((0..n).map(|i| floor_sqrt_rational(&(r * &inv[i][i]))).collect())
}

/// All wall classes (up to sign) inside the box that satisfy `keep`.
fn scan_box(
    lattice: &IntersectionLattice,
    c1: &LatticeClass,
    c2: &Int,
    bounds: &[Int],
    mut keep: impl FnMut(&[i128]) -> bool,
) -> Result<Vec<Wall>, WallError> {
    let n = lattice.rank();
    let gram: Vec<Vec<i128>> = lattice.gram().iter().map(|r| r.iter().map(small).collect()).collect::<Result<_, _>>()?;
    let parity: Vec<i128> = c1.coords().iter().map(|c| if modulo(c, 2).is_zero() { 0 } else { 1 }).collect();
    let bounds: Vec<i128> = bounds.iter().map(small).collect::<Result<_, _>>()?;
    // Lowest value in [-b, b] with the parity of c1.
    let starts: Vec<i128> = (0..n)
        .map(|i| {
            let lo = -bounds[i];
            if (lo - parity[i]).rem_euclid(2) == 0 {
                lo
            } else {
                lo + 1
            }
        })
        .collect();
    let mut points: u128 = 1;
    for i in 0..n {
        if starts[i] > bounds[i] {
            return Ok(Vec::new());
        }
        points = points.saturating_mul(((bounds[i] - starts[i]) / 2 + 1) as u128);
    }
    if points > MAX_BOX_POINTS {
        return Err(WallError::EnumerationTooLarge { points, limit: MAX_BOX_POINTS });
    }
    let min_sq = small(&(c1.square() - int(4) * c2))?;
    let mut e = starts.clone();
    let mut out = Vec::new();
    'outer: loop {
        let first = e.iter().find(|&&x| x != 0);
        if first.is_some_and(|&x| x > 0) {
            let sq: i128 = (0..n).map(|i| e[i] * (0..n).map(|j| gram[i][j] * e[j]).sum::<i128>()).sum();
            if sq <= 0 && sq >= min_sq && keep(&e) {
                let class = lattice.class(e.iter().map(|&x| Int::from(x)))?;
                out.push(Wall::new(class, c1, c2)?);
            }
        }
        for i in (0..n).rev() {
            if e[i] + 2 <= bounds[i] {
                e[i] += 2;
                continue 'outer;
            }
            e[i] = starts[i];
        }
        break;
    }
    out.sort_by(|a, b| a.e.coords().cmp(b.e.coords()));
    Ok(out)
}

fn dot_small(e: &[i128], v: &[i128]) -> i128 {
    e.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn gram_times(lattice: &IntersectionLattice, h: &LatticeClass) -> Result<Vec<i128>, WallError> {
    let g = lattice.gram();
    (0..lattice.rank())
        .map(|i| small(&g[i].iter().zip(h.coords()).map(|(a, b)| a * b).sum::<Int>()))
        .collect()
}

/// Every wall e with e·H₁ and e·H₂ of strictly opposite signs.
pub fn enumerate_separating_walls(
    lattice: &IntersectionLattice,
    c1: &LatticeClass,
    c2: &Int,
    h1: &LatticeClass,
    h2: &LatticeClass,
) -> Result<ChamberSeparation, WallError> {
    check_setting(lattice, c1, &[h1, h2])?;
    let m = int(4) * c2 - c1.square();
    let b = h1.dot(h2)?;
    let (a, c) = (h1.square(), h2.square());
    let spread = &b * &b - &a * &c;
    if m.is_negative() || !spread.is_positive() {
        return Ok(ChamberSeparation { separating_walls: Vec::new(), same_chamber: true });
    }
    let x = rat_from_int(&(&m * &spread)) / rat_from_int(&c);
    let r = rat_from_int(&m) + Rational::from_integer(int(2)) * x / rat_from_int(&a);
    let bounds = majorant_box(lattice, h1, &r)?;
    let (g1, g2) = (gram_times(lattice, h1)?, gram_times(lattice, h2)?);
    let walls = scan_box(lattice, c1, c2, &bounds, |e| {
        let (s1, s2) = (dot_small(e, &g1), dot_small(e, &g2));
        (s1 > 0 && s2 < 0) || (s1 < 0 && s2 > 0)
    })?;
    Ok(ChamberSeparation { same_chamber: walls.is_empty(), separating_walls: walls })
}

/// Every wall e with e·H = 0.
pub fn wall_on_ray(
    lattice: &IntersectionLattice,
    c1: &LatticeClass,
    c2: &Int,
    h: &LatticeClass,
) -> Result<Vec<Wall>, WallError> {
    check_setting(lattice, c1, &[h])?;
    let m = int(4) * c2 - c1.square();
    if m.is_negative() {
        return Ok(Vec::new());
    }
    let bounds = majorant_box(lattice, h, &rat_from_int(&m))?;
    let gh = gram_times(lattice, h)?;
    scan_box(lattice, c1, c2, &bounds, |e| dot_small(e, &gh) == 0)
}

/// Which line bundles a reducible bundle on the wall splits into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SplittingReading {
    /// L_{(c₁+e)/2} ⊕ L_{(c₁−e)/2}.
    #[default]
    Halves,
    /// L_e ⊕ L_{c₁−e}, the literal alternative.
    Literal,
}

/// χ_C(L_σ) = σ(σ + C)/2 + χ_C(L₀).
pub fn chi_line(sigma: &LatticeClass, c: &SpinCStructure, chi_l0: &Int) -> Result<Int, IndexError> {
    let twice = sigma.dot(&sigma.try_add(c.class())?)?;
    let half = exact_half(&twice).ok_or(IndexError::ParityViolation(twice))?;
    Ok(half + chi_l0)
}

/// The two splitting classes of the wall under the chosen reading.
pub fn splitting_classes(
    e: &LatticeClass,
    c1: &LatticeClass,
    reading: SplittingReading,
) -> Result<(LatticeClass, LatticeClass), LatticeError> {
    match reading {
        SplittingReading::Halves => Ok((c1.try_add(e)?.halve()?, c1.try_sub(e)?.halve()?)),
        SplittingReading::Literal => Ok((e.clone(), c1.try_sub(e)?)),
    }
}

/// True iff χ_C is positive on either splitting class.
pub fn important_wall(
    e: &LatticeClass,
    c: &SpinCStructure,
    c1: &LatticeClass,
    chi_l0: &Int,
    reading: SplittingReading,
) -> Result<bool, IndexError> {
    let (a, b) = splitting_classes(e, c1, reading)?;
    Ok(chi_line(&a, c, chi_l0)?.is_positive() || chi_line(&b, c, chi_l0)?.is_positive())
}

/// A strict inequality `left·H < right·H` to be kept when H moves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeInequality {
    pub left: LatticeClass,
    pub right: LatticeClass,
}

impl DegreeInequality {
    pub fn new(left: LatticeClass, right: LatticeClass) -> Self {
        Self { left, right }
    }

    /// `2C·H < c₁·H`.
    pub fn small_degree(c: &LatticeClass, c1: &LatticeClass) -> Self {
        Self { left: c.scale(&int(2)), right: c1.clone() }
    }

    pub fn holds_at(&self, h: &LatticeClass) -> Result<bool, LatticeError> {
        Ok(self.left.dot(h)? < self.right.dot(h)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_scale: u32,
    pub max_box: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_scale: 64, max_box: 8 }
    }
}

/// H^ε = N·H + κ together with the search coordinates that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosePolarization {
    #[serde(serialize_with = "serialize_polarization")]
    pub polarization: Polarization,
    pub scale: u32,
    pub correction: LatticeClass,
}

fn serialize_polarization<S: serde::Serializer>(p: &Polarization, s: S) -> Result<S::Ok, S::Error> {
    p.class().serialize(s)
}

impl ClosePolarization {
    pub fn class(&self) -> &LatticeClass {
        self.polarization.class()
    }
}

/// Correction vectors with ‖κ‖_∞ = r, in lexicographic order.
fn shell(n: usize, r: i64) -> Vec<Vec<i64>> {
    if r == 0 {
        return vec![vec![0; n]];
    }
    let mut out = Vec::new();
    let mut v = vec![-r; n];
    loop {
        if v.iter().any(|x| x.abs() == r) {
            out.push(v.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if v[i] < r {
                v[i] += 1;
                break;
            }
            v[i] = -r;
        }
    }
}

/// The obstruction a candidate H^ε runs into, if any.
fn close_obstruction(
    s: &SurfaceModel,
    h: &LatticeClass,
    cand: &LatticeClass,
    types: &[BundleTopology],
    degree: &[DegreeInequality],
) -> Result<Option<String>, WallError> {
    if let Err(e) = Polarization::ample(s, cand.clone()) {
        return Ok(Some(e.to_string()));
    }
    for d in degree {
        if d.holds_at(h)? && !d.holds_at(cand)? {
            return Ok(Some(format!("{}·H < {}·H fails", d.left, d.right)));
        }
    }
    for t in types {
        if let Some(w) = wall_on_ray(s.pic(), &t.c1, &t.c2, cand)?.first() {
            return Ok(Some(format!("on wall {} of type {}", w, t)));
        }
        let sep = enumerate_separating_walls(s.pic(), &t.c1, &t.c2, h, cand)?;
        if let Some(w) = sep.separating_walls.first() {
            return Ok(Some(format!("wall {} of type {} separates", w, t)));
        }
    }
    Ok(None)
}

/// Searches N = 1, 2, … and corrections κ in growing L∞ shells for an
/// ample H^ε = N·H + κ on no wall of type (c₁, c₂) or of its Serre
/// partner type, keeping every strict inequality in `degree` that holds
/// at H, and with no wall of either type separating H from H^ε.
pub fn close_polarization(
    s: &SurfaceModel,
    h: &Polarization,
    c1: &LatticeClass,
    c2: &Int,
    degree: &[DegreeInequality],
    budget: SearchBudget,
) -> Result<ClosePolarization, WallError> {
    let hc = h.class();
    check_setting(s.pic(), c1, &[hc])?;
    let e = BundleTopology::new(c1.clone(), c2.clone());
    let partner = serre_partner(s, &e)?;
    let types = if partner == e { vec![e] } else { vec![e, partner] };
    let n = s.pic().rank();
    let mut last = Vec::new();
    for scale in 1..=budget.max_scale.max(1) {
        let base = hc.scale(&int(i64::from(scale)));
        for r in 0..=i64::from(budget.max_box) {
            for kappa in shell(n, r) {
                let k = s.class(kappa)?;
                let cand = base.try_add(&k)?;
                match close_obstruction(s, hc, &cand, &types, degree)? {
                    None => return Ok(ClosePolarization { polarization: Polarization::ample(s, cand)?, scale, correction: k }),
                    Some(why) if scale == 1 && r == 0 => last = vec![format!("H itself: {why}")],
                    Some(_) => {}
                }
            }
        }
    }
    Err(WallError::SearchExhausted { max_scale: budget.max_scale, max_box: budget.max_box, obstructions: last })
}

/// Sign of e·H on every listed wall.
pub fn sign_vector(walls: &[Wall], h: &LatticeClass) -> Result<Vec<i8>, LatticeError> {
    walls
        .iter()
        .map(|w| {
            let v = w.e.dot(h)?;
            Ok(if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            })
        })
        .collect()
}
