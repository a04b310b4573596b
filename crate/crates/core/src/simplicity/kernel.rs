//! Exact decision of `f(x) ≤ 0` over the integer points of a domain, for a
//! quadratic polynomial `f` in at most two variables.
//!
//! The two-variable case is reduced to one-variable problems along rows
//! `x = const`. Which rows need checking depends on the quadratic part:
//! a negative definite part confines `{f > 0}` to an ellipse, whose
//! projection onto `x` is an explicit integer range; a finite coordinate
//! range bounds the rows directly; and on all of ℤ² an indefinite or
//! degenerate part is handled by a direction argument.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{extended_gcd, int, Int};

/// Rows visited by one decision before giving up.
pub const MAX_ROWS: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("quadratic part is not negative semidefinite on an infinite constrained domain")]
    UndecidableForm,
    #[error("only 0, 1 or 2 variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("coefficient vectors do not match the number of variables")]
    Shape,
    #[error("{rows} rows would have to be scanned (limit {limit})")]
    RangeTooLarge { rows: Int, limit: u64 },
}

/// `Σ_{i≤j} quad[i][j]·xᵢxⱼ + Σ lin[i]·xᵢ + constant`.
///
/// `quad` is indexed by monomial: `quad[i][i]` multiplies `xᵢ²` and
/// `quad[0][1]` multiplies `x₀x₁`; entries below the diagonal are ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quadratic {
    #[serde(serialize_with = "serialize_matrix")]
    pub quad: Vec<Vec<Int>>,
    #[serde(serialize_with = "crate::json::serialize_ints")]
    pub lin: Vec<Int>,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub constant: Int,
}

fn serialize_matrix<S: serde::Serializer>(m: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Row<'a>(&'a [Int]);
    impl Serialize for Row<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            crate::json::serialize_ints(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for r in m {
        seq.serialize_element(&Row(r))?;
    }
    seq.end()
}

impl Quadratic {
    pub fn new(quad: Vec<Vec<Int>>, lin: Vec<Int>, constant: Int) -> Self {
        Self { quad, lin, constant }
    }

    /// One variable: `a·x² + b·x + c`.
    pub fn univariate(a: i64, b: i64, c: i64) -> Self {
        Self::new(vec![vec![int(a)]], vec![int(b)], int(c))
    }

    /// Two variables: `a·x² + b·xy + c·y² + d·x + e·y + g`.
    pub fn bivariate(a: i64, b: i64, c: i64, d: i64, e: i64, g: i64) -> Self {
        Self::new(vec![vec![int(a), int(b)], vec![int(0), int(c)]], vec![int(d), int(e)], int(g))
    }

    pub fn constant_only(c: Int) -> Self {
        Self::new(Vec::new(), Vec::new(), c)
    }

    pub fn vars(&self) -> usize {
        self.lin.len()
    }

    pub fn eval(&self, x: &[Int]) -> Int {
        let mut acc = self.constant.clone();
        for i in 0..self.vars() {
            acc += &self.lin[i] * &x[i];
            for j in i..self.vars() {
                acc += &self.quad[i][j] * &x[i] * &x[j];
            }
        }
        acc
    }

    fn check_shape(&self) -> Result<(), KernelError> {
        let k = self.vars();
        if self.quad.len() != k || self.quad.iter().any(|r| r.len() != k) {
            return Err(KernelError::Shape);
        }
        Ok(())
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = if self.vars() == 1 { &["t"] } else { &["s", "t"] };
        let mut terms: Vec<(Int, String)> = Vec::new();
        for i in 0..self.vars() {
            for j in i..self.vars() {
                let mono = if i == j { format!("{}²", names[i]) } else { format!("{}{}", names[i], names[j]) };
                terms.push((self.quad[i][j].clone(), mono));
            }
        }
        for i in 0..self.vars() {
            terms.push((self.lin[i].clone(), names[i].to_string()));
        }
        terms.push((self.constant.clone(), String::new()));
        let mut first = true;
        for (c, mono) in terms.into_iter().filter(|(c, _)| !c.is_zero()) {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == int(1) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `coeffs·x + constant ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearFilter {
    #[serde(serialize_with = "crate::json::serialize_ints")]
    pub coeffs: Vec<Int>,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub constant: Int,
}

impl LinearFilter {
    pub fn holds(&self, x: &[Int]) -> bool {
        let v: Int = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<Int>() + &self.constant;
        !v.is_negative()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Integer points satisfying optional per-variable bounds and linear filters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Domain {
    pub lower: Vec<Option<Int>>,
    pub upper: Vec<Option<Int>>,
    pub filters: Vec<LinearFilter>,
}

impl Domain {
    /// All of ℤᵏ.
    pub fn free(k: usize) -> Self {
        Self { lower: vec![None; k], upper: vec![None; k], filters: Vec::new() }
    }

    /// The box `[lo, hi]ᵏ`.
    pub fn cube(k: usize, lo: i64, hi: i64) -> Self {
        Self { lower: vec![Some(int(lo)); k], upper: vec![Some(int(hi)); k], filters: Vec::new() }
    }

    pub fn with_filter(mut self, f: LinearFilter) -> Self {
        self.filters.push(f);
        self
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        let within = x.iter().enumerate().all(|(i, v)| {
            self.lower.get(i).cloned().flatten().is_none_or(|l| *v >= l)
                && self.upper.get(i).cloned().flatten().is_none_or(|u| *v <= u)
        });
        within && self.filters.iter().all(|f| f.holds(x))
    }

    fn is_free(&self) -> bool {
        self.filters.is_empty() && self.lower.iter().chain(&self.upper).all(Option::is_none)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Decision {
    Holds,
    Fails {
        #[serde(serialize_with = "crate::json::serialize_ints")]
        witness: Vec<Int>,
    },
}

impl Decision {
    pub fn holds(&self) -> bool {
        matches!(self, Decision::Holds)
    }

    pub fn witness(&self) -> Option<&[Int]> {
        match self {
            Decision::Holds => None,
            Decision::Fails { witness } => Some(witness),
        }
    }
}

// ---------------------------------------------------------------------------
// Scalar abstraction: small inputs run on i128, everything else on BigInt.

trait Scalar: Clone + Ord + Integer + Signed + fmt::Debug {
    fn of(v: &Int) -> Self;
    fn lift(&self) -> Int;
    fn small(v: i64) -> Self;
}

impl Scalar for i128 {
    fn of(v: &Int) -> Self {
        v.to_i128().expect("range checked before choosing i128")
    }
    fn lift(&self) -> Int {
        Int::from(*self)
    }
    fn small(v: i64) -> Self {
        i128::from(v)
    }
}

impl Scalar for Int {
    fn of(v: &Int) -> Self {
        v.clone()
    }
    fn lift(&self) -> Int {
        self.clone()
    }
    fn small(v: i64) -> Self {
        int(v)
    }
}

fn isqrt<T: Scalar>(v: &T) -> T {
    T::of(&v.lift().sqrt())
}

fn ceil_div<T: Scalar>(a: &T, b: &T) -> T {
    -((-a.clone()).div_floor(b))
}

#[derive(Debug, Clone)]
struct Interval<T> {
    lo: Option<T>,
    hi: Option<T>,
}

impl<T: Scalar> Interval<T> {
    fn is_empty(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(l), Some(h)) if l > h)
    }

    fn clamp(&self, x: T) -> T {
        let x = match &self.lo {
            Some(l) if x < *l => l.clone(),
            _ => x,
        };
        match &self.hi {
            Some(h) if x > *h => h.clone(),
            _ => x,
        }
    }

    fn raise(&mut self, v: T) {
        if self.lo.as_ref().is_none_or(|l| v > *l) {
            self.lo = Some(v);
        }
    }

    fn lower(&mut self, v: T) {
        if self.hi.as_ref().is_none_or(|h| v < *h) {
            self.hi = Some(v);
        }
    }

    /// Applies `q·y + r ≥ 0`; returns false when the constraint is violated outright.
    fn restrict(&mut self, q: &T, r: &T) -> bool {
        if q.is_zero() {
            return !r.is_negative();
        }
        if q.is_positive() {
            self.raise(ceil_div(&-r.clone(), q));
        } else {
            self.lower(r.div_floor(&-q.clone()));
        }
        true
    }
}

/// Some integer y in `iv` with `a·y² + b·y + c > 0`, if one exists.
fn witness_1d<T: Scalar>(a: &T, b: &T, c: &T, iv: &Interval<T>) -> Option<T> {
    if iv.is_empty() {
        return None;
    }
    let f = |y: &T| a.clone() * y.clone() * y.clone() + b.clone() * y.clone() + c.clone();
    let positive = |y: &T| f(y).is_positive();
    let zero = T::zero();
    if a.is_negative() {
        let two_a = a.clone() + a.clone();
        let fl = (-b.clone()).div_floor(&two_a);
        let cands = [iv.clamp(fl.clone()), iv.clamp(fl + T::one())];
        let best = if f(&cands[0]) >= f(&cands[1]) { &cands[0] } else { &cands[1] };
        return positive(best).then(|| best.clone());
    }
    if a.is_zero() {
        if b.is_zero() {
            return c.is_positive().then(|| iv.clamp(zero));
        }
        // First integer past the root of b·y + c, on the increasing side.
        let y = if b.is_positive() {
            match &iv.hi {
                Some(h) => h.clone(),
                None => iv.clamp((-c.clone()).div_floor(b) + T::one()),
            }
        } else {
            match &iv.lo {
                Some(l) => l.clone(),
                None => iv.clamp(ceil_div(&c.clone(), &-b.clone()) - T::one()),
            }
        };
        return positive(&y).then_some(y);
    }
    // Convex: positive outside the real roots.
    if let (Some(l), Some(h)) = (&iv.lo, &iv.hi) {
        let (fl, fh) = (f(l), f(h));
        let best = if fh > fl { h } else { l };
        return positive(best).then(|| best.clone());
    }
    let four = T::small(4);
    let disc = b.clone() * b.clone() - four * a.clone() * c.clone();
    if disc.is_negative() {
        return Some(iv.clamp(zero));
    }
    let s = isqrt(&disc);
    let two_a = a.clone() + a.clone();
    let mut right = (s.clone() - b.clone()).div_floor(&two_a);
    while !positive(&right) {
        right = right + T::one();
    }
    let mut left = ceil_div(&(-b.clone() - s), &two_a);
    while !positive(&left) {
        left = left - T::one();
    }
    let r = iv.hi.is_none().then(|| iv.clamp(right));
    let l = iv.lo.is_none().then(|| iv.clamp(left));
    let pick = match (r, l) {
        (Some(r), Some(l)) => {
            if l.abs() < r.abs() {
                l
            } else {
                r
            }
        }
        (Some(r), None) => r,
        (None, Some(l)) => l,
        (None, None) => unreachable!("at least one side is unbounded"),
    };
    positive(&pick).then_some(pick)
}

/// The two-variable problem with the scan variable first.
#[derive(Debug, Clone)]
struct Plane<T> {
    a: T,
    b: T,
    c: T,
    d: T,
    e: T,
    g: T,
    x: Interval<T>,
    y: Interval<T>,
    filters: Vec<(T, T, T)>,
}

impl<T: Scalar> Plane<T> {
    fn swapped(&self) -> Self {
        Self {
            a: self.c.clone(),
            b: self.b.clone(),
            c: self.a.clone(),
            d: self.e.clone(),
            e: self.d.clone(),
            g: self.g.clone(),
            x: self.y.clone(),
            y: self.x.clone(),
            filters: self.filters.iter().map(|(p, q, r)| (q.clone(), p.clone(), r.clone())).collect(),
        }
    }

    fn eval(&self, x: &T, y: &T) -> T {
        self.a.clone() * x.clone() * x.clone()
            + self.b.clone() * x.clone() * y.clone()
            + self.c.clone() * y.clone() * y.clone()
            + self.d.clone() * x.clone()
            + self.e.clone() * y.clone()
            + self.g.clone()
    }

    /// A witness on the row `x = X`, if any.
    fn row(&self, x: &T) -> Option<T> {
        let mut iv = self.y.clone();
        for (p, q, r) in &self.filters {
            if !iv.restrict(q, &(p.clone() * x.clone() + r.clone())) {
                return None;
            }
        }
        let b = self.b.clone() * x.clone() + self.e.clone();
        let c = self.a.clone() * x.clone() * x.clone() + self.d.clone() * x.clone() + self.g.clone();
        witness_1d(&self.c, &b, &c, &iv)
    }

    fn scan(&self, lo: T, hi: T, ends_first: bool) -> Result<Option<(T, T)>, KernelError> {
        if lo > hi {
            return Ok(None);
        }
        let rows = hi.clone() - lo.clone() + T::one();
        if rows.lift() > Int::from(MAX_ROWS) {
            return Err(KernelError::RangeTooLarge { rows: rows.lift(), limit: MAX_ROWS });
        }
        let (mut l, mut h) = (lo, hi);
        while l <= h {
            if let Some(y) = self.row(&l) {
                return Ok(Some((l, y)));
            }
            if ends_first && l != h {
                if let Some(y) = self.row(&h) {
                    return Ok(Some((h, y)));
                }
                h = h - T::one();
            }
            l = l + T::one();
        }
        Ok(None)
    }

    fn negative_definite(&self) -> bool {
        self.a.is_negative() && self.disc4().is_positive()
    }

    /// 4ac − b².
    fn disc4(&self) -> T {
        T::small(4) * self.a.clone() * self.c.clone() - self.b.clone() * self.b.clone()
    }

    /// Integer range of x outside of which every row maximum is ≤ 0.
    ///
    /// For c < 0 the row maximum h(x) satisfies 4c·h(x) = P(x) with
    /// P(x) = (4ac − b²)x² + (4c·d − 2b·e)x + (4c·g − e²), and h > 0 iff P < 0.
    fn ellipse_rows(&self) -> Option<(T, T)> {
        let four = T::small(4);
        let alpha = self.disc4();
        let beta = four.clone() * self.c.clone() * self.d.clone() - T::small(2) * self.b.clone() * self.e.clone();
        let gamma = four.clone() * self.c.clone() * self.g.clone() - self.e.clone() * self.e.clone();
        let delta = beta.clone() * beta.clone() - four * alpha.clone() * gamma;
        if !delta.is_positive() {
            return None;
        }
        let s = isqrt(&delta) + T::one();
        let two_alpha = alpha.clone() + alpha;
        let lo = (-beta.clone() - s.clone()).div_floor(&two_alpha);
        let hi = ceil_div(&(-beta + s), &two_alpha);
        Some((self.x.clamp(lo), self.x.clamp(hi)))
    }

    fn finite(iv: &Interval<T>) -> Option<(T, T)> {
        match (&iv.lo, &iv.hi) {
            (Some(l), Some(h)) => Some((l.clone(), h.clone())),
            _ => None,
        }
    }

    fn decide(&self) -> Result<Option<(T, T)>, KernelError> {
        if self.x.is_empty() || self.y.is_empty() {
            return Ok(None);
        }
        if self.negative_definite() {
            return match self.ellipse_rows() {
                None => Ok(None),
                Some((lo, hi)) => self.scan(lo, hi, false),
            };
        }
        let fx = Self::finite(&self.x);
        let fy = Self::finite(&self.y);
        match (fx, fy) {
            (Some((xl, xh)), Some((yl, yh))) => {
                if xh.clone() - xl.clone() <= yh.clone() - yl.clone() {
                    self.scan(xl, xh, true)
                } else {
                    Ok(self.swapped().scan(yl, yh, true)?.map(|(y, x)| (x, y)))
                }
            }
            (Some((xl, xh)), None) => self.scan(xl, xh, true),
            (None, Some((yl, yh))) => Ok(self.swapped().scan(yl, yh, true)?.map(|(y, x)| (x, y))),
            (None, None) => Err(KernelError::UndecidableForm),
        }
    }

    /// ℤ², quadratic part not negative definite: find a witness or
    /// reduce to one variable.
    fn free_witness_or_none(&self) -> Option<(T, T)> {
        let zero = T::zero();
        let one = T::one();
        let all = Interval { lo: None, hi: None };
        let along = |v: (T, T)| -> Option<(T, T)> {
            let qv = self.eval(&v.0, &v.1) - self.d.clone() * v.0.clone() - self.e.clone() * v.1.clone() - self.g.clone();
            let lv = self.d.clone() * v.0.clone() + self.e.clone() * v.1.clone();
            witness_1d(&qv, &lv, &self.g, &all).map(|t| (t.clone() * v.0.clone(), t * v.1.clone()))
        };
        let (a, b, c) = (&self.a, &self.b, &self.c);
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return along((self.d.clone(), self.e.clone())).or_else(|| self.g.is_positive().then(|| (zero.clone(), zero)));
        }
        let d4 = self.disc4();
        let positive_dir = if a.is_positive() {
            Some((one.clone(), zero.clone()))
        } else if c.is_positive() {
            Some((zero.clone(), one.clone()))
        } else if d4.is_negative() {
            if !a.is_zero() {
                Some((-b.clone(), a.clone() + a.clone()))
            } else if !c.is_zero() {
                Some((c.clone() + c.clone(), -b.clone()))
            } else {
                Some((one.clone(), if b.is_positive() { one.clone() } else { -one.clone() }))
            }
        } else {
            None
        };
        if let Some(v) = positive_dir {
            return along(v);
        }
        // Negative semidefinite of rank one: kernel direction v.
        let (v1, v2) = if !a.is_zero() { (b.clone(), -(a.clone() + a.clone())) } else { (one.clone(), zero.clone()) };
        let g = v1.gcd(&v2);
        let (v1, v2) = (v1 / g.clone(), v2 / g);
        let lam = self.d.clone() * v1.clone() + self.e.clone() * v2.clone();
        if !lam.is_zero() {
            return witness_1d(&zero, &lam, &self.g, &all).map(|t| (t.clone() * v1, t * v2));
        }
        let (_, x, y) = extended_gcd(&v1.lift(), &v2.lift());
        let (u1, u2) = (-T::of(&y), T::of(&x));
        along((u1, u2))
    }
}

/// Decides `f(x) ≤ 0` for every integer point `x` of `domain`.
pub fn decide_quadratic_nonpositive(f: &Quadratic, domain: &Domain) -> Result<Decision, KernelError> {
    f.check_shape()?;
    let k = f.vars();
    if k > 2 {
        return Err(KernelError::TooManyVariables(k));
    }
    if domain.lower.len() != k || domain.upper.len() != k || domain.filters.iter().any(|g| g.coeffs.len() != k) {
        return Err(KernelError::Shape);
    }
    let fits = |v: &Int, bits: u32| v.abs() < (Int::from(1) << bits);
    let coeffs_small = f.quad.iter().flatten().chain(&f.lin).all(|v| fits(v, 20))
        && fits(&f.constant, 40)
        && domain.filters.iter().all(|g| g.coeffs.iter().all(|v| fits(v, 20)) && fits(&g.constant, 40))
        && domain.lower.iter().chain(&domain.upper).flatten().all(|v| fits(v, 40));
    if coeffs_small {
        decide_in::<i128>(f, domain)
    } else {
        decide_in::<Int>(f, domain)
    }
}

fn decide_in<T: Scalar>(f: &Quadratic, domain: &Domain) -> Result<Decision, KernelError> {
    let k = f.vars();
    let conv = |v: &Option<Int>| v.as_ref().map(T::of);
    let fails = |w: Vec<T>| Decision::Fails { witness: w.iter().map(Scalar::lift).collect() };
    match k {
        0 => {
            let feasible = domain.filters.iter().all(|g| !g.constant.is_negative());
            Ok(if feasible && f.constant.is_positive() { fails(Vec::new()) } else { Decision::Holds })
        }
        1 => {
            let mut iv = Interval { lo: conv(&domain.lower[0]), hi: conv(&domain.upper[0]) };
            for g in &domain.filters {
                if !iv.restrict(&T::of(&g.coeffs[0]), &T::of(&g.constant)) {
                    return Ok(Decision::Holds);
                }
            }
            Ok(match witness_1d(&T::of(&f.quad[0][0]), &T::of(&f.lin[0]), &T::of(&f.constant), &iv) {
                Some(x) => fails(vec![x]),
                None => Decision::Holds,
            })
        }
        _ => {
            let plane = Plane {
                a: T::of(&f.quad[0][0]),
                b: T::of(&f.quad[0][1]),
                c: T::of(&f.quad[1][1]),
                d: T::of(&f.lin[0]),
                e: T::of(&f.lin[1]),
                g: T::of(&f.constant),
                x: Interval { lo: conv(&domain.lower[0]), hi: conv(&domain.upper[0]) },
                y: Interval { lo: conv(&domain.lower[1]), hi: conv(&domain.upper[1]) },
                filters: domain
                    .filters
                    .iter()
                    .map(|g| (T::of(&g.coeffs[0]), T::of(&g.coeffs[1]), T::of(&g.constant)))
                    .collect(),
            };
            if domain.is_free() && !plane.negative_definite() {
                return Ok(match plane.free_witness_or_none() {
                    Some((x, y)) => fails(vec![x, y]),
                    None => Decision::Holds,
                });
            }
            Ok(match plane.decide()? {
                Some((x, y)) => fails(vec![x, y]),
                None => Decision::Holds,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decide(f: &Quadratic, d: &Domain) -> Decision {
        let r = decide_quadratic_nonpositive(f, d).unwrap();
        if let Some(w) = r.witness() {
            assert!(d.contains(w), "witness {w:?} outside the domain");
            assert!(f.eval(w).is_positive(), "witness {w:?} does not violate");
        }
        r
    }

    #[test]
    fn univariate_examples() {
        assert!(decide(&Quadratic::univariate(-8, 5, 0), &Domain::free(1)).holds());
        assert_eq!(decide(&Quadratic::univariate(1, 0, -4), &Domain::free(1)).witness().unwrap(), &[int(3)]);
        assert!(decide(&Quadratic::univariate(0, 0, 0), &Domain::free(1)).holds());
        assert!(!decide(&Quadratic::univariate(0, 1, -100), &Domain::free(1)).holds());
        assert!(decide(&Quadratic::univariate(0, 1, -100), &Domain::cube(1, -5, 100)).holds());
        assert!(!decide(&Quadratic::univariate(0, -1, -100), &Domain::free(1)).holds());
        assert!(decide(&Quadratic::univariate(1, 0, -4), &Domain::cube(1, -2, 2)).holds());
    }

    #[test]
    fn bivariate_examples() {
        // −2(m − 1)² − n²
        assert!(decide(&Quadratic::bivariate(-2, 0, -1, 4, 0, -2), &Domain::free(2)).holds());
        assert!(!decide(&Quadratic::bivariate(-2, 0, -1, 4, 0, -1), &Domain::free(2)).holds());
        // Indefinite with both diagonal entries negative.
        assert!(!decide(&Quadratic::bivariate(-1, 21, -100, 0, 0, -1000), &Domain::free(2)).holds());
        // −(x − y)² and −(2x − 2y − 1)² + 1.
        assert!(decide(&Quadratic::bivariate(-1, 2, -1, 0, 0, 0), &Domain::free(2)).holds());
        assert!(decide(&Quadratic::bivariate(-4, 8, -4, 4, -4, 0), &Domain::free(2)).holds());
        assert!(!decide(&Quadratic::bivariate(-1, 2, -1, 1, 0, 0), &Domain::free(2)).holds());
        assert!(decide(&Quadratic::bivariate(-4, 8, -4, 4, -4, 0), &Domain::cube(2, -50, 50)).holds());
    }

    #[test]
    fn filters_cut_the_domain() {
        let f = Quadratic::univariate(0, 1, 0);
        let d = Domain::free(1).with_filter(LinearFilter { coeffs: vec![int(-1)], constant: int(0) });
        assert!(decide(&f, &d).holds());
        let g = Quadratic::bivariate(1, 0, 0, 0, 0, -1);
        let strip = Domain { lower: vec![None, Some(int(0))], upper: vec![None, Some(int(3))], filters: vec![] };
        assert!(!decide(&g, &strip).holds());
        let infeasible = Domain::free(1).with_filter(LinearFilter { coeffs: vec![int(0)], constant: int(-1) });
        assert!(decide(&Quadratic::univariate(1, 0, 1), &infeasible).holds());
        let half = Domain::free(2).with_filter(LinearFilter { coeffs: vec![int(1), int(0)], constant: int(0) });
        assert_eq!(decide_quadratic_nonpositive(&g, &half), Err(KernelError::UndecidableForm));
    }

    #[test]
    fn display() {
        assert_eq!(Quadratic::univariate(-8, 5, 0).to_string(), "-8t² + 5t");
        assert_eq!(Quadratic::bivariate(-2, 0, -1, 0, 0, 0).to_string(), "-2s² - t²");
        assert_eq!(Quadratic::constant_only(int(0)).to_string(), "0");
    }

    #[test]
    fn big_coefficients_use_the_exact_path() {
        let big: Int = Int::from(1) << 80;
        let f = Quadratic::new(vec![vec![-big.clone()]], vec![big.clone()], int(0));
        assert!(decide(&f, &Domain::free(1)).holds());
        let f = Quadratic::new(vec![vec![big.clone()]], vec![int(0)], -big);
        assert_eq!(decide(&f, &Domain::free(1)).witness().unwrap(), &[int(2)]);
    }

    #[test]
    fn machine_and_exact_paths_agree_at_the_gate() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let coeff = 1i64 << 19;
        let wide = 1i64 << 39;
        for _ in 0..4000 {
            let mut c = |m: i64| rng.gen_range(-m..=m);
            let f = Quadratic::bivariate(c(coeff), c(coeff), c(coeff), c(coeff), c(coeff), c(wide));
            let r = c(wide).abs();
            let mut dom = if r % 3 == 0 { Domain::free(2) } else { Domain::cube(2, -r, r) };
            for _ in 0..(r % 3) {
                dom = dom.with_filter(LinearFilter { coeffs: vec![int(c(coeff)), int(c(coeff))], constant: int(c(wide)) });
            }
            let g = Quadratic::univariate(c(coeff), c(coeff), c(wide));
            let line = Domain::cube(1, -r, r);
            assert_eq!(decide_in::<i128>(&f, &dom), decide_in::<Int>(&f, &dom), "{f}");
            assert_eq!(decide_in::<i128>(&g, &line), decide_in::<Int>(&g, &line), "{g}");
        }
    }
}
