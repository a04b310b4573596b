//! Unimodular intersection lattices, their classes, and Spin^c structures.
//!
//! A [`LatticeClass`] always carries the lattice it lives in; pairing two
//! classes from structurally different lattices is an error rather than a
//! silent coercion between bases.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{exact_half, int, modulo, Int};
use crate::linalg::{self, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix is empty")]
    Empty,
    #[error("gram matrix is not square (row {row} has {len} entries, rank {rank})")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("gram matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("gram matrix is not unimodular (det = {det})")]
    NotUnimodular { det: Int },
    #[error("declared b2+ = {declared_plus}, b2- = {declared_minus} but the form has inertia ({actual_plus}, {actual_minus})")]
    SignatureMismatch {
        declared_plus: usize,
        declared_minus: usize,
        actual_plus: usize,
        actual_minus: usize,
    },
    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("classes belong to different lattices")]
    LatticeMismatch,
    #[error("class {0} is not characteristic")]
    NotCharacteristic(String),
    #[error("characteristic class has square {square}, not congruent to the signature {signature} mod 8")]
    Mod8Violation { square: Int, signature: i64 },
    #[error("class {0} is not divisible by 2")]
    NotDivisibleByTwo(String),
}

struct LatticeData {
    gram: IntMatrix,
    b2_plus: usize,
    b2_minus: usize,
    labels: Vec<String>,
}

/// The intersection form on H²(M, ℤ) in a fixed basis.
///
/// Cheap to clone: the data is shared behind an `Arc`. Equality is
/// structural on the Gram matrix; basis labels are cosmetic.
#[derive(Clone)]
pub struct IntersectionLattice(Arc<LatticeData>);

impl IntersectionLattice {
    /// Builds a lattice, reading b₂± off the exact inertia of the form.
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        Self::build(gram, None, None)
    }

    /// Builds a lattice with explicitly declared b₂±, checked against the form.
    pub fn with_signature(gram: IntMatrix, b2_plus: usize, b2_minus: usize) -> Result<Self, LatticeError> {
        Self::build(gram, Some(b2_plus), Some(b2_minus))
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    fn build(gram: IntMatrix, plus: Option<usize>, minus: Option<usize>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        if rank == 0 {
            return Err(LatticeError::Empty);
        }
        for (row, r) in gram.iter().enumerate() {
            if r.len() != rank {
                return Err(LatticeError::NotSquare { row, len: r.len(), rank });
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric { i, j });
                }
            }
        }
        let det = linalg::determinant(&gram);
        if det.abs() != Int::one() {
            return Err(LatticeError::NotUnimodular { det });
        }
        let (p, n, _) = linalg::inertia(&gram);
        let declared_plus = plus.unwrap_or(p);
        let declared_minus = minus.unwrap_or(n);
        if declared_plus != p || declared_minus != n {
            return Err(LatticeError::SignatureMismatch {
                declared_plus,
                declared_minus,
                actual_plus: p,
                actual_minus: n,
            });
        }
        let labels = (0..rank).map(|i| format!("x{i}")).collect();
        Ok(Self(Arc::new(LatticeData { gram, b2_plus: p, b2_minus: n, labels })))
    }

    /// Attaches display names to the basis vectors.
    pub fn with_labels<S: Into<String>>(self, labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(labels.len(), self.rank(), "one label per basis vector");
        Self(Arc::new(LatticeData {
            gram: self.0.gram.clone(),
            b2_plus: self.0.b2_plus,
            b2_minus: self.0.b2_minus,
            labels,
        }))
    }

    pub fn rank(&self) -> usize {
        self.0.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.0.gram
    }

    pub fn b2_plus(&self) -> usize {
        self.0.b2_plus
    }

    pub fn b2_minus(&self) -> usize {
        self.0.b2_minus
    }

    /// I = b₂⁺ − b₂⁻.
    pub fn signature(&self) -> i64 {
        self.0.b2_plus as i64 - self.0.b2_minus as i64
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    /// Even forms have every diagonal entry even.
    pub fn is_even(&self) -> bool {
        self.0.gram.iter().enumerate().all(|(i, r)| modulo(&r[i], 2).is_zero())
    }

    pub fn class<T: Into<Int>>(&self, coords: impl IntoIterator<Item = T>) -> Result<LatticeClass, LatticeError> {
        let coords: Vec<Int> = coords.into_iter().map(Into::into).collect();
        if coords.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), found: coords.len() });
        }
        Ok(LatticeClass { lattice: self.clone(), coords })
    }

    pub fn zero(&self) -> LatticeClass {
        LatticeClass { lattice: self.clone(), coords: vec![Int::zero(); self.rank()] }
    }

    pub fn basis(&self, i: usize) -> LatticeClass {
        let mut c = self.zero();
        c.coords[i] = Int::one();
        c
    }

    /// The unique characteristic class with every coordinate in {0, 1}.
    ///
    /// Solves `gram · c ≡ diag(gram) (mod 2)`; the form is invertible mod 2
    /// because it is unimodular.
    pub fn characteristic_representative(&self) -> LatticeClass {
        let n = self.rank();
        let mut rows: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut r: Vec<u8> = (0..n).map(|j| bit(&self.0.gram[i][j])).collect();
                r.push(bit(&self.0.gram[i][i]));
                r
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| rows[r][col] == 1).expect("unimodular form is invertible mod 2");
            rows.swap(col, p);
            for r in 0..n {
                if r != col && rows[r][col] == 1 {
                    for j in 0..=n {
                        rows[r][j] ^= rows[col][j];
                    }
                }
            }
        }
        LatticeClass {
            lattice: self.clone(),
            coords: rows.iter().map(|r| Int::from(r[n])).collect(),
        }
    }
}

fn bit(v: &Int) -> u8 {
    if modulo(v, 2).is_zero() {
        0
    } else {
        1
    }
}

impl PartialEq for IntersectionLattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.gram == other.0.gram
    }
}

impl Eq for IntersectionLattice {}

impl fmt::Debug for IntersectionLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntersectionLattice")
            .field("gram", &self.0.gram)
            .field("b2_plus", &self.0.b2_plus)
            .field("b2_minus", &self.0.b2_minus)
            .finish()
    }
}

/// An integral class, given by coordinates in the lattice basis.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticeClass {
    lattice: IntersectionLattice,
    coords: Vec<Int>,
}

impl LatticeClass {
    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<(), LatticeError> {
        if self.lattice != other.lattice {
            return Err(LatticeError::LatticeMismatch);
        }
        Ok(())
    }

    /// The intersection pairing xᵀ·G·y.
    pub fn dot(&self, other: &Self) -> Result<Int, LatticeError> {
        self.check_same(other)?;
        let g = self.lattice.gram();
        let mut acc = Int::zero();
        for (i, xi) in self.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let row: Int = g[i].iter().zip(&other.coords).map(|(a, b)| a * b).sum();
            acc += xi * row;
        }
        Ok(acc)
    }

    pub fn square(&self) -> Int {
        self.dot(self).expect("a class pairs with itself")
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self { lattice: self.lattice.clone(), coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// `self / 2`, when every coordinate is even.
    pub fn halve(&self) -> Result<Self, LatticeError> {
        let coords = self
            .coords
            .iter()
            .map(exact_half)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| LatticeError::NotDivisibleByTwo(self.to_string()))?;
        Ok(Self { lattice: self.lattice.clone(), coords })
    }

    /// Re-homes the coordinates in another lattice of the same rank.
    pub fn reinterpret(&self, lattice: &IntersectionLattice) -> Result<Self, LatticeError> {
        lattice.class(self.coords.iter().cloned())
    }

    fn zip(&self, other: &Self, f: impl Fn(&Int, &Int) -> Int) -> Self {
        Self {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.lattice.labels();
        let mut first = true;
        for (c, name) in self.coords.iter().zip(labels) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeClass({self})")
    }
}

// Operator sugar for formulas inside a single lattice. Mixing lattices is a
// programming error here; use the `try_*` methods on untrusted input.
impl Add for &LatticeClass {
    type Output = LatticeClass;
    fn add(self, rhs: &LatticeClass) -> LatticeClass {
        self.try_add(rhs).expect("adding classes from different lattices")
    }
}

impl Sub for &LatticeClass {
    type Output = LatticeClass;
    fn sub(self, rhs: &LatticeClass) -> LatticeClass {
        self.try_sub(rhs).expect("subtracting classes from different lattices")
    }
}

impl Neg for &LatticeClass {
    type Output = LatticeClass;
    fn neg(self) -> LatticeClass {
        self.scale(&int(-1))
    }
}

impl Neg for LatticeClass {
    type Output = LatticeClass;
    fn neg(self) -> LatticeClass {
        -&self
    }
}

impl Mul<&LatticeClass> for i64 {
    type Output = LatticeClass;
    fn mul(self, rhs: &LatticeClass) -> LatticeClass {
        rhs.scale(&int(self))
    }
}

impl Mul<&LatticeClass> for &Int {
    type Output = LatticeClass;
    fn mul(self, rhs: &LatticeClass) -> LatticeClass {
        rhs.scale(self)
    }
}

impl Serialize for LatticeClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::json::serialize_ints(&self.coords, s)
    }
}

/// A characteristic class C; C² ≡ I (mod 8) is verified at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpinCStructure {
    c: LatticeClass,
}

impl SpinCStructure {
    pub fn class(&self) -> &LatticeClass {
        &self.c
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        self.c.lattice()
    }

    /// (C² − I) / 8, exact by the mod-8 invariant.
    pub fn mod8_quotient(&self) -> Int {
        (self.c.square() - int(self.c.lattice().signature())) / int(8)
    }
}

impl fmt::Display for SpinCStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.c.fmt(f)
    }
}

impl Serialize for SpinCStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.c.serialize(s)
    }
}

pub fn pair(x: &LatticeClass, y: &LatticeClass) -> Result<Int, LatticeError> {
    x.dot(y)
}

pub fn square(x: &LatticeClass) -> Int {
    x.square()
}

/// `c·x ≡ x·x (mod 2)` on every basis vector, which suffices by bilinearity.
pub fn is_characteristic(c: &LatticeClass) -> bool {
    let g = c.lattice().gram();
    (0..c.lattice().rank()).all(|i| {
        let cx: Int = g[i].iter().zip(c.coords()).map(|(a, b)| a * b).sum();
        modulo(&(cx - &g[i][i]), 2).is_zero()
    })
}

pub fn make_spin_c(c: LatticeClass) -> Result<SpinCStructure, LatticeError> {
    if !is_characteristic(&c) {
        return Err(LatticeError::NotCharacteristic(c.to_string()));
    }
    let sq = c.square();
    let signature = c.lattice().signature();
    if !modulo(&(&sq - int(signature)), 8).is_zero() {
        return Err(LatticeError::Mod8Violation { square: sq, signature });
    }
    Ok(SpinCStructure { c })
}

/// The affine action σ(C) = C + 2σ of the lattice on its Spin^c structures.
pub fn spin_c_translate(c: &SpinCStructure, sigma: &LatticeClass) -> Result<SpinCStructure, LatticeError> {
    let shifted = c.c.try_add(&sigma.scale(&int(2)))?;
    Ok(SpinCStructure { c: shifted })
}

/// Serialization form of a lattice, as it appears in surface files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeSummary {
    pub rank: usize,
    pub b2_plus: usize,
    pub b2_minus: usize,
    pub signature: i64,
    pub even: bool,
}

impl IntersectionLattice {
    pub fn summary(&self) -> LatticeSummary {
        LatticeSummary {
            rank: self.rank(),
            b2_plus: self.b2_plus(),
            b2_minus: self.b2_minus(),
            signature: self.signature(),
            even: self.is_even(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp2() -> IntersectionLattice {
        IntersectionLattice::from_rows(&[&[1]]).unwrap().with_labels(["l"])
    }

    fn f1() -> IntersectionLattice {
        IntersectionLattice::from_rows(&[&[1, 0], &[0, -1]]).unwrap().with_labels(["l", "E"])
    }

    fn quadric_blowup() -> IntersectionLattice {
        IntersectionLattice::from_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]])
            .unwrap()
            .with_labels(["h+", "h-", "E"])
    }

    #[test]
    fn pairing_examples() {
        let l = cp2();
        assert_eq!(pair(&l.class([3]).unwrap(), &l.class([1]).unwrap()).unwrap(), int(3));
        let f = f1();
        let a = f.class([1, -2]).unwrap();
        let b = f.class([3, -1]).unwrap();
        assert_eq!(pair(&a, &b).unwrap(), int(1));
        assert_eq!(pair(&a, &f.zero()).unwrap(), int(0));
    }

    #[test]
    fn squares() {
        let q = quadric_blowup();
        for m in -3i64..=3 {
            for n in -3i64..=3 {
                let c = q.class([m, -m, n]).unwrap();
                assert_eq!(square(&c), int(-2 * m * m - n * n));
            }
        }
        assert_eq!(square(&f1().class([1, -2]).unwrap()), int(-3));
        assert_eq!(square(&q.zero()), int(0));
    }

    #[test]
    fn dimension_and_lattice_mismatch() {
        assert_eq!(
            cp2().class([1, 2]).unwrap_err(),
            LatticeError::DimensionMismatch { expected: 1, found: 2 }
        );
        let a = f1().class([1, 0]).unwrap();
        let b = IntersectionLattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap().class([1, 0]).unwrap();
        assert_eq!(pair(&a, &b).unwrap_err(), LatticeError::LatticeMismatch);
    }

    #[test]
    fn characteristic_examples() {
        let l = cp2();
        assert!(is_characteristic(&l.class([3]).unwrap()));
        assert!(!is_characteristic(&l.class([2]).unwrap()));
        let hyperbolic = IntersectionLattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(is_characteristic(&hyperbolic.zero()));
    }

    #[test]
    fn spin_c_examples() {
        let l = cp2();
        assert!(make_spin_c(l.class([3]).unwrap()).is_ok());
        assert!(make_spin_c(l.class([1]).unwrap()).is_ok());
        assert!(make_spin_c(f1().class([3, -1]).unwrap()).is_ok());
        assert!(matches!(
            make_spin_c(l.class([2]).unwrap()),
            Err(LatticeError::NotCharacteristic(_))
        ));
    }

    #[test]
    fn translate_examples() {
        let l = cp2();
        let c = make_spin_c(l.class([3]).unwrap()).unwrap();
        let minus = spin_c_translate(&c, &l.class([-3]).unwrap()).unwrap();
        assert_eq!(minus.class(), &l.class([-3]).unwrap());
        assert_eq!(spin_c_translate(&c, &l.zero()).unwrap(), c);
        let sigma = l.class([5]).unwrap();
        let back = spin_c_translate(&spin_c_translate(&c, &sigma).unwrap(), &(-&sigma)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn signature_checks() {
        let q = quadric_blowup();
        assert_eq!((q.b2_plus(), q.b2_minus(), q.signature()), (1, 2, -1));
        assert!(matches!(
            IntersectionLattice::with_signature(q.gram().clone(), 2, 1),
            Err(LatticeError::SignatureMismatch { .. })
        ));
        assert!(matches!(
            IntersectionLattice::from_rows(&[&[2, 1], &[1, 2]]),
            Err(LatticeError::NotUnimodular { .. })
        ));
        assert!(matches!(
            IntersectionLattice::from_rows(&[&[1, 0], &[1, -1]]),
            Err(LatticeError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn characteristic_representative_is_characteristic() {
        for lat in [cp2(), f1(), quadric_blowup()] {
            let w = lat.characteristic_representative();
            assert!(is_characteristic(&w));
            assert!(make_spin_c(w).is_ok());
        }
        assert!(IntersectionLattice::from_rows(&[&[0, 1], &[1, 0]])
            .unwrap()
            .characteristic_representative()
            .is_zero());
    }

    #[test]
    fn display_uses_labels() {
        assert_eq!(f1().class([3, -1]).unwrap().to_string(), "3l - E");
        assert_eq!(f1().class([-1, 2]).unwrap().to_string(), "-l + 2E");
        assert_eq!(f1().zero().to_string(), "0");
    }
}
