//! Small exact linear-algebra kernels over ℤ and ℚ.
//!
//! Matrices here are tiny (rank of a Picard lattice), so everything is
//! plain `Vec<Vec<_>>` with cubic algorithms.

use num_traits::{One, Signed, Zero};

use crate::arith::{extended_gcd, int, rat_from_int, Int, Rational};

pub type IntMatrix = Vec<Vec<Int>>;
pub type RatMatrix = Vec<Vec<Rational>>;

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> Int {
    let n = m.len();
    if n == 0 {
        return int(1);
    }
    let mut a = m.clone();
    let mut sign = int(1);
    let mut prev = int(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Counts of positive, negative and zero entries in a diagonalization of the
/// symmetric matrix `m` by rational congruence (Sylvester inertia).
pub fn inertia(m: &IntMatrix) -> (usize, usize, usize) {
    let mut a: RatMatrix = m
        .iter()
        .map(|row| row.iter().map(rat_from_int).collect())
        .collect();
    let mut n = a.len();
    let (mut pos, mut neg) = (0, 0);
    while n > 0 {
        // Bring a nonzero diagonal pivot into position 0 of the active block.
        let pivot = (0..n).find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let off = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !a[i][j].is_zero());
                match off {
                    // x_i -> x_i + x_j gives diagonal 2 a_ij != 0.
                    Some((i, j)) => {
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] += v;
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] += v;
                        }
                        i
                    }
                    None => break,
                }
            }
        };
        a.swap(0, p);
        for row in a.iter_mut() {
            row.swap(0, p);
        }
        let d = a[0][0].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let mut next = Vec::with_capacity(n - 1);
        for i in 1..n {
            let factor = &a[i][0] / &d;
            let row: Vec<Rational> = (1..n).map(|j| &a[i][j] - &factor * &a[0][j]).collect();
            next.push(row);
        }
        a = next;
        n -= 1;
    }
    let zero = m.len() - pos - neg;
    (pos, neg, zero)
}

/// Inverse over ℚ, `None` when singular.
pub fn rational_inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.clone();
    let mut inv: RatMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let d = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &d;
            inv[col][j] = &inv[col][j] / &d;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&f * &a[col][j], &f * &inv[col][j]);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

pub fn to_rational(m: &IntMatrix) -> RatMatrix {
    m.iter().map(|row| row.iter().map(rat_from_int).collect()).collect()
}

pub fn mat_vec(m: &IntMatrix, v: &[Int]) -> Vec<Int> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Unimodular `U` with `a · U = (g, 0, ..., 0)`, `g = gcd(a) >= 0`.
///
/// Column 0 of `U` solves `a·x = g`; the remaining columns are a ℤ-basis of
/// the integer kernel of `a`.
pub fn row_reduction(a: &[Int]) -> (Int, IntMatrix) {
    let n = a.len();
    let mut row = a.to_vec();
    let mut u: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
        .collect();
    for j in 1..n {
        if row[j].is_zero() {
            continue;
        }
        let (g, x, y) = extended_gcd(&row[0], &row[j]);
        // [col0, colj] <- [x*col0 + y*colj, (-a_j/g)*col0 + (a_0/g)*colj]
        let p = -(&row[j] / &g);
        let q = &row[0] / &g;
        for r in u.iter_mut() {
            let c0 = &x * &r[0] + &y * &r[j];
            let cj = &p * &r[0] + &q * &r[j];
            r[0] = c0;
            r[j] = cj;
        }
        row[0] = g;
        row[j] = Int::zero();
    }
    if row[0].is_negative() {
        row[0] = -row[0].clone();
        for r in u.iter_mut() {
            r[0] = -r[0].clone();
        }
    }
    (row[0].clone(), u)
}
