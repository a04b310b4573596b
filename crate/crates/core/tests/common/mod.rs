//! Independent oracles over machine integers. Nothing here calls into the
//! library's arithmetic; inputs are read off the public data only.
#![allow(dead_code)]

use num_traits::ToPrimitive;
use spincert_core::{LatticeClass, SurfaceModel};

pub fn small(c: &LatticeClass) -> Vec<i64> {
    c.coords().iter().map(|x| x.to_i64().unwrap()).collect()
}

pub fn gram(s: &SurfaceModel) -> Vec<Vec<i64>> {
    s.pic().gram().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

pub fn dot(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut t = 0;
    for i in 0..g.len() {
        for j in 0..g.len() {
            t += x[i] * g[i][j] * y[j];
        }
    }
    t
}

pub fn add(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn scale(k: i64, x: &[i64]) -> Vec<i64> {
    x.iter().map(|a| k * a).collect()
}

/// C·x ≡ x² (mod 2) on every basis vector.
pub fn characteristic(g: &[Vec<i64>], c: &[i64]) -> bool {
    (0..g.len()).all(|i| {
        let b: Vec<i64> = (0..g.len()).map(|j| i64::from(i == j)).collect();
        (dot(g, c, &b) - g[i][i]).rem_euclid(2) == 0
    })
}

/// Hirzebruch–Riemann–Roch for a line bundle: χ(O) + (L² − L·K)/2.
pub fn rr_line(g: &[Vec<i64>], k: &[i64], chi_o: i64, l: &[i64]) -> i64 {
    let twice = dot(g, l, l) - dot(g, l, k);
    assert_eq!(twice % 2, 0);
    chi_o + twice / 2
}

/// HRR for a rank-2 bundle: 2χ(O) + (c₁² − c₁·K)/2 − c₂.
pub fn rr_rank_two(g: &[Vec<i64>], k: &[i64], chi_o: i64, c1: &[i64], c2: i64) -> i64 {
    let twice = dot(g, c1, c1) - dot(g, c1, k);
    2 * chi_o + twice / 2 - c2
}

/// 3c₂ − 1 − c₁(c₁ + K)/2 − χ(O).
pub fn d1_expansion(g: &[Vec<i64>], k: &[i64], chi_o: i64, c1: &[i64], c2: i64) -> i64 {
    3 * c2 - 1 - dot(g, c1, &add(c1, k)) / 2 - chi_o
}

fn normalized(e: &[i64]) -> bool {
    e.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

fn for_box(n: usize, radius: i64, mut f: impl FnMut(&[i64])) {
    let mut v = vec![-radius; n];
    loop {
        f(&v);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if v[i] < radius {
                v[i] += 1;
                break;
            }
            v[i] = -radius;
        }
    }
}

/// Every e ≠ 0 in the box with e ≡ c₁ (mod 2), c₁² − 4c₂ ≤ e² ≤ 0 and
/// `keep(e)`, one sign per ± pair.
pub fn brute_walls(
    g: &[Vec<i64>],
    c1: &[i64],
    c2: i64,
    radius: i64,
    keep: impl Fn(&[i64]) -> bool,
) -> Vec<Vec<i64>> {
    let lo = dot(g, c1, c1) - 4 * c2;
    let mut out = Vec::new();
    for_box(g.len(), radius, |e| {
        if !normalized(e) || e.iter().zip(c1).any(|(a, b)| (a - b).rem_euclid(2) != 0) {
            return;
        }
        let sq = dot(g, e, e);
        if sq <= 0 && sq >= lo && keep(e) {
            out.push(e.to_vec());
        }
    });
    out.sort();
    out
}

pub fn separating(g: &[Vec<i64>], h1: &[i64], h2: &[i64]) -> impl Fn(&[i64]) -> bool {
    let (g, h1, h2) = (g.to_vec(), h1.to_vec(), h2.to_vec());
    move |e| {
        let (a, b) = (dot(&g, e, &h1), dot(&g, e, &h2));
        (a > 0 && b < 0) || (a < 0 && b > 0)
    }
}

/// a x² + b xy + c y² + d x + e y + g with filters p x + q y + r ≥ 0.
#[derive(Debug, Clone, Copy)]
pub struct Bivariate {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub g: i64,
}

impl Bivariate {
    pub fn eval(&self, x: i128, y: i128) -> i128 {
        let q = self;
        i128::from(q.a) * x * x
            + i128::from(q.b) * x * y
            + i128::from(q.c) * y * y
            + i128::from(q.d) * x
            + i128::from(q.e) * y
            + i128::from(q.g)
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b) - i64::from(b < 0 && a.rem_euclid(b) != 0)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Maximum of f over integer points of [lo, hi]² meeting the filters,
/// row by row: on each row the y-range is an interval and f is a
/// univariate quadratic, maximized at an end or next to the vertex.
pub fn row_max(f: &Bivariate, filters: &[(i64, i64, i64)], lo: i64, hi: i64) -> Option<(i128, i128, i128)> {
    let mut best: Option<(i128, i128, i128)> = None;
    for x in lo..=hi {
        let (mut ylo, mut yhi) = (lo, hi);
        let mut empty = false;
        for &(p, q, r) in filters {
            let rest = p * x + r;
            if q > 0 {
                ylo = ylo.max(div_ceil(-rest, q));
            } else if q < 0 {
                yhi = yhi.min(div_floor(rest, -q));
            } else if rest < 0 {
                empty = true;
            }
        }
        if empty || ylo > yhi {
            continue;
        }
        let mut cands = [ylo, yhi, ylo, ylo];
        if f.c < 0 {
            let v = div_floor(-(f.b * x + f.e), 2 * f.c);
            cands[2] = v.clamp(ylo, yhi);
            cands[3] = (v + 1).clamp(ylo, yhi);
        }
        let x = i128::from(x);
        for y in cands {
            let y = i128::from(y);
            let val = f.eval(x, y);
            if best.is_none_or(|(b, _, _)| val > b) {
                best = Some((val, x, y));
            }
        }
    }
    best
}

/// Maximum of a x² + b x + c over integer x in [lo, hi] meeting p x + r ≥ 0.
pub fn line_max(a: i64, b: i64, c: i64, filters: &[(i64, i64)], lo: i64, hi: i64) -> Option<(i128, i128)> {
    let mut best: Option<(i128, i128)> = None;
    for x in i128::from(lo)..=i128::from(hi) {
        if filters.iter().any(|&(p, r)| i128::from(p) * x + i128::from(r) < 0) {
            continue;
        }
        let v = i128::from(a) * x * x + i128::from(b) * x + i128::from(c);
        if best.is_none_or(|(m, _)| v > m) {
            best = Some((v, x));
        }
    }
    best
}
