//! Dense exact linear algebra over the rationals (row-major `Vec<Vec<Rat>>`).

use num_traits::{One, Zero};

use crate::rational::Rat;

pub type QMat = Vec<Vec<Rat>>;

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMat) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{v : m v = 0}` for a matrix with `cols` columns.
pub fn nullspace(m: &QMat, cols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn transpose(m: &QMat) -> QMat {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &QMat, v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| crate::rational::dot(row, v)).collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| crate::rational::dot(row, col)).collect())
        .collect()
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Unique solution of the square system `m x = b`, if `m` is invertible.
pub fn solve(m: &QMat, b: &[Rat]) -> Option<Vec<Rat>> {
    inverse(m).map(|inv| mat_vec(&inv, b))
}

/// Some solution of `m x = b` (free variables set to zero), or `None` if inconsistent.
pub fn solve_any(m: &QMat, b: &[Rat], cols: usize) -> Option<Vec<Rat>> {
    let mut aug: QMat = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn det(m: &QMat) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    d
}

/// True iff every vector of `sub` lies in the row span of `span`.
pub fn span_contains(span: &[Vec<Rat>], sub: &[Vec<Rat>]) -> bool {
    let base = rank(&span.to_vec());
    let mut all = span.to_vec();
    all.extend(sub.iter().cloned());
    rank(&all) == base
}
