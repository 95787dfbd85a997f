//! Smith normal form over the integers and the Delzant exact sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub type IMat = Vec<Vec<BigInt>>;

fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Integer matrix `A : Z^n -> Z^r` with `U A V = D`, `U`, `V` unimodular and `D`
/// diagonal with `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub matrix: IMat,
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
    pub rank: usize,
}

impl LatticeMap {
    pub fn new(matrix: IMat) -> Self {
        let r = matrix.len();
        let n = matrix.first().map_or(0, Vec::len);
        let mut d = matrix.clone();
        let mut u = identity(r);
        let mut v = identity(n);
        let mut t = 0;
        while t < r.min(n) {
            // smallest nonzero |entry| in the remaining block, lowest (row, col) first
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..n {
                    if !d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..r {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    row_sub(&mut d, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                }
                dirty |= !d[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    col_sub(&mut d, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                }
                dirty |= !d[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let bad = (t + 1..r).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            if let Some(i) = bad {
                let one = -BigInt::one();
                row_sub(&mut d, t, i, &one);
                row_sub(&mut u, t, i, &one);
                continue;
            }
            if d[t][t].is_negative() {
                for x in d[t].iter_mut() {
                    *x = -x.clone();
                }
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
            t += 1;
        }
        LatticeMap { matrix, u, d, v, rank: t }
    }

    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }

    /// Basis of `ker A` as rows, in Hermite normal form.
    pub fn kernel_basis(&self) -> IMat {
        let n = self.v.len();
        let rows: IMat = (self.rank..n).map(|j| (0..n).map(|i| self.v[i][j].clone()).collect()).collect();
        hermite_rows(rows)
    }
}

fn row_sub(m: &mut IMat, i: usize, t: usize, q: &BigInt) {
    let src = m[t].clone();
    for (x, s) in m[i].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

fn col_sub(m: &mut IMat, j: usize, t: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[t].clone();
        row[j] -= q * s;
    }
}

/// Row-style Hermite normal form: positive pivots, entries above each pivot reduced.
pub fn hermite_rows(mut m: IMat) -> IMat {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        loop {
            let Some(p) = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()))
            else {
                break;
            };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                let q = m[i][c].div_floor(&m[r][c]);
                row_sub(&mut m, i, r, &q);
                done &= m[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                row_sub(&mut m, i, r, &q);
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelzantSequence {
    /// Basis of `L = ker(Z^n -> Z^r)`, one row per generator.
    pub kernel_basis: Vec<Vec<String>>,
    /// The map is onto `Z^r ⊗ Q` (finite cokernel).
    pub exact_on_right: bool,
    /// Invariant factors `> 1` of the cokernel's torsion.
    pub cokernel_invariants: Vec<String>,
    /// The map is onto `Z^r` itself.
    pub surjective: bool,
    #[serde(skip)]
    pub map: LatticeMap,
}

impl DelzantSequence {
    pub fn kernel(&self) -> IMat {
        self.map.kernel_basis()
    }
}

/// The sequence `0 -> L -> Z^n -> Z^r` with `e_i -> beta_i`.
pub fn delzant_sequence(betas: &[Vec<i64>]) -> crate::Result<DelzantSequence> {
    let r = betas.first().map_or(0, Vec::len);
    if betas.iter().any(|b| b.len() != r) {
        return Err(crate::Error::DimensionMismatch("betas of different lengths".into()));
    }
    let matrix: IMat = (0..r).map(|i| betas.iter().map(|b| BigInt::from(b[i])).collect()).collect();
    let map = LatticeMap::new(matrix);
    let inv = map.invariants();
    let exact_on_right = map.rank == r;
    let kernel = map.kernel_basis();
    Ok(DelzantSequence {
        kernel_basis: kernel.iter().map(|k| k.iter().map(ToString::to_string).collect()).collect(),
        exact_on_right,
        cokernel_invariants: inv.iter().filter(|d| !d.is_one()).map(ToString::to_string).collect(),
        surjective: exact_on_right && inv.iter().all(One::is_one),
        map,
    })
}
