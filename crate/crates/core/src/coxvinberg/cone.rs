//! Rational polyhedral cones with both representations, converted by the double
//! description method.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::qlinalg::{self, QMat};
use crate::rational::{dot, primitive_rat, serde_rat_mat, Rat};
use crate::{Error, Result};

/// `{x : <a, x> >= 0 for a in inequalities, <e, x> = 0 for e in equalities}`, equal to
/// `cone(rays) + span(lineality)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalCone {
    pub dim: usize,
    #[serde(rename = "h_rep", with = "serde_rat_mat")]
    pub inequalities: QMat,
    #[serde(with = "serde_rat_mat", skip_serializing_if = "Vec::is_empty")]
    pub equalities: QMat,
    #[serde(rename = "v_rep", with = "serde_rat_mat")]
    pub rays: QMat,
    #[serde(with = "serde_rat_mat", skip_serializing_if = "Vec::is_empty")]
    pub lineality: QMat,
}

impl RationalCone {
    pub fn from_h(dim: usize, inequalities: QMat, equalities: QMat) -> Result<Self> {
        check_lengths(dim, &inequalities)?;
        check_lengths(dim, &equalities)?;
        let (rays, lineality) = h_to_v(dim, &inequalities, &equalities);
        let (ineq, eq) = h_to_v(dim, &rays, &lineality);
        let cone = RationalCone { dim, inequalities: ineq, equalities: eq, rays, lineality };
        cone.check()?;
        Ok(cone)
    }

    pub fn from_v(dim: usize, rays: QMat, lineality: QMat) -> Result<Self> {
        check_lengths(dim, &rays)?;
        check_lengths(dim, &lineality)?;
        let (ineq, eq) = h_to_v(dim, &rays, &lineality);
        let (rays, lineality) = h_to_v(dim, &ineq, &eq);
        let cone = RationalCone { dim, inequalities: ineq, equalities: eq, rays, lineality };
        cone.check()?;
        Ok(cone)
    }

    fn check(&self) -> Result<()> {
        let ok = self.rays.iter().chain(&self.lineality).all(|r| {
            self.inequalities.iter().all(|a| !dot(a, r).is_negative())
                && self.equalities.iter().all(|e| dot(e, r).is_zero())
        }) && self.lineality.iter().all(|l| self.inequalities.iter().all(|a| dot(a, l).is_zero()));
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid("inconsistent double description".into()))
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.inequalities.iter().all(|a| !dot(a, x).is_negative())
            && self.equalities.iter().all(|e| dot(e, x).is_zero())
    }

    pub fn contains_cone(&self, other: &RationalCone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
            && other.lineality.iter().all(|l| {
                let neg: Vec<Rat> = l.iter().map(|v| -v).collect();
                self.contains(l) && self.contains(&neg)
            })
    }

    pub fn set_equal(&self, other: &RationalCone) -> bool {
        self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Dimension of the linear span of the cone.
    pub fn span_dim(&self) -> usize {
        self.dim - qlinalg::rank(&self.equalities)
    }

    /// Minimal generating set of the monoid `cone ∩ lattice` (ambient dimension at most 4).
    ///
    /// `lattice` lists a basis of a full-rank lattice (default `Z^dim`); elements are
    /// returned in ambient coordinates, sorted by degree then lexicographically.
    pub fn hilbert_basis(&self, lattice: Option<&QMat>) -> Result<Vec<Vec<Rat>>> {
        if self.dim > 4 {
            return Err(Error::DimensionTooLarge(self.dim));
        }
        if !self.is_pointed() {
            return Err(Error::Invalid("Hilbert basis of a cone with lineality".into()));
        }
        let basis: QMat = match lattice {
            Some(b) => b.clone(),
            None => (0..self.dim).map(|i| crate::polyhedra::unit(self.dim, i)).collect(),
        };
        if basis.len() != self.dim || qlinalg::rank(&basis) != self.dim {
            return Err(Error::DimensionMismatch("lattice basis must have full rank".into()));
        }
        let bt = qlinalg::transpose(&basis);
        // rays as primitive lattice vectors in lattice coordinates
        let rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| {
                let c = qlinalg::solve(&bt, r).expect("full-rank lattice basis");
                primitive_rat(&c).iter().map(|v| v.to_integer().to_i64().unwrap()).collect()
            })
            .collect();
        let to_ambient = |c: &[i64]| -> Vec<Rat> {
            (0..self.dim)
                .map(|k| c.iter().zip(&basis).fold(Rat::zero(), |acc, (&ci, b)| acc + &b[k] * BigInt::from(ci)))
                .collect()
        };
        let degree: Vec<Rat> = (0..self.dim)
            .map(|k| self.inequalities.iter().fold(Rat::zero(), |acc, a| acc + &a[k]))
            .collect();
        let lo: Vec<i64> = (0..self.dim).map(|k| rays.iter().map(|r| r[k].min(0)).sum()).collect();
        let hi: Vec<i64> = (0..self.dim).map(|k| rays.iter().map(|r| r[k].max(0)).sum()).collect();

        let mut candidates: Vec<(Rat, Vec<Rat>)> = Vec::new();
        let mut c = lo.clone();
        loop {
            if c.iter().any(|&v| v != 0) {
                let x = to_ambient(&c);
                if self.contains(&x) {
                    candidates.push((dot(&degree, &x), x));
                }
            }
            let mut k = 0;
            while k < self.dim {
                if c[k] < hi[k] {
                    c[k] += 1;
                    break;
                }
                c[k] = lo[k];
                k += 1;
            }
            if k == self.dim {
                break;
            }
        }
        candidates.sort();
        let mut basis_out: Vec<Vec<Rat>> = Vec::new();
        for (_, x) in candidates {
            let reducible = basis_out.iter().any(|h| {
                let d: Vec<Rat> = x.iter().zip(h).map(|(a, b)| a - b).collect();
                self.contains(&d)
            });
            if !reducible {
                basis_out.push(x);
            }
        }
        Ok(basis_out)
    }
}

fn check_lengths(dim: usize, rows: &QMat) -> Result<()> {
    match rows.iter().find(|r| r.len() != dim) {
        Some(r) => Err(Error::DimensionMismatch(format!("expected length {dim}, got {}", r.len()))),
        None => Ok(()),
    }
}

fn sub_scaled(a: &[Rat], t: &Rat, b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - t * y).collect()
}

/// Double description: generators `(rays, lineality)` of `{x : A x >= 0, E x = 0}`.
///
/// Rays come out primitive and sorted; the lineality basis is in reduced echelon form.
fn h_to_v(dim: usize, ineq: &QMat, eq: &QMat) -> (QMat, QMat) {
    let mut lin: QMat = if eq.is_empty() {
        (0..dim).map(|i| crate::polyhedra::unit(dim, i)).collect()
    } else {
        qlinalg::nullspace(eq, dim)
    };
    let mut rays: QMat = Vec::new();
    // zero sets of rays, as indices into `ineq`
    let mut zeros: Vec<BTreeSet<usize>> = Vec::new();
    for (k, a) in ineq.iter().enumerate() {
        if let Some(p) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lin.remove(p);
            let al = dot(a, &l);
            if al.is_negative() {
                l = l.iter().map(|v| -v).collect();
            }
            let al = dot(a, &l);
            for m in lin.iter_mut() {
                let t = dot(a, m) / &al;
                *m = sub_scaled(m, &t, &l);
            }
            for (r, z) in rays.iter_mut().zip(zeros.iter_mut()) {
                let t = dot(a, r) / &al;
                *r = sub_scaled(r, &t, &l);
                z.insert(k);
            }
            let mut z: BTreeSet<usize> = (0..k).collect();
            z.remove(&k);
            rays.push(l);
            zeros.push(z);
            continue;
        }
        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, r)).collect();
        let mut new_rays = Vec::new();
        let mut new_zeros = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            if !v.is_negative() {
                new_rays.push(rays[i].clone());
                let mut z = zeros[i].clone();
                if v.is_zero() {
                    z.insert(k);
                }
                new_zeros.push(z);
            }
        }
        for (i, vp) in vals.iter().enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (j, vn) in vals.iter().enumerate() {
                if !vn.is_negative() {
                    continue;
                }
                let common: BTreeSet<usize> = zeros[i].intersection(&zeros[j]).copied().collect();
                let adjacent = (0..rays.len())
                    .filter(|&m| m != i && m != j)
                    .all(|m| !common.is_subset(&zeros[m]));
                if !adjacent {
                    continue;
                }
                let r: Vec<Rat> = rays[j]
                    .iter()
                    .zip(&rays[i])
                    .map(|(x, y)| x * vp - y * vn)
                    .collect();
                let mut z = common;
                z.insert(k);
                new_rays.push(r);
                new_zeros.push(z);
            }
        }
        rays = new_rays;
        zeros = new_zeros;
    }
    let mut rays: QMat = rays
        .into_iter()
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .map(|r| primitive_rat(&r))
        .collect();
    rays.sort();
    rays.dedup();
    let mut lin = lin;
    let piv = qlinalg::rref(&mut lin);
    lin.truncate(piv.len());
    let lin = lin.iter().map(|l| primitive_rat(l)).collect();
    (rays, lin)
}
