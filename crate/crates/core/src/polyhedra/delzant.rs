use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{Ambient, Facet, LabeledPolyhedron};
use crate::coxvinberg::RationalCone;
use crate::qlinalg::{self, QMat};
use crate::rational::{primitive_integer, primitive_rat, serde_rat_vec, Rat};
use crate::rootsys::RootDatum;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DelzantVerdict {
    pub holds: bool,
    /// A vertex whose edge cone is not unimodular.
    #[serde(with = "serde_rat_vec")]
    pub vertex: Vec<Rat>,
    /// `|det|` of the primitive edge directions at `vertex` (1 when `holds`).
    pub index: u64,
}

/// Whether every vertex cone of the bounded simple polytope `P` is generated by a
/// basis of `lattice` (rows, ambient coordinates; default `Z^n`).
pub fn is_delzant(p: &LabeledPolyhedron, lattice: Option<&QMat>) -> Result<DelzantVerdict> {
    let full = p.with_chamber_walls();
    if !full.is_bounded() {
        return Err(Error::Unbounded);
    }
    if !super::is_simple(&full).holds {
        return Err(Error::NotSimple);
    }
    let n = p.dim;
    let bt = match lattice {
        Some(b) if b.len() == n && qlinalg::rank(b) == n => qlinalg::transpose(b),
        Some(_) => return Err(Error::DimensionMismatch("lattice basis must have full rank".into())),
        None => (0..n).map(|i| super::unit(n, i)).collect(),
    };
    for face in full.faces().into_iter().filter(|f| f.dim == 0) {
        let rows: QMat = face.active.iter().map(|&i| full.facets[i].beta_rat()).collect();
        let mut edges: QMat = Vec::with_capacity(n);
        for k in 0..rows.len() {
            let others: QMat = rows.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, r)| r.clone()).collect();
            let mut d = qlinalg::nullspace(&others, n).pop().expect("simple vertex");
            if crate::rational::dot(&rows[k], &d).is_positive() {
                d = d.iter().map(|v| -v).collect();
            }
            let c = qlinalg::solve(&bt, &d).expect("full-rank lattice");
            edges.push(primitive_rat(&c));
        }
        let det = qlinalg::det(&edges).abs();
        if !det.is_one() {
            return Ok(DelzantVerdict {
                holds: false,
                vertex: face.interior_point,
                index: det.to_integer().to_u64().unwrap_or(u64::MAX),
            });
        }
    }
    Ok(DelzantVerdict { holds: true, vertex: Vec::new(), index: 1 })
}

/// The polytope `conv(W . points)` as a full-space polyhedron.
pub fn weyl_orbit_hull(rd: &RootDatum, points: &[Vec<Rat>]) -> Result<LabeledPolyhedron> {
    let n = rd.rank;
    let mut gens: QMat = Vec::new();
    for x in points {
        if x.len() != n {
            return Err(Error::DimensionMismatch("point length differs from rank".into()));
        }
        for y in rd.weyl_orbit(x) {
            let mut h = y;
            h.push(Rat::one());
            gens.push(h);
        }
    }
    if gens.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    // <a, x> + c t >= 0 on the homogenized hull becomes <-a, x> <= c
    let cone = RationalCone::from_v(n + 1, gens, Vec::new())?;
    let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for a in &cone.inequalities {
        rows.push((a[..n].iter().map(|v| -v).collect(), a[n].clone()));
    }
    for e in &cone.equalities {
        rows.push((e[..n].iter().map(|v| -v).collect(), e[n].clone()));
        rows.push((e[..n].to_vec(), -e[n].clone()));
    }
    let mut facets = Vec::new();
    for (a, c) in rows {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        let prim = primitive_integer(&a);
        let (p0, a0) = prim.iter().zip(&a).find(|(_, x)| !x.is_zero()).unwrap();
        let scale = Rat::from_integer(p0.clone()) / a0;
        let beta = prim.iter().map(|b: &BigInt| b.to_i64().unwrap()).collect();
        facets.push(Facet::new(beta, c * scale));
    }
    LabeledPolyhedron::new(Some(rd.clone()), Ambient::Full, n, facets)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::rational::rvec;

    #[test]
    fn standard_simplex_and_square_are_delzant() {
        let simplex = full(2, &[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 1], 1)]);
        assert!(is_delzant(&simplex, None).unwrap().holds);
        let sq = full(2, &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)]);
        assert!(is_delzant(&sq, None).unwrap().holds);
    }

    #[test]
    fn index_two_corner_is_not_delzant() {
        // conv{(0,0), (2,0), (0,1)}: the corner at (2,0) has index 2
        let t = full(2, &[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 2], 2)]);
        let v = is_delzant(&t, None).unwrap();
        assert!(!v.holds);
        assert_eq!(v.index, 2);
    }

    #[test]
    fn unbounded_is_an_error() {
        let h = full(2, &[(&[1, 0], 1)]);
        assert!(matches!(is_delzant(&h, None), Err(Error::Unbounded)));
    }

    #[test]
    fn rho_hexagon_depends_on_the_lattice() {
        let a2 = rd("A2");
        let hex = weyl_orbit_hull(&a2, &[rvec(&[1, 1])]).unwrap();
        assert_eq!(hex.facets.len(), 6);
        assert_eq!(hex.vertices().len(), 6);
        let weight = is_delzant(&hex, None).unwrap();
        assert!(!weight.holds);
        assert_eq!(weight.index, 3);
        assert!(is_delzant(&hex, Some(&a2.simple_roots)).unwrap().holds);
    }
}
