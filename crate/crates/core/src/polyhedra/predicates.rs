//! The cut predicates: simplicity, outward-positivity, universality and
//! admissibility conditions (1) and (3) relative to a Kirwan polytope.

use num_traits::Zero;
use serde::Serialize;

use super::faces::face_lp;
use super::{Ambient, LabeledPolyhedron};
use crate::qlinalg::{self, QMat};
use crate::rational::{dot_int, Rat};
use crate::rootsys::RootDatum;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The normals active on this face are linearly dependent.
    NotSimple { face: Vec<usize> },
    /// The face meets the chamber face with this vanishing set without containing its perpendicular space.
    NotPerpendicular { face: Vec<usize>, chamber_face: Vec<usize> },
    /// Facet `facet` pairs negatively with simple root `root`.
    NegativeNormal { facet: usize, root: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub certificate: Option<Violation>,
}

impl Verdict {
    fn ok() -> Self {
        Verdict { holds: true, certificate: None }
    }

    fn fail(v: Violation) -> Self {
        Verdict { holds: false, certificate: Some(v) }
    }
}

/// Transversality of the facet hyperplanes at every nonempty face.
pub fn is_simple(p: &LabeledPolyhedron) -> Verdict {
    for face in p.faces() {
        let rows: QMat = face.active.iter().map(|&i| p.facets[i].beta_rat()).collect();
        if qlinalg::rank(&rows) < face.active.len() {
            return Verdict::fail(Violation::NotSimple { face: face.active });
        }
    }
    Verdict::ok()
}

/// Every normal `beta_i` lies in the closed positive chamber of `t`.
pub fn is_outward_positive(p: &LabeledPolyhedron) -> bool {
    outward_positivity(p).holds
}

pub fn outward_positivity(p: &LabeledPolyhedron) -> Verdict {
    let Some(rd) = &p.root_datum else {
        return Verdict::fail(Violation::NegativeNormal { facet: 0, root: 0 });
    };
    for (i, f) in p.facets.iter().enumerate() {
        for j in 0..rd.rank {
            if rd.root_on_int_coweight(j, &f.beta) < 0 {
                return Verdict::fail(Violation::NegativeNormal { facet: i, root: j });
            }
        }
    }
    Verdict::ok()
}

/// Conditions (1) and (3) with faces tested against `P_I ∩ sigma ∩ extra`.
fn perpendicular_condition(
    p: &LabeledPolyhedron,
    rd: &RootDatum,
    extra: Option<&LabeledPolyhedron>,
) -> Verdict {
    let simple = is_simple(p);
    if !simple.holds {
        return simple;
    }
    let chamber_faces = rd.chamber_faces();
    let perps: Vec<_> = chamber_faces.iter().map(|s| rd.perp_subspace(s)).collect();
    for face in p.faces() {
        if face.active.is_empty() {
            continue;
        }
        for (sigma, perp) in chamber_faces.iter().zip(&perps) {
            if perp.is_empty() {
                continue;
            }
            let contained = perp.iter().all(|u| {
                face.active
                    .iter()
                    .all(|&i| dot_int(&p.facets[i].beta, u).is_zero())
            });
            if contained {
                continue;
            }
            let mut lp = face_lp(p, &face.active);
            for j in 0..p.dim {
                lp.add_ge(super::unit(p.dim, j), Rat::zero());
            }
            for &s in &sigma.vanishing {
                lp.add_eq(super::unit(p.dim, s), Rat::zero());
            }
            if let Some(k) = extra {
                for f in &k.facets {
                    lp.add_le(f.beta_rat(), f.xi.clone());
                }
            }
            if lp.is_feasible() {
                return Verdict::fail(Violation::NotPerpendicular {
                    face: face.active.clone(),
                    chamber_face: sigma.vanishing.clone(),
                });
            }
        }
    }
    Verdict::ok()
}

/// Simple, and every face meeting a wall of the chamber meets it perpendicularly.
pub fn is_universal(p: &LabeledPolyhedron) -> Result<Verdict> {
    if p.ambient != Ambient::Chamber {
        return Err(Error::InvalidPolyhedron("universality needs a chamber-relative set".into()));
    }
    Ok(perpendicular_condition(p, p.root_datum()?, None))
}

/// Admissibility conditions (1) and (3) with respect to a Kirwan polytope.
pub fn admissibility_13(p: &LabeledPolyhedron, kirwan: &LabeledPolyhedron) -> Result<Verdict> {
    let rd = p.root_datum()?;
    if kirwan.root_datum.as_ref() != Some(rd) {
        return Err(Error::IncompatibleRootData);
    }
    Ok(perpendicular_condition(p, rd, Some(kirwan)))
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn interval_is_universal_and_outward_positive() {
        let a1 = rd("A1");
        let p = chamber(&a1, &[(&[1], 5)]);
        assert!(is_simple(&p).holds);
        assert!(is_outward_positive(&p));
        assert!(is_universal(&p).unwrap().holds);
    }

    #[test]
    fn concurrent_lines_are_not_simple() {
        let p = full(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 0)]);
        let v = is_simple(&p);
        assert!(!v.holds);
        assert_eq!(v.certificate, Some(Violation::NotSimple { face: vec![0, 1, 2] }));
        assert!(is_simple(&full(2, &[(&[1, 1], 0)])).holds);
    }

    #[test]
    fn skewed_wall_meeting_is_not_universal() {
        let a2 = rd("A2");
        // x1 <= 4 meets the wall x2 = 0, but its normal is not perpendicular to alpha_2
        let p = chamber(&a2, &[(&[1, 0], 4), (&[-2, -1], -4), (&[0, 1], 2)]);
        let v = is_universal(&p).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.certificate,
            Some(Violation::NotPerpendicular { face: vec![0], chamber_face: vec![1] })
        );
    }

    #[test]
    fn negative_normal_is_not_outward_positive() {
        let a2 = rd("A2");
        let p = chamber(&a2, &[(&[-2, -1], 3)]);
        assert!(!is_outward_positive(&p));
        assert_eq!(
            outward_positivity(&p).certificate,
            Some(Violation::NegativeNormal { facet: 0, root: 0 })
        );
    }

    #[test]
    fn admissibility_ignores_walls_outside_kirwan() {
        let a2 = rd("A2");
        // single non-perpendicular facet meeting the wall x2 = 0 at (4, 0)
        let p = chamber(&a2, &[(&[3, 2], 12)]);
        assert!(!is_universal(&p).unwrap().holds);
        let inside = chamber(&a2, &[(&[-1, -1], -3), (&[0, 1], 3), (&[1, 0], 3)]);
        assert!(admissibility_13(&p, &inside).unwrap().holds);
        let reaching = chamber(&a2, &[(&[1, 0], 5)]);
        assert!(!admissibility_13(&p, &reaching).unwrap().holds);
        let b2 = rd("B2");
        let other = chamber(&b2, &[(&[1, 0], 5)]);
        assert!(matches!(admissibility_13(&p, &other), Err(Error::IncompatibleRootData)));
    }
}
