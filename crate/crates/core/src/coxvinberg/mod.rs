//! Lattice and cone data: the Delzant/Cox sequence, the Vinberg lattice and cones
//! `Q_G`, `Q_{G,beta}`, the abelianization cone, and Kirwan cuts.
//!
//! Weights are in the fundamental-weight basis and coweights in the simple-coroot
//! basis, so `<x, beta>` is the plain dot product.

mod cone;
mod smith;

pub use cone::RationalCone;
pub use smith::{delzant_sequence, hermite_rows, imat_mul, DelzantSequence, IMat, LatticeMap};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::polyhedra::{
    admissibility_13, fourier_motzkin_eliminate, intersect, Ambient, Facet, InequalitySystem,
    LabeledPolyhedron, Region, Verdict,
};
use crate::qlinalg::QMat;
use crate::rational::{dot, primitive_rat, rat, Rat};
use crate::rootsys::RootDatum;
use crate::{Error, Result};

/// `{h : <beta_j, h> <= xi_j}` obtained by projecting away the radial coordinates
/// `s_j >= 0` of `s_j + <beta_j, h> = xi_j`.
pub fn delzant_moment_image(betas: &[Vec<i64>], xi: &[Rat]) -> Result<Region> {
    let n = betas.len();
    if xi.len() != n {
        return Err(Error::DimensionMismatch("betas and xi differ in length".into()));
    }
    let r = betas.first().map_or(0, Vec::len);
    if betas.iter().any(|b| b.len() != r || b.iter().all(|&v| v == 0)) {
        return Err(Error::DimensionMismatch("betas must be nonzero and of equal length".into()));
    }
    let mut sys = InequalitySystem::new(n + r);
    for (j, b) in betas.iter().enumerate() {
        let mut a = vec![Rat::zero(); n + r];
        a[j] = rat(1);
        sys.add_ge(a.clone(), Rat::zero());
        for (k, &bk) in b.iter().enumerate() {
            a[n + k] = rat(bk);
        }
        sys.add_eq(a, xi[j].clone());
    }
    let region = fourier_motzkin_eliminate(&sys, &(0..n).collect::<Vec<_>>())?;
    // restore the stacky labels of the input normals
    Ok(match region {
        Region::Empty => Region::Empty,
        Region::Polyhedron(mut p) => {
            for f in p.facets.iter_mut() {
                if let Some(j) = (0..n).find(|&j| f.same_halfspace(&Facet::new(betas[j].clone(), xi[j].clone()))) {
                    *f = Facet::new(betas[j].clone(), xi[j].clone());
                }
            }
            Region::Polyhedron(p)
        }
    })
}

fn concat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().chain(b).cloned().collect()
}

/// `Q_G = {(x, x + sum m_i alpha_i) : x dominant, m_i >= 0}` in `t* ⊕ t*`.
pub fn vinberg_cone(rd: &RootDatum) -> Result<RationalCone> {
    let r = rd.rank;
    let zero = vec![Rat::zero(); r];
    let mut gens: QMat = rd.fundamental_weights.iter().map(|w| concat(w, w)).collect();
    gens.extend(rd.simple_roots.iter().map(|a| concat(&zero, a)));
    RationalCone::from_v(2 * r, gens, Vec::new())
}

/// `Q_{G,beta} = {(x, y) : x dominant, y_i >= <beta_i, x>}` in `t* ⊕ Q^n`.
pub fn extended_cone(rd: &RootDatum, betas: &[Vec<i64>]) -> Result<RationalCone> {
    let r = rd.rank;
    let n = betas.len();
    if betas.iter().any(|b| b.len() != r) {
        return Err(Error::DimensionMismatch("beta length differs from rank".into()));
    }
    let mut ineq: QMat = (0..r).map(|j| crate::polyhedra::unit(r + n, j)).collect();
    for (i, b) in betas.iter().enumerate() {
        let mut a: Vec<Rat> = b.iter().map(|&v| rat(-v)).collect();
        a.extend((0..n).map(|k| if k == i { rat(1) } else { Rat::zero() }));
        ineq.push(a);
    }
    RationalCone::from_h(r + n, ineq, Vec::new())
}

/// `{x : (x, xi) in cone}`, computed from the generators alone: the multipliers of
/// `(x, xi) = sum lambda_k g_k` are projected away.
pub fn cone_slice(rd: &RootDatum, cone: &RationalCone, xi: &[Rat]) -> Result<Region> {
    let r = rd.rank;
    if cone.dim != r + xi.len() {
        return Err(Error::DimensionMismatch("slice level has the wrong length".into()));
    }
    let gens: QMat = cone
        .rays
        .iter()
        .cloned()
        .chain(cone.lineality.iter().cloned())
        .chain(cone.lineality.iter().map(|l| l.iter().map(|v| -v).collect()))
        .collect();
    let m = gens.len();
    let mut sys = InequalitySystem::new(m + r);
    for k in 0..m {
        sys.add_ge(crate::polyhedra::unit(m + r, k), Rat::zero());
    }
    for c in 0..cone.dim {
        let mut a: Vec<Rat> = gens.iter().map(|g| g[c].clone()).collect();
        a.resize(m + r, Rat::zero());
        if c < r {
            a[m + c] = rat(-1);
            sys.add_eq(a, Rat::zero());
        } else {
            sys.add_eq(a, xi[c - r].clone());
        }
    }
    let region = fourier_motzkin_eliminate(&sys, &(0..m).collect::<Vec<_>>())?;
    Ok(match region {
        Region::Empty => Region::Empty,
        Region::Polyhedron(mut p) => {
            p.root_datum = Some(rd.clone());
            Region::Polyhedron(p)
        }
    })
}

/// The cone spanned by the simple roots, and whether it is smooth for the root lattice.
pub fn abelianization_cone(rd: &RootDatum) -> Result<(RationalCone, bool)> {
    let cone = RationalCone::from_v(rd.rank, rd.simple_roots.clone(), Vec::new())?;
    // primitive root-lattice generators of the rays must form a unimodular matrix
    let coords: QMat = cone
        .rays
        .iter()
        .map(|g| rd.root_coordinates(g).map(|c| primitive_rat(&c)).ok_or(Error::Singular))
        .collect::<Result<_>>()?;
    let smooth = coords.len() == rd.rank && crate::qlinalg::det(&coords).abs() == rat(1);
    assert!(smooth, "simple roots always give a smooth cone");
    Ok((cone, smooth))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionVerdict {
    pub holds: bool,
    /// `(i, j)`: `beta_i` pairs negatively with simple root `alpha_j`.
    pub violation: Option<(usize, usize)>,
}

/// Whether every cocharacter `beta_i` maps the coordinate cone into the cone of the
/// abelianization, i.e. pairs nonnegatively with its generators.
pub fn phi_beta_extends(rd: &RootDatum, betas: &[Vec<i64>]) -> Result<ExtensionVerdict> {
    let (cone, _) = abelianization_cone(rd)?;
    let roots: QMat = rd.simple_roots.iter().map(|a| primitive_rat(a)).collect();
    for (i, b) in betas.iter().enumerate() {
        if b.len() != rd.rank {
            return Err(Error::DimensionMismatch("beta length differs from rank".into()));
        }
        let bq: Vec<Rat> = b.iter().map(|&v| rat(v)).collect();
        for g in &cone.rays {
            if dot(g, &bq).is_negative() {
                let j = roots.iter().position(|a| a == g).expect("ray is a simple root");
                return Ok(ExtensionVerdict { holds: false, violation: Some((i, j)) });
            }
        }
    }
    Ok(ExtensionVerdict { holds: true, violation: None })
}

/// `X = {(x, y) : x - y in the root lattice}` with `x`, `y` weights.
#[derive(Clone, Debug, PartialEq)]
pub struct VinbergLattice {
    pub root_datum: RootDatum,
}

impl VinbergLattice {
    pub fn new(rd: &RootDatum) -> Self {
        VinbergLattice { root_datum: rd.clone() }
    }

    /// `{(w_j, w_j)} ∪ {(0, alpha_i)}`.
    pub fn basis(&self) -> QMat {
        let rd = &self.root_datum;
        let zero = vec![Rat::zero(); rd.rank];
        let mut b: QMat = rd.fundamental_weights.iter().map(|w| concat(w, w)).collect();
        b.extend(rd.simple_roots.iter().map(|a| concat(&zero, a)));
        b
    }
}

pub fn vinberg_lattice_member(vl: &VinbergLattice, x: &[Rat], y: &[Rat]) -> bool {
    let rd = &vl.root_datum;
    if x.len() != rd.rank || y.len() != rd.rank || !x.iter().chain(y).all(|v| v.is_integer()) {
        return false;
    }
    let d: Vec<Rat> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    rd.root_coordinates(&d).is_some_and(|c| c.iter().all(|v| v.is_integer()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct KirwanCut {
    pub region: Region,
    /// `P` satisfies admissibility conditions (1) and (3) against the Kirwan polytope.
    pub admissible: bool,
    pub admissibility: Verdict,
}

/// `Phi(M_P) = Phi(M) ∩ P`, flagged with the admissibility verdict of `P`.
pub fn kirwan_cut(kirwan: &LabeledPolyhedron, p: &LabeledPolyhedron) -> Result<KirwanCut> {
    let verdict = admissibility_13(p, kirwan)?;
    if !verdict.holds {
        log::warn!("cut polytope is not admissible for this Kirwan polytope: {:?}", verdict.certificate);
    }
    let region = intersect(kirwan, p)?;
    Ok(KirwanCut { region, admissible: verdict.holds, admissibility: verdict })
}

/// Chamber-relative polyhedron `{x dominant : <beta_i, x> <= xi_i}`.
pub fn chamber_polyhedron(rd: &RootDatum, betas: &[Vec<i64>], xi: &[Rat]) -> Result<LabeledPolyhedron> {
    let facets = betas.iter().zip(xi).map(|(b, x)| Facet::new(b.clone(), x.clone())).collect();
    LabeledPolyhedron::new(Some(rd.clone()), Ambient::Chamber, rd.rank, facets)
}
