//! Labeled rational polyhedral sets `{x : <beta_i, x> <= xi_i}` in `t*`, either
//! restricted to the closed positive Weyl chamber or in the full space.
//!
//! Everything here is exact: feasibility, containment and redundancy are decided by
//! the rational simplex in [`crate::lp`].

mod delzant;
mod extension;
mod faces;
mod fan;
mod ops;
mod predicates;
mod weitsman;

pub use delzant::{is_delzant, weyl_orbit_hull, DelzantVerdict};
pub use extension::w_invariant_extension;
pub use faces::Face;
pub use fan::{stacky_normal_fan, StackyFan};
pub use ops::{fourier_motzkin_eliminate, intersect, InequalitySystem};
pub use predicates::{
    admissibility_13, is_outward_positive, is_simple, is_universal, outward_positivity, Verdict,
    Violation,
};
pub use weitsman::{classify as weitsman_classify, weitsman_strata, LinearCondition, Stratum};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{dot_int, gcd_slice, rat, serde_rat, Rat};
use crate::rootsys::RootDatum;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    /// `P` is understood as a subset of the closed positive chamber.
    Chamber,
    /// `P` is a subset of all of `t*`.
    Full,
}

/// One half-space `<beta, x> <= xi`; `label` is the lattice index of `beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Facet {
    pub beta: Vec<i64>,
    #[serde(with = "serde_rat")]
    pub xi: Rat,
    pub label: u64,
}

impl Facet {
    pub fn new(beta: Vec<i64>, xi: Rat) -> Self {
        let label = gcd_slice(&beta).unsigned_abs();
        Facet { beta, xi, label }
    }

    pub fn primitive(&self) -> Vec<i64> {
        let g = self.label.max(1) as i64;
        self.beta.iter().map(|b| b / g).collect()
    }

    pub fn beta_rat(&self) -> Vec<Rat> {
        self.beta.iter().map(|&b| rat(b)).collect()
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        dot_int(&self.beta, x)
    }

    /// Same closed half-space (same primitive normal and same level `xi / label`).
    pub fn same_halfspace(&self, other: &Facet) -> bool {
        self.primitive() == other.primitive()
            && &self.xi * BigInt::from(other.label) == &other.xi * BigInt::from(self.label)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPolyhedron {
    pub root_datum: Option<RootDatum>,
    pub ambient: Ambient,
    pub dim: usize,
    pub facets: Vec<Facet>,
}

/// Result of operations that may produce the empty set.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Empty,
    Polyhedron(LabeledPolyhedron),
}

impl Region {
    pub fn is_empty(&self) -> bool {
        matches!(self, Region::Empty)
    }

    pub fn polyhedron(&self) -> Option<&LabeledPolyhedron> {
        match self {
            Region::Empty => None,
            Region::Polyhedron(p) => Some(p),
        }
    }

    pub fn into_polyhedron(self) -> Option<LabeledPolyhedron> {
        match self {
            Region::Empty => None,
            Region::Polyhedron(p) => Some(p),
        }
    }
}

impl LabeledPolyhedron {
    /// Validates and builds a polyhedron; the set must be nonempty.
    pub fn new(
        root_datum: Option<RootDatum>,
        ambient: Ambient,
        dim: usize,
        facets: Vec<Facet>,
    ) -> Result<Self> {
        let p = Self::unchecked(root_datum, ambient, dim, facets);
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn unchecked(
        root_datum: Option<RootDatum>,
        ambient: Ambient,
        dim: usize,
        facets: Vec<Facet>,
    ) -> Self {
        LabeledPolyhedron { root_datum, ambient, dim, facets }
    }

    /// Chamber-relative polyhedron from `(beta, xi)` pairs; labels are derived from `beta`.
    pub fn chamber(rd: &RootDatum, facets: &[(Vec<i64>, Rat)]) -> Result<Self> {
        let f = facets.iter().map(|(b, x)| Facet::new(b.clone(), x.clone())).collect();
        Self::new(Some(rd.clone()), Ambient::Chamber, rd.rank, f)
    }

    pub fn full(rd: Option<&RootDatum>, dim: usize, facets: &[(Vec<i64>, Rat)]) -> Result<Self> {
        let f = facets.iter().map(|(b, x)| Facet::new(b.clone(), x.clone())).collect();
        Self::new(rd.cloned(), Ambient::Full, dim, f)
    }

    fn validate(&self) -> Result<()> {
        if let Some(rd) = &self.root_datum {
            if rd.rank != self.dim {
                return Err(Error::InvalidPolyhedron(format!(
                    "dimension {} does not match root datum rank {}",
                    self.dim, rd.rank
                )));
            }
        } else if self.ambient == Ambient::Chamber {
            return Err(Error::InvalidPolyhedron(
                "chamber-relative polyhedron needs a root datum".into(),
            ));
        }
        for (i, f) in self.facets.iter().enumerate() {
            if f.beta.len() != self.dim {
                return Err(Error::InvalidPolyhedron(format!("facet {i}: wrong length")));
            }
            if f.beta.iter().all(|&b| b == 0) {
                return Err(Error::InvalidPolyhedron(format!("facet {i}: zero normal")));
            }
            if f.label != gcd_slice(&f.beta).unsigned_abs() {
                return Err(Error::InvalidPolyhedron(format!(
                    "facet {i}: label {} inconsistent with normal {:?}",
                    f.label, f.beta
                )));
            }
            if self.ambient == Ambient::Chamber && !f.xi.is_negative() {
                continue;
            }
            if self.ambient == Ambient::Chamber {
                let mut lp = self.chamber_lp();
                lp.add_le(f.beta_rat(), f.xi.clone());
                if !lp.is_feasible() {
                    return Err(Error::InvalidPolyhedron(format!(
                        "facet {i}: half-space misses the positive chamber"
                    )));
                }
            }
        }
        if !self.lp().is_feasible() {
            return Err(Error::EmptyPolyhedron);
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.dim
    }

    pub fn root_datum(&self) -> Result<&RootDatum> {
        self.root_datum
            .as_ref()
            .ok_or_else(|| Error::InvalidPolyhedron("no root datum".into()))
    }

    /// Only the chamber constraints (or nothing, in full-space mode).
    pub(crate) fn chamber_lp(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.dim);
        if self.ambient == Ambient::Chamber {
            for j in 0..self.dim {
                lp.add_ge(unit(self.dim, j), Rat::zero());
            }
        }
        lp
    }

    /// All defining constraints of the set.
    pub fn lp(&self) -> LinearProgram {
        let mut lp = self.chamber_lp();
        for f in &self.facets {
            lp.add_le(f.beta_rat(), f.xi.clone());
        }
        lp
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.lp().satisfied_by(x)
    }

    /// `other` is a subset of `self`.
    pub fn contains(&self, other: &LabeledPolyhedron) -> bool {
        let olp = other.lp();
        let bound = |a: Vec<Rat>, b: &Rat| match olp.maximize(&a) {
            LpOutcome::Optimal { value, .. } => value <= *b,
            LpOutcome::Unbounded => false,
            LpOutcome::Infeasible => true,
        };
        let mine = self.chamber_lp();
        mine.le.iter().all(|(a, b)| bound(a.clone(), b))
            && self.facets.iter().all(|f| bound(f.beta_rat(), &f.xi))
    }

    pub fn set_equal(&self, other: &LabeledPolyhedron) -> bool {
        self.contains(other) && other.contains(self)
    }

    pub fn is_bounded(&self) -> bool {
        let lp = self.lp();
        (0..self.dim).all(|k| {
            let e = unit(self.dim, k);
            let neg: Vec<Rat> = e.iter().map(|v| -v).collect();
            matches!(lp.maximize(&e), LpOutcome::Optimal { .. })
                && matches!(lp.maximize(&neg), LpOutcome::Optimal { .. })
        })
    }

    /// The same set written in full-space mode, with the chamber walls as extra facets.
    pub fn with_chamber_walls(&self) -> LabeledPolyhedron {
        let mut facets = self.facets.clone();
        if self.ambient == Ambient::Chamber {
            for j in 0..self.dim {
                let mut b = vec![0; self.dim];
                b[j] = -1;
                facets.push(Facet::new(b, Rat::zero()));
            }
        }
        Self::unchecked(self.root_datum.clone(), Ambient::Full, self.dim, facets)
    }

    /// Reinterprets the same inequalities in the other ambient mode (no validation).
    pub fn with_ambient(&self, ambient: Ambient) -> LabeledPolyhedron {
        Self::unchecked(self.root_datum.clone(), ambient, self.dim, self.facets.clone())
    }

    pub fn faces(&self) -> Vec<Face> {
        faces::faces(self)
    }

    /// Vertices of the underlying set (chamber walls included), sorted.
    pub fn vertices(&self) -> Vec<Vec<Rat>> {
        let full = self.with_chamber_walls();
        let mut out: Vec<Vec<Rat>> = full
            .faces()
            .into_iter()
            .filter(|f| f.dim == 0)
            .filter_map(|f| f.point().map(|p| p.to_vec()))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

pub(crate) fn unit(n: usize, j: usize) -> Vec<Rat> {
    (0..n).map(|k| if k == j { rat(1) } else { Rat::zero() }).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    root_datum: Option<RootDatum>,
    ambient: Ambient,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    facets: Vec<Facet>,
}

impl Serialize for LabeledPolyhedron {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            root_datum: self.root_datum.clone(),
            ambient: self.ambient,
            dim: if self.root_datum.is_none() { Some(self.dim) } else { None },
            facets: self.facets.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledPolyhedron {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyJson::deserialize(d)?;
        let dim = match (&j.root_datum, j.dim, j.facets.first()) {
            (Some(rd), _, _) => rd.rank,
            (None, Some(n), _) => n,
            (None, None, Some(f)) => f.beta.len(),
            (None, None, None) => return Err(D::Error::custom("cannot infer dimension")),
        };
        LabeledPolyhedron::new(j.root_datum, j.ambient, dim, j.facets).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmptyJson {
    empty: bool,
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Region::Empty => EmptyJson { empty: true }.serialize(s),
            Region::Polyhedron(p) => p.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        if v.get("empty").is_some() {
            let e: EmptyJson = serde_json::from_value(v).map_err(D::Error::custom)?;
            if !e.empty {
                return Err(D::Error::custom("`empty` must be true"));
            }
            return Ok(Region::Empty);
        }
        serde_json::from_value(v).map(Region::Polyhedron).map_err(D::Error::custom)
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::rootsys::{build_root_datum, CartanType};

    pub fn rd(s: &str) -> RootDatum {
        let t: CartanType = s.parse().unwrap();
        build_root_datum(&t, t.rank()).unwrap()
    }

    pub fn chamber(rd: &RootDatum, f: &[(&[i64], i64)]) -> LabeledPolyhedron {
        let facets: Vec<(Vec<i64>, Rat)> = f.iter().map(|(b, x)| (b.to_vec(), rat(*x))).collect();
        LabeledPolyhedron::chamber(rd, &facets).unwrap()
    }

    pub fn full(dim: usize, f: &[(&[i64], i64)]) -> LabeledPolyhedron {
        let facets: Vec<(Vec<i64>, Rat)> = f.iter().map(|(b, x)| (b.to_vec(), rat(*x))).collect();
        LabeledPolyhedron::full(None, dim, &facets).unwrap()
    }
}
