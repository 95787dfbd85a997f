//! Root data, Weyl groups and Weyl-chamber faces for the supported compact groups.
//!
//! Coordinates:
//! * weights (elements of `t*`) are written in the fundamental-weight basis, so
//!   `x_i = <x, alpha_i^vee>` and dominance is a sign check;
//! * coweights (elements of `t`, e.g. facet normals) are written in the simple
//!   coroot basis, so the natural pairing `<beta, x>` is the plain dot product.
//!
//! The invariant form on `t*` is normalised so that long roots have squared length 2.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::qlinalg::{self, QMat};
use crate::rational::{primitive_rat, rat, serde_rat_mat, Rat};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    A1,
    A2,
    A3,
    B2,
    C2,
    G2,
}

impl SimpleType {
    pub fn rank(self) -> usize {
        match self {
            SimpleType::A1 => 1,
            SimpleType::A2 | SimpleType::B2 | SimpleType::C2 | SimpleType::G2 => 2,
            SimpleType::A3 => 3,
        }
    }

    /// Entries `<alpha_i, alpha_j^vee>`.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        match self {
            SimpleType::A1 => vec![vec![2]],
            SimpleType::A2 => vec![vec![2, -1], vec![-1, 2]],
            SimpleType::A3 => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            // alpha_1 long, alpha_2 short
            SimpleType::B2 => vec![vec![2, -2], vec![-1, 2]],
            // alpha_1 short, alpha_2 long
            SimpleType::C2 => vec![vec![2, -1], vec![-2, 2]],
            // alpha_1 short, alpha_2 long
            SimpleType::G2 => vec![vec![2, -1], vec![-3, 2]],
        }
    }

    fn name(self) -> &'static str {
        match self {
            SimpleType::A1 => "A1",
            SimpleType::A2 => "A2",
            SimpleType::A3 => "A3",
            SimpleType::B2 => "B2",
            SimpleType::C2 => "C2",
            SimpleType::G2 => "G2",
        }
    }
}

/// A product of simple types, written `A1`, `A2xA1`, ...
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanType(pub Vec<SimpleType>);

impl CartanType {
    pub fn rank(&self) -> usize {
        self.0.iter().map(|t| t.rank()).sum()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|t| t.name()).collect();
        f.write_str(&names.join("x"))
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Result<Vec<SimpleType>, Error> = s
            .split(['x', 'X', '×', '*'])
            .map(|p| match p.trim() {
                "A1" => Ok(SimpleType::A1),
                "A2" => Ok(SimpleType::A2),
                "A3" => Ok(SimpleType::A3),
                "B2" => Ok(SimpleType::B2),
                "C2" => Ok(SimpleType::C2),
                "G2" => Ok(SimpleType::G2),
                other => Err(Error::UnsupportedCartanType(other.to_string())),
            })
            .collect();
        let parts = parts?;
        if parts.is_empty() {
            return Err(Error::UnsupportedCartanType(s.to_string()));
        }
        Ok(CartanType(parts))
    }
}

/// A Weyl group element as a word `[i1, ..., ik]` meaning `s_{i1} ... s_{ik}`.
pub type WeylWord = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChamberMode {
    Closed,
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// Simple roots in the fundamental-weight basis (rows of the Cartan matrix).
    pub simple_roots: Vec<Vec<Rat>>,
    pub fundamental_weights: Vec<Vec<Rat>>,
    /// Simple coroots in the simple coroot basis.
    pub coroots: Vec<Vec<Rat>>,
    /// Gram matrix of the invariant form in the fundamental-weight basis.
    pub pairing: QMat,
    /// `(alpha_i, alpha_i) / 2`.
    pub half_root_lengths: Vec<Rat>,
    pub longest_element_word: WeylWord,
    order: usize,
}

fn block_diagonal(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut m = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[off + i][off + j] = v;
            }
        }
        off += b.len();
    }
    m
}

/// Symmetrizing factors `d_i` with `C_ij d_j = C_ji d_i`, largest equal to 1 per component.
fn symmetrizer(c: &[Vec<i64>]) -> Vec<Rat> {
    let n = c.len();
    let mut d: Vec<Option<Rat>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        let mut comp = vec![start];
        d[start] = Some(Rat::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if j != i && c[i][j] != 0 && d[j].is_none() {
                    let di = d[i].clone().unwrap();
                    d[j] = Some(di * rat(c[j][i]) / rat(c[i][j]));
                    comp.push(j);
                    queue.push_back(j);
                }
            }
        }
        let max = comp.iter().map(|&i| d[i].clone().unwrap()).max().unwrap();
        for &i in &comp {
            d[i] = Some(d[i].clone().unwrap() / &max);
        }
    }
    d.into_iter().map(Option::unwrap).collect()
}

pub fn build_root_datum(cartan_type: &CartanType, rank: usize) -> Result<RootDatum, Error> {
    if cartan_type.rank() != rank {
        return Err(Error::UnsupportedCartanType(format!(
            "{cartan_type} has rank {}, not {rank}",
            cartan_type.rank()
        )));
    }
    let blocks: Vec<_> = cartan_type.0.iter().map(|t| t.cartan_matrix()).collect();
    RootDatum::from_cartan(cartan_type.clone(), block_diagonal(&blocks))
}

impl RootDatum {
    /// Builds all derived data from a (symmetrizable, finite-type) Cartan matrix.
    pub fn from_cartan(cartan_type: CartanType, cartan: Vec<Vec<i64>>) -> Result<Self, Error> {
        let rank = cartan.len();
        let cq: QMat = cartan.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        let cinv = qlinalg::inverse(&cq)
            .ok_or_else(|| Error::UnsupportedCartanType("singular Cartan matrix".into()))?;
        let d = symmetrizer(&cartan);
        let pairing: QMat = (0..rank)
            .map(|i| (0..rank).map(|j| &cinv[i][j] * &d[j]).collect())
            .collect();
        let unit = |i: usize| -> Vec<Rat> {
            (0..rank).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()
        };
        let mut rd = RootDatum {
            cartan_type,
            rank,
            simple_roots: cq.clone(),
            fundamental_weights: (0..rank).map(unit).collect(),
            coroots: (0..rank).map(unit).collect(),
            cartan,
            pairing,
            half_root_lengths: d,
            longest_element_word: Vec::new(),
            order: 0,
        };
        let rho = vec![Rat::one(); rank];
        let neg_rho: Vec<Rat> = rho.iter().map(|x| -x).collect();
        rd.longest_element_word = rd.dominant_representative(&neg_rho).1;
        rd.order = rd.weyl_orbit(&rho).len();
        Ok(rd)
    }

    pub fn weyl_order(&self) -> usize {
        self.order
    }

    pub fn pair(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let gv = qlinalg::mat_vec(&self.pairing, v);
        crate::rational::dot(u, &gv)
    }

    /// `s_i(x) = x - <x, alpha_i^vee> alpha_i` on weights.
    pub fn reflect_weight(&self, x: &[Rat], i: usize) -> Vec<Rat> {
        let xi = x[i].clone();
        if xi.is_zero() {
            return x.to_vec();
        }
        x.iter()
            .enumerate()
            .map(|(k, xk)| xk - &xi * rat(self.cartan[i][k]))
            .collect()
    }

    /// `s_i(b) = b - <alpha_i, b> alpha_i^vee` on coweights.
    pub fn reflect_coweight(&self, b: &[Rat], i: usize) -> Vec<Rat> {
        let ai = self.root_on_coweight(i, b);
        let mut out = b.to_vec();
        out[i] -= ai;
        out
    }

    /// `<alpha_i, b>` for a coweight `b` in coroot coordinates.
    pub fn root_on_coweight(&self, i: usize, b: &[Rat]) -> Rat {
        b.iter()
            .enumerate()
            .fold(Rat::zero(), |acc, (k, bk)| acc + bk * rat(self.cartan[i][k]))
    }

    pub fn root_on_int_coweight(&self, i: usize, b: &[i64]) -> i64 {
        b.iter().enumerate().map(|(k, &bk)| bk * self.cartan[i][k]).sum()
    }

    pub fn apply_word_weight(&self, word: &[usize], x: &[Rat]) -> Vec<Rat> {
        word.iter().rev().fold(x.to_vec(), |acc, &i| self.reflect_weight(&acc, i))
    }

    pub fn apply_word_coweight(&self, word: &[usize], b: &[Rat]) -> Vec<Rat> {
        word.iter().rev().fold(b.to_vec(), |acc, &i| self.reflect_coweight(&acc, i))
    }

    /// The Weyl orbit of a weight, computed by closure under simple reflections, sorted.
    pub fn weyl_orbit(&self, x: &[Rat]) -> Vec<Vec<Rat>> {
        closure(x.to_vec(), |v, i| self.reflect_weight(v, i), self.rank)
    }

    pub fn weyl_orbit_coweight(&self, b: &[Rat]) -> Vec<Vec<Rat>> {
        closure(b.to_vec(), |v, i| self.reflect_coweight(v, i), self.rank)
    }

    /// `(x_plus, w)` with `x_plus` dominant and `w . x = x_plus`.
    ///
    /// Reflecting at the lowest index with a negative coordinate both terminates
    /// and produces the lexicographically minimal reduced word.
    pub fn dominant_representative(&self, x: &[Rat]) -> (Vec<Rat>, WeylWord) {
        let mut cur = x.to_vec();
        let mut applied = Vec::new();
        while let Some(i) = cur.iter().position(|v| v.is_negative()) {
            cur = self.reflect_weight(&cur, i);
            applied.push(i);
        }
        applied.reverse();
        (cur, applied)
    }

    /// Every Weyl group element as its canonical word, sorted by length then lexicographically.
    pub fn weyl_elements(&self) -> Vec<WeylWord> {
        let rho = vec![Rat::one(); self.rank];
        let mut words: Vec<WeylWord> = self
            .weyl_orbit(&rho)
            .iter()
            .map(|y| {
                // w rho = y  <=>  w^{-1} = dominant_representative(y).1
                let mut w = self.dominant_representative(y).1;
                w.reverse();
                w
            })
            .collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        words
    }

    /// `tau(x) = -w0(x)`.
    pub fn tau(&self, x: &[Rat]) -> Vec<Rat> {
        self.apply_word_weight(&self.longest_element_word, x)
            .into_iter()
            .map(|v| -v)
            .collect()
    }

    pub fn in_chamber(&self, x: &[Rat], mode: ChamberMode) -> bool {
        match mode {
            ChamberMode::Closed => x.iter().all(|v| !v.is_negative()),
            ChamberMode::Open => x.iter().all(|v| v.is_positive()),
        }
    }

    pub fn is_dominant_coweight(&self, b: &[Rat]) -> bool {
        (0..self.rank).all(|i| !self.root_on_coweight(i, b).is_negative())
    }

    /// All `2^rank` faces, ordered by codimension then by vanishing set.
    pub fn chamber_faces(&self) -> Vec<ChamberFace> {
        let mut faces: Vec<ChamberFace> = (0u32..(1 << self.rank))
            .map(|mask| ChamberFace {
                rank: self.rank,
                vanishing: (0..self.rank).filter(|i| mask & (1 << i) != 0).collect(),
            })
            .collect();
        faces.sort_by(|a, b| {
            a.vanishing.len().cmp(&b.vanishing.len()).then(a.vanishing.cmp(&b.vanishing))
        });
        faces
    }

    /// Orthogonal complement (for the invariant form) of the span of a chamber face.
    pub fn perp_subspace(&self, face: &ChamberFace) -> Vec<Vec<Rat>> {
        let rows: QMat = (0..self.rank)
            .filter(|j| !face.vanishing.contains(j))
            .map(|j| self.pairing[j].clone())
            .collect();
        if rows.is_empty() {
            return (0..self.rank)
                .map(|i| (0..self.rank).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
                .collect();
        }
        qlinalg::nullspace(&rows, self.rank)
            .iter()
            .map(|v| {
                let v = primitive_rat(v);
                match v.iter().find(|x| !x.is_zero()) {
                    Some(x) if x.is_negative() => v.iter().map(|y| -y).collect(),
                    _ => v,
                }
            })
            .collect()
    }

    /// Coordinates of a weight in the simple-root basis, if it lies in their span.
    pub fn root_coordinates(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        qlinalg::solve(&qlinalg::transpose(&self.simple_roots), x)
    }

    pub fn cartan_rat(&self) -> QMat {
        self.simple_roots.clone()
    }
}

fn closure<F>(start: Vec<Rat>, step: F, rank: usize) -> Vec<Vec<Rat>>
where
    F: Fn(&[Rat], usize) -> Vec<Rat>,
{
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for i in 0..rank {
            let w = step(&v, i);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberFace {
    pub rank: usize,
    /// Simple-coroot indices `i` with `<x, alpha_i^vee> = 0` on the face.
    pub vanishing: Vec<usize>,
}

impl ChamberFace {
    pub fn contains(&self, x: &[Rat]) -> bool {
        x.iter().all(|v| !v.is_negative()) && self.vanishing.iter().all(|&i| x[i].is_zero())
    }

    /// `self` is a face of `other` (closures), i.e. vanishing sets in reverse inclusion.
    pub fn is_face_of(&self, other: &ChamberFace) -> bool {
        other.vanishing.iter().all(|i| self.vanishing.contains(i))
    }

    pub fn dim(&self) -> usize {
        self.rank - self.vanishing.len()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RootDatumJson {
    #[serde(rename = "type")]
    cartan_type: String,
    rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cartan_matrix: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rat_mat")]
    pairing: Option<QMat>,
}

/// Derived fields are optional on input and checked when present.
mod opt_rat_mat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Option<QMat>, s: S) -> Result<S::Ok, S::Error> {
        match m {
            Some(m) => serde_rat_mat::serialize(m, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<QMat>, D::Error> {
        serde_rat_mat::deserialize(d).map(Some)
    }
}

impl Serialize for RootDatum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RootDatumJson {
            cartan_type: self.cartan_type.to_string(),
            rank: self.rank,
            cartan_matrix: Some(self.cartan.clone()),
            pairing: Some(self.pairing.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootDatum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RootDatumJson::deserialize(d)?;
        let ty: CartanType = j.cartan_type.parse().map_err(D::Error::custom)?;
        let rd = build_root_datum(&ty, j.rank).map_err(D::Error::custom)?;
        if j.cartan_matrix.as_ref().is_some_and(|c| *c != rd.cartan) {
            return Err(D::Error::custom(format!("cartan_matrix does not match type {ty}")));
        }
        if j.pairing.as_ref().is_some_and(|p| *p != rd.pairing) {
            return Err(D::Error::custom(format!("pairing does not match type {ty}")));
        }
        Ok(rd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, rvec};

    fn rd(s: &str) -> RootDatum {
        let t: CartanType = s.parse().unwrap();
        build_root_datum(&t, t.rank()).unwrap()
    }

    #[test]
    fn a1_basics() {
        let a1 = rd("A1");
        assert_eq!(a1.cartan, vec![vec![2]]);
        assert_eq!(a1.weyl_orbit(&rvec(&[0])), vec![rvec(&[0])]);
        assert_eq!(a1.weyl_orbit(&rvec(&[1])), vec![rvec(&[-1]), rvec(&[1])]);
        assert_eq!(a1.dominant_representative(&rvec(&[-1])), (rvec(&[1]), vec![0]));
        assert_eq!(a1.tau(&rvec(&[3])), rvec(&[3]));
        assert!(a1.in_chamber(&rvec(&[0]), ChamberMode::Closed));
        assert!(!a1.in_chamber(&rvec(&[0]), ChamberMode::Open));
        assert_eq!(a1.chamber_faces().len(), 2);
    }

    #[test]
    fn a2_tau_swaps_fundamental_weights() {
        let a2 = rd("A2");
        assert_eq!(a2.tau(&rvec(&[1, 0])), rvec(&[0, 1]));
        assert_eq!(a2.tau(&rvec(&[0, 0])), rvec(&[0, 0]));
        assert_eq!(a2.weyl_orbit(&rvec(&[1, 1])).len(), 6);
        assert_eq!(a2.dominant_representative(&rvec(&[2, 5])), (rvec(&[2, 5]), vec![]));
        assert!(a2.in_chamber(&rvec(&[1, 1]), ChamberMode::Open));
    }

    #[test]
    fn pairing_normalisation() {
        let a2 = rd("A2");
        // (w1, w1) = 2/3 for A2 with (alpha, alpha) = 2.
        assert_eq!(a2.pairing[0][0], ratio(2, 3));
        let b2 = rd("B2");
        assert_eq!(b2.pair(&b2.simple_roots[0], &b2.simple_roots[0]), rat(2));
        assert_eq!(b2.pair(&b2.simple_roots[1], &b2.simple_roots[1]), rat(1));
        let g2 = rd("G2");
        assert_eq!(g2.pair(&g2.simple_roots[1], &g2.simple_roots[1]), rat(2));
        assert_eq!(g2.pair(&g2.simple_roots[0], &g2.simple_roots[0]), ratio(2, 3));
    }

    #[test]
    fn perp_of_a2_wall_is_root_line() {
        let a2 = rd("A2");
        let faces = a2.chamber_faces();
        assert!(a2.perp_subspace(&faces[0]).is_empty());
        assert_eq!(a2.perp_subspace(&faces[3]).len(), 2);
        let wall = ChamberFace { rank: 2, vanishing: vec![0] };
        let perp = a2.perp_subspace(&wall);
        assert_eq!(perp, vec![rvec(&[2, -1])]);
    }

    #[test]
    fn unsupported_types_are_rejected() {
        assert!(matches!("E8".parse::<CartanType>(), Err(Error::UnsupportedCartanType(_))));
        let t: CartanType = "A2".parse().unwrap();
        assert!(build_root_datum(&t, 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = rd("B2xA1");
        let s = serde_json::to_string(&a).unwrap();
        let back: RootDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
