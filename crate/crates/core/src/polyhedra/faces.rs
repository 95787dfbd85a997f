use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Signed, Zero};

use super::{Ambient, LabeledPolyhedron};
use crate::lp::{LinearProgram, LpOutcome};
use crate::qlinalg::{self, QMat};
use crate::rational::Rat;

/// A nonempty face `P_I`: the points of `P` where exactly the facets in `active` are tight.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    /// Maximal set of facet indices tight on the whole face.
    pub active: Vec<usize>,
    /// Dimension of `{x : <beta_i, x> = xi_i, i in active}`.
    pub dim: usize,
    /// Basis of the linear part of that affine subspace (the tangent space of `P_I`).
    pub tangent_basis: Vec<Vec<Rat>>,
    /// A point of the face slack on every facet outside `active`.
    pub interior_point: Vec<Rat>,
}

impl Face {
    /// The unique point of a zero-dimensional face.
    pub fn point(&self) -> Option<&[Rat]> {
        (self.dim == 0).then_some(self.interior_point.as_slice())
    }
}

/// Constraints of `P` with the facets in `tight` turned into equalities.
pub(crate) fn face_lp(p: &LabeledPolyhedron, tight: &[usize]) -> LinearProgram {
    let mut lp = p.chamber_lp();
    for (i, f) in p.facets.iter().enumerate() {
        if tight.contains(&i) {
            lp.add_eq(f.beta_rat(), f.xi.clone());
        } else {
            lp.add_le(f.beta_rat(), f.xi.clone());
        }
    }
    lp
}

/// The equality set of `F_I` and a relative-interior point, or `None` if `F_I` is empty.
fn closure(p: &LabeledPolyhedron, tight: &[usize]) -> Option<(Vec<usize>, Vec<Rat>)> {
    let n = p.dim;
    // maximise t subject to tight rows, slack rows with margin t, and t <= 1
    let mut lp = LinearProgram::new(n + 1);
    if p.ambient == Ambient::Chamber {
        for j in 0..n {
            let mut a = vec![Rat::zero(); n + 1];
            a[j] = -Rat::one();
            lp.add_le(a, Rat::zero());
        }
    }
    for (i, f) in p.facets.iter().enumerate() {
        let mut a = f.beta_rat();
        if tight.contains(&i) {
            a.push(Rat::zero());
            lp.add_eq(a, f.xi.clone());
        } else {
            a.push(Rat::one());
            lp.add_le(a, f.xi.clone());
        }
    }
    let mut t = vec![Rat::zero(); n + 1];
    t[n] = Rat::one();
    lp.add_le(t.clone(), Rat::one());
    let (value, point) = match lp.maximize(&t) {
        LpOutcome::Optimal { value, point } => (value, point),
        LpOutcome::Infeasible => return None,
        LpOutcome::Unbounded => unreachable!("t is bounded above"),
    };
    if value.is_negative() {
        // the tight hyperplanes meet, but not inside P
        return None;
    }
    if value.is_positive() {
        let mut set = tight.to_vec();
        set.sort_unstable();
        return Some((set, point[..n].to_vec()));
    }
    // Some facet is implied tight; find all of them.
    let base = face_lp(p, tight);
    let mut set: Vec<usize> = tight.to_vec();
    for (j, f) in p.facets.iter().enumerate() {
        if tight.contains(&j) {
            continue;
        }
        let neg: Vec<Rat> = f.beta_rat().into_iter().map(|v| -v).collect();
        if let LpOutcome::Optimal { value, .. } = base.maximize(&neg) {
            if value == -f.xi.clone() {
                set.push(j);
            }
        }
    }
    set.sort_unstable();
    let (set2, point) = closure(p, &set)?;
    debug_assert_eq!(set, set2);
    Some((set2, point))
}

pub(crate) fn tangent_basis(p: &LabeledPolyhedron, active: &[usize]) -> Vec<Vec<Rat>> {
    let rows: QMat = active.iter().map(|&i| p.facets[i].beta_rat()).collect();
    if rows.is_empty() {
        return (0..p.dim).map(|j| super::unit(p.dim, j)).collect();
    }
    qlinalg::nullspace(&rows, p.dim)
}

/// All nonempty faces, ordered by number of active facets then lexicographically.
pub(crate) fn faces(p: &LabeledPolyhedron) -> Vec<Face> {
    let Some(root) = closure(p, &[]) else {
        return Vec::new();
    };
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut points = std::collections::BTreeMap::new();
    let mut queue = VecDeque::new();
    found.insert(root.0.clone());
    points.insert(root.0.clone(), root.1);
    queue.push_back(root.0);
    while let Some(set) = queue.pop_front() {
        for j in 0..p.facets.len() {
            if set.contains(&j) {
                continue;
            }
            let mut cand = set.clone();
            cand.push(j);
            if let Some((closed, point)) = closure(p, &cand) {
                if found.insert(closed.clone()) {
                    points.insert(closed.clone(), point);
                    queue.push_back(closed);
                }
            }
        }
    }
    let mut out: Vec<Face> = found
        .into_iter()
        .map(|active| {
            let tangent = tangent_basis(p, &active);
            Face {
                dim: tangent.len(),
                tangent_basis: tangent,
                interior_point: points.remove(&active).unwrap(),
                active,
            }
        })
        .collect();
    out.sort_by(|a, b| a.active.len().cmp(&b.active.len()).then(a.active.cmp(&b.active)));
    out
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use crate::rational::rvec;

    #[test]
    fn interval_has_two_faces() {
        let a1 = rd("A1");
        let p = chamber(&a1, &[(&[1], 3)]);
        let f = p.faces();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].active, Vec::<usize>::new());
        assert_eq!(f[1].active, vec![0]);
        assert_eq!(f[1].point(), Some(rvec(&[3]).as_slice()));
    }

    #[test]
    fn square_has_nine_faces() {
        let sq = full(2, &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)]);
        let f = sq.faces();
        assert_eq!(f.len(), 9);
        assert_eq!(f.iter().filter(|x| x.dim == 0).count(), 4);
    }

    #[test]
    fn half_space_has_two_faces() {
        assert_eq!(full(2, &[(&[1, 1], 0)]).faces().len(), 2);
    }

    #[test]
    fn concurrent_lines_share_a_vertex() {
        let p = full(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 0)]);
        let f = p.faces();
        let vertex = f.iter().find(|x| x.active.len() == 3).unwrap();
        assert_eq!(vertex.active, vec![0, 1, 2]);
        // the redundant facet only touches at the vertex, so it is not a face by itself
        assert!(!f.iter().any(|x| x.active == vec![2]));
    }
}
