use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Ambient, Facet, LabeledPolyhedron, Region};
use crate::lp::LpOutcome;
use crate::rational::{primitive_integer, Rat};
use crate::{Error, Result};

/// Rational system `A x <= b`, `E x = f` in `dim` variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InequalitySystem {
    pub dim: usize,
    pub le: Vec<(Vec<Rat>, Rat)>,
    pub eq: Vec<(Vec<Rat>, Rat)>,
}

impl InequalitySystem {
    pub fn new(dim: usize) -> Self {
        InequalitySystem { dim, ..Default::default() }
    }

    pub fn add_le(&mut self, a: Vec<Rat>, b: Rat) -> &mut Self {
        assert_eq!(a.len(), self.dim);
        self.le.push((a, b));
        self
    }

    pub fn add_ge(&mut self, a: Vec<Rat>, b: Rat) -> &mut Self {
        self.add_le(a.into_iter().map(|v| -v).collect(), -b)
    }

    pub fn add_eq(&mut self, a: Vec<Rat>, b: Rat) -> &mut Self {
        assert_eq!(a.len(), self.dim);
        self.eq.push((a, b));
        self
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        let v = |a: &[Rat]| crate::rational::dot(a, x);
        self.le.iter().all(|(a, b)| v(a) <= *b) && self.eq.iter().all(|(a, b)| v(a) == *b)
    }
}

/// Drops facets implied by the others; duplicated half-spaces merge into the
/// lowest-index copy with label the gcd of the merged labels.
pub(crate) fn remove_redundant(p: &LabeledPolyhedron) -> LabeledPolyhedron {
    let mut kept: Vec<Facet> = Vec::new();
    for f in &p.facets {
        if let Some(k) = kept.iter_mut().find(|k| k.same_halfspace(f)) {
            let g = k.label.gcd(&f.label);
            if g != k.label {
                let level = &k.xi / BigInt::from(k.label);
                k.beta = k.primitive().iter().map(|b| b * g as i64).collect();
                k.xi = level * BigInt::from(g);
                k.label = g;
            }
        } else {
            kept.push(f.clone());
        }
    }
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        let mut lp = p.chamber_lp();
        for (j, f) in kept.iter().enumerate() {
            if j != i {
                lp.add_le(f.beta_rat(), f.xi.clone());
            }
        }
        let implied = match lp.maximize(&kept[i].beta_rat()) {
            LpOutcome::Optimal { value, .. } => value <= kept[i].xi,
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
        };
        if implied {
            kept.remove(i);
        }
    }
    LabeledPolyhedron::unchecked(p.root_datum.clone(), p.ambient, p.dim, kept)
}

/// `P ∩ Q` with redundant facets removed; surviving facets keep their labels.
pub fn intersect(p: &LabeledPolyhedron, q: &LabeledPolyhedron) -> Result<Region> {
    if p.root_datum != q.root_datum || p.ambient != q.ambient || p.dim != q.dim {
        return Err(Error::IncompatibleRootData);
    }
    let mut facets = p.facets.clone();
    facets.extend(q.facets.iter().cloned());
    let joint = LabeledPolyhedron::unchecked(p.root_datum.clone(), p.ambient, p.dim, facets);
    if !joint.lp().is_feasible() {
        return Ok(Region::Empty);
    }
    Ok(Region::Polyhedron(remove_redundant(&joint)))
}

/// Projects the system onto the variables not listed in `eliminate`.
///
/// Equalities are used for substitution first; the remaining variables are removed
/// by pairwise combination, pruning redundant rows after each step. The result is a
/// full-space polyhedron in the surviving variables (in their original order) with
/// primitive integral normals.
pub fn fourier_motzkin_eliminate(sys: &InequalitySystem, eliminate: &[usize]) -> Result<Region> {
    let n = sys.dim;
    if let Some(&v) = eliminate.iter().find(|&&v| v >= n) {
        return Err(Error::DimensionMismatch(format!("variable {v} out of range for dimension {n}")));
    }
    let mut le = sys.le.clone();
    let mut eq = sys.eq.clone();
    let mut todo: Vec<usize> = eliminate.to_vec();
    todo.sort_unstable();
    todo.dedup();

    let mut remaining = Vec::new();
    for &v in &todo {
        match eq.iter().position(|(a, _)| !a[v].is_zero()) {
            Some(k) => {
                let (a, b) = eq.remove(k);
                let sub = |(c, d): &mut (Vec<Rat>, Rat)| {
                    if c[v].is_zero() {
                        return;
                    }
                    let t = &c[v] / &a[v];
                    for (ci, ai) in c.iter_mut().zip(&a) {
                        *ci -= &t * ai;
                    }
                    *d -= &t * &b;
                };
                le.iter_mut().for_each(sub);
                eq.iter_mut().for_each(sub);
            }
            None => remaining.push(v),
        }
    }
    for (a, b) in eq.drain(..) {
        le.push((a.iter().map(|v| -v).collect(), -b.clone()));
        le.push((a, b));
    }
    if !prune_trivial(&mut le) {
        return Ok(Region::Empty);
    }
    for &v in &remaining {
        let (pos, rest): (Vec<_>, Vec<_>) = le.into_iter().partition(|(a, _)| a[v].is_positive());
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(a, _)| a[v].is_negative());
        le = zero;
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                let sp = -&an[v];
                let sn = ap[v].clone();
                let a: Vec<Rat> = ap.iter().zip(an).map(|(x, y)| x * &sp + y * &sn).collect();
                le.push((a, bp * &sp + bn * &sn));
            }
        }
        if !prune_trivial(&mut le) {
            return Ok(Region::Empty);
        }
        le = prune_redundant(n, le);
    }

    let keep: Vec<usize> = (0..n).filter(|j| !todo.contains(j)).collect();
    let mut facets = Vec::new();
    for (a, b) in &le {
        let proj: Vec<Rat> = keep.iter().map(|&j| a[j].clone()).collect();
        let prim = primitive_integer(&proj);
        let (p0, x0) = prim.iter().zip(&proj).find(|(_, x)| !x.is_zero()).unwrap();
        let scale = Rat::from_integer(p0.clone()) / x0;
        let beta: Vec<i64> = prim
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Invalid("coefficient overflow".into())))
            .collect::<Result<_>>()?;
        facets.push(Facet::new(beta, b * scale));
    }
    let p = LabeledPolyhedron::unchecked(None, Ambient::Full, keep.len(), facets);
    if !p.lp().is_feasible() {
        return Ok(Region::Empty);
    }
    Ok(Region::Polyhedron(remove_redundant(&p)))
}

/// Drops `0 <= c` rows with `c >= 0`; `false` if some `0 <= c` has `c < 0`.
fn prune_trivial(rows: &mut Vec<(Vec<Rat>, Rat)>) -> bool {
    let mut ok = true;
    rows.retain(|(a, b)| {
        if a.iter().all(Zero::is_zero) {
            ok &= !b.is_negative();
            false
        } else {
            true
        }
    });
    ok
}

fn prune_redundant(dim: usize, rows: Vec<(Vec<Rat>, Rat)>) -> Vec<(Vec<Rat>, Rat)> {
    let mut kept = rows;
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        let mut lp = crate::lp::LinearProgram::new(dim);
        for (j, (a, b)) in kept.iter().enumerate() {
            if j != i {
                lp.add_le(a.clone(), b.clone());
            }
        }
        if let LpOutcome::Optimal { value, .. } = lp.maximize(&kept[i].0) {
            if value <= kept[i].1 {
                kept.remove(i);
            }
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::rational::{rat, ratio, rvec};
    use rand::{Rng, SeedableRng};

    #[test]
    fn eliminate_single_slack() {
        let mut s = InequalitySystem::new(2);
        s.add_ge(rvec(&[1, 0]), rat(0)).add_le(rvec(&[1, 1]), rat(1));
        let r = fourier_motzkin_eliminate(&s, &[0]).unwrap();
        let p = r.polyhedron().unwrap();
        assert_eq!(p.facets, vec![Facet::new(vec![1], rat(1))]);
    }

    #[test]
    fn substitution_recovers_halfspaces() {
        // s_j >= 0, s_j + <beta_j, h> = xi_j
        let betas = [[1i64, 0], [0, 1], [-1, -1]];
        let mut s = InequalitySystem::new(5);
        for (j, b) in betas.iter().enumerate() {
            let mut a = vec![rat(0); 5];
            a[j] = rat(1);
            s.add_ge(a.clone(), rat(0));
            a[3] = rat(b[0]);
            a[4] = rat(b[1]);
            s.add_eq(a, rat(2));
        }
        let r = fourier_motzkin_eliminate(&s, &[0, 1, 2]).unwrap();
        let direct = full(2, &[(&[1, 0], 2), (&[0, 1], 2), (&[-1, -1], 2)]);
        assert!(r.polyhedron().unwrap().set_equal(&direct));
        assert_eq!(r.polyhedron().unwrap().facets.len(), 3);
    }

    #[test]
    fn infeasible_projection_is_empty() {
        let mut s = InequalitySystem::new(2);
        s.add_le(rvec(&[1, 1]), rat(0)).add_ge(rvec(&[1, 1]), rat(1));
        assert!(fourier_motzkin_eliminate(&s, &[0]).unwrap().is_empty());
    }

    /// `(x, y)` is in the projection iff the interval of admissible `r` is nonempty.
    fn interval_oracle(s: &InequalitySystem, xy: &[Rat]) -> bool {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (a, b) in &s.le {
            let rest = b - (&a[1] * &xy[0] + &a[2] * &xy[1]);
            if a[0].is_zero() {
                if rest.is_negative() {
                    return false;
                }
            } else if a[0].is_positive() {
                let v = rest / &a[0];
                hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
            } else {
                let v = rest / &a[0];
                lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) => l <= h,
            _ => true,
        }
    }

    #[test]
    fn random_projection_matches_interval_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut s = InequalitySystem::new(3);
            for _ in 0..6 {
                let a: Vec<Rat> = (0..3).map(|_| rat(rng.random_range(-3..=3))).collect();
                s.add_le(a, rat(rng.random_range(-2..=6)));
            }
            let region = fourier_motzkin_eliminate(&s, &[0]).unwrap();
            for _ in 0..50 {
                let xy = vec![
                    ratio(rng.random_range(-40..=40), 4),
                    ratio(rng.random_range(-40..=40), 4),
                ];
                let got = region.polyhedron().is_some_and(|p| p.contains_point(&xy));
                assert_eq!(got, interval_oracle(&s, &xy), "system {s:?} point {xy:?}");
            }
        }
    }

    #[test]
    fn intersection_basics() {
        let a2 = rd("A2");
        let p = chamber(&a2, &[(&[2, 1], 8), (&[0, 1], 2)]);
        let q = chamber(&a2, &[(&[1, 1], 5)]);
        let pp = intersect(&p, &p).unwrap().into_polyhedron().unwrap();
        assert_eq!(pp.facets, p.facets);
        let pq = intersect(&p, &q).unwrap().into_polyhedron().unwrap();
        let qp = intersect(&q, &p).unwrap().into_polyhedron().unwrap();
        assert!(pq.set_equal(&qp));
        assert!(p.contains(&pq) && q.contains(&pq));
    }

    #[test]
    fn disjoint_intervals_are_empty() {
        let a = full(1, &[(&[1], 1), (&[-1], 0)]);
        let b = full(1, &[(&[1], 3), (&[-1], -2)]);
        assert_eq!(intersect(&a, &b).unwrap(), Region::Empty);
    }

    #[test]
    fn duplicate_halfspaces_merge_by_gcd() {
        let a = full(1, &[(&[2], 4)]);
        let b = full(1, &[(&[3], 6)]);
        let r = intersect(&a, &b).unwrap().into_polyhedron().unwrap();
        assert_eq!(r.facets, vec![Facet::new(vec![1], rat(2))]);
        let c = full(1, &[(&[4], 8)]);
        let r = intersect(&a, &c).unwrap().into_polyhedron().unwrap();
        assert_eq!(r.facets, vec![Facet::new(vec![2], rat(4))]);
    }
}
