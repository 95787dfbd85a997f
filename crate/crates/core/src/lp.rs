//! Exact rational linear programming (two-phase tableau simplex, Bland's rule).
//!
//! Every feasibility, containment and redundancy question in the polyhedral
//! modules reduces to a call to [`LinearProgram::maximize`]. Bland's rule makes
//! the method terminate on degenerate problems, which are the norm here
//! (vertices sitting on chamber walls, concurrent facets).

use num_traits::{One, Signed, Zero};

use crate::rational::{dot, Rat};

/// `a . x <= b` rows and `a . x = b` rows over free variables `x in Q^dim`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub dim: usize,
    pub le: Vec<(Vec<Rat>, Rat)>,
    pub eq: Vec<(Vec<Rat>, Rat)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    pub fn new(dim: usize) -> Self {
        LinearProgram { dim, le: Vec::new(), eq: Vec::new() }
    }

    pub fn add_le(&mut self, a: Vec<Rat>, b: Rat) -> &mut Self {
        debug_assert_eq!(a.len(), self.dim);
        self.le.push((a, b));
        self
    }

    pub fn add_ge(&mut self, a: Vec<Rat>, b: Rat) -> &mut Self {
        self.add_le(a.into_iter().map(|x| -x).collect(), -b)
    }

    pub fn add_eq(&mut self, a: Vec<Rat>, b: Rat) -> &mut Self {
        debug_assert_eq!(a.len(), self.dim);
        self.eq.push((a, b));
        self
    }

    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        match self.maximize(&vec![Rat::zero(); self.dim]) {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        self.le.iter().all(|(a, b)| dot(a, x) <= *b) && self.eq.iter().all(|(a, b)| dot(a, x) == *b)
    }

    pub fn maximize(&self, c: &[Rat]) -> LpOutcome {
        Tableau::build(self).solve(self, c)
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
    first_artificial: usize,
}

impl Tableau {
    // Columns: u (dim), v (dim) with x = u - v, one slack per `le` row, then artificials.
    fn build(lp: &LinearProgram) -> Self {
        let d = lp.dim;
        let m1 = lp.le.len();
        let m = m1 + lp.eq.len();
        let first_artificial = 2 * d + m1;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut n_art = 0;
        let mut needs_art = Vec::with_capacity(m);
        for (i, (a, b)) in lp.le.iter().chain(lp.eq.iter()).enumerate() {
            let mut row = vec![Rat::zero(); first_artificial];
            for k in 0..d {
                row[k] = a[k].clone();
                row[d + k] = -a[k].clone();
            }
            let is_le = i < m1;
            if is_le {
                row[2 * d + i] = Rat::one();
            }
            let mut b = b.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            let slack_basic = is_le && row[2 * d + i].is_positive();
            needs_art.push(!slack_basic);
            if slack_basic {
                basis.push(2 * d + i);
            } else {
                basis.push(first_artificial + n_art);
                n_art += 1;
            }
            rows.push(row);
            rhs.push(b);
        }
        let ncols = first_artificial + n_art;
        let mut art = 0;
        for (row, &na) in rows.iter_mut().zip(&needs_art) {
            row.resize(ncols, Rat::zero());
            if na {
                row[first_artificial + art] = Rat::one();
                art += 1;
            }
        }
        Tableau { rows, rhs, basis, ncols, first_artificial }
    }

    fn pivot(&mut self, obj: &mut [Rat], obj_val: &mut Rat, r: usize, c: usize) {
        let inv = Rat::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (j, pj) in prow.iter().enumerate() {
                if !pj.is_zero() {
                    let t = &f * pj;
                    self.rows[i][j] -= t;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (j, pj) in prow.iter().enumerate() {
                if !pj.is_zero() {
                    obj[j] -= &f * pj;
                }
            }
            *obj_val -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[Rat]) -> (Vec<Rat>, Rat) {
        let mut obj: Vec<Rat> = cost.iter().map(|c| -c.clone()).collect();
        let mut val = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (j, x) in self.rows[i].iter().enumerate() {
                if !x.is_zero() {
                    obj[j] += &cost[b] * x;
                }
            }
            val += &cost[b] * &self.rhs[i];
        }
        (obj, val)
    }

    /// Runs simplex iterations over columns `< allowed`; `false` means unbounded.
    fn iterate(&mut self, obj: &mut [Rat], val: &mut Rat, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(obj, val, r, c);
        }
    }

    fn solve(mut self, lp: &LinearProgram, c: &[Rat]) -> LpOutcome {
        let d = lp.dim;
        if self.ncols > self.first_artificial {
            let mut cost = vec![Rat::zero(); self.ncols];
            for x in cost[self.first_artificial..].iter_mut() {
                *x = -Rat::one();
            }
            let (mut obj, mut val) = self.reduced_costs(&cost);
            let ncols = self.ncols;
            self.iterate(&mut obj, &mut val, ncols);
            if val.is_negative() {
                return LpOutcome::Infeasible;
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => {
                            let mut dummy = vec![Rat::zero(); self.ncols];
                            let mut dv = Rat::zero();
                            self.pivot(&mut dummy, &mut dv, i, j);
                        }
                        None => {
                            self.rows.remove(i);
                            self.rhs.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![Rat::zero(); self.ncols];
        for k in 0..d {
            cost[k] = c[k].clone();
            cost[d + k] = -c[k].clone();
        }
        let (mut obj, mut val) = self.reduced_costs(&cost);
        let allowed = self.first_artificial;
        if !self.iterate(&mut obj, &mut val, allowed) {
            return LpOutcome::Unbounded;
        }
        let mut point = vec![Rat::zero(); d];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < d {
                point[b] += &self.rhs[i];
            } else if b < 2 * d {
                point[b - d] -= &self.rhs[i];
            }
        }
        LpOutcome::Optimal { value: val, point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio, rvec};

    #[test]
    fn bounded_optimum() {
        // max x + y s.t. x <= 2, y <= 3, x + 2y <= 7
        let mut lp = LinearProgram::new(2);
        lp.add_le(rvec(&[1, 0]), rat(2))
            .add_le(rvec(&[0, 1]), rat(3))
            .add_le(rvec(&[1, 2]), rat(7));
        match lp.maximize(&rvec(&[1, 1])) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, ratio(9, 2));
                assert_eq!(point, vec![rat(2), ratio(5, 2)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // x >= -5 (i.e. -x <= 5), minimise x.
        let mut lp = LinearProgram::new(1);
        lp.add_ge(rvec(&[1]), rat(-5));
        assert_eq!(
            lp.maximize(&rvec(&[-1])),
            LpOutcome::Optimal { value: rat(5), point: rvec(&[-5]) }
        );
        assert_eq!(lp.maximize(&rvec(&[1])), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_and_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.add_eq(rvec(&[1, 1]), rat(1)).add_le(rvec(&[1, 1]), rat(0));
        assert_eq!(lp.maximize(&rvec(&[0, 0])), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.add_eq(rvec(&[1, 1]), rat(1))
            .add_eq(rvec(&[2, 2]), rat(2))
            .add_ge(rvec(&[1, 0]), rat(0))
            .add_ge(rvec(&[0, 1]), rat(0));
        match lp.maximize(&rvec(&[1, 0])) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Three concurrent constraints through the origin.
        let mut lp = LinearProgram::new(2);
        lp.add_le(rvec(&[1, 0]), rat(0))
            .add_le(rvec(&[0, 1]), rat(0))
            .add_le(rvec(&[1, 1]), rat(0));
        match lp.maximize(&rvec(&[1, 1])) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(0)),
            o => panic!("{o:?}"),
        }
    }
}
