//! The strata `P_{eps,k}` of ordered spectra `lambda_1 >= ... >= lambda_n` by the
//! number `k` of trailing entries equal to `eps`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{dot, rat, serde_rat, serde_rat_vec, Rat};

/// `<coeffs, lambda>` compared with `rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearCondition {
    #[serde(with = "serde_rat_vec")]
    pub coeffs: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
}

impl LinearCondition {
    fn new(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        LinearCondition { coeffs, rhs }
    }

    fn value(&self, x: &[Rat]) -> Rat {
        dot(&self.coeffs, x) - &self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub k: usize,
    /// `= rhs`
    pub equalities: Vec<LinearCondition>,
    /// `> rhs`
    pub strict: Vec<LinearCondition>,
    /// `>= rhs`
    pub weak: Vec<LinearCondition>,
}

impl Stratum {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equalities.iter().all(|c| c.value(x).is_zero())
            && self.strict.iter().all(|c| c.value(x).is_positive())
            && self.weak.iter().all(|c| !c.value(x).is_negative())
    }

    /// Whether the conjunction of the given strata is nonempty.
    pub fn jointly_feasible(strata: &[&Stratum]) -> bool {
        let Some(n) = strata.first().map(|s| dim(s)) else {
            return true;
        };
        // maximise the common strict margin t, capped at 1
        let mut lp = LinearProgram::new(n + 1);
        let ext = |c: &LinearCondition, t: i64| {
            let mut a: Vec<Rat> = c.coeffs.iter().map(|v| -v).collect();
            a.push(rat(t));
            a
        };
        for s in strata {
            for c in &s.equalities {
                let mut a = c.coeffs.clone();
                a.push(Rat::zero());
                lp.add_eq(a, c.rhs.clone());
            }
            for c in &s.strict {
                lp.add_le(ext(c, 1), -c.rhs.clone());
            }
            for c in &s.weak {
                lp.add_le(ext(c, 0), -c.rhs.clone());
            }
        }
        let mut t = vec![Rat::zero(); n + 1];
        t[n] = Rat::one();
        lp.add_le(t.clone(), Rat::one());
        match lp.maximize(&t) {
            LpOutcome::Optimal { value, .. } => value.is_positive(),
            LpOutcome::Unbounded => true,
            LpOutcome::Infeasible => false,
        }
    }
}

fn dim(s: &Stratum) -> usize {
    s.equalities
        .iter()
        .chain(&s.strict)
        .chain(&s.weak)
        .map(|c| c.coeffs.len())
        .next()
        .unwrap_or(0)
}

fn e(n: usize, i: usize) -> Vec<Rat> {
    crate::polyhedra::unit(n, i)
}

fn diff(n: usize, i: usize, j: usize) -> Vec<Rat> {
    let mut v = e(n, i);
    v[j] = -Rat::one();
    v
}

/// `P_{eps,k} = {lambda_1 >= ... >= lambda_{n-k} > lambda_{n-k+1} = ... = lambda_n = eps}`
/// for `k = 0..=n`; for `k = 0` the last condition reads `lambda_n > eps`.
pub fn weitsman_strata(n: usize, eps: &Rat) -> Vec<Stratum> {
    assert!(n >= 1);
    (0..=n)
        .map(|k| {
            let free = n - k;
            let weak = (0..free.saturating_sub(1))
                .map(|i| LinearCondition::new(diff(n, i, i + 1), Rat::zero()))
                .collect();
            let strict = if free > 0 {
                vec![LinearCondition::new(e(n, free - 1), eps.clone())]
            } else {
                Vec::new()
            };
            let equalities = (free..n).map(|i| LinearCondition::new(e(n, i), eps.clone())).collect();
            Stratum { k, equalities, strict, weak }
        })
        .collect()
}

/// The `k` of the stratum containing an ordered `lambda` with `lambda_n >= eps`.
pub fn classify(lambda: &[Rat], eps: &Rat) -> Option<usize> {
    let ordered = lambda.windows(2).all(|w| w[0] >= w[1]);
    if !ordered || lambda.last().is_some_and(|l| l < eps) {
        return None;
    }
    Some(lambda.iter().rev().take_while(|l| *l == eps).count())
}
