//! Randomised numerical verification suites. Each trial draws from its own
//! ChaCha stream keyed by `(seed, suite, trial)`, so reports do not depend on
//! the execution schedule.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::*;
use crate::exec::Execution;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub membership: f64,
    pub symplectic: f64,
    pub equivariance: f64,
    pub hamiltonian_fd: f64,
    pub lagrangian: f64,
    pub section_round_trip: f64,
    pub polar: f64,
    pub cartan: f64,
    pub fiber_forward: f64,
    pub fiber_invertible: f64,
    pub fiber_singular: f64,
    pub sl2_cv: f64,
    pub sl2_tangential: f64,
    pub sl2_invariance: f64,
    pub section_l: f64,
    pub moment_values: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            membership: 1e-10,
            symplectic: 1e-12,
            equivariance: 1e-12,
            hamiltonian_fd: 1e-6,
            lagrangian: 1e-6,
            section_round_trip: 1e-8,
            polar: 1e-9,
            cartan: 1e-9,
            fiber_forward: 1e-10,
            fiber_invertible: 1e-9,
            fiber_singular: 1e-7,
            sl2_cv: 1e-4,
            sl2_tangential: 1e-5,
            sl2_invariance: 1e-6,
            section_l: 1e-7,
            moment_values: 1e-7,
        }
    }
}

impl Tolerances {
    /// Sets one tolerance by field name.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let mut v = serde_json::to_value(&*self).expect("plain struct");
        match v.get_mut(key) {
            Some(slot) => *slot = serde_json::json!(value),
            None => return Err(Error::Invalid(format!("unknown tolerance `{key}`"))),
        }
        *self = serde_json::from_value(v).map_err(|e| Error::Invalid(e.to_string()))?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    /// Largest raw residual over all asserted checks.
    pub max_residual: f64,
    pub pass: bool,
    /// Per-check maxima and reported (unasserted) quantities.
    pub metrics: BTreeMap<String, f64>,
}

fn trial_rng(seed: u64, suite: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite << 32) | trial as u64);
    rng
}

/// Collects per-trial residuals for named checks into a report.
struct Collector {
    names: Vec<(&'static str, f64)>,
    max: Vec<f64>,
    ok: bool,
}

impl Collector {
    fn new(names: &[(&'static str, f64)]) -> Self {
        Collector { names: names.to_vec(), max: vec![0.0; names.len()], ok: true }
    }

    fn push(&mut self, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            if !(v.is_finite() && *v <= self.names[i].1) {
                self.ok = false;
            }
            if !v.is_finite() || *v > self.max[i] {
                self.max[i] = if v.is_finite() { *v } else { f64::INFINITY };
            }
        }
    }

    fn report(self, suite: String, seed: u64, trials: usize, extra: BTreeMap<String, f64>) -> Report {
        let mut metrics = extra;
        for ((name, _), m) in self.names.iter().zip(&self.max) {
            metrics.insert((*name).to_string(), *m);
        }
        let max_residual = self.max.iter().cloned().fold(0.0, f64::max);
        Report { suite, seed, trials, max_residual, pass: self.ok, metrics }
    }
}

fn deriv(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    let d = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

fn mat_deriv(f: impl Fn(f64) -> CMat, h: f64) -> CMat {
    let d = |h: f64| (f(h) - f(-h)) / C64::new(2.0 * h, 0.0);
    (d(h / 2.0) * C64::new(4.0, 0.0) - d(h)) / C64::new(3.0, 0.0)
}

fn mixed(f: impl Fn(f64, f64) -> f64, h: f64) -> f64 {
    let d = |h: f64| (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

fn step(scale: f64) -> f64 {
    1e-4 * (1.0 + scale)
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Antisymmetry, compatibility with the metric, `R`-equivariance of `mu` and
/// the Hamiltonian property of `H_xi = <mu, xi>`.
///
/// With `omega_E = -Im Tr(AB^*)` and `mu(A) = i A^*A` one finds
/// `dH_xi = 2 omega_E(-A xi, .)`; the check asserts that identity and reports
/// the measured ratio as `hamiltonian_factor`.
pub fn verify_symplectic(n: usize, trials: usize, seed: u64, tol: &Tolerances, exec: Execution) -> Report {
    let rows = exec.map(trials, |t| {
        let mut rng = trial_rng(seed, 1, t);
        let a = random_gaussian(&mut rng, n);
        let x = random_gaussian(&mut rng, n);
        let y = random_gaussian(&mut rng, n);
        let s = 1.0 + x.norm() * y.norm();
        let anti = (omega(&x, &y) + omega(&y, &x)).abs() / s;
        let compat = (omega(&x, &y) - rmetric(&(&x * C64::new(0.0, 1.0)), &y)).abs() / s;
        let u = random_unitary(&mut rng, n);
        let lhs = moment_map_r(&(&a * &u));
        let rhs = u.adjoint() * moment_map_r(&a) * &u;
        let equi = (lhs - rhs).norm() / (1.0 + a.norm_squared());
        let xi = random_anti_hermitian(&mut rng, n, 1.0);
        let ham = |b: &CMat| dual_pairing(&moment_map_r(b), &xi);
        let h = step(a.norm());
        let dh = deriv(|e| ham(&(&a + &y * c(e))), h);
        let w = omega(&(-(&a * &xi)), &y);
        let rel = (dh - 2.0 * w).abs() / (dh.abs() + 2.0 * w.abs()).max(1e-300);
        (anti, compat, equi, rel, dh / w)
    });
    let mut col = Collector::new(&[
        ("antisymmetry", tol.symplectic),
        ("metric_compatibility", tol.symplectic),
        ("r_equivariance", tol.equivariance),
        ("hamiltonian_x2", tol.hamiltonian_fd),
    ]);
    let mut factor = 0.0;
    for r in &rows {
        col.push(&[r.0, r.1, r.2, r.3]);
        factor += r.4;
    }
    let mut extra = BTreeMap::new();
    extra.insert("hamiltonian_factor".into(), factor / trials.max(1) as f64);
    col.report(format!("symplectic_n{n}"), seed, trials, extra)
}

/// Fibers of the Cartan projection are Lagrangian.
///
/// Two checks per trial: the mixed partial of `Im Tr(e^{i(lambda+t nu)} e^{i(lambda+s xi)})`
/// and `omega_E` on finite-difference tangents to `t -> k e^{i(lambda + t nu)}`.
pub fn verify_lagrangian_fibers(n: usize, trials: usize, seed: u64, tol: &Tolerances, exec: Execution) -> Report {
    let rows = exec.map(trials, |t| {
        let mut rng = trial_rng(seed, 2, t);
        let lambda = random_anti_hermitian(&mut rng, n, 0.5);
        let nu = random_anti_hermitian(&mut rng, n, 0.5);
        let xi = random_anti_hermitian(&mut rng, n, 0.5);
        let k = random_unitary(&mut rng, n);
        let f = |t: f64, s: f64| {
            let a = exp_i(&(&lambda + &nu * c(t)));
            let b = exp_i(&(&lambda + &xi * c(s)));
            (a * b).trace().im
        };
        let h = step(lambda.norm());
        let scale = (1.0 + nu.norm() * xi.norm()) * exp_i(&lambda).norm_squared();
        let partial = mixed(f, h).abs() / scale;
        let v1 = mat_deriv(|t| &k * exp_i(&(&lambda + &nu * c(t))), h);
        let v2 = mat_deriv(|t| &k * exp_i(&(&lambda + &xi * c(t))), h);
        let w = omega(&v1, &v2).abs() / (1.0 + v1.norm() * v2.norm());
        (partial, w)
    });
    let mut col = Collector::new(&[("mixed_partial", tol.lagrangian), ("omega_on_fiber", tol.lagrangian)]);
    for r in &rows {
        col.push(&[r.0, r.1]);
    }
    col.report(format!("lagrangian_n{n}"), seed, trials, BTreeMap::new())
}

/// `mu(s(B)) = B` on PSD targets, `s(mu(A))` against the polar factor, polar
/// reconstruction, Cartan/polar agreement and Cartan equivariance.
pub fn verify_round_trips(n: usize, trials: usize, seed: u64, tol: &Tolerances, exec: Execution) -> Report {
    let rows = exec.map(trials, |t| {
        let mut rng = trial_rng(seed, 3, t);
        // every fourth target is rank deficient
        let mut g = random_gaussian(&mut rng, n);
        if t % 4 == 3 {
            for i in 0..n {
                g[(n - 1, i)] = c(0.0);
            }
        }
        let b = (g.adjoint() * &g) * C64::new(0.0, 1.0);
        let section = match section_s(&b) {
            Ok(p) => (moment_map_r(&p) - &b).norm() / b.norm().max(1e-300),
            Err(_) => f64::INFINITY,
        };
        let a = random_gaussian(&mut rng, n);
        let (u, p) = polar_decompose(&a);
        let polar_rec = (&a - &u * &p).norm() / a.norm();
        let s_mu = match section_s(&moment_map_r(&a)) {
            Ok(s) => (s - &p).norm() / a.norm(),
            Err(_) => f64::INFINITY,
        };
        let (cartan, equi) = match cartan_decompose(&a) {
            Ok(cd) => {
                let e = exp_i(&cd.lambda);
                let agree = ((&e - &p).norm() + (&cd.k - &u).norm()) / a.norm();
                let rec = (&a - &cd.k * &e).norm() / a.norm();
                let k1 = random_unitary(&mut rng, n);
                let k2 = random_unitary(&mut rng, n);
                let moved = &k1 * &a * k2.adjoint();
                let equi = match cartan_decompose(&moved) {
                    Ok(cd2) => {
                        (cd2.k - &k1 * &cd.k * k2.adjoint()).norm()
                            + (cd2.lambda - &k2 * &cd.lambda * k2.adjoint()).norm() / (1.0 + cd.lambda.norm())
                    }
                    Err(_) => f64::INFINITY,
                };
                (agree.max(rec), equi)
            }
            Err(_) => (f64::INFINITY, f64::INFINITY),
        };
        [section, polar_rec, s_mu, cartan, equi]
    });
    let mut col = Collector::new(&[
        ("moment_of_section", tol.section_round_trip),
        ("polar_reconstruction", tol.polar),
        ("section_of_moment", tol.polar),
        ("cartan_polar", tol.cartan),
        ("cartan_equivariance", tol.cartan),
    ]);
    for r in &rows {
        col.push(r);
    }
    col.report(format!("round_trip_n{n}"), seed, trials, BTreeMap::new())
}

fn in_group(k: &CMat, tag: AlgebraTag) -> f64 {
    let n = k.nrows();
    let u = (k.adjoint() * k - CMat::identity(n, n)).norm();
    match tag {
        AlgebraTag::Unitary => u,
        AlgebraTag::SpecialUnitary => u + (k.determinant() - 1.0).norm(),
    }
}

fn basis_for(tag: AlgebraTag) -> Vec<CMat> {
    match tag {
        AlgebraTag::Unitary => u2_basis(),
        AlgebraTag::SpecialUnitary => su2_basis(),
    }
}

fn vec_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Orthogonal Procrustes in `U(2)` or `SU(2)`: the `k` minimising `||B - kA||`.
pub(crate) fn procrustes(a: &CMat, b: &CMat, tag: AlgebraTag) -> CMat {
    let svd = (b * a.adjoint()).svd(true, true);
    let w = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let mut k = &w * &vt;
    if tag == AlgebraTag::SpecialUnitary {
        let phase = k.determinant().arg();
        let s = &svd.singular_values;
        let j = if s[0] <= s[1] { 0 } else { 1 };
        let mut d = CMat::identity(2, 2);
        d[(j, j)] = C64::from_polar(1.0, -phase);
        k = &w * d * &vt;
    }
    k
}

/// Fibers of `mu_L` are `L`-orbits at `N = 2` for `L = U(2)` or `SU(2)`.
pub fn verify_fiber_is_orbit(tag: AlgebraTag, trials: usize, seed: u64, tol: &Tolerances, exec: Execution) -> Report {
    let basis = basis_for(tag);
    let rows = exec.map(trials, |t| {
        let mut rng = trial_rng(seed, 4 + tag as u64, t);
        let mut a = random_gaussian(&mut rng, 2);
        if tag == AlgebraTag::SpecialUnitary {
            a /= a.determinant().sqrt();
        }
        let k = match tag {
            AlgebraTag::Unitary => random_unitary(&mut rng, 2),
            AlgebraTag::SpecialUnitary => random_special_unitary(&mut rng, 2),
        };
        let b = &k * &a;
        let ma = restrict_moment(&a, &basis).expect("orthonormal basis");
        let mb = restrict_moment(&b, &basis).expect("orthonormal basis");
        let forward = vec_dist(&ma, &mb) / (1.0 + a.norm_squared());
        let invertible = match a.clone().try_inverse() {
            Some(inv) => {
                let kh = &b * inv;
                in_group(&kh, tag) + (&b - &kh * &a).norm() / b.norm() + (&kh - &k).norm()
            }
            None => f64::INFINITY,
        };
        // A s_L(mu_L(A))^{-1} lies in L
        let through_section = match section_s_l(&ma, tag).ok().and_then(|p| p.try_inverse()) {
            Some(pinv) => in_group(&(&a * pinv), tag),
            None => f64::INFINITY,
        };
        let u = DVector::from_fn(2, |_, _| C64::new(normal(&mut rng), normal(&mut rng)));
        let v = DVector::from_fn(2, |_, _| C64::new(normal(&mut rng), normal(&mut rng)));
        let r1 = &u * v.adjoint();
        let r1b = &k * &r1;
        let kh = procrustes(&r1, &r1b, tag);
        let singular = in_group(&kh, tag) + (&r1b - &kh * &r1).norm() / r1b.norm();
        [forward, invertible, through_section, singular]
    });
    let mut col = Collector::new(&[
        ("forward", tol.fiber_forward),
        ("converse_invertible", tol.fiber_invertible),
        ("converse_section", tol.section_l),
        ("converse_rank_one", tol.fiber_singular),
    ]);
    for r in &rows {
        col.push(r);
    }
    let name = match tag {
        AlgebraTag::Unitary => "fiber_orbit_u2",
        AlgebraTag::SpecialUnitary => "fiber_orbit_su2",
    };
    col.report(name.into(), seed, trials, BTreeMap::new())
}

/// Real basis of `M_2(C) = R^8`: entry `(r, c)`, real part then imaginary part.
fn real_unit(i: usize) -> CMat {
    let mut m = CMat::zeros(2, 2);
    let (e, im) = (i / 2, i % 2 == 1);
    m[(e / 2, e % 2)] = if im { C64::new(0.0, 1.0) } else { c(1.0) };
    m
}

/// Hamiltonian field of the cut function on a rank-one point.
/// Returns `(c, tangential residual, |df(X_f)| / ||X_f||)`.
pub(crate) fn sl2_hamiltonian_at(a: &CMat) -> Result<(f64, f64, f64)> {
    if a.norm() == 0.0 {
        return Err(Error::Invalid("degenerate tangent frame at A = 0".into()));
    }
    let adj = CMat::from_row_slice(2, 2, &[a[(1, 1)], -a[(0, 1)], -a[(1, 0)], a[(0, 0)]]);
    let jac = DMatrix::<f64>::from_fn(2, 8, |r, i| {
        let v = (&adj * real_unit(i)).trace();
        if r == 0 { v.re } else { v.im }
    });
    let eig = SymmetricEigen::new(jac.transpose() * &jac);
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let frame: Vec<CMat> = order[..6]
        .iter()
        .map(|&j| (0..8).fold(CMat::zeros(2, 2), |acc, i| acc + real_unit(i) * c(eig.eigenvectors[(i, j)])))
        .collect();
    let om = DMatrix::<f64>::from_fn(6, 6, |i, j| omega(&frame[i], &frame[j]));
    let h = step(a.norm());
    let df = DVector::<f64>::from_fn(6, |j, _| deriv(|e| sl2_cut_function(&(a + &frame[j] * c(e))), h));
    // omega(X_f, E_j) = df_j with X_f = sum x_i E_i
    let x = om.transpose().lu().solve(&df).ok_or(Error::Singular)?;
    let xf = (0..6).fold(CMat::zeros(2, 2), |acc, i| acc + &frame[i] * c(x[i]));
    let rot = a * C64::new(0.0, 1.0);
    let cc = rmetric(&xf, &rot) / rot.norm_squared();
    let tangential = (&xf - &rot * c(cc)).norm() / xf.norm();
    let dir = &xf / c(xf.norm());
    let along = deriv(|e| sl2_cut_function(&(a + &dir * c(e))), h).abs() / a.norm();
    Ok((cc, tangential, along))
}

/// The cut function generates the scalar rotation on the rank-one locus of `M_2(C)`.
///
/// The proportionality constant `c` (with `X_f = c iA`) must be constant across
/// samples; its value is reported next to `1/2` without being asserted.
pub fn verify_sl2_hamiltonian(trials: usize, seed: u64, tol: &Tolerances, exec: Execution) -> Report {
    let rows = exec.map(trials, |t| {
        let mut rng = trial_rng(seed, 6, t);
        let a = if t == 0 {
            let mut e = CMat::zeros(2, 2);
            e[(0, 0)] = c(1.0);
            e
        } else {
            let u = DVector::from_fn(2, |_, _| C64::new(normal(&mut rng), normal(&mut rng)));
            let v = DVector::from_fn(2, |_, _| C64::new(normal(&mut rng), normal(&mut rng)));
            &u * v.adjoint()
        };
        sl2_hamiltonian_at(&a).unwrap_or((f64::NAN, f64::INFINITY, f64::INFINITY))
    });
    let cs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mean = cs.iter().sum::<f64>() / cs.len().max(1) as f64;
    let var = cs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / cs.len().max(1) as f64;
    let cv = var.sqrt() / mean.abs();
    let mut col = Collector::new(&[
        ("c_cv", tol.sl2_cv),
        ("tangential", tol.sl2_tangential),
        ("invariance_along_flow", tol.sl2_invariance),
    ]);
    for r in &rows {
        col.push(&[0.0, r.1, r.2]);
    }
    col.push(&[cv, 0.0, 0.0]);
    let mut extra = BTreeMap::new();
    extra.insert("c_mean".into(), mean);
    extra.insert("c_deviation_from_half".into(), (mean - 0.5).abs());
    extra.insert("abs_c_deviation_from_half".into(), (mean.abs() - 0.5).abs());
    col.report("sl2_hamiltonian".into(), seed, trials, extra)
}

/// Sections of `mu_L` for `u(2)` and `su(2)`, and the map `(k, gamma, xi) -> k s(gamma, xi)`.
pub fn verify_section_l(trials: usize, seed: u64, tol: &Tolerances, exec: Execution) -> Report {
    let rows = exec.map(trials, |t| {
        let mut rng = trial_rng(seed, 7, t);
        let x: Vec<f64> = (0..3).map(|_| 2.0 * normal(&mut rng)).collect();
        let su = match section_s_l(&x, AlgebraTag::SpecialUnitary) {
            Ok(p) => {
                let back = restrict_moment(&p, &su2_basis()).expect("orthonormal basis");
                let (u, _) = polar_decompose(&p);
                vec_dist(&back, &x) / (1.0 + vec_dist(&x, &[0.0; 3]))
                    + (u - CMat::identity(2, 2)).norm()
                    + (p.determinant() - 1.0).norm()
            }
            Err(_) => f64::INFINITY,
        };
        let a = random_gaussian(&mut rng, 2);
        let xu = restrict_moment(&a, &u2_basis()).expect("orthonormal basis");
        let un = match section_s_l(&xu, AlgebraTag::Unitary) {
            Ok(p) => {
                let back = restrict_moment(&p, &u2_basis()).expect("orthonormal basis");
                vec_dist(&back, &xu) / (1.0 + a.norm_squared())
            }
            Err(_) => f64::INFINITY,
        };
        let gamma = rng.random_range(0.0..2.0);
        let xi = gamma + rng.random_range(0.1..2.0);
        let k = random_unitary(&mut rng, 2);
        let values = match (t_top(&k, gamma, xi), t_top(&CMat::identity(2, 2), gamma, xi)) {
            (Ok(p), Ok(p0)) => {
                let (g, x) = sl2_moment_values(&p);
                let (g0, x0) = sl2_moment_values(&p0);
                let fit = (g - gamma).abs().max((x - xi).abs());
                let inv = (g - g0).abs().max((x - x0).abs());
                // a different (gamma, xi) has a different P-factor
                let other = t_top(&k, gamma + 0.05, xi + 0.1).expect("inside the image");
                let distinct = (polar_decompose(&other).1 - polar_decompose(&p).1).norm() > 1e-6;
                (fit, inv, if distinct { 0.0 } else { 1.0 })
            }
            _ => (f64::INFINITY, f64::INFINITY, 1.0),
        };
        [su, un, values.0, values.1, values.2]
    });
    let mut col = Collector::new(&[
        ("su2_round_trip", tol.section_l),
        ("u2_round_trip", tol.section_l),
        ("t_top_moment_values", tol.moment_values),
        ("t_top_unitary_invariance", tol.membership),
        ("t_top_injectivity", 0.0),
    ]);
    for r in &rows {
        col.push(r);
    }
    col.report("section_l".into(), seed, trials, BTreeMap::new())
}

/// The full battery, in a fixed order.
pub fn run_battery(seed: u64, tol: &Tolerances, exec: Execution) -> Vec<Report> {
    let mut out = Vec::new();
    for n in [2, 3] {
        out.push(verify_symplectic(n, 100, seed, tol, exec));
    }
    for n in [2, 3, 4] {
        out.push(verify_lagrangian_fibers(n, 100, seed, tol, exec));
    }
    for n in [2, 3] {
        out.push(verify_round_trips(n, 200, seed, tol, exec));
    }
    for tag in [AlgebraTag::Unitary, AlgebraTag::SpecialUnitary] {
        out.push(verify_fiber_is_orbit(tag, 100, seed, tol, exec));
    }
    out.push(verify_sl2_hamiltonian(64, seed, tol, exec));
    out.push(verify_section_l(100, seed, tol, exec));
    out
}
