//! Matrix geometry on `M_N(C)` in double precision: the Euclidean Kähler structure,
//! the moment map `mu(A) = i A^* A` of the right unitary action, polar and Cartan
//! decompositions, sections of the moment map, and the `SL(2)` cut function.
//!
//! `u(N)` is identified with its dual through `<X, Y> = -Tr(XY)`.

mod suites;

pub use suites::{
    run_battery, verify_fiber_is_orbit, verify_lagrangian_fibers, verify_round_trips,
    verify_section_l, verify_sl2_hamiltonian, verify_symplectic, Report, Tolerances,
};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use nalgebra::Complex;
pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTag {
    FullMatrixMonoid,
    GeneralLinear,
    SpecialLinear,
    Unitary,
    SpecialUnitary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoint {
    pub entries: CMat,
    pub group_tag: GroupTag,
}

impl MatrixPoint {
    pub fn new(entries: CMat, group_tag: GroupTag, tol: f64) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch("matrix point must be square".into()));
        }
        let n = entries.nrows();
        let det = || entries.determinant();
        let unitary = || (entries.adjoint() * &entries - CMat::identity(n, n)).norm() <= tol;
        let ok = match group_tag {
            GroupTag::FullMatrixMonoid => true,
            GroupTag::GeneralLinear => det().norm() > tol,
            GroupTag::SpecialLinear => (det() - 1.0).norm() <= tol,
            GroupTag::Unitary => unitary(),
            GroupTag::SpecialUnitary => unitary() && (det() - 1.0).norm() <= tol,
        };
        if ok {
            Ok(MatrixPoint { entries, group_tag })
        } else {
            Err(Error::Invalid(format!("matrix is not in {group_tag:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraTag {
    Unitary,
    SpecialUnitary,
}

/// Anti-Hermitian matrix in `u(N)` or `su(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraElement {
    pub entries: CMat,
    pub algebra_tag: AlgebraTag,
}

impl LieAlgebraElement {
    pub fn new(entries: CMat, algebra_tag: AlgebraTag, tol: f64) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch("algebra element must be square".into()));
        }
        let skew = (entries.adjoint() + &entries).norm() <= tol;
        let traceless = algebra_tag == AlgebraTag::Unitary || entries.trace().norm() <= tol;
        if skew && traceless {
            Ok(LieAlgebraElement { entries, algebra_tag })
        } else {
            Err(Error::Invalid(format!("matrix is not in {algebra_tag:?} algebra")))
        }
    }
}

fn same_shape(a: &CMat, b: &CMat) -> Result<()> {
    if a.shape() == b.shape() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())))
    }
}

/// `g_E(A, B) = Tr(A B^*)`.
pub fn metric(a: &CMat, b: &CMat) -> Result<C64> {
    same_shape(a, b)?;
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum())
}

pub fn real_metric(a: &CMat, b: &CMat) -> Result<f64> {
    Ok(metric(a, b)?.re)
}

/// `omega_E(A, B) = -Im Tr(A B^*)`.
pub fn symplectic_form(a: &CMat, b: &CMat) -> Result<f64> {
    Ok(-metric(a, b)?.im)
}

pub(crate) fn omega(a: &CMat, b: &CMat) -> f64 {
    -a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum::<C64>().im
}

pub(crate) fn rmetric(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum::<C64>().re
}

/// `mu(A) = i A^* A`.
pub fn moment_map_r(a: &CMat) -> CMat {
    (a.adjoint() * a) * I
}

/// `<X, Y> = -Re Tr(XY)`.
pub fn dual_pairing(x: &CMat, y: &CMat) -> f64 {
    -(x * y).trace().re
}

/// Orthonormal basis of `u(N)`: `i E_kk`, `(E_kl - E_lk)/sqrt 2`, `i (E_kl + E_lk)/sqrt 2`.
pub fn u_basis(n: usize) -> Vec<CMat> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for k in 0..n {
        let mut m = CMat::zeros(n, n);
        m[(k, k)] = I;
        out.push(m);
    }
    for k in 0..n {
        for l in k + 1..n {
            let mut a = CMat::zeros(n, n);
            a[(k, l)] = C64::new(s, 0.0);
            a[(l, k)] = C64::new(-s, 0.0);
            out.push(a);
            let mut b = CMat::zeros(n, n);
            b[(k, l)] = C64::new(0.0, s);
            b[(l, k)] = C64::new(0.0, s);
            out.push(b);
        }
    }
    out
}

pub fn pauli() -> [CMat; 3] {
    let c = |re: f64, im: f64| C64::new(re, im);
    [
        CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
    ]
}

/// `i sigma_k / sqrt 2`, an orthonormal basis of `su(2)`.
pub fn su2_basis() -> Vec<CMat> {
    pauli().iter().map(|s| s * C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2)).collect()
}

/// `su(2)` basis followed by `i I / sqrt 2`.
pub fn u2_basis() -> Vec<CMat> {
    let mut b = su2_basis();
    b.push(CMat::identity(2, 2) * C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2));
    b
}

pub fn from_coefficients(c: &[f64], basis: &[CMat]) -> CMat {
    let n = basis[0].nrows();
    c.iter().zip(basis).fold(CMat::zeros(n, n), |acc, (x, b)| acc + b * C64::new(*x, 0.0))
}

/// `mu_L(A)`: coefficients of the orthogonal projection of `mu(A)` onto `span(basis)`.
pub fn restrict_moment(a: &CMat, basis: &[CMat]) -> Result<Vec<f64>> {
    for (i, x) in basis.iter().enumerate() {
        same_shape(a, x)?;
        if (x.adjoint() + x).norm() > 1e-12 {
            return Err(Error::Invalid(format!("basis element {i} is not anti-Hermitian")));
        }
        for (j, y) in basis.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            if (dual_pairing(x, y) - expected).abs() > 1e-10 {
                return Err(Error::Invalid("basis is not orthonormal".into()));
            }
        }
    }
    let mu = moment_map_r(a);
    Ok(basis.iter().map(|x| dual_pairing(&mu, x)).collect())
}

/// Eigen-decomposition of the Hermitian part of `h`.
fn herm_eig(h: &CMat) -> (DVector<f64>, CMat) {
    let hs = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let e = SymmetricEigen::new(hs);
    (e.eigenvalues, e.eigenvectors)
}

/// `f(h)` for Hermitian `h` by spectral calculus.
pub fn herm_apply(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (w, v) = herm_eig(h);
    let d = CMat::from_diagonal(&w.map(|x| C64::new(f(x), 0.0)));
    &v * d * v.adjoint()
}

/// Principal square root of a (nearly) positive semidefinite Hermitian matrix.
pub fn sqrt_psd(h: &CMat) -> CMat {
    let floor = -1e-12 * h.norm();
    herm_apply(h, |x| if x < floor { f64::NAN } else { x.max(0.0).sqrt() })
}

/// `e^{i lambda}` for anti-Hermitian `lambda`.
pub fn exp_i(lambda: &CMat) -> CMat {
    herm_apply(&(lambda * I), f64::exp)
}

/// `A = U P` with `U` unitary and `P = sqrt(A^* A)`.
pub fn polar_decompose(a: &CMat) -> (CMat, CMat) {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let s = CMat::from_diagonal(&svd.singular_values.map(|x| C64::new(x, 0.0)));
    (&u * &vt, vt.adjoint() * s * &vt)
}

/// `s(B) = sqrt(-i B)`, defined when `-i B` is positive semidefinite.
pub fn section_s(b: &CMat) -> Result<CMat> {
    if !b.is_square() {
        return Err(Error::DimensionMismatch("section needs a square matrix".into()));
    }
    let h = b * C64::new(0.0, -1.0);
    let scale = b.norm();
    if (&h - h.adjoint()).norm() > 1e-10 * scale.max(1.0) {
        return Err(Error::OutsideMomentImage("B is not anti-Hermitian".into()));
    }
    let (w, v) = herm_eig(&h);
    let min = w.min();
    if min < -1e-10 * scale {
        return Err(Error::OutsideMomentImage(format!("-iB has eigenvalue {min:e}")));
    }
    let d = CMat::from_diagonal(&w.map(|x| C64::new(x.max(0.0).sqrt(), 0.0)));
    Ok(&v * d * v.adjoint())
}

#[derive(Clone, Debug)]
pub struct CartanDecomposition {
    pub k: CMat,
    /// Anti-Hermitian with `e^{i lambda} = sqrt(g^* g)`.
    pub lambda: CMat,
}

/// `g = k e^{i lambda}` with `k` unitary and `lambda = -(i/2) log(g^* g)`.
pub fn cartan_decompose(g: &CMat) -> Result<CartanDecomposition> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch("Cartan decomposition needs a square matrix".into()));
    }
    let sv = g.singular_values();
    if sv.min() <= 1e-14 * sv.max() {
        return Err(Error::Singular);
    }
    let (w, v) = herm_eig(&(g.adjoint() * g));
    let diag = |f: &dyn Fn(f64) -> C64| CMat::from_diagonal(&w.map(f));
    let p_inv = &v * diag(&|x| C64::new(1.0 / x.sqrt(), 0.0)) * v.adjoint();
    let lambda = &v * diag(&|x| C64::new(0.0, -0.5 * x.ln())) * v.adjoint();
    Ok(CartanDecomposition { k: g * p_inv, lambda })
}

/// `sqrt(-det(A^*A - Tr(A^*A)/2 I))` for a 2x2 matrix: half the gap between the
/// squared singular values.
pub fn sl2_cut_function(a: &CMat) -> f64 {
    assert_eq!(a.shape(), (2, 2), "the cut function is defined on 2x2 matrices");
    let m = a.adjoint() * a;
    let half = m.trace() * 0.5;
    let t = &m - CMat::identity(2, 2) * half;
    let arg = -(t[(0, 0)] * t[(1, 1)] - t[(0, 1)] * t[(1, 0)]).re;
    assert!(arg >= -1e-12 * (1.0 + m.norm_squared()), "negative discriminant {arg}");
    arg.max(0.0).sqrt()
}

/// `(gamma, xi)`: the `SU(2)` value `f(A)` and the scalar `U(1)` value `Tr(A^*A)/2`.
pub fn sl2_moment_values(a: &CMat) -> (f64, f64) {
    (sl2_cut_function(a), 0.5 * a.norm_squared())
}

/// Section of `mu_L` for `l = u(2)` (coefficients in [`u2_basis`]) or `l = su(2)`
/// (coefficients in [`su2_basis`]). The result is positive definite; in the
/// `su(2)` case it has determinant 1.
pub fn section_s_l(x: &[f64], algebra: AlgebraTag) -> Result<CMat> {
    match algebra {
        AlgebraTag::Unitary => {
            if x.len() != 4 {
                return Err(Error::DimensionMismatch("u(2) coefficients have length 4".into()));
            }
            section_s(&from_coefficients(x, &u2_basis()))
        }
        AlgebraTag::SpecialUnitary => {
            if x.len() != 3 {
                return Err(Error::DimensionMismatch("su(2) coefficients have length 3".into()));
            }
            su2_section(x)
        }
    }
}

/// Solves `mu_{su(2)}(e^h) = x` for traceless Hermitian `h` by damped Newton.
fn su2_section(x: &[f64]) -> Result<CMat> {
    let sig = pauli();
    let herm = |y: &[f64; 3]| -> CMat {
        (0..3).fold(CMat::zeros(2, 2), |acc, k| acc + &sig[k] * C64::new(y[k], 0.0))
    };
    let basis = su2_basis();
    let residual = |y: &[f64; 3]| -> [f64; 3] {
        let p = herm_apply(&herm(y), f64::exp);
        let mu = moment_map_r(&p);
        let c: Vec<f64> = basis.iter().map(|b| dual_pairing(&mu, b)).collect();
        [c[0] - x[0], c[1] - x[1], c[2] - x[2]]
    };
    let norm = |r: &[f64; 3]| r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = 1e-13 * (1.0 + norm(&[x[0], x[1], x[2]]));
    let mut y = [0.0; 3];
    let mut r = residual(&y);
    for _ in 0..100 {
        if norm(&r) <= target {
            return Ok(herm_apply(&herm(&y), f64::exp));
        }
        let mut jac = nalgebra::Matrix3::zeros();
        for k in 0..3 {
            let h = 1e-6 * (1.0 + y[k].abs());
            let (mut yp, mut ym) = (y, y);
            yp[k] += h;
            ym[k] -= h;
            let (rp, rm) = (residual(&yp), residual(&ym));
            for i in 0..3 {
                jac[(i, k)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rhs = nalgebra::Vector3::new(-r[0], -r[1], -r[2]);
        let Some(step) = jac.lu().solve(&rhs) else {
            break;
        };
        let mut alpha = 1.0;
        loop {
            let trial = [y[0] + alpha * step[0], y[1] + alpha * step[1], y[2] + alpha * step[2]];
            let rt = residual(&trial);
            if norm(&rt) < norm(&r) * (1.0 - 0.25 * alpha) || alpha < 1e-8 {
                y = trial;
                r = rt;
                break;
            }
            alpha *= 0.5;
        }
    }
    if norm(&r) <= 1e-9 * (1.0 + norm(&[x[0], x[1], x[2]])) {
        return Ok(herm_apply(&herm(&y), f64::exp));
    }
    Err(Error::OutsideMomentImage("Newton iteration did not converge".into()))
}

/// `k . s(gamma, xi)` for the `SL(2)` model `S = M_2(C)` with `SU(2) x U(1)` acting.
///
/// `s(gamma, xi) = diag(sqrt(xi + gamma), sqrt(xi - gamma))`, which needs
/// `0 <= gamma <= xi`.
pub fn t_top(k: &CMat, gamma: f64, xi: f64) -> Result<CMat> {
    if k.shape() != (2, 2) {
        return Err(Error::DimensionMismatch("k must be 2x2".into()));
    }
    if gamma < 0.0 {
        return Err(Error::OutsideMomentImage("gamma must be dominant".into()));
    }
    let b = CMat::from_diagonal(&DVector::from_vec(vec![
        C64::new(0.0, xi + gamma),
        C64::new(0.0, xi - gamma),
    ]));
    let x: Vec<f64> = u2_basis().iter().map(|e| dual_pairing(&b, e)).collect();
    Ok(k * section_s_l(&x, AlgebraTag::Unitary)?)
}

pub fn random_gaussian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary matrix (QR of a Gaussian matrix with phase correction).
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let qr = random_gaussian(rng, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_special_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let u = random_unitary(rng, n);
    let phase = u.determinant().arg() / n as f64;
    u * C64::from_polar(1.0, -phase)
}

pub fn random_anti_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMat {
    let g = random_gaussian(rng, n);
    (&g - g.adjoint()) * C64::new(0.5 * scale, 0.0)
}
