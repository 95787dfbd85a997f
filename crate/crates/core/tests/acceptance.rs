//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symcut_core::coxvinberg::{
    cone_slice, delzant_moment_image, delzant_sequence, extended_cone, kirwan_cut, phi_beta_extends,
};
use symcut_core::exec::Execution;
use symcut_core::lp::LinearProgram;
use symcut_core::matnum::{self, AlgebraTag, Report, Tolerances};
use symcut_core::polyhedra::{
    intersect, is_outward_positive, is_universal, LabeledPolyhedron, Region, Violation,
};
use symcut_core::rational::{dot, rat, ratio, Rat};
use symcut_core::rootsys::{build_root_datum, CartanType, RootDatum};

fn rd(s: &str) -> RootDatum {
    let t: CartanType = s.parse().unwrap();
    build_root_datum(&t, t.rank()).unwrap()
}

fn chamber(rd: &RootDatum, facets: &[(&[i64], i64)]) -> LabeledPolyhedron {
    let f: Vec<_> = facets.iter().map(|(b, x)| (b.to_vec(), rat(*x))).collect();
    LabeledPolyhedron::chamber(rd, &f).unwrap()
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Independent check of a non-perpendicularity certificate: the face meets the
/// chamber face, and some normal on the face pairs nontrivially with a simple
/// root vanishing there.
fn certificate_is_valid(p: &LabeledPolyhedron, face: &[usize], sigma: &[usize]) -> bool {
    let rd = p.root_datum.as_ref().unwrap();
    let mut lp = LinearProgram::new(p.dim);
    for j in 0..p.dim {
        let mut e = vec![Rat::zero(); p.dim];
        e[j] = rat(1);
        if sigma.contains(&j) {
            lp.add_eq(e, Rat::zero());
        } else {
            lp.add_ge(e, Rat::zero());
        }
    }
    for (i, f) in p.facets.iter().enumerate() {
        if face.contains(&i) {
            lp.add_eq(f.beta_rat(), f.xi.clone());
        } else {
            lp.add_le(f.beta_rat(), f.xi.clone());
        }
    }
    let skew = face.iter().any(|&i| {
        sigma.iter().any(|&s| !dot(&p.facets[i].beta_rat(), &rd.simple_roots[s]).is_zero())
    });
    lp.is_feasible() && skew
}

fn universality_corpus() -> Outcome {
    let a1 = rd("A1");
    let a2 = rd("A2");
    let universal = [
        ("interval", chamber(&a1, &[(&[1], 7)])),
        ("U1", chamber(&a2, &[(&[2, 1], 8), (&[-2, -1], -4), (&[0, 1], 2)])),
        (
            "U2",
            chamber(&a2, &[(&[-1, 0], -1), (&[0, -1], -1), (&[1, 0], 4), (&[0, 1], 4), (&[1, 1], 6)]),
        ),
        ("U3", chamber(&a2, &[(&[2, 1], 8), (&[1, 2], 8), (&[1, 1], 5)])),
    ];
    for (name, p) in &universal {
        let v = is_universal(p).map_err(|e| e.to_string())?;
        ensure(v.holds, || format!("{name} classified non-universal: {:?}", v.certificate))?;
    }
    let skewed = [
        ("U1'", chamber(&a2, &[(&[1, 0], 4), (&[-2, -1], -4), (&[0, 1], 2)])),
        ("U3'", chamber(&a2, &[(&[2, 1], 8), (&[0, 1], 4), (&[1, 1], 5)])),
        ("triangle", chamber(&a2, &[(&[1, 1], 3)])),
    ];
    for (name, p) in &skewed {
        let v = is_universal(p).map_err(|e| e.to_string())?;
        ensure(!v.holds, || format!("{name} classified universal"))?;
        match &v.certificate {
            Some(Violation::NotPerpendicular { face, chamber_face }) => {
                ensure(certificate_is_valid(p, face, chamber_face), || {
                    format!("{name}: certificate {face:?}/{chamber_face:?} does not check out")
                })?;
            }
            other => return Err(format!("{name}: unexpected certificate {other:?}")),
        }
    }
    Ok("4 universal, 3 skewed with verified certificates".into())
}

fn random_betas(rng: &mut ChaCha8Rng, r: usize, n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..n)
        .map(|_| loop {
            let b: Vec<i64> = (0..r).map(|_| rng.random_range(lo..=hi)).collect();
            if b.iter().any(|&x| x != 0) {
                break b;
            }
        })
        .collect()
}

fn positivity_vs_extension() -> Outcome {
    let data = [rd("A1"), rd("A2"), rd("B2")];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut positive = 0;
    for t in 0..200 {
        let r = &data[t % 3];
        let n = rng.random_range(1..=4);
        let betas = random_betas(&mut rng, r.rank, n, -1, 3);
        let facets: Vec<_> = betas.iter().map(|b| (b.clone(), rat(rng.random_range(0..=6)))).collect();
        let p = LabeledPolyhedron::chamber(r, &facets).map_err(|e| e.to_string())?;
        let a = is_outward_positive(&p);
        let b = phi_beta_extends(r, &betas).map_err(|e| e.to_string())?.holds;
        ensure(a == b, || format!("trial {t}: outward positive {a}, extends {b}, betas {betas:?}"))?;
        positive += a as usize;
    }
    Ok(format!("200 agree ({positive} outward positive)"))
}

fn slice_identity() -> Outcome {
    let data = [rd("A1"), rd("A2")];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..100 {
        let r = &data[t % 2];
        let n = rng.random_range(1..=3);
        let betas = random_betas(&mut rng, r.rank, n, -2, 3);
        let xi: Vec<Rat> = (0..n).map(|_| ratio(rng.random_range(0..=12), 2)).collect();
        let cone = extended_cone(r, &betas).map_err(|e| e.to_string())?;
        let slice = cone_slice(r, &cone, &xi).map_err(|e| e.to_string())?;
        let facets: Vec<_> = betas.iter().cloned().zip(xi.iter().cloned()).collect();
        let direct = LabeledPolyhedron::chamber(r, &facets).map_err(|e| e.to_string())?;
        let Region::Polyhedron(s) = slice else {
            return Err(format!("trial {t}: empty slice"));
        };
        ensure(s.set_equal(&direct.with_chamber_walls()), || {
            format!("trial {t}: slice differs for betas {betas:?}")
        })?;
    }
    Ok("100 slices equal as sets".into())
}

fn delzant_variant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut empty = 0;
    for t in 0..50 {
        let r = rng.random_range(1..=3);
        let n = rng.random_range(1..=5);
        let betas = random_betas(&mut rng, r, n, -2, 2);
        let xi: Vec<Rat> = (0..n).map(|_| rat(rng.random_range(-3..=6))).collect();
        let image = delzant_moment_image(&betas, &xi).map_err(|e| e.to_string())?;
        let facets: Vec<_> = betas.iter().cloned().zip(xi.iter().cloned()).collect();
        match (LabeledPolyhedron::full(None, r, &facets), image) {
            (Ok(direct), Region::Polyhedron(p)) => {
                ensure(p.set_equal(&direct), || format!("trial {t}: image differs from H-representation"))?;
            }
            (Err(_), Region::Empty) => empty += 1,
            (d, i) => return Err(format!("trial {t}: direct {:?} vs image {:?}", d.is_ok(), i.is_empty())),
        }
    }
    let seq = delzant_sequence(&[vec![1, 0], vec![0, 1], vec![-1, -1]]).map_err(|e| e.to_string())?;
    let k = &seq.kernel_basis;
    let ones = |s: &str| vec![vec![s.to_string(); 3]];
    ensure(*k == ones("1") || *k == ones("-1"), || format!("kernel {k:?}"))?;
    ensure(seq.exact_on_right, || "sequence not exact on the right".into())?;
    Ok(format!("50 images exact ({empty} empty), kernel (1,1,1)"))
}

fn report_outcome(reports: &[Report]) -> Outcome {
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    for r in reports {
        ensure(r.pass, || serde_json::to_string(r).unwrap())?;
    }
    let names: Vec<&str> = reports.iter().map(|r| r.suite.as_str()).collect();
    Ok(format!("{} max residual {worst:.2e}", names.join(",")))
}

fn lagrangian(tol: &Tolerances) -> Outcome {
    let reports: Vec<Report> =
        [2, 3, 4].iter().map(|&n| matnum::verify_lagrangian_fibers(n, 100, 5, tol, Execution::Parallel)).collect();
    report_outcome(&reports)
}

fn round_trips(tol: &Tolerances) -> Outcome {
    let reports: Vec<Report> =
        [2, 3, 4].iter().map(|&n| matnum::verify_round_trips(n, 200, 6, tol, Execution::Parallel)).collect();
    report_outcome(&reports)
}

fn fiber_orbit(tol: &Tolerances) -> Outcome {
    let reports: Vec<Report> = [AlgebraTag::Unitary, AlgebraTag::SpecialUnitary]
        .iter()
        .map(|&tag| matnum::verify_fiber_is_orbit(tag, 100, 7, tol, Execution::Parallel))
        .collect();
    report_outcome(&reports)
}

fn sl2_hamiltonian(tol: &Tolerances) -> Outcome {
    let r = matnum::verify_sl2_hamiltonian(64, 8, tol, Execution::Parallel);
    let base = report_outcome(std::slice::from_ref(&r))?;
    Ok(format!(
        "{base}; c = {:.6} (CV {:.1e}), deviation from 1/2: {:.3} [soft]",
        r.metrics["c_mean"], r.metrics["c_cv"], r.metrics["c_deviation_from_half"]
    ))
}

fn kirwan() -> Outcome {
    let a2 = rd("A2");
    let k = chamber(&a2, &[(&[-1, -1], -3), (&[0, 1], 3), (&[1, 0], 3)]);
    let p = chamber(&a2, &[(&[3, 2], 12)]);
    let cut = kirwan_cut(&k, &p).map_err(|e| e.to_string())?;
    ensure(cut.admissible, || "configuration should be admissible".into())?;
    let Region::Polyhedron(c) = &cut.region else {
        return Err("empty cut".into());
    };
    ensure(c.facets.len() == 4, || format!("{} facets, expected 4", c.facets.len()))?;
    ensure(k.contains(c) && p.contains(c), || "cut not contained in both inputs".into())?;
    let mut all = k.facets.clone();
    all.extend(p.facets.iter().cloned());
    let naive = LabeledPolyhedron::new(Some(a2.clone()), k.ambient, 2, all).map_err(|e| e.to_string())?;
    ensure(c.set_equal(&naive), || "cut differs from the naive intersection".into())?;
    let again = intersect(&p, &k).map_err(|e| e.to_string())?;
    ensure(again.polyhedron().is_some_and(|q| q.set_equal(c)), || "intersection not symmetric".into())?;
    Ok("4 facets, contained in both inputs".into())
}

fn determinism(tol: &Tolerances) -> Outcome {
    let run = |exec| serde_json::to_string(&matnum::run_battery(1234, tol, exec)).unwrap();
    let a = run(Execution::Parallel);
    let b = run(Execution::Parallel);
    let c = run(Execution::Sequential);
    ensure(a == b, || "two parallel runs differ".into())?;
    ensure(a == c, || "parallel and sequential runs differ".into())?;
    Ok(format!("{} bytes identical across 3 runs", a.len()))
}

fn main() {
    let tol = Tolerances::default();
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> Outcome>)> = vec![
        ("universality corpus", 1, Box::new(universality_corpus)),
        ("outward positivity vs extension", 5, Box::new(positivity_vs_extension)),
        ("slice identity", 10, Box::new(slice_identity)),
        ("Delzant variant", 5, Box::new(delzant_variant)),
        ("Lagrangian fibers", 10, Box::new(|| lagrangian(&tol))),
        ("moment/section round trips", 5, Box::new(|| round_trips(&tol))),
        ("fiber equals orbit", 5, Box::new(|| fiber_orbit(&tol))),
        ("SL(2) cut Hamiltonian", 10, Box::new(|| sl2_hamiltonian(&tol))),
        ("Kirwan cut", 1, Box::new(kirwan)),
        ("determinism", u64::MAX, Box::new(|| determinism(&tol))),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = *budget != u64::MAX && elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} [{:>2}] {name} ({:.2} s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
