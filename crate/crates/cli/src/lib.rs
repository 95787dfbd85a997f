//! Command-line front end: JSON in, JSON (or SVG) out.
//!
//! Exit codes: 0 when every asserted check holds, 1 when a predicate is false,
//! 2 on usage or input errors.

pub mod svg;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use symcut_core::coxvinberg::{
    cone_slice, delzant_moment_image, delzant_sequence, extended_cone, kirwan_cut, vinberg_cone,
    DelzantSequence, RationalCone, VinbergLattice,
};
use symcut_core::exec::Execution;
use symcut_core::matnum::{self, AlgebraTag, Report, Tolerances};
use symcut_core::polyhedra::{
    is_delzant, is_simple, is_universal, outward_positivity, stacky_normal_fan, w_invariant_extension,
    weitsman_classify, weitsman_strata, Ambient, LabeledPolyhedron, Region, Stratum, Violation,
};
use symcut_core::rational::{format_rat, serde_rat, serde_rat_vec, Rat};
use symcut_core::rootsys::RootDatum;

pub const DEFAULT_SEED: u64 = 1;
pub const TOLERANCES_ENV: &str = "SYMCUT_TOLERANCES";

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(name = "symcut", version, about = "Exact and numerical tools for non-abelian symplectic cuts")]
pub struct Config {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", value_name = "KEY=VALUE", global = true)]
    pub tol: Vec<String>,
    /// Tolerance file (JSON); defaults to the file named by SYMCUT_TOLERANCES.
    #[arg(long, global = true)]
    pub tolerances: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Simplicity, outward-positivity and universality of a polyhedron.
    Check(InputArg),
    /// W-invariant extension of an outward-positive polyhedron.
    Extend(InputArg),
    /// Stacky normal fan.
    Fan(InputArg),
    /// Moment image and exact sequence of a Delzant construction.
    Delzant(InputArg),
    /// The Vinberg cone of a root datum and its Hilbert basis.
    VinbergCone(InputArg),
    /// The extended cone of (root datum, betas), optionally sliced at xi.
    ExtendedCone(InputArg),
    /// Intersection of a Kirwan polytope with a cut polytope.
    Cut(InputArg),
    /// Weitsman strata, optionally classifying a point.
    Strata(InputArg),
    /// Delzant condition at every vertex.
    IsDelzant(IsDelzantArgs),
    /// Numerical verification suites.
    Verify(VerifyArgs),
    /// SVG drawing of rank-2 polyhedra in the positive chamber.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct InputArg {
    /// Input JSON file, `-` for standard input.
    pub input: PathBuf,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct IsDelzantArgs {
    pub input: PathBuf,
    /// Use the root lattice instead of the weight lattice.
    #[arg(long)]
    pub root_lattice: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Symplectic,
    Lagrangian,
    RoundTrip,
    FiberOrbit,
    Sl2Hamiltonian,
    SectionL,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    U2,
    Su2,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Matrix size (symplectic, lagrangian, round-trip).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Subgroup for the fiber-orbit suite.
    #[arg(long, value_enum, default_value_t = Group::Su2)]
    pub group: Group,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct PlotArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 480.0)]
    pub width: f64,
    #[arg(long, default_value_t = 24.0)]
    pub margin: f64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub show_normals: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Json { path: String, line: usize, column: usize, message: String },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Json { path, line, column, message } => {
                write!(f, "{path}:{line}:{column}: {message}")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<symcut_core::Error> for CliError {
    fn from(e: symcut_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// What a command produced: the document to emit and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: String,
    pub exit_code: i32,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, ok: bool) -> Self {
        let mut document = serde_json::to_string(value).expect("serialisable result");
        document.push('\n');
        Outcome { document, exit_code: if ok { 0 } else { 1 } }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Parses JSON, reporting line and column on failure.
pub fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    parse_json(path, &read_input(path)?)
}

/// Defaults, then the tolerance file (flag, else environment), then `--tol` overrides.
pub fn resolve_tolerances(config: &Config) -> Result<Tolerances, CliError> {
    let file = config.tolerances.clone().or_else(|| std::env::var_os(TOLERANCES_ENV).map(PathBuf::from));
    let mut tol = match file {
        Some(path) => load::<Tolerances>(&path)?,
        None => Tolerances::default(),
    };
    for kv in &config.tol {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--tol expects KEY=VALUE, got `{kv}`")))?;
        let v: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("bad tolerance value `{v}`")))?;
        tol.set(k.trim(), v)?;
    }
    Ok(tol)
}

#[derive(Serialize, Debug, PartialEq)]
pub struct CheckResult {
    pub simple: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outward_positive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universal: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Violation>,
}

impl CheckResult {
    fn holds(&self) -> bool {
        self.simple && self.outward_positive != Some(false) && self.universal != Some(false)
    }
}

pub fn check(p: &LabeledPolyhedron) -> Result<CheckResult, CliError> {
    let mut certificates = Vec::new();
    let s = is_simple(p);
    certificates.extend(s.certificate);
    let outward_positive = p.root_datum.as_ref().map(|_| {
        let v = outward_positivity(p);
        certificates.extend(v.certificate);
        v.holds
    });
    let universal = if p.root_datum.is_some() && p.ambient == Ambient::Chamber {
        let v = is_universal(p)?;
        certificates.extend(v.certificate.filter(|c| !matches!(c, Violation::NotSimple { .. })));
        Some(v.holds)
    } else {
        None
    };
    Ok(CheckResult { simple: s.holds, outward_positive, universal, certificates })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DelzantInput {
    betas: Vec<Vec<i64>>,
    #[serde(with = "serde_rat_vec")]
    xi: Vec<Rat>,
}

#[derive(Serialize)]
struct DelzantOutput {
    image: Region,
    sequence: DelzantSequence,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootDatumInput {
    root_datum: RootDatum,
}

fn rat_rows(rows: &[Vec<Rat>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(format_rat).collect()).collect()
}

#[derive(Serialize)]
struct VinbergOutput {
    cone: RationalCone,
    lattice_basis: Vec<Vec<String>>,
    hilbert_basis: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtendedConeInput {
    root_datum: RootDatum,
    betas: Vec<Vec<i64>>,
    #[serde(default, with = "opt_rat_vec")]
    xi: Option<Vec<Rat>>,
}

mod opt_rat_vec {
    use super::*;

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Vec<Rat>>, D::Error> {
        serde_rat_vec::deserialize(d).map(Some)
    }
}

#[derive(Serialize)]
struct ExtendedConeOutput {
    cone: RationalCone,
    #[serde(skip_serializing_if = "Option::is_none")]
    slice: Option<Region>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CutInput {
    kirwan: LabeledPolyhedron,
    polytope: LabeledPolyhedron,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StrataInput {
    n: usize,
    #[serde(with = "serde_rat")]
    eps: Rat,
    #[serde(default, with = "opt_rat_vec")]
    lambda: Option<Vec<Rat>>,
}

#[derive(Serialize)]
struct StrataOutput {
    strata: Vec<Stratum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classified: Option<Option<usize>>,
}

/// Input of `plot`: a single polyhedron, or a root datum with a list of regions.
#[derive(Deserialize)]
#[serde(untagged)]
enum PlotInput {
    Many(PlotList),
    One(LabeledPolyhedron),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlotList {
    root_datum: RootDatum,
    polyhedra: Vec<Region>,
}

fn verify(args: &VerifyArgs, seed: u64, tol: &Tolerances) -> Result<Outcome, CliError> {
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let (n, t) = (args.n, args.trials);
    if !(1..=6).contains(&n) {
        return Err(CliError::Usage(format!("--n must be between 1 and 6, got {n}")));
    }
    let tag = match args.group {
        Group::U2 => AlgebraTag::Unitary,
        Group::Su2 => AlgebraTag::SpecialUnitary,
    };
    let one = |r: Report| {
        let ok = r.pass;
        Ok(Outcome::json(&r, ok))
    };
    match args.suite {
        Suite::All => {
            let reports = matnum::run_battery(seed, tol, exec);
            let ok = reports.iter().all(|r| r.pass);
            Ok(Outcome::json(&reports, ok))
        }
        Suite::Symplectic => one(matnum::verify_symplectic(n, t, seed, tol, exec)),
        Suite::Lagrangian => one(matnum::verify_lagrangian_fibers(n, t, seed, tol, exec)),
        Suite::RoundTrip => one(matnum::verify_round_trips(n, t, seed, tol, exec)),
        Suite::FiberOrbit => one(matnum::verify_fiber_is_orbit(tag, t, seed, tol, exec)),
        Suite::Sl2Hamiltonian => one(matnum::verify_sl2_hamiltonian(t, seed, tol, exec)),
        Suite::SectionL => one(matnum::verify_section_l(t, seed, tol, exec)),
    }
}

/// Runs one command. Errors map to exit code 2.
pub fn run(config: &Config) -> Result<Outcome, CliError> {
    match &config.command {
        Command::Check(a) => {
            let p: LabeledPolyhedron = load(&a.input)?;
            let r = check(&p)?;
            let ok = r.holds();
            Ok(Outcome::json(&r, ok))
        }
        Command::Extend(a) => {
            let p: LabeledPolyhedron = load(&a.input)?;
            match w_invariant_extension(&p) {
                Ok(e) => Ok(Outcome::json(&e, true)),
                Err(symcut_core::Error::NotOutwardPositive { facet, root }) => {
                    log::error!("facet {facet} pairs negatively with simple root {root}");
                    Ok(Outcome::json(&Violation::NegativeNormal { facet, root }, false))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Fan(a) => {
            let p: LabeledPolyhedron = load(&a.input)?;
            Ok(Outcome::json(&stacky_normal_fan(&p), true))
        }
        Command::Delzant(a) => {
            let d: DelzantInput = load(&a.input)?;
            let image = delzant_moment_image(&d.betas, &d.xi)?;
            let sequence = delzant_sequence(&d.betas)?;
            Ok(Outcome::json(&DelzantOutput { image, sequence }, true))
        }
        Command::VinbergCone(a) => {
            let d: RootDatumInput = load(&a.input)?;
            let cone = vinberg_cone(&d.root_datum)?;
            let lattice = VinbergLattice::new(&d.root_datum).basis();
            let hilbert = cone.hilbert_basis(Some(&lattice))?;
            let out = VinbergOutput {
                cone,
                lattice_basis: rat_rows(&lattice),
                hilbert_basis: rat_rows(&hilbert),
            };
            Ok(Outcome::json(&out, true))
        }
        Command::ExtendedCone(a) => {
            let d: ExtendedConeInput = load(&a.input)?;
            let cone = extended_cone(&d.root_datum, &d.betas)?;
            let slice = match &d.xi {
                Some(xi) => Some(cone_slice(&d.root_datum, &cone, xi)?),
                None => None,
            };
            Ok(Outcome::json(&ExtendedConeOutput { cone, slice }, true))
        }
        Command::Cut(a) => {
            let d: CutInput = load(&a.input)?;
            let cut = kirwan_cut(&d.kirwan, &d.polytope)?;
            Ok(Outcome::json(&cut.region, cut.admissible))
        }
        Command::Strata(a) => {
            let d: StrataInput = load(&a.input)?;
            if d.n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            let classified = d.lambda.as_ref().map(|l| weitsman_classify(l, &d.eps));
            let ok = classified != Some(None);
            Ok(Outcome::json(&StrataOutput { strata: weitsman_strata(d.n, &d.eps), classified }, ok))
        }
        Command::IsDelzant(a) => {
            let p: LabeledPolyhedron = load(&a.input)?;
            let lattice = if a.root_lattice { Some(p.root_datum()?.simple_roots.clone()) } else { None };
            let v = is_delzant(&p, lattice.as_ref())?;
            let ok = v.holds;
            Ok(Outcome::json(&v, ok))
        }
        Command::Verify(a) => {
            let tol = resolve_tolerances(config)?;
            verify(a, config.seed, &tol)
        }
        Command::Plot(a) => {
            let input: PlotInput = load(&a.input)?;
            let (rd, regions) = match input {
                PlotInput::Many(l) => (l.root_datum, l.polyhedra),
                PlotInput::One(p) => {
                    let rd = p.root_datum()?.clone();
                    (rd, vec![Region::Polyhedron(p)])
                }
            };
            let opts = svg::PlotOptions { width: a.width, margin: a.margin, show_normals: a.show_normals };
            let document = svg::plot_rank2(&rd, &regions, &opts)?;
            Ok(Outcome { document, exit_code: 0 })
        }
    }
}
