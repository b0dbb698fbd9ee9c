//! Command-line interface: parse a problem file, run one operation, print the
//! result as text or JSON.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 malformed problem file,
//! 3 data rejected by the library, 4 no certified answer (diagnostic on stderr).

pub mod problem;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::critical::{
    solve, solve_by_triangulation, solve_curve, uniform_constant, CriticalPointSet, Outcome, SolveOptions,
};
use crate::error::Error;
use crate::linalg::{IntMatrix, Rat};
use crate::model::ModelMatrix;
use crate::subdivision::{maximal_cells, refines, regular_triangulation, Triangulation};
use crate::subset::Subset;
use crate::tips::{reparametrize, tips_run, ScalingModel, TipsOptions, TipsReport};
use crate::tropical::{contains_point, pluecker, vertex, TropVector, TropicalData};

pub use problem::{ProblemError, ProblemFile, TipsSettings};

#[derive(Debug, Parser)]
#[command(name = "tropical-mle", version, about = "Exact tropical toric maximum likelihood estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Problem file (JSON); read from stdin when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized perturbation orders.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Iteration cap for `tips` (overrides the problem file).
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Worker threads for per-basis computations (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bases of M(A) with their normalized volumes.
    Bases,
    /// The vertex w^(τ) and the cone C_τ (needs `w`, `tau`).
    Vertex,
    /// Tropical Plücker vector of the homogenized affine space (needs `w`).
    Plucker,
    /// Whether `point` lies on the tropical affine space (needs `w`, `point`).
    Membership,
    /// Maximal cells of the regular subdivision (needs `omega`).
    Subdivision,
    /// A regular triangulation refining the subdivision of `omega` (default 0).
    Triangulate,
    /// All tropical critical points (needs `w`; uses `triangulation` if given).
    CriticalPoints,
    /// Closed form for monomial curves (needs `w`).
    Curve,
    /// Spread constant for a uniform matroid and the face `face` (default O(w)).
    Constant,
    /// Tropical iterative proportional scaling (needs `w`; optional `tips`).
    Tips,
}

/// Exit categories of the binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Failure = 1,
    Parse = 2,
    InvalidData = 3,
    Incomplete = 4,
}

enum Failure {
    Problem(ProblemError),
    Library(Error),
    Incomplete(String),
    Io(std::io::Error),
}

impl From<ProblemError> for Failure {
    fn from(e: ProblemError) -> Failure {
        Failure::Problem(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Library(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::Io(e.into())
    }
}

/// Run a parsed command line, reading stdin only when no `--input` is given.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let mut buf = Vec::new();
    let result = read_problem(cli, stdin).map_err(Failure::from).and_then(|p| match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(cli, &p, &mut buf)),
            Err(e) => Err(Failure::Io(std::io::Error::other(e))),
        },
        None => execute(cli, &p, &mut buf),
    });
    let result = result.and_then(|()| Ok(out.write_all(&buf)?)).or_else(|f| {
        out.write_all(&buf)?;
        Err(f)
    });
    match result {
        Ok(()) => Exit::Ok,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Problem(ProblemError::Io { path, source }) => {
                    (Exit::Failure, format!("cannot read {path}: {source}"))
                }
                Failure::Problem(e) => (Exit::Parse, e.to_string()),
                Failure::Library(e) => (Exit::InvalidData, e.to_string()),
                Failure::Incomplete(d) => (Exit::Incomplete, d),
                Failure::Io(e) => (Exit::Failure, e.to_string()),
            };
            let _ = writeln!(err, "error: {}", msg.trim_end());
            code
        }
    }
}

fn read_problem(cli: &Cli, stdin: &mut dyn Read) -> Result<ProblemFile, ProblemError> {
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|source| ProblemError::Io { path: path.display().to_string(), source })?,
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|source| ProblemError::Io { path: "stdin".into(), source })?;
            s
        }
    };
    ProblemFile::parse(&text)
}

fn data(p: &ProblemFile) -> Result<TropicalData, Failure> {
    Ok(TropicalData::new(TropVector(ProblemFile::require("w", &p.w)?.clone()))?)
}

fn emit<T: Serialize>(cli: &Cli, out: &mut dyn Write, value: &T, text: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), Failure> {
    if cli.json {
        serde_json::to_writer_pretty(&mut *out, value)?;
        writeln!(out)?;
    } else {
        text(out)?;
    }
    Ok(())
}

fn matrix_json(m: &IntMatrix) -> Vec<Vec<serde_json::Value>> {
    m.to_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x: &BigInt| match x.to_i64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(x.to_string()),
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct BasisEntry {
    tau: Subset,
    volume: u64,
}

#[derive(Serialize)]
struct BasesOutput {
    rank: usize,
    ground_size: usize,
    volume: u64,
    bases: Vec<BasisEntry>,
    non_bases: Vec<Subset>,
}

#[derive(Serialize)]
struct PlueckerEntry {
    gamma: Subset,
    value: Rat,
}

#[derive(Serialize)]
struct MembershipOutput {
    point: TropVector,
    contains: bool,
}

#[derive(Serialize)]
struct TriangulationOutput {
    simplices: Vec<BasisEntry>,
    volume: u64,
    refines: bool,
    triangulation: Triangulation,
}

#[derive(Serialize)]
struct ConstantOutput {
    face: Subset,
    value: Option<Rat>,
    condition_holds: Option<bool>,
    constant: crate::critical::UniformConstant,
}

#[derive(Serialize)]
struct TipsOutput {
    scaling_matrix: Vec<Vec<serde_json::Value>>,
    alpha: String,
    report: TipsReport,
}

fn print_points(out: &mut dyn Write, set: &CriticalPointSet) -> std::io::Result<()> {
    writeln!(out, "{:<40} {:>12}  witnesses", "critical point", "multiplicity")?;
    for p in &set.points {
        let w: Vec<String> = p.witnesses.iter().map(ToString::to_string).collect();
        writeln!(out, "{:<40} {:>12}  {}", p.q.to_string(), p.multiplicity, w.join(" "))?;
    }
    writeln!(out, "total multiplicity {} (method: {:?})", set.total_multiplicity, set.method)
}

fn execute(cli: &Cli, p: &ProblemFile, out: &mut Vec<u8>) -> Result<(), Failure> {
    let model = ModelMatrix::new(p.matrix())?;
    let n = model.n();
    match cli.command {
        Command::Bases => {
            let bases = model
                .matroid()
                .bases()
                .iter()
                .map(|&tau| Ok(BasisEntry { tau, volume: model.simplex_volume(tau)? }))
                .collect::<Result<Vec<_>, Error>>()?;
            let o = BasesOutput {
                rank: model.k(),
                ground_size: n,
                volume: model.volume()?,
                bases,
                non_bases: model.matroid().non_bases(),
            };
            emit(cli, out, &o, |out| {
                writeln!(out, "{} bases of a rank {} matroid on {} elements", o.bases.len(), o.rank, n)?;
                for b in &o.bases {
                    writeln!(out, "  {:<12} vol {}", b.tau.to_string(), b.volume)?;
                }
                let nb: Vec<String> = o.non_bases.iter().map(ToString::to_string).collect();
                writeln!(out, "non-bases: {}", if nb.is_empty() { "none".into() } else { nb.join(" ") })?;
                writeln!(out, "vol(Q_A) = {}", o.volume)
            })
        }
        Command::Vertex => {
            let w = data(p)?;
            let tau = *ProblemFile::require("tau", &p.tau)?;
            let cone = vertex(&model, &w, tau)?;
            emit(cli, out, &cone, |out| {
                writeln!(out, "w^({}) = {}", cone.tau, cone.apex)?;
                writeln!(out, "free directions: e_i for i in {}", cone.free)
            })
        }
        Command::Plucker => {
            let w = data(p)?;
            let pi = pluecker(&model, &w)?;
            let entries: Vec<PlueckerEntry> =
                pi.values.iter().map(|(g, v)| PlueckerEntry { gamma: *g, value: v.clone() }).collect();
            emit(cli, out, &entries, |out| {
                for e in &entries {
                    writeln!(out, "  pi_{:<12} = {}", e.gamma.to_string(), e.value)?;
                }
                Ok(())
            })
        }
        Command::Membership => {
            let w = data(p)?;
            let point = TropVector(ProblemFile::require("point", &p.point)?.clone());
            let contains = contains_point(&model, &w, &point)?;
            let o = MembershipOutput { point, contains };
            emit(cli, out, &o, |out| {
                writeln!(out, "{} {} on the tropical affine space", o.point, if o.contains { "lies" } else { "does not lie" })
            })
        }
        Command::Subdivision => {
            let omega = ProblemFile::require("omega", &p.omega)?;
            let cells = maximal_cells(&model, omega);
            emit(cli, out, &cells, |out| {
                for c in &cells.cells {
                    let psi: Vec<String> = c.functional.iter().map(ToString::to_string).collect();
                    writeln!(out, "  {:<16} psi = ({})", c.members.to_string(), psi.join(", "))?;
                }
                Ok(())
            })
        }
        Command::Triangulate => {
            let omega = p.omega.clone().unwrap_or_else(|| vec![Rat::zero(); n]);
            let tri = regular_triangulation(&model, &omega);
            let simplices = tri
                .simplices
                .iter()
                .map(|&tau| Ok(BasisEntry { tau, volume: model.simplex_volume(tau)? }))
                .collect::<Result<Vec<_>, Error>>()?;
            let o = TriangulationOutput {
                volume: tri.volume(&model)?,
                refines: refines(&model, &tri, &omega)?,
                simplices,
                triangulation: tri,
            };
            emit(cli, out, &o, |out| {
                for s in &o.simplices {
                    writeln!(out, "  {:<12} vol {}", s.tau.to_string(), s.volume)?;
                }
                writeln!(out, "total volume {}, refines the subdivision: {}", o.volume, o.refines)
            })
        }
        Command::CriticalPoints => {
            let w = data(p)?;
            let outcome = match &p.triangulation {
                Some(simplices) => {
                    let tri = Triangulation::from_simplices(simplices.clone());
                    match solve_by_triangulation(&model, &w, &tri)? {
                        Ok(set) => Outcome::Complete(set),
                        Err(failed) => Outcome::Incomplete(crate::critical::Diagnostic {
                            attempts: vec![crate::critical::Attempt { triangulation: tri, failed }],
                        }),
                    }
                }
                None => solve(&model, &w, &SolveOptions { seed: cli.seed, ..SolveOptions::default() })?,
            };
            match &outcome {
                Outcome::Complete(set) => emit(cli, out, &outcome, |out| print_points(out, set)),
                Outcome::Incomplete(diag) => {
                    if cli.json {
                        emit(cli, out, &outcome, |_| Ok(()))?;
                    }
                    Err(Failure::Incomplete(diag.to_string()))
                }
            }
        }
        Command::Curve => {
            let w = data(p)?;
            let set = solve_curve(&model, &w)?;
            emit(cli, out, &set, |out| print_points(out, &set))
        }
        Command::Constant => {
            let w = p.w.as_ref().map(|v| TropicalData::new(TropVector(v.clone()))).transpose()?;
            let face = match (p.face, &w) {
                (Some(f), _) => f,
                (None, Some(w)) => w.zero_set(),
                (None, None) => {
                    return Err(ProblemError::Field { field: "face", message: "give `face` or `w`".into() }.into())
                }
            };
            let constant = uniform_constant(&model, face)?;
            let o = ConstantOutput {
                face,
                value: constant.value.clone(),
                condition_holds: w.as_ref().map(|w| constant.condition_holds(w, model.k())),
                constant,
            };
            emit(cli, out, &o, |out| {
                match &o.value {
                    Some(c) => writeln!(out, "c(A, {}) = {}", o.face, c)?,
                    None => writeln!(out, "c(A, {}) is unconstrained", o.face)?,
                }
                if let Some(h) = o.condition_holds {
                    writeln!(out, "spread condition on w holds: {h}")?;
                }
                Ok(())
            })
        }
        Command::Tips => {
            let w = data(p)?;
            let settings = p.tips.clone().unwrap_or_default();
            let scaling = match &settings.a {
                Some(rows) => ScalingModel::for_model(&model, IntMatrix::from_rows(rows)?)?,
                None => reparametrize(&model)?,
            };
            let q0 = settings.q0.clone().map(TropVector).unwrap_or_else(|| TropVector::zeros(n));
            let options = TipsOptions {
                max_iter: cli.max_iter.or(settings.max_iter).unwrap_or(TipsOptions::default().max_iter),
                tol: settings.tol.clone(),
                extrapolate: true,
            };
            let reference = solve(&model, &w, &SolveOptions { seed: cli.seed, ..SolveOptions::default() })?;
            let report = tips_run(&scaling, &w, q0, &options, reference.as_complete())?;
            let o = TipsOutput { scaling_matrix: matrix_json(&scaling.a), alpha: scaling.alpha.to_string(), report };
            emit(cli, out, &o, |out| {
                let r = &o.report;
                writeln!(out, "scaling matrix (alpha = {}):", o.alpha)?;
                for row in scaling.a.to_rows() {
                    let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                    writeln!(out, "  {}", cells.join(" "))?;
                }
                let shown = r.trajectory.len().min(12);
                for (t, q) in r.trajectory.iter().take(shown).enumerate() {
                    writeln!(out, "  q^{t} = {q}")?;
                }
                if r.trajectory.len() > shown {
                    writeln!(out, "  ... ({} iterates in total)", r.trajectory.len())?;
                }
                writeln!(out, "status: {:?} after {} steps", r.status, r.steps)?;
                if let Some(rho) = &r.ratio {
                    writeln!(out, "geometric ratio {rho}")?;
                }
                writeln!(out, "endpoint {}", r.endpoint)?;
                writeln!(out, "tropical critical point: {} (checked by {:?})", r.is_critical, r.criticality_source)
            })
        }
    }
}
