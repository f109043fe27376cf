//! `confjord`: batch driver for the verification suites.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use confjord::exec;
use confjord::fermion::{
    check_action_identities, check_component_paths, check_hat_axioms, oracle_compare_with, oracle_suite, FermionError,
    HatAlgebra, QuadGen,
};
use confjord::kernel::{
    abelian_current, affinize, check_delta_identity, check_mode_table, check_on_generators, check_translation,
    check_weight_grading, make_witt, sl2_current, sl2_mutant, witt_mutant, AlgebraDescription, ConformalAlgebra,
    DeltaCase, KernelError, TableAlgebra,
};
use confjord::matrix::{
    check_jordan, check_lie, check_matrix_grading, closure_check, generation_check, ideal_probe, identify_model,
    matrix_over_v, parse_element, yplus_matrix_with, Family, FamilyKind, Kind, MatrixAlgebra, MatrixError,
};
use confjord::sampler::RationalSampler;
use confjord::{Status, VerificationReport};

const ELEMENT_HELP: &str = "\
Matrix elements are written as terms `[coef*]NAME:m1,m2` joined by + or -.
NAME is Eij (the matrix unit, indices from 1), sym-Eij / asym-Eij for u + uᵀ / u - uᵀ,
or dag-Eij / adag-Eij for u + u† / u - u† with the symplectic involution.
Examples: E11:0,1   2*E12:1,0-1/2*E21:0,0   sym-E12:0,2

Built-in algebras: witt, witt-mutant, sl2, sl2-mutant, abelian, matrix, matrix-mutant
(the matrix algebra over its generating space), matrix-units (over bidegree units),
matrix-units-mutant, fermion. Use --file to load a TOML description instead.

CONFJORD_THREADS caps the worker pool. Exit status: 0 pass, 1 verification failure,
2 usage error.";

#[derive(Parser)]
#[command(name = "confjord", version, about = "Exact verification of conformal algebras", after_help = ELEMENT_HELP)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Run every check on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Re-run the failures recorded in a report or failure file.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct FamilyArgs {
    #[arg(long)]
    family: Kind,
    #[arg(long)]
    k: usize,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    label: u32,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family, CliError> {
        Ok(Family::new(FamilyKind::new(self.family, self.label, self.k)?))
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct AlgebraArgs {
    #[arg(long, default_value = "witt")]
    algebra: String,
    /// TOML description of a generated algebra.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Matrix size for the matrix algebras.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Largest generator degree (matrix) or mode index (fermion).
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// Rank of the fermionic space.
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Dimension of the abelian current algebra.
    #[arg(long, default_value_t = 1)]
    dim: usize,
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Skew-symmetry, Jacobi and translation checks on a named algebra.
    Axioms {
        #[command(flatten)]
        #[serde(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// One product Y⁺(a, z) b in the matrix algebra.
    Product {
        #[arg(long)]
        family: Option<Kind>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "L")]
        #[serde(rename = "L")]
        label: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        mutant: bool,
    },
    /// Closure of a family under ∂ and every product component.
    Closure {
        #[command(flatten)]
        #[serde(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 6)]
        w_max: u32,
    },
    /// Ideal saturation from seeded random members.
    IdealProbe {
        #[command(flatten)]
        #[serde(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        cap: u32,
    },
    /// Commutativity and the Jordan identity at the minimal weight (even L).
    Jordan {
        #[command(flatten)]
        #[serde(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 50)]
        random: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Anticommutativity and the Jacobi identity at the minimal weight (odd L).
    Lie {
        #[command(flatten)]
        #[serde(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 50)]
        random: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Identify the minimal-weight algebra with a matrix model.
    Identify {
        #[command(flatten)]
        #[serde(flatten)]
        family: FamilyArgs,
    },
    /// Generation of a family from its minimal-weight space.
    Generate {
        #[command(flatten)]
        #[serde(flatten)]
        family: FamilyArgs,
        /// Defaults to L + 3.
        #[arg(long)]
        w_max: Option<u32>,
    },
    /// Fermionic identities, component paths and the matrix comparison.
    Oracle {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        max_mode: u32,
        #[arg(long, default_value_t = 4)]
        max_component: i64,
        /// One generator `a,m,b,n` for ς⁺_a(-m-1/2)ς⁻_b(-n-1/2); needs --v.
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        mutant: bool,
    },
    /// Two-variable delta-function identities against the mode brackets.
    Delta {
        /// sl2, affine-slN or virasoro.
        #[arg(long, default_value = "sl2")]
        case: String,
        #[arg(long, default_value_t = 4)]
        window: i64,
    },
    /// Weight shifts and the finite-growth certificate.
    Grading {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
        /// Check a named algebra instead of the matrix algebra.
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Mode brackets of the affinization.
    Affinize {
        #[arg(long, default_value = "witt")]
        algebra: String,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        window: i64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::SizeMismatch { .. }
            | MatrixError::OddDagger(_)
            | MatrixError::InvalidFamily(_)
            | MatrixError::Parse(_)
            | MatrixError::ZeroSeed
            | MatrixError::NotHomogeneous => CliError::Usage(e.to_string()),
            _ => CliError::Verification(e.to_string()),
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::AffinizationViolation(_) => CliError::Verification(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FermionError> for CliError {
    fn from(e: FermionError) -> Self {
        match e {
            FermionError::IndexOutOfRange { .. } | FermionError::Malformed(_) => CliError::Usage(e.to_string()),
            FermionError::Matrix(m) => m.into(),
            _ => CliError::Verification(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if cli.sequential {
        exec::set_parallel(false);
    }
    let outcome = match (&cli.replay, &cli.command) {
        (Some(path), _) => replay(path),
        (None, Some(command)) => execute(command).map(|r| vec![r]),
        (None, None) => Err(CliError::Usage("a subcommand or --replay is required".into())),
    };
    match outcome {
        Ok(reports) => {
            let text = render(&reports, cli.format);
            if let Err(e) = emit(&text, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if reports.iter().all(|r| r.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(m)) => unreachable!("verification errors become reports: {m}"),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CONFJORD_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("CONFJORD_THREADS={v:?} is not a count"))?;
    if n == 0 {
        return Err("CONFJORD_THREADS must be at least 1".into());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    if n == 1 {
        exec::set_parallel(false);
    }
    Ok(())
}

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs one command, turning verification-level errors into error reports
/// and stamping every failure with the invocation that reproduces it.
fn execute(command: &Command) -> Result<VerificationReport, CliError> {
    let start = Instant::now();
    let invocation = serde_json::to_value(command).expect("commands serialize");
    let mut rep = match run(command) {
        Ok(r) => r,
        Err(CliError::Verification(m)) => {
            let mut r = VerificationReport::new(command_name(command));
            r.set_error(m);
            r
        }
        Err(e) => return Err(e),
    };
    for f in &mut rep.failures {
        if let Value::Object(map) = &mut f.inputs {
            map.insert("invocation".into(), invocation.clone());
        } else {
            f.inputs = json!({ "inputs": f.inputs.take(), "invocation": invocation.clone() });
        }
    }
    rep.param("invocation", &invocation);
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(rep)
}

fn command_name(command: &Command) -> String {
    serde_json::to_value(command)
        .ok()
        .and_then(|v| v.get("command").and_then(|c| c.as_str()).map(str::to_string))
        .unwrap_or_default()
}

enum Builtin {
    Table(TableAlgebra),
    MatrixV(confjord::kernel::GeneratedAlgebra<confjord::matrix::MatrixGeneratorMap>),
    MatrixUnits(MatrixAlgebra),
    Fermion(HatAlgebra),
}

fn load_table(path: &Path) -> Result<TableAlgebra, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(AlgebraDescription::parse(&text)?.build()?)
}

fn builtin(
    name: &str,
    file: Option<&Path>,
    k: usize,
    degree: u32,
    rank: usize,
    dim: usize,
) -> Result<Builtin, CliError> {
    if let Some(p) = file {
        return Ok(Builtin::Table(load_table(p)?));
    }
    if k == 0 || rank == 0 || dim == 0 {
        return Err(CliError::Usage("sizes must be at least 1".into()));
    }
    Ok(match name {
        "witt" => Builtin::Table(make_witt()),
        "witt-mutant" => Builtin::Table(witt_mutant()),
        "sl2" => Builtin::Table(sl2_current()),
        "sl2-mutant" => Builtin::Table(sl2_mutant()),
        "abelian" => Builtin::Table(abelian_current(dim)),
        "matrix" => Builtin::MatrixV(matrix_over_v(k, degree, false)),
        "matrix-mutant" => Builtin::MatrixV(matrix_over_v(k, degree, true)),
        "matrix-units" => Builtin::MatrixUnits(MatrixAlgebra::new(k, degree)),
        "matrix-units-mutant" => Builtin::MatrixUnits(MatrixAlgebra::mutant(k, degree)),
        "fermion" => Builtin::Fermion(HatAlgebra::new(rank, degree)),
        other => return Err(CliError::Usage(format!("unknown algebra {other:?}"))),
    })
}

fn axioms_on<A: ConformalAlgebra>(alg: &A, depth: u32) -> VerificationReport {
    let mut rep = VerificationReport::new("axioms").with_param("algebra", alg.label()).with_param("depth", depth);
    rep.absorb(check_on_generators(alg, depth));
    rep.absorb(check_translation(alg, depth));
    rep.finalize()
}

fn parse_quad(text: &str) -> Result<QuadGen, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("generator {text:?} must be a,m,b,n"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let n: Vec<u64> = parts.iter().map(|p| p.parse::<u64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    Ok(QuadGen::new(n[0] as usize, n[1] as u32, n[2] as usize, n[3] as u32))
}

fn run(command: &Command) -> Result<VerificationReport, CliError> {
    Ok(match command {
        Command::Axioms { algebra: a, depth } => {
            match builtin(&a.algebra, a.file.as_deref(), a.k, a.degree, a.rank, a.dim)? {
                Builtin::Table(t) => axioms_on(&t, *depth),
                Builtin::MatrixV(m) => axioms_on(&m, *depth),
                Builtin::MatrixUnits(m) => axioms_on(&m, *depth),
                Builtin::Fermion(h) => check_hat_axioms(&h, *depth),
            }
        }
        Command::Product { family, k, label, a, b, mutant } => {
            let kind = match (family, label) {
                (Some(f), Some(l)) => {
                    let k = k.ok_or_else(|| CliError::Usage("--family needs --k".into()))?;
                    Some(Family::new(FamilyKind::new(*f, *l, k)?))
                }
                (None, None) => None,
                _ => return Err(CliError::Usage("--family and --L go together".into())),
            };
            let size = kind
                .as_ref()
                .map(|f| f.kind().k)
                .or(*k)
                .ok_or_else(|| CliError::Usage("give --k or a family".into()))?;
            let ea = parse_element(size, a)?;
            let eb = parse_element(size, b)?;
            let series = yplus_matrix_with(&ea, &eb, *mutant)?;
            let mut rep =
                VerificationReport::new("product").with_param("a", ea.to_string()).with_param("b", eb.to_string());
            if let Some(f) = &kind {
                rep.param("family", f.kind());
                for (name, e) in [("a", &ea), ("b", &eb)] {
                    rep.check(f.contains(e), || {
                        confjord::Failure::new(
                            format!("product/membership/{name}"),
                            json!({ name: e.to_string() }),
                            "member",
                            "not a member",
                        )
                    });
                }
                for (exp, c) in series.iter() {
                    rep.check(f.contains(c), || {
                        confjord::Failure::new(
                            format!("product/closure/z^{exp}"),
                            json!({ "exponent": exp }),
                            "member",
                            c.to_string(),
                        )
                    });
                }
            }
            rep.detail("series", series.to_string());
            rep.detail(
                "components",
                series.iter().map(|(e, c)| json!({ "exponent": e, "coefficient": c.to_string() })).collect::<Vec<_>>(),
            );
            rep.finalize()
        }
        Command::Closure { family, w_max } => closure_check(&family.family()?, *w_max),
        Command::IdealProbe { family, count, seed, cap } => {
            let f = family.family()?;
            let mut rng = RationalSampler::new(*seed);
            let mut rep = VerificationReport::new("ideal-probe")
                .with_param("family", f.kind())
                .with_param("count", count)
                .with_param("seed", seed)
                .with_param("cap", cap);
            let mut ranks = Vec::new();
            for t in 0..*count {
                let s = f.random_member(&mut rng, *cap);
                let mut r = ideal_probe(&f, &s, *cap)?;
                ranks.push(r.details.get("saturation_rank").cloned().unwrap_or(Value::Null));
                for fail in &mut r.failures {
                    fail.check_id = format!("probe-{t:02}/{}", fail.check_id);
                }
                r.details.clear();
                rep.absorb(r);
            }
            rep.detail("saturation_ranks", ranks);
            rep.detail("family_dimension", f.dim_upto(*cap));
            rep.finalize()
        }
        Command::Jordan { family, random, seed } => check_jordan(&family.family()?, *random, *seed)?,
        Command::Lie { family, random, seed } => check_lie(&family.family()?, *random, *seed)?,
        Command::Identify { family } => {
            let f = family.family()?;
            let mut rep = VerificationReport::new("identify").with_param("family", f.kind());
            match identify_model(&f) {
                Ok(id) => {
                    rep.count(1);
                    let v = serde_json::to_value(&id).expect("identification serializes");
                    rep.detail("label", id.label.to_string());
                    rep.detail("lambda", &v["lambda"]);
                    rep.detail("dimension", id.dimension);
                }
                Err(MatrixError::NoModel(m)) => {
                    rep.fail(confjord::Failure::new("identify/model", json!({}), "a model", m))
                }
                Err(e) => return Err(e.into()),
            }
            rep.finalize()
        }
        Command::Generate { family, w_max } => {
            let f = family.family()?;
            let w = w_max.unwrap_or(family.label + 3);
            generation_check(&f, w)?
        }
        Command::Oracle { rank, max_mode, max_component, u, v, mutant } => match (u, v) {
            (Some(u), Some(v)) => oracle_compare_with(parse_quad(u)?, parse_quad(v)?, *rank, *mutant)?,
            (None, None) => {
                let mut rep = VerificationReport::new("oracle")
                    .with_param("rank", rank)
                    .with_param("max_mode", max_mode)
                    .with_param("max_component", max_component)
                    .with_param("mutant", mutant);
                let ids = check_action_identities(*rank, *max_mode);
                let paths = check_component_paths(*rank, *max_mode, *max_component);
                let oracle = oracle_suite(*rank, *max_mode, *mutant)?;
                rep.detail("identity_checks", ids.checks_run);
                rep.detail("path_checks", paths.checks_run);
                rep.detail("oracle_checks", oracle.checks_run);
                rep.detail("scalar_histogram", oracle.details.get("scalar_histogram"));
                rep.absorb(ids);
                rep.absorb(paths);
                let mut oracle = oracle;
                oracle.details.clear();
                rep.absorb(oracle);
                rep.finalize()
            }
            _ => return Err(CliError::Usage("--u and --v go together".into())),
        },
        Command::Delta { case, window } => {
            if *window < 1 {
                return Err(CliError::Usage("--window must be at least 1".into()));
            }
            let c: DeltaCase = case.parse()?;
            check_delta_identity(c, *window)?
        }
        Command::Grading { k, max_weight, algebra, file } => {
            if *max_weight < 1 {
                return Err(CliError::Usage("--max-weight must be at least 1".into()));
            }
            match (algebra, file) {
                (None, None) => {
                    if *k == 0 {
                        return Err(CliError::Usage("--k must be at least 1".into()));
                    }
                    check_matrix_grading(*k, *max_weight)
                }
                (name, file) => {
                    let name = name.as_deref().unwrap_or("");
                    match builtin(name, file.as_deref(), *k, max_weight.saturating_sub(1), 1, 1)? {
                        Builtin::Table(t) => check_weight_grading(&t, *max_weight),
                        Builtin::MatrixV(m) => check_weight_grading(&m, *max_weight),
                        Builtin::MatrixUnits(m) => check_weight_grading(&m, *max_weight),
                        Builtin::Fermion(h) => check_weight_grading(&h, *max_weight),
                    }
                }
            }
        }
        Command::Affinize { algebra, file, window, dim, k, degree } => {
            if *window < 1 {
                return Err(CliError::Usage("--window must be at least 1".into()));
            }
            let table = match builtin(algebra, file.as_deref(), *k, *degree, 1, *dim)? {
                Builtin::Table(t) => affinize(&t, *window)?,
                Builtin::MatrixV(m) => affinize(&m, *window)?,
                _ => return Err(CliError::Usage(format!("{algebra} has no affinization here"))),
            };
            let mut rep = check_mode_table(&table);
            rep.param("algebra", algebra);
            rep.detail("brackets", table.entries());
            rep.finalize()
        }
    })
}

/// Re-runs each failure in a report (or a single failure) from its recorded
/// invocation and reports whether the same check fails the same way.
fn replay(path: &Path) -> Result<Vec<VerificationReport>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let failures: Vec<Value> = match value.get("failures") {
        Some(Value::Array(fs)) => fs.clone(),
        _ if value.get("check_id").is_some() => vec![value.clone()],
        _ => return Err(CliError::Usage("no failures to replay".into())),
    };
    let mut out = Vec::new();
    for f in failures {
        let id = f.get("check_id").and_then(Value::as_str).unwrap_or_default().to_string();
        let invocation = f
            .pointer("/inputs/invocation")
            .or_else(|| value.pointer("/parameters/invocation"))
            .ok_or_else(|| CliError::Usage(format!("{id}: no invocation recorded")))?;
        let command: Command = serde_json::from_value(invocation.clone())
            .map_err(|e| CliError::Usage(format!("{id}: invalid invocation: {e}")))?;
        let rerun = execute(&command)?;
        let mut rep = VerificationReport::new("replay").with_param("check_id", &id);
        rep.param("invocation", invocation);
        match rerun.failures.iter().find(|g| g.check_id == id) {
            Some(g) => {
                let same = Some(g.expected.as_str()) == f.get("expected").and_then(Value::as_str)
                    && Some(g.actual.as_str()) == f.get("actual").and_then(Value::as_str);
                rep.detail("reproduced", true);
                rep.detail("identical", same);
                rep.count(1);
                rep.fail(g.clone());
            }
            None => {
                rep.count(1);
                rep.detail("reproduced", false);
            }
        }
        out.push(rep.finalize());
    }
    Ok(out)
}

fn render(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => {
            let v = if reports.len() == 1 { serde_json::to_value(&reports[0]) } else { serde_json::to_value(reports) };
            format!("{}\n", serde_json::to_string_pretty(&v.expect("reports serialize")).expect("json"))
        }
        Format::Text => reports.iter().map(render_text).collect(),
    }
}

fn render_text(r: &VerificationReport) -> String {
    let status = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    };
    let mut s = format!("{}: {status} ({} checks, {} ms)\n", r.command, r.checks_run, r.elapsed_ms);
    for (k, v) in &r.parameters {
        if k != "invocation" {
            s += &format!("  {k} = {}\n", compact(v));
        }
    }
    if let Some(e) = &r.error {
        s += &format!("  error: {e}\n");
    }
    for (k, v) in &r.details {
        if k == "components" || k == "brackets" {
            s += &format!("  {k}:\n");
            for item in v.as_array().into_iter().flatten() {
                s += &format!("    {}\n", compact_item(item));
            }
        } else {
            s += &format!("  {k}: {}\n", compact(v));
        }
    }
    for f in r.failures.iter().take(20) {
        s += &format!("  failed {}: expected {}, got {}\n", f.check_id, f.expected, f.actual);
    }
    if r.failures.len() > 20 {
        s += &format!("  ... {} more failures (use --format json)\n", r.failures.len() - 20);
    }
    s
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn compact_item(v: &Value) -> String {
    if let (Some(e), Some(c)) = (v.get("exponent"), v.get("coefficient")) {
        return format!("z^{}: {}", e, compact(c));
    }
    if let (Some(u), Some(m), Some(w), Some(n), Some(b)) =
        (v.get("u"), v.get("m"), v.get("v"), v.get("n"), v.get("bracket"))
    {
        return format!("[{}({}), {}({})] = {}", compact(u), m, compact(w), n, compact(b));
    }
    compact(v)
}
