//! `scheme-forge`: construct, verify and analyze cyclotomic translation schemes.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use scheme_forge::constructions::{
    affine_orbit_search, construct, song_reproduce, ConstructionKind, FissionSpec,
};
use scheme_forge::cyclotomy::CyclotomicSystem;
use scheme_forge::finite_field::{FieldSpec, DEFAULT_FIELD_CAP};
use scheme_forge::gauss::{index2_discrepancy, Index2Params};
use scheme_forge::json::round_sig;
use scheme_forge::partition::IndexPartition;
use scheme_forge::scheme::{check_fusion, eigenmatrices, is_translation_scheme, verify_scheme};
use scheme_forge::search::{exhaustive_nonexistence_with_progress, SearchConfig, DEFAULT_BUDGET};
use scheme_forge::Error;

const SCHEMA: &str = "scheme-forge/1";
const THREADS_VAR: &str = "SCHEME_FORGE_THREADS";

#[derive(Parser)]
#[command(
    name = "scheme-forge",
    version,
    about = "Cyclotomic translation association schemes"
)]
struct Cli {
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Numerical tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the fission constructions and verify it.
    Construct(ConstructArgs),
    /// Decide whether a partition of Z_N gives a translation scheme.
    Verify(SchemeArgs),
    /// Eigenmatrices and dual partition of a translation scheme.
    Eigen(SchemeArgs),
    /// Test a fusion of a translation scheme.
    Fuse(FuseArgs),
    /// Compare the index-2 Gauss sum closed forms with direct summation.
    GaussVerify(GaussArgs),
    /// Exhaustive search for nonsymmetric primitive schemes over F_{p^2}.
    SearchNonexistence(SearchArgs),
    /// Reproduce the four-class scheme over F_{37^3}.
    SongReproduce,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    kind: ConstructionKind,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    p1: Option<u64>,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Comma-separated indices of I0 for the conference construction.
    #[arg(long)]
    i0: Option<String>,
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    f: u32,
    #[arg(long)]
    n: usize,
    /// Index sets, parts separated by `|`, indices by `,`.
    #[arg(
        long,
        conflicts_with = "parts_file",
        required_unless_present = "parts_file"
    )]
    parts: Option<String>,
    /// File holding the index sets in the same syntax.
    #[arg(long)]
    parts_file: Option<PathBuf>,
    /// Selects the seed-th primitive polynomial.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_FIELD_CAP)]
    field_cap: u64,
    /// If the sets do not verify, use the first affine image u·I + v that does.
    #[arg(long)]
    affine_orbit: bool,
}

#[derive(Args)]
struct FuseArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Column blocks of the fusion, e.g. "1,2|3,4"; the block {0} is implied.
    #[arg(long)]
    lambda: String,
}

#[derive(Args)]
struct GaussArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    p1: u64,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, default_value_t = DEFAULT_FIELD_CAP)]
    field_cap: u64,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 4)]
    max_classes: usize,
    /// Keep symmetric schemes.
    #[arg(long)]
    allow_symmetric: bool,
    /// Keep symmetric and imprimitive schemes and check each with the brute-force oracle.
    #[arg(long)]
    sanity: bool,
    /// Lift the candidate budget.
    #[arg(long)]
    long_run: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

/// Command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FieldTooLarge { .. }
            | Error::TooLargeForOracle { .. }
            | Error::BudgetExceeded { .. } => 3,
            Error::NotAScheme
            | Error::NoSolution
            | Error::OrientationAmbiguous
            | Error::NoOrbitMemberVerifies => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// A JSON document and whether it confirms what the command tested.
struct Outcome {
    body: Value,
    confirmed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(f) = configure_threads() {
        return report_failure(&cli, f);
    }
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return report_failure(&cli, usage("tolerance must be positive"));
    }
    match run(&cli) {
        Ok(outcome) => {
            let mut doc = Map::new();
            doc.insert("schema".into(), SCHEMA.into());
            doc.insert("command".into(), command_name(&cli.command).into());
            doc.insert("confirmed".into(), outcome.confirmed.into());
            doc.insert("result".into(), round_floats(outcome.body));
            if let Err(f) = emit(&cli, &Value::Object(doc)) {
                return report_failure(&cli, f);
            }
            ExitCode::from(if outcome.confirmed { 0 } else { 1 })
        }
        Err(f) => report_failure(&cli, f),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("{THREADS_VAR} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

fn report_failure(cli: &Cli, f: Failure) -> ExitCode {
    eprintln!("error: {}", f.message);
    let doc = json!({
        "schema": SCHEMA,
        "command": command_name(&cli.command),
        "error": f.message,
        "exit_code": f.code,
    });
    let _ = emit(cli, &doc);
    ExitCode::from(f.code)
}

fn emit(cli: &Cli, doc: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(doc).expect("JSON values serialize") + "\n";
    match &cli.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| usage(e.to_string())),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Construct(_) => "construct",
        Command::Verify(_) => "verify",
        Command::Eigen(_) => "eigen",
        Command::Fuse(_) => "fuse",
        Command::GaussVerify(_) => "gauss-verify",
        Command::SearchNonexistence(_) => "search-nonexistence",
        Command::SongReproduce => "song-reproduce",
    }
}

/// Every float in the document rounded to 12 significant digits.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect())
        }
        other => other,
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Construct(args) => run_construct(args, cli.tolerance),
        Command::Verify(args) => run_verify(args, cli.tolerance),
        Command::Eigen(args) => run_eigen(args),
        Command::Fuse(args) => run_fuse(args),
        Command::GaussVerify(args) => run_gauss(args),
        Command::SearchNonexistence(args) => run_search(args),
        Command::SongReproduce => {
            let report = song_reproduce()?;
            Ok(Outcome {
                confirmed: report.passed(),
                body: json!({
                    "passed": report.passed(),
                    "golden_match": report.golden_match(),
                    "dual_match": report.dual_match(),
                    "report": to_value(&report),
                }),
            })
        }
    }
}

fn parse_csv(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| usage(format!("bad index {t:?}")))
        })
        .collect()
}

fn run_construct(args: &ConstructArgs, tolerance: f64) -> Result<Outcome, Failure> {
    let needs_primes = args.kind != ConstructionKind::SongExample;
    let (p, p1) = match (args.p, args.p1) {
        (Some(p), Some(p1)) => (p, p1),
        _ if !needs_primes => (0, 0),
        _ => return Err(usage("--p and --p1 are required for this construction")),
    };
    let mut spec = FissionSpec::new(args.kind, p, p1);
    spec.s = args.s;
    spec.m = args.m;
    spec.i0 = args.i0.as_deref().map(parse_csv).transpose()?;
    let built = construct(&spec)?;
    let mut body = json!({
        "spec": to_value(&built.spec),
        "parts": built.partition.parts(),
        "orientation": to_value(&built.orientation),
    });
    let confirmed = match &built.system {
        Some(sys) => {
            let report = verify_scheme(sys, &built.partition)?;
            let validated = report.validate(tolerance);
            body["validated"] = validated.is_ok().into();
            body["report"] = to_value(&report);
            report.is_scheme && validated.is_ok()
        }
        None => true,
    };
    Ok(Outcome { body, confirmed })
}

struct Loaded {
    sys: CyclotomicSystem,
    partition: IndexPartition,
    affine_map: Option<(usize, usize)>,
}

fn load_scheme(args: &SchemeArgs) -> Result<Loaded, Failure> {
    let text = match (&args.parts, &args.parts_file) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) => {
            std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(usage("one of --parts or --parts-file is required")),
    };
    let partition = IndexPartition::parse(args.n, text.trim())?;
    let field = Arc::new(FieldSpec::build_with_cap(
        args.p,
        args.f,
        args.seed,
        args.field_cap,
    )?);
    let sys = CyclotomicSystem::build(field, args.n)?;
    if !args.affine_orbit || is_translation_scheme(&sys, &partition)? {
        return Ok(Loaded {
            sys,
            partition,
            affine_map: None,
        });
    }
    let hit = affine_orbit_search(&partition, |c| is_translation_scheme(&sys, c))?;
    Ok(Loaded {
        sys,
        partition: hit.partition,
        affine_map: Some((hit.u, hit.v)),
    })
}

fn run_verify(args: &SchemeArgs, tolerance: f64) -> Result<Outcome, Failure> {
    let Loaded {
        sys,
        partition,
        affine_map,
    } = load_scheme(args)?;
    let report = verify_scheme(&sys, &partition)?;
    let validated = report.validate(tolerance);
    Ok(Outcome {
        confirmed: report.is_scheme && validated.is_ok(),
        body: json!({
            "is_scheme": report.is_scheme,
            "affine_map": affine_map,
            "validated": validated.is_ok(),
            "report": to_value(&report),
        }),
    })
}

fn run_eigen(args: &SchemeArgs) -> Result<Outcome, Failure> {
    let Loaded {
        sys,
        partition,
        affine_map,
    } = load_scheme(args)?;
    if !is_translation_scheme(&sys, &partition)? {
        return Err(Error::NotAScheme.into());
    }
    let eig = eigenmatrices(&sys, &partition)?;
    Ok(Outcome {
        confirmed: true,
        body: json!({
            "affine_map": affine_map,
            "parts": partition.parts(),
            "p_exact": to_value(&eig.p_exact),
            "p_complex": to_value(&eig.p_complex),
            "q_complex": to_value(&eig.q_complex),
            "dual_parts": eig.dual.parts(),
        }),
    })
}

fn run_fuse(args: &FuseArgs) -> Result<Outcome, Failure> {
    let Loaded {
        sys,
        partition,
        affine_map,
    } = load_scheme(&args.scheme)?;
    if !is_translation_scheme(&sys, &partition)? {
        return Err(Error::NotAScheme.into());
    }
    let mut lambda: Vec<Vec<usize>> = args
        .lambda
        .split('|')
        .map(parse_csv)
        .collect::<Result<_, _>>()?;
    if lambda.first().map(Vec::as_slice) != Some(&[0][..]) {
        lambda.insert(0, vec![0]);
    }
    let eig = eigenmatrices(&sys, &partition)?;
    let fusion = check_fusion(&eig.p_exact, &lambda)?;
    let fused_parts: Vec<Vec<usize>> = lambda[1..]
        .iter()
        .map(|block| {
            let mut part: Vec<usize> = block
                .iter()
                .flat_map(|&c| partition.part(c - 1).to_vec())
                .collect();
            part.sort_unstable();
            part
        })
        .collect();
    Ok(Outcome {
        confirmed: fusion.is_some(),
        body: json!({
            "affine_map": affine_map,
            "lambda": lambda,
            "is_fusion": fusion.is_some(),
            "delta": fusion.as_ref().map(|f| f.delta.clone()),
            "fused_p": fusion.as_ref().map(|f| to_value(&f.fused_p)),
            "fused_parts": fused_parts,
        }),
    })
}

fn run_gauss(args: &GaussArgs) -> Result<Outcome, Failure> {
    let params = Index2Params::new(args.p, args.p1, args.m)?;
    let report = index2_discrepancy(&params, args.s, args.field_cap)?;
    Ok(Outcome {
        confirmed: report.passed(),
        body: json!({
            "passed": report.passed(),
            "report": to_value(&report),
        }),
    })
}

fn run_search(args: &SearchArgs) -> Result<Outcome, Failure> {
    let mut cfg = if args.sanity {
        SearchConfig::sanity(args.p, args.max_classes)
    } else {
        SearchConfig::new(args.p, args.max_classes)
    };
    if args.allow_symmetric {
        cfg.require_nonsymmetric = false;
    }
    cfg.long_run = args.long_run;
    cfg.budget = args.budget;
    let step = std::sync::atomic::AtomicUsize::new(0);
    let progress = |done: usize, total: usize| {
        let pct = done * 20 / total.max(1);
        if step.fetch_max(pct, std::sync::atomic::Ordering::Relaxed) < pct {
            eprintln!("progress: {done}/{total} chunks ({}%)", pct * 5);
        }
    };
    let out = exhaustive_nonexistence_with_progress(&cfg, &progress)?;
    let oracle_ok = out.found.iter().all(|s| s.oracle_verified != Some(false));
    let confirmed = if args.sanity || args.allow_symmetric {
        oracle_ok
    } else {
        out.found.is_empty()
    };
    let mut body = to_value(&out);
    body["config"] = to_value(&cfg);
    Ok(Outcome { body, confirmed })
}
