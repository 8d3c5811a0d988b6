//! Command-line front end. Every subcommand prints one JSON document tagged with
//! [`SCHEMA`]; exit status 0 means pass, 1 a falsification (with a witness file), 2 a
//! usage or domain error.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::convexity::{test_convexity_at_ca, verify_witness, ConvexityConfig, ConvexityWitness, UnitaryMode};
use crate::error::{NcError, Result};
use crate::evaluation::{check_nc_function_axioms, AxiomConfig, NcFunction};
use crate::expr_parser::parse_polynomial;
use crate::free_algebra::{NcPowerSeries, Signature, VarClass};
use crate::linalg::{self, CMat};
use crate::matrix_domain::{derive_seed, matrix_to_json, random_tuple, rng_from_seed, HermTuple, TupleJson};
use crate::one_var::{
    convexity_defect, convexity_test_1var, g_transform, kraus_eval, loewner_matrix, loewner_monotone_test,
    Convexity1Config, DiscreteMeasure, KrausRepresentation, MonotoneConfig, OneVarReport, OneVarWitness, ScalarFn,
    PSD_TOL, WITNESS_TOL,
};
use crate::presets::{builtin_corpus, load_corpus, trace_evaluator, KrausLift, Preset};
use crate::slice_cert::{certify_degree_two, CertifyConfig, Verdict};

pub const SCHEMA: &str = "ncconvex/1";
const DEFAULT_WITNESS_FILE: &str = "ncconvex-witness.json";
/// Stream for the random `A` drawn when no `--a-tuple` is given.
const A_STREAM: u64 = 3_000_000;
/// Tuple norm of that random `A`.
const RANDOM_A_NORM: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(
    name = "ncconvex",
    version,
    about = "Matrix convexity and degree analysis for nc functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a function at a tuple.
    Eval(EvalArgs),
    /// Sampled matrix convexity in x at the nc set generated by A.
    Convexity(ConvexityArgs),
    /// Löwner-matrix test of operator monotonicity of a one-variable function.
    Monotone(MonotoneArgs),
    /// Sampled matrix convexity of a one-variable function.
    Convexity1(Convexity1Args),
    /// Evaluate a Kraus representation and test its convexity.
    Kraus(KrausArgs),
    /// Check that slices of a convex function have no terms above x-degree two.
    Certify(CertifyArgs),
    /// Direct-sum and unitary-equivalence checks.
    Axioms(AxiomsArgs),
}

#[derive(Debug, Args, Clone, Default)]
struct FunctionArgs {
    /// Polynomial expression, e.g. "a1*x1*a1 + x1^2".
    #[arg(long, group = "source")]
    expr: Option<String>,
    /// Built-in function: square, quartic, kraus-halfmass, mixed-ax.
    #[arg(long, group = "source")]
    preset: Option<String>,
    /// JSON power series file.
    #[arg(long, group = "source")]
    series_file: Option<PathBuf>,
    /// Variable counts "g_a,g_x"; inferred from the expression when omitted.
    #[arg(long)]
    signature: Option<String>,
}

#[derive(Debug, Args, Clone)]
struct OutputArgs {
    /// Also write the JSON report to this file.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Where to write a witness on failure.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// A-tuple: a JSON file, `identityN` or `zeroN`.
    #[arg(long)]
    a_tuple: Option<String>,
    /// X-tuple: a JSON file, `identityN` or `zeroN`.
    #[arg(long)]
    x_tuple: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ConvexityArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long)]
    a_tuple: Option<String>,
    /// Size of A when no A-tuple is given.
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated multiplicities m of U*(I_m ⊗ A)U.
    #[arg(long, default_value = "1")]
    multiplicities: String,
    /// Use U = I at every level.
    #[arg(long)]
    identity_unitary: bool,
    #[arg(long, default_value_t = PSD_TOL)]
    tol: f64,
    /// Re-verify a witness file instead of sampling.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct MonotoneArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// Test (f(t) − f(0))/t instead of f.
    #[arg(long)]
    g_transform: bool,
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    interval: String,
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[arg(long, default_value_t = 300)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = PSD_TOL)]
    tol: f64,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct Convexity1Args {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    interval: String,
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = PSD_TOL)]
    tol: f64,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct KrausArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    f0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    f1: f64,
    #[arg(long, default_value_t = 2.0)]
    f2: f64,
    /// Atoms "λ:w,λ:w" of the measure on [−1, 1].
    #[arg(long, default_value = "0.5:1", allow_hyphen_values = true)]
    atoms: String,
    /// Number of sweep points in the interval.
    #[arg(long, default_value_t = 11)]
    points: usize,
    #[arg(long, default_value = "-0.9,0.9", allow_hyphen_values = true)]
    interval: String,
    /// Also evaluate at the first matrix of this tuple (file, `identityN`, `zeroN`).
    #[arg(long)]
    x_tuple: Option<String>,
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(long, default_value_t = 300)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long)]
    a_tuple: Option<String>,
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    degree_cap: usize,
    /// Extraction radius; ε/4 by default.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value = "1,2")]
    multiplicities: String,
    #[arg(long, default_value_t = PSD_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct AxiomsArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// Check every entry of a corpus file; `builtin` selects the bundled corpus.
    #[arg(long, conflicts_with_all = ["expr", "preset", "series_file", "trace_evaluator"])]
    corpus: Option<String>,
    /// Check the trace evaluator, which does not respect direct sums.
    #[arg(long)]
    trace_evaluator: bool,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 4)]
    max_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, doc)) => Outcome {
            code,
            stdout: doc,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(command: Command) -> Result<(i32, String)> {
    match command {
        Command::Eval(args) => eval_cmd(args),
        Command::Convexity(args) => convexity_cmd(args),
        Command::Monotone(args) => monotone_cmd(args),
        Command::Convexity1(args) => convexity1_cmd(args),
        Command::Kraus(args) => kraus_cmd(args),
        Command::Certify(args) => certify_cmd(args),
        Command::Axioms(args) => axioms_cmd(args),
    }
}

struct Source {
    f: Arc<dyn NcFunction>,
    label: Value,
    scalar: Option<ScalarFn>,
}

/// Variable counts used by an expression: the largest `a<k>` and `x<k>`/`z<k>` indices.
fn infer_signature(src: &str) -> Signature {
    let bytes = src.as_bytes();
    let (mut ga, mut gx, mut gz) = (0, 0, 0);
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let boundary = i == 0 || !(bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'_');
        if boundary && matches!(ch, b'a' | b'x' | b'z') {
            let digits = bytes[i + 1..].iter().take_while(|b| b.is_ascii_digit()).count();
            if digits > 0 {
                let k: usize = src[i + 1..i + 1 + digits].parse().unwrap_or(0);
                match ch {
                    b'a' => ga = ga.max(k),
                    b'x' => gx = gx.max(k),
                    _ => gz = gz.max(k),
                }
                i += 1 + digits;
                continue;
            }
        }
        i += 1;
    }
    Signature::new(ga, gx.max(gz))
}

fn load_source(args: &FunctionArgs) -> Result<Source> {
    let explicit = args.signature.as_deref().map(str::parse::<Signature>).transpose()?;
    if let Some(expr) = &args.expr {
        let sig = explicit.unwrap_or_else(|| infer_signature(expr));
        let p = parse_polynomial(expr, sig)?;
        let scalar = (sig.arity_a == 0 && sig.arity_x == 1).then(|| {
            let q = p.clone();
            ScalarFn::entire(move |t| {
                q.evaluate(&[], &[CMat::from_element(1, 1, linalg::c(t, 0.0))], 1)
                    .map_or(f64::NAN, |v| v[(0, 0)].re)
            })
        });
        return Ok(Source {
            f: Arc::new(p),
            label: json!({"expr": expr, "signature": sig}),
            scalar,
        });
    }
    if let Some(name) = &args.preset {
        let preset: Preset = name.parse()?;
        if explicit.is_some_and(|s| s != preset.signature()) {
            return Err(NcError::Usage(format!(
                "preset `{name}` has signature {}",
                preset.signature()
            )));
        }
        return Ok(Source {
            f: preset.nc_function(),
            label: json!({"preset": name, "signature": preset.signature()}),
            scalar: preset.scalar_fn(),
        });
    }
    if let Some(path) = &args.series_file {
        let series: NcPowerSeries = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if explicit.is_some_and(|s| s != series.signature()) {
            return Err(NcError::Usage("series signature differs from --signature".into()));
        }
        let label = json!({"series_file": path.display().to_string(), "signature": series.signature()});
        return Ok(Source {
            f: Arc::new(series),
            label,
            scalar: None,
        });
    }
    Err(NcError::Usage(
        "one of --expr, --preset or --series-file is required".into(),
    ))
}

fn scalar_source(args: &FunctionArgs) -> Result<(ScalarFn, Value)> {
    let source = load_source(args)?;
    let scalar = source
        .scalar
        .ok_or_else(|| NcError::Usage("this command needs a function of one x-variable".into()))?;
    Ok((scalar, source.label))
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bound = |p: &str| -> Result<f64> {
        match p {
            "-inf" => Ok(f64::NEG_INFINITY),
            "inf" | "+inf" => Ok(f64::INFINITY),
            _ => p
                .parse()
                .map_err(|_| NcError::Usage(format!("bad interval bound `{p}`"))),
        }
    };
    match parts.as_slice() {
        [lo, hi] => {
            let (lo, hi) = (bound(lo)?, bound(hi)?);
            if lo < hi {
                Ok((lo, hi))
            } else {
                Err(NcError::Usage(format!("empty interval ({lo}, {hi})")))
            }
        }
        _ => Err(NcError::Usage(format!("interval `{s}` is not of the form a,b"))),
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| NcError::Usage(format!("bad list entry `{p}`")))
        })
        .collect()
}

fn parse_atoms(s: &str) -> Result<DiscreteMeasure> {
    let atoms = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (l, w) = p
                .split_once(':')
                .ok_or_else(|| NcError::Usage(format!("atom `{p}` is not of the form λ:w")))?;
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| NcError::Usage(format!("bad number `{t}`")))
            };
            Ok((num(l)?, num(w)?))
        })
        .collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::new(atoms)
}

/// `identityN`, `zeroN`, or a JSON tuple file.
fn load_tuple(spec: &str, class: VarClass, arity: usize) -> Result<HermTuple> {
    let sized = |prefix: &str| spec.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    if let Some(n) = sized("identity") {
        return Ok(HermTuple::identities(class, arity, n));
    }
    if let Some(n) = sized("zero") {
        return Ok(HermTuple::zeros(class, arity, n));
    }
    let json: TupleJson = serde_json::from_str(&std::fs::read_to_string(spec)?)?;
    let tuple = json.into_tuple(class)?;
    if tuple.arity() != arity {
        return Err(NcError::Shape(format!(
            "tuple in {spec} has {} matrices, expected {arity}",
            tuple.arity()
        )));
    }
    Ok(tuple.with_class(class))
}

/// The `A` point: from a file, empty when there are no `a`-variables, random otherwise.
fn a_point(spec: Option<&str>, sig: Signature, size: usize, seed: u64) -> Result<HermTuple> {
    match spec {
        Some(spec) => load_tuple(spec, VarClass::A, sig.arity_a),
        None if size == 0 => Err(NcError::Usage("size must be positive".into())),
        None if sig.arity_a == 0 => Ok(HermTuple::empty(VarClass::A, size)),
        None => Ok(random_tuple(
            &mut rng_from_seed(derive_seed(seed, A_STREAM)),
            VarClass::A,
            sig.arity_a,
            size,
            RANDOM_A_NORM,
        )),
    }
}

fn document(command: &str, function: Value, report: impl Serialize) -> Result<Value> {
    Ok(json!({
        "schema": SCHEMA,
        "command": command,
        "function": function,
        "report": serde_json::to_value(report)?,
    }))
}

fn emit(doc: &Value, output: &OutputArgs) -> Result<String> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    if let Some(path) = &output.json_out {
        std::fs::write(path, &text)?;
    }
    Ok(text)
}

/// Writes `{schema, command, function, witness}` and returns the path used.
fn write_witness(output: &OutputArgs, command: &str, function: &Value, witness: impl Serialize) -> Result<PathBuf> {
    let path = output
        .witness_out
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_WITNESS_FILE));
    let doc = json!({
        "schema": SCHEMA,
        "command": command,
        "function": function,
        "witness": serde_json::to_value(witness)?,
    });
    std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(path)
}

fn read_witness<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let witness = doc.get("witness").cloned().unwrap_or(doc);
    Ok(serde_json::from_value(witness)?)
}

fn with_witness_path(mut doc: Value, path: Option<PathBuf>) -> Value {
    if let Some(p) = path {
        doc["witness_file"] = json!(p.display().to_string());
    }
    doc
}

fn eval_cmd(args: EvalArgs) -> Result<(i32, String)> {
    let source = load_source(&args.function)?;
    let sig = source.f.signature();
    let x = load_tuple(&args.x_tuple, VarClass::X, sig.arity_x)?;
    let a = match &args.a_tuple {
        Some(spec) => load_tuple(spec, VarClass::A, sig.arity_a)?,
        None if sig.arity_a == 0 => HermTuple::empty(VarClass::A, x.size()),
        None => {
            return Err(NcError::Usage(
                "--a-tuple is required for functions of a-variables".into(),
            ))
        }
    };
    let value = source.f.evaluate_tuples(&a, &x)?;
    let report = json!({
        "n": x.size(),
        "value": matrix_to_json(&value),
        "hermitian_deviation": linalg::hermitian_deviation(&value),
    });
    let doc = document("eval", source.label, report)?;
    Ok((0, emit(&doc, &args.output)?))
}

fn convexity_cmd(args: ConvexityArgs) -> Result<(i32, String)> {
    let source = load_source(&args.function)?;
    if let Some(path) = &args.witness {
        let witness: ConvexityWitness = read_witness(path)?;
        let spectrum = verify_witness(source.f.as_ref(), &witness)?;
        let confirmed = spectrum.first().is_some_and(|&e| e < -WITNESS_TOL);
        let report = json!({"confirmed": confirmed, "defect_spectrum": spectrum});
        let doc = document("convexity-verify", source.label, report)?;
        return Ok((i32::from(confirmed), emit(&doc, &args.output)?));
    }
    let sig = source.f.signature();
    let a = a_point(args.a_tuple.as_deref(), sig, args.size, args.seed)?;
    let config = ConvexityConfig {
        tol: args.tol,
        ..ConvexityConfig::new(args.epsilon, args.trials, args.seed)
    };
    let mode = if args.identity_unitary {
        UnitaryMode::Identity
    } else {
        UnitaryMode::Random
    };
    let report = test_convexity_at_ca(source.f.as_ref(), &a, &parse_list(&args.multiplicities)?, mode, &config)?;
    let path = match (&report.witness, report.pass) {
        (Some(w), false) => Some(write_witness(&args.output, "convexity", &source.label, w)?),
        _ => None,
    };
    let code = i32::from(!report.pass);
    let doc = with_witness_path(document("convexity", source.label, &report)?, path);
    Ok((code, emit(&doc, &args.output)?))
}

fn one_var_result(command: &str, label: Value, report: &OneVarReport, output: &OutputArgs) -> Result<(i32, String)> {
    let path = match (&report.witness, report.pass) {
        (Some(w), false) => Some(write_witness(output, command, &label, w)?),
        _ => None,
    };
    let doc = with_witness_path(document(command, label, report)?, path);
    Ok((i32::from(!report.pass), emit(&doc, output)?))
}

fn verify_result(command: &str, label: Value, defect: Vec<f64>, output: &OutputArgs) -> Result<(i32, String)> {
    let confirmed = defect.first().is_some_and(|&e| e < -WITNESS_TOL);
    let doc = document(command, label, json!({"confirmed": confirmed, "eigenvalues": defect}))?;
    Ok((i32::from(confirmed), emit(&doc, output)?))
}

fn monotone_cmd(args: MonotoneArgs) -> Result<(i32, String)> {
    let (f, mut label) = scalar_source(&args.function)?;
    let f = if args.g_transform { g_transform(&f)? } else { f };
    label["g_transform"] = json!(args.g_transform);
    if let Some(path) = &args.witness {
        let witness: OneVarWitness = read_witness(path)?;
        let points = witness
            .points
            .ok_or_else(|| NcError::Usage("witness file has no points".into()))?;
        let eig = linalg::hermitian_eigenvalues(&loewner_matrix(&f, &points));
        return verify_result("monotone-verify", label, eig, &args.output);
    }
    let config = MonotoneConfig {
        tol: args.tol,
        ..MonotoneConfig::new(parse_interval(&args.interval)?, args.points, args.trials, args.seed)
    };
    let report = loewner_monotone_test(&f, &config)?;
    one_var_result("monotone", label, &report, &args.output)
}

fn convexity1_cmd(args: Convexity1Args) -> Result<(i32, String)> {
    let (f, label) = scalar_source(&args.function)?;
    if let Some(path) = &args.witness {
        let witness: OneVarWitness = read_witness(path)?;
        let (tuples, t) = witness
            .tuples
            .zip(witness.t)
            .ok_or_else(|| NcError::Usage("witness file needs two tuples and t".into()))?;
        let [a, b] = <[TupleJson; 2]>::try_from(tuples)
            .map_err(|_| NcError::Usage("witness file needs exactly two tuples".into()))?;
        let a = a.into_tuple(VarClass::X)?;
        let b = b.into_tuple(VarClass::X)?;
        let defect = convexity_defect(&f, &a.matrices()[0], &b.matrices()[0], t)?;
        let eig = linalg::hermitian_eigenvalues(&defect);
        return verify_result("convexity1-verify", label, eig, &args.output);
    }
    let config = Convexity1Config {
        tol: args.tol,
        ..Convexity1Config::new(parse_interval(&args.interval)?, args.size, args.trials, args.seed)
    };
    let report = convexity_test_1var(&f, &config)?;
    one_var_result("convexity1", label, &report, &args.output)
}

fn kraus_cmd(args: KrausArgs) -> Result<(i32, String)> {
    let rep = KrausRepresentation::new(args.f0, args.f1, args.f2, parse_atoms(&args.atoms)?)?;
    let interval = parse_interval(&args.interval)?;
    if interval.0 <= -1.0 || interval.1 >= 1.0 {
        return Err(NcError::Domain("the Kraus form is evaluated inside (-1, 1)".into()));
    }
    let sweep: Vec<[f64; 2]> = (0..args.points)
        .map(|k| {
            let t = if args.points == 1 {
                0.5 * (interval.0 + interval.1)
            } else {
                interval.0 + (interval.1 - interval.0) * k as f64 / (args.points - 1) as f64
            };
            [t, rep.eval(t)]
        })
        .collect();
    let matrix = match &args.x_tuple {
        Some(spec) => {
            let x = load_tuple(spec, VarClass::X, 1)?;
            let value = kraus_eval(rep.f0, rep.f1, rep.f2, &rep.measure, &x.matrices()[0])?;
            Some(matrix_to_json(&value))
        }
        None => None,
    };
    let report = convexity_test_1var(
        &rep.scalar_fn(),
        &Convexity1Config::new(interval, args.size, args.trials, args.seed),
    )?;
    let label = json!({
        "kraus": {"f0": rep.f0, "f1": rep.f1, "f2": rep.f2, "atoms": rep.measure.atoms()},
        "lift_radius": KrausLift::new(rep.clone()).radius(),
    });
    let path = match (&report.witness, report.pass) {
        (Some(w), false) => Some(write_witness(&args.output, "kraus", &label, w)?),
        _ => None,
    };
    let mut body = json!({"sweep": sweep, "convexity": serde_json::to_value(&report)?});
    if let Some(m) = matrix {
        body["matrix_value"] = json!(m);
    }
    let doc = with_witness_path(document("kraus", label, body)?, path);
    Ok((i32::from(!report.pass), emit(&doc, &args.output)?))
}

fn certify_cmd(args: CertifyArgs) -> Result<(i32, String)> {
    let source = load_source(&args.function)?;
    let sig = source.f.signature();
    let a = a_point(args.a_tuple.as_deref(), sig, args.size, args.seed)?;
    let config = CertifyConfig {
        trials: args.trials,
        degree_cap: args.degree_cap,
        radius: args.radius,
        multiplicities: parse_list(&args.multiplicities)?,
        tol: args.tol,
        ..CertifyConfig::new(args.epsilon, args.samples, args.seed)
    };
    let report = certify_degree_two(source.f.as_ref(), &a, &config)?;
    let consistent = report.verdict == Verdict::ConsistentDegreeTwo;
    let path = match (&report.witness, consistent) {
        (Some(w), false) => Some(write_witness(&args.output, "certify", &source.label, w)?),
        _ => None,
    };
    let doc = with_witness_path(document("certify", source.label, &report)?, path);
    Ok((i32::from(!consistent), emit(&doc, &args.output)?))
}

fn axioms_cmd(args: AxiomsArgs) -> Result<(i32, String)> {
    let config = AxiomConfig {
        samples: args.samples,
        max_size: args.max_size,
        seed: args.seed,
        ..AxiomConfig::default()
    };
    let targets: Vec<(Value, Arc<dyn NcFunction>)> = if let Some(corpus) = &args.corpus {
        let entries = if corpus == "builtin" {
            builtin_corpus()
        } else {
            load_corpus(Path::new(corpus))?
        };
        entries
            .into_iter()
            .map(|e| -> Result<(Value, Arc<dyn NcFunction>)> {
                let p = e.polynomial()?;
                Ok((
                    json!({"name": e.name, "expr": e.expr, "signature": e.signature}),
                    Arc::new(p),
                ))
            })
            .collect::<Result<_>>()?
    } else if args.trace_evaluator {
        vec![(json!({"builtin": "trace"}), Arc::new(trace_evaluator()))]
    } else {
        let source = load_source(&args.function)?;
        vec![(source.label, source.f)]
    };
    let mut reports = Vec::new();
    let mut all_pass = true;
    let mut first_failure = None;
    for (label, f) in targets {
        let report = check_nc_function_axioms(f.as_ref(), &config)?;
        all_pass &= report.pass;
        if !report.pass && first_failure.is_none() {
            first_failure = report.witnesses.first().cloned().map(|w| (label.clone(), w));
        }
        reports.push(json!({"function": label, "result": serde_json::to_value(&report)?}));
    }
    let path = match first_failure {
        Some((label, w)) => Some(write_witness(&args.output, "axioms", &label, w)?),
        None => None,
    };
    let doc = json!({
        "schema": SCHEMA,
        "command": "axioms",
        "pass": all_pass,
        "reports": reports,
    });
    let doc = with_witness_path(doc, path);
    Ok((i32::from(!all_pass), emit(&doc, &args.output)?))
}
