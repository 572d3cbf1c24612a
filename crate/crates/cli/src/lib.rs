//! Command implementations for the `crossmod` binary. Every command maps a
//! JSON input to a JSON output and an exit status; the math lives in `crossmod`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crossmod::brauer::{
    assemble_obstruction, check_strict_action, classify, dd_class, liftable, mackey, t_duality_decision,
    validate_fiber_action, StrictActionData, DD_SIGN, SUBTORUS_SIGN,
};
use crossmod::fellbundle::{self, FellBundle, GridTricharacter, SuiteConfig, ASSOCIATOR_ORIENTATION};
use crossmod::ring::CoefficientRing;
use crossmod::sampling;
use crossmod::scalar::Scalar;
use crossmod::selftest::{self, Suite};
use crossmod::twogroup::{
    check_coherence, check_crossed_module, g_associator, Associator, CoherenceSample, CrossedModuleSample, H1Element,
    H2Element, Quotient, StandardCrossedModule, ASSOCIATOR_CONVENTION, PHI_ORIENTATION,
};
use crossmod::{CheckReport, ExactRing, FamilyOverBase, FiberAction, FloatRing, Mode, MultiVector, Rational};

/// Float-mode tolerance when `--tol` is not given.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Validation box radius used by `check fiber-action` and `classify`.
pub const DEFAULT_VALIDATION_BOX: i64 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Input(#[from] crossmod::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "crossmod", version, about = "Crossed-module 2-groups over R^n, torus Brauer classes and T-duality decisions")]
pub struct Cli {
    /// Coefficient mode; exact mode rejects float-valued inputs.
    #[arg(long, value_enum, default_value = "exact", global = true)]
    pub mode: ModeArg,
    /// Tolerance in float mode (ignored in exact mode).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for every random sample.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    CrossedModule,
    Coherence,
    FiberAction,
    StrictAction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FellSuite {
    Phi,
    Associator,
    Axioms,
    Norms,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a law checker on a JSON input (`-` reads stdin).
    Check { kind: CheckKind, input: String },
    /// Classify a fiber action into (m, theta).
    Classify { input: String },
    /// Assemble the lifting obstruction from 3-subtorus Dixmier-Douady values.
    Obstruction { input: String },
    /// Decide the kind of T-dual of a family over a base.
    Tdual { input: String },
    /// Run one Fell-bundle suite on the discrete torus model.
    FellDemo {
        #[arg(long = "n", default_value_t = 3)]
        n: usize,
        #[arg(long = "N", default_value_t = 4)]
        period: u32,
        /// Associator coefficients, comma separated, lexicographic over i<j<k.
        #[arg(long = "m", value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
        m: Vec<i64>,
        #[arg(long, value_enum, default_value = "phi")]
        suite: FellSuite,
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 200)]
        triples: usize,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long)]
        suite: Option<String>,
        /// Raise the Fell-bundle period to 8.
        #[arg(long)]
        stress: bool,
    },
}

/// A command's JSON result and whether it counts as success.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }
}

/// Global settings shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub mode: Mode,
    pub tol: f64,
    pub seed: u64,
}

impl Settings {
    pub fn new(mode: Mode, tol: Option<f64>, seed: u64) -> Self {
        let tol = match mode {
            Mode::Exact => 0.0,
            Mode::Float => tol.unwrap_or(DEFAULT_TOL),
        };
        Self { mode, tol, seed }
    }
}

pub fn read_input(path: &str) -> CliResult<Value> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|source| CliError::Read { path: path.into(), source })?
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let settings = Settings::new(cli.mode.into(), cli.tol, cli.seed);
    match &cli.command {
        Command::Check { kind, input } => cmd_check(*kind, &read_input(input)?, &settings),
        Command::Classify { input } => cmd_classify(&read_input(input)?, &settings),
        Command::Obstruction { input } => cmd_obstruction(&read_input(input)?),
        Command::Tdual { input } => cmd_tdual(&read_input(input)?, &settings),
        Command::FellDemo { n, period, m, suite, pairs, triples } => {
            let cfg = SuiteConfig { pairs: *pairs, triples: *triples, seed: settings.seed, tol: settings.tol.max(1e-12) };
            cmd_fell_demo(*n, *period, m, *suite, cfg, &settings)
        }
        Command::Selftest { suite, stress } => {
            let suite = suite.as_deref().map(str::parse::<Suite>).transpose()?;
            Ok(cmd_selftest(suite, *stress, settings.seed))
        }
    }
}

fn report_outcome(report: CheckReport) -> Outcome {
    let ok = report.passed();
    Outcome { value: report.to_json(), ok }
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| CliError::Usage(format!("input is missing `{key}`")))
}

fn usize_field(v: &Value, key: &str) -> CliResult<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| CliError::Usage(format!("`{key}` must be a non-negative integer")))
}

/// `{"random": {"n": .., "count": ..}}` parameters, if present.
fn random_spec(v: &Value) -> CliResult<Option<(usize, usize)>> {
    match v.get("random") {
        None => Ok(None),
        Some(r) => Ok(Some((usize_field(r, "n")?, usize_field(r, "count")?))),
    }
}

fn samples(v: &Value) -> CliResult<&Vec<Value>> {
    field(v, "samples")?.as_array().ok_or_else(|| CliError::Usage("`samples` must be an array".into()))
}

fn quotient(v: &Value) -> CliResult<Quotient> {
    match v.get("quotient").and_then(Value::as_str) {
        None | Some("none") => Ok(Quotient::None),
        Some("integral-lattice") => Ok(Quotient::IntegralLattice),
        Some(other) => Err(CliError::Usage(format!("unknown quotient `{other}`"))),
    }
}

/// `scale · (−t₁∧t₂∧t₃)`; `scale = 1` is the associator of the 2-group.
struct ScaledAssociator<T>(T);

impl<T: Scalar> Associator<T> for ScaledAssociator<T> {
    fn associator(&self, t1: &MultiVector<T>, t2: &MultiVector<T>, t3: &MultiVector<T>) -> crossmod::Result<MultiVector<T>> {
        Ok(g_associator(t1, t2, t3)?.xi().scale(&self.0))
    }
}

/// Crossed-module samples in the scalar type `T`; random ones are drawn as
/// rationals and converted through JSON.
fn crossed_module_samples<T: Scalar>(v: &Value, seed: u64) -> CliResult<Vec<CrossedModuleSample<T>>> {
    let raw: Vec<Value> = match random_spec(v)? {
        Some((n, count)) => {
            let mut rng = sampling::rng(seed);
            (0..count)
                .map(|_| {
                    let (g, h, k) = sampling::crossed_module_sample(&mut rng, n);
                    json!({"h1": g.to_json(), "h2": h.to_json(), "h2_prime": k.to_json()})
                })
                .collect()
        }
        None => samples(v)?.clone(),
    };
    raw.iter()
        .map(|s| {
            Ok((
                H1Element::from_json(field(s, "h1")?)?,
                H2Element::from_json(field(s, "h2")?)?,
                H2Element::from_json(field(s, "h2_prime")?)?,
            ))
        })
        .collect()
}

fn coherence_samples<T: Scalar>(v: &Value, seed: u64) -> CliResult<Vec<CoherenceSample<T>>> {
    let raw: Vec<Value> = match random_spec(v)? {
        Some((n, count)) => {
            let mut rng = sampling::rng(seed);
            (0..count).map(|_| sampling::coherence_sample(&mut rng, n).to_json()).collect()
        }
        None => samples(v)?.clone(),
    };
    Ok(raw.iter().map(CoherenceSample::from_json).collect::<crossmod::Result<_>>()?)
}

fn check_twogroup<T: Scalar>(kind: CheckKind, v: &Value, s: &Settings) -> CliResult<CheckReport> {
    let report = match kind {
        CheckKind::CrossedModule => check_crossed_module(&StandardCrossedModule, &crossed_module_samples::<T>(v, s.seed)?, s.tol)?,
        _ => {
            let scale = match v.get("associator").and_then(|a| a.get("scale")) {
                None => T::one(),
                Some(x) => T::from_json(x)?,
            };
            check_coherence(&ScaledAssociator(scale), &coherence_samples::<T>(v, s.seed)?, quotient(v)?, s.tol)?
                .convention("associator_scale", v.get("associator").map(|a| a.to_string()).unwrap_or_else(|| "1".into()))
        }
    };
    Ok(report.convention("mode", s.mode.to_string()))
}

fn validation_box(v: &Value) -> CliResult<i64> {
    match v.get("box") {
        None => Ok(DEFAULT_VALIDATION_BOX),
        Some(b) => b.as_i64().filter(|&b| b >= 1).ok_or_else(|| CliError::Usage("`box` must be a positive integer".into())),
    }
}

fn period_field(v: &Value) -> CliResult<u32> {
    field(v, "period")?
        .as_u64()
        .filter(|&p| (1..=u32::MAX as u64).contains(&p))
        .map(|p| p as u32)
        .ok_or_else(|| CliError::Usage("`period` must be a positive integer".into()))
}

fn check_strict<R: CoefficientRing>(ring: R, v: &Value, s: &Settings) -> CliResult<CheckReport> {
    let data = StrictActionData::from_json(ring, v)?;
    let count = match v.get("samples") {
        None => 200,
        Some(_) => usize_field(v, "samples")?,
    };
    Ok(check_strict_action(&data, count, s.seed, s.tol)?.convention("mode", s.mode.to_string()))
}

pub fn cmd_check(kind: CheckKind, v: &Value, s: &Settings) -> CliResult<Outcome> {
    let report = match (kind, s.mode) {
        (CheckKind::CrossedModule | CheckKind::Coherence, Mode::Exact) => check_twogroup::<Rational>(kind, v, s)?,
        (CheckKind::CrossedModule | CheckKind::Coherence, Mode::Float) => check_twogroup::<f64>(kind, v, s)?,
        (CheckKind::FiberAction, mode) => {
            let a = FiberAction::from_json(v, mode)?;
            validate_fiber_action(&a, validation_box(v)?, s.tol)
        }
        (CheckKind::StrictAction, Mode::Exact) => check_strict(ExactRing::new(period_field(v)?), v, s)?,
        (CheckKind::StrictAction, Mode::Float) => check_strict(FloatRing::new(period_field(v)?, s.tol), v, s)?,
    };
    let report = match kind {
        CheckKind::CrossedModule | CheckKind::Coherence => {
            report.convention("phi_orientation", PHI_ORIENTATION).convention("associator", ASSOCIATOR_CONVENTION)
        }
        _ => report,
    };
    Ok(report_outcome(report))
}

fn sign_conventions() -> Value {
    json!({
        "subtorus_sign": SUBTORUS_SIGN,
        "dd_sign": DD_SIGN,
        "associator_orientation": ASSOCIATOR_ORIENTATION,
    })
}

/// Validates, then emits `{"m", "theta", "dd", "mackey"}`; a failed validation
/// returns the validation report instead.
pub fn cmd_classify(v: &Value, s: &Settings) -> CliResult<Outcome> {
    let a = FiberAction::from_json(v, s.mode)?;
    let validation = validate_fiber_action(&a, validation_box(v)?, s.tol);
    if !validation.passed() {
        return Ok(Outcome { value: json!({"validation": validation.to_json()}), ok: false });
    }
    let class = classify(&a)?;
    let value = json!({
        "n": class.n(),
        "m": class.m(),
        "theta": class.theta().to_json(),
        "dd": dd_class(&class).to_json(),
        "mackey": mackey(&class).to_json(),
        "conventions": sign_conventions(),
    });
    Ok(Outcome { value, ok: true })
}

/// Input `{"n": .., "points": {name: [{"subtorus": [i, j, k], "dd": int}, ..]}}`
/// with 1-based subtorus indices.
pub fn cmd_obstruction(v: &Value) -> CliResult<Outcome> {
    let n = usize_field(v, "n")?;
    let raw = field(v, "points")?.as_object().ok_or_else(|| CliError::Usage("`points` must be an object".into()))?;
    let mut points = BTreeMap::new();
    for (name, entries) in raw {
        let entries = entries
            .as_array()
            .ok_or_else(|| CliError::Usage(format!("`points.{name}` must be an array")))?
            .iter()
            .map(|e| {
                let idx: Vec<usize> = field(e, "subtorus")?
                    .as_array()
                    .filter(|a| a.len() == 3)
                    .and_then(|a| a.iter().map(|x| x.as_u64().filter(|&x| x >= 1).map(|x| x as usize - 1)).collect())
                    .ok_or_else(|| CliError::Usage("`subtorus` must be three 1-based indices".into()))?;
                let dd = field(e, "dd")?
                    .as_i64()
                    .ok_or_else(|| CliError::Usage("`dd` must be an integer".into()))?;
                Ok(([idx[0], idx[1], idx[2]], dd))
            })
            .collect::<CliResult<Vec<_>>>()?;
        points.insert(name.clone(), entries);
    }
    let chi = assemble_obstruction(n, &points)?;
    let verdicts = liftable(&chi);
    let all = verdicts.values().all(|&b| b);
    let value = json!({
        "obstruction": chi.to_json(),
        "liftable": verdicts,
        "liftable_everywhere": all,
        "conventions": {"subtorus_sign": SUBTORUS_SIGN, "subtorus_indexing": "1-based"},
    });
    Ok(Outcome { value, ok: true })
}

pub fn cmd_tdual(v: &Value, s: &Settings) -> CliResult<Outcome> {
    let family = FamilyOverBase::from_json(v, s.mode)?;
    let report = t_duality_decision(&family)?;
    let mut value = report.to_json();
    value["conventions"] = sign_conventions();
    Ok(Outcome { value, ok: true })
}

fn fell_suite<R: CoefficientRing>(b: &FellBundle<R>, suite: FellSuite, cfg: &SuiteConfig) -> crossmod::Result<CheckReport> {
    match suite {
        FellSuite::Phi => fellbundle::phi_suite(b, cfg),
        FellSuite::Associator => fellbundle::associator_suite(b, cfg),
        FellSuite::Axioms => fellbundle::axioms_suite(b, cfg),
        FellSuite::Norms => fellbundle::norms_suite(b, cfg),
    }
}

pub fn cmd_fell_demo(n: usize, period: u32, m: &[i64], suite: FellSuite, cfg: SuiteConfig, s: &Settings) -> CliResult<Outcome> {
    if period < 2 {
        return Err(CliError::Usage("--N must be at least 2".into()));
    }
    let chi = GridTricharacter::new(n, period, m.to_vec())?;
    let report = match s.mode {
        Mode::Exact => fell_suite(&FellBundle::new(ExactRing::new(period), chi)?, suite, &cfg)?,
        Mode::Float => fell_suite(&FellBundle::new(FloatRing::new(period, cfg.tol), chi)?, suite, &cfg)?,
    };
    Ok(report_outcome(report))
}

/// Runs the chosen suites (all by default); the payload includes wall-clock timings.
pub fn cmd_selftest(suite: Option<Suite>, stress: bool, seed: u64) -> Outcome {
    let suites: Vec<Suite> = match suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let mut results = Vec::new();
    let mut ok = true;
    for s in suites {
        let start = Instant::now();
        let outcome = selftest::run(s, stress, seed);
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match outcome {
            Ok(r) => (r.passed(), r.to_json()),
            Err(e) => (false, json!({"error": e.to_string()})),
        };
        ok &= passed;
        results.push(json!({"suite": s.name(), "passed": passed, "seconds": seconds, "report": detail}));
    }
    Outcome { value: json!({"passed": ok, "stress": stress, "suites": results}), ok }
}
