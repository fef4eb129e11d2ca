use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use qcluster::acyclic::{classical_presentation, quantum_presentation};
use qcluster::azumaya::{azumaya_bound_report_for, noncentral_frozen, pi_degree};
use qcluster::compat::{check_compatible, check_ell_compatible};
use qcluster::conics::conic_samples;
use qcluster::exchange::ExchangeData;
use qcluster::intlin::IntMatrix;
use qcluster::kronecker::{run_suite, KroneckerFixture, DEFAULT_ELLS};
use qcluster::poisson::{anticanonical_coefficient, gsv_bracket, torus_weights, GsvContext};
use qcluster::seedio::SeedDoc;
use qcluster::seeds::{explore, DEFAULT_EXPLORE_DEPTH};
use qcluster::tlaurent::TwistMatrix;

#[derive(Parser)]
#[command(
    name = "qcluster",
    version,
    about = "Cluster algebra seeds, GSV brackets and root-of-unity quantum cluster algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a seed along a sequence of 1-based directions.
    Mutate {
        #[arg(long)]
        seed: PathBuf,
        /// Overrides the file's `ell`.
        #[arg(long)]
        ell: Option<u64>,
        /// Directions, separated by spaces or commas.
        sequence: Vec<String>,
    },
    /// Breadth-first exchange graph around a seed.
    Explore {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXPLORE_DEPTH)]
        depth: usize,
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run one analysis on the current seed of a file.
    Analyze {
        #[arg(long)]
        seed: PathBuf,
        #[arg(value_enum)]
        which: Analysis,
        #[arg(long)]
        ell: Option<u64>,
    },
    /// CSV samples of the conics x1^2 - z*x1*x2 + x2^2 + 1 = 0.
    Conics {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-3.0, -1.5, 0.0, 1.5, 3.0])]
        z: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Exact checks of the Kronecker example.
    Verify {
        /// A group (`casimir`, `quantum-l5`, ...) or a single check name.
        #[arg(long)]
        only: Option<String>,
        /// Odd orders for the quantum checks.
        #[arg(long, value_delimiter = ',')]
        ell: Vec<u64>,
        /// Replacement skew form, rows separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Analysis {
    Compat,
    Bracket,
    Weights,
    Anticanonical,
    PiDegree,
    Nc,
    Presentation,
    AzumayaReport,
}

struct Failure {
    code: String,
    message: String,
    exit: u8,
    extra: Option<(&'static str, Value)>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: "usage".into(),
            message: message.into(),
            exit: 2,
            extra: None,
        }
    }

    fn emit(&self) -> ExitCode {
        let mut obj = json!({"code": self.code, "message": self.message});
        if let Some((k, v)) = &self.extra {
            obj[*k] = v.clone();
        }
        let _ = writeln!(io::stderr(), "{obj}");
        ExitCode::from(self.exit)
    }
}

impl From<qcluster::Error> for Failure {
    fn from(e: qcluster::Error) -> Self {
        Failure {
            code: e.code().into(),
            message: e.to_string(),
            exit: 3,
            extra: None,
        }
    }
}

type Outcome = Result<String, Failure>;

fn load(path: &Path) -> Result<SeedDoc, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: "io".into(),
        message: format!("{}: {e}", path.display()),
        exit: 3,
        extra: None,
    })?;
    Ok(SeedDoc::parse(&text)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn parse_sequence(tokens: &[String]) -> Result<Vec<usize>, Failure> {
    qcluster_cli::parse_sequence(tokens).map_err(Failure::usage)
}

fn with_ell(doc: SeedDoc, ell: Option<u64>) -> Result<SeedDoc, Failure> {
    match ell {
        Some(_) => Ok(doc.with_ell(ell)?),
        None => Ok(doc),
    }
}

fn cmd_mutate(seed: &Path, ell: Option<u64>, sequence: &[String]) -> Outcome {
    let ks = parse_sequence(sequence)?;
    let doc = with_ell(load(seed)?, ell)?.mutated(&ks)?;
    Ok(doc.to_json()?)
}

fn cmd_explore(seed: &Path, depth: usize, ell: Option<u64>, format: Format) -> Outcome {
    if format == Format::Csv {
        return Err(Failure::usage("explore writes json or dot"));
    }
    let doc = with_ell(load(seed)?, ell)?;
    let graph = if doc.is_quantum() {
        explore(&doc.quantum_seed()?, depth)?.0
    } else {
        explore(&doc.classical_seed()?, depth)?.0
    };
    Ok(match format {
        Format::Dot => graph.to_dot(),
        _ => pretty(&graph.to_json()),
    })
}

fn int_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int_json).collect()))
            .collect(),
    )
}

fn need_lambda(lambda: Option<IntMatrix>, what: &str) -> Result<IntMatrix, Failure> {
    lambda.ok_or_else(|| Failure::usage(format!("{what} needs Lambda in the seed file")))
}

fn need_ell(ell: Option<u64>, what: &str) -> Result<u64, Failure> {
    ell.ok_or_else(|| Failure::usage(format!("{what} needs --ell or `ell` in the seed file")))
}

fn analyze_compat(data: &ExchangeData, lambda: IntMatrix, ell: Option<u64>) -> Outcome {
    let strict = check_compatible(&lambda, data);
    let Some(ell) = ell else {
        let pair = strict?;
        return Ok(pretty(&json!({
            "compatible": true,
            "D": pair.d().iter().map(int_json).collect::<Vec<_>>(),
        })));
    };
    let omega = TwistMatrix::modular(&lambda, ell)?;
    let reduced = check_ell_compatible(&omega, data, None)?;
    Ok(pretty(&json!({
        "ell": ell,
        "ell_compatible": true,
        "D_mod_ell": reduced.d(),
        "compatible": strict.is_ok(),
        "D": strict.ok().map(|p| p.d().iter().map(int_json).collect::<Vec<_>>()),
    })))
}

fn analyze_bracket(doc: &SeedDoc, lambda: &IntMatrix) -> Outcome {
    let initial = need_lambda(doc.initial_lambda().cloned(), "bracket")?;
    let ctx = GsvContext::from_skew(&initial)?;
    let seed = doc.classical_seed()?;
    let vars = seed.vars();
    let mut brackets = Vec::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            let b = gsv_bracket(&vars[i], &vars[j], &ctx)?;
            brackets.push(json!({"i": i + 1, "j": j + 1, "value": b.pretty()}));
        }
    }
    Ok(pretty(&json!({
        "rank": ctx.rank(),
        "Lambda": matrix_json(lambda),
        "brackets": brackets,
    })))
}

fn cmd_analyze(seed: &Path, which: Analysis, ell: Option<u64>) -> Outcome {
    let doc = load(seed)?;
    let ell = ell.or(doc.ell());
    let (data, lambda) = doc.current()?;
    match which {
        Analysis::Compat => analyze_compat(&data, need_lambda(lambda, "compat")?, ell),
        Analysis::Bracket => analyze_bracket(&doc, &need_lambda(lambda, "bracket")?),
        Analysis::Weights => {
            let w: Vec<Value> = torus_weights(&data)
                .iter()
                .map(|v| Value::Array(v.nu.iter().map(int_json).collect()))
                .collect();
            Ok(pretty(&Value::Array(w)))
        }
        Analysis::Anticanonical => {
            let lambda = need_lambda(lambda, "anticanonical")?;
            let theta = torus_weights(&data);
            let c = anticanonical_coefficient(&lambda, &theta)?;
            Ok(pretty(&json!({
                "theta": theta
                    .iter()
                    .map(|v| v.nu.iter().map(int_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "coefficient": c.to_string(),
            })))
        }
        Analysis::PiDegree => {
            let ell = need_ell(ell, "pi-degree")?;
            let omega = TwistMatrix::modular(&need_lambda(lambda, "pi-degree")?, ell)?;
            Ok(pretty(&json!({"ell": ell, "pi_degree": int_json(&pi_degree(&omega)?)})))
        }
        Analysis::Nc => {
            let ell = need_ell(ell, "nc")?;
            let omega = TwistMatrix::modular(&need_lambda(lambda, "nc")?, ell)?;
            let nc: Vec<usize> = noncentral_frozen(&omega, data.ninv())
                .iter()
                .map(|i| i + 1)
                .collect();
            Ok(pretty(&json!({"ell": ell, "nc": nc})))
        }
        Analysis::Presentation => {
            let classical: Vec<Value> = classical_presentation(&data)?
                .iter()
                .map(|r| r.to_json())
                .collect();
            let mut out = json!({"classical": classical});
            if let (Some(lambda), Some(ell)) = (lambda, ell) {
                out["quantum"] = quantum_presentation(&data, &lambda, ell)?.to_json();
            }
            Ok(pretty(&out))
        }
        Analysis::AzumayaReport => {
            let ell = need_ell(ell, "azumaya-report")?;
            let omega = TwistMatrix::modular(&need_lambda(lambda, "azumaya-report")?, ell)?;
            Ok(pretty(&azumaya_bound_report_for(&omega, data.ninv())?.to_json()))
        }
    }
}

/// 12 significant digits; negative zero is printed as zero.
fn sig12(v: f64) -> String {
    format!("{:.11e}", v + 0.0)
}

fn cmd_conics(z: &[f64], samples: usize, format: Format) -> Outcome {
    if format != Format::Csv {
        return Err(Failure::usage("conics writes csv"));
    }
    if samples < 2 {
        return Err(Failure::usage("--samples must be at least 2"));
    }
    let rows = conic_samples(z, samples)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_fail = |e: csv::Error| Failure {
        code: "io".into(),
        message: e.to_string(),
        exit: 3,
        extra: None,
    };
    w.write_record(["z", "branch", "t", "re_x1", "im_x1", "re_x2", "im_x2"])
        .map_err(io_fail)?;
    for r in &rows {
        w.write_record([
            sig12(r.z),
            r.branch.clone(),
            sig12(r.t),
            sig12(r.x1.re),
            sig12(r.x1.im),
            sig12(r.x2.re),
            sig12(r.x2.im),
        ])
        .map_err(io_fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure {
        code: "io".into(),
        message: e.to_string(),
        exit: 3,
        extra: None,
    })?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

fn parse_lambda(text: &str) -> Result<IntMatrix, Failure> {
    qcluster_cli::parse_lambda(text).map_err(Failure::usage)
}

fn cmd_verify(only: Option<&str>, ells: &[u64], lambda: Option<&str>) -> Outcome {
    let mut fixture = KroneckerFixture::default();
    if let Some(text) = lambda {
        let m = parse_lambda(text)?;
        if m.rows() != 2 || !m.is_skew_symmetric() {
            return Err(Failure::usage("--lambda must be a skew 2x2 matrix"));
        }
        fixture.lambda = m;
    }
    let ells = if ells.is_empty() { &DEFAULT_ELLS[..] } else { ells };
    let report = run_suite(&fixture, only, ells).map_err(|e| match e {
        qcluster::Error::Parse(msg) => Failure::usage(msg),
        other => other.into(),
    })?;
    let text = pretty(&serde_json::to_value(&report).expect("serializable"));
    if report.passed {
        return Ok(text);
    }
    print!("{text}");
    let failed = report.failed();
    Err(Failure {
        code: "verification-failed".into(),
        message: format!("{} check(s) failed", failed.len()),
        exit: 1,
        extra: Some(("failed", json!(failed))),
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Mutate { seed, ell, sequence } => cmd_mutate(&seed, ell, &sequence),
        Command::Explore {
            seed,
            depth,
            ell,
            format,
        } => cmd_explore(&seed, depth, ell, format),
        Command::Analyze { seed, which, ell } => cmd_analyze(&seed, which, ell),
        Command::Conics { z, samples, format } => cmd_conics(&z, samples, format),
        Command::Verify { only, ell, lambda } => {
            cmd_verify(only.as_deref(), &ell, lambda.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return Failure::usage(e.to_string().trim_end()).emit(),
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(f) => f.emit(),
    }
}
