//! `cyclic`: enumerate admissible graphs, estimate their weights, and run the verification suites.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cyclic_core::assembly::{check_unimodular, star_product, trace_integrand, Engine, HalfPlaneWeights, PoissonData, TaylorResult};
use cyclic_core::gradedcore::{MultiVector, PolyFunction};
use cyclic_core::graphs::{enumerate, AdmissibleGraph};
use cyclic_core::verify::{run_suite, Suite, VerifyConfig};
use cyclic_core::weights::{mc_weight, McParams, RNG_NAME};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "cyclic", version, about = "Graph weights and identity checks for the cyclic formality morphism on R^d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List admissible graph classes.
    Graphs(GraphsArgs),
    /// Estimate the weight of one graph.
    Weight(WeightArgs),
    /// Run a verification suite and write its report.
    Verify(VerifyArgs),
    /// Star product coefficients up to ε².
    Star(StarArgs),
    /// Trace integrand H₀, …, H_N for unimodular Poisson data.
    Trace(TraceArgs),
}

/// Settings that may also come from a TOML config file; flags win.
#[derive(Args, Debug, Default)]
struct Common {
    /// TOML file with keys dim, samples, seed, tol_mult, trials, out.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension d of ℝ^d.
    #[arg(short = 'd', long = "dim")]
    dim: Option<usize>,
    /// Monte Carlo samples per integral.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    dim: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    tol_mult: Option<f64>,
    trials: Option<usize>,
    out: Option<PathBuf>,
}

struct Settings {
    dim: usize,
    samples: usize,
    seed: u64,
    tol_mult: f64,
    trials: Option<usize>,
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self, tol_mult: Option<f64>, trials: Option<usize>) -> anyhow::Result<Settings> {
        let file = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str::<FileConfig>(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => FileConfig::default(),
        };
        let defaults = VerifyConfig::default();
        Ok(Settings {
            dim: self.dim.or(file.dim).unwrap_or(defaults.dim),
            samples: self.samples.or(file.samples).unwrap_or(defaults.samples),
            seed: self.seed.or(file.seed).unwrap_or(defaults.seed),
            tol_mult: tol_mult.or(file.tol_mult).unwrap_or(defaults.tol_mult),
            trials: trials.or(file.trials),
            out: self.out.clone().or(file.out),
        })
    }
}

impl Settings {
    fn params(&self) -> McParams {
        McParams { samples: self.samples, seed: self.seed, ..McParams::default() }
    }
}

#[derive(Args, Debug)]
struct GraphsArgs {
    /// Out-degrees of the interior vertices, comma separated.
    #[arg(short = 'k', value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Number of boundary vertices, basepoint included.
    #[arg(short = 'm', default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    /// Largest v-degree per interior vertex.
    #[arg(long, default_value_t = 0)]
    max_deg: u32,
    /// Emit Graphviz DOT instead of JSON.
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WeightArgs {
    /// Graph class key, e.g. `m1|d2:`.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    key: Option<String>,
    /// JSON file holding one graph.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Integrate numerically even where a closed form is known.
    #[arg(long)]
    raw: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_parser = Suite::NAMES)]
    suite: String,
    /// Multiplier applied to every statistical tolerance.
    #[arg(long)]
    tol_mult: Option<f64>,
    /// Random instances for the checks that take a trial count.
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct StarArgs {
    /// Bivector JSON; defaults to ∂₁∧∂₂.
    #[arg(long)]
    pi: Option<PathBuf>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(0..=2))]
    order: u64,
    /// With --g, also print the ε-coefficients of f ⋆ g.
    #[arg(long, requires = "g")]
    f: Option<PathBuf>,
    #[arg(long, requires = "f")]
    g: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Poisson bivector JSON.
    #[arg(long)]
    pi: PathBuf,
    /// Function JSON with div π = [h, π]; defaults to 0.
    #[arg(long)]
    h: Option<PathBuf>,
    /// Function JSON to integrate.
    #[arg(long)]
    f: PathBuf,
    /// Highest ε power N.
    #[arg(long, default_value_t = 0)]
    order: usize,
    #[command(flatten)]
    common: Common,
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

fn invalid_graph(error: anyhow::Error) -> Failure {
    Failure { code: 3, error }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, value: &impl Serialize) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

fn read_json<T: for<'de> Deserialize<'de>>(p: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
}

fn cmd_graphs(a: &GraphsArgs) -> Result<(), Failure> {
    let m = a.m as usize;
    let graphs = enumerate(&a.k, m, a.max_deg);
    if a.dot {
        let text: String = graphs.iter().map(AdmissibleGraph::to_dot).collect();
        emit(a.out.as_deref(), &text)?;
        return Ok(());
    }
    let list: Vec<Value> = graphs
        .iter()
        .map(|g| {
            let key = g.canonical_key().map(|k| k.0).map_err(anyhow::Error::from)?;
            Ok(json!({ "key": key, "graph": g }))
        })
        .collect::<anyhow::Result<_>>()?;
    let report = json!({
        "schema": "cyclic-graphs/1",
        "tool_version": VERSION,
        "k": a.k,
        "m": m,
        "max_deg": a.max_deg,
        "count": list.len(),
        "graphs": list,
    });
    emit_json(a.out.as_deref(), &report)?;
    Ok(())
}

fn cmd_weight(a: &WeightArgs) -> Result<(), Failure> {
    let s = a.common.resolve(None, None)?;
    let graph: AdmissibleGraph = match (&a.key, &a.graph) {
        (Some(k), _) => k.parse().map_err(|e| invalid_graph(anyhow::Error::from(e)))?,
        (None, Some(p)) => read_json(p).map_err(invalid_graph)?,
        (None, None) => unreachable!("clap requires one of --key, --graph"),
    };
    let params = if a.raw { s.params().raw() } else { s.params() };
    let est = mc_weight(&graph, &params).map_err(|e| invalid_graph(e.into()))?;
    let mut report = json!({ "schema": "cyclic-weight/1", "tool_version": VERSION, "raw": a.raw, "budget": s.samples });
    if let (Value::Object(r), Value::Object(e)) = (&mut report, serde_json::to_value(&est).map_err(anyhow::Error::from)?) {
        r.extend(e);
    }
    emit_json(s.out.as_deref(), &report)?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let s = a.common.resolve(a.tol_mult, a.trials)?;
    let cfg = VerifyConfig {
        suite: a.suite.parse().map_err(anyhow::Error::from)?,
        dim: s.dim,
        samples: s.samples,
        seed: s.seed,
        tol_mult: s.tol_mult,
        trials: s.trials,
    };
    let report = run_suite(&cfg);
    let mut text = report.to_json();
    text.push('\n');
    emit(s.out.as_deref(), &text)?;
    for r in &report.records {
        eprintln!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.name);
    }
    if !report.pass {
        return Err(Failure { code: 1, error: anyhow::anyhow!("suite {} failed", cfg.suite) });
    }
    Ok(())
}

#[derive(Serialize)]
struct CochainTerm {
    weight: Option<Value>,
    derivatives: Vec<Vec<u32>>,
    coeff: PolyFunction,
}

fn components(t: &TaylorResult) -> Value {
    json!({ "exact": t.is_exact(), "components": t.components() })
}

fn cmd_star(a: &StarArgs) -> Result<(), Failure> {
    let s = a.common.resolve(None, None)?;
    if s.dim < 2 && a.pi.is_none() {
        return Err(anyhow::anyhow!("the default bivector needs d ≥ 2").into());
    }
    let pi: MultiVector = match &a.pi {
        Some(p) => read_json(p)?,
        None => MultiVector::partial_field(s.dim, 0)
            .wedge(&MultiVector::partial_field(s.dim, 1))
            .map_err(anyhow::Error::from)?,
    };
    let hp = HalfPlaneWeights::new(s.params());
    let series = star_product(&pi, a.order as usize, &hp).map_err(anyhow::Error::from)?;
    let mut coefficients = Vec::new();
    for (n, c) in series.coefficients.iter().enumerate() {
        let mut terms = Vec::new();
        for (w, op) in &c.terms {
            let weight = w.as_ref().map(|(key, e)| json!({ "graph_key": key, "mean": e.mean, "stderr": e.stderr, "samples": e.samples }));
            for (alphas, coeff) in op.terms() {
                terms.push(CochainTerm { weight: weight.clone(), derivatives: alphas.iter().map(|e| e.0.clone()).collect(), coeff: coeff.clone() });
            }
        }
        coefficients.push(json!({ "order": n, "terms": terms }));
    }
    let mut report = json!({
        "schema": "cyclic-star/1",
        "tool_version": VERSION,
        "rng": RNG_NAME,
        "seed": s.seed,
        "budget": s.samples,
        "pi": pi,
        "order": a.order,
        "coefficients": coefficients,
    });
    if let (Some(fp), Some(gp)) = (&a.f, &a.g) {
        let f: PolyFunction = read_json(fp)?;
        let g: PolyFunction = read_json(gp)?;
        let lift = |p: &PolyFunction| TaylorResult::exact(0, MultiVector::from_function(p));
        let product = series.apply(&lift(&f), &lift(&g)).map_err(anyhow::Error::from)?;
        report["product"] = Value::Array(product.iter().map(components).collect());
    }
    emit_json(s.out.as_deref(), &report)?;
    Ok(())
}

fn cmd_trace(a: &TraceArgs) -> Result<(), Failure> {
    let s = a.common.resolve(None, None)?;
    let pi: MultiVector = read_json(&a.pi)?;
    let h: PolyFunction = match &a.h {
        Some(p) => read_json(p)?,
        None => PolyFunction::zero(pi.dim()),
    };
    let f: PolyFunction = read_json(&a.f)?;
    let pd = PoissonData::new(pi, h);
    let check = check_unimodular(&pd);
    let mut report = json!({
        "schema": "cyclic-trace/1",
        "tool_version": VERSION,
        "rng": RNG_NAME,
        "seed": s.seed,
        "budget": s.samples,
        "order": a.order,
        "unimodular": check,
    });
    if !check.ok {
        emit_json(s.out.as_deref(), &report)?;
        return Err(anyhow::anyhow!("data are not unimodular").into());
    }
    let engine = Engine::new(s.params());
    let ti = trace_integrand(&engine, &pd, &f, a.order).map_err(anyhow::Error::from)?;
    report["exp_h"] = serde_json::to_value(&ti.h).map_err(anyhow::Error::from)?;
    report["terms"] = Value::Array(ti.terms.iter().map(components).collect());
    emit_json(s.out.as_deref(), &report)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Graphs(a) => cmd_graphs(a),
        Command::Weight(a) => cmd_weight(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Star(a) => cmd_star(a),
        Command::Trace(a) => cmd_trace(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
