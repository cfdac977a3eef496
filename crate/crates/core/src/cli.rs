//! The `graphframe` command line: argument parsing, command dispatch and
//! JSON, CSV and text reports.
//!
//! Reports use 1-based vertex and component labels. JSON is the canonical
//! format; floats are rounded to 12 significant digits and sections that do
//! not apply are left out.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::combin::binomial;
use crate::erasure::{
    canonical_products, canonical_verdict, d_r, d_r_lower_bound, lambda1_set, ErasureReport,
    VerdictOptions, DEFAULT_TIE_TOL, DR_GUARD,
};
use crate::error::Error;
use crate::frame::{build_lg_frame_with_tol, canonical_dual, dual_family_member, GraphFrameBundle};
use crate::graph::Graph;
use crate::linalg::{eigh_symmetric, moore_penrose, DEFAULT_ZERO_TOL};
use crate::matrix::{norm, DenseMatrix};
use crate::search::SearchOptions;
use crate::spark::{spark, spark_via_components};
use crate::walk::{
    is_walk_regular_definition, is_walk_regular_with_tol, WalkRegularityReport, DEFAULT_MULTIPLICITY_TOL,
};

const SIGNIFICANT_DIGITS: usize = 12;
const DEFAULT_MAX_R: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    GraphInfo,
    FrameBuild,
    FrameSpark,
    OdVerdict,
    OdSearch,
    DrTable,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GraphInfo => "graph-info",
            Command::FrameBuild => "frame-build",
            Command::FrameSpark => "frame-spark",
            Command::OdVerdict => "od-verdict",
            Command::OdSearch => "od-search",
            Command::DrTable => "dr-table",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        }
    }
}

/// Everything one invocation needs.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisConfig {
    pub input_path: PathBuf,
    pub command: Command,
    pub zero_tol: f64,
    pub tie_tol: f64,
    pub multiplicity_tol: f64,
    pub seed: u64,
    pub trials: usize,
    pub radius: f64,
    pub emit_vectors: bool,
    pub output_format: OutputFormat,
    /// Worker threads; output does not depend on it.
    pub jobs: Option<usize>,
    pub max_r: usize,
    /// Per-component shifts of a dual to tabulate next to the canonical one.
    pub shifts: Option<Vec<Vec<f64>>>,
    /// Sample this many erasure sets instead of enumerating them all.
    pub monte_carlo: Option<usize>,
}

impl AnalysisConfig {
    pub fn new(command: Command, input_path: impl Into<PathBuf>) -> Self {
        AnalysisConfig {
            input_path: input_path.into(),
            command,
            zero_tol: DEFAULT_ZERO_TOL,
            tie_tol: DEFAULT_TIE_TOL,
            multiplicity_tol: DEFAULT_MULTIPLICITY_TOL,
            seed: 0,
            trials: 10_000,
            radius: 0.01,
            emit_vectors: false,
            output_format: OutputFormat::Json,
            jobs: None,
            max_r: DEFAULT_MAX_R,
            shifts: None,
            monte_carlo: None,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        for (name, tol) in [
            ("zero-tol", self.zero_tol),
            ("tie-tol", self.tie_tol),
            ("multiplicity-tol", self.multiplicity_tol),
            ("radius", self.radius),
        ] {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::InvalidArgument(format!("--{name} must be positive")));
            }
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("--trials must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
        }
        if self.max_r == 0 {
            return Err(Error::InvalidArgument("--max-r must be at least 1".into()));
        }
        if self.monte_carlo == Some(0) {
            return Err(Error::InvalidArgument("--monte-carlo must be at least 1".into()));
        }
        Ok(())
    }

    fn verdict_options(&self) -> VerdictOptions {
        VerdictOptions {
            tie_tol: self.tie_tol,
            multiplicity_tol: self.multiplicity_tol,
            search: SearchOptions {
                trials: self.trials,
                radius: self.radius,
                seed: self.seed,
            },
            always_search: self.command == Command::OdSearch,
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    /// 0 success, 1 input or usage error, 2 numerical failure, 3 guard exceeded.
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "graphframe", version, about = "Laplacian frames of graphs and their optimal duals under erasures")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Components, degrees, walk-regularity and the Laplacian spectrum
    GraphInfo(Opts),
    /// Build the Laplacian frame and summarize it
    FrameBuild(Opts),
    /// Spark by brute force and by component sizes
    FrameSpark(Opts),
    /// Optimal-dual verdict for the canonical dual
    OdVerdict(Opts),
    /// Verdict plus a seeded search over the dual family
    OdSearch(Opts),
    /// Worst-case r-erasure errors for r = 1..max-r
    DrTable(Opts),
}

#[derive(Args, Debug)]
struct Opts {
    /// Edge list: a header line `n m`, then `m` lines `u v` (1-based)
    input: PathBuf,
    /// Relative threshold below which Laplacian eigenvalues count as zero
    #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
    zero_tol: f64,
    /// Relative tolerance for ties between erasure products
    #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
    tie_tol: f64,
    /// Relative tolerance for grouping equal adjacency eigenvalues
    #[arg(long, default_value_t = DEFAULT_MULTIPLICITY_TOL)]
    multiplicity_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random shifts sampled by the dual-family search
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Radius of the ball the search samples shifts from
    #[arg(long, default_value_t = 0.01)]
    radius: f64,
    /// Include raw frame vectors (they depend on the eigenvector basis)
    #[arg(long)]
    emit_vectors: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Worker threads for parallel reductions
    #[arg(long)]
    jobs: Option<usize>,
    /// Largest erasure count for dr-table
    #[arg(long, default_value_t = DEFAULT_MAX_R)]
    max_r: usize,
    /// JSON list of per-component shift vectors defining a dual for dr-table
    #[arg(long)]
    shifts: Option<String>,
    /// Estimate D^r from this many random erasure sets (a lower bound)
    #[arg(long)]
    monte_carlo: Option<usize>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let (command, opts) = match cli.command {
        Sub::GraphInfo(o) => (Command::GraphInfo, o),
        Sub::FrameBuild(o) => (Command::FrameBuild, o),
        Sub::FrameSpark(o) => (Command::FrameSpark, o),
        Sub::OdVerdict(o) => (Command::OdVerdict, o),
        Sub::OdSearch(o) => (Command::OdSearch, o),
        Sub::DrTable(o) => (Command::DrTable, o),
    };
    let shifts = match opts.shifts.as_deref().map(parse_shifts).transpose() {
        Ok(s) => s,
        Err(e) => return failure(&e),
    };
    run(&AnalysisConfig {
        input_path: opts.input,
        command,
        zero_tol: opts.zero_tol,
        tie_tol: opts.tie_tol,
        multiplicity_tol: opts.multiplicity_tol,
        seed: opts.seed,
        trials: opts.trials,
        radius: opts.radius,
        emit_vectors: opts.emit_vectors,
        output_format: opts.format,
        jobs: opts.jobs,
        max_r: opts.max_r,
        shifts,
        monte_carlo: opts.monte_carlo,
    })
}

/// Shifts given inline as JSON, or as a path to a JSON file.
fn parse_shifts(arg: &str) -> Result<Vec<Vec<f64>>, Error> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| Error::InvalidArgument(format!("cannot read shifts file {arg}: {e}")))?
    };
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("--shifts is not a list of vectors: {e}")))
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::Shape(_)
        | Error::InvalidArgument(_)
        | Error::EdgelessGraph
        | Error::IsolatedVertex(_) => 1,
        Error::NotSymmetric(_)
        | Error::NoConvergence { .. }
        | Error::Overflow { .. }
        | Error::RankMismatch { .. }
        | Error::DualityResidual(_) => 2,
        Error::GuardExceeded { .. } => 3,
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome {
        code: exit_code(e),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

/// Runs one analysis. Identical configs and inputs give byte-identical
/// output, whatever the worker count.
pub fn run(config: &AnalysisConfig) -> Outcome {
    if let Err(e) = config.validate() {
        return failure(&e);
    }
    let work = || execute(config);
    let result = match config.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(Error::InvalidArgument(format!("cannot start {jobs} workers: {e}"))),
        },
        None => work(),
    };
    match result {
        Ok((stdout, stderr)) => Outcome { code: 0, stdout, stderr },
        Err(e) => failure(&e),
    }
}

fn execute(config: &AnalysisConfig) -> Result<(String, String), Error> {
    let text = std::fs::read_to_string(&config.input_path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", config.input_path.display()),
    })?;
    let g = Graph::parse_edge_list(&text)?;
    let mut warnings = String::new();

    let mut report = Map::new();
    report.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    report.insert("command".into(), json!(config.command.name()));
    report.insert("input".into(), json!(config.input_path.display().to_string()));
    report.insert("config".into(), config_section(config));

    let mut graph = graph_section(&g);
    let mut rows = Table::new(&["vertex", "component", "degree"]);
    for v in 0..g.vertex_count() {
        rows.push(vec![json!(v + 1), json!(g.component_of(v) + 1), json!(g.neighbors(v).len())]);
    }

    match config.command {
        Command::GraphInfo => {
            let walk = is_walk_regular_with_tol(&g, config.multiplicity_tol)?;
            graph.insert("walk_regular".into(), walk_section(&g, &walk));
            let spectrum = eigh_symmetric(&g.laplacian_matrix())?;
            let eigenvalues: Vec<f64> = spectrum
                .eigenvalues
                .iter()
                .map(|&l| if spectrum.is_zero(l) { 0.0 } else { l })
                .collect();
            graph.insert("laplacian_spectrum".into(), json!(eigenvalues));
            let l_diag = moore_penrose(&g.laplacian_matrix())?.diagonal();
            let a_diag = moore_penrose(&g.adjacency_matrix())?.diagonal();
            graph.insert(
                "pinv_diagonal_spread".into(),
                json!({
                    "laplacian": spread(&l_diag),
                    "adjacency": spread(&a_diag),
                }),
            );
            rows.add_column("laplacian_pinv_diagonal", &l_diag);
            report.insert("graph".into(), Value::Object(graph));
        }
        Command::FrameBuild | Command::FrameSpark => {
            let b = build_lg_frame_with_tol(&g, config.zero_tol)?;
            report.insert("graph".into(), Value::Object(graph));
            report.insert("frame".into(), frame_section(&b, config.emit_vectors, &mut warnings)?);
            rows.add_column("norm_squared", &b.to_original_order(&squared_norms(&b)));
            if config.command == Command::FrameSpark {
                report.insert("spark".into(), spark_section(&b, &g)?);
            }
        }
        Command::OdVerdict | Command::OdSearch => {
            let b = build_lg_frame_with_tol(&g, config.zero_tol)?;
            let walk = is_walk_regular_with_tol(&g, config.multiplicity_tol)?;
            graph.insert("walk_regular".into(), walk_section(&g, &walk));
            report.insert("graph".into(), Value::Object(graph));
            report.insert("frame".into(), frame_section(&b, config.emit_vectors, &mut warnings)?);
            let r = canonical_verdict(&b, &config.verdict_options())?;
            report.insert("erasure".into(), erasure_section(&b, &r));

            let dual = canonical_dual(&b)?.realized;
            let dual_norms: Vec<f64> = (0..b.frame.count()).map(|i| norm(&dual.column(i))).collect();
            rows.add_column("norm_squared", &b.to_original_order(&squared_norms(&b)));
            rows.add_column("dual_norm", &b.to_original_order(&dual_norms));
            rows.add_column("product", &r.per_vertex_products);
            let in_lambda1: Vec<bool> =
                (0..g.vertex_count()).map(|v| r.lambda1_set.contains(&v)).collect();
            rows.add_column("in_lambda1", &in_lambda1);
        }
        Command::DrTable => {
            let b = build_lg_frame_with_tol(&g, config.zero_tol)?;
            report.insert("graph".into(), Value::Object(graph));
            let (erasure, table) = dr_section(&b, config)?;
            report.insert("erasure".into(), erasure);
            rows = table;
        }
    }

    let mut value = Value::Object(report);
    round_floats(&mut value);
    let out = match config.output_format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => render_text(&value),
        OutputFormat::Csv => rows.to_csv(),
    };
    Ok((out, warnings))
}

fn config_section(config: &AnalysisConfig) -> Value {
    let mut c = Map::new();
    c.insert("zero_tol".into(), json!(config.zero_tol));
    c.insert("tie_tol".into(), json!(config.tie_tol));
    c.insert("multiplicity_tol".into(), json!(config.multiplicity_tol));
    c.insert("seed".into(), json!(config.seed));
    c.insert("trials".into(), json!(config.trials));
    c.insert("radius".into(), json!(config.radius));
    c.insert("emit_vectors".into(), json!(config.emit_vectors));
    c.insert("format".into(), json!(config.output_format.name()));
    if config.command == Command::DrTable {
        c.insert("max_r".into(), json!(config.max_r));
        if let Some(s) = config.monte_carlo {
            c.insert("monte_carlo".into(), json!(s));
        }
        if let Some(s) = &config.shifts {
            c.insert("shifts".into(), json!(s));
        }
    }
    Value::Object(c)
}

fn graph_section(g: &Graph) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("n".into(), json!(g.vertex_count()));
    m.insert("m".into(), json!(g.edge_count()));
    let components: Vec<Vec<usize>> = g
        .components()
        .iter()
        .map(|c| c.iter().map(|v| v + 1).collect())
        .collect();
    m.insert("components".into(), json!(components));
    m.insert("connected".into(), json!(g.is_connected()));
    m.insert("degrees".into(), json!(g.degree_sequence()));
    m.insert(
        "regular".into(),
        match g.is_regular() {
            Some(r) => json!(r),
            None => json!(false),
        },
    );
    m
}

fn walk_section(g: &Graph, walk: &WalkRegularityReport) -> Value {
    let mut m = Map::new();
    m.insert("is_walk_regular".into(), json!(walk.is_walk_regular));
    if let Some(k) = walk.distinct_nonzero_eigenvalues {
        m.insert("distinct_nonzero_eigenvalues".into(), json!(k));
    }
    let powers: Vec<Value> = walk
        .checked_powers
        .iter()
        .map(|(p, diag)| json!({ "power": p, "closed_walks": diag }))
        .collect();
    m.insert("checked_powers".into(), Value::Array(powers));
    if let Some(v) = &walk.first_violation {
        m.insert(
            "first_violation".into(),
            json!({
                "power": v.power,
                "vertices": [v.vertices.0 + 1, v.vertices.1 + 1],
                "closed_walks": [v.counts.0, v.counts.1],
            }),
        );
    }
    // the definition check can overflow on large graphs; then it is skipped
    if let Ok(def) = is_walk_regular_definition(g, g.vertex_count()) {
        m.insert(
            "definition_agrees".into(),
            json!(def.is_walk_regular == walk.is_walk_regular),
        );
    }
    Value::Object(m)
}

fn squared_norms(b: &GraphFrameBundle) -> Vec<f64> {
    b.frame.norms().iter().map(|x| x * x).collect()
}

fn frame_section(b: &GraphFrameBundle, emit_vectors: bool, warnings: &mut String) -> Result<Value, Error> {
    let mut m = Map::new();
    m.insert("dim".into(), json!(b.frame.dim()));
    m.insert("count".into(), json!(b.frame.count()));
    m.insert("gramian_residual".into(), json!(b.gramian_residual()));
    m.insert("frame_operator_diag".into(), json!(b.frame.frame_operator().diagonal()));
    m.insert("norms_squared".into(), json!(b.to_original_order(&squared_norms(b))));
    m.insert("canonical_duality_residual".into(), json!(canonical_dual(b)?.duality_residual));
    if emit_vectors {
        let vectors: Vec<Vec<f64>> = (0..b.frame.count())
            .map(|v| b.frame.vector(b.permutation[v]))
            .collect();
        m.insert("vectors".into(), json!(vectors));
        m.insert("basis_dependent".into(), json!(true));
        warnings.push_str(
            "warning: frame vectors depend on the choice of eigenvector basis; only their Gramian is invariant\n",
        );
    }
    Ok(Value::Object(m))
}

fn spark_section(b: &GraphFrameBundle, g: &Graph) -> Result<Value, Error> {
    let brute = spark(&b.frame)?;
    let formula = spark_via_components(g)?;
    Ok(json!({
        "value": brute,
        "full_spark": brute == b.frame.dim() + 1,
        "method_agreement": brute == formula,
        "brute_force": brute,
        "component_formula": formula,
    }))
}

fn one_based_sorted(b: &GraphFrameBundle, frame_indices: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = frame_indices.iter().map(|&i| b.original_label(i) + 1).collect();
    out.sort_unstable();
    out
}

fn erasure_section(b: &GraphFrameBundle, r: &ErasureReport) -> Value {
    let mut m = Map::new();
    m.insert("d1_canonical".into(), json!(r.d1_canonical));
    m.insert("per_vertex_products".into(), json!(r.per_vertex_products));
    let lambda1: Vec<usize> = r.lambda1_set.iter().map(|v| v + 1).collect();
    m.insert("lambda1_set".into(), json!(lambda1));
    m.insert(
        "constancy".into(),
        json!({ "is_constant": r.constancy.is_constant, "spread": r.constancy.spread }),
    );
    m.insert("verdict".into(), json!(r.verdict));

    let basis = &r.verdict_basis;
    let mut bm = Map::new();
    bm.insert("rule".into(), json!(basis.rule));
    if let Some(c) = &basis.walk_regular_components {
        bm.insert("walk_regular_components".into(), json!(c.iter().map(|c| c + 1).collect::<Vec<_>>()));
    }
    if let Some(w) = &basis.dependence {
        bm.insert(
            "dependence".into(),
            json!({
                "lambda1": one_based_sorted(b, &w.lambda1),
                "lambda1_rank": w.lambda1_rank,
                "dependence_coefficients": b.to_original_order(&w.dependence_coefficients),
                "dependence_residual": w.dependence_residual,
            }),
        );
    }
    if let Some(w) = &basis.non_uniqueness {
        bm.insert(
            "non_uniqueness".into(),
            json!({ "component": w.component + 1, "shifts": w.shifts, "d1": w.d1 }),
        );
    }
    bm.insert("notes".into(), json!(basis.notes));
    m.insert("verdict_basis".into(), Value::Object(bm));

    if let Some(s) = &r.search_best {
        m.insert(
            "search_best".into(),
            json!({
                "d1": s.d1,
                "canonical_d1": s.canonical_d1,
                "improved": s.improved,
                "shifts": s.shifts,
                "trials": s.trials,
                "radius": s.radius,
                "seed": s.seed,
            }),
        );
    }
    Value::Object(m)
}

fn dr_section(b: &GraphFrameBundle, config: &AnalysisConfig) -> Result<(Value, Table), Error> {
    let products = canonical_products(b)?;
    let d1 = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let canonical = canonical_dual(b)?;
    let given = config
        .shifts
        .as_ref()
        .map(|s| dual_family_member(b, s))
        .transpose()?;

    let n = b.frame.count();
    let max_r = config.max_r.min(n - 1);
    // refuse up front rather than after the cheaper rows
    if config.monte_carlo.is_none() {
        if let Some(r) = (1..=max_r).find(|&r| binomial(n, r) > DR_GUARD) {
            return Err(Error::GuardExceeded { needed: binomial(n, r), limit: DR_GUARD });
        }
    }
    let mut entries = Vec::new();
    let mut table = Table::new(&["r", "canonical", "canonical_set"]);
    if given.is_some() {
        table.header.extend(["given".to_string(), "given_set".to_string()]);
    }
    let mut canonical_series = Vec::new();
    let mut given_series = Vec::new();
    for r in 1..=max_r {
        let mut row = Map::new();
        row.insert("r".into(), json!(r));
        let (value, set) = worst_erasure(b, &canonical.realized, r, config)?;
        canonical_series.push(value);
        let mut csv = vec![json!(r), json!(value), json!(join(&set))];
        row.insert("canonical".into(), json!({ "value": value, "erasure_set": set }));
        if let Some(h) = &given {
            let (value, set) = worst_erasure(b, &h.realized, r, config)?;
            given_series.push(value);
            csv.extend([json!(value), json!(join(&set))]);
            row.insert("given".into(), json!({ "value": value, "erasure_set": set }));
        }
        entries.push(Value::Object(row));
        table.push(csv);
    }

    let mut m = Map::new();
    m.insert("d1_canonical".into(), json!(d1));
    m.insert("per_vertex_products".into(), json!(b.to_original_order(&products)));
    m.insert(
        "lambda1_set".into(),
        json!(one_based_sorted(b, &lambda1_set(b, config.tie_tol)?)),
    );
    let mut dr = Map::new();
    dr.insert("rows".into(), Value::Array(entries));
    dr.insert("lower_bound".into(), json!(config.monte_carlo.is_some()));
    dr.insert("canonical_monotone".into(), json!(is_monotone(&canonical_series)));
    if let Some(h) = &given {
        dr.insert("given_monotone".into(), json!(is_monotone(&given_series)));
        dr.insert("given_duality_residual".into(), json!(h.duality_residual));
    }
    m.insert("dr_table".into(), Value::Object(dr));
    Ok((Value::Object(m), table))
}

fn worst_erasure(
    b: &GraphFrameBundle,
    h: &DenseMatrix,
    r: usize,
    config: &AnalysisConfig,
) -> Result<(f64, Vec<usize>), Error> {
    let (value, set) = match config.monte_carlo {
        Some(samples) => d_r_lower_bound(&b.frame, h, r, samples, config.seed)?,
        None => d_r(&b.frame, h, r)?,
    };
    Ok((value, one_based_sorted(b, &set)))
}

fn is_monotone(series: &[f64]) -> bool {
    series.windows(2).all(|w| w[0] <= w[1] + 1e-12 * w[1].abs().max(1.0))
}

fn join(set: &[usize]) -> String {
    set.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn spread(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Rounds every float in `v` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = json!(round_significant(x));
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn round_significant(x: f64) -> f64 {
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    // no negative zero in reports
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }

    fn add_column<T: serde::Serialize>(&mut self, name: &str, values: &[T]) {
        self.header.push(name.to_string());
        for (row, v) in self.rows.iter_mut().zip(values) {
            row.push(json!(v));
        }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|v| {
                    let mut v = v.clone();
                    round_floats(&mut v);
                    match v {
                        Value::String(s) => s,
                        other => other.to_string(),
                    }
                })
                .collect();
            w.write_record(&fields).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, v) in map {
            render_entry(&mut out, 0, k, v);
        }
    }
    out
}

fn render_entry(out: &mut String, depth: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, v) in map {
                render_entry(out, depth + 1, k, v);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (i, item) in items.iter().enumerate() {
                render_entry(out, depth + 1, &format!("[{}]", i + 1), item);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{pad}{key}: {s}");
        }
        other => {
            let _ = writeln!(out, "{pad}{key}: {other}");
        }
    }
}
