//! Command-line front end: catalog export, ring verification, rank queries,
//! decomposition checks, series tables, and the torus identity sweeps.
//!
//! Exit status is the verdict: 0 when everything requested passed, 1 when a
//! check produced a violation or nonzero residual, 2 for usage and input
//! errors. `--json` switches the report to a stable machine-readable schema
//! with fields command / inputs / result / residuals / runtime_ms.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num::BigRational;
use serde_json::{json, Value};

use crate::catalog::{self, CatalogError};
use crate::elliptic::{self, SeriesError};
use crate::fock::{FockBackend, Partition, Vector};
use crate::fusion::{FusionData, FusionError, RingFile};
use crate::graph::{DualGraph, GraphError, GraphFile};
use crate::laurent::{NonzeroTerm, ZLaurent};
use crate::qseries::QSeries;
use crate::rank::{self, RankError, RankQuery};
use crate::scalar::fmt_rational;
use crate::torus::TraceEngine;

/// Environment variable capping the rayon worker count.
pub const THREADS_ENV: &str = "FUSION_BLOCKS_THREADS";

#[derive(Parser)]
#[command(
    name = "fusion-blocks",
    about = "Exact fusion rings, conformal-block ranks, and torus trace identities",
    version
)]
struct Cli {
    /// Emit a machine-readable JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Numeric tolerance for the catalog S-matrix cross-check (0, 1e-3]
    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog rings: export fusion data as JSON
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check the fusion axioms of a ring file
    VerifyRing {
        /// Path to a fusion-data JSON file
        #[arg(long)]
        ring: String,
    },
    /// Rank of a conformal-block bundle, by closed form or dual graph
    Rank(RankArgs),
    /// Evaluate every trivalent degeneration and compare the ranks
    DecompCheck {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        genus: u32,
        /// Comma-separated leg label names
        #[arg(long, value_delimiter = ',')]
        legs: Vec<String>,
    },
    /// Exact series tables: Eisenstein, Weierstrass-type, P-series
    Series {
        #[command(subcommand)]
        which: SeriesCommand,
    },
    /// Sweep the torus trace identities on the free-boson backend
    ZhuCheck {
        /// Identity to check: a0 | am | aminus1 | sumformula | block
        #[arg(long)]
        identity: String,
        /// Largest degree of the homogeneous inputs a, v
        #[arg(long, default_value_t = 6)]
        deg_max: usize,
        /// q-order of the traces
        #[arg(long, default_value_t = 8)]
        q_order: usize,
        /// Pole order m (for am and block)
        #[arg(long, default_value_t = 2)]
        m: i64,
        /// z-window half-width for the sum formula
        #[arg(long, default_value_t = 4)]
        window: i64,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Write the fusion-data JSON of a named ring to stdout or --out
    Export {
        /// trivial | ising | lee_yang | su2_<k>, or products joined with '*'
        name: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    ring: String,
    /// Genus of the curve (closed-form query)
    #[arg(long)]
    genus: Option<u32>,
    /// Comma-separated leg label names (closed-form query)
    #[arg(long, value_delimiter = ',')]
    legs: Vec<String>,
    /// Path to a dual-graph JSON file (factorization query)
    #[arg(long)]
    graph: Option<String>,
}

#[derive(Subcommand)]
enum SeriesCommand {
    /// Eisenstein q-expansion of weight 2k
    Eisenstein {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Laurent expansion of the order-m Weierstrass-type function
    Wp {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 8)]
        window: i64,
    },
    /// P-series of index m+1 in the region |q| < |z| < 1
    P {
        /// the index is m + 1
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        window: i64,
    },
    /// P-series after the exact substitution z -> e^(uz)
    PExp {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        z_order: i64,
    },
    /// Verify the P-series / Weierstrass identity at the given truncation
    CheckLemma {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Parse(String),
    Label(String),
    Failed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {}", m),
            CliError::Io(m) => write!(f, "io error: {}", m),
            CliError::Parse(m) => write!(f, "parse error: {}", m),
            CliError::Label(m) => write!(f, "label error: {}", m),
            CliError::Failed(m) => write!(f, "check failed: {}", m),
        }
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

impl From<FusionError> for CliError {
    fn from(e: FusionError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownLabel(_, _) => CliError::Label(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<RankError> for CliError {
    fn from(e: RankError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::torus::TorusError> for CliError {
    fn from(e: crate::torus::TorusError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Run the CLI against the given arguments, writing all output to `out`.
/// Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    init_thread_pool();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{}", e);
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if !(cli.tolerance > 0.0 && cli.tolerance <= 1e-3) {
        let _ = writeln!(out, "usage error: --tolerance must lie in (0, 1e-3]");
        return 2;
    }
    let started = Instant::now();
    let mut report = Report::new(&cli.command);
    let result = dispatch(&cli, &mut report, out);
    let runtime_ms = started.elapsed().as_millis();
    match result {
        Ok(()) => {
            if cli.json {
                report.emit(out, "ok", runtime_ms);
            }
            0
        }
        Err(e) => {
            if cli.json {
                report.push_residual(json!({ "error": e.to_string() }));
                report.emit(out, "error", runtime_ms);
            } else {
                let _ = writeln!(out, "{}", e);
            }
            e.code()
        }
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Accumulates the machine-readable report fields.
struct Report {
    command: String,
    inputs: Value,
    result: Value,
    residuals: Vec<Value>,
}

impl Report {
    fn new(cmd: &Command) -> Self {
        let name = match cmd {
            Command::Catalog { .. } => "catalog",
            Command::VerifyRing { .. } => "verify-ring",
            Command::Rank(_) => "rank",
            Command::DecompCheck { .. } => "decomp-check",
            Command::Series { .. } => "series",
            Command::ZhuCheck { .. } => "zhu-check",
        };
        Report {
            command: name.to_string(),
            inputs: Value::Null,
            result: Value::Null,
            residuals: Vec::new(),
        }
    }

    fn set_inputs(&mut self, v: Value) {
        self.inputs = v;
    }

    fn set_result(&mut self, v: Value) {
        self.result = v;
    }

    fn push_residual(&mut self, v: Value) {
        self.residuals.push(v);
    }

    fn emit(&self, out: &mut dyn Write, status: &str, runtime_ms: u128) {
        let doc = json!({
            "command": self.command,
            "inputs": self.inputs,
            "result": if self.result.is_null() { json!(status) } else { self.result.clone() },
            "residuals": self.residuals,
            "runtime_ms": runtime_ms as u64,
        });
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap());
    }
}

fn load_ring(path: &str) -> Result<FusionData, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {}", path, e)))?;
    let file: RingFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: line {} column {}: {}", path, e.line(), e.column(), e)))?;
    Ok(FusionData::from_file(file)?)
}

fn resolve_legs(ring: &FusionData, names: &[String]) -> Result<Vec<usize>, CliError> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| {
            ring.resolve(n).ok_or_else(|| {
                CliError::Label(format!(
                    "unknown label {:?}; valid labels are [{}]",
                    n,
                    ring.labels().join(", ")
                ))
            })
        })
        .collect()
}

fn dispatch(cli: &Cli, report: &mut Report, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Catalog { action } => match action {
            CatalogAction::Export { name, out: out_path } => {
                catalog_export(name, out_path.as_deref(), cli, report, out)
            }
        },
        Command::VerifyRing { ring } => verify_ring(ring, cli, report, out),
        Command::Rank(args) => rank_command(args, cli, report, out),
        Command::DecompCheck { ring, genus, legs } => {
            decomp_check(ring, *genus, legs, cli, report, out)
        }
        Command::Series { which } => series_command(which, cli, report, out),
        Command::ZhuCheck {
            identity,
            deg_max,
            q_order,
            m,
            window,
        } => zhu_check(identity, *deg_max, *q_order, *m, *window, cli, report, out),
    }
}

fn catalog_export(
    name: &str,
    out_path: Option<&str>,
    cli: &Cli,
    report: &mut Report,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let ring = catalog::by_name(name)?;
    // cross-check against the numeric Verlinde oracle where one exists
    let oracle = match name {
        "ising" => Some(catalog::ising_smatrix()),
        "lee_yang" | "lee-yang" => Some(catalog::lee_yang_smatrix()),
        _ => name
            .strip_prefix("su2_")
            .and_then(|k| k.parse::<u32>().ok())
            .filter(|&k| (1..=8).contains(&k))
            .map(catalog::su2_smatrix),
    };
    if let Some(s) = oracle {
        let numeric = catalog::from_smatrix_with_tolerance(&s, cli.tolerance)?;
        let n = ring.rank_plus_one();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if ring.n(i, j, k) != numeric.n(i, j, k) {
                        return Err(CliError::Failed(format!(
                            "catalog tensor disagrees with the S-matrix oracle at ({}, {}, {})",
                            i, j, k
                        )));
                    }
                }
            }
        }
    }
    let text = serde_json::to_string_pretty(&ring.to_file()).unwrap();
    report.set_inputs(json!({ "name": name }));
    report.set_result(json!({ "labels": ring.labels() }));
    match out_path {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Io(format!("{}: {}", path, e)))?,
        None => {
            if !cli.json {
                writeln!(out, "{}", text).ok();
            } else {
                report.set_result(serde_json::from_str(&text).unwrap());
            }
        }
    }
    Ok(())
}

fn verify_ring(
    path: &str,
    cli: &Cli,
    report: &mut Report,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let ring = load_ring(path)?;
    report.set_inputs(json!({ "ring": path, "labels": ring.labels() }));
    let violations = ring.verify_axioms();
    if violations.is_empty() {
        if !cli.json {
            writeln!(out, "ok: {} labels, all fusion axioms hold", ring.rank_plus_one()).ok();
        }
        report.set_result(json!("valid"));
        Ok(())
    } else {
        for v in &violations.0 {
            report.push_residual(json!({ "axiom": v.axiom.to_string(), "witness": v.witness }));
            if !cli.json {
                writeln!(out, "violation: {}", v).ok();
            }
        }
        Err(CliError::Failed(format!(
            "{} axiom violation(s)",
            violations.0.len()
        )))
    }
}

fn rank_command(
    args: &RankArgs,
    cli: &Cli,
    report: &mut Report,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let ring = load_ring(&args.ring)?;
    let value = match (&args.graph, args.genus) {
        (Some(graph_path), None) => {
            let text = std::fs::read_to_string(graph_path)
                .map_err(|e| CliError::Io(format!("{}: {}", graph_path, e)))?;
            let file: GraphFile = serde_json::from_str(&text).map_err(|e| {
                CliError::Parse(format!(
                    "{}: line {} column {}: {}",
                    graph_path,
                    e.line(),
                    e.column(),
                    e
                ))
            })?;
            let graph = DualGraph::from_file(file, &ring)?;
            report.set_inputs(json!({ "ring": args.ring, "graph": graph_path }));
            rank::rank_dual_graph(&ring, &graph)?
        }
        (None, Some(genus)) => {
            let legs = resolve_legs(&ring, &args.legs)?;
            report.set_inputs(json!({
                "ring": args.ring,
                "genus": genus,
                "legs": args.legs,
            }));
            rank::rank_closed_form(&ring, &RankQuery::new(genus, legs))?
        }
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --genus (with optional --legs) or --graph".into(),
            ))
        }
    };
    report.set_result(json!(value.to_string()));
    if !cli.json {
        writeln!(out, "{}", value).ok();
    }
    Ok(())
}

fn decomp_check(
    ring_path: &str,
    genus: u32,
    legs: &[String],
    cli: &Cli,
    report: &mut Report,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let ring = load_ring(ring_path)?;
    let legs = resolve_legs(&ring, legs)?;
    report.set_inputs(json!({ "ring": ring_path, "genus": genus, "legs": legs }));
    let rep = rank::decomposition_invariance(&ring, genus, &legs)?;
    report.set_result(json!({
        "closed_form": rep.closed_form.to_string(),
        "graphs": rep.graph_count,
        "common_value": rep.common_value.as_ref().map(|v| v.to_string()),
    }));
    if let Some((idx, value)) = &rep.first_discrepancy {
        report.push_residual(json!({ "graph": idx, "value": value.to_string() }));
        return Err(CliError::Failed(format!(
            "degeneration {} gives {} but the first one gives {}",
            idx,
            value,
            rep.common_value.unwrap()
        )));
    }
    if !rep.consistent() {
        return Err(CliError::Failed(format!(
            "closed form {} disagrees with the common degeneration value {:?}",
            rep.closed_form, rep.common_value
        )));
    }
    if !cli.json {
        writeln!(
            out,
            "ok: {} trivalent degenerations all give rank {}",
            rep.graph_count, rep.closed_form
        )
        .ok();
    }
    Ok(())
}

/// One "q^n z^e u^j : rational" table line per coefficient.
fn print_qseries_table(out: &mut dyn Write, s: &QSeries) {
    for n in 0..=s.order() {
        let c = s.coeff(n);
        if c.is_zero() {
            continue;
        }
        let exp = s.offset() + BigRational::from_integer(n.into());
        for (j, r) in c.iter() {
            writeln!(out, "q^{} z^0 u^{} : {}", fmt_rational(&exp), j, fmt_rational(r)).ok();
        }
    }
}

fn print_zlaurent_table(out: &mut dyn Write, z: &ZLaurent) {
    for t in z.nonzero_terms() {
        for (j, r) in t.value.iter() {
            writeln!(out, "q^{} z^{} u^{} : {}", t.q_exp, t.z_exp, j, fmt_rational(r)).ok();
        }
    }
}

fn qseries_json(s: &QSeries) -> Value {
    let mut terms = Vec::new();
    for n in 0..=s.order() {
        let c = s.coeff(n);
        if c.is_zero() {
            continue;
        }
        let exp = s.offset() + BigRational::from_integer(n.into());
        let us: Vec<Value> = c
            .iter()
            .map(|(j, r)| json!({ "u_power": j, "value": fmt_rational(r) }))
            .collect();
        terms.push(json!({ "q_power": fmt_rational(&exp), "coefficient": us }));
    }
    json!(terms)
}

fn zlaurent_json(z: &ZLaurent) -> Value {
    let terms: Vec<Value> = z
        .nonzero_terms()
        .iter()
        .map(|t| {
            let us: Vec<Value> = t
                .value
                .iter()
                .map(|(j, r)| json!({ "u_power": j, "value": fmt_rational(r) }))
                .collect();
            json!({ "q_power": t.q_exp, "z_power": t.z_exp, "coefficient": us })
        })
        .collect();
    json!(terms)
}

fn nonzero_term_json(t: &NonzeroTerm) -> Value {
    let us: Vec<Value> = t
        .value
        .iter()
        .map(|(j, r)| json!({ "u_power": j, "value": fmt_rational(r) }))
        .collect();
    json!({ "q_power": t.q_exp, "z_power": t.z_exp, "coefficient": us })
}

fn series_command(
    which: &SeriesCommand,
    cli: &Cli,
    report: &mut Report,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match which {
        SeriesCommand::Eisenstein { k, order } => {
            if *k < 1 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            report.set_inputs(json!({ "series": "eisenstein", "k": k, "order": order }));
            let s = elliptic::eisenstein(*k, *order);
            report.set_result(qseries_json(&s));
            if !cli.json {
                print_qseries_table(out, &s);
            }
            Ok(())
        }
        SeriesCommand::Wp { m, order, window } => {
            report.set_inputs(json!({ "series": "wp", "m": m, "order": order, "window": window }));
            let z = elliptic::wp_expansion(*m, *order, -(*window), *window)?;
            report.set_result(zlaurent_json(&z));
            if !cli.json {
                print_zlaurent_table(out, &z);
            }
            Ok(())
        }
        SeriesCommand::P { m, order, window } => {
            report.set_inputs(json!({ "series": "p", "m": m, "order": order, "window": window }));
            let z = elliptic::p_series(*m + 1, *order, -(*window), *window);
            report.set_result(zlaurent_json(&z));
            if !cli.json {
                print_zlaurent_table(out, &z);
            }
            Ok(())
        }
        SeriesCommand::PExp { m, order, z_order } => {
            report.set_inputs(json!({ "series": "p-exp", "m": m, "order": order, "z_order": z_order }));
            let z = elliptic::p_series_exp(*m + 1, *order, *z_order);
            report.set_result(zlaurent_json(&z));
            if !cli.json {
                print_zlaurent_table(out, &z);
            }
            Ok(())
        }
        SeriesCommand::CheckLemma { m, order } => {
            if *m < 1 {
                return Err(CliError::Usage("--m must be at least 1".into()));
            }
            report.set_inputs(json!({ "series": "check-lemma", "m": m, "order": order }));
            let bad = elliptic::p_wp_lemma_check(*m, *order, *order as i64)?;
            for t in &bad {
                report.push_residual(nonzero_term_json(t));
                if !cli.json {
                    writeln!(out, "residual {}", t).ok();
                }
            }
            if bad.is_empty() {
                report.set_result(json!("residual empty"));
                if !cli.json {
                    writeln!(
                        out,
                        "ok: P_{} identity residual empty through (q^{}, z^{})",
                        m, order, order
                    )
                    .ok();
                }
                Ok(())
            } else {
                Err(CliError::Failed(format!(
                    "{} nonzero residual coefficient(s)",
                    bad.len()
                )))
            }
        }
    }
}

fn zhu_check(
    identity: &str,
    deg_max: usize,
    q_order: usize,
    m: i64,
    window: i64,
    cli: &Cli,
    report: &mut Report,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    report.set_inputs(json!({
        "identity": identity,
        "deg_max": deg_max,
        "q_order": q_order,
        "m": m,
        "window": window,
    }));
    if !matches!(identity, "a0" | "am" | "aminus1" | "block" | "sumformula") {
        return Err(CliError::Usage(format!(
            "unknown identity {:?}; use a0 | am | aminus1 | sumformula | block",
            identity
        )));
    }
    let backend = FockBackend::new();
    let engine = TraceEngine::new(&backend);
    let states: Vec<Partition> = (0..=deg_max).flat_map(|n| backend_basis(&backend, n)).collect();

    use rayon::prelude::*;
    let outcomes: Result<Vec<(Partition, Partition, Option<String>)>, CliError> = states
        .par_iter()
        .flat_map(|a_state| states.par_iter().map(move |v_state| (a_state, v_state)))
        .map(|(a_state, v_state)| {
            let a = Vector::basis(a_state.clone());
            let v = Vector::basis(v_state.clone());
            let bad: Option<String> = match identity {
                "a0" => residual_of(engine.check_a0(&a, &v, q_order))?,
                "am" => residual_of(engine.check_am(&a, &v, m, q_order))?,
                "aminus1" => residual_of(engine.check_aminus1(&a, &v, q_order))?,
                "block" => residual_of(engine.block_annihilation(&a, &v, m, q_order))?,
                "sumformula" => {
                    let r = engine.check_sum_formula(&a, &v, q_order, window)?;
                    r.first_nonzero().map(|(s, t)| format!("state {} {}", s, t))
                }
                _ => unreachable!(),
            };
            Ok((a_state.clone(), v_state.clone(), bad))
        })
        .collect();

    let mut failures = 0usize;
    let mut pairs = 0usize;
    for (a_state, v_state, bad) in outcomes? {
        pairs += 1;
        if let Some(first_bad) = bad {
            failures += 1;
            report.push_residual(json!({
                "identity": identity,
                "a": a_state.to_string(),
                "v": v_state.to_string(),
                "m": m,
                "first_bad_coefficient": first_bad,
            }));
            if !cli.json {
                writeln!(
                    out,
                    "{}, a={}, v={}, m={}, {}",
                    identity, a_state, v_state, m, first_bad
                )
                .ok();
            }
        }
    }
    report.set_result(json!({ "pairs": pairs, "failures": failures }));
    if failures > 0 {
        return Err(CliError::Failed(format!(
            "{} of {} pairs left a nonzero residual",
            failures, pairs
        )));
    }
    if !cli.json {
        writeln!(
            out,
            "ok: {} residuals identically zero ({} pairs, degrees <= {}, q-order {})",
            identity, pairs, deg_max, q_order
        )
        .ok();
    }
    Ok(())
}

fn backend_basis(backend: &FockBackend, n: usize) -> Vec<Partition> {
    use crate::fock::Backend as _;
    backend.basis(n)
}

fn residual_of(
    r: Result<QSeries, crate::torus::TorusError>,
) -> Result<Option<String>, CliError> {
    Ok(crate::torus::describe_residual(&r?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(args.iter().map(|s| s.to_string()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn series_check_lemma_passes() {
        let (code, text) = run_to_string(&[
            "fusion-blocks",
            "series",
            "check-lemma",
            "--m",
            "2",
            "--order",
            "6",
        ]);
        assert_eq!(code, 0, "{}", text);
        assert!(text.contains("ok"));
    }

    #[test]
    fn eisenstein_table_format() {
        let (code, text) = run_to_string(&[
            "fusion-blocks",
            "series",
            "eisenstein",
            "--k",
            "1",
            "--order",
            "2",
        ]);
        assert_eq!(code, 0);
        assert!(text.contains("q^0 z^0 u^2 : -1/12"), "{}", text);
        assert!(text.contains("q^1 z^0 u^2 : 2"), "{}", text);
    }

    #[test]
    fn tolerance_validation() {
        let (code, text) = run_to_string(&[
            "fusion-blocks",
            "--tolerance",
            "0.5",
            "series",
            "eisenstein",
            "--k",
            "1",
        ]);
        assert_eq!(code, 2);
        assert!(text.contains("tolerance"));
    }

    #[test]
    fn unknown_identity_is_usage_error() {
        let (code, _) = run_to_string(&["fusion-blocks", "zhu-check", "--identity", "nope"]);
        assert_eq!(code, 2);
    }
}
