//! `sgs analyze`: sparsity, Cheeger, spectrum and verification reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use sgs_core::constants::{cor13, form_to_sparse, sparse_to_form};
use sgs_core::operators::{degree, kato_gap, schrodinger, upside_down_identity, C64};
use sgs_core::sparseness::{amin_zero_k, cheeger, kmin_profile, Method};
use sgs_core::spectra::{
    cheeger_form_margins, eigenvalues, optimal_ktilde, FormConstants, ratio_report, sandwich_margins, Side,
    DEFAULT_A_TILDE_GRID,
};
use sgs_core::{Graph, PhaseField};

use crate::graph_file::{GraphFile, LoadedGraph};
use crate::report::{cheeger_json, num, nums, sparseness_json, threshold_json, GraphDigest, Ledger, ReportFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Sparsity,
    Cheeger,
    Spectrum,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Flow,
    Bruteforce,
    Both,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Flow => "flow",
            MethodArg::Bruteforce => "bruteforce",
            MethodArg::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Boundary weights a for the sparseness profile.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2")]
    pub a_grid: Vec<f64>,
    /// Form-bound parameters ã in (0,1).
    #[arg(long, value_delimiter = ',')]
    pub atilde_grid: Option<Vec<f64>>,
    /// Cheeger region: `all`, `all-but-border`, or comma-separated vertex ids.
    #[arg(long, default_value = "all")]
    pub region: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Flow)]
    pub method: MethodArg,
    /// Number of top eigenvalue ratios in the spectrum report.
    #[arg(long)]
    pub top_m: Option<usize>,
    /// Margins below -tol fail.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for random phases and test vectors.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random phase fields in the magnetic suites.
    #[arg(long, default_value_t = 3)]
    pub phases: usize,
    /// Random vectors in the Kato sweep.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// CSV table of eigenvalues and ratios (spectrum).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl AnalyzeArgs {
    fn atilde(&self) -> Vec<f64> {
        self.atilde_grid.clone().unwrap_or_else(|| DEFAULT_A_TILDE_GRID.to_vec())
    }
}

pub fn load(path: &Path) -> Result<(Vec<u8>, LoadedGraph)> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let g = GraphFile::parse(text)
        .and_then(GraphFile::load)
        .with_context(|| format!("in {}", path.display()))?;
    Ok((bytes, g))
}

pub fn run(task: Task, path: &Path, args: &AnalyzeArgs, command: Vec<String>) -> Result<ReportFile> {
    let start = Instant::now();
    if !(args.tol >= 0.0) {
        bail!("--tol must be non-negative");
    }
    let (bytes, g) = load(path)?;
    let mut ledger = Ledger::default();
    let mut tolerances = Map::new();
    tolerances.insert("tol".into(), num(args.tol));
    let results = match task {
        Task::Sparsity => sparsity(&g, args, &mut ledger)?,
        Task::Cheeger => cheeger_task(&g, args, &mut ledger)?,
        Task::Spectrum => spectrum(&g, args, &mut ledger)?,
        Task::Verify => {
            tolerances.insert("seed".into(), json!(args.seed));
            verify(&g, args, &mut ledger)?
        }
    };
    Ok(ReportFile {
        command,
        graph: GraphDigest::new(&path.display().to_string(), &bytes, &g),
        results,
        margins: ledger.margins,
        skipped: ledger.skipped,
        tolerances,
        wall_clock_s: start.elapsed().as_secs_f64(),
    })
}

fn methods(m: MethodArg) -> Vec<Method> {
    match m {
        MethodArg::Flow => vec![Method::Flow],
        MethodArg::Bruteforce => vec![Method::BruteForce],
        MethodArg::Both => vec![Method::Flow, Method::BruteForce],
    }
}

fn sparsity(g: &LoadedGraph, args: &AnalyzeArgs, ledger: &mut Ledger) -> Result<Value> {
    let mut profiles = methods(args.method)
        .into_iter()
        .map(|m| kmin_profile(&g.graph, &g.potential, &args.a_grid, m))
        .collect::<sgs_core::Result<Vec<_>>>()?;
    if let [flow, brute] = profiles.as_slice() {
        for (f, b) in flow.iter().zip(brute) {
            ledger.record(format!("agreement[a={}]", f.a), 0.0 - (f.k - b.k).abs());
        }
    }
    let profile = profiles.swap_remove(0);
    let amin = amin_zero_k(&g.graph, &g.potential)?;
    Ok(json!({
        "method": args.method.name(),
        "profile": profile.iter().map(|c| sparseness_json(g, c)).collect::<Vec<_>>(),
        "amin_zero_k": threshold_json(g, &amin),
    }))
}

/// Vertices whose internal degree is below the largest host degree.
fn border(graph: &Graph) -> Vec<bool> {
    let top = graph.max_host_degree();
    (0..graph.vertex_count()).map(|x| graph.degree(x) < top).collect()
}

fn region(g: &LoadedGraph, spec: &str) -> Result<Vec<usize>> {
    let n = g.graph.vertex_count();
    let out = match spec {
        "all" => (0..n).collect(),
        "all-but-border" => {
            let b = border(&g.graph);
            (0..n).filter(|&x| !b[x]).collect()
        }
        ids => {
            let ids: Vec<String> = ids.split(',').map(|s| s.trim().to_string()).collect();
            g.resolve(&ids).context("--region")?
        }
    };
    if out.is_empty() {
        bail!("--region {spec:?} selects no vertices");
    }
    Ok(out)
}

fn cheeger_task(g: &LoadedGraph, args: &AnalyzeArgs, ledger: &mut Ledger) -> Result<Value> {
    let u = region(g, &args.region)?;
    let mut certs = methods(args.method)
        .into_iter()
        .map(|m| cheeger(&g.graph, &g.potential, &u, m))
        .collect::<sgs_core::Result<Vec<_>>>()?;
    if let [flow, brute] = certs.as_slice() {
        ledger.record("agreement", 0.0 - (flow.ratio - brute.ratio).abs());
    }
    let cert = certs.swap_remove(0);
    Ok(json!({
        "method": args.method.name(),
        "region": args.region,
        "region_size": u.len(),
        "certificate": cheeger_json(g, &cert),
    }))
}

fn spectrum(g: &LoadedGraph, args: &AnalyzeArgs, ledger: &mut Ledger) -> Result<Value> {
    let n = g.graph.vertex_count();
    let top_m = args.top_m.unwrap_or(n.min(20));
    let r = ratio_report(&g.graph, &g.potential, g.phase.as_ref(), top_m, &args.atilde())?;
    for c in &r.verified {
        ledger.record(c.id.clone(), c.margin);
    }
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(["index", "eigenvalue", "diag_eigenvalue", "ratio"])?;
        for (i, (ev, dv)) in r.eigenvalues.iter().zip(&r.diag_eigenvalues).enumerate() {
            let ratio = if *dv > 0.0 { (ev / dv).to_string() } else { String::new() };
            w.write_record([i.to_string(), ev.to_string(), dv.to_string(), ratio])?;
        }
        w.flush()?;
    }
    Ok(json!({
        "eigenvalues": nums(&r.eigenvalues),
        "diag_eigenvalues": nums(&r.diag_eigenvalues),
        "norm_bound": num(r.norm_bound),
        "ratios": r.ratios.iter().map(|e| json!({
            "index": e.index,
            "eigenvalue": num(e.eigenvalue),
            "diag_eigenvalue": num(e.diag_eigenvalue),
            "ratio": e.ratio.map(num),
        })).collect::<Vec<_>>(),
        "brackets": r.brackets.iter().map(|b| json!({
            "a_tilde": num(b.a_tilde),
            "k_lower": num(b.k_lower),
            "k_upper": num(b.k_upper),
            "certified": [num(b.certified.0), num(b.certified.1)],
            "ratios_within_unit_band": b.ratios_within_unit_band,
        })).collect::<Vec<_>>(),
        "best_bracket": r.best_bracket,
    }))
}

fn random_phase(rng: &mut ChaCha8Rng, graph: &Graph) -> Result<PhaseField> {
    let theta = (0..graph.edge_count())
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    Ok(PhaseField::from_edge_values(graph, theta)?)
}

fn verify(g: &LoadedGraph, args: &AnalyzeArgs, ledger: &mut Ledger) -> Result<Value> {
    let (graph, q) = (&g.graph, &g.potential);
    let n = graph.vertex_count();
    let grid = args.atilde();
    let q_non_negative = q.is_non_negative();
    let mut results = Map::new();

    let plain = schrodinger(graph, q, None)?;
    let diag = degree(graph, q)?;
    let ev = eigenvalues(&plain)?;
    let dv = eigenvalues(&diag)?;
    results.insert("lambda_0".into(), num(ev[0]));
    results.insert("lambda_max".into(), num(ev[n - 1]));

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut phases: Vec<(String, PhaseField)> = Vec::new();
    if let Some(p) = &g.phase {
        phases.push(("file".into(), p.clone()));
    }
    for i in 0..args.phases {
        phases.push((format!("random{i}"), random_phase(&mut rng, graph)?));
    }

    let mut lower_constants = Vec::with_capacity(grid.len());
    for &at in &grid {
        let lower = optimal_ktilde(graph, q, None, at, Side::Lower)?;
        let upper = optimal_ktilde(graph, q, None, at, Side::Upper)?;
        let both = FormConstants::new(at, lower.k_tilde.max(upper.k_tilde), Side::Both)?;
        ledger.record(format!("sandwich_optimal[{at}]"), sandwich_margins(&ev, &dv, &both).min());
        ledger.record(format!("upside_down[{at}]"), lower.k_tilde - upper.k_tilde);
        for (name, p) in &phases {
            let m = optimal_ktilde(graph, q, Some(p), at, Side::Both)?;
            ledger.record(format!("magnetic[{at},{name}]"), lower.k_tilde - m.k_tilde);
        }
        lower_constants.push(lower);
    }
    for (name, p) in &phases {
        ledger.record(format!("upside_down_identity[{name}]"), 0.0 - upside_down_identity(graph, p)?);
    }
    let mut kato_min = f64::INFINITY;
    for (_, p) in &phases {
        for _ in 0..args.samples {
            let f: Vec<C64> = (0..n)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            kato_min = kato_min.min(kato_gap(graph, q, p, &f)?);
        }
    }
    if phases.is_empty() || args.samples == 0 || graph.edge_count() == 0 {
        ledger.skip("kato", "no phases, samples or edges");
    } else {
        ledger.record("kato", kato_min);
    }

    if !q_non_negative {
        for suite in ["sandwich_sparse", "form_to_sparse", "dictionary", "cheeger_form", "cor13"] {
            ledger.skip(suite, "requires q >= 0");
        }
        return Ok(Value::Object(results));
    }

    let method = match args.method {
        MethodArg::Bruteforce => Method::BruteForce,
        _ => Method::Flow,
    };
    let mut a_values = args.a_grid.clone();
    if !a_values.contains(&0.0) {
        a_values.insert(0, 0.0);
    }
    let profile = kmin_profile(graph, q, &a_values, method)?;
    for c in &profile {
        if args.a_grid.contains(&c.a) {
            let form = sparse_to_form(c.a, c.k, Some(0.5))?;
            ledger.record(format!("sandwich_sparse[a={}]", c.a), sandwich_margins(&ev, &dv, &form).min());
        }
    }
    let implied = lower_constants
        .iter()
        .map(|c| form_to_sparse(c.a_tilde, c.k_tilde))
        .collect::<sgs_core::Result<Vec<_>>>()?;
    let implied_a: Vec<f64> = implied.iter().map(|&(a, _)| a).collect();
    let reverse = kmin_profile(graph, q, &implied_a, method)?;
    for ((c, &(_, k)), r) in lower_constants.iter().zip(&implied).zip(&reverse) {
        ledger.record(format!("form_to_sparse[{}]", c.a_tilde), k - r.k);
    }

    let all: Vec<usize> = (0..n).collect();
    let alpha = cheeger(graph, q, &all, method)?.ratio;
    results.insert("alpha".into(), num(alpha));
    let (lo, hi) = cheeger_form_margins(graph, q, &all, alpha)?;
    ledger.record("cheeger_form", lo.min(hi));

    if (0..n).all(|x| q.value(x) > 0.0) {
        let amin = amin_zero_k(graph, q)?.value;
        results.insert("amin_zero_k".into(), num(amin));
        ledger.record("dictionary", 0.0 - (alpha - 1.0 / (1.0 + amin)).abs());
    } else {
        ledger.skip("dictionary", "requires q > 0");
    }

    let d = (0..n)
        .map(|x| graph.host_degree(x) as f64 + q.value(x))
        .fold(f64::INFINITY, f64::min);
    results.insert("d".into(), num(d));
    let k0 = profile[0].k;
    let lambda0 = ev[0];
    let mut cor = |id: &str, k: f64| -> Result<()> {
        if k / 2.0 <= d {
            let b = cor13(d, k, None)?;
            ledger.record(format!("{id}[k={k}]"), lambda0 - b.bottom);
        } else {
            ledger.skip(id, "k/2 exceeds d");
        }
        Ok(())
    };
    cor("cor13_bottom", k0)?;
    if graph.is_forest() {
        cor("cor13_forest", 2.0)?;
    }
    Ok(Value::Object(results))
}
