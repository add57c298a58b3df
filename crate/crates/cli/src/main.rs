//! Command-line pipeline: generate or ingest networks, compute distance
//! histograms, simulate SIR cascades, fit the model families, and export
//! embeddings and summary reports.
//!
//! Every randomized subcommand requires an explicit `--seed`; outputs are
//! byte-identical across runs for a fixed configuration. Each data file is
//! paired with a `<file>.json` sidecar recording the configuration and
//! seeds that produced it.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 data or parse
//! error, 3 numeric failure (no family fit converged).

mod docs;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use netdist::dist::{DistError, ModelFamily};
use netdist::epidemics::{self, EpidemicsError};
use netdist::fit::{self, FitError};
use netdist::graph::generate::{generate, GraphModel, GraphModelSpec};
use netdist::graph::{self, Graph, GraphError};
use netdist::paths::{self, PathsError, SourceSelection};
use netdist::seed::derive_seed;

use docs::*;

#[derive(Parser)]
#[command(name = "netdist", version, about = "Shortest-path and outbreak statistics on networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic random graph and write its edge list.
    Generate(GenerateArgs),
    /// Aggregate a shortest-path-length histogram over BFS sources.
    Histogram(HistogramArgs),
    /// Simulate SIR cascades and write outbreak traces.
    Simulate(SimulateArgs),
    /// Fit distribution families to a histogram or trace CSV.
    Fit(FitArgs),
    /// Collect generalized-Gamma fits into a 3D embedding CSV.
    Embed(EmbedArgs),
    /// Summarize Hellinger distances and mean-prediction errors.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Graph model: er, ba, pl, or ln.
    #[arg(long)]
    model: String,
    /// Node count.
    #[arg(long)]
    n: usize,
    /// Edge probability (er).
    #[arg(long)]
    pi: Option<f64>,
    /// Attachment parameter (ba).
    #[arg(long)]
    m: Option<usize>,
    /// Degree power-law exponent (pl).
    #[arg(long)]
    gamma: Option<f64>,
    /// Degree log-location (ln).
    #[arg(long)]
    mu: Option<f64>,
    /// Degree log-scale (ln).
    #[arg(long)]
    xi: Option<f64>,
    /// Master RNG seed.
    #[arg(long)]
    seed: u64,
    /// Number of instances; instance k uses a seed derived from the master.
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Output edge-list path (replicate k gets a `-rk` suffix).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct HistogramArgs {
    /// Edge-list file to read.
    input: PathBuf,
    /// Aggregate over a uniform sample of this many sources instead of all.
    #[arg(long)]
    sample: Option<usize>,
    /// RNG seed (required with --sample).
    #[arg(long)]
    seed: Option<u64>,
    /// Reduce to the largest connected component first.
    #[arg(long)]
    lcc: bool,
    /// Group label recorded in the sidecar (used by `report`).
    #[arg(long)]
    group: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Edge-list file to read.
    input: PathBuf,
    /// Per-contact infection probability in [0, 1].
    #[arg(long)]
    infect: f64,
    /// Per-step recovery probability in (0, 1].
    #[arg(long)]
    recover: f64,
    /// Master RNG seed; replicate seeds are derived from it.
    #[arg(long)]
    seed: u64,
    /// Fixed source node (otherwise each replicate draws one uniformly).
    #[arg(long)]
    source: Option<usize>,
    /// Number of independent cascades.
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Reduce to the largest connected component first.
    #[arg(long)]
    lcc: bool,
    /// Also export each cascade's causal DAG under this path prefix.
    #[arg(long)]
    dag: Option<PathBuf>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Histogram CSV (`distance,count`) or trace CSV (`t,newly_infected`).
    input: PathBuf,
    /// Family to fit: gamma, weibull, lognormal, gengamma, or all.
    #[arg(long, default_value = "all")]
    family: String,
    /// Also write the discretized fitted pmf per family as CSV.
    #[arg(long)]
    curve: bool,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    /// Directory of fit JSON documents.
    input: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory of fit JSON documents; immediate subdirectories become groups.
    input: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

/// Error carrying the process exit code.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<PathsError> for CliError {
    fn from(e: PathsError) -> Self {
        match e {
            PathsError::SourceOutOfRange { .. } | PathsError::SampleOutOfRange { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<EpidemicsError> for CliError {
    fn from(e: EpidemicsError) -> Self {
        match e {
            EpidemicsError::InvalidInfect(_)
            | EpidemicsError::InvalidRecover(_)
            | EpidemicsError::SourceOutOfRange { .. }
            | EpidemicsError::EmptyEnsemble => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Histogram(args) => cmd_histogram(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    let model = parse_model(&args)?;
    if args.replicates == 0 {
        return Err(CliError::Usage("--replicates must be at least 1".into()));
    }
    for k in 0..args.replicates {
        let seed = if args.replicates == 1 { args.seed } else { derive_seed(args.seed, k as u64) };
        let spec = GraphModelSpec { model, n: args.n, seed };
        let g = generate(&spec)?;
        let path = replicate_path(&args.out, args.replicates, k);
        let mut buf = Vec::new();
        graph::write_edge_list(&g, &mut buf)?;
        fs::write(&path, buf)?;
        let meta = GenerateMeta {
            spec,
            master_seed: args.seed,
            replicate: k,
            nodes: g.n(),
            edges: g.edge_count(),
        };
        write_json(&sidecar_path(&path), &meta)?;
        println!("wrote {} ({} nodes, {} edges)", path.display(), g.n(), g.edge_count());
    }
    Ok(())
}

fn cmd_histogram(args: HistogramArgs) -> Result<(), CliError> {
    if args.sample.is_some() && args.seed.is_none() {
        return Err(CliError::Usage("--sample requires an explicit --seed".into()));
    }
    let loaded = load_graph(&args.input)?;
    let (lcc, _) = graph::largest_connected_component(&loaded)?;
    let lcc_applied = lcc.n() < loaded.n();
    let g = if lcc_applied {
        if !args.lcc {
            return Err(CliError::Data(format!(
                "input graph is disconnected ({} of {} nodes in the largest component); \
                 rerun with --lcc to restrict to it",
                lcc.n(),
                loaded.n()
            )));
        }
        lcc
    } else {
        loaded
    };
    let selection = match args.sample {
        Some(count) => SourceSelection::Sample { count, seed: args.seed.unwrap() },
        None => SourceSelection::All,
    };
    let hist = paths::aggregate_histogram(&g, &selection)?;
    let stats = paths::histogram_stats(&hist)?;
    let mut buf = Vec::new();
    paths::write_histogram_csv(&hist, &mut buf)?;
    fs::write(&args.out, buf)?;
    let meta = HistogramMeta {
        input: args.input.display().to_string(),
        n: g.n(),
        symmetrized: true,
        lcc_requested: args.lcc,
        lcc_applied,
        sources: hist.sources(),
        sample: args.sample.map(|count| SampleMeta { count, seed: args.seed.unwrap() }),
        diameter: stats.diameter,
        mean: stats.mean,
        reachable_pairs: hist.reachable_pairs(),
        group: args.group,
    };
    write_json(&sidecar_path(&args.out), &meta)?;
    println!(
        "wrote {} (n={}, sources={}, mean={:.4}, diameter={})",
        args.out.display(),
        g.n(),
        hist.sources(),
        stats.mean,
        stats.diameter
    );
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let loaded = load_graph(&args.input)?;
    let g = if args.lcc {
        graph::largest_connected_component(&loaded)?.0
    } else {
        loaded
    };
    let runs =
        epidemics::simulate_ensemble(&g, args.infect, args.recover, args.replicates, args.seed, args.source)?;
    let traces: Vec<_> = runs.iter().map(|(t, _)| t.clone()).collect();

    let mut buf = Vec::new();
    if traces.len() == 1 {
        epidemics::write_trace_csv(&traces[0], &mut buf)?;
    } else {
        let avg = epidemics::average_outbreak(&traces)?;
        epidemics::write_ensemble_csv(&traces, &avg, &mut buf)?;
    }
    fs::write(&args.out, buf)?;

    if let Some(prefix) = &args.dag {
        for (k, (_, causal)) in runs.iter().enumerate() {
            let path = dag_path(prefix, k);
            let mut buf = Vec::new();
            graph::write_edge_list(&causal.to_graph(), &mut buf)?;
            fs::write(&path, buf)?;
            let meta = DagMeta {
                input: args.input.display().to_string(),
                directed: true,
                n: causal.n(),
                source: causal.source(),
                replicate: k,
                master_seed: args.seed,
            };
            write_json(&sidecar_path(&path), &meta)?;
        }
    }

    let meta = SimulateMeta {
        input: args.input.display().to_string(),
        infect: args.infect,
        recover: args.recover,
        master_seed: args.seed,
        replicates: args.replicates,
        source: args.source,
        lcc: args.lcc,
        sources_used: traces.iter().map(|t| t.source).collect(),
        derived_seeds: (0..args.replicates).map(|k| derive_seed(args.seed, 2 * k as u64 + 1)).collect(),
        final_sizes: traces.iter().map(|t| t.final_size()).collect(),
    };
    write_json(&sidecar_path(&args.out), &meta)?;
    println!(
        "wrote {} ({} replicate{}, final sizes {:?})",
        args.out.display(),
        traces.len(),
        if traces.len() == 1 { "" } else { "s" },
        meta.final_sizes
    );
    Ok(())
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let counts = read_counts(&args.input)?;
    let families: Vec<ModelFamily> = match args.family.as_str() {
        "all" => ModelFamily::ALL.to_vec(),
        name => vec![name
            .parse::<ModelFamily>()
            .map_err(CliError::Usage)?],
    };

    let mut entries: BTreeMap<String, FitEntry> = BTreeMap::new();
    let mut best: Option<(ModelFamily, f64, usize)> = None;
    for &family in &families {
        match fit::fit(&counts, family) {
            Ok(result) => {
                let candidate = (family, result.hellinger, family.n_params());
                best = match best {
                    None => Some(candidate),
                    Some(cur) => {
                        if candidate.1 < cur.1 || (candidate.1 == cur.1 && candidate.2 < cur.2) {
                            Some(candidate)
                        } else {
                            Some(cur)
                        }
                    }
                };
                entries.insert(family.to_string(), FitEntry::Fit(Box::new(result)));
            }
            Err(e) => {
                entries.insert(family.to_string(), FitEntry::Error { error: e.to_string() });
            }
        }
    }

    let total: f64 = counts.iter().sum();
    let empirical_mean: f64 = if total > 0.0 {
        counts.iter().enumerate().map(|(t, &c)| t as f64 * c).sum::<f64>() / total
    } else {
        f64::NAN
    };
    let doc = FitsDocument {
        input: args.input.display().to_string(),
        name: stem_name(&args.input),
        empirical: EmpiricalStats {
            mean: empirical_mean,
            total,
            k_max: counts.len().saturating_sub(1),
            nonzero_bins: counts.iter().filter(|&&c| c > 0.0).count(),
        },
        fits: entries,
        best: best.map(|(f, _, _)| f.to_string()),
    };
    write_json(&args.out, &doc)?;

    if args.curve {
        for (name, entry) in &doc.fits {
            if let FitEntry::Fit(result) = entry {
                let masses = result.params.discretize(result.k_max);
                let path = curve_path(&args.out, name);
                let mut text = String::from("t,empirical,fitted\n");
                for (t, &m) in masses.masses().iter().enumerate() {
                    let emp = counts.get(t).copied().unwrap_or(0.0) / total;
                    text.push_str(&format!("{t},{emp},{m}\n"));
                }
                fs::write(&path, text)?;
            }
        }
    }

    let succeeded = doc.fits.values().filter(|e| matches!(e, FitEntry::Fit(_))).count();
    if succeeded == 0 {
        // Surface the first failure; with one family requested this is
        // exactly its error.
        let msg = doc
            .fits
            .values()
            .find_map(|e| match e {
                FitEntry::Error { error } => Some(error.clone()),
                FitEntry::Fit(_) => None,
            })
            .unwrap_or_else(|| "no family could be fitted".into());
        return Err(CliError::Data(msg));
    }
    let converged = doc.fits.values().any(|e| matches!(e, FitEntry::Fit(r) if r.converged));
    if !converged {
        return Err(CliError::Numeric(
            "no family fit converged within the iteration budget (best-effort results written)"
                .into(),
        ));
    }
    println!(
        "wrote {} (best: {})",
        args.out.display(),
        doc.best.as_deref().unwrap_or("none")
    );
    Ok(())
}

fn cmd_embed(args: EmbedArgs) -> Result<(), CliError> {
    let docs = read_fit_documents(&args.input, false)?;
    let mut points = Vec::new();
    let mut skipped = 0usize;
    for (_, doc) in &docs {
        match doc.gen_gamma_fit() {
            Some(result) => match &result.params {
                netdist::ModelParams::GenGamma { sigma, alpha, beta } => {
                    points.push(fit::EmbeddingPoint {
                        name: doc.name.clone(),
                        sigma: *sigma,
                        alpha: *alpha,
                        beta: *beta,
                        hellinger: result.hellinger,
                    });
                }
                _ => skipped += 1,
            },
            None => {
                skipped += 1;
                eprintln!("warning: {} has no gengamma fit; skipped", doc.name);
            }
        }
    }
    let mut buf = Vec::new();
    fit::write_embedding_csv(&points, &mut buf)?;
    fs::write(&args.out, buf)?;
    if points.is_empty() {
        eprintln!("warning: no gengamma fits found in {}", args.input.display());
    }
    println!("wrote {} ({} points, {} skipped)", args.out.display(), points.len(), skipped);
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    let docs = read_fit_documents(&args.input, true)?;
    if docs.is_empty() {
        return Err(CliError::Data(format!(
            "no fit documents found under {}",
            args.input.display()
        )));
    }
    let mut groups: Vec<String> = docs.iter().map(|(g, _)| g.clone()).collect();
    groups.sort();
    groups.dedup();
    groups.push("overall".to_string());

    let mut csv = String::from("group,family,networks,mean_hellinger,mean_squared_error\n");
    println!("{:<12} {:<10} {:>8} {:>16} {:>20}", "group", "family", "networks", "mean_hellinger", "mean_squared_error");
    for group in &groups {
        for family in ModelFamily::ALL {
            let rows: Vec<(f64, f64)> = docs
                .iter()
                .filter(|(g, _)| group == "overall" || g == group)
                .filter_map(|(_, doc)| {
                    doc.fit(family).map(|r| {
                        let err = r.params.mean() - doc.empirical.mean;
                        (r.hellinger, err * err)
                    })
                })
                .collect();
            if rows.is_empty() {
                continue;
            }
            let n = rows.len() as f64;
            let mean_h: f64 = rows.iter().map(|r| r.0).sum::<f64>() / n;
            let mse: f64 = rows.iter().map(|r| r.1).sum::<f64>() / n;
            csv.push_str(&format!("{group},{family},{},{mean_h},{mse}\n", rows.len()));
            println!(
                "{group:<12} {:<10} {:>8} {mean_h:>16.6} {mse:>20.6}",
                family.as_str(),
                rows.len()
            );
        }
    }
    fs::write(&args.out, csv)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn parse_model(args: &GenerateArgs) -> Result<GraphModel, CliError> {
    let need = |flag: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(CliError::Usage(format!("--model {} requires --{flag}", args.model)))
        }
    };
    match args.model.as_str() {
        "er" => {
            need("pi", args.pi.is_some())?;
            Ok(GraphModel::Er { pi: args.pi.unwrap() })
        }
        "ba" => {
            need("m", args.m.is_some())?;
            Ok(GraphModel::Ba { m: args.m.unwrap() })
        }
        "pl" => {
            need("gamma", args.gamma.is_some())?;
            Ok(GraphModel::Pl { gamma: args.gamma.unwrap() })
        }
        "ln" => {
            need("mu", args.mu.is_some())?;
            need("xi", args.xi.is_some())?;
            Ok(GraphModel::Ln { mu: args.mu.unwrap(), xi: args.xi.unwrap() })
        }
        other => Err(CliError::Usage(format!(
            "unknown --model `{other}` (expected er, ba, pl, or ln)"
        ))),
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let file = fs::File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    let report = graph::load_edge_list(BufReader::new(file))?;
    if report.duplicates_dropped > 0 || report.self_loops_dropped > 0 {
        eprintln!(
            "warning: dropped {} duplicate edge(s) and {} self-loop(s) from {}",
            report.duplicates_dropped,
            report.self_loops_dropped,
            path.display()
        );
    }
    Ok(report.graph)
}

/// Reads binned counts from either CSV layout, sniffing the header.
fn read_counts(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let header = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if header == "distance,count" {
        let counts = paths::read_histogram_csv(text.as_bytes())?;
        Ok(counts.into_iter().map(|c| c as f64).collect())
    } else if header == "t,newly_infected" || header == "replicate,t,newly_infected" {
        Ok(epidemics::read_trace_counts(text.as_bytes())?)
    } else {
        Err(CliError::Data(format!(
            "{}: unrecognized header `{header}` (expected `distance,count` or `t,newly_infected`)",
            path.display()
        )))
    }
}

/// Fit documents under `dir`; with `grouped`, immediate subdirectories
/// become group labels and top-level files land in group `all`.
fn read_fit_documents(dir: &Path, grouped: bool) -> Result<Vec<(String, FitsDocument)>, CliError> {
    let mut out = Vec::new();
    let mut paths: Vec<(String, PathBuf)> = Vec::new();
    let entries = fs::read_dir(dir)
        .map_err(|e| CliError::Data(format!("cannot read directory {}: {e}", dir.display())))?;
    for entry in entries {
        let entry = entry?;
        let path = entry.path();
        if path.is_dir() && grouped {
            let group = entry.file_name().to_string_lossy().to_string();
            for sub in fs::read_dir(&path)? {
                let sub = sub?.path();
                if sub.extension().is_some_and(|e| e == "json") {
                    paths.push((group.clone(), sub));
                }
            }
        } else if path.extension().is_some_and(|e| e == "json") {
            paths.push(("all".to_string(), path));
        }
    }
    paths.sort();
    for (group, path) in paths {
        let text = fs::read_to_string(&path)?;
        match serde_json::from_str::<FitsDocument>(&text) {
            Ok(doc) => out.push((group, doc)),
            Err(e) => {
                eprintln!("warning: skipping {} (not a fit document: {e})", path.display());
            }
        }
    }
    Ok(out)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Data(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// `x.json` sidecar next to a data file: appends to the full file name so
/// `hist.csv` pairs with `hist.csv.json`.
fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".json");
    PathBuf::from(name)
}

fn replicate_path(out: &Path, replicates: usize, k: usize) -> PathBuf {
    if replicates == 1 {
        return out.to_path_buf();
    }
    match out.extension() {
        Some(ext) => {
            let stem = out.with_extension("");
            let mut name = stem.into_os_string();
            name.push(format!("-r{k}."));
            name.push(ext);
            PathBuf::from(name)
        }
        None => {
            let mut name = out.as_os_str().to_os_string();
            name.push(format!("-r{k}"));
            PathBuf::from(name)
        }
    }
}

fn dag_path(prefix: &Path, k: usize) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(format!("-r{k}.txt"));
    PathBuf::from(name)
}

fn curve_path(out: &Path, family: &str) -> PathBuf {
    let stem = out.with_extension("");
    let mut name = stem.into_os_string();
    name.push(format!(".{family}.curve.csv"));
    PathBuf::from(name)
}

fn stem_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| path.display().to_string())
}
