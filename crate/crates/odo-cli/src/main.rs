//! odo: build, query, audit, and benchmark distance (sensitivity) oracles.

mod config;
mod store;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use config::{build_oracle, read_graph, BuildParams, BuiltOracle, FormatArg};
use odo_core::io::LoadedGraph;
use odo_core::{EdgeSet, VertexId, Weight};
use odo_verify::{audit_stretch, Bound, QueryGen};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "odo",
    about = "Approximate distance oracles and fault-tolerant distance sensitivity oracles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an oracle from a graph file and serialize it.
    Build {
        /// Input graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Input format.
        #[arg(long, value_enum, default_value_t = FormatArg::EdgeList)]
        format: FormatArg,
        #[command(flatten)]
        params: BuildParams,
        /// Output oracle file (ODOF container).
        #[arg(long, short)]
        out: PathBuf,
        /// Where to write build statistics JSON (default: stdout).
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Query a serialized oracle.
    Query {
        /// Oracle file produced by `build`.
        #[arg(long)]
        oracle: PathBuf,
        /// Source vertex.
        #[arg(long)]
        s: Option<VertexId>,
        /// Target vertex.
        #[arg(long)]
        t: Option<VertexId>,
        /// Failed edges as u,v pairs (DSO kinds only).
        #[arg(long = "fail", value_parser = parse_pair)]
        fail: Vec<(VertexId, VertexId)>,
        /// Batch file with lines "s t [u,v ...]".
        #[arg(long)]
        batch: Option<PathBuf>,
        /// Also report the path when the oracle supports it.
        #[arg(long)]
        path: bool,
    },
    /// Audit an oracle's stretch against brute force.
    Audit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::EdgeList)]
        format: FormatArg,
        #[command(flatten)]
        params: BuildParams,
        /// Query generation: "exhaustive", "failures", or "random:COUNT".
        #[arg(long, default_value = "exhaustive")]
        queries: String,
        /// Audit-query seed (random mode).
        #[arg(long, default_value_t = 7)]
        query_seed: u64,
        /// Write the JSON report here (default: stdout).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also emit the violations as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sweep one parameter and emit a CSV of space/time/stretch columns.
    Bench {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::EdgeList)]
        format: FormatArg,
        #[command(flatten)]
        params: BuildParams,
        /// Parameter to sweep: K, L, or f.
        #[arg(long)]
        sweep: String,
        /// Comma-separated values for the swept parameter.
        #[arg(long)]
        values: String,
        /// Number of seeded random queries per point.
        #[arg(long, default_value_t = 500)]
        workload: u64,
        #[arg(long, default_value_t = 11)]
        query_seed: u64,
        /// Output CSV path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> Result<(VertexId, VertexId), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected u,v got {s:?}"))?;
    let u = a.trim().parse().map_err(|_| format!("bad vertex {a:?}"))?;
    let v = b.trim().parse().map_err(|_| format!("bad vertex {b:?}"))?;
    Ok((u, v))
}

fn main() -> Result<()> {
    if let Ok(threads) = std::env::var("ODO_THREADS") {
        let threads: usize = threads
            .parse()
            .context("ODO_THREADS must be a positive integer")?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    match Cli::parse().command {
        Command::Build {
            graph,
            format,
            params,
            out,
            stats,
        } => cmd_build(&graph, format, &params, &out, stats.as_deref()),
        Command::Query {
            oracle,
            s,
            t,
            fail,
            batch,
            path,
        } => cmd_query(&oracle, s, t, &fail, batch.as_deref(), path),
        Command::Audit {
            graph,
            format,
            params,
            queries,
            query_seed,
            report,
            csv,
        } => cmd_audit(
            &graph,
            format,
            &params,
            &queries,
            query_seed,
            report.as_deref(),
            csv.as_deref(),
        ),
        Command::Bench {
            graph,
            format,
            params,
            sweep,
            values,
            workload,
            query_seed,
            out,
        } => cmd_bench(
            &graph, format, &params, &sweep, &values, workload, query_seed, out.as_deref(),
        ),
    }
}

fn cmd_build(
    graph: &std::path::Path,
    format: FormatArg,
    params: &BuildParams,
    out: &std::path::Path,
    stats_path: Option<&std::path::Path>,
) -> Result<()> {
    let loaded = read_graph(graph, format)?;
    let started = Instant::now();
    let (oracle, mut stats) = build_oracle(params, &loaded)?;
    let build_secs = started.elapsed().as_secs_f64();
    store::save(&oracle, out)?;
    if let Some(obj) = stats.as_object_mut() {
        obj.insert("build_seconds".into(), serde_json::json!(build_secs));
        obj.insert("oracle".into(), serde_json::json!(oracle.kind_name()));
        obj.insert("seed".into(), serde_json::json!(params.seed));
    }
    let rendered = serde_json::to_string_pretty(&stats)?;
    match stats_path {
        Some(p) => std::fs::write(p, rendered)?,
        None => println!("{rendered}"),
    }
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn format_est(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else if v.fract() == 0.0 {
        format!("{}", v as u64)
    } else {
        format!("{v}")
    }
}

fn run_one_query(
    oracle: &BuiltOracle,
    s: VertexId,
    t: VertexId,
    fail: &[(VertexId, VertexId)],
    want_path: bool,
) -> Result<String> {
    let started = Instant::now();
    let (estimate, branch, path_str): (f64, String, Option<String>) = match oracle {
        BuiltOracle::NaInt(o) => {
            if !fail.is_empty() {
                bail!("na-do does not support failures");
            }
            if want_path {
                let (est, p) = o.query_path(s, t);
                (
                    est.to_f64(),
                    "static".into(),
                    p.map(|p| format!("{:?}", p.vertices)),
                )
            } else {
                let mut ws = o.workspace();
                let (est, br) = o.query_in(&mut ws, s, t);
                (est.to_f64(), br.to_string(), None)
            }
        }
        BuiltOracle::NaFloat(o) => {
            if !fail.is_empty() {
                bail!("na-do does not support failures");
            }
            let mut ws = o.workspace();
            let (est, br) = o.query_in(&mut ws, s, t);
            (est.to_f64(), br.to_string(), None)
        }
        BuiltOracle::HierInt(o) => {
            if !fail.is_empty() {
                bail!("hierarchy-do does not support failures");
            }
            (o.query(s, t).to_f64(), "hierarchy".into(), None)
        }
        BuiltOracle::HierFloat(o) => {
            if !fail.is_empty() {
                bail!("hierarchy-do does not support failures");
            }
            (o.query(s, t).to_f64(), "hierarchy".into(), None)
        }
        BuiltOracle::Short(o) => match o.query_pairs(s, t, fail)? {
            Some(p) => (
                p.length as f64,
                "hop-short".into(),
                want_path.then(|| format!("{:?}", p.vertices)),
            ),
            None => (f64::INFINITY, "hop-long-or-disconnected".into(), None),
        },
        BuiltOracle::General(o) => {
            let (est, diag) = o.query_pairs(s, t, fail);
            let branch = if diag.used_dense && diag.used_sparse {
                "dense+sparse"
            } else if diag.used_dense {
                "dense"
            } else if diag.used_sparse {
                "sparse"
            } else {
                "hop-short"
            };
            (est.to_f64(), branch.into(), None)
        }
    };
    let micros = started.elapsed().as_micros();
    let mut line = format!("{} {} {}us", format_est(estimate), branch, micros);
    if let Some(p) = path_str {
        line.push(' ');
        line.push_str(&p);
    }
    Ok(line)
}

fn cmd_query(
    oracle_path: &std::path::Path,
    s: Option<VertexId>,
    t: Option<VertexId>,
    fail: &[(VertexId, VertexId)],
    batch: Option<&std::path::Path>,
    want_path: bool,
) -> Result<()> {
    let oracle = store::load(oracle_path)?;
    if let Some(batch) = batch {
        let text = std::fs::read_to_string(batch)?;
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let s: VertexId = toks
                .next()
                .and_then(|x| x.parse().ok())
                .with_context(|| format!("batch line {}: bad source", no + 1))?;
            let t: VertexId = toks
                .next()
                .and_then(|x| x.parse().ok())
                .with_context(|| format!("batch line {}: bad target", no + 1))?;
            let fail: Vec<(VertexId, VertexId)> = toks
                .map(|p| parse_pair(p).map_err(|e| anyhow::anyhow!(e)))
                .collect::<Result<_>>()?;
            println!("{}", run_one_query(&oracle, s, t, &fail, want_path)?);
        }
        return Ok(());
    }
    let (Some(s), Some(t)) = (s, t) else {
        bail!("need --s and --t (or --batch)");
    };
    println!("{}", run_one_query(&oracle, s, t, fail, want_path)?);
    Ok(())
}

struct AuditTarget<'a> {
    oracle: &'a BuiltOracle,
}

impl AuditTarget<'_> {
    fn answer(&self, s: VertexId, t: VertexId, fail: &EdgeSet) -> (f64, bool) {
        match self.oracle {
            BuiltOracle::NaInt(o) => {
                let mut ws = o.workspace();
                (o.query_in(&mut ws, s, t).0.to_f64(), true)
            }
            BuiltOracle::NaFloat(o) => {
                let mut ws = o.workspace();
                (o.query_in(&mut ws, s, t).0.to_f64(), true)
            }
            BuiltOracle::HierInt(o) => (o.query(s, t).to_f64(), true),
            BuiltOracle::HierFloat(o) => (o.query(s, t).to_f64(), true),
            BuiltOracle::Short(o) => (
                match o.estimate(s, t, fail) {
                    u64::MAX => f64::INFINITY,
                    v => v as f64,
                },
                true,
            ),
            BuiltOracle::General(o) => {
                let (est, diag) = o.query(s, t, fail);
                (est.to_f64(), diag.coverage_ok())
            }
        }
    }

    fn bound(&self) -> Bound {
        match self.oracle {
            BuiltOracle::NaInt(o) => {
                let (a, b) = o.stretch();
                Bound::new(a, b as f64)
            }
            BuiltOracle::NaFloat(o) => {
                let (a, b) = o.stretch();
                Bound::new(a, b)
            }
            BuiltOracle::HierInt(o) => {
                let (a, b) = o.stretch();
                Bound::new(a, b as f64)
            }
            BuiltOracle::HierFloat(o) => {
                let (a, b) = o.stretch();
                Bound::new(a, b)
            }
            BuiltOracle::Short(o) => {
                let (a, b) = o.stretch();
                Bound::new(a, b as f64)
            }
            BuiltOracle::General(o) => {
                let (a, b) = o.stretch();
                Bound::new(a, b as f64)
            }
        }
    }
}

fn to_f64_dist<W: Weight>(v: W) -> f64 {
    v.to_f64()
}

#[allow(clippy::too_many_arguments)]
fn cmd_audit(
    graph: &std::path::Path,
    format: FormatArg,
    params: &BuildParams,
    queries: &str,
    query_seed: u64,
    report_path: Option<&std::path::Path>,
    csv_path: Option<&std::path::Path>,
) -> Result<()> {
    let loaded = read_graph(graph, format)?;
    let (oracle, _) = build_oracle(params, &loaded)?;
    let target = AuditTarget { oracle: &oracle };
    let gen = match queries {
        "exhaustive" => QueryGen::ExhaustivePairs,
        "failures" => QueryGen::ExhaustiveSingleFailures,
        other => {
            let Some(count) = other.strip_prefix("random:") else {
                bail!("--queries must be exhaustive, failures, or random:COUNT");
            };
            QueryGen::Random {
                seed: query_seed,
                count: count.parse().context("bad random query count")?,
                f: params.f,
            }
        }
    };
    let report = match &loaded {
        LoadedGraph::Int(g) => {
            let qs = gen.queries(g);
            audit_stretch(
                g,
                &qs,
                target.bound(),
                |s, t, fail| target.answer(s, t, fail),
                |s, t, fail| to_f64_dist(odo_verify::exact_replacement_distance(g, s, t, fail)),
            )
        }
        LoadedGraph::Float(g) => {
            let qs = gen.queries(g);
            audit_stretch(
                g,
                &qs,
                target.bound(),
                |s, t, fail| target.answer(s, t, fail),
                |s, t, fail| to_f64_dist(odo_verify::exact_replacement_distance(g, s, t, fail)),
            )
        }
    };
    let json = report.to_json();
    match report_path {
        Some(p) => std::fs::write(p, &json)?,
        None => println!("{json}"),
    }
    if let Some(p) = csv_path {
        std::fs::write(p, report.to_csv())?;
    }
    eprintln!(
        "audited {} queries: {} violations, coverage {:.1}%",
        report.query_count,
        report.violations.len(),
        100.0 * report.coverage_fraction()
    );
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    graph: &std::path::Path,
    format: FormatArg,
    params: &BuildParams,
    sweep: &str,
    values: &str,
    workload: u64,
    query_seed: u64,
    out: Option<&std::path::Path>,
) -> Result<()> {
    let loaded = read_graph(graph, format)?;
    let mut csv = String::from(
        "param,value,space_words,build_s,median_query_us,p99_query_us,max_mult_slack,max_add_slack\n",
    );
    let vals: Vec<u64> = values
        .split(',')
        .map(|v| v.trim().parse().context("bad sweep value"))
        .collect::<Result<_>>()?;
    for &value in &vals {
        let mut p = params.clone();
        match sweep {
            "K" => p.k_closest = value as usize,
            "L" => p.l_cut = Some(value as u32),
            "f" => p.f = value as u32,
            other => bail!("unknown sweep parameter {other:?} (use K, L, or f)"),
        }
        let started = Instant::now();
        let (oracle, _) = build_oracle(&p, &loaded)?;
        let build_s = started.elapsed().as_secs_f64();
        let target = AuditTarget { oracle: &oracle };
        let gen = QueryGen::Random {
            seed: query_seed,
            count: workload,
            f: p.f,
        };
        let (mut times, report) = match &loaded {
            LoadedGraph::Int(g) => {
                let qs = gen.queries(g);
                let mut times = Vec::with_capacity(qs.len());
                let report = audit_stretch(
                    g,
                    &qs,
                    target.bound(),
                    |s, t, fail| {
                        let t0 = Instant::now();
                        let ans = target.answer(s, t, fail);
                        times.push(t0.elapsed().as_micros() as u64);
                        ans
                    },
                    |s, t, fail| {
                        to_f64_dist(odo_verify::exact_replacement_distance(g, s, t, fail))
                    },
                );
                (times, report)
            }
            LoadedGraph::Float(g) => {
                let qs = gen.queries(g);
                let mut times = Vec::with_capacity(qs.len());
                let report = audit_stretch(
                    g,
                    &qs,
                    target.bound(),
                    |s, t, fail| {
                        let t0 = Instant::now();
                        let ans = target.answer(s, t, fail);
                        times.push(t0.elapsed().as_micros() as u64);
                        ans
                    },
                    |s, t, fail| {
                        to_f64_dist(odo_verify::exact_replacement_distance(g, s, t, fail))
                    },
                );
                (times, report)
            }
        };
        times.sort_unstable();
        let median = times.get(times.len() / 2).copied().unwrap_or(0);
        let p99 = times
            .get((times.len() * 99) / 100)
            .copied()
            .unwrap_or(median);
        let add_slack = if report.max_add_slack == f64::NEG_INFINITY {
            0.0
        } else {
            report.max_add_slack
        };
        csv.push_str(&format!(
            "{sweep},{value},{},{build_s:.3},{median},{p99},{:.4},{:.4}\n",
            oracle.space_words(),
            report.max_mult_slack,
            add_slack
        ));
    }
    match out {
        Some(p) => std::fs::write(p, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
