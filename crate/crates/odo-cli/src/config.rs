//! Run configuration: flag parsing, validation, and oracle construction.

use anyhow::{bail, Context, Result};
use num_rational::Ratio;
use odo_core::io::{load_graph, GraphFormat, LoadedGraph};
use odo_core::{parse_ratio, Graph};
use odo_dso::{CoveringStrategy, GeneralDso, GeneralDsoConfig, PivotSelectMode, ShortDso};
use odo_oracles::{HierarchyDo, InnerDoSpec, NearAdditiveDo, PivotMode};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum OracleKind {
    #[value(name = "na-do")]
    NaDo,
    #[value(name = "hierarchy-do")]
    HierarchyDo,
    #[value(name = "short-dso")]
    ShortDso,
    #[value(name = "general-dso")]
    GeneralDso,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InnerKind {
    Exact,
    #[value(name = "near-additive")]
    NearAdditive,
    Hierarchy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PivotModeArg {
    Random,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CoverStrategyArg {
    Sampled,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatArg {
    Dimacs,
    #[value(name = "edge-list")]
    EdgeList,
}

/// Everything a build needs, resolved from flags.
#[derive(Debug, Clone, clap::Args)]
pub struct BuildParams {
    /// Oracle kind to construct.
    #[arg(long, value_enum)]
    pub oracle: OracleKind,
    /// Vicinity size K (closest-vertex lists).
    #[arg(long = "K", default_value_t = 8)]
    pub k_closest: usize,
    /// Approximation parameter epsilon (decimal or p/q).
    #[arg(long, default_value = "1")]
    pub epsilon: String,
    /// Hierarchy depth k (hierarchy-do only).
    #[arg(long = "k", default_value_t = 2)]
    pub k_levels: u32,
    /// Sensitivity f (DSO kinds).
    #[arg(long, default_value_t = 2)]
    pub f: u32,
    /// Hop cutoff L; derived from gamma/ell when absent.
    #[arg(long = "L")]
    pub l_cut: Option<u32>,
    /// Trade-off exponent gamma in (0, (ell+1)/2] for the derived L.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Trade-off integer ell (epsilon = 1/ell chaining).
    #[arg(long)]
    pub ell: Option<u32>,
    /// Granularity override (even, >= 2).
    #[arg(long)]
    pub lambda: Option<u32>,
    /// Pivot selection mode.
    #[arg(long = "pivot-mode", value_enum, default_value_t = PivotModeArg::Greedy)]
    pub pivot_mode: PivotModeArg,
    /// Covering construction strategy.
    #[arg(long = "cover-strategy", value_enum, default_value_t = CoverStrategyArg::Sampled)]
    pub cover_strategy: CoverStrategyArg,
    /// Multiplier on the sampled covering size.
    #[arg(long = "cover-blowup", default_value_t = 1)]
    pub cover_blowup: u32,
    /// Inner oracle of the DSO kinds.
    #[arg(long = "inner-oracle", value_enum, default_value_t = InnerKind::Exact)]
    pub inner: InnerKind,
    /// Master seed; every random choice derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl BuildParams {
    pub fn eps(&self) -> Result<Ratio<u64>> {
        let eps = parse_ratio(&self.epsilon)
            .with_context(|| format!("cannot parse epsilon {:?}", self.epsilon))?;
        if *eps.numer() == 0 {
            bail!("epsilon must be positive");
        }
        Ok(eps)
    }

    /// L as given, or ceil(n^(gamma / ((ell+1)(f+1)))) from the chained
    /// parameterization.
    pub fn resolve_l(&self, n: usize) -> Result<u32> {
        if let Some(l) = self.l_cut {
            return Ok(l);
        }
        let (Some(gamma), Some(ell)) = (self.gamma, self.ell) else {
            bail!("need --L, or both --gamma and --ell to derive it");
        };
        if ell == 0 {
            bail!("--ell must be positive");
        }
        if !(gamma > 0.0 && gamma <= (ell as f64 + 1.0) / 2.0) {
            bail!("--gamma must lie in (0, (ell+1)/2]");
        }
        let expo = gamma / ((ell as f64 + 1.0) * (self.f as f64 + 1.0));
        Ok((n as f64).powf(expo).ceil() as u32)
    }

    pub fn pivot_mode(&self) -> PivotMode {
        match self.pivot_mode {
            PivotModeArg::Greedy => PivotMode::Greedy,
            PivotModeArg::Random => PivotMode::Random {
                seed: self.seed,
                c: 1.0,
            },
        }
    }

    pub fn cover(&self) -> CoveringStrategy {
        match self.cover_strategy {
            CoverStrategyArg::Sampled => CoveringStrategy::Sampled {
                seed: self.seed.wrapping_add(0x636f7665),
                blowup: self.cover_blowup,
            },
            CoverStrategyArg::Exhaustive => CoveringStrategy::Exhaustive,
        }
    }

    pub fn inner_spec(&self) -> Result<InnerDoSpec> {
        Ok(match self.inner {
            InnerKind::Exact => InnerDoSpec::Exact,
            InnerKind::NearAdditive => InnerDoSpec::NearAdditive {
                k_closest: self.k_closest,
                eps: self.eps()?,
                mode: self.pivot_mode(),
            },
            InnerKind::Hierarchy => InnerDoSpec::Hierarchy {
                k_closest: self.k_closest,
                k: self.k_levels,
                eps: self.eps()?,
                mode: self.pivot_mode(),
                tz_seed: self.seed.wrapping_add(0x747a),
            },
        })
    }

    pub fn dso_mode(&self) -> PivotSelectMode {
        match self.pivot_mode {
            PivotModeArg::Greedy => PivotSelectMode::Derandomized,
            PivotModeArg::Random => PivotSelectMode::Random {
                seed: self.seed.wrapping_add(0x7069766f),
                c1: 1.0,
                c2: 1.0,
            },
        }
    }
}

/// A built oracle of any kind, over an integer- or float-weighted graph.
pub enum BuiltOracle {
    NaInt(NearAdditiveDo<u64>),
    NaFloat(NearAdditiveDo<f64>),
    HierInt(Box<HierarchyDo<u64>>),
    HierFloat(Box<HierarchyDo<f64>>),
    Short(Box<ShortDso>),
    General(Box<GeneralDso>),
}

impl BuiltOracle {
    pub fn kind_name(&self) -> &'static str {
        match self {
            BuiltOracle::NaInt(_) | BuiltOracle::NaFloat(_) => "na-do",
            BuiltOracle::HierInt(_) | BuiltOracle::HierFloat(_) => "hierarchy-do",
            BuiltOracle::Short(_) => "short-dso",
            BuiltOracle::General(_) => "general-dso",
        }
    }

    pub fn space_words(&self) -> u64 {
        match self {
            BuiltOracle::NaInt(o) => o.space_words(),
            BuiltOracle::NaFloat(o) => o.space_words(),
            BuiltOracle::HierInt(o) => o.space_words(),
            BuiltOracle::HierFloat(o) => o.space_words(),
            BuiltOracle::Short(o) => o.space_words(),
            BuiltOracle::General(o) => o.space_words(),
        }
    }
}

pub fn read_graph(path: &Path, format: FormatArg) -> Result<LoadedGraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read graph file {}", path.display()))?;
    let fmt = match format {
        FormatArg::Dimacs => GraphFormat::Dimacs,
        FormatArg::EdgeList => GraphFormat::EdgeList,
    };
    Ok(load_graph(&text, fmt)?)
}

/// Builds the configured oracle, returning it with a JSON stats value.
pub fn build_oracle(params: &BuildParams, graph: &LoadedGraph) -> Result<(BuiltOracle, serde_json::Value)> {
    let eps = params.eps()?;
    match params.oracle {
        OracleKind::NaDo => match graph {
            LoadedGraph::Int(g) => {
                let o = NearAdditiveDo::build(g, params.k_closest, eps, params.pivot_mode());
                let stats = na_stats(&o, g);
                Ok((BuiltOracle::NaInt(o), stats))
            }
            LoadedGraph::Float(g) => {
                let o = NearAdditiveDo::build(g, params.k_closest, eps, params.pivot_mode());
                let stats = na_stats(&o, g);
                Ok((BuiltOracle::NaFloat(o), stats))
            }
        },
        OracleKind::HierarchyDo => match graph {
            LoadedGraph::Int(g) => {
                let o = HierarchyDo::build(
                    g,
                    params.k_closest,
                    params.k_levels,
                    eps,
                    params.pivot_mode(),
                    params.seed.wrapping_add(0x747a),
                    false,
                );
                let stats = hier_stats(&o, g);
                Ok((BuiltOracle::HierInt(Box::new(o)), stats))
            }
            LoadedGraph::Float(g) => {
                let o = HierarchyDo::build(
                    g,
                    params.k_closest,
                    params.k_levels,
                    eps,
                    params.pivot_mode(),
                    params.seed.wrapping_add(0x747a),
                    false,
                );
                let stats = hier_stats(&o, g);
                Ok((BuiltOracle::HierFloat(Box::new(o)), stats))
            }
        },
        OracleKind::ShortDso => {
            let LoadedGraph::Int(g) = graph else {
                bail!("short-dso requires an unweighted integer graph");
            };
            let l = params.resolve_l(g.n())?;
            let build = ShortDso::preprocess(
                g,
                l,
                params.f,
                &params.inner_spec()?,
                params.cover(),
                false,
            )?;
            let stats = serde_json::json!({
                "L": l,
                "f": params.f,
                "family_sizes": build.stats.family_sizes,
                "records_per_level": build.stats.records_per_level,
                "nodes_per_level": build.stats.nodes_per_level,
                "patched_per_level": build.stats.patched_per_level,
                "space_words": build.dso.space_words(),
            });
            Ok((BuiltOracle::Short(Box::new(build.dso)), stats))
        }
        OracleKind::GeneralDso => {
            let LoadedGraph::Int(g) = graph else {
                bail!("general-dso requires an unweighted integer graph");
            };
            let l = params.resolve_l(g.n())?;
            let cfg = GeneralDsoConfig {
                f: params.f,
                l_cut: l,
                eps,
                lambda_override: params.lambda,
                mode: params.dso_mode(),
                inner: params.inner_spec()?,
                cover: params.cover(),
            };
            let (dso, gstats) = GeneralDso::build(g, &cfg)?;
            let stats = serde_json::json!({
                "L": l,
                "f": params.f,
                "lambda": gstats.lambda,
                "b1_size": gstats.b1_size,
                "b2_size": gstats.b2_size,
                "additive_cap": gstats.additive_cap,
                "granular_trees": gstats.granular_trees,
                "plain_trees": gstats.plain_trees,
                "granular_tree_words": gstats.granular_tree_words,
                "plain_tree_words": gstats.plain_tree_words,
                "pivot_tree_words": gstats.pivot_tree_words,
                "short_dso_words": gstats.short_dso_words,
                "lca_words": gstats.lca_words,
                "space_words": dso.space_words(),
            });
            Ok((BuiltOracle::General(Box::new(dso)), stats))
        }
    }
}

fn na_stats<W: odo_core::Weight>(o: &NearAdditiveDo<W>, g: &Graph<W>) -> serde_json::Value {
    serde_json::json!({
        "n": g.n(),
        "m": g.m(),
        "K": o.k(),
        "pivots": o.pivot_count(),
        "pivot_row_words": o.pivot_row_words(),
        "space_words": o.space_words(),
    })
}

fn hier_stats<W: odo_core::Weight>(o: &HierarchyDo<W>, g: &Graph<W>) -> serde_json::Value {
    serde_json::json!({
        "n": g.n(),
        "m": g.m(),
        "pivots": o.pivot_count(),
        "space_words": o.space_words(),
    })
}
