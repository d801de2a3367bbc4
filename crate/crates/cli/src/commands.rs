use std::path::Path;

use anyhow::{Context, Result};
use gtacb_core::centrality::{centrality_table_with, CentralityOptions};
use gtacb_core::community::{cut_cost, detect_communities, CommunityOptions};
use gtacb_core::epidemic::{simulate_with, SirConfig};
use gtacb_core::graph::{read_graph_file, GraphFormat};
use gtacb_core::harness::{generate_modular_graph, run_experiment_grid, ExperimentGrid};
use gtacb_core::seeding::{gtacb_seeds_with_partition, select_seeds};
use gtacb_core::{Graph, IngestReport, Method, Partition, SeedSet};
use serde_json::json;

use crate::args::*;
use crate::manifest::Manifest;

/// Files produced by a command, in write order.
pub type Outputs = Vec<(String, String)>;

fn load_graph(args: &GraphArgs, manifest: &mut Manifest) -> Result<(Graph, IngestReport)> {
    manifest.add_input("graph", &args.graph)?;
    let format = match args.format {
        FormatArg::Auto => GraphFormat::from_path(&args.graph),
        FormatArg::Edgelist => GraphFormat::EdgeList,
        FormatArg::Pajek => GraphFormat::Pajek,
    };
    read_graph_file(&args.graph, format, args.directed, !args.no_normalize)
        .with_context(|| format!("cannot load graph `{}`", args.graph.display()))
}

fn read_text(path: &Path, role: &str, manifest: &mut Manifest) -> Result<String> {
    manifest.add_input(role, path)?;
    std::fs::read_to_string(path).with_context(|| format!("cannot read {role} file `{}`", path.display()))
}

fn community_options(restarts: usize, seed: u64) -> CommunityOptions {
    CommunityOptions {
        restarts,
        rng_seed: seed,
        ..CommunityOptions::default()
    }
}

fn sir_config(sir: &SirArgs, kappa: f64, seed: u64) -> SirConfig {
    SirConfig {
        infectious_periods: sir.l,
        alpha: sir.alpha.0.clone(),
        kappa,
        iterations: sir.iters,
        rng_seed: seed,
        mode: sir.mode,
    }
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn ingest(a: &IngestArgs, m: &mut Manifest) -> Result<Outputs> {
    let (g, report) = load_graph(&a.graph, m)?;
    let summary = json!({
        "nodes": g.node_count(),
        "arcs": g.arc_count(),
        "symmetric": g.is_symmetric(),
        "report": report,
    });
    Ok(vec![
        ("graph.tsv".into(), g.to_edge_list()),
        ("ingest.json".into(), pretty(&summary)?),
    ])
}

pub fn centrality(a: &CentralityArgs, m: &mut Manifest) -> Result<Outputs> {
    let (g, _) = load_graph(&a.graph, m)?;
    let opts = CentralityOptions {
        damping: a.damping,
        ..CentralityOptions::default()
    };
    let table = centrality_table_with(&g, &opts)?;
    Ok(vec![("centrality.csv".into(), table.to_csv())])
}

pub fn communities(a: &CommunitiesArgs, m: &mut Manifest) -> Result<Outputs> {
    m.rng_seed = Some(a.seed);
    let (g, _) = load_graph(&a.graph, m)?;
    let p = detect_communities(&g, a.k, &community_options(a.restarts, a.seed))?;
    let summary = json!({
        "H": p.community_count(),
        "sizes": p.sizes(),
        "cut_cost": cut_cost(&g, &p)?,
    });
    Ok(vec![
        ("partition.csv".into(), p.to_csv(&g)),
        ("communities.json".into(), pretty(&summary)?),
    ])
}

pub fn seeds(a: &SeedsArgs, m: &mut Manifest) -> Result<Outputs> {
    m.rng_seed = Some(a.seed);
    let (g, _) = load_graph(&a.graph, m)?;
    let weights = a.weights.as_ref().map(|w| w.0.as_slice());
    let set = match &a.partition {
        Some(path) => {
            if a.method != Method::Gtacb {
                anyhow::bail!("--partition only applies to --method gtacb");
            }
            let text = read_text(path, "partition", m)?;
            let p = Partition::from_csv(text.as_bytes(), &g)?;
            gtacb_seeds_with_partition(&g, a.k, weights, &p)?
        }
        None => select_seeds(&g, a.k, a.method, weights, &community_options(a.restarts, a.seed))?,
    };
    let params = json!({
        "weights": a.weights,
        "restarts": a.restarts,
        "seed": a.seed,
        "communities": set.communities,
    });
    Ok(vec![("seeds.json".into(), set.to_json(&g, params) + "\n")])
}

pub fn simulate(a: &SimulateArgs, m: &mut Manifest) -> Result<Outputs> {
    a.sir.check()?;
    m.rng_seed = Some(a.seed);
    let cfg = sir_config(&a.sir, a.kappa, a.seed);
    cfg.validate()?;
    let (g, _) = load_graph(&a.graph, m)?;
    let text = read_text(&a.seeds, "seeds", m)?;
    let set = SeedSet::parse(&text, &g).with_context(|| format!("invalid seed file `{}`", a.seeds.display()))?;
    let outcome = simulate_with(&g, &set.nodes, &cfg, a.trace)?;
    let psi: String = std::iter::once("node,psi\n".to_string())
        .chain(
            g.labels()
                .iter()
                .zip(&outcome.psi)
                .map(|(l, p)| format!("{l},{}\n", gtacb_core::util::fmt_sig(*p, 9))),
        )
        .collect();
    let mut files = vec![
        ("outcome.json".into(), outcome.to_json() + "\n"),
        ("psi.csv".into(), psi),
    ];
    if let Some(trace) = outcome.trace_csv() {
        files.push(("trace.csv".into(), trace));
    }
    Ok(files)
}

pub fn compare(a: &CompareArgs, m: &mut Manifest) -> Result<Outputs> {
    a.sir.check()?;
    m.rng_seed = Some(a.seed);
    let grid = ExperimentGrid {
        methods: a.methods.0.clone(),
        k_values: a.k.0.clone(),
        kappa_values: a.kappa.0.clone(),
        sir: sir_config(&a.sir, a.kappa.0[0], a.seed),
        community: community_options(a.restarts, a.seed),
        weights: a.weights.as_ref().map(|w| w.0.clone()),
    };
    let (g, _) = load_graph(&a.graph, m)?;
    let report = run_experiment_grid(&g, &grid)?;
    Ok(report.render()?)
}

pub fn generate(a: &GenerateArgs, m: &mut Manifest) -> Result<Outputs> {
    m.rng_seed = Some(a.seed);
    let (g, module) = generate_modular_graph(a.n, a.c, a.p, a.r, a.seed)?;
    let modules: String = std::iter::once("node,module\n".to_string())
        .chain(g.labels().iter().zip(&module).map(|(l, c)| format!("{l},{c}\n")))
        .collect();
    Ok(vec![
        ("graph.edges".into(), g.to_edge_list()),
        ("modules.csv".into(), modules),
    ])
}
