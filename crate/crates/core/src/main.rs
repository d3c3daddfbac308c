use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use comic::baselines::{high_degree, random_seeds, select_baseline, vanilla_ic, Baseline, BaselineParams};
use comic::graph::format_sig;
use comic::learn::{learn_gaps, ActionLog, LearnedGaps};
use comic::model::{estimate_boost, estimate_spread};
use comic::rrset::RrVariant;
use comic::sandwich::{sandwich_select, SandwichConfig};
use comic::synth::{power_law_graph, run_bench, BenchConfig};
use comic::tim::{general_tim, variant_for, TimParams};
use comic::{EdgeListOptions, GapSet, Graph, NodeId, Problem};

#[derive(Parser)]
#[command(name = "comic", version, about = "Two-item influence diffusion and seed selection")]
struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate A- and B-spread (and optionally the boost) of given seed sets.
    Simulate(SimulateArgs),
    /// Choose k A-seeds maximizing A-spread given fixed B-seeds.
    Selfinfmax(SelectArgs),
    /// Choose k B-seeds maximizing the boost in A-spread given fixed A-seeds.
    Compinfmax(SelectArgs),
    /// Choose seeds with a baseline heuristic.
    Baseline(BaselineArgs),
    /// Estimate the objective of seed files against fixed seeds of the other item.
    Eval(EvalArgs),
    /// Estimate GAPs from an action log.
    LearnGaps(LearnArgs),
    /// Time seed selection on synthetic power-law graphs.
    Bench(BenchArgs),
    /// Write a synthetic power-law graph as an edge list.
    GenGraph(GenGraphArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list: `src dst [prob]` per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
    /// Add both directions of every edge.
    #[arg(long)]
    undirected: bool,
    /// Map arbitrary integer ids to dense ones.
    #[arg(long)]
    remap: bool,
    /// Probability assignment for graphs without a probability column.
    #[arg(long, value_parser = ["wc", "keep"], default_value = "wc")]
    weights: String,
    /// Uniform probability for every edge, replacing any given ones.
    #[arg(long)]
    uniform: Option<f64>,
}

#[derive(Args)]
struct GapArgs {
    /// `qA0,qAB,qB0,qBA`, a JSON object, or a file holding either or a learn-gaps report.
    #[arg(long)]
    gaps: String,
}

#[derive(Args)]
#[group(multiple = false)]
struct FixedArgs {
    /// Seed file for the other item.
    #[arg(long, visible_aliases = ["a-seeds", "b-seeds"])]
    fixed: Option<PathBuf>,
    /// Ranks `FROM:TO` (1-based, inclusive) of the classic-cascade seed order, e.g. `101:200`.
    #[arg(long)]
    fixed_rank: Option<String>,
    /// This many uniformly random nodes.
    #[arg(long)]
    fixed_random: Option<usize>,
    /// This many highest out-degree nodes.
    #[arg(long)]
    fixed_top: Option<usize>,
}

#[derive(Args)]
struct SeedArg {
    /// Master seed; a random one is drawn and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TimArgs {
    #[arg(long, default_value_t = 50)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    ell: f64,
    /// RR-set generator for A-seed selection.
    #[arg(long, value_enum, default_value_t = RrVariant::SimPlus)]
    variant: RrVariant,
    /// Never pick a node that is a fixed seed of the other item.
    #[arg(long)]
    exclude_fixed: bool,
    /// Fixed number of RR-sets instead of the bound-driven count.
    #[arg(long)]
    theta: Option<u64>,
    /// Lower bound on the optimum instead of the sampled estimate.
    #[arg(long)]
    lb: Option<f64>,
    #[arg(long, default_value_t = 50_000_000)]
    max_theta: u64,
}

impl TimArgs {
    fn params(&self) -> TimParams {
        TimParams {
            k: self.k,
            epsilon: self.epsilon,
            ell: self.ell,
            variant: self.variant,
            exclude_fixed: self.exclude_fixed,
            theta: self.theta,
            lb: self.lb,
            max_theta: self.max_theta,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    gaps: GapArgs,
    #[arg(long = "seeds-a")]
    seeds_a: Option<PathBuf>,
    #[arg(long = "seeds-b")]
    seeds_b: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    mc_iters: usize,
    /// Also estimate the boost of the B-seeds.
    #[arg(long)]
    boost: bool,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    gaps: GapArgs,
    #[command(flatten)]
    fixed: FixedArgs,
    #[command(flatten)]
    tim: TimArgs,
    /// Simulations per candidate evaluation when bounds are needed.
    #[arg(long, default_value_t = 10_000)]
    mc_iters: usize,
    /// Simulations per marginal gain of the greedy candidate.
    #[arg(long, default_value_t = 1_000)]
    greedy_iters: usize,
    /// Leave out the Monte-Carlo greedy candidate.
    #[arg(long)]
    no_greedy: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long, value_enum)]
    method: Baseline,
    #[arg(long, value_enum, default_value_t = Problem::SelfInfMax)]
    problem: Problem,
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    gaps: GapArgs,
    #[command(flatten)]
    fixed: FixedArgs,
    #[command(flatten)]
    tim: TimArgs,
    #[arg(long, default_value_t = 10_000)]
    mc_iters: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum, default_value_t = Problem::SelfInfMax)]
    problem: Problem,
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    gaps: GapArgs,
    #[command(flatten)]
    fixed: FixedArgs,
    /// Seed files to evaluate, one CSV row each. The first is compared against the rest.
    #[arg(long, required = true, num_args = 1..)]
    seeds: Vec<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    mc_iters: usize,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct LearnArgs {
    /// Tab-separated `user item action ts`, action `inform` or `rate`.
    #[arg(long)]
    log: PathBuf,
    #[arg(long)]
    item_a: String,
    #[arg(long)]
    item_b: String,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Node counts, one CSV row each.
    #[arg(long, required = true, value_delimiter = ',')]
    nodes: Vec<usize>,
    #[arg(long, default_value_t = 2.16)]
    exponent: f64,
    #[arg(long, default_value_t = 5.0)]
    avg_degree: f64,
    #[arg(long, value_enum, default_value_t = Problem::SelfInfMax)]
    problem: Problem,
    /// GAPs; outside the submodular regime their upper bound is used
    #[arg(long, default_value = "0.88,0.92,0.92,0.96")]
    gaps: String,
    /// Fixed seeds of the other item: this many top out-degree nodes.
    #[arg(long, default_value_t = 50)]
    fixed_top: usize,
    #[command(flatten)]
    tim: TimArgs,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 2.16)]
    exponent: f64,
    #[arg(long, default_value_t = 5.0)]
    avg_degree: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
}

struct CliError(String);

trait Context<T> {
    fn ctx(self, what: &str) -> Result<T, CliError>;
}

impl<T, E: std::fmt::Display> Context<T> for Result<T, E> {
    fn ctx(self, what: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError(format!("{what}: {e}")))
    }
}

fn master_seed(s: &SeedArg) -> u64 {
    s.seed.unwrap_or_else(|| {
        let seed = rand::random::<u64>();
        eprintln!("seed: {seed}");
        seed
    })
}

fn load_graph(a: &GraphArgs) -> Result<Graph, CliError> {
    let opts = EdgeListOptions { undirected: a.undirected, remap: a.remap };
    let mut g = Graph::load_edge_list(&a.graph, opts).ctx("graph")?;
    if let Some(p) = a.uniform {
        g.assign_uniform(p).ctx("graph")?;
    } else if !g.is_weighted() && a.weights == "wc" {
        g.assign_weighted_cascade();
    }
    Ok(g)
}

fn parse_gaps(s: &str) -> Result<GapSet, CliError> {
    let path = Path::new(s);
    if !path.is_file() {
        return s.parse().ctx("gaps");
    }
    let text = fs::read_to_string(path).ctx("gaps")?;
    if let Ok(learned) = serde_json::from_str::<LearnedGaps>(&text) {
        return learned.to_gap_set().ctx("gaps");
    }
    text.parse().ctx("gaps")
}

/// Reads node labels from a seeds JSON object, a JSON array, or whitespace-separated text.
fn read_seed_file(g: &Graph, path: &Path) -> Result<Vec<NodeId>, CliError> {
    let text = fs::read_to_string(path).ctx(&format!("seeds {}", path.display()))?;
    let labels: Vec<u64> = match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(o)) => serde_json::from_value(o.get("seeds").cloned().unwrap_or(Value::Null))
            .ctx(&format!("seeds {}: \"seeds\" array", path.display()))?,
        Ok(v) => serde_json::from_value(v).ctx(&format!("seeds {}", path.display()))?,
        Err(_) => text
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<_, _>>()
            .ctx(&format!("seeds {}", path.display()))?,
    };
    labels
        .iter()
        .map(|&l| g.node_of_label(l).ok_or_else(|| CliError(format!("seeds {}: unknown node {l}", path.display()))))
        .collect()
}

fn fixed_seeds(g: &Graph, f: &FixedArgs, tim: &TimParams, seed: u64) -> Result<Vec<NodeId>, CliError> {
    if let Some(p) = &f.fixed {
        return read_seed_file(g, p);
    }
    if let Some(r) = &f.fixed_rank {
        let (lo, hi) = r
            .split_once(':')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .filter(|&(a, b)| a >= 1 && a <= b)
            .ok_or_else(|| CliError(format!("fixed-rank: expected FROM:TO with 1 <= FROM <= TO, got {r:?}")))?;
        if hi > g.n() {
            return Err(CliError(format!("fixed-rank: {hi} exceeds n = {}", g.n())));
        }
        let order = vanilla_ic(g, hi, tim, seed).ctx("fixed-rank")?;
        return Ok(order[lo - 1..].to_vec());
    }
    if let Some(k) = f.fixed_random {
        if k > g.n() {
            return Err(CliError(format!("fixed-random: {k} exceeds n = {}", g.n())));
        }
        return Ok(random_seeds(g, k, seed, &[]));
    }
    if let Some(k) = f.fixed_top {
        return Ok(high_degree(g, k.min(g.n()), &[]));
    }
    Ok(Vec::new())
}

fn labels(g: &Graph, s: &[NodeId]) -> Vec<u64> {
    s.iter().map(|&v| g.label(v)).collect()
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, text).ctx(&format!("output {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).ctx("stdout")
        }
    }
}

fn sig(x: f64) -> String {
    format_sig(x, 6)
}

const SPREAD_HEADER: &str = "k,sigma_a,stderr_a,sigma_b,stderr_b";

fn spread_row(k: usize, e: &comic::model::SpreadEstimate) -> String {
    format!("{k},{},{},{},{}", sig(e.sigma_a), sig(e.stderr_a), sig(e.sigma_b), sig(e.stderr_b))
}

fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let seed = master_seed(&a.seed);
    let g = load_graph(&a.graph)?;
    let q = parse_gaps(&a.gaps.gaps)?;
    let sa = a.seeds_a.as_deref().map(|p| read_seed_file(&g, p)).transpose()?.unwrap_or_default();
    let sb = a.seeds_b.as_deref().map(|p| read_seed_file(&g, p)).transpose()?.unwrap_or_default();
    let mut out = String::new();
    if a.boost {
        let b = estimate_boost(&g, &q, &sa, &sb, a.mc_iters, seed).ctx("simulate")?;
        out += &format!("{SPREAD_HEADER},boost,stderr_boost\n");
        out += &format!("{},{},{}\n", spread_row(sa.len(), &b.with_b), sig(b.boost), sig(b.stderr));
    } else {
        let e = estimate_spread(&g, &q, &sa, &sb, a.mc_iters, seed).ctx("simulate")?;
        out += &format!("{SPREAD_HEADER}\n{}\n", spread_row(sa.len(), &e));
    }
    emit(&None, &out)
}

fn select(problem: Problem, a: &SelectArgs) -> Result<(), CliError> {
    let seed = master_seed(&a.seed);
    let g = load_graph(&a.graph)?;
    let q = parse_gaps(&a.gaps.gaps)?;
    let tim = a.tim.params();
    let fixed = fixed_seeds(&g, &a.fixed, &tim, seed)?;
    let submodular = match problem {
        Problem::SelfInfMax => q.is_self_submodular(),
        Problem::CompInfMax => q.is_cross_submodular(),
    };
    let mut params = json!({
        "gaps": q,
        "regime": q.regime().to_string(),
        "k": tim.k,
        "epsilon": tim.epsilon,
        "ell": tim.ell,
        "master_seed": seed,
        "fixed": labels(&g, &fixed),
    });
    let (seeds, stats, sandwich) = if submodular {
        let r = general_tim(&g, &q, problem, &fixed, &tim, seed).ctx(&problem.to_string())?;
        params["variant"] = json!(variant_for(problem, &tim));
        let stats = json!({"rr": r.stats, "estimate": r.estimate, "theta_capped": r.theta_capped, "rr_members": r.rr_members});
        (r.seeds, stats, Value::Null)
    } else {
        let cfg = SandwichConfig {
            tim: tim.clone(),
            eval_iterations: a.mc_iters,
            greedy_iterations: a.greedy_iters,
            include_greedy: !a.no_greedy,
            lazy_greedy: false,
        };
        let r = sandwich_select(&g, &q, problem, &fixed, &cfg, seed).ctx(&format!("{problem} (sandwich)"))?;
        let factor = r.ratio_upper * (1.0 - (-1.0f64).exp() - tim.epsilon);
        let sandwich = json!({
            "chosen": r.chosen,
            "candidates": r.candidates.iter().map(|c| json!({
                "label": c.label, "seeds": labels(&g, &c.seeds), "objective": sig(c.objective).parse::<f64>().unwrap_or(c.objective), "stderr": c.stderr,
            })).collect::<Vec<_>>(),
            "upper_gaps": r.upper_gaps,
            "lower_gaps": r.lower_gaps,
            "ratio_upper": r.ratio_upper,
            "guarantee_factor": factor,
            "sa_error": r.sa_error,
        });
        (r.seeds, json!({"rr": r.upper_stats}), sandwich)
    };
    let mut doc = json!({
        "problem": problem.to_string(),
        "seeds": labels(&g, &seeds),
        "params": params,
        "stats": stats,
    });
    if !sandwich.is_null() {
        doc["sandwich"] = sandwich;
    }
    emit(&a.output, &(serde_json::to_string_pretty(&doc).ctx("json")? + "\n"))
}

fn baseline(a: &BaselineArgs) -> Result<(), CliError> {
    let seed = master_seed(&a.seed);
    let g = load_graph(&a.graph)?;
    let q = parse_gaps(&a.gaps.gaps)?;
    let tim = a.tim.params();
    let fixed = fixed_seeds(&g, &a.fixed, &tim, seed)?;
    let params = BaselineParams { mc_iterations: a.mc_iters, exclude_fixed: tim.exclude_fixed, tim: tim.clone(), ..Default::default() };
    let k = tim.k.min(g.n());
    let seeds = select_baseline(a.method, &params, &g, &q, a.problem, &fixed, k, seed).ctx("baseline")?;
    let doc = json!({
        "problem": a.problem.to_string(),
        "seeds": labels(&g, &seeds),
        "params": {"method": a.method, "k": k, "gaps": q, "master_seed": seed, "fixed": labels(&g, &fixed)},
        "stats": {},
    });
    emit(&a.output, &(serde_json::to_string_pretty(&doc).ctx("json")? + "\n"))
}

fn eval(a: &EvalArgs) -> Result<(), CliError> {
    let seed = master_seed(&a.seed);
    let g = load_graph(&a.graph)?;
    let q = parse_gaps(&a.gaps.gaps)?;
    let fixed = fixed_seeds(&g, &a.fixed, &TimParams::default(), seed)?;
    let mut out = String::from(SPREAD_HEADER);
    if a.problem == Problem::CompInfMax {
        out += ",boost,stderr_boost";
    }
    out.push('\n');
    let mut objectives = Vec::new();
    for path in &a.seeds {
        let s = read_seed_file(&g, path)?;
        match a.problem {
            Problem::SelfInfMax => {
                let e = estimate_spread(&g, &q, &s, &fixed, a.mc_iters, seed).ctx("eval")?;
                out += &format!("{}\n", spread_row(s.len(), &e));
                objectives.push(e.sigma_a);
            }
            Problem::CompInfMax => {
                let b = estimate_boost(&g, &q, &fixed, &s, a.mc_iters, seed).ctx("eval")?;
                out += &format!("{},{},{}\n", spread_row(s.len(), &b.with_b), sig(b.boost), sig(b.stderr));
                objectives.push(b.boost);
            }
        }
    }
    emit(&None, &out)?;
    for (path, &other) in a.seeds.iter().zip(&objectives).skip(1) {
        let pct = 100.0 * (objectives[0] - other) / other.abs();
        eprintln!("improvement over {}: {}%", path.display(), format_sig(pct, 3));
    }
    Ok(())
}

fn learn(a: &LearnArgs) -> Result<(), CliError> {
    let log = ActionLog::load(&a.log).ctx("learn-gaps")?;
    let gaps = learn_gaps(&log, &a.item_a, &a.item_b).ctx("learn-gaps")?;
    emit(&a.output, &(serde_json::to_string_pretty(&gaps).ctx("json")? + "\n"))
}

fn bench(a: &BenchArgs) -> Result<(), CliError> {
    let seed = master_seed(&a.seed);
    let gaps = parse_gaps(&a.gaps)?;
    let mut out = String::from(
        "nodes,edges,theta,lb,ept_f,ept_b1,ept_b2,ept_bs,ept_bo,wall_time_ms,generate_ms,rr_members,graph_bytes\n",
    );
    for &nodes in &a.nodes {
        let cfg = BenchConfig {
            nodes,
            exponent: a.exponent,
            avg_degree: a.avg_degree,
            problem: a.problem,
            gaps,
            fixed: a.fixed_top,
            tim: a.tim.params(),
        };
        let r = run_bench(&cfg, seed).ctx("bench")?;
        out += &format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.nodes,
            r.edges,
            r.theta,
            sig(r.lb),
            sig(r.ept_f),
            sig(r.ept_b1),
            sig(r.ept_b2),
            sig(r.ept_bs),
            sig(r.ept_bo),
            sig(r.wall_time_ms),
            sig(r.generate_ms),
            r.rr_members,
            r.graph_bytes
        );
    }
    emit(&None, &out)
}

fn gen_graph(a: &GenGraphArgs) -> Result<(), CliError> {
    let seed = master_seed(&a.seed);
    let g = power_law_graph(a.nodes, a.exponent, a.avg_degree, seed).ctx("gen-graph")?;
    emit(&a.output, &g.to_edge_list())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: threads: {e}");
            return ExitCode::from(2);
        }
    }
    let r = match &cli.cmd {
        Cmd::Simulate(a) => simulate(a),
        Cmd::Selfinfmax(a) => select(Problem::SelfInfMax, a),
        Cmd::Compinfmax(a) => select(Problem::CompInfMax, a),
        Cmd::Baseline(a) => baseline(a),
        Cmd::Eval(a) => eval(a),
        Cmd::LearnGaps(a) => learn(a),
        Cmd::Bench(a) => bench(a),
        Cmd::GenGraph(a) => gen_graph(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
