use crate::lists::parse_lists;
use crate::output::{emit, render, Envelope};
use crate::{CliError, Common};
use clap::{Args, ValueEnum};
use hcolour_core::bounds::{chromatic_budget, occupancy_lower_bound, BoundsError, BudgetAux, ChromaticMode, SparsitySetting};
use hcolour_core::colouring::{
    colour as run_colour, cover_from_lists, iterated_split, random_cover_with, ColourConfig, ColouringCertificate,
    ColouringError, Cover, FailureReport, FinishingFactor, Phase,
};
use hcolour_core::graph::{parse_graph, write_graph, Graph, GraphError, GraphSpec};
use hcolour_core::hardcore::{independence_polynomial_with_cap, Fugacity, HardcoreError, SamplerMode, POLYNOMIAL_CAP};
use hcolour_core::occupancy::{
    numeric_param_search, setting_params, uniform_from, verify_local_occupancy_with, OccupancyError, SearchConfig,
    VerifyConfig,
};
use hcolour_core::seeded_rng;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<HardcoreError> for CliError {
    fn from(e: HardcoreError) -> Self {
        match e {
            HardcoreError::CapExceeded { .. } | HardcoreError::WorkBudgetExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<OccupancyError> for CliError {
    fn from(e: OccupancyError) -> Self {
        match e {
            OccupancyError::DegreeCap { .. }
            | OccupancyError::EdgeCap { .. }
            | OccupancyError::BelowThreshold { .. }
            | OccupancyError::NoThreshold { .. } => CliError::Cap(e.to_string()),
            OccupancyError::SearchFailed { .. } => CliError::Failure(e.to_string()),
            OccupancyError::Hardcore(h) => h.into(),
            OccupancyError::Graph(g) => g.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Regime(_) => CliError::Cap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| io_error(path, e))
}

fn read_graph(path: &Path) -> Result<(Graph, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))?;
    let g = parse_graph(&text)?;
    if g.n() == 0 {
        return Err(CliError::Usage("empty graph".into()));
    }
    Ok((g, bytes))
}

fn fugacity(lambda: f64) -> Result<Fugacity, CliError> {
    Ok(Fugacity::new(lambda)?)
}

fn finish(envelope: &Envelope, common: &Common) -> Result<(), CliError> {
    emit(&render(envelope, common.format), common.out.as_deref()).map_err(|e| CliError::Usage(format!("writing output: {e}")))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

#[derive(Args)]
pub struct IpolyArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Largest vertex count computed exactly.
    #[arg(long, default_value_t = POLYNOMIAL_CAP)]
    cap: usize,
    #[command(flatten)]
    common: Common,
}

pub fn ipoly(a: IpolyArgs) -> Result<(), CliError> {
    let (g, bytes) = read_graph(&a.graph)?;
    let lambda = fugacity(a.lambda)?;
    let poly = independence_polynomial_with_cap(&g, a.cap)?;
    let coefficients: Vec<Value> =
        poly.coefficients().iter().map(|c| c.to_u64().map_or_else(|| Value::String(c.to_string()), Value::from)).collect();
    let l = lambda.value();
    let mut env = Envelope::new("ipoly", a.common.seed, json!({ "lambda": l, "cap": a.cap })).input("graph", &bytes);
    env.result = Some(json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "coefficients": coefficients,
        "z": poly.evaluate(l),
        "zPrime": poly.lambda_derivative(l),
        "occupancyFraction": poly.expected_size(l) / g.n() as f64,
    }));
    finish(&env, &a.common)
}

#[derive(Args)]
pub struct OccupancyArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Closed-form parameters for a sparsity setting, e.g. `triangle-free` or `clique:4`.
    #[arg(long, conflicts_with_all = ["beta", "search"])]
    setting: Option<SparsitySetting>,
    #[arg(long, requires = "gamma", conflicts_with = "search")]
    beta: Option<f64>,
    #[arg(long, requires = "beta")]
    gamma: Option<f64>,
    /// Search per-vertex parameters minimising `β_u + γ_u·deg(u)`.
    #[arg(long)]
    search: bool,
    /// The degree `d` for closed forms; defaults to the maximum degree.
    #[arg(long)]
    degree: Option<f64>,
    /// Quantify over all subgraphs of each neighbourhood, not only induced ones.
    #[arg(long)]
    strong: bool,
    /// Largest neighbourhood enumerated.
    #[arg(long)]
    cap: Option<usize>,
    /// Largest neighbourhood edge count enumerated in strong mode.
    #[arg(long)]
    edge_cap: Option<usize>,
    #[command(flatten)]
    common: Common,
}

pub fn occupancy(a: OccupancyArgs) -> Result<(), CliError> {
    let (g, bytes) = read_graph(&a.graph)?;
    let lambda = fugacity(a.lambda)?;
    let mut verify = VerifyConfig::default();
    if let Some(c) = a.cap {
        verify.degree_cap = c;
    }
    if let Some(c) = a.edge_cap {
        verify.edge_cap = c;
    }
    let params = json!({
        "lambda": a.lambda,
        "setting": a.setting.map(|s| s.to_string()),
        "beta": a.beta,
        "gamma": a.gamma,
        "search": a.search,
        "strong": a.strong,
        "degreeCap": verify.degree_cap,
        "edgeCap": verify.edge_cap,
    });
    let mut env = Envelope::new("occupancy", a.common.seed, params).input("graph", &bytes);
    if a.search {
        let degrees: Vec<f64> = (0..g.n()).map(|u| g.degree(u) as f64).collect();
        let config = SearchConfig { strong: a.strong, verify, ..Default::default() };
        let found = numeric_param_search(&g, lambda, &degrees, &config)?;
        env.result = Some(to_value(&found));
        return finish(&env, &a.common);
    }
    let d = a.degree.unwrap_or(g.max_degree() as f64);
    let (beta, gamma) = match (a.setting, a.beta, a.gamma) {
        (Some(s), _, _) => {
            let form = setting_params(&s, d, lambda)?;
            (form.beta, form.gamma)
        }
        (None, Some(b), Some(gm)) => (b, gm),
        _ => return Err(CliError::Usage("give --setting, --beta with --gamma, or --search".into())),
    };
    let form = hcolour_core::occupancy::ClosedForm { beta, gamma, budget: beta + gamma * d };
    let p = uniform_from(&g, lambda, &form)?.strong(a.strong);
    let report = verify_local_occupancy_with(&g, &p, &verify)?;
    env.result = Some(json!({ "parameters": form, "degree": d, "report": report }));
    finish(&env, &a.common)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BoundMode {
    /// Lower bound on the occupancy fraction.
    Occupancy,
    Fractional,
    List,
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long)]
    setting: SparsitySetting,
    #[arg(long)]
    max_degree: u64,
    #[arg(long, value_enum, default_value = "occupancy")]
    mode: BoundMode,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Degree threshold δ₀ of the budget formulas; defaults to the maximum degree.
    #[arg(long)]
    delta0: Option<f64>,
    /// The vertex degree the budget is evaluated at; defaults to the maximum degree.
    #[arg(long)]
    degree: Option<f64>,
    #[command(flatten)]
    common: Common,
}

pub fn bounds(a: BoundsArgs) -> Result<(), CliError> {
    let dmax = a.max_degree as f64;
    let mode = match a.mode {
        BoundMode::Occupancy => None,
        BoundMode::Fractional => Some(ChromaticMode::Fractional),
        BoundMode::List => Some(ChromaticMode::List),
    };
    let params = json!({
        "setting": a.setting.to_string(),
        "maxDegree": a.max_degree,
        "mode": format!("{:?}", a.mode).to_lowercase(),
        "lambda": a.lambda,
        "epsilon": a.epsilon,
        "delta0": a.delta0.unwrap_or(dmax),
        "degree": a.degree.unwrap_or(dmax),
    });
    let result = match mode {
        None => occupancy_lower_bound(&a.setting, a.max_degree, fugacity(a.lambda)?)?,
        Some(mode) => {
            let aux = BudgetAux { delta0: a.delta0.unwrap_or(dmax), max_degree: dmax, epsilon: a.epsilon, mode };
            chromatic_budget(&a.setting, a.degree.unwrap_or(dmax), &aux)?
        }
    };
    let mut env = Envelope::new("bounds", a.common.seed, params);
    env.result = Some(to_value(&result));
    finish(&env, &a.common)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Factor {
    Eighth,
    Half,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Sampler {
    Auto,
    Exact,
    Glauber,
}

#[derive(Args)]
pub struct ColourArgs {
    graph: PathBuf,
    /// Lists file with lines `<vertex>: <c1> <c2> ...`.
    #[arg(long, required_unless_present = "random_cover", conflicts_with = "random_cover")]
    lists: Option<PathBuf>,
    /// Use a random k-fold cover drawn from the seed.
    #[arg(long, value_name = "K")]
    random_cover: Option<usize>,
    /// Probability of keeping each matching edge of a random cover.
    #[arg(long, default_value_t = 1.0)]
    keep: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Target residual list size ℓ, the same for every vertex.
    #[arg(long)]
    ell: usize,
    /// Round limit for each phase.
    #[arg(long, default_value_t = 1000)]
    rounds: u64,
    #[arg(long, value_enum, default_value = "eighth")]
    factor: Factor,
    #[arg(long, value_enum, default_value = "auto")]
    sampler: Sampler,
    /// Expansion budget for exact sampling.
    #[arg(long, default_value_t = 200_000)]
    cap: usize,
    /// Glauber sweeps per sample.
    #[arg(long, default_value_t = 50)]
    sweeps: u64,
    /// Number of runs, with seeds `seed, seed+1, ...`; the cover is fixed by `seed`.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Worker threads for multiple runs.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    common: Common,
}

fn failure_value(e: &ColouringError) -> Option<Value> {
    let report = match e {
        ColouringError::Failure(r) => r.clone(),
        ColouringError::Precondition { vertex, reason } => FailureReport {
            phase: Phase::Finish,
            vertex: Some(*vertex),
            reason: reason.clone(),
            rounds: 0,
            trace: vec![],
        },
        ColouringError::EmptyResidualList { vertex } => FailureReport {
            phase: Phase::Partial,
            vertex: Some(*vertex),
            reason: e.to_string(),
            rounds: 0,
            trace: vec![],
        },
        _ => return None,
    };
    Some(to_value(&report))
}

fn colouring_error(e: ColouringError) -> CliError {
    match e {
        ColouringError::Graph(g) => g.into(),
        ColouringError::Hardcore(h) => h.into(),
        ColouringError::InvalidCover(_) | ColouringError::InvalidInput(_) => CliError::Usage(e.to_string()),
        _ => CliError::Failure(e.to_string()),
    }
}

/// The chosen colour of each vertex: its list label, or its index in the block.
fn assignment(cover: &Cover, cert: &ColouringCertificate, lists: Option<&[Vec<u64>]>) -> Vec<u64> {
    cert.chosen
        .iter()
        .map(|&x| {
            let u = cover.owner(x);
            let i = cover.block(u).iter().position(|&y| y == x).expect("colour lies in its block");
            lists.map_or(i as u64, |l| l[u][i])
        })
        .collect()
}

pub fn colour(a: ColourArgs) -> Result<(), CliError> {
    let (g, bytes) = read_graph(&a.graph)?;
    let lambda = fugacity(a.lambda)?;
    let mut env = Envelope::new("colour", a.common.seed, Value::Null).input("graph", &bytes);
    let (cover, lists) = match (&a.lists, a.random_cover) {
        (Some(path), _) => {
            let lb = read(path)?;
            env = env.input("lists", &lb);
            let text = String::from_utf8(lb).map_err(|_| CliError::Usage("lists file is not UTF-8".into()))?;
            let lists = parse_lists(&text, g.n()).map_err(CliError::Usage)?;
            (cover_from_lists(&g, &lists).map_err(colouring_error)?, Some(lists))
        }
        (None, Some(k)) => (random_cover_with(&g, k, a.keep, &mut seeded_rng(a.common.seed)).map_err(colouring_error)?, None),
        (None, None) => return Err(CliError::Usage("give --lists or --random-cover".into())),
    };
    let sampler = match a.sampler {
        Sampler::Auto => SamplerMode::Auto { budget: a.cap, sweeps: a.sweeps },
        Sampler::Exact => SamplerMode::Exact { budget: a.cap },
        Sampler::Glauber => SamplerMode::Glauber { sweeps: a.sweeps },
    };
    let factor = match a.factor {
        Factor::Eighth => FinishingFactor::Eighth,
        Factor::Half => FinishingFactor::Half,
    };
    let config = ColourConfig { phase1_rounds: a.rounds, phase2_rounds: a.rounds, sampler, factor };
    env.params = json!({
        "lambda": a.lambda,
        "ell": a.ell,
        "randomCover": a.random_cover,
        "keep": a.keep,
        "config": config,
        "runs": a.runs,
    });
    let ell = vec![a.ell; g.n()];
    let run = |seed: u64| run_colour(&cover, lambda, &ell, &config, seed);
    if a.runs <= 1 {
        return match run(a.common.seed) {
            Ok(cert) => {
                let mut v = to_value(&cert);
                v["colours"] = json!(assignment(&cover, &cert, lists.as_deref()));
                env.result = Some(v);
                finish(&env, &a.common)
            }
            Err(e) => match failure_value(&e) {
                Some(f) => {
                    env.failure = Some(f);
                    finish(&env, &a.common)?;
                    Err(CliError::Failure(e.to_string()))
                }
                None => Err(colouring_error(e)),
            },
        };
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let seeds: Vec<u64> = (0..a.runs).map(|i| a.common.seed.wrapping_add(i)).collect();
    let outcomes: Vec<(u64, Result<ColouringCertificate, ColouringError>)> =
        pool.install(|| seeds.par_iter().map(|&s| (s, run(s))).collect());
    let mut runs = Vec::new();
    let mut successes = 0u64;
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(cert) => {
                successes += 1;
                runs.push(json!({ "seed": seed, "verified": cert.verified, "phaseStats": cert.phase_stats }));
            }
            Err(e) => match failure_value(&e) {
                Some(f) => runs.push(json!({ "seed": seed, "failure": f })),
                None => return Err(colouring_error(e)),
            },
        }
    }
    env.result = Some(json!({ "successes": successes, "runs": runs }));
    finish(&env, &a.common)?;
    if successes < a.runs {
        return Err(CliError::Failure(format!("{} of {} runs failed", a.runs - successes, a.runs)));
    }
    Ok(())
}

#[derive(Args)]
pub struct GenArgs {
    /// Generator, e.g. `kneser:5,2`, `random-regular:50,3`, `triangle-free:40,12`.
    spec: GraphSpec,
    #[command(flatten)]
    common: Common,
}

pub fn gen(a: GenArgs) -> Result<(), CliError> {
    let g = a.spec.build(a.common.seed)?;
    let text = format!("c generated by hcolour gen, seed {}\n{}", a.common.seed, write_graph(&g));
    emit(&text, a.common.out.as_deref()).map_err(|e| CliError::Usage(format!("writing output: {e}")))
}

#[derive(Args)]
pub struct SplitArgs {
    graph: PathBuf,
    #[arg(long)]
    f: f64,
    #[arg(long, default_value_t = 0.005)]
    delta: f64,
    #[arg(long, default_value_t = 0.04)]
    zeta: f64,
    /// Redraws allowed for each bipartition.
    #[arg(long, default_value_t = 100)]
    tries: u64,
    #[command(flatten)]
    common: Common,
}

pub fn split(a: SplitArgs) -> Result<(), CliError> {
    let (g, bytes) = read_graph(&a.graph)?;
    let params = json!({ "f": a.f, "delta": a.delta, "zeta": a.zeta, "tries": a.tries });
    let mut env = Envelope::new("split", a.common.seed, params).input("graph", &bytes);
    match iterated_split(&g, a.f, a.delta, a.zeta, a.tries, &mut seeded_rng(a.common.seed)) {
        Ok(r) => {
            env.result = Some(to_value(&r));
            finish(&env, &a.common)
        }
        Err(e) => match failure_value(&e) {
            Some(f) => {
                env.failure = Some(f);
                finish(&env, &a.common)?;
                Err(CliError::Failure(e.to_string()))
            }
            None => Err(colouring_error(e)),
        },
    }
}
