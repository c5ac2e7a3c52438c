//! `rise` command-line interface: test, diagnose, simulate, sweep.
//!
//! Exit codes: 0 success, 2 validation/usage error, 3 degeneracy.
//! All randomness is seed-derived; reruns with the same seed produce
//! byte-identical output regardless of `--threads`.

use clap::{Args, Parser, Subcommand};
use rise::graph::{builder, GraphBuilder, GraphKind, GraphSequence, MdpBuilder};
use rise::inference::{
    condition_diagnostics, degeneracy_check, permutation_moments, permutation_pvalue, rise_test,
    Degeneracy, PermutationStatistic, SampleSplit, TestResult,
};
use rise::io::{
    read_distance_csv, read_pooled_observations, write_graph_csv, write_power_csv, write_rank_csv,
};
use rise::rank::{KernelSpec, RankSpec};
use rise::sim::{estimate_power, power_vs_k_sweep, KChoice, MethodConfig, PowerReport, SimSetting};
use rise::{distance_matrix, DistanceMatrix, Metric, RiseError};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "rise", version, about = "Graph-based rank two-sample tests")]
struct Cli {
    /// Worker threads (default: all cores; env RISE_THREADS as fallback)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the two-sample test on observation or distance CSVs
    Test(TestArgs),
    /// Report moments, degeneracy flags, condition ratios, graph summary
    Diagnose(TestArgs),
    /// Estimate size/power for a simulation setting
    Simulate(SimArgs),
    /// Power across a lambda grid with k = [N^lambda] scaling
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct TestArgs {
    /// Sample X observations (CSV, one row per observation)
    #[arg(long)]
    x: Option<PathBuf>,
    /// Sample Y observations (CSV)
    #[arg(long)]
    y: Option<PathBuf>,
    /// Precomputed pooled N x N distance matrix (CSV); requires --m
    #[arg(long)]
    dist: Option<PathBuf>,
    /// Size of sample X when --dist is used (first m rows)
    #[arg(long)]
    m: Option<usize>,
    /// Similarity graph: knn | mst | mdp
    #[arg(long, default_value = "knn")]
    graph: String,
    /// Edge weights: induced | overall | depth | binary | kernel
    #[arg(long, default_value = "induced")]
    rank: String,
    /// Layer count: an integer or `n065` for floor(N^0.65)
    #[arg(long, default_value = "10")]
    k: String,
    /// Distance metric: euclidean | frobenius
    #[arg(long, default_value = "euclidean")]
    metric: String,
    /// Row shape `r,c` for matrix-valued observations (frobenius)
    #[arg(long)]
    shape: Option<String>,
    /// Kernel for --rank kernel: gaussian | negdist-affine
    #[arg(long, default_value = "gaussian")]
    kernel: String,
    /// Gaussian kernel bandwidth (default: median edge distance)
    #[arg(long)]
    sigma: Option<f64>,
    /// P-value mode: asymptotic | permutation | both
    #[arg(long, default_value = "asymptotic")]
    pvalue: String,
    /// Monte Carlo permutation budget
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    /// Permutation statistic: t_r | z_w | r_max
    #[arg(long, default_value = "t_r")]
    statistic: String,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: json | csv
    #[arg(long, default_value = "json")]
    format: String,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the greedy matching instead of the exact blossom solver
    #[arg(long)]
    approx_matching: bool,
    /// Dump the graph sequence as edge-list CSV
    #[arg(long)]
    dump_graph: Option<PathBuf>,
    /// Dump the rank matrix as dense CSV
    #[arg(long)]
    dump_rank: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    /// Setting token, e.g. I-null, I-a, III-b
    #[arg(long)]
    setting: String,
    /// Dimension
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value = "knn")]
    graph: String,
    #[arg(long, default_value = "induced")]
    rank: String,
    /// Layer count: an integer or `n065`
    #[arg(long, default_value = "10")]
    k: String,
    #[arg(long, default_value = "gaussian")]
    kernel: String,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock seconds in the report (off keeps output
    /// byte-identical across thread counts)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    sim: SimArgs,
    /// Comma-separated lambda grid in (0, 1), e.g. 0.2,0.4,0.65,0.8
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Vec<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool(cli.threads);
    let outcome = match cli.command {
        Command::Test(args) => cmd_test(&args),
        Command::Diagnose(args) => cmd_diagnose(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn init_thread_pool(flag: Option<usize>) {
    let threads = flag.or_else(|| {
        std::env::var("RISE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .ok();
    }
}

/// Effective configuration echoed into every JSON output. Thread count is
/// intentionally excluded so reruns with different --threads stay
/// byte-identical.
#[derive(Serialize, Clone)]
struct ConfigEcho {
    command: &'static str,
    graph: String,
    rank: String,
    k: usize,
    metric: String,
    kernel: Option<KernelSpec>,
    pvalue: String,
    budget: usize,
    statistic: String,
    alpha: f64,
    m: usize,
    n: usize,
}

#[derive(Serialize)]
struct TestOutput {
    config: ConfigEcho,
    seed: u64,
    #[serde(flatten)]
    result: TestResult,
}

struct Prepared {
    split: SampleSplit,
    graph: GraphSequence,
    rank: rise::RankMatrix,
    config: ConfigEcho,
}

fn usage(msg: impl Into<String>) -> RiseError {
    RiseError::Parse(msg.into())
}

fn parse_kernel(args_kernel: &str, sigma: Option<f64>) -> Result<KernelSpec, RiseError> {
    match args_kernel {
        "gaussian" => Ok(KernelSpec::Gaussian { sigma }),
        "negdist-affine" | "negdist_affine" => Ok(KernelSpec::NegdistAffine),
        other => Err(usage(format!("--kernel: unknown kernel `{other}`"))),
    }
}

fn parse_k(token: &str, n_pooled: usize) -> Result<usize, RiseError> {
    if token == "n065" {
        Ok(KChoice::N065.resolve(n_pooled))
    } else {
        token
            .parse::<usize>()
            .map_err(|_| usage(format!("--k: expected an integer or `n065`, got `{token}`")))
    }
}

fn load_inputs(args: &TestArgs) -> Result<(DistanceMatrix, SampleSplit), RiseError> {
    match (&args.x, &args.y, &args.dist) {
        (Some(x), Some(y), None) => {
            let metric: Metric = args.metric.parse()?;
            let (mut obs, m, n) = read_pooled_observations(x, y)?;
            if let Some(shape) = &args.shape {
                let (r, c) = shape
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .ok_or_else(|| usage("--shape: expected `rows,cols`"))?;
                obs = obs.with_shape_hint(r, c)?;
            }
            let dist = distance_matrix(&obs, metric)?;
            Ok((dist, SampleSplit::new(m, n)?))
        }
        (None, None, Some(path)) => {
            let m = args
                .m
                .ok_or_else(|| usage("--dist requires --m (size of sample X)"))?;
            let dist = read_distance_csv(path)?;
            if m < 2 || dist.n() < m + 2 {
                return Err(usage(format!(
                    "--m: need 2 <= m <= N-2, got m={m} with N={}",
                    dist.n()
                )));
            }
            let n = dist.n() - m;
            Ok((dist, SampleSplit::new(m, n)?))
        }
        _ => Err(usage(
            "provide either --x and --y (observation CSVs) or --dist with --m",
        )),
    }
}

fn prepare(args: &TestArgs, command: &'static str) -> Result<Prepared, RiseError> {
    let (dist, split) = load_inputs(args)?;
    let n_pooled = split.pooled();
    let graph_kind: GraphKind = args.graph.parse()?;
    let kernel = parse_kernel(&args.kernel, args.sigma)?;
    let rank_spec = RankSpec::parse(&args.rank, Some(kernel))?;
    let k = parse_k(&args.k, n_pooled)?;

    let approx_builder = MdpBuilder::approx();
    let gb: &dyn GraphBuilder = if graph_kind == GraphKind::Mdp && args.approx_matching {
        &approx_builder
    } else {
        builder(graph_kind)
    };
    let graph = gb.build(&dist, k)?;
    let rank = rank_spec.scheme().weigh(&graph)?;

    if let Some(path) = &args.dump_graph {
        write_graph_csv(create_file(path)?, &graph)?;
    }
    if let Some(path) = &args.dump_rank {
        write_rank_csv(create_file(path)?, &rank)?;
    }

    let config = ConfigEcho {
        command,
        graph: graph_kind.name().to_string(),
        rank: rank_spec.kind().name().to_string(),
        k,
        metric: args.metric.clone(),
        kernel: matches!(rank_spec, RankSpec::Kernel(_)).then_some(kernel),
        pvalue: args.pvalue.clone(),
        budget: args.budget,
        statistic: args.statistic.clone(),
        alpha: args.alpha,
        m: split.m,
        n: split.n,
    };
    Ok(Prepared {
        split,
        graph,
        rank,
        config,
    })
}

fn cmd_test(args: &TestArgs) -> Result<u8, RiseError> {
    match args.pvalue.as_str() {
        "asymptotic" | "permutation" | "both" => {}
        other => return Err(usage(format!("--pvalue: unknown mode `{other}`"))),
    }
    let statistic: PermutationStatistic = args.statistic.parse()?;
    let prepared = prepare(args, "test")?;

    let mut result = rise_test(&prepared.rank, &prepared.split)?;
    if args.pvalue != "asymptotic" {
        let (p, mode) = permutation_pvalue(
            &prepared.rank,
            &prepared.split,
            statistic,
            args.budget,
            args.seed,
        )?;
        result.p_perm = Some(p);
        result.perm_mode = Some(mode);
    }

    let payload = match args.format.as_str() {
        "json" => {
            let out = TestOutput {
                config: prepared.config,
                seed: args.seed,
                result,
            };
            serde_json::to_string_pretty(&out).expect("serializable") + "\n"
        }
        "csv" => test_result_csv(&result),
        other => return Err(usage(format!("--format: unknown format `{other}`"))),
    };
    emit(args.out.as_deref(), &payload)?;
    Ok(0)
}

fn test_result_csv(r: &TestResult) -> String {
    let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
    format!(
        "u_x,u_y,t_r,z_w,z_diff,r_max,p_chi2,p_zw,p_max,p_perm\n{},{},{},{},{},{},{},{},{},{}\n",
        r.u_x,
        r.u_y,
        r.t_r,
        r.z_w,
        r.z_diff,
        r.r_max,
        r.p_chi2,
        r.p_zw,
        r.p_max,
        opt(r.p_perm)
    )
}

#[derive(Serialize)]
struct DiagnoseOutput {
    config: ConfigEcho,
    seed: u64,
    status: Degeneracy,
    moments: rise::MomentSummary,
    c1_ratio: Option<f64>,
    c2_ratio: Option<f64>,
    a3: Option<f64>,
    a5: Option<f64>,
    /// max R_ij / (N^2 r_d^2); the kernel-weight theory wants this small
    max_weight_ratio: Option<f64>,
    graph_edges: usize,
    degree_histogram: Vec<(usize, usize)>,
}

fn cmd_diagnose(args: &TestArgs) -> Result<u8, RiseError> {
    let prepared = prepare(args, "diagnose")?;
    let ms = permutation_moments(&prepared.rank, prepared.split.m, prepared.split.n)?;
    let status = degeneracy_check(&ms);
    let (a3, a5) = match condition_diagnostics(&prepared.rank) {
        Ok((a3, a5)) => (Some(a3), Some(a5)),
        Err(_) => (None, None),
    };
    let mut hist = std::collections::BTreeMap::new();
    for deg in prepared.graph.degrees() {
        *hist.entry(deg).or_insert(0usize) += 1;
    }
    let max_weight = (0..prepared.rank.n())
        .flat_map(|i| prepared.rank.row(i).iter().copied())
        .fold(0.0f64, f64::max);
    let nn = prepared.rank.n() as f64;
    let max_weight_ratio = (ms.rd_sq > 0.0).then(|| max_weight / (nn * nn * ms.rd_sq));
    let out = DiagnoseOutput {
        config: prepared.config,
        seed: args.seed,
        status,
        moments: ms,
        c1_ratio: ms.c1_ratio(),
        c2_ratio: ms.c2_ratio(),
        a3,
        a5,
        max_weight_ratio,
        graph_edges: prepared.graph.edge_count(),
        degree_histogram: hist.into_iter().collect(),
    };
    let payload = serde_json::to_string_pretty(&out).expect("serializable") + "\n";
    emit(args.out.as_deref(), &payload)?;
    Ok(if status == Degeneracy::Ok { 0 } else { 3 })
}

fn sim_method(args: &SimArgs) -> Result<(SimSetting, MethodConfig), RiseError> {
    let setting = SimSetting::parse(&args.setting, args.d)?;
    let graph: GraphKind = args.graph.parse()?;
    let kernel = parse_kernel(&args.kernel, args.sigma)?;
    let rank = RankSpec::parse(&args.rank, Some(kernel))?;
    let k = if args.k == "n065" {
        KChoice::N065
    } else {
        KChoice::Fixed(parse_k(&args.k, args.m + args.n)?)
    };
    Ok((setting, MethodConfig { graph, rank, k }))
}

fn emit_reports(args: &SimArgs, reports: &[PowerReport]) -> Result<(), RiseError> {
    let payload = match args.format.as_str() {
        "csv" => {
            let mut buf = Vec::new();
            write_power_csv(&mut buf, reports)?;
            String::from_utf8(buf).expect("utf8 csv")
        }
        "json" => serde_json::to_string_pretty(reports).expect("serializable") + "\n",
        other => return Err(usage(format!("--format: unknown format `{other}`"))),
    };
    emit(args.out.as_deref(), &payload)
}

fn cmd_simulate(args: &SimArgs) -> Result<u8, RiseError> {
    let (setting, method) = sim_method(args)?;
    let start = Instant::now();
    let mut report = estimate_power(
        setting, &method, args.m, args.n, args.alpha, args.reps, args.seed,
    )?;
    let elapsed = start.elapsed().as_secs_f64();
    if args.timing {
        report.seconds = Some(elapsed);
    }
    eprintln!(
        "simulate {}: power {:.4} (stderr {:.4}, errors {}) in {:.1}s",
        setting.token(),
        report.power,
        report.stderr,
        report.errors,
        elapsed
    );
    emit_reports(args, std::slice::from_ref(&report))?;
    Ok(0)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, RiseError> {
    if args.lambda_grid.is_empty() {
        return Err(usage("--lambda-grid: provide at least one lambda"));
    }
    let (setting, method) = sim_method(&args.sim)?;
    let start = Instant::now();
    let mut reports = power_vs_k_sweep(
        setting,
        &method,
        args.sim.m,
        args.sim.n,
        args.sim.alpha,
        args.sim.reps,
        &args.lambda_grid,
        args.sim.seed,
    )?;
    let elapsed = start.elapsed().as_secs_f64();
    if args.sim.timing {
        // one aggregate wall time over the sweep, attached to each row
        for r in &mut reports {
            r.seconds = Some(elapsed);
        }
    }
    eprintln!(
        "sweep {}: {} rows in {:.1}s",
        setting.token(),
        reports.len(),
        elapsed
    );
    emit_reports(&args.sim, &reports)?;
    Ok(0)
}

fn create_file(path: &Path) -> Result<std::fs::File, RiseError> {
    std::fs::File::create(path).map_err(|source| RiseError::Io {
        context: format!("creating {}", path.display()),
        source,
    })
}

fn emit(out: Option<&Path>, payload: &str) -> Result<(), RiseError> {
    match out {
        Some(path) => std::fs::write(path, payload).map_err(|source| RiseError::Io {
            context: format!("writing {}", path.display()),
            source,
        }),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}
