//! `indmst` — solve, verify, trace, generate, and benchmark instances of
//! the incremental network design problem on spanning trees.
//!
//! Exit codes are part of the contract: 0 success, 1 failed checks or an
//! internal invariant violation, 2 unreadable input or bad parameters,
//! 3 infeasible instance, 4 enumeration cap exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use indmst::matroid::ElementSet;
use indmst::reference::{
    audit_trace, brute_force_optimum, check_extension_property, compute_f_series, DEFAULT_CAP,
    EXTENSION_CAP,
};
use indmst::solver::{
    efficient_solve_graph, greedy_solve, simplified_greedy_solve, TraceSnapshot,
};
use indmst::{io, Error, Graph};

/// Overrides the default enumeration cap when no `--cap` flag is given.
const CAP_ENV: &str = "INDMST_CAP";

#[derive(Parser)]
#[command(
    name = "indmst",
    version,
    about = "Exact solvers for incremental network design over minimum spanning trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and emit its build plan
    Solve(SolveArgs),
    /// Certify solver output against independent checks, on one instance or a corpus
    Verify(VerifyArgs),
    /// Print the one-pass scan trace of an instance together with its audit
    Trace(TraceArgs),
    /// Generate a random connected instance and print it
    Gen(GenArgs),
    /// Time the one-pass solver over an edge-doubling ladder
    Bench(BenchArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// Best exchange anywhere, one per period
    Greedy,
    /// Best exchange into the ultimate basis, one per period
    Simplified,
    /// Single sorted scan; near-linear time
    Efficient,
    /// Exhaustive subset enumeration (bounded by the cap)
    Brute,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

impl Format {
    fn to_io(self) -> io::OutputFormat {
        match self {
            Format::Json => io::OutputFormat::Json,
            Format::Tsv => io::OutputFormat::Tsv,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file in the `p ind-mst` text format
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Efficient)]
    algorithm: Algorithm,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    output: Format,
    /// Also audit the scan trace and report it on stderr
    #[arg(long)]
    trace: bool,
    /// Enumeration limit for `--algorithm brute` (env INDMST_CAP, default 12)
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file; omit when verifying a generated corpus
    #[arg(conflicts_with = "corpus")]
    input: Option<PathBuf>,
    /// Verify this many generated instances instead of a file
    #[arg(long)]
    corpus: Option<usize>,
    /// Base seed; instance i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed vertex count for corpus instances (default: varied small shapes)
    #[arg(long, requires = "m")]
    n: Option<usize>,
    /// Fixed edge count for corpus instances
    #[arg(long, requires = "n")]
    m: Option<usize>,
    /// Fraction of edges that already exist (only with --n/--m)
    #[arg(long, default_value_t = 0.5)]
    e0_fraction: f64,
    #[arg(long, default_value_t = -9)]
    weight_min: i64,
    #[arg(long, default_value_t = 9)]
    weight_max: i64,
    /// Enumeration limit for the exhaustive check (env INDMST_CAP, default 12)
    #[arg(long)]
    cap: Option<usize>,
    /// Worker threads for corpus verification; output is identical for any value
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct TraceArgs {
    /// Instance file in the `p ind-mst` text format
    input: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction of edges marked existing (always at least a spanning tree)
    #[arg(long, default_value_t = 0.5)]
    e0_fraction: f64,
    #[arg(long, default_value_t = -9)]
    weight_min: i64,
    #[arg(long, default_value_t = 9)]
    weight_max: i64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Largest edge count of the ladder
    #[arg(long, default_value_t = 200_000)]
    m: usize,
    /// Number of ladder rungs; each rung doubles the edge count
    #[arg(long, default_value_t = 4)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Timed runs per rung; the fastest is reported
    #[arg(long, default_value_t = 3)]
    repeats: usize,
}

/// A failure that already knows its exit code.
struct Failure {
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Parse { .. } | Error::InvalidParams(_) => 2,
            Error::InfeasibleInstance { .. } => 3,
            Error::CapExceeded { .. } => 4,
            _ => 1,
        };
        Failure {
            message: err.to_string(),
            code,
        }
    }
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Trace(args) => cmd_trace(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage_error(format!("{}: {e}", path.display())))?;
    Ok(io::parse_instance(&text)?)
}

fn effective_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(CAP_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| usage_error(format!("{CAP_ENV} must be an integer, got '{raw}'"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Failure> {
    let g = read_instance(&args.input)?;
    let (label, plan) = match args.algorithm {
        Algorithm::Greedy => ("greedy", greedy_solve(&g.instance())?),
        Algorithm::Simplified => ("simplified", simplified_greedy_solve(&g.instance())?),
        Algorithm::Efficient => ("efficient", efficient_solve_graph(&g, false)?.0),
        Algorithm::Brute => {
            let cap = effective_cap(args.cap)?;
            let objective = brute_force_optimum(&g.instance(), cap)?;
            print!("{}", emit_objective_only(objective, g.horizon(), args.output));
            return Ok(0);
        }
    };
    print!("{}", io::emit_plan(&plan, label, args.output.to_io(), Some(&g)));
    if args.trace {
        let (_, trace) = efficient_solve_graph(&g, true)?;
        let report = audit_trace(&g.instance(), &trace.expect("trace requested"));
        eprint!("{report}");
        if !report.all_passed() {
            return Ok(1);
        }
    }
    Ok(0)
}

/// Exhaustive search yields an objective but no schedule, so its document
/// carries only the scalar facts.
fn emit_objective_only(objective: i64, horizon: usize, format: Format) -> String {
    match format {
        Format::Json => format!(
            "{{\n  \"algorithm\": \"brute\",\n  \"horizon\": {horizon},\n  \"objective\": {objective}\n}}\n"
        ),
        Format::Tsv => {
            format!("algorithm\tbrute\nhorizon\t{horizon}\nobjective\t{objective}\n")
        }
    }
}

/// Outcome of the four independent checks on one instance. `extension` is
/// absent when the horizon exceeds the feasible enumeration range.
struct InstanceChecks {
    objectives_equal: bool,
    lower_bound: bool,
    audit: bool,
    extension: Option<bool>,
}

impl InstanceChecks {
    fn all_passed(&self) -> bool {
        self.objectives_equal && self.lower_bound && self.audit && self.extension.unwrap_or(true)
    }
}

fn verify_one(g: &Graph, cap: usize) -> Result<InstanceChecks, Error> {
    let inst = g.instance();
    let greedy = greedy_solve(&inst)?;
    let simplified = simplified_greedy_solve(&inst)?;
    let (fast, trace) = efficient_solve_graph(g, true)?;
    let brute = brute_force_optimum(&inst, cap)?;
    let objectives_equal = greedy.objective == brute
        && simplified.objective == brute
        && fast.objective == brute;

    let series = compute_f_series(&inst, cap)?;
    let lower_bound = series.has_valid_shape() && fast.objective == series.total();

    let audit = audit_trace(&inst, &trace.expect("trace requested")).all_passed();

    let extension = if g.horizon() <= EXTENSION_CAP {
        Some(check_extension_property(&inst)?.holds())
    } else {
        None
    };

    Ok(InstanceChecks {
        objectives_equal,
        lower_bound,
        audit,
        extension,
    })
}

/// Generation recipe for corpus verification. Without fixed sizes each seed
/// draws a small varied shape: 3..=7 vertices, a spanning tree plus up to
/// two extra existing edges, and at most 8 potential edges (15 edges total).
struct CorpusRecipe {
    seed: u64,
    fixed: Option<(usize, usize)>,
    e0_fraction: f64,
    range: (i64, i64),
}

impl CorpusRecipe {
    fn entry(&self, index: usize) -> Result<Graph, Error> {
        let seed = self.seed.wrapping_add(index as u64);
        match self.fixed {
            Some((n, m)) => io::gen_random(n, m, seed, self.range, self.e0_fraction),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0FF_EE00);
                let n = rng.gen_range(3..=7usize);
                let e0 = n - 1 + rng.gen_range(0..=2usize);
                let t = rng.gen_range(0..=8usize).min(15 - e0);
                let m = e0 + t;
                io::gen_random(n, m, seed, self.range, e0 as f64 / m as f64)
            }
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let cap = effective_cap(args.cap)?;
    if args.weight_min > args.weight_max {
        return Err(usage_error(format!(
            "empty weight range {}..={}",
            args.weight_min, args.weight_max
        )));
    }

    if let Some(path) = &args.input {
        let g = read_instance(path)?;
        let checks = verify_one(&g, cap)?;
        let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
        println!("objective-equivalence: {}", verdict(checks.objectives_equal));
        println!("lower-bound-identity: {}", verdict(checks.lower_bound));
        println!("trace-audit: {}", verdict(checks.audit));
        match checks.extension {
            Some(ok) => println!("extension-property: {}", verdict(ok)),
            None => println!(
                "extension-property: skipped (horizon {} exceeds {EXTENSION_CAP})",
                g.horizon()
            ),
        }
        let ok = checks.all_passed();
        println!("verdict: {}", verdict(ok));
        return Ok(if ok { 0 } else { 1 });
    }

    let Some(count) = args.corpus else {
        return Err(usage_error("give an instance file or --corpus N"));
    };
    if args.jobs == 0 {
        return Err(usage_error("--jobs must be at least 1"));
    }
    let recipe = CorpusRecipe {
        seed: args.seed,
        fixed: args.n.zip(args.m),
        e0_fraction: args.e0_fraction,
        range: (args.weight_min, args.weight_max),
    };

    // Workers own disjoint index chunks; results are merged in index order
    // afterwards, so the report is identical for any --jobs value.
    let jobs = args.jobs.min(count.max(1));
    let mut results: Vec<Option<Result<InstanceChecks, Error>>> = Vec::new();
    results.resize_with(count, || None);
    let chunk = count.div_ceil(jobs);
    std::thread::scope(|scope| {
        let recipe = &recipe;
        for (worker, slot) in results.chunks_mut(chunk).enumerate() {
            scope.spawn(move || {
                for (offset, cell) in slot.iter_mut().enumerate() {
                    let index = worker * chunk + offset;
                    *cell = Some(
                        recipe.entry(index)
                            .and_then(|g| verify_one(&g, cap)),
                    );
                }
            });
        }
    });

    let mut passed = [0usize; 3];
    let mut failed = [0usize; 3];
    let (mut ext_passed, mut ext_failed, mut ext_skipped) = (0usize, 0usize, 0usize);
    for (index, cell) in results.into_iter().enumerate() {
        let checks = cell
            .expect("every index was assigned to a worker")
            .map_err(|e| {
                let mut failure = Failure::from(e);
                failure.message = format!("instance {index}: {}", failure.message);
                failure
            })?;
        for (k, ok) in [checks.objectives_equal, checks.lower_bound, checks.audit]
            .into_iter()
            .enumerate()
        {
            if ok {
                passed[k] += 1;
            } else {
                failed[k] += 1;
            }
        }
        match checks.extension {
            Some(true) => ext_passed += 1,
            Some(false) => ext_failed += 1,
            None => ext_skipped += 1,
        }
    }

    println!("instances: {count}");
    let line = |name: &str, pass: usize, fail: usize, extra: &str| {
        let verdict = if fail == 0 { "pass" } else { "FAIL" };
        println!("{name}: {verdict} ({pass}/{}{extra})", pass + fail);
    };
    line("objective-equivalence", passed[0], failed[0], "");
    line("lower-bound-identity", passed[1], failed[1], "");
    line("trace-audit", passed[2], failed[2], "");
    let skipped = if ext_skipped > 0 {
        format!(", {ext_skipped} skipped")
    } else {
        String::new()
    };
    line("extension-property", ext_passed, ext_failed, &skipped);

    let ok = failed.iter().all(|&f| f == 0) && ext_failed == 0;
    println!("verdict: {}", if ok { "pass" } else { "FAIL" });
    Ok(if ok { 0 } else { 1 })
}

fn format_set(set: &ElementSet) -> String {
    let mut out = String::from("{");
    for (i, e) in set.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{e}");
    }
    out.push('}');
    out
}

fn format_snapshot(snap: &TraceSnapshot, element: usize, verbose: bool) -> String {
    let mut line = if verbose {
        format!(
            "pos {}: element {element}  x={} y={} z={}",
            snap.position,
            format_set(&snap.x),
            format_set(&snap.y),
            format_set(&snap.z)
        )
    } else {
        format!(
            "pos {}: element {element}  |x|={} |y|={} |z|={}",
            snap.position,
            snap.x.len(),
            snap.y.len(),
            snap.z.len()
        )
    };
    if let Some(event) = &snap.exchange {
        let _ = write!(
            line,
            "  swap: remove {}, add {}, gain {}, circuit {}",
            event.pair.removed,
            event.pair.added,
            event.pair.gain,
            format_set(&event.circuit)
        );
    }
    line
}

fn cmd_trace(args: TraceArgs) -> Result<u8, Failure> {
    let g = read_instance(&args.input)?;
    let inst = g.instance();
    let (plan, trace) = efficient_solve_graph(&g, true)?;
    let trace = trace.expect("trace requested");

    let scan_order = inst.ids_by_weight();
    // full sets stay readable only for desk-sized instances
    let verbose = g.edge_count() <= 64;
    println!(
        "scan of {} elements, {} swaps kept",
        g.edge_count(),
        plan.improving_steps()
    );
    for snap in &trace {
        println!("{}", format_snapshot(snap, scan_order[snap.position - 1], verbose));
    }
    println!(
        "order: {}",
        plan.order()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!(
        "step weights: {}",
        plan.step_weights
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!("objective: {}", plan.objective);

    let report = audit_trace(&inst, &trace);
    print!("{report}");
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn cmd_gen(args: GenArgs) -> Result<u8, Failure> {
    let g = io::gen_random(
        args.n,
        args.m,
        args.seed,
        (args.weight_min, args.weight_max),
        args.e0_fraction,
    )?;
    print!("{}", io::emit_instance(&g));
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> Result<u8, Failure> {
    if args.steps == 0 || args.repeats == 0 {
        return Err(usage_error("--steps and --repeats must be at least 1"));
    }
    let floor = args.n.saturating_sub(1).max(1);
    println!("n={} repeats={} seed={}", args.n, args.repeats, args.seed);
    let mut previous: Option<f64> = None;
    for rung in (0..args.steps).rev() {
        let m = (args.m >> rung).max(floor);
        let g = io::gen_random(args.n, m, args.seed, (1, 1_000_000), 0.5)?;
        let mut fastest = Duration::MAX;
        let mut objective = 0;
        for _ in 0..args.repeats {
            let started = Instant::now();
            let (plan, _) = efficient_solve_graph(&g, false)?;
            fastest = fastest.min(started.elapsed());
            objective = plan.objective;
        }
        let millis = fastest.as_secs_f64() * 1e3;
        let ratio = match previous {
            Some(prev) => format!("{:.2}", millis / prev.max(1e-9)),
            None => "-".to_string(),
        };
        println!("m={m:>8}  min {millis:>9.3} ms  ratio {ratio}  objective {objective}");
        previous = Some(millis);
    }
    Ok(0)
}
