use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gp_majority::harness::{fit_nlogn, read_csv, run_experiment, summarize_rows, GroupKey, KvConfig};
use gp_majority::verify::{self, VerifyOptions};
use gp_majority::{run, GpError};

const EXIT_INVALID: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "gpmaj", version, about = "GP runtime experiments on Majority-style problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and print its record.
    Run(RunArgs),
    /// Run a sweep described by a key=value spec file and write CSV.
    Experiment(ExperimentArgs),
    /// Run the oracle and invariant suite.
    Verify(VerifyArgs),
    /// Compare literal-count profiles of a random tree with the Poisson reference.
    Distribution(DistributionArgs),
    /// Box statistics and n ln n fit for a results CSV.
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct Overrides {
    /// Override any config key (repeatable), e.g. `--set eval_budget=500000`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    c: Option<u32>,
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    s_init: Option<usize>,
    #[arg(long)]
    bloat_control: Option<bool>,
    #[arg(long)]
    allow_substitutions: Option<bool>,
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long)]
    eval_budget: Option<u64>,
    #[arg(long)]
    stop: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, kv: &mut KvConfig) -> Result<(), GpError> {
        let typed: [(&str, Option<String>); 10] = [
            ("problem", self.problem.clone()),
            ("c", self.c.map(|v| v.to_string())),
            ("algorithm", self.algorithm.clone()),
            ("s_init", self.s_init.map(|v| v.to_string())),
            ("bloat_control", self.bloat_control.map(|v| v.to_string())),
            ("allow_substitutions", self.allow_substitutions.map(|v| v.to_string())),
            ("lambda", self.lambda.map(|v| v.to_string())),
            ("eval_budget", self.eval_budget.map(|v| v.to_string())),
            ("stop", self.stop.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
        ];
        for (key, value) in typed {
            if let Some(v) = value {
                kv.set(key, &v)?;
            }
        }
        for s in &self.set {
            kv.apply_override(s)?;
        }
        Ok(())
    }
}

#[derive(Args)]
struct RunArgs {
    /// Optional key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct ExperimentArgs {
    spec: PathBuf,
    /// Output CSV; overrides the spec's `output` key.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10_000)]
    individuals: usize,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 1_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DistributionArgs {
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit with status 3 when any cell deviates by more than this.
    #[arg(long, default_value_t = 0.01)]
    tolerance: f64,
}

#[derive(Args)]
struct SummarizeArgs {
    csv: PathBuf,
}

fn error_code(e: &GpError) -> u8 {
    match e {
        GpError::Io(_) | GpError::Csv(_) => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

fn cmd_run(args: RunArgs) -> Result<u8, GpError> {
    let mut kv = match &args.config {
        Some(path) => KvConfig::load(path)?,
        None => KvConfig::default(),
    };
    if let Some(n) = args.n {
        kv.set("n", &n.to_string())?;
    }
    args.overrides.apply(&mut kv)?;
    let cfg = kv.run_config()?;
    let rec = run(&cfg)?;
    println!("problem: {}", cfg.problem);
    println!("algorithm: {}", cfg.algorithm.name());
    println!("n: {}", cfg.n);
    println!("seed: {}", cfg.seed);
    println!("evaluations: {}", rec.evaluations_used);
    println!("success: {}", rec.success);
    println!("final_value: {}", rec.final_value);
    println!("final_size: {}", rec.final_size);
    println!("unexpressed: {}", rec.unexpressed_count);
    Ok(0)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<u8, GpError> {
    let mut kv = KvConfig::load(&args.spec)?;
    args.overrides.apply(&mut kv)?;
    if let Some(out) = &args.output {
        kv.set("output", &out.to_string_lossy())?;
    }
    let spec = kv.experiment_spec()?;
    let rows = run_experiment(&spec)?;
    let ok = rows.iter().filter(|r| r.success).count();
    eprintln!(
        "{} runs, {} successful, written to {}",
        rows.len(),
        ok,
        spec.output_path.display()
    );
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, GpError> {
    let opts = VerifyOptions {
        individuals: args.individuals,
        steps: args.steps,
        invariant_samples: args.samples,
        seed: args.seed,
    };
    let mut failed = 0;
    for r in verify::run_all(&opts) {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag} {:<28} {:>7.2}s  {}", r.name, r.seconds, r.detail);
        failed += usize::from(!r.passed);
    }
    Ok(if failed == 0 { 0 } else { EXIT_VERIFY })
}

fn cmd_distribution(args: DistributionArgs) -> Result<u8, GpError> {
    if args.n == 0 || args.nu.is_nan() || args.nu <= 0.0 {
        return Err(GpError::InvalidConfig("n and nu must be positive".into()));
    }
    let (worst, rows) = verify::distribution_report(args.nu, args.n, args.seed)?;
    println!("k l   observed  reference  deviation");
    for ((k, l), got, want) in rows {
        println!("{k} {l}   {got:.5}   {want:.5}    {:+.5}", got - want);
    }
    println!("max deviation {worst:.5} (tolerance {})", args.tolerance);
    Ok(if worst <= args.tolerance { 0 } else { EXIT_VERIFY })
}

fn cmd_summarize(args: SummarizeArgs) -> Result<u8, GpError> {
    let rows = read_csv(&args.csv)?;
    let groups = summarize_rows(&rows)?;
    println!(
        "{:<56} {:>6} {:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9}",
        "configuration", "n", "runs", "min", "q1", "median", "q3", "max", "successes"
    );
    let mut series: BTreeMap<GroupKey, BTreeMap<usize, f64>> = BTreeMap::new();
    for (key, s) in &groups {
        println!(
            "{:<56} {:>6} {:>5} {:>10.1} {:>10.1} {:>10.1} {:>10.1} {:>10.1} {:>9}",
            key.to_string(),
            key.n,
            s.count,
            s.min,
            s.q1,
            s.median,
            s.q3,
            s.max,
            s.success_count
        );
        series.entry(key.series()).or_default().insert(key.n, s.median);
    }
    for (key, medians) in &series {
        if medians.len() < 2 {
            continue;
        }
        let fit = fit_nlogn(medians)?;
        let ratios: Vec<String> = fit.ratios.iter().map(|(n, r)| format!("{n}:{r:.3}")).collect();
        println!("fit {key}: w = {:.3}  (median/(n ln n): {})", fit.w, ratios.join(" "));
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Distribution(a) => cmd_distribution(a),
        Command::Summarize(a) => cmd_summarize(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
