//! Experiment configuration, seeded batch execution, CSV output and box-plot
//! statistics.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::algorithms::{default_lambda, derive_seed, run, Algorithm, RunConfig, RunRecord, StopCondition, StopScope};
use crate::error::{GpError, Result};
use crate::fitness::Problem;

pub const CSV_HEADER: [&str; 17] = [
    "run_id",
    "n",
    "problem",
    "c",
    "algorithm",
    "bloat_control",
    "allow_substitutions",
    "lambda",
    "s_init",
    "eval_budget",
    "seed",
    "evaluations",
    "success",
    "final_value_num",
    "final_value_den_pow2",
    "final_size",
    "unexpressed",
];

const KNOWN_KEYS: &[&str] = &[
    "problem",
    "c",
    "algorithm",
    "n",
    "n_values",
    "repetitions",
    "s_init",
    "s_init_factor",
    "bloat_control",
    "allow_substitutions",
    "lambda",
    "eval_budget",
    "stop",
    "stop_scope",
    "seed",
    "master_seed",
    "output",
    "trace_stride",
    "parallel_slots",
];

/// Flat `key = value` settings; `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KvConfig {
    entries: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = KvConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                GpError::InvalidConfig(format!("line {}: expected key=value, got {raw:?}", lineno + 1))
            })?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(GpError::InvalidConfig(format!("unknown key {key:?}")));
        }
        self.entries.insert(key, value.to_string());
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| GpError::InvalidConfig(format!("expected key=value, got {assignment:?}")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| GpError::InvalidConfig(format!("bad value for {key}: {v:?}"))),
        }
    }

    fn flag(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some("true" | "1" | "yes" | "on") => Ok(Some(true)),
            Some("false" | "0" | "no" | "off") => Ok(Some(false)),
            Some(v) => Err(GpError::InvalidConfig(format!("bad boolean for {key}: {v:?}"))),
        }
    }

    fn problem(&self) -> Result<Problem> {
        let name = self
            .get("problem")
            .ok_or_else(|| GpError::InvalidConfig("missing key: problem".into()))?;
        Problem::from_name(name, self.parsed("c")?)
    }

    /// Fills every field except `n`, `s_init` and `lambda`, which depend on
    /// the dimension.
    fn run_template(&self, n: usize) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(self.problem()?, n);
        if let Some(a) = self.parsed::<Algorithm>("algorithm")? {
            cfg.algorithm = a;
        }
        if let Some(b) = self.flag("bloat_control")? {
            cfg.bloat_control = b;
        }
        if let Some(b) = self.flag("allow_substitutions")? {
            cfg.allow_substitution = b;
        }
        if let Some(b) = self.parsed("eval_budget")? {
            cfg.eval_budget = b;
        }
        if let Some(s) = self.parsed::<StopCondition>("stop")? {
            cfg.stop = s;
        }
        if let Some(s) = self.parsed::<StopScope>("stop_scope")? {
            cfg.stop_scope = Some(s);
        }
        if let Some(s) = self.parsed("trace_stride")? {
            cfg.trace_stride = Some(s);
        }
        if let Some(p) = self.flag("parallel_slots")? {
            cfg.parallel_slots = p;
        }
        Ok(cfg)
    }

    /// A single run: needs `problem` and `n`.
    pub fn run_config(&self) -> Result<RunConfig> {
        let n: usize = self
            .parsed("n")?
            .ok_or_else(|| GpError::InvalidConfig("missing key: n".into()))?;
        let mut cfg = self.run_template(n)?;
        cfg.s_init = match (self.parsed::<usize>("s_init")?, self.parsed::<f64>("s_init_factor")?) {
            (Some(s), _) => s,
            (None, Some(f)) => SInitRule::TimesN(f).resolve(n),
            (None, None) => SInitRule::TimesN(10.0).resolve(n),
        };
        cfg.lambda = self.parsed("lambda")?.unwrap_or_else(|| default_lambda(n));
        cfg.seed = self.parsed("seed")?.unwrap_or(0);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn experiment_spec(&self) -> Result<ExperimentSpec> {
        let n_text = self
            .get("n_values")
            .or_else(|| self.get("n"))
            .ok_or_else(|| GpError::InvalidConfig("missing key: n_values".into()))?;
        let n_values = n_text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| GpError::InvalidConfig(format!("bad n value {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let s_init_rule = match (self.parsed::<usize>("s_init")?, self.parsed::<f64>("s_init_factor")?) {
            (Some(_), Some(_)) => return Err(GpError::InvalidConfig("give either s_init or s_init_factor".into())),
            (Some(s), None) => SInitRule::Fixed(s),
            (None, Some(f)) => SInitRule::TimesN(f),
            (None, None) => SInitRule::TimesN(10.0),
        };
        let base = self.run_template(n_values.first().copied().unwrap_or(1))?;
        let spec = ExperimentSpec {
            trace_sampling: base.trace_stride,
            base,
            n_values,
            repetitions: self.parsed("repetitions")?.unwrap_or(1),
            s_init_rule,
            lambda: self.parsed("lambda")?,
            output_path: PathBuf::from(self.get("output").unwrap_or("results.csv")),
            master_seed: self.parsed("master_seed")?.or(self.parsed("seed")?).unwrap_or(0),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SInitRule {
    Fixed(usize),
    TimesN(f64),
}

impl SInitRule {
    pub fn resolve(&self, n: usize) -> usize {
        match *self {
            SInitRule::Fixed(s) => s,
            SInitRule::TimesN(f) => ((f * n as f64).round() as usize).max(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    /// Template; `n`, `s_init`, `lambda` and `seed` are set per run.
    pub base: RunConfig,
    pub n_values: Vec<usize>,
    pub repetitions: usize,
    pub s_init_rule: SInitRule,
    /// Fixed population size, or `4 ceil(ln n)` when `None`.
    pub lambda: Option<usize>,
    pub output_path: PathBuf,
    pub master_seed: u64,
    pub trace_sampling: Option<u64>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(GpError::InvalidConfig("repetitions must be at least 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(GpError::InvalidConfig("n_values must not be empty".into()));
        }
        for (n, _) in self.jobs() {
            n.validate()?;
        }
        Ok(())
    }

    pub fn run_seed(&self, n: usize, repetition: usize) -> u64 {
        derive_seed(self.master_seed, &[n as u64, repetition as u64])
    }

    /// All run configurations in output order: sorted by `n`, then repetition.
    pub fn jobs(&self) -> Vec<(RunConfig, usize)> {
        let mut ns = self.n_values.clone();
        ns.sort_unstable();
        ns.dedup();
        let mut out = Vec::with_capacity(ns.len() * self.repetitions);
        for &n in &ns {
            for rep in 0..self.repetitions {
                let mut cfg = self.base.clone();
                cfg.n = n;
                cfg.s_init = self.s_init_rule.resolve(n);
                cfg.lambda = self.lambda.unwrap_or_else(|| default_lambda(n));
                cfg.seed = self.run_seed(n, rep);
                cfg.trace_stride = self.trace_sampling;
                out.push((cfg, rep));
            }
        }
        out
    }
}

/// One line of the results CSV.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRow {
    pub run_id: usize,
    pub n: usize,
    pub problem: String,
    pub c: Option<u32>,
    pub algorithm: String,
    pub bloat_control: bool,
    pub allow_substitutions: bool,
    pub lambda: Option<usize>,
    pub s_init: usize,
    pub eval_budget: u64,
    pub seed: u64,
    pub evaluations: u64,
    pub success: bool,
    pub final_value_num: String,
    pub final_value_den_pow2: u64,
    pub final_size: usize,
    pub unexpressed: usize,
}

impl CsvRow {
    pub fn new(run_id: usize, cfg: &RunConfig, rec: &RunRecord) -> Self {
        CsvRow {
            run_id,
            n: cfg.n,
            problem: cfg.problem.name().to_string(),
            c: cfg.problem.c(),
            algorithm: cfg.algorithm.name().to_string(),
            bloat_control: cfg.bloat_control,
            allow_substitutions: cfg.allow_substitution,
            lambda: (cfg.algorithm == Algorithm::ConcatCrossover).then_some(cfg.lambda),
            s_init: cfg.s_init,
            eval_budget: cfg.eval_budget,
            seed: cfg.seed,
            evaluations: rec.evaluations_used,
            success: rec.success,
            final_value_num: rec.final_value.numerator().to_string(),
            final_value_den_pow2: rec.final_value.denominator_exponent(),
            final_size: rec.final_size,
            unexpressed: rec.unexpressed_count,
        }
    }

    fn fields(&self) -> [String; 17] {
        let opt = |o: Option<String>| o.unwrap_or_default();
        [
            self.run_id.to_string(),
            self.n.to_string(),
            self.problem.clone(),
            opt(self.c.map(|c| c.to_string())),
            self.algorithm.clone(),
            self.bloat_control.to_string(),
            self.allow_substitutions.to_string(),
            opt(self.lambda.map(|l| l.to_string())),
            self.s_init.to_string(),
            self.eval_budget.to_string(),
            self.seed.to_string(),
            self.evaluations.to_string(),
            self.success.to_string(),
            self.final_value_num.clone(),
            self.final_value_den_pow2.to_string(),
            self.final_size.to_string(),
            self.unexpressed.to_string(),
        ]
    }

    fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |i: usize| GpError::InvalidInput(format!("column {} has bad value {:?}", CSV_HEADER[i], field(i)));
        fn num<T: FromStr>(s: &str) -> Option<T> {
            s.parse().ok()
        }
        let opt_num = |i: usize| -> Result<Option<u64>> {
            if field(i).is_empty() {
                Ok(None)
            } else {
                num(field(i)).map(Some).ok_or_else(|| bad(i))
            }
        };
        Ok(CsvRow {
            run_id: num(field(0)).ok_or_else(|| bad(0))?,
            n: num(field(1)).ok_or_else(|| bad(1))?,
            problem: field(2).to_string(),
            c: opt_num(3)?.map(|c| c as u32),
            algorithm: field(4).to_string(),
            bloat_control: num(field(5)).ok_or_else(|| bad(5))?,
            allow_substitutions: num(field(6)).ok_or_else(|| bad(6))?,
            lambda: opt_num(7)?.map(|l| l as usize),
            s_init: num(field(8)).ok_or_else(|| bad(8))?,
            eval_budget: num(field(9)).ok_or_else(|| bad(9))?,
            seed: num(field(10)).ok_or_else(|| bad(10))?,
            evaluations: num(field(11)).ok_or_else(|| bad(11))?,
            success: num(field(12)).ok_or_else(|| bad(12))?,
            final_value_num: field(13).to_string(),
            final_value_den_pow2: num(field(14)).ok_or_else(|| bad(14))?,
            final_size: num(field(15)).ok_or_else(|| bad(15))?,
            unexpressed: num(field(16)).ok_or_else(|| bad(16))?,
        })
    }
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(GpError::InvalidInput(format!(
            "{} does not have the expected header",
            path.display()
        )));
    }
    r.records().map(|rec| CsvRow::from_record(&rec?)).collect()
}

/// Runs every job of `spec` and returns rows in output order.
pub fn execute(spec: &ExperimentSpec) -> Result<(Vec<CsvRow>, Vec<RunRecord>)> {
    spec.validate()?;
    let jobs = spec.jobs();
    let records: Vec<RunRecord> = jobs.par_iter().map(|(cfg, _)| run(cfg)).collect::<Result<Vec<_>>>()?;
    let rows = jobs
        .iter()
        .zip(&records)
        .enumerate()
        .map(|(id, ((cfg, _), rec))| CsvRow::new(id, cfg, rec))
        .collect();
    Ok((rows, records))
}

/// Executes `spec` and writes its CSV (plus `<output>.trace.csv` when trace
/// sampling is on).
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<CsvRow>> {
    let (rows, records) = execute(spec)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows)?;
    fs::write(&spec.output_path, buf)?;
    if spec.trace_sampling.is_some() {
        let mut path = spec.output_path.clone().into_os_string();
        path.push(".trace.csv");
        let mut out = String::from("run_id,evaluations,value_num,value_den_pow2,size,expressed\n");
        for (row, rec) in rows.iter().zip(&records) {
            for t in &rec.trace {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    row.run_id,
                    t.evaluations,
                    t.value.numerator(),
                    t.value.denominator_exponent(),
                    t.size,
                    t.expressed
                ));
            }
        }
        fs::File::create(PathBuf::from(path))?.write_all(out.as_bytes())?;
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub count: usize,
    pub success_count: usize,
}

/// Quantile at rank `p (N - 1)` with linear interpolation; `sorted` must be
/// ascending and non-empty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let rank = p * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn summarize(values: &[f64]) -> Result<BoxStats> {
    if values.is_empty() {
        return Err(GpError::EmptyGroup);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(BoxStats {
        min: v[0],
        q1: quantile(&v, 0.25),
        median: quantile(&v, 0.5),
        q3: quantile(&v, 0.75),
        max: v[v.len() - 1],
        count: v.len(),
        success_count: 0,
    })
}

/// Rows sharing everything but the seed and repetition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupKey {
    pub problem: String,
    pub c: Option<u32>,
    pub algorithm: String,
    pub bloat_control: bool,
    pub allow_substitutions: bool,
    pub lambda: Option<usize>,
    pub n: usize,
}

impl GroupKey {
    pub fn of(row: &CsvRow) -> Self {
        GroupKey {
            problem: row.problem.clone(),
            c: row.c,
            algorithm: row.algorithm.clone(),
            bloat_control: row.bloat_control,
            allow_substitutions: row.allow_substitutions,
            lambda: row.lambda,
            n: row.n,
        }
    }

    /// The same key with `n` cleared; groups that form one curve over `n`.
    pub fn series(&self) -> GroupKey {
        GroupKey { n: 0, ..self.clone() }
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.problem)?;
        if let Some(c) = self.c {
            write!(f, "(c={c})")?;
        }
        write!(
            f,
            " {} bloat={} subst={}",
            self.algorithm, self.bloat_control, self.allow_substitutions
        )?;
        if let Some(l) = self.lambda {
            write!(f, " lambda={l}")?;
        }
        Ok(())
    }
}

/// Box statistics of `evaluations` per group, in key order.
pub fn summarize_rows(rows: &[CsvRow]) -> Result<Vec<(GroupKey, BoxStats)>> {
    let mut groups: BTreeMap<GroupKey, Vec<&CsvRow>> = BTreeMap::new();
    for row in rows {
        groups.entry(GroupKey::of(row)).or_default().push(row);
    }
    groups
        .into_iter()
        .map(|(key, members)| {
            let values: Vec<f64> = members.iter().map(|r| r.evaluations as f64).collect();
            let mut stats = summarize(&values)?;
            stats.success_count = members.iter().filter(|r| r.success).count();
            Ok((key, stats))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NlognFit {
    pub w: f64,
    /// `median(n) / (n ln n)` per `n`.
    pub ratios: Vec<(usize, f64)>,
}

/// Fits `median(n) ~ w n ln n` as the median over `n` of the per-`n` ratios.
pub fn fit_nlogn(medians: &BTreeMap<usize, f64>) -> Result<NlognFit> {
    if medians.len() < 2 {
        return Err(GpError::InvalidInput("need at least two distinct n values".into()));
    }
    let mut ratios = Vec::with_capacity(medians.len());
    for (&n, &m) in medians {
        if m.is_nan() || m <= 0.0 {
            return Err(GpError::InvalidInput(format!("median for n={n} must be positive")));
        }
        if n < 2 {
            return Err(GpError::InvalidInput("n ln n vanishes for n < 2".into()));
        }
        let nf = n as f64;
        ratios.push((n, m / (nf * nf.ln())));
    }
    let mut r: Vec<f64> = ratios.iter().map(|&(_, x)| x).collect();
    r.sort_by(f64::total_cmp);
    Ok(NlognFit {
        w: quantile(&r, 0.5),
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartiles_use_linear_interpolation() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        let s = summarize(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
        let s = summarize(&[7.0; 9]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (7.0, 7.0, 7.0, 7.0, 7.0));
        assert!(matches!(summarize(&[]), Err(GpError::EmptyGroup)));
    }

    #[test]
    fn nlogn_fit_examples() {
        let f = |n: f64| n * n.ln();
        let exact: BTreeMap<usize, f64> = [(100, 9.0 * f(100.0)), (400, 9.0 * f(400.0))].into_iter().collect();
        assert!((fit_nlogn(&exact).unwrap().w - 9.0).abs() < 1e-12);

        let linear: BTreeMap<usize, f64> = [100, 200, 400, 800].iter().map(|&n| (n, 5.0 * n as f64)).collect();
        let fit = fit_nlogn(&linear).unwrap();
        assert!(fit.ratios.windows(2).all(|w| w[1].1 < w[0].1));

        let published: BTreeMap<usize, f64> = [(100, 4946.0), (1000, 60696.0)].into_iter().collect();
        let fit = fit_nlogn(&published).unwrap();
        assert!((fit.ratios[0].1 - 10.74).abs() < 0.01);
        assert!((fit.ratios[1].1 - 8.79).abs() < 0.01);
        assert!((fit.w - 9.77).abs() < 0.01);

        let one: BTreeMap<usize, f64> = [(100, 1.0)].into_iter().collect();
        assert!(fit_nlogn(&one).is_err());
        let bad: BTreeMap<usize, f64> = [(100, 1.0), (200, 0.0)].into_iter().collect();
        assert!(fit_nlogn(&bad).is_err());
    }

    #[test]
    fn kv_parsing_and_overrides() {
        let mut kv = KvConfig::parse(
            "# sweep\nproblem = plus-c-majority\nc = 2\nn_values = 100, 200\nrepetitions=3\nbloat-control = false\n",
        )
        .unwrap();
        kv.apply_override("repetitions=5").unwrap();
        let spec = kv.experiment_spec().unwrap();
        assert_eq!(spec.n_values, vec![100, 200]);
        assert_eq!(spec.repetitions, 5);
        assert!(!spec.base.bloat_control);
        assert_eq!(spec.base.problem, Problem::PlusCMajority { c: 2 });
        assert_eq!(spec.s_init_rule, SInitRule::TimesN(10.0));
        assert_eq!(spec.jobs().len(), 10);
        assert_eq!(spec.jobs()[3].0.s_init, 1000);
        assert_eq!(spec.jobs()[5].0.s_init, 2000);

        assert!(KvConfig::parse("bogus = 1").is_err());
        assert!(KvConfig::parse("problem").is_err());
        let kv = KvConfig::parse("problem = plus-c-majority\nn = 5").unwrap();
        assert!(kv.run_config().is_err());
        let kv = KvConfig::parse("problem = majority\nn = 5\nbloat_control = maybe").unwrap();
        assert!(kv.run_config().is_err());
    }

    #[test]
    fn run_config_defaults() {
        let kv =
            KvConfig::parse("problem = two-thirds-majority\nn = 50\nalgorithm = concat-crossover\ns_init_factor = 0.5")
                .unwrap();
        let cfg = kv.run_config().unwrap();
        assert_eq!(cfg.s_init, 25);
        assert_eq!(cfg.lambda, 16);
        assert_eq!(cfg.algorithm, Algorithm::ConcatCrossover);
    }

    #[test]
    fn jobs_are_sorted_with_distinct_seeds() {
        let kv = KvConfig::parse("problem = majority\nn_values = 30,10,20\nrepetitions = 2").unwrap();
        let spec = kv.experiment_spec().unwrap();
        let jobs = spec.jobs();
        let ns: Vec<usize> = jobs.iter().map(|(c, _)| c.n).collect();
        assert_eq!(ns, vec![10, 10, 20, 20, 30, 30]);
        let mut seeds: Vec<u64> = jobs.iter().map(|(c, _)| c.seed).collect();
        seeds.dedup();
        assert_eq!(seeds.len(), 6);
    }

    #[test]
    fn invalid_spec_is_rejected_up_front() {
        let kv = KvConfig::parse("problem = majority\nn_values = 10\nrepetitions = 0").unwrap();
        assert!(kv.experiment_spec().is_err());
        let kv = KvConfig::parse("problem = majority\nn_values = 10,0").unwrap();
        assert!(kv.experiment_spec().is_err());
    }
}
