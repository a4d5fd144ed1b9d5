//! Oracle and invariant checks behind `gpmaj verify`.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithms::{Search, StopCondition};
use crate::fitness::{
    accept, class_counts, classify_leaves, deletion_stable, evaluate, expressed, LeafClass, Problem, Score,
};
use crate::harness::{execute, write_csv, ExperimentSpec, SInitRule};
use crate::individual::{Individual, Literal, LiteralCounts};
use crate::oracle::{
    brute_force_classify, brute_force_expressed, brute_force_score, literal_histogram, poisson_reference,
};
use crate::variation::{self, Mutation};
use crate::RunConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub individuals: usize,
    pub steps: usize,
    pub invariant_samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            individuals: 10_000,
            steps: 10_000,
            invariant_samples: 1_000,
            seed: 0,
        }
    }
}

type Outcome = std::result::Result<String, String>;

fn timed(name: &'static str, f: impl FnOnce() -> Outcome) -> CheckReport {
    let start = Instant::now();
    let out = f();
    let seconds = start.elapsed().as_secs_f64();
    match out {
        Ok(detail) => CheckReport {
            name,
            passed: true,
            detail,
            seconds,
        },
        Err(detail) => CheckReport {
            name,
            passed: false,
            detail,
            seconds,
        },
    }
}

pub fn problems() -> [Problem; 6] {
    [
        Problem::Majority,
        Problem::PlusCMajority { c: 1 },
        Problem::PlusCMajority { c: 2 },
        Problem::PlusCMajority { c: 3 },
        Problem::TwoThirdsMajority,
        Problem::TwoThirdsSuperMajority,
    ]
}

fn random_case(rng: &mut ChaCha8Rng, max_n: usize, max_size: usize) -> Individual {
    let n = rng.gen_range(1..=max_n);
    let size = rng.gen_range(1..=max_size);
    Individual::random(n, size, rng).expect("positive n and size")
}

/// `evaluate` and `classify_leaves` against the rescanning oracles on random
/// individuals with `n <= 50` and at most 500 leaves.
pub fn check_random_oracles(count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = problems();
    for i in 0..count {
        let ind = random_case(&mut rng, 50, 500);
        let problem = all[i % all.len()];
        let fast = evaluate(problem, &ind);
        let slow = brute_force_score(problem, &ind);
        if fast != slow {
            return Err(format!(
                "{problem}: evaluate {fast:?} != oracle {slow:?} on {}",
                ind.to_tree_string()
            ));
        }
        if classify_leaves(problem, &ind) != brute_force_classify(problem, &ind) {
            return Err(format!("{problem}: classification differs on {}", ind.to_tree_string()));
        }
    }
    Ok(format!("{count} individuals"))
}

/// Runs `steps` consecutive (1+1) GP steps from `start` and checks each one
/// against the oracles: fitness, classification, the incremental expressed
/// count and the accept decision.
pub fn check_search_chain(
    problem: Problem,
    bloat: bool,
    allow_sub: bool,
    start: Individual,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Outcome {
    let mut search = Search::new(problem, bloat, allow_sub, start);
    for step in 0..steps {
        let parent = search.current().clone();
        let parent_score = brute_force_score(problem, &parent);
        let outcome = search.step(rng);
        let mut candidate = parent.clone();
        variation::apply(&mut candidate, outcome.mutation);
        let cand_score = brute_force_score(problem, &candidate);
        let want = accept(bloat, &cand_score, &parent_score);
        if want != outcome.accepted {
            return Err(format!(
                "{problem} bloat={bloat} step {step}: accept {} but oracle says {want} for {:?} on {}",
                outcome.accepted,
                outcome.mutation,
                parent.to_tree_string()
            ));
        }
        let expect = if want { &candidate } else { &parent };
        if search.current() != expect {
            return Err(format!("{problem} step {step}: incumbent differs from oracle"));
        }
        let cur = search.current();
        if evaluate(problem, cur) != brute_force_score(problem, cur) {
            return Err(format!(
                "{problem} step {step}: evaluate differs on {}",
                cur.to_tree_string()
            ));
        }
        if classify_leaves(problem, cur) != brute_force_classify(problem, cur) {
            return Err(format!(
                "{problem} step {step}: classification differs on {}",
                cur.to_tree_string()
            ));
        }
        if search.expressed() != brute_force_expressed(problem, cur) {
            return Err(format!("{problem} step {step}: incremental expressed count drifted"));
        }
    }
    Ok(format!("{steps} steps"))
}

/// [`check_search_chain`] over short chains cycling through problems, bloat
/// control and substitution settings.
pub fn check_search_steps(steps: usize, seed: u64) -> Outcome {
    const CHAIN: usize = 1_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = problems();
    let mut done = 0;
    let mut chain_id = 0;
    while done < steps {
        let problem = all[chain_id % all.len()];
        let bloat = chain_id % 2 == 0;
        let allow_sub = chain_id % 3 != 2;
        chain_id += 1;
        let n = rng.gen_range(1..=20);
        let start = Individual::random(n, rng.gen_range(1..=4 * n), &mut rng).expect("valid sizes");
        let len = CHAIN.min(steps - done);
        check_search_chain(problem, bloat, allow_sub, start, len, &mut rng)?;
        done += len;
    }
    Ok(format!("{steps} steps over {chain_id} chains"))
}

/// `s = c+ + c- + r` for every problem.
pub fn check_class_partition(count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let ind = random_case(&mut rng, 30, 300);
        for problem in problems() {
            let cc = class_counts(problem, &ind);
            if cc.total() != ind.size() {
                return Err(format!(
                    "{problem}: {cc:?} does not partition size {} (case {i})",
                    ind.size()
                ));
            }
            let classes = classify_leaves(problem, &ind);
            let tally = |k: LeafClass| classes.iter().filter(|&&c| c == k).count();
            if tally(LeafClass::PositiveCritical) != cc.positive_critical
                || tally(LeafClass::NegativeCritical) != cc.negative_critical
                || tally(LeafClass::Redundant) != cc.redundant
            {
                return Err(format!("{problem}: class_counts disagrees with classify_leaves"));
            }
        }
    }
    Ok(format!("{count} individuals x {} problems", problems().len()))
}

/// Under 2/3-majority, `c- <= r` and `c+ <= 2r + v`.
pub fn check_two_thirds_bounds(count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = Problem::TwoThirdsMajority;
    for _ in 0..count {
        let ind = random_case(&mut rng, 30, 300);
        let cc = class_counts(problem, &ind);
        let v = brute_force_expressed(problem, &ind);
        if cc.negative_critical > cc.redundant || cc.positive_critical > 2 * cc.redundant + v {
            return Err(format!("bounds fail with {cc:?}, v={v} on {}", ind.to_tree_string()));
        }
    }
    Ok(format!("{count} individuals"))
}

/// Every non-empty profile over `n` variables with each count in `0..=max`.
fn profiles(n: usize, max: u32) -> Vec<Individual> {
    let per_var: Vec<LiteralCounts> = (0..=max)
        .flat_map(|p| (0..=max).map(move |m| LiteralCounts::new(p, m)))
        .collect();
    let mut out = Vec::new();
    let total = per_var.len().pow(n as u32);
    for mut code in 0..total {
        let mut table = Vec::with_capacity(n);
        for var in 1..=n {
            table.push((var, per_var[code % per_var.len()]));
            code /= per_var.len();
        }
        if table.iter().any(|(_, c)| c.total() > 0) {
            out.push(Individual::from_counts(n, &table).expect("valid profile"));
        }
    }
    out
}

fn join_problems() -> [Problem; 4] {
    [
        Problem::PlusCMajority { c: 1 },
        Problem::PlusCMajority { c: 2 },
        Problem::PlusCMajority { c: 3 },
        Problem::TwoThirdsMajority,
    ]
}

/// For deletion-stable `a` and `b`, a variable is expressed in `join(a, b)`
/// exactly when it is expressed in `a` or `b`. Exhaustive over counts up to 4
/// and `n <= 3`.
pub fn check_join_expression() -> Outcome {
    let mut pairs = 0usize;
    for problem in join_problems() {
        for n in 1..=3 {
            let stable: Vec<Individual> = profiles(n, 4)
                .into_iter()
                .filter(|ind| deletion_stable(problem, ind))
                .collect();
            for a in &stable {
                for b in &stable {
                    let j = a.join(b).map_err(|e| e.to_string())?;
                    for var in 1..=n {
                        let ex = |ind: &Individual| {
                            let c = ind.counts(var);
                            expressed(problem, c.plus, c.minus)
                        };
                        if ex(&j) != (ex(a) || ex(b)) {
                            return Err(format!(
                                "{problem}: x{var} in join of {} and {}",
                                a.to_tree_string(),
                                b.to_tree_string()
                            ));
                        }
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} stable pairs"))
}

/// Along accepted bloat-controlled chains, `(value, -size)` never decreases.
pub fn check_lexicographic_monotonicity(steps: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for problem in problems() {
        let start = random_case(&mut rng, 20, 200);
        let mut search = Search::new(problem, true, true, start);
        let mut prev: Score = evaluate(problem, search.current());
        for _ in 0..steps {
            if search.step(&mut rng).accepted {
                let now = evaluate(problem, search.current());
                let ok = now.value > prev.value || (now.value == prev.value && now.size <= prev.size);
                if !ok {
                    return Err(format!("{problem}: {prev:?} -> {now:?}"));
                }
                prev = now;
            }
        }
    }
    Ok(format!("{steps} steps x {} problems", problems().len()))
}

/// All single mutations of `ind`, one per distinct count outcome.
fn all_mutations(ind: &Individual) -> Vec<Mutation> {
    let n = ind.n();
    let lits: Vec<Literal> = (1..=n)
        .flat_map(|v| [Literal::positive(v), Literal::negative(v)])
        .collect();
    let mut out = Vec::new();
    for pos in 0..ind.size() {
        out.push(Mutation::Delete { pos });
        for &literal in &lits {
            out.push(Mutation::Substitute { pos, literal });
        }
    }
    for &literal in &lits {
        out.push(Mutation::Insert {
            site: 0,
            literal,
            after: false,
        });
    }
    out
}

/// Under plus-c-majority with `c >= 2` and bloat control, no accepted single
/// step from a deletion-stable individual expresses more variables.
/// Exhaustive over counts up to 3 and `n <= 3`.
pub fn check_plus_c_stuck() -> Outcome {
    let mut checked = 0usize;
    for c in 2..=3 {
        let problem = Problem::PlusCMajority { c };
        for n in 1..=3 {
            for ind in profiles(n, 3).into_iter().filter(|i| deletion_stable(problem, i)) {
                let base = brute_force_score(problem, &ind);
                let before = brute_force_expressed(problem, &ind);
                for m in all_mutations(&ind) {
                    let mut cand = ind.clone();
                    variation::apply(&mut cand, m);
                    if accept(true, &brute_force_score(problem, &cand), &base)
                        && brute_force_expressed(problem, &cand) > before
                    {
                        return Err(format!("{problem}: {m:?} on {} gains a variable", ind.to_tree_string()));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} mutations"))
}

/// Fractions of `(k, l)` profiles in a random individual of `nu n` leaves
/// against the Poisson reference, for `k, l` in `0..=2`. Returns the worst
/// absolute deviation and the table.
/// `((k, l), observed fraction, reference fraction)`.
pub type ProfileRow = ((u32, u32), f64, f64);

pub fn distribution_report(nu: f64, n: usize, seed: u64) -> crate::Result<(f64, Vec<ProfileRow>)> {
    let size = ((nu * n as f64).round() as usize).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ind = Individual::random(n, size, &mut rng)?;
    let hist = literal_histogram(&ind);
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for k in 0..=2 {
        for l in 0..=2 {
            let got = hist.get(&(k, l)).copied().unwrap_or(0) as f64 / n as f64;
            let want = poisson_reference(nu, k, l);
            worst = worst.max((got - want).abs());
            rows.push(((k, l), got, want));
        }
    }
    Ok((worst, rows))
}

pub fn check_distribution(seed: u64) -> Outcome {
    let (worst, rows) = distribution_report(1.0, 100_000, seed).map_err(|e| e.to_string())?;
    let n00 = rows[0].1;
    if worst > 0.01 || (n00 - 0.3679).abs() > 0.01 {
        return Err(format!("max deviation {worst:.4}, N00/n = {n00:.4}"));
    }
    Ok(format!("max deviation {worst:.4}, N00/n = {n00:.4}"))
}

/// Shuffling the leaves never changes the score.
pub fn check_permutation_invariance(count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let ind = random_case(&mut rng, 20, 200);
        let mut leaves = ind.leaf_vec();
        leaves.shuffle(&mut rng);
        let shuffled = Individual::from_leaves(ind.n(), leaves).map_err(|e| e.to_string())?;
        for problem in problems() {
            if evaluate(problem, &ind).value != evaluate(problem, &shuffled).value {
                return Err(format!("{problem}: permutation changed the value"));
            }
        }
    }
    Ok(format!("{count} individuals"))
}

/// Two executions of the same small sweep write identical bytes.
pub fn check_csv_determinism(seed: u64) -> Outcome {
    let mut base = RunConfig::new(Problem::TwoThirdsMajority, 10);
    base.stop = StopCondition::AllExpressed;
    base.eval_budget = 50_000;
    let spec = ExperimentSpec {
        base,
        n_values: vec![10, 20],
        repetitions: 3,
        s_init_rule: SInitRule::TimesN(2.0),
        lambda: None,
        output_path: "unused.csv".into(),
        master_seed: seed,
        trace_sampling: None,
    };
    let render = || -> std::result::Result<Vec<u8>, String> {
        let (rows, _) = execute(&spec).map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let (a, b) = (render()?, render()?);
    if a != b {
        return Err("CSV output differs between identical runs".into());
    }
    Ok(format!("{} bytes", a.len()))
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CheckReport> {
    let s = opts.seed;
    vec![
        timed("oracle-random", || check_random_oracles(opts.individuals, s)),
        timed("oracle-steps", || check_search_steps(opts.steps, s ^ 1)),
        timed("class-partition", || {
            check_class_partition(opts.invariant_samples, s ^ 2)
        }),
        timed("two-thirds-bounds", || {
            check_two_thirds_bounds(opts.invariant_samples, s ^ 3)
        }),
        timed("join-expression", check_join_expression),
        timed("lexicographic-monotonicity", || {
            check_lexicographic_monotonicity(opts.steps, s ^ 4)
        }),
        timed("plus-c-stuck", check_plus_c_stuck),
        timed("permutation-invariance", || {
            check_permutation_invariance(opts.invariant_samples, s ^ 5)
        }),
        timed("poisson-profile", || check_distribution(s ^ 6)),
        timed("csv-determinism", || check_csv_determinism(s ^ 7)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let opts = VerifyOptions {
            individuals: 200,
            steps: 500,
            invariant_samples: 100,
            seed: 11,
        };
        for r in run_all(&opts) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn profile_enumeration_counts() {
        assert_eq!(profiles(1, 4).len(), 24);
        assert_eq!(profiles(2, 1).len(), 15);
    }

    #[test]
    fn stable_two_thirds_join_example() {
        let p = Problem::TwoThirdsMajority;
        let a = Individual::from_counts(2, &[(1, LiteralCounts::new(1, 0))]).unwrap();
        let b = Individual::from_counts(2, &[(2, LiteralCounts::new(1, 0))]).unwrap();
        assert!(deletion_stable(p, &a) && deletion_stable(p, &b));
        let j = a.join(&b).unwrap();
        assert_eq!(brute_force_expressed(p, &j), 2);
    }
}
