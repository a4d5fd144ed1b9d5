//! The (1+1) GP, its bounded local-search form, and the Concatenation
//! Crossover GP, all with exact evaluation accounting.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dyadic::Dyadic;
use crate::error::{GpError, Result};
use crate::fitness::{self, accept, accept_ordering, compare_change, evaluate, Problem, Score};
use crate::individual::Individual;
use crate::variation::{self, Applied, Mutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    OnePlusOne,
    ConcatCrossover,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::OnePlusOne => "one-plus-one",
            Algorithm::ConcatCrossover => "concat-crossover",
        }
    }
}

impl FromStr for Algorithm {
    type Err = GpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-plus-one" | "1+1" => Ok(Algorithm::OnePlusOne),
            "concat-crossover" => Ok(Algorithm::ConcatCrossover),
            _ => Err(GpError::InvalidConfig(format!("unknown algorithm {s:?}"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopCondition {
    /// Every variable expressed.
    AllExpressed,
    /// Every variable expressed by a tree of minimal size.
    AllExpressedMinimal,
    /// Run until the budget is spent.
    BudgetOnly,
}

impl StopCondition {
    pub fn name(&self) -> &'static str {
        match self {
            StopCondition::AllExpressed => "all-expressed",
            StopCondition::AllExpressedMinimal => "all-expressed-minimal",
            StopCondition::BudgetOnly => "budget-only",
        }
    }
}

impl FromStr for StopCondition {
    type Err = GpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-expressed" => Ok(StopCondition::AllExpressed),
            "all-expressed-minimal" => Ok(StopCondition::AllExpressedMinimal),
            "budget-only" => Ok(StopCondition::BudgetOnly),
            _ => Err(GpError::InvalidConfig(format!("unknown stop condition {s:?}"))),
        }
    }
}

/// Which population members must satisfy the stop condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopScope {
    AnyMember,
    AllMembers,
}

impl StopScope {
    pub fn name(&self) -> &'static str {
        match self {
            StopScope::AnyMember => "any-member",
            StopScope::AllMembers => "all-members",
        }
    }
}

impl FromStr for StopScope {
    type Err = GpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any-member" => Ok(StopScope::AnyMember),
            "all-members" => Ok(StopScope::AllMembers),
            _ => Err(GpError::InvalidConfig(format!("unknown stop scope {s:?}"))),
        }
    }
}

/// `4 * ceil(ln n)`, at least 2.
pub fn default_lambda(n: usize) -> usize {
    (4 * (n as f64).ln().ceil() as usize).max(2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    pub n: usize,
    pub s_init: usize,
    pub bloat_control: bool,
    pub algorithm: Algorithm,
    /// Population size; only used by the crossover GP.
    pub lambda: usize,
    pub allow_substitution: bool,
    pub eval_budget: u64,
    pub stop: StopCondition,
    /// `None` picks all-members for super-majority and any-member otherwise.
    pub stop_scope: Option<StopScope>,
    pub seed: u64,
    /// Record a trace point every this many evaluations.
    pub trace_stride: Option<u64>,
    /// Evaluate the slots of a crossover generation on the rayon pool.
    pub parallel_slots: bool,
}

impl RunConfig {
    pub fn new(problem: Problem, n: usize) -> Self {
        Self {
            problem,
            n,
            s_init: 10 * n.max(1),
            bloat_control: true,
            algorithm: Algorithm::OnePlusOne,
            lambda: default_lambda(n),
            allow_substitution: true,
            eval_budget: 1_000_000,
            stop: StopCondition::AllExpressed,
            stop_scope: None,
            seed: 0,
            trace_stride: None,
            parallel_slots: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(GpError::InvalidConfig(m.to_string()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.s_init == 0 {
            return bad("s_init must be at least 1");
        }
        if self.eval_budget == 0 {
            return bad("eval_budget must be at least 1");
        }
        if let Problem::PlusCMajority { c: 0 } = self.problem {
            return bad("c must be at least 1");
        }
        if self.algorithm == Algorithm::ConcatCrossover && self.lambda < 2 {
            return bad("lambda must be at least 2 for the crossover GP");
        }
        if self.trace_stride == Some(0) {
            return bad("trace stride must be positive");
        }
        Ok(())
    }

    pub fn effective_stop_scope(&self) -> StopScope {
        self.stop_scope.unwrap_or(if self.problem.is_super() {
            StopScope::AllMembers
        } else {
            StopScope::AnyMember
        })
    }

    fn stop_met(&self, ind: &Individual, expressed: usize) -> bool {
        match self.stop {
            StopCondition::AllExpressed => expressed == self.n,
            StopCondition::AllExpressedMinimal => {
                expressed == self.n && ind.size() == self.problem.minimal_optimum_size(self.n)
            }
            StopCondition::BudgetOnly => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePoint {
    pub evaluations: u64,
    pub value: Dyadic,
    pub size: usize,
    pub expressed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub evaluations_used: u64,
    /// The stop condition held when the run ended. Under `budget-only` this
    /// reports whether every variable was expressed at the end.
    pub success: bool,
    pub final_value: Dyadic,
    pub final_size: usize,
    pub unexpressed_count: usize,
    pub trace: Vec<TracePoint>,
}

/// A seed derived from a key and a path of indices (splitmix64 finalizer).
pub fn derive_seed(key: u64, path: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    path.iter().fold(mix(key), |h, &p| mix(h ^ mix(p)))
}

/// Result of one mutate-evaluate-select step.
#[derive(Clone, Copy, Debug)]
pub struct StepOutcome {
    pub mutation: Mutation,
    pub applied: Applied,
    pub accepted: bool,
}

/// The (1+1) GP state: the incumbent and its expressed-variable count,
/// updated incrementally from the variables a mutation touches.
#[derive(Clone, Debug)]
pub struct Search {
    problem: Problem,
    bloat_control: bool,
    allow_substitution: bool,
    current: Individual,
    expressed: usize,
}

impl Search {
    pub fn new(problem: Problem, bloat_control: bool, allow_substitution: bool, start: Individual) -> Self {
        let expressed = fitness::expressed_count(problem, &start);
        Self {
            problem,
            bloat_control,
            allow_substitution,
            current: start,
            expressed,
        }
    }

    pub fn current(&self) -> &Individual {
        &self.current
    }

    pub fn expressed(&self) -> usize {
        self.expressed
    }

    pub fn into_individual(self) -> Individual {
        self.current
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> StepOutcome {
        let old_size = self.current.size();
        let mutation = Mutation::draw(old_size, self.current.n(), self.allow_substitution, rng);
        let applied = variation::apply(&mut self.current, mutation);
        let changes = applied.count_changes(&self.current);
        let order = compare_change(self.problem, changes.as_slice());
        let accepted = accept_ordering(self.bloat_control, order, self.current.size(), old_size);
        if accepted {
            for &(old, new) in changes.as_slice() {
                let was = fitness::expressed(self.problem, old.plus, old.minus);
                let now = fitness::expressed(self.problem, new.plus, new.minus);
                match (was, now) {
                    (false, true) => self.expressed += 1,
                    (true, false) => self.expressed -= 1,
                    _ => {}
                }
            }
        } else {
            variation::revert(&mut self.current, &applied);
        }
        StepOutcome {
            mutation,
            applied,
            accepted,
        }
    }
}

/// `ceil(90 s ln s)`; zero for a single leaf.
pub fn local_search_budget(size: usize) -> u64 {
    if size <= 1 {
        return 0;
    }
    let s = size as f64;
    (90.0 * s * s.ln()).ceil() as u64
}

/// Bloat-controlled (1+1) GP for exactly [`local_search_budget`] steps of the
/// entry size. Returns the result and the evaluations spent.
pub fn local_search<R: Rng + ?Sized>(
    ind: Individual,
    problem: Problem,
    rng: &mut R,
    allow_substitution: bool,
) -> (Individual, u64) {
    let steps = local_search_budget(ind.size());
    (local_search_steps(ind, problem, rng, allow_substitution, steps), steps)
}

fn local_search_steps<R: Rng + ?Sized>(
    ind: Individual,
    problem: Problem,
    rng: &mut R,
    allow_substitution: bool,
    steps: u64,
) -> Individual {
    let mut search = Search::new(problem, true, allow_substitution, ind);
    for _ in 0..steps {
        search.step(rng);
    }
    search.into_individual()
}

fn trace_point(problem: Problem, ind: &Individual, evaluations: u64) -> TracePoint {
    TracePoint {
        evaluations,
        value: evaluate(problem, ind).value,
        size: ind.size(),
        expressed: fitness::expressed_count(problem, ind),
    }
}

fn finish(
    cfg: &RunConfig,
    best: &Individual,
    evaluations_used: u64,
    stopped: bool,
    trace: Vec<TracePoint>,
) -> RunRecord {
    let expressed = fitness::expressed_count(cfg.problem, best);
    let success = match cfg.stop {
        StopCondition::BudgetOnly => expressed == cfg.n,
        _ => stopped,
    };
    RunRecord {
        evaluations_used,
        success,
        final_value: evaluate(cfg.problem, best).value,
        final_size: best.size(),
        unexpressed_count: cfg.n - expressed,
        trace,
    }
}

pub fn one_plus_one_gp<R: Rng + ?Sized>(cfg: &RunConfig, rng: &mut R) -> Result<RunRecord> {
    cfg.validate()?;
    let start = Individual::random(cfg.n, cfg.s_init, rng)?;
    let mut search = Search::new(cfg.problem, cfg.bloat_control, cfg.allow_substitution, start);
    let mut evals = 1u64;
    let mut trace = Vec::new();
    let stride = cfg.trace_stride;
    if stride.is_some() {
        trace.push(trace_point(cfg.problem, search.current(), evals));
    }
    let mut stopped = cfg.stop_met(search.current(), search.expressed());
    while !stopped && evals < cfg.eval_budget {
        search.step(rng);
        evals += 1;
        if let Some(k) = stride {
            if evals.is_multiple_of(k) {
                trace.push(trace_point(cfg.problem, search.current(), evals));
            }
        }
        stopped = cfg.stop_met(search.current(), search.expressed());
    }
    Ok(finish(cfg, search.current(), evals, stopped, trace))
}

/// One slot of a crossover generation, computed from the snapshot alone.
#[derive(Clone, Debug)]
pub struct SlotResult {
    pub slot: usize,
    pub mate: usize,
    /// The joined tree before local search.
    pub joined: Individual,
    pub candidate: Individual,
    pub steps: u64,
}

fn slot_rng(key: u64, generation: u64, slot: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(key, &[generation, slot as u64]))
}

/// Mate choice, join and local search for slot `slot` of generation
/// `generation`, spending at most `max_steps` evaluations.
pub fn crossover_slot(
    cfg: &RunConfig,
    snapshot: &[Individual],
    key: u64,
    generation: u64,
    slot: usize,
    max_steps: u64,
) -> SlotResult {
    let mut rng = slot_rng(key, generation, slot);
    let mut mate = rng.gen_range(0..snapshot.len() - 1);
    if mate >= slot {
        mate += 1;
    }
    let joined = snapshot[slot]
        .join(&snapshot[mate])
        .expect("population shares one dimension");
    let steps = local_search_budget(joined.size()).min(max_steps);
    let candidate = local_search_steps(joined.clone(), cfg.problem, &mut rng, cfg.allow_substitution, steps);
    SlotResult {
        slot,
        mate,
        joined,
        candidate,
        steps,
    }
}

fn best_member(problem: Problem, pop: &[Individual]) -> &Individual {
    let scores: Vec<Score> = pop.iter().map(|t| evaluate(problem, t)).collect();
    let mut best = 0;
    for i in 1..pop.len() {
        if accept(true, &scores[i], &scores[best]) && scores[i] != scores[best] {
            best = i;
        }
    }
    &pop[best]
}

pub fn concatenation_crossover_gp<R: Rng + ?Sized>(cfg: &RunConfig, rng: &mut R) -> Result<RunRecord> {
    cfg.validate()?;
    if cfg.algorithm != Algorithm::ConcatCrossover {
        return Err(GpError::InvalidConfig("algorithm must be concat-crossover".into()));
    }
    let key: u64 = rng.gen();
    let scope = cfg.effective_stop_scope();
    let lambda = cfg.lambda;
    let mut evals = 0u64;
    let trace = Vec::new();
    let mut pop: Vec<Individual> = Vec::with_capacity(lambda);
    let mut expressed: Vec<usize> = Vec::with_capacity(lambda);

    let stop_all = |pop: &[Individual], expressed: &[usize]| -> bool {
        pop.len() == lambda && pop.iter().zip(expressed).all(|(t, &e)| cfg.stop_met(t, e))
    };

    // Generation 0: random trees, each scored once and then locally searched.
    for i in 0..lambda {
        let mut r = slot_rng(key, 0, i);
        let start = Individual::random(cfg.n, cfg.s_init, &mut r)?;
        evals += 1;
        let steps = local_search_budget(start.size()).min(cfg.eval_budget - evals);
        let t = local_search_steps(start, cfg.problem, &mut r, cfg.allow_substitution, steps);
        evals += steps;
        let e = fitness::expressed_count(cfg.problem, &t);
        let hit = cfg.stop_met(&t, e);
        pop.push(t);
        expressed.push(e);
        let stopped = match scope {
            StopScope::AnyMember => hit,
            StopScope::AllMembers => stop_all(&pop, &expressed),
        };
        if stopped || evals >= cfg.eval_budget {
            let best = best_member(cfg.problem, &pop).clone();
            return Ok(finish(cfg, &best, evals, stopped, trace));
        }
    }
    evolve_population(cfg, key, pop, evals, trace, |_| {})
}

/// What one slot of a generation saw and decided.
#[derive(Clone, Copy, Debug)]
pub struct SlotEvent<'a> {
    pub generation: u64,
    /// The population as it was when the generation started.
    pub snapshot: &'a [Individual],
    pub result: &'a SlotResult,
    pub accepted: bool,
}

/// Generational loop of the crossover GP from a given population, with
/// `evaluations` already spent. `observe` sees every slot.
pub fn evolve_population(
    cfg: &RunConfig,
    key: u64,
    mut pop: Vec<Individual>,
    mut evals: u64,
    mut trace: Vec<TracePoint>,
    mut observe: impl FnMut(SlotEvent<'_>),
) -> Result<RunRecord> {
    let lambda = cfg.lambda;
    if pop.len() != lambda || lambda < 2 {
        return Err(GpError::InvalidConfig(format!(
            "population of {} for lambda {lambda}",
            pop.len()
        )));
    }
    if pop.iter().any(|t| t.n() != cfg.n) {
        return Err(GpError::InvalidConfig("population dimension differs from n".into()));
    }
    let scope = cfg.effective_stop_scope();
    let mut expressed: Vec<usize> = pop.iter().map(|t| fitness::expressed_count(cfg.problem, t)).collect();
    let stop_all =
        |pop: &[Individual], expressed: &[usize]| pop.iter().zip(expressed).all(|(t, &e)| cfg.stop_met(t, e));
    if cfg.trace_stride.is_some() {
        trace.push(trace_point(cfg.problem, best_member(cfg.problem, &pop), evals));
    }

    let mut generation = 0u64;
    loop {
        generation += 1;
        let snapshot = pop.clone();
        let precomputed: Option<Vec<SlotResult>> = cfg.parallel_slots.then(|| {
            (0..lambda)
                .into_par_iter()
                .map(|i| crossover_slot(cfg, &snapshot, key, generation, i, u64::MAX))
                .collect()
        });
        for i in 0..lambda {
            let left = cfg.eval_budget.saturating_sub(evals);
            let result = match &precomputed {
                Some(all) if all[i].steps <= left => all[i].clone(),
                _ => crossover_slot(cfg, &snapshot, key, generation, i, left),
            };
            evals += result.steps;
            let cand = evaluate(cfg.problem, &result.candidate);
            let inc = evaluate(cfg.problem, &snapshot[i]);
            let accepted = accept(cfg.bloat_control, &cand, &inc);
            observe(SlotEvent {
                generation,
                snapshot: &snapshot,
                result: &result,
                accepted,
            });
            if accepted {
                expressed[i] = fitness::expressed_count(cfg.problem, &result.candidate);
                pop[i] = result.candidate;
            }
            let stopped = match scope {
                StopScope::AnyMember => cfg.stop_met(&pop[i], expressed[i]),
                StopScope::AllMembers => stop_all(&pop, &expressed),
            };
            if stopped || evals >= cfg.eval_budget {
                let best = best_member(cfg.problem, &pop).clone();
                return Ok(finish(cfg, &best, evals, stopped, trace));
            }
        }
        if cfg.trace_stride.is_some() {
            trace.push(trace_point(cfg.problem, best_member(cfg.problem, &pop), evals));
        }
    }
}

/// Runs `cfg` from its own seed.
pub fn run(cfg: &RunConfig) -> Result<RunRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.algorithm {
        Algorithm::OnePlusOne => one_plus_one_gp(cfg, &mut rng),
        Algorithm::ConcatCrossover => concatenation_crossover_gp(cfg, &mut rng),
    }
}
