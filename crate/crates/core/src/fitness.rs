//! Majority-style fitness functions, lexicographic acceptance and leaf
//! classification.
//!
//! Every variant factors through the per-variable counts `(s_i^+, s_i^-)`, so
//! evaluation never looks at the leaf order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign as BigSign};

use crate::dyadic::Dyadic;
use crate::error::{GpError, Result};
use crate::individual::{Individual, LiteralCounts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    /// At least one `x_i` and no fewer `x_i` than `~x_i`.
    Majority,
    /// `s_i^+ >= s_i^- + c`.
    PlusCMajority { c: u32 },
    /// `s_i >= 1` and `s_i^+ >= 2/3 s_i`.
    TwoThirdsMajority,
    /// Sum of `2 - 2^(s_i^- - s_i^+)` over the 2/3-expressed variables.
    TwoThirdsSuperMajority,
}

impl Problem {
    pub fn plus_c(c: u32) -> Result<Self> {
        if c == 0 {
            return Err(GpError::InvalidConfig("c must be at least 1".into()));
        }
        Ok(Problem::PlusCMajority { c })
    }

    /// Resolves a config name; `c` is only consulted for `plus-c-majority`.
    pub fn from_name(name: &str, c: Option<u32>) -> Result<Self> {
        match name {
            "majority" => Ok(Problem::Majority),
            "plus-c-majority" => {
                Problem::plus_c(c.ok_or_else(|| GpError::InvalidConfig("plus-c-majority needs a value for c".into()))?)
            }
            "two-thirds-majority" => Ok(Problem::TwoThirdsMajority),
            "two-thirds-super-majority" => Ok(Problem::TwoThirdsSuperMajority),
            other => Err(GpError::InvalidConfig(format!("unknown problem {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Problem::Majority => "majority",
            Problem::PlusCMajority { .. } => "plus-c-majority",
            Problem::TwoThirdsMajority => "two-thirds-majority",
            Problem::TwoThirdsSuperMajority => "two-thirds-super-majority",
        }
    }

    pub fn c(&self) -> Option<u32> {
        match self {
            Problem::PlusCMajority { c } => Some(*c),
            _ => None,
        }
    }

    pub fn is_super(&self) -> bool {
        matches!(self, Problem::TwoThirdsSuperMajority)
    }

    /// Leaf count of the smallest individual expressing all `n` variables.
    pub fn minimal_optimum_size(&self, n: usize) -> usize {
        match self {
            Problem::PlusCMajority { c } => *c as usize * n,
            _ => n,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::PlusCMajority { c } => write!(f, "{}(c={c})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for Problem {
    type Err = GpError;

    /// Accepts the bare names plus `plus-c-majority:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((name, c)) => {
                let c = c
                    .parse()
                    .map_err(|_| GpError::InvalidConfig(format!("bad c in {s:?}")))?;
                Problem::from_name(name, Some(c))
            }
            None => Problem::from_name(s, None),
        }
    }
}

pub fn expressed(problem: Problem, s_plus: u32, s_minus: u32) -> bool {
    let (p, m) = (s_plus as u64, s_minus as u64);
    match problem {
        Problem::Majority => p >= 1 && p >= m,
        Problem::PlusCMajority { c } => p >= m + c as u64,
        Problem::TwoThirdsMajority | Problem::TwoThirdsSuperMajority => p + m >= 1 && 3 * p >= 2 * (p + m),
    }
}

/// One variable's share of the fitness, ordered exactly like its value.
///
/// For the counting variants `margin` is always zero; for the super-majority
/// variant it is `s^+ - s^-` of an expressed variable, and the contribution is
/// `2 - 2^-margin`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Contribution {
    expressed: bool,
    margin: u64,
}

impl Contribution {
    pub fn of(problem: Problem, counts: LiteralCounts) -> Self {
        let expressed = expressed(problem, counts.plus, counts.minus);
        let margin = if expressed && problem.is_super() {
            (counts.plus - counts.minus) as u64
        } else {
            0
        };
        Contribution { expressed, margin }
    }

    pub fn is_expressed(&self) -> bool {
        self.expressed
    }

    pub fn value(&self, problem: Problem) -> Dyadic {
        match (self.expressed, problem.is_super()) {
            (false, _) => Dyadic::zero(),
            (true, false) => Dyadic::from_integer(1),
            (true, true) => Dyadic::two_minus_pow2_neg(self.margin),
        }
    }
}

/// Fitness value paired with the size used as the parsimony tie-breaker.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Score {
    pub value: Dyadic,
    pub size: usize,
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (size {})", self.value, self.size)
    }
}

pub fn evaluate(problem: Problem, ind: &Individual) -> Score {
    let size = ind.size();
    if !problem.is_super() {
        let v = ind
            .count_table()
            .iter()
            .filter(|c| expressed(problem, c.plus, c.minus))
            .count();
        return Score {
            value: Dyadic::from_integer(v as i64),
            size,
        };
    }
    let margins: Vec<u64> = ind
        .count_table()
        .iter()
        .filter(|c| expressed(problem, c.plus, c.minus))
        .map(|c| (c.plus - c.minus) as u64)
        .collect();
    Score {
        value: super_majority_value(&margins),
        size,
    }
}

/// `sum_j (2 - 2^-d_j)` with a single carry pass instead of repeated
/// big-integer additions.
fn super_majority_value(margins: &[u64]) -> Dyadic {
    let Some(&max_d) = margins.iter().max() else {
        return Dyadic::zero();
    };
    let mut per_exp = vec![0u64; max_d as usize + 1];
    for &d in margins {
        per_exp[d as usize] += 1;
    }
    // Bits of 2^max_d * sum_j 2^-d_j, least significant first.
    let mut words = vec![0u64; (max_d as usize) / 64 + 2];
    let mut carry = 0u64;
    for d in (1..=max_d as usize).rev() {
        let total = per_exp[d] + carry;
        if total & 1 == 1 {
            let bit = max_d as usize - d;
            words[bit / 64] |= 1 << (bit % 64);
        }
        carry = total >> 1;
    }
    let tail = BigUint::from(carry) << max_d;
    let fractional = BigUint::from_slice(
        &words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect::<Vec<_>>(),
    ) + tail;
    let whole = BigUint::from(2 * margins.len() as u64) << max_d;
    let num = BigInt::from_biguint(BigSign::Plus, whole) - BigInt::from_biguint(BigSign::Plus, fractional);
    Dyadic::new(num, max_d)
}

/// Exact ordering of the total fitness after a local change relative to
/// before, given `(old, new)` counts of every variable that changed.
pub fn compare_change(problem: Problem, changes: &[(LiteralCounts, LiteralCounts)]) -> Ordering {
    let mut any_up = false;
    let mut any_down = false;
    for &(old, new) in changes {
        match Contribution::of(problem, new).cmp(&Contribution::of(problem, old)) {
            Ordering::Greater => any_up = true,
            Ordering::Less => any_down = true,
            Ordering::Equal => {}
        }
    }
    match (any_up, any_down) {
        (false, false) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (true, true) => {
            let delta: Dyadic = changes
                .iter()
                .map(|&(old, new)| {
                    Contribution::of(problem, new).value(problem) - Contribution::of(problem, old).value(problem)
                })
                .sum();
            delta.signum()
        }
    }
}

/// Lexicographic acceptance rule on an already-computed value ordering.
pub fn accept_ordering(
    bloat_control: bool,
    value_order: Ordering,
    candidate_size: usize,
    incumbent_size: usize,
) -> bool {
    match value_order {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => !bloat_control || candidate_size <= incumbent_size,
    }
}

/// `f(candidate) >= f(incumbent)`, with size as a second-order term under
/// bloat control.
pub fn accept(bloat_control: bool, candidate: &Score, incumbent: &Score) -> bool {
    accept_ordering(
        bloat_control,
        candidate.value.cmp(&incumbent.value),
        candidate.size,
        incumbent.size,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeafClass {
    /// Deleting the leaf lowers the fitness.
    PositiveCritical,
    /// Deleting the leaf raises the fitness.
    NegativeCritical,
    /// Deleting the leaf leaves the fitness unchanged.
    Redundant,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub positive_critical: usize,
    pub negative_critical: usize,
    pub redundant: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.positive_critical + self.negative_critical + self.redundant
    }
}

/// Classes for deleting one positive and one negative literal of a variable.
fn deletion_classes(problem: Problem, c: LiteralCounts) -> (Option<LeafClass>, Option<LeafClass>) {
    let now = Contribution::of(problem, c);
    let class_of = |after: LiteralCounts| match Contribution::of(problem, after).cmp(&now) {
        Ordering::Less => LeafClass::PositiveCritical,
        Ordering::Greater => LeafClass::NegativeCritical,
        Ordering::Equal => LeafClass::Redundant,
    };
    let pos = (c.plus > 0).then(|| class_of(LiteralCounts::new(c.plus - 1, c.minus)));
    let neg = (c.minus > 0).then(|| class_of(LiteralCounts::new(c.plus, c.minus - 1)));
    (pos, neg)
}

pub fn classify_leaves(problem: Problem, ind: &Individual) -> Vec<LeafClass> {
    let table: Vec<_> = ind
        .count_table()
        .iter()
        .map(|&c| deletion_classes(problem, c))
        .collect();
    ind.leaves()
        .map(|lit| {
            let (pos, neg) = table[lit.var() - 1];
            let class = if lit.is_positive() { pos } else { neg };
            class.expect("leaf present implies count > 0")
        })
        .collect()
}

/// Class cardinalities straight from the count table.
pub fn class_counts(problem: Problem, ind: &Individual) -> ClassCounts {
    let mut out = ClassCounts::default();
    for &c in ind.count_table() {
        let (pos, neg) = deletion_classes(problem, c);
        for (class, k) in [(pos, c.plus), (neg, c.minus)] {
            match class {
                Some(LeafClass::PositiveCritical) => out.positive_critical += k as usize,
                Some(LeafClass::NegativeCritical) => out.negative_critical += k as usize,
                Some(LeafClass::Redundant) => out.redundant += k as usize,
                None => {}
            }
        }
    }
    out
}

/// No redundant and no negative-critical leaves: no single deletion would be
/// accepted under bloat control.
pub fn deletion_stable(problem: Problem, ind: &Individual) -> bool {
    ind.count_table().iter().all(|&c| {
        let (pos, neg) = deletion_classes(problem, c);
        [pos, neg]
            .into_iter()
            .flatten()
            .all(|class| class == LeafClass::PositiveCritical)
    })
}

pub fn expressed_count(problem: Problem, ind: &Individual) -> usize {
    ind.count_table()
        .iter()
        .filter(|c| expressed(problem, c.plus, c.minus))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::individual::Literal;

    fn ind(n: usize, profile: &[(usize, u32, u32)]) -> Individual {
        let p: Vec<_> = profile.iter().map(|&(v, a, b)| (v, LiteralCounts::new(a, b))).collect();
        Individual::from_counts(n, &p).unwrap()
    }

    const PLUS2: Problem = Problem::PlusCMajority { c: 2 };
    const TWO3: Problem = Problem::TwoThirdsMajority;
    const SUPER: Problem = Problem::TwoThirdsSuperMajority;

    #[test]
    fn names_round_trip() {
        for p in [Problem::Majority, PLUS2, TWO3, SUPER] {
            assert_eq!(Problem::from_name(p.name(), p.c()).unwrap(), p);
        }
        assert_eq!(
            "plus-c-majority:3".parse::<Problem>().unwrap(),
            Problem::PlusCMajority { c: 3 }
        );
        assert!(Problem::from_name("plus-c-majority", None).is_err());
        assert!(Problem::plus_c(0).is_err());
        assert!("order".parse::<Problem>().is_err());
    }

    #[test]
    fn expressed_examples() {
        assert!(expressed(PLUS2, 2, 0));
        assert!(!expressed(PLUS2, 1, 0));
        assert!(expressed(TWO3, 2, 1));
        assert!(!expressed(TWO3, 1, 1));
        for p in [Problem::Majority, PLUS2, TWO3, SUPER] {
            assert!(!expressed(p, 0, 0));
        }
        assert!(expressed(Problem::Majority, 1, 1));
        assert!(!expressed(Problem::Majority, 0, 0));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(
            evaluate(PLUS2, &ind(2, &[(1, 2, 0), (2, 1, 0)])).value,
            Dyadic::from_integer(1)
        );
        assert_eq!(
            evaluate(TWO3, &ind(2, &[(1, 2, 1), (2, 1, 0)])).value,
            Dyadic::from_integer(2)
        );
        let three_halves = Dyadic::two_minus_pow2_neg(1);
        assert_eq!(evaluate(SUPER, &ind(1, &[(1, 1, 0)])).value, three_halves);
        assert_eq!(evaluate(SUPER, &ind(1, &[(1, 2, 1)])).value, three_halves);
        assert_eq!(evaluate(SUPER, &ind(1, &[(1, 2, 1)])).size, 3);
    }

    #[test]
    fn super_majority_is_exact_for_long_runs_of_positives() {
        for k in 1..=62u32 {
            let v = evaluate(SUPER, &ind(1, &[(1, k, 0)])).value;
            let expect = &Dyadic::from_integer(2) - &Dyadic::pow2_neg(k as u64);
            assert_eq!(v, expect, "k = {k}");
        }
    }

    #[test]
    fn super_majority_carry_pass_matches_naive_sum() {
        let margins = [1u64, 1, 1, 3, 3, 7, 64, 64, 65, 200];
        let naive: Dyadic = margins.iter().map(|&d| Dyadic::two_minus_pow2_neg(d)).sum();
        assert_eq!(super_majority_value(&margins), naive);
        assert_eq!(super_majority_value(&[]), Dyadic::zero());
    }

    #[test]
    fn accept_examples() {
        let s = |v: i64, size| Score {
            value: Dyadic::from_integer(v),
            size,
        };
        assert!(accept(true, &s(3, 9), &s(3, 10)));
        assert!(accept(true, &s(3, 10), &s(3, 10)));
        assert!(!accept(true, &s(3, 11), &s(3, 10)));
        assert!(accept(false, &s(3, 500), &s(3, 10)));
        assert!(!accept(true, &s(2, 1), &s(3, 10)));
        assert!(!accept(false, &s(2, 1), &s(3, 10)));
        assert!(accept(true, &s(4, 100), &s(3, 10)));
    }

    #[test]
    fn classify_examples() {
        use LeafClass::*;
        assert_eq!(
            classify_leaves(TWO3, &ind(1, &[(1, 2, 1)])),
            vec![PositiveCritical, PositiveCritical, Redundant]
        );
        assert_eq!(classify_leaves(PLUS2, &ind(1, &[(1, 2, 0)])), vec![PositiveCritical; 2]);
        assert_eq!(
            classify_leaves(TWO3, &ind(1, &[(1, 1, 1)])),
            vec![Redundant, NegativeCritical]
        );
        assert_eq!(classify_leaves(SUPER, &ind(1, &[(1, 3, 0)])), vec![PositiveCritical; 3]);
    }

    #[test]
    fn deletion_stable_examples() {
        assert!(deletion_stable(TWO3, &ind(2, &[(1, 1, 0), (2, 1, 0)])));
        assert!(!deletion_stable(TWO3, &ind(1, &[(1, 2, 0)])));
        assert!(deletion_stable(PLUS2, &ind(2, &[(1, 2, 0)])));
    }

    #[test]
    fn class_counts_match_per_leaf_classes() {
        let x = ind(3, &[(1, 2, 1), (2, 0, 3), (3, 4, 1)]);
        for p in [Problem::Majority, PLUS2, TWO3, SUPER] {
            let per_leaf = classify_leaves(p, &x);
            let cc = class_counts(p, &x);
            assert_eq!(cc.total(), x.size());
            assert_eq!(
                cc.redundant,
                per_leaf.iter().filter(|&&c| c == LeafClass::Redundant).count()
            );
            assert_eq!(
                cc.negative_critical,
                per_leaf.iter().filter(|&&c| c == LeafClass::NegativeCritical).count()
            );
        }
    }

    #[test]
    fn compare_change_mixed_super_majority() {
        // var 1 loses its only x1 (f: 3/2 -> 0), var 2 gains (1,0) -> (2,0) (f: 3/2 -> 7/4).
        let ch = [
            (LiteralCounts::new(1, 0), LiteralCounts::new(0, 0)),
            (LiteralCounts::new(1, 0), LiteralCounts::new(2, 0)),
        ];
        assert_eq!(compare_change(SUPER, &ch), Ordering::Less);
        assert_eq!(compare_change(TWO3, &ch), Ordering::Less);
        // var 1 loses (2,0) -> (1,0) (7/4 -> 3/2), var 2 gains (0,0) -> (1,0) (0 -> 3/2).
        let ch = [
            (LiteralCounts::new(2, 0), LiteralCounts::new(1, 0)),
            (LiteralCounts::new(0, 0), LiteralCounts::new(1, 0)),
        ];
        assert_eq!(compare_change(SUPER, &ch), Ordering::Greater);
        // var 1 loses its x1 (3/2 -> 0), var 2 gains its first (3/2): a wash.
        let ch = [
            (LiteralCounts::new(1, 0), LiteralCounts::new(0, 0)),
            (LiteralCounts::new(0, 0), LiteralCounts::new(1, 0)),
        ];
        assert_eq!(compare_change(SUPER, &ch), Ordering::Equal);
        assert_eq!(compare_change(TWO3, &ch), Ordering::Equal);
        // Substituting ~x1 -> x2 in {1:(1,1), 2:(0,0)} for plus-c: no change either way.
        let sub = [
            (LiteralCounts::new(1, 1), LiteralCounts::new(1, 0)),
            (LiteralCounts::new(0, 0), LiteralCounts::new(1, 0)),
        ];
        assert_eq!(compare_change(PLUS2, &sub), Ordering::Equal);
        assert_eq!(compare_change(TWO3, &sub), Ordering::Greater);
    }

    #[test]
    fn evaluation_ignores_leaf_order() {
        let a = Individual::from_leaves(2, [Literal::positive(1), Literal::negative(2), Literal::positive(2)]).unwrap();
        let b = Individual::from_leaves(2, [Literal::positive(2), Literal::positive(1), Literal::negative(2)]).unwrap();
        for p in [Problem::Majority, PLUS2, TWO3, SUPER] {
            assert_eq!(evaluate(p, &a), evaluate(p, &b));
        }
    }
}
