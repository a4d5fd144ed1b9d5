//! Slow reference implementations used to check the fast paths.
//!
//! Nothing here reads the cached count table of an [`Individual`]; every
//! function rescans the raw leaf sequence.

use std::collections::BTreeMap;

use crate::dyadic::Dyadic;
use crate::fitness::{LeafClass, Problem, Score};
use crate::individual::{Individual, Literal};

/// Number of variables with `(s^+, s^-) = (k, l)`, including `(0, 0)`.
pub type Histogram = BTreeMap<(u32, u32), usize>;

fn tally(n: usize, leaves: &[Literal]) -> Vec<(u32, u32)> {
    let mut t = vec![(0u32, 0u32); n];
    for lit in leaves {
        let slot = &mut t[lit.var() - 1];
        if lit.is_positive() {
            slot.0 += 1;
        } else {
            slot.1 += 1;
        }
    }
    t
}

fn expressed_raw(problem: Problem, plus: u32, minus: u32) -> bool {
    let s = plus + minus;
    match problem {
        Problem::Majority => plus > 0 && plus >= minus,
        Problem::PlusCMajority { c } => plus as i64 - minus as i64 >= c as i64,
        Problem::TwoThirdsMajority | Problem::TwoThirdsSuperMajority => s >= 1 && plus * 3 >= s * 2,
    }
}

fn score_leaves(problem: Problem, n: usize, leaves: &[Literal]) -> Dyadic {
    let mut total = Dyadic::zero();
    for (plus, minus) in tally(n, leaves) {
        if !expressed_raw(problem, plus, minus) {
            continue;
        }
        let term = if problem.is_super() {
            &Dyadic::from_integer(2) - &Dyadic::pow2_neg((plus - minus) as u64)
        } else {
            Dyadic::from_integer(1)
        };
        total += &term;
    }
    total
}

pub fn brute_force_score(problem: Problem, ind: &Individual) -> Score {
    let leaves = ind.leaf_vec();
    Score {
        value: score_leaves(problem, ind.n(), &leaves),
        size: leaves.len(),
    }
}

pub fn brute_force_expressed(problem: Problem, ind: &Individual) -> usize {
    tally(ind.n(), &ind.leaf_vec())
        .into_iter()
        .filter(|&(p, m)| expressed_raw(problem, p, m))
        .count()
}

/// Deletes each leaf in turn and re-scores the remainder. Leaves carrying the
/// same literal leave the same multiset behind, so each literal is scored once.
pub fn brute_force_classify(problem: Problem, ind: &Individual) -> Vec<LeafClass> {
    let mut leaves = ind.leaf_vec();
    let base = score_leaves(problem, ind.n(), &leaves);
    let mut seen: BTreeMap<Literal, LeafClass> = BTreeMap::new();
    (0..leaves.len())
        .map(|i| {
            let lit = leaves[i];
            if let Some(&class) = seen.get(&lit) {
                return class;
            }
            let removed = leaves.remove(i);
            let after = score_leaves(problem, ind.n(), &leaves);
            leaves.insert(i, removed);
            let class = match after.cmp(&base) {
                std::cmp::Ordering::Less => LeafClass::PositiveCritical,
                std::cmp::Ordering::Greater => LeafClass::NegativeCritical,
                std::cmp::Ordering::Equal => LeafClass::Redundant,
            };
            seen.insert(lit, class);
            class
        })
        .collect()
}

/// Expected fraction of variables with `k` positive and `l` negative literals
/// in a random tree of `nu * n` leaves: `e^-nu (nu/2)^(k+l) / (k! l!)`.
pub fn poisson_reference(nu: f64, k: u32, l: u32) -> f64 {
    let fact = |m: u32| (1..=m).map(f64::from).product::<f64>();
    (-nu).exp() * (nu / 2.0).powi((k + l) as i32) / (fact(k) * fact(l))
}

pub fn literal_histogram(ind: &Individual) -> Histogram {
    let mut h = Histogram::new();
    for pair in tally(ind.n(), &ind.leaf_vec()) {
        *h.entry(pair).or_default() += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::{classify_leaves, evaluate};
    use crate::individual::LiteralCounts;

    #[test]
    fn hand_evaluated_tree() {
        let ind = Individual::from_leaves(
            3,
            [
                Literal::positive(1),
                Literal::positive(1),
                Literal::positive(2),
                Literal::negative(3),
            ],
        )
        .unwrap();
        assert_eq!(
            brute_force_score(Problem::TwoThirdsMajority, &ind).value,
            Dyadic::from_integer(2)
        );
        assert_eq!(
            brute_force_score(Problem::PlusCMajority { c: 2 }, &ind).value,
            Dyadic::from_integer(1)
        );
    }

    #[test]
    fn lone_negative_leaf_scores_zero() {
        let ind = Individual::from_leaves(5, [Literal::negative(5)]).unwrap();
        for p in [
            Problem::Majority,
            Problem::PlusCMajority { c: 2 },
            Problem::TwoThirdsMajority,
            Problem::TwoThirdsSuperMajority,
        ] {
            assert_eq!(brute_force_score(p, &ind).value, Dyadic::zero());
            assert_eq!(brute_force_score(p, &ind), evaluate(p, &ind));
        }
    }

    #[test]
    fn brute_force_classification_examples() {
        use LeafClass::*;
        let a = Individual::from_counts(1, &[(1, LiteralCounts::new(2, 1))]).unwrap();
        assert_eq!(
            brute_force_classify(Problem::TwoThirdsMajority, &a),
            vec![PositiveCritical, PositiveCritical, Redundant]
        );
        let b = Individual::from_counts(1, &[(1, LiteralCounts::new(3, 0))]).unwrap();
        assert_eq!(
            brute_force_classify(Problem::TwoThirdsSuperMajority, &b),
            vec![PositiveCritical; 3]
        );
        assert_eq!(
            brute_force_classify(Problem::TwoThirdsSuperMajority, &b),
            classify_leaves(Problem::TwoThirdsSuperMajority, &b)
        );
    }

    #[test]
    fn poisson_reference_values() {
        assert!((poisson_reference(1.0, 0, 0) - 0.367_879_441).abs() < 1e-9);
        assert!((poisson_reference(1.0, 1, 0) - 0.183_939_721).abs() < 1e-9);
        assert!((poisson_reference(2.0, 1, 1) - 0.135_335_283).abs() < 1e-9);
    }

    #[test]
    fn histogram_example() {
        let ind =
            Individual::from_leaves(3, [Literal::positive(1), Literal::negative(1), Literal::positive(2)]).unwrap();
        let h = literal_histogram(&ind);
        let expect: Histogram = [((1, 1), 1), ((1, 0), 1), ((0, 0), 1)].into_iter().collect();
        assert_eq!(h, expect);
        assert_eq!(h.values().sum::<usize>(), 3);
    }
}
