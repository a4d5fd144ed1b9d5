use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gp_majority::fitness::{accept, classify_leaves, compare_change, evaluate};
use gp_majority::oracle::{brute_force_classify, brute_force_score};
use gp_majority::variation::{apply, revert, Mutation};
use gp_majority::{Dyadic, Individual, Literal, LiteralCounts, Problem};

fn problem() -> impl Strategy<Value = Problem> {
    prop_oneof![
        Just(Problem::Majority),
        (1u32..=4).prop_map(|c| Problem::PlusCMajority { c }),
        Just(Problem::TwoThirdsMajority),
        Just(Problem::TwoThirdsSuperMajority),
    ]
}

fn over(n: usize, max_size: usize) -> impl Strategy<Value = Individual> {
    prop::collection::vec((1..=n, any::<bool>()), 1..=max_size).prop_map(move |raw| {
        let leaves = raw.into_iter().map(|(v, pos)| {
            if pos {
                Literal::positive(v)
            } else {
                Literal::negative(v)
            }
        });
        Individual::from_leaves(n, leaves).unwrap()
    })
}

fn individual(max_n: usize, max_size: usize) -> impl Strategy<Value = Individual> {
    (1..=max_n).prop_flat_map(move |n| over(n, max_size))
}

fn pair(max_n: usize, max_size: usize) -> impl Strategy<Value = (Individual, Individual)> {
    (1..=max_n).prop_flat_map(move |n| (over(n, max_size), over(n, max_size)))
}

fn counts() -> impl Strategy<Value = LiteralCounts> {
    (0u32..8, 0u32..8).prop_map(|(p, m)| LiteralCounts::new(p, m))
}

proptest! {
    #[test]
    fn evaluate_matches_oracle(p in problem(), ind in individual(8, 60)) {
        prop_assert_eq!(evaluate(p, &ind), brute_force_score(p, &ind));
        prop_assert_eq!(classify_leaves(p, &ind), brute_force_classify(p, &ind));
    }

    #[test]
    fn tree_text_round_trips(ind in individual(12, 80)) {
        let text = ind.to_tree_string();
        prop_assert_eq!(Individual::parse_tree(ind.n(), &text).unwrap(), ind);
    }

    #[test]
    fn apply_revert_is_identity(ind in individual(6, 40), seed in any::<u64>(), sub in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut work = ind.clone();
        let m = Mutation::draw(work.size(), work.n(), sub, &mut rng);
        let applied = apply(&mut work, m);
        prop_assert_eq!(work.size() as isize - ind.size() as isize, applied.size_delta());
        revert(&mut work, &applied);
        prop_assert_eq!(work, ind);
    }

    #[test]
    fn incremental_comparison_matches_full(p in problem(), ind in individual(5, 30), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let before = evaluate(p, &ind);
        let mut work = ind.clone();
        let m = Mutation::draw(work.size(), work.n(), true, &mut rng);
        let applied = apply(&mut work, m);
        let after = evaluate(p, &work);
        prop_assert_eq!(compare_change(p, applied.count_changes(&work).as_slice()), after.value.cmp(&before.value));
    }

    #[test]
    fn join_adds_counts((a, b) in pair(5, 30)) {
        let j = a.join(&b).unwrap();
        prop_assert_eq!(j.size(), a.size() + b.size());
        for v in 1..=a.n() {
            let (x, y, z) = (a.counts(v), b.counts(v), j.counts(v));
            prop_assert_eq!((z.plus, z.minus), (x.plus + y.plus, x.minus + y.minus));
        }
    }

    #[test]
    fn accept_is_reflexive_and_lexicographic(p in problem(), (a, b) in pair(4, 20)) {
        let (sa, sb) = (evaluate(p, &a), evaluate(p, &b));
        prop_assert!(accept(true, &sa, &sa));
        prop_assert!(accept(false, &sa, &sa));
        let lex = sa.value > sb.value || (sa.value == sb.value && sa.size <= sb.size);
        prop_assert_eq!(accept(true, &sa, &sb), lex);
        prop_assert_eq!(accept(false, &sa, &sb), sa.value >= sb.value);
    }

    #[test]
    fn dyadic_order_matches_floats(a in -1000i64..1000, ea in 0u64..20, b in -1000i64..1000, eb in 0u64..20) {
        let x = Dyadic::new(BigInt::from(a), ea);
        let y = Dyadic::new(BigInt::from(b), eb);
        let fx = a as f64 / 2f64.powi(ea as i32);
        let fy = b as f64 / 2f64.powi(eb as i32);
        prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
        prop_assert_eq!((&x + &y).to_f64(), fx + fy);
    }

    #[test]
    fn super_majority_term_order_is_margin_order(c1 in counts(), c2 in counts()) {
        let p = Problem::TwoThirdsSuperMajority;
        let one = |c: LiteralCounts| Individual::from_counts(1, &[(1, c)]).ok().map(|i| evaluate(p, &i).value);
        if let (Some(v1), Some(v2)) = (one(c1), one(c2)) {
            let order = compare_change(p, &[(c1, c2)]);
            prop_assert_eq!(order, v2.cmp(&v1));
        }
    }
}
