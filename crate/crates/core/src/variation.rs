//! HVL-Prime mutation.
//!
//! A step is first drawn as a [`Mutation`], then applied in place. The
//! returned [`Applied`] record can undo it, which lets the search loops try an
//! offspring without copying the parent.

use rand::Rng;

use crate::individual::{Individual, Literal, LiteralCounts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    Substitute,
    Insert,
    Delete,
    Noop,
}

impl OpKind {
    pub fn name(&self) -> &'static str {
        match self {
            OpKind::Substitute => "substitute",
            OpKind::Insert => "insert",
            OpKind::Delete => "delete",
            OpKind::Noop => "noop",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Replace the leaf at `pos` with `literal` (which may equal the old one).
    Substitute { pos: usize, literal: Literal },
    /// Put `literal` next to the leaf at `site`, after it when `after` is set.
    Insert { site: usize, literal: Literal, after: bool },
    /// Remove the leaf at `pos`; its sibling takes the parent's place.
    Delete { pos: usize },
    /// A delete drawn on a single-leaf individual.
    Noop,
}

impl Mutation {
    /// Draws one HVL-Prime step for an individual of `size` leaves over `n`
    /// variables. Without substitution, insert and delete are equally likely.
    pub fn draw<R: Rng + ?Sized>(size: usize, n: usize, allow_substitution: bool, rng: &mut R) -> Self {
        let kind = if allow_substitution {
            match rng.gen_range(0..3u32) {
                0 => OpKind::Substitute,
                1 => OpKind::Insert,
                _ => OpKind::Delete,
            }
        } else if rng.gen_bool(0.5) {
            OpKind::Insert
        } else {
            OpKind::Delete
        };
        match kind {
            OpKind::Substitute => {
                let pos = rng.gen_range(0..size);
                let literal = Literal::random(n, rng);
                Mutation::Substitute { pos, literal }
            }
            OpKind::Insert => {
                let site = rng.gen_range(0..size);
                let literal = Literal::random(n, rng);
                let after = rng.gen_bool(0.5);
                Mutation::Insert { site, literal, after }
            }
            OpKind::Delete if size == 1 => Mutation::Noop,
            _ => Mutation::Delete {
                pos: rng.gen_range(0..size),
            },
        }
    }

    pub fn kind(&self) -> OpKind {
        match self {
            Mutation::Substitute { .. } => OpKind::Substitute,
            Mutation::Insert { .. } => OpKind::Insert,
            Mutation::Delete { .. } => OpKind::Delete,
            Mutation::Noop => OpKind::Noop,
        }
    }
}

/// What an applied mutation touched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Applied {
    pub kind: OpKind,
    /// Index of the affected leaf in the offspring (insert) or parent
    /// (substitute, delete).
    pub position: usize,
    pub removed: Option<Literal>,
    pub inserted: Option<Literal>,
}

impl Applied {
    pub fn size_delta(&self) -> isize {
        match self.kind {
            OpKind::Insert => 1,
            OpKind::Delete => -1,
            OpKind::Substitute | OpKind::Noop => 0,
        }
    }

    /// `(old, new)` counts of each variable whose counts changed, read from
    /// the individual after application.
    pub fn count_changes(&self, after: &Individual) -> CountChanges {
        let mut out = CountChanges::default();
        let vars = [self.removed.map(Literal::var), self.inserted.map(Literal::var)];
        for (i, var) in vars.iter().enumerate() {
            let Some(var) = *var else { continue };
            if i == 1 && vars[0] == Some(var) {
                continue;
            }
            let new = after.counts(var);
            let mut old = new;
            if let Some(ins) = self.inserted.filter(|l| l.var() == var) {
                old.drop_one(ins);
            }
            if let Some(rem) = self.removed.filter(|l| l.var() == var) {
                old.bump(rem);
            }
            if old != new {
                out.buf[out.len] = (old, new);
                out.len += 1;
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CountChanges {
    buf: [(LiteralCounts, LiteralCounts); 2],
    len: usize,
}

impl CountChanges {
    pub fn as_slice(&self) -> &[(LiteralCounts, LiteralCounts)] {
        &self.buf[..self.len]
    }
}

pub fn apply(ind: &mut Individual, mutation: Mutation) -> Applied {
    match mutation {
        Mutation::Substitute { pos, literal } => {
            let old = ind.replace_leaf(pos, literal);
            Applied {
                kind: OpKind::Substitute,
                position: pos,
                removed: Some(old),
                inserted: Some(literal),
            }
        }
        Mutation::Insert { site, literal, after } => {
            let pos = site + after as usize;
            ind.insert_leaf(pos, literal);
            Applied {
                kind: OpKind::Insert,
                position: pos,
                removed: None,
                inserted: Some(literal),
            }
        }
        Mutation::Delete { pos } => {
            let old = ind.remove_leaf(pos);
            Applied {
                kind: OpKind::Delete,
                position: pos,
                removed: Some(old),
                inserted: None,
            }
        }
        Mutation::Noop => Applied {
            kind: OpKind::Noop,
            position: 0,
            removed: None,
            inserted: None,
        },
    }
}

pub fn revert(ind: &mut Individual, applied: &Applied) {
    match applied.kind {
        OpKind::Substitute => {
            ind.replace_leaf(applied.position, applied.removed.expect("substitute removes"));
        }
        OpKind::Insert => {
            ind.remove_leaf(applied.position);
        }
        OpKind::Delete => {
            ind.insert_leaf(applied.position, applied.removed.expect("delete removes"));
        }
        OpKind::Noop => {}
    }
}

#[derive(Clone, Debug)]
pub struct MutationOutcome {
    pub offspring: Individual,
    pub applied: Applied,
}

impl MutationOutcome {
    pub fn op_kind(&self) -> OpKind {
        self.applied.kind
    }
}

/// One application of HVL-Prime to a copy of `parent`.
pub fn hvl_prime<R: Rng + ?Sized>(parent: &Individual, rng: &mut R, allow_substitution: bool) -> MutationOutcome {
    let mutation = Mutation::draw(parent.size(), parent.n(), allow_substitution, rng);
    let mut offspring = parent.clone();
    let applied = apply(&mut offspring, mutation);
    MutationOutcome { offspring, applied }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn delete_on_single_leaf_is_noop() {
        let parent = Individual::from_leaves(3, [Literal::negative(2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut saw_noop = false;
        for _ in 0..200 {
            let out = hvl_prime(&parent, &mut rng, true);
            assert!(out.offspring.size() >= 1);
            if out.op_kind() == OpKind::Noop {
                saw_noop = true;
                assert_eq!(out.offspring, parent);
            }
        }
        assert!(saw_noop);
    }

    #[test]
    fn size_delta_matches_kind_and_parent_is_untouched() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let parent = Individual::random(4, 20, &mut rng).unwrap();
        let snapshot = parent.clone();
        for _ in 0..500 {
            let out = hvl_prime(&parent, &mut rng, true);
            let diff = out.offspring.size() as isize - parent.size() as isize;
            assert_eq!(diff, out.applied.size_delta());
            if out.op_kind() == OpKind::Insert {
                let changed: Vec<_> = (1..=4)
                    .filter(|&v| out.offspring.counts(v) != parent.counts(v))
                    .collect();
                assert_eq!(changed.len(), 1);
                let v = changed[0];
                let (a, b) = (parent.counts(v), out.offspring.counts(v));
                assert_eq!(b.total(), a.total() + 1);
            }
        }
        assert_eq!(parent, snapshot);
    }

    #[test]
    fn without_substitution_never_substitutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let parent = Individual::random(4, 10, &mut rng).unwrap();
        for _ in 0..2000 {
            assert_ne!(hvl_prime(&parent, &mut rng, false).op_kind(), OpKind::Substitute);
        }
    }

    #[test]
    fn apply_then_revert_restores_individual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut ind = Individual::random(6, 700, &mut rng).unwrap();
        for _ in 0..2000 {
            let before = ind.clone();
            let m = Mutation::draw(ind.size(), ind.n(), true, &mut rng);
            let applied = apply(&mut ind, m);
            revert(&mut ind, &applied);
            assert_eq!(ind, before);
            // keep the individual drifting
            apply(&mut ind, m);
        }
    }

    #[test]
    fn count_changes_report_old_and_new() {
        let mut ind = Individual::from_leaves(3, [Literal::positive(1), Literal::negative(2)]).unwrap();
        let applied = apply(
            &mut ind,
            Mutation::Substitute {
                pos: 0,
                literal: Literal::positive(2),
            },
        );
        let ch = applied.count_changes(&ind);
        assert_eq!(
            ch.as_slice(),
            &[
                (LiteralCounts::new(1, 0), LiteralCounts::new(0, 0)),
                (LiteralCounts::new(0, 1), LiteralCounts::new(1, 1)),
            ]
        );
        // Same-literal substitution changes nothing.
        let applied = apply(
            &mut ind,
            Mutation::Substitute {
                pos: 1,
                literal: Literal::negative(2),
            },
        );
        assert!(applied.count_changes(&ind).as_slice().is_empty());
    }

    #[test]
    fn same_seed_same_outcome() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let parent = Individual::random(5, 30, &mut rng).unwrap();
        let a = hvl_prime(&parent, &mut ChaCha8Rng::seed_from_u64(9), true);
        let b = hvl_prime(&parent, &mut ChaCha8Rng::seed_from_u64(9), true);
        assert_eq!(a.offspring, b.offspring);
        assert_eq!(a.applied, b.applied);
    }
}
