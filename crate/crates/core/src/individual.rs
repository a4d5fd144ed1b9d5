//! GP individuals over the paired-literal terminal set.
//!
//! The only inner node is the binary join `J`, which carries no semantics, so
//! an individual is stored as its ordered leaf sequence together with the
//! per-variable literal counts that every fitness function factors through.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{GpError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

/// A terminal `x_i` or its complement `~x_i`, packed as `var << 1 | negated`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(u32);

impl Literal {
    /// `var` is 1-based.
    pub fn new(var: usize, sign: Sign) -> Self {
        debug_assert!(var >= 1);
        let neg = matches!(sign, Sign::Negative) as u32;
        Literal(((var as u32) << 1) | neg)
    }

    pub fn positive(var: usize) -> Self {
        Self::new(var, Sign::Positive)
    }

    pub fn negative(var: usize) -> Self {
        Self::new(var, Sign::Negative)
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn sign(self) -> Sign {
        if self.0 & 1 == 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Uniform draw from the `2n` literals.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let idx = rng.gen_range(0..2 * n);
        Literal((((idx >> 1) + 1) as u32) << 1 | (idx & 1) as u32)
    }

    /// Dense index in `0..2n`.
    pub fn index(self) -> usize {
        (self.0 - 2) as usize
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var())
        } else {
            write!(f, "~x{}", self.var())
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Literal {
    type Err = GpError;

    fn from_str(s: &str) -> Result<Self> {
        let (sign, rest) = match s.strip_prefix('~') {
            Some(rest) => (Sign::Negative, rest),
            None => (Sign::Positive, s),
        };
        let digits = rest.strip_prefix('x').ok_or_else(|| GpError::Parse {
            offset: 0,
            message: format!("expected literal, found {s:?}"),
        })?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(GpError::Parse {
                offset: 0,
                message: format!("bad variable index in {s:?}"),
            });
        }
        let var: usize = digits.parse().map_err(|_| GpError::Parse {
            offset: 0,
            message: format!("variable index overflow in {s:?}"),
        })?;
        if var == 0 || var > (u32::MAX >> 2) as usize {
            return Err(GpError::Parse {
                offset: 0,
                message: format!("variable index out of range in {s:?}"),
            });
        }
        Ok(Literal::new(var, sign))
    }
}

/// `(s_i^+, s_i^-)` for one variable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiteralCounts {
    pub plus: u32,
    pub minus: u32,
}

impl LiteralCounts {
    pub fn new(plus: u32, minus: u32) -> Self {
        Self { plus, minus }
    }

    pub fn total(self) -> u32 {
        self.plus + self.minus
    }

    pub(crate) fn bump(&mut self, lit: Literal) {
        if lit.is_positive() {
            self.plus += 1;
        } else {
            self.minus += 1;
        }
    }

    pub(crate) fn drop_one(&mut self, lit: Literal) {
        if lit.is_positive() {
            self.plus -= 1;
        } else {
            self.minus -= 1;
        }
    }
}

const BLOCK: usize = 512;

/// Ordered leaf storage with `O(sqrt s)` positional insert and delete.
#[derive(Clone, Default)]
struct LeafSeq {
    blocks: Vec<Vec<Literal>>,
    len: usize,
}

impl LeafSeq {
    fn from_vec(v: Vec<Literal>) -> Self {
        let len = v.len();
        let blocks = if v.len() <= BLOCK {
            vec![v]
        } else {
            v.chunks(BLOCK).map(|c| c.to_vec()).collect()
        };
        Self { blocks, len }
    }

    fn len(&self) -> usize {
        self.len
    }

    fn locate(&self, mut i: usize) -> (usize, usize) {
        for (b, block) in self.blocks.iter().enumerate() {
            if i < block.len() {
                return (b, i);
            }
            i -= block.len();
        }
        panic!("leaf index out of bounds");
    }

    fn get(&self, i: usize) -> Literal {
        let (b, off) = self.locate(i);
        self.blocks[b][off]
    }

    fn set(&mut self, i: usize, lit: Literal) -> Literal {
        let (b, off) = self.locate(i);
        std::mem::replace(&mut self.blocks[b][off], lit)
    }

    fn insert(&mut self, i: usize, lit: Literal) {
        assert!(i <= self.len, "insert position out of bounds");
        let (b, off) = if i == self.len {
            let b = self.blocks.len() - 1;
            (b, self.blocks[b].len())
        } else {
            self.locate(i)
        };
        let block = &mut self.blocks[b];
        block.insert(off, lit);
        if block.len() > 2 * BLOCK {
            let tail = block.split_off(BLOCK);
            self.blocks.insert(b + 1, tail);
        }
        self.len += 1;
    }

    fn remove(&mut self, i: usize) -> Literal {
        let (b, off) = self.locate(i);
        let lit = self.blocks[b].remove(off);
        if self.blocks[b].is_empty() && self.blocks.len() > 1 {
            self.blocks.remove(b);
        }
        self.len -= 1;
        lit
    }

    fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.blocks.iter().flat_map(|b| b.iter().copied())
    }

    fn to_vec(&self) -> Vec<Literal> {
        self.iter().collect()
    }
}

impl PartialEq for LeafSeq {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.iter().eq(other.iter())
    }
}

impl Eq for LeafSeq {}

/// A GP tree represented by its leaf sequence and cached literal counts.
#[derive(Clone, PartialEq, Eq)]
pub struct Individual {
    n: usize,
    leaves: LeafSeq,
    counts: Vec<LiteralCounts>,
}

impl Individual {
    pub fn from_leaves<I>(n: usize, leaves: I) -> Result<Self>
    where
        I: IntoIterator<Item = Literal>,
    {
        if n == 0 {
            return Err(GpError::ZeroDimension);
        }
        let leaves: Vec<Literal> = leaves.into_iter().collect();
        if leaves.is_empty() {
            return Err(GpError::EmptyIndividual);
        }
        let mut counts = vec![LiteralCounts::default(); n];
        for &lit in &leaves {
            if lit.var() > n {
                return Err(GpError::VariableOutOfRange { var: lit.var(), n });
            }
            counts[lit.var() - 1].bump(lit);
        }
        Ok(Self {
            n,
            leaves: LeafSeq::from_vec(leaves),
            counts,
        })
    }

    /// Builds an individual holding exactly the given `(var, counts)` profile,
    /// positive literals of each variable first.
    pub fn from_counts(n: usize, profile: &[(usize, LiteralCounts)]) -> Result<Self> {
        let mut leaves = Vec::new();
        for &(var, c) in profile {
            leaves.extend(std::iter::repeat_n(Literal::positive(var), c.plus as usize));
            leaves.extend(std::iter::repeat_n(Literal::negative(var), c.minus as usize));
        }
        Self::from_leaves(n, leaves)
    }

    /// One uniformly random leaf followed by `s_init - 1` random insertions.
    pub fn random<R: Rng + ?Sized>(n: usize, s_init: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(GpError::ZeroDimension);
        }
        if s_init == 0 {
            return Err(GpError::ZeroSize);
        }
        let first = Literal::random(n, rng);
        let mut counts = vec![LiteralCounts::default(); n];
        counts[first.var() - 1].bump(first);
        let mut ind = Self {
            n,
            leaves: LeafSeq::from_vec(vec![first]),
            counts,
        };
        for _ in 1..s_init {
            let site = rng.gen_range(0..ind.size());
            let lit = Literal::random(n, rng);
            let after = rng.gen_bool(0.5);
            ind.insert_leaf(site + after as usize, lit);
        }
        Ok(ind)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.leaves.len()
    }

    pub fn inner_nodes(&self) -> usize {
        self.size() - 1
    }

    pub fn leaf(&self, i: usize) -> Literal {
        self.leaves.get(i)
    }

    pub fn leaves(&self) -> impl Iterator<Item = Literal> + '_ {
        self.leaves.iter()
    }

    pub fn leaf_vec(&self) -> Vec<Literal> {
        self.leaves.to_vec()
    }

    /// Counts for the 1-based variable `var`.
    pub fn counts(&self, var: usize) -> LiteralCounts {
        self.counts[var - 1]
    }

    /// Counts indexed by `var - 1`.
    pub fn count_table(&self) -> &[LiteralCounts] {
        &self.counts
    }

    /// Concatenates the leaf sequences under a fresh join node.
    pub fn join(&self, other: &Individual) -> Result<Individual> {
        if self.n != other.n {
            return Err(GpError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut leaves = self.leaves.to_vec();
        leaves.extend(other.leaves.iter());
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| LiteralCounts::new(a.plus + b.plus, a.minus + b.minus))
            .collect();
        Ok(Individual {
            n: self.n,
            leaves: LeafSeq::from_vec(leaves),
            counts,
        })
    }

    pub(crate) fn insert_leaf(&mut self, pos: usize, lit: Literal) {
        self.leaves.insert(pos, lit);
        self.counts[lit.var() - 1].bump(lit);
    }

    pub(crate) fn remove_leaf(&mut self, pos: usize) -> Literal {
        let lit = self.leaves.remove(pos);
        self.counts[lit.var() - 1].drop_one(lit);
        lit
    }

    pub(crate) fn replace_leaf(&mut self, pos: usize, lit: Literal) -> Literal {
        let old = self.leaves.set(pos, lit);
        self.counts[old.var() - 1].drop_one(old);
        self.counts[lit.var() - 1].bump(lit);
        old
    }

    /// Left-deep comb rendering, e.g. `(J (J x1 x1) ~x2)`.
    pub fn to_tree_string(&self) -> String {
        let mut out = String::with_capacity(self.size() * 8);
        for _ in 1..self.size() {
            out.push_str("(J ");
        }
        for (i, lit) in self.leaves().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&lit.to_string());
            if i > 0 {
                out.push(')');
            }
        }
        out
    }

    /// Parses any binary `J`-tree (not only left-deep); leaves are read in
    /// left-to-right order.
    pub fn parse_tree(n: usize, text: &str) -> Result<Individual> {
        let leaves = parse_leaves(text)?;
        Individual::from_leaves(n, leaves)
    }
}

impl fmt::Debug for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Individual")
            .field("n", &self.n)
            .field("leaves", &self.leaf_vec())
            .finish()
    }
}

fn parse_err(offset: usize, message: impl Into<String>) -> GpError {
    GpError::Parse {
        offset,
        message: message.into(),
    }
}

fn parse_leaves(text: &str) -> Result<Vec<Literal>> {
    // Iterative so that deep combs cannot overflow the call stack.
    let bytes = text.as_bytes();
    let mut leaves = Vec::new();
    let mut open: Vec<u8> = Vec::new();
    let mut roots = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if roots > 0 {
            return Err(parse_err(i, "trailing input after tree"));
        }
        match b {
            b'(' => {
                if let Some(&c) = open.last() {
                    if c >= 2 {
                        return Err(parse_err(i, "join node has more than two children"));
                    }
                }
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                if bytes.get(i) != Some(&b'J') {
                    return Err(parse_err(i, "expected J after '('"));
                }
                i += 1;
                open.push(0);
            }
            b')' => {
                match open.pop() {
                    Some(2) => {}
                    Some(_) => return Err(parse_err(i, "join node needs two children")),
                    None => return Err(parse_err(i, "unbalanced ')'")),
                }
                i += 1;
                match open.last_mut() {
                    Some(c) => *c += 1,
                    None => roots += 1,
                }
            }
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'(' && bytes[i] != b')' {
                    i += 1;
                }
                let lit: Literal = text[start..i].parse().map_err(|e| match e {
                    GpError::Parse { message, .. } => parse_err(start, message),
                    other => other,
                })?;
                leaves.push(lit);
                match open.last_mut() {
                    Some(c) if *c >= 2 => return Err(parse_err(start, "join node has more than two children")),
                    Some(c) => *c += 1,
                    None => roots += 1,
                }
            }
        }
    }
    if !open.is_empty() {
        return Err(parse_err(bytes.len(), "unclosed '('"));
    }
    if roots == 0 {
        return Err(parse_err(0, "empty tree"));
    }
    Ok(leaves)
}
