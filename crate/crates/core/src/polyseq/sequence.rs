use std::fmt;

use thiserror::Error;

use super::ratfun::RationalFunction;
use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Structural problems with a piecewise definition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("sequence has no pieces")]
    Empty,
    #[error("coverage gap: no rule for n = {missing}")]
    Gap { missing: i64 },
    #[error("overlapping ranges at n = {at}")]
    Overlap { at: i64 },
    #[error("coverage gap: missing tail piece, nothing covers the indices after the last finite range")]
    MissingTail,
    #[error("empty range {lo}..{hi}")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("first piece starts at {found}, expected {expected}")]
    StartMismatch { expected: i64, found: i64 },
}

/// A rule giving the sequence value as a closed form in `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Closed(RationalFunction),
    /// Separate closed forms on even and odd indices.
    Alternating {
        even: RationalFunction,
        odd: RationalFunction,
    },
}

impl Rule {
    /// Builds an alternating rule, collapsing it when both branches agree.
    pub fn alternating(even: RationalFunction, odd: RationalFunction) -> Self {
        if even == odd {
            Rule::Closed(even)
        } else {
            Rule::Alternating { even, odd }
        }
    }

    pub fn constant(c: Rational) -> Self {
        Rule::Closed(RationalFunction::constant(c))
    }

    pub fn as_closed(&self) -> Option<&RationalFunction> {
        match self {
            Rule::Closed(f) => Some(f),
            Rule::Alternating { .. } => None,
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.as_closed()?.as_constant()
    }

    fn branch(&self, n: i64) -> &RationalFunction {
        match self {
            Rule::Closed(f) => f,
            Rule::Alternating { even, odd } => {
                if n.rem_euclid(2) == 0 {
                    even
                } else {
                    odd
                }
            }
        }
    }

    pub fn eval(&self, n: i64) -> Result<Rational> {
        self.branch(n).eval(n)
    }

    fn map2(&self, other: &Self, f: impl Fn(&RationalFunction, &RationalFunction) -> RationalFunction) -> Self {
        match (self, other) {
            (Rule::Closed(x), Rule::Closed(y)) => Rule::Closed(f(x, y)),
            _ => Rule::alternating(f(self.branch(0), other.branch(0)), f(self.branch(1), other.branch(1))),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.map2(other, RationalFunction::mul)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        match self {
            Rule::Closed(f) => Rule::Closed(f.scale(c)),
            Rule::Alternating { even, odd } => Rule::alternating(even.scale(c), odd.scale(c)),
        }
    }

    /// `g(n) = f(n + k)`; an odd shift swaps the parity branches.
    pub fn shift(&self, k: i64) -> Self {
        match self {
            Rule::Closed(f) => Rule::Closed(f.shift(k)),
            Rule::Alternating { even, odd } => {
                if k.rem_euclid(2) == 0 {
                    Rule::alternating(even.shift(k), odd.shift(k))
                } else {
                    Rule::alternating(odd.shift(k), even.shift(k))
                }
            }
        }
    }

    fn filter_parity(&self, hits: Vec<i64>, parity: i64) -> Vec<i64> {
        match self {
            Rule::Closed(_) => hits,
            Rule::Alternating { .. } => hits.into_iter().filter(|n| n.rem_euclid(2) == parity).collect(),
        }
    }

    fn scan(&self, lo: i64, hi: i64, f: impl Fn(&RationalFunction, i64, i64) -> Vec<i64>) -> Vec<i64> {
        let mut out = self.filter_parity(f(self.branch(0), lo, hi), 0);
        if let Rule::Alternating { odd, .. } = self {
            out.extend(self.filter_parity(f(odd, lo, hi), 1));
            out.sort_unstable();
        }
        out
    }

    pub fn poles_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        self.scan(lo, hi, RationalFunction::poles_in)
    }

    pub fn zeros_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        self.scan(lo, hi, RationalFunction::zeros_in)
    }
}

impl From<RationalFunction> for Rule {
    fn from(f: RationalFunction) -> Self {
        Rule::Closed(f)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Closed(r) => write!(f, "{r}"),
            Rule::Alternating { even, odd } => write!(f, "{even} | {odd}"),
        }
    }
}

/// One piece of a sequence definition: `rule` applies for `lo ≤ n ≤ hi`
/// (`hi = None` means unbounded).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: i64,
    pub hi: Option<i64>,
    pub rule: Rule,
}

impl Piece {
    pub fn contains(&self, n: i64) -> bool {
        n >= self.lo && self.hi.is_none_or(|hi| n <= hi)
    }
}

/// An index-dependent coefficient rule covering `[start, ∞)` with disjoint,
/// ascending pieces and exactly one unbounded tail piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseSequence {
    start: i64,
    pieces: Vec<Piece>,
}

impl PiecewiseSequence {
    pub fn new(start: i64, mut pieces: Vec<Piece>) -> Result<Self, SequenceError> {
        if pieces.is_empty() {
            return Err(SequenceError::Empty);
        }
        for p in &pieces {
            if let Some(hi) = p.hi {
                if hi < p.lo {
                    return Err(SequenceError::EmptyRange { lo: p.lo, hi });
                }
            }
        }
        pieces.sort_by_key(|p| p.lo);
        if pieces[0].lo > start {
            return Err(SequenceError::Gap { missing: start });
        }
        if pieces[0].lo < start {
            return Err(SequenceError::StartMismatch {
                expected: start,
                found: pieces[0].lo,
            });
        }
        for pair in pieces.windows(2) {
            let Some(hi) = pair[0].hi else {
                return Err(SequenceError::Overlap { at: pair[1].lo });
            };
            if pair[1].lo <= hi {
                return Err(SequenceError::Overlap { at: pair[1].lo });
            }
            if pair[1].lo > hi + 1 {
                return Err(SequenceError::Gap { missing: hi + 1 });
            }
        }
        if pieces.last().unwrap().hi.is_some() {
            return Err(SequenceError::MissingTail);
        }
        Ok(Self { start, pieces })
    }

    /// A single closed-form rule on `[start, ∞)`.
    pub fn closed(start: i64, f: RationalFunction) -> Self {
        Self::from_rule(start, Rule::Closed(f))
    }

    pub fn from_rule(start: i64, rule: Rule) -> Self {
        Self {
            start,
            pieces: vec![Piece {
                lo: start,
                hi: None,
                rule,
            }],
        }
    }

    pub fn constant(start: i64, c: Rational) -> Self {
        Self::closed(start, RationalFunction::constant(c))
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn tail(&self) -> &Piece {
        self.pieces.last().unwrap()
    }

    pub fn piece_for(&self, n: i64) -> Option<&Piece> {
        if n < self.start {
            return None;
        }
        self.pieces.iter().find(|p| p.contains(n))
    }

    /// Exact value at `n`.
    pub fn eval(&self, n: i64) -> Result<Rational> {
        let piece = self.piece_for(n).ok_or(Error::OutOfDomain {
            n,
            start: self.start,
        })?;
        piece.rule.eval(n)
    }

    /// `g(n) = f(n + k)`, defined from `start − k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            start: self.start - k,
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    lo: p.lo - k,
                    hi: p.hi.map(|h| h - k),
                    rule: p.rule.shift(k),
                })
                .collect(),
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(&Rule, &Rule) -> Rule) -> Self {
        let start = self.start.max(other.start);
        let mut cuts: Vec<i64> = self
            .pieces
            .iter()
            .chain(other.pieces.iter())
            .map(|p| p.lo)
            .filter(|&lo| lo > start)
            .collect();
        cuts.push(start);
        cuts.sort_unstable();
        cuts.dedup();
        let pieces = cuts
            .iter()
            .enumerate()
            .map(|(i, &lo)| {
                let hi = cuts.get(i + 1).map(|next| next - 1);
                let x = &self.piece_for(lo).unwrap().rule;
                let y = &other.piece_for(lo).unwrap().rule;
                Piece { lo, hi, rule: op(x, y) }
            })
            .collect();
        Self { start, pieces }
    }

    /// Pointwise product on the common domain; breakpoints are the union of
    /// both inputs' breakpoints.
    pub fn product(&self, other: &Self) -> Self {
        self.combine(other, Rule::mul)
    }

    /// Replaces indices `start..=upto` by explicit constant pieces.
    pub fn materialize_head(&self, upto: i64) -> Result<Self> {
        let mut pieces = Vec::new();
        for n in self.start..=upto {
            pieces.push(Piece {
                lo: n,
                hi: Some(n),
                rule: Rule::constant(self.eval(n)?),
            });
        }
        for p in &self.pieces {
            if p.hi.is_some_and(|hi| hi <= upto) {
                continue;
            }
            pieces.push(Piece {
                lo: p.lo.max(upto + 1),
                hi: p.hi,
                rule: p.rule.clone(),
            });
        }
        Ok(Self {
            start: self.start,
            pieces,
        })
    }

    /// Indices in `[start, limit]` where some piece has a pole.
    /// Merges each finite piece into the following piece when that piece's
    /// rule reproduces every value of the finite range, without moving the
    /// start of any piece listed in `keep`. Adjacent pieces that agree
    /// pointwise over a finite range are then joined.
    pub fn absorb_head_pieces(&self, keep: &[i64]) -> Self {
        let mut merged: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for p in self.pieces.iter().rev() {
            if let Some(next) = merged.last_mut() {
                if !keep.contains(&next.lo) && reproduces(&next.rule, p) {
                    next.lo = p.lo;
                    continue;
                }
            }
            merged.push(p.clone());
        }
        merged.reverse();
        let mut joined: Vec<Piece> = Vec::with_capacity(merged.len());
        for p in merged {
            if let Some(prev) = joined.last_mut() {
                if p.hi.is_some() && reproduces(&prev.rule, &p) {
                    prev.hi = p.hi;
                    continue;
                }
            }
            joined.push(p);
        }
        Self {
            start: self.start,
            pieces: joined,
        }
    }

    pub fn poles_up_to(&self, limit: i64) -> Vec<i64> {
        self.scan_up_to(limit, Rule::poles_in)
    }

    /// Indices in `[start, limit]` where the sequence vanishes.
    pub fn zeros_up_to(&self, limit: i64) -> Vec<i64> {
        self.scan_up_to(limit, Rule::zeros_in)
    }

    fn scan_up_to(&self, limit: i64, f: impl Fn(&Rule, i64, i64) -> Vec<i64>) -> Vec<i64> {
        self.pieces
            .iter()
            .filter(|p| p.lo <= limit)
            .flat_map(|p| f(&p.rule, p.lo, p.hi.unwrap_or(limit).min(limit)))
            .collect()
    }
}

/// Evaluates `seq` at `n`, exactly.
/// Longest finite range `absorb_head_pieces` checks pointwise.
const ABSORB_LIMIT: i64 = 64;

/// Whether `rule` matches `piece` on its whole range, which must be finite.
fn reproduces(rule: &Rule, piece: &Piece) -> bool {
    let Some(hi) = piece.hi else { return false };
    hi - piece.lo < ABSORB_LIMIT
        && (piece.lo..=hi).all(|n| match (piece.rule.eval(n), rule.eval(n)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        })
}

pub fn seq_eval(seq: &PiecewiseSequence, n: i64) -> Result<Rational> {
    seq.eval(n)
}
