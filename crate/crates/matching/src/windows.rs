//! Tuning windows: block words over a seed, the alternate lexicographic
//! order on exponent sequences, window pseudocenters and plateau scanning.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::exact::Rational;
use crate::symbolic::{
    enumerate_clipped, eventually_periodic_value, word_norm, Block, PseudocenterRecord, SymbolicError, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("exponent sequence is not minimal among its rotations (rotation {0})")]
    NotMinimal(usize),
    #[error("exponent sequence must have even positive length, got {0}")]
    OddLength(usize),
    #[error("finite sequences agree up to the end of the shorter one")]
    Incomparable,
    #[error("partial quotients must be positive")]
    ZeroQuotient,
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuningWindow {
    pub seed: PseudocenterRecord,
    pub xi_t: Rational,
    pub xi_r: Rational,
}

impl TuningWindow {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "seed": self.seed.to_json(),
            "xiT": self.xi_t.to_string(),
            "xiR": self.xi_r.to_string(),
        })
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.xi_t <= x && x <= &self.xi_r
    }
}

/// `[.v' (w')^inf, .w^inf]`, primes denoting digit flips.
pub fn tuning_window(seed: &PseudocenterRecord) -> TuningWindow {
    let xi_t = eventually_periodic_value(&seed.v.flip(), &seed.w.flip());
    TuningWindow { seed: seed.clone(), xi_t, xi_r: seed.xi_r.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockWord {
    pub blocks: Vec<Block>,
}

impl BlockWord {
    pub fn new(blocks: Vec<Block>) -> Self {
        BlockWord { blocks }
    }

    pub fn expand(&self, seed: &PseudocenterRecord) -> Word {
        crate::symbolic::expand_blocks(&self.blocks, &seed.w, &seed.v)
    }
}

impl fmt::Display for BlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    Yes,
    /// 1-based index of the first offending block.
    No(usize),
}

pub fn may_follow(a: Block, b: Block) -> bool {
    use Block::*;
    matches!((a, b), (V, W) | (V, Vf) | (Vf, Wf) | (Vf, V) | (W, W) | (W, Vf) | (Wf, Wf) | (Wf, V))
}

pub fn is_admissible(b: &BlockWord) -> Admissibility {
    match b.blocks.first() {
        None => return Admissibility::Yes,
        Some(Block::W | Block::Vf) => {}
        Some(_) => return Admissibility::No(1),
    }
    for (i, pair) in b.blocks.windows(2).enumerate() {
        if !may_follow(pair[0], pair[1]) {
            return Admissibility::No(i + 2);
        }
    }
    Admissibility::Yes
}

/// `prefix` followed by `period` repeated forever; an empty period means a
/// finite sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentSequence {
    pub prefix: Vec<u64>,
    pub period: Vec<u64>,
}

impl ExponentSequence {
    pub fn finite(n: Vec<u64>) -> Self {
        ExponentSequence { prefix: n, period: Vec::new() }
    }

    pub fn periodic(period: Vec<u64>) -> Self {
        ExponentSequence { prefix: Vec::new(), period }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    /// Drops the first `k` entries.
    pub fn shift(&self, k: usize) -> ExponentSequence {
        if k <= self.prefix.len() {
            return ExponentSequence { prefix: self.prefix[k..].to_vec(), period: self.period.clone() };
        }
        if self.period.is_empty() {
            return ExponentSequence::finite(Vec::new());
        }
        let r = (k - self.prefix.len()) % self.period.len();
        let mut period = self.period[r..].to_vec();
        period.extend_from_slice(&self.period[..r]);
        ExponentSequence::periodic(period)
    }
}

impl fmt::Display for ExponentSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({}", join(&self.prefix))?;
        if !self.period.is_empty() {
            if !self.prefix.is_empty() {
                write!(f, ",")?;
            }
            write!(f, "[{}]", join(&self.period))?;
        }
        write!(f, ")")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Alternate lexicographic order, indices from 0: at the first difference the
/// smaller entry wins at even index and the larger at odd index.
pub fn alo_compare(a: &ExponentSequence, b: &ExponentSequence) -> Result<Ordering, WindowError> {
    let horizon = match (a.is_finite(), b.is_finite()) {
        (true, true) => a.prefix.len().max(b.prefix.len()),
        (true, false) => a.prefix.len().max(b.prefix.len() + b.period.len()),
        (false, true) => b.prefix.len().max(a.prefix.len() + a.period.len()),
        (false, false) => {
            let l = a.period.len() / gcd(a.period.len(), b.period.len()) * b.period.len();
            a.prefix.len().max(b.prefix.len()) + l
        }
    };
    for i in 0..horizon {
        match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) if x != y => {
                let ord = x.cmp(&y);
                return Ok(if i % 2 == 0 { ord } else { ord.reverse() });
            }
            (Some(_), Some(_)) => {}
            (None, None) => return Ok(Ordering::Equal),
            _ => return Err(WindowError::Incomparable),
        }
    }
    Ok(Ordering::Equal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMembership {
    Member,
    /// A shift by this many places is strictly smaller.
    NonMember(usize),
}

/// Minimality of `n` among all its shifts in the alternate order.
pub fn window_bifurcation_member(n: &ExponentSequence) -> Result<WindowMembership, WindowError> {
    let shifts = n.prefix.len() + n.period.len();
    for k in 1..shifts.max(1) {
        let t = n.shift(k);
        if t.is_finite() && t.prefix.is_empty() {
            break;
        }
        match alo_compare(&t, n) {
            Ok(Ordering::Less) => return Ok(WindowMembership::NonMember(k)),
            Ok(_) => {}
            Err(WindowError::Incomparable) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(WindowMembership::Member)
}

fn check_even(n: &[u64]) -> Result<(), WindowError> {
    if n.is_empty() || n.len() % 2 == 1 {
        return Err(WindowError::OddLength(n.len()));
    }
    Ok(())
}

/// Cyclic minimality of the block exponents `n_1 ... n_2l` (with `n_1` in an
/// odd position) and primitivity with respect to even rotations.
pub fn check_cyclic_minimal(n: &[u64]) -> Result<(), WindowError> {
    check_even(n)?;
    let embed = |p: Vec<u64>| ExponentSequence { prefix: vec![0], period: p };
    let base = embed(n.to_vec());
    for k in 1..n.len() {
        let mut rot = n[k..].to_vec();
        rot.extend_from_slice(&n[..k]);
        match alo_compare(&embed(rot), &base)? {
            Ordering::Less => return Err(WindowError::NotMinimal(k)),
            Ordering::Equal if k % 2 == 0 => return Err(WindowError::NotMinimal(k)),
            _ => {}
        }
    }
    Ok(())
}

/// Block form `v' (w')^n1 v w^n2 v' (w')^n3 ...`.
pub fn window_blocks(n: &[u64]) -> BlockWord {
    let mut blocks = Vec::new();
    for (j, &e) in n.iter().enumerate() {
        let (head, tail) = if j % 2 == 0 { (Block::Vf, Block::Wf) } else { (Block::V, Block::W) };
        blocks.push(head);
        blocks.extend(std::iter::repeat_n(tail, e as usize));
    }
    BlockWord::new(blocks)
}

/// Digit word of the pseudocenter inside the window of `seed` labelled by `n`.
pub fn window_pseudocenter_word(seed: &PseudocenterRecord, n: &[u64]) -> Result<Word, WindowError> {
    check_cyclic_minimal(n)?;
    Ok(window_blocks(n).expand(seed))
}

/// `[[n]] * ||w||` with `[[n]] = sum_j (-1)^j n_j`, `j` from 1.
pub fn tuning_index(seed: &PseudocenterRecord, n: &[u64]) -> Result<i64, WindowError> {
    check_even(n)?;
    let alt: i64 = n.iter().enumerate().map(|(i, &e)| if i % 2 == 0 { -(e as i64) } else { e as i64 }).sum();
    Ok(alt * word_norm(&seed.w))
}

/// Image of `[0; a1, a2, ...]` under `v' (w')^(a1-1) v w^(a2-1) ...`.
pub fn cf_encode(seed: &PseudocenterRecord, quotients: &[u64]) -> Result<Word, WindowError> {
    if quotients.contains(&0) {
        return Err(WindowError::ZeroQuotient);
    }
    let n: Vec<u64> = quotients.iter().map(|a| a - 1).collect();
    Ok(window_blocks(&n).expand(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlateauKind {
    NeutralWindow,
    Mixed,
}

impl fmt::Display for PlateauKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlateauKind::NeutralWindow => "neutralWindow",
            PlateauKind::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlateauCandidate {
    pub lo: Rational,
    pub hi: Rational,
    pub kind: PlateauKind,
    pub depth: u32,
    /// Pseudocenter whose tuning window gave the bounds, for neutral windows.
    pub seed: Option<Rational>,
}

#[derive(Debug, Clone)]
struct Piece {
    lo: Rational,
    hi: Rational,
    delta: i64,
    rec: Option<PseudocenterRecord>,
}

fn half_lines(s: u64) -> (Piece, Piece) {
    let s = s as i64;
    let top = Rational::new(BigInt::from(s), BigInt::from(s + 1));
    (
        Piece { lo: Rational::from_integer((-1_000_000).into()), hi: Rational::from_integer(0.into()), delta: s * s - 1, rec: None },
        Piece { lo: top, hi: Rational::from_integer(1_000_000.into()), delta: -(s + 1), rec: None },
    )
}

/// Enumerates matching intervals meeting `[lo, hi]`, splitting the range
/// over `jobs` subranges.
pub fn enumerate_range(
    s: u64,
    lo: &Rational,
    hi: &Rational,
    depth: u32,
    jobs: usize,
) -> Result<Vec<PseudocenterRecord>, SymbolicError> {
    let (c, d) = crate::symbolic::bifurcation_range(s);
    let jobs = jobs.max(1);
    let step = (hi - lo) / Rational::from_integer(BigInt::from(jobs));
    let parts: Vec<Result<Vec<PseudocenterRecord>, SymbolicError>> = (0..jobs)
        .into_par_iter()
        .map(|k| {
            let a = lo + &step * Rational::from_integer(BigInt::from(k));
            let b = lo + &step * Rational::from_integer(BigInt::from(k + 1));
            enumerate_clipped(s, &c, &d, depth, Some((&a, &b)))
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    all.sort_by(|x, y| x.xi.cmp(&y.xi));
    all.dedup_by(|x, y| x.xi == y.xi);
    all.retain(|r| &r.xi_r > lo && &r.xi_l < hi);
    Ok(all)
}

/// Candidate plateaux in `[lo, hi]`: maximal runs of neutral intervals between
/// non-neutral neighbours, snapped to the tuning window of the largest
/// neutral interval in the run when that window fits, reported as mixed
/// otherwise.
pub fn plateau_scan(
    s: u64,
    lo: &Rational,
    hi: &Rational,
    depth: u32,
    jobs: usize,
) -> Result<Vec<PlateauCandidate>, SymbolicError> {
    let (left, right) = half_lines(s);
    let mut pieces = Vec::new();
    if lo < &left.hi {
        pieces.push(left.clone());
    }
    for r in enumerate_range(s, lo, hi, depth, jobs)? {
        pieces.push(Piece { lo: r.xi_l.clone(), hi: r.xi_r.clone(), delta: r.delta, rec: Some(r) });
    }
    if hi > &right.lo {
        pieces.push(right.clone());
    }

    let mut out = Vec::new();
    let mut i = 0;
    while i < pieces.len() {
        if pieces[i].delta != 0 {
            i += 1;
            continue;
        }
        let start = i;
        while i < pieces.len() && pieces[i].delta == 0 {
            i += 1;
        }
        // only runs with a non-neutral neighbour on both sides
        if start == 0 || i == pieces.len() {
            continue;
        }
        let bound_lo = pieces[start - 1].hi.clone();
        let bound_hi = pieces[i].lo.clone();
        snap_run(&pieces[start..i], &bound_lo, &bound_hi, depth, &mut out);
    }
    out.retain(|c| &c.hi > lo && &c.lo < hi);
    Ok(out)
}

fn snap_run(run: &[Piece], bound_lo: &Rational, bound_hi: &Rational, depth: u32, out: &mut Vec<PlateauCandidate>) {
    if run.is_empty() {
        return;
    }
    let largest = run
        .iter()
        .max_by(|a, b| (&a.hi - &a.lo).cmp(&(&b.hi - &b.lo)).then_with(|| b.lo.cmp(&a.lo)))
        .unwrap();
    let rec = largest.rec.as_ref().expect("half-lines are never neutral");
    let win = tuning_window(rec);
    if &win.xi_t < bound_lo || &win.xi_r > bound_hi {
        out.push(PlateauCandidate {
            lo: run[0].lo.clone(),
            hi: run[run.len() - 1].hi.clone(),
            kind: PlateauKind::Mixed,
            depth,
            seed: None,
        });
        return;
    }
    let before: Vec<Piece> = run.iter().filter(|p| p.hi <= win.xi_t).cloned().collect();
    let after: Vec<Piece> = run.iter().filter(|p| p.lo >= win.xi_r).cloned().collect();
    snap_run(&before, bound_lo, &win.xi_t, depth, out);
    out.push(PlateauCandidate {
        lo: win.xi_t.clone(),
        hi: win.xi_r.clone(),
        kind: PlateauKind::NeutralWindow,
        depth,
        seed: Some(rec.xi.clone()),
    });
    snap_run(&after, &win.xi_r, bound_hi, depth, out);
}
