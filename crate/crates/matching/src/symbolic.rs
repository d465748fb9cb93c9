//! s-adic words for integer slopes: pseudocenters, interval endpoints,
//! the matching index, bisection enumeration and period-doubling cascades.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;
use thiserror::Error;

use crate::exact::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("{0} is not an s-adic rational")]
    NotSAdic(String),
    #[error("{0} is outside the admissible range")]
    OutOfRange(String),
    #[error("empty interval ({0}, {1})")]
    EmptyInterval(String, String),
    #[error("two s-adic rationals of denominator s^{m} lie in ({c}, {d})")]
    AmbiguousTie { c: String, d: String, m: u32 },
    #[error("norm of {0} is odd, so the matching index is not a multiple of s+1")]
    NotMultiple(String),
    #[error("cascade word {0} is not the even expansion of its value")]
    CascadeMismatch(String),
    #[error("bad word `{0}`")]
    BadWord(String),
}

/// A finite string of base-`s` digits read as `.d1 d2 d3 ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub digits: Vec<u32>,
    pub base: u32,
}

const DIGIT_CHARS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl Word {
    pub fn new(digits: Vec<u32>, base: u32) -> Self {
        debug_assert!(digits.iter().all(|&d| d < base));
        Word { digits, base }
    }

    pub fn parse(text: &str, base: u32) -> Result<Self, SymbolicError> {
        let digits = text
            .chars()
            .map(|c| c.to_digit(36).filter(|&d| d < base))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| SymbolicError::BadWord(text.to_string()))?;
        Ok(Word::new(digits, base))
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `sum d_i s^{-i}`
    pub fn value(&self) -> Rational {
        let s = BigInt::from(self.base);
        let mut n = BigInt::zero();
        for &d in &self.digits {
            n = n * &s + d;
        }
        Rational::new(n, num_traits::pow(s, self.digits.len()))
    }

    /// Value of the infinite repetition `.www...`.
    pub fn repeating_value(&self) -> Rational {
        let p = num_traits::pow(BigInt::from(self.base), self.digits.len());
        self.value() * Rational::new(p.clone(), p - 1)
    }

    /// Digitwise `d -> s - 1 - d`.
    pub fn flip(&self) -> Word {
        Word::new(self.digits.iter().map(|&d| self.base - 1 - d).collect(), self.base)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Word::new(digits, self.base)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            write!(f, "{}", DIGIT_CHARS[d as usize] as char)?;
        }
        Ok(())
    }
}

/// Value of `.prefix period period ...`; an empty period means a finite word.
pub fn eventually_periodic_value(prefix: &Word, period: &Word) -> Rational {
    let head = prefix.value();
    if period.is_empty() {
        return head;
    }
    let scale = num_traits::pow(BigInt::from(prefix.base), prefix.len());
    head + period.repeating_value() / Rational::from_integer(scale)
}

/// Base-`s` expansion of `x` in `[0, 1)` as a shortest prefix and a shortest
/// period. Terminating expansions get an empty period.
pub fn eventually_periodic_expansion(s: u64, x: &Rational) -> Result<(Word, Word), SymbolicError> {
    if x.is_negative() || x >= &Rational::one() {
        return Err(SymbolicError::OutOfRange(x.to_string()));
    }
    let q = x.denom().clone();
    let sb = BigInt::from(s);
    let mut r = x.numer().clone();
    let mut seen = std::collections::HashMap::new();
    let mut digits = Vec::new();
    while !r.is_zero() {
        if let Some(&start) = seen.get(&r) {
            let period = digits.split_off(start);
            return Ok((Word::new(digits, s as u32), Word::new(period, s as u32)));
        }
        seen.insert(r.clone(), digits.len());
        let (d, rem) = (&r * &sb).div_rem(&q);
        digits.push(d.to_u32().unwrap());
        r = rem;
    }
    Ok((Word::new(digits, s as u32), Word::new(Vec::new(), s as u32)))
}

/// Smallest `m` with `x * s^m` an integer.
pub fn sadic_exponent(s: u64, x: &Rational) -> Result<u32, SymbolicError> {
    let q = x.denom();
    let sb = BigInt::from(s);
    let mut p = BigInt::one();
    for m in 0..=q.bits() as u32 + 1 {
        if (&p % q).is_zero() {
            return Ok(m);
        }
        p *= &sb;
    }
    Err(SymbolicError::NotSAdic(x.to_string()))
}

/// Shortest base-`s` expansion of `xi`, padded with a 0 to even length.
pub fn even_expansion(s: u64, xi: &Rational) -> Result<Word, SymbolicError> {
    if !xi.is_positive() || xi >= &Rational::one() {
        return Err(SymbolicError::OutOfRange(xi.to_string()));
    }
    let m = sadic_exponent(s, xi)?;
    let sb = BigInt::from(s);
    let mut n = (xi * Rational::from_integer(num_traits::pow(sb.clone(), m as usize))).to_integer();
    let mut digits = vec![0u32; m as usize];
    for i in (0..m as usize).rev() {
        let (q, r) = n.div_rem(&sb);
        digits[i] = r.to_u32().unwrap();
        n = q;
    }
    if m % 2 == 1 {
        digits.push(0);
    }
    Ok(Word::new(digits, s as u32))
}

/// The odd-length word `v` with `.v = 1 - .w`, for `w` an even expansion.
pub fn odd_complement(w: &Word) -> Word {
    let s = w.base;
    let n = w.len();
    let f = w.flip();
    let mut digits;
    if w.digits[n - 1] == 0 {
        digits = f.digits[..n - 2].to_vec();
        digits.push(f.digits[n - 2] + 1);
    } else {
        digits = f.digits[..n - 1].to_vec();
        digits.push(f.digits[n - 1] + 1);
        digits.push(0);
    }
    debug_assert!(digits.iter().all(|&d| d < s));
    Word::new(digits, s)
}

/// `sum_j (s - 1 - 2j) |w|_j`
pub fn word_norm(w: &Word) -> i64 {
    let s = w.base as i64;
    w.digits.iter().map(|&d| s - 1 - 2 * d as i64).sum()
}

/// `(s + 1)/2 * ||w||`
pub fn matching_index(w: &Word) -> Result<i64, SymbolicError> {
    let n = word_norm(w);
    if n % 2 != 0 {
        return Err(SymbolicError::NotMultiple(w.to_string()));
    }
    Ok((w.base as i64 + 1) * (n / 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudocenterRecord {
    pub xi: Rational,
    pub w: Word,
    pub v: Word,
    pub xi_l: Rational,
    pub xi_r: Rational,
    pub delta: i64,
}

impl PseudocenterRecord {
    pub fn base(&self) -> u64 {
        self.w.base as u64
    }

    /// Length of the shortest expansion of `xi`.
    pub fn depth(&self) -> u32 {
        sadic_exponent(self.base(), &self.xi).unwrap()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "xi": self.xi.to_string(),
            "w": self.w.to_string(),
            "v": self.v.to_string(),
            "xiL": self.xi_l.to_string(),
            "xiR": self.xi_r.to_string(),
            "delta": self.delta,
        })
    }
}

/// The rational interval `(.(v' v) repeating, .w repeating)` generated by `xi`,
/// where `v'` is the flip of `v`.
pub fn interval_from_pseudocenter(s: u64, xi: &Rational) -> Result<PseudocenterRecord, SymbolicError> {
    if !xi.is_positive() || xi >= &Rational::new(BigInt::from(s), BigInt::from(s + 1)) {
        return Err(SymbolicError::OutOfRange(xi.to_string()));
    }
    let w = even_expansion(s, xi)?;
    let v = odd_complement(&w);
    let xi_r = w.repeating_value();
    let xi_l = v.flip().concat(&v).repeating_value();
    let delta = matching_index(&w)?;
    Ok(PseudocenterRecord { xi: xi.clone(), w, v, xi_l, xi_r, delta })
}

fn g_rational(s: u64, x: &Rational) -> Rational {
    let y = Rational::from_integer(BigInt::from(s)) * (Rational::one() - x);
    &y - y.floor()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PseudocenterCheck {
    Yes,
    /// Minimal `k` with `g^k(xi)` in `(0, xi)`.
    No(usize),
}

/// Whether `g^k(xi)` avoids `(0, xi)` for every `k >= 1`.
pub fn is_pseudocenter(s: u64, xi: &Rational) -> Result<PseudocenterCheck, SymbolicError> {
    if !xi.is_positive() || xi >= &Rational::new(BigInt::from(s), BigInt::from(s + 1)) {
        return Err(SymbolicError::OutOfRange(xi.to_string()));
    }
    let m = sadic_exponent(s, xi)?;
    let mut y = xi.clone();
    for k in 1..=m as usize + 1 {
        y = g_rational(s, &y);
        if y.is_zero() {
            return Ok(PseudocenterCheck::Yes);
        }
        if &y < xi {
            return Ok(PseudocenterCheck::No(k));
        }
    }
    Ok(PseudocenterCheck::Yes)
}

/// All s-adic rationals of the smallest denominator `s^m` in `(c, d)`, with `m`.
pub fn sadic_candidates(s: u64, c: &Rational, d: &Rational) -> Result<(Vec<Rational>, u32), SymbolicError> {
    if c >= d {
        return Err(SymbolicError::EmptyInterval(c.to_string(), d.to_string()));
    }
    let sb = BigInt::from(s);
    let mut scale = BigInt::one();
    let mut m = 0u32;
    loop {
        let sc = Rational::from_integer(scale.clone());
        let a: BigInt = (c * &sc).floor().to_integer() + 1;
        let b: BigInt = (d * &sc).ceil().to_integer() - 1;
        if a <= b {
            let mut out = Vec::new();
            let mut k = a;
            while k <= b {
                out.push(Rational::new(k.clone(), scale.clone()));
                k += 1;
            }
            return Ok((out, m));
        }
        scale *= &sb;
        m += 1;
    }
}

/// The s-adic rational of smallest denominator in the open interval `(c, d)`.
pub fn lowest_denominator_sadic(s: u64, c: &Rational, d: &Rational) -> Result<(Rational, u32), SymbolicError> {
    let (mut cands, m) = sadic_candidates(s, c, d)?;
    if cands.len() > 1 {
        return Err(SymbolicError::AmbiguousTie { c: c.to_string(), d: d.to_string(), m });
    }
    Ok((cands.pop().unwrap(), m))
}

/// One bisection step on a gap `(c, d)` with ends in the bifurcation set:
/// the intervals of the minimal-denominator pseudocenters inside it, and
/// the gaps left over. `None` when the candidates are deeper than `max_depth`.
#[allow(clippy::type_complexity)]
fn split_gap(
    s: u64,
    c: &Rational,
    d: &Rational,
    max_depth: u32,
) -> Result<Option<(Vec<PseudocenterRecord>, Vec<(Rational, Rational)>)>, SymbolicError> {
    let (cands, m) = sadic_candidates(s, c, d)?;
    if m > max_depth {
        return Ok(None);
    }
    let mut recs = Vec::new();
    let mut cuts = Vec::new();
    for x in &cands {
        if is_pseudocenter(s, x)? == PseudocenterCheck::Yes {
            recs.push(interval_from_pseudocenter(s, x)?);
        }
    }
    for x in &cands {
        if !recs.iter().any(|r| &r.xi_l <= x && x <= &r.xi_r) {
            cuts.push((x.clone(), x.clone()));
        }
    }
    let mut blocks: Vec<(Rational, Rational)> = recs.iter().map(|r| (r.xi_l.clone(), r.xi_r.clone())).collect();
    blocks.extend(cuts);
    blocks.sort();
    let mut gaps = Vec::new();
    let mut left = c.clone();
    for (a, b) in blocks {
        if a > left {
            gaps.push((left.clone(), a));
        }
        if b > left {
            left = b;
        }
    }
    if d > &left {
        gaps.push((left, d.clone()));
    }
    Ok(Some((recs, gaps)))
}

/// All matching intervals in `(c, d)` whose pseudocenter has an expansion of
/// length at most `max_depth`, sorted by pseudocenter. The ends `c`, `d`
/// should be bifurcation parameters, e.g. `0` and `s/(s+1)`.
pub fn enumerate_matching_intervals(
    s: u64,
    c: &Rational,
    d: &Rational,
    max_depth: u32,
) -> Result<Vec<PseudocenterRecord>, SymbolicError> {
    enumerate_clipped(s, c, d, max_depth, None)
}

/// Like [`enumerate_matching_intervals`] but only descends into gaps that
/// meet the closed window `clip`.
pub fn enumerate_clipped(
    s: u64,
    c: &Rational,
    d: &Rational,
    max_depth: u32,
    clip: Option<(&Rational, &Rational)>,
) -> Result<Vec<PseudocenterRecord>, SymbolicError> {
    let mut out = Vec::new();
    let mut stack = vec![(c.clone(), d.clone())];
    while let Some((a, b)) = stack.pop() {
        if a >= b {
            continue;
        }
        if let Some((lo, hi)) = clip {
            if &b <= lo || &a >= hi {
                continue;
            }
        }
        if let Some((recs, gaps)) = split_gap(s, &a, &b, max_depth)? {
            out.extend(recs);
            stack.extend(gaps);
        }
    }
    out.sort_by(|x, y| x.xi.cmp(&y.xi));
    Ok(out)
}

/// The matching interval containing `gamma`, found by bisection descent,
/// or `None` if `gamma` lies in the bifurcation set up to `max_depth`.
pub fn enclosing_interval(s: u64, gamma: &Rational, max_depth: u32) -> Result<Option<PseudocenterRecord>, SymbolicError> {
    let (mut c, mut d) = bifurcation_range(s);
    if gamma <= &c || gamma >= &d {
        return Err(SymbolicError::OutOfRange(gamma.to_string()));
    }
    loop {
        let Some((recs, gaps)) = split_gap(s, &c, &d, max_depth)? else { return Ok(None) };
        if let Some(r) = recs.into_iter().find(|r| &r.xi_l < gamma && gamma < &r.xi_r) {
            return Ok(Some(r));
        }
        match gaps.into_iter().find(|(a, b)| a < gamma && gamma < b) {
            Some((a, b)) => {
                c = a;
                d = b;
            }
            None => return Ok(None),
        }
    }
}

/// Blocks of the cascade substitution: `w`, `v` and their flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    W,
    V,
    Wf,
    Vf,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Block::W => "w",
            Block::V => "v",
            Block::Wf => "w'",
            Block::Vf => "v'",
        })
    }
}

/// `w -> v'v, w' -> v v', v -> v w, v' -> v' w'`
pub fn chi_substitute(u: &[Block]) -> Vec<Block> {
    let mut out = Vec::with_capacity(2 * u.len());
    for b in u {
        out.extend_from_slice(match b {
            Block::W => &[Block::Vf, Block::V],
            Block::Wf => &[Block::V, Block::Vf],
            Block::V => &[Block::V, Block::W],
            Block::Vf => &[Block::Vf, Block::Wf],
        });
    }
    out
}

/// Projection onto the Thue-Morse alphabet: `v, w' -> 0`, `v', w -> 1`.
pub fn thue_morse_projection(u: &[Block]) -> Vec<u8> {
    u.iter()
        .map(|b| match b {
            Block::V | Block::Wf => 0,
            Block::Vf | Block::W => 1,
        })
        .collect()
}

/// Concatenates blocks using the words of a seed record.
pub fn expand_blocks(blocks: &[Block], w: &Word, v: &Word) -> Word {
    let wf = w.flip();
    let vf = v.flip();
    let mut digits = Vec::new();
    for b in blocks {
        digits.extend_from_slice(match b {
            Block::W => &w.digits,
            Block::V => &v.digits,
            Block::Wf => &wf.digits,
            Block::Vf => &vf.digits,
        });
    }
    Word::new(digits, w.base)
}

/// The first `n` period-doubled pseudocenters to the left of `xi`.
pub fn cascade(s: u64, xi: &Rational, n: usize) -> Result<Vec<PseudocenterRecord>, SymbolicError> {
    let seed = interval_from_pseudocenter(s, xi)?;
    let mut blocks = vec![Block::W];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        blocks = chi_substitute(&blocks);
        let word = expand_blocks(&blocks, &seed.w, &seed.v);
        let rec = interval_from_pseudocenter(s, &word.value())?;
        if rec.w != word {
            return Err(SymbolicError::CascadeMismatch(word.to_string()));
        }
        out.push(rec);
    }
    Ok(out)
}

/// The half-open range `(0, s/(s+1))` containing the bifurcation set.
pub fn bifurcation_range(s: u64) -> (Rational, Rational) {
    (int(0), Rational::new(BigInt::from(s), BigInt::from(s + 1)))
}
