//! Partitions of the attracting interval, transition matrices, exact
//! piecewise-constant invariant densities and entropies.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::dynamics::{detect_matching, prematching_points, sided_orbit, MatchingCertificate, MatchingError, Side, SlopeSpec};
use crate::exact::{ExactError, FieldElement, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("orbit of the discontinuity does not close up within {0} steps")]
    OrbitNotFinite(usize),
    #[error("atom {0} straddles the discontinuity or its image leaves the partition")]
    NotRefining(usize),
    #[error("left fixed space of A has dimension {0}, expected 1")]
    NonUniqueDensity(usize),
    #[error("density has a negative entry at atom {0}")]
    NegativeDensity(usize),
    #[error("no closed form at gamma = {0}")]
    NotInClosedFormRegion(String),
    #[error("entropy vanishes at an interpolation endpoint")]
    DegenerateEndpoint,
    #[error("transition matrix entry ({0}, {1}) is not 0 or 1")]
    NotMarkov(usize, usize),
    #[error("could not isolate the leading root")]
    RootIsolation,
    #[error("matrix of size {0} needs more modular primes than available")]
    TooLarge(usize),
    #[error("integer slope required")]
    NotIntegerSlope,
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Sorted breakpoints; atom `i` is `[b_i, b_{i+1}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub breakpoints: Vec<FieldElement>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.breakpoints.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn atom(&self, i: usize) -> (&FieldElement, &FieldElement) {
        (&self.breakpoints[i], &self.breakpoints[i + 1])
    }

    pub fn lengths(&self) -> Vec<FieldElement> {
        self.breakpoints.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    /// Index of the atom containing `x` (the left one at a breakpoint).
    pub fn locate(&self, x: f64) -> Option<usize> {
        let k = self.breakpoints.partition_point(|b| b.to_f64() < x);
        if k == 0 || k > self.len() { None } else { Some(k - 1) }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.breakpoints.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `[1 + s(1 - hi), hi]` with `hi = max(1 + gamma, 1 + s(1 - gamma))`.
pub fn attracting_interval(slope: &SlopeSpec, gamma: &FieldElement) -> (FieldElement, FieldElement) {
    let one = FieldElement::one();
    let a = &one + gamma;
    let b = &one + &(&slope.s * &(&one - gamma));
    let hi = if a > b { a } else { b };
    let lo = &one + &(&slope.s * &(&one - &hi));
    (lo, hi)
}

#[derive(Debug, Clone, Copy)]
pub enum PartitionSource<'a> {
    Certificate(&'a MatchingCertificate),
    /// Full orbits of both sides of the discontinuity.
    Markov { budget: usize },
}

pub fn build_partition(
    slope: &SlopeSpec,
    gamma: &FieldElement,
    source: PartitionSource<'_>,
) -> Result<Partition, SpectralError> {
    let (lo, hi) = attracting_interval(slope, gamma);
    let mut pts = vec![gamma.clone(), lo.clone(), hi.clone()];
    match source {
        PartitionSource::Certificate(cert) => {
            pts.extend(prematching_points(cert, gamma).points.iter().map(|f| f.eval(gamma)));
        }
        PartitionSource::Markov { budget } => {
            for side in [Side::Below, Side::Above] {
                let orbit = sided_orbit(slope, gamma, side, budget).ok_or(SpectralError::OrbitNotFinite(budget))?;
                pts.extend(orbit.into_iter().map(|st| st.point.value));
            }
        }
    }
    pts.retain(|p| p >= &lo && p <= &hi);
    pts.sort();
    pts.dedup();
    Ok(Partition { breakpoints: pts })
}

pub type Matrix = Vec<Vec<FieldElement>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionData {
    pub pi: Matrix,
    pub a: Matrix,
    /// `|T'|` on each atom, `1` or `s`.
    pub slopes: Vec<FieldElement>,
}

fn overlap(a: (&FieldElement, &FieldElement), b: (&FieldElement, &FieldElement)) -> FieldElement {
    let lo = if a.0 > b.0 { a.0 } else { b.0 };
    let hi = if a.1 < b.1 { a.1 } else { b.1 };
    if hi > lo { hi - lo } else { FieldElement::zero() }
}

pub fn transition_matrices(
    slope: &SlopeSpec,
    gamma: &FieldElement,
    part: &Partition,
) -> Result<TransitionData, SpectralError> {
    let n = part.len();
    let one = FieldElement::one();
    let lengths = part.lengths();
    let mut pi = vec![vec![FieldElement::zero(); n]; n];
    let mut a = vec![vec![FieldElement::zero(); n]; n];
    let mut slopes = Vec::with_capacity(n);
    for i in 0..n {
        let (x0, x1) = part.atom(i);
        let (img, t) = if x1 <= gamma {
            ((x0 + &one, x1 + &one), one.clone())
        } else if x0 >= gamma {
            let f = |x: &FieldElement| &one + &(&slope.s * &(&one - x));
            ((f(x1), f(x0)), slope.s.clone())
        } else {
            return Err(SpectralError::NotRefining(i));
        };
        let start = part.breakpoints.partition_point(|b| b <= &img.0).saturating_sub(1);
        let mut covered = FieldElement::zero();
        for j in start..n {
            let atom = part.atom(j);
            if atom.0 >= &img.1 {
                break;
            }
            let ov = overlap((&img.0, &img.1), atom);
            if ov.is_zero() {
                continue;
            }
            covered = &covered + &ov;
            pi[i][j] = ov.checked_div(&lengths[j])?;
            a[i][j] = pi[i][j].checked_div(&t)?;
        }
        if covered != &img.1 - &img.0 {
            return Err(SpectralError::NotRefining(i));
        }
        slopes.push(t);
    }
    Ok(TransitionData { pi, a, slopes })
}

/// Per-atom density values `r_i`, normalised so `sum r_i |P_i| = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityProfile {
    pub values: Vec<FieldElement>,
}

impl DensityProfile {
    /// `mu(P_i) = r_i |P_i|`
    pub fn masses(&self, part: &Partition) -> Vec<FieldElement> {
        self.values.iter().zip(part.lengths()).map(|(r, l)| r * &l).collect()
    }
}

/// Basis of the null space of `m` (rows x cols), by exact row reduction.
pub fn null_space(mut m: Matrix) -> Result<Vec<Vec<FieldElement>>, SpectralError> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip()?;
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![FieldElement::zero(); cols];
        v[f] = FieldElement::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[k][f];
        }
        basis.push(v);
    }
    Ok(basis)
}

/// The unique normalised left fixed vector of `A`.
pub fn invariant_density(td: &TransitionData, part: &Partition) -> Result<DensityProfile, SpectralError> {
    let n = td.a.len();
    let m: Matrix = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { &td.a[i][j] - &FieldElement::one() } else { td.a[i][j].clone() })
                .collect()
        })
        .collect();
    let basis = null_space(m)?;
    if basis.len() != 1 {
        return Err(SpectralError::NonUniqueDensity(basis.len()));
    }
    let v = basis.into_iter().next().unwrap();
    let total = v.iter().zip(part.lengths()).fold(FieldElement::zero(), |acc, (r, l)| &acc + &(r * &l));
    let values: Vec<FieldElement> = v.iter().map(|r| r.checked_div(&total)).collect::<Result<_, _>>()?;
    if let Some(i) = values.iter().position(|r| r.sign() < 0) {
        return Err(SpectralError::NegativeDensity(i));
    }
    Ok(DensityProfile { values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyMethod {
    Rokhlin,
    ClosedForm,
    Interpolation,
    MarkovSpectral,
}

impl fmt::Display for EntropyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyMethod::Rokhlin => "rokhlin",
            EntropyMethod::ClosedForm => "closedForm",
            EntropyMethod::Interpolation => "interpolation",
            EntropyMethod::MarkovSpectral => "markovSpectral",
        })
    }
}

/// An entropy value, with its exact coefficient of `log s` when known.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    pub coeff: Option<FieldElement>,
    pub value: f64,
    pub method: EntropyMethod,
}

/// `h = log s * mu([gamma, inf))`
pub fn metric_entropy_rokhlin(
    dp: &DensityProfile,
    part: &Partition,
    slope: &SlopeSpec,
    gamma: &FieldElement,
) -> EntropyResult {
    let mut mass = FieldElement::zero();
    for (i, m) in dp.masses(part).into_iter().enumerate() {
        if part.atom(i).0 >= gamma {
            mass = &mass + &m;
        }
    }
    let value = mass.to_f64() * slope.log_s();
    EntropyResult { coeff: Some(mass), value, method: EntropyMethod::Rokhlin }
}

/// Closed forms on the two half-lines.
pub fn metric_entropy_closed(s: u64, gamma: &Rational) -> Result<EntropyResult, SpectralError> {
    let sr = Rational::from_integer(BigInt::from(s));
    let one = Rational::one();
    let coeff = if !gamma.is_positive() {
        Rational::from_integer(4.into()) / (&sr * &sr + Rational::from_integer(3.into()) - Rational::from_integer(2.into()) * gamma * (&sr * &sr - &one))
    } else if gamma >= &(&sr / (&sr + &one)) {
        Rational::from_integer(2.into()) / (Rational::from_integer(2.into()) * gamma * (&sr + &one) - &sr + &one)
    } else {
        return Err(SpectralError::NotInClosedFormRegion(gamma.to_string()));
    };
    let value = crate::exact::rational_to_f64(&coeff) * (s as f64).ln();
    Ok(EntropyResult { coeff: Some(FieldElement::Rational(coeff)), value, method: EntropyMethod::ClosedForm })
}

/// `1/h` is affine in `gamma` across a matching interval `(a, b)`.
pub fn metric_entropy_interp(ha: f64, hb: f64, a: f64, b: f64, gamma: f64) -> Result<f64, SpectralError> {
    if ha == 0.0 || hb == 0.0 {
        return Err(SpectralError::DegenerateEndpoint);
    }
    Ok(hb * ha * (b - a) / ((b - gamma) * hb + (gamma - a) * ha))
}

/// Partition, density and Rokhlin entropy, from a matching certificate when
/// one is found and from the Markov partition otherwise.
pub fn metric_entropy(
    slope: &SlopeSpec,
    gamma: &FieldElement,
    budget: usize,
) -> Result<(Partition, DensityProfile, EntropyResult), SpectralError> {
    let part = match detect_matching(slope, gamma, budget) {
        Ok(cert) => build_partition(slope, gamma, PartitionSource::Certificate(&cert))?,
        Err(_) => build_partition(slope, gamma, PartitionSource::Markov { budget })?,
    };
    let td = transition_matrices(slope, gamma, &part)?;
    let dp = invariant_density(&td, &part)?;
    let h = metric_entropy_rokhlin(&dp, &part, slope, gamma);
    Ok((part, dp, h))
}

/// Log of the spectral radius of the 0-1 transition matrix of the Markov
/// partition at `gamma`.
pub fn topological_entropy_markov(
    slope: &SlopeSpec,
    gamma: &FieldElement,
    budget: usize,
) -> Result<EntropyResult, SpectralError> {
    let part = build_partition(slope, gamma, PartitionSource::Markov { budget })?;
    let td = transition_matrices(slope, gamma, &part)?;
    let adj = zero_one(&td.pi)?;
    let rho = spectral_radius_01(&adj)?;
    Ok(EntropyResult { coeff: None, value: rho.max(1.0).ln(), method: EntropyMethod::MarkovSpectral })
}

pub fn zero_one(pi: &Matrix) -> Result<Vec<Vec<bool>>, SpectralError> {
    let one = FieldElement::one();
    pi.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    if x.is_zero() {
                        Ok(false)
                    } else if x == &one {
                        Ok(true)
                    } else {
                        Err(SpectralError::NotMarkov(i, j))
                    }
                })
                .collect()
        })
        .collect()
}

/// Spectral radius of a 0-1 matrix: the largest over strongly connected
/// components, each the leading root of its integer characteristic
/// polynomial, isolated exactly and refined to about 1e-14.
pub fn spectral_radius_01(adj: &[Vec<bool>]) -> Result<f64, SpectralError> {
    let n = adj.len();
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if adj[i][j] {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut best: f64 = 0.0;
    for comp in tarjan_scc(&g) {
        let idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        let sub: Vec<Vec<bool>> = idx.iter().map(|&i| idx.iter().map(|&j| adj[i][j]).collect()).collect();
        let rho = if sub.len() == 1 {
            if sub[0][0] { 1.0 } else { 0.0 }
        } else {
            leading_root(&sub)?
        };
        best = best.max(rho);
    }
    Ok(best)
}

fn leading_root(sub: &[Vec<bool>]) -> Result<f64, SpectralError> {
    let (x, lo_cw, hi_cw) = collatz_wielandt(sub);
    if let Some((lo, hi)) = certified_bracket(sub, &x) {
        if hi - lo <= CW_ACCEPT * hi.max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
    }
    let max_row = sub.iter().map(|r| r.iter().filter(|&&b| b).count()).max().unwrap_or(0) as f64;
    let p = char_poly_01_bounded(sub, Some((hi_cw * (1.0 + 1e-6) + 1e-9).min(max_row)))?;
    isolate_leading_root(&p, lo_cw, hi_cw)
}

// accept the exact Collatz-Wielandt bracket below this relative width
const CW_ACCEPT: f64 = 1e-13;

/// For irreducible `C` and any positive `x`,
/// `min (Cx)_i / x_i <= rho <= max (Cx)_i / x_i`. Evaluated in integers on
/// a fixed-point copy of `x`, so the bracket is exact up to the final
/// conversion to floats.
fn certified_bracket(sub: &[Vec<bool>], x: &[f64]) -> Option<(f64, f64)> {
    let scale = 2f64.powi(64);
    let xs: Vec<BigInt> = x
        .iter()
        .map(|&v| BigInt::from_f64((v * scale).floor()).unwrap_or_else(BigInt::one).max(BigInt::one()))
        .collect();
    let shift = 80;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (i, row) in sub.iter().enumerate() {
        let y: BigInt = row.iter().zip(&xs).filter(|(b, _)| **b).map(|(_, v)| v).sum();
        let num = &y << shift;
        let q_lo: BigInt = &num / &xs[i];
        let q_hi: BigInt = &q_lo + 1;
        let den = 2f64.powi(shift as i32);
        lo = lo.min(q_lo.to_f64()? / den);
        hi = hi.max(q_hi.to_f64()? / den);
    }
    Some((lo, hi))
}

/// Float bracket for the Perron root from power iteration on `I + C`,
/// with the final iterate.
fn collatz_wielandt(sub: &[Vec<bool>]) -> (Vec<f64>, f64, f64) {
    let n = sub.len();
    let rows: Vec<Vec<usize>> = sub.iter().map(|r| (0..n).filter(|&j| r[j]).collect()).collect();
    let mut x = vec![1.0f64; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..20_000 {
        let y: Vec<f64> = (0..n).map(|i| x[i] + rows[i].iter().map(|&j| x[j]).sum::<f64>()).collect();
        lo = (0..n).map(|i| y[i] / x[i]).fold(f64::INFINITY, f64::min);
        hi = (0..n).map(|i| y[i] / x[i]).fold(0.0, f64::max);
        let m = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / m).collect();
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    (x, lo - 1.0, hi - 1.0)
}

fn sign_variations(c: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for x in c {
        let s = if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 };
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

const FRAC_BITS: usize = 60;

/// Coefficients of `2^(kn) p(m/2^k + y/2^k)` in `y`: their sign variations
/// bound the number of roots of `p` above `m/2^k`.
fn shifted(p: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = p.len() - 1;
    let mut b: Vec<BigInt> = p.iter().enumerate().map(|(i, c)| c << (FRAC_BITS * (n - i))).collect();
    for i in 0..n {
        for j in (i..n).rev() {
            let t = m * &b[j + 1];
            b[j] += t;
        }
    }
    b
}

fn sign_at(p: &[BigInt], m: &BigInt) -> i8 {
    let n = p.len() - 1;
    let mut acc = BigInt::zero();
    for (i, c) in p.iter().enumerate().rev() {
        acc = acc * m + (c << (FRAC_BITS * (n - i)));
    }
    if acc.is_positive() { 1 } else if acc.is_negative() { -1 } else { 0 }
}

fn to_dyadic(x: f64) -> BigInt {
    BigInt::from_f64((x * (1u64 << FRAC_BITS) as f64).floor()).unwrap()
}

fn from_dyadic(m: &BigInt) -> f64 {
    m.to_f64().unwrap() / (1u64 << FRAC_BITS) as f64
}

/// Largest real root of the monic integer polynomial `p` (ascending
/// coefficients), given a float estimate bracket.
pub fn isolate_leading_root(p: &[BigInt], est_lo: f64, est_hi: f64) -> Result<f64, SpectralError> {
    let est = 0.5 * (est_lo + est_hi);
    let mut delta = ((est_hi - est_lo).abs() * 2.0).max(1e-12);
    let mut lo = None;
    for _ in 0..200 {
        let m = to_dyadic(est - delta);
        match sign_variations(&shifted(p, &m)) {
            1 => {
                lo = Some(m);
                break;
            }
            0 => delta *= 2.0,
            _ => delta /= 3.0,
        }
        if delta < 1e-16 {
            break;
        }
    }
    let mut lo = lo.ok_or(SpectralError::RootIsolation)?;
    // exactly one root above lo, and p(lo) < 0 for a monic polynomial
    let mut step = to_dyadic(delta.max(1e-12));
    let mut hi = &lo + &step;
    while sign_at(p, &hi) < 0 {
        step = &step * 2;
        hi = &lo + &step;
    }
    if sign_at(p, &hi) == 0 {
        return Ok(from_dyadic(&hi));
    }
    let eps = to_dyadic(1e-14).max(BigInt::one());
    while &hi - &lo > eps {
        let mid: BigInt = (&lo + &hi) >> 1;
        match sign_at(p, &mid) {
            0 => return Ok(from_dyadic(&mid)),
            s if s < 0 => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(from_dyadic(&((&lo + &hi) >> 1)))
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Characteristic polynomial mod `p` (ascending, monic), via reduction to
/// Hessenberg form.
fn char_poly_mod(m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h: Vec<Vec<u64>> = m.to_vec();
    // p < 2^32, so products fit in a u64
    let mulmod = |a: u64, b: u64| a * b % p;
    let sub = |a: u64, b: u64| if a >= b { a - b } else { a + p - b };
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else { continue };
        if i != j + 1 {
            h.swap(i, j + 1);
            for row in h.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let inv = powmod(h[j + 1][j], p - 2, p);
        for k in j + 2..n {
            let u = mulmod(h[k][j], inv);
            if u == 0 {
                continue;
            }
            for c in 0..n {
                let t = mulmod(u, h[j + 1][c]);
                h[k][c] = sub(h[k][c], t);
            }
            for row in h.iter_mut() {
                let t = mulmod(u, row[k]);
                row[j + 1] = (row[j + 1] + t) % p;
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_i (prod of subdiagonal) h_{m-i,m} p_{m-i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut cur = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            cur[k + 1] = (cur[k + 1] + c) % p;
            cur[k] = sub(cur[k], mulmod(h[m - 1][m - 1], c));
        }
        let mut t = 1u64;
        for i in 1..m {
            t = mulmod(t, h[m - i][m - i - 1]);
            let f = mulmod(t, h[m - i - 1][m - 1]);
            if f == 0 {
                continue;
            }
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                cur[k] = sub(cur[k], mulmod(f, c));
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// Bits bounding every coefficient of the characteristic polynomial of an
/// `n x n` 0-1 matrix: `C(n,k) rho^k` when all eigenvalues lie in `|z| <= rho`,
/// otherwise Hadamard's bound on principal minors.
fn coeff_bits(n: usize, rho: Option<f64>) -> f64 {
    let mut best: f64 = 0.0;
    let mut log_binom = 0.0f64;
    for k in 1..=n {
        log_binom += ((n - k + 1) as f64).log2() - (k as f64).log2();
        let minor = match rho {
            Some(r) => k as f64 * r.max(1.0).log2(),
            None => 0.5 * k as f64 * (k as f64).log2(),
        };
        best = best.max(log_binom + minor);
    }
    best + 2.0
}

struct PrimeStream(u64);

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while !is_prime(self.0) {
            self.0 -= 2;
        }
        let p = self.0;
        self.0 -= 2;
        Some(p)
    }
}

fn crt_symmetric(residues: &[(u64, Vec<u64>)], n: usize) -> Vec<BigInt> {
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    for (p, r) in residues {
        let (p, pb) = (*p, BigInt::from(*p));
        // Garner step: acc + modulus * ((r - acc) * modulus^-1 mod p)
        let minv = powmod((&modulus % &pb).to_u64().unwrap(), p - 2, p);
        for (a, &ri) in acc.iter_mut().zip(r) {
            let am = (&*a % &pb).to_u64().unwrap();
            let d = if ri >= am { ri - am } else { ri + p - am };
            *a += &modulus * mulmod(d, minv, p);
        }
        modulus *= &pb;
    }
    let half = &modulus >> 1;
    acc.into_iter().map(|a| if a > half { a - &modulus } else { a }).collect()
}

fn agrees_mod(poly: &[BigInt], p: u64, r: &[u64]) -> bool {
    let pb = BigInt::from(p);
    poly.iter().zip(r).all(|(c, &ri)| {
        let mut m = c % &pb;
        if m.is_negative() {
            m += &pb;
        }
        m.to_u64() == Some(ri)
    })
}

/// Exact integer characteristic polynomial `det(xI - M)`, ascending.
pub fn char_poly_01(adj: &[Vec<bool>]) -> Result<Vec<BigInt>, SpectralError> {
    char_poly_01_bounded(adj, None)
}

/// As [`char_poly_01`], with an upper bound on the spectral radius to cut the
/// number of primes. The result is checked against one spare prime and
/// recomputed under the unconditional bound if the check fails.
pub fn char_poly_01_bounded(adj: &[Vec<bool>], rho: Option<f64>) -> Result<Vec<BigInt>, SpectralError> {
    let n = adj.len();
    let m: Vec<Vec<u64>> = adj.iter().map(|r| r.iter().map(|&b| b as u64).collect()).collect();
    let mut primes = PrimeStream((1 << 31) - 1);
    let mut residues = Vec::new();
    let mut bits = 0.0;
    for bound in [rho, None] {
        let need = coeff_bits(n, bound) + 1.0;
        while bits < need {
            let p = primes.next().unwrap();
            residues.push((p, char_poly_mod(&m, p)));
            bits += (p as f64).log2();
            if residues.len() > 4096 {
                return Err(SpectralError::TooLarge(n));
            }
        }
        let poly = crt_symmetric(&residues, n);
        let spare = primes.next().unwrap();
        if agrees_mod(&poly, spare, &char_poly_mod(&m, spare)) {
            return Ok(poly);
        }
    }
    Err(SpectralError::RootIsolation)
}

/// Return-time integral `int_J tau dm` over `J = [gamma, 1 + gamma)` for the
/// first return to `J`, and the number `k` with `h_m(R) = k log s`.
pub fn return_time_integral(s: u64, gamma: &Rational) -> Result<(Rational, u32), SpectralError> {
    let sr = Rational::from_integer(BigInt::from(s));
    let one = Rational::one();
    let (n_r, slope, y_lo, y_hi, k) = if !gamma.is_positive() {
        let s2 = &sr * &sr;
        (2, s2.clone(), &one - &s2 + &s2 * gamma, &one + &s2 * gamma, 2)
    } else if gamma >= &(&sr / (&sr + &one)) {
        (1, sr.clone(), &one - &sr * gamma, &one + &sr - &sr * gamma, 1)
    } else {
        return Err(SpectralError::NotInClosedFormRegion(gamma.to_string()));
    };
    let mut extra = Rational::zero();
    let mut j = 1i64;
    loop {
        let cut = gamma - Rational::from_integer(BigInt::from(j - 1));
        if cut <= y_lo {
            break;
        }
        let top = if y_hi < cut { y_hi.clone() } else { cut };
        extra += top - &y_lo;
        j += 1;
    }
    Ok((Rational::from_integer(BigInt::from(n_r)) + extra / slope, k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbramovResidual {
    /// `|c * int tau - k|`, with `h_mu = c log s`.
    pub exact: Rational,
    pub value: f64,
}

/// Compares `h_mu * int tau dm` with the entropy `k log s` of the first
/// return map on the two half-lines.
pub fn abramov_check(
    slope: &SlopeSpec,
    gamma: &Rational,
    dp: &DensityProfile,
    part: &Partition,
) -> Result<AbramovResidual, SpectralError> {
    let s = slope.as_integer().ok_or(SpectralError::NotIntegerSlope)?;
    let (tau, k) = return_time_integral(s, gamma)?;
    let g = FieldElement::Rational(gamma.clone());
    let h = metric_entropy_rokhlin(dp, part, slope, &g);
    let c = h.coeff.and_then(|c| c.as_rational().cloned()).ok_or(SpectralError::NotIntegerSlope)?;
    let exact = (c * tau - Rational::from_integer(BigInt::from(k))).abs();
    let value = crate::exact::rational_to_f64(&exact) * slope.log_s();
    Ok(AbramovResidual { exact, value })
}
