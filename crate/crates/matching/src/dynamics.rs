//! The maps `Q_gamma`, `G_beta` and `g`, side-tagged orbits, matching
//! detection and the symbolic solution of matching intervals.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{
    parse_field_element, validate_slope, AffineForm, FieldElement, Rational, SlopeKind, SlopeRejection,
};

/// Default number of `Q` steps per side before detection gives up.
pub const DEFAULT_BUDGET: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("point {0} is outside the domain of this operation")]
    OutOfDomain(String),
    #[error("operation requires an integer slope")]
    NotIntegerSlope,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeParseError {
    #[error("slope must be written `int:N` or `quad:a+c*sqrt(d)`, got `{0}`")]
    Syntax(String),
    #[error(transparent)]
    Rejected(#[from] SlopeRejection),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSpec {
    pub s: FieldElement,
    pub kind: SlopeKind,
}

impl SlopeSpec {
    pub fn new(s: FieldElement) -> Result<Self, SlopeRejection> {
        let kind = validate_slope(&s)?;
        Ok(SlopeSpec { s, kind })
    }

    /// Integer slope `n >= 2`.
    pub fn integer(n: u64) -> Self {
        SlopeSpec::new(FieldElement::from_int(n as i64)).expect("integer slope must be at least 2")
    }

    /// Parses `int:2`, `quad:1+1*sqrt(5)` or `quad:1/2+1/2*sqrt(5)`.
    pub fn parse(text: &str) -> Result<Self, SlopeParseError> {
        let t = text.trim();
        let syntax = || SlopeParseError::Syntax(text.to_string());
        let s = if let Some(rest) = t.strip_prefix("int:") {
            FieldElement::Rational(crate::exact::parse_rational(rest).map_err(|_| syntax())?)
        } else if let Some(rest) = t.strip_prefix("quad:") {
            let fe = parse_field_element(rest).map_err(|_| syntax())?;
            if fe.radicand().is_none() {
                return Err(syntax());
            }
            fe
        } else {
            return Err(syntax());
        };
        Ok(SlopeSpec::new(s)?)
    }

    pub fn as_integer(&self) -> Option<u64> {
        match self.kind {
            SlopeKind::Integer(n) => Some(n),
            SlopeKind::Quadratic(_) => None,
        }
    }

    pub fn log_s(&self) -> f64 {
        self.s.to_f64().ln()
    }

    /// Parses a parameter value in this slope's field.
    pub fn parse_value(&self, text: &str) -> Result<FieldElement, crate::exact::ExactError> {
        let v = parse_field_element(text)?;
        if let (Some(d), SlopeKind::Quadratic(e)) = (v.radicand(), self.kind) {
            if d != e {
                return Err(crate::exact::ExactError::FieldMismatch(d, e));
            }
        }
        Ok(v)
    }
}

impl fmt::Display for SlopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SlopeKind::Integer(n) => write!(f, "int:{}", n),
            SlopeKind::Quadratic(_) => write!(f, "quad:{}", self.s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Exact,
    Above,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Below => Side::Above,
            Side::Exact => Side::Exact,
            Side::Above => Side::Below,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SidedPoint {
    pub value: FieldElement,
    pub side: Side,
}

impl SidedPoint {
    pub fn new(value: FieldElement, side: Side) -> Self {
        SidedPoint { value, side }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    L,
    R,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::L => "L",
            Branch::R => "R",
        })
    }
}

fn takes_left(gamma: &FieldElement, value: &FieldElement, side: Side) -> bool {
    match value.cmp(gamma) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => side != Side::Above,
    }
}

fn apply_branch(s: &FieldElement, branch: Branch, value: &FieldElement) -> FieldElement {
    match branch {
        Branch::L => value + &FieldElement::one(),
        Branch::R => &FieldElement::one() + &(s * &(&FieldElement::one() - value)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QStep {
    pub point: SidedPoint,
    pub branch: Branch,
}

impl QStep {
    /// Derivative factor of the branch taken: `1` or `-s`.
    pub fn factor(&self, slope: &SlopeSpec) -> FieldElement {
        match self.branch {
            Branch::L => FieldElement::one(),
            Branch::R => -&slope.s,
        }
    }
}

/// One step of `Q_gamma` on a side-tagged point.
pub fn q_step(slope: &SlopeSpec, gamma: &FieldElement, x: &SidedPoint) -> QStep {
    if takes_left(gamma, &x.value, x.side) {
        QStep { point: SidedPoint::new(apply_branch(&slope.s, Branch::L, &x.value), x.side), branch: Branch::L }
    } else {
        QStep {
            point: SidedPoint::new(apply_branch(&slope.s, Branch::R, &x.value), x.side.flip()),
            branch: Branch::R,
        }
    }
}

/// Plain evaluation of `Q_gamma` (left branch on `x <= gamma`).
pub fn q_map(slope: &SlopeSpec, gamma: &FieldElement, x: &FieldElement) -> FieldElement {
    q_step(slope, gamma, &SidedPoint::new(x.clone(), Side::Exact)).point.value
}

fn in_unit(x: &FieldElement) -> bool {
    x.sign() >= 0 && x < &FieldElement::one()
}

/// `g(x) = s(1-x) mod 1` on `[0, 1)`.
pub fn g_step(slope: &SlopeSpec, x: &FieldElement) -> Result<FieldElement, DynamicsError> {
    if !in_unit(x) {
        return Err(DynamicsError::OutOfDomain(x.to_string()));
    }
    let y = &slope.s * &(&FieldElement::one() - x);
    let fl = FieldElement::from_bigint(y.floor());
    Ok(&y - &fl)
}

/// `G_beta(y) = y + 2` for `y <= 0` and `beta - s*y` for `y > 0`.
pub fn g_beta_step(slope: &SlopeSpec, beta: &FieldElement, y: &FieldElement) -> FieldElement {
    if y.sign() <= 0 {
        y + &FieldElement::from_int(2)
    } else {
        beta - &(&slope.s * y)
    }
}

/// `beta = 2(1+s)(1-gamma)` and the conjugacy `H(x) = 2(x - gamma)`.
pub fn conjugate_to_g(gamma: &FieldElement, slope: &SlopeSpec) -> (FieldElement, AffineForm) {
    let two = FieldElement::from_int(2);
    let beta = &(&two * &(&FieldElement::one() + &slope.s)) * &(&FieldElement::one() - gamma);
    let h = AffineForm::new(-&(&two * gamma), two);
    (beta, h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstReturn {
    pub value: FieldElement,
    pub q_steps: usize,
    pub g_power: u8,
}

/// First return of the `Q_gamma` orbit of `x` to `[0, 1)` (integer slopes).
pub fn first_return(slope: &SlopeSpec, gamma: &FieldElement, x: &FieldElement) -> Result<FirstReturn, DynamicsError> {
    let s = slope.as_integer().ok_or(DynamicsError::NotIntegerSlope)?;
    if x.sign() <= 0 || x >= &FieldElement::one() || x == gamma {
        return Err(DynamicsError::OutOfDomain(x.to_string()));
    }
    let one = FieldElement::one();
    let mut y = x.clone();
    for steps in 1..=(s * s + 4) as usize {
        y = q_map(slope, gamma, &y);
        if y == one {
            // lands on the fixed point 1 and never comes back
            return Err(DynamicsError::OutOfDomain(x.to_string()));
        }
        if in_unit(&y) {
            let g_power = if x < gamma { 1 } else { 2 };
            return Ok(FirstReturn { value: y, q_steps: steps, g_power });
        }
    }
    Err(DynamicsError::OutOfDomain(x.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// Minimal `k` with `g^k(gamma) < gamma`.
    NonMember(usize),
}

/// Membership of a rational `gamma` in the bifurcation set: `g^k(gamma) >= gamma` for all `k`.
pub fn bifurcation_member(s: u64, gamma: &Rational) -> Result<Membership, DynamicsError> {
    if gamma.is_negative() || gamma > &Rational::one() {
        return Err(DynamicsError::OutOfDomain(gamma.to_string()));
    }
    let q = gamma.denom().clone();
    let n0 = gamma.numer().clone();
    let sb = BigInt::from(s);
    let mut seen = HashSet::new();
    let mut n = n0.clone() % &q;
    if gamma == &Rational::one() {
        n = BigInt::zero();
        // g(1) is taken as g(0) = 0
        return Ok(if n < n0 { Membership::NonMember(1) } else { Membership::Member });
    }
    let mut k = 0usize;
    loop {
        k += 1;
        n = (&sb * (&q - &n)).mod_floor(&q);
        if n < n0 {
            return Ok(Membership::NonMember(k));
        }
        if !seen.insert(n.clone()) {
            return Ok(Membership::Member);
        }
    }
}

/// Where a matching interval ends: a finite field element or a half-line marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInfinity,
    Finite(FieldElement),
    PosInfinity,
}

impl Endpoint {
    pub fn finite(&self) -> Option<&FieldElement> {
        match self {
            Endpoint::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Endpoint::NegInfinity => f64::NEG_INFINITY,
            Endpoint::Finite(x) => x.to_f64(),
            Endpoint::PosInfinity => f64::INFINITY,
        }
    }

    fn below(&self, x: &FieldElement) -> bool {
        match self {
            Endpoint::NegInfinity => true,
            Endpoint::Finite(e) => e < x,
            Endpoint::PosInfinity => false,
        }
    }

    fn above(&self, x: &FieldElement) -> bool {
        match self {
            Endpoint::NegInfinity => false,
            Endpoint::Finite(e) => e > x,
            Endpoint::PosInfinity => true,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInfinity => f.write_str("-inf"),
            Endpoint::Finite(x) => write!(f, "{}", x),
            Endpoint::PosInfinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    StrictlyBelowGamma,
    StrictlyAboveGamma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub form: AffineForm,
    pub relation: Relation,
}

/// Orbit points as affine forms in the parameter, with the branch taken to
/// reach each one and the side conditions that keep those branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicOrbit {
    pub forms: Vec<(AffineForm, Branch)>,
    pub constraints: Vec<Constraint>,
}

impl SymbolicOrbit {
    pub fn branch_code(&self) -> Vec<Branch> {
        self.forms.iter().map(|(_, b)| *b).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingCertificate {
    pub kappa_minus: usize,
    pub kappa_plus: usize,
    pub delta: i64,
    pub matched_point: AffineForm,
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub neutral: bool,
    pub lower: SymbolicOrbit,
    pub upper: SymbolicOrbit,
}

impl MatchingCertificate {
    pub fn contains(&self, gamma: &FieldElement) -> bool {
        self.lo.below(gamma) && self.hi.above(gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("no matching within {0} steps per side")]
    NoMatchWithinBudget(usize),
    #[error("{side:?} orbit lands on the discontinuity at step {step} before matching")]
    StructuralFailure { side: Side, step: usize },
}

struct Track {
    values: Vec<FieldElement>,
    sides: Vec<Side>,
    exps: Vec<u32>,
    branches: Vec<Branch>,
    by_value: HashMap<FieldElement, Vec<usize>>,
    states: HashMap<(FieldElement, Side), usize>,
    cycle: Option<(usize, usize)>,
}

impl Track {
    fn new(gamma: &FieldElement, side: Side) -> Self {
        let mut states = HashMap::new();
        states.insert((gamma.clone(), side), 0);
        Track {
            values: vec![gamma.clone()],
            sides: vec![side],
            exps: vec![0],
            branches: Vec::new(),
            by_value: HashMap::new(),
            states,
            cycle: None,
        }
    }

    fn advance(&mut self, slope: &SlopeSpec, gamma: &FieldElement) {
        let t = self.values.len() - 1;
        let (v, side) = (&self.values[t], self.sides[t]);
        let (nv, nside, branch) = if takes_left(gamma, v, side) {
            (apply_branch(&slope.s, Branch::L, v), side, Branch::L)
        } else {
            (apply_branch(&slope.s, Branch::R, v), side.flip(), Branch::R)
        };
        let ne = self.exps[t] + (branch == Branch::R) as u32;
        let idx = t + 1;
        if self.cycle.is_none() {
            match self.states.get(&(nv.clone(), nside)) {
                Some(&start) => {
                    self.cycle = Some((start, idx - start));
                    self.states = HashMap::new();
                }
                None => {
                    self.states.insert((nv.clone(), nside), idx);
                }
            }
        }
        self.by_value.entry(nv.clone()).or_default().push(idx);
        self.values.push(nv);
        self.sides.push(nside);
        self.exps.push(ne);
        self.branches.push(branch);
    }

    fn max_preperiod_exponent(&self) -> Option<u32> {
        let (start, _) = self.cycle?;
        if start >= 2 {
            Some(self.exps[start - 1])
        } else {
            None
        }
    }
}

/// Whether two eventually periodic orbits can still meet with equal
/// exponents somewhere inside their cycles.
fn cycles_can_match(lo: &Track, up: &Track) -> bool {
    let (al, pl) = lo.cycle.unwrap();
    let (au, pu) = up.cycle.unwrap();
    let ml = (lo.exps[al + pl] - lo.exps[al]) as i64;
    let mu = (up.exps[au + pu] - up.exps[au]) as i64;
    let g = ml.gcd(&mu).max(1);
    let mut upper_by_value: HashMap<&FieldElement, Vec<i64>> = HashMap::new();
    for r in 0..pu {
        upper_by_value.entry(&up.values[au + r]).or_default().push(up.exps[au + r] as i64);
    }
    for r in 0..pl {
        if let Some(es) = upper_by_value.get(&lo.values[al + r]) {
            let el = lo.exps[al + r] as i64;
            if es.iter().any(|eu| (eu - el).rem_euclid(g) == 0) {
                return true;
            }
        }
    }
    false
}

/// `values[j]` is the numeric orbit point after `j` steps; it fixes each
/// branch relation without evaluating the (fast-growing) forms.
fn symbolic_orbit(
    slope: &SlopeSpec,
    gamma: &FieldElement,
    branches: &[Branch],
    values: &[FieldElement],
    kappa: usize,
) -> SymbolicOrbit {
    let one = FieldElement::one();
    let k = &one + &slope.s;
    let minus_s = -&slope.s;
    let mut form = AffineForm::gamma();
    let mut forms = Vec::with_capacity(kappa);
    let mut constraints = Vec::new();
    for (j, &b) in branches.iter().take(kappa).enumerate() {
        form = match b {
            Branch::L => form.add_const(&one),
            Branch::R => form.affine_image(&k, &minus_s),
        };
        if j + 1 < kappa {
            let relation = if values[j + 1] < *gamma {
                Relation::StrictlyBelowGamma
            } else {
                Relation::StrictlyAboveGamma
            };
            constraints.push(Constraint { form: form.clone(), relation });
        }
        forms.push((form.clone(), b));
    }
    SymbolicOrbit { forms, constraints }
}

/// Offset `boundary - gamma` of one constraint, as an unreduced fraction
/// when everything is rational.
enum Offset {
    Frac(BigInt, BigInt),
    Field(FieldElement),
}

impl Offset {
    // form(t) - t = (1 - c1)(boundary - t), evaluated at gamma
    fn new(c: &Constraint, value: &FieldElement, gamma: &FieldElement) -> Self {
        let one = FieldElement::one();
        let gap = value - gamma;
        let den = &one - &c.form.c1;
        match (gap.as_rational(), den.as_rational()) {
            (Some(g), Some(d)) => {
                let (mut n, mut m) = (g.numer() * d.denom(), g.denom() * d.numer());
                if m.is_negative() {
                    (n, m) = (-n, -m);
                }
                Offset::Frac(n, m)
            }
            _ => Offset::Field(gap.checked_div(&den).expect("c1 != 1")),
        }
    }

    fn sign(&self) -> i8 {
        match self {
            Offset::Frac(n, _) => n.signum().to_i8().unwrap_or(0),
            Offset::Field(x) => x.sign(),
        }
    }

    fn value(self) -> FieldElement {
        match self {
            Offset::Frac(n, m) => FieldElement::Rational(Rational::new(n, m)),
            Offset::Field(x) => x,
        }
    }

    fn less(&self, other: &Offset) -> bool {
        match (self, other) {
            (Offset::Frac(a, b), Offset::Frac(c, d)) => a * d < c * b,
            _ => self.clone_value() < other.clone_value(),
        }
    }

    fn clone_value(&self) -> FieldElement {
        match self {
            Offset::Frac(n, m) => FieldElement::Rational(Rational::new(n.clone(), m.clone())),
            Offset::Field(x) => x.clone(),
        }
    }
}

/// Solves the branch constraints of both orbits for the maximal open
/// interval around `gamma` on which they persist.
fn solve_interval(gamma: &FieldElement, orbits: [(&SymbolicOrbit, &[FieldElement]); 2]) -> (Endpoint, Endpoint) {
    let one = FieldElement::one();
    let mut lo: Option<Offset> = None;
    let mut hi: Option<Offset> = None;
    for (orbit, values) in orbits {
        for (j, c) in orbit.constraints.iter().enumerate() {
            if c.form.c1 == one {
                continue;
            }
            let off = Offset::new(c, &values[j + 1], gamma);
            if off.sign() > 0 {
                if hi.as_ref().is_none_or(|h| off.less(h)) {
                    hi = Some(off);
                }
            } else if lo.as_ref().is_none_or(|l| l.less(&off)) {
                lo = Some(off);
            }
        }
    }
    let at = |o: Offset| Endpoint::Finite(gamma + &o.value());
    (lo.map_or(Endpoint::NegInfinity, at), hi.map_or(Endpoint::PosInfinity, at))
}

/// Detects matching of the two one-sided orbits of the discontinuity and
/// solves for the interval on which the same matching condition holds.
pub fn detect_matching(
    slope: &SlopeSpec,
    gamma: &FieldElement,
    budget: usize,
) -> Result<MatchingCertificate, MatchingError> {
    let mut lo = Track::new(gamma, Side::Below);
    let mut up = Track::new(gamma, Side::Above);
    let mut cycles_checked = false;
    let mut cycles_compatible = true;
    let mut found = None;
    for t in 1..=budget {
        lo.advance(slope, gamma);
        up.advance(slope, gamma);
        let mut best: Option<(usize, usize)> = None;
        let mut offer = |i: usize, j: usize| {
            let key = (i.max(j), i + j, i);
            if best.is_none_or(|(bi, bj)| key < (bi.max(bj), bi + bj, bi)) {
                best = Some((i, j));
            }
        };
        if let Some(js) = up.by_value.get(&lo.values[t]) {
            for &j in js {
                if up.exps[j] == lo.exps[t] {
                    offer(t, j);
                }
            }
        }
        if let Some(is) = lo.by_value.get(&up.values[t]) {
            for &i in is {
                if i < t && lo.exps[i] == up.exps[t] {
                    offer(i, t);
                }
            }
        }
        if best.is_some() {
            found = best;
            break;
        }
        if lo.cycle.is_some() && up.cycle.is_some() {
            if !cycles_checked {
                cycles_compatible = cycles_can_match(&lo, &up);
                cycles_checked = true;
            }
            if !cycles_compatible {
                let lower_done = lo.max_preperiod_exponent().is_none_or(|e| up.exps[t] > e);
                let upper_done = up.max_preperiod_exponent().is_none_or(|e| lo.exps[t] > e);
                if lower_done && upper_done {
                    return Err(MatchingError::NoMatchWithinBudget(budget));
                }
            }
        }
    }
    let Some((km, kp)) = found else {
        return Err(MatchingError::NoMatchWithinBudget(budget));
    };
    for (track, side, k) in [(&lo, Side::Below, km), (&up, Side::Above, kp)] {
        if let Some(step) = (1..k).find(|&j| &track.values[j] == gamma) {
            return Err(MatchingError::StructuralFailure { side, step });
        }
    }
    let lower = symbolic_orbit(slope, gamma, &lo.branches, &lo.values, km);
    let upper = symbolic_orbit(slope, gamma, &up.branches, &up.values, kp);
    let matched_point = lower.forms[km - 1].0.clone();
    debug_assert_eq!(matched_point, upper.forms[kp - 1].0);
    let (l, h) = solve_interval(gamma, [(&lower, &lo.values), (&upper, &up.values)]);
    let delta = kp as i64 - km as i64;
    Ok(MatchingCertificate {
        kappa_minus: km,
        kappa_plus: kp,
        delta,
        matched_point,
        lo: l,
        hi: h,
        neutral: delta == 0,
        lower,
        upper,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrematchingSet {
    pub points: Vec<AffineForm>,
}

/// Interior orbit points before matching, sorted by their value at `gamma`.
pub fn prematching_points(cert: &MatchingCertificate, gamma: &FieldElement) -> PrematchingSet {
    let mut points: Vec<(FieldElement, AffineForm)> = cert.lower.forms[..cert.kappa_minus - 1]
        .iter()
        .chain(cert.upper.forms[..cert.kappa_plus - 1].iter())
        .map(|(f, _)| (f.eval(gamma), f.clone()))
        .collect();
    points.sort_by(|a, b| a.0.cmp(&b.0));
    PrematchingSet { points: points.into_iter().map(|(_, f)| f).collect() }
}

/// The full side-tagged orbit of `(gamma, side)` up to its first repeated
/// state, or `None` if no repeat happens within `budget` steps.
pub fn sided_orbit(slope: &SlopeSpec, gamma: &FieldElement, side: Side, budget: usize) -> Option<Vec<QStep>> {
    let mut seen = HashSet::new();
    let mut x = SidedPoint::new(gamma.clone(), side);
    seen.insert(x.clone());
    let mut out = Vec::new();
    for _ in 0..budget {
        let step = q_step(slope, gamma, &x);
        x = step.point.clone();
        out.push(step);
        if !seen.insert(x.clone()) {
            return Some(out);
        }
    }
    None
}

/// Detects matching on a grid of rational parameters in `[lo, hi]` and
/// returns the distinct certificates found, ordered by left endpoint.
pub fn grid_search(
    slope: &SlopeSpec,
    lo: &Rational,
    hi: &Rational,
    grid: usize,
    budget: usize,
) -> Vec<(FieldElement, MatchingCertificate)> {
    let mut seen: HashSet<(Endpoint, Endpoint)> = HashSet::new();
    let mut out = Vec::new();
    let n = BigInt::from(grid as u64 + 1);
    for k in 1..=grid {
        let t = Rational::new(BigInt::from(k as u64), n.clone());
        let gamma = FieldElement::Rational(lo + &(&(hi - lo) * &t));
        if let Ok(cert) = detect_matching(slope, &gamma, budget) {
            if seen.insert((cert.lo.clone(), cert.hi.clone())) {
                out.push((gamma, cert));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn fe(n: i64, d: i64) -> FieldElement {
        FieldElement::ratio(n, d)
    }

    #[test]
    fn q_step_examples() {
        let s2 = SlopeSpec::integer(2);
        let g = fe(4, 5);
        let st = q_step(&s2, &g, &SidedPoint::new(fe(1, 1), Side::Exact));
        assert_eq!(st.point, SidedPoint::new(fe(1, 1), Side::Exact));
        assert_eq!(st.branch, Branch::R);
        assert_eq!(st.factor(&s2), FieldElement::from_int(-2));
        let st = q_step(&s2, &g, &SidedPoint::new(g.clone(), Side::Below));
        assert_eq!(st.point, SidedPoint::new(fe(9, 5), Side::Below));
        assert_eq!(st.branch, Branch::L);
        let st = q_step(&s2, &g, &SidedPoint::new(fe(9, 5), Side::Below));
        assert_eq!(st.point, SidedPoint::new(fe(-3, 5), Side::Above));
        assert_eq!(st.branch, Branch::R);
    }

    #[test]
    fn g_step_examples() {
        let s2 = SlopeSpec::integer(2);
        assert_eq!(g_step(&s2, &fe(1, 2)).unwrap(), fe(0, 1));
        assert_eq!(g_step(&s2, &fe(1, 3)).unwrap(), fe(1, 3));
        assert_eq!(g_step(&s2, &fe(2, 3)).unwrap(), fe(2, 3));
        assert!(g_step(&s2, &fe(1, 1)).is_err());
    }

    #[test]
    fn first_return_examples() {
        let s2 = SlopeSpec::integer(2);
        let r = first_return(&s2, &fe(1, 8), &fe(1, 16)).unwrap();
        assert_eq!((r.value, r.g_power), (fe(7, 8), 1));
        let r = first_return(&s2, &fe(1, 8), &fe(3, 4)).unwrap();
        assert_eq!(r.q_steps, 2);
        assert_eq!(r.g_power, 2);
        assert!(first_return(&s2, &fe(1, 2), &fe(1, 2)).is_err());
        assert!(first_return(&s2, &fe(1, 2), &fe(0, 1)).is_err());
    }

    #[test]
    fn detect_examples() {
        let s2 = SlopeSpec::integer(2);
        let c = detect_matching(&s2, &fe(-1, 2), DEFAULT_BUDGET).unwrap();
        assert_eq!((c.kappa_minus, c.kappa_plus, c.delta), (3, 6, 3));
        assert_eq!(c.matched_point, AffineForm::new(FieldElement::one(), FieldElement::from_int(4)));
        assert_eq!((c.lo.clone(), c.hi.clone()), (Endpoint::NegInfinity, Endpoint::Finite(fe(0, 1))));

        let c = detect_matching(&s2, &fe(4, 5), DEFAULT_BUDGET).unwrap();
        assert_eq!((c.kappa_minus, c.kappa_plus, c.delta), (4, 1, -3));
        assert_eq!(c.matched_point, AffineForm::new(FieldElement::from_int(3), FieldElement::from_int(-2)));
        assert_eq!((c.lo.clone(), c.hi.clone()), (Endpoint::Finite(fe(2, 3)), Endpoint::PosInfinity));

        let c = detect_matching(&s2, &fe(1, 2), DEFAULT_BUDGET).unwrap();
        assert_eq!((c.kappa_minus, c.kappa_plus, c.delta), (4, 4, 0));
        assert!(c.neutral);
        assert_eq!((c.lo.clone(), c.hi.clone()), (Endpoint::Finite(fe(1, 3)), Endpoint::Finite(fe(2, 3))));

        assert_eq!(detect_matching(&s2, &fe(1, 3), DEFAULT_BUDGET), Err(MatchingError::NoMatchWithinBudget(200)));
    }

    #[test]
    fn prematching_examples() {
        let s2 = SlopeSpec::integer(2);
        let g = fe(-1, 5);
        let c = detect_matching(&s2, &g, DEFAULT_BUDGET).unwrap();
        let pm = prematching_points(&c, &g);
        let af = |a: i64, b: i64| AffineForm::new(FieldElement::from_int(a), FieldElement::from_int(b));
        let expected = [af(-3, 4), af(-2, 4), af(-1, 4), af(0, 4), af(1, 1), af(1, -2), af(3, -2)];
        assert_eq!(pm.points, expected);
        let c = detect_matching(&s2, &fe(1, 2), DEFAULT_BUDGET).unwrap();
        assert_eq!(prematching_points(&c, &fe(1, 2)).points.len(), 6);
    }

    #[test]
    fn membership_examples() {
        assert_eq!(bifurcation_member(2, &rat(1, 3)), Ok(Membership::Member));
        assert_eq!(bifurcation_member(2, &rat(1, 2)), Ok(Membership::NonMember(1)));
        assert_eq!(bifurcation_member(2, &rat(2, 9)), Ok(Membership::Member));
        assert_eq!(bifurcation_member(2, &int(0)), Ok(Membership::Member));
    }

    #[test]
    fn conjugacy_examples() {
        let s2 = SlopeSpec::integer(2);
        assert_eq!(conjugate_to_g(&fe(1, 6), &s2).0, FieldElement::from_int(5));
        assert_eq!(conjugate_to_g(&fe(2, 3), &s2).0, FieldElement::from_int(2));
        assert_eq!(conjugate_to_g(&fe(1, 1), &s2).0, FieldElement::from_int(0));
    }

    #[test]
    fn slope_parsing() {
        assert_eq!(SlopeSpec::parse("int:2").unwrap(), SlopeSpec::integer(2));
        let q = SlopeSpec::parse("quad:1+1*sqrt(5)").unwrap();
        assert_eq!(q.kind, SlopeKind::Quadratic(5));
        assert!(SlopeSpec::parse("int:3/2").is_err());
        assert!(SlopeSpec::parse("2").is_err());
        assert_eq!(SlopeSpec::parse(&q.to_string()).unwrap(), q);
    }
}
