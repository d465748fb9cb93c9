//! Exact arithmetic: rationals, real quadratic surds `a + b*sqrt(d)` and
//! affine forms `c0 + c1*gamma` in the parameter.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot mix sqrt({0}) and sqrt({1}) in one computation")]
    FieldMismatch(u64, u64),
    #[error("cannot parse number `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeRejection {
    #[error("slope {0} is not an algebraic integer (a rational slope must be an integer)")]
    NotAlgebraicInteger(String),
    #[error("slope {0} must be greater than 1 (integer slopes must be at least 2)")]
    SlopeTooSmall(String),
    #[error("radicand {0} must be a squarefree integer greater than 1")]
    BadRadicand(u64),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone)]
pub struct QuadraticValue {
    pub a: Rational,
    pub b: Rational,
    pub d: u64,
}

/// An element of Q or of Q(sqrt(d)).  Equality, hashing and ordering are by
/// real value, so `Rational(1)` equals `Quadratic { a: 1, b: 0, .. }`.
#[derive(Debug, Clone)]
pub enum FieldElement {
    Rational(Rational),
    Quadratic(QuadraticValue),
}

pub fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        FieldElement::Rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        FieldElement::Rational(int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        FieldElement::Rational(Rational::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        FieldElement::Rational(rat(n, d))
    }

    pub fn quadratic(a: Rational, b: Rational, d: u64) -> Self {
        FieldElement::Quadratic(QuadraticValue { a, b, d })
    }

    /// Rational part, irrational coefficient and radicand (`d = 0` for rationals).
    pub fn parts(&self) -> (Rational, Rational, u64) {
        match self {
            FieldElement::Rational(r) => (r.clone(), Rational::zero(), 0),
            FieldElement::Quadratic(q) => (q.a.clone(), q.b.clone(), q.d),
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        match self {
            FieldElement::Rational(_) => None,
            FieldElement::Quadratic(q) => Some(q.d),
        }
    }

    /// The rational value, if the element has no irrational part.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            FieldElement::Quadratic(q) if q.b.is_zero() => Some(&q.a),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Quadratic(q) => q.a.is_zero() && q.b.is_zero(),
        }
    }

    pub fn sign(&self) -> i8 {
        fe_sign(self)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            FieldElement::Rational(r) => rational_to_f64(r),
            FieldElement::Quadratic(q) => {
                rational_to_f64(&q.a) + rational_to_f64(&q.b) * (q.d as f64).sqrt()
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        match self {
            FieldElement::Rational(r) => r.floor().to_integer(),
            FieldElement::Quadratic(_) => {
                let approx = self.to_f64().floor();
                let mut k = BigInt::from(approx as i64);
                // correct the float guess exactly
                loop {
                    let kf = FieldElement::from_bigint(k.clone());
                    if (self - &kf).sign() < 0 {
                        k -= 1;
                        continue;
                    }
                    let k1 = FieldElement::from_bigint(&k + 1);
                    if (self - &k1).sign() >= 0 {
                        k += 1;
                        continue;
                    }
                    return k;
                }
            }
        }
    }

    /// Same-field element built from an integer, keeping the radicand tag.
    pub fn lift_int(&self, n: i64) -> Self {
        match self {
            FieldElement::Rational(_) => FieldElement::from_int(n),
            FieldElement::Quadratic(q) => FieldElement::quadratic(int(n), Rational::zero(), q.d),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        fe_arith(self, other, ArithOp::Div)
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        FieldElement::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.lift_int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled quotient for huge components
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d).max(0) as u64;
        let scaled = r / Rational::from_integer(BigInt::one() << shift);
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

/// Exact sign of `a + b*sqrt(d)`.
pub fn fe_sign(x: &FieldElement) -> i8 {
    match x {
        FieldElement::Rational(r) => sign_of(r),
        FieldElement::Quadratic(q) => {
            let sa = sign_of(&q.a);
            let sb = sign_of(&q.b);
            if sb == 0 {
                return sa;
            }
            if sa == 0 || sa == sb {
                return sb;
            }
            let a2 = &q.a * &q.a;
            let b2d = &q.b * &q.b * Rational::from_integer(BigInt::from(q.d));
            match a2.cmp(&b2d) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => 0,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn common_d(x: &FieldElement, y: &FieldElement) -> Result<u64, ExactError> {
    match (x, y) {
        (FieldElement::Quadratic(p), FieldElement::Quadratic(q)) => {
            if p.d == q.d || q.b.is_zero() {
                Ok(p.d)
            } else if p.b.is_zero() {
                Ok(q.d)
            } else {
                Err(ExactError::FieldMismatch(p.d, q.d))
            }
        }
        (FieldElement::Quadratic(p), _) => Ok(p.d),
        (_, FieldElement::Quadratic(q)) => Ok(q.d),
        _ => Ok(0),
    }
}

/// Exact field arithmetic.
pub fn fe_arith(x: &FieldElement, y: &FieldElement, op: ArithOp) -> Result<FieldElement, ExactError> {
    if let (FieldElement::Rational(a), FieldElement::Rational(b)) = (x, y) {
        // Ratio always reduces, and gcd on long integers is the bottleneck
        let (ai, bi) = (a.is_integer(), b.is_integer());
        if ai && bi && op != ArithOp::Div {
            let (m, n) = (a.numer(), b.numer());
            return Ok(FieldElement::Rational(Rational::from_integer(match op {
                ArithOp::Add => m + n,
                ArithOp::Sub => m - n,
                _ => m * n,
            })));
        }
        if (ai || bi) && matches!(op, ArithOp::Add | ArithOp::Sub) {
            let (k, f) = if ai { (a, b) } else { (b, a) };
            let kd = k.numer() * f.denom();
            let numer = match (op, ai) {
                (ArithOp::Add, _) => kd + f.numer(),
                (_, true) => kd - f.numer(),
                _ => f.numer() - kd,
            };
            return Ok(FieldElement::Rational(Rational::new_raw(numer, f.denom().clone())));
        }
        return Ok(FieldElement::Rational(match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => {
                if b.is_zero() {
                    return Err(ExactError::DivisionByZero);
                }
                a / b
            }
        }));
    }
    let d = common_d(x, y)?;
    let (a1, b1, _) = x.parts();
    let (a2, b2, _) = y.parts();
    let dd = Rational::from_integer(BigInt::from(d));
    let (a, b) = match op {
        ArithOp::Add => (a1 + a2, b1 + b2),
        ArithOp::Sub => (a1 - a2, b1 - b2),
        ArithOp::Mul => (&a1 * &a2 + &b1 * &b2 * &dd, &a1 * &b2 + &b1 * &a2),
        ArithOp::Div => {
            let norm = &a2 * &a2 - &b2 * &b2 * &dd;
            if norm.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            // (a1 + b1 r)(a2 - b2 r) / norm
            let a = (&a1 * &a2 - &b1 * &b2 * &dd) / &norm;
            let b = (&b1 * &a2 - &a1 * &b2) / &norm;
            (a, b)
        }
    };
    Ok(FieldElement::quadratic(a, b, d))
}

macro_rules! impl_op {
    ($tr:ident, $m:ident, $op:expr) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                fe_arith(self, rhs, $op).expect("field arithmetic")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                fe_arith(&self, &rhs, $op).expect("field arithmetic")
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                fe_arith(&self, rhs, $op).expect("field arithmetic")
            }
        }
    };
}

impl_op!(Add, add, ArithOp::Add);
impl_op!(Sub, sub, ArithOp::Sub);
impl_op!(Mul, mul, ArithOp::Mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Quadratic(q) => FieldElement::quadratic(-&q.a, -&q.b, q.d),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a == b,
            _ => {
                let (a1, b1, _) = self.parts();
                let (a2, b2, _) = other.parts();
                a1 == a2 && b1 == b2
            }
        }
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            FieldElement::Rational(r) => hash_reduced(r, state),
            FieldElement::Quadratic(q) => {
                hash_reduced(&q.a, state);
                if !q.b.is_zero() {
                    hash_reduced(&q.b, state);
                }
            }
        }
    }
}

// Ratio's own Hash walks a continued fraction; ours are always reduced
fn hash_reduced<H: Hasher>(r: &Rational, state: &mut H) {
    r.numer().hash(state);
    r.denom().hash(state);
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (FieldElement::Rational(a), FieldElement::Rational(b)) = (self, other) {
            return a.cmp(b);
        }
        (self - other).sign().cmp(&0)
    }
}

impl From<Rational> for FieldElement {
    fn from(r: Rational) -> Self {
        FieldElement::Rational(r)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => write!(f, "{}", r),
            FieldElement::Quadratic(q) => {
                if q.b.is_zero() {
                    write!(f, "{}", q.a)
                } else if q.b.is_negative() {
                    write!(f, "{}-{}*sqrt({})", q.a, -&q.b, q.d)
                } else {
                    write!(f, "{}+{}*sqrt({})", q.a, q.b, q.d)
                }
            }
        }
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.75`.
pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let t = text.trim();
    let err = || ExactError::Parse(text.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{}{}", if whole_abs.is_empty() { "0" } else { whole_abs }, frac);
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Parses a rational or a surd written `a+c*sqrt(d)` / `a-c*sqrt(d)` /
/// `c*sqrt(d)`, with `a` and `c` in the syntax of [`parse_rational`].
pub fn parse_field_element(text: &str) -> Result<FieldElement, ExactError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || ExactError::Parse(text.to_string());
    let Some(pos) = t.find("sqrt(") else {
        return Ok(FieldElement::Rational(parse_rational(&t)?));
    };
    let inner = t[pos + 5..].strip_suffix(')').ok_or_else(err)?;
    let d: u64 = inner.parse().map_err(|_| err())?;
    let head = &t[..pos];
    let head = head.strip_suffix('*').unwrap_or(head);
    // split the head into rational part and coefficient at the last sign
    let split = head
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !head[..i].ends_with(['/', 'e']))
        .map(|(i, _)| i)
        .last();
    let (a, c) = match split {
        Some(i) => (parse_rational(&head[..i])?, &head[i..]),
        None => (Rational::zero(), head),
    };
    let c = match c {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        s => parse_rational(s.trim_start_matches('+'))?,
    };
    Ok(FieldElement::quadratic(a, c, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeKind {
    Integer(u64),
    Quadratic(u64),
}

/// Accepts integers >= 2 and real quadratic algebraic integers > 1.
pub fn validate_slope(s: &FieldElement) -> Result<SlopeKind, SlopeRejection> {
    let shown = s.to_string();
    if let Some(r) = s.as_rational() {
        if !r.is_integer() {
            return Err(SlopeRejection::NotAlgebraicInteger(shown));
        }
        let n = r.to_integer();
        if n < BigInt::from(2) {
            return Err(SlopeRejection::SlopeTooSmall(shown));
        }
        let n = n.to_u64().ok_or(SlopeRejection::SlopeTooSmall(shown))?;
        return Ok(SlopeKind::Integer(n));
    }
    let (a, b, d) = s.parts();
    if !is_squarefree(d) {
        return Err(SlopeRejection::BadRadicand(d));
    }
    // minimal polynomial x^2 - 2a x + (a^2 - b^2 d)
    let trace = &a * int(2);
    let norm = &a * &a - &b * &b * Rational::from_integer(BigInt::from(d));
    if !trace.is_integer() || !norm.is_integer() {
        return Err(SlopeRejection::NotAlgebraicInteger(shown));
    }
    if (s - &FieldElement::one()).sign() <= 0 {
        return Err(SlopeRejection::SlopeTooSmall(shown));
    }
    Ok(SlopeKind::Quadratic(d))
}

/// The function `gamma -> c0 + c1*gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub c0: FieldElement,
    pub c1: FieldElement,
}

impl AffineForm {
    pub fn new(c0: FieldElement, c1: FieldElement) -> Self {
        AffineForm { c0, c1 }
    }

    /// The identity form `gamma`.
    pub fn gamma() -> Self {
        AffineForm::new(FieldElement::zero(), FieldElement::one())
    }

    pub fn constant(c: FieldElement) -> Self {
        AffineForm::new(c, FieldElement::zero())
    }

    pub fn eval(&self, gamma: &FieldElement) -> FieldElement {
        &self.c0 + &(&self.c1 * gamma)
    }

    pub fn add_const(&self, c: &FieldElement) -> Self {
        AffineForm::new(&self.c0 + c, self.c1.clone())
    }

    /// `k + m * self`
    pub fn affine_image(&self, k: &FieldElement, m: &FieldElement) -> Self {
        AffineForm::new(k + &(m * &self.c0), m * &self.c1)
    }

    pub fn sub(&self, other: &AffineForm) -> AffineForm {
        AffineForm::new(&self.c0 - &other.c0, &self.c1 - &other.c1)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*gamma", self.c0, self.c1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineSolution {
    Unique(FieldElement),
    Identical,
    NoSolution,
}

/// Solves `p(gamma) = q(gamma)`.
pub fn affine_solve(p: &AffineForm, q: &AffineForm) -> AffineSolution {
    let diff = p.sub(q);
    if diff.c1.is_zero() {
        if diff.c0.is_zero() {
            AffineSolution::Identical
        } else {
            AffineSolution::NoSolution
        }
    } else {
        AffineSolution::Unique((-&diff.c0).checked_div(&diff.c1).expect("nonzero slope"))
    }
}

/// `n / s^m` helper used for s-adic rationals.
pub fn sadic(n: BigInt, s: u64, m: u32) -> Rational {
    Rational::new(n, num_traits::pow(BigInt::from(s), m as usize))
}

/// The rational of smallest denominator in the open interval `(a, b)`;
/// `b = None` stands for `+inf`.
pub fn simplest_between(a: &Rational, b: Option<&Rational>) -> Rational {
    let fl = a.floor();
    let next = &fl + Rational::one();
    match b {
        None => next,
        Some(b) if &next < b => {
            if a.is_negative() && b.is_positive() { Rational::zero() } else { next }
        }
        Some(b) => {
            let lo = (b - &fl).recip();
            let hi = if a == &fl { None } else { Some((a - &fl).recip()) };
            fl + simplest_between(&lo, hi.as_ref()).recip()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt5(a: i64, b: i64) -> FieldElement {
        FieldElement::quadratic(int(a), int(b), 5)
    }

    #[test]
    fn sign_examples() {
        assert_eq!(fe_sign(&sqrt5(2, -1)), -1);
        let x = FieldElement::quadratic(int(-2), rat(6, 5), 5);
        assert_eq!(fe_sign(&x), 1);
        assert_eq!(fe_sign(&sqrt5(0, 0)), 0);
    }

    #[test]
    fn arithmetic_examples() {
        let s = sqrt5(1, 1);
        assert_eq!(&s * &s, sqrt5(6, 2));
        assert!((&s - &s).is_zero());
        let inv = s.recip().unwrap();
        assert_eq!(inv, FieldElement::quadratic(rat(-1, 4), rat(1, 4), 5));
        assert_eq!(&inv * &s, FieldElement::one());
        assert_eq!(
            fe_arith(&s, &FieldElement::zero(), ArithOp::Div),
            Err(ExactError::DivisionByZero)
        );
    }

    #[test]
    fn affine_solve_examples() {
        let p = AffineForm::new(FieldElement::one(), FieldElement::from_int(-2));
        assert_eq!(affine_solve(&p, &AffineForm::gamma()), AffineSolution::Unique(FieldElement::ratio(1, 3)));
        let q = AffineForm::new(FieldElement::one(), FieldElement::one());
        assert_eq!(affine_solve(&q, &q), AffineSolution::Identical);
        assert_eq!(affine_solve(&AffineForm::gamma(), &q), AffineSolution::NoSolution);
    }

    #[test]
    fn slope_validation() {
        assert!(matches!(
            validate_slope(&FieldElement::ratio(3, 2)),
            Err(SlopeRejection::NotAlgebraicInteger(_))
        ));
        let golden = FieldElement::quadratic(rat(1, 2), rat(1, 2), 5);
        assert_eq!(validate_slope(&golden), Ok(SlopeKind::Quadratic(5)));
        assert_eq!(validate_slope(&FieldElement::from_int(2)), Ok(SlopeKind::Integer(2)));
        assert!(matches!(validate_slope(&FieldElement::from_int(1)), Err(SlopeRejection::SlopeTooSmall(_))));
        let bad = FieldElement::quadratic(rat(1, 3), int(1), 5);
        assert!(matches!(validate_slope(&bad), Err(SlopeRejection::NotAlgebraicInteger(_))));
        let small = FieldElement::quadratic(int(-1), int(1), 2);
        assert!(matches!(validate_slope(&small), Err(SlopeRejection::SlopeTooSmall(_))));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("2/3").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-0.75").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_field_element("1+1*sqrt(5)").unwrap(), sqrt5(1, 1));
        assert_eq!(
            parse_field_element("1/2+1/2*sqrt(5)").unwrap(),
            FieldElement::quadratic(rat(1, 2), rat(1, 2), 5)
        );
        assert_eq!(parse_field_element("-4+2*sqrt(5)").unwrap(), sqrt5(-4, 2));
        assert_eq!(parse_field_element("-2-6/5*sqrt(5)").unwrap(), FieldElement::quadratic(int(-2), rat(-6, 5), 5));
        assert_eq!(parse_field_element("sqrt(5)").unwrap(), sqrt5(0, 1));
        for x in [sqrt5(-4, 2), FieldElement::quadratic(int(-2), rat(6, 5), 5), FieldElement::ratio(-3, 7)] {
            assert_eq!(parse_field_element(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn floor_of_surds() {
        assert_eq!(sqrt5(0, 1).floor(), BigInt::from(2));
        assert_eq!(sqrt5(-3, 1).floor(), BigInt::from(-1));
        assert_eq!(sqrt5(4, 0).floor(), BigInt::from(4));
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&rat(1, 3), Some(&rat(2, 3))), rat(1, 2));
        assert!(simplest_between(&rat(125, 1152), Some(&rat(1, 9))) > rat(125, 1152));
        assert_eq!(simplest_between(&rat(-1, 2), Some(&rat(1, 3))), rat(0, 1));
        assert_eq!(simplest_between(&rat(2, 1), None), rat(3, 1));
        assert_eq!(simplest_between(&rat(7, 33), Some(&rat(2, 9))), rat(3, 14));
    }
}
