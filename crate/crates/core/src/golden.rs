//! Exact arithmetic in the quadratic field Q(τ), τ = (1 + √5)/2.
//!
//! Every element is stored as `rat + gold·τ` with both coefficients reduced
//! rationals, so two equal field elements always have identical fields and
//! `==` is structural. Products are reduced with τ² = τ + 1.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Reduced arbitrary-precision fraction. `num_rational` keeps it in lowest
/// terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoldenError {
    #[error("division by zero in Q(tau)")]
    DivisionByZero,
    #[error("cannot parse golden number {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_int(n: &BigInt) -> Sign {
        if n.is_zero() {
            Sign::Zero
        } else if n.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// An element `rat + gold·τ` of Q(τ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GoldenNumber {
    rat: Rational,
    gold: Rational,
}

impl GoldenNumber {
    pub fn new(rat: Rational, gold: Rational) -> Self {
        GoldenNumber { rat, gold }
    }

    /// `(rat + gold·τ) / den` from integer parts.
    pub fn from_ints(rat: i64, gold: i64, den: i64) -> Self {
        let den = BigInt::from(den);
        GoldenNumber {
            rat: Rational::new(BigInt::from(rat), den.clone()),
            gold: Rational::new(BigInt::from(gold), den),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        GoldenNumber {
            rat: r,
            gold: Rational::zero(),
        }
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn tau() -> Self {
        GoldenNumber {
            rat: Rational::zero(),
            gold: Rational::one(),
        }
    }

    /// Coefficient of 1.
    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    /// Coefficient of τ.
    pub fn gold(&self) -> &Rational {
        &self.gold
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.gold.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.gold.is_zero()
    }

    pub fn is_integral_rational(&self) -> bool {
        self.gold.is_zero() && self.rat.is_integer()
    }

    /// Galois conjugation σ: τ ↦ 1 − τ.
    pub fn conj(&self) -> Self {
        GoldenNumber {
            rat: &self.rat + &self.gold,
            gold: -&self.gold,
        }
    }

    /// Field norm `x·σ(x) = rat² + rat·gold − gold²`.
    pub fn norm(&self) -> Rational {
        &self.rat * &self.rat + &self.rat * &self.gold - &self.gold * &self.gold
    }

    pub fn inv(&self) -> Result<Self, GoldenError> {
        if self.is_zero() {
            return Err(GoldenError::DivisionByZero);
        }
        // Nonzero elements of a field have nonzero norm.
        let n = self.norm();
        let c = self.conj();
        Ok(GoldenNumber {
            rat: c.rat / &n,
            gold: c.gold / n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, GoldenError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GoldenNumber {
            rat: &self.rat * r,
            gold: &self.gold * r,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact sign of the real number `rat + gold·(1 + √5)/2`.
    pub fn sign(&self) -> Sign {
        // Clear denominators: sign(x) = sign(d·x) for d > 0, then
        // 2·d·x = p + q·√5 with p = 2a + b, q = b for integers a, b.
        let den = num_integer::Integer::lcm(self.rat.denom(), self.gold.denom());
        let a = self.rat.numer() * (&den / self.rat.denom());
        let b = self.gold.numer() * (&den / self.gold.denom());
        let p = BigInt::from(2) * &a + &b;
        let q = b;
        let sp = Sign::of_int(&p);
        let sq = Sign::of_int(&q);
        match (sp, sq) {
            (Sign::Zero, s) | (s, Sign::Zero) => s,
            (s1, s2) if s1 == s2 => s1,
            _ => {
                // Opposite signs: the term with the larger magnitude wins.
                let p2 = &p * &p;
                let q2 = BigInt::from(5) * &q * &q;
                match p2.cmp(&q2) {
                    Ordering::Greater => sp,
                    Ordering::Less => sq,
                    // p² = 5q² has no nonzero integer solutions.
                    Ordering::Equal => unreachable!("sqrt(5) is irrational"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    /// Floating-point approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        self.rat.to_f64().unwrap_or(f64::NAN) + self.gold.to_f64().unwrap_or(f64::NAN) * tau
    }

    /// Least common denominator of both coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.rat.denom(), self.gold.denom())
    }
}

impl Default for GoldenNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for GoldenNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber {
            rat: &self.rat + &rhs.rat,
            gold: &self.gold + &rhs.gold,
        }
    }
}

impl<'a> Sub<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber {
            rat: &self.rat - &rhs.rat,
            gold: &self.gold - &rhs.gold,
        }
    }
}

impl<'a> Mul<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn mul(self, rhs: &GoldenNumber) -> GoldenNumber {
        // (a + bτ)(c + dτ) = ac + (ad + bc)τ + bd(τ + 1)
        let bd = &self.gold * &rhs.gold;
        GoldenNumber {
            rat: &self.rat * &rhs.rat + &bd,
            gold: &self.rat * &rhs.gold + &self.gold * &rhs.rat + bd,
        }
    }
}

impl Neg for &GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber {
            rat: -&self.rat,
            gold: -&self.gold,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GoldenNumber> for GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: GoldenNumber) -> GoldenNumber { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a GoldenNumber> for GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: &GoldenNumber) -> GoldenNumber { (&self).$m(rhs) }
        }
        impl<'a> $tr<GoldenNumber> for &'a GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: GoldenNumber) -> GoldenNumber { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        -&self
    }
}

impl AddAssign<&GoldenNumber> for GoldenNumber {
    fn add_assign(&mut self, rhs: &GoldenNumber) {
        self.rat += &rhs.rat;
        self.gold += &rhs.gold;
    }
}

impl std::iter::Sum for GoldenNumber {
    fn sum<I: Iterator<Item = GoldenNumber>>(iter: I) -> Self {
        iter.fold(GoldenNumber::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for GoldenNumber {
    fn from(n: i64) -> Self {
        GoldenNumber::from_integer(n)
    }
}

impl From<Rational> for GoldenNumber {
    fn from(r: Rational) -> Self {
        GoldenNumber::from_rational(r)
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders as `a/b + c/d*tau`; unit τ-coefficients print as `tau`.
impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gold_term = |g: &Rational| {
            if g.is_one() {
                "tau".to_string()
            } else {
                format!("{}*tau", fmt_rational(g))
            }
        };
        match (self.rat.is_zero(), self.gold.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.rat)),
            (true, false) => {
                if self.gold.is_negative() {
                    write!(f, "-{}", gold_term(&-&self.gold))
                } else {
                    write!(f, "{}", gold_term(&self.gold))
                }
            }
            (false, false) => {
                let op = if self.gold.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{} {} {}",
                    fmt_rational(&self.rat),
                    op,
                    gold_term(&self.gold.abs())
                )
            }
        }
    }
}

impl fmt::Debug for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GoldenNumber({self})")
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let int = |t: &str| -> Option<BigInt> {
        let t = t.trim();
        if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(int(n)?, d))
        }
        None => Some(Rational::from_integer(int(s)?)),
    }
}

fn parse_term(body: &str) -> Result<(Rational, bool), String> {
    let body = body.trim();
    let strip_tau = |t: &str| -> Option<String> {
        for name in ["tau", "τ"] {
            if let Some(rest) = t.strip_suffix(name) {
                let rest = rest.trim();
                return Some(rest.strip_suffix('*').unwrap_or(rest).to_string());
            }
        }
        None
    };
    match strip_tau(body) {
        Some(coef) => {
            // Allow `tau/12` as well as `1/12*tau`.
            if coef.is_empty() {
                return Ok((Rational::one(), true));
            }
            parse_rational(&coef)
                .map(|r| (r, true))
                .ok_or_else(|| format!("bad tau coefficient {coef:?}"))
        }
        None => {
            for name in ["tau/", "τ/"] {
                if let Some(den) = body.strip_prefix(name) {
                    let d =
                        parse_rational(den).ok_or_else(|| format!("bad denominator {den:?}"))?;
                    if d.is_zero() {
                        return Err("zero denominator".into());
                    }
                    return Ok((d.recip(), true));
                }
            }
            parse_rational(body)
                .map(|r| (r, false))
                .ok_or_else(|| format!("bad term {body:?}"))
        }
    }
}

impl FromStr for GoldenNumber {
    type Err = GoldenError;

    /// Accepts sums of terms such as `1/6 + 1/3*tau`, `-5 - 5*tau`, `tau`,
    /// `2τ`, `3/4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| GoldenError::Parse {
            input: s.to_string(),
            reason,
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, c) in compact.chars().enumerate() {
            if (c == '+' || c == '-') && !current.ends_with('*') && !current.ends_with('/') {
                if i == 0 {
                    negative = c == '-';
                    continue;
                }
                if current.is_empty() {
                    return Err(err("dangling sign".into()));
                }
                terms.push((negative, std::mem::take(&mut current)));
                negative = c == '-';
            } else {
                current.push(c);
            }
        }
        if current.is_empty() {
            return Err(err("trailing sign".into()));
        }
        terms.push((negative, current));

        let mut out = GoldenNumber::zero();
        for (neg, body) in terms {
            let (mut r, is_tau) = parse_term(&body).map_err(err)?;
            if neg {
                r = -r;
            }
            if is_tau {
                out.gold += r;
            } else {
                out.rat += r;
            }
        }
        Ok(out)
    }
}

impl Serialize for GoldenNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GoldenNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
