//! Exact scalars over Q, Q(i) and F_p.
//!
//! A [`Scalar`] carries its own variant; binary operations promote rationals
//! into Q(i) or F_p as needed, so field-agnostic code can use rational
//! constants such as `1/2` or `1/n!` directly. Mixing Q(i) with F_p, or two
//! different primes, is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational with an inline fast path for values that fit in `i64`.
///
/// Always normalized: denominator positive, fraction reduced, and the `Big`
/// variant is used only when numerator or denominator overflow `i64`.
#[derive(Clone, Debug)]
pub enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    pub fn zero() -> Self {
        Rat::Small(0, 1)
    }

    pub fn one() -> Self {
        Rat::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Rat::Small(n, 1)
    }

    /// `num / den`; panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n == 0 {
            return Rat::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational arithmetic keeps values reduced with positive denominator.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(r) => r.is_integer(),
        }
    }

    pub fn recip(&self) -> Self {
        match self {
            Rat::Small(0, _) => panic!("division by zero"),
            Rat::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Rat::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn add_ref(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, other) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Self::from_i128(a + c, b);
            }
            // i64 inputs cannot overflow i128 here
            return Self::from_i128(a * d + c * b, b * d);
        }
        Self::from_big(self.to_big() + other.to_big())
    }

    pub fn mul_ref(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, other) {
            if *a == 0 || *c == 0 {
                return Rat::zero();
            }
            return Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Self::from_big(self.to_big() * other.to_big())
    }

    fn neg_ref(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Self::from_i128(-(*n as i128), *d as i128),
            Rat::Big(r) => Self::from_big(-r),
        }
    }

    /// Residue modulo `p`; panics when `p` divides the denominator.
    pub fn mod_p(&self, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let n = self.numer().mod_floor(&pb);
        let d = self.denom().mod_floor(&pb);
        let d = d.to_u64().unwrap();
        assert!(d != 0, "denominator of {self} vanishes modulo {p}");
        let n = n.to_u64().unwrap();
        mul_mod(n, inv_mod(d, p), p)
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(x), Rat::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rat::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero modulo {p}");
    pow_mod(a, p - 2, p)
}

/// Deterministic primality test, adequate for the small moduli used by enumeration.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    GaussianRationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::Field(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Prime(p) => p,
            _ => 0,
        }
    }

    pub fn zero(self) -> Scalar {
        self.embed(&Rat::zero())
    }

    pub fn one(self) -> Scalar {
        self.embed(&Rat::one())
    }

    pub fn from_int(self, n: i64) -> Scalar {
        self.embed(&Rat::from_int(n))
    }

    /// Image of a rational number in this field.
    pub fn embed(self, r: &Rat) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(r.clone()),
            Field::GaussianRationals => Scalar::Qi(r.clone(), Rat::zero()),
            Field::Prime(p) => Scalar::Fp(r.mod_p(p), p),
        }
    }

    /// Checks that every integer `1..=n` is invertible, i.e. `1/n!` exists.
    pub fn require_factorials(self, n: usize) -> Result<()> {
        match self {
            Field::Prime(p) if (p as usize) <= n => Err(Error::Characteristic {
                p,
                needed: n,
            }),
            _ => Ok(()),
        }
    }

    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        match self {
            Field::Rationals => Ok(Scalar::Q(s.parse()?)),
            Field::Prime(p) => {
                let r: Rat = s.parse()?;
                if (r.denom() % BigInt::from(p)).is_zero() {
                    return Err(Error::Parse(format!("{s:?} is not defined modulo {p}")));
                }
                Ok(Scalar::Fp(r.mod_p(p), p))
            }
            Field::GaussianRationals => parse_gaussian(s),
        }
    }

    pub fn name(self) -> String {
        match self {
            Field::Rationals => "Q".into(),
            Field::GaussianRationals => "Qi".into(),
            Field::Prime(p) => format!("Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" => Ok(Field::Rationals),
            "Qi" => Ok(Field::GaussianRationals),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown field {other:?}")))?;
                Field::prime(p)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn parse_gaussian(s: &str) -> Result<Scalar> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if !t.ends_with('i') {
        return Ok(Scalar::Qi(t.parse()?, Rat::zero()));
    }
    let body = &t[..t.len() - 1];
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => Rat::one(),
        "-" => Rat::from_int(-1),
        s => s.trim_start_matches('+').parse()?,
    };
    Ok(Scalar::Qi(re.parse()?, im))
}

/// An exact field element.
#[derive(Clone, Debug)]
pub enum Scalar {
    Q(Rat),
    Qi(Rat, Rat),
    Fp(u64, u64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Q(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Q(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Q(Rat::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Q(Rat::new(n, d))
    }

    pub fn gaussian(re: Rat, im: Rat) -> Self {
        Scalar::Qi(re, im)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::Qi(Rat::zero(), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Qi(a, b) => a.is_zero() && b.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Qi(a, b) => a.is_one() && b.is_zero(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Qi(..) => Field::GaussianRationals,
            Scalar::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Qi(a, b) => {
                let norm = a.mul_ref(a).add_ref(&b.mul_ref(b));
                let ni = norm.recip();
                Scalar::Qi(a.mul_ref(&ni), b.neg_ref().mul_ref(&ni))
            }
            Scalar::Fp(v, p) => Scalar::Fp(inv_mod(*v, *p), *p),
        }
    }

    /// Complex conjugation; the identity on Q and F_p.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Qi(a, b) => Scalar::Qi(a.clone(), b.neg_ref()),
            other => other.clone(),
        }
    }

    pub fn re(&self) -> Option<Rat> {
        match self {
            Scalar::Q(r) => Some(r.clone()),
            Scalar::Qi(a, _) => Some(a.clone()),
            Scalar::Fp(..) => None,
        }
    }

    pub fn im(&self) -> Option<Rat> {
        match self {
            Scalar::Q(_) => Some(Rat::zero()),
            Scalar::Qi(_, b) => Some(b.clone()),
            Scalar::Fp(..) => None,
        }
    }

    /// Rational value, if this scalar is (promotable to) a rational.
    pub fn as_rational(&self) -> Option<Rat> {
        match self {
            Scalar::Q(r) => Some(r.clone()),
            Scalar::Qi(a, b) if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    /// Re-expresses this scalar in `field`.
    pub fn coerce(&self, field: Field) -> Scalar {
        match (self, field) {
            (Scalar::Q(r), f) => f.embed(r),
            (Scalar::Qi(..), Field::GaussianRationals) => self.clone(),
            (Scalar::Qi(a, b), Field::Rationals) if b.is_zero() => Scalar::Q(a.clone()),
            (Scalar::Fp(_, p), Field::Prime(q)) if *p == q => self.clone(),
            _ => panic!("cannot coerce {self} into {field}"),
        }
    }

    fn combine(
        &self,
        other: &Scalar,
        rat: impl Fn(&Rat, &Rat) -> Rat,
        gauss: impl Fn((&Rat, &Rat), (&Rat, &Rat)) -> (Rat, Rat),
        modp: impl Fn(u64, u64, u64) -> u64,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(rat(a, b)),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Fp(modp(*a, *b, *p), *p)
            }
            (Scalar::Fp(a, p), Scalar::Q(r)) => Scalar::Fp(modp(*a, r.mod_p(*p), *p), *p),
            (Scalar::Q(r), Scalar::Fp(b, p)) => Scalar::Fp(modp(r.mod_p(*p), *b, *p), *p),
            (Scalar::Qi(a, b), Scalar::Qi(c, d)) => {
                let (x, y) = gauss((a, b), (c, d));
                Scalar::Qi(x, y)
            }
            (Scalar::Qi(a, b), Scalar::Q(c)) => {
                let z = Rat::zero();
                let (x, y) = gauss((a, b), (c, &z));
                Scalar::Qi(x, y)
            }
            (Scalar::Q(a), Scalar::Qi(c, d)) => {
                let z = Rat::zero();
                let (x, y) = gauss((a, &z), (c, d));
                Scalar::Qi(x, y)
            }
            _ => panic!("incompatible scalar fields: {self} and {other}"),
        }
    }

    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        self.combine(
            other,
            |a, b| a.add_ref(b),
            |(a, b), (c, d)| (a.add_ref(c), b.add_ref(d)),
            |a, b, p| (a + b) % p,
        )
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        self.combine(
            other,
            |a, b| a.mul_ref(b),
            |(a, b), (c, d)| {
                (
                    a.mul_ref(c).add_ref(&b.mul_ref(d).neg_ref()),
                    a.mul_ref(d).add_ref(&b.mul_ref(c)),
                )
            },
            mul_mod,
        )
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(r.neg_ref()),
            Scalar::Qi(a, b) => Scalar::Qi(a.neg_ref(), b.neg_ref()),
            Scalar::Fp(v, p) => Scalar::Fp((p - v) % p, *p),
        }
    }

    /// `(-1)^k` as a scalar.
    pub fn sign(k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            Scalar::one()
        } else {
            Scalar::from_int(-1)
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.add_ref(&other.neg_ref()).is_zero()
    }
}
impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp(v, _) => write!(f, "{v}"),
            Scalar::Qi(a, b) => {
                if b.is_zero() {
                    return write!(f, "{a}");
                }
                let im = if b.is_one() {
                    String::new()
                } else if *b == Rat::from_int(-1) {
                    "-".to_string()
                } else {
                    b.to_string()
                };
                if a.is_zero() {
                    write!(f, "{im}i")
                } else if b.numer().is_negative() {
                    write!(f, "{a}{im}i")
                } else {
                    write!(f, "{a}+{im}i")
                }
            }
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(rhs);
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.add_ref(&rhs.neg_ref())
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_ref(&rhs.neg_ref())
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self.mul_ref(&rhs.inv())
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(&rhs.inv())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::Q(r)
    }
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rat {
    let mut r = BigInt::one();
    for k in 2..=n {
        r *= k;
    }
    Rat::from_big(BigRational::from_integer(r))
}

/// `1/n!` as a scalar.
pub fn inv_factorial(n: usize) -> Scalar {
    Scalar::Q(factorial(n).recip())
}
