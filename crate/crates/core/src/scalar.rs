//! Exact scalar fields.
//!
//! Everything downstream is generic over [`Field`]. Two implementations ship:
//! arbitrary-precision rationals ([`Rational`]) and prime fields [`Fp<P>`]
//! with the modulus fixed at compile time. [`Scalar`] is a runtime-tagged
//! value for callers that only learn the field context at run time.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::Rng;
use rand_xoshiro::SplitMix64;
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Half-width of the integer range rational samples are drawn from.
pub const RATIONAL_SAMPLE_BOUND: i64 = 10_000;

/// Default modulus for the prime-field context.
pub const DEFAULT_PRIME: u64 = 32_003;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different field contexts ({0} vs {1})")]
    MixedFieldContext(String, String),
    #[error("cannot parse coefficient {0:?}")]
    Parse(String),
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
}

/// An exact field.
///
/// Arithmetic is by value; implementations must be exact and keep values in
/// canonical form so that `==` is field equality.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// Draws one sample from the documented range: integers in
    /// `[-10^4, 10^4]` for rationals, uniform residues for prime fields.
    fn sample(rng: &mut SplitMix64) -> Self;

    /// Canonical `num/den` text.
    fn to_coeff(&self) -> String;

    /// Parses `num/den` or a bare integer.
    fn parse_coeff(s: &str) -> Result<Self, ScalarError>;

    /// 0 for characteristic zero.
    fn characteristic() -> u64;

    /// Human-readable name of the field context, e.g. `Q` or `F_32003`.
    fn context_name() -> String;
}

fn split_coeff(s: &str) -> Result<(BigInt, BigInt), ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(ScalarError::DivisionByZero);
    }
    Ok((num, den))
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn sample(rng: &mut SplitMix64) -> Self {
        let span = (2 * RATIONAL_SAMPLE_BOUND + 1) as u64;
        let v = (rng.next_u64() % span) as i64 - RATIONAL_SAMPLE_BOUND;
        Self::from_i64(v)
    }

    fn to_coeff(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_coeff(s: &str) -> Result<Self, ScalarError> {
        let (num, den) = split_coeff(s)?;
        Ok(Rational::new(num, den))
    }

    fn characteristic() -> u64 {
        0
    }

    fn context_name() -> String {
        "Q".to_string()
    }
}

/// Residue modulo the prime `P`, stored in `[0, P)`.
///
/// `P` must be a prime below 2^32 so that products fit in a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

/// The default prime-field context.
pub type F32003 = Fp<DEFAULT_PRIME>;
pub type F65521 = Fp<65_521>;
pub type F1000003 = Fp<1_000_003>;
pub type F2147483647 = Fp<2_147_483_647>;

/// Moduli with a compiled prime-field type.
pub const SUPPORTED_PRIMES: [u64; 4] = [32_003, 65_521, 1_000_003, 2_147_483_647];

impl<const P: u64> Fp<P> {
    const CHECK: () = assert!(P > 1 && P < (1 << 32), "modulus must lie in (1, 2^32)");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in prime field")
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn inv(&self) -> Option<Self> {
        // Fermat: a^(p-2) = a^-1 for prime p.
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn from_i64(v: i64) -> Self {
        Self::new(v)
    }

    fn sample(rng: &mut SplitMix64) -> Self {
        Fp(rng.next_u64() % P)
    }

    fn to_coeff(&self) -> String {
        format!("{}/1", self.0)
    }

    fn parse_coeff(s: &str) -> Result<Self, ScalarError> {
        let (num, den) = split_coeff(s)?;
        let m = BigInt::from(P);
        let to_fp = |x: BigInt| Fp::<P>(x.mod_floor(&m).to_u64().expect("residue fits"));
        let den = to_fp(den);
        let inv = den.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(to_fp(num) * inv)
    }

    fn characteristic() -> u64 {
        P
    }

    fn context_name() -> String {
        format!("F_{P}")
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Field context of a runtime-tagged [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldContext {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldContext::Rational => write!(f, "Q"),
            FieldContext::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl FieldContext {
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) && p < (1 << 32) {
            Ok(FieldContext::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }
}

/// A field element whose context is only known at run time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Modular { value: u64, modulus: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn integer(ctx: FieldContext, v: i64) -> Self {
        match ctx {
            FieldContext::Rational => Scalar::Rational(Rational::from_i64(v)),
            FieldContext::Prime(p) => Scalar::Modular {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn rational(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::Rational(Rational::new(num.into(), den.into())))
    }

    pub fn context(&self) -> FieldContext {
        match self {
            Scalar::Rational(_) => FieldContext::Rational,
            Scalar::Modular { modulus, .. } => FieldContext::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mod_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Exact `a op b` in the shared field context of `a` and `b`.
pub fn field_arithmetic(a: &Scalar, b: &Scalar, op: FieldOp) -> Result<Scalar, ScalarError> {
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => {
            let r = match op {
                FieldOp::Add => x + y,
                FieldOp::Sub => x - y,
                FieldOp::Mul => x * y,
                FieldOp::Div => {
                    if y.is_zero() {
                        return Err(ScalarError::DivisionByZero);
                    }
                    x / y
                }
            };
            Ok(Scalar::Rational(r))
        }
        (
            Scalar::Modular { value: x, modulus: p },
            Scalar::Modular { value: y, modulus: q },
        ) if p == q => {
            let p = *p;
            let value = match op {
                FieldOp::Add => (x + y) % p,
                FieldOp::Sub => (x + p - y) % p,
                FieldOp::Mul => x * y % p,
                FieldOp::Div => {
                    if *y == 0 {
                        return Err(ScalarError::DivisionByZero);
                    }
                    x * mod_pow(*y, p - 2, p) % p
                }
            };
            Ok(Scalar::Modular { value, modulus: p })
        }
        _ => Err(ScalarError::MixedFieldContext(
            a.context().to_string(),
            b.context().to_string(),
        )),
    }
}
