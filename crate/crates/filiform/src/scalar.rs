//! Scalars over the Gaussian rationals `Q(i)` with an optional floating-point
//! mode.
//!
//! [`GaussianRational`] is a pair of arbitrary-precision rationals `re + im*i`
//! and supports exact field arithmetic.  [`Scalar`] wraps either an exact
//! Gaussian rational or an `f64` complex number; arithmetic coerces one way
//! only (`Exact` combined with `Approx` yields `Approx`), so exactness is
//! never fabricated.
//!
//! N-th roots are exact whenever the requested branch of the root is itself a
//! Gaussian rational.  Square roots (and fourth roots) are decided by a
//! complete closed form; other orders use a norm screen followed by
//! denominator-bounded rational reconstruction of a floating-point root
//! candidate, which is then verified exactly (`candidate^n == a`).  Roots
//! whose reduced denominators exceed roughly `10^7` fall back to `Approx`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

/// Errors produced by scalar arithmetic and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid scalar literal `{0}`")]
    Parse(String),
}

/// Which arithmetic a scalar (or a structure of scalars) lives in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarMode {
    /// Exact Gaussian-rational arithmetic.
    Exact,
    /// Double-precision complex arithmetic.
    Approx,
}

/// Convert a big rational to `f64` without overflowing intermediate
/// conversions: numerator and denominator are shifted down to at most 63 bits
/// before dividing, and the dropped scale is restored as a power of two.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let num = q.numer();
    let den = q.denom();
    let ns = (num.bits() as i64 - 63).max(0) as u64;
    let ds = (den.bits() as i64 - 63).max(0) as u64;
    let n = (num >> ns).to_f64().unwrap_or(f64::NAN);
    let d = (den >> ds).to_f64().unwrap_or(f64::NAN);
    (n / d) * 2f64.powi((ns as i64 - ds as i64) as i32)
}

fn ratio_from_i64(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn fmt_ratio(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An element of `Q(i)`: `re + im * i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::from_int(1)
    }

    /// The imaginary unit `i`.
    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(ratio_from_i64(n, 1), BigRational::zero())
    }

    /// `num/den` as a real Gaussian rational.  Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::new(ratio_from_i64(num, den), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`, the square of the complex modulus; an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow_u(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussianRational::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; `None` when raising zero to a negative power.
    pub fn pow_i(&self, exp: i32) -> Option<Self> {
        if exp >= 0 {
            Some(self.pow_u(exp as u32))
        } else {
            self.inv().map(|v| v.pow_u(exp.unsigned_abs()))
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        if !self.re.is_zero() {
            out.push_str(&fmt_ratio(&self.re));
        }
        if !self.im.is_zero() {
            if !self.im.is_negative() && !out.is_empty() {
                out.push('+');
            }
            if self.im == BigRational::one() {
                out.push('i');
            } else if self.im == -BigRational::one() {
                out.push_str("-i");
            } else {
                out.push_str(&fmt_ratio(&self.im));
                out.push('i');
            }
        }
        write!(f, "{out}")
    }
}

/// One additive term of a scalar literal: signed value plus imaginary flag.
fn parse_term(term: &str) -> Result<(BigRational, bool), ScalarError> {
    let err = || ScalarError::Parse(term.to_string());
    let (negative, rest) = match term.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, term.strip_prefix('+').unwrap_or(term)),
    };
    let (imag, body) = match rest.strip_suffix('i') {
        Some(b) => (true, b),
        None => (false, rest),
    };
    let value = if imag && body.is_empty() {
        BigRational::one()
    } else {
        let (num_str, den_str) = match body.split_once('/') {
            Some((n, d)) => (n, d),
            None => (body, "1"),
        };
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !digits(num_str) || !digits(den_str) {
            return Err(err());
        }
        let num = BigInt::from_str(num_str).map_err(|_| err())?;
        let den = BigInt::from_str(den_str).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        BigRational::new(num, den)
    };
    Ok((if negative { -value } else { value }, imag))
}

impl FromStr for GaussianRational {
    type Err = ScalarError;

    /// Parses the textual syntax `a/b+c/di`: an optional real rational term
    /// and an optional imaginary term, e.g. `3`, `-3/2+1/4i`, `i`, `2-3i`.
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        let err = || ScalarError::Parse(s.to_string());
        let text = s.trim();
        if text.is_empty() {
            return Err(err());
        }
        let bytes = text.as_bytes();
        let mut splits = vec![0usize];
        for (idx, b) in bytes.iter().enumerate().skip(1) {
            if *b == b'+' || *b == b'-' {
                splits.push(idx);
            }
        }
        if splits.len() > 2 {
            return Err(err());
        }
        splits.push(text.len());
        let mut re: Option<BigRational> = None;
        let mut im: Option<BigRational> = None;
        for window in splits.windows(2) {
            let (value, imag) = parse_term(&text[window[0]..window[1]])?;
            let slot = if imag { &mut im } else { &mut re };
            if slot.is_some() {
                return Err(err());
            }
            *slot = Some(value);
        }
        Ok(GaussianRational::new(
            re.unwrap_or_else(BigRational::zero),
            im.unwrap_or_else(BigRational::zero),
        ))
    }
}

/// Exact square root of a non-negative rational, if it is a rational square.
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let rn = q.numer().sqrt();
    if &rn * &rn != *q.numer() {
        return None;
    }
    let rd = q.denom().sqrt();
    if &rd * &rd != *q.denom() {
        return None;
    }
    Some(BigRational::new(rn, rd))
}

/// Exact n-th root of a non-negative rational, if one exists in `Q`.
fn rational_nth_root(q: &BigRational, n: u32) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let rn = q.numer().nth_root(n);
    if rn.pow(n) != *q.numer() {
        return None;
    }
    let rd = q.denom().nth_root(n);
    if rd.pow(n) != *q.denom() {
        return None;
    }
    Some(BigRational::new(rn, rd))
}

/// Principal square root of a Gaussian rational, when it stays in `Q(i)`.
///
/// Complete: returns `None` only if no square root of `g` lies in `Q(i)`.
/// Writes the root as `gamma + delta*i` with `gamma^2 = (|g| + re)/2` and
/// `delta^2 = (|g| - re)/2`, which are rational squares exactly when the root
/// is Gaussian rational.
fn gaussian_sqrt_principal(g: &GaussianRational) -> Option<GaussianRational> {
    if g.is_zero() {
        return Some(GaussianRational::zero());
    }
    let modulus = rational_sqrt(&g.norm_sqr())?;
    let two = ratio_from_i64(2, 1);
    let gamma = rational_sqrt(&((&g.re + &modulus) / &two))?;
    let delta = rational_sqrt(&((&modulus - &g.re) / &two))?;
    let delta = if g.im.is_negative() { -delta } else { delta };
    Some(GaussianRational::new(gamma, delta))
}

/// Numeric n-th root on the requested branch: modulus root times
/// `exp(i*(arg + 2*pi*branch)/n)`.
fn complex_nth_root(z: Complex64, n: u32, branch: u32) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let r = z.norm().powf(1.0 / f64::from(n));
    let theta = (z.arg() + std::f64::consts::TAU * f64::from(branch)) / f64::from(n);
    Complex64::from_polar(r, theta)
}

/// Best rational with denominator at most `max_den` matching `x` to within
/// `1e-12` relative error, via continued fractions.  `None` when `x` carries
/// no such rational (or is not finite).
fn rational_from_f64(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(BigRational::zero());
    }
    let target = x.abs();
    if target > 1e18 {
        return None;
    }
    let tol = 1e-12 * target.max(1.0);
    let (mut p_prev, mut q_prev): (i128, i128) = (1, 0);
    let (mut p, mut q): (i128, i128) = (target.floor() as i128, 1);
    let mut rem = target - target.floor();
    for _ in 0..64 {
        let approx = p as f64 / q as f64;
        if (target - approx).abs() <= tol {
            let mut ratio = BigRational::new(BigInt::from(p), BigInt::from(q));
            if x < 0.0 {
                ratio = -ratio;
            }
            return Some(ratio);
        }
        if rem.abs() < f64::EPSILON {
            break;
        }
        let inv = 1.0 / rem;
        let a = inv.floor();
        rem = inv - a;
        let a = a as i128;
        let p_next = a.checked_mul(p)?.checked_add(p_prev)?;
        let q_next = a.checked_mul(q)?.checked_add(q_prev)?;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        if q as u64 > max_den.max(1) {
            break;
        }
    }
    None
}

/// Denominator bound for rational reconstruction of root candidates.
const ROOT_RECONSTRUCTION_MAX_DEN: u64 = 10_000_000;

/// Exact n-th root of `g` on the given branch, if that branch is a Gaussian
/// rational.  For `n` in `{1, 2, 4}` the decision is complete; for other
/// orders a root with a reduced denominator beyond the reconstruction bound
/// may be missed (the caller then falls back to `Approx`).
fn gaussian_nth_root(g: &GaussianRational, n: u32, branch: u32) -> Option<GaussianRational> {
    if g.is_zero() {
        return Some(GaussianRational::zero());
    }
    match n {
        1 => Some(g.clone()),
        2 => {
            let root = gaussian_sqrt_principal(g)?;
            Some(if branch == 1 { -&root } else { root })
        }
        4 => {
            let root = gaussian_sqrt_principal(&gaussian_sqrt_principal(g)?)?;
            // Branch k of a fourth root is the principal branch rotated by i^k.
            Some((0..branch).fold(root, |acc, _| &acc * &GaussianRational::i()))
        }
        _ => {
            // |root|^2 must be an exact rational n-th root of |g|^2.
            rational_nth_root(&g.norm_sqr(), n)?;
            let w = complex_nth_root(g.to_complex(), n, branch);
            let re = rational_from_f64(w.re, ROOT_RECONSTRUCTION_MAX_DEN)?;
            let im = rational_from_f64(w.im, ROOT_RECONSTRUCTION_MAX_DEN)?;
            let candidate = GaussianRational::new(re, im);
            if candidate.pow_u(n) == *g {
                Some(candidate)
            } else {
                None
            }
        }
    }
}

/// A field scalar: exact Gaussian rational or double-precision complex.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(GaussianRational),
    Approx(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(GaussianRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(GaussianRational::one())
    }

    /// The imaginary unit as an exact scalar.
    pub fn i() -> Self {
        Scalar::Exact(GaussianRational::i())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(GaussianRational::from_int(n))
    }

    /// Exact real `num/den`.  Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(GaussianRational::from_ratio(num, den))
    }

    pub fn approx(re: f64, im: f64) -> Self {
        Scalar::Approx(Complex64::new(re, im))
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Exact(_) => ScalarMode::Exact,
            Scalar::Approx(_) => ScalarMode::Approx,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Numeric value, exact scalars converted on demand.
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(g) => g.to_complex(),
            Scalar::Approx(z) => *z,
        }
    }

    /// The same value demoted to `Approx` mode.
    pub fn to_approx(&self) -> Scalar {
        Scalar::Approx(self.to_complex())
    }

    /// Literal zero test: exact comparison for `Exact`, `== 0.0` for
    /// `Approx`.  Tolerance-aware zero testing lives in [`ZeroTest`].
    pub fn is_exactly_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Approx(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Complex modulus as `f64` (used for scale estimates in both modes).
    pub fn abs_f64(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(g.conj()),
            Scalar::Approx(z) => Scalar::Approx(z.conj()),
        }
    }

    /// Multiplicative inverse.
    pub fn recip(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Exact(g) => g
                .inv()
                .map(Scalar::Exact)
                .ok_or(ScalarError::DivisionByZero),
            Scalar::Approx(z) => {
                if z.re == 0.0 && z.im == 0.0 {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Approx(z.inv()))
                }
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.recip()?)
    }

    /// Integer power; zero to a negative power is a division by zero.
    pub fn pow_int(&self, exp: i32) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Exact(g) => g
                .pow_i(exp)
                .map(Scalar::Exact)
                .ok_or(ScalarError::DivisionByZero),
            Scalar::Approx(z) => {
                if exp < 0 && z.re == 0.0 && z.im == 0.0 {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Approx(z.powi(exp)))
                }
            }
        }
    }

    /// The `branch`-th n-th root (`branch` taken modulo `n`).  Stays `Exact`
    /// exactly when the requested branch is a Gaussian rational; otherwise
    /// the result is the numeric root `|a|^(1/n) * exp(i*(arg a + 2*pi*branch)/n)`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn nth_root(&self, n: u32, branch: u32) -> Scalar {
        assert!(n >= 1, "root order must be positive");
        let branch = branch % n;
        match self {
            Scalar::Exact(g) => match gaussian_nth_root(g, n, branch) {
                Some(root) => Scalar::Exact(root),
                None => Scalar::Approx(complex_nth_root(g.to_complex(), n, branch)),
            },
            Scalar::Approx(z) => Scalar::Approx(complex_nth_root(*z, n, branch)),
        }
    }

    /// Equality up to `tol` relative to the larger magnitude (and 1).  Exact
    /// pairs compare exactly; mixed pairs compare numerically.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let a = self.to_complex();
                let b = other.to_complex();
                (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
            }
        }
    }

    /// Sum of an iterator of scalars (zero when empty).
    pub fn sum<'a>(iter: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
        iter.into_iter().fold(Scalar::zero(), |acc, s| &acc + s)
    }
}

impl PartialEq for Scalar {
    /// Strict structural equality: exact values compare exactly, approximate
    /// values bitwise; mixed modes are never equal.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => a.re == b.re && a.im == b.im,
            _ => false,
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<GaussianRational> for Scalar {
    fn from(g: GaussianRational) -> Self {
        Scalar::Exact(g)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $exact:expr, $approx:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact($exact(a, b)),
                    _ => Scalar::Approx($approx(self.to_complex(), rhs.to_complex())),
                }
            }
        }
    };
}

scalar_binop!(Add, add, |a, b| a + b, |a, b| a + b);
scalar_binop!(Sub, sub, |a, b| a - b, |a, b| a - b);
scalar_binop!(Mul, mul, |a, b| a * b, |a, b| a * b);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(-g),
            Scalar::Approx(z) => Scalar::Approx(-z),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => write!(f, "{g}"),
            Scalar::Approx(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.re == 0.0 {
                    write!(f, "{}i", z.im)
                } else {
                    write!(f, "{}{:+}i", z.re, z.im)
                }
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Parses an exact Gaussian-rational literal such as `-3/2+1/4i`.
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        s.parse::<GaussianRational>().map(Scalar::Exact)
    }
}

impl Serialize for Scalar {
    /// Exact scalars serialize as their literal string (`"-3/2+1/4i"`),
    /// approximate scalars as a two-element array `[re, im]`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(g) => serializer.serialize_str(&g.to_string()),
            Scalar::Approx(z) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl<'de> de::Visitor<'de> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an exact scalar string like \"-3/2+1/4i\" or an [re, im] pair")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                v.parse::<GaussianRational>()
                    .map(Scalar::Exact)
                    .map_err(|e| E::custom(e.to_string()))
            }

            fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> Result<Scalar, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Scalar::approx(re, im))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Mode-aware zero test: exact scalars are tested exactly, approximate ones
/// against `tol * max(scale, 1)`.
#[derive(Copy, Clone, Debug)]
pub struct ZeroTest {
    pub tol: f64,
    pub scale: f64,
}

impl ZeroTest {
    /// Default relative tolerance for zero tests in `Approx` mode.
    pub const DEFAULT_TOL: f64 = 1e-12;

    pub fn new(tol: f64) -> Self {
        ZeroTest { tol, scale: 1.0 }
    }

    pub fn with_scale(tol: f64, scale: f64) -> Self {
        ZeroTest { tol, scale }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Approx(z) => z.norm() <= self.tol * self.scale.max(1.0),
        }
    }
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest::new(Self::DEFAULT_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(s: &str) -> Scalar {
        Scalar::Exact(s.parse().unwrap())
    }

    #[test]
    fn parses_and_prints_literals() {
        for text in ["0", "1", "-3/2", "i", "-i", "2+3i", "-3/2+1/4i", "2-3i", "5/7i"] {
            let g: GaussianRational = text.parse().unwrap();
            let round: GaussianRational = g.to_string().parse().unwrap();
            assert_eq!(g, round, "round-trip failed for {text}");
        }
        assert_eq!(exact("3/6"), exact("1/2"));
        assert_eq!(exact("+2"), exact("2"));
    }

    #[test]
    fn rejects_bad_literals() {
        for text in ["", "x", "1/0", "1//2", "1+2", "i+i", "2i+3i", "1.5", "1e3", "--1"] {
            assert!(text.parse::<GaussianRational>().is_err(), "accepted `{text}`");
        }
    }

    #[test]
    fn field_arithmetic_is_exact() {
        let a = exact("-3/2+1/4i");
        let b = exact("2/7-5i");
        let prod = &a * &b;
        let back = prod.div(&b).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
        assert_eq!(exact("2").pow_int(-2).unwrap(), exact("1/4"));
        assert_eq!(Scalar::zero().pow_int(-1), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn mixed_mode_arithmetic_demotes() {
        let sum = &exact("1/2") + &Scalar::approx(0.25, 0.0);
        assert_eq!(sum.mode(), ScalarMode::Approx);
        assert!((sum.to_complex().re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn square_roots_are_complete() {
        // den(x^2) != den(x)^2 in Z[i]: sqrt(i/2) = (1+i)/2.
        let root = exact("1/2i").nth_root(2, 0);
        assert_eq!(root, exact("1/2+1/2i"));
        assert_eq!(exact("-1").nth_root(2, 0), exact("i"));
        assert_eq!(exact("-4").nth_root(2, 1), exact("-2i"));
        assert_eq!(exact("-2i").nth_root(2, 0), exact("1-i"));
        // Irrational root falls back to Approx but still n-th-powers back.
        let r = exact("2").nth_root(2, 0);
        assert_eq!(r.mode(), ScalarMode::Approx);
        assert!(r.pow_int(2).unwrap().approx_eq(&exact("2"), 1e-12));
    }

    #[test]
    fn higher_roots_detect_exactness() {
        assert_eq!(exact("16").nth_root(4, 0), exact("2"));
        assert_eq!(exact("16").nth_root(4, 1), exact("2i"));
        assert_eq!(exact("27/8").nth_root(3, 0), exact("3/2"));
        let base = exact("2/3+1/5i");
        let cube = base.pow_int(3).unwrap();
        // Some branch of the cube root recovers the base exactly.
        let hit = (0..3).any(|k| cube.nth_root(3, k) == base);
        assert!(hit);
        for k in 0..6 {
            let r = exact("-11/7+2i").pow_int(6).unwrap().nth_root(6, k);
            assert!(r.pow_int(6).unwrap().approx_eq(&exact("-11/7+2i").pow_int(6).unwrap(), 1e-12));
        }
    }

    #[test]
    fn zero_roots_and_branch_wrapping() {
        assert_eq!(Scalar::zero().nth_root(5, 3), Scalar::zero());
        assert_eq!(exact("16").nth_root(4, 4), exact("2"));
    }

    #[test]
    fn big_rational_to_f64_survives_large_values() {
        let big = BigInt::from(10).pow(400u32);
        let q = BigRational::new(big.clone(), BigInt::from(1));
        assert!(rational_to_f64(&q).is_infinite());
        let tiny = BigRational::new(BigInt::from(1), big);
        assert_eq!(rational_to_f64(&tiny), 0.0);
        let ratio = BigRational::new(BigInt::from(10).pow(350u32) * 3, BigInt::from(10).pow(350u32));
        assert!((rational_to_f64(&ratio) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_test_respects_mode() {
        let zt = ZeroTest::with_scale(1e-12, 100.0);
        assert!(zt.is_zero(&Scalar::approx(5e-11, 0.0)));
        assert!(!zt.is_zero(&Scalar::approx(1e-9, 0.0)));
        // Exact mode ignores tolerances entirely.
        assert!(!zt.is_zero(&exact("1/1000000000000000000")));
    }
}
