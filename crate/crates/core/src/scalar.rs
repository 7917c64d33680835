//! Exact arithmetic substrate: rationals, Gaussian rationals, and the
//! one-point compactification of the real line.

use crate::error::{KernelError, Result};
use num::rational::Ratio;
use num::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = Ratio<BigInt>;

pub fn rat(n: i64, d: i64) -> Rational {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Ratio::from(BigInt::from(n))
}

/// Parses "p/q" or "n".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| KernelError::Parse(format!("bad numerator in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| KernelError::Parse(format!("bad denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(KernelError::Parse(format!("zero denominator in {s:?}")));
    }
    if den.starts_with('-') || den.starts_with('+') {
        // canonical textual form keeps sign in the numerator
        return Err(KernelError::Parse(format!("non-canonical rational {s:?}")));
    }
    let r = Ratio::new(n.clone(), d.clone());
    if r.numer() != &n || r.denom() != &d {
        return Err(KernelError::Parse(format!("non-reduced rational {s:?}")));
    }
    Ok(r)
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A Gaussian rational re + im·i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRational {
            re: rat_int(re),
            im: rat_int(im),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|² = re² + im², an exact rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(KernelError::Domain("inverse of zero".into()));
        }
        Ok(GaussRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GaussRational {
            re: &self.re * c,
            im: &self.im * c,
        }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}+{}i",
            format_rational(&self.re),
            format_rational(&self.im)
        )
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: Self) -> GaussRational {
        GaussRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: Self) -> GaussRational {
        GaussRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: Self) -> GaussRational {
        GaussRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GaussRational {
    type Output = GaussRational;
    fn div(self, rhs: Self) -> GaussRational {
        let n = rhs.norm_sqr();
        GaussRational {
            re: (&self.re * &rhs.re + &self.im * &rhs.im) / &n,
            im: (&self.im * &rhs.re - &self.re * &rhs.im) / &n,
        }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// ℝ ∪ {∞} with a single unsigned infinity (−∞ = ∞).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtReal {
    Finite(Rational),
    Infinity,
}

impl ExtReal {
    pub fn finite(r: Rational) -> Self {
        ExtReal::Finite(r)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(r) => write!(f, "{}", format_rational(r)),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}

pub fn parse_ext_real(s: &str) -> Result<ExtReal> {
    if s.trim() == "inf" {
        Ok(ExtReal::Infinity)
    } else {
        parse_rational(s).map(ExtReal::Finite)
    }
}

/// ∞⁻¹ = 0 and 0⁻¹ = ∞; finite nonzero values invert in the field.
pub fn ext_inverse(x: &ExtReal) -> ExtReal {
    match x {
        ExtReal::Infinity => ExtReal::Finite(Rational::zero()),
        ExtReal::Finite(a) if a.is_zero() => ExtReal::Infinity,
        ExtReal::Finite(a) => ExtReal::Finite(a.recip()),
    }
}

/// c·∞ = ∞ is only defined for c > 0.
pub fn ext_scale(c: &Rational, x: &ExtReal) -> Result<ExtReal> {
    match x {
        ExtReal::Finite(a) => Ok(ExtReal::Finite(c * a)),
        ExtReal::Infinity => {
            if c.is_positive() {
                Ok(ExtReal::Infinity)
            } else {
                Err(KernelError::Domain(
                    "scaling of infinity needs a positive factor".into(),
                ))
            }
        }
    }
}

/// Rational point ((1−t²) + 2t·i)/(1+t²) on the unit circle.
pub fn unit_circle_sample(t: &Rational) -> GaussRational {
    let one = Rational::one();
    let t2 = t * t;
    let den = &one + &t2;
    GaussRational {
        re: (&one - &t2) / &den,
        im: (t + t) / &den,
    }
}

/// Sign of a rational, for exact inertia bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

pub fn sign_of(r: &Rational) -> SignClass {
    if r.is_zero() {
        SignClass::Zero
    } else if r.is_positive() {
        SignClass::Positive
    } else {
        SignClass::Negative
    }
}
