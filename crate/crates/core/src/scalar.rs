//! Scalar abstraction for weights, function values and norms.
//!
//! Every analysis in the crate is generic over [`Scalar`]. The exact tower
//! ([`num_rational::BigRational`]) is the default and the only mode in which
//! verdicts are exact; `f64`/`f32` are provided for quick exploratory runs.

use std::fmt::{Debug, Display};

use num_bigint::{BigInt, Sign};
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Exact distance/level type shared by every space.
pub type Dist = Rational64;

/// Numeric field used for weights and function values.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + num_traits::Num
    + std::ops::Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic and comparisons are exact.
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    /// Best rational representation (exact for the rational tower, the
    /// binary value of the float otherwise).
    fn to_rational(&self) -> BigRational;

    fn to_f64(&self) -> f64;

    /// Square root when it is representable in `Self`.
    fn exact_sqrt(&self) -> Option<Self>;

    /// Certified bracket `lo <= sqrt(self) <= hi` with `hi - lo < 1e-12`.
    fn sqrt_enclosure(&self) -> (Self, Self);

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    fn from_dist(d: Dist) -> Self {
        Self::from_ratio(*d.numer(), *d.denom())
    }

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Integer power, negative exponents allowed for nonzero bases.
    fn pow_i(&self, exp: i64) -> Self {
        let mut acc = Self::one();
        let mut base = if exp < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

const ENCLOSURE_SCALE: i64 = 10_000_000_000_000; // 1e13

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn pow_i(&self, exp: i64) -> Self {
        let e = u32::try_from(exp.unsigned_abs()).expect("exponent fits in u32");
        let (n, d) = (self.numer().pow(e), self.denom().pow(e));
        if exp >= 0 {
            BigRational::new_raw(n, d)
        } else if n.is_negative() {
            BigRational::new_raw(-d, -n)
        } else {
            BigRational::new_raw(d, n)
        }
    }

    fn exact_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    fn sqrt_enclosure(&self) -> (Self, Self) {
        if let Some(s) = self.exact_sqrt() {
            return (s.clone(), s);
        }
        if !self.is_positive() {
            return (Self::zero(), Self::zero());
        }
        // sqrt(p/q) = sqrt(p*q*S^2) / (q*S)
        let scale = BigInt::from(ENCLOSURE_SCALE);
        let radicand = self.numer() * self.denom() * &scale * &scale;
        let root = radicand.sqrt();
        let den = self.denom() * &scale;
        let lo = BigRational::new(root.clone(), den.clone());
        let hi = BigRational::new(root + BigInt::one(), den);
        (lo, hi)
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(r: &BigRational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }

            fn to_rational(&self) -> BigRational {
                BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn exact_sqrt(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }

            fn sqrt_enclosure(&self) -> (Self, Self) {
                let s = self.max(0.0).sqrt();
                (s, s)
            }

            fn pow_i(&self, exp: i64) -> Self {
                self.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

/// Parses `"p/q"`, `"p"` or a finite decimal like `"0.125"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut numer: BigInt = digits.parse().ok()?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10u8), frac_part.len());
        return Some(BigRational::new(numer, denom));
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// Parses a rational, accepting JSON numbers as well as strings.
pub fn rational_from_json(value: &serde_json::Value) -> Option<BigRational> {
    match value {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(BigRational::from_integer(i.into()))
            } else {
                parse_rational(&n.to_string())
            }
        }
        _ => None,
    }
}

/// Converts an exact rational into a [`Dist`], if it fits.
pub fn dist_from_rational(r: &BigRational) -> Option<Dist> {
    Some(Dist::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

/// Formats a rational as `p/q` (or `p` for integers).
pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Numerator/denominator pair as decimal strings, for CSV output.
pub fn num_den(r: &BigRational) -> (String, String) {
    let (num, den) = (r.numer(), r.denom());
    debug_assert!(den.sign() == Sign::Plus);
    (num.to_string(), den.to_string())
}

/// Smallest integer `>= x` for a nonnegative distance.
pub fn ceil_dist(x: Dist) -> i64 {
    x.ceil().to_integer()
}

pub(crate) fn dist(n: i64) -> Dist {
    Dist::from_i64(n).expect("i64 fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn exact_sqrt_of_squares() {
        assert_eq!(q(9, 64).exact_sqrt(), Some(q(3, 8)));
        assert_eq!(q(2, 1).exact_sqrt(), None);
        assert_eq!(BigRational::zero().exact_sqrt(), Some(BigRational::zero()));
    }

    #[test]
    fn enclosure_brackets_irrational_root() {
        let two = q(2, 1);
        let (lo, hi) = two.sqrt_enclosure();
        assert!(&lo * &lo <= two && two <= &hi * &hi);
        assert!(hi - lo < q(1, 1_000_000_000_000));
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/8"), Some(q(3, 8)));
        assert_eq!(parse_rational("-4"), Some(q(-4, 1)));
        assert_eq!(parse_rational("0.125"), Some(q(1, 8)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn integer_powers() {
        assert_eq!(q(3, 1).pow_i(4), q(81, 1));
        assert_eq!(q(2, 1).pow_i(-3), q(1, 8));
        assert_eq!(q(-2, 3).pow_i(-3), q(-27, 8));
        assert_eq!(q(-2, 3).pow_i(2), q(4, 9));
        assert_eq!(q(5, 7).pow_i(0), q(1, 1));
        assert_eq!(2.0f64.pow_i(-2), 0.25);
    }
}
