//! Scalar backends.
//!
//! Every algebraic routine in the crate is written against [`Scalar`], which
//! has two kinds of implementations: exact rationals ([`Rational`]), where
//! zero tests are exact, and IEEE floats, where zero tests are relative to a
//! caller-supplied scale. The tolerance is folded into
//! [`Scalar::tolerance`] so that generic code can call
//! [`Scalar::is_negligible`] without caring which backend it runs on.

use std::fmt::{Debug, Display};
use std::ops::{Div, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, the exact backend.
pub type Rational = BigRational;

/// Commutative or non-commutative ring element with the operations the
/// dual-quaternion kernel needs.
pub trait Ring: Clone + Debug + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {}

impl<T> Ring for T where T: Clone + Debug + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {}

/// A ring where every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

/// Real scalar field used for coefficients: exact rationals or floats.
pub trait Scalar: Field + Signed + PartialOrd + Display + Send + Sync + 'static {
    /// `true` for backends whose arithmetic never rounds.
    const EXACT: bool;

    /// Relative tolerance for zero tests; zero on exact backends.
    fn tolerance() -> Self;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Nearest representable value. Exact backends convert the binary value
    /// of `v` exactly.
    fn from_f64(v: f64) -> Self;

    /// Square root, if it exists in the backend. Exact backends only return
    /// roots of perfect squares.
    fn sqrt_checked(&self) -> Option<Self>;

    /// Parse a decimal (`"-1.25"`, `"3e-2"`) or fraction (`"3/5"`) literal.
    fn parse_decimal(s: &str) -> Option<Self>;

    /// Rank of a dense row-major matrix.
    fn matrix_rank(rows: &[Vec<Self>]) -> usize;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `|self| <= tolerance * |scale|`.
    fn is_negligible(&self, scale: &Self) -> bool {
        self.abs() <= Self::tolerance() * scale.abs()
    }

    fn approx_eq(&self, other: &Self, scale: &Self) -> bool {
        (self.clone() - other.clone()).is_negligible(scale)
    }
}

fn gaussian_rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in (rank + 1)..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / p.clone();
            let (top, bottom) = m.split_at_mut(r);
            for (dst, src) in bottom[0][col..ncols].iter_mut().zip(&top[rank][col..ncols]) {
                *dst = dst.clone() - factor.clone() * src.clone();
            }
        }
        rank += 1;
    }
    rank
}

fn svd_rank<T: nalgebra::RealField + Copy>(rows: &[Vec<T>], rel: T) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let (nr, nc) = (rows.len(), rows[0].len());
    let m = DMatrix::from_fn(nr, nc, |r, c| rows[r][c]);
    let sv = m.singular_values();
    let largest = sv.iter().copied().fold(T::zero(), |a, b| a.max(b));
    if largest == T::zero() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * largest).count()
}

fn parse_decimal_parts(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some((n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        Some((num * num_traits::pow(ten, scale as usize), BigInt::one()))
    } else {
        Some((num, num_traits::pow(ten, (-scale) as usize)))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        Self::zero()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(Self::zero)
    }

    fn sqrt_checked(&self) -> Option<Self> {
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

    fn parse_decimal(s: &str) -> Option<Self> {
        parse_decimal_parts(s).map(|(n, d)| BigRational::new(n, d))
    }

    fn matrix_rank(rows: &[Vec<Self>]) -> usize {
        gaussian_rank(rows)
    }

    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr, $rank_tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn tolerance() -> Self {
                $tol
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn from_f64(v: f64) -> Self {
                v as $t
            }

            fn sqrt_checked(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }

            fn parse_decimal(s: &str) -> Option<Self> {
                let s = s.trim();
                if let Some((n, d)) = s.split_once('/') {
                    let n: $t = n.trim().parse().ok()?;
                    let d: $t = d.trim().parse().ok()?;
                    return (d != 0.0).then(|| n / d);
                }
                s.parse().ok().filter(|v: &$t| v.is_finite())
            }

            fn matrix_rank(rows: &[Vec<Self>]) -> usize {
                svd_rank(rows, $rank_tol)
            }
        }
    };
}

float_scalar!(f64, 1e-9, 1e-8);
float_scalar!(f32, 1e-4, 1e-4);

/// Zero test for complex scalars: both parts negligible against `scale`.
pub fn complex_negligible<T: Scalar>(z: &Complex<T>, scale: &T) -> bool {
    (z.re.abs() + z.im.abs()).is_negligible(scale)
}

/// `|re| + |im|`, a cheap magnitude used for tolerance scales.
pub fn complex_l1<T: Scalar>(z: &Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

pub fn complex_to_f64<T: Scalar>(z: &Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn rational_sqrt_only_for_squares() {
        assert_eq!(q(9, 16).sqrt_checked(), Some(q(3, 4)));
        assert_eq!(q(2, 1).sqrt_checked(), None);
        assert_eq!(q(-4, 1).sqrt_checked(), None);
        assert_eq!(Rational::zero().sqrt_checked(), Some(Rational::zero()));
    }

    #[test]
    fn decimal_literals_parse_exactly() {
        assert_eq!(Rational::parse_decimal("0.1"), Some(q(1, 10)));
        assert_eq!(Rational::parse_decimal("-1.25"), Some(q(-5, 4)));
        assert_eq!(Rational::parse_decimal("3e-2"), Some(q(3, 100)));
        assert_eq!(Rational::parse_decimal("2.5E1"), Some(q(25, 1)));
        assert_eq!(Rational::parse_decimal("3/5"), Some(q(3, 5)));
        assert_eq!(Rational::parse_decimal(".5"), Some(q(1, 2)));
        assert_eq!(Rational::parse_decimal("abc"), None);
        assert_eq!(Rational::parse_decimal("1/0"), None);
        assert_eq!(f64::parse_decimal("0.25"), Some(0.25));
        assert_eq!(f64::parse_decimal("nan"), None);
    }

    #[test]
    fn rank_exact_and_float_agree_on_small_matrix() {
        let rows = [vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        let rq: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect()).collect();
        let rf: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
        assert_eq!(Rational::matrix_rank(&rq), 2);
        assert_eq!(f64::matrix_rank(&rf), 2);
    }

    #[test]
    fn float_negligibility_is_relative() {
        assert!(1e-12_f64.is_negligible(&10.0));
        assert!(!1e-6_f64.is_negligible(&10.0));
        assert!(!q(1, 1_000_000_000).is_negligible(&q(1, 1)));
    }
}
