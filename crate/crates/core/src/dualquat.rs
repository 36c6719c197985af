//! Dual quaternions over an arbitrary coefficient ring.
//!
//! Coefficients are stored in the fixed order `(1, i, j, k, e, ei, ej, ek)`
//! where `e` is the dual unit with `e^2 = 0`. The same type serves the real
//! algebra (`S = T: Scalar`) and its complexification (`S = Complex<T>`),
//! where the complex unit is a scalar and commutes with the quaternion
//! units.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Field, Ring, Scalar};

pub type Vec3<T> = [T; 3];

pub(crate) fn dot<T: Ring>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub(crate) fn cross<T: Ring>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub(crate) fn vsub<T: Ring>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone(), a[2].clone() - b[2].clone()]
}

pub(crate) fn vadd<T: Ring>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0].clone() + b[0].clone(), a[1].clone() + b[1].clone(), a[2].clone() + b[2].clone()]
}

pub(crate) fn vscale<T: Ring>(a: &Vec3<T>, s: &T) -> Vec3<T> {
    [a[0].clone() * s.clone(), a[1].clone() * s.clone(), a[2].clone() * s.clone()]
}

/// Element `primal + dual * e` of the dual numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct DualNumber<S> {
    pub primal: S,
    pub dual: S,
}

impl<S: Ring> DualNumber<S> {
    pub fn new(primal: S, dual: S) -> Self {
        Self { primal, dual }
    }

    pub fn real(primal: S) -> Self {
        Self { primal, dual: S::zero() }
    }
}

impl<S: Ring> Add for DualNumber<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.primal + o.primal, self.dual + o.dual)
    }
}

impl<S: Ring> Sub for DualNumber<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.primal - o.primal, self.dual - o.dual)
    }
}

impl<S: Ring> Neg for DualNumber<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.primal, -self.dual)
    }
}

impl<S: Ring> Mul for DualNumber<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let dual = self.primal.clone() * o.dual + self.dual * o.primal.clone();
        Self::new(self.primal * o.primal, dual)
    }
}

impl<S: Field> DualNumber<S> {
    /// Inverse, defined when the primal part is a unit.
    pub fn inverse(&self) -> Option<Self> {
        if self.primal.is_zero() {
            return None;
        }
        let inv = S::one() / self.primal.clone();
        let dual = -(self.dual.clone() * inv.clone() * inv.clone());
        Some(Self::new(inv, dual))
    }
}

/// Element of the dual-quaternion algebra with coefficients in `S`.
#[derive(Clone, PartialEq)]
pub struct DualQuaternion<S> {
    coeffs: [S; 8],
}

/// Dual quaternion with complex coefficients.
pub type ComplexDualQuaternion<T> = DualQuaternion<Complex<T>>;

fn qmul<S: Ring>(a: &[S], b: &[S]) -> [S; 4] {
    let (w1, x1, y1, z1) = (&a[0], &a[1], &a[2], &a[3]);
    let (w2, x2, y2, z2) = (&b[0], &b[1], &b[2], &b[3]);
    let m = |p: &S, q: &S| p.clone() * q.clone();
    [
        m(w1, w2) - m(x1, x2) - m(y1, y2) - m(z1, z2),
        m(w1, x2) + m(x1, w2) + m(y1, z2) - m(z1, y2),
        m(w1, y2) - m(x1, z2) + m(y1, w2) + m(z1, x2),
        m(w1, z2) + m(x1, y2) - m(y1, x2) + m(z1, w2),
    ]
}

impl<S: Ring> DualQuaternion<S> {
    pub fn new(coeffs: [S; 8]) -> Self {
        Self { coeffs }
    }

    pub fn from_parts(primal: [S; 4], dual: [S; 4]) -> Self {
        let [a, b, c, d] = primal;
        let [e, f, g, h] = dual;
        Self::new([a, b, c, d, e, f, g, h])
    }

    /// Pure line-style element `v + e*m` from two 3-vectors.
    pub fn from_vectors(primal: Vec3<S>, dual: Vec3<S>) -> Self {
        let [a, b, c] = primal;
        let [d, e, f] = dual;
        Self::new([S::zero(), a, b, c, S::zero(), d, e, f])
    }

    pub fn scalar(s: S) -> Self {
        let mut c: [S; 8] = std::array::from_fn(|_| S::zero());
        c[0] = s;
        Self::new(c)
    }

    pub fn dual_scalar(d: DualNumber<S>) -> Self {
        let mut c: [S; 8] = std::array::from_fn(|_| S::zero());
        c[0] = d.primal;
        c[4] = d.dual;
        Self::new(c)
    }

    fn unit(idx: usize) -> Self {
        let mut c: [S; 8] = std::array::from_fn(|_| S::zero());
        c[idx] = S::one();
        Self::new(c)
    }

    pub fn zero() -> Self {
        Self::new(std::array::from_fn(|_| S::zero()))
    }

    pub fn one() -> Self {
        Self::unit(0)
    }

    pub fn i() -> Self {
        Self::unit(1)
    }

    pub fn j() -> Self {
        Self::unit(2)
    }

    pub fn k() -> Self {
        Self::unit(3)
    }

    /// The dual unit `e`.
    pub fn eps() -> Self {
        Self::unit(4)
    }

    pub fn coeffs(&self) -> &[S; 8] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> [S; 8] {
        self.coeffs
    }

    pub fn primal(&self) -> [S; 4] {
        std::array::from_fn(|i| self.coeffs[i].clone())
    }

    pub fn dual(&self) -> [S; 4] {
        std::array::from_fn(|i| self.coeffs[i + 4].clone())
    }

    pub fn primal_vector(&self) -> Vec3<S> {
        std::array::from_fn(|i| self.coeffs[i + 1].clone())
    }

    pub fn dual_vector(&self) -> Vec3<S> {
        std::array::from_fn(|i| self.coeffs[i + 5].clone())
    }

    /// The `(1, e)` components.
    pub fn scalar_part(&self) -> DualNumber<S> {
        DualNumber::new(self.coeffs[0].clone(), self.coeffs[4].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Quaternion conjugate: negates the six vector components.
    pub fn conj(&self) -> Self {
        Self::new(std::array::from_fn(|i| if i % 4 == 0 { self.coeffs[i].clone() } else { -self.coeffs[i].clone() }))
    }

    /// Right multiplication by a central scalar.
    pub fn scale(&self, s: &S) -> Self {
        Self::new(std::array::from_fn(|i| self.coeffs[i].clone() * s.clone()))
    }

    pub fn scale_dual(&self, d: &DualNumber<S>) -> Self {
        self.clone() * Self::dual_scalar(d.clone())
    }

    /// `self * conj(self)` reduced to its `(1, e)` components.
    pub fn norm(&self) -> DualNumber<S> {
        (self.clone() * self.conj()).scalar_part()
    }

    /// `self + conj(self)` reduced to its `(1, e)` components.
    pub fn trace(&self) -> DualNumber<S> {
        let two = S::one() + S::one();
        DualNumber::new(self.coeffs[0].clone() * two.clone(), self.coeffs[4].clone() * two)
    }

    /// True when the six vector components vanish exactly.
    pub fn vector_part_is_zero(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| i % 4 == 0 || c.is_zero())
    }

    pub fn map<U, F: Fn(&S) -> U>(&self, f: F) -> DualQuaternion<U> {
        DualQuaternion { coeffs: std::array::from_fn(|i| f(&self.coeffs[i])) }
    }

    pub fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl<S: Field> DualQuaternion<S> {
    /// Multiplicative inverse `conj(g) * norm(g)^-1`, if the primal norm is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        let inv = n.inverse()?;
        Some(self.conj().scale_dual(&inv))
    }
}

impl<T: Scalar> DualQuaternion<T> {
    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(|c| c.abs()).fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Norm with a check that the vector part of `h * conj(h)` cancelled.
    pub fn checked_norm(&self) -> Result<DualNumber<T>> {
        let prod = self.clone() * self.conj();
        let scale = self.max_abs() * self.max_abs();
        let cancelled = prod.coeffs.iter().enumerate().all(|(i, c)| i % 4 == 0 || c.is_negligible(&scale));
        if cancelled {
            Ok(prod.scalar_part())
        } else {
            Err(Error::Internal("vector part of h * conj(h) did not cancel".into()))
        }
    }

    /// All coefficients negligible relative to `scale`.
    pub fn is_negligible(&self, scale: &T) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(scale))
    }

    pub fn complexify(&self) -> ComplexDualQuaternion<T> {
        self.map(|c| Complex::new(c.clone(), T::zero()))
    }

    pub fn approx_eq(&self, other: &Self, scale: &T) -> bool {
        (self.clone() - other.clone()).is_negligible(scale)
    }

    pub fn to_f64(&self) -> DualQuaternion<f64> {
        self.map(|c| c.to_f64())
    }

    /// True iff `self^2 = -1` within the backend tolerance.
    pub fn is_line(&self) -> bool {
        let sq = self.square() + Self::one();
        let scale = self.max_abs() * self.max_abs() + T::one();
        sq.is_negligible(&scale)
    }
}

impl<T: Scalar> ComplexDualQuaternion<T> {
    /// Complex conjugation of all coefficients (not the quaternion conjugate).
    pub fn complex_conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn real_part(&self) -> DualQuaternion<T> {
        self.map(|c| c.re.clone())
    }

    pub fn imag_part(&self) -> DualQuaternion<T> {
        self.map(|c| c.im.clone())
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(crate::scalar::complex_l1).fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn is_negligible(&self, scale: &T) -> bool {
        self.coeffs.iter().all(|c| crate::scalar::complex_negligible(c, scale))
    }
}

impl<S: Ring> Index<usize> for DualQuaternion<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.coeffs[i]
    }
}

impl<S: Ring> Add for DualQuaternion<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.coeffs;
        for (a, b) in c.iter_mut().zip(o.coeffs) {
            *a = a.clone() + b;
        }
        Self::new(c)
    }
}

impl<S: Ring> AddAssign for DualQuaternion<S> {
    fn add_assign(&mut self, o: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs) {
            *a = a.clone() + b;
        }
    }
}

impl<S: Ring> Sub for DualQuaternion<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut c = self.coeffs;
        for (a, b) in c.iter_mut().zip(o.coeffs) {
            *a = a.clone() - b;
        }
        Self::new(c)
    }
}

impl<S: Ring> Add for &DualQuaternion<S> {
    type Output = DualQuaternion<S>;
    fn add(self, o: Self) -> DualQuaternion<S> {
        self.clone() + o.clone()
    }
}

impl<S: Ring> Sub for &DualQuaternion<S> {
    type Output = DualQuaternion<S>;
    fn sub(self, o: Self) -> DualQuaternion<S> {
        self.clone() - o.clone()
    }
}

impl<S: Ring> Neg for DualQuaternion<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.map(|c| -c))
    }
}

impl<S: Ring> Mul for &DualQuaternion<S> {
    type Output = DualQuaternion<S>;
    fn mul(self, o: Self) -> DualQuaternion<S> {
        let (p1, d1) = (&self.coeffs[..4], &self.coeffs[4..]);
        let (p2, d2) = (&o.coeffs[..4], &o.coeffs[4..]);
        let primal = qmul(p1, p2);
        let a = qmul(p1, d2);
        let b = qmul(d1, p2);
        let dual = [a[0].clone() + b[0].clone(), a[1].clone() + b[1].clone(), a[2].clone() + b[2].clone(), a[3].clone() + b[3].clone()];
        DualQuaternion::from_parts(primal, dual)
    }
}

impl<S: Ring> Mul for DualQuaternion<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<S: Ring> Mul<&DualQuaternion<S>> for DualQuaternion<S> {
    type Output = Self;
    fn mul(self, o: &Self) -> Self {
        &self * o
    }
}

impl<S: Ring + fmt::Display> fmt::Display for DualQuaternion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const UNITS: [&str; 8] = ["", "i", "j", "k", "e", "ei", "ej", "ek"];
        let mut first = true;
        for (c, u) in self.coeffs.iter().zip(UNITS) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if u.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c}){u}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<S: fmt::Debug> fmt::Debug for DualQuaternion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

/// A directed line in space, encoded as a dual quaternion with `h^2 = -1`:
/// unit direction `d` in the primal vector part and moment `p x d` in the
/// dual vector part.
#[derive(Clone, Debug, PartialEq)]
pub struct Line<T> {
    value: DualQuaternion<T>,
}

impl<T: Scalar> Line<T> {
    pub fn new(value: DualQuaternion<T>) -> Result<Self> {
        if value.is_line() {
            Ok(Self { value })
        } else {
            Err(Error::NotALine)
        }
    }

    /// Line through `point` with direction `direction`. The direction is
    /// normalized; on exact backends its length must be rational.
    pub fn from_point_direction(point: Vec3<T>, direction: Vec3<T>) -> Result<Self> {
        let len2 = dot(&direction, &direction);
        if len2.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let len = len2.sqrt_checked().ok_or(Error::InexactNorm)?;
        let d = vscale(&direction, &(T::one() / len));
        let m = cross(&point, &d);
        Ok(Self { value: DualQuaternion::from_vectors(d, m) })
    }

    /// Line from a unit direction and a moment orthogonal to it; both
    /// conditions are checked.
    pub fn from_plucker(direction: Vec3<T>, moment: Vec3<T>) -> Result<Self> {
        Self::new(DualQuaternion::from_vectors(direction, moment))
    }

    pub fn value(&self) -> &DualQuaternion<T> {
        &self.value
    }

    pub fn into_value(self) -> DualQuaternion<T> {
        self.value
    }

    pub fn direction(&self) -> Vec3<T> {
        self.value.primal_vector()
    }

    pub fn moment(&self) -> Vec3<T> {
        self.value.dual_vector()
    }

    /// Point on the line closest to the origin, `d x m`.
    pub fn point(&self) -> Vec3<T> {
        cross(&self.direction(), &self.moment())
    }

    /// Same line with the opposite orientation.
    pub fn reversed(&self) -> Self {
        Self { value: -self.value.clone() }
    }

    pub fn to_f64(&self) -> Line<f64> {
        Line { value: self.value.to_f64() }
    }

    pub fn complexify(&self) -> ComplexDualQuaternion<T> {
        self.value.complexify()
    }
}

impl<T: Scalar> Neg for Line<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.reversed()
    }
}

/// Conjugation action `g h g^-1` of an invertible dual quaternion on a line.
///
/// For `g` in the Study quadric this is the rigid displacement encoded by `g`.
/// The result is a line whenever `h` is, since conjugation preserves `h^2`.
pub fn act<T: Scalar>(g: &DualQuaternion<T>, h: &Line<T>) -> Result<Line<T>> {
    let inv = g.inverse().ok_or(Error::NotInvertible)?;
    let value = g * h.value() * &inv;
    Line::new(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = DualQuaternion<Rational>;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn dq(c: [i64; 8]) -> Q {
        Q::new(c.map(q))
    }

    #[test]
    fn quaternion_unit_table() {
        assert_eq!(Q::i() * Q::j(), Q::k());
        assert_eq!(Q::j() * Q::k(), Q::i());
        assert_eq!(Q::k() * Q::i(), Q::j());
        let minus_one = -Q::one();
        assert_eq!(Q::i().square(), minus_one);
        assert_eq!(Q::j().square(), minus_one);
        assert_eq!(Q::k().square(), minus_one);
        assert_eq!(Q::i() * Q::j() * Q::k(), minus_one);
        assert!(Q::eps().square().is_zero());
        assert_eq!(Q::eps() * Q::i(), Q::i() * Q::eps());
    }

    #[test]
    fn product_with_dual_part() {
        // i * (k - 3ej) = -j - 3ek
        let rhs = Q::k() - (Q::eps() * Q::j()).scale(&q(3));
        assert_eq!(Q::i() * rhs, dq([0, 0, -1, 0, 0, 0, 0, -3]));
    }

    #[test]
    fn norm_of_line_like_elements() {
        let h = Q::i() + (Q::eps() * Q::j()).scale(&q(2));
        assert_eq!(&h * &h.conj(), Q::one());
        assert_eq!(Q::i().norm(), DualNumber::real(q(1)));
        let h = Q::k() + (Q::eps() * Q::i()).scale(&q(3));
        assert_eq!(h.checked_norm().unwrap(), DualNumber::new(q(1), q(0)));
        assert_eq!((Q::scalar(q(2)) + Q::j().scale(&q(3))).trace(), DualNumber::real(q(4)));
    }

    #[test]
    fn conjugation_rules() {
        let a = Q::one() + Q::eps();
        assert_eq!(a.conj(), a);
        assert_eq!(Q::i().conj(), -Q::i());
        let b = Q::scalar(q(2)) + Q::j().scale(&q(3)) + Q::eps() * Q::k();
        assert_eq!(b.conj(), dq([2, 0, -3, 0, 0, 0, 0, -1]));
    }

    #[test]
    fn line_predicate() {
        assert!(Q::i().is_line());
        assert!((Q::k() + (Q::eps() * Q::i()).scale(&q(3))).is_line());
        assert!(!(Q::one() + Q::i()).is_line());
    }

    #[test]
    fn line_from_point_and_direction() {
        let l = Line::from_point_direction([q(0), q(0), q(0)], [q(1), q(0), q(0)]).unwrap();
        assert_eq!(l.value(), &Q::i());
        let l = Line::from_point_direction([q(0), q(3), q(0)], [q(0), q(0), q(1)]).unwrap();
        assert_eq!(l.value(), &dq([0, 0, 0, 1, 0, 3, 0, 0]));
        let l = Line::from_point_direction([q(5), q(0), q(0)], [q(2), q(0), q(0)]).unwrap();
        assert_eq!(l.value(), &Q::i());
        assert_eq!(Line::from_point_direction([q(0), q(0), q(0)], [q(0), q(0), q(0)]), Err(Error::ZeroDirection));
        assert_eq!(Line::from_point_direction([q(0), q(0), q(0)], [q(1), q(1), q(0)]), Err(Error::InexactNorm));
        // Pythagorean direction (2, 3, 6) / 7 is fine.
        let l = Line::from_point_direction([q(1), q(0), q(0)], [q(2), q(3), q(6)]).unwrap();
        assert!(l.value().is_line());
    }

    #[test]
    fn action_rotates_and_translates() {
        let h = Line::new(Q::i()).unwrap();
        assert_eq!(act(&Q::one(), &h).unwrap(), h);

        // (1 - k) is sqrt(2) times the quarter turn cos(pi/4) - sin(pi/4) k;
        // conjugation ignores the scale. It maps the x-axis onto -y.
        let g = Q::one() - Q::k();
        assert_eq!(act(&g, &h).unwrap().value(), &(-Q::j()));
        // ... and its inverse rotation (1 + k) maps x onto +y.
        let g = Q::one() + Q::k();
        assert_eq!(act(&g, &h).unwrap().value(), &Q::j());

        // Translation by (c, 0, 0): the y-axis moves to the parallel line
        // through (c, 0, 0).
        let c = Rational::ratio(5, 2);
        let t = Q::one() + (Q::eps() * Q::i()).scale(&(c.clone() / q(2)));
        let moved = act(&t, &Line::new(Q::j()).unwrap()).unwrap();
        assert_eq!(moved.direction(), [q(0), q(1), q(0)]);
        assert_eq!(moved.point(), [c, q(0), q(0)]);

        assert_eq!(act(&Q::eps(), &h), Err(Error::NotInvertible));
    }

    #[test]
    fn inverse_of_displacement() {
        let g = Q::one() + Q::k() + (Q::eps() * Q::i()).scale(&q(3));
        let inv = g.inverse().unwrap();
        assert_eq!(&g * &inv, Q::one());
        assert_eq!(&inv * &g, Q::one());
        assert!(Q::eps().inverse().is_none());
    }

    #[test]
    fn complex_restriction_matches_real() {
        let a = dq([1, 2, -3, 4, 0, 5, -1, 2]);
        let b = dq([-2, 0, 1, 1, 3, 0, 2, -4]);
        let prod = (a.complexify() * b.complexify()).real_part();
        assert_eq!(prod, &a * &b);
        assert!((a.complexify() * b.complexify()).imag_part().is_zero());
    }
}
