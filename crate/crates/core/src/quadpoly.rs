//! Quad polynomials of four consecutive axes, by elimination and in closed
//! form, and the gcd conditions they impose on bonds between opposite
//! joints.
//!
//! For lines `h1..h4` the bilinear system
//! `(i - h1)(t2 - h2)(t3 - h3)(i - h4) = 0` in `(t2, t3)` has two solutions.
//! For each, `m = (i - h1)(t2 - h2)(t3 - h3)` is a multiple `y (1 + x e) g`
//! of `g = (i - h1)(i + h4)`, and the quad polynomial is the monic quadratic
//! with the two resulting values of `x` as roots. Here `i` is the complex
//! unit, which commutes with the quaternion units.
//!
//! The two solutions are conjugate over the field of the coefficients, so the
//! elimination works in `K[s] / (s^2 - D)` where `D` is the discriminant of
//! the eliminant; both roots are handled at once and no square roots are
//! taken.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

use crate::dualquat::{ComplexDualQuaternion, Line};
use crate::error::{Error, Result};
use crate::linkage::{triple_coupling_dimension, DHParams, Linkage6R, N};
use crate::scalar::{complex_l1, Scalar};

type C<T> = Complex<T>;

/// Default seed for the random linear combinations used in elimination.
pub const DEFAULT_SEED: u64 = 0x6865_786c;

const MAX_ATTEMPTS: u64 = 5;

fn cr<T: Scalar>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

fn im<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::one())
}

fn cz<T: Scalar>(z: &C<T>, scale: &T) -> bool {
    complex_l1(z).is_negligible(scale)
}

/// Monic quadratic `x^2 + a1 x + a0` with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadPolynomial<T> {
    pub a1: C<T>,
    pub a0: C<T>,
}

impl<T: Scalar> QuadPolynomial<T> {
    pub fn new(a1: C<T>, a0: C<T>) -> Self {
        Self { a1, a0 }
    }

    /// `x^2`.
    pub fn square() -> Self {
        Self::new(C::zero(), C::zero())
    }

    /// `(x + p)^2 + q`.
    pub fn from_completed_square(p: C<T>, q: C<T>) -> Self {
        let two = cr(T::from_i64(2));
        Self::new(two * p.clone(), p.clone() * p + q)
    }

    pub fn eval(&self, x: &C<T>) -> C<T> {
        x.clone() * x.clone() + self.a1.clone() * x.clone() + self.a0.clone()
    }

    /// `p(x + w)`.
    pub fn shift(&self, w: &C<T>) -> Self {
        let two = cr(T::from_i64(2));
        Self::new(self.a1.clone() + two * w.clone(), w.clone() * w.clone() + self.a1.clone() * w.clone() + self.a0.clone())
    }

    /// Mean of the two roots, `-a1 / 2`.
    pub fn root_mean(&self) -> C<T> {
        -self.a1.clone() / cr(T::from_i64(2))
    }

    pub fn discriminant(&self) -> C<T> {
        self.a1.clone() * self.a1.clone() - cr(T::from_i64(4)) * self.a0.clone()
    }

    /// Complex conjugate of every coefficient.
    pub fn conj(&self) -> Self {
        Self::new(self.a1.conj(), self.a0.conj())
    }

    /// Resultant with another monic quadratic:
    /// `(a0 - b0)^2 + (a1 - b1)(a1 b0 - a0 b1)`.
    pub fn resultant(&self, other: &Self) -> C<T> {
        let d0 = self.a0.clone() - other.a0.clone();
        let d1 = self.a1.clone() - other.a1.clone();
        d0.clone() * d0 + d1 * (self.a1.clone() * other.a0.clone() - self.a0.clone() * other.a1.clone())
    }

    fn scale(&self) -> T {
        let m = complex_l1(&self.a1) * complex_l1(&self.a1) + complex_l1(&self.a0);
        if m.is_zero() {
            T::one()
        } else {
            m
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        let s = self.scale() + other.scale();
        let scale1 = (self.scale() + other.scale()).abs();
        cz(&(self.a1.clone() - other.a1.clone()), &scale1) && cz(&(self.a0.clone() - other.a0.clone()), &s)
    }

    /// Degree of the gcd with another monic quadratic: 2 if equal, 1 if
    /// the resultant vanishes, else 0. Floats use a relative threshold of
    /// `1e-8` against the coefficient magnitudes.
    pub fn gcd_degree(&self, other: &Self) -> usize {
        if T::EXACT {
            if self == other {
                2
            } else if self.resultant(other).is_zero() {
                1
            } else {
                0
            }
        } else {
            let tol = T::from_f64(1e-8);
            let s = self.scale() + other.scale();
            let close = |a: &C<T>, b: &C<T>, sc: &T| complex_l1(&(a.clone() - b.clone())) <= tol.clone() * sc.clone();
            if close(&self.a1, &other.a1, &s) && close(&self.a0, &other.a0, &s) {
                2
            } else if complex_l1(&self.resultant(other)) <= tol.clone() * s.clone() * s {
                1
            } else {
                0
            }
        }
    }

    pub fn to_f64(&self) -> QuadPolynomial<f64> {
        let f = |z: &C<T>| Complex::new(z.re.to_f64(), z.im.to_f64());
        QuadPolynomial::new(f(&self.a1), f(&self.a0))
    }

    /// Numerical roots.
    pub fn roots_f64(&self) -> [Complex<f64>; 2] {
        let p = self.to_f64();
        let d = (p.a1 * p.a1 - 4.0 * p.a0).sqrt();
        [(-p.a1 + d) / 2.0, (-p.a1 - d) / 2.0]
    }
}

impl<T: Scalar> fmt::Display for QuadPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |z: &C<T>| {
            if z.im.is_zero() {
                format!("{}", z.re)
            } else {
                format!("({} + {}i)", z.re, z.im)
            }
        };
        let term = |z: &C<T>| {
            let s = c(z);
            match s.strip_prefix('-') {
                Some(rest) => format!(" - {rest}"),
                None => format!(" + {s}"),
            }
        };
        write!(f, "x^2")?;
        if !self.a1.is_zero() {
            write!(f, "{}x", term(&self.a1))?;
        }
        if !self.a0.is_zero() {
            write!(f, "{}", term(&self.a0))?;
        }
        Ok(())
    }
}

/// Element `r + q s` of `K[s] / (s^2 - delta)`.
#[derive(Clone, Debug)]
struct Ext<T> {
    r: C<T>,
    q: C<T>,
}

struct ExtRing<T> {
    delta: C<T>,
}

impl<T: Scalar> ExtRing<T> {
    fn scalar(&self, r: C<T>) -> Ext<T> {
        Ext { r, q: C::zero() }
    }

    fn add(&self, a: &Ext<T>, b: &Ext<T>) -> Ext<T> {
        Ext { r: a.r.clone() + b.r.clone(), q: a.q.clone() + b.q.clone() }
    }

    fn neg(&self, a: &Ext<T>) -> Ext<T> {
        Ext { r: -a.r.clone(), q: -a.q.clone() }
    }

    fn mul(&self, a: &Ext<T>, b: &Ext<T>) -> Ext<T> {
        Ext {
            r: a.r.clone() * b.r.clone() + a.q.clone() * b.q.clone() * self.delta.clone(),
            q: a.r.clone() * b.q.clone() + a.q.clone() * b.r.clone(),
        }
    }

    fn smul(&self, k: &C<T>, a: &Ext<T>) -> Ext<T> {
        Ext { r: k.clone() * a.r.clone(), q: k.clone() * a.q.clone() }
    }

    /// `a * conj(a)`, zero iff `a` vanishes at one of the two roots.
    fn norm(&self, a: &Ext<T>) -> C<T> {
        a.r.clone() * a.r.clone() - a.q.clone() * a.q.clone() * self.delta.clone()
    }

    fn inverse(&self, a: &Ext<T>, scale: &T) -> Option<Ext<T>> {
        let n = self.norm(a);
        if cz(&n, scale) {
            return None;
        }
        Some(Ext { r: a.r.clone() / n.clone(), q: -a.q.clone() / n })
    }

    /// Vanishes at both roots (only the rational part when `delta = 0`).
    fn is_zero(&self, a: &Ext<T>, scale: &T) -> bool {
        cz(&a.r, scale) && (cz(&self.delta, &T::one()) || cz(&a.q, scale))
    }

    /// Rough size of the values at the two roots.
    fn magnitude(&self, a: &Ext<T>) -> T {
        if T::EXACT {
            return T::one();
        }
        let root = complex_l1(&self.delta).to_f64().sqrt();
        complex_l1(&a.r) + complex_l1(&a.q) * T::from_f64(root)
    }
}

/// Bilinear form `a u2 u3 + b u2 v3 + c v2 u3 + d v2 v3` with
/// dual-quaternion coefficients.
struct Bilinear<T> {
    uu: ComplexDualQuaternion<T>,
    uv: ComplexDualQuaternion<T>,
    vu: ComplexDualQuaternion<T>,
    vv: ComplexDualQuaternion<T>,
}

impl<T: Scalar> Bilinear<T> {
    fn coord(&self, j: usize) -> [C<T>; 4] {
        [self.uu[j].clone(), self.uv[j].clone(), self.vu[j].clone(), self.vv[j].clone()]
    }

    fn right_mul(&self, r: &ComplexDualQuaternion<T>) -> Self {
        Self { uu: &self.uu * r, uv: &self.uv * r, vu: &self.vu * r, vv: &self.vv * r }
    }

    fn max_abs(&self) -> T {
        [&self.uu, &self.uv, &self.vu, &self.vv].iter().map(|q| q.max_abs()).fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    fn eval(&self, ring: &ExtRing<T>, j: usize, t: &[Ext<T>; 4]) -> Ext<T> {
        let [a, b, c, d] = self.coord(j);
        let [u2, v2, u3, v3] = t;
        let terms = [(a, u2, u3), (b, u2, v3), (c, v2, u3), (d, v2, v3)];
        terms.iter().fold(ring.scalar(C::zero()), |acc, (k, x, y)| ring.add(&acc, &ring.smul(k, &ring.mul(x, y))))
    }
}

/// Joint parameters `t2 = u2 : v2`, `t3 = u3 : v3` of both solutions, stored
/// over `K[s] / (s^2 - delta)`.
#[derive(Clone, Debug)]
pub struct QuadElimination<T> {
    pub poly: QuadPolynomial<T>,
    /// Discriminant of the eliminant in `t2`; zero for a double solution.
    pub delta: C<T>,
    params: [Ext<T>; 4],
}

impl<T: Scalar> QuadElimination<T> {
    /// The two solutions `(t2, t3)` as complex projective pairs
    /// `[(u2, v2), (u3, v3)]`, obtained by substituting `s = +-sqrt(delta)`.
    pub fn solutions_f64(&self) -> [[(Complex<f64>, Complex<f64>); 2]; 2] {
        let d = Complex::new(self.delta.re.to_f64(), self.delta.im.to_f64()).sqrt();
        let f = |e: &Ext<T>, s: Complex<f64>| {
            Complex::new(e.r.re.to_f64(), e.r.im.to_f64()) + Complex::new(e.q.re.to_f64(), e.q.im.to_f64()) * s
        };
        [d, -d].map(|s| {
            let p: Vec<Complex<f64>> = self.params.iter().map(|e| f(e, s)).collect();
            [(p[0], p[1]), (p[2], p[3])]
        })
    }
}

fn random_complex<T: Scalar, R: Rng>(rng: &mut R) -> C<T> {
    Complex::new(T::from_i64(rng.gen_range(-9..=9)), T::from_i64(rng.gen_range(-9..=9)))
}

fn parallel<T: Scalar>(a: &Line<T>, b: &Line<T>) -> bool {
    let c = crate::dualquat::cross(&a.direction(), &b.direction());
    crate::dualquat::dot(&c, &c).is_negligible(&T::one())
}

/// The quad polynomial of `(h1, h2, h3, h4)`.
pub fn quad_poly_elim<T: Scalar>(h: [&Line<T>; 4], seed: u64) -> Result<QuadPolynomial<T>> {
    quad_poly_elim_detailed(h, seed).map(|e| e.poly)
}

/// As [`quad_poly_elim`], also returning the solutions of the bilinear
/// system.
pub fn quad_poly_elim_detailed<T: Scalar>(h: [&Line<T>; 4], seed: u64) -> Result<QuadElimination<T>> {
    let [h1, h2, h3, h4] = h;
    if triple_coupling_dimension(h1, h2, h3) != 8 {
        return Err(Error::Precondition("coupling dimension of (h1, h2, h3) must be 8".into()));
    }
    if parallel(h1, h2) || parallel(h3, h4) {
        return Err(Error::Precondition("h1 parallel to h2 or h3 parallel to h4".into()));
    }
    if parallel(h1, h4) {
        return Err(Error::Precondition("h1 parallel to h4 needs a different generator".into()));
    }
    let one = ComplexDualQuaternion::<T>::one();
    let i = one.scale(&im());
    let (q1, q2, q3, q4) = (h1.complexify(), h2.complexify(), h3.complexify(), h4.complexify());
    let left = &i - &q1;
    let right = &i - &q4;
    let m = Bilinear { uu: left.clone(), uv: -(&left * &q3), vu: -(&left * &q2), vv: &(&left * &q2) * &q3 };
    let p = m.right_mul(&right);
    let g = &left * &(&i + &q4);
    let pscale = p.max_abs();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = Error::NotZeroDimensional("eliminant vanishes identically".into());
    for _ in 0..MAX_ATTEMPTS {
        match eliminate_once(&p, &m, &g, &pscale, &mut rng) {
            Ok(e) => return Ok(e),
            Err(Attempt::Fatal(e)) => return Err(e),
            Err(Attempt::Retry(e)) => last_err = e,
        }
    }
    Err(last_err)
}

enum Attempt {
    Retry(Error),
    Fatal(Error),
}

fn combine<T: Scalar, R: Rng>(p: &Bilinear<T>, rng: &mut R) -> ([C<T>; 4], T) {
    let mut out: [C<T>; 4] = std::array::from_fn(|_| C::zero());
    for j in 0..8 {
        let lam = random_complex::<T, _>(rng);
        for (o, c) in out.iter_mut().zip(p.coord(j)) {
            *o = o.clone() + lam.clone() * c;
        }
    }
    let scale = out.iter().map(complex_l1).fold(T::zero(), |a, b| a + b);
    (out, scale)
}

fn eliminate_once<T: Scalar, R: Rng>(
    p: &Bilinear<T>,
    m: &Bilinear<T>,
    g: &ComplexDualQuaternion<T>,
    pscale: &T,
    rng: &mut R,
) -> std::result::Result<QuadElimination<T>, Attempt> {
    let ([a1, b1, c1, d1], s1) = combine(p, rng);
    let ([a2, b2, c2, d2], s2) = combine(p, rng);
    // Rows (a u2 + c v2, b u2 + d v2) of both forms must be dependent.
    let qa = a1.clone() * b2.clone() - b1.clone() * a2.clone();
    let qb = a1.clone() * d2.clone() + c1.clone() * b2.clone() - b1.clone() * c2.clone() - d1.clone() * a2.clone();
    let qc = c1.clone() * d2.clone() - d1.clone() * c2.clone();
    let sq = s1.clone() * s2.clone();
    let two = cr(T::from_i64(2));
    let delta = qb.clone() * qb.clone() - cr(T::from_i64(4)) * qa.clone() * qc.clone();
    let delta = if cz(&delta, &(sq.clone() * sq.clone())) { C::zero() } else { delta };
    let ring = ExtRing { delta: delta.clone() };
    let s = Ext { r: C::zero(), q: C::one() };
    let (u2, v2) = if !cz(&qa, &sq) {
        (ring.add(&ring.scalar(-qb.clone()), &s), ring.scalar(two * qa))
    } else if !cz(&qc, &sq) {
        (ring.scalar(two * qc), ring.add(&ring.scalar(-qb.clone()), &s))
    } else if !cz(&qb, &sq) {
        let inv = C::<T>::one() / (two * qb.clone());
        let u = ring.smul(&inv, &ring.add(&ring.scalar(qb.clone()), &s));
        let v = ring.smul(&inv, &ring.add(&ring.scalar(qb), &ring.neg(&s)));
        (u, v)
    } else {
        return Err(Attempt::Retry(Error::NotZeroDimensional("random eliminant vanishes identically".into())));
    };

    // Kernel direction (u3 : v3) of either form's row; pick one that is
    // nonzero at both solutions.
    let mut t3 = None;
    for (a, b, c, d) in [(&a1, &b1, &c1, &d1), (&a2, &b2, &c2, &d2)] {
        let u3 = ring.neg(&ring.add(&ring.smul(b, &u2), &ring.smul(d, &v2)));
        let v3 = ring.add(&ring.smul(a, &u2), &ring.smul(c, &v2));
        let lam = random_complex::<T, _>(rng);
        let probe = ring.add(&u3, &ring.smul(&lam, &v3));
        let scale = ring.magnitude(&u3) + ring.magnitude(&v3);
        if ring.inverse(&probe, &(scale.clone() * scale)).is_some() {
            t3 = Some((u3, v3));
            break;
        }
    }
    let Some((u3, v3)) = t3 else {
        return Err(Attempt::Retry(Error::NotZeroDimensional("no isolated solution for t3".into())));
    };
    let params = [u2, v2, u3, v3];

    let mag = (ring.magnitude(&params[0]) + ring.magnitude(&params[1])) * (ring.magnitude(&params[2]) + ring.magnitude(&params[3]));
    let check_scale = pscale.clone() * mag.clone();
    for j in 0..8 {
        if !ring.is_zero(&p.eval(&ring, j, &params), &check_scale) {
            return Err(Attempt::Retry(Error::NotZeroDimensional("solutions of the random eliminant do not solve the system".into())));
        }
    }

    // m = y (1 + x e) g: y from the primal part, x from the dual part.
    let mv: Vec<Ext<T>> = (0..8).map(|j| m.eval(&ring, j, &params)).collect();
    let gbar: Vec<C<T>> = (0..4).map(|j| g[j].conj()).collect();
    let gnorm = (0..4).fold(C::zero(), |acc: C<T>, j| acc + g[j].clone() * gbar[j].clone());
    let gamma = (0..4).fold(C::zero(), |acc: C<T>, j| acc + g[j + 4].clone() * gbar[j].clone()) / gnorm.clone();
    let alpha = (0..4).fold(ring.scalar(C::zero()), |acc, j| ring.add(&acc, &ring.smul(&gbar[j], &mv[j])));
    let beta = (0..4).fold(ring.scalar(C::zero()), |acc, j| ring.add(&acc, &ring.smul(&gbar[j], &mv[j + 4])));
    let mscale = m.max_abs() * mag * (g.max_abs() + T::one());
    let amag = ring.magnitude(&alpha);
    let Some(alpha_inv) = ring.inverse(&alpha, &(amag.clone() * amag)) else {
        return Err(Attempt::Fatal(Error::Precondition("quad polynomial has degree below 2".into())));
    };
    // y g must reproduce the primal part of m exactly.
    let y = ring.smul(&(C::<T>::one() / gnorm), &alpha);
    for j in 0..4 {
        let diff = ring.add(&mv[j], &ring.neg(&ring.smul(&g[j], &y)));
        if !ring.is_zero(&diff, &mscale) {
            return Err(Attempt::Fatal(Error::Internal("solution does not lie on the generator line".into())));
        }
    }
    let x = ring.add(&ring.mul(&beta, &alpha_inv), &ring.neg(&ring.scalar(gamma)));
    let poly = QuadPolynomial::new(-(two_c::<T>() * x.r.clone()), ring.norm(&x));
    Ok(QuadElimination { poly, delta, params })
}

fn two_c<T: Scalar>() -> C<T> {
    cr(T::from_i64(2))
}

/// The invariant quad polynomials `Q_k^+` and `Q_k^-`, `k = 0..5`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantQuadSet<T> {
    pub plus: [QuadPolynomial<T>; N],
    pub minus: [QuadPolynomial<T>; N],
}

impl<T: Scalar> InvariantQuadSet<T> {
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.plus.iter().zip(&other.plus).chain(self.minus.iter().zip(&other.minus)).all(|(a, b)| a.approx_eq(b))
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        let d = |a: &C<T>, b: &C<T>| complex_l1(&(a.clone() - b.clone())).to_f64();
        self.plus
            .iter()
            .zip(&other.plus)
            .chain(self.minus.iter().zip(&other.minus))
            .map(|(a, b)| d(&a.a1, &b.a1).max(d(&a.a0, &b.a0)))
            .fold(0.0, f64::max)
    }

    pub fn family(&self, sign: Sign) -> &[QuadPolynomial<T>; N] {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Raw quad polynomials `Q_(h_k, h_(k+1), h_(k+2), h_(k+3))` for `k = 0..5`.
pub fn raw_quads<T: Scalar>(l: &Linkage6R<T>, seed: u64) -> Result<[QuadPolynomial<T>; N]> {
    let mut out = Vec::with_capacity(N);
    for k in 0..N {
        out.push(quad_poly_elim([l.axis(k), l.axis(k + 1), l.axis(k + 2), l.axis(k + 3)], seed)?);
    }
    Ok(out.try_into().expect("six polynomials"))
}

/// Shifts for centering: `w_k` is the mean of the four roots of the raw
/// polynomials `k` and `k + 3`.
pub fn centering_shifts<T: Scalar>(raw: &[QuadPolynomial<T>; N]) -> [C<T>; N] {
    std::array::from_fn(|k| -(raw[k].a1.clone() + raw[(k + 3) % N].a1.clone()) / cr(T::from_i64(4)))
}

fn centered<T: Scalar>(l: &Linkage6R<T>, seed: u64) -> Result<[QuadPolynomial<T>; N]> {
    let raw = raw_quads(l, seed)?;
    let w = centering_shifts(&raw);
    Ok(std::array::from_fn(|k| raw[k].shift(&w[k])))
}

/// Axes 0, 2 and 4 reversed; its plus family is the minus family of `l`.
pub fn minus_linkage<T: Scalar>(l: &Linkage6R<T>) -> Linkage6R<T> {
    l.flip_mask(0b010101)
}

/// Invariant quad polynomials computed from the axes by elimination and
/// centering. Requires all triple coupling dimensions to be 8.
pub fn invariant_quads_elim<T: Scalar>(l: &Linkage6R<T>, seed: u64) -> Result<InvariantQuadSet<T>> {
    Ok(InvariantQuadSet { plus: centered(l, seed)?, minus: centered(&minus_linkage(l), seed)? })
}

/// Closed form of `Q_k^+` in the DH parameters: `(x + A)^2 + B` with
///
/// `A = (f_k - f_(k+2) - f_(k+3) + f_(k+5)) / 4 + i (s_k - s_(k+3)) / 4`,
/// `B = d_(k+1)^2 / 4 - (z^2 + w^2 + 2 c_(k+1) z w) / 4`,
///
/// where `z = b_k - i s_(k+1)`, `w = b_(k+2) - i s_(k+2)` and
/// `d_(k+1)^2 = b_(k+1)^2 (1 - c_(k+1)^2)`.
fn closed_form_plus<T: Scalar>(p: &DHParams<T>, k: usize) -> QuadPolynomial<T> {
    let (b, c, s) = (|i: usize| p.b[i % N].clone(), |i: usize| p.c[i % N].clone(), |i: usize| p.s[i % N].clone());
    let f = |i: usize| p.f(i);
    let quarter = T::ratio(1, 4);
    let shift = Complex::new((f(k) - f(k + 2) - f(k + 3) + f(k + 5)) * quarter.clone(), (s(k) - s(k + 3)) * quarter.clone());
    let z = Complex::new(b(k), -s(k + 1));
    let w = Complex::new(b(k + 2), -s(k + 2));
    let two_c = cr(T::from_i64(2) * c(k + 1));
    let mixed = z.clone() * z.clone() + w.clone() * w.clone() + two_c * z * w;
    let constant = (cr(p.distance_squared(k + 1)) - mixed) * cr(quarter);
    QuadPolynomial::from_completed_square(shift, constant)
}

/// The closed form exactly as it is usually quoted:
///
/// ```text
/// (x + (f_k - f_(k+2) - f_(k+3) + f_(k+5))/2 + i (s_(k+3) - s_k)/4)^2
///   + c_(k+1)/2 (b_k b_(k+2) - s_(k+1) s_(k+2))
///   + i/2 (s_(k+1)(b_k - b_(k+2) c_(k+1)) + s_(k+2)(b_(k+2) - b_k c_(k+1)))
/// ```
///
/// It disagrees with the centered elimination polynomials and is kept for
/// comparison only.
fn quoted_form_plus<T: Scalar>(p: &DHParams<T>, k: usize) -> QuadPolynomial<T> {
    let (b, c, s) = (|i: usize| p.b[i % N].clone(), |i: usize| p.c[i % N].clone(), |i: usize| p.s[i % N].clone());
    let f = |i: usize| p.f(i);
    let half = T::ratio(1, 2);
    let shift = Complex::new((f(k) - f(k + 2) - f(k + 3) + f(k + 5)) * half.clone(), (s(k + 3) - s(k)) * T::ratio(1, 4));
    let constant = Complex::new(
        c(k + 1) * half.clone() * (b(k) * b(k + 2) - s(k + 1) * s(k + 2)),
        half * (s(k + 1) * (b(k) - b(k + 2) * c(k + 1)) + s(k + 2) * (b(k + 2) - b(k) * c(k + 1))),
    );
    QuadPolynomial::from_completed_square(shift, constant)
}

/// Parameters of the linkage with axes 0, 2, 4 reversed: all `b`, `c`
/// negated and `s_k` negated for even `k`.
pub fn minus_params<T: Scalar>(p: &DHParams<T>) -> DHParams<T> {
    p.flip_mask(0b010101)
}

fn quad_set<T: Scalar>(p: &DHParams<T>, form: fn(&DHParams<T>, usize) -> QuadPolynomial<T>) -> InvariantQuadSet<T> {
    let m = minus_params(p);
    InvariantQuadSet { plus: std::array::from_fn(|k| form(p, k)), minus: std::array::from_fn(|k| form(&m, k)) }
}

/// Invariant quad polynomials from the closed form in the DH parameters.
pub fn invariant_quads<T: Scalar>(p: &DHParams<T>) -> InvariantQuadSet<T> {
    quad_set(p, closed_form_plus)
}

/// Invariant quad polynomials from the commonly quoted closed form; see
/// [`quoted_form_plus`].
pub fn invariant_quads_as_printed<T: Scalar>(p: &DHParams<T>) -> InvariantQuadSet<T> {
    quad_set(p, quoted_form_plus)
}

/// Elimination versus closed form for one linkage.
#[derive(Clone, Debug)]
pub struct Crosscheck<T> {
    pub elimination: InvariantQuadSet<T>,
    pub closed_form: InvariantQuadSet<T>,
    /// Centering shifts `w_k` of the plus and minus families.
    pub shifts_plus: [C<T>; N],
    pub shifts_minus: [C<T>; N],
    pub max_deviation: f64,
    pub matches: bool,
}

/// Centers the elimination polynomials of `l` and compares them with the
/// closed form evaluated on `dh_from_lines(l)`. Exact equality on exact
/// backends, relative tolerance otherwise.
pub fn crosscheck_invariant_vs_elim<T: Scalar>(l: &Linkage6R<T>, seed: u64) -> Result<Crosscheck<T>> {
    let p = l.dh_params()?;
    let raw_plus = raw_quads(l, seed)?;
    let raw_minus = raw_quads(&minus_linkage(l), seed)?;
    let shifts_plus = centering_shifts(&raw_plus);
    let shifts_minus = centering_shifts(&raw_minus);
    let elimination = InvariantQuadSet {
        plus: std::array::from_fn(|k| raw_plus[k].shift(&shifts_plus[k])),
        minus: std::array::from_fn(|k| raw_minus[k].shift(&shifts_minus[k])),
    };
    let closed_form = invariant_quads(&p);
    let matches = if T::EXACT { elimination == closed_form } else { elimination.approx_eq(&closed_form) };
    let max_deviation = elimination.max_deviation(&closed_form);
    Ok(Crosscheck { elimination, closed_form, shifts_plus, shifts_minus, max_deviation, matches })
}

/// gcd data for one opposite pair `(k, k + 3)` and one sign family.
#[derive(Clone, Debug, PartialEq)]
pub struct BondCondition<T> {
    /// `k` in `0..3`.
    pub pair: usize,
    pub sign: Sign,
    pub gcd_degree: usize,
    pub resultant: C<T>,
    pub discriminant_match: bool,
}

/// Upper bounds on bonds between opposite joints, from the gcd degrees of
/// opposite invariant quad polynomials. A common root is necessary for a
/// bond, not sufficient.
#[derive(Clone, Debug, PartialEq)]
pub struct BondConditionReport<T> {
    pub entries: Vec<BondCondition<T>>,
}

impl<T: Scalar> BondConditionReport<T> {
    pub fn from_quads(q: &InvariantQuadSet<T>) -> Self {
        let mut entries = Vec::with_capacity(6);
        for pair in 0..3 {
            for sign in [Sign::Plus, Sign::Minus] {
                let fam = q.family(sign);
                let (a, b) = (&fam[pair], &fam[pair + 3]);
                let (da, db) = (a.discriminant(), b.discriminant());
                let discriminant_match =
                    if T::EXACT { da == db } else { cz(&(da.clone() - db.clone()), &(complex_l1(&da) + complex_l1(&db) + T::one())) };
                entries.push(BondCondition { pair, sign, gcd_degree: a.gcd_degree(b), resultant: a.resultant(b), discriminant_match });
            }
        }
        Self { entries }
    }

    pub fn gcd_degree(&self, pair: usize, sign: Sign) -> usize {
        self.entries.iter().find(|e| e.pair == pair && e.sign == sign).map_or(0, |e| e.gcd_degree)
    }
}

/// gcd degrees and resultants of `(Q_k^+-, Q_(k+3)^+-)` for `k = 0, 1, 2`.
pub fn bond_conditions<T: Scalar>(p: &DHParams<T>) -> BondConditionReport<T> {
    BondConditionReport::from_quads(&invariant_quads(p))
}
