//! Closed 6R linkages, their Denavit-Hartenberg invariants and chain products.
//!
//! Indexing is 0-based throughout: axis `i` is the joint usually written
//! h_(i+1). DH parameter `c[i]`, `b[i]` relate axes `i` and `i+1`; the offset
//! `s[i]` lives on axis `i`. All indices are taken mod 6.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dualquat::{cross, dot, vadd, vscale, vsub, DualQuaternion, Line, Vec3};
use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

pub const N: usize = 6;

#[inline]
pub fn wrap(i: isize) -> usize {
    i.rem_euclid(N as isize) as usize
}

/// Coefficient rings a real linkage can be evaluated over.
pub trait Embed<T>: Ring {
    fn embed(t: &T) -> Self;
}

impl<T: Scalar> Embed<T> for T {
    fn embed(t: &T) -> Self {
        t.clone()
    }
}

impl<T: Scalar> Embed<T> for Complex<T> {
    fn embed(t: &T) -> Self {
        Complex::new(t.clone(), T::zero())
    }
}

/// Point `(num : den)` of the projective line; `(1 : 0)` is infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct JointParameter<S> {
    pub num: S,
    pub den: S,
}

impl<S: Ring> JointParameter<S> {
    pub fn new(num: S, den: S) -> Option<Self> {
        (!(num.is_zero() && den.is_zero())).then_some(Self { num, den })
    }

    pub fn finite(t: S) -> Self {
        Self { num: t, den: S::one() }
    }

    pub fn infinity() -> Self {
        Self { num: S::one(), den: S::zero() }
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    /// The rotation factor `num - den * h`.
    pub fn factor(&self, h: &DualQuaternion<S>) -> DualQuaternion<S> {
        DualQuaternion::scalar(self.num.clone()) - h.scale(&self.den)
    }

    /// Projective equality `(a : b) ~ (c : d)`.
    pub fn projectively_eq(&self, other: &Self) -> bool {
        (self.num.clone() * other.den.clone()) == (self.den.clone() * other.num.clone())
    }
}

impl<T: Scalar> JointParameter<T> {
    /// `(cos a : sin a)`; `a = 0` is the identity rotation.
    pub fn from_half_angle(a: f64) -> Self {
        Self { num: T::from_f64(a.cos()), den: T::from_f64(a.sin()) }
    }

    /// Affine value `num / den`, `None` at infinity.
    pub fn value(&self) -> Option<T> {
        (!self.den.is_zero()).then(|| self.num.clone() / self.den.clone())
    }
}

/// Ordered six-tuple of joint axes.
#[derive(Clone, Debug, PartialEq)]
pub struct Linkage6R<T> {
    axes: [Line<T>; N],
}

impl<T: Scalar> Linkage6R<T> {
    /// Validates `h_i != +-h_(i+1)` and that adjacent axes are not parallel.
    pub fn new(axes: [Line<T>; N]) -> Result<Self> {
        for i in 0..N {
            let (a, b) = (&axes[i], &axes[(i + 1) % N]);
            if a == b || a.value() == &(-b.value().clone()) {
                return Err(Error::AdjacentCoincide { joint: i + 1 });
            }
            let cr = cross(&a.direction(), &b.direction());
            if dot(&cr, &cr).is_negligible(&T::one()) {
                return Err(Error::AdjacentParallel { joint: i + 1 });
            }
        }
        Ok(Self { axes })
    }

    /// Skips the adjacency checks; used for planar test mechanisms.
    pub fn new_unchecked(axes: [Line<T>; N]) -> Self {
        Self { axes }
    }

    pub fn from_dual_quaternions(values: [DualQuaternion<T>; N]) -> Result<Self> {
        let mut lines = Vec::with_capacity(N);
        for v in values {
            lines.push(Line::new(v)?);
        }
        Self::new(lines.try_into().expect("six lines"))
    }

    pub fn axes(&self) -> &[Line<T>; N] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Line<T> {
        &self.axes[i % N]
    }

    pub fn to_f64(&self) -> Linkage6R<f64> {
        Linkage6R { axes: std::array::from_fn(|i| self.axes[i].to_f64()) }
    }

    /// Replaces `h_i` by `-h_i`.
    pub fn flip_axis(&self, i: usize) -> Self {
        let mut axes = self.axes.clone();
        axes[i % N] = axes[i % N].reversed();
        Self { axes }
    }

    /// Negates every axis whose bit is set in `mask` (bit `i` for axis `i`).
    pub fn flip_mask(&self, mask: u8) -> Self {
        Self { axes: std::array::from_fn(|i| if mask >> i & 1 == 1 { self.axes[i].reversed() } else { self.axes[i].clone() }) }
    }

    /// Cyclic relabelling: axis `i` of the result is axis `i + shift` of `self`.
    pub fn rotated(&self, shift: usize) -> Self {
        Self { axes: std::array::from_fn(|i| self.axes[(i + shift) % N].clone()) }
    }

    /// Product of the factors `(t_k - h_k)` for the `len` joints starting at
    /// `start`, in cyclic order. `len = 0` gives 1, `len = 6` the full
    /// closure product.
    pub fn chain_product<S: Embed<T>>(&self, t: &[JointParameter<S>; N], start: usize, len: usize) -> DualQuaternion<S> {
        assert!(len <= N, "chain length exceeds the loop");
        (0..len).fold(DualQuaternion::one(), |acc, k| {
            let idx = (start + k) % N;
            let h = self.axes[idx].value().map(S::embed);
            acc * t[idx].factor(&h)
        })
    }

    /// Relative closure defect of a real configuration: the largest
    /// non-scalar coefficient of the full product divided by its largest
    /// coefficient. Zero iff the product is a nonzero real scalar.
    pub fn closure_residual(&self, t: &[JointParameter<T>; N]) -> Result<T> {
        let p = self.chain_product(t, 0, N);
        let scale = p.max_abs();
        if scale.is_zero() || p.is_negligible(&T::one()) && T::EXACT {
            return Err(Error::DegenerateConfiguration);
        }
        if !T::EXACT && scale < T::from_f64(1e-300) {
            return Err(Error::DegenerateConfiguration);
        }
        let off =
            p.coeffs().iter().enumerate().filter(|(i, _)| *i != 0).map(|(_, c)| c.abs()).fold(T::zero(), |a, b| if b > a { b } else { a });
        Ok(off / scale)
    }

    /// Coupling dimension of the axes `i, i+1, i+2`.
    pub fn coupling_dimension(&self, i: usize) -> usize {
        triple_coupling_dimension(self.axis(i), self.axis(i + 1), self.axis(i + 2))
    }

    /// The six triple coupling dimensions `l_(k,k+1,k+2)`.
    pub fn coupling_dimensions(&self) -> [usize; N] {
        std::array::from_fn(|i| self.coupling_dimension(i))
    }

    /// Moves the axes into the configuration `r`, keeping the link between
    /// axis 5 and axis 0 fixed: axis `i` is conjugated by the chain product
    /// of the factors before it.
    pub fn transform_by_configuration(&self, r: &[JointParameter<T>; N]) -> Result<Self> {
        let mut axes = self.axes.clone();
        let mut g = DualQuaternion::<T>::one();
        for i in 0..N {
            if i > 0 {
                g = g * r[i - 1].factor(self.axes[i - 1].value());
                axes[i] = crate::dualquat::act(&g, &self.axes[i])?;
            }
        }
        Ok(Self { axes })
    }

    /// Denavit-Hartenberg invariants of consecutive axis pairs.
    pub fn dh_params(&self) -> Result<DHParams<T>> {
        dh_from_lines(self)
    }
}

/// Dimension of the span of all ordered sub-products of three lines
/// (including the empty product 1). Always 4, 6 or 8.
pub fn triple_coupling_dimension<T: Scalar>(a: &Line<T>, b: &Line<T>, c: &Line<T>) -> usize {
    let (a, b, c) = (a.value(), b.value(), c.value());
    let products = [DualQuaternion::one(), a.clone(), b.clone(), c.clone(), a * b, a * c, b * c, &(a * b) * c];
    let rows: Vec<Vec<T>> = products.iter().map(|p| p.coeffs().to_vec()).collect();
    T::matrix_rank(&rows)
}

/// Denavit-Hartenberg invariants: angle cosines, Bennett ratios and offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct DHParams<T> {
    pub c: [T; N],
    pub b: [T; N],
    pub s: [T; N],
}

impl<T: Scalar> DHParams<T> {
    /// Rejects `|c_i| >= 1` (adjacent parallel axes).
    pub fn new(c: [T; N], b: [T; N], s: [T; N]) -> Result<Self> {
        for (i, ci) in c.iter().enumerate() {
            if ci.abs() >= T::one() {
                return Err(Error::AdjacentParallel { joint: i + 1 });
            }
        }
        Ok(Self { c, b, s })
    }

    pub fn from_i64(c: [(i64, i64); N], b: [i64; N], s: [i64; N]) -> Result<Self> {
        Self::new(c.map(|(n, d)| T::ratio(n, d)), b.map(T::from_i64), s.map(T::from_i64))
    }

    /// `f_i = c_i b_i`.
    pub fn f(&self, i: usize) -> T {
        self.c[i % N].clone() * self.b[i % N].clone()
    }

    pub fn fs(&self) -> [T; N] {
        std::array::from_fn(|i| self.f(i))
    }

    /// `sin(phi_i) = +sqrt(1 - c_i^2)`, if representable.
    pub fn sin_phi(&self, i: usize) -> Option<T> {
        let c = &self.c[i % N];
        (T::one() - c.clone() * c.clone()).sqrt_checked()
    }

    /// Unsigned axis distance `|b_i| sin(phi_i)`.
    pub fn distance(&self, i: usize) -> Option<T> {
        self.sin_phi(i).map(|s| s * self.b[i % N].abs())
    }

    /// `d_i^2 = b_i^2 (1 - c_i^2)`, always exact.
    pub fn distance_squared(&self, i: usize) -> T {
        let (b, c) = (&self.b[i % N], &self.c[i % N]);
        b.clone() * b.clone() * (T::one() - c.clone() * c.clone())
    }

    /// Parameters after reversing axis `i`: `c_i, b_i, c_(i-1), b_(i-1), s_i`
    /// change sign.
    pub fn flip(&self, i: usize) -> Self {
        let i = i % N;
        let prev = wrap(i as isize - 1);
        let mut p = self.clone();
        for k in [i, prev] {
            p.c[k] = -p.c[k].clone();
            p.b[k] = -p.b[k].clone();
        }
        p.s[i] = -p.s[i].clone();
        p
    }

    pub fn flip_mask(&self, mask: u8) -> Self {
        (0..N).filter(|i| mask >> i & 1 == 1).fold(self.clone(), |p, i| p.flip(i))
    }

    /// Parameters of the cyclically relabelled linkage (axis `i` becomes
    /// axis `i - shift`).
    pub fn rotated(&self, shift: usize) -> Self {
        let r = |a: &[T; N]| std::array::from_fn(|i| a[(i + shift) % N].clone());
        Self { c: r(&self.c), b: r(&self.b), s: r(&self.s) }
    }

    pub fn to_f64(&self) -> DHParams<f64> {
        DHParams { c: self.c.clone().map(|v| v.to_f64()), b: self.b.clone().map(|v| v.to_f64()), s: self.s.clone().map(|v| v.to_f64()) }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let pairs = self.c.iter().zip(&other.c).chain(self.b.iter().zip(&other.b)).chain(self.s.iter().zip(&other.s));
        pairs.map(|(a, b)| (a.clone() - b.clone()).abs().to_f64()).fold(0.0, f64::max)
    }
}

/// Parameter along the unit direction of line `a` of the foot of the common
/// normal with line `b`, measured from `a.point()`.
fn foot_parameter<T: Scalar>(a: &Line<T>, b: &Line<T>) -> Result<T> {
    let (da, db) = (a.direction(), b.direction());
    let c = dot(&da, &db);
    let denom = T::one() - c.clone() * c.clone();
    if denom.is_negligible(&T::one()) {
        return Err(Error::Precondition("parallel axes have no unique common normal".into()));
    }
    let w = vsub(&b.point(), &a.point());
    Ok((dot(&w, &da) - c * dot(&w, &db)) / denom)
}

/// Extracts `(c, b, s)` from the axes.
///
/// With `u + v e` the scalar part of `h_i h_(i+1)`: `c_i = -u` and
/// `b_i = -v / (1 - u^2)`. The offset `s_i` is the signed distance along
/// `h_i` from the foot of its common normal with `h_(i-1)` to the foot of its
/// common normal with `h_(i+1)`.
pub fn dh_from_lines<T: Scalar>(l: &Linkage6R<T>) -> Result<DHParams<T>> {
    let mut c: [T; N] = std::array::from_fn(|_| T::zero());
    let mut b = c.clone();
    let mut s = c.clone();
    for i in 0..N {
        let sp = (l.axis(i).value() * l.axis(i + 1).value()).scalar_part();
        let (u, v) = (sp.primal, sp.dual);
        let denom = T::one() - u.clone() * u.clone();
        if denom.is_negligible(&T::one()) {
            return Err(Error::AdjacentParallel { joint: i + 1 });
        }
        c[i] = -u;
        b[i] = -v / denom;
    }
    for (i, si) in s.iter_mut().enumerate() {
        let h = l.axis(i);
        let next = foot_parameter(h, l.axis(i + 1))?;
        let prev = foot_parameter(h, l.axis(i + 5))?;
        *si = next - prev;
    }
    Ok(DHParams { c, b, s })
}

/// Result of [`lines_from_dh`]: an open chain whose first five axis pairs
/// realise the requested parameters, plus how far the closing pair is off.
#[derive(Clone, Debug)]
pub struct Synthesis<T> {
    pub linkage: Linkage6R<T>,
    /// Parameters measured on the constructed axes.
    pub realized: DHParams<T>,
    /// `realized - requested` for `(c_6, b_6, s_6, s_1)`.
    pub closing_defect: [T; 4],
}

impl<T: Scalar> Synthesis<T> {
    pub fn closes(&self) -> bool {
        self.closing_defect.iter().all(|d| d.is_negligible(&T::one()))
    }
}

struct Frame<T> {
    origin: Vec3<T>,
    z: Vec3<T>,
    x: Vec3<T>,
}

/// Axis `i+1` and its frame from frame `i`. `rot = (cos, sin)` of the joint
/// rotation about the new axis.
fn next_frame<T: Scalar>(f: &Frame<T>, c: &T, sin_phi: &T, b: &T, s_next: &T, rot: &(T, T)) -> Frame<T> {
    let a = -(b.clone() * sin_phi.clone());
    let foot = vadd(&f.origin, &vscale(&f.x, &a));
    let z = vadd(&vscale(&f.z, c), &vscale(&cross(&f.x, &f.z), sin_phi));
    let x = vadd(&vscale(&f.x, &rot.0), &vscale(&cross(&z, &f.x), &rot.1));
    let origin = vadd(&foot, &vscale(&z, s_next));
    Frame { origin, z, x }
}

fn frame_line<T: Scalar>(f: &Frame<T>) -> Result<Line<T>> {
    Line::from_plucker(f.z.clone(), cross(&f.origin, &f.z))
}

fn base_frame<T: Scalar>() -> Frame<T> {
    let (o, l) = (T::zero(), T::one());
    Frame { origin: [o.clone(), o.clone(), o.clone()], z: [o.clone(), o.clone(), l.clone()], x: [l, o.clone(), o] }
}

/// Open-chain synthesis with explicit joint rotations `(cos, sin)` at axes
/// 1..5 (entry 0 is ignored).
pub fn lines_from_dh_with_rotations<T: Scalar>(p: &DHParams<T>, rotations: &[(T, T); N]) -> Result<Synthesis<T>> {
    let mut sines = Vec::with_capacity(N);
    for i in 0..N {
        if p.c[i].abs() >= T::one() {
            return Err(Error::AdjacentParallel { joint: i + 1 });
        }
        sines.push(p.sin_phi(i).ok_or(Error::InexactNorm)?);
    }
    let mut frame = base_frame::<T>();
    let mut lines = vec![frame_line(&frame)?];
    for i in 0..N - 1 {
        frame = next_frame(&frame, &p.c[i], &sines[i], &p.b[i], &p.s[i + 1], &rotations[i + 1]);
        lines.push(frame_line(&frame)?);
    }
    let linkage = Linkage6R::new(lines.try_into().expect("six axes"))?;
    let realized = dh_from_lines(&linkage)?;
    let closing_defect = [
        realized.c[5].clone() - p.c[5].clone(),
        realized.b[5].clone() - p.b[5].clone(),
        realized.s[5].clone() - p.s[5].clone(),
        realized.s[0].clone() - p.s[0].clone(),
    ];
    Ok(Synthesis { linkage, realized, closing_defect })
}

/// Places `h_1` on the z-axis through the origin and builds `h_2..h_6` with
/// zero joint rotations. Exact backends need rational `sin(phi_i)`.
pub fn lines_from_dh<T: Scalar>(p: &DHParams<T>) -> Result<Synthesis<T>> {
    let rot = std::array::from_fn(|_| (T::one(), T::zero()));
    lines_from_dh_with_rotations(p, &rot)
}

fn closure_defect(p: &DHParams<f64>, sines: &[f64; N], angles: &[f64; N]) -> [f64; 9] {
    let mut frame = base_frame::<f64>();
    for (i, sin_phi) in sines.iter().enumerate() {
        let j = (i + 1) % N;
        let rot = (angles[j].cos(), angles[j].sin());
        frame = next_frame(&frame, &p.c[i], sin_phi, &p.b[i], &p.s[j], &rot);
    }
    let o = frame.origin;
    [o[0], o[1], o[2], frame.z[0], frame.z[1], frame.z[2] - 1.0, frame.x[0] - 1.0, frame.x[1], frame.x[2]]
}

/// Finds joint rotations that close the loop for the given parameters and
/// returns the axes in that configuration. Gauss-Newton from seeded random
/// starts; fails if the parameters admit no real assembly.
pub fn assemble(p: &DHParams<f64>, seed: u64) -> Result<Linkage6R<f64>> {
    let sines: [f64; N] = std::array::from_fn(|i| (1.0 - p.c[i] * p.c[i]).max(0.0).sqrt());
    let scale = 1.0 + p.b.iter().chain(&p.s).fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..400 {
        let mut angles: [f64; N] = std::array::from_fn(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        for _ in 0..100 {
            let r = closure_defect(p, &sines, &angles);
            let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-13 * scale {
                let rotations = std::array::from_fn(|i| (angles[i].cos(), angles[i].sin()));
                let syn = lines_from_dh_with_rotations(p, &rotations)?;
                if syn.realized.max_abs_diff(p) < 1e-8 * scale {
                    return Ok(syn.linkage);
                }
                break;
            }
            let h = 1e-7;
            let jac = nalgebra::DMatrix::from_fn(9, N, |row, col| {
                let mut plus = angles;
                let mut minus = angles;
                plus[col] += h;
                minus[col] -= h;
                (closure_defect(p, &sines, &plus)[row] - closure_defect(p, &sines, &minus)[row]) / (2.0 * h)
            });
            let rhs = nalgebra::DVector::from_iterator(9, r.iter().copied());
            let svd = jac.svd(true, true);
            let Ok(step) = svd.solve(&rhs, 1e-10) else { break };
            for (a, d) in angles.iter_mut().zip(step.iter()) {
                *a -= d;
            }
        }
    }
    Err(Error::SolverFailed("no real assembly found for these parameters".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn line(p: [i64; 3], d: [i64; 3]) -> Line<Rational> {
        Line::from_point_direction(p.map(q), d.map(q)).unwrap()
    }

    fn zero_c() -> [(i64, i64); 6] {
        [(0, 1); 6]
    }

    #[test]
    fn dh_of_simple_pairs() {
        let l = Linkage6R::new([
            line([0, 0, 0], [1, 0, 0]),
            line([0, 3, 0], [0, 0, 1]),
            line([1, 0, 0], [0, 1, 0]),
            line([0, 0, 2], [1, 0, 0]),
            line([0, 1, 0], [0, 0, 1]),
            line([0, 0, 0], [0, 1, 0]),
        ])
        .unwrap();
        let p = dh_from_lines(&l).unwrap();
        assert_eq!(p.c[0], q(0));
        assert_eq!(p.b[0], q(3));

        let m = Linkage6R::new([
            line([0, 0, 0], [1, 0, 0]),
            line([0, 0, 0], [0, 1, 0]),
            line([0, 0, 1], [0, 0, 1]),
            line([0, 0, 2], [1, 0, 0]),
            line([0, 1, 0], [0, 0, 1]),
            line([0, 0, 0], [0, 1, 0]),
        ])
        .unwrap();
        let p = dh_from_lines(&m).unwrap();
        assert_eq!((p.c[0].clone(), p.b[0].clone()), (q(0), q(0)));
    }

    #[test]
    fn adjacent_parallel_rejected() {
        let err = Linkage6R::new([
            line([0, 0, 0], [1, 0, 0]),
            line([0, 1, 0], [1, 0, 0]),
            line([1, 0, 0], [0, 1, 0]),
            line([0, 0, 2], [1, 0, 0]),
            line([0, 1, 0], [0, 0, 1]),
            line([0, 0, 0], [0, 1, 0]),
        ]);
        assert_eq!(err, Err(Error::AdjacentParallel { joint: 1 }));
        let err = DHParams::<Rational>::from_i64([(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)], [1; 6], [0; 6]);
        assert_eq!(err, Err(Error::AdjacentParallel { joint: 1 }));
    }

    #[test]
    fn chain_product_basics() {
        let l = lines_from_dh(&DHParams::<Rational>::from_i64(zero_c(), [1; 6], [0; 6]).unwrap()).unwrap().linkage;
        let inf: [JointParameter<Rational>; 6] = std::array::from_fn(|_| JointParameter::infinity());
        assert_eq!(l.chain_product(&inf, 0, 6), DualQuaternion::one());
        assert_eq!(l.closure_residual(&inf).unwrap(), q(0));
        assert_eq!(l.chain_product(&inf, 3, 0), DualQuaternion::one());

        let mut t = inf.clone();
        t[0] = JointParameter::finite(q(0));
        assert_eq!(l.chain_product(&t, 0, 1), -l.axis(0).value().clone());

        let t: [JointParameter<Rational>; 6] = std::array::from_fn(|i| JointParameter::finite(Rational::ratio(i as i64 + 1, 3)));
        let whole = l.chain_product(&t, 2, 5);
        let split = l.chain_product(&t, 2, 2) * l.chain_product(&t, 4, 3);
        assert_eq!(whole, split);
        assert!(l.closure_residual(&t).unwrap() > q(0));
    }

    #[test]
    fn zero_product_is_degenerate() {
        // (i - h)(-i - h) = 1 + h^2 = 0 over the complex numbers; over the
        // reals the full product of a bond-free chain never vanishes, so
        // test the degenerate branch with a zero joint parameter pair.
        let l = lines_from_dh(&DHParams::<Rational>::from_i64(zero_c(), [1; 6], [0; 6]).unwrap()).unwrap().linkage;
        let t: [JointParameter<Complex<Rational>>; 6] = std::array::from_fn(|i| match i {
            0 => JointParameter::finite(Complex::new(q(0), q(1))),
            1 => JointParameter::infinity(),
            _ => JointParameter::infinity(),
        });
        let one = l.chain_product(&t, 0, 1);
        let conj = (JointParameter::finite(Complex::new(q(0), q(-1)))).factor(&l.axis(0).complexify());
        assert!((one * conj).is_zero());
    }

    #[test]
    fn round_trip_unit_bennett_ratios() {
        let p = DHParams::<Rational>::from_i64(zero_c(), [1; 6], [0; 6]).unwrap();
        let syn = lines_from_dh(&p).unwrap();
        for i in 0..5 {
            assert_eq!(syn.realized.c[i], p.c[i]);
            assert_eq!(syn.realized.b[i], p.b[i]);
        }
        for i in 1..5 {
            assert_eq!(syn.realized.s[i], p.s[i]);
        }
    }

    #[test]
    fn round_trip_pythagorean_twists() {
        let p = DHParams::<Rational>::new(
            [Rational::ratio(3, 5), Rational::ratio(-4, 5), q(0), Rational::ratio(5, 13), Rational::ratio(-12, 13), q(0)],
            [q(2), q(-1), Rational::ratio(7, 3), q(0), q(5), q(1)],
            [q(1), q(-2), q(3), Rational::ratio(1, 2), q(0), q(4)],
        )
        .unwrap();
        let syn = lines_from_dh(&p).unwrap();
        for i in 0..5 {
            assert_eq!((&syn.realized.c[i], &syn.realized.b[i]), (&p.c[i], &p.b[i]), "pair {i}");
        }
        for i in 1..5 {
            assert_eq!(syn.realized.s[i], p.s[i], "offset {i}");
        }
        assert!(!syn.closes());
    }

    #[test]
    fn irrational_sine_rejected_exactly() {
        let p = DHParams::<Rational>::new(
            std::array::from_fn(|_| Rational::ratio(1, 2)),
            std::array::from_fn(|_| q(1)),
            std::array::from_fn(|_| q(0)),
        )
        .unwrap();
        assert_eq!(lines_from_dh(&p).err(), Some(Error::InexactNorm));
        assert!(lines_from_dh(&p.to_f64()).is_ok());
    }

    #[test]
    fn flip_rule_on_bricard_parameters() {
        let p = DHParams::<Rational>::from_i64(zero_c(), [0, 40, 32, 0, 25, 7], [0; 6]).unwrap();
        let f = p.flip(1);
        assert_eq!(f.b[0], q(0));
        assert_eq!(f.b[1], q(-40));
        assert_eq!(f.c[0], q(0));
        assert_eq!(f.s[1], q(0));
        assert_eq!(f.flip(1), p);
    }

    #[test]
    fn coupling_dimensions_of_special_triples() {
        let concurrent = Linkage6R::new([
            line([0, 0, 0], [1, 0, 0]),
            line([0, 0, 0], [0, 1, 0]),
            line([0, 0, 0], [0, 0, 1]),
            line([0, 5, 2], [1, 0, 0]),
            line([3, 1, 0], [0, 0, 1]),
            line([0, 0, 7], [0, 1, 0]),
        ])
        .unwrap();
        assert_eq!(concurrent.coupling_dimension(0), 4);

        let rot = [
            (q(1), q(0)),
            (Rational::ratio(3, 5), Rational::ratio(4, 5)),
            (q(0), q(1)),
            (Rational::ratio(5, 13), Rational::ratio(12, 13)),
            (q(0), q(1)),
            (q(1), q(0)),
        ];
        for (b1, c1, dim) in [(2, (3, 5), 6), (-2, (3, 5), 6), (3, (3, 5), 8), (2, (4, 5), 6), (2, (-3, 5), 6)] {
            let p = DHParams::<Rational>::new(
                [Rational::ratio(3, 5), Rational::ratio(c1.0, c1.1), q(0), q(0), q(0), q(0)],
                [q(2), q(b1), q(1), q(3), q(1), q(2)],
                [q(1), q(0), q(2), q(1), q(0), q(1)],
            )
            .unwrap();
            let l = lines_from_dh_with_rotations(&p, &rot).unwrap().linkage;
            assert_eq!(l.coupling_dimensions(), [dim, 8, 8, 8, 8, 8], "b1={b1} c1={c1:?}");
        }
    }

    #[test]
    fn assemble_orthogonal_bricard() {
        let p = DHParams::<f64>::from_i64(zero_c(), [0, 40, 32, 0, 25, 7], [0; 6]).unwrap();
        let l = assemble(&p, 7).unwrap();
        let got = dh_from_lines(&l).unwrap();
        assert!(got.max_abs_diff(&p) < 1e-7, "{got:?}");
    }
}
