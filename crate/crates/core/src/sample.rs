//! Seeded generators for test and demo linkages.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dualquat::{cross, Line, Vec3};
use crate::linkage::{DHParams, Linkage6R, N};
use crate::scalar::{Rational, Scalar};

/// Rational unit vector from inverse stereographic projection of `(p, q)`.
pub fn rational_unit_vector<R: Rng>(rng: &mut R) -> Vec3<Rational> {
    let p = small_rational(rng, 3, 4);
    let q = small_rational(rng, 3, 4);
    let one = Rational::from_i64(1);
    let two = Rational::from_i64(2);
    let n = one.clone() + p.clone() * p.clone() + q.clone() * q.clone();
    let mut v = [two.clone() * p.clone() / n.clone(), two * q.clone() / n.clone(), (one - p.clone() * p - q.clone() * q) / n];
    v.shuffle(rng);
    if rng.gen_bool(0.5) {
        v = v.map(|x| -x);
    }
    v
}

/// `n / d` with `|n| <= max_num` and `1 <= d <= max_den`.
pub fn small_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    Rational::ratio(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn random_line<R: Rng>(rng: &mut R) -> Line<Rational> {
    let d = rational_unit_vector(rng);
    let p: Vec3<Rational> = std::array::from_fn(|_| small_rational(rng, 5, 3));
    Line::from_plucker(d.clone(), cross(&p, &d)).expect("unit direction")
}

/// Random rational linkage; with `generic`, all six triple coupling
/// dimensions are 8.
pub fn random_linkage<R: Rng>(rng: &mut R, generic: bool) -> Linkage6R<Rational> {
    loop {
        let axes: [Line<Rational>; N] = std::array::from_fn(|_| random_line(rng));
        let Ok(l) = Linkage6R::new(axes) else { continue };
        if !generic || l.coupling_dimensions().iter().all(|&d| d == 8) {
            return l;
        }
    }
}

/// Cosines with rational sines, from Pythagorean triples.
const PYTHAGOREAN: [(i64, i64); 8] = [(0, 1), (3, 5), (4, 5), (5, 13), (12, 13), (8, 17), (15, 17), (7, 25)];

pub fn rational_cosine<R: Rng>(rng: &mut R) -> Rational {
    let (n, d) = *PYTHAGOREAN.choose(rng).unwrap();
    let c = Rational::ratio(n, d);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

/// Random DH parameters with rational sines, so that the exact synthesis
/// applies.
pub fn random_dh<R: Rng>(rng: &mut R) -> DHParams<Rational> {
    let c = std::array::from_fn(|_| rational_cosine(rng));
    let b = std::array::from_fn(|_| small_rational(rng, 9, 3));
    let s = std::array::from_fn(|_| small_rational(rng, 9, 3));
    DHParams::new(c, b, s).expect("cosines in (-1, 1)")
}

/// Positive integer solutions of `b1 b3 b5 = b2 b4 b6` and
/// `b1^2 + b3^2 + b5^2 = b2^2 + b4^2 + b6^2` with entries up to 20, excluding
/// those where the even triple is a permutation of the odd one.
fn bennett_ratio_solutions() -> &'static Vec<[i64; 6]> {
    static CACHE: OnceLock<Vec<[i64; 6]>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut groups: HashMap<(i64, i64), Vec<[i64; 3]>> = HashMap::new();
        for a in 1..=20 {
            for b in a..=20 {
                for c in b..=20 {
                    groups.entry((a * b * c, a * a + b * b + c * c)).or_default().push([a, b, c]);
                }
            }
        }
        let mut out = Vec::new();
        for triples in groups.values().filter(|g| g.len() > 1) {
            for odd in triples {
                for even in triples.iter().filter(|e| *e != odd) {
                    out.push([odd[0], even[0], odd[1], even[1], odd[2], even[2]]);
                }
            }
        }
        out.sort();
        out
    })
}

/// Random member of the first mobile family: zero offsets, `f_k = f_(k+3)`,
/// the product and square-sum conditions on the Bennett ratios, and the
/// three cross conditions (which hold automatically for nonzero ratios).
pub fn random_family1<R: Rng>(rng: &mut R) -> DHParams<Rational> {
    let sols = bennett_ratio_solutions();
    loop {
        let mut b = sols.choose(rng).unwrap().map(Rational::from_i64);
        // Negating an opposite pair keeps both ratio conditions.
        for k in 0..3 {
            if rng.gen_bool(0.5) {
                b[k] = -b[k].clone();
                b[k + 3] = -b[k + 3].clone();
            }
        }
        let mut c: [Rational; N] = std::array::from_fn(|_| Rational::from_i64(0));
        for k in 0..3 {
            c[k] = small_rational(rng, 4, 5);
            c[k + 3] = c[k].clone() * b[k].clone() / b[k + 3].clone();
        }
        let s = std::array::from_fn(|_| Rational::from_i64(0));
        if let Ok(p) = DHParams::new(c, b, s) {
            return p;
        }
    }
}

/// Integer Bennett ratios up to 8 for which the second mobile family has
/// nonzero rational `f` values: `(b, f_even, f_odd)` with `|c| < 1`.
fn family2_solutions() -> &'static Vec<([i64; 6], Rational, Rational)> {
    static CACHE: OnceLock<Vec<([i64; 6], Rational, Rational)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out = Vec::new();
        let mut b = [1i64; 6];
        loop {
            let p = b[0] * b[2] * b[4];
            let r = b[1] * b[3] * b[5];
            let s1 = b[0] * b[0] + b[2] * b[2] + b[4] * b[4];
            let s2 = b[1] * b[1] + b[3] * b[3] + b[5] * b[5];
            let z = (s2 - s1) * (r * r - p * p);
            if r != p && z > 0 {
                let root = (z as f64).sqrt().round() as i64;
                if root * root == z {
                    let fe = Rational::ratio(root * p, r * r - p * p);
                    let fo = fe.clone() * Rational::ratio(r, p);
                    let ok = (0..N).all(|k| {
                        let f = if k % 2 == 0 { &fe } else { &fo };
                        (f.clone() / Rational::from_i64(b[k])).abs() < Rational::from_i64(1)
                    });
                    if ok {
                        out.push((b, fe, fo));
                    }
                }
            }
            let Some(k) = (0..N).find(|&k| b[k] < 8) else { break };
            b[k] += 1;
            b[..k].fill(1);
        }
        out
    })
}

/// Random member of the second mobile family with nonzero `f` values:
/// zero offsets, `f_0 = f_2 = f_4`, `f_1 = f_3 = f_5` and the two ratio
/// conditions.
pub fn random_family2<R: Rng>(rng: &mut R) -> DHParams<Rational> {
    let (b, fe, fo) = family2_solutions().choose(rng).unwrap().clone();
    let (fe, fo) = if rng.gen_bool(0.5) { (-fe, -fo) } else { (fe, fo) };
    let b = b.map(Rational::from_i64);
    let c = std::array::from_fn(|k| if k % 2 == 0 { fe.clone() } else { fo.clone() } / b[k].clone());
    let s = std::array::from_fn(|_| Rational::from_i64(0));
    DHParams::new(c, b, s).expect("cosines in (-1, 1)")
}

/// Random orthogonal Bricard parameters: right twists, zero offsets and
/// equal odd and even square sums of the Bennett ratios.
pub fn random_bricard_orthogonal<R: Rng>(rng: &mut R) -> DHParams<Rational> {
    let sols = bennett_ratio_solutions();
    let mut b = sols.choose(rng).unwrap().map(Rational::from_i64);
    for v in b.iter_mut() {
        if rng.gen_bool(0.5) {
            *v = -v.clone();
        }
    }
    let zero = || std::array::from_fn(|_| Rational::from_i64(0));
    DHParams::new(zero(), b, zero()).expect("zero cosines")
}
