//! Membership tests for the known mobile 6R families, genus bounds from
//! triple coupling dimensions, and bond diagrams with coupler degrees.
//!
//! Indices are 0-based throughout. Equation labels print 1-based indices,
//! the usual `h_1..h_6` labelling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linkage::{DHParams, N};
use crate::quadpoly::{bond_conditions, BondConditionReport, Sign};
use crate::scalar::Scalar;

/// Relative tolerance for float flag decisions.
pub const FLOAT_RELATIVE_TOL: f64 = 1e-8;

/// One defining equation `lhs = rhs`, with the magnitude used to judge it on
/// inexact backends.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation<T> {
    pub label: String,
    pub lhs: T,
    pub rhs: T,
    /// Largest absolute term, floored by the length scale of the parameters
    /// raised to the equation's degree.
    pub scale: T,
}

impl<T: Scalar> Equation<T> {
    pub fn residual(&self) -> T {
        self.lhs.clone() - self.rhs.clone()
    }

    pub fn holds(&self) -> bool {
        if T::EXACT {
            self.lhs == self.rhs
        } else {
            self.residual().abs().to_f64() <= FLOAT_RELATIVE_TOL * self.scale.to_f64()
        }
    }

    /// Residual divided by the scale, for ranking near misses.
    pub fn relative_residual(&self) -> f64 {
        let s = self.scale.to_f64();
        let r = self.residual().abs().to_f64();
        if s == 0.0 {
            r
        } else {
            r / s
        }
    }
}

impl<T: Scalar> fmt::Display for Equation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} - {} = {}", self.label, self.lhs, self.rhs, self.residual())
    }
}

/// A family test: the flag and the evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyCheck<T> {
    pub holds: bool,
    pub equations: Vec<Equation<T>>,
}

impl<T: Scalar> FamilyCheck<T> {
    fn from_equations(equations: Vec<Equation<T>>) -> Self {
        Self { holds: equations.iter().all(Equation::holds), equations }
    }

    fn worst(&self) -> f64 {
        self.equations.iter().map(Equation::relative_residual).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyFlags {
    pub hooke: bool,
    pub dietmaier: bool,
    pub family1: bool,
    pub family2: bool,
    pub bricard_orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport<T> {
    /// Hooke's double spherical linkage, distance condition as printed in the
    /// usual statement of the conditions.
    pub hooke: FamilyCheck<T>,
    /// Same vanishing conditions with the distance condition in its
    /// geometric form `|PQ|^2` computed along both sides of the loop.
    pub hooke_geometric: FamilyCheck<T>,
    pub dietmaier: FamilyCheck<T>,
    /// Axis reversal mask under which the Dietmaier equations hold, or the
    /// closest one if none does.
    pub dietmaier_orientation: u8,
    pub family1: FamilyCheck<T>,
    pub family2: FamilyCheck<T>,
    pub bricard_orthogonal: FamilyCheck<T>,
    /// Triple coupling dimensions `l_(k,k+1,k+2)` read off the parameters.
    pub coupling_dimensions: [usize; N],
    pub genus: GenusBound,
    pub warnings: Vec<String>,
}

impl<T> FamilyReport<T> {
    pub fn flags(&self) -> FamilyFlags {
        FamilyFlags {
            hooke: self.hooke.holds,
            dietmaier: self.dietmaier.holds,
            family1: self.family1.holds,
            family2: self.family2.holds,
            bricard_orthogonal: self.bricard_orthogonal.holds,
        }
    }

    pub fn genus_bound(&self) -> u8 {
        self.genus.bound
    }
}

/// Builds equations with a common length scale.
struct EqBuilder<T> {
    length: T,
}

impl<T: Scalar> EqBuilder<T> {
    fn new(p: &DHParams<T>) -> Self {
        let m = p.b.iter().chain(&p.s).map(|v| v.abs()).fold(T::zero(), |a, v| if v > a { v } else { a });
        Self { length: if m.is_zero() { T::one() } else { m } }
    }

    /// `sum(lhs) = sum(rhs)` of homogeneous length degree `deg`.
    fn eq(&self, label: impl Into<String>, deg: u32, lhs: &[T], rhs: &[T]) -> Equation<T> {
        let mut scale = (0..deg).fold(T::one(), |a, _| a * self.length.clone());
        for t in lhs.iter().chain(rhs) {
            if t.abs() > scale {
                scale = t.abs();
            }
        }
        let sum = |v: &[T]| v.iter().cloned().fold(T::zero(), |a, b| a + b);
        Equation { label: label.into(), lhs: sum(lhs), rhs: sum(rhs), scale }
    }

    fn zero(&self, label: impl Into<String>, deg: u32, v: &T) -> Equation<T> {
        self.eq(label, deg, std::slice::from_ref(v), &[])
    }

    fn same(&self, label: impl Into<String>, deg: u32, a: &T, b: &T) -> Equation<T> {
        self.eq(label, deg, std::slice::from_ref(a), std::slice::from_ref(b))
    }
}

fn sq<T: Scalar>(v: &T) -> T {
    v.clone() * v.clone()
}

fn prod<T: Scalar>(v: &[&T]) -> T {
    v.iter().fold(T::one(), |a, b| a * (*b).clone())
}

/// Zero offsets and the three cross conditions, shared by both families.
fn common_family_equations<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> Vec<Equation<T>> {
    let (b, c) = (&p.b, &p.c);
    let mut out: Vec<Equation<T>> = (0..N).map(|k| e.zero(format!("s_{} = 0", k + 1), 1, &p.s[k])).collect();
    for k in 0..3 {
        let (i0, i1, i2, i3, i4, i5) = (k, k + 1, k + 2, k + 3, (k + 4) % N, (k + 5) % N);
        out.push(e.same(
            format!("b_{}c_{}b_{} = b_{}c_{}b_{}", i0 + 1, i1 + 1, i2 + 1, i3 + 1, i4 + 1, i5 + 1),
            2,
            &prod(&[&b[i0], &c[i1], &b[i2]]),
            &prod(&[&b[i3], &c[i4], &b[i5]]),
        ));
    }
    out
}

fn family1_check<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> FamilyCheck<T> {
    let (b, f) = (&p.b, p.fs());
    let mut eqs = common_family_equations(p, e);
    for k in 0..3 {
        eqs.push(e.same(format!("f_{} = f_{}", k + 1, k + 4), 1, &f[k], &f[k + 3]));
    }
    eqs.push(e.same("b_1b_3b_5 = b_2b_4b_6", 3, &prod(&[&b[0], &b[2], &b[4]]), &prod(&[&b[1], &b[3], &b[5]])));
    eqs.push(e.eq("b_1^2+b_3^2+b_5^2 = b_2^2+b_4^2+b_6^2", 2, &[sq(&b[0]), sq(&b[2]), sq(&b[4])], &[sq(&b[1]), sq(&b[3]), sq(&b[5])]));
    FamilyCheck::from_equations(eqs)
}

fn family2_check<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> FamilyCheck<T> {
    let (b, f) = (&p.b, p.fs());
    let mut eqs = common_family_equations(p, e);
    for (i, j) in [(0, 2), (2, 4), (1, 3), (3, 5)] {
        eqs.push(e.same(format!("f_{} = f_{}", i + 1, j + 1), 1, &f[i], &f[j]));
    }
    eqs.push(e.same("b_1b_3b_5f_2 = b_2b_4b_6f_1", 4, &prod(&[&b[0], &b[2], &b[4], &f[1]]), &prod(&[&b[1], &b[3], &b[5], &f[0]])));
    eqs.push(e.eq(
        "b_1^2+b_3^2+b_5^2+f_2^2 = b_2^2+b_4^2+b_6^2+f_1^2",
        2,
        &[sq(&b[0]), sq(&b[2]), sq(&b[4]), sq(&f[1])],
        &[sq(&b[1]), sq(&b[3]), sq(&b[5]), sq(&f[0])],
    ));
    FamilyCheck::from_equations(eqs)
}

fn bricard_orthogonal_check<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> FamilyCheck<T> {
    let b = &p.b;
    let mut eqs: Vec<Equation<T>> = (0..N).map(|k| e.zero(format!("c_{} = 0", k + 1), 0, &p.c[k])).collect();
    eqs.extend((0..N).map(|k| e.zero(format!("s_{} = 0", k + 1), 1, &p.s[k])));
    eqs.push(e.eq("b_1^2+b_3^2+b_5^2 = b_2^2+b_4^2+b_6^2", 2, &[sq(&b[0]), sq(&b[2]), sq(&b[4])], &[sq(&b[1]), sq(&b[3]), sq(&b[5])]));
    FamilyCheck::from_equations(eqs)
}

fn hooke_vanishing<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> Vec<Equation<T>> {
    let mut eqs: Vec<Equation<T>> = [0, 1, 3, 4].iter().map(|&k| e.zero(format!("b_{} = 0", k + 1), 1, &p.b[k])).collect();
    eqs.extend([1, 4].iter().map(|&k| e.zero(format!("s_{} = 0", k + 1), 1, &p.s[k])));
    eqs
}

fn hooke_check<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> FamilyCheck<T> {
    let (s, c) = (&p.s, &p.c);
    let two = T::from_i64(2);
    let mut eqs = hooke_vanishing(p, e);
    eqs.push(e.eq(
        "d_3^2+s_3^2+s_4^2-2c_3s_2s_4 = d_6^2+s_2^2+s_5^2-2c_6s_1s_5",
        2,
        &[p.distance_squared(2), sq(&s[2]), sq(&s[3]), -(two.clone() * prod(&[&c[2], &s[1], &s[3]]))],
        &[p.distance_squared(5), sq(&s[1]), sq(&s[4]), -(two * prod(&[&c[5], &s[0], &s[4]]))],
    ));
    FamilyCheck::from_equations(eqs)
}

/// With `h_1, h_2, h_3` meeting at `P` and `h_4, h_5, h_6` meeting at `Q`,
/// `|PQ|^2` walked along `h_3, h_4` must equal `|PQ|^2` walked along
/// `h_6, h_1`.
fn hooke_geometric_check<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> FamilyCheck<T> {
    let (s, c) = (&p.s, &p.c);
    let two = T::from_i64(2);
    let mut eqs = hooke_vanishing(p, e);
    eqs.push(e.eq(
        "d_3^2+s_3^2+s_4^2+2c_3s_3s_4 = d_6^2+s_6^2+s_1^2+2c_6s_6s_1",
        2,
        &[p.distance_squared(2), sq(&s[2]), sq(&s[3]), two.clone() * prod(&[&c[2], &s[2], &s[3]])],
        &[p.distance_squared(5), sq(&s[5]), sq(&s[0]), two * prod(&[&c[5], &s[5], &s[0]])],
    ));
    FamilyCheck::from_equations(eqs)
}

fn dietmaier_equations<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> FamilyCheck<T> {
    let (b, c, s, f) = (&p.b, &p.c, &p.s, p.fs());
    let eqs = vec![
        e.same("b_1 = b_2", 1, &b[0], &b[1]),
        e.same("b_4 = b_5", 1, &b[3], &b[4]),
        e.same("b_3 = b_6", 1, &b[2], &b[5]),
        e.same("c_3 = c_6", 0, &c[2], &c[5]),
        e.eq("f_1+f_2 = f_4+f_5", 1, &[f[0].clone(), f[1].clone()], &[f[3].clone(), f[4].clone()]),
        e.same("s_1 = s_3", 1, &s[0], &s[2]),
        e.same("s_4 = s_6", 1, &s[3], &s[5]),
        e.zero("s_2 = 0", 1, &s[1]),
        e.zero("s_5 = 0", 1, &s[4]),
    ];
    FamilyCheck::from_equations(eqs)
}

/// Dietmaier conditions up to axis orientation: the first of the 64 reversal
/// masks that satisfies them, else the mask with the smallest worst residual.
fn dietmaier_check<T: Scalar>(p: &DHParams<T>, e: &EqBuilder<T>) -> (FamilyCheck<T>, u8) {
    let mut best: Option<(FamilyCheck<T>, u8, f64)> = None;
    for mask in 0..64u8 {
        let check = dietmaier_equations(&p.flip_mask(mask), e);
        if check.holds {
            return (check, mask);
        }
        let w = check.worst();
        if best.as_ref().is_none_or(|(_, _, bw)| w < *bw) {
            best = Some((check, mask, w));
        }
    }
    let (check, mask, _) = best.expect("64 masks tried");
    (check, mask)
}

/// Triple coupling dimension `l_(k,k+1,k+2)` from the parameters: 4 for a
/// concurrent triple (`b_k = b_(k+1) = s_(k+1) = 0`), 6 for a Bennett triple
/// (`b_k^2 = b_(k+1)^2 != 0`, `s_(k+1) = 0`), else 8. Assumes no adjacent
/// parallel axes.
pub fn triple_dimension_from_dh<T: Scalar>(p: &DHParams<T>, k: usize) -> usize {
    let e = EqBuilder::new(p);
    let (k, k1) = (k % N, (k + 1) % N);
    let zero = |eq: Equation<T>| eq.holds();
    if !zero(e.zero("", 1, &p.s[k1])) {
        return 8;
    }
    if zero(e.zero("", 1, &p.b[k])) && zero(e.zero("", 1, &p.b[k1])) {
        return 4;
    }
    if zero(e.same("", 2, &sq(&p.b[k]), &sq(&p.b[k1]))) {
        return 6;
    }
    8
}

pub fn coupling_dimensions_from_dh<T: Scalar>(p: &DHParams<T>) -> [usize; N] {
    std::array::from_fn(|k| triple_dimension_from_dh(p, k))
}

/// Family flags with their evidence, plus coupling dimensions and the
/// genus bound.
pub fn classify<T: Scalar>(p: &DHParams<T>) -> FamilyReport<T> {
    let e = EqBuilder::new(p);
    let hooke = hooke_check(p, &e);
    let hooke_geometric = hooke_geometric_check(p, &e);
    let (dietmaier, dietmaier_orientation) = dietmaier_check(p, &e);
    let coupling_dimensions = coupling_dimensions_from_dh(p);
    let mut warnings = Vec::new();
    if hooke.holds != hooke_geometric.holds {
        warnings.push(format!(
            "Hooke distance condition: as printed {}, geometric form {}",
            if hooke.holds { "holds" } else { "fails" },
            if hooke_geometric.holds { "holds" } else { "fails" },
        ));
    }
    FamilyReport {
        hooke,
        hooke_geometric,
        dietmaier,
        dietmaier_orientation,
        family1: family1_check(p, &e),
        family2: family2_check(p, &e),
        bricard_orthogonal: bricard_orthogonal_check(p, &e),
        coupling_dimensions,
        genus: genus_bound(&coupling_dimensions),
        warnings,
    }
}

/// Which row of the genus table matched; `triple` is the 0-based first
/// joint of the deciding triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenusCase {
    BennettOppositeGeneric { triple: usize },
    ConcurrentTriple { triple: usize },
    OppositeBennettTriples { triple: usize },
    AllGeneric,
    General,
}

impl fmt::Display for GenusCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = |k: &usize| format!("{},{},{}", k + 1, (k + 1) % N + 1, (k + 2) % N + 1);
        match self {
            Self::BennettOppositeGeneric { triple } => {
                write!(f, "Bennett triple {} opposite a generic triple", t(triple))
            }
            Self::ConcurrentTriple { triple } => write!(f, "concurrent triple {}", t(triple)),
            Self::OppositeBennettTriples { triple } => {
                write!(f, "opposite Bennett triples {} and {}", t(triple), t(&((triple + 3) % N)))
            }
            Self::AllGeneric => write!(f, "all triples generic"),
            Self::General => write!(f, "general bound"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenusBound {
    pub bound: u8,
    pub case: GenusCase,
}

/// Upper bound on the genus of the configuration curve from the six triple
/// coupling dimensions. A static lookup: singular curves may have smaller
/// genus than reported.
pub fn genus_bound(dims: &[usize; N]) -> GenusBound {
    let opposite = |k: usize| dims[(k + 3) % N];
    if let Some(k) = (0..N).find(|&k| dims[k] == 6 && opposite(k) == 8) {
        return GenusBound { bound: 3, case: GenusCase::BennettOppositeGeneric { triple: k } };
    }
    let case = if let Some(k) = (0..N).find(|&k| dims[k] == 4) {
        GenusCase::ConcurrentTriple { triple: k }
    } else if let Some(k) = (0..N).find(|&k| dims[k] == 6 && opposite(k) == 6) {
        GenusCase::OppositeBennettTriples { triple: k }
    } else if dims.iter().all(|&d| d == 8) {
        GenusCase::AllGeneric
    } else {
        GenusCase::General
    };
    GenusBound { bound: 5, case }
}

/// Connection multiplicities between joints. Pairs are unordered; adjacent
/// joints never connect.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BondDiagram {
    connections: BTreeMap<(usize, usize), i64>,
}

impl BondDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(a: usize, b: usize) -> Result<(usize, usize)> {
        if a >= N || b >= N {
            return Err(Error::InvalidDiagram(format!("joint index out of range in {}-{}", a + 1, b + 1)));
        }
        let (lo, hi) = (a.min(b), a.max(b));
        if lo == hi {
            return Err(Error::InvalidDiagram(format!("joint {} connected to itself", lo + 1)));
        }
        if hi - lo == 1 || hi - lo == N - 1 {
            return Err(Error::InvalidDiagram(format!("adjacent joints {} and {} cannot be connected", lo + 1, hi + 1)));
        }
        Ok((lo, hi))
    }

    /// Sets `k(a, b)`; zero removes the entry.
    pub fn set(&mut self, a: usize, b: usize, k: i64) -> Result<()> {
        let key = Self::key(a, b)?;
        if k == 0 {
            self.connections.remove(&key);
        } else {
            self.connections.insert(key, k);
        }
        Ok(())
    }

    pub fn get(&self, a: usize, b: usize) -> i64 {
        Self::key(a, b).ok().and_then(|k| self.connections.get(&k).copied()).unwrap_or(0)
    }

    pub fn connections(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.connections.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.connections.is_empty()
    }
}

/// 1-based `i-j:k` entries separated by commas.
impl fmt::Display for BondDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.connections().map(|((a, b), k)| format!("{}-{}:{}", a + 1, b + 1, k)).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for BondDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut d = Self::new();
        for entry in s.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let bad = || Error::InvalidDiagram(format!("malformed entry '{entry}', expected i-j:k"));
            let (pair, k) = entry.split_once(':').ok_or_else(bad)?;
            let (a, b) = pair.split_once('-').ok_or_else(bad)?;
            let joint = |v: &str| -> Result<usize> {
                match v.trim().parse::<usize>() {
                    Ok(j) if (1..=N).contains(&j) => Ok(j - 1),
                    _ => Err(Error::InvalidDiagram(format!("joint '{}' not in 1..{N}", v.trim()))),
                }
            };
            let (a, b) = (joint(a)?, joint(b)?);
            let k: i64 = k.trim().parse().map_err(|_| bad())?;
            if d.get(a, b) != 0 {
                return Err(Error::InvalidDiagram(format!("pair {}-{} given twice", a + 1, b + 1)));
            }
            d.set(a, b, k)?;
        }
        Ok(d)
    }
}

/// Joints strictly after link `i` up to and including joint `j`: one of the
/// two chains left by cutting the link diagram at links `i` and `j`. Link
/// `m` sits between joints `m` and `m + 1`.
pub fn cut_chain(i: usize, j: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = (i + 1) % N;
    loop {
        out.push(k);
        if k == j % N {
            return out;
        }
        k = (k + 1) % N;
    }
}

/// Algebraic degree of the coupler curve of link `j` relative to link `i`:
/// the signed number of connections between the two chains obtained by
/// cutting at links `i` and `j`.
pub fn coupler_degree(d: &BondDiagram, i: usize, j: usize) -> Result<i64> {
    if i >= N || j >= N {
        return Err(Error::Precondition(format!("link index out of range: {}, {}", i + 1, j + 1)));
    }
    if i == j {
        return Err(Error::Precondition("coupler degree needs two distinct links".into()));
    }
    let mut side = [false; N];
    for k in cut_chain(i, j) {
        side[k] = true;
    }
    Ok(d.connections().filter(|((a, b), _)| side[*a] != side[*b]).map(|(_, k)| k).sum())
}

/// Candidate bond diagram of a linkage with all triple coupling dimensions
/// 8. Connections only join opposite joints; each sign family contributes
/// the gcd degree of its opposite invariant quad polynomials. This bounds
/// the bond count from above: a common root need not be a bond.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalDiagram<T> {
    pub diagram: BondDiagram,
    pub conditions: BondConditionReport<T>,
}

pub fn maximal_bond_diagram<T: Scalar>(p: &DHParams<T>) -> Result<MaximalDiagram<T>> {
    let dims = coupling_dimensions_from_dh(p);
    if let Some(k) = dims.iter().position(|&d| d != 8) {
        return Err(Error::Precondition(format!(
            "triple {},{},{} has coupling dimension {}, expected 8",
            k + 1,
            (k + 1) % N + 1,
            (k + 2) % N + 1,
            dims[k]
        )));
    }
    let conditions = bond_conditions(p);
    let mut diagram = BondDiagram::new();
    for k in 0..3 {
        let total = conditions.gcd_degree(k, Sign::Plus) + conditions.gcd_degree(k, Sign::Minus);
        diagram.set(k, k + 3, total as i64)?;
    }
    Ok(MaximalDiagram { diagram, conditions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkage::{lines_from_dh, triple_coupling_dimension};
    use crate::sample;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ortho(b: [i64; 6]) -> DHParams<Rational> {
        DHParams::from_i64([(0, 1); 6], b, [0; 6]).unwrap()
    }

    #[test]
    fn bricard_intersection_example() {
        let r = classify(&ortho([0, 40, 32, 0, 25, 7]));
        let f = r.flags();
        assert!(f.family1 && f.family2 && f.bricard_orthogonal);
        assert!(!f.dietmaier);
        let sq = r.bricard_orthogonal.equations.last().unwrap();
        assert_eq!(sq.lhs, Rational::from_i64(1649));
        assert_eq!(sq.rhs, Rational::from_i64(1649));
        assert_eq!(r.coupling_dimensions, [8; 6]);
        assert_eq!(r.genus, GenusBound { bound: 5, case: GenusCase::AllGeneric });
    }

    #[test]
    fn genus_four_example() {
        let r = classify(&ortho([4, 3, 5, 7, 9, 8]));
        assert!(r.flags().bricard_orthogonal && r.flags().family2);
        assert!(!r.flags().family1);
        assert_eq!(r.bricard_orthogonal.equations.last().unwrap().lhs, Rational::from_i64(122));
    }

    #[test]
    fn generic_parameters_match_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f = classify(&sample::random_dh(&mut rng)).flags();
            assert_eq!(f, FamilyFlags { hooke: false, dietmaier: false, family1: false, family2: false, bricard_orthogonal: false });
        }
    }

    #[test]
    fn float_flags_agree_with_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let p = sample::random_family1(&mut rng);
            assert_eq!(classify(&p).flags(), classify(&p.to_f64()).flags());
            let p = sample::random_dh(&mut rng);
            assert_eq!(classify(&p).flags(), classify(&p.to_f64()).flags());
        }
    }

    #[test]
    fn dietmaier_found_up_to_orientation() {
        let q = |n, d| Rational::ratio(n, d);
        let b = [2, 2, 5, 3, 3, 5].map(Rational::from_i64);
        // c_5 chosen so that f_1 + f_2 = f_4 + f_5 = -1/3.
        let c5 = (q(-1, 3) - q(3, 7)) / Rational::from_i64(3);
        let c = [q(1, 3), q(-1, 2), q(2, 5), q(1, 7), c5, q(2, 5)];
        let s = [1, 0, 1, 4, 0, 4].map(Rational::from_i64);
        let p = DHParams::new(c, b, s).unwrap();
        let r = classify(&p);
        assert!(r.dietmaier.holds);
        assert_eq!(r.dietmaier_orientation, 0);
        let flipped = p.flip_mask(0b000110);
        assert!(!dietmaier_equations(&flipped, &EqBuilder::new(&flipped)).holds);
        let r = classify(&flipped);
        assert!(r.dietmaier.holds);
        assert_ne!(r.dietmaier_orientation, 0);
    }

    #[test]
    fn hooke_geometric_form_holds_on_constructed_linkage() {
        // Two concurrent triples: b_1 = b_2 = b_4 = b_5 = s_2 = s_5 = 0. Pick
        // the remaining parameters so that both ways around give the same
        // |PQ|^2.
        let q = |n, d| Rational::ratio(n, d);
        let c = [q(3, 5), q(4, 5), q(0, 1), q(5, 13), q(-3, 5), q(0, 1)];
        let b = [0, 0, 2, 0, 0, 1].map(Rational::from_i64);
        // side 1: d_3^2 + s_3^2 + s_4^2 = 4 + 1 + 4 = 9; side 2: d_6^2 + s_6^2 + s_1^2 = 1 + 4 + 4 = 9
        let s = [2, 0, 1, 2, 0, 2].map(Rational::from_i64);
        let r = classify(&DHParams::new(c, b, s).unwrap());
        assert!(r.hooke_geometric.holds);
        assert!(!r.hooke.holds);
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.coupling_dimensions[0], 4);
        assert_eq!(r.coupling_dimensions[3], 4);
    }

    #[test]
    fn hooke_geometric_form_holds_for_two_concurrent_triples() {
        use crate::dualquat::Line;
        use crate::linkage::{dh_from_lines, Linkage6R};
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pt = |rng: &mut ChaCha8Rng| std::array::from_fn(|_| sample::small_rational(rng, 6, 3));
            let (p, q): ([Rational; 3], [Rational; 3]) = (pt(&mut rng), pt(&mut rng));
            let axes = std::array::from_fn(|k| {
                let centre = if k < 3 { p.clone() } else { q.clone() };
                Line::from_point_direction(centre, sample::rational_unit_vector(&mut rng)).unwrap()
            });
            let Ok(l) = Linkage6R::new(axes) else { continue };
            let r = classify(&dh_from_lines(&l).unwrap());
            assert!(r.hooke_geometric.holds, "{:?}", r.hooke_geometric.equations.last());
            assert_eq!((r.coupling_dimensions[0], r.coupling_dimensions[3]), (4, 4));
        }
    }

    #[test]
    fn dimensions_from_dh_match_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = [0usize; 9];
        for round in 0..60 {
            let mut p = sample::random_dh(&mut rng);
            match round % 3 {
                0 => {
                    p.b[0] = Rational::from_i64(0);
                    p.b[1] = Rational::from_i64(0);
                    p.s[1] = Rational::from_i64(0);
                }
                1 => {
                    p.b[1] = -p.b[0].clone();
                    p.s[1] = Rational::from_i64(0);
                }
                _ => {}
            }
            let Ok(syn) = lines_from_dh(&p) else { continue };
            let l = &syn.linkage;
            for k in 0..4 {
                let rank = triple_coupling_dimension(l.axis(k), l.axis(k + 1), l.axis(k + 2));
                assert_eq!(triple_dimension_from_dh(&p, k), rank, "triple {k} of {p:?}");
                seen[rank] += 1;
            }
        }
        assert!(seen[4] > 0 && seen[6] > 0 && seen[8] > 0);
    }

    #[test]
    fn genus_table() {
        assert_eq!(genus_bound(&[8; 6]).case, GenusCase::AllGeneric);
        assert_eq!(genus_bound(&[6, 8, 8, 8, 8, 8]).bound, 3);
        assert_eq!(genus_bound(&[8, 6, 8, 8, 6, 8]).case, GenusCase::OppositeBennettTriples { triple: 1 });
        assert_eq!(genus_bound(&[4, 8, 8, 6, 8, 8]).case, GenusCase::ConcurrentTriple { triple: 0 });
        assert_eq!(genus_bound(&[4, 8, 8, 6, 8, 8]).bound, 5);
        assert_eq!(genus_bound(&[6, 4, 8, 4, 8, 8]).case, GenusCase::ConcurrentTriple { triple: 1 });
    }

    #[test]
    fn diagram_parse_and_print() {
        let d: BondDiagram = "1-4:4, 2-5:4,3-6:-1".parse().unwrap();
        assert_eq!(d.get(3, 0), 4);
        assert_eq!(d.get(2, 5), -1);
        assert_eq!(d.to_string(), "1-4:4,2-5:4,3-6:-1");
        assert!("".parse::<BondDiagram>().unwrap().is_empty());
        for bad in ["1-2:1", "1-1:1", "1-7:1", "1-4", "a-4:1", "1-4:1,4-1:2"] {
            assert!(bad.parse::<BondDiagram>().is_err(), "{bad}");
        }
    }

    #[test]
    fn coupler_degree_examples() {
        let d: BondDiagram = "1-4:1,2-5:1".parse().unwrap();
        assert_eq!(coupler_degree(&d, 2, 4).unwrap(), 2);
        assert_eq!(coupler_degree(&BondDiagram::new(), 0, 3).unwrap(), 0);
        let full: BondDiagram = "1-4:4,2-5:4,3-6:4".parse().unwrap();
        for i in 0..N {
            assert_eq!(coupler_degree(&full, i, (i + 3) % N).unwrap(), 12);
            assert_eq!(coupler_degree(&full, i, (i + 1) % N).unwrap(), 4);
        }
        assert!(coupler_degree(&d, 1, 1).is_err());
    }

    #[test]
    fn maximal_diagram_of_bricard() {
        let m = maximal_bond_diagram(&ortho([0, 40, 32, 0, 25, 7])).unwrap();
        assert_eq!(m.diagram.to_string(), "1-4:4,2-5:4,3-6:4");
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut generic = sample::random_dh(&mut rng);
        while coupling_dimensions_from_dh(&generic) != [8; 6] {
            generic = sample::random_dh(&mut rng);
        }
        assert!(maximal_bond_diagram(&generic).unwrap().diagram.is_empty());
        let mut p = ortho([0, 40, 32, 0, 25, 7]);
        p.b[0] = Rational::from_i64(40);
        assert!(maximal_bond_diagram(&p).is_err());
    }

    #[test]
    fn maximal_diagram_of_family1() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let p = sample::random_family1(&mut rng);
            if coupling_dimensions_from_dh(&p) != [8; 6] {
                continue;
            }
            let m = maximal_bond_diagram(&p).unwrap();
            for k in 0..3 {
                assert_eq!(m.diagram.get(k, k + 3), 4, "{p:?}");
            }
        }
    }
}
