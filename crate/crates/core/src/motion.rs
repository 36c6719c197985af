//! Numerical tracing of the configuration curve.
//!
//! Joints are parametrized by half-angles `psi`: the factor of joint `k` is
//! `cos(psi_k) - sin(psi_k) h_k`, which is `t_k - h_k` with `t_k = cot(psi_k)`
//! up to scale. The identity configuration is `psi = 0` and no chart switch
//! is needed. Samples report joint angles `theta_k = 2 psi_k` in `(-pi, pi]`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dualquat::DualQuaternion;
use crate::error::{Error, Result};
use crate::linkage::{JointParameter, Linkage6R, N};

type DQ = DualQuaternion<f64>;

/// Relative singular value threshold for Jacobian ranks.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct TrackerConfig {
    /// Arc length of a full predictor step in half-angle space.
    pub step: f64,
    /// Budget of accepted steps.
    pub max_steps: usize,
    /// Bound on the normalized closure residual of accepted samples.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self { step: 0.05, max_steps: 2000, tol: 1e-11, max_iter: 25, seed: 0 }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig(format!("step size must be positive, got {}", self.step)));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("step budget must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("Newton iteration limit must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MotionSample {
    pub step: usize,
    /// Joint rotation angles `2 psi_k`, wrapped to `(-pi, pi]`.
    pub angles: [f64; N],
    pub residual: f64,
    pub jac_rank: usize,
    /// Ratio of the largest to the smallest nonzero singular value.
    pub condition: f64,
}

impl MotionSample {
    pub fn parameters(&self) -> [JointParameter<f64>; N] {
        self.angles.map(|a| JointParameter::from_half_angle(a / 2.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The start configuration is an isolated solution.
    NoMotion,
    ReturnedToStart,
    StepBudget,
    /// Step size fell below its floor without a converged corrector.
    NewtonFailure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Track {
    pub samples: Vec<MotionSample>,
    pub stop: StopReason,
    /// Rejected corrector attempts (each followed by a smaller step).
    pub rejected: usize,
}

/// Closure equations in half-angle coordinates, with dual rows scaled by a
/// length so that both parts are comparable.
struct System<'a> {
    axes: [&'a DQ; N],
    length: f64,
}

impl<'a> System<'a> {
    fn new(l: &'a Linkage6R<f64>) -> Self {
        let axes = std::array::from_fn(|k| l.axis(k).value());
        let length = axes.iter().map(|h| h.dual().iter().fold(0.0_f64, |a, v| a.max(v.abs()))).fold(1.0, f64::max);
        Self { axes, length }
    }

    fn factor(&self, k: usize, psi: f64) -> DQ {
        DQ::scalar(psi.cos()) - self.axes[k].scale(&psi.sin())
    }

    fn factor_derivative(&self, k: usize, psi: f64) -> DQ {
        DQ::scalar(-psi.sin()) - self.axes[k].scale(&psi.cos())
    }

    fn product(&self, psi: &[f64; N]) -> DQ {
        (0..N).fold(DQ::one(), |acc, k| acc * self.factor(k, psi[k]))
    }

    fn scaled(&self, q: &DQ) -> [f64; 7] {
        let c = q.coeffs();
        std::array::from_fn(|r| if r < 3 { c[r + 1] } else { c[r + 1] / self.length })
    }

    fn residual(&self, psi: &[f64; N]) -> f64 {
        normalized_residual(&self.product(psi))
    }

    fn jacobian(&self, psi: &[f64; N]) -> DMatrix<f64> {
        let factors: [DQ; N] = std::array::from_fn(|k| self.factor(k, psi[k]));
        let mut prefix = vec![DQ::one()];
        for f in &factors {
            let next = prefix.last().unwrap().clone() * f.clone();
            prefix.push(next);
        }
        let mut suffix = vec![DQ::one(); N + 1];
        for k in (0..N).rev() {
            suffix[k] = factors[k].clone() * suffix[k + 1].clone();
        }
        let mut j = DMatrix::zeros(7, N);
        for k in 0..N {
            let col = self.scaled(&(prefix[k].clone() * self.factor_derivative(k, psi[k]) * suffix[k + 1].clone()));
            for (r, v) in col.iter().enumerate() {
                j[(r, k)] = *v;
            }
        }
        j
    }
}

fn normalized_residual(q: &DQ) -> f64 {
    let c = q.coeffs();
    let scale = c.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    c[1..].iter().fold(0.0_f64, |a, v| a.max(v.abs())) / scale
}

/// The seven non-scalar coordinates of the closure product at joint angles
/// `theta`, divided by the largest coordinate magnitude.
pub fn closure_system(l: &Linkage6R<f64>, theta: &[f64; N]) -> Result<[f64; 7]> {
    let sys = System::new(l);
    let q = sys.product(&theta.map(|a| a / 2.0));
    let c = q.coeffs();
    let scale = c.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::DegenerateConfiguration);
    }
    Ok(std::array::from_fn(|r| c[r + 1] / scale))
}

struct RankInfo {
    rank: usize,
    condition: f64,
    /// Orthonormal basis of the numerical right null space.
    null: Vec<DVector<f64>>,
}

fn rank_info(j: &DMatrix<f64>) -> RankInfo {
    let svd = j.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let largest = sv.iter().copied().fold(0.0, f64::max);
    let mut rank = 0;
    let mut smallest = f64::INFINITY;
    let mut null = Vec::new();
    for (i, &s) in sv.iter().enumerate() {
        if s > RANK_TOL * largest {
            rank += 1;
            smallest = smallest.min(s);
        } else {
            null.push(v_t.row(i).transpose());
        }
    }
    let condition = if rank == 0 { f64::INFINITY } else { largest / smallest };
    RankInfo { rank, condition, null }
}

fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

/// Distance of half-angle vectors modulo `pi` (sign of the product is
/// irrelevant).
fn projective_distance(a: &[f64; N], b: &[f64; N]) -> f64 {
    let pi = std::f64::consts::PI;
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).rem_euclid(pi);
            d.min(pi - d)
        })
        .fold(0.0, f64::max)
}

/// Unit tangent at `psi`, oriented along `prev` when given.
fn tangent(info: &RankInfo, prev: Option<&DVector<f64>>, rng: &mut ChaCha8Rng) -> Option<DVector<f64>> {
    if info.null.is_empty() {
        return None;
    }
    let guide = match prev {
        Some(p) => p.clone(),
        None => DVector::from_fn(N, |_, _| rng.gen_range(-1.0..1.0)),
    };
    let mut t = DVector::zeros(N);
    for v in &info.null {
        t += v * v.dot(&guide);
    }
    if t.norm() < 1e-12 {
        t = info.null[0].clone();
    }
    let t = t.normalize();
    Some(if t.dot(&guide) < 0.0 { -t } else { t })
}

/// Gauss-Newton on the closure equations plus the hyperplane
/// `tau . (psi - anchor) = 0`; converged when the normalized residual is
/// below `tol`.
fn correct(sys: &System, start: [f64; N], anchor: &[f64; N], tau: &DVector<f64>, cfg: &TrackerConfig) -> Option<[f64; N]> {
    let mut psi = start;
    for _ in 0..cfg.max_iter {
        if sys.residual(&psi) < cfg.tol {
            return Some(psi);
        }
        let j = sys.jacobian(&psi);
        let f = sys.scaled(&sys.product(&psi));
        let mut a = DMatrix::zeros(8, N);
        let mut rhs = DVector::zeros(8);
        for r in 0..7 {
            for c in 0..N {
                a[(r, c)] = j[(r, c)];
            }
            rhs[r] = -f[r];
        }
        let mut offset = 0.0;
        for c in 0..N {
            a[(7, c)] = tau[c];
            offset += tau[c] * (psi[c] - anchor[c]);
        }
        rhs[7] = -offset;
        let delta = a.svd(true, true).solve(&rhs, 1e-14).ok()?;
        if !delta.iter().all(|v| v.is_finite()) {
            return None;
        }
        for c in 0..N {
            psi[c] += delta[c];
        }
    }
    (sys.residual(&psi) < cfg.tol).then_some(psi)
}

fn sample(sys: &System, step: usize, psi: &[f64; N]) -> MotionSample {
    let info = rank_info(&sys.jacobian(psi));
    MotionSample {
        step,
        angles: psi.map(|p| wrap_angle(2.0 * p)),
        residual: sys.residual(psi),
        jac_rank: info.rank,
        condition: info.condition,
    }
}

/// Traces the real configuration curve through the identity configuration
/// by pseudo-arclength continuation. Stops when the path returns to the
/// start, when the step budget is spent, or when the corrector fails at the
/// smallest step size. An empty result means no motion was found at this
/// resolution, which does not prove rigidity.
pub fn track(l: &Linkage6R<f64>, cfg: &TrackerConfig) -> Result<Track> {
    cfg.validate()?;
    let sys = System::new(l);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = [0.0; N];
    let info = rank_info(&sys.jacobian(&start));
    let Some(mut tau) = tangent(&info, None, &mut rng) else {
        return Ok(Track { samples: Vec::new(), stop: StopReason::NoMotion, rejected: 0 });
    };
    let mut samples = vec![sample(&sys, 0, &start)];
    let mut psi = start;
    let mut h = cfg.step;
    let h_min = cfg.step / 1024.0;
    let mut rejected = 0;
    let mut left_start = false;
    while samples.len() <= cfg.max_steps {
        let anchor: [f64; N] = std::array::from_fn(|c| psi[c] + h * tau[c]);
        match correct(&sys, anchor, &anchor, &tau, cfg) {
            Some(next) if projective_distance(&next, &psi) < 2.0 * h => {
                psi = next;
                let info = rank_info(&sys.jacobian(&psi));
                let Some(t) = tangent(&info, Some(&tau), &mut rng) else {
                    // Isolated point reached: nothing further to follow.
                    samples.push(sample(&sys, samples.len(), &psi));
                    return Ok(Track { samples, stop: StopReason::NewtonFailure, rejected });
                };
                tau = t;
                samples.push(sample(&sys, samples.len(), &psi));
                let d = projective_distance(&psi, &start);
                if d > 3.0 * cfg.step {
                    left_start = true;
                } else if left_start && d < 1.5 * cfg.step {
                    return Ok(Track { samples, stop: StopReason::ReturnedToStart, rejected });
                }
                h = (h * 1.5).min(cfg.step);
            }
            _ => {
                rejected += 1;
                h /= 2.0;
                if h < h_min {
                    return Ok(Track { samples, stop: StopReason::NewtonFailure, rejected });
                }
            }
        }
    }
    Ok(Track { samples, stop: StopReason::StepBudget, rejected })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MobilityVerdict {
    /// Tracking found no curve through the identity configuration.
    NoMotionFound,
    /// Jacobian rank 5 at no fewer than 90% of the samples.
    MobilityOne,
    /// Jacobian rank at the start is at most 3.
    HigherMobility {
        rank: usize,
    },
    Inconclusive,
}

/// Numerical evidence for mobility. A witness, not a proof.
#[derive(Clone, Debug, PartialEq)]
pub struct MobilityWitness {
    pub samples: usize,
    pub max_residual: f64,
    pub rank_five_fraction: f64,
    pub start_rank: usize,
    pub stop: StopReason,
    pub verdict: MobilityVerdict,
}

pub fn mobility_witness(l: &Linkage6R<f64>, cfg: &TrackerConfig) -> Result<MobilityWitness> {
    let track = track(l, cfg)?;
    Ok(witness_from_track(l, &track))
}

pub fn witness_from_track(l: &Linkage6R<f64>, track: &Track) -> MobilityWitness {
    let sys = System::new(l);
    let start_rank = rank_info(&sys.jacobian(&[0.0; N])).rank;
    let n = track.samples.len();
    let max_residual = track.samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let rank_five = track.samples.iter().filter(|s| s.jac_rank == 5).count();
    let rank_five_fraction = if n == 0 { 0.0 } else { rank_five as f64 / n as f64 };
    let verdict = if start_rank <= 3 {
        MobilityVerdict::HigherMobility { rank: start_rank }
    } else if n == 0 {
        MobilityVerdict::NoMotionFound
    } else if rank_five_fraction >= 0.9 {
        MobilityVerdict::MobilityOne
    } else {
        MobilityVerdict::Inconclusive
    };
    MobilityWitness { samples: n, max_residual, rank_five_fraction, start_rank, stop: track.stop, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualquat::Line;
    use crate::linkage::{assemble, DHParams};

    fn bricard() -> Linkage6R<f64> {
        let p = DHParams::new([0.0; 6], [0.0, 40.0, 32.0, 0.0, 25.0, 7.0], [0.0; 6]).unwrap();
        assemble(&p, 1).unwrap()
    }

    #[test]
    fn identity_closes() {
        let r = closure_system(&bricard(), &[0.0; 6]).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-15));
        let r = closure_system(&bricard(), &[0.3, -0.2, 0.9, 1.1, 0.4, -2.0]).unwrap();
        assert!(r.iter().any(|v| v.abs() > 1e-3));
    }

    #[test]
    fn analytic_jacobian_matches_differences() {
        let l = bricard();
        let sys = System::new(&l);
        let psi = [0.1, -0.4, 0.7, 0.2, -1.3, 0.5];
        let j = sys.jacobian(&psi);
        let h = 1e-6;
        for c in 0..N {
            let (mut p, mut m) = (psi, psi);
            p[c] += h;
            m[c] -= h;
            let (fp, fm) = (sys.scaled(&sys.product(&p)), sys.scaled(&sys.product(&m)));
            for r in 0..7 {
                assert!((j[(r, c)] - (fp[r] - fm[r]) / (2.0 * h)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn bricard_moves() {
        let t = track(&bricard(), &TrackerConfig::default()).unwrap();
        assert!(t.samples.len() >= 50, "{} samples, stop {:?}", t.samples.len(), t.stop);
        assert!(t.samples.iter().all(|s| s.residual < 1e-9));
        let w = witness_from_track(&bricard(), &t);
        assert_eq!(w.verdict, MobilityVerdict::MobilityOne, "{w:?}");
    }

    #[test]
    fn dh_invariants_constant_along_path() {
        let l = bricard();
        let p = l.dh_params().unwrap();
        let t = track(&l, &TrackerConfig { max_steps: 60, ..Default::default() }).unwrap();
        for s in &t.samples {
            let moved = l.transform_by_configuration(&s.parameters()).unwrap();
            assert!(moved.dh_params().unwrap().max_abs_diff(&p) < 1e-8);
        }
    }

    #[test]
    fn genus_four_orthogonal_moves_only_in_odd_sign_class() {
        // Axis reversals keep the parity of negative b when c = 0, so the two
        // sign classes are different linkages. With all b positive the only
        // real assembly is folded and isolated.
        let even = DHParams::new([0.0; 6], [4.0, 3.0, 5.0, 7.0, 9.0, 8.0], [0.0; 6]).unwrap();
        let t = track(&assemble(&even, 1).unwrap(), &TrackerConfig::default()).unwrap();
        assert!(t.samples.len() < 5);
        let odd = DHParams::new([0.0; 6], [-4.0, 3.0, 5.0, 7.0, 9.0, 8.0], [0.0; 6]).unwrap();
        let t = track(&assemble(&odd, 1).unwrap(), &TrackerConfig::default()).unwrap();
        assert!(t.samples.len() >= 50);
        assert_eq!(t.stop, StopReason::ReturnedToStart);
    }

    #[test]
    fn generic_linkage_is_rigid_and_tracking_is_deterministic() {
        use crate::sample::random_linkage;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let l = random_linkage(&mut rng, true).to_f64();
        let t = track(&l, &TrackerConfig::default()).unwrap();
        assert!(t.samples.is_empty());
        assert_eq!(t.stop, StopReason::NoMotion);
        let cfg = TrackerConfig { max_steps: 30, seed: 9, ..Default::default() };
        assert_eq!(track(&bricard(), &cfg).unwrap(), track(&bricard(), &cfg).unwrap());
    }

    #[test]
    fn spherical_chain_has_higher_mobility() {
        let dirs = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]];
        let axes = dirs.map(|d| Line::from_point_direction([0.5, -1.0, 2.0], d).unwrap());
        let l = Linkage6R::new(axes).unwrap();
        let w = mobility_witness(&l, &TrackerConfig { max_steps: 20, ..Default::default() }).unwrap();
        assert_eq!(w.verdict, MobilityVerdict::HigherMobility { rank: 3 });

        // Planar: all axes parallel, which the checked constructor rejects.
        let points = [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [3.0, 1.0, 0.0], [2.0, 3.0, 0.0], [0.0, 2.5, 0.0], [-1.0, 1.0, 0.0]];
        let axes = points.map(|p| Line::from_point_direction(p, [0.0, 0.0, 1.0]).unwrap());
        let w = mobility_witness(&Linkage6R::new_unchecked(axes), &TrackerConfig { max_steps: 20, ..Default::default() }).unwrap();
        assert_eq!(w.verdict, MobilityVerdict::HigherMobility { rank: 3 });
    }

    #[test]
    fn config_validation() {
        assert!(TrackerConfig { max_steps: 0, ..Default::default() }.validate().is_err());
        assert!(TrackerConfig { step: -1.0, ..Default::default() }.validate().is_err());
        assert!(TrackerConfig::default().validate().is_ok());
    }
}
