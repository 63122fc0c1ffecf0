//! Chaos diagnostics: Poincaré sections, the largest Lyapunov exponent
//! (Benettin two-trajectory method), regular-orbit fractions on an energy
//! shell, and the threshold-energy scan `ε_th(γ)`.
//!
//! All random initial conditions come from streams keyed on
//! `(seed, purpose, γ, ε, sample index)`, so scans are reproducible and
//! independent of scheduling.

use crate::dynamics::{rk4_step, Dynamics, DynamicsError, Effective, TrajectoryKind};
use crate::effective::{epsilon_convex_max, v_eff_2d, z_matrix_2d};
use crate::math;
use crate::model::{classical_potential, PhaseState};
use crate::numeric::map_indexed;
use crate::rng;
use alloc::vec::Vec;
use rand_core::RngCore;

#[derive(Debug, Clone, PartialEq)]
pub enum ChaosError {
    /// The requested energy shell has no states on the section slice.
    InvalidShell { epsilon: f64 },
    /// Shell sampling kept rejecting (effective-energy convention only).
    SamplingFailed { epsilon: f64, gamma: f64 },
}

impl core::fmt::Display for ChaosError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ChaosError::InvalidShell { epsilon } => {
                write!(f, "no states on the section slice at epsilon = {epsilon}")
            }
            ChaosError::SamplingFailed { epsilon, gamma } => write!(
                f,
                "shell sampling failed at epsilon = {epsilon}, gamma = {gamma}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ChaosError {}

/// One oriented crossing of the section plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionPoint {
    pub q1: f64,
    pub p1: f64,
    pub crossing_time: f64,
    pub direction: i8,
}

/// Which plane the section lives on. `Q2Zero` is the default
/// `{q2 = 0, p2 > 0}` plane recording `(q1, p1)`; `Q1Zero` is its
/// exchange-symmetric companion.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SectionPlane {
    #[default]
    Q2Zero,
    Q1Zero,
}

/// A Poincaré section, possibly cut short by a termination.
#[derive(Debug, Clone)]
pub struct Section {
    pub points: Vec<SectionPoint>,
    pub termination: Option<DynamicsError>,
}

/// Crossing refinement target for `|q2|` at a recorded point.
pub const CROSSING_TOL: f64 = 1e-10;

/// Records upward (`p_normal > 0`) crossings of the section plane along the
/// RK4 trajectory from `s0`. Crossings are refined on a cubic Hermite
/// interpolant of the step by bisection.
pub fn poincare_section<D: Dynamics>(
    system: &D,
    s0: &PhaseState,
    t_total: f64,
    dt: f64,
    plane: SectionPlane,
) -> Section {
    let swap = |s: &PhaseState| match plane {
        SectionPlane::Q2Zero => *s,
        SectionPlane::Q1Zero => PhaseState::new(s.q2, s.q1, s.p2, s.p1),
    };
    let n_steps = (t_total / dt) as usize;
    let mut points = Vec::new();
    let mut termination = None;
    let mut s = *s0;
    for step in 0..n_steps {
        let next = match rk4_step(system, &s, dt) {
            Ok(n) if n.is_finite() => n,
            Ok(_) => {
                termination = Some(DynamicsError::Diverged { step });
                break;
            }
            Err(e) => {
                termination = Some(e);
                break;
            }
        };
        let a = swap(&s);
        let b = swap(&next);
        if a.q2 < 0.0 && b.q2 >= 0.0 {
            let t0 = step as f64 * dt;
            if let Some(point) = refine_crossing(system, &s, &next, t0, dt, plane) {
                points.push(point);
            }
        }
        s = next;
    }
    Section {
        points,
        termination,
    }
}

#[inline]
fn hermite(theta: f64, dt: f64, ya: f64, da: f64, yb: f64, db: f64) -> f64 {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    (2.0 * t3 - 3.0 * t2 + 1.0) * ya
        + (t3 - 2.0 * t2 + theta) * dt * da
        + (-2.0 * t3 + 3.0 * t2) * yb
        + (t3 - t2) * dt * db
}

fn refine_crossing<D: Dynamics>(
    system: &D,
    s_before: &PhaseState,
    s_after: &PhaseState,
    t0: f64,
    dt: f64,
    plane: SectionPlane,
) -> Option<SectionPoint> {
    // Accelerations give the momenta their own Hermite interpolants; fall
    // back to linear interpolation if the vector field is unavailable at an
    // endpoint.
    let zero = PhaseState::default();
    let acc_a = system.rhs(s_before).unwrap_or(zero);
    let acc_b = system.rhs(s_after).unwrap_or(zero);
    let (a, b, aa, ab) = match plane {
        SectionPlane::Q2Zero => (*s_before, *s_after, acc_a, acc_b),
        SectionPlane::Q1Zero => (
            PhaseState::new(s_before.q2, s_before.q1, s_before.p2, s_before.p1),
            PhaseState::new(s_after.q2, s_after.q1, s_after.p2, s_after.p1),
            PhaseState::new(acc_a.q2, acc_a.q1, acc_a.p2, acc_a.p1),
            PhaseState::new(acc_b.q2, acc_b.q1, acc_b.p2, acc_b.p1),
        ),
    };
    let q2_at = |theta: f64| hermite(theta, dt, a.q2, a.p2, b.q2, b.p2);
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let val = q2_at(mid);
        if math::abs(val) <= CROSSING_TOL {
            lo = mid;
            hi = mid;
            break;
        }
        if (q2_at(lo) < 0.0) == (val < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    if math::abs(q2_at(theta)) > CROSSING_TOL {
        return None;
    }
    let p2 = hermite(theta, dt, a.p2, aa.p2, b.p2, ab.p2);
    if p2 <= 0.0 {
        return None;
    }
    Some(SectionPoint {
        q1: hermite(theta, dt, a.q1, a.p1, b.q1, b.p1),
        p1: hermite(theta, dt, a.p1, aa.p1, b.p1, ab.p1),
        crossing_time: t0 + theta * dt,
        direction: 1,
    })
}

/// Running Benettin estimate of the largest Lyapunov exponent.
#[derive(Debug, Clone)]
pub struct LyapunovEstimate {
    /// Final running average, `(1/t)·Σ ln(d_k/d0)` per rescaled time.
    pub lambda_max: f64,
    /// `(t, running λ)` at every renormalization.
    pub history: Vec<(f64, f64)>,
    pub t_total: f64,
    pub renorm_interval: f64,
    /// Set when the main or shadow trajectory terminated early; the estimate
    /// then covers only the time reached.
    pub termination: Option<DynamicsError>,
}

impl LyapunovEstimate {
    pub fn is_valid(&self) -> bool {
        self.termination.is_none() && !self.history.is_empty()
    }
}

/// Two-trajectory Benettin method: a shadow state offset by `d0` is carried
/// along and rescaled back to distance `d0` every `renorm_interval`.
pub fn lyapunov_max<D: Dynamics>(
    system: &D,
    s0: &PhaseState,
    t_total: f64,
    dt: f64,
    renorm_interval: f64,
    d0: f64,
) -> LyapunovEstimate {
    let steps_per_renorm = (renorm_interval / dt + 0.5) as usize;
    let steps_per_renorm = steps_per_renorm.max(1);
    let n_renorms = (t_total / (steps_per_renorm as f64 * dt)) as usize;
    let mut main = *s0;
    let mut shadow = PhaseState::new(s0.q1 + d0, s0.q2, s0.p1, s0.p2);
    let mut log_sum = 0.0;
    let mut history = Vec::with_capacity(n_renorms);
    let mut termination = None;
    'outer: for k in 0..n_renorms {
        for step in 0..steps_per_renorm {
            let global_step = k * steps_per_renorm + step;
            match rk4_step(system, &main, dt) {
                Ok(next) if next.is_finite() => main = next,
                Ok(_) => {
                    termination = Some(DynamicsError::Diverged { step: global_step });
                    break 'outer;
                }
                Err(e) => {
                    termination = Some(e);
                    break 'outer;
                }
            }
            match rk4_step(system, &shadow, dt) {
                Ok(next) if next.is_finite() => shadow = next,
                Ok(_) => {
                    termination = Some(DynamicsError::Diverged { step: global_step });
                    break 'outer;
                }
                Err(e) => {
                    termination = Some(e);
                    break 'outer;
                }
            }
        }
        let t = (k + 1) as f64 * steps_per_renorm as f64 * dt;
        let d = main.distance(&shadow);
        if d <= 0.0 {
            // Perfectly degenerate pair; reseed the offset.
            shadow = PhaseState::new(main.q1 + d0, main.q2, main.p1, main.p2);
            history.push((t, log_sum / t));
            continue;
        }
        log_sum += math::ln(d / d0);
        let scale = d0 / d;
        shadow = PhaseState::new(
            main.q1 + (shadow.q1 - main.q1) * scale,
            main.q2 + (shadow.q2 - main.q2) * scale,
            main.p1 + (shadow.p1 - main.p1) * scale,
            main.p2 + (shadow.p2 - main.p2) * scale,
        );
        history.push((t, log_sum / t));
    }
    let lambda_max = history.last().map(|&(_, l)| l).unwrap_or(0.0);
    LyapunovEstimate {
        lambda_max,
        history,
        t_total,
        renorm_interval,
        termination,
    }
}

/// Frozen classifier settings: an orbit is chaotic when its Lyapunov estimate
/// at `t_total` exceeds `lambda_threshold` (one order of magnitude above the
/// regular-orbit numerical floor at these settings).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    pub lambda_threshold: f64,
    pub t_total: f64,
    pub dt: f64,
    pub renorm_interval: f64,
    pub d0: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            lambda_threshold: 5e-3,
            t_total: 2e4,
            dt: 1e-3,
            renorm_interval: 1.0,
            d0: 1e-8,
        }
    }
}

/// Outcome of classifying one orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitClass {
    Regular,
    Chaotic,
    /// The orbit left the validity region (domain exit, singular kinetic
    /// matrix, or divergence) before `t_total`.
    Terminated,
}

pub fn classify<D: Dynamics>(system: &D, s0: &PhaseState, cfg: &ClassifierConfig) -> OrbitClass {
    let est = lyapunov_max(system, s0, cfg.t_total, cfg.dt, cfg.renorm_interval, cfg.d0);
    if !est.is_valid() {
        return OrbitClass::Terminated;
    }
    if est.lambda_max > cfg.lambda_threshold {
        OrbitClass::Chaotic
    } else {
        OrbitClass::Regular
    }
}

/// Energy label convention for effective-system shells. The rescaled energy
/// axis of the threshold scan is ambiguous for γ > 0; the default labels an
/// initial condition by its classical rescaled energy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EnergyConvention {
    #[default]
    ClassicalEpsilon,
    EffectiveEnergy,
}

/// Draws the `index`-th initial condition on the section slice
/// `{q2 = 0, p2 > 0, E = ε}`: `(q1, p1)` uniform over the allowed disc, `p2`
/// fixed by the energy constraint. Returns `None` when rejection sampling
/// finds no admissible `p2` (possible only for the effective convention).
pub fn sample_shell_state(
    epsilon: f64,
    gamma: f64,
    convention: EnergyConvention,
    seed: u64,
    index: u64,
) -> Option<PhaseState> {
    let mut stream = rng::stream_keyed(seed, "shell", &[gamma, epsilon], index);
    for _ in 0..1000 {
        // Uniform over the disc q1² + p1² ≤ 2ε (the slice constraint for the
        // classical energy; a bounding disc for the effective one).
        let radius = math::sqrt(2.0 * epsilon);
        let r = radius * math::sqrt(rng::uniform(&mut stream));
        let angle = 2.0 * core::f64::consts::PI * rng::uniform(&mut stream);
        let q1 = r * math::cos(angle);
        let p1 = r * math::sin(angle);
        match convention {
            EnergyConvention::ClassicalEpsilon => {
                let p2_sq = 2.0 * (epsilon - classical_potential(q1, 0.0)) - p1 * p1;
                if p2_sq >= 0.0 {
                    return Some(PhaseState::new(q1, 0.0, p1, math::sqrt(p2_sq)));
                }
            }
            EnergyConvention::EffectiveEnergy => {
                let v = match v_eff_2d(q1, 0.0, gamma) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let z = match z_matrix_2d(q1, 0.0, gamma) {
                    Ok(z) => z,
                    Err(_) => continue,
                };
                let p2_sq = (2.0 * (epsilon - v) - z.a11 * p1 * p1) / z.a22;
                if p2_sq >= 0.0 {
                    return Some(PhaseState::new(q1, 0.0, p1, math::sqrt(p2_sq)));
                }
            }
        }
        let _ = stream.next_u64();
    }
    None
}

/// Share of regular orbits among `n_samples` section-slice initial
/// conditions at `(ε, γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularFraction {
    pub fraction: f64,
    pub n_regular: usize,
    pub n_chaotic: usize,
    pub n_terminated: usize,
    pub n_unsampled: usize,
}

pub fn regular_fraction(
    epsilon: f64,
    gamma: f64,
    n_samples: usize,
    cfg: &ClassifierConfig,
    convention: EnergyConvention,
    seed: u64,
) -> Result<RegularFraction, ChaosError> {
    if !(epsilon > 0.0) {
        return Err(ChaosError::InvalidShell { epsilon });
    }
    let classes = map_indexed(n_samples, |i| {
        match sample_shell_state(epsilon, gamma, convention, seed, i as u64) {
            Some(s0) => {
                if gamma == 0.0 {
                    Some(classify(&crate::dynamics::Classical, &s0, cfg))
                } else {
                    Some(classify(&Effective { gamma }, &s0, cfg))
                }
            }
            None => None,
        }
    });
    let mut out = RegularFraction {
        fraction: 0.0,
        n_regular: 0,
        n_chaotic: 0,
        n_terminated: 0,
        n_unsampled: 0,
    };
    for c in classes {
        match c {
            Some(OrbitClass::Regular) => out.n_regular += 1,
            Some(OrbitClass::Chaotic) => out.n_chaotic += 1,
            Some(OrbitClass::Terminated) => out.n_terminated += 1,
            None => out.n_unsampled += 1,
        }
    }
    if out.n_regular + out.n_chaotic + out.n_terminated == 0 {
        return Err(ChaosError::SamplingFailed { epsilon, gamma });
    }
    out.fraction = out.n_regular as f64 / n_samples as f64;
    Ok(out)
}

/// Settings of the `ε_th(γ)` bisection scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub classifier: ClassifierConfig,
    pub n_samples: usize,
    /// Bisection stops when `Δε/ε` falls below this.
    pub rel_tol: f64,
    pub bracket_lo: f64,
    pub convention: EnergyConvention,
    pub seed: u64,
    /// Minimum number of non-regular votes among `n_samples` for chaos to
    /// count as "showing up" at an energy. Isolated sticky layers (the
    /// near-separatrix chaos that exists well below the section-visible
    /// threshold) contribute single votes; the default of 3 of 32 tracks the
    /// energy at which chaotic orbits spread over the sections instead.
    pub min_chaotic_votes: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            classifier: ClassifierConfig::default(),
            n_samples: 32,
            rel_tol: 0.02,
            bracket_lo: 0.1,
            convention: EnergyConvention::default(),
            seed: 0,
            min_chaotic_votes: 3,
        }
    }
}

/// Threshold energies per γ, with the convexity limit `ε_m` alongside.
#[derive(Debug, Clone)]
pub struct ThresholdCurve {
    pub gammas: Vec<f64>,
    /// `None` marks a bracket failure at that γ.
    pub eps_th: Vec<Option<f64>>,
    pub eps_convex: Vec<f64>,
    pub config: ScanConfig,
}

/// Chaos "shows up" at `(γ, ε)` when at least `min_chaotic_votes` sampled
/// orbits classify non-regular. Orbits that terminate (leave the validity
/// region) count as chaotic appearance: beyond the convex domain the Toda
/// curvature criterion already signals instability.
///
/// Samples are evaluated in fixed-size chunks with early exit once the vote
/// is decided; per-index classification is deterministic, so the outcome is
/// independent of chunking and worker count.
pub fn chaos_shows_up(epsilon: f64, gamma: f64, scan: &ScanConfig) -> bool {
    let needed = scan.min_chaotic_votes.max(1);
    let n = scan.n_samples;
    let mut votes = 0usize;
    let mut done = 0usize;
    while done < n {
        let chunk = (n - done).min(8);
        let results = map_indexed(chunk, |j| {
            let i = (done + j) as u64;
            match sample_shell_state(epsilon, gamma, scan.convention, scan.seed, i) {
                Some(s0) => {
                    let class = if gamma == 0.0 {
                        classify(&crate::dynamics::Classical, &s0, &scan.classifier)
                    } else {
                        classify(&Effective { gamma }, &s0, &scan.classifier)
                    };
                    class != OrbitClass::Regular
                }
                None => false,
            }
        });
        votes += results.iter().filter(|&&b| b).count();
        done += chunk;
        if votes >= needed {
            return true;
        }
        if votes + (n - done) < needed {
            return false;
        }
    }
    votes >= needed
}

/// Bisects for the smallest ε at which chaos shows up, for each γ.
pub fn threshold_scan(gammas: &[f64], scan: &ScanConfig) -> ThresholdCurve {
    let eps_th = gammas
        .iter()
        .map(|&gamma| {
            let mut lo = scan.bracket_lo;
            let mut hi = 10.0 * (1.0 + gamma) * (1.0 + gamma);
            if chaos_shows_up(lo, gamma, scan) || !chaos_shows_up(hi, gamma, scan) {
                return None;
            }
            while (hi - lo) > scan.rel_tol * 0.5 * (hi + lo) {
                let mid = 0.5 * (lo + hi);
                if chaos_shows_up(mid, gamma, scan) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(0.5 * (lo + hi))
        })
        .collect();
    let eps_convex = gammas.iter().map(|&g| epsilon_convex_max(g)).collect();
    ThresholdCurve {
        gammas: gammas.to_vec(),
        eps_th,
        eps_convex,
        config: *scan,
    }
}

/// Number of occupied cells when the section points are binned on an
/// `n × n` grid over the bounding box of `reference`. A regular orbit's
/// occupancy saturates (the points fill a curve); a chaotic orbit's keeps
/// growing with observation time.
pub fn section_occupancy(points: &[SectionPoint], reference: &[SectionPoint], n: usize) -> usize {
    if reference.is_empty() {
        return 0;
    }
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    let mut p_min = f64::INFINITY;
    let mut p_max = f64::NEG_INFINITY;
    for pt in reference {
        q_min = q_min.min(pt.q1);
        q_max = q_max.max(pt.q1);
        p_min = p_min.min(pt.p1);
        p_max = p_max.max(pt.p1);
    }
    let q_span = (q_max - q_min).max(1e-9);
    let p_span = (p_max - p_min).max(1e-9);
    let mut occupied = alloc::vec![false; n * n];
    for pt in points {
        let i = (((pt.q1 - q_min) / q_span * n as f64) as usize).min(n - 1);
        let j = (((pt.p1 - p_min) / p_span * n as f64) as usize).min(n - 1);
        occupied[i * n + j] = true;
    }
    occupied.iter().filter(|&&b| b).count()
}

/// Kind marker for section/Lyapunov runs driven from configuration.
pub fn kind_label(kind: TrajectoryKind) -> &'static str {
    match kind {
        TrajectoryKind::Classical => "classical",
        TrajectoryKind::Effective { .. } => "effective",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Classical;

    #[test]
    fn decoupled_oscillation_sections_at_harmonic_period() {
        // q1 ≡ 0: the q2 motion is harmonic, upward crossings every 2π.
        let s0 = PhaseState::new(0.0, 0.4, 0.0, 0.0);
        let section = poincare_section(&Classical, &s0, 100.0, 1e-3, SectionPlane::Q2Zero);
        assert!(section.termination.is_none());
        let expected = (100.0 / (2.0 * core::f64::consts::PI)) as usize;
        assert!(
            section.points.len() == expected || section.points.len() == expected + 1,
            "{} crossings",
            section.points.len()
        );
        // First upward crossing of A·cos t is at 3π/2.
        let first = section.points[0].crossing_time;
        assert!((first - 1.5 * core::f64::consts::PI).abs() < 1e-6, "{first}");
        for pair in section.points.windows(2) {
            let gap = pair[1].crossing_time - pair[0].crossing_time;
            assert!((gap - 2.0 * core::f64::consts::PI).abs() < 1e-6, "{gap}");
        }
        for pt in &section.points {
            assert!(pt.q1.abs() < 1e-9);
            assert!(pt.p1.abs() < 1e-9);
            assert_eq!(pt.direction, 1);
        }
    }

    #[test]
    fn swapped_plane_mirrors_exchange_symmetry() {
        let s0 = PhaseState::new(0.3, 0.2, 0.1, 0.25);
        let swapped = PhaseState::new(0.2, 0.3, 0.25, 0.1);
        let a = poincare_section(&Classical, &s0, 200.0, 1e-3, SectionPlane::Q2Zero);
        let b = poincare_section(&Classical, &swapped, 200.0, 1e-3, SectionPlane::Q1Zero);
        assert_eq!(a.points.len(), b.points.len());
        for (x, y) in a.points.iter().zip(&b.points) {
            assert!((x.q1 - y.q1).abs() < 1e-12);
            assert!((x.p1 - y.p1).abs() < 1e-12);
        }
    }

    #[test]
    fn section_points_share_the_shell_energy() {
        let s0 = sample_shell_state(0.1, 0.0, EnergyConvention::ClassicalEpsilon, 7, 0).unwrap();
        let section = poincare_section(&Classical, &s0, 500.0, 1e-3, SectionPlane::Q2Zero);
        assert!(section.points.len() > 10);
        for pt in &section.points {
            // On the plane q2 = 0 the point's energy is recoverable from
            // (q1, p1) and the conserved shell value fixes p2².
            let p2_sq = 2.0 * (0.1 - classical_potential(pt.q1, 0.0)) - pt.p1 * pt.p1;
            assert!(p2_sq > -1e-8, "point left the shell: {p2_sq}");
        }
    }

    #[test]
    fn occupancy_separates_regular_from_chaotic() {
        // Regular orbit at ε = 0.1; chaotic orbit at ε = 2 (frozen samples).
        let regular =
            sample_shell_state(0.1, 0.0, EnergyConvention::ClassicalEpsilon, 7, 0).unwrap();
        let chaotic =
            sample_shell_state(2.0, 0.0, EnergyConvention::ClassicalEpsilon, 7, 0).unwrap();
        let short_r = poincare_section(&Classical, &regular, 2000.0, 1e-3, SectionPlane::Q2Zero);
        let long_r = poincare_section(&Classical, &regular, 4000.0, 1e-3, SectionPlane::Q2Zero);
        let short_c = poincare_section(&Classical, &chaotic, 2000.0, 1e-3, SectionPlane::Q2Zero);
        let long_c = poincare_section(&Classical, &chaotic, 4000.0, 1e-3, SectionPlane::Q2Zero);
        let r1 = section_occupancy(&short_r.points, &long_r.points, 32);
        let r2 = section_occupancy(&long_r.points, &long_r.points, 32);
        let c1 = section_occupancy(&short_c.points, &long_c.points, 32);
        let c2 = section_occupancy(&long_c.points, &long_c.points, 32);
        // A regular orbit's curve saturates; chaotic occupancy keeps growing.
        assert!(
            (r2 as f64) < 1.25 * r1 as f64,
            "regular occupancy grew {r1} -> {r2}"
        );
        assert!(
            (c2 as f64) > 1.25 * c1 as f64,
            "chaotic occupancy stalled {c1} -> {c2}"
        );
    }

    #[test]
    fn lyapunov_harmonic_subcase_is_zero() {
        let s0 = PhaseState::new(0.0, 0.4, 0.0, 0.0);
        let est = lyapunov_max(&Classical, &s0, 1e4, 1e-3, 1.0, 1e-8);
        assert!(est.is_valid());
        assert!(est.lambda_max.abs() < 1e-4, "{}", est.lambda_max);
        assert_eq!(est.lambda_max, est.history.last().unwrap().1);
    }

    #[test]
    fn lyapunov_regular_orbit_is_small() {
        let s0 = sample_shell_state(0.1, 0.0, EnergyConvention::ClassicalEpsilon, 7, 0).unwrap();
        let est = lyapunov_max(&Classical, &s0, 1e4, 1e-3, 1.0, 1e-8);
        assert!(est.is_valid());
        assert!(est.lambda_max < 1e-3, "{}", est.lambda_max);
    }

    #[test]
    fn lyapunov_chaotic_orbit_is_positive() {
        let s0 = sample_shell_state(2.0, 0.0, EnergyConvention::ClassicalEpsilon, 7, 0).unwrap();
        let est = lyapunov_max(&Classical, &s0, 1e4, 1e-3, 1.0, 1e-8);
        assert!(est.is_valid());
        assert!(est.lambda_max > 5e-2, "{}", est.lambda_max);
    }

    #[test]
    fn lyapunov_robust_to_d0_and_renorm_halving() {
        let s0 = sample_shell_state(2.0, 0.0, EnergyConvention::ClassicalEpsilon, 7, 0).unwrap();
        let base = lyapunov_max(&Classical, &s0, 5e3, 1e-3, 1.0, 1e-8).lambda_max;
        let half_d0 = lyapunov_max(&Classical, &s0, 5e3, 1e-3, 1.0, 5e-9).lambda_max;
        let half_renorm = lyapunov_max(&Classical, &s0, 5e3, 1e-3, 0.5, 1e-8).lambda_max;
        assert!((half_d0 - base).abs() / base < 0.2, "{base} vs {half_d0}");
        assert!(
            (half_renorm - base).abs() / base < 0.2,
            "{base} vs {half_renorm}"
        );
    }

    #[test]
    fn shell_sampler_lies_on_the_shell() {
        for i in 0..50 {
            let s =
                sample_shell_state(0.3, 0.0, EnergyConvention::ClassicalEpsilon, 42, i).unwrap();
            assert_eq!(s.q2, 0.0);
            assert!(s.p2 > 0.0);
            let e = crate::model::classical_energy(&s);
            assert!((e - 0.3).abs() < 1e-12);
        }
        // Effective convention puts the state on the effective-energy shell.
        let gamma = 0.5;
        for i in 0..20 {
            let s =
                sample_shell_state(0.3, gamma, EnergyConvention::EffectiveEnergy, 42, i).unwrap();
            let e = crate::dynamics::effective_energy(&s, gamma).unwrap();
            assert!((e - 0.3).abs() < 1e-10);
        }
    }

    #[test]
    fn shell_sampler_is_deterministic() {
        let a = sample_shell_state(0.7, 0.1, EnergyConvention::ClassicalEpsilon, 9, 3).unwrap();
        let b = sample_shell_state(0.7, 0.1, EnergyConvention::ClassicalEpsilon, 9, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn regular_fraction_discriminates_low_and_high_energy() {
        // Shortened classifier for test speed; the acceptance suite runs the
        // frozen spec settings.
        let cfg = ClassifierConfig {
            lambda_threshold: 2e-2,
            t_total: 2e3,
            dt: 1e-3,
            renorm_interval: 1.0,
            d0: 1e-8,
        };
        let low = regular_fraction(0.3, 0.0, 16, &cfg, EnergyConvention::default(), 11).unwrap();
        let high = regular_fraction(2.0, 0.0, 16, &cfg, EnergyConvention::default(), 11).unwrap();
        assert!(low.fraction >= 0.9, "low-energy fraction {}", low.fraction);
        assert!(high.fraction <= 0.5, "high-energy fraction {}", high.fraction);
        assert_eq!(low.n_unsampled, 0);
        // Determinism under identical seed.
        let again = regular_fraction(0.3, 0.0, 16, &cfg, EnergyConvention::default(), 11).unwrap();
        assert_eq!(low, again);
    }

    #[test]
    fn regular_fraction_rejects_empty_shell() {
        let cfg = ClassifierConfig::default();
        assert!(matches!(
            regular_fraction(0.0, 0.0, 4, &cfg, EnergyConvention::default(), 1),
            Err(ChaosError::InvalidShell { .. })
        ));
    }

    #[test]
    fn threshold_scan_smoke_classical() {
        // Cheap classifier smoke test; the frozen Fig-1 settings run in the
        // acceptance suite.
        let scan = ScanConfig {
            classifier: ClassifierConfig {
                lambda_threshold: 2e-2,
                t_total: 2e3,
                dt: 1e-3,
                renorm_interval: 1.0,
                d0: 1e-8,
            },
            n_samples: 8,
            rel_tol: 0.1,
            bracket_lo: 0.1,
            convention: EnergyConvention::default(),
            seed: 5,
            min_chaotic_votes: 1,
        };
        let curve = threshold_scan(&[0.0], &scan);
        let eps = curve.eps_th[0].expect("bracket should hold at gamma = 0");
        assert!(eps > 0.3 && eps < 1.6, "eps_th {eps}");
        assert!((curve.eps_convex[0] - 0.75).abs() < 0.02);
    }
}
