//! Fixed-step RK4 integration of the classical and effective equations of
//! motion, with conserved-energy audits.
//!
//! The classical system obeys `q̈_i = −q_i(1 + 2q_j²)`. The effective system
//! obeys the Euler-Lagrange equations of `L = Z_ij q̇_i q̇_j/2 − V_e`, i.e.
//! `Z q̈ = b(q, q̇)` with quadratic-in-velocity right-hand sides; the stored
//! `p_i` are generalized velocities `q̇_i` throughout, so `γ = 0` reproduces
//! the classical trajectories exactly, arithmetic included.

use crate::effective::{de2_eval, v_eff_2d, z_matrix_2d, EffectiveError};
use crate::model::{classical_energy, PhaseState};
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicsError {
    /// A state component became non-finite at the given step.
    Diverged { step: usize },
    /// The trajectory left the convex domain of the effective Lagrangian.
    DomainExit { t: f64, state: PhaseState },
    /// `|det Z|` fell below the safety floor.
    SingularKineticMatrix { t: f64 },
}

impl core::fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DynamicsError::Diverged { step } => write!(f, "state diverged at step {step}"),
            DynamicsError::DomainExit { t, state } => write!(
                f,
                "trajectory left the convex domain at t = {t}, q = ({}, {})",
                state.q1, state.q2
            ),
            DynamicsError::SingularKineticMatrix { t } => {
                write!(f, "kinetic matrix became singular at t = {t}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DynamicsError {}

pub const DET_Z_FLOOR: f64 = 1e-12;

/// Integration stops once `Λ−` falls to this floor. The kinetic matrix
/// scales like `Λ−^{-5/2}` there, so the equations are long past validity and
/// below ~1e-7 the `det Z` cancellation loses all significant digits.
pub const LAMBDA_MINUS_EXIT_FLOOR: f64 = 1e-6;

/// A dynamical system with a phase-space vector field and a conserved energy.
pub trait Dynamics {
    fn rhs(&self, s: &PhaseState) -> Result<PhaseState, DynamicsError>;
    fn energy(&self, s: &PhaseState) -> Result<f64, DynamicsError>;
    fn kind(&self) -> TrajectoryKind;
}

/// Which equations of motion produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryKind {
    Classical,
    Effective { gamma: f64 },
}

/// The rescaled classical system.
#[derive(Debug, Clone, Copy, Default)]
pub struct Classical;

/// Right-hand side of the classical equations of motion.
#[inline(always)]
pub fn classical_rhs(s: &PhaseState) -> PhaseState {
    PhaseState {
        q1: s.p1,
        q2: s.p2,
        p1: -s.q1 * (1.0 + 2.0 * s.q2 * s.q2),
        p2: -s.q2 * (1.0 + 2.0 * s.q1 * s.q1),
    }
}

impl Dynamics for Classical {
    #[inline(always)]
    fn rhs(&self, s: &PhaseState) -> Result<PhaseState, DynamicsError> {
        Ok(classical_rhs(s))
    }

    #[inline(always)]
    fn energy(&self, s: &PhaseState) -> Result<f64, DynamicsError> {
        Ok(classical_energy(s))
    }

    fn kind(&self) -> TrajectoryKind {
        TrajectoryKind::Classical
    }
}

/// The one-loop effective system at fixed `γ`.
#[derive(Debug, Clone, Copy)]
pub struct Effective {
    pub gamma: f64,
}

/// Right-hand side of the effective equations of motion:
///
/// `Z11 q̈1 + Z12 q̈2 = −½∂₁Z11 q̇1² − ∂₂Z11 q̇1q̇2 + (½∂₁Z22 − ∂₂Z12) q̇2² − ∂₁V_e`
///
/// and the `1 ↔ 2` mirror, solved by the closed-form 2×2 inverse.
pub fn effective_rhs(s: &PhaseState, gamma: f64) -> Result<PhaseState, DynamicsError> {
    let e = de2_eval(s.q1, s.q2, gamma).map_err(|err| match err {
        EffectiveError::NonConvexDomain { .. } | EffectiveError::OriginSingularity => {
            DynamicsError::DomainExit {
                t: f64::NAN,
                state: *s,
            }
        }
    })?;
    if e.lambda_minus <= LAMBDA_MINUS_EXIT_FLOOR {
        return Err(DynamicsError::DomainExit {
            t: f64::NAN,
            state: *s,
        });
    }
    let v1 = s.p1;
    let v2 = s.p2;
    let b1 = -0.5 * e.dz_dq1.a11 * v1 * v1 - e.dz_dq2.a11 * v1 * v2
        + (0.5 * e.dz_dq1.a22 - e.dz_dq2.a12) * v2 * v2
        - e.dv_dq1;
    let b2 = -0.5 * e.dz_dq2.a22 * v2 * v2 - e.dz_dq1.a22 * v1 * v2
        + (0.5 * e.dz_dq2.a11 - e.dz_dq1.a12) * v1 * v1
        - e.dv_dq2;
    let (a1, a2) = e
        .z
        .solve(b1, b2, DET_Z_FLOOR)
        .ok_or(DynamicsError::SingularKineticMatrix { t: f64::NAN })?;
    Ok(PhaseState {
        q1: v1,
        q2: v2,
        p1: a1,
        p2: a2,
    })
}

/// Conserved energy of the effective system: `½ q̇ᵀZ q̇ + V_e` with the
/// velocity convention for the stored `p_i`.
pub fn effective_energy(s: &PhaseState, gamma: f64) -> Result<f64, DynamicsError> {
    let z = z_matrix_2d(s.q1, s.q2, gamma).map_err(|_| DynamicsError::DomainExit {
        t: f64::NAN,
        state: *s,
    })?;
    let v = v_eff_2d(s.q1, s.q2, gamma).map_err(|_| DynamicsError::DomainExit {
        t: f64::NAN,
        state: *s,
    })?;
    let kinetic =
        0.5 * (z.a11 * s.p1 * s.p1 + 2.0 * z.a12 * s.p1 * s.p2 + z.a22 * s.p2 * s.p2);
    Ok(kinetic + v)
}

impl Dynamics for Effective {
    #[inline(always)]
    fn rhs(&self, s: &PhaseState) -> Result<PhaseState, DynamicsError> {
        effective_rhs(s, self.gamma)
    }

    fn energy(&self, s: &PhaseState) -> Result<f64, DynamicsError> {
        effective_energy(s, self.gamma)
    }

    fn kind(&self) -> TrajectoryKind {
        TrajectoryKind::Effective { gamma: self.gamma }
    }
}

/// One classic RK4 step of size `dt`.
#[inline(always)]
pub fn rk4_step<D: Dynamics>(
    system: &D,
    s: &PhaseState,
    dt: f64,
) -> Result<PhaseState, DynamicsError> {
    let k1 = system.rhs(s)?;
    let k2 = system.rhs(&s.add_scaled(0.5 * dt, &k1))?;
    let k3 = system.rhs(&s.add_scaled(0.5 * dt, &k2))?;
    let k4 = system.rhs(&s.add_scaled(dt, &k3))?;
    let sixth = dt / 6.0;
    Ok(PhaseState {
        q1: s.q1 + sixth * (k1.q1 + 2.0 * (k2.q1 + k3.q1) + k4.q1),
        q2: s.q2 + sixth * (k1.q2 + 2.0 * (k2.q2 + k3.q2) + k4.q2),
        p1: s.p1 + sixth * (k1.p1 + 2.0 * (k2.p1 + k3.p1) + k4.p1),
        p2: s.p2 + sixth * (k1.p2 + 2.0 * (k2.p2 + k3.p2) + k4.p2),
    })
}

/// A uniformly sampled trajectory with its conserved-energy audit channel.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t0: f64,
    /// Time between stored samples (`dt · sample_stride`).
    pub dt: f64,
    pub states: Vec<PhaseState>,
    pub energy_audit: Vec<f64>,
    pub kind: TrajectoryKind,
}

impl Trajectory {
    /// Largest relative deviation of the audit channel from its first entry.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.energy_audit[0];
        let scale = e0.abs().max(1e-300);
        self.energy_audit
            .iter()
            .map(|e| crate::math::abs(e - e0) / scale)
            .fold(0.0, f64::max)
    }

    pub fn time_at(&self, index: usize) -> f64 {
        self.t0 + self.dt * index as f64
    }
}

/// Integrates `n_steps` RK4 steps from `s0`, storing every state.
pub fn rk4_integrate<D: Dynamics>(
    system: &D,
    s0: &PhaseState,
    dt: f64,
    n_steps: usize,
) -> Result<Trajectory, DynamicsError> {
    rk4_integrate_sampled(system, s0, dt, n_steps, 1)
}

/// Integrates `n_steps` steps, storing every `stride`-th state (the initial
/// state is always stored). Errors carry the step index or time at which
/// integration had to stop.
pub fn rk4_integrate_sampled<D: Dynamics>(
    system: &D,
    s0: &PhaseState,
    dt: f64,
    n_steps: usize,
    stride: usize,
) -> Result<Trajectory, DynamicsError> {
    assert!(dt > 0.0, "step size must be positive");
    assert!(stride > 0, "sample stride must be positive");
    let mut states = Vec::with_capacity(n_steps / stride + 2);
    let mut energy_audit = Vec::with_capacity(n_steps / stride + 2);
    let mut s = *s0;
    states.push(s);
    energy_audit.push(system.energy(&s).map_err(|e| stamp_time(e, 0, 0.0))?);
    for step in 0..n_steps {
        s = rk4_step(system, &s, dt).map_err(|e| stamp_time(e, step, dt))?;
        if !s.is_finite() {
            return Err(DynamicsError::Diverged { step });
        }
        if (step + 1) % stride == 0 {
            states.push(s);
            energy_audit.push(system.energy(&s).map_err(|e| stamp_time(e, step, dt))?);
        }
    }
    Ok(Trajectory {
        t0: 0.0,
        dt: dt * stride as f64,
        states,
        energy_audit,
        kind: system.kind(),
    })
}

fn stamp_time(e: DynamicsError, step: usize, dt: f64) -> DynamicsError {
    let t = (step + 1) as f64 * dt;
    match e {
        DynamicsError::DomainExit { state, .. } => DynamicsError::DomainExit { t, state },
        DynamicsError::SingularKineticMatrix { .. } => DynamicsError::SingularKineticMatrix { t },
        other => other,
    }
}
