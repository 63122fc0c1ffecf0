//! The classical 2-D anharmonic oscillator in rescaled (dimensionless) form.
//!
//! After the rescaling `t → t/ω`, `q_i → q_i·√(mω²/g)` the system is governed
//! by the dimensionless Lagrangian `L = (q̇1² + q̇2²)/2 − V(q1,q2)` with
//! `V = (q1² + q2²)/2 + q1²q2²`, and the dimensionless energy
//! `ε = E·g/(m²ω⁴)` is its only free parameter. Quantum corrections add the
//! second parameter `γ = ħ·g/(m²ω³)`.

use crate::math;

/// Errors from parameter validation and the Toda-border minimization.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// A physical constant that must be strictly positive was not.
    InvalidParameter { name: &'static str, value: f64 },
    /// The constrained minimization over the zero-curvature set failed.
    MinimizationFailed,
}

impl core::fmt::Display for ModelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ModelError::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}; must be positive")
            }
            ModelError::MinimizationFailed => {
                write!(f, "Toda-border minimization did not converge")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModelError {}

/// Physical constants together with the derived dimensionless pair `(γ, ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub m: f64,
    pub omega: f64,
    pub g: f64,
    pub hbar: f64,
    /// `ħ·g/(m²ω³)`; zero in the classical limit.
    pub gamma: f64,
    /// `E·g/(m²ω⁴)`.
    pub epsilon: f64,
}

/// Converts physical constants and an energy into the rescaled parameters.
pub fn rescale_params(
    m: f64,
    omega: f64,
    g: f64,
    hbar: f64,
    energy: f64,
) -> Result<ModelParams, ModelError> {
    for (name, value) in [("m", m), ("omega", omega), ("g", g)] {
        if !(value > 0.0) {
            return Err(ModelError::InvalidParameter { name, value });
        }
    }
    if !(hbar >= 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "hbar",
            value: hbar,
        });
    }
    let m2 = m * m;
    let w3 = omega * omega * omega;
    Ok(ModelParams {
        m,
        omega,
        g,
        hbar,
        gamma: hbar * g / (m2 * w3),
        epsilon: energy * g / (m2 * w3 * omega),
    })
}

/// A rescaled phase-space point. For the effective system the `p_i` slots
/// store generalized velocities `q̇_i`, not canonical momenta.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseState {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl PhaseState {
    pub const fn new(q1: f64, q2: f64, p1: f64, p2: f64) -> Self {
        Self { q1, q2, p1, p2 }
    }

    pub fn is_finite(&self) -> bool {
        self.q1.is_finite() && self.q2.is_finite() && self.p1.is_finite() && self.p2.is_finite()
    }

    /// `self + k·other`, the workhorse of the RK4 stage updates.
    #[inline(always)]
    pub fn add_scaled(&self, k: f64, other: &PhaseState) -> PhaseState {
        PhaseState {
            q1: self.q1 + k * other.q1,
            q2: self.q2 + k * other.q2,
            p1: self.p1 + k * other.p1,
            p2: self.p2 + k * other.p2,
        }
    }

    /// Euclidean distance in the full 4-D phase space.
    pub fn distance(&self, other: &PhaseState) -> f64 {
        let dq1 = self.q1 - other.q1;
        let dq2 = self.q2 - other.q2;
        let dp1 = self.p1 - other.p1;
        let dp2 = self.p2 - other.p2;
        math::sqrt(dq1 * dq1 + dq2 * dq2 + dp1 * dp1 + dp2 * dp2)
    }
}

/// A symmetric 2×2 matrix; only the upper triangle is stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMatrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl SymMatrix2 {
    pub const IDENTITY: SymMatrix2 = SymMatrix2 {
        a11: 1.0,
        a12: 0.0,
        a22: 1.0,
    };

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    /// Eigenvalues in ascending order, from the stable half-trace form.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mid = 0.5 * (self.a11 + self.a22);
        let half_diff = 0.5 * (self.a11 - self.a22);
        let r = math::sqrt(half_diff * half_diff + self.a12 * self.a12);
        (mid - r, mid + r)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a11 > 0.0 && self.det() > 0.0
    }

    /// Solves `A·x = b` by the closed-form inverse. Returns `None` when the
    /// determinant is smaller than `det_floor` in magnitude.
    pub fn solve(&self, b1: f64, b2: f64, det_floor: f64) -> Option<(f64, f64)> {
        let det = self.det();
        if math::abs(det) < det_floor {
            return None;
        }
        Some((
            (self.a22 * b1 - self.a12 * b2) / det,
            (self.a11 * b2 - self.a12 * b1) / det,
        ))
    }
}

/// `V(q1,q2) = (q1² + q2²)/2 + q1²q2²`.
#[inline(always)]
pub fn classical_potential(q1: f64, q2: f64) -> f64 {
    let u = q1 * q1;
    let v = q2 * q2;
    0.5 * (u + v) + u * v
}

/// Conserved energy of the rescaled classical system.
#[inline(always)]
pub fn classical_energy(s: &PhaseState) -> f64 {
    0.5 * (s.p1 * s.p1 + s.p2 * s.p2) + classical_potential(s.q1, s.q2)
}

/// Hessian of the classical potential.
#[inline(always)]
pub fn hessian(q1: f64, q2: f64) -> SymMatrix2 {
    SymMatrix2 {
        a11: 1.0 + 2.0 * q2 * q2,
        a12: 4.0 * q1 * q2,
        a22: 1.0 + 2.0 * q1 * q1,
    }
}

/// Absolute tolerance below which the Hessian determinant counts as zero.
/// The determinant is a polynomial evaluated in double precision, so exact
/// zeros occur only on measure-zero sets.
pub const TODA_ZERO_BAND: f64 = 1e-12;

/// Toda curvature criterion: the sign of `det He(V)` with a zero band.
pub fn toda_sign(q1: f64, q2: f64) -> i8 {
    toda_sign_with_tol(q1, q2, TODA_ZERO_BAND)
}

pub fn toda_sign_with_tol(q1: f64, q2: f64, tol: f64) -> i8 {
    let det = hessian(q1, q2).det();
    if math::abs(det) <= tol {
        0
    } else if det > 0.0 {
        1
    } else {
        -1
    }
}

/// Smallest potential value on the zero set of `det He(V)`, i.e. the energy
/// at which negative-curvature regions first become accessible (≈ 3/4).
///
/// With `u = q1²`, `v = q2²` the zero set is `v = (1 + 2u)/(12u − 2)` for
/// `u > 1/6`, so the minimization reduces to a 1-D scan along that curve
/// followed by golden-section refinement.
pub fn toda_border_energy() -> Result<f64, ModelError> {
    let curve_v = |u: f64| (1.0 + 2.0 * u) / (12.0 * u - 2.0);
    let value = |u: f64| {
        let v = curve_v(u);
        0.5 * (u + v) + u * v
    };

    // Bracket the minimum on a geometric grid in u.
    let u_lo = 1.0 / 6.0 + 1e-9;
    let u_hi = 50.0;
    let n = 4000usize;
    let ratio = math::powf(u_hi / u_lo, 1.0 / n as f64);
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    let mut u = u_lo;
    let mut grid = alloc::vec::Vec::with_capacity(n + 1);
    for i in 0..=n {
        grid.push(u);
        let f = value(u);
        if f < best {
            best = f;
            best_i = i;
        }
        u *= ratio;
    }
    if !best.is_finite() {
        return Err(ModelError::MinimizationFailed);
    }
    let mut a = grid[best_i.saturating_sub(1)];
    let mut b = grid[(best_i + 1).min(n)];

    // Golden-section refinement inside the bracketing cell.
    let inv_phi = 0.618_033_988_749_894_9;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = value(c);
    let mut fd = value(d);
    for _ in 0..200 {
        if b - a < 1e-14 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = value(d);
        }
    }
    let result = value(0.5 * (a + b));
    if result.is_finite() {
        Ok(result)
    } else {
        Err(ModelError::MinimizationFailed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescaling_identity_and_direct_formula() {
        let p = rescale_params(1.0, 1.0, 1.0, 0.0, 0.75).unwrap();
        assert_eq!(p.gamma, 0.0);
        assert_eq!(p.epsilon, 0.75);

        let p = rescale_params(2.0, 3.0, 1.0, 0.1, 0.0).unwrap();
        let expected = 0.1 / (4.0 * 27.0);
        assert!((p.gamma - expected).abs() < 1e-18);
        assert!((p.gamma - 9.2593e-4).abs() < 1e-8);
        assert_eq!(p.epsilon, 0.0);
    }

    #[test]
    fn rescaling_recomputes_to_machine_precision() {
        let p = rescale_params(1.7, 2.3, 0.4, 0.05, 1.2).unwrap();
        let gamma = p.hbar * p.g / (p.m * p.m * p.omega.powi(3));
        let epsilon = 1.2 * p.g / (p.m * p.m * p.omega.powi(4));
        assert!((p.gamma - gamma).abs() <= 2.0 * f64::EPSILON * gamma);
        assert!((p.epsilon - epsilon).abs() <= 2.0 * f64::EPSILON * epsilon.abs());
    }

    #[test]
    fn rescaling_accepts_molecular_gamma_range() {
        // Diatomic-molecule regime spans γ from 1e-4 to 1e-1.
        for target in [1e-4, 1e-1] {
            let p = rescale_params(1.0, 1.0, target, target, 0.0).unwrap();
            assert!((p.gamma - target * target).abs() < 1e-18);
        }
        assert!(rescale_params(1.0, 1.0, 1.0, 1e-4, 0.0).is_ok());
        assert!(rescale_params(1.0, 1.0, 1.0, 1e-1, 0.0).is_ok());
    }

    #[test]
    fn rescaling_rejects_nonpositive_constants() {
        assert!(matches!(
            rescale_params(0.0, 1.0, 1.0, 0.0, 0.0),
            Err(ModelError::InvalidParameter { name: "m", .. })
        ));
        assert!(rescale_params(1.0, -2.0, 1.0, 0.0, 0.0).is_err());
        assert!(rescale_params(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(rescale_params(1.0, 1.0, 1.0, -0.1, 0.0).is_err());
    }

    #[test]
    fn potential_values() {
        assert_eq!(classical_potential(0.0, 0.0), 0.0);
        assert_eq!(classical_potential(1.0, 0.0), 0.5);
        let r = 0.5f64.sqrt();
        assert!((classical_potential(r, r) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn energy_values() {
        assert_eq!(classical_energy(&PhaseState::new(0.0, 0.0, 0.0, 0.0)), 0.0);
        assert_eq!(classical_energy(&PhaseState::new(0.0, 0.0, 1.0, 0.0)), 0.5);
        assert_eq!(classical_energy(&PhaseState::new(1.0, 1.0, 0.0, 0.0)), 2.0);
    }

    #[test]
    fn hessian_values() {
        assert_eq!(hessian(0.0, 0.0), SymMatrix2::IDENTITY);
        let h = hessian(1.0, 0.0);
        assert_eq!((h.a11, h.a12, h.a22), (1.0, 0.0, 3.0));
        let h = hessian(1.0, 1.0);
        assert_eq!((h.a11, h.a12, h.a22), (3.0, 4.0, 3.0));
    }

    #[test]
    fn toda_sign_values() {
        assert_eq!(toda_sign(0.0, 0.0), 1);
        let r = 0.5f64.sqrt();
        // det = (1+1)(1+1) − 16·(1/4) = 0 exactly at u = v = 1/2.
        assert_eq!(toda_sign(r, r), 0);
        assert_eq!(toda_sign(1.0, 1.0), -1);
    }

    #[test]
    fn toda_border_is_three_quarters() {
        let e = toda_border_energy().unwrap();
        assert!((e - 0.75).abs() < 1e-6, "got {e}");
    }

    #[test]
    fn toda_border_grid_scan_oracle() {
        // Independent route: dense 2-D grid over the first quadrant; every
        // sampled zero-set point must carry V ≥ 3/4 (up to band width).
        let n = 800;
        let mut min_on_zero_band = f64::INFINITY;
        for i in 0..=n {
            for j in 0..=n {
                let q1 = 3.0 * i as f64 / n as f64;
                let q2 = 3.0 * j as f64 / n as f64;
                if toda_sign_with_tol(q1, q2, 2e-2) == 0 {
                    min_on_zero_band = min_on_zero_band.min(classical_potential(q1, q2));
                }
            }
        }
        assert!(min_on_zero_band.is_finite());
        assert!(min_on_zero_band >= 0.75 - 1e-2, "got {min_on_zero_band}");
        // The symmetric point sits on the zero set and attains the bound.
        let r = 0.5f64.sqrt();
        assert_eq!(toda_sign(r, r), 0);
        assert!(classical_potential(r, r) >= 0.75 - 1e-9);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // Analytic gradient (the negated equations-of-motion right-hand side).
        let grad = |q1: f64, q2: f64| {
            (
                q1 * (1.0 + 2.0 * q2 * q2),
                q2 * (1.0 + 2.0 * q1 * q1),
            )
        };
        let mut rng = crate::rng::stream(0xB0DA, "model-grad", 0);
        let h = 1e-5;
        for _ in 0..100 {
            let q1 = 4.0 * crate::rng::uniform(&mut rng) - 2.0;
            let q2 = 4.0 * crate::rng::uniform(&mut rng) - 2.0;
            let (g1, g2) = grad(q1, q2);
            let fd1 = (classical_potential(q1 + h, q2) - classical_potential(q1 - h, q2)) / (2.0 * h);
            let fd2 = (classical_potential(q1, q2 + h) - classical_potential(q1, q2 - h)) / (2.0 * h);
            let scale = g1.abs().max(g2.abs()).max(1e-3);
            assert!((fd1 - g1).abs() / scale < 1e-6);
            assert!((fd2 - g2).abs() / scale < 1e-6);
        }
    }

    #[test]
    fn hessian_matches_gradient_finite_differences() {
        let grad = |q1: f64, q2: f64| {
            (
                q1 * (1.0 + 2.0 * q2 * q2),
                q2 * (1.0 + 2.0 * q1 * q1),
            )
        };
        let mut rng = crate::rng::stream(0xB0DA, "model-hess", 0);
        let h = 1e-5;
        for _ in 0..100 {
            let q1 = 4.0 * crate::rng::uniform(&mut rng) - 2.0;
            let q2 = 4.0 * crate::rng::uniform(&mut rng) - 2.0;
            let he = hessian(q1, q2);
            let fd11 = (grad(q1 + h, q2).0 - grad(q1 - h, q2).0) / (2.0 * h);
            let fd12 = (grad(q1, q2 + h).0 - grad(q1, q2 - h).0) / (2.0 * h);
            let fd22 = (grad(q1, q2 + h).1 - grad(q1, q2 - h).1) / (2.0 * h);
            let scale = he.a11.abs().max(he.a22.abs());
            assert!((fd11 - he.a11).abs() / scale < 1e-5);
            assert!((fd12 - he.a12).abs() / scale < 1e-5);
            assert!((fd22 - he.a22).abs() / scale < 1e-5);
        }
    }

    #[test]
    fn exchange_and_parity_symmetry() {
        let pts = [(0.3, -1.2), (1.5, 0.7), (-0.4, -0.9)];
        for (q1, q2) in pts {
            assert_eq!(classical_potential(q1, q2), classical_potential(q2, q1));
            assert_eq!(hessian(q1, q2).det(), hessian(q2, q1).det());
            let h = hessian(q1, q2);
            let hs = hessian(q2, q1);
            assert_eq!((h.a11, h.a22), (hs.a22, hs.a11));
            for (s1, s2) in [(-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
                assert_eq!(
                    classical_potential(q1, q2),
                    classical_potential(s1 * q1, s2 * q2)
                );
            }
        }
    }

    #[test]
    fn sym_matrix_eigenvalues_and_solve() {
        let m = SymMatrix2 {
            a11: 2.0,
            a12: 1.0,
            a22: 2.0,
        };
        let (lo, hi) = m.eigenvalues();
        assert!((lo - 1.0).abs() < 1e-15);
        assert!((hi - 3.0).abs() < 1e-15);
        let (x1, x2) = m.solve(3.0, 0.0, 1e-12).unwrap();
        assert!((m.a11 * x1 + m.a12 * x2 - 3.0).abs() < 1e-14);
        assert!((m.a12 * x1 + m.a22 * x2).abs() < 1e-14);
        let singular = SymMatrix2 {
            a11: 1.0,
            a12: 1.0,
            a22: 1.0,
        };
        assert!(singular.solve(1.0, 1.0, 1e-12).is_none());
    }
}
