//! Closed-form coefficients of the one-loop effective Lagrangian at second
//! order in the derivative expansion (DE2).
//!
//! In 1-D the corrections per unit ħ are
//! `V_e1 = (√(ω² + U″/m) − ω)/2` and `Z_1 = U‴²/(32m²(ω² + U″/m)^{5/2})`.
//! In 2-D (rescaled units) the correction enters through the Hessian
//! eigenvalues `Λ± = 1 + q1² + q2² ± Σ`, `Σ = √(q1⁴ + q2⁴ + 14q1²q2²)`,
//! and the auxiliary ratios `η, ξ, ζ`. All formulas are real only where the
//! effective potential stays convex; outside that region the operations
//! return [`EffectiveError::NonConvexDomain`] instead of propagating complex
//! values.

use crate::math;
use crate::model::{classical_potential, hessian, SymMatrix2};
use crate::numeric::map_indexed;

/// Below this max-norm a configuration counts as the exact origin, where the
/// auxiliary ratios are indeterminate (0/0) but every correction term carries
/// an explicit `q_i²` factor, so the limit values apply.
pub const ORIGIN_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveError {
    /// `Σ = 0` makes `η`, `ξ`, `ζ` indeterminate at the exact origin.
    OriginSingularity,
    /// The smaller Hessian eigenvalue is nonpositive: the one-loop
    /// coefficients would turn complex or singular here.
    NonConvexDomain { q1: f64, q2: f64, lambda_minus: f64 },
}

impl core::fmt::Display for EffectiveError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EffectiveError::OriginSingularity => {
                write!(f, "auxiliary quantities are indeterminate at the origin")
            }
            EffectiveError::NonConvexDomain {
                q1,
                q2,
                lambda_minus,
            } => write!(
                f,
                "({q1}, {q2}) lies outside the convex domain (lambda_minus = {lambda_minus})"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EffectiveError {}

/// Auxiliary quantities of the 2-D coefficient formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aux2D {
    pub sigma: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub eta: f64,
    pub xi: f64,
    pub zeta: f64,
}

/// Effective potential value and kinetic matrix at a configuration point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DE2Coefficients {
    pub v_eff: f64,
    pub z: SymMatrix2,
    pub in_domain: bool,
}

/// Validity horizon of the DE2 equation of motion for the 1-D quartic
/// oscillator `V = mω²q²/2 + gq⁴/4!` at oscillation amplitude `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    /// `(gA⁴/4!) / (mω²A²/2) = gA²/(12mω²)`: strength of the anharmonicity.
    pub anharmonicity_ratio: f64,
    /// `γ = ħg/(m²ω³)`: strength of the quantum correction.
    pub quantum_ratio: f64,
    /// DE2 and exact one-loop evolutions stay close while
    /// `ωt ≪ 1/(anharmonicity_ratio · quantum_ratio)`.
    pub horizon_omega_t: f64,
}

/// First quantum correction to a 1-D potential: `(√(ω² + d2u/m) − ω)/2`.
pub fn v_e1_1d(d2u: f64, m: f64, omega: f64) -> Result<f64, EffectiveError> {
    let radicand = omega * omega + d2u / m;
    if radicand < 0.0 {
        return Err(EffectiveError::NonConvexDomain {
            q1: f64::NAN,
            q2: f64::NAN,
            lambda_minus: radicand,
        });
    }
    Ok(0.5 * (math::sqrt(radicand) - omega))
}

/// Kinetic renormalization of a 1-D potential:
/// `d3u² / (32 m² (ω² + d2u/m)^{5/2})`. Diverges toward the turning points,
/// so the radicand must be strictly positive.
pub fn z1_1d(d2u: f64, d3u: f64, m: f64, omega: f64) -> Result<f64, EffectiveError> {
    let radicand = omega * omega + d2u / m;
    if radicand <= 0.0 {
        return Err(EffectiveError::NonConvexDomain {
            q1: f64::NAN,
            q2: f64::NAN,
            lambda_minus: radicand,
        });
    }
    let pow52 = radicand * radicand * math::sqrt(radicand);
    Ok(d3u * d3u / (32.0 * m * m * pow52))
}

/// The auxiliary quantities `Σ, Λ±, η, ξ, ζ` at `(q1, q2)`.
///
/// The origin must be handled by the caller via the limit values; `Λ± → 1`
/// and every correction term vanishes there.
pub fn aux_2d(q1: f64, q2: f64) -> Result<Aux2D, EffectiveError> {
    if math::abs(q1) < ORIGIN_BAND && math::abs(q2) < ORIGIN_BAND {
        return Err(EffectiveError::OriginSingularity);
    }
    let u = q1 * q1;
    let v = q2 * q2;
    let sigma = math::sqrt(u * u + v * v + 14.0 * (u * v));
    let trace_half = 1.0 + (u + v);
    let lambda_plus = trace_half + sigma;
    let lambda_minus = trace_half - sigma;
    if lambda_minus <= 0.0 {
        return Err(EffectiveError::NonConvexDomain {
            q1,
            q2,
            lambda_minus,
        });
    }
    let inv_sigma = 1.0 / sigma;
    let eta = (u + 7.0 * v) * inv_sigma;
    let xi = (v + 7.0 * u) * inv_sigma;
    let sp = math::sqrt(lambda_plus);
    let sm = math::sqrt(lambda_minus);
    let r = (u + v) * inv_sigma;
    let s_sum = sp + sm;
    let zeta = r * r / (sp * sm * s_sum * s_sum * s_sum);
    Ok(Aux2D {
        sigma,
        lambda_plus,
        lambda_minus,
        eta,
        xi,
        zeta,
    })
}

/// 2-D effective potential `V + (γ/2)(√Λ+ + √Λ− − 2)`.
///
/// Well defined whenever `Λ− ≥ 0`; returns the limit value `0` at the exact
/// origin for any `γ`.
pub fn v_eff_2d(q1: f64, q2: f64, gamma: f64) -> Result<f64, EffectiveError> {
    if math::abs(q1) < ORIGIN_BAND && math::abs(q2) < ORIGIN_BAND {
        return Ok(0.0);
    }
    let u = q1 * q1;
    let v = q2 * q2;
    let sigma = math::sqrt(u * u + v * v + 14.0 * (u * v));
    let trace_half = 1.0 + (u + v);
    let lambda_plus = trace_half + sigma;
    let lambda_minus = trace_half - sigma;
    if lambda_minus < 0.0 {
        return Err(EffectiveError::NonConvexDomain {
            q1,
            q2,
            lambda_minus,
        });
    }
    Ok(classical_potential(q1, q2)
        + 0.5 * gamma * (math::sqrt(lambda_plus) + math::sqrt(lambda_minus) - 2.0))
}

/// 2-D kinetic matrix `Z_ij`. Identity at the exact origin (limit value) and
/// for `γ = 0`.
pub fn z_matrix_2d(q1: f64, q2: f64, gamma: f64) -> Result<SymMatrix2, EffectiveError> {
    if math::abs(q1) < ORIGIN_BAND && math::abs(q2) < ORIGIN_BAND {
        return Ok(SymMatrix2::IDENTITY);
    }
    let aux = aux_2d(q1, q2)?;
    let u = q1 * q1;
    let v = q2 * q2;
    let (eta, xi, zeta) = (aux.eta, aux.xi, aux.zeta);
    let mp = pow_neg_5_2(aux.lambda_plus);
    let mm = pow_neg_5_2(aux.lambda_minus);
    let g1 = (1.0 + eta) * (1.0 + eta) * mp + (1.0 - eta) * (1.0 - eta) * mm;
    let g2 = (1.0 + xi) * (1.0 + xi) * mp + (1.0 - xi) * (1.0 - xi) * mm;
    let g12 = (1.0 + eta) * (1.0 + xi) * mp + (1.0 - eta) * (1.0 - xi) * mm;
    Ok(SymMatrix2 {
        a11: 1.0 + gamma * (0.125 * u * g1 + 8.0 * v * zeta),
        a12: gamma * q1 * q2 * (0.125 * g12 + 8.0 * zeta),
        a22: 1.0 + gamma * (0.125 * v * g2 + 8.0 * u * zeta),
    })
}

#[inline(always)]
fn pow_neg_5_2(x: f64) -> f64 {
    let inv = 1.0 / x;
    inv * inv * (math::sqrt(x) * inv)
}

/// Effective potential, kinetic matrix and domain flag in one call.
pub fn de2_coefficients(
    q1: f64,
    q2: f64,
    gamma: f64,
) -> Result<DE2Coefficients, EffectiveError> {
    let v_eff = v_eff_2d(q1, q2, gamma)?;
    let z = z_matrix_2d(q1, q2, gamma)?;
    Ok(DE2Coefficients {
        v_eff,
        z,
        in_domain: domain_check(q1, q2, gamma).in_domain,
    })
}

/// Outcome of the convex-domain test at a configuration point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainReport {
    pub in_domain: bool,
    pub lambda_minus: f64,
    /// Positive definiteness of the finite-difference Hessian of `V_e`.
    pub convex: bool,
}

/// Step for the finite-difference Hessian of the effective potential.
pub const DOMAIN_FD_STEP: f64 = 1e-4;

/// True iff `Λ− > 0` and the (numeric) Hessian of the effective potential is
/// positive definite at the point. The exact origin is always in the domain.
pub fn domain_check(q1: f64, q2: f64, gamma: f64) -> DomainReport {
    let u = q1 * q1;
    let v = q2 * q2;
    let sigma = math::sqrt(u * u + v * v + 14.0 * (u * v));
    let lambda_minus = 1.0 + (u + v) - sigma;
    if lambda_minus <= 0.0 && !(math::abs(q1) < ORIGIN_BAND && math::abs(q2) < ORIGIN_BAND) {
        return DomainReport {
            in_domain: false,
            lambda_minus,
            convex: false,
        };
    }
    let convex = match fd_effective_hessian(q1, q2, gamma) {
        Some(h) => h.is_positive_definite(),
        None => false,
    };
    DomainReport {
        in_domain: convex,
        lambda_minus,
        convex,
    }
}

fn fd_effective_hessian(q1: f64, q2: f64, gamma: f64) -> Option<SymMatrix2> {
    let h = DOMAIN_FD_STEP;
    let f = |x: f64, y: f64| v_eff_2d(x, y, gamma).ok();
    let f00 = f(q1, q2)?;
    let a11 = (f(q1 + h, q2)? - 2.0 * f00 + f(q1 - h, q2)?) / (h * h);
    let a22 = (f(q1, q2 + h)? - 2.0 * f00 + f(q1, q2 - h)?) / (h * h);
    let a12 = (f(q1 + h, q2 + h)? - f(q1 + h, q2 - h)? - f(q1 - h, q2 + h)?
        + f(q1 - h, q2 - h)?)
        / (4.0 * h * h);
    Some(SymMatrix2 { a11, a12, a22 })
}

/// Analytic Hessian of the effective potential,
/// `He(V) + (γ/2)·He(√Λ+ + √Λ−)`: the closed-form cross-check route for
/// [`domain_check`]'s finite-difference convexity test.
pub fn effective_hessian_analytic(
    q1: f64,
    q2: f64,
    gamma: f64,
) -> Result<SymMatrix2, EffectiveError> {
    if math::abs(q1) < ORIGIN_BAND && math::abs(q2) < ORIGIN_BAND {
        let h = 1.0 + gamma;
        return Ok(SymMatrix2 {
            a11: h,
            a12: 0.0,
            a22: h,
        });
    }
    let w = AuxDerivatives::at(q1, q2)?;
    let inv_sp2 = w.inv_sp * w.inv_sp;
    let inv_sm2 = w.inv_sm * w.inv_sm;
    let a = (1.0 + w.eta) * w.inv_sp + (1.0 - w.eta) * w.inv_sm;
    let b = (1.0 + w.xi) * w.inv_sp + (1.0 - w.xi) * w.inv_sm;
    let da_d1 = w.eta_1 * (w.inv_sp - w.inv_sm)
        - (1.0 + w.eta) * w.sp_1 * inv_sp2
        - (1.0 - w.eta) * w.sm_1 * inv_sm2;
    let da_d2 = w.eta_2 * (w.inv_sp - w.inv_sm)
        - (1.0 + w.eta) * w.sp_2 * inv_sp2
        - (1.0 - w.eta) * w.sm_2 * inv_sm2;
    let db_d2 = w.xi_2 * (w.inv_sp - w.inv_sm)
        - (1.0 + w.xi) * w.sp_2 * inv_sp2
        - (1.0 - w.xi) * w.sm_2 * inv_sm2;
    let s11 = a + q1 * da_d1;
    let s12 = q1 * da_d2;
    let s22 = b + q2 * db_d2;
    let he = hessian(q1, q2);
    Ok(SymMatrix2 {
        a11: he.a11 + 0.5 * gamma * s11,
        a12: he.a12 + 0.5 * gamma * s12,
        a22: he.a22 + 0.5 * gamma * s22,
    })
}

/// Smallest effective-potential value at which convexity fails, scanned on a
/// 600×600 grid over `[−6, 6]²` with bisection refinement toward the failure
/// boundary. Returns `f64::INFINITY` when the box contains no failure.
pub fn epsilon_convex_max(gamma: f64) -> f64 {
    const N: usize = 600;
    const LO: f64 = -6.0;
    const HI: f64 = 6.0;
    let coord = |i: usize| LO + (HI - LO) * i as f64 / (N - 1) as f64;
    let fails = |x: f64, y: f64| !domain_check(x, y, gamma).convex;

    // Row-wise pass: minimum failing value per row plus refined values on
    // horizontal pass/fail boundaries. Vertical boundaries contribute the
    // same curve by symmetry of the scan.
    let row_minima = map_indexed(N, |j| {
        let y = coord(j);
        let mut row_min = f64::INFINITY;
        let mut prev_fail = None;
        for i in 0..N {
            let x = coord(i);
            let f = fails(x, y);
            if f {
                if let Ok(v) = v_eff_2d(x, y, gamma) {
                    row_min = row_min.min(v);
                }
            }
            if let Some(pf) = prev_fail {
                if pf != f {
                    // Bisect the boundary crossing between the two abscissae.
                    let (mut a, mut b) = (coord(i - 1), x);
                    for _ in 0..25 {
                        let mid = 0.5 * (a + b);
                        if fails(mid, y) == pf {
                            a = mid;
                        } else {
                            b = mid;
                        }
                    }
                    let edge = if pf { a } else { b };
                    if let Ok(v) = v_eff_2d(edge, y, gamma) {
                        row_min = row_min.min(v);
                    }
                }
            }
            prev_fail = Some(f);
        }
        row_min
    });
    row_minima.into_iter().fold(f64::INFINITY, f64::min)
}

/// Validity estimates for the 1-D quartic DE2 dynamics at amplitude `A`.
/// All inputs must be positive except `hbar`, which may be zero (classical
/// limit, infinite horizon).
pub fn validity_bounds(m: f64, omega: f64, g: f64, hbar: f64, amplitude: f64) -> ValidityReport {
    let anharmonicity_ratio = g * amplitude * amplitude / (12.0 * m * omega * omega);
    let quantum_ratio = hbar * g / (m * m * omega * omega * omega);
    let product = anharmonicity_ratio * quantum_ratio;
    let horizon_omega_t = if product > 0.0 {
        1.0 / product
    } else {
        f64::INFINITY
    };
    ValidityReport {
        anharmonicity_ratio,
        quantum_ratio,
        horizon_omega_t,
    }
}

/// Effective potential and kinetic matrix together with all first
/// derivatives, evaluated in a single fused pass. This is the hot path of the
/// effective equations of motion.
#[derive(Debug, Clone, Copy)]
pub struct De2Eval {
    /// Smaller Hessian eigenvalue at the point; the integrator uses it to
    /// terminate before the `Λ−^{-5/2}` singularity destroys the arithmetic.
    pub lambda_minus: f64,
    pub v: f64,
    pub dv_dq1: f64,
    pub dv_dq2: f64,
    pub z: SymMatrix2,
    pub dz_dq1: SymMatrix2,
    pub dz_dq2: SymMatrix2,
}

impl De2Eval {
    const ORIGIN: De2Eval = De2Eval {
        lambda_minus: 1.0,
        v: 0.0,
        dv_dq1: 0.0,
        dv_dq2: 0.0,
        z: SymMatrix2::IDENTITY,
        dz_dq1: SymMatrix2 {
            a11: 0.0,
            a12: 0.0,
            a22: 0.0,
        },
        dz_dq2: SymMatrix2 {
            a11: 0.0,
            a12: 0.0,
            a22: 0.0,
        },
    };
}

/// Shared intermediates of the fused evaluation: the auxiliary quantities and
/// their first derivatives. Chain-rule identities used throughout:
/// `∂Σ/∂q1 = 2q1η`, `∂η/∂q1 = 2q1(1−η²)/Σ`, `∂η/∂q2 = 2q2(7−ηξ)/Σ`,
/// `∂Λ±/∂q1 = 2q1(1±η)`, and the `1 ↔ 2`, `η ↔ ξ` mirrors.
struct AuxDerivatives {
    u: f64,
    v: f64,
    eta: f64,
    xi: f64,
    lm: f64,
    sp: f64,
    sm: f64,
    inv_sp: f64,
    inv_sm: f64,
    inv_sigma: f64,
    eta_1: f64,
    eta_2: f64,
    xi_1: f64,
    xi_2: f64,
    lp_1: f64,
    lp_2: f64,
    lm_1: f64,
    lm_2: f64,
    sp_1: f64,
    sp_2: f64,
    sm_1: f64,
    sm_2: f64,
}

impl AuxDerivatives {
    #[inline]
    fn at(q1: f64, q2: f64) -> Result<AuxDerivatives, EffectiveError> {
        let u = q1 * q1;
        let v = q2 * q2;
        let sigma = math::sqrt(u * u + v * v + 14.0 * (u * v));
        let trace_half = 1.0 + (u + v);
        let lp = trace_half + sigma;
        let lm = trace_half - sigma;
        if lm <= 0.0 {
            return Err(EffectiveError::NonConvexDomain {
                q1,
                q2,
                lambda_minus: lm,
            });
        }
        let inv_sigma = 1.0 / sigma;
        let eta = (u + 7.0 * v) * inv_sigma;
        let xi = (v + 7.0 * u) * inv_sigma;
        let sp = math::sqrt(lp);
        let sm = math::sqrt(lm);
        let inv_lp = 1.0 / lp;
        let inv_lm = 1.0 / lm;
        let inv_sp = sp * inv_lp;
        let inv_sm = sm * inv_lm;

        let eta_1 = 2.0 * q1 * (1.0 - eta * eta) * inv_sigma;
        let eta_2 = 2.0 * q2 * (7.0 - eta * xi) * inv_sigma;
        let xi_1 = 2.0 * q1 * (7.0 - eta * xi) * inv_sigma;
        let xi_2 = 2.0 * q2 * (1.0 - xi * xi) * inv_sigma;
        let lp_1 = 2.0 * q1 * (1.0 + eta);
        let lp_2 = 2.0 * q2 * (1.0 + xi);
        let lm_1 = 2.0 * q1 * (1.0 - eta);
        let lm_2 = 2.0 * q2 * (1.0 - xi);
        Ok(AuxDerivatives {
            u,
            v,
            eta,
            xi,
            lm,
            sp,
            sm,
            inv_sp,
            inv_sm,
            inv_sigma,
            eta_1,
            eta_2,
            xi_1,
            xi_2,
            lp_1,
            lp_2,
            lm_1,
            lm_2,
            sp_1: 0.5 * lp_1 * inv_sp,
            sp_2: 0.5 * lp_2 * inv_sp,
            sm_1: 0.5 * lm_1 * inv_sm,
            sm_2: 0.5 * lm_2 * inv_sm,
        })
    }
}

/// Fused evaluation of `V_e`, `∇V_e`, `Z` and `∂Z/∂q` at `(q1, q2)`.
pub fn de2_eval(q1: f64, q2: f64, gamma: f64) -> Result<De2Eval, EffectiveError> {
    if math::abs(q1) < ORIGIN_BAND && math::abs(q2) < ORIGIN_BAND {
        return Ok(De2Eval::ORIGIN);
    }
    let w = AuxDerivatives::at(q1, q2)?;
    let (u, v, eta, xi) = (w.u, w.v, w.eta, w.xi);

    // Λ^{-5/2} = (1/Λ)² · (1/√Λ) and its derivatives.
    let inv_lp = w.inv_sp * w.inv_sp;
    let inv_lm = w.inv_sm * w.inv_sm;
    let mp = inv_lp * inv_lp * w.inv_sp;
    let mm = inv_lm * inv_lm * w.inv_sm;
    let mp_1 = -2.5 * mp * w.lp_1 * inv_lp;
    let mp_2 = -2.5 * mp * w.lp_2 * inv_lp;
    let mm_1 = -2.5 * mm * w.lm_1 * inv_lm;
    let mm_2 = -2.5 * mm * w.lm_2 * inv_lm;

    // ζ = r²/(P·S³) with r = (u+v)/Σ, P = √(Λ+Λ−), S = √Λ+ + √Λ−.
    let r = (u + v) * w.inv_sigma;
    let p = w.sp * w.sm;
    let s = w.sp + w.sm;
    let d = p * s * s * s;
    let inv_d = 1.0 / d;
    let zeta = r * r * inv_d;
    let r_1 = 2.0 * q1 * (1.0 - r * eta) * w.inv_sigma;
    let r_2 = 2.0 * q2 * (1.0 - r * xi) * w.inv_sigma;
    let p_1 = w.sp_1 * w.sm + w.sp * w.sm_1;
    let p_2 = w.sp_2 * w.sm + w.sp * w.sm_2;
    let s_1 = w.sp_1 + w.sm_1;
    let s_2 = w.sp_2 + w.sm_2;
    let d_1 = p_1 * s * s * s + 3.0 * p * s * s * s_1;
    let d_2 = p_2 * s * s * s + 3.0 * p * s * s * s_2;
    let zeta_1 = inv_d * (2.0 * r * r_1 - zeta * d_1);
    let zeta_2 = inv_d * (2.0 * r * r_2 - zeta * d_2);

    // Mode weights G and their derivatives.
    let ep = 1.0 + eta;
    let em = 1.0 - eta;
    let xp = 1.0 + xi;
    let xm = 1.0 - xi;
    let g1 = ep * ep * mp + em * em * mm;
    let g2 = xp * xp * mp + xm * xm * mm;
    let g12 = ep * xp * mp + em * xm * mm;
    let g1_1 = 2.0 * ep * w.eta_1 * mp + ep * ep * mp_1 - 2.0 * em * w.eta_1 * mm + em * em * mm_1;
    let g1_2 = 2.0 * ep * w.eta_2 * mp + ep * ep * mp_2 - 2.0 * em * w.eta_2 * mm + em * em * mm_2;
    let g2_1 = 2.0 * xp * w.xi_1 * mp + xp * xp * mp_1 - 2.0 * xm * w.xi_1 * mm + xm * xm * mm_1;
    let g2_2 = 2.0 * xp * w.xi_2 * mp + xp * xp * mp_2 - 2.0 * xm * w.xi_2 * mm + xm * xm * mm_2;
    let g12_1 = (w.eta_1 * xp + ep * w.xi_1) * mp + ep * xp * mp_1
        - (w.eta_1 * xm + em * w.xi_1) * mm
        + em * xm * mm_1;
    let g12_2 = (w.eta_2 * xp + ep * w.xi_2) * mp + ep * xp * mp_2
        - (w.eta_2 * xm + em * w.xi_2) * mm
        + em * xm * mm_2;

    let z = SymMatrix2 {
        a11: 1.0 + gamma * (0.125 * u * g1 + 8.0 * v * zeta),
        a12: gamma * q1 * q2 * (0.125 * g12 + 8.0 * zeta),
        a22: 1.0 + gamma * (0.125 * v * g2 + 8.0 * u * zeta),
    };
    let dz_dq1 = SymMatrix2 {
        a11: gamma * (0.25 * q1 * g1 + 0.125 * u * g1_1 + 8.0 * v * zeta_1),
        a12: gamma * (q2 * (0.125 * g12 + 8.0 * zeta) + q1 * q2 * (0.125 * g12_1 + 8.0 * zeta_1)),
        a22: gamma * (0.125 * v * g2_1 + 16.0 * q1 * zeta + 8.0 * u * zeta_1),
    };
    let dz_dq2 = SymMatrix2 {
        a11: gamma * (0.125 * u * g1_2 + 16.0 * q2 * zeta + 8.0 * v * zeta_2),
        a12: gamma * (q1 * (0.125 * g12 + 8.0 * zeta) + q1 * q2 * (0.125 * g12_2 + 8.0 * zeta_2)),
        a22: gamma * (0.25 * q2 * g2 + 0.125 * v * g2_2 + 8.0 * u * zeta_2),
    };

    let v_val = 0.5 * (u + v) + u * v + 0.5 * gamma * (w.sp + w.sm - 2.0);
    let half_gamma = 0.5 * gamma;
    let dv_dq1 = q1 * ((1.0 + 2.0 * v) + half_gamma * (ep * w.inv_sp + em * w.inv_sm));
    let dv_dq2 = q2 * ((1.0 + 2.0 * u) + half_gamma * (xp * w.inv_sp + xm * w.inv_sm));

    Ok(De2Eval {
        lambda_minus: w.lm,
        v: v_val,
        dv_dq1,
        dv_dq2,
        z,
        dz_dq1,
        dz_dq2,
    })
}
