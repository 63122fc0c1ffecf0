//! Exact quantum evolution of the rescaled Schrödinger equation
//! `iγ ∂ψ/∂t = Ĥψ`, `Ĥ = (p̂1² + p̂2²)/2 + (q̂1² + q̂2²)/2 + q̂1²q̂2²`,
//! in the truncated number basis of the 2-D harmonic oscillator.
//!
//! `γ` plays the role of ħ in rescaled units: `q̂ = √(γ/2)(a + a†)`,
//! `p̂ = i√(γ/2)(a† − a)`, `[q̂, p̂] = iγ`. The basis holds all `|n1, n2⟩`
//! with `n_i ≤ n_max`; the quartic coupling is the square of the truncated
//! position matrix, so the Hamiltonian is the exact Hamiltonian of the
//! projected subspace and the spectrum stays real and variational.

use crate::linalg::{max_residual, orthonormality_defect, symmetric_eigen, DMat, LinalgError};
use crate::math;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum QuantumError {
    /// Coherent-state truncation tail exceeds the tolerance; `required`
    /// is the smallest cutoff that meets it.
    InsufficientCutoff { required: usize },
    /// State and decomposition (or operator) dimensions disagree.
    BasisMismatch { expected: usize, got: usize },
    /// γ must be positive for quantum dynamics.
    InvalidGamma { gamma: f64 },
    Solver(LinalgError),
}

impl core::fmt::Display for QuantumError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuantumError::InsufficientCutoff { required } => {
                write!(f, "coherent tail exceeds tolerance; need n_max >= {required}")
            }
            QuantumError::BasisMismatch { expected, got } => {
                write!(f, "basis mismatch: expected dimension {expected}, got {got}")
            }
            QuantumError::InvalidGamma { gamma } => {
                write!(f, "gamma = {gamma} must be positive")
            }
            QuantumError::Solver(e) => write!(f, "eigensolver failure: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for QuantumError {}

impl From<LinalgError> for QuantumError {
    fn from(e: LinalgError) -> Self {
        QuantumError::Solver(e)
    }
}

/// Truncated 2-D oscillator basis: all `|n1, n2⟩` with `n_i ≤ n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub n_max: usize,
    /// Rescaled ħ.
    pub gamma: f64,
}

impl BasisSpec {
    pub fn new(n_max: usize, gamma: f64) -> Self {
        BasisSpec { n_max, gamma }
    }

    pub fn single_mode_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn dimension(&self) -> usize {
        (self.n_max + 1) * (self.n_max + 1)
    }

    /// Flat index of `|n1, n2⟩`.
    #[inline(always)]
    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * (self.n_max + 1) + n2
    }
}

/// Single-mode position and momentum matrices on the truncated space.
/// The momentum operator is `i·ip` (purely imaginary entries).
#[derive(Debug, Clone)]
pub struct LadderOps {
    pub q: DMat,
    pub ip: DMat,
}

/// `q = √(γ/2)(a + a†)` and `p/i = √(γ/2)(a† − a)` on the
/// `(n_max+1)`-dimensional single-mode space.
pub fn ladder_matrices(spec: &BasisSpec) -> LadderOps {
    let dim = spec.single_mode_dim();
    let scale = math::sqrt(0.5 * spec.gamma);
    let mut q = DMat::zeros(dim, dim);
    let mut ip = DMat::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let root = scale * math::sqrt((n + 1) as f64);
        q[(n, n + 1)] = root;
        q[(n + 1, n)] = root;
        ip[(n + 1, n)] = root;
        ip[(n, n + 1)] = -root;
    }
    LadderOps { q, ip }
}

/// `H = H₀ + q² ⊗ q²` with `H₀` the exact oscillator diagonal
/// `γ(n1 + n2 + 1)` and `q²` the square of the truncated position matrix.
pub fn build_hamiltonian(spec: &BasisSpec) -> DMat {
    let LadderOps { q, .. } = ladder_matrices(spec);
    let q2 = q.matmul(&q);
    let m = spec.single_mode_dim();
    let dim = spec.dimension();
    let mut h = DMat::zeros(dim, dim);
    for n1 in 0..m {
        for n2 in 0..m {
            let row = spec.index(n1, n2);
            h[(row, row)] = spec.gamma * (n1 + n2 + 1) as f64;
            for m1 in 0..m {
                let a = q2[(n1, m1)];
                if a == 0.0 {
                    continue;
                }
                for m2 in 0..m {
                    let b = q2[(n2, m2)];
                    if b != 0.0 {
                        h[(row, spec.index(m1, m2))] += a * b;
                    }
                }
            }
        }
    }
    h
}

/// Eigendecomposition of the truncated Hamiltonian with its accuracy audit.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the orthonormal eigenvectors.
    pub eigenvectors: DMat,
    /// `max_k ‖Hv_k − λ_k v_k‖₂`.
    pub residual: f64,
    pub orthonormality_defect: f64,
}

pub fn eigendecompose(h: &DMat) -> Result<SpectralDecomposition, QuantumError> {
    let (eigenvalues, eigenvectors) = symmetric_eigen(h)?;
    let residual = max_residual(h, &eigenvalues, &eigenvectors);
    let defect = orthonormality_defect(&eigenvectors);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        residual,
        orthonormality_defect: defect,
    })
}

/// Coefficient vector in the truncated 2-D number basis.
#[derive(Debug, Clone)]
pub struct QuantumState {
    pub coeffs: Vec<Complex64>,
    /// `|1 − Σ|c|²|` at construction (truncation loss for coherent states).
    pub norm_audit: f64,
    pub basis: BasisSpec,
}

impl QuantumState {
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Truncation-loss tolerance for coherent initial states.
pub const COHERENT_TAIL_TOL: f64 = 1e-6;

fn coherent_mode_coeffs(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let mut coeffs = Vec::with_capacity(dim);
    let mut c = Complex64::new(math::exp(-0.5 * alpha.norm_sqr()), 0.0);
    for n in 0..dim {
        coeffs.push(c);
        c *= alpha / math::sqrt((n + 1) as f64);
    }
    coeffs
}

/// Smallest cutoff at which a single mode's truncation tail drops below
/// `tol`: the Poisson weights `e^{−|α|²}|α|^{2n}/n!` summed past `n_max`.
fn required_cutoff(alpha_sqr: f64, tol: f64) -> usize {
    let mut term = math::exp(-alpha_sqr);
    let mut cumulative = term;
    let mut n = 0usize;
    while 1.0 - cumulative > tol && n < 100_000 {
        n += 1;
        term *= alpha_sqr / n as f64;
        cumulative += term;
    }
    n
}

/// Product coherent state centered at `(q1', p1', q2', p2')`:
/// `α_j = (q_j' + i p_j')/√(2γ)`, `c_n = e^{−|α|²/2} αⁿ/√(n!)` per mode.
pub fn coherent_state(
    q1: f64,
    p1: f64,
    q2: f64,
    p2: f64,
    spec: &BasisSpec,
) -> Result<QuantumState, QuantumError> {
    if !(spec.gamma > 0.0) {
        return Err(QuantumError::InvalidGamma { gamma: spec.gamma });
    }
    let scale = 1.0 / math::sqrt(2.0 * spec.gamma);
    let alpha1 = Complex64::new(q1 * scale, p1 * scale);
    let alpha2 = Complex64::new(q2 * scale, p2 * scale);
    let dim = spec.single_mode_dim();
    let c1 = coherent_mode_coeffs(alpha1, dim);
    let c2 = coherent_mode_coeffs(alpha2, dim);
    let n1_sqr: f64 = c1.iter().map(|c| c.norm_sqr()).sum();
    let n2_sqr: f64 = c2.iter().map(|c| c.norm_sqr()).sum();
    let loss = 1.0 - n1_sqr * n2_sqr;
    if loss > COHERENT_TAIL_TOL {
        let required = required_cutoff(alpha1.norm_sqr(), 0.5 * COHERENT_TAIL_TOL)
            .max(required_cutoff(alpha2.norm_sqr(), 0.5 * COHERENT_TAIL_TOL));
        return Err(QuantumError::InsufficientCutoff { required });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); spec.dimension()];
    for (n1, a) in c1.iter().enumerate() {
        for (n2, b) in c2.iter().enumerate() {
            coeffs[spec.index(n1, n2)] = a * b;
        }
    }
    Ok(QuantumState {
        coeffs,
        norm_audit: math::abs(loss),
        basis: *spec,
    })
}

/// Unitary propagation by the spectral decomposition:
/// `c(t) = V e^{−iΛt/γ} Vᵀ c(0)`.
pub fn evolve(
    state: &QuantumState,
    decomp: &SpectralDecomposition,
    t: f64,
) -> Result<QuantumState, QuantumError> {
    let dim = state.coeffs.len();
    if decomp.eigenvectors.n_rows != dim {
        return Err(QuantumError::BasisMismatch {
            expected: decomp.eigenvectors.n_rows,
            got: dim,
        });
    }
    if !(state.basis.gamma > 0.0) {
        return Err(QuantumError::InvalidGamma {
            gamma: state.basis.gamma,
        });
    }
    let v = &decomp.eigenvectors;
    // Vᵀ c
    let mut modal = vec![Complex64::new(0.0, 0.0); dim];
    for (k, m) in modal.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            acc += v[(i, k)] * state.coeffs[i];
        }
        *m = acc;
    }
    // Phases, then back.
    let inv_gamma = 1.0 / state.basis.gamma;
    for (k, m) in modal.iter_mut().enumerate() {
        let phase = -decomp.eigenvalues[k] * t * inv_gamma;
        *m *= Complex64::new(math::cos(phase), math::sin(phase));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
    for (i, c) in coeffs.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, m) in modal.iter().enumerate() {
            acc += v[(i, k)] * m;
        }
        *c = acc;
    }
    Ok(QuantumState {
        coeffs,
        norm_audit: state.norm_audit,
        basis: state.basis,
    })
}

/// `⟨q̂1 ⊗ 1⟩`, normalized by the state norm. The tridiagonal structure of
/// `q` makes the result real by construction; the complex-route residue is
/// checked in tests.
pub fn expectation_q1(state: &QuantumState) -> f64 {
    let m = state.basis.single_mode_dim();
    let scale = math::sqrt(0.5 * state.basis.gamma);
    let mut sum = 0.0;
    for n1 in 0..m - 1 {
        let root = scale * math::sqrt((n1 + 1) as f64);
        for n2 in 0..m {
            let a = state.coeffs[state.basis.index(n1, n2)];
            let b = state.coeffs[state.basis.index(n1 + 1, n2)];
            sum += 2.0 * root * (a.conj() * b).re;
        }
    }
    sum / state.norm_sqr()
}

/// `⟨1 ⊗ q̂2⟩`, normalized by the state norm.
pub fn expectation_q2(state: &QuantumState) -> f64 {
    let m = state.basis.single_mode_dim();
    let scale = math::sqrt(0.5 * state.basis.gamma);
    let mut sum = 0.0;
    for n2 in 0..m - 1 {
        let root = scale * math::sqrt((n2 + 1) as f64);
        for n1 in 0..m {
            let a = state.coeffs[state.basis.index(n1, n2)];
            let b = state.coeffs[state.basis.index(n1, n2 + 1)];
            sum += 2.0 * root * (a.conj() * b).re;
        }
    }
    sum / state.norm_sqr()
}

/// `⟨Ĥ⟩`, normalized by the state norm.
pub fn expectation_h(state: &QuantumState, h: &DMat) -> Result<f64, QuantumError> {
    let dim = state.coeffs.len();
    if h.n_rows != dim {
        return Err(QuantumError::BasisMismatch {
            expected: h.n_rows,
            got: dim,
        });
    }
    let mut sum = 0.0;
    for i in 0..dim {
        let row = h.row(i);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &hij) in row.iter().enumerate() {
            if hij != 0.0 {
                acc += hij * state.coeffs[j];
            }
        }
        sum += (state.coeffs[i].conj() * acc).re;
    }
    Ok(sum / state.norm_sqr())
}

/// Basis indices grouped by `(n1 parity, n2 parity)`: the quartic coupling
/// preserves both parities, so the Hamiltonian is block diagonal over these
/// four lists. Optional optimization, off by default.
pub fn parity_blocks(spec: &BasisSpec) -> [Vec<usize>; 4] {
    let mut blocks: [Vec<usize>; 4] = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let m = spec.single_mode_dim();
    for n1 in 0..m {
        for n2 in 0..m {
            blocks[(n1 % 2) * 2 + (n2 % 2)].push(spec.index(n1, n2));
        }
    }
    blocks
}

/// The principal submatrix of `h` on the given index list.
pub fn submatrix(h: &DMat, indices: &[usize]) -> DMat {
    DMat::from_fn(indices.len(), indices.len(), |i, j| {
        h[(indices[i], indices[j])]
    })
}
