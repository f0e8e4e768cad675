//! Numerical tolerances and resource caps shared by every check.

/// Tolerances, in one place. Every check reports the residual it measured
/// alongside the tolerance it was compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Entries below this magnitude are dropped from sparse operators.
    pub drop: f64,
    /// `||A - A^dagger||_max` for operators flagged Hermitian.
    pub hermitian: f64,
    /// Projector, commutator and frustration-freeness residuals.
    pub projector: f64,
    pub commutator: f64,
    pub frustration: f64,
    /// Allowed distance of the spectral gap and the low eigenvalues from integers.
    pub gap: f64,
    /// Eigenpair residual demanded from the iterative eigensolver.
    pub eigen_residual: f64,
    /// `|trace(P) - round(trace(P))|` accepted when counting rank by trace.
    pub rank_integrality: f64,
    /// `||p^2 - p||_max` accepted by `projector_rank`.
    pub rank_projector: f64,
    pub tqo1: f64,
    pub tqo2: f64,
    /// Relative eigenvalue threshold that defines a Gram null space.
    pub null_space: f64,
    /// Ground-space leakage accepted for a logical operator.
    pub distance_preserve: f64,
    /// Minimum `||M - lambda I||` for an operator to count as a nontrivial logical.
    pub distance_nontrivial: f64,
    /// Fusion data validation on load.
    pub fusion_validate: f64,
    /// Built-in fusion data.
    pub fusion_builtin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            drop: 1e-15,
            hermitian: 1e-12,
            projector: 1e-10,
            commutator: 1e-10,
            frustration: 1e-10,
            gap: 1e-8,
            eigen_residual: 1e-8,
            rank_integrality: 1e-8,
            rank_projector: 1e-8,
            tqo1: 1e-8,
            tqo2: 1e-8,
            null_space: 1e-8,
            distance_preserve: 1e-8,
            distance_nontrivial: 1e-6,
            fusion_validate: 1e-10,
            fusion_builtin: 1e-12,
        }
    }
}

/// Resource caps. Exceeding any of them is a clean error.
#[derive(Debug, Clone, PartialEq)]
pub struct Caps {
    /// Largest dimension diagonalized densely.
    pub dense: usize,
    /// Largest Hilbert-space dimension for which full-space sparse matrices are assembled.
    pub full_matrix: u64,
    /// Largest Hilbert-space dimension handled at all (apply-only).
    pub matrix_free: u64,
    /// Largest local operator basis.
    pub operator_basis: u64,
    /// Largest ground-space dimension extracted as explicit vectors.
    pub ground_rank: usize,
    /// Krylov subspace size of the iterative eigensolver.
    pub krylov: usize,
    /// Restarts before the eigensolver reports non-convergence.
    pub max_restarts: usize,
    /// Operator products enumerated by the distance search.
    pub distance_candidates: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            dense: 1 << 10,
            full_matrix: 1 << 14,
            matrix_free: 1 << 24,
            operator_basis: 1 << 16,
            ground_rank: 64,
            krylov: 40,
            max_restarts: 200,
            distance_candidates: 1 << 22,
        }
    }
}

/// Everything a numerical routine needs to know about precision, limits and seeding.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub tol: Tolerances,
    pub caps: Caps,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Self { tol: Tolerances::default(), caps: Caps::default(), seed: DEFAULT_SEED }
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed_2020;
