//! Numerical constants shared by the library, the CLI and the acceptance checks.
//!
//! None of these come from the model; they are grid sizes, stencil steps and
//! residual thresholds picked so the checks are reproducible at desk scale.

/// Trailing coefficients at or below this magnitude are trimmed from a [`Poly`](crate::oracle::Poly).
pub const POLY_TRIM: f64 = 1e-300;

/// Newton polish steps applied after the closed-form cubic/quartic solution.
pub const NEWTON_POLISH_STEPS: usize = 3;

/// Scan cells used by the double-root search before local refinement.
pub const DOUBLE_ROOT_SCAN: usize = 2000;

/// Scaled residual for accepting a double root (|p| and |p'|).
pub const DOUBLE_ROOT_TOL: f64 = 1e-10;

/// Default central-difference step for gradients.
pub const FD_GRADIENT_STEP: f64 = 1e-5;

/// Default central-difference step for Hessians.
pub const FD_HESSIAN_STEP: f64 = 1e-4;

/// Fallback step when a phase-space function has no analytic gradient.
pub const FD_BRACKET_STEP: f64 = 1e-6;

/// Uniform samples of the pencil circle before golden-section refinement.
pub const PENCIL_SAMPLES: usize = 360;

/// Second singular value, relative to the first, below which two Hessians are dependent.
pub const PENCIL_RANK_TOL: f64 = 1e-10;

/// Minimum pairwise eigenvalue separation for a non-degenerate pencil witness.
pub const PENCIL_SEPARATION_TOL: f64 = 1e-8;

/// Relative tolerance used to recognise the cusp (3s² = ν) and endpoint (s² = ν)
/// parameters after rounding of √(ν/3) and √ν.
pub const CURVE_KIND_REL_TOL: f64 = 1e-12;

/// Cells of the bracketing grid on the spin-oscillator reduced domain.
pub const REDUCED_GRID_CELLS: usize = 2000;

/// Bisection tolerance for interior critical points of the reduced Hamiltonian.
pub const REDUCED_BISECTION_TOL: f64 = 1e-12;

/// |h''| below which a reduced critical point is reported as a cusp.
pub const CUSP_SECOND_DERIVATIVE_TOL: f64 = 1e-8;

/// Relative second singular value below which (X_J, X_H) are rank deficient.
pub const RANK_TOL: f64 = 1e-8;

/// Minimum number of curve samples accepted by the Hopf diagram assembler.
pub const MIN_CURVE_SAMPLES: usize = 16;

/// Default number of curve samples for the CLI.
pub const DEFAULT_CURVE_SAMPLES: usize = 400;
