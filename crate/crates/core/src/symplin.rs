//! Linear symplectic algebra on ℝ⁴.
//!
//! Coordinates are always ordered `(x, y, ξ, η)` and the symplectic form is
//! `Ω = dξ∧dx + dη∧dy`, so `ξ` is conjugate to `x` and `η` to `y`. With this
//! ordering Hamilton's equations read `ż = B ∇H` where
//!
//! ```text
//!      ⎡ 0  0  1  0 ⎤
//!  B = ⎢ 0  0  0  1 ⎥
//!      ⎢-1  0  0  0 ⎥
//!      ⎣ 0 -1  0  0 ⎦
//! ```
//!
//! The linearisation of a Hamiltonian at an equilibrium is `B · Hess H`. Its
//! characteristic polynomial is even, `λ⁴ + bλ² + a`, and the position of
//! `(a, b)` relative to the line `a = 0` and the parabola `a = b²/4` decides the
//! Williamson type of the equilibrium.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{PENCIL_RANK_TOL, PENCIL_SAMPLES, PENCIL_SEPARATION_TOL};
use crate::error::{Error, Result};
use crate::oracle::golden_section_max;

pub type Mat4 = [[f64; 4]; 4];

/// The fixed canonical coordinate system `(x, y, ξ, η)`.
pub struct Canonical4;

impl Canonical4 {
    pub const B: Mat4 = [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ];
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[j][i] = *v;
        }
    }
    out
}

pub fn mat_vec(a: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(a) {
        *o = row.iter().zip(v).map(|(x, y)| x * y).sum();
    }
    out
}

/// A symmetric 4×4 matrix, typically the Hessian of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym4(Mat4);

impl Sym4 {
    pub fn new(entries: Mat4) -> Result<Self> {
        for i in 0..4 {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::InvalidParams(format!(
                        "entry ({i},{j}) = {} differs from ({j},{i}) = {}",
                        entries[i][j], entries[j][i]
                    )));
                }
            }
        }
        Ok(Self(entries))
    }

    pub fn zero() -> Self {
        Self([[0.0; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self(m)
    }

    /// Hessian of `ω̃ J₁ + α̃ J₂ + γ K₁ + δ K₂` with
    /// `J₁ = xη − yξ`, `J₂ = xξ + yη`, `K₁ = (x²+y²)/2`, `K₂ = (ξ²+η²)/2`.
    pub fn quadratic_family(omega_t: f64, alpha_t: f64, gamma: f64, delta: f64) -> Self {
        Self([
            [gamma, 0.0, alpha_t, omega_t],
            [0.0, gamma, -omega_t, alpha_t],
            [alpha_t, -omega_t, delta, 0.0],
            [omega_t, alpha_t, 0.0, delta],
        ])
    }

    pub fn entries(&self) -> &Mat4 {
        &self.0
    }

    pub fn scaled_sum(&self, alpha: f64, other: &Sym4, beta: f64) -> Sym4 {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = alpha * self.0[i][j] + beta * other.0[i][j];
            }
        }
        Sym4(m)
    }

    /// The ten upper-triangular entries.
    fn vectorize(&self) -> [f64; 10] {
        let mut v = [0.0; 10];
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                v[k] = self.0[i][j];
                k += 1;
            }
        }
        v
    }

    /// The quadratic form `½ pᵀ S p`.
    pub fn quadratic_value(&self, p: &[f64; 4]) -> f64 {
        0.5 * p.iter().zip(mat_vec(&self.0, p)).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// Coefficients of `P(λ) = λ⁴ + bλ² + a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticCoeffs {
    pub a: f64,
    pub b: f64,
}

impl QuarticCoeffs {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParams("quartic coefficients must be finite".into()));
        }
        Ok(Self { a, b })
    }
}

/// Stratum of the discriminant set `{a = 0} ∪ {a = b²/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    /// `a = 0`, `b ≠ 0`.
    AZero,
    /// `a = b²/4`, `b > 0`: colliding imaginary pairs (Hopf).
    ParabolaPlus,
    /// `a = b²/4`, `b < 0`: colliding real pairs.
    ParabolaMinus,
    /// `a = b = 0`.
    Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumType {
    EllipticElliptic,
    FocusFocus,
    EllipticHyperbolic,
    HyperbolicHyperbolic,
    Boundary(BoundaryKind),
}

impl fmt::Display for EquilibriumType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Boundary(kind) => write!(f, "Boundary({kind:?})"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Four eigenvalues of a 4×4 matrix, unordered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenQuadruple([Complex64; 4]);

const PERMUTATIONS: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

impl EigenQuadruple {
    pub fn new(roots: [Complex64; 4]) -> Self {
        Self(roots)
    }

    pub fn roots(&self) -> &[Complex64; 4] {
        &self.0
    }

    /// Sorted by real part, then imaginary part.
    pub fn sorted(&self) -> [Complex64; 4] {
        let mut r = self.0;
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        r
    }

    /// Best-matching maximum distance between the two multisets.
    pub fn distance(&self, other: &EigenQuadruple) -> f64 {
        PERMUTATIONS
            .iter()
            .map(|perm| {
                perm.iter()
                    .enumerate()
                    .map(|(i, &j)| (self.0[i] - other.0[j]).norm())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed under `λ ↦ −λ` and under conjugation.
    pub fn is_closed(&self, tol: f64) -> bool {
        let neg = EigenQuadruple(self.0.map(|z| -z));
        let conj = EigenQuadruple(self.0.map(|z| z.conj()));
        self.distance(&neg) <= tol && self.distance(&conj) <= tol
    }

    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..4 {
            for j in 0..i {
                best = best.min((self.0[i] - self.0[j]).norm());
            }
        }
        best
    }
}

/// `B · S` in the fixed canonical ordering.
pub fn hamiltonian_matrix(s: &Sym4) -> Mat4 {
    mat_mul(&Canonical4::B, s.entries())
}

fn det4(m: &Mat4) -> f64 {
    let minor = |r: usize, c: usize| -> f64 {
        let rows: Vec<usize> = (0..4).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..4).filter(|&j| j != c).collect();
        let e = |i: usize, j: usize| m[rows[i]][cols[j]];
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    (0..4)
        .map(|c| if c % 2 == 0 { m[0][c] * minor(0, c) } else { -m[0][c] * minor(0, c) })
        .sum()
}

/// `(a, b)` of the even characteristic polynomial of a Hamiltonian matrix,
/// from `b = −tr(M²)/2` and `a = det M`.
pub fn hamiltonian_char_coeffs(m: &Mat4) -> QuarticCoeffs {
    let m2 = mat_mul(m, m);
    let trace2: f64 = (0..4).map(|i| m2[i][i]).sum();
    QuarticCoeffs { a: det4(m), b: -0.5 * trace2 }
}

/// Closed-form `(a, b)` for `B · Hess(ω̃J₁ + α̃J₂ + γK₁ + δK₂)`.
pub fn quartic_coeffs(omega_t: f64, alpha_t: f64, gamma: f64, delta: f64) -> QuarticCoeffs {
    let w2 = omega_t * omega_t;
    let al2 = alpha_t * alpha_t;
    let gd = gamma * delta;
    let root = al2 + w2 - gd;
    QuarticCoeffs { a: root * root, b: 2.0 * (gd - al2 + w2) }
}

/// Williamson region of `(a, b)`; comparisons are exact.
pub fn classify(q: QuarticCoeffs) -> EquilibriumType {
    let QuarticCoeffs { a, b } = q;
    let para = b * b / 4.0;
    if a < 0.0 {
        EquilibriumType::EllipticHyperbolic
    } else if a == 0.0 {
        if b == 0.0 {
            EquilibriumType::Boundary(BoundaryKind::Origin)
        } else {
            EquilibriumType::Boundary(BoundaryKind::AZero)
        }
    } else if a > para {
        EquilibriumType::FocusFocus
    } else if a == para {
        if b > 0.0 {
            EquilibriumType::Boundary(BoundaryKind::ParabolaPlus)
        } else {
            EquilibriumType::Boundary(BoundaryKind::ParabolaMinus)
        }
    } else if b > 0.0 {
        EquilibriumType::EllipticElliptic
    } else {
        EquilibriumType::HyperbolicHyperbolic
    }
}

/// Roots `±√(−b/2 ± √(b²/4 − a))` with complex square roots.
pub fn eigen_closed(q: QuarticCoeffs) -> EigenQuadruple {
    let disc = Complex64::new(q.b * q.b / 4.0 - q.a, 0.0).sqrt();
    let mu_plus = -q.b / 2.0 + disc;
    let mu_minus = -q.b / 2.0 - disc;
    let (r1, r2) = (mu_plus.sqrt(), mu_minus.sqrt());
    EigenQuadruple([r1, -r1, r2, -r2])
}

/// Outcome of the sampled pencil test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PencilVerdict {
    /// Some `α B S₁ + β B S₂` has four distinct eigenvalues.
    NonDegenerate { alpha: f64, beta: f64, separation: f64 },
    /// `S₁` and `S₂` are linearly dependent.
    Dependent,
    /// No sampled combination separated the eigenvalues; this does not prove degeneracy.
    Unresolved { alpha: f64, beta: f64, separation: f64 },
}

impl PencilVerdict {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, Self::NonDegenerate { .. })
    }

    pub fn witness(&self) -> Option<(f64, f64)> {
        match *self {
            Self::NonDegenerate { alpha, beta, .. } | Self::Unresolved { alpha, beta, .. } => {
                Some((alpha, beta))
            }
            Self::Dependent => None,
        }
    }

    /// `Ok((α, β))` for a non-degenerate pencil, otherwise `DegenerateOrUnresolved`.
    pub fn into_result(self) -> Result<(f64, f64)> {
        match self {
            Self::NonDegenerate { alpha, beta, .. } => Ok((alpha, beta)),
            _ => Err(Error::DegenerateOrUnresolved),
        }
    }
}

fn relative_second_singular_value(u: &[f64; 10], v: &[f64; 10]) -> f64 {
    let dot = |a: &[f64; 10], b: &[f64; 10]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let (g11, g12, g22) = (dot(u, u), dot(u, v), dot(v, v));
    let tr = g11 + g22;
    if tr == 0.0 {
        return 0.0;
    }
    let det = (g11 * g22 - g12 * g12).max(0.0);
    let disc = ((g11 - g22).powi(2) + 4.0 * g12 * g12).sqrt();
    let big = 0.5 * (tr + disc);
    // small eigenvalue via det/big avoids cancellation
    let small = det / big;
    (small / big).sqrt()
}

/// Sampled sufficient test for a non-degenerate rank-0 pencil: `S₁`, `S₂`
/// independent and some `cos t · B S₁ + sin t · B S₂` with distinct eigenvalues.
pub fn pencil_nondegenerate(s1: &Sym4, s2: &Sym4) -> PencilVerdict {
    if relative_second_singular_value(&s1.vectorize(), &s2.vectorize()) <= PENCIL_RANK_TOL {
        return PencilVerdict::Dependent;
    }
    let separation = |t: f64| {
        let m = hamiltonian_matrix(&s1.scaled_sum(t.cos(), s2, t.sin()));
        eigen_closed(hamiltonian_char_coeffs(&m)).min_separation()
    };

    let dt = std::f64::consts::TAU / PENCIL_SAMPLES as f64;
    let mut best_t = 0.0;
    let mut best = separation(0.0);
    for k in 1..PENCIL_SAMPLES {
        let t = dt * k as f64;
        let sep = separation(t);
        if sep > best * (1.0 + 1e-12) + 1e-300 {
            best = sep;
            best_t = t;
        }
    }
    let (t, refined) = golden_section_max(separation, best_t - dt, best_t + dt, 1e-12);
    let (t, sep) = if refined >= best { (t, refined) } else { (best_t, best) };

    let (alpha, beta) = (t.cos(), t.sin());
    if sep > PENCIL_SEPARATION_TOL {
        PencilVerdict::NonDegenerate { alpha, beta, separation: sep }
    } else {
        PencilVerdict::Unresolved { alpha, beta, separation: sep }
    }
}
