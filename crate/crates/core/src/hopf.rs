//! Closed-form analytics of the Hamiltonian Hopf normal form.
//!
//! In canonical coordinates `(x, y, ξ, η)` the normal form is written with the
//! invariants
//!
//! ```text
//! Γ₁ = xη − yξ,   Γ₂ = (ξ² + η²)/2,   Γ₃ = (x² + y²)/2
//! Ĥ_ν = ωΓ₁ + σΓ₂ + CΓ₁² + 2BΓ₁Γ₃ + 2DΓ₃² + σν(aΓ₁ + bΓ₃)
//! ```
//!
//! Symplectic polar coordinates reduce the S¹ symmetry generated by `Γ₁` and
//! leave a one degree of freedom system in `(z, p_z)` with `z = Γ₃`. For the
//! unfolding `a = B = C = 0`, `b = 1` the critical values of `(Γ₁, Ĥ_ν)` lie on
//! the discriminant of the cubic
//!
//! ```text
//! Q(z) = 4zσ(H − ωJ − σνz − 2Dz²) − J²
//! ```
//!
//! which has the rational parametrisation implemented by
//! [`critical_curve_point`]. Everything curve-related in this module describes
//! that specialisation; [`reduced_hamiltonian`] and [`hopf_normal_form`] accept
//! the general coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::CURVE_KIND_REL_TOL;
use crate::error::{Error, Result};
use crate::oracle::Poly;
use crate::symplin::{quartic_coeffs, EigenQuadruple, Mat4, QuarticCoeffs, Sym4};

/// Parameters of the unfolded normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHopfParams", into = "RawHopfParams")]
pub struct HopfParams {
    omega: f64,
    sigma: f64,
    nu: f64,
    d: f64,
    unfold_a: f64,
    unfold_b: f64,
    coeff_b: f64,
    coeff_c: f64,
}

#[derive(Serialize, Deserialize)]
struct RawHopfParams {
    omega: f64,
    sigma: f64,
    nu: f64,
    #[serde(rename = "D")]
    d: f64,
    #[serde(default)]
    unfold_a: f64,
    #[serde(default = "one")]
    unfold_b: f64,
    #[serde(rename = "coeff_B", default)]
    coeff_b: f64,
    #[serde(rename = "coeff_C", default)]
    coeff_c: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawHopfParams> for HopfParams {
    type Error = Error;

    fn try_from(r: RawHopfParams) -> Result<Self> {
        HopfParams::new(r.omega, r.sigma, r.nu, r.d)?
            .with_unfolding(r.unfold_a, r.unfold_b)?
            .with_higher_order(r.coeff_b, r.coeff_c)
    }
}

impl From<HopfParams> for RawHopfParams {
    fn from(p: HopfParams) -> Self {
        RawHopfParams {
            omega: p.omega,
            sigma: p.sigma,
            nu: p.nu,
            d: p.d,
            unfold_a: p.unfold_a,
            unfold_b: p.unfold_b,
            coeff_b: p.coeff_b,
            coeff_c: p.coeff_c,
        }
    }
}

impl HopfParams {
    /// Specialised normal form (`a = B = C = 0`, `b = 1`).
    pub fn new(omega: f64, sigma: f64, nu: f64, d: f64) -> Result<Self> {
        if ![omega, sigma, nu, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("normal-form parameters must be finite".into()));
        }
        if omega == 0.0 {
            return Err(Error::InvalidParams("omega must be nonzero".into()));
        }
        if sigma != 1.0 && sigma != -1.0 {
            return Err(Error::InvalidParams(format!("sigma must be ±1, got {sigma}")));
        }
        if d == 0.0 {
            return Err(Error::InvalidParams("D must be nonzero".into()));
        }
        Ok(Self {
            omega,
            sigma,
            nu,
            d,
            unfold_a: 0.0,
            unfold_b: 1.0,
            coeff_b: 0.0,
            coeff_c: 0.0,
        })
    }

    pub fn with_unfolding(mut self, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b == 0.0 {
            return Err(Error::InvalidParams("unfolding needs finite a and nonzero b".into()));
        }
        self.unfold_a = a;
        self.unfold_b = b;
        Ok(self)
    }

    pub fn with_higher_order(mut self, coeff_b: f64, coeff_c: f64) -> Result<Self> {
        if !(coeff_b.is_finite() && coeff_c.is_finite()) {
            return Err(Error::InvalidParams("B and C must be finite".into()));
        }
        self.coeff_b = coeff_b;
        self.coeff_c = coeff_c;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn unfold_a(&self) -> f64 {
        self.unfold_a
    }
    pub fn unfold_b(&self) -> f64 {
        self.unfold_b
    }
    pub fn coeff_b(&self) -> f64 {
        self.coeff_b
    }
    pub fn coeff_c(&self) -> f64 {
        self.coeff_c
    }

    pub fn is_specialized(&self) -> bool {
        self.unfold_a == 0.0 && self.unfold_b == 1.0 && self.coeff_b == 0.0 && self.coeff_c == 0.0
    }

    fn ensure_specialized(&self) -> Result<()> {
        if self.is_specialized() {
            Ok(())
        } else {
            Err(Error::InvalidParams(
                "only the a = B = C = 0, b = 1 unfolding has a discriminant parametrisation".into(),
            ))
        }
    }
}

/// `(Γ₁, Γ₂, Γ₃)` at `(x, y, ξ, η)`.
pub fn gammas(p: &[f64; 4]) -> (f64, f64, f64) {
    let [x, y, xi, eta] = *p;
    (x * eta - y * xi, 0.5 * (xi * xi + eta * eta), 0.5 * (x * x + y * y))
}

/// The normal form `Ĥ_ν` evaluated on ℝ⁴.
pub fn hopf_normal_form(params: &HopfParams, p: &[f64; 4]) -> f64 {
    let (g1, g2, g3) = gammas(p);
    let HopfParams { omega, sigma, nu, d, unfold_a, unfold_b, coeff_b, coeff_c } = *params;
    sigma * nu * (unfold_a * g1 + unfold_b * g3)
        + omega * g1
        + sigma * g2
        + coeff_c * g1 * g1
        + 2.0 * coeff_b * g1 * g3
        + 2.0 * d * g3 * g3
}

/// A point of the reduced system; `j` is the conserved momentum `p_θ = Γ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    pub z: f64,
    pub p_z: f64,
    pub j: f64,
}

impl ReducedPoint {
    pub fn new(z: f64, p_z: f64, j: f64) -> Result<Self> {
        if !(z >= 0.0 && p_z.is_finite() && j.is_finite() && z.is_finite()) {
            return Err(Error::Domain(format!("reduced point needs finite z ≥ 0, got z = {z}")));
        }
        Ok(Self { z, p_z, j })
    }
}

/// Reduced Hamiltonian
/// `ωJ + σ(z p_z² + J²/(4z) + ν(aJ + bz)) + CJ² + 2BJz + 2Dz²`.
pub fn reduced_hamiltonian(p: &ReducedPoint, params: &HopfParams) -> Result<f64> {
    let ReducedPoint { z, p_z, j } = *p;
    if z <= 0.0 {
        return Err(Error::Domain("reduced Hamiltonian is singular at z ≤ 0".into()));
    }
    let HopfParams { omega, sigma, nu, d, unfold_a, unfold_b, coeff_b, coeff_c } = *params;
    Ok(omega * j
        + sigma * (z * p_z * p_z + j * j / (4.0 * z) + nu * (unfold_a * j + unfold_b * z))
        + coeff_c * j * j
        + 2.0 * coeff_b * j * z
        + 2.0 * d * z * z)
}

/// `Q(z) = c3 z³ + c2 z² + c1 z + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QCubic {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl QCubic {
    pub fn eval(&self, z: f64) -> f64 {
        ((self.c3 * z + self.c2) * z + self.c1) * z + self.c0
    }

    pub fn derivative(&self, z: f64) -> f64 {
        (3.0 * self.c3 * z + 2.0 * self.c2) * z + self.c1
    }

    /// `max(1, |c_i|)`.
    pub fn scale(&self) -> f64 {
        [self.c3, self.c2, self.c1, self.c0].iter().fold(1.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(vec![self.c0, self.c1, self.c2, self.c3]).expect("finite cubic")
    }
}

/// Coefficients of `Q(z) = −8σD z³ − 4ν z² + 4σ(H − ωJ) z − J²`.
pub fn q_poly(j: f64, h: f64, params: &HopfParams) -> Result<QCubic> {
    params.ensure_specialized()?;
    let HopfParams { omega, sigma, nu, d, .. } = *params;
    Ok(QCubic {
        c3: -8.0 * sigma * d,
        c2: -4.0 * nu,
        c1: 4.0 * sigma * (h - omega * j),
        c0: -j * j,
    })
}

/// Type of a point on the critical-value curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SegmentKind {
    #[serde(rename = "E")]
    TransversallyElliptic,
    #[serde(rename = "H")]
    TransversallyHyperbolic,
    #[serde(rename = "CUSP")]
    Cusp,
    #[serde(rename = "END")]
    EquilibriumEndpoint,
}

impl SegmentKind {
    pub fn code(&self) -> &'static str {
        match self {
            Self::TransversallyElliptic => "E",
            Self::TransversallyHyperbolic => "H",
            Self::Cusp => "CUSP",
            Self::EquilibriumEndpoint => "END",
        }
    }
}

/// One sample of the parametrised discriminant curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "H")]
    pub h: f64,
    /// Double root `d(s)` of `Q`.
    #[serde(rename = "z_double")]
    pub d: f64,
    /// Hessian determinant of the reduced Hamiltonian at the critical point, `2(3s² − ν)`.
    #[serde(rename = "hessdet")]
    pub det2: f64,
    pub kind: SegmentKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Subcritical,
    Supercritical,
}

/// `s² − ν`, snapped to zero at the curve endpoints `s = ±√ν`.
fn endpoint_gap(nu: f64, s: f64) -> f64 {
    let g = s * s - nu;
    if g.abs() <= CURVE_KIND_REL_TOL * nu.abs() {
        0.0
    } else {
        g
    }
}

/// `(J_c, H_c, d)` at parameter `s`.
pub fn critical_curve_point(params: &HopfParams, s: f64) -> CurveSample {
    let HopfParams { omega, sigma, nu, d, .. } = *params;
    let gap = endpoint_gap(nu, s);
    // H_c = J_c (ν + 4sω + 3s²)/(4s) with the factor s cancelled
    CurveSample {
        s,
        j: s * gap / (2.0 * d),
        h: gap * (nu + 4.0 * s * omega + 3.0 * s * s) / (8.0 * d),
        d: sigma * gap / (4.0 * d),
        det2: 2.0 * (3.0 * s * s - nu),
        kind: segment_kind(params, s),
    }
}

/// `d/ds (J_c, H_c) = (3s² − ν)/(2D) · (1, s + ω)`.
pub fn curve_tangent(params: &HopfParams, s: f64) -> (f64, f64) {
    let f = (3.0 * s * s - params.nu) / (2.0 * params.d);
    (f, f * (s + params.omega))
}

/// Curve parameters of the two cusps, `±√(ν/3)`; empty for `ν ≤ 0`.
pub fn cusps(params: &HopfParams) -> Vec<f64> {
    if params.nu > 0.0 {
        let c = (params.nu / 3.0).sqrt();
        vec![-c, c]
    } else {
        Vec::new()
    }
}

/// Classification by the sign of the reduced Hessian determinant `2(3s² − ν)`.
pub fn segment_kind(params: &HopfParams, s: f64) -> SegmentKind {
    let nu = params.nu;
    let s2 = s * s;
    if (s2 - nu).abs() <= CURVE_KIND_REL_TOL * nu.abs() {
        SegmentKind::EquilibriumEndpoint
    } else if (3.0 * s2 - nu).abs() <= CURVE_KIND_REL_TOL * nu.abs() {
        SegmentKind::Cusp
    } else if 3.0 * s2 - nu < 0.0 {
        SegmentKind::TransversallyHyperbolic
    } else {
        SegmentKind::TransversallyElliptic
    }
}

/// The double root `d(s) = σ(s² − ν)/(4D)` is a point of the image only when it is non-negative.
pub fn admissible(params: &HopfParams, s: f64) -> bool {
    params.sigma * endpoint_gap(params.nu, s) / (4.0 * params.d) >= 0.0
}

pub fn regime(params: &HopfParams) -> Regime {
    if params.sigma * params.d < 0.0 {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    }
}

/// Slopes `ω + σ√ν` and `ω − σ√ν` of the two elliptic branches at the origin.
///
/// The first belongs to the branch ending at `s = σ√ν`, the second to `s = −σ√ν`.
pub fn origin_slopes(params: &HopfParams) -> Result<(f64, f64)> {
    if params.nu <= 0.0 {
        return Err(Error::InvalidParams("origin slopes need ν > 0".into()));
    }
    let r = params.sigma * params.nu.sqrt();
    Ok((params.omega + r, params.omega - r))
}

/// Hessian at the origin of the quadratic part
/// `(ω + σνa)Γ₁ + σΓ₂ + σνbΓ₃`.
pub fn quadratic_hessian(params: &HopfParams) -> Sym4 {
    let HopfParams { omega, sigma, nu, unfold_a, unfold_b, .. } = *params;
    Sym4::quadratic_family(omega + sigma * nu * unfold_a, 0.0, sigma * nu * unfold_b, sigma)
}

/// Eigenvalues of the linearisation at the origin:
/// `±√(−ν) ± iω` for `ν < 0`, `±i(√ν ± ω)` for `ν > 0`.
pub fn equilibrium_eigenvalues(params: &HopfParams) -> EigenQuadruple {
    let HopfParams { omega, sigma, nu, unfold_a, unfold_b, .. } = *params;
    let w = omega + sigma * nu * unfold_a;
    let kappa = nu * unfold_b;
    let c = Complex64::new;
    if kappa < 0.0 {
        let r = (-kappa).sqrt();
        EigenQuadruple::new([c(r, w), c(r, -w), c(-r, w), c(-r, -w)])
    } else {
        let r = kappa.sqrt();
        EigenQuadruple::new([c(0.0, r + w), c(0.0, -(r + w)), c(0.0, r - w), c(0.0, -(r - w))])
    }
}

/// Number of maximal intervals of `{z > 0 : Q(z) ≥ 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusCount {
    pub count: usize,
    /// One of the intervals extends to `+∞`.
    pub has_unbounded: bool,
}

fn bisect_root(q: &QCubic, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = q.eval(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = q.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Count the leaves over `(J, H)` in the local model.
pub fn torus_count(params: &HopfParams, j: f64, h: f64) -> Result<TorusCount> {
    let q = q_poly(j, h, params)?;
    let scale = q.scale();
    let touch_tol = 1e-14 * scale;

    // split (0, ∞) at the critical points of Q into monotone pieces
    let (a, b, c) = (3.0 * q.c3, 2.0 * q.c2, q.c1);
    let disc = b * b - 4.0 * a * c;
    let mut crit: Vec<f64> = if disc >= 0.0 {
        let sq = disc.sqrt();
        let t = -0.5 * (b + b.signum() * sq);
        let mut r = Vec::new();
        if t != 0.0 {
            r.push(c / t);
            r.push(t / a);
        } else {
            r.push(0.0);
        }
        r
    } else {
        Vec::new()
    };
    crit.retain(|z| *z > 0.0 && z.is_finite());
    crit.sort_by(f64::total_cmp);

    let cauchy = 1.0 + [q.c2, q.c1, q.c0].iter().map(|ci| (ci / q.c3).abs()).fold(0.0, f64::max);
    let mut breaks = vec![0.0];
    breaks.extend(crit.iter().copied());
    breaks.push(cauchy.max(crit.last().copied().unwrap_or(0.0)) * 2.0 + 1.0);

    let mut zeros: Vec<f64> = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (q.eval(lo), q.eval(hi));
        if flo != 0.0 && fhi != 0.0 && (flo < 0.0) != (fhi < 0.0) {
            zeros.push(bisect_root(&q, lo, hi));
        } else if fhi == 0.0 && hi > 0.0 {
            zeros.push(hi);
        }
    }
    for &zc in &crit {
        if q.eval(zc).abs() <= touch_tol && !zeros.iter().any(|r| (r - zc).abs() <= 1e-12 * (1.0 + zc)) {
            zeros.push(zc);
        }
    }
    zeros.sort_by(f64::total_cmp);
    zeros.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (1.0 + x.abs()));

    // alternate gaps and zeros: gap₀ z₁ gap₁ … z_k gap_k
    let mut nonneg = Vec::with_capacity(2 * zeros.len() + 1);
    let mut left = 0.0;
    for &r in &zeros {
        nonneg.push(q.eval(0.5 * (left + r)) > 0.0);
        nonneg.push(true);
        left = r;
    }
    let last_gap_positive = q.c3 > 0.0;
    nonneg.push(last_gap_positive);

    let mut count = 0;
    let mut inside = false;
    for &flag in &nonneg {
        if flag && !inside {
            count += 1;
        }
        inside = flag;
    }
    Ok(TorusCount { count, has_unbounded: last_gap_positive })
}

/// Parameters linking the Hopf normal form to the deformed quadratic part
/// `ω̃J₁ + α̃J₂ + γK₁ + δK₂`, with `α̃² = γ̂δ` and `σ = sign δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliassonParams {
    omega_t: f64,
    alpha_t: f64,
    gamma_hat: f64,
    delta: f64,
}

impl EliassonParams {
    pub fn new(omega_t: f64, alpha_t: f64, delta: f64) -> Result<Self> {
        if ![omega_t, alpha_t, delta].iter().all(|v| v.is_finite() && *v != 0.0) {
            return Err(Error::InvalidParams("ω̃, α̃ and δ must be finite and nonzero".into()));
        }
        Ok(Self { omega_t, alpha_t, gamma_hat: alpha_t * alpha_t / delta, delta })
    }

    pub fn omega_t(&self) -> f64 {
        self.omega_t
    }
    pub fn alpha_t(&self) -> f64 {
        self.alpha_t
    }
    pub fn gamma_hat(&self) -> f64 {
        self.gamma_hat
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn sigma(&self) -> f64 {
        self.delta.signum()
    }
}

/// Linear symplectic map `p = T p̂` taking the hatted normal-form coordinates to
/// the deformed coordinates.
#[allow(non_snake_case)]
pub fn transformation_T(e: &EliassonParams) -> Mat4 {
    let s = e.delta.abs().sqrt();
    let c = -e.gamma_hat.abs().sqrt() * (e.delta * e.alpha_t).signum();
    [
        [s, 0.0, 0.0, 0.0],
        [0.0, s, 0.0, 0.0],
        [c, 0.0, 1.0 / s, 0.0],
        [0.0, c, 0.0, 1.0 / s],
    ]
}

/// `J₁ = xη − yξ`, `J₂ = xξ + yη`, `K₁ = (x²+y²)/2`, `K₂ = (ξ²+η²)/2`.
pub fn eliasson_invariants(p: &[f64; 4]) -> (f64, f64, f64, f64) {
    let [x, y, xi, eta] = *p;
    (
        x * eta - y * xi,
        x * xi + y * eta,
        0.5 * (x * x + y * y),
        0.5 * (xi * xi + eta * eta),
    )
}

/// The deformed Hamiltonian obtained by pushing the specialised normal form
/// `ω̃Γ₁ + σ(Γ₂ + νΓ₃) + 2DΓ₃²` through [`transformation_T`]:
///
/// `H̃ = ω̃J₁ + α̃J₂ + (γ̂ + ν/δ)K₁ + δK₂ + 2D(K₁/δ)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HTilde {
    pub omega_t: f64,
    pub alpha_t: f64,
    /// `γ̂ + ν/δ`.
    pub gamma: f64,
    pub delta: f64,
    pub gamma_hat: f64,
    pub nu: f64,
    pub d: f64,
}

impl HTilde {
    pub fn quadratic_coeffs(&self) -> QuarticCoeffs {
        quartic_coeffs(self.omega_t, self.alpha_t, self.gamma, self.delta)
    }

    pub fn quadratic_hessian(&self) -> Sym4 {
        Sym4::quadratic_family(self.omega_t, self.alpha_t, self.gamma, self.delta)
    }

    pub fn value(&self, p: &[f64; 4]) -> f64 {
        let (j1, j2, k1, k2) = eliasson_invariants(p);
        let g3 = k1 / self.delta;
        self.omega_t * j1 + self.alpha_t * j2 + self.gamma * k1 + self.delta * k2
            + 2.0 * self.d * g3 * g3
    }

    pub fn gradient(&self, p: &[f64; 4]) -> [f64; 4] {
        let [x, y, xi, eta] = *p;
        let k1 = 0.5 * (x * x + y * y);
        let quartic = 4.0 * self.d * k1 / (self.delta * self.delta);
        let g = self.gamma + quartic;
        [
            self.omega_t * eta + self.alpha_t * xi + g * x,
            -self.omega_t * xi + self.alpha_t * eta + g * y,
            -self.omega_t * y + self.alpha_t * x + self.delta * xi,
            self.omega_t * x + self.alpha_t * y + self.delta * eta,
        ]
    }

    /// The specialised normal form these coefficients came from.
    pub fn hopf_params(&self) -> Result<HopfParams> {
        HopfParams::new(self.omega_t, self.delta.signum(), self.nu, self.d)
    }
}

/// Build `H̃` with quadratic parameters `(ω̃, α̃, γ̂ + ν/δ, δ)`.
pub fn build_htilde(e: &EliassonParams, nu: f64, d: f64) -> Result<HTilde> {
    if !nu.is_finite() || !d.is_finite() || d == 0.0 {
        return Err(Error::InvalidParams("ν must be finite and D nonzero".into()));
    }
    Ok(HTilde {
        omega_t: e.omega_t,
        alpha_t: e.alpha_t,
        gamma: e.gamma_hat + nu / e.delta,
        delta: e.delta,
        gamma_hat: e.gamma_hat,
        nu,
        d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{cubic_roots, double_root_find, eig4, fd_hessian_steps};
    use crate::symplin::{classify, hamiltonian_matrix, mat_mul, transpose, BoundaryKind, Canonical4, EquilibriumType};

    fn fig() -> HopfParams {
        HopfParams::new(1.0, 1.0, 0.5, -2.0).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(HopfParams::new(0.0, 1.0, 0.5, -2.0).is_err());
        assert!(HopfParams::new(1.0, 0.5, 0.5, -2.0).is_err());
        assert!(HopfParams::new(1.0, 1.0, 0.5, 0.0).is_err());
        assert!(fig().with_unfolding(0.0, 0.0).is_err());
        assert!(fig().is_specialized());
        assert!(!fig().with_higher_order(0.1, 0.0).unwrap().is_specialized());
    }

    #[test]
    fn params_json_uses_field_names() {
        let s = serde_json::to_string(&fig()).unwrap();
        assert_eq!(
            s,
            r#"{"omega":1.0,"sigma":1.0,"nu":0.5,"D":-2.0,"unfold_a":0.0,"unfold_b":1.0,"coeff_B":0.0,"coeff_C":0.0}"#
        );
        let back: HopfParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fig());
        assert!(serde_json::from_str::<HopfParams>(r#"{"omega":1,"sigma":2,"nu":0,"D":1}"#).is_err());
    }

    #[test]
    fn gammas_examples() {
        assert_eq!(gammas(&[0.0; 4]), (0.0, 0.0, 0.0));
        assert_eq!(gammas(&[1.0, 0.0, 0.0, 1.0]), (1.0, 0.5, 0.5));
    }

    #[test]
    fn polar_identity_for_gamma2() {
        // Γ₂ = z p_z² + p_θ²/(4z) with z = Γ₃, 2 z p_z = xξ + yη, p_θ = Γ₁
        let pts = [[0.3, -1.1, 0.7, 0.2], [2.0, 0.5, -0.4, 1.5], [-0.2, 0.9, 1.3, -0.8]];
        for p in pts {
            let (g1, g2, g3) = gammas(&p);
            let pz = (p[0] * p[2] + p[1] * p[3]) / (2.0 * g3);
            assert!((g2 - (g3 * pz * pz + g1 * g1 / (4.0 * g3))).abs() < 1e-13);
            let rp = ReducedPoint::new(g3, pz, g1).unwrap();
            let general = fig().with_unfolding(0.3, -0.7).unwrap().with_higher_order(0.2, 0.4).unwrap();
            let h = reduced_hamiltonian(&rp, &general).unwrap();
            assert!((h - hopf_normal_form(&general, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_hamiltonian_examples() {
        let p = HopfParams::new(1.0, 1.0, 0.5, -2.0).unwrap();
        let v = reduced_hamiltonian(&ReducedPoint::new(1.0, 0.0, 0.0).unwrap(), &p).unwrap();
        assert_eq!(v, -3.5);
        let p0 = HopfParams::new(1.0, 1.0, 0.0, -2.0).unwrap();
        for z in [0.1, 0.7, 3.0] {
            let v = reduced_hamiltonian(&ReducedPoint::new(z, 0.0, 0.0).unwrap(), &p0).unwrap();
            assert!((v - (-4.0 * z * z)).abs() < 1e-15);
        }
        assert!(reduced_hamiltonian(&ReducedPoint::new(0.0, 0.0, 1.0).unwrap(), &p).is_err());
        assert!(ReducedPoint::new(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn q_poly_examples() {
        let p = fig();
        let q = q_poly(0.0, 0.0, &p).unwrap();
        assert_eq!((q.c3, q.c2, q.c1, q.c0), (16.0, -2.0, 0.0, 0.0));
        // third root −ν/(2σD)
        assert_eq!(q.eval(-0.5 / (2.0 * -2.0)), 0.0);

        let q = q_poly(0.0, 1.0 / 128.0, &p).unwrap();
        assert_eq!((q.c3, q.c2, q.c1, q.c0), (16.0, -2.0, 1.0 / 32.0, 0.0));
        let mut pos: Vec<f64> = cubic_roots(&q.to_poly())
            .unwrap()
            .iter()
            .filter(|z| z.im.abs() < 1e-12 && z.re > 1e-12)
            .map(|z| z.re)
            .collect();
        pos.sort_by(f64::total_cmp);
        assert_eq!(pos.len(), 2);
        assert!((pos[0] - 0.0183058).abs() < 1e-7 && (pos[1] - 0.1066942).abs() < 1e-7);

        let special = p.with_higher_order(0.0, 1.0).unwrap();
        assert!(q_poly(0.0, 0.0, &special).is_err());
    }

    #[test]
    fn double_root_at_cusp_parameter() {
        let p = fig();
        let s = (1.0_f64 / 6.0).sqrt();
        let c = critical_curve_point(&p, s);
        assert!((c.d - 1.0 / 24.0).abs() < 1e-15);
        let q = q_poly(c.j, c.h, &p).unwrap();
        let z = double_root_find(&q.to_poly(), (0.0, 0.2)).unwrap();
        assert!((z - c.d).abs() < 1e-4);
        assert!((c.j - 0.034021).abs() < 1e-6 && (c.h - 0.054854).abs() < 1e-6);
        assert_eq!(c.kind, SegmentKind::Cusp);
    }

    #[test]
    fn curve_examples() {
        let p = fig();
        let end = critical_curve_point(&p, 0.5_f64.sqrt());
        assert_eq!((end.j, end.h, end.d), (0.0, 0.0, 0.0));
        assert_eq!(end.kind, SegmentKind::EquilibriumEndpoint);
        let mid = critical_curve_point(&p, 0.0);
        assert_eq!((mid.j, mid.h), (0.0, 1.0 / 64.0));
        assert_eq!(mid.kind, SegmentKind::TransversallyHyperbolic);
        assert_eq!(mid.det2, -1.0);
        let e = critical_curve_point(&p, 0.6);
        assert_eq!(e.kind, SegmentKind::TransversallyElliptic);
        assert!((e.det2 - 1.16).abs() < 1e-14);
    }

    #[test]
    fn tangent_examples() {
        let p = fig();
        assert_eq!(curve_tangent(&p, 0.0), (0.125, 0.125));
        let (dj, dh) = curve_tangent(&p, 0.6);
        assert!((dj + 0.145).abs() < 1e-15 && (dh + 0.232).abs() < 1e-15);
        for c in cusps(&p) {
            let (dj, dh) = curve_tangent(&p, c);
            assert!(dj.abs() < 1e-12 && dh.abs() < 1e-12);
        }
        // central differences of the curve
        for s in [-0.6, -0.2, 0.1, 0.55] {
            let h = 1e-5;
            let (a, b) = (critical_curve_point(&p, s + h), critical_curve_point(&p, s - h));
            let (dj, dh) = curve_tangent(&p, s);
            assert!(((a.j - b.j) / (2.0 * h) - dj).abs() < 1e-6);
            assert!(((a.h - b.h) / (2.0 * h) - dh).abs() < 1e-6);
        }
    }

    #[test]
    fn cusp_lists() {
        let c = cusps(&fig());
        assert_eq!(c.len(), 2);
        assert!((c[1] - 0.4082483).abs() < 1e-7 && c[0] == -c[1]);
        assert!(cusps(&HopfParams::new(1.0, 1.0, 0.0, -2.0).unwrap()).is_empty());
        assert!(cusps(&HopfParams::new(1.0, 1.0, -0.25, -2.0).unwrap()).is_empty());
    }

    #[test]
    fn hessian_determinant_matches_closed_form() {
        let p = fig();
        for s in [0.0, 0.6, -0.3, 0.65] {
            let c = critical_curve_point(&p, s);
            let f = |v: &[f64]| {
                ReducedPoint::new(v[0], v[1], c.j).ok().and_then(|rp| reduced_hamiltonian(&rp, &p).ok())
            };
            let hess = fd_hessian_steps(f, &[c.d, 0.0], &[3e-3 * c.d, 1e-2]).unwrap();
            let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
            assert!((det - c.det2).abs() < 1e-7, "s={s} det={det} want {}", c.det2);
        }
    }

    #[test]
    fn admissibility_examples() {
        let sub = fig();
        assert!(admissible(&sub, 0.3));
        let sup = HopfParams::new(1.0, 1.0, 0.5, 1.0).unwrap();
        assert!(!admissible(&sup, 0.3));
        let r = 0.5_f64.sqrt();
        for p in [sub, sup] {
            assert!(admissible(&p, r) && admissible(&p, -r));
        }
    }

    #[test]
    fn regimes() {
        assert_eq!(regime(&fig()), Regime::Subcritical);
        assert_eq!(regime(&HopfParams::new(1.0, 1.0, 0.5, 1.0).unwrap()), Regime::Supercritical);
        assert_eq!(regime(&HopfParams::new(1.0, -1.0, 0.5, 1.0).unwrap()), Regime::Subcritical);
    }

    #[test]
    fn slopes() {
        let p = HopfParams::new(1.0, 1.0, 0.25, -2.0).unwrap();
        assert_eq!(origin_slopes(&p).unwrap(), (1.5, 0.5));
        let p = HopfParams::new(-1.0, 1.0, 1.0, -2.0).unwrap();
        assert_eq!(origin_slopes(&p).unwrap(), (0.0, -2.0));
        assert!(origin_slopes(&HopfParams::new(1.0, 1.0, 0.0, -2.0).unwrap()).is_err());
        let tiny = HopfParams::new(1.0, 1.0, 1e-14, -2.0).unwrap();
        let (a, b) = origin_slopes(&tiny).unwrap();
        assert!((a - 1.0).abs() < 1e-6 && (b - 1.0).abs() < 1e-6);
    }

    #[test]
    fn equilibrium_eigenvalues_match_oracle() {
        for nu in [-0.25, 0.25, -1.3, 0.8] {
            let p = HopfParams::new(1.0, 1.0, nu, -2.0).unwrap();
            let m = hamiltonian_matrix(&quadratic_hessian(&p));
            let got = eig4(&m);
            assert!(got.distance(&equilibrium_eigenvalues(&p)) < 1e-10, "nu={nu}");
        }
        let c = Complex64::new;
        let p = HopfParams::new(1.0, 1.0, -0.25, -2.0).unwrap();
        let want = EigenQuadruple::new([c(0.5, 1.0), c(0.5, -1.0), c(-0.5, 1.0), c(-0.5, -1.0)]);
        assert!(equilibrium_eigenvalues(&p).distance(&want) < 1e-15);
        let p = HopfParams::new(1.0, -1.0, 0.25, 1.0).unwrap();
        let want = EigenQuadruple::new([c(0.0, 1.5), c(0.0, -1.5), c(0.0, 0.5), c(0.0, -0.5)]);
        assert!(equilibrium_eigenvalues(&p).distance(&want) < 1e-15);
        assert!(eig4(&hamiltonian_matrix(&quadratic_hessian(&p))).distance(&want) < 1e-10);
    }

    #[test]
    fn torus_count_examples() {
        let p = fig();
        assert_eq!(torus_count(&p, 0.0, 1.0 / 128.0).unwrap(), TorusCount { count: 2, has_unbounded: true });
        assert_eq!(torus_count(&p, 0.0, -0.1).unwrap(), TorusCount { count: 1, has_unbounded: true });
        // σD > 0: Q → −∞, and with H very negative Q < 0 on all of z > 0
        let sup = HopfParams::new(1.0, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(torus_count(&sup, 0.0, -1.0).unwrap(), TorusCount { count: 0, has_unbounded: false });
        assert_eq!(torus_count(&sup, 0.3, 1.0).unwrap(), TorusCount { count: 1, has_unbounded: false });
    }

    #[test]
    fn t_examples_and_symplecticity() {
        let e = EliassonParams::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(e.gamma_hat(), 1.0);
        assert_eq!(
            transformation_T(&e),
            [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 1.0, 0.0], [0.0, -1.0, 0.0, 1.0]]
        );
        let e = EliassonParams::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(e.gamma_hat(), 4.0);
        assert_eq!(transformation_T(&e)[2][0], -2.0);
        assert_eq!(transformation_T(&e)[3][1], -2.0);

        for (w, a, d) in [(1.0, 1.0, 1.0), (0.5, -2.0, 3.0), (-1.2, 0.7, -0.4)] {
            let t = transformation_T(&EliassonParams::new(w, a, d).unwrap());
            let tbt = mat_mul(&transpose(&t), &mat_mul(&Canonical4::B, &t));
            for i in 0..4 {
                for j in 0..4 {
                    assert!((tbt[i][j] - Canonical4::B[i][j]).abs() < 1e-12);
                }
            }
        }
        assert!(EliassonParams::new(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn htilde_pulls_back_to_the_normal_form() {
        use crate::symplin::mat_vec;
        let e = EliassonParams::new(0.8, -1.3, -0.6).unwrap();
        let ht = build_htilde(&e, 0.2, 1.7).unwrap();
        let t = transformation_T(&e);
        let hp = ht.hopf_params().unwrap();
        for p in [[0.1, 0.4, -0.3, 0.9], [1.2, -0.7, 0.5, 0.05]] {
            let v = ht.value(&mat_vec(&t, &p));
            assert!((v - hopf_normal_form(&hp, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn htilde_classification() {
        let e = EliassonParams::new(1.0, 1.0, 1.0).unwrap();
        let at = |nu| classify(build_htilde(&e, nu, -2.0).unwrap().quadratic_coeffs());
        assert_eq!(at(0.0), EquilibriumType::Boundary(BoundaryKind::ParabolaPlus));
        assert_eq!(at(0.1), EquilibriumType::EllipticElliptic);
        assert_eq!(at(-0.1), EquilibriumType::FocusFocus);
        let q = build_htilde(&e, 0.0, 3.0).unwrap().quadratic_coeffs();
        assert_eq!((q.a, q.b), (1.0, 2.0));
        assert!(build_htilde(&e, 0.1, 0.0).is_err());
    }

    #[test]
    fn gamma_conjugation_identities() {
        use crate::symplin::mat_vec;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (w, a, d) in [(1.0, 1.0, 1.0), (1.0, 2.0, 1.0), (-0.7, 1.4, -2.5)] {
            let e = EliassonParams::new(w, a, d).unwrap();
            let t = transformation_T(&e);
            for _ in 0..100 {
                let p: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                let (g1, g2, g3) = gammas(&p);
                let (j1, j2, k1, k2) = eliasson_invariants(&mat_vec(&t, &p));
                let s = e.sigma();
                assert!((g1 - j1).abs() < 1e-12);
                assert!((g2 - s * (a * j2 + e.gamma_hat() * k1 + d * k2)).abs() < 1e-12);
                assert!((g3 - s * k1 / d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn htilde_commutes_with_j1() {
        use crate::symplin::mat_vec;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let e = EliassonParams::new(1.0, 1.0, 1.0).unwrap();
        let ht = build_htilde(&e, 0.1, -2.0).unwrap();
        for _ in 0..50 {
            let p: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let [x, y, xi, eta] = p;
            let gj = [eta, -xi, -y, x];
            let gh = ht.gradient(&p);
            // {J1, H} = ∇J1 · B ∇H
            let bgh = mat_vec(&Canonical4::B, &gh);
            let br: f64 = (0..4).map(|i| gj[i] * bgh[i]).sum();
            assert!(br.abs() < 1e-12);
            let f = |v: &[f64]| Some(ht.value(&[v[0], v[1], v[2], v[3]]));
            let g = crate::oracle::fd_gradient_default(f, &p).unwrap();
            for i in 0..4 {
                assert!((g[i] - gh[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn reduced_value_on_curve_is_h_c() {
        let p = fig();
        let r = 0.5_f64.sqrt();
        for i in 1..400 {
            let s = -r + 2.0 * r * i as f64 / 400.0;
            let c = critical_curve_point(&p, s);
            if c.d <= 0.0 {
                continue;
            }
            let v = reduced_hamiltonian(&ReducedPoint::new(c.d, 0.0, c.j).unwrap(), &p).unwrap();
            assert!((v - c.h).abs() < 1e-13, "s={s}");
        }
    }

    #[test]
    fn double_root_identity_on_grid() {
        for p in [fig(), HopfParams::new(1.0, 1.0, 0.5, 1.0).unwrap(), HopfParams::new(-1.0, -1.0, 1.0, 0.7).unwrap()] {
            let r = p.nu().sqrt();
            for i in 0..=400 {
                let s = -r + 2.0 * r * i as f64 / 400.0;
                if !admissible(&p, s) {
                    continue;
                }
                let c = critical_curve_point(&p, s);
                let q = q_poly(c.j, c.h, &p).unwrap();
                let sc = q.scale();
                assert!(q.eval(c.d).abs() / sc < 1e-10 && q.derivative(c.d).abs() / sc < 1e-10);
            }
        }
    }

    #[test]
    fn segments_are_graphs_over_j() {
        let p = fig();
        let r = p.nu().sqrt();
        let c = (p.nu() / 3.0).sqrt();
        for (lo, hi) in [(-r, -c), (-c, c), (c, r)] {
            let js: Vec<f64> = (0..=200)
                .map(|i| critical_curve_point(&p, lo + (hi - lo) * i as f64 / 200.0).j)
                .collect();
            let inc = js[1] > js[0];
            assert!(js.windows(2).all(|w| (w[1] > w[0]) == inc));
        }
    }

    #[test]
    fn eigenvalues_collide_at_zero_nu() {
        let c = Complex64::new;
        let want = EigenQuadruple::new([c(0.0, 1.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, -1.0)]);
        let at = |nu| equilibrium_eigenvalues(&HopfParams::new(1.0, 1.0, nu, -2.0).unwrap());
        assert_eq!(at(0.0).distance(&want), 0.0);
        let mut last = f64::INFINITY;
        for nu in [1e-2, 1e-4, 1e-6, 1e-8] {
            let d = at(nu).distance(&want).max(at(-nu).distance(&want));
            assert!(d < last);
            last = d;
        }
        assert!(last < 1e-3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn q_matches_reduced_momentum(
                z in 1e-3f64..5.0, pz in -3.0f64..3.0, j in -2.0f64..2.0,
                omega in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0],
                sigma in prop_oneof![Just(-1.0), Just(1.0)],
                nu in -1.0f64..1.0,
                d in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0],
            ) {
                let p = HopfParams::new(omega, sigma, nu, d).unwrap();
                let h = reduced_hamiltonian(&ReducedPoint::new(z, pz, j).unwrap(), &p).unwrap();
                let q = q_poly(j, h, &p).unwrap();
                let want = 4.0 * z * z * pz * pz;
                let scale = 1.0 + want.abs() + q.scale() * (1.0 + z * z * z);
                prop_assert!((q.eval(z) - want).abs() <= 1e-12 * scale);
            }

            #[test]
            fn tangent_vanishes_only_at_cusps(
                s in -2.0f64..2.0, nu in 0.01f64..1.0,
                d in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0],
            ) {
                let p = HopfParams::new(1.0, 1.0, nu, d).unwrap();
                let (dj, _) = curve_tangent(&p, s);
                let near_cusp = cusps(&p).iter().any(|c| (s - c).abs() < 1e-6);
                prop_assert!(dj.abs() > 1e-12 || near_cusp);
            }
        }
    }
}
