//! The deformed Jaynes–Cummings (coupled spin–oscillator) system on S² × ℝ².
//!
//! ```text
//! J = (u² + v²)/2 + z,   H = (xu + yv)/2,   H̃ = H + γz²
//! ```
//!
//! The sphere carries the Lie–Poisson bracket `{x, y} = −z` (and cyclic), the
//! plane the canonical `{u, v} = 1`. With this sign the linearisation at the north
//! pole has characteristic polynomial `λ⁴ + (4γ² − 1/2)λ² + 1/16`; the opposite
//! sign flips the `λ²` coefficient.
//!
//! Reduction by the S¹ action of `J` uses the invariants `w₁ = xu + yv`,
//! `w₂ = xv − yu` and `z`, subject to `w₁² + w₂² = 2(J − z)(1 − z²)`. Since
//! `H̃ = w₁/2 + γz²` does not see `w₂`, its critical points on the reduced
//! surface lie on the two branches `h±(z) = ±R(z)/2 + γz²` with
//! `R = √(2(J − z)(1 − z²))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{
    CUSP_SECOND_DERIVATIVE_TOL, FD_BRACKET_STEP, RANK_TOL, REDUCED_BISECTION_TOL, REDUCED_GRID_CELLS,
};
use crate::error::{Error, Result};
use crate::oracle::char_poly4;
use crate::spectrum::SpectrumCloud;
use crate::symplin::{classify, EquilibriumType, Mat4, QuarticCoeffs, Sym4};

/// A point `(x, y, z; u, v)` with `(x, y, z)` on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JCState {
    x: f64,
    y: f64,
    z: f64,
    u: f64,
    v: f64,
}

impl JCState {
    /// Normalises the sphere part; rejects non-finite input and the zero vector.
    pub fn new(x: f64, y: f64, z: f64, u: f64, v: f64) -> Result<Self> {
        if ![x, y, z, u, v].iter().all(|c| c.is_finite()) {
            return Err(Error::Domain("state coordinates must be finite".into()));
        }
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 {
            return Err(Error::Domain("sphere part must be nonzero".into()));
        }
        Ok(Self { x: x / n, y: y / n, z: z / n, u, v })
    }

    pub fn north_pole() -> Self {
        Self { x: 0.0, y: 0.0, z: 1.0, u: 0.0, v: 0.0 }
    }

    pub fn south_pole() -> Self {
        Self { x: 0.0, y: 0.0, z: -1.0, u: 0.0, v: 0.0 }
    }

    /// Point with sphere height `z` and azimuth `phi`; avoids renormalisation.
    pub fn from_height(z: f64, phi: f64, u: f64, v: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&z) {
            return Err(Error::Domain(format!("height {z} is off the sphere")));
        }
        let rho = (1.0 - z * z).sqrt();
        Self::new(rho * phi.cos(), rho * phi.sin(), z, u, v)
    }

    pub fn coords(&self) -> [f64; 5] {
        [self.x, self.y, self.z, self.u, self.v]
    }
}

/// `G(z) = γz²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyG {
    gamma: f64,
}

impl PolyG {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidParams("γ must be finite".into()));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn value(&self, z: f64) -> f64 {
        self.gamma * z * z
    }

    pub fn derivative(&self, z: f64) -> f64 {
        2.0 * self.gamma * z
    }
}

/// A smooth function on the ambient ℝ⁵ ⊃ S² × ℝ².
///
/// The bracket only sees tangential derivatives, so any smooth extension off
/// the sphere gives the same result.
pub trait PhaseFunction {
    fn eval(&self, p: &[f64; 5]) -> f64;

    fn gradient(&self, p: &[f64; 5]) -> [f64; 5] {
        let h = FD_BRACKET_STEP;
        std::array::from_fn(|i| {
            let (mut a, mut b) = (*p, *p);
            a[i] += h;
            b[i] -= h;
            (self.eval(&a) - self.eval(&b)) / (2.0 * h)
        })
    }
}

/// Wraps a closure; the gradient falls back to central differences.
pub struct FnPhase<F>(pub F);

impl<F: Fn(&[f64; 5]) -> f64> PhaseFunction for FnPhase<F> {
    fn eval(&self, p: &[f64; 5]) -> f64 {
        (self.0)(p)
    }
}

pub struct MomentumJ;

impl PhaseFunction for MomentumJ {
    fn eval(&self, p: &[f64; 5]) -> f64 {
        0.5 * (p[3] * p[3] + p[4] * p[4]) + p[2]
    }
    fn gradient(&self, p: &[f64; 5]) -> [f64; 5] {
        [0.0, 0.0, 1.0, p[3], p[4]]
    }
}

pub struct EnergyH;

impl PhaseFunction for EnergyH {
    fn eval(&self, p: &[f64; 5]) -> f64 {
        0.5 * (p[0] * p[3] + p[1] * p[4])
    }
    fn gradient(&self, p: &[f64; 5]) -> [f64; 5] {
        [0.5 * p[3], 0.5 * p[4], 0.0, 0.5 * p[0], 0.5 * p[1]]
    }
}

pub struct DeformedH(pub PolyG);

impl PhaseFunction for DeformedH {
    fn eval(&self, p: &[f64; 5]) -> f64 {
        EnergyH.eval(p) + self.0.value(p[2])
    }
    fn gradient(&self, p: &[f64; 5]) -> [f64; 5] {
        let mut g = EnergyH.gradient(p);
        g[2] = self.0.derivative(p[2]);
        g
    }
}

pub fn jc_j(s: &JCState) -> f64 {
    MomentumJ.eval(&s.coords())
}

pub fn jc_h(s: &JCState) -> f64 {
    EnergyH.eval(&s.coords())
}

pub fn jc_htilde(s: &JCState, g: &PolyG) -> f64 {
    DeformedH(*g).eval(&s.coords())
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn bracket_of_gradients(r: &[f64; 5], df: &[f64; 5], dg: &[f64; 5]) -> f64 {
    // {x_i, x_j} = −ε_ijk x_k gives {f, g} = −r · (∇f × ∇g) on the sphere
    let c = cross(&[df[0], df[1], df[2]], &[dg[0], dg[1], dg[2]]);
    -(r[0] * c[0] + r[1] * c[1] + r[2] * c[2]) + df[3] * dg[4] - df[4] * dg[3]
}

pub fn poisson_bracket(f: &dyn PhaseFunction, g: &dyn PhaseFunction, s: &JCState) -> f64 {
    let p = s.coords();
    bracket_of_gradients(&p, &f.gradient(&p), &g.gradient(&p))
}

/// `X_f`, with `ẇ = {w, f}` for each ambient coordinate.
pub fn hamiltonian_vector_field(f: &dyn PhaseFunction, p: &[f64; 5]) -> [f64; 5] {
    let df = f.gradient(p);
    let sph = cross(&[p[0], p[1], p[2]], &[df[0], df[1], df[2]]);
    [sph[0], sph[1], sph[2], df[4], -df[3]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JcLinearization {
    pub coeffs: QuarticCoeffs,
    pub kind: EquilibriumType,
}

/// Linearisation at the north pole for a deformation with the given `G′(1)`:
/// `(a, b) = (1/16, (2G′(1)² − 1)/2)`.
pub fn jc_linearization(g_prime_at_one: f64) -> JcLinearization {
    let coeffs = QuarticCoeffs { a: 1.0 / 16.0, b: (2.0 * g_prime_at_one * g_prime_at_one - 1.0) / 2.0 };
    JcLinearization { coeffs, kind: classify(coeffs) }
}

pub fn jc_linearization_poly(g: &PolyG) -> JcLinearization {
    jc_linearization(g.derivative(1.0))
}

/// Jacobian of `X_H̃` at the north pole in the tangent chart `(x, y, u, v)`,
/// `z = √(1 − x² − y²)`, by fourth-order central differences.
pub fn jc_numeric_jacobian(g: &PolyG) -> Mat4 {
    let h = 1e-3;
    let f = DeformedH(*g);
    let field = |t: [f64; 4]| {
        let z = (1.0 - t[0] * t[0] - t[1] * t[1]).sqrt();
        let x = hamiltonian_vector_field(&f, &[t[0], t[1], z, t[2], t[3]]);
        [x[0], x[1], x[3], x[4]]
    };
    let mut m = [[0.0; 4]; 4];
    for j in 0..4 {
        let at = |k: f64| {
            let mut t = [0.0; 4];
            t[j] = k * h;
            field(t)
        };
        let (p1, m1, p2, m2) = (at(1.0), at(-1.0), at(2.0), at(-2.0));
        for i in 0..4 {
            m[i][j] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
        }
    }
    m
}

/// `(a, b)` read off the characteristic polynomial of [`jc_numeric_jacobian`].
pub fn jc_linearization_numeric(g: &PolyG) -> QuarticCoeffs {
    let c = char_poly4(&jc_numeric_jacobian(g));
    let c = c.coeffs();
    QuarticCoeffs { a: c[0], b: c[2] }
}

/// Hessians of `J` and `H̃` at the north pole in the Darboux chart
/// `(x̂, ŷ, ξ̂, η̂) = (y, u, x, v)`, exact to first order at the pole.
pub fn jc_canonical_hessians(g: &PolyG) -> (Sym4, Sym4) {
    let hj = Sym4::new([
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .expect("symmetric");
    let c = -2.0 * g.gamma;
    let hh = Sym4::new([
        [c, 0.0, 0.0, 0.5],
        [0.0, 0.0, 0.5, 0.0],
        [0.0, 0.5, c, 0.0],
        [0.5, 0.0, 0.0, 0.0],
    ])
    .expect("symmetric");
    (hj, hh)
}

/// `[−1, min(J, 1)]`, or `None` for `J < −1`.
pub fn reduced_domain(j: f64) -> Option<(f64, f64)> {
    (j >= -1.0).then(|| (-1.0, j.min(1.0)))
}

/// Invariants `(w₁, w₂, z)` of the S¹ action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSurface {
    pub w1: f64,
    pub w2: f64,
    pub z: f64,
}

impl ReducedSurface {
    pub fn of(s: &JCState) -> Self {
        let [x, y, z, u, v] = s.coords();
        Self { w1: x * u + y * v, w2: x * v - y * u, z }
    }

    /// `w₁² + w₂² − 2(J − z)(1 − z²)`.
    pub fn residual(&self, j: f64) -> f64 {
        self.w1 * self.w1 + self.w2 * self.w2 - 2.0 * (j - self.z) * (1.0 - self.z * self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "plus")]
    Plus,
    #[serde(rename = "minus")]
    Minus,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriticalKind {
    #[serde(rename = "E")]
    TransversallyElliptic,
    #[serde(rename = "H")]
    TransversallyHyperbolic,
    #[serde(rename = "CUSP")]
    Cusp,
    #[serde(rename = "EQ")]
    EquilibriumValue,
}

/// A critical value of `(J, H̃)` found on the reduced surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValuePoint {
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "z")]
    pub z_at: f64,
    pub branch: Branch,
    pub kind: CriticalKind,
}

/// `P(z) = 2(J − z)(1 − z²)` and its first two derivatives.
fn reduced_p(j: f64, z: f64) -> (f64, f64, f64) {
    (
        2.0 * (j - z) * (1.0 - z * z),
        2.0 * (3.0 * z * z - 2.0 * j * z - 1.0),
        4.0 * (3.0 * z - j),
    )
}

/// `h(z) = ±√P/2 + γz²` on a branch.
pub fn reduced_branch(g: &PolyG, j: f64, branch: Branch, z: f64) -> f64 {
    branch.sign() * 0.5 * reduced_p(j, z).0.max(0.0).sqrt() + g.value(z)
}

/// `(h′, h″)` on a branch, for `P(z) > 0`.
pub fn reduced_branch_derivatives(g: &PolyG, j: f64, branch: Branch, z: f64) -> (f64, f64) {
    let (p, p1, p2) = reduced_p(j, z);
    let r = p.sqrt();
    let r1 = p1 / (2.0 * r);
    let r2 = (2.0 * p * p2 - p1 * p1) / (4.0 * p * r);
    let s = branch.sign();
    (0.5 * s * r1 + 2.0 * g.gamma * z, 0.5 * s * r2 + 2.0 * g.gamma)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > REDUCED_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
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

fn classify_critical(branch: Branch, h2: f64) -> CriticalKind {
    if h2.abs() < CUSP_SECOND_DERIVATIVE_TOL {
        CriticalKind::Cusp
    } else if (h2 < 0.0) == (branch == Branch::Plus) {
        CriticalKind::TransversallyElliptic
    } else {
        CriticalKind::TransversallyHyperbolic
    }
}

/// Open scan grid on `(lo, hi)`: uniform cells, with the two end cells split
/// geometrically since critical points can crowd the endpoints where `P` vanishes.
fn reduced_scan_points(lo: f64, hi: f64) -> Vec<f64> {
    let n = REDUCED_GRID_CELLS;
    let w = (hi - lo) / n as f64;
    let mut zs: Vec<f64> = (1..=12).rev().map(|k| lo + w * 10f64.powi(-k)).collect();
    zs.extend((1..n).map(|i| lo + w * i as f64));
    zs.extend((1..=12).map(|k| hi - w * 10f64.powi(-k)));
    zs
}

/// Interior critical points of `h±` on the open reduced domain, plus the pole
/// values `(±1, γ)` when `J = ±1`. Sorted by branch, then `z`.
pub fn jc_reduced_critical_values(g: &PolyG, j: f64) -> Result<Vec<CriticalValuePoint>> {
    let (lo, hi) = reduced_domain(j).ok_or_else(|| Error::Domain(format!("J = {j} < −1 has empty fibre")))?;
    let mut out = Vec::new();
    if hi > lo {
        let zs = reduced_scan_points(lo, hi);
        for branch in [Branch::Plus, Branch::Minus] {
            let d1 = |z: f64| reduced_branch_derivatives(g, j, branch, z).0;
            let mut prev = (zs[0], d1(zs[0]));
            for &z in &zs[1..] {
                let cur = (z, d1(z));
                let root = if cur.1 == 0.0 {
                    Some(z)
                } else if prev.1 != 0.0 && (prev.1 < 0.0) != (cur.1 < 0.0) {
                    Some(bisect(d1, prev.0, z))
                } else {
                    None
                };
                if let Some(zc) = root {
                    let h2 = reduced_branch_derivatives(g, j, branch, zc).1;
                    out.push(CriticalValuePoint {
                        j,
                        h: reduced_branch(g, j, branch, zc),
                        z_at: zc,
                        branch,
                        kind: classify_critical(branch, h2),
                    });
                }
                prev = cur;
            }
        }
    }
    for pole in [-1.0, 1.0] {
        if j == pole {
            out.push(CriticalValuePoint {
                j,
                h: g.value(pole),
                z_at: pole,
                branch: Branch::Plus,
                kind: CriticalKind::EquilibriumValue,
            });
        }
    }
    Ok(out)
}

/// A state over the reduced point `(z, w₁ = ±R, w₂ = 0)` at angle `phi`.
pub fn lift(j: f64, z: f64, branch: Branch, phi: f64) -> Result<JCState> {
    if !(-1.0..=1.0).contains(&z) || z > j {
        return Err(Error::Domain(format!("z = {z} is outside the reduced domain for J = {j}")));
    }
    let a = branch.sign() * (2.0 * (j - z)).sqrt();
    JCState::from_height(z, phi, a * phi.cos(), a * phi.sin())
}

/// Whether `X_J` and `X_H̃` fail to span a plane at `s`.
pub fn jc_rank_test(s: &JCState, g: &PolyG) -> bool {
    let p = s.coords();
    let a = hamiltonian_vector_field(&MomentumJ, &p);
    let b = hamiltonian_vector_field(&DeformedH(*g), &p);
    let dot = |x: &[f64; 5], y: &[f64; 5]| (0..5).map(|i| x[i] * y[i]).sum::<f64>();
    let (aa, bb, ab) = (dot(&a, &a), dot(&b, &b), dot(&a, &b));
    // singular values² are the eigenvalues of the 2×2 Gram matrix
    let tr = aa + bb;
    let disc = ((aa - bb) * (aa - bb) + 4.0 * ab * ab).sqrt();
    let s1 = 0.5 * (tr + disc);
    let s2 = (aa * bb - ab * ab).max(0.0) / s1.max(f64::MIN_POSITIVE);
    s1 < 1e-24 || s2.sqrt() < RANK_TOL * s1.sqrt()
}

/// `n` seeded samples of `(J, H̃)`; area-uniform on the sphere, disk-uniform in
/// the plane with `u² + v²` up to `2(J_max + 1)`.
pub fn jc_spectrum_sample(g: &PolyG, n: usize, j_max: f64, seed: u64) -> Result<SpectrumCloud> {
    if !(j_max > -1.0) || !j_max.is_finite() {
        return Err(Error::InvalidParams(format!("J_max must exceed −1, got {j_max}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r2_max = 2.0 * (j_max + 1.0);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r2: f64 = rng.gen_range(0.0..=r2_max);
        let psi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = r2.sqrt();
        let s = JCState::from_height(z, phi, r * psi.cos(), r * psi.sin())?;
        points.push((jc_j(&s), jc_htilde(&s, g)));
    }
    Ok(SpectrumCloud::new(points, Some(seed)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::golden_section_max;
    use crate::symplin::{hamiltonian_char_coeffs, hamiltonian_matrix, pencil_nondegenerate, BoundaryKind};

    fn random_states(seed: u64, n: usize) -> Vec<JCState> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let v: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                JCState::new(v[0], v[1], v[2], v[3], v[4]).unwrap()
            })
            .collect()
    }

    #[test]
    fn state_is_normalised() {
        let s = JCState::new(3.0, 0.0, 4.0, 1.0, 2.0).unwrap();
        let [x, y, z, u, v] = s.coords();
        assert!((x * x + y * y + z * z - 1.0).abs() < 1e-15);
        assert_eq!((x, z, u, v), (0.6, 0.8, 1.0, 2.0));
        assert_eq!(y, 0.0);
        assert!(JCState::new(0.0, 0.0, 0.0, 1.0, 1.0).is_err());
        assert!(JCState::new(f64::NAN, 0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn energies_at_poles() {
        let g0 = PolyG::new(0.0).unwrap();
        let n = JCState::north_pole();
        assert_eq!((jc_j(&n), jc_htilde(&n, &g0)), (1.0, 0.0));
        let s = JCState::south_pole();
        assert_eq!((jc_j(&s), jc_htilde(&s, &g0)), (-1.0, 0.0));
        let p = JCState::new(1.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        let g1 = PolyG::new(1.0).unwrap();
        assert_eq!((jc_j(&p), jc_h(&p), jc_htilde(&p, &g1)), (0.5, 0.5, 0.5));
    }

    #[test]
    fn bracket_examples() {
        let xf = FnPhase(|p: &[f64; 5]| p[0]);
        let yf = FnPhase(|p: &[f64; 5]| p[1]);
        let n = JCState::north_pole();
        assert!((poisson_bracket(&xf, &yf, &n) + 1.0).abs() < 1e-9);
        let osc = FnPhase(|p: &[f64; 5]| 0.5 * (p[3] * p[3] + p[4] * p[4]));
        for s in random_states(3, 50) {
            assert!(poisson_bracket(&MomentumJ, &osc, &s).abs() < 1e-8);
        }
    }

    #[test]
    fn j_commutes_with_deformed_h() {
        for gamma in [0.0, 0.3, 0.8, 2.0] {
            let g = PolyG::new(gamma).unwrap();
            for s in random_states(5, 1000) {
                assert!(poisson_bracket(&MomentumJ, &DeformedH(g), &s).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn analytic_gradients_match_fallback() {
        let g = DeformedH(PolyG::new(0.7).unwrap());
        let fall = FnPhase(|p: &[f64; 5]| g.eval(p));
        for s in random_states(9, 20) {
            let (a, b) = (g.gradient(&s.coords()), fall.gradient(&s.coords()));
            for i in 0..5 {
                assert!((a[i] - b[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn linearization_examples() {
        let lin = |gamma: f64| jc_linearization_poly(&PolyG::new(gamma).unwrap());
        let l = lin(0.5);
        assert_eq!((l.coeffs.a, l.coeffs.b), (1.0 / 16.0, 0.5));
        assert_eq!(l.kind, EquilibriumType::Boundary(BoundaryKind::ParabolaPlus));
        assert_eq!(lin(0.4).kind, EquilibriumType::FocusFocus);
        assert!((lin(0.8).coeffs.b - 2.06).abs() < 1e-14);
        assert_eq!(lin(0.8).kind, EquilibriumType::EllipticElliptic);
        assert_eq!(lin(0.0).kind, EquilibriumType::Boundary(BoundaryKind::ParabolaMinus));
    }

    #[test]
    fn linearization_matches_numeric_and_canonical() {
        for gamma in [0.0, 0.25, 0.4, 0.5, 0.8, 1.5] {
            let g = PolyG::new(gamma).unwrap();
            let want = jc_linearization_poly(&g).coeffs;
            let num = jc_linearization_numeric(&g);
            assert!((num.a - want.a).abs() < 1e-10 && (num.b - want.b).abs() < 1e-10, "γ={gamma}: {num:?}");
            let can = hamiltonian_char_coeffs(&hamiltonian_matrix(&jc_canonical_hessians(&g).1));
            assert!((can.a - want.a).abs() < 1e-14 && (can.b - want.b).abs() < 1e-14);
        }
    }

    #[test]
    fn undeformed_pole_pencil_is_nondegenerate() {
        let (hj, hh) = jc_canonical_hessians(&PolyG::new(0.0).unwrap());
        assert!(pencil_nondegenerate(&hj, &hh).is_nondegenerate());
    }

    #[test]
    fn domains() {
        assert_eq!(reduced_domain(0.0), Some((-1.0, 0.0)));
        assert_eq!(reduced_domain(2.0), Some((-1.0, 1.0)));
        assert_eq!(reduced_domain(-2.0), None);
    }

    #[test]
    fn reduced_relation_holds_for_states() {
        for s in random_states(13, 200) {
            let r = ReducedSurface::of(&s);
            assert!(r.residual(jc_j(&s)).abs() < 1e-12 * (1.0 + jc_j(&s).abs()));
        }
    }

    #[test]
    fn undeformed_slice_at_zero() {
        let g = PolyG::new(0.0).unwrap();
        let cv = jc_reduced_critical_values(&g, 0.0).unwrap();
        assert_eq!(cv.len(), 2);
        let z0 = -1.0 / 3.0_f64.sqrt();
        let (_, hmax) = golden_section_max(|z| reduced_branch(&g, 0.0, Branch::Plus, z), -1.0, 0.0, 1e-12);
        for c in &cv {
            assert_eq!(c.kind, CriticalKind::TransversallyElliptic);
            assert!((c.z_at - z0).abs() < 1e-9);
            assert!((c.h.abs() - 0.438691).abs() < 1e-6);
            assert!((c.h.abs() - hmax).abs() < 1e-10);
        }
        let at_one = jc_reduced_critical_values(&g, 1.0).unwrap();
        assert!(at_one.iter().any(|c| c.kind == CriticalKind::EquilibriumValue && (c.j, c.h) == (1.0, 0.0)));
        assert!(jc_reduced_critical_values(&g, -1.5).is_err());
    }

    #[test]
    fn undeformed_has_only_boundary_values() {
        let g = PolyG::new(0.0).unwrap();
        for i in 1..60 {
            let j = -1.0 + 0.07 * i as f64;
            if j == 1.0 {
                continue;
            }
            let cv = jc_reduced_critical_values(&g, j).unwrap();
            let interior: Vec<_> = cv.iter().filter(|c| c.kind != CriticalKind::EquilibriumValue).collect();
            assert_eq!(interior.len(), 2, "J={j}");
            assert!(interior.iter().all(|c| c.kind == CriticalKind::TransversallyElliptic));
        }
    }

    #[test]
    fn critical_values_lift_to_rank_deficient_states() {
        for gamma in [0.0, 0.8] {
            let g = PolyG::new(gamma).unwrap();
            for j in [-0.5, 0.3, 1.4, 2.2] {
                for c in jc_reduced_critical_values(&g, j).unwrap() {
                    let s = lift(j, c.z_at, c.branch, 0.37).unwrap();
                    assert!((jc_j(&s) - j).abs() < 1e-12);
                    assert!((jc_htilde(&s, &g) - c.h).abs() < 1e-12);
                    assert!(jc_rank_test(&s, &g), "γ={gamma} J={j} z={}", c.z_at);
                }
            }
        }
    }

    #[test]
    fn rank_test_examples() {
        let g = PolyG::new(0.3).unwrap();
        assert!(jc_rank_test(&JCState::north_pole(), &g));
        for s in random_states(17, 20) {
            assert!(!jc_rank_test(&s, &g));
        }
        let g0 = PolyG::new(0.0).unwrap();
        let z = -1.0 / 3.0_f64.sqrt();
        assert!(jc_rank_test(&lift(0.0, z, Branch::Plus, 1.1).unwrap(), &g0));
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = PolyG::new(0.8).unwrap();
        let a = jc_spectrum_sample(&g, 500, 2.0, 42).unwrap();
        let b = jc_spectrum_sample(&g, 500, 2.0, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count(), 500);
        assert_eq!(jc_spectrum_sample(&g, 0, 2.0, 1).unwrap().count(), 0);
        assert!(jc_spectrum_sample(&g, 10, -1.0, 1).is_err());
    }

    #[test]
    fn sampled_slice_approaches_boundary() {
        let g = PolyG::new(0.0).unwrap();
        let cloud = jc_spectrum_sample(&g, 200_000, 1.0, 3).unwrap();
        let hmax = cloud
            .points()
            .iter()
            .filter(|(j, _)| j.abs() < 0.01)
            .map(|(_, h)| h.abs())
            .fold(0.0_f64, f64::max);
        assert!((hmax - 0.438691).abs() < 0.01, "{hmax}");
    }
}
