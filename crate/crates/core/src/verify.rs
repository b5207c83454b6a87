//! The self-check suite behind `semitoric verify`.
//!
//! Each check recomputes a closed-form result with an independent numerical
//! route and reports the worst discrepancy. `tol_scale` multiplies every
//! numerical tolerance; values below 1 tighten the suite (useful to confirm a
//! check can fail), values above 1 loosen it.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::hopf::{
    admissible, critical_curve_point, curve_tangent, cusps, eliasson_invariants, equilibrium_eigenvalues, gammas,
    origin_slopes, q_poly, quadratic_hessian, reduced_hamiltonian, torus_count, transformation_T, EliassonParams,
    HopfParams, ReducedPoint,
};
use crate::models::{
    jc_htilde, jc_j, jc_linearization_numeric, jc_linearization_poly, jc_reduced_critical_values, poisson_bracket,
    reduced_branch, reduced_branch_derivatives, Branch, CriticalKind, CriticalValuePoint, DeformedH, JCState,
    MomentumJ, PolyG,
};
use crate::oracle::{double_root_find, eig4, fd_hessian_steps, golden_section_max, golden_section_min};
use crate::spectrum::assemble_hopf_diagram;
use crate::symplin::{
    classify, hamiltonian_char_coeffs, hamiltonian_matrix, mat_mul, mat_vec, transpose, BoundaryKind, Canonical4,
    EigenQuadruple, EquilibriumType, Sym4,
};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

fn result(id: u32, name: &'static str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult { id, name, passed, detail }
}

fn figure_params() -> HopfParams {
    HopfParams::new(1.0, 1.0, 0.5, -2.0).expect("valid")
}

/// `n + 1` equally spaced points on `[−√ν, √ν]`.
fn s_grid(nu: f64, n: usize) -> Vec<f64> {
    let r = nu.sqrt();
    (0..=n).map(|i| -r + 2.0 * r * i as f64 / n as f64).collect()
}

pub fn discriminant_identity(tol_scale: f64) -> CriterionResult {
    let t0 = Instant::now();
    let p = figure_params();
    let mut worst = 0.0_f64;
    let mut checked = 0;
    for s in s_grid(p.nu(), 400) {
        if !admissible(&p, s) {
            continue;
        }
        let c = critical_curve_point(&p, s);
        let q = q_poly(c.j, c.h, &p).expect("specialized");
        let sc = q.scale();
        worst = worst.max(q.eval(c.d).abs() / sc).max(q.derivative(c.d).abs() / sc);
        checked += 1;
    }
    let secs = t0.elapsed().as_secs_f64();
    result(
        1,
        "discriminant identity",
        checked == 401 && worst < 1e-10 * tol_scale && secs < 1.0,
        format!("{checked} samples, max scaled residual {worst:.3e}, {secs:.3}s"),
    )
}

pub fn hyperbolic_anchor(tol_scale: f64) -> CriterionResult {
    // Solve Q = Q' = 0 in (z, H) at J = 0 by Newton from a coarse scan, then
    // confirm the double root with the bracketed search.
    let p = figure_params();
    let residual = |z: f64, h: f64| {
        let q = q_poly(0.0, h, &p).expect("specialized");
        (q.eval(z), q.derivative(z), q)
    };
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for ih in 0..=200 {
        let h = -0.1 + 0.2 * ih as f64 / 200.0;
        // z = 0 is a root for every H at J = 0; stay clear of it
        for iz in 4..=200 {
            let z = iz as f64 / 200.0;
            let (f, g, q) = residual(z, h);
            let r = (f * f + g * g) / (q.scale() * q.scale());
            if r < best.0 {
                best = (r, z, h);
            }
        }
    }
    let (_, mut z, mut h) = best;
    for _ in 0..50 {
        let (f, g, q) = residual(z, h);
        // ∂Q/∂H = 4σz, ∂Q'/∂H = 4σ
        let s4 = 4.0 * p.sigma();
        let q2 = 6.0 * q.c3 * z + 2.0 * q.c2;
        let (a, b, c, d) = (g, s4 * z, q2, s4);
        let det = a * d - b * c;
        if det == 0.0 {
            break;
        }
        z -= (d * f - b * g) / det;
        h -= (a * g - c * f) / det;
    }
    let want = -p.nu() * p.nu() / (8.0 * p.d());
    let q = q_poly(0.0, h, &p).expect("specialized");
    let confirmed = double_root_find(&q.to_poly(), (1e-6, 1.0));
    let err = (h - want).abs();
    result(
        2,
        "hyperbolic anchor",
        err < 1e-9 * tol_scale && confirmed.is_ok(),
        format!(
            "H = {h:.15}, expected {want:.15} (err {err:.2e}); double root at z = {}",
            confirmed.map_or_else(|e| e.to_string(), |z| format!("{z:.9}"))
        ),
    )
}

pub fn hessian_law(tol_scale: f64) -> CriterionResult {
    let p = figure_params();
    let cusp = cusps(&p);
    let mut worst = 0.0_f64;
    let mut signs: Vec<(f64, f64)> = Vec::new();
    for s in s_grid(p.nu(), 400) {
        let c = critical_curve_point(&p, s);
        if c.d <= 0.0 {
            continue;
        }
        let f = |v: &[f64]| ReducedPoint::new(v[0], v[1], c.j).ok().and_then(|rp| reduced_hamiltonian(&rp, &p).ok());
        let Ok(hess) = fd_hessian_steps(f, &[c.d, 0.0], &[3e-3 * c.d, 1e-2]) else {
            return result(3, "Hessian law", false, format!("stencil failed at s = {s}"));
        };
        let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
        worst = worst.max((det - c.det2).abs());
        signs.push((s, det));
    }
    let stray: Vec<f64> = signs
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .filter(|w| !cusp.iter().any(|&c| w[0].0 <= c && c <= w[1].0))
        .map(|w| w[0].0)
        .collect();
    let changes = signs.windows(2).filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0)).count();
    result(
        3,
        "Hessian law",
        worst < 1e-7 * tol_scale && stray.is_empty() && changes == 2,
        format!("{} points, max |det − 2(3s²−ν)| = {worst:.3e}, {changes} sign changes, stray {stray:?}", signs.len()),
    )
}

pub fn tangent_cusp_law(tol_scale: f64) -> CriterionResult {
    let p = figure_params();
    let h = 1e-5;
    let mut worst = 0.0_f64;
    for s in s_grid(p.nu(), 400) {
        let (a, b) = (critical_curve_point(&p, s + h), critical_curve_point(&p, s - h));
        let (dj, dh) = curve_tangent(&p, s);
        worst = worst.max(((a.j - b.j) / (2.0 * h) - dj).abs()).max(((a.h - b.h) / (2.0 * h) - dh).abs());
    }
    let at_cusp = cusps(&p)
        .iter()
        .map(|&c| {
            let (dj, dh) = curve_tangent(&p, c);
            dj.abs().max(dh.abs())
        })
        .fold(0.0, f64::max);
    let d = assemble_hopf_diagram(&p, 400).expect("valid");
    let monotone = d.segments.len() == 3
        && d.segments.iter().all(|seg| {
            let js: Vec<f64> = seg.points.iter().map(|q| q.j).collect();
            let up = js[1] > js[0];
            js.windows(2).all(|w| (w[1] > w[0]) == up && w[1] != w[0])
        });
    result(
        4,
        "tangent and cusp law",
        worst < 1e-6 * tol_scale && at_cusp < 1e-12 * tol_scale && monotone,
        format!("max FD error {worst:.3e}, tangent at cusps {at_cusp:.3e}, J monotone on segments: {monotone}"),
    )
}

pub fn origin_slope_limit(tol_scale: f64) -> CriterionResult {
    let cases = [(1.0, 1.0, 0.5, -2.0), (1.0, 1.0, 0.25, -2.0), (-1.0, 1.0, 1.0, -2.0), (0.7, -1.0, 0.3, 1.5)];
    let mut worst = 0.0_f64;
    for (w, sg, nu, d) in cases {
        let p = HopfParams::new(w, sg, nu, d).expect("valid");
        let (plus, minus) = origin_slopes(&p).expect("ν > 0");
        let r = nu.sqrt();
        // the branch ending at s = σ√ν carries ω + σ√ν
        for (end, want) in [(sg * r, plus), (-sg * r, minus)] {
            let inward = -end.signum();
            let s = end + inward * 1e-6;
            let c = critical_curve_point(&p, s);
            worst = worst.max((c.h / c.j - want).abs());
        }
    }
    result(
        5,
        "origin slopes",
        worst < 1e-3 * tol_scale,
        format!("{} parameter sets, max |secant − (ω ± σ√ν)| = {worst:.3e}", cases.len()),
    )
}

pub fn eigenvalue_laws(tol_scale: f64) -> CriterionResult {
    let c = Complex64::new;
    let mut worst = 0.0_f64;
    let mut detail = Vec::new();
    for nu in [-0.25, 0.25] {
        let p = HopfParams::new(1.0, 1.0, nu, -2.0).expect("valid");
        let numeric = eig4(&hamiltonian_matrix(&quadratic_hessian(&p)));
        let closed = equilibrium_eigenvalues(&p);
        let r = nu.abs().sqrt();
        let literal = if nu < 0.0 {
            EigenQuadruple::new([c(r, 1.0), c(r, -1.0), c(-r, 1.0), c(-r, -1.0)])
        } else {
            EigenQuadruple::new([c(0.0, r + 1.0), c(0.0, -r - 1.0), c(0.0, r - 1.0), c(0.0, 1.0 - r)])
        };
        let e = numeric.distance(&closed).max(closed.distance(&literal));
        detail.push(format!("ν={nu}: {e:.2e}"));
        worst = worst.max(e);
    }
    let p0 = HopfParams::new(1.0, 1.0, 0.0, -2.0).expect("valid");
    let doubled = EigenQuadruple::new([c(0.0, 1.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, -1.0)]);
    let closed0 = equilibrium_eigenvalues(&p0).distance(&doubled);
    // a double root is only resolved to about √ε by any root finder
    let numeric0 = eig4(&hamiltonian_matrix(&quadratic_hessian(&p0))).distance(&doubled);
    result(
        6,
        "eigenvalue laws",
        worst < 1e-10 * tol_scale && closed0 == 0.0 && numeric0 < 1e-6 * tol_scale,
        format!("{}; ν=0 closed form {closed0:.1e}, eig4 {numeric0:.2e}", detail.join(", ")),
    )
}

fn nonzero(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v: f64 = rng.gen_range(lo..hi);
    if rng.gen::<bool>() {
        v
    } else {
        -v
    }
}

pub fn t_conjugation(tol_scale: f64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7c0);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let e = EliassonParams::new(nonzero(&mut rng, 0.2, 3.0), nonzero(&mut rng, 0.2, 3.0), nonzero(&mut rng, 0.5, 3.0))
            .expect("nonzero");
        let t = transformation_T(&e);
        let tbt = mat_mul(&transpose(&t), &mat_mul(&Canonical4::B, &t));
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((tbt[i][j] - Canonical4::B[i][j]).abs());
            }
        }
        let sg = e.sigma();
        for _ in 0..100 {
            let p: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let (g1, g2, g3) = gammas(&p);
            let (j1, j2, k1, k2) = eliasson_invariants(&mat_vec(&t, &p));
            let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
            worst = worst
                .max(rel(g1, j1))
                .max(rel(g2, sg * (e.alpha_t() * j2 + e.gamma_hat() * k1 + e.delta() * k2)))
                .max(rel(g3, sg * k1 / e.delta()));
        }
    }
    result(
        7,
        "T conjugation",
        worst < 1e-12 * tol_scale,
        format!("20 parameter sets × 100 points, max deviation {worst:.3e}"),
    )
}

pub fn region_exclusion(tol_scale: f64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfe);
    let mut forbidden = 0;
    let mut worst = 0.0_f64;
    for _ in 0..100_000 {
        let [w, al, g, d]: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-3.0..=3.0));
        // coefficients from the matrix, not from the closed form
        let q = hamiltonian_char_coeffs(&hamiltonian_matrix(&Sym4::quadratic_family(w, al, g, d)));
        if matches!(classify(q), EquilibriumType::HyperbolicHyperbolic | EquilibriumType::EllipticHyperbolic) {
            forbidden += 1;
        }
        let lhs = q.b * q.b / 4.0 - q.a;
        let rhs = 4.0 * w * w * (g * d - al * al);
        let scale = 1.0_f64.max((q.b * q.b / 4.0).abs()).max(q.a.abs());
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    result(
        8,
        "region exclusion",
        forbidden == 0 && worst < 1e-9 * tol_scale,
        format!("10⁵ samples, {forbidden} in HH/EH, max relative identity error {worst:.3e}"),
    )
}

pub fn jc_linearization_law(tol_scale: f64) -> CriterionResult {
    let mut worst = 0.0_f64;
    for gamma in [0.0, 0.25, 0.4, 0.5, 0.8, 1.5] {
        let g = PolyG::new(gamma).expect("finite");
        let want = jc_linearization_poly(&g).coeffs;
        let num = jc_linearization_numeric(&g);
        worst = worst.max((num.a - want.a).abs()).max((num.b - want.b).abs());
        let analytic_b = 4.0 * gamma * gamma - 0.5;
        worst = worst.max((want.b - analytic_b).abs()).max((want.a - 1.0 / 16.0).abs());
    }
    let kind = |gamma: f64| jc_linearization_poly(&PolyG::new(gamma).expect("finite")).kind;
    let ff = [0.05, 0.25, 0.4, 0.49].iter().all(|&g| kind(g) == EquilibriumType::FocusFocus);
    let bd = kind(0.5) == EquilibriumType::Boundary(BoundaryKind::ParabolaPlus);
    let ee = [0.51, 0.8, 1.5].iter().all(|&g| kind(g) == EquilibriumType::EllipticElliptic);
    result(
        9,
        "spin-oscillator linearization",
        worst < 1e-10 * tol_scale && ff && bd && ee,
        format!("max |numeric − analytic| {worst:.3e}; FF below 1/2: {ff}, boundary at 1/2: {bd}, EE above: {ee}"),
    )
}

pub fn commutation(tol_scale: f64) -> CriterionResult {
    let gammas = [0.0, 0.25, 0.5, 0.8, 1.5, 2.0];
    let worst = gammas
        .par_iter()
        .map(|&gamma| {
            let g = DeformedH(PolyG::new(gamma).expect("finite"));
            let mut rng = ChaCha8Rng::seed_from_u64(gamma.to_bits());
            (0..1000)
                .map(|_| {
                    let v: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                    let s = JCState::new(v[0], v[1], v[2], v[3], v[4]).expect("nonzero");
                    poisson_bracket(&MomentumJ, &g, &s).abs()
                })
                .fold(0.0_f64, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    result(
        10,
        "commutation",
        worst < 1e-11 * tol_scale,
        format!("{} values of γ × 1000 states, max |{{J, H̃}}| = {worst:.3e}", gammas.len()),
    )
}

pub fn undeformed_diagram(tol_scale: f64) -> CriterionResult {
    let g = PolyG::new(0.0).expect("finite");
    let cv = jc_reduced_critical_values(&g, 0.0).expect("J ≥ −1");
    let (z_max, h_max) = golden_section_max(|z| reduced_branch(&g, 0.0, Branch::Plus, z), -1.0, 0.0, 1e-12);
    let (z_min, h_min) = golden_section_min(|z| reduced_branch(&g, 0.0, Branch::Minus, z), -1.0, 0.0, 1e-12);
    let z0 = -1.0 / 3.0_f64.sqrt();
    let exact = (4.0 / (3.0 * 3.0_f64.sqrt())).sqrt() / 2.0;
    let mut worst = (h_max - exact).abs().max((h_min + exact).abs());
    let mut ok = cv.len() == 2 && cv.iter().all(|c| c.kind == CriticalKind::TransversallyElliptic);
    for c in &cv {
        let oracle = if c.branch == Branch::Plus { h_max } else { h_min };
        worst = worst.max((c.h - oracle).abs()).max((c.h.abs() - 0.438691).abs());
        ok &= (c.z_at - z0).abs() < 1e-6;
    }
    ok &= (z_max - z0).abs() < 1e-5 && (z_min - z0).abs() < 1e-5;
    let poles = [JCState::north_pole(), JCState::south_pole()].map(|s| (jc_j(&s), jc_htilde(&s, &g)));
    let eq_ok = poles == [(1.0, 0.0), (-1.0, 0.0)]
        && [1.0, -1.0].iter().all(|&j| {
            jc_reduced_critical_values(&g, j)
                .expect("J ≥ −1")
                .iter()
                .any(|c| c.kind == CriticalKind::EquilibriumValue && (c.j, c.h) == (j, 0.0))
        });
    result(
        11,
        "undeformed diagram",
        ok && eq_ok && worst < 1e-6 * tol_scale,
        format!(
            "H = {:?} vs golden-section ±{h_max:.9}, max error {worst:.2e}; equilibrium values exact: {eq_ok}",
            cv.iter().map(|c| format!("{:.9}", c.h)).collect::<Vec<_>>()
        ),
    )
}

fn loop_signature(cv: &[CriticalValuePoint]) -> Option<f64> {
    // exactly three values on one branch, one of them hyperbolic; returns its z
    for b in [Branch::Plus, Branch::Minus] {
        let on: Vec<_> = cv.iter().filter(|c| c.branch == b && c.kind != CriticalKind::EquilibriumValue).collect();
        let hyp: Vec<_> = on.iter().filter(|c| c.kind == CriticalKind::TransversallyHyperbolic).collect();
        if on.len() == 3 && hyp.len() == 1 {
            return Some(hyp[0].z_at);
        }
    }
    None
}

/// Solve `h′ = h″ = 0` in `(z, J)` on the Plus branch by Newton with a
/// finite-difference Jacobian.
fn fold_point(g: &PolyG, mut z: f64, mut j: f64) -> Option<(f64, f64)> {
    let f = |z: f64, j: f64| reduced_branch_derivatives(g, j, Branch::Plus, z);
    for _ in 0..60 {
        let (d1, d2) = f(z, j);
        let e = 1e-7;
        let (zp, zm) = (f(z + e, j), f(z - e, j));
        let (jp, jm) = (f(z, j + e), f(z, j - e));
        let a = (zp.0 - zm.0) / (2.0 * e);
        let b = (jp.0 - jm.0) / (2.0 * e);
        let c = (zp.1 - zm.1) / (2.0 * e);
        let d = (jp.1 - jm.1) / (2.0 * e);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let (dz, dj) = ((d * d1 - b * d2) / det, (a * d2 - c * d1) / det);
        z -= dz;
        j -= dj;
        if dz.abs() < 1e-15 && dj.abs() < 1e-15 {
            break;
        }
    }
    let (d1, d2) = f(z, j);
    (d1.abs() < 1e-9 && d2.abs() < 1e-9).then_some((z, j))
}

/// Critical points of the Plus branch in `(lo, hi)` on a fine local grid, with `h″`.
fn local_critical(g: &PolyG, j: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let n = 20_000;
    let d1 = |z: f64| reduced_branch_derivatives(g, j, Branch::Plus, z).0;
    let mut out = Vec::new();
    let mut prev = (lo, d1(lo));
    for i in 1..=n {
        let z = lo + (hi - lo) * i as f64 / n as f64;
        let cur = (z, d1(z));
        if (prev.1 < 0.0) != (cur.1 < 0.0) {
            let (mut a, mut b) = (prev.0, cur.0);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if (d1(m) < 0.0) == (prev.1 < 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            let zc = 0.5 * (a + b);
            out.push((zc, reduced_branch_derivatives(g, j, Branch::Plus, zc).1));
        }
        prev = cur;
    }
    out
}

pub fn post_hopf_loop(tol_scale: f64) -> CriterionResult {
    let t0 = Instant::now();
    let g = PolyG::new(0.8).expect("finite");
    let steps = 400;
    let (j_lo, j_hi) = (-0.99, 3.0);
    let js: Vec<f64> = (0..=steps).map(|i| j_lo + (j_hi - j_lo) * i as f64 / steps as f64).collect();
    let scan: Vec<Vec<CriticalValuePoint>> = js
        .par_iter()
        .map(|&j| jc_reduced_critical_values(&g, j).expect("J ≥ −1"))
        .collect();
    let secs = t0.elapsed().as_secs_f64();

    let inside: Vec<bool> = scan.iter().map(|cv| loop_signature(cv).is_some()).collect();
    let first = inside.iter().position(|&b| b);
    let last = inside.iter().rposition(|&b| b);
    let (Some(first), Some(last)) = (first, last) else {
        return result(12, "post-Hopf loop", false, "no J with three values on one branch".into());
    };
    let contiguous = inside[first..=last].iter().all(|&b| b);
    let open = first > 0 && last < steps;
    let outside_two = scan
        .iter()
        .zip(&inside)
        .filter(|(_, &i)| !i)
        .all(|(cv, _)| cv.iter().filter(|c| c.kind != CriticalKind::EquilibriumValue).count() == 2);
    let one_h_inside = scan[first..=last]
        .iter()
        .all(|cv| cv.iter().filter(|c| c.kind == CriticalKind::TransversallyHyperbolic).count() == 1);

    // the hyperbolic family ends where it merges with an elliptic one: h′ = h″ = 0
    let mut ends = Vec::new();
    let mut ends_ok = true;
    for (i_in, i_out) in [(first, first - 1), (last, last + 1)] {
        let z_h = loop_signature(&scan[i_in]).expect("inside");
        let Some((zf, jf)) = fold_point(&g, z_h, js[i_in]) else {
            ends_ok = false;
            continue;
        };
        let between = (jf - js[i_in]) * (jf - js[i_out]) <= 0.0;
        let inward = (js[i_in] - js[i_out]).signum();
        // on the inside the hyperbolic point sits next to an elliptic one, and its h″ → 0;
        // on the outside neither is there
        let mut h2 = Vec::new();
        for delta in [1e-4, 1e-6, 1e-8] {
            let near = local_critical(&g, jf + inward * delta, zf - 0.05, zf + 0.05);
            let hyp: Vec<f64> = near.iter().filter(|(_, d2)| *d2 > 0.0).map(|(_, d2)| *d2).collect();
            let ell = near.iter().filter(|(_, d2)| *d2 < 0.0).count();
            if hyp.len() == 1 && ell == 1 {
                h2.push(hyp[0]);
            } else {
                ends_ok = false;
            }
        }
        let shrinking = h2.len() == 3 && h2[0] > h2[1] && h2[1] > h2[2] && h2[2] < 1e-3 * tol_scale;
        let gone = local_critical(&g, jf - inward * 1e-6, zf - 0.05, zf + 0.05).is_empty();
        ends_ok &= between && shrinking && gone;
        ends.push(format!("J*={jf:.9} z*={zf:.6} h″→{:.1e}", h2.last().copied().unwrap_or(f64::NAN)));
    }
    result(
        12,
        "post-Hopf loop",
        contiguous && open && outside_two && one_h_inside && ends_ok && ends.len() == 2 && secs < 10.0,
        format!(
            "J ∈ [{:.4}, {:.4}] on the grid ({} steps, {secs:.2}s); ends: {}",
            js[first],
            js[last],
            steps,
            ends.join("; ")
        ),
    )
}

pub fn torus_counts(tol_scale: f64) -> CriterionResult {
    let p = figure_params();
    let a = torus_count(&p, 0.0, 1.0 / 128.0).expect("specialized");
    let b = torus_count(&p, 0.0, -0.1).expect("specialized");
    let spots = a.count == 2 && a.has_unbounded && b.count == 1;

    let n = 50;
    let (j0, j1, h0, h1) = (-0.08, 0.08, -0.06, 0.1);
    let jv = |i: usize| j0 + (j1 - j0) * i as f64 / (n - 1) as f64;
    let hv = |k: usize| h0 + (h1 - h0) * k as f64 / (n - 1) as f64;
    let counts: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|k| torus_count(&p, jv(i), hv(k)).expect("specialized").count).collect())
        .collect();
    let curve: Vec<(f64, f64)> = assemble_hopf_diagram(&p, 400)
        .expect("valid")
        .unique_samples()
        .iter()
        .map(|c| (c.j, c.h))
        .collect();
    let diag = ((j1 - j0) / (n - 1) as f64).hypot((h1 - h0) / (n - 1) as f64);
    let mut changes = 0;
    let mut worst = 0.0_f64;
    for i in 0..n {
        for k in 0..n {
            for (i2, k2) in [(i + 1, k), (i, k + 1)] {
                if i2 >= n || k2 >= n || counts[i][k] == counts[i2][k2] {
                    continue;
                }
                changes += 1;
                let mid = (0.5 * (jv(i) + jv(i2)), 0.5 * (hv(k) + hv(k2)));
                let dist = curve.iter().map(|&(j, h)| (j - mid.0).hypot(h - mid.1)).fold(f64::INFINITY, f64::min);
                worst = worst.max(dist / diag);
            }
        }
    }
    result(
        13,
        "torus counts",
        spots && changes > 0 && worst <= 1.0 * tol_scale,
        format!(
            "(0,1/128) → {a:?}, (0,−0.1) → {b:?}; {changes} count changes on 50×50, farthest {worst:.2} cell diagonals from the curve"
        ),
    )
}

pub fn determinism(_tol_scale: f64) -> CriterionResult {
    use crate::cli::{render_hopf_curve, render_jc_spectrum, SpectrumRequest};
    let p = figure_params();
    let req = SpectrumRequest { gamma: 0.8, j_min: -1.0, j_max: 3.0, j_steps: 81, samples: 20_000, seed: 7, raster: Some((40, 40)), bins: Some(40) };
    let curve = (render_hopf_curve(&p, 400), render_hopf_curve(&p, 400));
    let jc = (render_jc_spectrum(&req), render_jc_spectrum(&req));
    let ok = match (curve, jc) {
        ((Ok(a), Ok(b)), (Ok(c), Ok(d))) => a == b && c == d,
        _ => false,
    };
    result(14, "determinism", ok, format!("repeated hopf-curve and jc-spectrum renders identical: {ok}"))
}

/// Every check, in order.
pub fn run_all(tol_scale: f64) -> Vec<CriterionResult> {
    let checks: [fn(f64) -> CriterionResult; 14] = [
        discriminant_identity,
        hyperbolic_anchor,
        hessian_law,
        tangent_cusp_law,
        origin_slope_limit,
        eigenvalue_laws,
        t_conjugation,
        region_exclusion,
        jc_linearization_law,
        commutation,
        undeformed_diagram,
        post_hopf_loop,
        torus_counts,
        determinism,
    ];
    checks.iter().map(|c| c(tol_scale)).collect()
}
