//! Independent brute-force numerics.
//!
//! Everything here is deliberately generic: dense polynomial roots, a 4×4
//! eigensolver that knows nothing about Hamiltonian structure, central finite
//! differences and golden-section search. The closed forms in [`symplin`],
//! [`hopf`] and [`models`] are checked against these routines.
//!
//! [`symplin`]: crate::symplin
//! [`hopf`]: crate::hopf
//! [`models`]: crate::models

use num_complex::Complex64;

use crate::config::{
    DOUBLE_ROOT_SCAN, DOUBLE_ROOT_TOL, FD_GRADIENT_STEP, FD_HESSIAN_STEP, NEWTON_POLISH_STEPS,
    POLY_TRIM,
};
use crate::error::{Error, Result};
use crate::symplin::{EigenQuadruple, Mat4};

/// Real polynomial with ascending coefficients, degree at most 4.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub const MAX_DEGREE: usize = 4;

    pub fn new(coeffs: impl Into<Vec<f64>>) -> Result<Self> {
        let mut coeffs = coeffs.into();
        if coeffs.is_empty() {
            return Err(Error::InvalidParams("polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams("non-finite polynomial coefficient".into()));
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() <= POLY_TRIM) {
            coeffs.pop();
        }
        if coeffs.len() - 1 > Self::MAX_DEGREE {
            return Err(Error::InvalidParams(format!(
                "degree {} exceeds {}",
                coeffs.len() - 1,
                Self::MAX_DEGREE
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `max(1, max |c_i|)`, the scale used for relative residuals.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(1.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly { coeffs: vec![0.0] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Poly { coeffs }
    }
}

fn polish(p: &Poly, dp: &Poly, mut z: Complex64) -> Complex64 {
    for _ in 0..NEWTON_POLISH_STEPS {
        let f = p.eval_complex(z);
        let df = dp.eval_complex(z);
        if df.norm() == 0.0 {
            break;
        }
        let next = z - f / df;
        if p.eval_complex(next).norm() <= f.norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}

/// The three complex roots of a cubic: Cardano's formula, then Newton polish.
pub fn cubic_roots(p: &Poly) -> Result<[Complex64; 3]> {
    if p.degree() != 3 {
        return Err(Error::DegreeMismatch { expected: 3, got: p.degree() });
    }
    let c = p.coeffs();
    let (b, cc, d) = (c[2] / c[3], c[1] / c[3], c[0] / c[3]);
    let shift = b / 3.0;
    let pp = cc - b * b / 3.0;
    let qq = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;

    let disc = Complex64::new(qq * qq / 4.0 + pp * pp * pp / 27.0, 0.0).sqrt();
    let w1 = -qq / 2.0 + disc;
    let w2 = -qq / 2.0 - disc;
    let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
    let u = w.cbrt();

    let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    if u.norm() == 0.0 {
        roots = [Complex64::new(-shift, 0.0); 3];
    } else {
        let v = -pp / (3.0 * u);
        let mut rk = Complex64::new(1.0, 0.0);
        for root in roots.iter_mut() {
            *root = u * rk + v / rk - shift;
            rk *= rot;
        }
    }

    let dp = p.derivative();
    Ok(roots.map(|z| polish(p, &dp, z)))
}

fn quadratic_monic(b: Complex64, c: Complex64) -> [Complex64; 2] {
    // z² + b z + c
    let sq = (b * b - 4.0 * c).sqrt();
    let q = if (-b + sq).norm() >= (-b - sq).norm() {
        (-b + sq) / 2.0
    } else {
        (-b - sq) / 2.0
    };
    if q.norm() == 0.0 {
        [q, q]
    } else {
        [q, c / q]
    }
}

/// The four complex roots of a quartic: Ferrari via the resolvent cubic, then Newton polish.
pub fn quartic_roots(p: &Poly) -> Result<[Complex64; 4]> {
    if p.degree() != 4 {
        return Err(Error::DegreeMismatch { expected: 4, got: p.degree() });
    }
    let c = p.coeffs();
    let (a3, a2, a1, a0) = (c[3] / c[4], c[2] / c[4], c[1] / c[4], c[0] / c[4]);
    let shift = a3 / 4.0;
    let pp = a2 - 3.0 * a3 * a3 / 8.0;
    let qq = a1 - a2 * a3 / 2.0 + a3 * a3 * a3 / 8.0;
    let rr = a0 - a1 * a3 / 4.0 + a2 * a3 * a3 / 16.0 - 3.0 * a3.powi(4) / 256.0;

    let resolvent = Poly::new(vec![-qq * qq, 2.0 * pp * pp - 8.0 * rr, 8.0 * pp, 8.0])?;
    let m = cubic_roots(&resolvent)?
        .into_iter()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap_or_default();

    let scale = 1.0 + pp.abs() + qq.abs().sqrt() + rr.abs().sqrt();
    let ys: [Complex64; 4] = if m.norm() <= 1e-14 * scale {
        // biquadratic: y⁴ + p y² + r
        let [s1, s2] = quadratic_monic(Complex64::new(pp, 0.0), Complex64::new(rr, 0.0));
        let (r1, r2) = (s1.sqrt(), s2.sqrt());
        [r1, -r1, r2, -r2]
    } else {
        let sq = (2.0 * m).sqrt();
        let shift_q = sq * qq / (4.0 * m);
        let half = pp / 2.0 + m;
        let [y1, y2] = quadratic_monic(-sq, half + shift_q);
        let [y3, y4] = quadratic_monic(sq, half - shift_q);
        [y1, y2, y3, y4]
    };

    let dp = p.derivative();
    Ok(ys.map(|y| polish(p, &dp, y - shift)))
}

type PolyEntry = Vec<f64>;

fn poly_mul(a: &[f64], b: &[f64]) -> PolyEntry {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut PolyEntry, term: &[f64], sign: f64) {
    if acc.len() < term.len() {
        acc.resize(term.len(), 0.0);
    }
    for (a, t) in acc.iter_mut().zip(term) {
        *a += sign * t;
    }
}

fn det_poly(m: &[Vec<PolyEntry>]) -> PolyEntry {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = vec![0.0];
    for col in 0..n {
        let minor: Vec<Vec<PolyEntry>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        poly_add_scaled(&mut acc, &poly_mul(&m[0][col], &det_poly(&minor)), sign);
    }
    acc
}

/// det(λI − M) by cofactor expansion over polynomial-valued entries.
pub fn char_poly4(m: &Mat4) -> Poly {
    let entries: Vec<Vec<PolyEntry>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { vec![-m[i][j], 1.0] } else { vec![-m[i][j]] })
                .collect()
        })
        .collect();
    let mut coeffs = det_poly(&entries);
    coeffs.resize(5, 0.0);
    // leading coefficient is exactly 1, so trimming never reduces the degree
    Poly::new(coeffs).expect("finite 4x4 input")
}

/// Eigenvalues of an arbitrary real 4×4 matrix.
pub fn eig4(m: &Mat4) -> EigenQuadruple {
    let p = char_poly4(m);
    EigenQuadruple::new(quartic_roots(&p).expect("degree four by construction"))
}

/// Locate a common root of `p` and `p'` in `bracket` by minimising `p² + p'²`.
pub fn double_root_find(p: &Poly, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let scale = p.scale();
    let dp = p.derivative();
    let ddp = dp.derivative();
    let merit = |z: f64| {
        let (f, df) = (p.eval(z) / scale, dp.eval(z) / scale);
        f * f + df * df
    };

    let h = (hi - lo) / DOUBLE_ROOT_SCAN as f64;
    let best = (0..=DOUBLE_ROOT_SCAN)
        .map(|k| lo + h * k as f64)
        .min_by(|a, b| merit(*a).total_cmp(&merit(*b)))
        .unwrap_or(lo);
    let (mut z, _) = golden_section_min(merit, (best - h).max(lo), (best + h).min(hi), 1e-15);

    // p' has a simple root at a double root of p
    for _ in 0..30 {
        let curv = ddp.eval(z);
        if curv == 0.0 {
            break;
        }
        let next = (z - dp.eval(z) / curv).clamp(lo, hi);
        if merit(next) < merit(z) {
            z = next;
        } else {
            break;
        }
    }

    let (f, df) = ((p.eval(z) / scale).abs(), (dp.eval(z) / scale).abs());
    if f < DOUBLE_ROOT_TOL && df < DOUBLE_ROOT_TOL {
        Ok(z)
    } else {
        Err(Error::NoDoubleRoot { lo, hi, residual: f.max(df) })
    }
}

fn shifted(point: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut x = point.to_vec();
    for &(i, d) in moves {
        x[i] += d;
    }
    x
}

/// Central-difference gradient. `f` returns `None` outside its domain.
pub fn fd_gradient<F>(f: F, point: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    (0..point.len())
        .map(|i| {
            let fp = f(&shifted(point, &[(i, step)])).ok_or(Error::StencilOutsideDomain)?;
            let fm = f(&shifted(point, &[(i, -step)])).ok_or(Error::StencilOutsideDomain)?;
            Ok((fp - fm) / (2.0 * step))
        })
        .collect()
}

/// [`fd_gradient`] with the default step.
pub fn fd_gradient_default<F>(f: F, point: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    fd_gradient(f, point, FD_GRADIENT_STEP)
}

/// Hessian from fourth-order central stencils, one step per axis.
///
/// Truncation error is O(h⁴); rounding error grows like ε|f|/h².
pub fn fd_hessian_steps<F>(f: F, point: &[f64], steps: &[f64]) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    const OFFS: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    let n = point.len();
    if steps.len() != n {
        return Err(Error::InvalidParams("one step per coordinate required".into()));
    }
    let eval = |moves: &[(usize, f64)]| f(&shifted(point, moves)).ok_or(Error::StencilOutsideDomain);
    let f0 = eval(&[])?;
    let mut hess = vec![vec![0.0; n]; n];
    for a in 0..n {
        let h = steps[a];
        let near = (eval(&[(a, h)])? - f0) + (eval(&[(a, -h)])? - f0);
        let far = (eval(&[(a, 2.0 * h)])? - f0) + (eval(&[(a, -2.0 * h)])? - f0);
        hess[a][a] = (16.0 * near - far) / (12.0 * h * h);
        for b in 0..a {
            let k = steps[b];
            let mut acc = 0.0;
            for (i, ci) in OFFS {
                for (j, cj) in OFFS {
                    acc += ci * cj * (eval(&[(a, i * h), (b, j * k)])? - f0);
                }
            }
            let v = acc / (144.0 * h * k);
            hess[a][b] = v;
            hess[b][a] = v;
        }
    }
    Ok(hess)
}

/// [`fd_hessian_steps`] with the same step on every axis.
pub fn fd_hessian<F>(f: F, point: &[f64], step: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    fd_hessian_steps(f, point, &vec![step; point.len()])
}

/// [`fd_hessian`] with the default step.
pub fn fd_hessian_default<F>(f: F, point: &[f64]) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    fd_hessian(f, point, FD_HESSIAN_STEP)
}

/// Determinant of a small dense matrix by cofactor expansion.
pub fn det(m: &[Vec<f64>]) -> f64 {
    let entries: Vec<Vec<PolyEntry>> =
        m.iter().map(|row| row.iter().map(|&x| vec![x]).collect()).collect();
    det_poly(&entries)[0]
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + c.abs() + d.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = if fc < fd { c } else { d };
    (x, f(x))
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, fx) = golden_section_min(|t| -f(t), lo, hi, tol);
    (x, -fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(roots: &[Complex64]) -> Vec<f64> {
        let mut r: Vec<f64> = roots.iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = Poly::new(vec![1.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.degree(), 1);
        assert!(Poly::new(Vec::<f64>::new()).is_err());
        assert!(Poly::new(vec![0.0; 7]).is_ok());
        assert!(Poly::new(vec![1.0; 6]).is_err());
    }

    #[test]
    fn cubic_simple_roots() {
        let p = Poly::new(vec![0.0, -1.0, 0.0, 1.0]).unwrap();
        let r = cubic_roots(&p).unwrap();
        let re = sorted_re(&r);
        for (got, want) in re.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(r.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn cubic_matches_reduced_polynomial_roots() {
        // 16z³ − 2z² + z/32 = z (16 z² − 2 z + 1/32)
        let p = Poly::new(vec![0.0, 1.0 / 32.0, -2.0, 16.0]).unwrap();
        let r = cubic_roots(&p).unwrap();
        for z in &r {
            assert!(p.eval_complex(*z).norm() < 1e-12 * p.scale());
        }
        let re = sorted_re(&r);
        let disc_root = (4.0_f64 - 2.0).sqrt();
        assert!(re[0].abs() < 1e-14);
        assert!((re[1] - (2.0 - disc_root) / 32.0).abs() < 1e-13);
        assert!((re[2] - (2.0 + disc_root) / 32.0).abs() < 1e-13);
        assert!((re[1] - 0.0183058).abs() < 1e-7);
        assert!((re[2] - 0.1066942).abs() < 1e-7);
    }

    #[test]
    fn cubic_triple_root() {
        let p = Poly::new(vec![-8.0, 12.0, -6.0, 1.0]).unwrap();
        for z in cubic_roots(&p).unwrap() {
            assert!((z - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn cubic_rejects_wrong_degree() {
        let p = Poly::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(cubic_roots(&p), Err(Error::DegreeMismatch { expected: 3, got: 2 })));
    }

    #[test]
    fn eig4_diagonal() {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = (i + 1) as f64;
        }
        let ev = eig4(&m);
        let re = sorted_re(ev.roots());
        for (got, want) in re.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((got - want).abs() < 1e-10, "{re:?}");
        }
    }

    #[test]
    fn eig4_symplectic_unit() {
        let ev = eig4(&crate::symplin::Canonical4::B);
        let want = EigenQuadruple::new([
            Complex64::i(),
            Complex64::i(),
            -Complex64::i(),
            -Complex64::i(),
        ]);
        assert!(ev.distance(&want) < 1e-7, "{ev:?}");
    }

    #[test]
    fn char_poly_of_companion_like_matrix() {
        // upper triangular: eigenvalues on the diagonal
        let m = [[1.0, 5.0, -2.0, 0.5], [0.0, -3.0, 7.0, 1.0], [0.0, 0.0, 2.0, 4.0], [0.0, 0.0, 0.0, 0.5]];
        let p = char_poly4(&m);
        // (λ−1)(λ+3)(λ−2)(λ−0.5)
        for x in [1.0, -3.0, 2.0, 0.5] {
            assert!(p.eval(x).abs() < 1e-12);
        }
    }

    #[test]
    fn double_root_of_factored_cubic() {
        // (z−1)²(z+3) = z³ + z² − 5z + 3
        let p = Poly::new(vec![3.0, -5.0, 1.0, 1.0]).unwrap();
        let z = double_root_find(&p, (0.0, 2.0)).unwrap();
        assert!((z - 1.0).abs() < 1e-9);
    }

    #[test]
    fn no_double_root() {
        let p = Poly::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(double_root_find(&p, (-1.0, 1.0)), Err(Error::NoDoubleRoot { .. })));
    }

    #[test]
    fn fd_quadratic_exact() {
        let f = |x: &[f64]| Some(3.0 * x[0] * x[0] - 2.0 * x[0] * x[1] + 0.5 * x[1] * x[1] + x[0]);
        let g = fd_gradient_default(f, &[0.3, -1.2]).unwrap();
        assert!((g[0] - (6.0 * 0.3 + 2.4 + 1.0)).abs() < 1e-9);
        assert!((g[1] - (-0.6 - 1.2)).abs() < 1e-9);
        // quadratics carry no truncation error, only rounding ~ ε|f|/h²
        let h = fd_hessian_default(f, &[0.3, -1.2]).unwrap();
        assert!((h[0][0] - 6.0).abs() < 1e-6);
        assert!((h[0][1] + 2.0).abs() < 1e-6);
        assert!((h[1][1] - 1.0).abs() < 1e-6);
        let h = fd_hessian(f, &[0.3, -1.2], 0.1).unwrap();
        assert!((h[0][0] - 6.0).abs() < 1e-9);
        assert!((h[0][1] + 2.0).abs() < 1e-9);
        assert!((h[1][1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fd_constant_is_zero() {
        let h = fd_hessian_default(|_| Some(4.2), &[1.0, 2.0, 3.0]).unwrap();
        assert!(h.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn fd_outside_domain() {
        let f = |x: &[f64]| (x[0] > 0.0).then(|| x[0].ln());
        assert!(matches!(fd_hessian(f, &[1e-5], 1e-4), Err(Error::StencilOutsideDomain)));
    }

    #[test]
    fn golden_section_finds_peak() {
        let (x, fx) = golden_section_max(|t| -(t - 0.3).powi(2) + 2.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }
}
