//! Plane integrals in polar coordinates: Gauss-Legendre in angle, adaptive
//! Simpson panels in radius. Evaluation order is fixed, so results are
//! bit-identical run to run.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::special::legendre;

/// Options for a polar plane integral ∫ (d²z/π) f(z).
#[derive(Clone, Copy, Debug)]
pub struct PolarQuad {
    /// Angular Gauss-Legendre node count.
    pub n_angle: usize,
    /// Absolute tolerance handed to each radial adaptive pass.
    pub radial_tol: f64,
    /// Maximum radial bisection depth.
    pub max_depth: u32,
    /// Outer integration radius.
    pub r_max: f64,
}

impl PolarQuad {
    pub fn with_radius(r_max: f64) -> Self {
        Self {
            n_angle: 64,
            radial_tol: 1e-11,
            max_depth: 40,
            r_max,
        }
    }
}

/// Value, accumulated error estimate and evaluation count.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on
/// P_n, using the derivative relation (1-x²) P_n' = n (P_{n-1} - x P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let p = legendre(n, x);
            let p1 = legendre(n - 1, x);
            let dp = n as f64 * (p1 - x * p) / (1.0 - x * x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let p = legendre(n, x);
        let p1 = legendre(n - 1, x);
        let dp = n as f64 * (p1 - x * p) / (1.0 - x * x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

static GL64: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

fn gauss_legendre_cached(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 64 {
        let (x, w) = GL64.get_or_init(|| gauss_legendre(64));
        (x.clone(), w.clone())
    } else {
        gauss_legendre(n)
    }
}

/// Adaptive Simpson on [a, b] with Richardson correction.
pub fn adaptive_simpson(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> (f64, f64, usize) {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &mut impl FnMut(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        evals: &mut usize,
    ) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        *evals += 2;
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return (left + right + delta / 15.0, delta.abs() / 15.0);
        }
        let (lv, le) = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evals);
        let (rv, re) = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evals);
        (lv + rv, le + re)
    }

    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let mut evals = 3;
    let whole = simpson(fa, fm, fb, a, b);
    let (value, err) = recurse(f, a, b, fa, fm, fb, whole, tol, max_depth, &mut evals);
    (value, err, evals)
}

/// ∫ (d²z/π) f(z) over the disc of radius `opts.r_max`.
pub fn integrate_plane(f: impl Fn(C64) -> f64, opts: &PolarQuad) -> Result<QuadResult> {
    let (nodes, weights) = gauss_legendre_cached(opts.n_angle);
    let mut total = 0.0;
    let mut err = 0.0;
    let mut evals = 0usize;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        // map [-1,1] -> [0, 2pi]
        let theta = std::f64::consts::PI * (x + 1.0);
        let dir = C64::new(theta.cos(), theta.sin());
        let mut radial = |rho: f64| f(dir * rho) * rho;
        let (v, e, n) = adaptive_simpson(&mut radial, 0.0, opts.r_max, opts.radial_tol, opts.max_depth);
        total += w * v;
        err += w * e;
        evals += n;
    }
    // d²z/π = ρ dρ dθ/π and the θ-map Jacobian is π, so the factors cancel
    let value = total;
    let error_estimate = err;
    if !value.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            estimate: f64::INFINITY,
            tolerance: opts.radial_tol,
        });
    }
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // exact for degree <= 15
        let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(6)).sum();
        assert!((integral - 2.0 / 7.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_64_weights_sum() {
        let (_, w) = gauss_legendre(64);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_smooth_and_kinked() {
        let mut f = |x: f64| (-x).exp();
        let (v, _, _) = adaptive_simpson(&mut f, 0.0, 5.0, 1e-12, 40);
        assert!((v - (1.0 - (-5.0f64).exp())).abs() < 1e-11);
        // |x - 1| has a kink; adaptive refinement must still converge
        let mut g = |x: f64| (x - 1.0).abs();
        let (v, _, _) = adaptive_simpson(&mut g, 0.0, 3.0, 1e-12, 40);
        assert!((v - 2.5).abs() < 1e-10);
    }

    #[test]
    fn plane_gaussian_normalization() {
        // ∫(d²z/π) 2 e^{-2|z|²} = 1
        let opts = PolarQuad::with_radius(6.0);
        let q = integrate_plane(|z| 2.0 * (-2.0 * z.norm_sqr()).exp(), &opts).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10, "got {}", q.value);
    }
}
