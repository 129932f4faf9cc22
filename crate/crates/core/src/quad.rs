//! Deterministic product quadrature over Euler angles and the unit sphere.
//!
//! α and γ use the uniform periodic rule (exact for trigonometric polynomials
//! of degree below the point count); β uses Gauss-Legendre in cos β, which
//! absorbs the sin β weight. Node values may be computed in parallel, but the
//! reduction always runs sequentially in node order so results are
//! bit-identical regardless of thread count.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::EulerAngles;
use crate::error::{Error, Result};
use crate::qcore::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_alpha: usize,
    pub n_beta: usize,
    pub n_gamma: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_alpha: 64,
            n_beta: 32,
            n_gamma: 64,
        }
    }
}

impl GridSpec {
    pub fn new(n_alpha: usize, n_beta: usize, n_gamma: usize) -> Result<Self> {
        if n_alpha == 0 || n_beta == 0 || n_gamma == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid sizes must be positive, got {n_alpha}x{n_beta}x{n_gamma}"
            )));
        }
        Ok(GridSpec {
            n_alpha,
            n_beta,
            n_gamma,
        })
    }
}

/// How the γ integral is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaIntegration {
    /// Integrand is γ-independent: evaluate at γ = 0 and multiply by 2π.
    #[default]
    Analytic,
    /// Uniform rule with `n_gamma` points.
    Numeric,
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes in ascending order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Values that can be accumulated by the quadrature rules.
pub trait Integrand: Clone + Send {
    fn accumulate(&mut self, other: &Self, weight: f64);
    fn scaled(&self, weight: f64) -> Self;
    fn is_finite(&self) -> bool;
}

impl Integrand for f64 {
    fn accumulate(&mut self, other: &Self, weight: f64) {
        *self += weight * other;
    }
    fn scaled(&self, weight: f64) -> Self {
        weight * self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Integrand for Complex64 {
    fn accumulate(&mut self, other: &Self, weight: f64) {
        *self += other * weight;
    }
    fn scaled(&self, weight: f64) -> Self {
        self * weight
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Integrand for ComplexMatrix {
    fn accumulate(&mut self, other: &Self, weight: f64) {
        self.add_scaled(other, Complex64::new(weight, 0.0));
    }
    fn scaled(&self, weight: f64) -> Self {
        self.scale_real(weight)
    }
    fn is_finite(&self) -> bool {
        ComplexMatrix::is_finite(self)
    }
}

/// Weighted pairwise reduction over precomputed node values, in node order.
fn reduce<T: Integrand>(values: Vec<Result<T>>, weights: &[f64], labels: impl Fn(usize) -> String) -> Result<T> {
    let mut level = Vec::with_capacity(values.len());
    for (i, (value, &w)) in values.into_iter().zip(weights).enumerate() {
        let value = value?;
        if !value.is_finite() {
            return Err(Error::QuadratureNaN { node: labels(i) });
        }
        level.push(value.scaled(w));
    }
    if level.is_empty() {
        return Err(Error::InvalidArgument("empty quadrature grid".into()));
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut items = level.into_iter();
        while let Some(mut a) = items.next() {
            if let Some(b) = items.next() {
                a.accumulate(&b, 1.0);
            }
            next.push(a);
        }
        level = next;
    }
    Ok(level.pop().expect("non-empty"))
}

fn periodic_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// ∫ f dα dγ sinβ dβ over the full Euler domain (total measure 8π²).
pub fn integrate_euler<T, F>(f: F, grid: &GridSpec, gamma: GammaIntegration) -> Result<T>
where
    T: Integrand,
    F: Fn(&EulerAngles) -> Result<T> + Sync,
{
    let alphas = periodic_nodes(grid.n_alpha);
    let (xs, ws) = gauss_legendre(grid.n_beta);
    let (gammas, gamma_weight) = match gamma {
        GammaIntegration::Analytic => (vec![0.0], TAU),
        GammaIntegration::Numeric => (periodic_nodes(grid.n_gamma), TAU / grid.n_gamma as f64),
    };
    let alpha_weight = TAU / grid.n_alpha as f64;

    let mut nodes = Vec::with_capacity(alphas.len() * xs.len() * gammas.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for &a in &alphas {
        for (x, w) in xs.iter().zip(&ws) {
            for &g in &gammas {
                nodes.push((a, x.acos(), g));
                weights.push(alpha_weight * w * gamma_weight);
            }
        }
    }
    let values: Vec<Result<T>> = nodes
        .par_iter()
        .map(|&(a, b, g)| EulerAngles::new(a, b, g).and_then(|ang| f(&ang)))
        .collect();
    reduce(values, &weights, |i| {
        let (a, b, g) = nodes[i];
        format!("alpha={a}, beta={b}, gamma={g}")
    })
}

/// Normalized sphere average ∫ f dn / 4π with n = (cosφ sinθ, sinφ sinθ, cosθ).
/// Uses `n_beta` Gauss-Legendre nodes in cos θ and `n_alpha` points in φ.
pub fn integrate_sphere<T, F>(f: F, grid: &GridSpec) -> Result<T>
where
    T: Integrand,
    F: Fn(f64, f64) -> Result<T> + Sync,
{
    let phis = periodic_nodes(grid.n_alpha);
    let (xs, ws) = gauss_legendre(grid.n_beta);
    let phi_weight = 1.0 / grid.n_alpha as f64;
    let mut nodes = Vec::with_capacity(phis.len() * xs.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for &p in &phis {
        for (x, w) in xs.iter().zip(&ws) {
            nodes.push((x.acos(), p));
            weights.push(phi_weight * w / 2.0);
        }
    }
    let values: Vec<Result<T>> = nodes.par_iter().map(|&(t, p)| f(t, p)).collect();
    reduce(values, &weights, |i| {
        let (t, p) = nodes[i];
        format!("theta={t}, phi={p}")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler<F: Fn(&EulerAngles) -> f64 + Sync>(f: F, grid: &GridSpec, g: GammaIntegration) -> f64 {
        integrate_euler(|a: &EulerAngles| Ok(f(a)), grid, g).unwrap()
    }

    #[test]
    fn gauss_legendre_small_rules() {
        let (x, w) = gauss_legendre(1);
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - 2.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in 1..=40 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..2 * n {
                let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((num - exact).abs() < 1e-13, "n={n} deg={deg}: {num} vs {exact}");
            }
        }
    }

    #[test]
    fn euler_volume_and_periodicity() {
        let grid = GridSpec::default();
        for mode in [GammaIntegration::Analytic, GammaIntegration::Numeric] {
            assert!((euler(|_| 1.0, &grid, mode) - 8.0 * PI * PI).abs() < 1e-12);
            assert!(euler(|a| a.alpha().cos(), &grid, mode).abs() < 1e-13);
        }
        assert!(euler(|a| a.gamma().sin(), &grid, GammaIntegration::Numeric).abs() < 1e-13);
    }

    #[test]
    fn euler_monomials() {
        let grid = GridSpec::default();
        // ∫ cos²β sinβ dβ = 2/3, times (2π)² for α, γ
        let v = euler(|a| a.beta().cos().powi(2), &grid, GammaIntegration::Analytic);
        assert!((v - 4.0 * PI * PI * 2.0 / 3.0).abs() < 1e-12);
        // ∫ cos²α dα = π, ∫ sin²β sinβ dβ = 4/3, ∫ dγ = 2π
        let v = euler(
            |a| a.alpha().cos().powi(2) * a.beta().sin().powi(2),
            &grid,
            GammaIntegration::Numeric,
        );
        assert!((v - PI * 4.0 / 3.0 * TAU).abs() < 1e-12);
        // ∫ cos²γ cos⁴β: π · 2/5 · 2π
        let v = euler(
            |a| a.gamma().cos().powi(2) * a.beta().cos().powi(4),
            &grid,
            GammaIntegration::Numeric,
        );
        assert!((v - PI * 0.4 * TAU).abs() < 1e-12);
    }

    #[test]
    fn sphere_averages() {
        let grid = GridSpec::default();
        let avg = |f: fn(f64, f64) -> f64| integrate_sphere(|t, p| Ok(f(t, p)), &grid).unwrap();
        assert!((avg(|_, _| 1.0) - 1.0).abs() < 1e-14);
        assert!(avg(|t, _| t.cos()).abs() < 1e-14);
        assert!((avg(|t, _| t.cos().powi(2)) - 1.0 / 3.0).abs() < 1e-14);
        assert!((avg(|t, p| (t.sin() * p.cos()).powi(2)) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn nan_is_reported() {
        let err = integrate_euler(
            |a: &EulerAngles| Ok(if a.alpha() > 1.0 { f64::NAN } else { 0.0 }),
            &GridSpec::new(4, 2, 1).unwrap(),
            GammaIntegration::Analytic,
        )
        .unwrap_err();
        assert!(matches!(err, Error::QuadratureNaN { ref node } if node.contains("alpha=1.57")));
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(0, 1, 1).is_err());
        assert_eq!(GridSpec::default(), GridSpec::new(64, 32, 64).unwrap());
    }

    #[test]
    fn reduction_is_order_stable() {
        let grid = GridSpec::new(17, 9, 5).unwrap();
        let f = |a: &EulerAngles| (3.0 * a.alpha()).sin() + a.beta().cos().powi(3) + (a.gamma() * 2.0).cos();
        let first = euler(f, &grid, GammaIntegration::Numeric);
        for _ in 0..5 {
            assert_eq!(first.to_bits(), euler(f, &grid, GammaIntegration::Numeric).to_bits());
        }
    }
}
