//! Spin tomograms and their dual symbols.
//!
//! The dequantizer for spin j at Euler angles x = (α, β, γ) and projection m
//! is the rotated projector `D(x)† |jm><jm| D(x)`, so the tomographic symbol
//! of an operator A is
//!
//! ```text
//! ω_A(m, α, β) = Σ_{m1 m2} D_{m m1} A_{m1 m2} D*_{m m2} = (D A D†)_{mm}
//! ```
//!
//! which does not depend on γ. The quantizer is
//!
//! ```text
//! Q_m(x) = 1/(8π²) · (-1)^{j-m} Σ_{j3=0}^{2j} (j j j3; m -m 0) (2j3+1)²
//!          · Σ_{m1 m2} |jm1> Φ^{j3}_{m1 m2}(x) <jm2|
//! Φ^{j3}_{m1 m2}(x) = (-1)^{j-m2} Σ_{m3} D^{j3}_{0 m3}(x) (j j j3; m1 -m2 m3)
//! ```
//!
//! and any operator is recovered as `A = Σ_m ∫ dΩ ω_A(m, x) Q_m(x)` with
//! `dΩ = dα dγ sinβ dβ`. For integer j the two sign factors reduce to
//! (-1)^m and (-1)^{m2}.

pub mod closed_form;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{wigner_3j, wigner_d_matrix, wigner_d_raw, EulerAngles, ThreeJArgs};
use crate::error::{Error, Result};
use crate::qcore::{tol, ComplexMatrix, TwiceJ};
use crate::quad::{integrate_euler, integrate_sphere, GammaIntegration, GridSpec};

/// Tolerance on tomogram values outside [0, 1] before a read is rejected.
pub const PROBABILITY_SLACK: f64 = 1e-10;

type SymbolFn = dyn Fn(i32, f64, f64) -> f64 + Send + Sync;

/// Probability-valued function ω(m, α, β) for a fixed spin.
#[derive(Clone)]
pub struct Tomogram {
    j: TwiceJ,
    eval: Arc<SymbolFn>,
}

impl fmt::Debug for Tomogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tomogram").field("j", &self.j).finish_non_exhaustive()
    }
}

impl Tomogram {
    /// Wraps an evaluator taking (twice-m, α, β).
    pub fn from_fn(j: TwiceJ, f: impl Fn(i32, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Tomogram { j, eval: Arc::new(f) }
    }

    pub fn j(&self) -> TwiceJ {
        self.j
    }

    /// Raw value; labels outside the multiplet evaluate to 0.
    pub fn eval(&self, two_m: i32, alpha: f64, beta: f64) -> f64 {
        if self.j.contains(two_m) {
            (self.eval)(two_m, alpha, beta)
        } else {
            0.0
        }
    }

    /// Value read as a probability: small excursions outside [0, 1] are
    /// clamped, larger ones are an error.
    pub fn probability(&self, two_m: i32, alpha: f64, beta: f64) -> Result<f64> {
        let v = self.eval(two_m, alpha, beta);
        if !v.is_finite() || !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&v) {
            return Err(Error::InvalidDistribution(format!(
                "tomogram value {v:e} at m={}/2, alpha={alpha}, beta={beta}",
                two_m
            )));
        }
        Ok(v.clamp(0.0, 1.0))
    }

    /// Probabilities for m = j..-j at one direction.
    pub fn distribution(&self, alpha: f64, beta: f64) -> Result<Vec<f64>> {
        self.j.magnetic().map(|m| self.probability(m, alpha, beta)).collect()
    }
}

/// Symbol of an operator with respect to the quantizer. Not a probability.
#[derive(Clone)]
pub struct DualSymbol {
    j: TwiceJ,
    eval: Arc<SymbolFn>,
}

impl fmt::Debug for DualSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualSymbol").field("j", &self.j).finish_non_exhaustive()
    }
}

impl DualSymbol {
    pub fn from_fn(j: TwiceJ, f: impl Fn(i32, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        DualSymbol { j, eval: Arc::new(f) }
    }

    pub fn j(&self) -> TwiceJ {
        self.j
    }

    pub fn eval(&self, two_m: i32, alpha: f64, beta: f64) -> f64 {
        if self.j.contains(two_m) {
            (self.eval)(two_m, alpha, beta)
        } else {
            0.0
        }
    }
}

fn check_dim(op: &ComplexMatrix, j: TwiceJ) -> Result<()> {
    if op.dim() != j.dim() {
        return Err(Error::DimMismatch {
            expected: j.dim(),
            found: op.dim(),
        });
    }
    Ok(())
}

fn check_hermitian(op: &ComplexMatrix) -> Result<()> {
    let deviation = op.hermiticity_error();
    if deviation > tol::HERM {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn check_same_spin(a: TwiceJ, b: TwiceJ) -> Result<()> {
    if a != b {
        return Err(Error::SpinMismatch { left: a.0, right: b.0 });
    }
    Ok(())
}

/// (-1)^{(two_j - two_m)/2}; the exponent is always an integer.
fn sign_j_minus_m(j: TwiceJ, two_m: i32) -> f64 {
    if ((j.0 as i32 - two_m) / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Rotated projector `D† |jm><jm| D` at the given Euler angles.
pub fn dequantizer(j: TwiceJ, two_m: i32, ang: &EulerAngles) -> Result<ComplexMatrix> {
    let row = j.check(two_m)?;
    let d = wigner_d_matrix(j, ang);
    Ok(ComplexMatrix::from_fn(j.dim(), |a, b| {
        d.get(row, a).conj() * d.get(row, b)
    }))
}

/// Tomogram ω(m, α, β) = Tr[op · dequantizer] of a Hermitian operator.
pub fn tomogram_of(op: &ComplexMatrix, j: TwiceJ) -> Result<Tomogram> {
    check_dim(op, j)?;
    check_hermitian(op)?;
    let op = op.clone();
    let two_j = j.0 as i32;
    let ms: Vec<i32> = j.magnetic().collect();
    Ok(Tomogram::from_fn(j, move |two_m, alpha, beta| {
        let row: Vec<Complex64> = ms
            .iter()
            .map(|&mc| wigner_d_raw(two_j, two_m, mc, alpha, beta, 0.0))
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, ra) in row.iter().enumerate() {
            for (b, rb) in row.iter().enumerate() {
                acc += ra * op.get(a, b) * rb.conj();
            }
        }
        acc.re
    }))
}

/// Precomputed 3j tables for the quantizer of one spin.
#[derive(Debug, Clone)]
pub struct QuantizerKernel {
    j: TwiceJ,
    /// `outer[j3][m_index]` = (-1)^{j-m} (j j j3; m -m 0)
    outer: Vec<Vec<f64>>,
    /// `inner[j3][a][b][m3 + j3]` = (2j3+1)² (-1)^{j-m_b} (j j j3; m_a -m_b m3)
    inner: Vec<Vec<Vec<Vec<f64>>>>,
}

impl QuantizerKernel {
    pub fn new(j: TwiceJ) -> Self {
        let ms: Vec<i32> = j.magnetic().collect();
        let max_j3 = j.0 as i32;
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for j3 in 0..=max_j3 {
            let tj3 = TwiceJ(2 * j3 as u32);
            outer.push(
                ms.iter()
                    .map(|&m| sign_j_minus_m(j, m) * wigner_3j(&ThreeJArgs::new([j, j, tj3], [m, -m, 0])))
                    .collect(),
            );
            let weight = f64::from(2 * j3 + 1).powi(2);
            inner.push(
                ms.iter()
                    .map(|&ma| {
                        ms.iter()
                            .map(|&mb| {
                                (-j3..=j3)
                                    .map(|m3| {
                                        weight
                                            * sign_j_minus_m(j, mb)
                                            * wigner_3j(&ThreeJArgs::new([j, j, tj3], [ma, -mb, 2 * m3]))
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        QuantizerKernel { j, outer, inner }
    }

    pub fn j(&self) -> TwiceJ {
        self.j
    }

    /// Â^{(j3)} for every j3 at the given angles.
    fn coupled_blocks(&self, alpha: f64, beta: f64, gamma: f64) -> Vec<ComplexMatrix> {
        let n = self.j.dim();
        self.inner
            .iter()
            .enumerate()
            .map(|(j3, table)| {
                let j3 = j3 as i32;
                let row: Vec<Complex64> = (-j3..=j3)
                    .map(|m3| wigner_d_raw(2 * j3, 0, 2 * m3, alpha, beta, gamma))
                    .collect();
                ComplexMatrix::from_fn(n, |a, b| table[a][b].iter().zip(&row).map(|(w, d)| d * *w).sum())
            })
            .collect()
    }

    fn combine(&self, blocks: &[ComplexMatrix], m_index: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.j.dim());
        for (block, coeffs) in blocks.iter().zip(&self.outer) {
            out.add_scaled(block, Complex64::new(coeffs[m_index] / (8.0 * PI * PI), 0.0));
        }
        out
    }

    /// Quantizer for one projection label.
    pub fn matrix(&self, two_m: i32, alpha: f64, beta: f64, gamma: f64) -> Result<ComplexMatrix> {
        let idx = self.j.check(two_m)?;
        Ok(self.combine(&self.coupled_blocks(alpha, beta, gamma), idx))
    }

    /// Quantizers for every m = j..-j, sharing the angular work.
    pub fn matrices(&self, alpha: f64, beta: f64, gamma: f64) -> Vec<ComplexMatrix> {
        let blocks = self.coupled_blocks(alpha, beta, gamma);
        (0..self.j.dim()).map(|i| self.combine(&blocks, i)).collect()
    }
}

/// Quantizer (1/8π²)·B_m(α, β). γ enters only through D^{j3}_{0 m3}, whose
/// γ phase is trivial.
pub fn quantizer(j: TwiceJ, two_m: i32, ang: &EulerAngles) -> Result<ComplexMatrix> {
    QuantizerKernel::new(j).matrix(two_m, ang.alpha(), ang.beta(), ang.gamma())
}

/// Inverts a tomogram with the analytic γ integral.
pub fn reconstruct(tom: &Tomogram, grid: &GridSpec) -> Result<ComplexMatrix> {
    reconstruct_with(tom, grid, GammaIntegration::Analytic)
}

pub fn reconstruct_with(tom: &Tomogram, grid: &GridSpec, gamma: GammaIntegration) -> Result<ComplexMatrix> {
    let kernel = QuantizerKernel::new(tom.j());
    let ms: Vec<i32> = tom.j().magnetic().collect();
    integrate_euler(
        |ang: &EulerAngles| {
            let qs = kernel.matrices(ang.alpha(), ang.beta(), ang.gamma());
            let mut acc = ComplexMatrix::zeros(tom.j().dim());
            for (q, &m) in qs.iter().zip(&ms) {
                acc.add_scaled(q, Complex64::new(tom.eval(m, ang.alpha(), ang.beta()), 0.0));
            }
            Ok(acc)
        },
        grid,
        gamma,
    )
}

/// Dual symbol ω^d(m, α, β) = Tr[op · quantizer] of a Hermitian operator.
pub fn dual_symbol(op: &ComplexMatrix, j: TwiceJ) -> Result<DualSymbol> {
    check_dim(op, j)?;
    check_hermitian(op)?;
    let kernel = QuantizerKernel::new(j);
    let op = op.clone();
    Ok(DualSymbol::from_fn(j, move |two_m, alpha, beta| {
        let q = kernel
            .matrix(two_m, alpha, beta, 0.0)
            .expect("label validated by DualSymbol::eval");
        crate::qcore::expectation(&op, &q).expect("dims validated").re
    }))
}

/// ⟨A⟩ = Σ_m ∫ dΩ ω_ρ(m, x) ω^d_A(m, x).
pub fn pair(state_tom: &Tomogram, dual: &DualSymbol, grid: &GridSpec) -> Result<f64> {
    check_same_spin(state_tom.j(), dual.j())?;
    let ms: Vec<i32> = state_tom.j().magnetic().collect();
    integrate_euler(
        |ang: &EulerAngles| {
            let (a, b) = (ang.alpha(), ang.beta());
            Ok(ms
                .iter()
                .map(|&m| state_tom.eval(m, a, b) * dual.eval(m, a, b))
                .sum::<f64>())
        },
        grid,
        GammaIntegration::Analytic,
    )
}

/// Tomogram of `U |j,j><j,j| U†`, the state whose amplitudes are the first
/// column of `u`.
pub fn rotated_tomogram(u: &ComplexMatrix, j: TwiceJ) -> Result<Tomogram> {
    check_dim(u, j)?;
    u.check_unitary(tol::NORM)?;
    let first = u.column(0);
    let proj = ComplexMatrix::from_fn(j.dim(), |r, c| first[r] * first[c].conj());
    tomogram_of(&proj, j)
}

/// Overlap Tr[P_k P_ψ] of two spin-1 pure states from their tomograms via
///
/// ```text
/// (2j+1) Σ_m ∫ dn/4π [ω_k(m) - ½ω_k(m+1) - ½ω_k(m-1)] ω_ψ(m)
/// ```
///
/// where ω_k(±(j+1)) = 0 and the direction n has polar angle β and azimuth α.
pub fn fidelity(tom_k: &Tomogram, tom_psi: &Tomogram, grid: &GridSpec) -> Result<f64> {
    check_same_spin(tom_k.j(), tom_psi.j())?;
    if tom_k.j() != TwiceJ::ONE {
        return Err(Error::InvalidArgument(format!(
            "fidelity kernel is defined for spin 1, got spin {}",
            tom_k.j()
        )));
    }
    let j = tom_k.j();
    let ms: Vec<i32> = j.magnetic().collect();
    let avg = integrate_sphere(
        |theta, phi| {
            Ok(ms
                .iter()
                .map(|&m| {
                    let kernel = tom_k.eval(m, phi, theta)
                        - 0.5 * tom_k.eval(m + 2, phi, theta)
                        - 0.5 * tom_k.eval(m - 2, phi, theta);
                    kernel * tom_psi.eval(m, phi, theta)
                })
                .sum::<f64>())
        },
        grid,
    )?;
    Ok(j.dim() as f64 * avg)
}

/// Parameters of the U(3) factorization `d3 · O3 · d2 · O2 · d1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct U3Params {
    /// θ1, θ2, θ3 ∈ [0, π/2]
    pub theta: [f64; 3],
    /// φ1..φ6 ∈ [0, 2π)
    pub phi: [f64; 6],
}

impl U3Params {
    pub fn new(theta: [f64; 3], phi: [f64; 6]) -> Result<Self> {
        for (i, t) in theta.iter().enumerate() {
            if !(0.0..=PI / 2.0).contains(t) {
                return Err(Error::OutOfDomain(format!("theta{} = {t} outside [0, π/2]", i + 1)));
            }
        }
        for (i, p) in phi.iter().enumerate() {
            if !(0.0..2.0 * PI).contains(p) {
                return Err(Error::OutOfDomain(format!("phi{} = {p} outside [0, 2π)", i + 1)));
            }
        }
        Ok(U3Params { theta, phi })
    }
}

/// Givens rotation J_{i,i+1}(θ) acting on rows/columns `i, i+1` (0-based).
fn givens(i: usize, theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let mut g = ComplexMatrix::identity(3);
    g.set(i, i, Complex64::new(c, 0.0));
    g.set(i, i + 1, Complex64::new(-s, 0.0));
    g.set(i + 1, i, Complex64::new(s, 0.0));
    g.set(i + 1, i + 1, Complex64::new(c, 0.0));
    g
}

fn phases(p: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::diagonal(&p.map(|x| Complex64::from_polar(1.0, x)))
}

/// A3 = d3 · O3 · d2¹ · O2¹ · d1² with O3 = J23(θ2)·J12(θ1) and O2¹ = J23(θ3).
pub fn u3_matrix(p: &U3Params) -> ComplexMatrix {
    let [t1, t2, t3] = p.theta;
    let [f1, f2, f3, f4, f5, f6] = p.phi;
    let d3 = phases([f1, f2, f3]);
    let o3 = &givens(1, t2) * &givens(0, t1);
    let d21 = phases([0.0, f4, f5]);
    let o21 = givens(1, t3);
    let d12 = phases([0.0, 0.0, f6]);
    &(&(&(&d3 * &o3) * &d21) * &o21) * &d12
}

/// Diagonal of A3 diag(1,0,0) A3†, ordered (m = 1, 0, -1).
pub fn unitary_tomogram(p: &U3Params) -> [f64; 3] {
    let a = u3_matrix(p);
    let top = ComplexMatrix::real_diagonal(&[1.0, 0.0, 0.0]);
    let rho = &(&a * &top) * &a.adjoint();
    [rho.get(0, 0).re, rho.get(1, 1).re, rho.get(2, 2).re]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{projector_from, random_density, random_hermitian, random_state, StateVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn random_angles(rng: &mut ChaCha8Rng) -> EulerAngles {
        EulerAngles::new(rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU)).unwrap()
    }

    #[test]
    fn dequantizer_identity_rotation() {
        let u = dequantizer(TwiceJ::ONE, 2, &EulerAngles::IDENTITY).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::real_diagonal(&[1.0, 0.0, 0.0])) < 1e-15);
        assert!(dequantizer(TwiceJ::ONE, 1, &EulerAngles::IDENTITY).is_err());
    }

    #[test]
    fn dequantizer_is_rank_one_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let ang = random_angles(&mut rng);
            for two_j in 1..=3 {
                let j = TwiceJ(two_j);
                for m in j.magnetic() {
                    let u = dequantizer(j, m, &ang).unwrap();
                    assert!((u.trace().re - 1.0).abs() < 1e-12);
                    u.check_projector().unwrap();
                }
            }
        }
    }

    #[test]
    fn dequantizer_middle_row() {
        // row m=0 of d^1(π/2) is (-1/√2, 0, 1/√2)
        let ang = EulerAngles::new(0.0, PI / 2.0, 0.0).unwrap();
        let u = dequantizer(TwiceJ::ONE, 0, &ang).unwrap();
        let v = [-0.5f64.sqrt(), 0.0, 0.5f64.sqrt()];
        for a in 0..3 {
            for b in 0..3 {
                assert!((u.get(a, b) - Complex64::new(v[a] * v[b], 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn tomogram_is_gamma_free_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let rho = random_density(3, &mut rng);
        let tom = tomogram_of(&rho, TwiceJ::ONE).unwrap();
        let ang = random_angles(&mut rng);
        for m in TwiceJ::ONE.magnetic() {
            let base = tom.eval(m, ang.alpha(), ang.beta());
            for _ in 0..10 {
                let g = rng.gen_range(0.0..TAU);
                let a = EulerAngles::new(ang.alpha(), ang.beta(), g).unwrap();
                let via_trace = crate::qcore::expectation(&rho, &dequantizer(TwiceJ::ONE, m, &a).unwrap())
                    .unwrap()
                    .re;
                assert!((via_trace - base).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn tomogram_normalized_and_mixed_is_flat() {
        let mixed = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        let tom = tomogram_of(&mixed, TwiceJ::ONE).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let (a, b) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI));
            for m in TwiceJ::ONE.magnetic() {
                assert!((tom.eval(m, a, b) - 1.0 / 3.0).abs() < 1e-15);
            }
        }
        let rho = random_density(4, &mut rng);
        let tom = tomogram_of(&rho, TwiceJ(3)).unwrap();
        for _ in 0..50 {
            let (a, b) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI));
            let total: f64 = tom.distribution(a, b).unwrap().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tomogram_rejects_bad_operators() {
        assert!(matches!(
            tomogram_of(&ComplexMatrix::identity(2), TwiceJ::ONE),
            Err(Error::DimMismatch { .. })
        ));
        let mut m = ComplexMatrix::zeros(3);
        m.set(0, 1, Complex64::new(1.0, 0.0));
        assert!(matches!(tomogram_of(&m, TwiceJ::ONE), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn probability_clamps_noise_and_rejects_garbage() {
        let tom = Tomogram::from_fn(TwiceJ::HALF, |m, _, _| if m > 0 { -5e-11 } else { -0.2 });
        assert_eq!(tom.probability(1, 0.0, 0.0).unwrap(), 0.0);
        assert!(tom.probability(-1, 0.0, 0.0).is_err());
        assert_eq!(tom.eval(3, 0.0, 0.0), 0.0);
    }

    #[test]
    fn round_trip_half_and_one() {
        let grid = GridSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for two_j in [1, 2] {
            let j = TwiceJ(two_j);
            for _ in 0..3 {
                let a = random_hermitian(j.dim(), &mut rng);
                let back = reconstruct(&tomogram_of(&a, j).unwrap(), &grid).unwrap();
                assert!(back.max_abs_diff(&a) < 1e-10, "j={j}: {}", back.max_abs_diff(&a));
            }
        }
    }

    #[test]
    fn round_trip_higher_spin() {
        let grid = GridSpec::new(16, 12, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for two_j in [3, 4] {
            let j = TwiceJ(two_j);
            let a = random_hermitian(j.dim(), &mut rng);
            let back = reconstruct(&tomogram_of(&a, j).unwrap(), &grid).unwrap();
            assert!(back.max_abs_diff(&a) < 1e-10);
        }
    }

    #[test]
    fn numeric_gamma_matches_analytic() {
        let grid = GridSpec::new(8, 6, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let a = random_hermitian(3, &mut rng);
        let tom = tomogram_of(&a, TwiceJ::ONE).unwrap();
        let analytic = reconstruct(&tom, &grid).unwrap();
        let numeric = reconstruct_with(&tom, &grid, GammaIntegration::Numeric).unwrap();
        assert!(analytic.max_abs_diff(&numeric) < 1e-13);
        assert!(analytic.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn coarse_grid_aliases() {
        let grid = GridSpec::new(4, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let a = random_hermitian(3, &mut rng);
        let back = reconstruct(&tomogram_of(&a, TwiceJ::ONE).unwrap(), &grid).unwrap();
        assert!(back.max_abs_diff(&a) > 1e-3);
    }

    #[test]
    fn dual_pairing_matches_trace() {
        let grid = GridSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        for _ in 0..5 {
            let rho = random_density(3, &mut rng);
            let a = random_hermitian(3, &mut rng);
            let lhs = pair(
                &tomogram_of(&rho, TwiceJ::ONE).unwrap(),
                &dual_symbol(&a, TwiceJ::ONE).unwrap(),
                &grid,
            )
            .unwrap();
            let rhs = crate::qcore::real_expectation(&rho, &a).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn dual_of_identity_and_zero() {
        let grid = GridSpec::default();
        let id = dual_symbol(&ComplexMatrix::identity(3), TwiceJ::ONE).unwrap();
        let zero = dual_symbol(&ComplexMatrix::zeros(3), TwiceJ::ONE).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let psi = random_state(3, &mut rng);
            let tom = tomogram_of(&projector_from(&psi), TwiceJ::ONE).unwrap();
            assert!((pair(&tom, &id, &grid).unwrap() - 1.0).abs() < 1e-9);
            let (a, b) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI));
            assert_eq!(zero.eval(0, a, b), 0.0);
        }
    }

    #[test]
    fn quantizer_is_hermitian_for_real_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..10 {
            let ang = random_angles(&mut rng);
            for m in TwiceJ::ONE.magnetic() {
                let q = quantizer(TwiceJ::ONE, m, &ang).unwrap();
                assert!(q.hermiticity_error() < 1e-14);
            }
        }
        assert!(quantizer(TwiceJ::ONE, 3, &EulerAngles::IDENTITY).is_err());
    }

    #[test]
    fn fidelity_of_pure_states() {
        let grid = GridSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let a = random_state(3, &mut rng);
            let b = random_state(3, &mut rng);
            let ta = tomogram_of(&projector_from(&a), TwiceJ::ONE).unwrap();
            let tb = tomogram_of(&projector_from(&b), TwiceJ::ONE).unwrap();
            let expected = a.inner(&b).unwrap().norm_sqr();
            assert!((fidelity(&ta, &tb, &grid).unwrap() - expected).abs() < 1e-10);
            assert!((fidelity(&ta, &ta, &grid).unwrap() - 1.0).abs() < 1e-10);
        }
        let e0 = tomogram_of(&projector_from(&StateVector::basis(3, 0)), TwiceJ::ONE).unwrap();
        let e1 = tomogram_of(&projector_from(&StateVector::basis(3, 1)), TwiceJ::ONE).unwrap();
        assert!(fidelity(&e0, &e1, &grid).unwrap().abs() < 1e-12);
        let half = tomogram_of(&ComplexMatrix::identity(2).scale_real(0.5), TwiceJ::HALF).unwrap();
        assert!(fidelity(&e0, &half, &grid).is_err());
    }

    #[test]
    fn rotated_tomogram_checks_unitarity() {
        let not_unitary = ComplexMatrix::identity(3).scale_real(2.0);
        assert!(matches!(
            rotated_tomogram(&not_unitary, TwiceJ::ONE),
            Err(Error::NotUnitary { .. })
        ));
        let tom = rotated_tomogram(&ComplexMatrix::identity(3), TwiceJ::ONE).unwrap();
        assert_eq!(tom.distribution(0.0, 0.0).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn u3_cases() {
        let id = u3_matrix(&U3Params::new([0.0; 3], [0.0; 6]).unwrap());
        assert!(id.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let t = 0.4f64;
        let a = u3_matrix(&U3Params::new([t, t, 0.0], [0.0; 6]).unwrap());
        let col = a.column(0);
        let expected = [t.cos(), t.cos() * t.sin(), t.sin() * t.sin()];
        for (c, e) in col.iter().zip(expected) {
            assert!((c - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
        let w = unitary_tomogram(&U3Params::new([PI / 2.0, PI / 2.0, 0.3], [0.0; 6]).unwrap());
        assert!((w[2] - 1.0).abs() < 1e-15 && w[0].abs() < 1e-15);
        assert!(U3Params::new([2.0, 0.0, 0.0], [0.0; 6]).is_err());
        assert!(U3Params::new([0.0; 3], [0.0, 0.0, 0.0, 0.0, 0.0, 7.0]).is_err());
    }

    #[test]
    fn u3_unitary_and_phase_free_tomogram() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..100 {
            let theta = [0; 3].map(|_| rng.gen_range(0.0..=PI / 2.0));
            let phi = [0; 6].map(|_| rng.gen_range(0.0..TAU));
            let p = U3Params::new(theta, phi).unwrap();
            assert!(u3_matrix(&p).unitarity_error() < 1e-12);
            let w = unitary_tomogram(&p);
            let plain = unitary_tomogram(&U3Params::new(theta, [0.0; 6]).unwrap());
            for k in 0..3 {
                assert!((w[k] - plain[k]).abs() < 1e-14);
            }
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }
}
