//! Self-check suite comparing the numerical machinery against hand-derived
//! closed forms. Every check draws its inputs from a fixed-seed generator, so a
//! report is a deterministic function of the grid.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::contextuality::peres_mermin;
use crate::error::Result;
use crate::qcore::{projector_from, random_density, random_hermitian, ComplexMatrix, StateVector, TwiceJ};
use crate::quad::GridSpec;
use crate::scenarios::scenario_unitaries;
use crate::tomography::closed_form::{
    kcbs_projector_omega, real_projector_dual_value, real_state_omega, unitary_tomogram_closed,
};
use crate::tomography::{
    dual_symbol, fidelity, pair, reconstruct, rotated_tomogram, tomogram_of, unitary_tomogram, U3Params,
};

const SEED: u64 = 0x7153_7069_6e21;
const ANGLE_GRID: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub grid: GridSpec,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

fn check(name: &str, max_error: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: max_error <= tolerance,
        max_error,
        tolerance,
    }
}

/// (α, β) nodes of the 20×20 comparison grid, covering [0, 2π) × [0, π].
pub fn angle_grid() -> Vec<(f64, f64)> {
    let n = ANGLE_GRID;
    (0..n)
        .flat_map(|i| (0..n).map(move |k| (TAU * i as f64 / n as f64, PI * k as f64 / (n - 1) as f64)))
        .collect()
}

fn random_real_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.map(|x| x / n);
        }
    }
}

fn psi_of(theta: f64) -> StateVector {
    let (s, c) = theta.sin_cos();
    StateVector::from_real(&[s, c, 0.0]).expect("unit vector")
}

/// Dequantizer tomogram of (sin θ, cos θ, 0) against its closed form.
pub fn state_tomogram_error(rng: &mut ChaCha8Rng, samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let theta = rng.gen_range(0.0..PI);
        let tom = tomogram_of(&projector_from(&psi_of(theta)), TwiceJ::ONE)?;
        for (a, b) in angle_grid() {
            for m in [2, 0, -2] {
                worst = worst.max((tom.eval(m, a, b) - real_state_omega(theta, m, a, b)).abs());
            }
        }
    }
    Ok(worst)
}

/// Quantizer dual symbol of |A><A| for real A against its closed form.
pub fn dual_symbol_error(rng: &mut ChaCha8Rng, samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let a = random_real_vector(rng);
        let dual = dual_symbol(&projector_from(&StateVector::from_real(&a)?), TwiceJ::ONE)?;
        for (al, be) in angle_grid() {
            for m in [2, 0, -2] {
                worst = worst.max((dual.eval(m, al, be) - real_projector_dual_value(a, m, al, be)).abs());
            }
        }
    }
    Ok(worst)
}

/// Rotated tomograms of the pentagram unitaries against the printed ω₁…ω₅.
pub fn projector_tomogram_error(phis: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &phi in phis {
        let us = scenario_unitaries(0.0, phi)?;
        let mut toms: Vec<(usize, _)> = Vec::new();
        for (k, u) in us.projector_unitaries() {
            toms.push((k, rotated_tomogram(u, TwiceJ::ONE)?));
        }
        toms.push((3, rotated_tomogram(&ComplexMatrix::identity(3), TwiceJ::ONE)?));
        for (k, tom) in &toms {
            for (a, b) in angle_grid() {
                for m in [2, 0, -2] {
                    let closed = kcbs_projector_omega(*k, phi, m, a, b);
                    worst = worst.max((tom.eval(m, a, b) - closed).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Born pairing, direct trace and fidelity kernel against (A₁ sin θ + A₀ cos θ)².
/// Returns (pairing error, fidelity error).
pub fn born_errors(rng: &mut ChaCha8Rng, samples: usize, grid: &GridSpec) -> Result<(f64, f64)> {
    let mut pair_err = 0.0f64;
    let mut fid_err = 0.0f64;
    for _ in 0..samples {
        let theta = rng.gen_range(0.0..PI);
        let a = random_real_vector(rng);
        let closed = (a[0] * theta.sin() + a[1] * theta.cos()).powi(2);
        let psi = psi_of(theta);
        let av = StateVector::from_real(&a)?;
        let rho = projector_from(&psi);
        let proj = projector_from(&av);
        let state_tom = tomogram_of(&rho, TwiceJ::ONE)?;
        let paired = pair(&state_tom, &dual_symbol(&proj, TwiceJ::ONE)?, grid)?;
        let direct = crate::qcore::real_expectation(&rho, &proj)?;
        let fid = fidelity(&tomogram_of(&proj, TwiceJ::ONE)?, &state_tom, grid)?;
        pair_err = pair_err.max((paired - closed).abs()).max((direct - closed).abs());
        fid_err = fid_err.max((fid - closed).abs()).max((fid - paired).abs());
    }
    Ok((pair_err, fid_err))
}

/// Max-entry reconstruction error over random Hermitian operators.
pub fn reconstruction_error(rng: &mut ChaCha8Rng, j: TwiceJ, samples: usize, grid: &GridSpec) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let h = random_hermitian(j.dim(), rng);
        let back = reconstruct(&tomogram_of(&h, j)?, grid)?;
        worst = worst.max(back.max_abs_diff(&h));
    }
    Ok(worst)
}

pub fn random_u3_params(rng: &mut ChaCha8Rng) -> U3Params {
    U3Params {
        theta: std::array::from_fn(|_| rng.gen_range(0.0..PI / 2.0)),
        phi: std::array::from_fn(|_| rng.gen_range(0.0..TAU)),
    }
}

/// U(3) tomogram against (cos²θ₁, cos²θ₂ sin²θ₁, sin²θ₁ sin²θ₂).
pub fn unitary_tomogram_error(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p = random_u3_params(rng);
        let w = unitary_tomogram(&p);
        let c = unitary_tomogram_closed(p.theta[0], p.theta[1]);
        for i in 0..3 {
            worst = worst.max((w[i] - c[i]).abs());
        }
    }
    worst
}

/// |⟨χ⟩ - 6| over random two-qubit density operators.
pub fn peres_mermin_error(rng: &mut ChaCha8Rng, samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let r = peres_mermin(&random_density(4, rng))?;
        worst = worst.max((r.value - 6.0).abs());
    }
    Ok(worst)
}

/// Runs every check; `grid` drives the integrals (pairing, fidelity,
/// reconstruction).
pub fn run(grid: &GridSpec) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = vec![
        check("state-tomogram-closed-form", state_tomogram_error(&mut rng, 10)?, 1e-12),
        check("dual-symbol-closed-form", dual_symbol_error(&mut rng, 10)?, 1e-10),
        check("projector-tomograms", projector_tomogram_error(&[0.7, 0.1698])?, 1e-10),
    ];
    let (pair_err, fid_err) = born_errors(&mut rng, 50, grid)?;
    checks.push(check("born-rule-pairing", pair_err, 1e-9));
    checks.push(check("fidelity-kernel", fid_err, 1e-9));
    let r1 = reconstruction_error(&mut rng, TwiceJ::ONE, 20, grid)?;
    let r_half = reconstruction_error(&mut rng, TwiceJ::HALF, 10, grid)?;
    checks.push(check("reconstruction-spin-1", r1, 1e-8));
    checks.push(check("reconstruction-spin-1/2", r_half, 1e-8));
    checks.push(check(
        "unitary-tomogram-closed-form",
        unitary_tomogram_error(&mut rng, 100),
        1e-14,
    ));
    checks.push(check("peres-mermin-constant", peres_mermin_error(&mut rng, 50)?, 1e-12));
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        grid: *grid,
        checks,
        all_passed,
    })
}
