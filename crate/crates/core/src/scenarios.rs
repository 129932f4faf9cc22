//! Named configurations: the KCBS pentagram vectors and their unitaries, the
//! Peres-Mermin square, and symmetric cyclically orthogonal direction sets.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{cross_normalized, dot3, pauli_x, pauli_y, pauli_z, tensor, ComplexMatrix, StateVector};

/// Default state angle θ of the KCBS scenario.
pub const KCBS_THETA: f64 = 0.2366;
/// Default opening angle φ of the KCBS scenario.
pub const KCBS_PHI: f64 = 0.1698;

const CYCLIC_TOL: f64 = 1e-10;

/// The state ψ = (sin θ, cos θ, 0) and the five cyclically orthogonal
/// vectors A₁…A₅.
#[derive(Debug, Clone, PartialEq)]
pub struct KcbsScenario {
    pub theta: f64,
    pub phi: f64,
    pub psi: StateVector,
    pub a: [StateVector; 5],
}

impl KcbsScenario {
    /// Real components of Aₖ (k = 1..5).
    pub fn vector(&self, k: usize) -> [f64; 3] {
        let v = self.a[k - 1].to_real().expect("scenario vectors are real");
        [v[0], v[1], v[2]]
    }

    /// |⟨Aₖ|ψ⟩|² for k = 1..5.
    pub fn probabilities(&self) -> [f64; 5] {
        std::array::from_fn(|i| self.a[i].inner(&self.psi).map(|z| z.norm_sqr()).unwrap_or(f64::NAN))
    }
}

fn check_phi(phi: f64) -> Result<()> {
    if !phi.is_finite() || (2.0 * phi).cos() < 0.0 {
        return Err(Error::OutOfDomain(format!("sqrt(cos 2φ) undefined at φ = {phi}")));
    }
    Ok(())
}

fn a1(phi: f64) -> [f64; 3] {
    let c = phi.cos();
    [
        (2.0 * phi).cos().sqrt() / (SQRT_2 * c),
        phi.tan() / SQRT_2,
        1.0 / SQRT_2,
    ]
}

fn a4(phi: f64) -> [f64; 3] {
    [0.0, phi.cos(), phi.sin()]
}

pub fn kcbs_scenario(theta: f64, phi: f64) -> Result<KcbsScenario> {
    check_phi(phi)?;
    if !theta.is_finite() {
        return Err(Error::NonFinite(format!("θ = {theta}")));
    }
    let (s, c) = phi.sin_cos();
    let v1 = a1(phi);
    let v4 = a4(phi);
    let mut v5 = cross_normalized(v1, v4)?;
    let u5_col = [-v1[0], -v1[1], v1[2]];
    let align = dot3(v5, u5_col);
    if (align.abs() - 1.0).abs() > CYCLIC_TOL {
        return Err(Error::Degenerate(format!(
            "A₅ differs from the U₅ column: overlap {align}"
        )));
    }
    if align < 0.0 {
        v5 = v5.map(|x| -x);
    }
    let vectors = [v1, [0.0, c, -s], [1.0, 0.0, 0.0], v4, v5];
    for i in 0..5 {
        let overlap = dot3(vectors[i], vectors[(i + 1) % 5]).abs();
        if overlap > CYCLIC_TOL {
            return Err(Error::NotOrthogonal { overlap });
        }
    }
    let mut a = Vec::with_capacity(5);
    for v in &vectors {
        a.push(StateVector::from_real(v)?);
    }
    let (st, ct) = theta.sin_cos();
    Ok(KcbsScenario {
        theta,
        phi,
        psi: StateVector::from_real(&[st, ct, 0.0])?,
        a: a.try_into().expect("five vectors"),
    })
}

/// Unitaries whose first columns are A₁, A₂, A₄, A₅ and ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioUnitaries {
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    pub u4: ComplexMatrix,
    pub u5: ComplexMatrix,
    pub u_psi: ComplexMatrix,
}

impl ScenarioUnitaries {
    /// (k, Uₖ) for k = 1, 2, 4, 5.
    pub fn projector_unitaries(&self) -> [(usize, &ComplexMatrix); 4] {
        [(1, &self.u1), (2, &self.u2), (4, &self.u4), (5, &self.u5)]
    }
}

pub fn scenario_unitaries(theta: f64, phi: f64) -> Result<ScenarioUnitaries> {
    check_phi(phi)?;
    let (s, c) = phi.sin_cos();
    let t = phi.tan();
    let c2 = (2.0 * phi).cos();
    let r = (3.0 * c * c - 1.0).sqrt();
    let q = (3.0 * c2 + 1.0).sqrt();
    let u1_rows = [
        [c2.sqrt() / (SQRT_2 * c), -c / r, t * (c2 / (3.0 * c2 + 1.0)).sqrt()],
        [t / SQRT_2, 0.0, -(2.0 * c - t * s) / q],
        [1.0 / SQRT_2, c2.sqrt() / r, s / q],
    ];
    let mut u5_rows = u1_rows;
    for row in u5_rows.iter_mut().take(2) {
        *row = row.map(|x| -x);
    }
    let (st, ct) = theta.sin_cos();
    Ok(ScenarioUnitaries {
        u1: ComplexMatrix::from_real_rows(u1_rows),
        u2: ComplexMatrix::from_real_rows([[0.0, 0.0, 1.0], [c, s, 0.0], [-s, c, 0.0]]),
        u4: ComplexMatrix::from_real_rows([[0.0, 0.0, 1.0], [c, -s, 0.0], [s, c, 0.0]]),
        u5: ComplexMatrix::from_real_rows(u5_rows),
        u_psi: ComplexMatrix::from_real_rows([[st, -ct, 0.0], [ct, st, 0.0], [0.0, 0.0, 1.0]]),
    })
}

/// The nine two-qubit observables of the Peres-Mermin square. `upper_*` are
/// A, B, C and `lower_*` are a, b, c.
#[derive(Debug, Clone, PartialEq)]
pub struct PeresMerminSquare {
    pub upper_a: ComplexMatrix,
    pub upper_b: ComplexMatrix,
    pub upper_c: ComplexMatrix,
    pub lower_a: ComplexMatrix,
    pub lower_b: ComplexMatrix,
    pub lower_c: ComplexMatrix,
    pub alpha: ComplexMatrix,
    pub beta: ComplexMatrix,
    pub gamma: ComplexMatrix,
}

/// Product order of the three rows.
pub const PM_ROWS: [[&str; 3]; 3] = [["A", "B", "C"], ["b", "c", "a"], ["γ", "α", "β"]];
/// Product order of the three columns; the last has product -I.
pub const PM_COLUMNS: [[&str; 3]; 3] = [["A", "α", "a"], ["b", "B", "β"], ["γ", "c", "C"]];

impl PeresMerminSquare {
    pub fn get(&self, label: &str) -> Option<&ComplexMatrix> {
        Some(match label {
            "A" => &self.upper_a,
            "B" => &self.upper_b,
            "C" => &self.upper_c,
            "a" => &self.lower_a,
            "b" => &self.lower_b,
            "c" => &self.lower_c,
            "α" => &self.alpha,
            "β" => &self.beta,
            "γ" => &self.gamma,
            _ => return None,
        })
    }

    pub fn labeled(&self) -> [(&'static str, &ComplexMatrix); 9] {
        [
            ("A", &self.upper_a),
            ("B", &self.upper_b),
            ("C", &self.upper_c),
            ("a", &self.lower_a),
            ("b", &self.lower_b),
            ("c", &self.lower_c),
            ("α", &self.alpha),
            ("β", &self.beta),
            ("γ", &self.gamma),
        ]
    }

    /// Ordered product of a labeled triple.
    pub fn product(&self, labels: [&str; 3]) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::identity(4);
        for l in labels {
            let m = self
                .get(l)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown Peres-Mermin label {l}")))?;
            out = &out * m;
        }
        Ok(out)
    }
}

pub fn peres_mermin_square() -> PeresMerminSquare {
    let id = ComplexMatrix::identity(2);
    let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
    PeresMerminSquare {
        upper_a: tensor(&x, &id),
        upper_b: tensor(&id, &x),
        upper_c: tensor(&x, &x),
        lower_a: tensor(&id, &y),
        lower_b: tensor(&y, &id),
        lower_c: tensor(&y, &y),
        alpha: tensor(&x, &y),
        beta: tensor(&y, &x),
        gamma: tensor(&z, &z),
    }
}

/// Unit vectors l₀…l_{n-1} at polar angle Θ with cos²Θ = cos(π/n)/(1 + cos(π/n))
/// and azimuth step π(n-1)/n, so that neighbors (cyclically) are orthogonal.
pub fn symmetric_ncycle_directions(n: usize) -> Result<Vec<[f64; 3]>> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "symmetric directions need odd n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    let c = (PI / nf).cos();
    let cos_t = (c / (1.0 + c)).sqrt();
    let sin_t = (1.0 / (1.0 + c)).sqrt();
    Ok((0..n)
        .map(|k| {
            let az = PI * (nf - 1.0) / nf * k as f64;
            [sin_t * az.cos(), sin_t * az.sin(), cos_t]
        })
        .collect())
}

/// The symmetry axis (0, 0, 1) of [`symmetric_ncycle_directions`].
pub const NCYCLE_AXIS: [f64; 3] = [0.0, 0.0, 1.0];

/// Spin-1 state with zero projection along the unit vector `n`, written in the
/// m = 1, 0, -1 basis: n_x|x⟩ + n_y|y⟩ + n_z|z⟩ with |x⟩ = (-|1⟩ + |-1⟩)/√2,
/// |y⟩ = i(|1⟩ + |-1⟩)/√2, |z⟩ = |0⟩.
pub fn zero_projection_state(n: [f64; 3]) -> Result<StateVector> {
    let [nx, ny, nz] = n;
    let h = 1.0 / SQRT_2;
    StateVector::new(vec![
        Complex64::new(-nx * h, ny * h),
        Complex64::new(nz, 0.0),
        Complex64::new(nx * h, ny * h),
    ])
}

/// Unit vector for polar angle θ and azimuth φ.
pub fn sphere_point(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Summary used by the CLI when listing a scenario.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioSummary {
    pub theta: f64,
    pub phi: f64,
    pub probabilities: [f64; 5],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{projector_from, spin1_projection};

    #[test]
    fn default_scenario_is_cyclic() {
        let sc = kcbs_scenario(KCBS_THETA, KCBS_PHI).unwrap();
        for i in 0..5 {
            let z = sc.a[i].inner(&sc.a[(i + 1) % 5]).unwrap();
            assert!(z.norm() < 1e-12);
        }
        let a5 = sc.vector(5);
        assert!((a5[0] + 0.6966).abs() < 1e-4 && (a5[1] + 0.1212).abs() < 1e-4);
        assert!((a5[2] - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn domain_edges() {
        let sc = kcbs_scenario(0.3, PI / 4.0 - 1e-9).unwrap();
        assert!(sc.vector(1)[0].abs() < 1e-4);
        let err = kcbs_scenario(0.3, 0.9).unwrap_err();
        assert!(err.to_string().contains("cos 2φ"));
        assert!(scenario_unitaries(0.3, 0.9).is_err());
    }

    #[test]
    fn unitaries_carry_the_vectors() {
        for &phi in &[0.05, KCBS_PHI, 0.5, 0.7] {
            let sc = kcbs_scenario(0.4, phi).unwrap();
            let us = scenario_unitaries(0.4, phi).unwrap();
            for (k, u) in us.projector_unitaries() {
                assert!(u.unitarity_error() < 1e-10, "k={k} phi={phi}");
                assert!((u.determinant().norm() - 1.0).abs() < 1e-10);
                let col = StateVector::new(u.column(0)).unwrap();
                assert!(col.inner(&sc.a[k - 1]).unwrap().re > 1.0 - 1e-12, "k={k} phi={phi}");
            }
            let col = StateVector::new(us.u_psi.column(0)).unwrap();
            assert!((col.inner(&sc.psi).unwrap().re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn printed_u2_and_u_psi() {
        let us = scenario_unitaries(0.0, 0.3).unwrap();
        let (s, c) = 0.3f64.sin_cos();
        let u2 = ComplexMatrix::from_real_rows([[0.0, 0.0, 1.0], [c, s, 0.0], [-s, c, 0.0]]);
        assert_eq!(us.u2, u2);
        assert!(us.u2.unitarity_error() < 1e-15);
        let col: Vec<f64> = us.u_psi.column(0).iter().map(|z| z.re).collect();
        assert_eq!(col, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn square_structure() {
        let sq = peres_mermin_square();
        let id = ComplexMatrix::identity(4);
        for (label, m) in sq.labeled() {
            assert!((m * m).max_abs_diff(&id) < 1e-15, "{label}");
            assert!(m.is_hermitian(1e-15));
        }
        for triple in PM_ROWS.iter().chain(PM_COLUMNS.iter()) {
            for i in 0..3 {
                for j in 0..3 {
                    let c = sq.get(triple[i]).unwrap().commutator(sq.get(triple[j]).unwrap());
                    assert!(c.max_abs() < 1e-15);
                }
            }
        }
        for (i, triple) in PM_ROWS.iter().chain(PM_COLUMNS.iter()).enumerate() {
            let sign = if i == 5 { -1.0 } else { 1.0 };
            let p = sq.product(*triple).unwrap();
            assert!(p.max_abs_diff(&id.scale_real(sign)) < 1e-15, "{triple:?}");
        }
        let ab = &sq.upper_a * &sq.upper_b;
        assert!(ab.max_abs_diff(&(&sq.upper_b * &sq.upper_a)) == 0.0);
    }

    #[test]
    fn symmetric_directions_are_cyclic() {
        for n in [3, 5, 7, 9] {
            let d = symmetric_ncycle_directions(n).unwrap();
            for k in 0..n {
                assert!(dot3(d[k], d[(k + 1) % n]).abs() < 1e-15);
                assert!((dot3(d[k], d[k]) - 1.0).abs() < 1e-15);
            }
        }
        assert!(symmetric_ncycle_directions(4).is_err());
    }

    #[test]
    fn zero_projection_state_is_a_null_vector() {
        for &(t, p) in &[(0.0, 0.0), (0.4, 1.1), (2.0, 4.0)] {
            let n = sphere_point(t, p);
            let s = zero_projection_state(n).unwrap();
            let jl = spin1_projection(n);
            let v = jl.apply(&s).unwrap();
            assert!(v.iter().all(|z| z.norm() < 1e-15));
            let expect = crate::qcore::real_expectation(&projector_from(&s), &(&jl * &jl)).unwrap();
            assert!(expect.abs() < 1e-15);
        }
    }
}
