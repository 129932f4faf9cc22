//! Dense complex linear algebra for the small Hilbert spaces used throughout
//! the crate (spin-j spaces of dimension 2j+1 and the two-qubit space).
//!
//! Spin-j bases are ordered m = j, j-1, ..., -j: row/column 0 is m = j.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Numerical tolerances shared by the validators in this crate.
pub mod tol {
    pub const NORM: f64 = 1e-10;
    pub const HERM: f64 = 1e-10;
    pub const TRACE: f64 = 1e-10;
    pub const PSD: f64 = 1e-9;
    pub const IMAG: f64 = 1e-10;
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Twice a spin quantum number, so half-integer spins are stored exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwiceJ(pub u32);

impl TwiceJ {
    pub const HALF: TwiceJ = TwiceJ(1);
    pub const ONE: TwiceJ = TwiceJ(2);

    /// Spin whose multiplet has `dim` states.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(TwiceJ(dim as u32 - 1))
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Twice-m labels from m = j down to m = -j.
    pub fn magnetic(self) -> impl Iterator<Item = i32> + Clone {
        let two_j = self.0 as i32;
        (0..=self.0 as i32).map(move |k| two_j - 2 * k)
    }

    pub fn contains(self, two_m: i32) -> bool {
        two_m.unsigned_abs() <= self.0 && (two_m - self.0 as i32) % 2 == 0
    }

    /// Row index of the basis state |j m>.
    pub fn index_of(self, two_m: i32) -> Option<usize> {
        self.contains(two_m).then(|| ((self.0 as i32 - two_m) / 2) as usize)
    }

    pub fn check(self, two_m: i32) -> Result<usize> {
        self.index_of(two_m)
            .ok_or(Error::InvalidMagnetic { two_j: self.0, two_m })
    }
}

impl fmt::Display for TwiceJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix(DMatrix::from_element(dim, dim, ZERO))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        ComplexMatrix(DMatrix::from_fn(dim, dim, f))
    }

    /// Builds a matrix from row-major rows; rows must form a square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        let m = Self::from_fn(dim, |r, c| rows[r][c]);
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, |r, c| Complex64::new(rows[r][c], 0.0))
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        Self::from_fn(values.len(), |r, c| if r == c { values[r] } else { ZERO })
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        Self::from_fn(
            values.len(),
            |r, c| {
                if r == c {
                    Complex64::new(values[r], 0.0)
                } else {
                    ZERO
                }
            },
        )
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.0[(row, col)] = value;
    }

    pub fn as_inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// In-place `self += w * other`.
    pub fn add_scaled(&mut self, other: &ComplexMatrix, w: Complex64) {
        self.0.zip_apply(&other.0, |a, b| *a += w * b);
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff on mismatched dims");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite("matrix entries".into()))
        }
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn unitarity_error(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_error();
        if deviation <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }

    pub fn commutator(&self, other: &ComplexMatrix) -> ComplexMatrix {
        &(self * other) - &(other * self)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let deviation = self.hermiticity_error();
        if deviation > tol::HERM {
            return Err(Error::NotHermitian { deviation });
        }
        let mut values: Vec<f64> = self.0.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Validates the density-operator invariants (Hermitian, unit trace, PSD).
    pub fn check_density(&self) -> Result<()> {
        self.check_finite()?;
        let herm = self.hermiticity_error();
        if herm > tol::HERM {
            return Err(Error::NotDensity(format!("Hermiticity deviation {herm:e}")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let lowest = self.hermitian_eigenvalues()?[0];
        if lowest < -tol::PSD {
            return Err(Error::NotDensity(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(())
    }

    /// Validates the projector invariants (Hermitian, idempotent).
    pub fn check_projector(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tol::HERM {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let idem = (self * self).max_abs_diff(self);
        if idem > tol::HERM {
            return Err(Error::Degenerate(format!("not idempotent (deviation {idem:e})")));
        }
        Ok(())
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &StateVector) -> Result<Vec<Complex64>> {
        if v.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        let out = &self.0 * DVector::from_column_slice(v.entries());
        Ok(out.iter().copied().collect())
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        self.0.column(col).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.get(r, c)).collect())
            .collect()
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix product on mismatched dims");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<Complex64>);

impl StateVector {
    /// Accepts amplitudes whose Euclidean norm is 1 within `tol::NORM`.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state vector".into()));
        }
        let norm = norm(&entries);
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(entries: Vec<Complex64>) -> Result<Self> {
        let n = norm(&entries);
        if !n.is_finite() || n <= tol::NORM {
            return Err(Error::Degenerate(format!("cannot normalize vector of norm {n:e}")));
        }
        Self::new(entries.into_iter().map(|z| z / n).collect())
    }

    /// Basis state with a single unit amplitude at `index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[index] = ONE;
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    /// `<self|other>` (antilinear in `self`).
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum())
    }

    /// Real parts of the amplitudes; errors if any imaginary part is nonzero.
    pub fn to_real(&self) -> Result<Vec<f64>> {
        self.0
            .iter()
            .map(|z| {
                if z.im.abs() > tol::IMAG {
                    Err(Error::InvalidArgument("state vector is not real".into()))
                } else {
                    Ok(z.re)
                }
            })
            .collect()
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// |A><A| for a normalized state.
pub fn projector_from(state: &StateVector) -> ComplexMatrix {
    let v = state.entries();
    ComplexMatrix::from_fn(v.len(), |r, c| v[r] * v[c].conj())
}

/// Tr[rho · obs].
pub fn expectation(rho: &ComplexMatrix, obs: &ComplexMatrix) -> Result<Complex64> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            found: obs.dim(),
        });
    }
    let n = rho.dim();
    let mut acc = ZERO;
    for r in 0..n {
        for c in 0..n {
            acc += rho.get(r, c) * obs.get(c, r);
        }
    }
    Ok(acc)
}

/// Real part of Tr[rho · obs], rejecting an imaginary part above `tol::IMAG`.
pub fn real_expectation(rho: &ComplexMatrix, obs: &ComplexMatrix) -> Result<f64> {
    let z = expectation(rho, obs)?;
    if z.im.abs() > tol::IMAG {
        return Err(Error::NotHermitian { deviation: z.im.abs() });
    }
    Ok(z.re)
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Spin-1 generators (Jx, Jy, Jz) in the |1,m> basis, m = 1, 0, -1.
pub fn spin1_generators() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    spin_generators(TwiceJ::ONE)
}

/// Angular momentum generators for arbitrary spin in the m = j..-j basis.
pub fn spin_generators(j: TwiceJ) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let jv = j.value();
    let ms: Vec<f64> = j.magnetic().map(|t| f64::from(t) / 2.0).collect();
    let n = j.dim();
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits one row above |m>.
    let raise = ComplexMatrix::from_fn(n, |r, c| {
        if c == r + 1 {
            let m = ms[c];
            Complex64::new((jv * (jv + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let lower = raise.adjoint();
    let jx = (&raise + &lower).scale_real(0.5);
    let jy = (&raise - &lower).scale(Complex64::new(0.0, -0.5));
    let jz = ComplexMatrix::real_diagonal(&ms);
    (jx, jy, jz)
}

/// J·l for a real direction `l` (not required to be normalized).
pub fn spin1_projection(l: [f64; 3]) -> ComplexMatrix {
    let (jx, jy, jz) = spin1_generators();
    let mut out = jx.scale_real(l[0]);
    out.add_scaled(&jy, Complex64::new(l[1], 0.0));
    out.add_scaled(&jz, Complex64::new(l[2], 0.0));
    out
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |r, c| match (r, c) {
        (0, 1) => Complex64::new(0.0, -1.0),
        (1, 0) => Complex64::new(0.0, 1.0),
        _ => ZERO,
    })
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::real_diagonal(&[1.0, -1.0])
}

/// Normalized cross product of two real 3-vectors.
pub fn cross_normalized(a: [f64; 3], b: [f64; 3]) -> Result<[f64; 3]> {
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    if n.is_nan() || n <= tol::NORM {
        return Err(Error::Degenerate(format!(
            "cross product norm {n:e}: inputs are parallel"
        )));
    }
    Ok([c[0] / n, c[1] / n, c[2] / n])
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    StateVector::normalized(v).expect("gaussian vector has nonzero norm")
}

/// Random real unit vector.
pub fn random_real_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(standard_normal(rng), 0.0)).collect();
    StateVector::normalized(v).expect("gaussian vector has nonzero norm")
}

/// Random full-rank density operator G G† / Tr[G G†] with Ginibre G.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| Complex64::new(standard_normal(rng), standard_normal(rng)));
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    let mut rho = gg.scale_real(1.0 / tr);
    // exact Hermitian symmetrization
    rho = (&rho + &rho.adjoint()).scale_real(0.5);
    rho
}

/// Random Hermitian matrix with standard normal entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| Complex64::new(standard_normal(rng), standard_normal(rng)));
    (&g + &g.adjoint()).scale_real(0.5)
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            dim: self.dim(),
            entries: self
                .rows()
                .into_iter()
                .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.entries.len() != raw.dim {
            return Err(serde::de::Error::custom(format!(
                "dim {} but {} rows",
                raw.dim,
                raw.entries.len()
            )));
        }
        let rows: Vec<Vec<Complex64>> = raw
            .entries
            .iter()
            .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorJson {
            dim: self.dim(),
            entries: self.0.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = VectorJson::deserialize(d)?;
        if raw.entries.len() != raw.dim {
            return Err(serde::de::Error::custom(format!(
                "dim {} but {} entries",
                raw.dim,
                raw.entries.len()
            )));
        }
        StateVector::new(raw.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            .map_err(serde::de::Error::custom)
    }
}
