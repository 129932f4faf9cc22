//! Rotation-group machinery: Jacobi polynomials, Wigner small-d and D
//! elements, and Wigner 3j symbols.
//!
//! Phase convention for the rotation matrix elements:
//!
//! ```text
//! D^j_{m'm}(α, β, γ) = e^{i m' γ} d^j_{m'm}(β) e^{i m α}
//! d^j_{m'm}(β) = sqrt[(j+m')!(j-m')! / ((j+m)!(j-m)!)]
//!                · cos(β/2)^{m'+m} · sin(β/2)^{m'-m} · P^{(m'-m, m'+m)}_{j-m'}(cos β)
//! ```
//!
//! With this convention d^1(β) has +sin β/√2 in the (m'=1, m=0) slot, and the
//! full matrix factorizes as D(α,β,γ) = D(0,0,γ)·D(0,β,0)·D(α,0,0).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, TwiceJ};

/// Euler angles in radians: α, γ ∈ [0, 2π), β ∈ [0, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles {
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::NonFinite("Euler angles".into()));
        }
        if !(0.0..TAU).contains(&alpha) || !(0.0..TAU).contains(&gamma) {
            return Err(Error::OutOfDomain(format!(
                "alpha = {alpha}, gamma = {gamma} must lie in [0, 2π)"
            )));
        }
        if !(0.0..=std::f64::consts::PI).contains(&beta) {
            return Err(Error::OutOfDomain(format!("beta = {beta} must lie in [0, π]")));
        }
        Ok(EulerAngles { alpha, beta, gamma })
    }

    /// Reduces α and γ modulo 2π; β must already lie in [0, π].
    pub fn wrapped(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(alpha.rem_euclid(TAU) % TAU, beta, gamma.rem_euclid(TAU) % TAU)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Arguments of a 3j symbol ( j1 j2 j3 ; m1 m2 m3 ), with twice-m labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThreeJArgs {
    pub j1: TwiceJ,
    pub j2: TwiceJ,
    pub j3: TwiceJ,
    pub m1: i32,
    pub m2: i32,
    pub m3: i32,
}

impl ThreeJArgs {
    pub fn new(j: [TwiceJ; 3], m: [i32; 3]) -> Self {
        ThreeJArgs {
            j1: j[0],
            j2: j[1],
            j3: j[2],
            m1: m[0],
            m2: m[1],
            m3: m[2],
        }
    }

    /// Integer-spin shorthand: all arguments are plain j and m (not doubled).
    pub fn integer(j1: u32, j2: u32, j3: u32, m1: i32, m2: i32, m3: i32) -> Self {
        Self::new(
            [TwiceJ(2 * j1), TwiceJ(2 * j2), TwiceJ(2 * j3)],
            [2 * m1, 2 * m2, 2 * m3],
        )
    }
}

const FACTORIAL_TABLE_LEN: usize = 21;

const fn factorial_table() -> [u64; FACTORIAL_TABLE_LEN] {
    let mut table = [1u64; FACTORIAL_TABLE_LEN];
    let mut i = 1;
    while i < FACTORIAL_TABLE_LEN {
        table[i] = table[i - 1] * i as u64;
        i += 1;
    }
    table
}

static FACTORIALS: [u64; FACTORIAL_TABLE_LEN] = factorial_table();

/// n! as a float; exact integers up to 20!.
pub fn factorial(n: u32) -> f64 {
    let n = n as usize;
    if n < FACTORIAL_TABLE_LEN {
        FACTORIALS[n] as f64
    } else {
        (FACTORIAL_TABLE_LEN..=n).fold(FACTORIALS[FACTORIAL_TABLE_LEN - 1] as f64, |acc, k| acc * k as f64)
    }
}

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence.
pub fn jacobi_poly(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    if n == 1 {
        return p1;
    }
    let (mut prev, mut cur) = (1.0, p1);
    for k in 2..=n {
        let k = f64::from(k);
        let s = 2.0 * k + a + b;
        let denom = 2.0 * k * (k + a + b) * (s - 2.0);
        if denom == 0.0 {
            // recurrence is singular for some negative parameter pairs
            return jacobi_binomial_sum(n, a, b, x);
        }
        let next = ((s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * cur
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * s * prev)
            / denom;
        prev = cur;
        cur = next;
    }
    cur
}

fn generalized_binomial(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - f64::from(i)) / f64::from(k - i))
}

fn jacobi_binomial_sum(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let nf = f64::from(n);
    let lo = (x - 1.0) / 2.0;
    let hi = (x + 1.0) / 2.0;
    (0..=n)
        .map(|s| {
            generalized_binomial(nf + a, n - s)
                * generalized_binomial(nf + b, s)
                * lo.powi(s as i32)
                * hi.powi((n - s) as i32)
        })
        .sum()
}

fn parity_sign(exponent: i32) -> f64 {
    if exponent.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Direct evaluation for the region m' >= |m| where every exponent is nonnegative.
fn small_d_canonical(two_j: i32, two_mp: i32, two_m: i32, beta: f64) -> f64 {
    let fact = |t: i32| factorial(t as u32);
    let pref = (fact((two_j + two_mp) / 2) * fact((two_j - two_mp) / 2)
        / (fact((two_j + two_m) / 2) * fact((two_j - two_m) / 2)))
    .sqrt();
    let cos_pow = (two_mp + two_m) / 2;
    let sin_pow = (two_mp - two_m) / 2;
    let n = ((two_j - two_mp) / 2) as u32;
    let half = beta / 2.0;
    pref * half.cos().powi(cos_pow)
        * half.sin().powi(sin_pow)
        * jacobi_poly(n, f64::from(sin_pow), f64::from(cos_pow), beta.cos())
}

fn small_d_unchecked(two_j: i32, two_mp: i32, two_m: i32, beta: f64) -> f64 {
    // d_{m'm} = (-1)^{m'-m} d_{m m'} = d_{-m,-m'} = (-1)^{m'-m} d_{-m',-m}
    let flip = parity_sign((two_mp - two_m) / 2);
    if two_mp >= two_m.abs() {
        small_d_canonical(two_j, two_mp, two_m, beta)
    } else if two_m >= two_mp.abs() {
        flip * small_d_canonical(two_j, two_m, two_mp, beta)
    } else if -two_m >= two_mp.abs() {
        small_d_canonical(two_j, -two_m, -two_mp, beta)
    } else {
        flip * small_d_canonical(two_j, -two_mp, -two_m, beta)
    }
}

/// Small-d element d^j_{m_row, m_col}(β), labels given as twice-m.
pub fn small_d(j: TwiceJ, m_row: i32, m_col: i32, beta: f64) -> Result<f64> {
    j.check(m_row)?;
    j.check(m_col)?;
    Ok(small_d_unchecked(j.0 as i32, m_row, m_col, beta))
}

/// Full real small-d matrix, rows and columns ordered m = j..-j.
pub fn small_d_matrix(j: TwiceJ, beta: f64) -> Vec<Vec<f64>> {
    let two_j = j.0 as i32;
    j.magnetic()
        .map(|mp| j.magnetic().map(|m| small_d_unchecked(two_j, mp, m, beta)).collect())
        .collect()
}

pub(crate) fn wigner_d_raw(two_j: i32, two_mp: i32, two_m: i32, alpha: f64, beta: f64, gamma: f64) -> Complex64 {
    let phase = 0.5 * (f64::from(two_mp) * gamma + f64::from(two_m) * alpha);
    Complex64::from_polar(small_d_unchecked(two_j, two_mp, two_m, beta), phase)
}

/// Rotation matrix element D^j_{m_row, m_col}(α, β, γ).
pub fn wigner_d(j: TwiceJ, m_row: i32, m_col: i32, ang: &EulerAngles) -> Result<Complex64> {
    j.check(m_row)?;
    j.check(m_col)?;
    Ok(wigner_d_raw(j.0 as i32, m_row, m_col, ang.alpha, ang.beta, ang.gamma))
}

/// Full (2j+1)×(2j+1) rotation matrix.
pub fn wigner_d_matrix(j: TwiceJ, ang: &EulerAngles) -> ComplexMatrix {
    let ms: Vec<i32> = j.magnetic().collect();
    let two_j = j.0 as i32;
    ComplexMatrix::from_fn(j.dim(), |r, c| {
        wigner_d_raw(two_j, ms[r], ms[c], ang.alpha, ang.beta, ang.gamma)
    })
}

/// Neumaier-compensated sum.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Wigner 3j symbol by the Racah single-sum formula. Couplings that violate
/// the triangle rule, the projection sum rule or the |m| <= j bounds give 0.
pub fn wigner_3j(args: &ThreeJArgs) -> f64 {
    let (j1, j2, j3) = (args.j1.0 as i32, args.j2.0 as i32, args.j3.0 as i32);
    let (m1, m2, m3) = (args.m1, args.m2, args.m3);
    if !(args.j1.contains(m1) && args.j2.contains(m2) && args.j3.contains(m3)) {
        return 0.0;
    }
    if m1 + m2 + m3 != 0 || (j1 + j2 + j3) % 2 != 0 {
        return 0.0;
    }
    if j3 < (j1 - j2).abs() || j3 > j1 + j2 {
        return 0.0;
    }
    let f = |t: i32| factorial(t as u32);
    let triangle =
        (f((j1 + j2 - j3) / 2) * f((j1 - j2 + j3) / 2) * f((-j1 + j2 + j3) / 2) / f((j1 + j2 + j3) / 2 + 1)).sqrt();
    let norm = (f((j1 + m1) / 2)
        * f((j1 - m1) / 2)
        * f((j2 + m2) / 2)
        * f((j2 - m2) / 2)
        * f((j3 + m3) / 2)
        * f((j3 - m3) / 2))
    .sqrt();
    let k_min = 0.max((j2 - j3 - m1) / 2).max((j1 - j3 + m2) / 2);
    let k_max = ((j1 + j2 - j3) / 2).min((j1 - m1) / 2).min((j2 + m2) / 2);
    if k_min > k_max {
        return 0.0;
    }
    let series = compensated_sum((k_min..=k_max).map(|k| {
        parity_sign(k)
            / (f(k)
                * f((j3 - j2 + m1) / 2 + k)
                * f((j3 - j1 - m2) / 2 + k)
                * f((j1 + j2 - j3) / 2 - k)
                * f((j1 - m1) / 2 - k)
                * f((j2 + m2) / 2 - k))
    }));
    parity_sign((j1 - j2 - m3) / 2) * triangle * norm * series
}
