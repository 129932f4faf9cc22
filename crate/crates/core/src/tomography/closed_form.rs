//! Hand-derived spin-1 symbols used as independent checks on the
//! dequantizer/quantizer route.
//!
//! All functions take twice-m labels (2, 0, -2 for m = 1, 0, -1) so they can
//! be wrapped as [`Tomogram`] / [`DualSymbol`] directly.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::qcore::TwiceJ;

use super::{DualSymbol, Tomogram};

fn plain_m(two_m: i32) -> i32 {
    two_m / 2
}

/// Tomogram of the real qutrit state (sin θ, cos θ, 0).
pub fn real_state_omega(theta: f64, two_m: i32, alpha: f64, beta: f64) -> f64 {
    let (sb, cb) = beta.sin_cos();
    let (st, ct) = theta.sin_cos();
    let s2t = (2.0 * theta).sin();
    let ca = alpha.cos();
    match plain_m(two_m) {
        1 => {
            0.25 * (1.0 + cb).powi(2) * st * st + 0.5 * sb * sb * ct * ct + sb * (1.0 + cb) * s2t * ca / (2.0 * SQRT_2)
        }
        0 => 0.5 * sb * sb * st * st + cb * cb * ct * ct - (2.0 * beta).sin() * s2t * ca / (2.0 * SQRT_2),
        -1 => {
            0.25 * (1.0 - cb).powi(2) * st * st + 0.5 * sb * sb * ct * ct - sb * (1.0 - cb) * s2t * ca / (2.0 * SQRT_2)
        }
        _ => 0.0,
    }
}

pub fn real_state_tomogram(theta: f64) -> Tomogram {
    Tomogram::from_fn(TwiceJ::ONE, move |m, a, b| real_state_omega(theta, m, a, b))
}

/// Dual symbol of |A><A| for a real vector with components (A₁, A₀, A₋₁).
pub fn real_projector_dual_value(a: [f64; 3], two_m: i32, alpha: f64, beta: f64) -> f64 {
    let [a1, a0, am] = a;
    let m = f64::from(plain_m(two_m));
    let pi2 = PI * PI;
    let (sb, cb) = beta.sin_cos();
    let ca = alpha.cos();
    let rank0 = (a1 * a1 + am * am + a0 * a0) / (24.0 * pi2);
    let rank1 = 3.0 * m / (16.0 * pi2) * (SQRT_2 * (a1 * a0 + am * a0) * sb * ca + cb * (a1 * a1 - am * am));
    let rank2 = 5.0 * (3.0 * m * m - 2.0) / (48.0 * pi2)
        * (3.0 * a1 * am * (2.0 * alpha).cos() * sb * sb
            + 3.0 / SQRT_2 * (a1 * a0 - am * a0) * (2.0 * beta).sin() * ca
            + 0.5 * (a1 * a1 + am * am - 2.0 * a0 * a0) * (3.0 * cb * cb - 1.0));
    rank0 + rank1 + rank2
}

pub fn real_projector_dual(a: [f64; 3]) -> DualSymbol {
    DualSymbol::from_fn(TwiceJ::ONE, move |m, al, be| real_projector_dual_value(a, m, al, be))
}

/// Tomograms ω_k of the five pentagram projectors |A_k><A_k| (k = 1..5) at
/// opening angle φ. ω₃ does not depend on φ or α.
///
/// The middle component of ω₂ and ω₄ uses sin²β.
pub fn kcbs_projector_omega(k: usize, phi: f64, two_m: i32, alpha: f64, beta: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let t = phi.tan();
    let c2 = (2.0 * phi).cos();
    let (sb, cb) = beta.sin_cos();
    let ca = alpha.cos();
    let c2a = (2.0 * alpha).cos();
    let s2b = (2.0 * beta).sin();
    let s2p = (2.0 * phi).sin();
    let r = c2.sqrt() / c;
    let m = plain_m(two_m);
    let r22 = 2.0 * SQRT_2;
    match k {
        1 | 5 => {
            // ω₅ flips the sign of the cos2α term and of the tan φ cross terms
            let sg = if k == 1 { 1.0 } else { -1.0 };
            let q = c2 / (c * c);
            let u = c2.sqrt() * s / (c * c);
            match m {
                1 => {
                    (q * (1.0 + cb).powi(2) + (1.0 - cb).powi(2) + 2.0 * sb * sb * t * t + sg * 2.0 * r * sb * sb * c2a)
                        / 8.0
                        + (u * sb * (1.0 + cb) * ca + sg * t * sb * (1.0 - cb) * ca) / r22
                }
                0 => {
                    (2.0 * cb * cb * t * t + sb * sb + q * sb * sb - sg * 2.0 * r * sb * sb * c2a) / 4.0
                        + sg * t * s2b * ca / r22
                        - u * s2b * ca / r22
                }
                -1 => {
                    (q * (1.0 - cb).powi(2) + (1.0 + cb).powi(2) + 2.0 * sb * sb * t * t + sg * 2.0 * r * sb * sb * c2a)
                        / 8.0
                        - (u * sb * (1.0 - cb) * ca + sg * t * sb * (1.0 + cb) * ca) / r22
                }
                _ => 0.0,
            }
        }
        2 | 4 => {
            let sg = if k == 4 { 1.0 } else { -1.0 };
            match m {
                1 => (2.0 * c * c * sb * sb + s * s * (1.0 - cb).powi(2)) / 4.0 + sg * s2p * sb * (1.0 - cb) * ca / r22,
                0 => (2.0 * c * c * cb * cb + s * s * sb * sb) / 2.0 + sg * s2p * s2b * ca / r22,
                -1 => {
                    (2.0 * c * c * sb * sb + s * s * (1.0 + cb).powi(2)) / 4.0 - sg * s2p * sb * (1.0 + cb) * ca / r22
                }
                _ => 0.0,
            }
        }
        3 => match m {
            1 => (beta / 2.0).cos().powi(4),
            0 => sb * sb / 2.0,
            -1 => (beta / 2.0).sin().powi(4),
            _ => 0.0,
        },
        _ => 0.0,
    }
}

pub fn kcbs_projector_tomogram(k: usize, phi: f64) -> Result<Tomogram> {
    if !(1..=5).contains(&k) {
        return Err(Error::InvalidArgument(format!("projector index {k} outside 1..=5")));
    }
    if (2.0 * phi).cos() < 0.0 {
        return Err(Error::OutOfDomain(format!("sqrt(cos 2φ) undefined at φ = {phi}")));
    }
    Ok(Tomogram::from_fn(TwiceJ::ONE, move |m, a, b| {
        kcbs_projector_omega(k, phi, m, a, b)
    }))
}

/// Simplex point (cos²θ₁, cos²θ₂ sin²θ₁, sin²θ₁ sin²θ₂) of the U(3) tomogram.
pub fn unitary_tomogram_closed(theta1: f64, theta2: f64) -> [f64; 3] {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    [c1 * c1, c2 * c2 * s1 * s1, s1 * s1 * s2 * s2]
}
