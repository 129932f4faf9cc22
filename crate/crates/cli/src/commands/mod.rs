pub mod inequality;
pub mod scan;
pub mod tomogram;
pub mod verify;

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use tomoctx::qcore::projector_from;
use tomoctx::{ComplexMatrix, StateVector, TwiceJ};

/// Parses "1", "3/2" or "0.5" into twice-j.
pub fn parse_spin(s: &str) -> Result<TwiceJ> {
    let s = s.trim();
    if let Some(num) = s.strip_suffix("/2") {
        let n: u32 = num.parse().with_context(|| format!("bad spin {s:?}"))?;
        if n.is_multiple_of(2) {
            bail!("spin {s:?} should be written as an integer");
        }
        return Ok(TwiceJ(n));
    }
    let v: f64 = s.parse().with_context(|| format!("bad spin {s:?}"))?;
    let twice = 2.0 * v;
    if v < 0.0 || twice.fract() != 0.0 {
        bail!("spin must be a nonnegative multiple of 1/2, got {s:?}");
    }
    Ok(TwiceJ(twice as u32))
}

/// Label for a twice-m value: "1", "-1", "1/2", "-3/2".
pub fn m_label(two_m: i32) -> String {
    if two_m % 2 == 0 {
        (two_m / 2).to_string()
    } else {
        format!("{two_m}/2")
    }
}

/// Parses a number, optionally written with "pi": "1.5", "pi", "pi/4", "2*pi", "-pi/2".
pub fn parse_number(s: &str) -> Result<f64> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let (head, div) = match body.split_once('/') {
        Some((h, d)) => (h, d.parse::<f64>().with_context(|| format!("bad number {s:?}"))?),
        None => (body, 1.0),
    };
    let mult = match head.split_once('*') {
        Some((k, "pi")) => k.parse::<f64>().with_context(|| format!("bad number {s:?}"))?,
        None if head == "pi" => 1.0,
        _ => bail!("bad number {s:?}"),
    };
    Ok(sign * mult * PI / div)
}

/// Reads a density operator from a JSON matrix or a JSON state vector.
pub fn load_density(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    if let Ok(m) = serde_json::from_str::<ComplexMatrix>(&text) {
        m.check_density()
            .with_context(|| format!("{} is not a density operator", path.display()))?;
        return Ok(m);
    }
    let v: StateVector = serde_json::from_str(&text)
        .with_context(|| format!("{} is neither a matrix nor a state vector", path.display()))?;
    Ok(projector_from(&v))
}

pub fn load_operator(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a JSON operator", path.display()))
}
