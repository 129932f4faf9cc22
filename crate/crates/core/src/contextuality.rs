//! Shannon entropies, joint distributions of compatible projectors, and
//! evaluators for the noncontextuality inequality families: KCBS (dichotomic
//! and pentagram forms), the N-cycle family, Peres-Mermin and the entropic
//! chain.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{dot3, projector_from, real_expectation, spin1_projection, tol, ComplexMatrix, StateVector, TwiceJ};
use crate::quad::GridSpec;
use crate::scenarios::peres_mermin_square;
use crate::tomography::{dual_symbol, fidelity, pair, tomogram_of};

/// Bound-crossing margin below which a report is not flagged as a violation.
pub const VIOLATION_THRESHOLD: f64 = 1e-10;
/// Negative probabilities down to this size are treated as rounding noise.
pub const NEGATIVE_PROBABILITY_SLACK: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-10;
const ENTROPY_IDENTITY_TOL: f64 = 1e-12;
const MARGINAL_TOL: f64 = 1e-9;
const ORTHOGONALITY_TOL: f64 = 1e-8;
const OBSERVABLE_TOL: f64 = 1e-8;

/// Probability table over outcomes; each outcome is a tuple of variable values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    outcomes: Vec<Vec<i32>>,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(outcomes: Vec<Vec<i32>>, probs: Vec<f64>) -> Result<Self> {
        if outcomes.len() != probs.len() || outcomes.is_empty() {
            return Err(Error::InvalidDistribution(format!(
                "{} outcomes for {} probabilities",
                outcomes.len(),
                probs.len()
            )));
        }
        let arity = outcomes[0].len();
        if outcomes.iter().any(|o| o.len() != arity) {
            return Err(Error::InvalidDistribution("outcomes of mixed arity".into()));
        }
        let mut clamped = Vec::with_capacity(probs.len());
        for &p in &probs {
            if !p.is_finite() || p < -NEGATIVE_PROBABILITY_SLACK {
                return Err(Error::InvalidDistribution(format!("probability {p:e}")));
            }
            clamped.push(p.max(0.0));
        }
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(OutcomeDistribution {
            outcomes,
            probs: clamped,
        })
    }

    /// Two-outcome distribution over {0, 1} with P(1) = `p_one`.
    pub fn binary(p_one: f64) -> Result<Self> {
        Self::new(vec![vec![0], vec![1]], vec![1.0 - p_one, p_one])
    }

    pub fn outcomes(&self) -> &[Vec<i32>] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn arity(&self) -> usize {
        self.outcomes[0].len()
    }

    /// Probability of an outcome tuple (0 when absent).
    pub fn prob_of(&self, outcome: &[i32]) -> f64 {
        self.outcomes
            .iter()
            .zip(&self.probs)
            .filter(|(o, _)| o.as_slice() == outcome)
            .map(|(_, p)| p)
            .sum()
    }

    /// Marginal over the listed variable positions, outcomes in first-seen order.
    pub fn marginal(&self, keep: &[usize]) -> Result<OutcomeDistribution> {
        if keep.iter().any(|&k| k >= self.arity()) {
            return Err(Error::InvalidArgument(format!(
                "marginal index out of range for arity {}",
                self.arity()
            )));
        }
        let mut outcomes: Vec<Vec<i32>> = Vec::new();
        let mut probs: Vec<f64> = Vec::new();
        for (o, &p) in self.outcomes.iter().zip(&self.probs) {
            let key: Vec<i32> = keep.iter().map(|&k| o[k]).collect();
            match outcomes.iter().position(|x| *x == key) {
                Some(i) => probs[i] += p,
                None => {
                    outcomes.push(key);
                    probs.push(p);
                }
            }
        }
        Ok(OutcomeDistribution { outcomes, probs })
    }

    /// Reverses the variable order of every outcome tuple.
    pub fn swapped(&self) -> OutcomeDistribution {
        OutcomeDistribution {
            outcomes: self
                .outcomes
                .iter()
                .map(|o| o.iter().rev().copied().collect())
                .collect(),
            probs: self.probs.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::AtMost => "<=",
            Direction::AtLeast => ">=",
        })
    }
}

/// Value of an inequality against its noncontextual bound. `margin` is the
/// signed amount by which the bound is broken (positive = violated).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub direction: Direction,
    pub violated: bool,
    pub margin: f64,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, value: f64, bound: f64, direction: Direction) -> Self {
        let margin = match direction {
            Direction::AtMost => value - bound,
            Direction::AtLeast => bound - value,
        };
        InequalityReport {
            name: name.into(),
            value,
            bound,
            direction,
            violated: margin > VIOLATION_THRESHOLD,
            margin,
        }
    }
}

/// Shannon entropy in bits, with 0·log 0 = 0.
pub fn shannon_entropy(d: &OutcomeDistribution) -> f64 {
    entropy_of(d.probs())
}

fn entropy_of(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

/// H(A|B) for a joint over (a, b) pairs, computed as H(AB) - H(B) and
/// cross-checked against Σ_b P(b) H(A|B=b).
pub fn conditional_entropy(joint: &OutcomeDistribution) -> Result<f64> {
    if joint.arity() != 2 {
        return Err(Error::InvalidDistribution(format!(
            "conditional entropy needs a pair joint, got arity {}",
            joint.arity()
        )));
    }
    let cond_marginal = joint.marginal(&[1])?;
    let via_chain = shannon_entropy(joint) - shannon_entropy(&cond_marginal);
    let mut via_definition = 0.0;
    for (b, &pb) in cond_marginal.outcomes().iter().zip(cond_marginal.probs()) {
        if pb <= 0.0 {
            continue;
        }
        let conditional: Vec<f64> = joint
            .outcomes()
            .iter()
            .zip(joint.probs())
            .filter(|(o, _)| o[1] == b[0])
            .map(|(_, &p)| p / pb)
            .collect();
        via_definition += pb * entropy_of(&conditional);
    }
    if (via_chain - via_definition).abs() > ENTROPY_IDENTITY_TOL {
        return Err(Error::InvalidDistribution(format!(
            "conditional entropy routes disagree: {via_chain} vs {via_definition}"
        )));
    }
    Ok(via_chain)
}

/// How the Born probability |<A|ψ>|² is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbabilityRoute {
    /// Inner product of the state vectors.
    Direct,
    /// State tomogram integrated against the projector's dual symbol.
    Tomographic(GridSpec),
    /// Tomogram-only overlap kernel (spin 1).
    Fidelity(GridSpec),
}

pub fn projector_probability(a: &StateVector, psi: &StateVector, route: ProbabilityRoute) -> Result<f64> {
    let direct = a.inner(psi)?.norm_sqr();
    match route {
        ProbabilityRoute::Direct => Ok(direct),
        ProbabilityRoute::Tomographic(grid) => {
            let j = TwiceJ::from_dim(psi.dim())?;
            let tom = tomogram_of(&projector_from(psi), j)?;
            pair(&tom, &dual_symbol(&projector_from(a), j)?, &grid)
        }
        ProbabilityRoute::Fidelity(grid) => {
            let j = TwiceJ::from_dim(psi.dim())?;
            fidelity(
                &tomogram_of(&projector_from(a), j)?,
                &tomogram_of(&projector_from(psi), j)?,
                &grid,
            )
        }
    }
}

/// Joint distribution of two orthogonal rank-1 projectors measured on ψ,
/// outcomes ordered (0,0), (1,0), (0,1), (1,1).
pub fn joint_from_projectors(
    a_i: &StateVector,
    a_next: &StateVector,
    psi: &StateVector,
) -> Result<OutcomeDistribution> {
    joint_from_projectors_via(a_i, a_next, psi, ProbabilityRoute::Direct)
}

pub fn joint_from_projectors_via(
    a_i: &StateVector,
    a_next: &StateVector,
    psi: &StateVector,
    route: ProbabilityRoute,
) -> Result<OutcomeDistribution> {
    let overlap = a_i.inner(a_next)?.norm();
    if overlap > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal { overlap });
    }
    let p_i = projector_probability(a_i, psi, route)?;
    let p_next = projector_probability(a_next, psi, route)?;
    joint_from_probabilities(p_i, p_next)
}

/// Joint of two exclusive events with marginal probabilities `p_i`, `p_next`.
pub fn joint_from_probabilities(p_i: f64, p_next: f64) -> Result<OutcomeDistribution> {
    OutcomeDistribution::new(
        vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        vec![1.0 - p_i - p_next, p_i, p_next, 0.0],
    )
}

fn max_marginal_gap(a: &OutcomeDistribution, b: &OutcomeDistribution) -> f64 {
    let mut keys: Vec<&Vec<i32>> = a.outcomes().iter().chain(b.outcomes()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|k| (a.prob_of(k) - b.prob_of(k)).abs())
        .fold(0.0, f64::max)
}

/// Entropic chain H(A₁|Aₙ) ≤ Σ H(Aᵢ|Aᵢ₊₁) from the cyclic pair joints
/// (1,2), (2,3), ..., (n,1). The reported value is
/// H(A₁|Aₙ) - Σ_{i<n} H(Aᵢ|Aᵢ₊₁), so a positive value is a violation.
pub fn entropic_chain(joints: &[OutcomeDistribution]) -> Result<InequalityReport> {
    let n = joints.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "entropic chain needs at least 3 joints, got {n}"
        )));
    }
    for (i, j) in joints.iter().enumerate() {
        if j.arity() != 2 {
            return Err(Error::InvalidDistribution(format!(
                "joint {} is not a pair joint",
                i + 1
            )));
        }
    }
    for i in 0..n {
        let next = (i + 1) % n;
        let shared_here = joints[i].marginal(&[1])?;
        let shared_next = joints[next].marginal(&[0])?;
        let deviation = max_marginal_gap(&shared_here, &shared_next);
        if deviation > MARGINAL_TOL {
            return Err(Error::MarginalMismatch {
                left: i + 1,
                right: next + 1,
                deviation,
            });
        }
    }
    let lhs = conditional_entropy(&joints[n - 1].swapped())?;
    let mut rhs = 0.0;
    for joint in &joints[..n - 1] {
        rhs += conditional_entropy(joint)?;
    }
    Ok(InequalityReport::new(
        "entropic-chain",
        lhs - rhs,
        0.0,
        Direction::AtMost,
    ))
}

fn check_directions(directions: &[[f64; 3]]) -> Result<()> {
    let n = directions.len();
    for d in directions {
        let norm = dot3(*d, *d).sqrt();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
    }
    for i in 0..n {
        let overlap = dot3(directions[i], directions[(i + 1) % n]).abs();
        if overlap > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { overlap });
        }
    }
    Ok(())
}

/// Σ_k ⟨(J·l_k)²⟩ for cyclically orthogonal unit directions, against the
/// noncontextual bound 3.
pub fn pentagram_value(directions: &[[f64; 3]; 5], psi: &StateVector) -> Result<InequalityReport> {
    pentagram_value_mixed(directions, &projector_from(psi))
}

pub fn pentagram_value_mixed(directions: &[[f64; 3]; 5], rho: &ComplexMatrix) -> Result<InequalityReport> {
    if rho.dim() != 3 {
        return Err(Error::DimMismatch {
            expected: 3,
            found: rho.dim(),
        });
    }
    rho.check_density()?;
    check_directions(directions)?;
    let mut value = 0.0;
    for l in directions {
        let s = spin1_projection(*l);
        value += real_expectation(rho, &(&s * &s))?;
    }
    Ok(InequalityReport::new("pentagram", value, 3.0, Direction::AtLeast))
}

/// Noncontextual and quantum bounds of the N-cycle expression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NcycleBounds {
    pub n: usize,
    /// -(N-2)
    pub classical: f64,
    /// Ω_N for odd N (qutrit); Ξ_N = -N cos(π/N) for even N (four-level system).
    pub quantum: f64,
    /// Qutrit value: Ω_N for odd N, -1 + Ξ_{N-1} for even N.
    pub quantum_dim3: f64,
}

pub fn ncycle_bounds(n: usize) -> Result<NcycleBounds> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("N-cycle needs N >= 4, got {n}")));
    }
    let nf = n as f64;
    let xi = |k: f64| -k * (PI / k).cos();
    let classical = -(nf - 2.0);
    if n % 2 == 1 {
        let c = (PI / nf).cos();
        let omega = -(3.0 * nf * c - nf) / (1.0 + c);
        Ok(NcycleBounds {
            n,
            classical,
            quantum: omega,
            quantum_dim3: omega,
        })
    } else {
        Ok(NcycleBounds {
            n,
            classical,
            quantum: xi(nf),
            quantum_dim3: -1.0 + xi(nf - 1.0),
        })
    }
}

/// Sign of the closing term A_N A_1 in the N-cycle expression.
pub fn ncycle_closing_sign(n: usize) -> f64 {
    if n % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Minimum of the N-cycle expression over all ±1 assignments.
pub fn ncycle_classical_minimum(n: usize) -> Result<f64> {
    if !(2..=24).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "enumeration supports 2 <= N <= 24, got {n}"
        )));
    }
    let closing = ncycle_closing_sign(n);
    let mut best = f64::INFINITY;
    for bits in 0u32..(1 << n) {
        let a = |i: usize| if bits >> i & 1 == 1 { -1.0 } else { 1.0 };
        let mut chi = closing * a(n - 1) * a(0);
        for i in 0..n - 1 {
            chi += a(i) * a(i + 1);
        }
        best = best.min(chi);
    }
    Ok(best)
}

/// ⟨χ⟩ = Σ_{i<N} ⟨AᵢAᵢ₊₁⟩ + (-1)^{N-1} ⟨A_N A₁⟩ for ±1-valued observables with
/// commuting neighbors, against the bound -(N-2).
pub fn ncycle_value(observables: &[ComplexMatrix], rho: &ComplexMatrix) -> Result<InequalityReport> {
    let n = observables.len();
    if n < 4 {
        return Err(Error::InvalidArgument(format!("N-cycle needs N >= 4, got {n}")));
    }
    rho.check_density()?;
    let dim = rho.dim();
    for (i, a) in observables.iter().enumerate() {
        if a.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: a.dim(),
            });
        }
        let deviation = a
            .hermiticity_error()
            .max((a * a).max_abs_diff(&ComplexMatrix::identity(dim)));
        if deviation > OBSERVABLE_TOL {
            return Err(Error::InvalidSpectrum {
                index: i + 1,
                deviation,
            });
        }
    }
    let mut value = 0.0;
    for i in 0..n {
        let next = (i + 1) % n;
        let deviation = observables[i].commutator(&observables[next]).max_abs();
        if deviation > OBSERVABLE_TOL {
            return Err(Error::NotCommuting {
                left: i + 1,
                right: next + 1,
                deviation,
            });
        }
        let sign = if next == 0 { ncycle_closing_sign(n) } else { 1.0 };
        value += sign * real_expectation(rho, &(&observables[i] * &observables[next]))?;
    }
    Ok(InequalityReport::new(
        format!("{n}-cycle"),
        value,
        -(n as f64 - 2.0),
        Direction::AtLeast,
    ))
}

/// Peres-Mermin expression ⟨ABC⟩+⟨bca⟩+⟨γαβ⟩+⟨Aαa⟩+⟨bBβ⟩-⟨γcC⟩ against 4.
pub fn peres_mermin(rho: &ComplexMatrix) -> Result<InequalityReport> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    rho.check_density()?;
    let sq = peres_mermin_square();
    let triple = |x: &ComplexMatrix, y: &ComplexMatrix, z: &ComplexMatrix| -> Result<f64> {
        real_expectation(rho, &(&(x * y) * z))
    };
    let value = triple(&sq.upper_a, &sq.upper_b, &sq.upper_c)?
        + triple(&sq.lower_b, &sq.lower_c, &sq.lower_a)?
        + triple(&sq.gamma, &sq.alpha, &sq.beta)?
        + triple(&sq.upper_a, &sq.alpha, &sq.lower_a)?
        + triple(&sq.lower_b, &sq.upper_b, &sq.beta)?
        - triple(&sq.gamma, &sq.lower_c, &sq.upper_c)?;
    Ok(InequalityReport::new("peres-mermin", value, 4.0, Direction::AtMost))
}

/// ⟨A₁A₂⟩+⟨A₂A₃⟩+⟨A₃A₄⟩+⟨A₄A₅⟩+⟨A₅A₁⟩ against -3.
pub fn kcbs_dichotomic(means: &[f64; 5]) -> Result<InequalityReport> {
    for (i, &m) in means.iter().enumerate() {
        if !m.is_finite() || m.abs() > 1.0 + NEGATIVE_PROBABILITY_SLACK {
            return Err(Error::OutOfDomain(format!(
                "correlation {} = {m} outside [-1, 1]",
                i + 1
            )));
        }
    }
    Ok(InequalityReport::new(
        "kcbs",
        means.iter().sum(),
        -3.0,
        Direction::AtLeast,
    ))
}

/// Pair correlations ⟨AᵢAᵢ₊₁⟩ = 1 - 2pᵢ - 2pᵢ₊₁ for Aᵢ = 2|aᵢ><aᵢ| - I with
/// cyclically orthogonal aᵢ.
pub fn kcbs_means(a: &[StateVector; 5], psi: &StateVector) -> Result<[f64; 5]> {
    let mut p = [0.0; 5];
    for (i, v) in a.iter().enumerate() {
        p[i] = v.inner(psi)?.norm_sqr();
        let overlap = v.inner(&a[(i + 1) % 5])?.norm();
        if overlap > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { overlap });
        }
    }
    Ok(std::array::from_fn(|i| 1.0 - 2.0 * p[i] - 2.0 * p[(i + 1) % 5]))
}

/// ±1-valued observable 2|a><a| - I.
pub fn dichotomic_from(a: &StateVector) -> ComplexMatrix {
    &projector_from(a).scale_real(2.0) - &ComplexMatrix::identity(a.dim())
}
