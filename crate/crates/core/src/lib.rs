//! Spin tomograms over SU(2) Euler angles and noncontextuality inequalities
//! for qutrits and two-qubit systems.
//!
//! * [`qcore`]: states, operators and spin matrices.
//! * [`angular`]: Wigner D-functions and 3j symbols.
//! * [`quad`]: quadrature over Euler angles and the unit sphere.
//! * [`tomography`]: tomograms, dual symbols, reconstruction.
//! * [`contextuality`]: entropies and inequality evaluators.
//! * [`scenarios`]: the named vector, unitary and operator configurations.
//! * [`search`]: grid scan plus Nelder-Mead maximization.
//! * [`verify`]: closed-form self-check suite.

pub mod angular;
pub mod contextuality;
pub mod error;
pub mod qcore;
pub mod quad;
pub mod scenarios;
pub mod search;
pub mod tomography;
pub mod verify;

pub use error::{Error, Result};
pub use qcore::{ComplexMatrix, StateVector, TwiceJ};
pub use quad::GridSpec;
