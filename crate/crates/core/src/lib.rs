//! Dense simulation of tripartite entanglement on small qubit registers.
//!
//! The crate covers the canonical entangled bases (generalized Bell, GHZ and
//! W families), Werner and isotropic two-party states with Monte-Carlo
//! twirling, the GHZ nonlocality argument, five teleportation procedures
//! simulated branch by branch, SLOCC classification of three-qubit pure
//! states and Kraus noise applied to protocol resources.
//!
//! Everything is `no_std` + `alloc`. Registers are stored densely and capped
//! at [`MAX_QUBITS`]. Qubit 0 is the leftmost ket symbol and the most
//! significant bit of an amplitude index, so `|01⟩` is amplitude index 1.
//!
//! ```
//! use tripsim_core::bases::ghz_basis;
//! use tripsim_core::bases::GhzLabel;
//! use tripsim_core::nonlocality::ghz_paradox;
//!
//! let ghz = ghz_basis(core::f64::consts::FRAC_PI_4, GhzLabel::new(0, 0, 0).unwrap());
//! let report = ghz_paradox(&ghz).unwrap();
//! assert!(report.contradiction);
//! ```

#![no_std]

extern crate alloc;

pub mod bases;
pub mod classify;
pub mod density;
mod error;
pub mod haar;
pub mod linalg;
pub mod noise;
pub mod nonlocality;
pub mod operator;
pub mod quadrature;
pub mod state;
pub mod teleport;
pub mod twirl;

pub use density::DensityOp;
pub use error::{Error, Result};
pub use operator::{LocalOperator, Pauli};
pub use state::{InputQubit, StateVector, Unnormalized};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type Matrix = nalgebra::DMatrix<C64>;

/// Tolerance applied when validating user-supplied states and operators.
pub const TOLERANCE: f64 = 1e-9;

/// Largest register the dense kernels accept.
pub const MAX_QUBITS: usize = 12;

/// Branch probabilities below this are treated as impossible outcomes.
pub const DEGENERATE_PROBABILITY: f64 = 1e-14;
