//! Trace-norm (Schatten p-norm) inequalities for 2n×2n block matrices whose
//! four blocks are diagonal.
//!
//! * [`schatten`]: closed-form norms of 2×2 complex matrices and the `g` functional.
//! * [`block`]: diagonal-block matrices, their 2×2 direct-sum decomposition, PSD tests
//!   and the two-index rearrangement.
//! * [`inequality`]: checkers returning [`inequality::InequalityReport`]s, counterexample
//!   reproduction, crossover scans and seeded random search.
//! * [`rearrangement`]: ordering optimization over the block diagonals.
//! * [`analysis`]: numerical checks of the critical-point system and the
//!   fractional-power monotonicity argument.
//! * [`io`]: JSON instance files and JSON/CSV report export.

pub mod analysis;
pub mod block;
pub mod error;
pub mod inequality;
pub mod io;
pub mod rearrangement;
pub mod rng;
pub mod schatten;

pub use block::{DiagBlockMatrix, Lemma2State, PsdDiagBlock};
pub use error::{Error, Result};
pub use schatten::{ComplexMatrix2, PExponent, RealMatrix2};
