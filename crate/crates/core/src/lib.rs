//! Classical computation of the output distributions of X-programs
//! (commuting Pauli-X circuits, also known as IQP circuits).
//!
//! An X-program is a binary matrix `P` (rows are gates, columns are qubits)
//! together with an angle θ, and it samples `x` with probability
//! `|⟨x| exp(iθ Σ_a Π_b X_b^{P_ab}) |0⟩|²`. Amplitudes and correlation
//! coefficients reduce to weight enumerators of the column code of `P`, or
//! equivalently Tutte polynomials of its row matroid:
//!
//! * [`gf2`]: bit-packed linear algebra over GF(2).
//! * [`codes`]: weight enumerators, `α`, projection and affinification.
//! * [`tutte`]: Tutte polynomials and Greene's identity.
//! * [`clifford`]: exact polynomial-time evaluation at multiples of π/4.
//! * [`xprogram`]: amplitudes, probabilities, correlation coefficients,
//!   dense distributions and row-degree reduction.
//! * [`marginals`]: projectors, strong marginal computation and the marginal
//!   sampler.
//! * [`oracle`]: dense statevector ground truth.

pub mod clifford;
pub mod codes;
pub mod error;
pub mod gf2;
pub mod marginals;
pub mod oracle;
pub mod tutte;
pub mod xprogram;

pub use codes::{Angle, CodeProfile};
pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, BitVector, EchelonForm};
pub use marginals::{Marginal, Projector};
pub use num_complex::Complex64;
pub use tutte::TuttePolynomial;
pub use xprogram::{Distribution, ReducedProgram, XProgram};

/// Size budgets for the exponential parts of the computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest code rank enumerated codeword by codeword.
    pub max_code_rank: usize,
    /// Largest row count for the `2^n` subset expansion of the Tutte polynomial.
    pub max_subset_rows: usize,
    /// Memo entries allowed in one deletion–contraction evaluation.
    pub max_memo_entries: usize,
    /// Largest `l` for a dense `2^l` distribution.
    pub max_distribution_bits: usize,
    /// Largest projector range dimension for marginals.
    pub max_range_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_code_rank: 26,
            max_subset_rows: 20,
            max_memo_entries: 1 << 20,
            max_distribution_bits: 16,
            max_range_dim: 20,
        }
    }
}
