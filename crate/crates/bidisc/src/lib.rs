//! Toeplitz and Hankel operators on the Hardy space of the bidisc.
//!
//! The Hardy space `H^2(D^2)` consists of the functions on the bitorus whose
//! Fourier support lies in `Z_+ x Z_+`. For a bounded symbol `f`, the
//! Toeplitz operator is `T_f h = P(f h)` and the Hankel operator is
//! `H_f h = (I - P)(f h)`, where `P` is the orthogonal projection onto the
//! Hardy quadrant. This crate computes exact finite truncations of these
//! operators and of the semi-commutator `T_f T_g - T_{fg} = -H_conj(f)^* H_g`,
//! together with the boundary machinery used to study its compactness:
//! reproducing kernels, Berezin-type quadratic forms, Hankel kernel norms,
//! Mobius pullbacks, and graded compactness indicators.
//!
//! Modules:
//!
//! - [`symbol`]: sparse Fourier representations of circle/bitorus symbols,
//!   quadrant decomposition, harmonic extension, Wirtinger derivatives.
//! - [`hardy`]: truncated Toeplitz/Hankel/semi-commutator matrices, shift
//!   identities, and spectral utilities.
//! - [`kernel`]: reproducing kernels and boundary probes.
//! - [`mobius`]: disk automorphisms, symbol pullbacks, and the intertwining
//!   convergence test.
//! - [`theorem`]: executable checkers returning structured verdicts.
//! - [`io`]: JSON/CSV interchange formats.
//!
//! All types are immutable after construction and all operations are pure,
//! so everything can be evaluated concurrently. Summation orders are fixed
//! (sorted by frequency index), making results bit-stable across runs and
//! thread counts.

pub mod error;
mod exec;
pub mod hardy;
pub mod io;
pub mod kernel;
pub mod mobius;
pub mod svd;
pub mod symbol;
pub mod theorem;

pub use error::{Error, Result};
pub use symbol::{
    Axis, BidiscPoint, CircleArc, Descriptor1, Descriptor2, Estimate, FreqIndex, Quadrant, Symbol1,
    Symbol2, Wirtinger, DEFAULT_BANDWIDTH,
};
