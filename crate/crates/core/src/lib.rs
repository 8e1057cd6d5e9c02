//! Finite involutory biracks, counting invariants of unoriented framed
//! tangles, and their quantum enhancements.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`ring`] — exact scalars (multivariate Laurent polynomials over the
//!   rationals, integers mod m) and dense matrices over them.
//! - [`birack`] — finite involutory biracks: validation, the standard
//!   families, and the derived sideways/kink maps.
//! - [`tangle`] — combinatorial tangles as horizontal slices of elementary
//!   pieces, braid words and closures, component tracing, framings, kink
//!   insertion, and framed-move rewriting.
//! - [`labeling`] — enumeration of birack labelings and the counting
//!   invariants `phi_basic` / `phi_integral`.
//! - [`qweight`] — quantum weights `(M, N, U, delta)`: axiom verification,
//!   tensor evaluation of labeled diagrams, normalization, and the
//!   multiset/polynomial enhancements.
//! - [`bweight`] — braid weights for closed braids and their trace
//!   multiset enhancement.
//! - [`search`] — brute-force discovery of biracks, braid weights and
//!   low-dimensional quantum weights over small moduli.
//!
//! All value types are immutable after construction and freely shareable
//! across threads. With the `parallel` feature (default) the enumeration
//! and search engines fan out over rayon; without it they run
//! sequentially behind the same API.

pub mod birack;
pub mod bweight;
pub mod error;
pub mod exec;
pub mod labeling;
pub mod qweight;
pub mod ring;
pub mod search;
pub mod tangle;

pub use birack::Birack;
pub use bweight::BraidWeight;
pub use error::{BirackError, RingError, SearchError, TangleError, WeightError};
pub use labeling::Labeling;
pub use qweight::QuantumWeight;
pub use ring::{LaurentPoly, Matrix, Scalar, VarSet, Zp};
pub use tangle::{BraidWord, SlicedDiagram};
