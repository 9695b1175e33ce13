//! Numerical tools for de Branges–Rovnyak spaces `H(b)` with non-extreme `b`,
//! parametrised by the Smirnov-class quotient `φ = b / a`.
//!
//! * [`series`]: truncated complex power series and the `φ` families.
//! * [`space`]: monomial norms, inner products, Gram matrices, kernels.
//! * [`pythagoras`]: recovery of the Pythagorean pair `(b, a)` from `φ`.
//! * [`summability`]: lower-triangular methods and Cesàro weights.
//! * [`bounds`]: operator-norm lower bounds, truncated norms, classification.
//! * [`hayman`]: saddle-point coefficient asymptotics for `exp(β/(1-z)^γ)`.

pub mod bounds;
pub mod csvfmt;
pub mod error;
pub mod hayman;
pub mod pythagoras;
pub mod series;
pub mod space;
pub mod summability;

pub use error::{HbError, Result};
pub use num_complex::Complex64;
