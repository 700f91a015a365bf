//! One-dimensional barrier scattering at real and complex momentum.
//!
//! For a local, non-negative potential V(x) and the equation
//! `y'' = (V − κ²) y`, the crate computes the amplitudes α(κ), β(κ), the
//! coefficients a(κ) = 1 − α/2iκ and b(κ) = β/2iκ, and the S-, T- and
//! monodromy matrices built from them.
//!
//! * [`potentials`]: barrier shapes, supports, tails, composition.
//! * [`transfer`]: the algebra between α, β, a, b and the matrices.
//! * [`solver`]: direct integration of the wave equation.
//! * [`born`]: Born terms and the Volterra series with its bounds.
//! * [`semiclassical`]: WKB amplitudes and asymptotic zeros.
//! * [`oracles`]: closed forms for the exactly solvable barriers.
//! * [`specfun`]: complex log-Γ and the regularized Bessel function.
//! * [`complexplane`]: argument-principle zero counting and location.

// `!(x > 0.0)` is how NaN parameters get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod born;
pub mod cli;
pub mod complexplane;
pub mod error;
pub mod ode;
pub mod oracles;
pub mod potentials;
pub mod quad;
pub mod semiclassical;
pub mod solver;
pub mod specfun;
pub mod transfer;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use potentials::{builtin, Potential, PotentialConfig, TailKind};
pub use solver::{amplitudes, amplitudes_both_sides, SolverOptions};
pub use transfer::{AmplitudePair, JostCoefficients, MonodromyMatrix, SMatrix};
