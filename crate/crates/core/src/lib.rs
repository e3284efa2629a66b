//! Symbolic-numeric engine for noncommutative (Wodzicki) residue densities of
//! operators built from perturbed Dirac operators on even-dimensional spin
//! manifolds, closed or with boundary.
//!
//! The crate computes cosphere-bundle residue densities of operators of the
//! form `c(u) [D̃², f] c(v) D̃^{-k}`, where `D̃ = D + Φ` is a Dirac operator
//! perturbed by Clifford multiplication with a form, and evaluates the
//! half-space boundary terms of the corresponding boundary functionals.
//! Everything is evaluated at a point in normal coordinates (`g = δ`,
//! vanishing connection coefficients and first metric derivatives), which is
//! where all the closed-form identities live.
//!
//! Layout:
//! - [`matrix`]: dense complex matrices (spinor-bundle endomorphisms);
//! - [`clifford`]: explicit gamma-matrix representations, grading,
//!   supertrace, antisymmetric 3-tensors and wedge pairings;
//! - [`symbol`]: matrix-coefficient polynomial symbols over powers of
//!   `|ξ|⁻²` with attached x-jets; products, composition, commutators with
//!   functions, parametrix inversion;
//! - [`boundary`]: the half-space calculus — restriction to the boundary
//!   cotangent chart, partial fractions in `ξₙ`, the `π⁺` projection and
//!   contour integration by residues at `ξₙ = i`;
//! - [`quadrature`]: exact sphere-monomial integrals plus independent
//!   numeric oracles (Monte Carlo sphere sampling, line quadrature,
//!   flat-torus grids);
//! - [`operators`]: symbols of `D̃`, `D̃²`, inverse powers and the sandwiched
//!   commutators, for every supported perturbation;
//! - [`engine`]: assembles the interior and boundary densities two
//!   independent ways, evaluates reference closed forms, and produces
//!   verification records.

pub mod boundary;
pub mod clifford;
pub mod engine;
mod error;
pub mod matrix;
pub mod operators;
pub mod quadrature;
pub mod symbol;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
