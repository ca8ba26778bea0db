//! Semi-analytical solver for one-dimensional multilayer diffusion.
//!
//! The problem: `m` layers on `[l_0, l_m]`, each with constant diffusivity,
//! time-varying external boundary data, and general interface conditions
//! (perfect contact, finite-transfer jump, partition ratio). The solution is
//! built layer by layer from local eigenfunction expansions, with the
//! unknown interface fluxes recovered in the Laplace domain from a complex
//! tridiagonal system solved at the numerical-inversion nodes.
//!
//! Independent verification paths live alongside the main solver: a
//! classical separation-of-variables solution with globally coupled
//! eigenvalues (for time-independent boundary data), and a Crank–Nicolson
//! finite-difference reference.

pub mod assembly;
pub mod classical;
pub mod config;
pub mod eigenbasis;
pub mod erf;
pub mod error;
pub mod fdm;
pub mod interface_solver;
pub mod laplace;
pub mod liftings;
pub mod model;
mod poly_trig;
pub mod presets;
pub mod quad;

pub use error::{Error, Result, Violation};
pub use model::{
    BoundaryFunction, BoundarySpec, ContactTransfer, GeneralInterface, InitialCondition,
    InterfaceSpec, LayerSpec, NamedBoundary, PostScaling, ProblemSpec, ValidatedProblem,
};
