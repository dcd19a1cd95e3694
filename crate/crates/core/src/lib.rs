//! Bound states of the radial equation `U″ + [λ² − V(r)]U = 0` for
//! inverse-polynomial potentials `V(r) = A₀ + Σₕ A₋ₕ r⁻ʰ`.
//!
//! The `h ≥ 3` inverse powers are expanded to second order about a point
//! `r0`, which leaves an effective Coulomb-plus-centrifugal problem that the
//! Nikiforov-Uvarov reduction solves in closed form ([`spectrum`]). The
//! [`oracle`] module provides an independent finite-difference eigensolver
//! to check every closed-form level.
//!
//! Units are natural with `ħ = 2m = 1`, so `λ²` is the energy.

// Guards written as `!(x > 0.0)` reject NaN as well; keep them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod nu_engine;
pub mod oracle;
pub mod polycubic;
pub mod potential;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use nu_engine::{ClosedFormFactor, LowPoly, NUBranch, NUProblem, QuantizationEquation};
pub use oracle::{
    converge, converge_with, solve_fd, validate, GapReport, GapRow, OracleResult, OracleSettings, RadialGrid,
};
pub use polycubic::{cardano_roots, depress, quadratic_roots, CubicRoots, DepressedCubic, RealCubic};
pub use potential::{
    auto_r0, expansion_coeffs, landscape, ExpansionTriple, Extremum, ExtremumKind, InversePolyPotential,
    LandscapeReport, Preset,
};
pub use spectrum::{
    eigenfunction, eigenvalue, solve_spectrum, BranchPolicy, BranchSign, EigenState, Eigenfunction, R0Policy,
};
