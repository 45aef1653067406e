//! Sharp constants of the magnetic interpolation inequality on the circle
//!
//! `‖ψ' + iaψ‖₂² + α‖ψ‖₂² ≥ μ_{a,p}(α) ‖ψ‖_p²`
//!
//! and the spectral estimates that follow from them: Keller-Lieb-Thirring
//! bounds for `-(d/ds + ia)² - φ` and the Hardy constant for the
//! Aharonov-Bohm vector potential in the plane.
//!
//! * [`circle`]: grids, quadrature against `dσ = ds/2π`, spectral calculus,
//!   rearrangement.
//! * [`forms`]: parameters, magnetic form, Rayleigh quotients, phase.
//! * [`shooting`]: Euler-Lagrange shooting with the nonlocal mass fixed point,
//!   `μ` curves, bifurcation, the Dirichlet limit `ν_p(α)`, the inverse `α_{a,p}`.
//! * [`spectral`]: `λ₁(H_a - φ)`, the KLT bound, the Hardy constant `τ`.
//! * [`verify`]: independent oracles and property suites.

pub mod circle;
pub mod error;
pub mod forms;
pub mod par;
pub mod shooting;
pub mod spectral;
pub mod verify;

pub use circle::{ComplexFunction, FourierVector, Grid, GridFunction, RealFunction};
pub use error::{Error, Result};
pub use forms::ProblemParams;
