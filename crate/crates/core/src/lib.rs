//! Solver and verification toolkit for a one-dimensional diffusion problem
//! with a moving penetration front.
//!
//! The physical model is a diffusant concentration `u(t, z)` on a growing
//! interval `[0, s(t)]`. The front `s` obeys a kinetic law with a breaking
//! term, `s_t = a0 (sigma(u(t, s)) - alpha s)`, where `sigma` is the positive
//! part; the outer boundary exchanges mass with an ambient signal `b(t)`
//! through a Robin condition. Everything is solved on the fixed unit interval
//! after the change of variables `y = z / s(t)`, which trades the moving
//! domain for an advection term `(y s_t / s) u_y` and a `1/s^2` diffusion
//! coefficient.
//!
//! Module map:
//!
//! - [`model`] — parameters, boundary drive, initial data, closed-form
//!   reference quantities.
//! - [`transform`] — maps between the physical domain and the unit interval.
//! - [`pde`] — one implicit time step of the fixed-domain parabolic problem
//!   with pluggable right-boundary flux laws, plus the discrete weak residual.
//! - [`freeboundary`] — the front ODE, the integral front update used by the
//!   fixed-point iteration, trajectory norms, and trace mollification.
//! - [`bounds`] — executable a-priori estimates: the explicit front cap, the
//!   sup bound, and the energy monitor.
//! - [`coupler`] — full simulations: sequential time marching and the
//!   windowed fixed-point (Picard) construction.
//! - [`verify`] — manufactured-solution convergence studies, the mollifier
//!   robustness study, and the `alpha = 0` regression.

pub mod bounds;
pub mod coupler;
pub mod freeboundary;
pub mod model;
pub mod pde;
pub mod transform;
pub mod verify;

pub use coupler::{RunConfig, RunMode, RunResult, RunStatus};
pub use model::{BoundaryDrive, InitialProfile, ModelParams, SimState};
