//! One implicit (backward Euler) time step of the fixed-domain parabolic
//! problem
//!
//! ```text
//! u_t - (1/s^2) u_yy = (y s_t / s) u_y + f          on (0, 1)
//! -(1/s) u_y(0) = beta (b - gamma u(0))             (Robin, surface)
//! -(1/s) u_y(1) = F(u(1))                           (front flux law)
//! ```
//!
//! Space: uniform nodes `y_j = j/N`, central second differences for the
//! diffusion term and first-order upwind (by the sign of `s_t`) for the
//! advection term. Both boundary conditions are folded in through ghost
//! nodes eliminated into the boundary rows, which keeps second-order
//! accuracy at `y = 0`.
//!
//! The front flux law `F` is pluggable ([`RightBoundaryLaw`]); its possibly
//! nonlinear dependence on the boundary value `u(1)` is reduced to a scalar
//! equation by a Schur complement on the last unknown and solved with a
//! semismooth Newton iteration (`sigma'(0) := 0`), falling back to a fixed
//! point sweep if Newton stalls.
//!
//! Positivity: the assembled matrix has non-positive off-diagonals and row
//! sums `h_j/dt` plus the boundary terms, so with non-negative data the step
//! preserves non-negativity provided the right-boundary row keeps a positive
//! diagonal; for a retreating front (`s_t < 0`) this is the step bound
//! `dt < h s / (2 |s_t|)`.

use crate::model::{sigma, sigma_prime, ModelParams, SimState};
use thiserror::Error;

/// Convergence tolerance of the scalar boundary iteration.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Iteration cap for Newton and for the fixed-point fallback.
pub const BOUNDARY_MAX_ITERS: usize = 50;
/// Fronts below this fraction of `s_0` abort the step.
pub const S_MIN_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PdeError {
    #[error("singular tridiagonal system (pivot {pivot} at row {row}); dt is too large relative to the boundary terms")]
    SingularSystem { row: usize, pivot: f64 },
    #[error("right-boundary iteration failed to converge after {0} Newton + {0} fixed-point iterations")]
    BoundaryIterationFailed(usize),
    #[error("front too small for a step (s = {s}, floor = {floor})")]
    FrontTooSmall { s: f64, floor: f64 },
    #[error("invalid step inputs: {0}")]
    BadInputs(String),
}

/// Right-boundary flux law `F` in `-(1/s) u_y(1) = F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RightBoundaryLaw {
    /// Self-coupled front flux `a0 sigma(u(1)) (sigma(u(1)) - alpha s)`.
    Ap1,
    /// Partially frozen variant `a0 (sigma(u(1))^2 - alpha sigma(eta) s)`
    /// with an externally supplied trace value `eta` at the step time.
    Ap2 { eta: f64 },
    /// Kinetic flux `sigma(u(1)) s_t` with externally supplied `s_t`.
    Pc,
}

/// Everything one step needs besides the physical constants.
#[derive(Debug, Clone)]
pub struct StepInputs<'a> {
    /// State at the beginning of the step.
    pub state: &'a SimState,
    /// Front position at the end of the step (all implicit coefficients use it).
    pub s_new: f64,
    /// Front velocity over the step.
    pub s_t: f64,
    pub dt: f64,
    /// Ambient value `b` at the end of the step.
    pub b_now: f64,
    pub law: RightBoundaryLaw,
    /// Optional nodal source, evaluated at the end of the step
    /// (manufactured solutions).
    pub forcing: Option<&'a [f64]>,
    /// When present, the advection term is computed from this frozen nodal
    /// field instead of the implicit unknown and moved to the right-hand
    /// side (the linearized auxiliary form). Interior nodes use the same
    /// upwind stencil; the last node uses a one-sided backward difference.
    pub frozen_advection: Option<&'a [f64]>,
}

impl StepInputs<'_> {
    fn validate(&self, params: &ModelParams) -> Result<(), PdeError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(PdeError::BadInputs(format!("dt > 0 required (got {})", self.dt)));
        }
        let floor = S_MIN_FRACTION * params.s0;
        if !(self.s_new > floor) {
            return Err(PdeError::FrontTooSmall {
                s: self.s_new,
                floor,
            });
        }
        if self.state.u.len() < 3 {
            return Err(PdeError::BadInputs("grid must have at least 3 nodes".into()));
        }
        for arr in [self.forcing, self.frozen_advection].into_iter().flatten() {
            if arr.len() != self.state.u.len() {
                return Err(PdeError::BadInputs(
                    "auxiliary nodal arrays must match the grid".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Scalar flux law evaluation at the step's implicit data.
struct LawEval {
    law: RightBoundaryLaw,
    a0: f64,
    alpha: f64,
    s_new: f64,
    s_t: f64,
}

impl LawEval {
    fn value(&self, v: f64) -> f64 {
        match self.law {
            RightBoundaryLaw::Ap1 => self.a0 * sigma(v) * (sigma(v) - self.alpha * self.s_new),
            RightBoundaryLaw::Ap2 { eta } => {
                self.a0 * (sigma(v) * sigma(v) - self.alpha * sigma(eta) * self.s_new)
            }
            RightBoundaryLaw::Pc => self.s_t * sigma(v),
        }
    }

    fn derivative(&self, v: f64) -> f64 {
        match self.law {
            RightBoundaryLaw::Ap1 => {
                self.a0 * sigma_prime(v) * (2.0 * sigma(v) - self.alpha * self.s_new)
            }
            RightBoundaryLaw::Ap2 { .. } => 2.0 * self.a0 * sigma(v) * sigma_prime(v),
            RightBoundaryLaw::Pc => self.s_t * sigma_prime(v),
        }
    }
}

/// Thomas solve of a tridiagonal system; `lower[0]` and `upper[n-1]` are
/// ignored. Fails on a vanishing pivot.
fn solve_tridiag(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>, PdeError> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if piv.abs() < 1e-300 {
        return Err(PdeError::SingularSystem { row: 0, pivot: piv });
    }
    c[0] = upper[0] / piv;
    d[0] = rhs[0] / piv;
    for i in 1..n {
        piv = diag[i] - lower[i] * c[i - 1];
        if piv.abs() < 1e-300 || !piv.is_finite() {
            return Err(PdeError::SingularSystem { row: i, pivot: piv });
        }
        if i < n - 1 {
            c[i] = upper[i] / piv;
        }
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / piv;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Assembled linear part of the step (everything except the right-boundary
/// flux term `kappa_n F(u_N)`), in row scaling `h_j x (finite-difference
/// equation)` with `h_0 = h_N = h/2`.
struct LinearSystem {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    /// Coefficient of the flux value in the last row.
    kappa_n: f64,
}

fn assemble(params: &ModelParams, inputs: &StepInputs) -> LinearSystem {
    let n = inputs.state.grid_n();
    let h = 1.0 / n as f64;
    let s = inputs.s_new;
    let vel = inputs.s_t;
    let dt = inputs.dt;
    let diff = 1.0 / (s * s); // diffusion coefficient
    let u_old = &inputs.state.u;

    let mut lower = vec![0.0; n + 1];
    let mut diag = vec![0.0; n + 1];
    let mut upper = vec![0.0; n + 1];
    let mut rhs = vec![0.0; n + 1];

    // surface row: ghost elimination of the Robin condition
    diag[0] = 0.5 * h / dt + diff / h + params.beta * params.gamma / s;
    upper[0] = -diff / h;
    rhs[0] = 0.5 * h / dt * u_old[0] + params.beta * inputs.b_now / s;

    for j in 1..n {
        diag[j] = h / dt + 2.0 * diff / h;
        lower[j] = -diff / h;
        upper[j] = -diff / h;
        rhs[j] = h / dt * u_old[j];
    }

    // front row: ghost elimination of the flux law; the kappa_n F(u_N)
    // term is kept symbolic for the scalar boundary solve
    diag[n] = 0.5 * h / dt + diff / h;
    lower[n] = -diff / h;
    rhs[n] = 0.5 * h / dt * u_old[n];

    let mut kappa_n = 1.0 / s;
    match inputs.frozen_advection {
        None => {
            // implicit upwind advection; at the front row the gradient is
            // substituted from the boundary condition, u_y(1) = -s F
            for j in 1..n {
                let c = (j as f64 * h) * vel / s;
                if vel >= 0.0 {
                    diag[j] += c;
                    upper[j] -= c;
                } else {
                    diag[j] -= c;
                    lower[j] += c;
                }
            }
            kappa_n += 0.5 * h * vel;
        }
        Some(field) => {
            for j in 1..n {
                let c = (j as f64 * h) * vel / s;
                let grad = if vel >= 0.0 {
                    (field[j + 1] - field[j]) / h
                } else {
                    (field[j] - field[j - 1]) / h
                };
                rhs[j] += h * c * grad;
            }
            let c = vel / s;
            rhs[n] += 0.5 * h * c * (field[n] - field[n - 1]) / h;
        }
    }

    if let Some(f) = inputs.forcing {
        rhs[0] += 0.5 * h * f[0];
        for j in 1..n {
            rhs[j] += h * f[j];
        }
        rhs[n] += 0.5 * h * f[n];
    }

    LinearSystem {
        lower,
        diag,
        upper,
        rhs,
        kappa_n,
    }
}

/// Solves `v = c0 - coef * F(v)` for the boundary value.
fn solve_boundary_scalar(c0: f64, coef: f64, law: &LawEval) -> Result<f64, PdeError> {
    let scale = c0.abs().max(1.0);
    let done = |v: f64| (v - c0 + coef * law.value(v)).abs() <= BOUNDARY_TOL * scale;

    let mut v = c0;
    for _ in 0..BOUNDARY_MAX_ITERS {
        let phi = v - c0 + coef * law.value(v);
        if phi.abs() <= BOUNDARY_TOL * scale {
            return Ok(v);
        }
        let dphi = 1.0 + coef * law.derivative(v);
        if dphi.abs() < 1e-13 || !dphi.is_finite() {
            break;
        }
        let v_next = v - phi / dphi;
        if !v_next.is_finite() {
            break;
        }
        v = v_next;
    }
    if done(v) {
        return Ok(v);
    }
    // fixed-point fallback
    let mut v = c0;
    for _ in 0..BOUNDARY_MAX_ITERS {
        let v_next = c0 - coef * law.value(v);
        if !v_next.is_finite() {
            return Err(PdeError::BoundaryIterationFailed(BOUNDARY_MAX_ITERS));
        }
        if (v_next - v).abs() <= BOUNDARY_TOL * v.abs().max(1.0) && done(v_next) {
            return Ok(v_next);
        }
        v = v_next;
    }
    Err(PdeError::BoundaryIterationFailed(BOUNDARY_MAX_ITERS))
}

/// One backward-Euler step; returns the nodal values at `t + dt`.
pub fn step(params: &ModelParams, inputs: &StepInputs) -> Result<Vec<f64>, PdeError> {
    inputs.validate(params)?;
    let n = inputs.state.grid_n();
    let sys = assemble(params, inputs);

    // Schur complement on the last unknown: with A the linear part,
    // u = u_lin - kappa_n F(u_N) w where A u_lin = rhs and A w = e_N.
    let u_lin = solve_tridiag(&sys.lower, &sys.diag, &sys.upper, &sys.rhs)?;
    let mut e_n = vec![0.0; n + 1];
    e_n[n] = 1.0;
    let w = solve_tridiag(&sys.lower, &sys.diag, &sys.upper, &e_n)?;

    let law = LawEval {
        law: inputs.law,
        a0: params.a0,
        alpha: params.alpha,
        s_new: inputs.s_new,
        s_t: inputs.s_t,
    };
    let coef = sys.kappa_n * w[n];
    let v = solve_boundary_scalar(u_lin[n], coef, &law)?;
    let flux = law.value(v);

    let mut u: Vec<f64> = u_lin
        .iter()
        .zip(&w)
        .map(|(ul, wk)| ul - sys.kappa_n * flux * wk)
        .collect();
    u[n] = v;
    Ok(u)
}

/// Discrete weak-form residual of one step tested against the hat function
/// at node `j`: lumped mass, exact piecewise-linear stiffness, nodal upwind
/// advection and both boundary terms. Zero (to round-off) exactly when
/// `u_new` solves the step for the same inputs.
///
/// Assembled here directly from the formulas, independent of [`step`]'s
/// factorization path, so the two implementations cross-check each other.
pub fn weak_residual(
    params: &ModelParams,
    inputs: &StepInputs,
    u_new: &[f64],
    j: usize,
) -> f64 {
    let n = inputs.state.grid_n();
    assert!(j <= n, "test index {j} out of range (n = {n})");
    assert_eq!(u_new.len(), n + 1);
    let h = 1.0 / n as f64;
    let s = inputs.s_new;
    let vel = inputs.s_t;
    let diff = 1.0 / (s * s);
    let u_old = &inputs.state.u;
    let hj = if j == 0 || j == n { 0.5 * h } else { h };

    // lumped mass
    let mut r = hj * (u_new[j] - u_old[j]) / inputs.dt;

    // hat-function stiffness
    r += diff
        * match j {
            0 => (u_new[0] - u_new[1]) / h,
            j if j == n => (u_new[n] - u_new[n - 1]) / h,
            _ => (2.0 * u_new[j] - u_new[j - 1] - u_new[j + 1]) / h,
        };

    // boundary terms of the weak form
    if j == 0 {
        r -= params.beta * (inputs.b_now - params.gamma * u_new[0]) / s;
    }
    let law = LawEval {
        law: inputs.law,
        a0: params.a0,
        alpha: params.alpha,
        s_new: s,
        s_t: vel,
    };
    if j == n {
        r += law.value(u_new[n]) / s;
    }

    // tested advection term (moves to the right-hand side of the identity)
    let adv = match inputs.frozen_advection {
        None => {
            if j == 0 {
                0.0
            } else if j == n {
                // gradient substituted from the flux law: u_y(1) = -s F
                let c = vel / s;
                hj * c * (-s * law.value(u_new[n]))
            } else {
                let c = (j as f64 * h) * vel / s;
                let grad = if vel >= 0.0 {
                    (u_new[j + 1] - u_new[j]) / h
                } else {
                    (u_new[j] - u_new[j - 1]) / h
                };
                hj * c * grad
            }
        }
        Some(field) => {
            if j == 0 {
                0.0
            } else {
                let c = (j as f64 * h) * vel / s;
                let grad = if j == n {
                    (field[n] - field[n - 1]) / h
                } else if vel >= 0.0 {
                    (field[j + 1] - field[j]) / h
                } else {
                    (field[j] - field[j - 1]) / h
                };
                hj * c * grad
            }
        }
    };
    r -= adv;

    if let Some(f) = inputs.forcing {
        r -= hj * f[j];
    }
    r
}

/// Largest weak residual over all test indices, scaled check for monitors.
pub fn weak_residual_max(params: &ModelParams, inputs: &StepInputs, u_new: &[f64]) -> f64 {
    (0..u_new.len())
        .map(|j| weak_residual(params, inputs, u_new, j).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{equilibrium, ModelParams};
    use proptest::prelude::*;

    fn params() -> ModelParams {
        ModelParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    fn state(u: Vec<f64>, s: f64) -> SimState {
        SimState {
            t: 0.0,
            s,
            s_t: 0.0,
            u,
        }
    }

    #[test]
    fn zero_is_a_fixed_point_of_every_law() {
        let p = params();
        let st = state(vec![0.0; 21], 1.0);
        for law in [
            RightBoundaryLaw::Ap1,
            RightBoundaryLaw::Ap2 { eta: 0.0 },
            RightBoundaryLaw::Pc,
        ] {
            let inputs = StepInputs {
                state: &st,
                s_new: 1.0,
                s_t: 0.0,
                dt: 0.05,
                b_now: 0.0,
                law,
                forcing: None,
                frozen_advection: None,
            };
            let u = step(&p, &inputs).unwrap();
            assert!(u.iter().all(|&v| v.abs() < 1e-14), "{law:?}: {u:?}");
        }
    }

    #[test]
    fn equilibrium_state_is_stationary_under_ap1_and_pc() {
        let p = params();
        let b = 1.0;
        let (s_inf, u_inf) = equilibrium(&p, b).unwrap();
        let st = state(vec![u_inf; 41], s_inf);
        for law in [RightBoundaryLaw::Ap1, RightBoundaryLaw::Pc] {
            let inputs = StepInputs {
                state: &st,
                s_new: s_inf,
                s_t: 0.0,
                dt: 0.1,
                b_now: b,
                law,
                forcing: None,
                frozen_advection: None,
            };
            let u = step(&p, &inputs).unwrap();
            for &v in &u {
                assert!((v - u_inf).abs() < 1e-12, "{law:?}: {v}");
            }
        }
    }

    #[test]
    fn step_output_zeroes_the_weak_residual() {
        let p = ModelParams::new(0.8, 0.6, 1.3, 0.9, 1.0, 1.0).unwrap();
        let n = 24;
        let u0: Vec<f64> = (0..=n)
            .map(|j| 0.4 + 0.3 * (j as f64 / n as f64 * 3.0).sin())
            .collect();
        for (s_t, law) in [
            (0.25, RightBoundaryLaw::Ap1),
            (-0.2, RightBoundaryLaw::Pc),
            (0.1, RightBoundaryLaw::Ap2 { eta: 0.7 }),
        ] {
            let st = state(u0.clone(), 0.9);
            let inputs = StepInputs {
                state: &st,
                s_new: 0.9 + 0.02 * s_t,
                s_t,
                dt: 0.02,
                b_now: 0.8,
                law,
                forcing: None,
                frozen_advection: None,
            };
            let u = step(&p, &inputs).unwrap();
            let scale = u.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for j in 0..=n {
                let r = weak_residual(&p, &inputs, &u, j);
                assert!(
                    r.abs() <= 1e-10 * scale,
                    "{law:?} j = {j}: residual {r}"
                );
            }
        }
    }

    #[test]
    fn residual_responds_like_the_assembled_row() {
        // perturbing one interior node by 1 changes the residual there by
        // the mass + stiffness + advection diagonal of that row
        let p = params();
        let n = 16;
        let h = 1.0 / n as f64;
        let st = state(vec![0.5; n + 1], 1.0);
        let (s_new, s_t, dt) = (1.0, 0.3, 0.01);
        let inputs = StepInputs {
            state: &st,
            s_new,
            s_t,
            dt,
            b_now: 0.5,
            law: RightBoundaryLaw::Pc,
            forcing: None,
            frozen_advection: None,
        };
        let u = step(&p, &inputs).unwrap();
        let j = 7;
        let base = weak_residual(&p, &inputs, &u, j);
        let mut u_pert = u.clone();
        u_pert[j] += 1.0;
        let shifted = weak_residual(&p, &inputs, &u_pert, j);
        // explicit row evaluation: mass h/dt, stiffness 2/(s^2 h),
        // upwind advection diagonal + y_j s_t / s (for s_t >= 0)
        let diff = 1.0 / (s_new * s_new);
        let expected = h / dt + 2.0 * diff / h + (j as f64 * h) * s_t / s_new;
        assert!(
            ((shifted - base) - expected).abs() < 1e-11 * expected,
            "delta = {}, expected = {expected}",
            shifted - base
        );
    }

    #[test]
    fn zero_data_gives_zero_residual() {
        let p = params();
        let st = state(vec![0.0; 9], 1.0);
        let inputs = StepInputs {
            state: &st,
            s_new: 1.0,
            s_t: 0.0,
            dt: 0.1,
            b_now: 0.0,
            law: RightBoundaryLaw::Pc,
            forcing: None,
            frozen_advection: None,
        };
        let zeros = vec![0.0; 9];
        for j in 0..9 {
            assert_eq!(weak_residual(&p, &inputs, &zeros, j), 0.0);
        }
    }

    #[test]
    fn affine_combinations_commute_with_frozen_advection_steps() {
        // with the advection frozen and the flux on its linear branch the
        // step is affine in (u_old, b, forcing): convex combinations of the
        // data map to the same combinations of the outputs
        let p = params();
        let n = 12;
        let field: Vec<f64> = (0..=n).map(|j| 1.0 + 0.5 * (j as f64 / n as f64)).collect();
        let mk = |u0: Vec<f64>, b: f64, f: Vec<f64>| -> Vec<f64> {
            let st = state(u0, 1.0);
            let inputs = StepInputs {
                state: &st,
                s_new: 1.0,
                s_t: 0.4,
                dt: 0.02,
                b_now: b,
                law: RightBoundaryLaw::Pc,
                forcing: Some(&f),
                frozen_advection: Some(&field),
            };
            step(&p, &inputs).unwrap()
        };
        let lam = 0.3;
        let ua: Vec<f64> = (0..=n).map(|j| 1.0 + 0.2 * (j as f64).sin()).collect();
        let ub: Vec<f64> = (0..=n).map(|j| 0.8 + 0.1 * (j as f64).cos()).collect();
        let fa: Vec<f64> = (0..=n).map(|j| 0.3 + 0.01 * j as f64).collect();
        let fb: Vec<f64> = vec![0.2; n + 1];
        let (ba, bb) = (0.7, 0.5);
        let mix = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| lam * x + (1.0 - lam) * y).collect()
        };

        let ra = mk(ua.clone(), ba, fa.clone());
        let rb = mk(ub.clone(), bb, fb.clone());
        let rm = mk(mix(&ua, &ub), lam * ba + (1.0 - lam) * bb, mix(&fa, &fb));
        for j in 0..=n {
            let expect = lam * ra[j] + (1.0 - lam) * rb[j];
            assert!(
                (rm[j] - expect).abs() < 1e-12,
                "j = {j}: {} vs {expect}",
                rm[j]
            );
        }
    }

    #[test]
    fn rejects_collapsed_front_and_bad_dt() {
        let p = params();
        let st = state(vec![0.1; 5], 1.0);
        let mut inputs = StepInputs {
            state: &st,
            s_new: 1e-9,
            s_t: 0.0,
            dt: 0.1,
            b_now: 0.0,
            law: RightBoundaryLaw::Pc,
            forcing: None,
            frozen_advection: None,
        };
        assert!(matches!(
            step(&p, &inputs),
            Err(PdeError::FrontTooSmall { .. })
        ));
        inputs.s_new = 1.0;
        inputs.dt = -0.1;
        assert!(matches!(step(&p, &inputs), Err(PdeError::BadInputs(_))));
    }

    #[test]
    fn unresolvable_boundary_reports_an_error() {
        // strongly retreating front with an enormous step: the scalar
        // boundary equation loses its admissible root
        let p = params();
        let st = state(vec![1.0; 5], 1.0);
        let inputs = StepInputs {
            state: &st,
            s_new: 1.0,
            s_t: -6.0,
            dt: 1e3,
            b_now: 0.0,
            law: RightBoundaryLaw::Pc,
            forcing: None,
            frozen_advection: None,
        };
        assert!(step(&p, &inputs).is_err());
    }

    proptest! {
        /// Pure diffusion with a Robin pull toward b/gamma <= ceiling keeps
        /// the state inside [0, ceiling].
        #[test]
        fn left_boundary_maximum_principle(
            raw in proptest::collection::vec(0.0f64..1.0, 9..33),
            bfrac in 0.0f64..1.0,
            dt in 1e-4f64..0.5,
            s in 0.2f64..3.0,
            ceiling in 0.1f64..4.0,
        ) {
            let p = params(); // gamma = 1, so the ceiling is b*(=ceiling)
            let u0: Vec<f64> = raw.iter().map(|r| r * ceiling).collect();
            let st = state(u0, s);
            let inputs = StepInputs {
                state: &st,
                s_new: s,
                s_t: 0.0,
                dt,
                b_now: bfrac * ceiling,
                law: RightBoundaryLaw::Pc,
                forcing: None,
                frozen_advection: None,
            };
            let u = step(&p, &inputs).unwrap();
            for &v in &u {
                prop_assert!(v >= -1e-12 * ceiling);
                prop_assert!(v <= ceiling * (1.0 + 1e-12));
            }
        }

        /// Non-negativity under the documented step bound for retreating
        /// fronts: dt <= h s / (2 |s_t|).
        #[test]
        fn non_negativity_under_cfl(
            raw in proptest::collection::vec(0.0f64..2.0, 9..41),
            s in 0.3f64..2.0,
            vel in -1.5f64..1.5,
            b in 0.0f64..2.0,
        ) {
            let p = ModelParams::new(0.9, 0.7, 1.1, 0.8, 1.0, 1.0).unwrap();
            let n = raw.len() - 1;
            let h = 1.0 / n as f64;
            let cfl = if vel < 0.0 { h * s / (2.0 * vel.abs()) } else { f64::INFINITY };
            let dt = 0.9 * cfl.min(0.05);
            let umax = raw.iter().copied().fold(0.0, f64::max);
            let st = state(raw.clone(), s);
            let inputs = StepInputs {
                state: &st,
                s_new: s,
                s_t: vel,
                dt,
                b_now: b,
                law: RightBoundaryLaw::Pc,
                forcing: None,
                frozen_advection: None,
            };
            let u = step(&p, &inputs).unwrap();
            for &v in &u {
                prop_assert!(v >= -1e-12 * umax.max(1.0), "v = {v}, umax = {umax}");
            }
        }
    }
}
