//! The front ODE, the integral front update used by the fixed-point
//! construction, trajectory norms, and boundary-trace mollification.

use crate::model::{sigma, ModelParams};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrontError {
    #[error("front collapsed: s = {s} at t = {t}")]
    Collapse { t: f64, s: f64 },
    #[error("front update left the admissible set: s = {s} at node {index}")]
    LeftAdmissibleSet { index: usize, s: f64 },
    #[error("invalid trajectory: {0}")]
    BadTrajectory(String),
}

/// Time discretization of the front on a uniform grid: positions and
/// piecewise-constant velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontTrajectory {
    pub times: Vec<f64>,
    pub s: Vec<f64>,
    pub s_t: Vec<f64>,
}

impl FrontTrajectory {
    pub fn new(times: Vec<f64>, s: Vec<f64>, s_t: Vec<f64>) -> Result<Self, FrontError> {
        if times.len() < 2 || times.len() != s.len() || times.len() != s_t.len() {
            return Err(FrontError::BadTrajectory(
                "need at least two matched nodes".into(),
            ));
        }
        let dt = times[1] - times[0];
        if !(dt > 0.0) {
            return Err(FrontError::BadTrajectory("times must increase".into()));
        }
        for w in times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
                return Err(FrontError::BadTrajectory("time grid must be uniform".into()));
            }
        }
        for (i, &v) in s.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(FrontError::LeftAdmissibleSet { index: i, s: v });
            }
        }
        Ok(Self { times, s, s_t })
    }

    /// Constant trajectory `s = s0` over `m` steps of size `dt` from `t0`.
    pub fn constant(t0: f64, dt: f64, m: usize, s0: f64) -> Self {
        Self {
            times: (0..=m).map(|i| t0 + i as f64 * dt).collect(),
            s: vec![s0; m + 1],
            s_t: vec![0.0; m + 1],
        }
    }

    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Discrete `W^{1,2}` norm with trapezoid weights in time.
    pub fn w12_norm(&self) -> f64 {
        let zero = Self {
            times: self.times.clone(),
            s: vec![0.0; self.s.len()],
            s_t: vec![0.0; self.s_t.len()],
        };
        w12_distance(self, &zero)
    }
}

/// Boundary trace `u(., 1)` (or a frozen surrogate) on a time window.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl BoundaryTrace {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(times.len(), values.len());
        Self { times, values }
    }

    /// Piecewise-linear evaluation, extended by zero outside the window.
    pub fn eval_extended(&self, t: f64) -> f64 {
        let n = self.times.len();
        if n == 0 || t < self.times[0] || t > self.times[n - 1] {
            return 0.0;
        }
        if n == 1 {
            return self.values[0];
        }
        let i = match self.times.partition_point(|&tk| tk <= t) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let theta = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
        self.values[i] + theta * (self.values[i + 1] - self.values[i])
    }
}

/// Integration scheme for the front law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeScheme {
    /// `s_new = s + dt a0 (sigma(u1) - alpha s)`.
    Explicit,
    /// `s_new = (s + dt a0 sigma(u1)) / (1 + dt a0 alpha)`; the damping term
    /// is treated implicitly, so the front can never be driven through zero.
    Implicit,
}

/// One step of the front law `s_t = a0 (sigma(u1) - alpha s)`.
/// Returns `(s_new, s_t)` with `s_new = s + dt * s_t` exactly.
pub fn ode_step(
    s: f64,
    u1: f64,
    params: &ModelParams,
    dt: f64,
    scheme: OdeScheme,
) -> Result<(f64, f64), FrontError> {
    debug_assert!(s > 0.0 && dt > 0.0);
    let (s_new, s_t) = match scheme {
        OdeScheme::Explicit => {
            let s_t = params.a0 * (sigma(u1) - params.alpha * s);
            (s + dt * s_t, s_t)
        }
        OdeScheme::Implicit => {
            let s_new = (s + dt * params.a0 * sigma(u1)) / (1.0 + dt * params.a0 * params.alpha);
            let s_t = params.a0 * (sigma(u1) - params.alpha * s_new);
            (s_new, s_t)
        }
    };
    if !(s_new > 0.0) {
        return Err(FrontError::Collapse { t: f64::NAN, s: s_new });
    }
    Ok((s_new, s_t))
}

/// Integral front update: from a guessed trajectory and the boundary trace
/// of the associated solution, produce the next trajectory
///
/// ```text
/// s_new(t) = s(t_0) + \int_{t_0}^{t} a0 (sigma(trace) - alpha s_old) dtau
/// ```
///
/// by trapezoid quadrature (exact for the piecewise-linear data stored).
/// The output velocity is the integrand at the nodes.
pub fn gamma_map(
    s_traj: &FrontTrajectory,
    trace: &BoundaryTrace,
    params: &ModelParams,
) -> Result<FrontTrajectory, FrontError> {
    assert_eq!(
        s_traj.times, trace.times,
        "trajectory and trace must share the time grid"
    );
    let m = s_traj.len();
    let dt = s_traj.dt();
    let g: Vec<f64> = (0..m)
        .map(|i| params.a0 * (sigma(trace.values[i]) - params.alpha * s_traj.s[i]))
        .collect();
    let mut s_new = vec![0.0; m];
    s_new[0] = s_traj.s[0];
    for i in 1..m {
        s_new[i] = s_new[i - 1] + 0.5 * dt * (g[i - 1] + g[i]);
        if !(s_new[i] > 0.0) {
            return Err(FrontError::LeftAdmissibleSet {
                index: i,
                s: s_new[i],
            });
        }
    }
    Ok(FrontTrajectory {
        times: s_traj.times.clone(),
        s: s_new,
        s_t: g,
    })
}

/// Discrete `W^{1,2}` distance between trajectories on a shared grid:
/// trapezoid-weighted `L^2` norms of the position and velocity differences.
pub fn w12_distance(a: &FrontTrajectory, b: &FrontTrajectory) -> f64 {
    assert_eq!(a.times, b.times, "trajectories must share the time grid");
    let m = a.len();
    let dt = a.dt();
    let mut pos = 0.0;
    let mut vel = 0.0;
    for i in 0..m {
        let w = if i == 0 || i == m - 1 { 0.5 * dt } else { dt };
        let ds = a.s[i] - b.s[i];
        let dv = a.s_t[i] - b.s_t[i];
        pos += w * ds * ds;
        vel += w * dv * dv;
    }
    (pos + vel).sqrt()
}

/// Number of Simpson subintervals used over the mollifier support.
const MOLLIFY_SUBDIV: usize = 64;

/// Smooth bump on (-1, 1), zero outside.
fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

/// Convolves the trace with the compactly supported bump kernel of width
/// `epsilon`, extending the trace by zero outside its window. The kernel
/// mass is normalized with the same Simpson rule used for the convolution,
/// so constants in the interior are reproduced to round-off and the output
/// never exceeds the input sup-norm.
pub fn mollify(trace: &BoundaryTrace, epsilon: f64) -> BoundaryTrace {
    assert!(epsilon > 0.0, "mollifier width must be positive");
    let n_sub = MOLLIFY_SUBDIV;
    let dx = 2.0 * epsilon / n_sub as f64;
    // composite Simpson weights over [-eps, eps]
    let weights: Vec<f64> = (0..=n_sub)
        .map(|k| {
            if k == 0 || k == n_sub {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            }
        })
        .collect();
    let kernel: Vec<f64> = (0..=n_sub)
        .map(|k| bump((-epsilon + k as f64 * dx) / epsilon))
        .collect();
    let mass: f64 = weights.iter().zip(&kernel).map(|(w, k)| w * k).sum();
    let values = trace
        .times
        .iter()
        .map(|&t| {
            let mut acc = 0.0;
            for k in 0..=n_sub {
                let tau = -epsilon + k as f64 * dx;
                acc += weights[k] * kernel[k] * trace.eval_extended(t - tau);
            }
            acc / mass
        })
        .collect();
    BoundaryTrace::new(trace.times.clone(), values)
}
