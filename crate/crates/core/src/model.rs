//! Domain types, parameter validation, the positive-part nonlinearity and
//! closed-form reference quantities (equilibrium, sup bound).

use thiserror::Error;

/// Validation failures for model data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid model parameters: {0}")]
    Params(String),
    #[error("invalid boundary drive: {0}")]
    Drive(String),
    #[error("invalid initial profile: {0}")]
    Profile(String),
    #[error("no finite equilibrium: {0}")]
    NoEquilibrium(String),
    #[error("invalid state: {0}")]
    State(String),
}

/// Positive part: `r` for `r >= 0`, else `0`.
#[inline]
pub fn sigma(r: f64) -> f64 {
    if r >= 0.0 {
        r
    } else {
        0.0
    }
}

/// Semismooth derivative of [`sigma`], with the kink value fixed to
/// `sigma'(0) := 0`.
#[inline]
pub fn sigma_prime(r: f64) -> f64 {
    if r > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Sup bound for the concentration: `max(alpha * l, b_star / gamma)`,
/// where `l` bounds the front position on the interval of interest.
#[inline]
pub fn u_star(alpha: f64, l: f64, b_star: f64, gamma: f64) -> f64 {
    (alpha * l).max(b_star / gamma)
}

/// Physical constants of the model plus the time horizon.
///
/// `alpha = 0` is accepted as the comparison regime without the breaking
/// term; every other constant must be strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Front rate constant.
    pub a0: f64,
    /// Breaking coefficient (may be zero).
    pub alpha: f64,
    /// Surface mass-transfer coefficient.
    pub beta: f64,
    /// Partition coefficient in the Robin condition.
    pub gamma: f64,
    /// Initial front position.
    pub s0: f64,
    /// Time horizon.
    pub horizon: f64,
}

impl ModelParams {
    pub fn new(
        a0: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        s0: f64,
        horizon: f64,
    ) -> Result<Self, ModelError> {
        let p = Self {
            a0,
            alpha,
            beta,
            gamma,
            s0,
            horizon,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("a_0 > 0", self.a0),
            ("beta > 0", self.beta),
            ("gamma > 0", self.gamma),
            ("s_0 > 0", self.s0),
            ("T > 0", self.horizon),
        ];
        for (constraint, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ModelError::Params(format!(
                    "{constraint} is required (got {v})"
                )));
            }
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(ModelError::Params(format!(
                "alpha >= 0 is required (got {})",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// The ambient concentration signal `b(t)`, stored as piecewise-linear
/// knots. The derivative `b_t` is the exact piecewise-constant slope, which
/// makes its `L^1` and `L^2` norms exact.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDrive {
    knots: Vec<(f64, f64)>,
}

impl BoundaryDrive {
    /// Builds a drive from `(t, b(t))` knots. Requires at least one knot,
    /// strictly increasing times starting at `t = 0`, and `b >= 0`.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        if knots.is_empty() {
            return Err(ModelError::Drive("at least one knot is required".into()));
        }
        if knots[0].0 != 0.0 {
            return Err(ModelError::Drive(format!(
                "first knot must be at t = 0 (got t = {})",
                knots[0].0
            )));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(ModelError::Drive(format!(
                    "knot times must be strictly increasing (got {} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(t, b) in &knots {
            if !t.is_finite() || !b.is_finite() {
                return Err(ModelError::Drive("knots must be finite".into()));
            }
            if b < 0.0 {
                return Err(ModelError::Drive(format!(
                    "b >= 0 is required (got b({t}) = {b})"
                )));
            }
        }
        Ok(Self { knots })
    }

    /// Constant signal `b(t) = value` on `[0, horizon]`.
    pub fn constant(value: f64, horizon: f64) -> Result<Self, ModelError> {
        Self::new(vec![(0.0, value), (horizon, value)])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Piecewise-linear evaluation, clamped to the end values outside the
    /// knot range.
    pub fn eval(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 {
            return k[0].1;
        }
        if t >= k[k.len() - 1].0 {
            return k[k.len() - 1].1;
        }
        let i = match k.partition_point(|&(tk, _)| tk <= t) {
            0 => 0,
            p => p - 1,
        };
        let (t0, b0) = k[i];
        let (t1, b1) = k[i + 1];
        let theta = (t - t0) / (t1 - t0);
        b0 + theta * (b1 - b0)
    }

    /// Piecewise-constant derivative `b_t`, defined a.e. (slope of the
    /// containing interval; zero outside the knot range).
    pub fn derivative(&self, t: f64) -> f64 {
        let k = &self.knots;
        if k.len() < 2 || t < k[0].0 || t > k[k.len() - 1].0 {
            return 0.0;
        }
        let i = match k.partition_point(|&(tk, _)| tk <= t) {
            0 => 0,
            p => (p - 1).min(k.len() - 2),
        };
        let (t0, b0) = k[i];
        let (t1, b1) = k[i + 1];
        (b1 - b0) / (t1 - t0)
    }

    /// Largest knot value (the max of the piecewise-linear signal).
    pub fn max_value(&self) -> f64 {
        self.knots.iter().map(|&(_, b)| b).fold(0.0, f64::max)
    }

    /// Exact `L^1(0, t_end)` norm of `b_t` (sum of absolute increments,
    /// with a partial last interval when `t_end` cuts one).
    pub fn bt_l1(&self, t_end: f64) -> f64 {
        let mut acc = 0.0;
        for w in self.knots.windows(2) {
            let (t0, b0) = w[0];
            let (t1, b1) = w[1];
            if t_end <= t0 {
                break;
            }
            let frac = ((t_end.min(t1) - t0) / (t1 - t0)).clamp(0.0, 1.0);
            acc += (b1 - b0).abs() * frac;
        }
        acc
    }

    /// Exact squared `L^2(0, t_end)` norm of `b_t`.
    pub fn bt_l2_sq(&self, t_end: f64) -> f64 {
        let mut acc = 0.0;
        for w in self.knots.windows(2) {
            let (t0, b0) = w[0];
            let (t1, b1) = w[1];
            if t_end <= t0 {
                break;
            }
            let slope = (b1 - b0) / (t1 - t0);
            let len = (t_end.min(t1) - t0).max(0.0);
            acc += slope * slope * len;
        }
        acc
    }
}

/// Initial concentration samples `u_0` at physical coordinates in
/// `[0, s_0]`, interpolated linearly and clamped beyond the last sample.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    z: Vec<f64>,
    u: Vec<f64>,
}

impl InitialProfile {
    pub fn new(z: Vec<f64>, u: Vec<f64>) -> Result<Self, ModelError> {
        if z.is_empty() || z.len() != u.len() {
            return Err(ModelError::Profile(
                "coordinate and value lists must be nonempty and equal-length".into(),
            ));
        }
        if z[0] != 0.0 {
            return Err(ModelError::Profile(format!(
                "first sample must be at z = 0 (got z = {})",
                z[0]
            )));
        }
        for w in z.windows(2) {
            if !(w[1] > w[0]) {
                return Err(ModelError::Profile(
                    "sample coordinates must be strictly increasing".into(),
                ));
            }
        }
        for &v in &u {
            if !v.is_finite() {
                return Err(ModelError::Profile("u_0 must be bounded".into()));
            }
            if v < 0.0 {
                return Err(ModelError::Profile(format!(
                    "u_0 >= 0 is required (got {v})"
                )));
            }
        }
        Ok(Self { z, u })
    }

    /// Constant profile `u_0 = value` on `[0, s0]`.
    pub fn constant(value: f64, s0: f64) -> Result<Self, ModelError> {
        Self::new(vec![0.0, s0], vec![value, value])
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.z, &self.u)
    }

    /// Maximum of the sampled profile (piecewise-linear data attains its max
    /// at a knot).
    pub fn max_value(&self) -> f64 {
        self.u.iter().copied().fold(0.0, f64::max)
    }

    /// Evaluates `u_0(z)` by linear interpolation, clamped outside the
    /// sample range.
    pub fn eval(&self, z: f64) -> f64 {
        if z <= self.z[0] {
            return self.u[0];
        }
        let last = self.z.len() - 1;
        if z >= self.z[last] {
            return self.u[last];
        }
        let i = match self.z.partition_point(|&zk| zk <= z) {
            0 => 0,
            p => p - 1,
        };
        let theta = (z - self.z[i]) / (self.z[i + 1] - self.z[i]);
        self.u[i] + theta * (self.u[i + 1] - self.u[i])
    }

    /// Resamples the fixed-domain initial data `u_0(y s0)` onto the uniform
    /// grid `y_j = j / n`. Linear interpolation preserves non-negativity and
    /// the max bound.
    pub fn resample_fixed(&self, s0: f64, n: usize) -> Vec<f64> {
        (0..=n)
            .map(|j| self.eval(j as f64 / n as f64 * s0))
            .collect()
    }
}

/// Ambient ceiling `b* = max(max_t b, gamma * max u_0)`; with this choice
/// the initial data always sits below `b* / gamma`.
pub fn b_star(drive: &BoundaryDrive, profile: &InitialProfile, gamma: f64) -> f64 {
    drive.max_value().max(gamma * profile.max_value())
}

/// Fixed-domain simulation state: concentration values at the uniform nodes
/// `y_j = j / n`, the front position and velocity, and the clock.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub s: f64,
    pub s_t: f64,
    pub u: Vec<f64>,
}

impl SimState {
    pub fn grid_n(&self) -> usize {
        self.u.len() - 1
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.s > 0.0) {
            return Err(ModelError::State(format!("s > 0 is required (got {})", self.s)));
        }
        if self.u.len() < 3 {
            return Err(ModelError::State("grid must have at least 3 nodes".into()));
        }
        if self.u.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::State("non-finite concentration value".into()));
        }
        Ok(())
    }
}

/// Stationary point of the coupled system for a constant drive `b`:
/// the concentration settles at `b / gamma` (killing the Robin flux) and the
/// front at `b / (gamma alpha)` (killing the front law).
///
/// Rejects `alpha = 0` (the front then has no finite rest position) and
/// `b = 0` (the rest position would violate `s > 0`).
pub fn equilibrium(params: &ModelParams, b_const: f64) -> Result<(f64, f64), ModelError> {
    if params.alpha == 0.0 {
        return Err(ModelError::NoEquilibrium(
            "alpha = 0 has no finite front rest position".into(),
        ));
    }
    if !(b_const > 0.0) {
        return Err(ModelError::NoEquilibrium(format!(
            "b > 0 is required (got {b_const}); b = 0 rests at s = 0"
        )));
    }
    Ok((
        b_const / (params.gamma * params.alpha),
        b_const / params.gamma,
    ))
}
