//! Change of variables between the physical moving domain `[0, s]` and the
//! fixed unit interval, `u(t, z) = u_tilde(t, z / s)`, plus reconstruction of
//! physical profiles for output.

use crate::model::SimState;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("front position must be positive (got {0})")]
    NonPositiveFront(f64),
    #[error("invalid physical profile: {0}")]
    BadProfile(String),
    #[error("fixed grid needs at least 2 intervals (got {0})")]
    GridTooSmall(usize),
}

/// Concentration samples on the physical domain `[0, s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalProfile {
    pub z: Vec<f64>,
    pub values: Vec<f64>,
    pub s: f64,
}

impl PhysicalProfile {
    pub fn new(z: Vec<f64>, values: Vec<f64>, s: f64) -> Result<Self, TransformError> {
        if !(s > 0.0) {
            return Err(TransformError::NonPositiveFront(s));
        }
        if z.len() != values.len() || z.len() < 2 {
            return Err(TransformError::BadProfile(
                "need at least two matched samples".into(),
            ));
        }
        if z[0] != 0.0 {
            return Err(TransformError::BadProfile(format!(
                "first node must be z = 0 (got {})",
                z[0]
            )));
        }
        if z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(TransformError::BadProfile(
                "nodes must be strictly increasing".into(),
            ));
        }
        let zl = z[z.len() - 1];
        if (zl - s).abs() > 1e-12 * s.max(1.0) {
            return Err(TransformError::BadProfile(format!(
                "last node must sit on the front (z = {zl}, s = {s})"
            )));
        }
        Ok(Self { z, values, s })
    }

    /// Linear interpolation on the profile nodes; exact at nodes.
    fn eval(&self, z: f64) -> f64 {
        let n = self.z.len();
        if z <= self.z[0] {
            return self.values[0];
        }
        if z >= self.z[n - 1] {
            return self.values[n - 1];
        }
        let i = match self.z.partition_point(|&zk| zk <= z) {
            0 => 0,
            p => p - 1,
        };
        let theta = (z - self.z[i]) / (self.z[i + 1] - self.z[i]);
        self.values[i] + theta * (self.values[i + 1] - self.values[i])
    }
}

/// Pulls a physical profile onto the fixed grid: `u_tilde(y_j) = u(y_j s)`.
/// Linear interpolation preserves the min and max of the input values.
pub fn to_fixed(profile: &PhysicalProfile, grid_n: usize) -> Result<Vec<f64>, TransformError> {
    if grid_n < 2 {
        return Err(TransformError::GridTooSmall(grid_n));
    }
    if !(profile.s > 0.0) {
        return Err(TransformError::NonPositiveFront(profile.s));
    }
    Ok((0..=grid_n)
        .map(|j| profile.eval(j as f64 / grid_n as f64 * profile.s))
        .collect())
}

/// Pushes a fixed-domain state back to physical coordinates:
/// `z_j = y_j s`, values copied.
pub fn to_physical(state: &SimState) -> PhysicalProfile {
    let n = state.grid_n();
    PhysicalProfile {
        z: (0..=n).map(|j| j as f64 / n as f64 * state.s).collect(),
        values: state.u.clone(),
        s: state.s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state_from(f: impl Fn(f64) -> f64, n: usize, s: f64) -> SimState {
        SimState {
            t: 0.0,
            s,
            s_t: 0.0,
            u: (0..=n).map(|j| f(j as f64 / n as f64)).collect(),
        }
    }

    #[test]
    fn constants_survive_both_maps() {
        let p = PhysicalProfile::new(vec![0.0, 1.0, 2.0], vec![3.0, 3.0, 3.0], 2.0).unwrap();
        let u = to_fixed(&p, 6).unwrap();
        assert!(u.iter().all(|&v| v == 3.0));

        let st = state_from(|_| 3.0, 6, 1.0);
        let back = to_physical(&st);
        assert_eq!(back.values, st.u);
        assert_eq!(back.z[6], 1.0);
    }

    #[test]
    fn linear_profile_maps_to_scaled_line() {
        // u(z) = z with s = 2 becomes u_tilde(y) = 2 y
        let z: Vec<f64> = (0..=10).map(|j| j as f64 * 0.2).collect();
        let vals = z.clone();
        let p = PhysicalProfile::new(z, vals, 2.0).unwrap();
        let u = to_fixed(&p, 5).unwrap();
        for (j, &v) in u.iter().enumerate() {
            let y = j as f64 / 5.0;
            assert!((v - 2.0 * y).abs() < 1e-14);
        }
    }

    #[test]
    fn quadratic_sample_point() {
        // u(z) = z^2, s = 3: u_tilde(0.5) = (0.5 * 3)^2 = 2.25 up to
        // interpolation error on a fine profile grid
        let m = 3000;
        let z: Vec<f64> = (0..=m).map(|j| 3.0 * j as f64 / m as f64).collect();
        let vals: Vec<f64> = z.iter().map(|&z| z * z).collect();
        let p = PhysicalProfile::new(z, vals, 3.0).unwrap();
        let u = to_fixed(&p, 2).unwrap();
        assert!((u[1] - 2.25).abs() < 1e-6, "got {}", u[1]);
    }

    #[test]
    fn inverse_map_rescales_coordinates() {
        // u_tilde(y) = y with s = 2 reconstructs u(z) = z / 2 on [0, 2]
        let st = state_from(|y| y, 4, 2.0);
        let p = to_physical(&st);
        for (zk, vk) in p.z.iter().zip(&p.values) {
            assert!((vk - zk / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn round_trip_is_exact_at_shared_nodes() {
        let st = state_from(|y| (5.3 * y).sin() + 1.2, 37, 1.7);
        let back = to_fixed(&to_physical(&st), 37).unwrap();
        assert_eq!(back, st.u);
    }

    #[test]
    fn interpolation_error_decays_at_second_order() {
        // Resampling an n-node profile onto a fine probe grid evaluates the
        // interpolant; against the smooth generator the sup error is O(n^-2).
        let f = |z: f64| (2.0 * z).sin() + 1.5;
        let s = 1.7;
        let probe = 1024;
        let err_at = |n: usize| -> f64 {
            let z: Vec<f64> = (0..=n).map(|j| s * j as f64 / n as f64).collect();
            let vals: Vec<f64> = z.iter().map(|&z| f(z)).collect();
            let p = PhysicalProfile::new(z, vals, s).unwrap();
            let u = to_fixed(&p, probe).unwrap();
            u.iter()
                .enumerate()
                .map(|(j, &v)| (v - f(j as f64 / probe as f64 * s)).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2, e3) = (err_at(16), err_at(32), err_at(64));
        assert!(e1 / e2 > 3.5, "e16 = {e1}, e32 = {e2}");
        assert!(e2 / e3 > 3.5, "e32 = {e2}, e64 = {e3}");
    }

    #[test]
    fn rejects_degenerate_front() {
        let st = SimState {
            t: 0.0,
            s: -1.0,
            s_t: 0.0,
            u: vec![0.0; 5],
        };
        // building the profile by hand, since to_physical assumes validity
        assert!(PhysicalProfile::new(vec![0.0, 1.0], vec![0.0, 0.0], -1.0).is_err());
        assert!(PhysicalProfile::new(vec![0.0, 0.5], vec![0.0, 0.0], 1.0).is_err());
        let _ = st;
    }

    proptest! {
        #[test]
        fn range_is_preserved_under_both_maps(
            vals in proptest::collection::vec(0.0f64..4.0, 5..40),
            s in 0.1f64..5.0,
            m in 2usize..200,
        ) {
            let n = vals.len() - 1;
            let st = SimState { t: 0.0, s, s_t: 0.0, u: vals.clone() };
            let p = to_physical(&st);
            let u = to_fixed(&p, m).unwrap();
            let lo = vals.iter().copied().fold(f64::MAX, f64::min);
            let hi = vals.iter().copied().fold(f64::MIN, f64::max);
            for &v in &u {
                prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
            // node-exact round trip on the original grid
            let back = to_fixed(&p, n).unwrap();
            prop_assert_eq!(back, vals);
        }
    }
}
