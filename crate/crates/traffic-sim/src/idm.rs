//! Intelligent Driver Model car-following dynamics.

use crate::error::{Result, SimError};

/// Sentinel gap used when a vehicle has no leader within sensing range.
pub const FREE_ROAD_GAP: f64 = 1e9;

/// Behavioral parameters of the Intelligent Driver Model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdmParams {
    /// Maximum acceleration (m/s^2).
    pub a_max: f64,
    /// Comfortable deceleration (m/s^2).
    pub b_comf: f64,
    /// Desired free-flow speed (m/s).
    pub v0: f64,
    /// Minimum bumper-to-bumper gap (m).
    pub s0: f64,
    /// Desired time headway (s).
    pub tau: f64,
    /// Acceleration exponent.
    pub delta_exp: f64,
    /// Standard deviation of the per-step Gaussian acceleration noise
    /// applied to uncontrolled vehicles (m/s^2).
    pub noise_std: f64,
}

impl Default for IdmParams {
    fn default() -> Self {
        Self {
            a_max: 2.6,
            b_comf: 4.5,
            v0: 30.0,
            s0: 2.5,
            tau: 1.0,
            delta_exp: 4.0,
            noise_std: 0.2,
        }
    }
}

impl IdmParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("a_max", self.a_max),
            ("b_comf", self.b_comf),
            ("v0", self.v0),
            ("s0", self.s0),
            ("tau", self.tau),
            ("delta_exp", self.delta_exp),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(SimError::Config(format!("IDM parameter {name} must be > 0, got {v}")));
            }
        }
        if self.noise_std < 0.0 {
            return Err(SimError::Config(format!(
                "IDM noise_std must be >= 0, got {}",
                self.noise_std
            )));
        }
        Ok(())
    }

    /// Desired dynamic gap s*(v, dv) for ego speed `v` and closing speed `dv`.
    pub fn desired_gap(&self, v: f64, dv: f64) -> f64 {
        self.s0 + f64::max(0.0, v * self.tau + v * dv / (2.0 * (self.a_max * self.b_comf).sqrt()))
    }
}

/// IDM acceleration for ego speed `v`, bumper gap `gap` to the leader and
/// closing speed `dv = v - v_leader`. Noise is not added here; the caller adds
/// it for uncontrolled vehicles only.
pub fn idm_acceleration(v: f64, gap: f64, dv: f64, p: &IdmParams) -> Result<f64> {
    if gap <= 0.0 {
        return Err(SimError::NonPositiveGap(gap));
    }
    let free = (v / p.v0).powf(p.delta_exp);
    let interaction = (p.desired_gap(v, dv) / gap).powi(2);
    Ok(p.a_max * (1.0 - free - interaction))
}

/// Equilibrium speed on a homogeneous lane with constant bumper gap `gap`:
/// the root of `idm_acceleration(v, gap, 0) = 0`, found by bisection.
///
/// The acceleration is strictly decreasing in `v` at fixed gap, so the root
/// is unique on [0, v0].
pub fn equilibrium_speed(gap: f64, p: &IdmParams) -> Result<f64> {
    if gap <= p.s0 {
        return Ok(0.0);
    }
    let mut lo = 0.0_f64;
    let mut hi = p.v0;
    if idm_acceleration(hi, gap, 0.0, p)? >= 0.0 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if idm_acceleration(mid, gap, 0.0, p)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_flow_at_desired_speed_is_zero() {
        let p = IdmParams::default();
        let a = idm_acceleration(30.0, FREE_ROAD_GAP, 0.0, &p).unwrap();
        assert!(a.abs() < 1e-12, "free-flow accel at v0 should vanish, got {a}");
    }

    #[test]
    fn standstill_at_minimum_gap_is_zero() {
        let p = IdmParams::default();
        let a = idm_acceleration(0.0, 2.5, 0.0, &p).unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn ring_equilibrium_matches_frozen_bisection_value() {
        // C = 250 m, 22 vehicles -> gap = 250/22 - 5.
        // Frozen oracle values, computed by high-precision bisection before
        // the implementation existed:
        //   root of the full equation: 3.8627617587918377
        //   root of s*(v, 0) = gap:    (gap - s0)/tau = 3.8636363636363638
        let p = IdmParams::default();
        let gap = 250.0 / 22.0 - 5.0;
        let v_eq = equilibrium_speed(gap, &p).unwrap();
        assert!((v_eq - 3.8627617587918377).abs() < 1e-9, "v_eq = {v_eq}");
        let v_sstar = (gap - p.s0) / p.tau;
        assert!((v_sstar - 3.8636363636363638).abs() < 1e-12);
        // The two roots agree within the free-flow correction.
        assert!((v_eq - v_sstar).abs() < 5e-3);
        // And the full root is a genuine equilibrium.
        assert!(idm_acceleration(v_eq, gap, 0.0, &p).unwrap().abs() < 1e-10);
    }

    #[test]
    fn non_positive_gap_is_a_domain_error() {
        let p = IdmParams::default();
        assert!(matches!(
            idm_acceleration(5.0, 0.0, 0.0, &p),
            Err(SimError::NonPositiveGap(_))
        ));
        assert!(matches!(
            idm_acceleration(5.0, -1.0, 0.0, &p),
            Err(SimError::NonPositiveGap(_))
        ));
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = IdmParams::default();
        p.tau = 0.0;
        assert!(p.validate().is_err());
        let mut p = IdmParams::default();
        p.noise_std = -0.1;
        assert!(p.validate().is_err());
    }
}
