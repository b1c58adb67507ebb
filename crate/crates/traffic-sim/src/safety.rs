//! Emergency-braking-feasibility safety layer.
//!
//! A commanded acceleration is clipped so that the resulting speed still
//! allows the ego vehicle to stop within its current gap under the worst-case
//! assumption that the leader decelerates at `b_comf` until standstill. Both
//! the leader's and the ego's stopping distances use the exact discrete
//! semi-implicit Euler braking sequence, which makes the no-collision
//! guarantee inductive: a follower that satisfied the bound on the previous
//! step can always restore it by braking at `b_comf`.

use crate::idm::IdmParams;

/// Hard cap on commanded deceleration (m/s^2). Braking beyond `b_comf` is
/// only commanded when a constraint appears out of nowhere (lane change,
/// spawn, signal yield).
pub const B_CAP: f64 = 9.0;

/// A follower-leader relation reduced to what the safety layer needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaderView {
    /// Bumper-to-bumper gap (m).
    pub gap: f64,
    /// Leader speed (m/s). Standing obstacles (stop lines) use 0.
    pub speed: f64,
}

/// Distance covered by the discrete braking sequence v -> max(0, v - b*dt)
/// under semi-implicit Euler integration.
pub fn stopping_distance(v: f64, b: f64, dt: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    let m = (v / (b * dt)).floor();
    m * v * dt - b * dt * dt * m * (m + 1.0) * 0.5
}

/// Largest speed `v'` such that `v'*dt + stopping_distance(v', b, dt) <= budget`.
///
/// The left-hand side is piecewise linear and increasing in `v'` with
/// breakpoints at multiples of `b*dt`, so the inversion is closed-form.
pub fn max_safe_speed(budget: f64, b: f64, dt: f64) -> f64 {
    if budget <= 0.0 {
        return 0.0;
    }
    // Largest k with b*dt^2 * k(k+1)/2 <= budget.
    let k = ((-1.0 + (1.0 + 8.0 * budget / (b * dt * dt)).sqrt()) * 0.5).floor();
    budget / ((k + 1.0) * dt) + b * dt * k * 0.5
}

/// Maximum speed the ego may carry into the next step while remaining able to
/// stop behind `leader`, assuming the leader brakes at `b`.
pub fn safe_speed(leader: &LeaderView, b: f64, dt: f64) -> f64 {
    let budget = leader.gap + stopping_distance(leader.speed, b, dt);
    max_safe_speed(budget, b, dt)
}

/// Clip a proposed acceleration against one optional leader.
///
/// Returns an acceleration `a <= proposed` such that the post-step speed does
/// not exceed the safe speed. The result never commands a negative speed and
/// never brakes harder than `B_CAP`.
pub fn safety_clip(
    proposed: f64,
    speed: f64,
    leader: Option<&LeaderView>,
    p: &IdmParams,
    dt: f64,
) -> f64 {
    let mut a = proposed;
    if let Some(l) = leader {
        let v_safe = safe_speed(l, p.b_comf, dt);
        a = a.min((v_safe - speed) / dt);
    }
    let floor = (-B_CAP).max(-speed / dt);
    a.max(floor)
}

/// Clip against the most restrictive of several leaders.
pub fn safety_clip_multi(
    proposed: f64,
    speed: f64,
    leaders: &[LeaderView],
    p: &IdmParams,
    dt: f64,
) -> f64 {
    let mut a = proposed;
    for l in leaders {
        let v_safe = safe_speed(l, p.b_comf, dt);
        a = a.min((v_safe - speed) / dt);
    }
    let floor = (-B_CAP).max(-speed / dt);
    a.max(floor)
}

/// Gap-acceptance predicate used for lane changes and insertions: a follower
/// at `v_follow` may sit `gap` behind a leader at `v_lead` iff its current
/// speed does not exceed the safe speed for that relation.
pub fn gap_is_safe(gap: f64, v_follow: f64, v_lead: f64, p: &IdmParams, dt: f64) -> bool {
    if gap <= 0.0 {
        return false;
    }
    v_follow <= safe_speed(&LeaderView { gap, speed: v_lead }, p.b_comf, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn slack_constraint_leaves_accel_unchanged() {
        let p = IdmParams::default();
        let l = LeaderView { gap: 1000.0, speed: 10.0 };
        let a = safety_clip(2.6, 10.0, Some(&l), &p, 0.1);
        assert_eq!(a, 2.6);
    }

    #[test]
    fn binding_constraint_commands_maximal_braking() {
        let p = IdmParams::default();
        let l = LeaderView { gap: 0.1, speed: 0.0 };
        let a = safety_clip(2.6, 10.0, Some(&l), &p, 0.1);
        assert_eq!(a, -B_CAP);
    }

    #[test]
    fn never_commands_negative_speed() {
        let p = IdmParams::default();
        let l = LeaderView { gap: 0.1, speed: 0.0 };
        let a = safety_clip(2.6, 0.3, Some(&l), &p, 0.1);
        assert!(0.3 + a * 0.1 >= 0.0);
    }

    #[test]
    fn max_safe_speed_inverts_stopping_distance() {
        let dt = 0.1;
        for b in [4.5, 9.0] {
            for budget in [0.01, 0.5, 3.0, 17.2, 120.0] {
                let v = max_safe_speed(budget, b, dt);
                let used = v * dt + stopping_distance(v, b, dt);
                assert!((used - budget).abs() < 1e-9, "b={b} budget={budget}: used {used}");
            }
        }
    }

    /// Oracle: forward-simulate worst-case leader braking and check the
    /// post-clip stopping margin is never negative, for every instance whose
    /// initial state already satisfies the inductive bound.
    #[test]
    fn clipped_accel_keeps_nonnegative_stopping_margin() {
        let p = IdmParams::default();
        let dt = 0.1;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0;
        for _ in 0..2000 {
            let gap: f64 = rng.random_range(0.05..60.0);
            let v_e: f64 = rng.random_range(0.0..30.0);
            let v_l: f64 = rng.random_range(0.0..30.0);
            // Only states that satisfy the invariant are reachable.
            let invariant =
                gap + stopping_distance(v_l, p.b_comf, dt) >= stopping_distance(v_e, p.b_comf, dt);
            if !invariant {
                continue;
            }
            tested += 1;
            let l = LeaderView { gap, speed: v_l };
            let a = safety_clip(p.a_max, v_e, Some(&l), &p, dt);
            // One step with the clipped accel, then both brake at b_comf.
            let mut ve = f64::max(0.0, v_e + a * dt);
            let mut vl = v_l;
            let mut g = gap;
            for _ in 0..600 {
                vl = f64::max(0.0, vl - p.b_comf * dt);
                g += vl * dt - ve * dt;
                assert!(g >= -1e-9, "margin violated: gap={gap} v_e={v_e} v_l={v_l} g={g}");
                ve = f64::max(0.0, ve - p.b_comf * dt);
                if ve == 0.0 && vl == 0.0 {
                    break;
                }
            }
        }
        assert!(tested > 500, "too few admissible instances: {tested}");
    }
}
