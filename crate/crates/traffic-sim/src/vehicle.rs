use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::network::LaneId;

pub const VEHICLE_LENGTH: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VehicleId(pub u64);

impl std::fmt::Display for VehicleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VehicleKind {
    Av,
    Human,
}

impl VehicleKind {
    pub fn label(&self) -> &'static str {
        match self {
            VehicleKind::Av => "av",
            VehicleKind::Human => "human",
        }
    }
}

/// One vehicle's kinematic and identity record.
///
/// `pos` is the longitudinal position of the front bumper along the current
/// lane; the vehicle occupies `[pos - length, pos]`.
#[derive(Debug, Clone)]
pub struct Vehicle {
    pub id: VehicleId,
    pub kind: VehicleKind,
    pub lane: LaneId,
    pub pos: f64,
    pub speed: f64,
    pub length: f64,
    /// Ordered lane sequence this vehicle follows.
    pub route: Vec<LaneId>,
    /// Index of `lane` within `route`.
    pub route_idx: usize,
    /// Whether the route wraps around (closed systems).
    pub cyclic: bool,
    /// Lane-change intent, if any.
    pub signal: Option<LaneId>,
    /// Simulation time at which the vehicle entered the world (s).
    pub entered_at: f64,
    /// Lane the vehicle occupied before its most recent link transition.
    pub prev_lane: Option<LaneId>,
    /// Private acceleration-noise stream; a function of (world seed, id) so
    /// that a vehicle's noise draws do not depend on other vehicles.
    pub(crate) noise_rng: ChaCha8Rng,
}

/// SplitMix64 step, used to derive independent per-vehicle seeds.
pub(crate) fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Vehicle {
    pub fn new(
        id: VehicleId,
        kind: VehicleKind,
        lane: LaneId,
        pos: f64,
        speed: f64,
        route: Vec<LaneId>,
        cyclic: bool,
        entered_at: f64,
        world_seed: u64,
    ) -> Self {
        let route_idx = route.iter().position(|&l| l == lane).unwrap_or(0);
        Self {
            id,
            kind,
            lane,
            pos,
            speed,
            length: VEHICLE_LENGTH,
            route,
            route_idx,
            cyclic,
            signal: None,
            entered_at,
            prev_lane: None,
            noise_rng: ChaCha8Rng::seed_from_u64(mix_seed(world_seed, id.0)),
        }
    }

    /// Rear bumper position along the current lane.
    pub fn rear(&self) -> f64 {
        self.pos - self.length
    }

    /// Next lane along the route, if any.
    pub fn next_lane(&self) -> Option<LaneId> {
        if self.route_idx + 1 < self.route.len() {
            Some(self.route[self.route_idx + 1])
        } else if self.cyclic {
            Some(self.route[0])
        } else {
            None
        }
    }
}
