//! Network topologies for the six traffic systems.

use crate::error::{Result, SimError};

pub const LANE_WIDTH: f64 = 3.2;
/// Side length of the square conflict box at crossings (two lane widths).
pub const BOX_SIDE: f64 = 2.0 * LANE_WIDTH;
/// Length of the shared pavement at the head of a merge's successor lane.
pub const MERGE_ZONE_LEN: f64 = 10.0;
/// Fixed on-ramp demand for the highway ramp system (veh/hr).
pub const RAMP_INFLOW: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaneId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    SingleRing,
    DoubleRing,
    FigureEight,
    Bottleneck,
    Ramp,
    Intersection,
}

impl SystemKind {
    pub fn label(&self) -> &'static str {
        match self {
            SystemKind::SingleRing => "single_ring",
            SystemKind::DoubleRing => "double_ring",
            SystemKind::FigureEight => "figure_eight",
            SystemKind::Bottleneck => "bottleneck",
            SystemKind::Ramp => "ramp",
            SystemKind::Intersection => "intersection",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "single_ring" => Ok(SystemKind::SingleRing),
            "double_ring" => Ok(SystemKind::DoubleRing),
            "figure_eight" => Ok(SystemKind::FigureEight),
            "bottleneck" => Ok(SystemKind::Bottleneck),
            "ramp" => Ok(SystemKind::Ramp),
            "intersection" => Ok(SystemKind::Intersection),
            other => Err(SimError::Config(format!("unknown system '{other}'"))),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(
            self,
            SystemKind::SingleRing | SystemKind::DoubleRing | SystemKind::FigureEight
        )
    }

    /// Simulation step size: 0.1 s for closed systems, 0.5 s for open ones.
    pub fn dt(&self) -> f64 {
        if self.is_closed() {
            0.1
        } else {
            0.5
        }
    }
}

/// Density configuration for one system instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityParam {
    Scalar(f64),
    Pair(f64, f64),
}

impl DensityParam {
    pub fn scalar(&self) -> Result<f64> {
        match self {
            DensityParam::Scalar(v) => Ok(*v),
            DensityParam::Pair(..) => {
                Err(SimError::Config("expected a scalar density parameter".into()))
            }
        }
    }

    pub fn pair(&self) -> Result<(f64, f64)> {
        match self {
            DensityParam::Pair(a, b) => Ok((*a, *b)),
            DensityParam::Scalar(_) => {
                Err(SimError::Config("expected a pair density parameter".into()))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct LaneSpec {
    pub id: LaneId,
    pub name: String,
    pub length: f64,
    pub successors: Vec<LaneId>,
    pub merge_priority: u8,
    /// Cyclic lanes wrap onto themselves (ring roads, figure eight).
    pub cyclic: bool,
}

#[derive(Debug, Clone)]
pub struct InflowSpec {
    pub lane: LaneId,
    pub rate_veh_hr: f64,
    /// Every `av_every`-th spawned vehicle on this lane is an AV (cycle
    /// position 0 is an AV); `None` spawns humans only.
    pub av_every: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZoneKind {
    /// Two streams cross each other (intersection box).
    Crossing,
    /// Two lanes join into one.
    Merge,
}

#[derive(Debug, Clone)]
pub struct ZoneApproach {
    pub lane: LaneId,
    /// Position of the zone entry line along the approach lane.
    pub entry_pos: f64,
    pub group: u8,
    /// Smaller values are considered first during contention.
    pub priority: u8,
}

#[derive(Debug, Clone)]
pub struct ZoneSegment {
    pub lane: LaneId,
    pub start: f64,
    pub end: f64,
    /// Conflict group of vehicles inside this segment; `None` means the
    /// group follows from the vehicle's origin approach (merge successors).
    pub group: Option<u8>,
}

#[derive(Debug, Clone)]
pub struct ConflictZone {
    pub kind: ZoneKind,
    pub approaches: Vec<ZoneApproach>,
    pub segments: Vec<ZoneSegment>,
    /// Longitudinal extent a vehicle traverses to clear the zone.
    pub extent: f64,
}

#[derive(Debug, Clone)]
pub struct NetworkSpec {
    pub system: SystemKind,
    pub density: DensityParam,
    pub lanes: Vec<LaneSpec>,
    pub inflows: Vec<InflowSpec>,
    pub outflows: Vec<LaneId>,
    pub zones: Vec<ConflictZone>,
    pub closed: bool,
    pub dt: f64,
    /// Initial vehicle count for closed systems (0 for open).
    pub initial_vehicles: usize,
    /// Number of AVs among the initial vehicles (closed systems).
    pub initial_avs: usize,
    /// Lane paired with each lane at a merge, if any.
    pub adjacent: Vec<Option<LaneId>>,
    /// Distance from each lane's start to the entry line of the next merge
    /// along the route, if one lies ahead.
    pub next_merge_dist: Vec<Option<f64>>,
    /// Distance from each lane's start to the entry line of the final merge
    /// of the route, if any.
    pub final_merge_dist: Vec<Option<f64>>,
    /// Whether AVs may issue lateral (lane change) actions.
    pub lane_change_enabled: bool,
}

impl NetworkSpec {
    pub fn lane(&self, id: LaneId) -> &LaneSpec {
        &self.lanes[id.0]
    }

    pub fn lane_by_name(&self, name: &str) -> Option<LaneId> {
        self.lanes.iter().find(|l| l.name == name).map(|l| l.id)
    }

    /// Canonical route from `lane` to the network exit, following the first
    /// successor of each lane.
    pub fn route_from(&self, lane: LaneId) -> Vec<LaneId> {
        let mut route = vec![lane];
        let mut cur = lane;
        while let Some(&next) = self.lanes[cur.0].successors.first() {
            if next == lane || route.contains(&next) {
                break;
            }
            route.push(next);
            cur = next;
        }
        route
    }

    fn validate(&self) -> Result<()> {
        for lane in &self.lanes {
            if !(lane.length > 0.0) {
                return Err(SimError::Config(format!("lane {} has non-positive length", lane.name)));
            }
        }
        if self.closed && (!self.inflows.is_empty() || !self.outflows.is_empty()) {
            return Err(SimError::Config("closed systems have no inflow/outflow points".into()));
        }
        if !self.closed {
            for inflow in &self.inflows {
                let route = self.route_from(inflow.lane);
                let last = *route.last().unwrap();
                if !self.outflows.contains(&last) {
                    return Err(SimError::Config(format!(
                        "route from {} does not terminate at an outflow point",
                        self.lane(inflow.lane).name
                    )));
                }
            }
        }
        Ok(())
    }
}

fn range_check(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if v < lo || v > hi {
        return Err(SimError::Config(format!(
            "{name} = {v} outside supported range [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Build the fully specified topology for one system at one density
/// configuration.
pub fn build_network(system: SystemKind, density: DensityParam) -> Result<NetworkSpec> {
    let net = match system {
        SystemKind::SingleRing => single_ring(density.scalar()?)?,
        SystemKind::DoubleRing => double_ring(density.scalar()?)?,
        SystemKind::FigureEight => figure_eight(density.scalar()?)?,
        SystemKind::Bottleneck => bottleneck(density.scalar()?)?,
        SystemKind::Ramp => ramp(density.scalar()?)?,
        SystemKind::Intersection => {
            let (fh, fv) = density.pair()?;
            intersection(fh, fv)?
        }
    };
    net.validate()?;
    Ok(net)
}

fn lane(id: usize, name: &str, length: f64, successors: Vec<usize>, priority: u8, cyclic: bool) -> LaneSpec {
    LaneSpec {
        id: LaneId(id),
        name: name.to_string(),
        length,
        successors: successors.into_iter().map(LaneId).collect(),
        merge_priority: priority,
        cyclic,
    }
}

fn single_ring(c: f64) -> Result<NetworkSpec> {
    range_check("C", c, 230.0, 270.0)?;
    Ok(NetworkSpec {
        system: SystemKind::SingleRing,
        density: DensityParam::Scalar(c),
        lanes: vec![lane(0, "ring", c, vec![0], 0, true)],
        inflows: vec![],
        outflows: vec![],
        zones: vec![],
        closed: true,
        dt: SystemKind::SingleRing.dt(),
        initial_vehicles: 22,
        initial_avs: 1,
        adjacent: vec![None],
        next_merge_dist: vec![None],
        final_merge_dist: vec![None],
        lane_change_enabled: false,
    })
}

fn double_ring(c: f64) -> Result<NetworkSpec> {
    range_check("C", c, 240.0, 260.0)?;
    // Both lanes are simulated at the same length.
    Ok(NetworkSpec {
        system: SystemKind::DoubleRing,
        density: DensityParam::Scalar(c),
        lanes: vec![
            lane(0, "outer", c, vec![0], 0, true),
            lane(1, "inner", c, vec![1], 0, true),
        ],
        inflows: vec![],
        outflows: vec![],
        zones: vec![],
        closed: true,
        dt: SystemKind::DoubleRing.dt(),
        initial_vehicles: 44,
        initial_avs: 1,
        adjacent: vec![None, None],
        next_merge_dist: vec![None, None],
        final_merge_dist: vec![None, None],
        lane_change_enabled: true,
    })
}

fn figure_eight(r: f64) -> Result<NetworkSpec> {
    range_check("R", r, 25.0, 35.0)?;
    // Each loop: straightaway R on each side of the crossing, joined by a
    // 270-degree arc of radius R, so loop length = 2R + (3/2)*pi*R. The two
    // loops form a single cyclic lane crossing itself at two route positions
    // half the total length apart.
    let loop_len = 2.0 * r + 1.5 * std::f64::consts::PI * r;
    let total = 2.0 * loop_len;
    let c1 = 0.25 * total;
    let c2 = 0.75 * total;
    let half = 0.5 * BOX_SIDE;
    let zone = ConflictZone {
        kind: ZoneKind::Crossing,
        approaches: vec![
            ZoneApproach { lane: LaneId(0), entry_pos: c1 - half, group: 0, priority: 0 },
            ZoneApproach { lane: LaneId(0), entry_pos: c2 - half, group: 1, priority: 1 },
        ],
        segments: vec![
            ZoneSegment { lane: LaneId(0), start: c1 - half, end: c1 + half, group: Some(0) },
            ZoneSegment { lane: LaneId(0), start: c2 - half, end: c2 + half, group: Some(1) },
        ],
        extent: BOX_SIDE,
    };
    Ok(NetworkSpec {
        system: SystemKind::FigureEight,
        density: DensityParam::Scalar(r),
        lanes: vec![lane(0, "eight", total, vec![0], 0, true)],
        inflows: vec![],
        outflows: vec![],
        zones: vec![zone],
        closed: true,
        dt: SystemKind::FigureEight.dt(),
        initial_vehicles: 14,
        initial_avs: 1,
        adjacent: vec![None],
        next_merge_dist: vec![None],
        final_merge_dist: vec![None],
        lane_change_enabled: false,
    })
}

fn merge_zone(feeder_a: usize, feeder_b: usize, feeder_len: f64, successor: usize) -> ConflictZone {
    ConflictZone {
        kind: ZoneKind::Merge,
        approaches: vec![
            ZoneApproach { lane: LaneId(feeder_a), entry_pos: feeder_len, group: 0, priority: 0 },
            ZoneApproach { lane: LaneId(feeder_b), entry_pos: feeder_len, group: 1, priority: 1 },
        ],
        segments: vec![ZoneSegment {
            lane: LaneId(successor),
            start: 0.0,
            end: MERGE_ZONE_LEN,
            group: None,
        }],
        extent: MERGE_ZONE_LEN,
    }
}

fn bottleneck(total_inflow: f64) -> Result<NetworkSpec> {
    range_check("total inflow", total_inflow, 1700.0, 2600.0)?;
    let per_lane = total_inflow / 4.0;
    // Lanes 0..3: inflow lanes; 4, 5: intermediate; 6: final.
    let lanes = vec![
        lane(0, "in_1", 100.0, vec![4], 0, false),
        lane(1, "in_2", 100.0, vec![4], 1, false),
        lane(2, "in_3", 100.0, vec![5], 0, false),
        lane(3, "in_4", 100.0, vec![5], 1, false),
        lane(4, "mid_a", 100.0, vec![6], 0, false),
        lane(5, "mid_b", 100.0, vec![6], 1, false),
        lane(6, "out", 50.0, vec![], 0, false),
    ];
    let inflows = (0..4)
        .map(|i| InflowSpec { lane: LaneId(i), rate_veh_hr: per_lane, av_every: Some(5) })
        .collect();
    let zones = vec![
        merge_zone(0, 1, 100.0, 4),
        merge_zone(2, 3, 100.0, 5),
        merge_zone(4, 5, 100.0, 6),
    ];
    Ok(NetworkSpec {
        system: SystemKind::Bottleneck,
        density: DensityParam::Scalar(total_inflow),
        lanes,
        inflows,
        outflows: vec![LaneId(6)],
        zones,
        closed: false,
        dt: SystemKind::Bottleneck.dt(),
        initial_vehicles: 0,
        initial_avs: 0,
        adjacent: vec![
            Some(LaneId(1)),
            Some(LaneId(0)),
            Some(LaneId(3)),
            Some(LaneId(2)),
            Some(LaneId(5)),
            Some(LaneId(4)),
            None,
        ],
        next_merge_dist: vec![
            Some(100.0),
            Some(100.0),
            Some(100.0),
            Some(100.0),
            Some(100.0),
            Some(100.0),
            None,
        ],
        final_merge_dist: vec![
            Some(200.0),
            Some(200.0),
            Some(200.0),
            Some(200.0),
            Some(100.0),
            Some(100.0),
            None,
        ],
        lane_change_enabled: false,
    })
}

fn ramp(highway_inflow: f64) -> Result<NetworkSpec> {
    range_check("highway inflow", highway_inflow, 1500.0, 2500.0)?;
    // Lane 0: upstream highway; lane 1: highway side of the merge region;
    // lane 2: on-ramp running alongside; lane 3: downstream single lane.
    let lanes = vec![
        lane(0, "hw_up", 400.0, vec![1], 0, false),
        lane(1, "hw_merge", 100.0, vec![3], 0, false),
        lane(2, "ramp", 100.0, vec![3], 1, false),
        lane(3, "hw_down", 30.0, vec![], 0, false),
    ];
    let inflows = vec![
        InflowSpec { lane: LaneId(0), rate_veh_hr: highway_inflow, av_every: Some(10) },
        InflowSpec { lane: LaneId(2), rate_veh_hr: RAMP_INFLOW, av_every: None },
    ];
    let zones = vec![merge_zone(1, 2, 100.0, 3)];
    Ok(NetworkSpec {
        system: SystemKind::Ramp,
        density: DensityParam::Scalar(highway_inflow),
        lanes,
        inflows,
        outflows: vec![LaneId(3)],
        zones,
        closed: false,
        dt: SystemKind::Ramp.dt(),
        initial_vehicles: 0,
        initial_avs: 0,
        adjacent: vec![None, Some(LaneId(2)), Some(LaneId(1)), None],
        next_merge_dist: vec![Some(500.0), Some(100.0), Some(100.0), None],
        final_merge_dist: vec![Some(500.0), Some(100.0), Some(100.0), None],
        lane_change_enabled: false,
    })
}

fn intersection(f_h: f64, f_v: f64) -> Result<NetworkSpec> {
    range_check("F_H", f_h, 400.0, 1000.0)?;
    range_check("F_V", f_v, 400.0, 1000.0)?;
    if f_h + f_v < 1400.0 {
        return Err(SimError::Config(format!(
            "F_H + F_V = {} below the minimum total of 1400 veh/hr",
            f_h + f_v
        )));
    }
    // Per direction: approach lane (100 m) -> internal box lane -> exit lane
    // (100 m). Only straight movements exist. Groups: 0 = vertical
    // (priority), 1 = horizontal.
    let lanes = vec![
        lane(0, "v1_in", 100.0, vec![4], 0, false),
        lane(1, "v2_in", 100.0, vec![5], 0, false),
        lane(2, "h1_in", 100.0, vec![6], 1, false),
        lane(3, "h2_in", 100.0, vec![7], 1, false),
        lane(4, "v1_box", BOX_SIDE, vec![8], 0, false),
        lane(5, "v2_box", BOX_SIDE, vec![9], 0, false),
        lane(6, "h1_box", BOX_SIDE, vec![10], 1, false),
        lane(7, "h2_box", BOX_SIDE, vec![11], 1, false),
        lane(8, "v1_out", 100.0, vec![], 0, false),
        lane(9, "v2_out", 100.0, vec![], 0, false),
        lane(10, "h1_out", 100.0, vec![], 0, false),
        lane(11, "h2_out", 100.0, vec![], 0, false),
    ];
    let inflows = vec![
        InflowSpec { lane: LaneId(0), rate_veh_hr: f_v, av_every: Some(3) },
        InflowSpec { lane: LaneId(1), rate_veh_hr: f_v, av_every: Some(3) },
        InflowSpec { lane: LaneId(2), rate_veh_hr: f_h, av_every: Some(3) },
        InflowSpec { lane: LaneId(3), rate_veh_hr: f_h, av_every: Some(3) },
    ];
    let zone = ConflictZone {
        kind: ZoneKind::Crossing,
        approaches: vec![
            ZoneApproach { lane: LaneId(0), entry_pos: 100.0, group: 0, priority: 0 },
            ZoneApproach { lane: LaneId(1), entry_pos: 100.0, group: 0, priority: 0 },
            ZoneApproach { lane: LaneId(2), entry_pos: 100.0, group: 1, priority: 1 },
            ZoneApproach { lane: LaneId(3), entry_pos: 100.0, group: 1, priority: 1 },
        ],
        segments: vec![
            ZoneSegment { lane: LaneId(4), start: 0.0, end: BOX_SIDE, group: Some(0) },
            ZoneSegment { lane: LaneId(5), start: 0.0, end: BOX_SIDE, group: Some(0) },
            ZoneSegment { lane: LaneId(6), start: 0.0, end: BOX_SIDE, group: Some(1) },
            ZoneSegment { lane: LaneId(7), start: 0.0, end: BOX_SIDE, group: Some(1) },
        ],
        extent: BOX_SIDE,
    };
    Ok(NetworkSpec {
        system: SystemKind::Intersection,
        density: DensityParam::Pair(f_h, f_v),
        lanes,
        inflows,
        outflows: vec![LaneId(8), LaneId(9), LaneId(10), LaneId(11)],
        zones: vec![zone],
        closed: false,
        dt: SystemKind::Intersection.dt(),
        initial_vehicles: 0,
        initial_avs: 0,
        adjacent: vec![None; 12],
        next_merge_dist: vec![None; 12],
        final_merge_dist: vec![None; 12],
        lane_change_enabled: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ring_build() {
        let net = build_network(SystemKind::SingleRing, DensityParam::Scalar(250.0)).unwrap();
        assert_eq!(net.lanes.len(), 1);
        assert_eq!(net.lane(LaneId(0)).length, 250.0);
        assert_eq!(net.initial_vehicles, 22);
        assert_eq!(net.initial_avs, 1);
        assert!(net.closed);
        assert_eq!(net.dt, 0.1);
    }

    #[test]
    fn bottleneck_build() {
        let net = build_network(SystemKind::Bottleneck, DensityParam::Scalar(2000.0)).unwrap();
        let lens: Vec<f64> = net.lanes.iter().map(|l| l.length).collect();
        assert_eq!(lens, vec![100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 50.0]);
        let total: f64 = net.inflows.iter().map(|i| i.rate_veh_hr).sum();
        assert!((total - 2000.0).abs() < 1e-12);
        assert_eq!(net.zones.len(), 3);
        assert_eq!(net.dt, 0.5);
    }

    #[test]
    fn intersection_sum_rule() {
        assert!(build_network(SystemKind::Intersection, DensityParam::Pair(700.0, 700.0)).is_ok());
        // Below the per-direction range and below the sum rule.
        assert!(build_network(SystemKind::Intersection, DensityParam::Pair(300.0, 300.0)).is_err());
        // Within the per-direction range but the sum rule excludes it.
        assert!(build_network(SystemKind::Intersection, DensityParam::Pair(400.0, 400.0)).is_err());
        // Boundary case: sum exactly 1400 is allowed.
        assert!(build_network(SystemKind::Intersection, DensityParam::Pair(400.0, 1000.0)).is_ok());
    }

    #[test]
    fn out_of_range_density_is_config_error() {
        assert!(build_network(SystemKind::SingleRing, DensityParam::Scalar(200.0)).is_err());
        assert!(build_network(SystemKind::Ramp, DensityParam::Scalar(3000.0)).is_err());
        assert!(build_network(SystemKind::FigureEight, DensityParam::Scalar(36.0)).is_err());
    }

    #[test]
    fn figure_eight_crossings_half_length_apart() {
        let net = build_network(SystemKind::FigureEight, DensityParam::Scalar(30.0)).unwrap();
        let total = net.lane(LaneId(0)).length;
        assert!((total - 2.0 * (60.0 + 1.5 * std::f64::consts::PI * 30.0)).abs() < 1e-9);
        let z = &net.zones[0];
        let gap = z.approaches[1].entry_pos - z.approaches[0].entry_pos;
        assert!((gap - total / 2.0).abs() < 1e-9);
    }

    #[test]
    fn routes_terminate_at_outflows() {
        let net = build_network(SystemKind::Intersection, DensityParam::Pair(700.0, 700.0)).unwrap();
        for inflow in &net.inflows {
            let route = net.route_from(inflow.lane);
            assert_eq!(route.len(), 3);
            assert!(net.outflows.contains(route.last().unwrap()));
        }
    }
}
