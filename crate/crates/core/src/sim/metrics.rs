//! Trajectory measurements: wall clearance, squad spacing, wall-side chirality.

use crate::geom::Vec2;
use crate::map::GridMap;

use super::run::{Environment, Frame, Trajectory};

/// Distance from `p` to the nearest occupied cell (as a closed square) within
/// `max_range`, with the unit direction from `p` toward that point.
///
/// A point inside an occupied cell reports distance zero and no direction.
pub fn wall_clearance(map: &GridMap, p: Vec2, max_range: f64) -> Option<(f64, Option<Vec2>)> {
    let w = map.resolution();
    let g = map.to_grid(p);
    let r = (max_range / w).ceil() as i64 + 1;
    let (ci, cj) = (g.x.floor() as i64, g.y.floor() as i64);
    let mut best: Option<(f64, Vec2)> = None;
    for j in cj - r..=cj + r {
        for i in ci - r..=ci + r {
            if map.occupied_signed(i, j) != Some(true) {
                continue;
            }
            let q = Vec2::new(g.x.clamp(i as f64, i as f64 + 1.0), g.y.clamp(j as f64, j as f64 + 1.0));
            let d = (q - g) * w;
            let n = d.norm_sq();
            if best.is_none_or(|(b, _)| n < b) {
                best = Some((n, d));
            }
        }
    }
    let (n, d) = best?;
    let dist = n.sqrt();
    (dist <= max_range).then(|| (dist, d.normalized()))
}

/// For every agent of `squad` in the frame, the distance to its nearest squad mate.
pub fn nearest_neighbor_distances(frame: &Frame, squad: usize) -> Vec<f64> {
    let ps: Vec<Vec2> = frame
        .agents
        .iter()
        .filter(|a| a.squad == squad)
        .map(|a| a.state.p)
        .collect();
    ps.iter()
        .enumerate()
        .filter_map(|(i, p)| {
            ps.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| p.distance(*q))
                .min_by(f64::total_cmp)
        })
        .collect()
}

/// Which side of the motion direction `velocity` the wall direction `toward_wall` lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallSide {
    Left,
    Right,
    Ahead,
}

pub fn wall_side(velocity: Vec2, toward_wall: Vec2) -> WallSide {
    let c = velocity.cross(toward_wall);
    if c > 0.0 {
        WallSide::Left
    } else if c < 0.0 {
        WallSide::Right
    } else {
        WallSide::Ahead
    }
}

/// Which report samples count as steady traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyWindow {
    /// Seconds dropped after the start (squad still forming up).
    pub skip_start: f64,
    /// Seconds dropped before the end (squad bunching at the goal).
    pub skip_end: f64,
    /// Wall-side samples need a speed of at least this fraction of `v_des`.
    pub min_speed_ratio: f64,
    /// Wall-side samples closer than this to a doorway midpoint are dropped.
    pub door_clearance: f64,
    /// Walls farther than this are ignored.
    pub wall_range: f64,
}

impl Default for SteadyWindow {
    fn default() -> Self {
        SteadyWindow {
            skip_start: 3.0,
            skip_end: 2.0,
            min_speed_ratio: 0.5,
            door_clearance: 1.0,
            wall_range: 3.0,
        }
    }
}

/// Means over the steady part of one squad's trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraversalStats {
    pub mean_speed: f64,
    /// Mean distance from each agent to its nearest squad mate.
    pub mean_spacing: f64,
    /// Mean gap between the body edge and the nearest wall.
    pub mean_wall_distance: f64,
    pub right_share: f64,
    pub left_share: f64,
    pub samples: usize,
    pub side_samples: usize,
}

pub fn traversal_stats(
    env: &Environment,
    traj: &Trajectory,
    squad: usize,
    v_des: f64,
    w: &SteadyWindow,
) -> TraversalStats {
    let end = traj.end_time();
    let (mut speed, mut spacing, mut wall) = (Vec::new(), Vec::new(), Vec::new());
    let (mut right, mut left, mut sides) = (0usize, 0usize, 0usize);
    for f in traj
        .frames
        .iter()
        .filter(|f| f.t >= w.skip_start && f.t <= end - w.skip_end)
    {
        spacing.extend(nearest_neighbor_distances(f, squad));
        for a in f.agents.iter().filter(|a| a.squad == squad) {
            let v = a.state.velocity();
            speed.push(v.norm());
            let Some((d, n)) = wall_clearance(&env.map, a.state.p, w.wall_range) else {
                continue;
            };
            wall.push(d - a.state.r);
            let near_door = env
                .rooms
                .doorways
                .iter()
                .any(|dw| dw.midpoint().distance(a.state.p) < w.door_clearance);
            if let (Some(n), false) = (n, near_door || v.norm() < w.min_speed_ratio * v_des) {
                sides += 1;
                match wall_side(v, n) {
                    WallSide::Right => right += 1,
                    WallSide::Left => left += 1,
                    WallSide::Ahead => {}
                }
            }
        }
    }
    let mean = |x: &[f64]| {
        if x.is_empty() {
            f64::NAN
        } else {
            x.iter().sum::<f64>() / x.len() as f64
        }
    };
    let share = |k: usize| if sides == 0 { f64::NAN } else { k as f64 / sides as f64 };
    TraversalStats {
        mean_speed: mean(&speed),
        mean_spacing: mean(&spacing),
        mean_wall_distance: mean(&wall),
        right_share: share(right),
        left_share: share(left),
        samples: speed.len(),
        side_samples: sides,
    }
}
