use crate::geom::Vec2;
use crate::map::{DistanceField, GridMap};

use super::{GraphConfig, Permits, PlanEdge, PlanNode, RoomSubGraph};

const CHIRAL_EPS: f64 = 1e-9;

/// Wall-search chirality of moving along `step` with the nearest wall in
/// direction `toward_wall`: wall on the right is RHR, on the left LHR.
pub fn wall_permits(toward_wall: Vec2, step: Vec2) -> Permits {
    let c = toward_wall.cross(step);
    if c > CHIRAL_EPS {
        Permits::WALL_RHR
    } else if c < -CHIRAL_EPS {
        Permits::WALL_LHR
    } else {
        Permits::WALL_LHR.union(Permits::WALL_RHR)
    }
}

/// Appends `u -> v` and `v -> u` with their permits.
pub(crate) fn push_pair(
    edges: &mut Vec<PlanEdge>,
    u: &PlanNode,
    v: &PlanNode,
    map: &GridMap,
    df: &DistanceField,
    band: f64,
) {
    let in_band = |n: &PlanNode| n.kind.is_anchor() || n.wall_distance <= band;
    let d = v.position - u.position;
    let length = d.norm();
    let mut fwd = Permits::FREE;
    if in_band(u) && in_band(v) {
        let mid = (u.position + v.position) * 0.5;
        if let Some(n) = df.obstacle_direction(map, mid) {
            fwd = fwd.union(wall_permits(n, d));
        }
    }
    edges.push(PlanEdge {
        from: u.id,
        to: v.id,
        length,
        permits: fwd,
    });
    edges.push(PlanEdge {
        from: v.id,
        to: u.id,
        length,
        permits: fwd.mirrored(),
    });
}

/// Joins every pair of nodes within `connection_radius` that see each other
/// and labels both directions.
///
/// Every edge admits free traversal. Wall search is admitted only if both
/// ends lie within `wall_band` of a wall (doorway and terminal nodes are
/// exempt), with the chirality taken from the wall direction at the edge
/// midpoint so that reversing an edge swaps LHR and RHR.
pub fn connect_and_label(
    room: usize,
    nodes: Vec<PlanNode>,
    map: &GridMap,
    df: &DistanceField,
    cfg: &GraphConfig,
) -> RoomSubGraph {
    let r2 = cfg.connection_radius * cfg.connection_radius;
    let mut edges = Vec::new();
    for (a, u) in nodes.iter().enumerate() {
        for v in &nodes[a + 1..] {
            if (v.position - u.position).norm_sq() > r2 || !map.line_of_sight(u.position, v.position) {
                continue;
            }
            push_pair(&mut edges, u, v, map, df, cfg.wall_band);
        }
    }
    if nodes.is_empty() {
        log::warn!("room {room}: no graph nodes");
    }
    RoomSubGraph::from_parts(room, nodes, edges, cfg.connection_radius, cfg.wall_band)
}
