use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::map::{DistanceField, GridMap};
use crate::rooms::RoomGraph;

use super::{
    build_medial_axis, build_visibility_roadmap, connect_and_label, fill_random, GraphConfig, NodeKind, PlanEdge,
    PlanNode, RoomSubGraph,
};

/// Builds the planning graph of room `room`.
///
/// Node order: doorway nodes (annotation order), road-map guards and
/// connectors, sub-sampled medial-axis cells, then fill points.
pub fn build_room_graph(
    rg: &RoomGraph,
    room: usize,
    map: &GridMap,
    df: &DistanceField,
    cfg: &GraphConfig,
    seed: u64,
) -> RoomSubGraph {
    let r = &rg.rooms[room];
    let mut nodes: Vec<PlanNode> = Vec::new();
    let push = |nodes: &mut Vec<PlanNode>, p: Vec2, kind: NodeKind, doorway: Option<usize>| {
        nodes.push(PlanNode {
            id: nodes.len(),
            position: p,
            kind,
            wall_distance: df.at(map, p).unwrap_or(0.0),
            doorway,
        });
    };

    for &d in &r.doorways {
        push(&mut nodes, rg.doorways[d].midpoint(), NodeKind::Doorway, Some(d));
    }
    if r.cells.is_empty() {
        log::warn!("room `{}` has no free cells", r.id);
        return connect_and_label(room, nodes, map, df, cfg);
    }

    let rm = build_visibility_roadmap(r, map, df, cfg, seed);
    for &(p, kind) in &rm.nodes {
        push(&mut nodes, p, kind, None);
    }

    let axis = build_medial_axis(r, map, df, cfg.medial_min_separation);
    let spacing_sq = cfg.medial_spacing * cfg.medial_spacing;
    let mut kept: Vec<Vec2> = Vec::new();
    for &c in &axis.cells {
        let p = map.cell_center(c);
        if kept.iter().all(|q| (*q - p).norm_sq() >= spacing_sq) {
            kept.push(p);
            push(&mut nodes, p, NodeKind::Medial, None);
        }
    }

    let existing: Vec<Vec2> = nodes.iter().map(|n| n.position).collect();
    let fill = fill_random(r, map, df, cfg, &existing, seed);
    for p in fill.nodes {
        push(&mut nodes, p, NodeKind::Fill, None);
    }

    connect_and_label(room, nodes, map, df, cfg)
}

/// Builds every room whose graph slot is still empty, in parallel, and
/// publishes the results.
pub fn build_all(rg: &RoomGraph, map: &GridMap, df: &DistanceField, cfg: &GraphConfig, seed: u64) {
    let built: Vec<(usize, RoomSubGraph)> = (0..rg.rooms.len())
        .into_par_iter()
        .filter(|&k| rg.rooms[k].sub_graph().is_none())
        .map(|k| (k, build_room_graph(rg, k, map, df, cfg, seed)))
        .collect();
    for (k, sg) in built {
        let _ = rg.rooms[k].set_sub_graph(sg);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomDump {
    pub room: String,
    pub nodes: Vec<PlanNode>,
    pub edges: Vec<PlanEdge>,
}

/// Serializable snapshot of all built room graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDump {
    pub rooms: Vec<RoomDump>,
}

impl GraphDump {
    pub fn from_rooms(rg: &RoomGraph) -> Self {
        GraphDump {
            rooms: rg
                .rooms
                .iter()
                .filter_map(|r| {
                    r.sub_graph().map(|sg| RoomDump {
                        room: r.id.clone(),
                        nodes: sg.nodes.clone(),
                        edges: sg.edges.clone(),
                    })
                })
                .collect(),
        }
    }
}
