use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::graph::{push_pair, GraphConfig, NodeKind, PlanNode, RoomSubGraph};
use crate::map::{DistanceField, GridMap};
use crate::rooms::RoomGraph;

use super::search::plan_room;
use super::single_entry::{plan_room_single_entry_free, plan_room_single_entry_wall};
use super::{PlanError, Tactic};

/// Everything the planner reads; room graphs must already be built.
#[derive(Debug, Clone, Copy)]
pub struct PlanContext<'a> {
    pub rooms: &'a RoomGraph,
    pub map: &'a GridMap,
    pub df: &'a DistanceField,
    pub cfg: &'a GraphConfig,
}

/// Tactic per room, with a default for rooms not listed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TacticAssignment {
    #[serde(default)]
    pub default: Tactic,
    #[serde(default)]
    pub rooms: BTreeMap<String, Tactic>,
}

impl TacticAssignment {
    pub fn uniform(t: Tactic) -> Self {
        TacticAssignment {
            default: t,
            rooms: BTreeMap::new(),
        }
    }

    pub fn for_room(&self, id: &str) -> Tactic {
        self.rooms.get(id).copied().unwrap_or(self.default)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionRequest {
    pub squad: usize,
    pub start: Vec2,
    pub goal: Vec2,
    /// Rooms to enter on the way, in order.
    pub visit: Vec<String>,
    pub tactics: TacticAssignment,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlanOptions {
    /// Plan a room with free traversal when its wall search is infeasible.
    pub fallback_to_free: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentEnd {
    Doorway { id: String, index: usize },
    Point { position: Vec2 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub position: Vec2,
    pub essential: bool,
    pub room: String,
}

/// The part of a plan inside one room.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomSegment {
    pub room: String,
    pub room_index: usize,
    pub requested: Tactic,
    pub tactic: Tactic,
    pub entry: SegmentEnd,
    pub exit: SegmentEnd,
    pub waypoints: Vec<Waypoint>,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquadPlan {
    pub squad: usize,
    pub segments: Vec<RoomSegment>,
}

impl SquadPlan {
    /// All waypoints in order; the doorway shared by consecutive segments appears once.
    pub fn waypoints(&self) -> Vec<Waypoint> {
        let mut out: Vec<Waypoint> = Vec::new();
        for seg in &self.segments {
            let mut wps = seg.waypoints.iter();
            if let (Some(last), Some(first)) = (out.last(), seg.waypoints.first()) {
                if last.position == first.position {
                    wps.next();
                }
            }
            out.extend(wps.cloned());
        }
        out
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Segments planned with a different tactic than requested.
    pub fn fallbacks(&self) -> impl Iterator<Item = &RoomSegment> {
        self.segments.iter().filter(|s| s.tactic != s.requested)
    }
}

/// Copy of `sg` with a terminal node per point, joined to every node in range
/// that it can see, or to the nearest visible node if none is in range.
/// Equal points share one terminal.
pub fn with_terminals(
    sg: &RoomSubGraph,
    points: &[Vec2],
    map: &GridMap,
    df: &DistanceField,
    cfg: &GraphConfig,
) -> (RoomSubGraph, Vec<usize>) {
    let mut nodes = sg.nodes.clone();
    let mut edges = sg.edges.clone();
    let mut ids = Vec::with_capacity(points.len());
    let r2 = sg.connection_radius * sg.connection_radius;
    for &p in points {
        if let Some(k) = points.iter().position(|&q| q == p).filter(|&k| k < ids.len()) {
            ids.push(ids[k]);
            continue;
        }
        let t = PlanNode {
            id: nodes.len(),
            position: p,
            kind: NodeKind::Terminal,
            wall_distance: df.at(map, p).unwrap_or(0.0),
            doorway: None,
        };
        let visible: Vec<usize> = nodes
            .iter()
            .filter(|n| map.line_of_sight(p, n.position))
            .map(|n| n.id)
            .collect();
        let mut near: Vec<usize> = visible
            .iter()
            .copied()
            .filter(|&n| (nodes[n].position - p).norm_sq() <= r2)
            .collect();
        if near.is_empty() {
            near.extend(
                visible
                    .iter()
                    .copied()
                    .min_by(|&a, &b| p.distance(nodes[a].position).total_cmp(&p.distance(nodes[b].position))),
            );
        }
        for n in near {
            push_pair(&mut edges, &t, &nodes[n], map, df, cfg.wall_band);
        }
        ids.push(t.id);
        nodes.push(t);
    }
    (
        RoomSubGraph::from_parts(sg.room, nodes, edges, sg.connection_radius, sg.wall_band),
        ids,
    )
}

fn end_position(rg: &RoomGraph, end: &SegmentEnd) -> Vec2 {
    match end {
        SegmentEnd::Doorway { index, .. } => rg.doorways[*index].midpoint(),
        SegmentEnd::Point { position } => *position,
    }
}

fn rename(e: PlanError, room: &str) -> PlanError {
    match e {
        PlanError::NoPath { from, to, tactic, .. } => PlanError::NoPath {
            room: room.to_string(),
            from,
            to,
            tactic,
        },
        PlanError::Infeasible { reason, .. } => PlanError::Infeasible {
            room: room.to_string(),
            reason,
        },
        other => other,
    }
}

fn plan_segment_with(
    ctx: &PlanContext<'_>,
    room: usize,
    entry: &SegmentEnd,
    exit: &SegmentEnd,
    tactic: Tactic,
) -> Result<(Vec<Waypoint>, f64), PlanError> {
    let r = &ctx.rooms.rooms[room];
    let base = r.sub_graph().ok_or_else(|| PlanError::MissingGraph(r.id.clone()))?;
    let points: Vec<Vec2> = [entry, exit]
        .into_iter()
        .filter_map(|e| match e {
            SegmentEnd::Point { position } => Some(*position),
            SegmentEnd::Doorway { .. } => None,
        })
        .collect();
    let (sg, terminals) = with_terminals(base, &points, ctx.map, ctx.df, ctx.cfg);
    let mut terminals = terminals.into_iter();
    let mut node_of = |e: &SegmentEnd| -> Result<usize, PlanError> {
        match e {
            SegmentEnd::Doorway { id, index } => sg.doorway_node(*index).ok_or_else(|| PlanError::Infeasible {
                room: r.id.clone(),
                reason: format!("doorway `{id}` has no graph node"),
            }),
            SegmentEnd::Point { .. } => Ok(terminals.next().expect("terminal per point")),
        }
    };
    let a = node_of(entry)?;
    let b = node_of(exit)?;
    let same_door =
        matches!((entry, exit), (SegmentEnd::Doorway { index: i, .. }, SegmentEnd::Doorway { index: j, .. }) if i == j);
    let path = if same_door {
        match tactic {
            Tactic::Free => plan_room_single_entry_free(&sg, a, |p, q| ctx.map.line_of_sight(p, q)),
            wall => plan_room_single_entry_wall(&sg, a, wall),
        }
    } else {
        plan_room(&sg, a, b, tactic)
    }
    .map_err(|e| rename(e, &r.id))?;

    let length = sg.path_length(&path).expect("planned hops are edges");
    let waypoints = path
        .iter()
        .map(|&v| Waypoint {
            position: sg.position(v),
            essential: sg.nodes[v].kind.is_anchor(),
            room: r.id.clone(),
        })
        .collect();
    Ok((waypoints, length))
}

fn plan_segment(
    ctx: &PlanContext<'_>,
    room: usize,
    entry: SegmentEnd,
    exit: SegmentEnd,
    requested: Tactic,
    opts: PlanOptions,
) -> Result<RoomSegment, PlanError> {
    let id = ctx.rooms.rooms[room].id.clone();
    let (tactic, (waypoints, length)) = match plan_segment_with(ctx, room, &entry, &exit, requested) {
        Ok(res) => (requested, res),
        Err(e) if requested.is_wall() && opts.fallback_to_free && !matches!(e, PlanError::MissingGraph(_)) => {
            log::warn!("{e}; falling back to free traversal");
            (Tactic::Free, plan_segment_with(ctx, room, &entry, &exit, Tactic::Free)?)
        }
        Err(e) => return Err(e),
    };
    Ok(RoomSegment {
        room: id,
        room_index: room,
        requested,
        tactic,
        entry,
        exit,
        waypoints,
        length,
    })
}

fn locate(ctx: &PlanContext<'_>, p: Vec2) -> Result<usize, PlanError> {
    let room = ctx.rooms.room_at(p).ok_or(PlanError::OutsideRooms { x: p.x, y: p.y })?;
    if !ctx.map.is_free_at(p) {
        return Err(PlanError::Blocked { x: p.x, y: p.y });
    }
    Ok(room)
}

/// Plans a squad's route from `start` through the `visit` rooms to `goal`.
///
/// The room route joins shortest room sequences between consecutive stops.
/// Each room is planned on its own between its entry and exit; a room left
/// through the doorway it was entered by is covered with a single-entry walk.
pub fn plan_mission(ctx: &PlanContext<'_>, req: &MissionRequest, opts: PlanOptions) -> Result<SquadPlan, PlanError> {
    let rg = ctx.rooms;
    let start_room = locate(ctx, req.start)?;
    let goal_room = locate(ctx, req.goal)?;
    let mut stops = vec![start_room];
    for id in &req.visit {
        let k = rg.room_index(id).map_err(|_| PlanError::Unreachable {
            from: rg.rooms[start_room].id.clone(),
            to: id.clone(),
        })?;
        stops.push(k);
    }
    stops.push(goal_room);

    let mut route = vec![start_room];
    for w in stops.windows(2) {
        let seq = rg.room_sequence(w[0], w[1])?;
        route.extend_from_slice(&seq[1..]);
    }

    let mut segments = Vec::with_capacity(route.len());
    let mut entry = SegmentEnd::Point { position: req.start };
    for (k, &room) in route.iter().enumerate() {
        let exit = match route.get(k + 1) {
            None => SegmentEnd::Point { position: req.goal },
            Some(&next) => {
                let from = end_position(rg, &entry);
                let d = rg
                    .doorways_between(room, next)
                    .into_iter()
                    .min_by(|&a, &b| {
                        from.distance(rg.doorways[a].midpoint())
                            .total_cmp(&from.distance(rg.doorways[b].midpoint()))
                    })
                    .expect("consecutive rooms share a doorway");
                SegmentEnd::Doorway {
                    id: rg.doorways[d].id.clone(),
                    index: d,
                }
            }
        };
        let tactic = req.tactics.for_room(&rg.rooms[room].id);
        segments.push(plan_segment(ctx, room, entry, exit.clone(), tactic, opts)?);
        entry = exit;
    }
    Ok(SquadPlan {
        squad: req.squad,
        segments,
    })
}

/// Re-plans only segment `index` of `plan` with `tactic`.
pub fn replan_room(
    ctx: &PlanContext<'_>,
    plan: &SquadPlan,
    index: usize,
    tactic: Tactic,
    opts: PlanOptions,
) -> Result<SquadPlan, PlanError> {
    let seg = &plan.segments[index];
    let fresh = plan_segment(ctx, seg.room_index, seg.entry.clone(), seg.exit.clone(), tactic, opts)?;
    let mut next = plan.clone();
    next.segments[index] = fresh;
    Ok(next)
}
