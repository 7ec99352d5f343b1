use crate::geom::Vec2;
use crate::graph::{PlanEdge, RoomSubGraph};

use super::search::{dijkstra, plan_room};
use super::{PlanError, Tactic};

fn infeasible(sg: &RoomSubGraph, reason: String) -> PlanError {
    PlanError::Infeasible {
        room: format!("#{}", sg.room),
        reason,
    }
}

/// Greedy tree walk from `entry` that visits every guard and connector, then
/// returns to `entry`.
///
/// From the current node the walk heads for the nearest unvisited visibility
/// node it can see. At a leaf it backtracks to the visited stop closest to
/// some unvisited node visible from there; if no stop sees one, it goes to the
/// unvisited node nearest by graph distance. Nodes passed on the way count as
/// visited.
pub fn plan_room_single_entry_free(
    sg: &RoomSubGraph,
    entry: usize,
    visible: impl Fn(Vec2, Vec2) -> bool,
) -> Result<Vec<usize>, PlanError> {
    let mut pending = vec![false; sg.len()];
    for &v in &sg.visibility_nodes {
        pending[v] = true;
    }
    pending[entry] = false;
    let mut left = pending.iter().filter(|&&p| p).count();

    let mut walk = vec![entry];
    let mut stops = vec![entry];
    let mut cur = entry;

    let nearest_visible = |from: usize, pending: &[bool]| -> Option<(f64, usize)> {
        let p = sg.position(from);
        sg.visibility_nodes
            .iter()
            .filter(|&&t| pending[t])
            .map(|&t| (p.distance(sg.position(t)), t))
            .filter(|&(_, t)| visible(p, sg.position(t)))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
    };

    while left > 0 {
        let mut legs: Vec<usize> = Vec::new();
        if let Some((_, t)) = nearest_visible(cur, &pending) {
            legs.push(t);
        } else {
            let branch = stops
                .iter()
                .filter_map(|&s| nearest_visible(s, &pending).map(|(d, _)| (d, s)))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            if let Some((_, s)) = branch {
                legs.push(s);
                let (_, t) = nearest_visible(s, &pending).expect("stop sees a pending node");
                legs.push(t);
            } else {
                let t = sg
                    .visibility_nodes
                    .iter()
                    .filter(|&&t| pending[t])
                    .filter_map(|&t| dijkstra(sg, cur, t, Tactic::Free).map(|(c, _)| (c, t)))
                    .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                match t {
                    Some((_, t)) => legs.push(t),
                    None => {
                        let t = sg.visibility_nodes.iter().copied().find(|&t| pending[t]).unwrap();
                        return Err(infeasible(sg, format!("visibility node {t} is unreachable")));
                    }
                }
            }
        }
        for t in legs {
            let path = plan_room(sg, cur, t, Tactic::Free)
                .map_err(|_| infeasible(sg, format!("visibility node {t} is unreachable")))?;
            for &v in &path[1..] {
                if pending[v] {
                    pending[v] = false;
                    left -= 1;
                }
                walk.push(v);
            }
            cur = t;
        }
        stops.push(cur);
    }
    let back = plan_room(sg, cur, entry, Tactic::Free)
        .map_err(|_| infeasible(sg, format!("node {cur} cannot return to the entry")))?;
    walk.extend_from_slice(&back[1..]);
    Ok(walk)
}

/// Wall circuit for a room with one doorway: step one edge away from the
/// entry in the tactic's rotational sense, then plan back to the entry with
/// only tactic-permitted edges.
///
/// Nodes within `wall_band` of the entry (other than the first step) are
/// blocked on the way back and the final edge must carry the tactic's sense
/// alone, so the squad cannot turn around in front of the doorway.
pub fn plan_room_single_entry_wall(sg: &RoomSubGraph, entry: usize, tactic: Tactic) -> Result<Vec<usize>, PlanError> {
    if !tactic.is_wall() {
        return Err(infeasible(sg, "wall circuit requested with free tactic".into()));
    }
    let strict = |e: &PlanEdge| e.permits.contains(tactic) && !e.permits.contains(tactic.mirrored());
    let start = sg
        .out_edges(entry)
        .filter(|e| strict(e))
        .filter(|e| {
            let n = &sg.nodes[e.to];
            !n.kind.is_anchor() && n.wall_distance <= sg.wall_band
        })
        .min_by(|a, b| a.length.total_cmp(&b.length).then(a.to.cmp(&b.to)))
        .map(|e| e.to)
        .ok_or_else(|| infeasible(sg, format!("no {tactic} wall-band neighbour next to the entry")))?;

    let origin = sg.position(entry);
    let blocked: Vec<bool> = sg
        .nodes
        .iter()
        .map(|n| n.id != entry && n.id != start && n.position.distance(origin) <= sg.wall_band)
        .collect();
    let edges = sg
        .edges
        .iter()
        .filter(|e| !blocked[e.from] && !blocked[e.to] && e.from != entry)
        .filter(|e| e.to != entry || (e.from != start && strict(e)))
        .cloned()
        .collect();
    let ring = RoomSubGraph::from_parts(sg.room, sg.nodes.clone(), edges, sg.connection_radius, sg.wall_band);
    let back = plan_room(&ring, start, entry, tactic)
        .map_err(|_| infeasible(sg, format!("{tactic} wall band does not lead back to the entry")))?;
    let mut path = vec![entry];
    path.extend(back);
    Ok(path)
}
