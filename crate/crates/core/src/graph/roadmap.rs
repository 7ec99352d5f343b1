use crate::geom::Vec2;
use crate::map::{DistanceField, GridMap};
use crate::rooms::Room;
use crate::sampling::Halton2;

use super::{GraphConfig, NodeKind};

/// Visibility road map of one room: guards and connectors in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Roadmap {
    pub nodes: Vec<(Vec2, NodeKind)>,
    /// Halton samples drawn before termination.
    pub samples: usize,
    /// Guards added by the exhaustive coverage sweep.
    pub sweep_guards: usize,
}

impl Roadmap {
    pub fn guards(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.nodes
            .iter()
            .filter(|(_, k)| *k == NodeKind::Guard)
            .map(|(p, _)| *p)
    }

    pub fn connectors(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.nodes
            .iter()
            .filter(|(_, k)| *k == NodeKind::Connector)
            .map(|(p, _)| *p)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Samples the room with the Halton sequence (bases 2, 3) over its bounding box.
///
/// A free sample seen by no guard becomes a guard; one that sees guards of at
/// least two distinct components becomes a connector. Sampling stops after
/// `roadmap_budget` consecutive samples that add nothing, or at `roadmap_cap`.
/// A final sweep over the room's cells promotes any cell no guard can see to
/// a guard, so every free cell ends up visible from some guard.
pub fn build_visibility_roadmap(
    room: &Room,
    map: &GridMap,
    df: &DistanceField,
    cfg: &GraphConfig,
    seed_offset: u64,
) -> Roadmap {
    let mut rm = Roadmap::default();
    if room.cells.is_empty() {
        return rm;
    }
    let (lo, hi) = room.polygon.bounds();
    let span = hi - lo;
    let budget = cfg.roadmap_budget.max(1);

    // union-find over road-map nodes; connectors merge the guards they see
    let mut parent: Vec<usize> = Vec::new();
    let mut failures = 0;
    for u in Halton2::new(seed_offset + 1).take(cfg.roadmap_cap) {
        rm.samples += 1;
        let p = lo + Vec2::new(u[0] * span.x, u[1] * span.y);
        let usable =
            map.is_free_at(p) && room.polygon.contains(p) && df.at(map, p).is_some_and(|d| d >= cfg.min_clearance);
        let mut added = false;
        if usable {
            let seen: Vec<usize> = rm
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, (g, k))| *k == NodeKind::Guard && map.line_of_sight(p, *g))
                .map(|(i, _)| i)
                .collect();
            if seen.is_empty() {
                parent.push(rm.nodes.len());
                rm.nodes.push((p, NodeKind::Guard));
                added = true;
            } else {
                let mut roots: Vec<usize> = seen.iter().map(|&g| find(&mut parent, g)).collect();
                roots.sort_unstable();
                roots.dedup();
                if roots.len() >= 2 {
                    let me = rm.nodes.len();
                    parent.push(me);
                    rm.nodes.push((p, NodeKind::Connector));
                    for r in roots {
                        parent[r] = me;
                    }
                    added = true;
                }
            }
        }
        if added {
            failures = 0;
        } else {
            failures += 1;
            if failures >= budget {
                break;
            }
        }
    }

    for &c in &room.cells {
        let p = map.cell_center(c);
        let covered = rm
            .nodes
            .iter()
            .any(|(g, k)| *k == NodeKind::Guard && map.line_of_sight(p, *g));
        if !covered {
            rm.nodes.push((p, NodeKind::Guard));
            rm.sweep_guards += 1;
        }
    }
    rm
}
