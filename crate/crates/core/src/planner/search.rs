use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::graph::RoomSubGraph;

use super::{PlanError, Tactic};

// keeps the straight-line estimate strictly below any path length despite rounding
const HEURISTIC_SCALE: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(self.1.cmp(&o.1))
    }
}

fn room_name(sg: &RoomSubGraph) -> String {
    format!("#{}", sg.room)
}

/// Shortest path from `entry` to `exit` over edges admitting `tactic` (A*,
/// straight-line heuristic, ties to the smaller node id).
pub fn plan_room(sg: &RoomSubGraph, entry: usize, exit: usize, tactic: Tactic) -> Result<Vec<usize>, PlanError> {
    let n = sg.len();
    let no_path = || PlanError::NoPath {
        room: room_name(sg),
        from: entry,
        to: exit,
        tactic,
    };
    if entry >= n || exit >= n {
        return Err(no_path());
    }
    let goal = sg.position(exit);
    let h = |v: usize| sg.position(v).distance(goal) * HEURISTIC_SCALE;
    let mut g = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    g[entry] = 0.0;
    heap.push(Reverse(Key(h(entry), entry)));
    while let Some(Reverse(Key(f, u))) = heap.pop() {
        if f > g[u] + h(u) {
            continue;
        }
        if u == exit {
            let mut path = vec![exit];
            while let Some(&last) = path.last() {
                if last == entry {
                    break;
                }
                path.push(prev[last]);
            }
            path.reverse();
            return Ok(path);
        }
        for e in sg.out_edges(u) {
            if !e.permits.contains(tactic) {
                continue;
            }
            let cand = g[u] + e.length;
            if cand < g[e.to] || (cand == g[e.to] && u < prev[e.to]) {
                g[e.to] = cand;
                prev[e.to] = u;
                heap.push(Reverse(Key(cand + h(e.to), e.to)));
            }
        }
    }
    Err(no_path())
}

/// Plain array-scan Dijkstra; returns the cost and a path of minimal cost.
pub fn dijkstra(sg: &RoomSubGraph, from: usize, to: usize, tactic: Tactic) -> Option<(f64, Vec<usize>)> {
    let n = sg.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[from] = 0.0;
    loop {
        let mut u = usize::MAX;
        for v in 0..n {
            if !done[v] && dist[v].is_finite() && (u == usize::MAX || dist[v] < dist[u]) {
                u = v;
            }
        }
        if u == usize::MAX {
            return None;
        }
        if u == to {
            break;
        }
        done[u] = true;
        for e in sg.out_edges(u) {
            if e.permits.contains(tactic) && dist[u] + e.length < dist[e.to] {
                dist[e.to] = dist[u] + e.length;
                prev[e.to] = u;
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    Some((dist[to], path))
}
