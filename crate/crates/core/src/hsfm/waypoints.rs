use std::collections::VecDeque;

use crate::geom::{wrap_angle, Vec2};
use crate::planner::Waypoint;

use super::TrackerParams;

/// An agent's remaining waypoints, consumed strictly from the front.
///
/// When the agent has been pushed out of sight of its target, it heads for
/// the most recently consumed waypoint it can still see instead.
#[derive(Debug, Clone, PartialEq)]
pub struct WaypointTracker {
    remaining: VecDeque<Waypoint>,
    passed: Vec<Vec2>,
    aim: Option<Vec2>,
    pub params: TrackerParams,
}

impl WaypointTracker {
    pub fn new(waypoints: impl IntoIterator<Item = Waypoint>, params: TrackerParams) -> Self {
        WaypointTracker {
            remaining: waypoints.into_iter().collect(),
            passed: Vec::new(),
            aim: None,
            params,
        }
    }

    /// Point the agent steers toward, as of the last update.
    pub fn aim(&self) -> Option<Vec2> {
        self.aim
    }

    pub fn target(&self) -> Option<&Waypoint> {
        self.remaining.front()
    }

    pub fn remaining(&self) -> &VecDeque<Waypoint> {
        &self.remaining
    }

    pub fn is_done(&self) -> bool {
        self.remaining.is_empty()
    }

    /// Whether the agent at `p` facing `theta` has visited `w`.
    ///
    /// Essential waypoints count only within `essential_range`; others when
    /// inside `circle_range` or inside the vision cone with a clear line of
    /// sight.
    pub fn visited(&self, w: &Waypoint, p: Vec2, theta: f64, visible: &impl Fn(Vec2, Vec2) -> bool) -> bool {
        let to = w.position - p;
        let dist = to.norm();
        if w.essential {
            return dist <= self.params.essential_range;
        }
        if dist <= self.params.circle_range {
            return true;
        }
        dist <= self.params.cone_range
            && wrap_angle(to.y.atan2(to.x) - theta).abs() <= self.params.cone_half_angle
            && visible(p, w.position)
    }

    /// Drops visited waypoints from the front and refreshes the aim point;
    /// returns how many were dropped.
    pub fn update(&mut self, p: Vec2, theta: f64, visible: impl Fn(Vec2, Vec2) -> bool) -> usize {
        if self.passed.is_empty() {
            self.passed.push(p);
        }
        let mut n = 0;
        while let Some(w) = self.remaining.front() {
            if !self.visited(w, p, theta, &visible) {
                break;
            }
            self.passed.push(w.position);
            self.remaining.pop_front();
            n += 1;
        }
        self.aim = self.target().map(|w| {
            if visible(p, w.position) {
                return w.position;
            }
            self.passed
                .iter()
                .rev()
                .find(|&&q| visible(p, q))
                .copied()
                .unwrap_or(w.position)
        });
        n
    }
}
