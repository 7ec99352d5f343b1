//! Per-room path planning under a search tactic and mission assembly.

mod mission;
mod search;
mod single_entry;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use mission::{
    plan_mission, replan_room, with_terminals, MissionRequest, PlanContext, PlanOptions, RoomSegment, SegmentEnd,
    SquadPlan, TacticAssignment, Waypoint,
};
pub use search::{dijkstra, plan_room};
pub use single_entry::{plan_room_single_entry_free, plan_room_single_entry_wall};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tactic {
    /// Unrestricted movement until all space has been seen.
    #[default]
    Free,
    /// Left-hand rule: left hand on the wall, clockwise traversal.
    WallLhr,
    /// Right-hand rule: right hand on the wall, counter-clockwise traversal.
    WallRhr,
}

impl Tactic {
    pub fn is_wall(self) -> bool {
        self != Tactic::Free
    }

    pub fn name(self) -> &'static str {
        match self {
            Tactic::Free => "free",
            Tactic::WallLhr => "wall_lhr",
            Tactic::WallRhr => "wall_rhr",
        }
    }

    pub fn mirrored(self) -> Tactic {
        match self {
            Tactic::Free => Tactic::Free,
            Tactic::WallLhr => Tactic::WallRhr,
            Tactic::WallRhr => Tactic::WallLhr,
        }
    }
}

impl fmt::Display for Tactic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tactic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "free" => Ok(Tactic::Free),
            "wall_lhr" | "lhr" => Ok(Tactic::WallLhr),
            "wall_rhr" | "rhr" => Ok(Tactic::WallRhr),
            other => Err(format!(
                "unknown tactic `{other}` (expected free, wall_lhr or wall_rhr)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanError {
    #[error("room `{to}` is not reachable from room `{from}`")]
    Unreachable { from: String, to: String },
    #[error("no {tactic} path from node {from} to node {to} in room `{room}`")]
    NoPath {
        room: String,
        from: usize,
        to: usize,
        tactic: Tactic,
    },
    #[error("infeasible plan in room `{room}`: {reason}")]
    Infeasible { room: String, reason: String },
    #[error("room `{0}` has no planning graph")]
    MissingGraph(String),
    #[error("point ({x:.3}, {y:.3}) is not inside any room")]
    OutsideRooms { x: f64, y: f64 },
    #[error("point ({x:.3}, {y:.3}) is not in free space")]
    Blocked { x: f64, y: f64 },
}
