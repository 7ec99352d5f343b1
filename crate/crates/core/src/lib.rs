//! Tactic-informed motion prediction for firefighter squads.
//!
//! A building map is split into rooms joined by doorways. Each room gets a
//! planning graph (medial axis, visibility road map and low-discrepancy
//! fill) whose edges are labelled with the search tactics that may use them.
//! Squad routes planned on these graphs drive a headed social force model
//! that produces per-agent trajectories.
//!
//! ```no_run
//! use squadsim::{run, Environment, PlanOptions, Scenario};
//!
//! let sc = Scenario::from_file("maps/flat.scenario.toml".as_ref())?;
//! let env = Environment::for_scenario(&sc)?;
//! let (plans, traj) = run(&env, &sc, PlanOptions::default())?;
//! println!("{} waypoints, {:.1} s", plans[0].waypoints().len(), traj.end_time());
//! # Ok::<(), squadsim::Error>(())
//! ```

pub mod error;
pub mod geom;
pub mod graph;
pub mod hsfm;
pub mod map;
pub mod planner;
pub mod rooms;
pub mod sampling;
pub mod sim;

pub use error::{Error, Result};
pub use geom::{wrap_angle, Polygon, Rot2, Vec2};
pub use graph::{
    build_all, build_room_graph, GraphConfig, GraphDump, NodeKind, Permits, PlanEdge, PlanNode, RoomSubGraph,
};
pub use hsfm::{AgentState, ForceBreakdown, ModelParams, Vision, WaypointTracker};
pub use map::{load_map, load_map_file, Cell, DistanceField, DistanceMetric, GridMap, MapMeta};
pub use planner::{
    plan_mission, plan_room, MissionRequest, PlanContext, PlanError, PlanOptions, SquadPlan, Tactic, TacticAssignment,
    Waypoint,
};
pub use rooms::{
    load_rooms, load_rooms_file, DoorSide, Doorway, DoorwayRecord, Room, RoomAnnotation, RoomGraph, RoomRecord,
};
pub use sim::{
    bench, integrator_self_test, plan_squads, run, simulate, BenchReport, Environment, Scenario, Trajectory,
};
