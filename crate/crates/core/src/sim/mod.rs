//! Mission simulation: world stepping, scenarios, trajectories and benchmarks.

mod integrator;
mod metrics;
mod run;
mod scenario;
mod world;

pub use integrator::{
    dopri5_step, integrate, integrator_self_test, SelfTestReport, DECAY_TOLERANCE, OSCILLATOR_TOLERANCE,
};
pub use metrics::{
    nearest_neighbor_distances, traversal_stats, wall_clearance, wall_side, SteadyWindow, TraversalStats, WallSide,
};
pub use run::{
    bench, default_t_max, mean_variance, plan_squads, run, simulate, AgentRecord, BenchEntry, BenchReport, Environment,
    Frame, Trajectory, CSV_HEADER,
};
pub use scenario::{Scenario, SquadSpec};
pub use world::{SquadSetup, World};
