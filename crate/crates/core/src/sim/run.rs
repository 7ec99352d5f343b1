use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::graph::{build_all, GraphConfig};
use crate::hsfm::AgentState;
use crate::map::{load_map_file, DistanceField, GridMap};
use crate::planner::{plan_mission, MissionRequest, PlanContext, PlanOptions, SquadPlan, Tactic};
use crate::rooms::{load_rooms, RoomAnnotation, RoomGraph};

use super::scenario::Scenario;
use super::world::{SquadSetup, World};

/// Map, rooms and distance field with room graphs built for one seed.
#[derive(Debug, Clone)]
pub struct Environment {
    pub map: GridMap,
    pub df: DistanceField,
    pub annotation: RoomAnnotation,
    pub rooms: RoomGraph,
    pub graph: GraphConfig,
    pub seed: u64,
}

impl Environment {
    pub fn new(map: GridMap, annotation: RoomAnnotation, graph: GraphConfig, seed: u64) -> Result<Self> {
        let df = DistanceField::compute(&map, graph.metric);
        let rooms = load_rooms(&annotation, &map)?;
        build_all(&rooms, &map, &df, &graph, seed);
        Ok(Environment {
            map,
            df,
            annotation,
            rooms,
            graph,
            seed,
        })
    }

    pub fn load(map_meta: &Path, rooms: &Path, graph: GraphConfig, seed: u64) -> Result<Self> {
        let (map, _) = load_map_file(map_meta)?;
        let ann = RoomAnnotation::from_file(rooms)?;
        Self::new(map, ann, graph, seed)
    }

    pub fn for_scenario(sc: &Scenario) -> Result<Self> {
        Self::load(&sc.map, &sc.rooms, sc.graph.clone(), sc.seed)
    }

    /// Same map and rooms with graphs rebuilt for another seed.
    pub fn reseeded(&self, seed: u64) -> Result<Self> {
        Self::new(self.map.clone(), self.annotation.clone(), self.graph.clone(), seed)
    }

    pub fn context(&self) -> PlanContext<'_> {
        PlanContext {
            rooms: &self.rooms,
            map: &self.map,
            df: &self.df,
            cfg: &self.graph,
        }
    }
}

/// Plans every squad of the scenario.
pub fn plan_squads(env: &Environment, sc: &Scenario, opts: PlanOptions) -> Result<Vec<SquadPlan>> {
    let ctx = env.context();
    sc.squads
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let req = MissionRequest {
                squad: k,
                start: Vec2::from(s.start),
                goal: Vec2::from(s.goal),
                visit: s.visit.clone(),
                tactics: s.tactics(),
            };
            plan_mission(&ctx, &req, opts).map_err(Error::from)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentRecord {
    pub squad: usize,
    /// Index within the squad.
    pub agent: usize,
    pub state: AgentState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub t: f64,
    pub agents: Vec<AgentRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub frames: Vec<Frame>,
    /// Per agent, summed displacement between consecutive frames.
    pub path_lengths: Vec<f64>,
    /// Wall-clock integration time.
    pub sim_time_s: f64,
    /// The run hit `t_max` with waypoints left.
    pub timed_out: bool,
    /// Frames × agents whose center lies in an occupied cell.
    pub penetrations: usize,
    pub max_step_error: f64,
}

pub const CSV_HEADER: &str = "t,squad_id,agent_id,x,y,theta,vx,vy,omega";

impl Trajectory {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for f in &self.frames {
            for r in &f.agents {
                let s = &r.state;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    f.t, r.squad, r.agent, s.p.x, s.p.y, s.theta, s.v.x, s.v.y, s.omega
                )?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii csv")
    }

    pub fn end_time(&self) -> f64 {
        self.frames.last().map_or(0.0, |f| f.t)
    }

    /// Mean of the per-agent path lengths.
    pub fn mean_path_length(&self) -> f64 {
        if self.path_lengths.is_empty() {
            0.0
        } else {
            self.path_lengths.iter().sum::<f64>() / self.path_lengths.len() as f64
        }
    }
}

/// Default time budget: ten times the longest plan walked at its squad's speed.
pub fn default_t_max(sc: &Scenario, plans: &[SquadPlan]) -> f64 {
    plans
        .iter()
        .zip(&sc.squads)
        .map(|(p, s)| 10.0 * p.length().max(1.0) / s.params().control.v_des)
        .fold(0.0, f64::max)
}

/// Integrates the scenario with the given plans until every agent has used
/// up its waypoints or `t_max` is reached.
pub fn simulate(env: &Environment, sc: &Scenario, plans: &[SquadPlan]) -> Result<Trajectory> {
    let mut squads = Vec::with_capacity(sc.squads.len());
    for (k, (s, plan)) in sc.squads.iter().zip(plans).enumerate() {
        let agents = s.spawn();
        for a in &agents {
            if !env.map.is_free_at(a.p) {
                return Err(Error::InvalidScenario(format!(
                    "squad {k} spawns an agent outside free space at ({}, {})",
                    a.p.x, a.p.y
                )));
            }
        }
        squads.push(SquadSetup {
            params: s.params(),
            agents,
            waypoints: plan.waypoints(),
        });
    }
    let t_max = sc.t_max.unwrap_or_else(|| default_t_max(sc, plans));
    let every = sc.report_every();
    let mut world = World::new(&env.map, &env.df, squads);

    let index: Vec<(usize, usize)> = (0..world.squad_count())
        .flat_map(|s| (0..world.squad_members(s).len()).map(move |k| (s, k)))
        .collect();
    let frame = |w: &World, t: f64| Frame {
        t,
        agents: w
            .agents
            .iter()
            .zip(&index)
            .map(|(a, &(squad, agent))| AgentRecord {
                squad,
                agent,
                state: *a,
            })
            .collect(),
    };

    let started = Instant::now();
    let mut frames = vec![frame(&world, 0.0)];
    let mut step = 0usize;
    let mut timed_out = false;
    while !world.is_done() {
        if step as f64 * sc.dt >= t_max - 1e-12 {
            timed_out = true;
            break;
        }
        world.step(sc.dt)?;
        step += 1;
        if step.is_multiple_of(every) || world.is_done() {
            frames.push(frame(&world, step as f64 * sc.dt));
        }
    }
    let sim_time_s = started.elapsed().as_secs_f64();

    let n = world.agents.len();
    let mut path_lengths = vec![0.0; n];
    for w in frames.windows(2) {
        for (i, len) in path_lengths.iter_mut().enumerate() {
            *len += w[1].agents[i].state.p.distance(w[0].agents[i].state.p);
        }
    }
    let penetrations = frames
        .iter()
        .flat_map(|f| &f.agents)
        .filter(|r| env.map.occupied_at(r.state.p) != Some(false))
        .count();
    if timed_out {
        log::warn!("scenario hit t_max = {t_max:.1} s with waypoints left");
    }
    Ok(Trajectory {
        frames,
        path_lengths,
        sim_time_s,
        timed_out,
        penetrations,
        max_step_error: world.max_step_error,
    })
}

/// Plans and simulates the scenario.
pub fn run(env: &Environment, sc: &Scenario, opts: PlanOptions) -> Result<(Vec<SquadPlan>, Trajectory)> {
    let plans = plan_squads(env, sc, opts)?;
    let traj = simulate(env, sc, &plans)?;
    Ok((plans, traj))
}

/// Mean and sample variance (`n - 1`), zero variance for one sample.
pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchEntry {
    pub tactic: Tactic,
    pub repetitions: usize,
    /// Mean agent path length (m).
    pub mean_path_length: f64,
    pub var_path_length: f64,
    /// Integration wall-clock time (ms).
    pub mean_sim_time_ms: f64,
    pub var_sim_time_ms: f64,
    pub timeouts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub entries: Vec<BenchEntry>,
}

/// Runs the scenario `reps` times per tactic (all squads switched to that
/// tactic); repetition `k` rebuilds the graphs with seed `seed + k`.
pub fn bench(
    env: &Environment,
    sc: &Scenario,
    reps: usize,
    tactics: &[Tactic],
    opts: PlanOptions,
) -> Result<BenchReport> {
    if reps == 0 {
        return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
    }
    let mut entries = Vec::new();
    for &tactic in tactics {
        let mut scn = sc.clone();
        for s in &mut scn.squads {
            s.tactic = tactic;
            s.room_tactics.clear();
            if s.params.is_none() {
                s.vision = None;
            }
        }
        let runs: Vec<Trajectory> = (0..reps)
            .into_par_iter()
            .map(|k| {
                let seed = sc.seed + k as u64;
                let env_k = if seed == env.seed {
                    env.clone()
                } else {
                    env.reseeded(seed)?
                };
                let mut sk = scn.clone();
                sk.seed = seed;
                run(&env_k, &sk, opts).map(|(_, t)| t)
            })
            .collect::<Result<_>>()?;
        let lengths: Vec<f64> = runs.iter().map(Trajectory::mean_path_length).collect();
        let times: Vec<f64> = runs.iter().map(|t| t.sim_time_s * 1e3).collect();
        let (mean_path_length, var_path_length) = mean_variance(&lengths);
        let (mean_sim_time_ms, var_sim_time_ms) = mean_variance(&times);
        entries.push(BenchEntry {
            tactic,
            repetitions: reps,
            mean_path_length,
            var_path_length,
            mean_sim_time_ms,
            var_sim_time_ms,
            timeouts: runs.iter().filter(|t| t.timed_out).count(),
        });
    }
    Ok(BenchReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_variance() {
        assert_eq!(mean_variance(&[4.0]), (4.0, 0.0));
        assert_eq!(mean_variance(&[1.0, 2.0, 3.0, 4.0]), (2.5, 5.0 / 3.0));
    }
}
