use crate::error::{Error, Result};
use crate::geom::{wrap_angle, Vec2};
use crate::hsfm::{
    agent_agent_force, border_force, cohesion_force, control_inputs, dynamics, goal_force, AgentState, ContactScanner,
    ForceBreakdown, ModelParams, WaypointTracker,
};
use crate::map::{DistanceField, GridMap};
use crate::planner::Waypoint;

use super::integrator::dopri5_step;

const STATE_DIM: usize = 6;

/// A squad as seen by the integrator.
#[derive(Debug, Clone)]
pub struct SquadSetup {
    pub params: ModelParams,
    pub agents: Vec<AgentState>,
    pub waypoints: Vec<Waypoint>,
}

/// All agents of a run plus the static map data their forces depend on.
#[derive(Debug, Clone)]
pub struct World<'a> {
    map: &'a GridMap,
    df: &'a DistanceField,
    pub agents: Vec<AgentState>,
    pub trackers: Vec<WaypointTracker>,
    squad_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    params: Vec<ModelParams>,
    scanners: Vec<ContactScanner>,
    pub time: f64,
    /// Largest embedded error estimate seen so far.
    pub max_step_error: f64,
}

impl<'a> World<'a> {
    pub fn new(map: &'a GridMap, df: &'a DistanceField, squads: Vec<SquadSetup>) -> Self {
        let mut w = World {
            map,
            df,
            agents: Vec::new(),
            trackers: Vec::new(),
            squad_of: Vec::new(),
            members: Vec::new(),
            params: Vec::new(),
            scanners: Vec::new(),
            time: 0.0,
            max_step_error: 0.0,
        };
        for (s, sq) in squads.into_iter().enumerate() {
            let mut ids = Vec::new();
            for a in sq.agents {
                ids.push(w.agents.len());
                w.agents.push(a);
                w.squad_of.push(s);
                w.trackers
                    .push(WaypointTracker::new(sq.waypoints.iter().cloned(), sq.params.tracker));
            }
            w.members.push(ids);
            w.scanners
                .push(ContactScanner::new(map, sq.params.contact.quadrant_range));
            w.params.push(sq.params);
        }
        w.update_waypoints();
        w
    }

    pub fn squad_of(&self, agent: usize) -> usize {
        self.squad_of[agent]
    }

    pub fn squad_members(&self, squad: usize) -> &[usize] {
        &self.members[squad]
    }

    pub fn squad_count(&self) -> usize {
        self.members.len()
    }

    pub fn is_done(&self) -> bool {
        self.trackers.iter().all(WaypointTracker::is_done)
    }

    /// Force breakdown of agent `i` for the given states and current targets.
    pub fn forces(&self, states: &[AgentState], i: usize) -> ForceBreakdown {
        let a = &states[i];
        let s = self.squad_of[i];
        let prm = &self.params[s];
        let target = self.trackers[i].aim();
        let (f_acc, phi_acc) = goal_force(a, target, &prm.control);

        let mut f_agents = Vec2::ZERO;
        for (j, b) in states.iter().enumerate() {
            if j != i {
                f_agents += agent_agent_force(a, b, self.squad_of[j] == s, &prm.agents);
            }
        }
        let mates: Vec<AgentState> = self.members[s].iter().map(|&j| states[j]).collect();
        f_agents += cohesion_force(a, &mates, &prm.cohesion);

        let mut f_border = Vec2::ZERO;
        let scanner = &self.scanners[s];
        let clear = self.df.at(self.map, a.p).unwrap_or(0.0);
        if clear <= scanner.range() + self.map.resolution() {
            for c in scanner.scan(self.map, a.p, a.theta) {
                f_border += border_force(&c, a, &prm.contact);
            }
        }
        ForceBreakdown::new(f_acc, phi_acc, f_agents, f_border)
    }

    fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        let states: Vec<AgentState> = self
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| unpack(a, &y[i * STATE_DIM..(i + 1) * STATE_DIM]))
            .collect();
        for i in 0..states.len() {
            let fb = self.forces(&states, i);
            let u = control_inputs(&states[i], &fb, &self.params[self.squad_of[i]].control);
            let d = dynamics(&states[i], &u);
            dy[i * STATE_DIM..(i + 1) * STATE_DIM].copy_from_slice(&[d.p.x, d.p.y, d.theta, d.v.x, d.v.y, d.omega]);
        }
    }

    /// Advances all agents by one step of length `dt`, then consumes visited waypoints.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if self.agents.is_empty() {
            self.time += dt;
            return Ok(());
        }
        let mut y: Vec<f64> = self.agents.iter().flat_map(pack).collect();
        let err = {
            let this = &*self;
            let mut f = |_: f64, y: &[f64], dy: &mut [f64]| this.rhs(y, dy);
            dopri5_step(&mut f, self.time, &mut y, dt)
        };
        self.max_step_error = self.max_step_error.max(err);
        for (i, a) in self.agents.iter_mut().enumerate() {
            let mut next = unpack(a, &y[i * STATE_DIM..(i + 1) * STATE_DIM]);
            next.theta = wrap_angle(next.theta);
            if !next.is_finite() {
                return Err(Error::SimulationAbort {
                    time: self.time,
                    reason: format!("agent {i} reached a non-finite state: {next:?}"),
                });
            }
            *a = next;
        }
        self.time += dt;
        self.update_waypoints();
        Ok(())
    }

    fn update_waypoints(&mut self) {
        let map = self.map;
        for (t, a) in self.trackers.iter_mut().zip(&self.agents) {
            t.update(a.p, a.theta, |p, q| map.line_of_sight(p, q));
        }
    }
}

fn pack(a: &AgentState) -> [f64; STATE_DIM] {
    [a.p.x, a.p.y, a.theta, a.v.x, a.v.y, a.omega]
}

fn unpack(template: &AgentState, y: &[f64]) -> AgentState {
    AgentState {
        p: Vec2::new(y[0], y[1]),
        theta: y[2],
        v: Vec2::new(y[3], y[4]),
        omega: y[5],
        ..*template
    }
}
