//! Headed social force model: body-frame locomotion driven by goal, agent
//! and border forces.

mod contacts;
mod forces;
mod params;
mod waypoints;

use serde::{Deserialize, Serialize};

use crate::geom::{wrap_angle, Rot2, Vec2};

pub use contacts::{border_contacts, ContactSample, ContactScanner, Quadrant};
pub use forces::{agent_agent_force, border_force, cohesion_force, goal_force};
pub use params::{AgentForceParams, CohesionParams, ContactParams, ControlParams, ModelParams, TrackerParams, Vision};
pub use waypoints::WaypointTracker;

/// Pose and body-frame velocity of one agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub p: Vec2,
    pub theta: f64,
    /// Forward (`x`) and sideways (`y`) velocity in the body frame.
    pub v: Vec2,
    pub omega: f64,
    pub m: f64,
    pub inertia: f64,
    pub r: f64,
}

impl AgentState {
    pub const DEFAULT_MASS: f64 = 80.0;
    pub const DEFAULT_RADIUS: f64 = 0.25;

    /// Agent at rest with the default body (80 kg disc of radius 0.25 m).
    pub fn at_rest(p: Vec2, theta: f64) -> Self {
        let (m, r) = (Self::DEFAULT_MASS, Self::DEFAULT_RADIUS);
        AgentState {
            p,
            theta: wrap_angle(theta),
            v: Vec2::ZERO,
            omega: 0.0,
            m,
            inertia: 0.5 * m * r * r,
            r,
        }
    }

    pub fn rotation(&self) -> Rot2 {
        rotation(self.theta)
    }

    /// World-frame velocity.
    pub fn velocity(&self) -> Vec2 {
        self.rotation().apply(self.v)
    }

    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.theta.is_finite() && self.v.is_finite() && self.omega.is_finite()
    }
}

/// Body-frame rotation; columns are the heading `e_x` and its left normal `e_y`.
pub fn rotation(theta: f64) -> Rot2 {
    Rot2::new(theta)
}

/// Partial forces acting on one agent.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceBreakdown {
    pub f_acc: Vec2,
    /// Direction of `f_acc`.
    pub phi_acc: f64,
    pub f_agents: Vec2,
    pub f_border: Vec2,
    pub f_total: Vec2,
}

impl ForceBreakdown {
    pub fn new(f_acc: Vec2, phi_acc: f64, f_agents: Vec2, f_border: Vec2) -> Self {
        ForceBreakdown {
            f_acc,
            phi_acc,
            f_agents,
            f_border,
            f_total: f_acc + f_agents + f_border,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlInputs {
    pub u_f: f64,
    pub u_o: f64,
    pub u_theta: f64,
}

/// Forward, orthogonal and turning inputs from the force breakdown.
pub fn control_inputs(a: &AgentState, fb: &ForceBreakdown, cp: &ControlParams) -> ControlInputs {
    let rot = a.rotation();
    let acc = fb.f_acc.norm();
    ControlInputs {
        u_f: fb.f_total.dot(rot.e_x),
        u_o: cp.c_o * (fb.f_total - fb.f_acc).dot(rot.e_y) - cp.c_des * a.v.y,
        u_theta: -cp.c_theta(a.inertia, acc) * wrap_angle(a.theta - fb.phi_acc) - cp.c_omega(a.inertia, acc) * a.omega,
    }
}

/// Time derivative of an agent's state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateDerivative {
    pub p: Vec2,
    pub theta: f64,
    pub v: Vec2,
    pub omega: f64,
}

pub fn dynamics(a: &AgentState, u: &ControlInputs) -> StateDerivative {
    StateDerivative {
        p: a.rotation().apply(a.v),
        theta: a.omega,
        v: Vec2::new(u.u_f, u.u_o) / a.m,
        omega: u.u_theta / a.inertia,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn rotation_matrices() {
        let id = rotation(0.0).matrix();
        assert_eq!(id, [[1.0, 0.0], [0.0, 1.0]]);
        let q = rotation(FRAC_PI_2);
        assert!(close(q.e_x.x, 0.0) && close(q.e_x.y, 1.0));
        assert!(close(q.e_y.x, -1.0) && close(q.e_y.y, 0.0));
        let h = rotation(FRAC_PI_4).matrix();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(h[0][0], s) && close(h[0][1], -s) && close(h[1][0], s) && close(h[1][1], s));
    }

    #[test]
    fn aligned_equilibrium_inputs() {
        let a = AgentState::at_rest(Vec2::ZERO, 0.3);
        let f = Vec2::from_angle(0.3) * 120.0;
        let fb = ForceBreakdown::new(f, 0.3, Vec2::ZERO, Vec2::ZERO);
        let u = control_inputs(&a, &fb, &ControlParams::default());
        assert!(close(u.u_f, 120.0));
        assert!(close(u.u_o, 0.0));
        assert!(close(u.u_theta, 0.0));
    }

    #[test]
    fn pure_heading_error_torque() {
        let a = AgentState::at_rest(Vec2::ZERO, FRAC_PI_2);
        let f_acc = Vec2::new(200.0, 0.0);
        let fb = ForceBreakdown::new(f_acc, 0.0, Vec2::ZERO, Vec2::ZERO);
        let cp = ControlParams::default();
        let u = control_inputs(&a, &fb, &cp);
        assert!(close(u.u_theta, -cp.c_theta(a.inertia, 200.0) * FRAC_PI_2));
    }

    #[test]
    fn lateral_force_goes_to_orthogonal_input() {
        let a = AgentState::at_rest(Vec2::ZERO, 0.0);
        let fb = ForceBreakdown::new(Vec2::ZERO, 0.0, Vec2::new(0.0, 35.0), Vec2::ZERO);
        let u = control_inputs(&a, &fb, &ControlParams::default());
        assert!(close(u.u_f, 0.0));
        assert!(close(u.u_o, 35.0));
    }

    #[test]
    fn coasting_and_rotated_frame() {
        let mut a = AgentState::at_rest(Vec2::ZERO, 0.0);
        a.v = Vec2::new(1.0, 0.0);
        let d = dynamics(&a, &ControlInputs::default());
        assert_eq!(d.p, Vec2::new(1.0, 0.0));
        assert_eq!(d.v, Vec2::ZERO);
        assert_eq!(d.omega, 0.0);

        let push = dynamics(
            &a,
            &ControlInputs {
                u_f: a.m,
                u_o: 0.0,
                u_theta: 0.0,
            },
        );
        assert_eq!(push.v, Vec2::new(1.0, 0.0));

        a.theta = FRAC_PI_2;
        let d = dynamics(&a, &ControlInputs::default());
        assert!(close(d.p.x, 0.0) && close(d.p.y, 1.0));
    }
}
