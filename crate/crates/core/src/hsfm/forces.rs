use crate::geom::Vec2;

use super::{AgentForceParams, AgentState, CohesionParams, ContactParams, ContactSample, ControlParams};

const DEGENERATE: f64 = 1e-9;

/// Relaxation toward walking at `v_des` straight at `target`, and its direction.
/// Without a target, or with the target on the agent, the force only brakes.
pub fn goal_force(a: &AgentState, target: Option<Vec2>, cp: &ControlParams) -> (Vec2, f64) {
    let dir = target
        .map(|t| t - a.p)
        .filter(|d| d.norm() >= DEGENERATE)
        .and_then(Vec2::normalized)
        .unwrap_or(Vec2::ZERO);
    let f = (dir * cp.v_des - a.velocity()) * (a.m / cp.tau);
    (f, f.y.atan2(f.x))
}

/// Force exerted by one border contact: an exponential push plus, in
/// contact, a soft normal push and a tangential term driven by `v_y`.
pub fn border_force(s: &ContactSample, a: &AgentState, cp: &ContactParams) -> Vec2 {
    let exp = cp.phi0_b * ((a.r - s.d) / cp.c_b).exp();
    let mut f = s.n * exp;
    if s.d <= a.r {
        let soft = if s.d <= cp.d_min {
            (a.r - s.d) / (a.r - cp.d_min) * cp.phi0_s
        } else {
            cp.phi0_s
        };
        f += s.n * (cp.c_s * soft) + s.t * ((1.0 - cp.c_s) * soft * a.v.y);
    }
    f
}

/// Repulsion on `a` from `b` with an elliptical, velocity-dependent
/// potential; at zero relative velocity it is circular.
pub fn agent_agent_force(a: &AgentState, b: &AgentState, same_squad: bool, p: &AgentForceParams) -> Vec2 {
    let (amp, range) = p.amplitude_range(same_squad);
    let reach = a.r + b.r;
    let d = a.p - b.p;
    let dn = d.norm();
    if dn < DEGENERATE {
        log::debug!("coincident agents at ({:.3}, {:.3})", a.p.x, a.p.y);
        return Vec2::X * (amp * (reach / range).exp());
    }
    let y = (b.velocity() - a.velocity()) * p.dt;
    let dy = d - y;
    let dyn_ = dy.norm();
    let sum = dn + dyn_;
    let b2 = sum * sum - y.norm_sq();
    if dyn_ < DEGENERATE || b2 <= DEGENERATE * DEGENERATE {
        return d / dn * (amp * ((reach - dn) / range).exp());
    }
    let semi = 0.5 * b2.sqrt();
    let grad = (d / dn + dy / dyn_) * (sum / (4.0 * semi));
    grad * (amp * ((reach - semi) / range).exp())
}

/// Constant pull toward the centroid of `squad` once `a` is farther than `d_coh`.
pub fn cohesion_force(a: &AgentState, squad: &[AgentState], p: &CohesionParams) -> Vec2 {
    if squad.len() < 2 {
        return Vec2::ZERO;
    }
    let centroid = squad.iter().fold(Vec2::ZERO, |s, m| s + m.p) / squad.len() as f64;
    let to = centroid - a.p;
    if to.norm() <= p.d_coh {
        return Vec2::ZERO;
    }
    to.normalized().map_or(Vec2::ZERO, |u| u * (p.k_coh * a.m))
}
