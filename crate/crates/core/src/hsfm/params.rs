use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vision {
    #[default]
    Free,
    Restricted,
}

/// Gains of the locomotion controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControlParams {
    pub c_o: f64,
    pub c_des: f64,
    /// Desired walking speed (m/s).
    pub v_des: f64,
    /// Relaxation time of the goal force (s).
    pub tau: f64,
    pub alpha: f64,
    pub k_lambda: f64,
}

impl Default for ControlParams {
    fn default() -> Self {
        Self::for_vision(Vision::Free)
    }
}

impl ControlParams {
    pub fn for_vision(vision: Vision) -> Self {
        ControlParams {
            c_o: 1.0,
            c_des: 500.0,
            v_des: match vision {
                Vision::Free => 1.5,
                Vision::Restricted => 0.326,
            },
            tau: 0.5,
            alpha: 3.0,
            k_lambda: 0.3,
        }
    }

    /// Heading stiffness for goal-force magnitude `f_acc`.
    pub fn c_theta(&self, inertia: f64, f_acc: f64) -> f64 {
        inertia * self.k_lambda * f_acc
    }

    /// Heading damping for goal-force magnitude `f_acc`.
    pub fn c_omega(&self, inertia: f64, f_acc: f64) -> f64 {
        inertia * (1.0 + self.alpha) * (self.k_lambda * f_acc / self.alpha).sqrt()
    }
}

/// Border contact model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContactParams {
    /// Split of the soft force between normal and tangential direction.
    pub c_s: f64,
    pub phi0_b: f64,
    pub c_b: f64,
    pub phi0_s: f64,
    pub d_min: f64,
    /// Occupied cells farther than this are ignored (m).
    pub quadrant_range: f64,
}

impl Default for ContactParams {
    fn default() -> Self {
        ContactParams {
            c_s: 0.5,
            phi0_b: 11.0,
            c_b: 0.2,
            phi0_s: 1200.0,
            d_min: 0.0,
            quadrant_range: 2.0,
        }
    }
}

/// Elliptical agent repulsion, weaker inside a squad than between squads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentForceParams {
    pub a_intra: f64,
    pub b_intra: f64,
    pub a_inter: f64,
    pub b_inter: f64,
    /// Look-ahead applied to the relative velocity (s).
    pub dt: f64,
}

impl Default for AgentForceParams {
    fn default() -> Self {
        Self::for_vision(Vision::Free)
    }
}

impl AgentForceParams {
    /// Squads searching along walls keep a much tighter formation.
    pub fn for_vision(vision: Vision) -> Self {
        let (a_intra, b_intra) = match vision {
            Vision::Free => (500.0, 0.3),
            Vision::Restricted => (50.0, 0.3),
        };
        AgentForceParams {
            a_intra,
            b_intra,
            a_inter: 2000.0,
            b_inter: 0.3,
            dt: 0.5,
        }
    }

    pub fn amplitude_range(&self, same_squad: bool) -> (f64, f64) {
        if same_squad {
            (self.a_intra, self.b_intra)
        } else {
            (self.a_inter, self.b_inter)
        }
    }
}

/// Constant pull toward the squad centroid beyond a dead zone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CohesionParams {
    /// Acceleration of the pull (m/s²); the force is `k_coh * m`.
    pub k_coh: f64,
    /// Dead-zone radius around the centroid (m).
    pub d_coh: f64,
}

impl Default for CohesionParams {
    fn default() -> Self {
        Self::for_vision(Vision::Free)
    }
}

impl CohesionParams {
    pub fn for_vision(vision: Vision) -> Self {
        CohesionParams {
            k_coh: match vision {
                Vision::Free => 1.5,
                Vision::Restricted => 0.4,
            },
            d_coh: match vision {
                Vision::Free => 0.634,
                Vision::Restricted => 0.275,
            },
        }
    }
}

/// Waypoint consumption rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrackerParams {
    pub cone_range: f64,
    /// Half opening angle of the vision cone (rad).
    pub cone_half_angle: f64,
    pub circle_range: f64,
    pub essential_range: f64,
}

impl Default for TrackerParams {
    fn default() -> Self {
        Self::for_vision(Vision::Free)
    }
}

impl TrackerParams {
    pub fn for_vision(vision: Vision) -> Self {
        TrackerParams {
            cone_range: match vision {
                Vision::Free => 50.0,
                Vision::Restricted => 2.0,
            },
            cone_half_angle: FRAC_PI_2,
            circle_range: 0.2,
            essential_range: 0.5,
        }
    }
}

/// Full parameter set for one squad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    pub control: ControlParams,
    pub contact: ContactParams,
    pub agents: AgentForceParams,
    pub cohesion: CohesionParams,
    pub tracker: TrackerParams,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::for_vision(Vision::Free)
    }
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what.to_string()))
    }
}

impl ModelParams {
    pub fn for_vision(vision: Vision) -> Self {
        ModelParams {
            control: ControlParams::for_vision(vision),
            contact: ContactParams::default(),
            agents: AgentForceParams::for_vision(vision),
            cohesion: CohesionParams::for_vision(vision),
            tracker: TrackerParams::for_vision(vision),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.control;
        check(c.c_o >= 0.0 && c.c_des >= 0.0, "c_o and c_des must be non-negative")?;
        check(c.v_des > 0.0 && c.tau > 0.0, "v_des and tau must be positive")?;
        check(c.alpha > 0.0 && c.k_lambda > 0.0, "alpha and k_lambda must be positive")?;
        let k = &self.contact;
        check((0.0..=1.0).contains(&k.c_s), "c_s must lie in [0, 1]")?;
        check(
            k.phi0_b > 0.0 && k.c_b > 0.0 && k.phi0_s > 0.0,
            "contact potentials must be positive",
        )?;
        check(
            k.d_min >= 0.0 && k.quadrant_range > 0.0,
            "d_min and quadrant_range must be non-negative",
        )?;
        let a = &self.agents;
        check(
            a.a_intra >= 0.0 && a.a_inter >= 0.0 && a.b_intra > 0.0 && a.b_inter > 0.0,
            "agent force parameters",
        )?;
        check(a.a_intra < a.a_inter, "a_intra must be below a_inter")?;
        check(
            self.cohesion.k_coh >= 0.0 && self.cohesion.d_coh >= 0.0,
            "cohesion parameters",
        )?;
        let t = &self.tracker;
        check(
            t.cone_range >= 0.0 && t.circle_range >= 0.0 && t.essential_range >= 0.0,
            "tracker ranges",
        )?;
        Ok(())
    }
}
