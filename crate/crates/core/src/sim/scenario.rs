//! Scenario files (TOML):
//!
//! ```toml
//! map = "flat.map.toml"        # relative to this file
//! rooms = "flat.rooms.toml"
//! dt = 0.06
//! dt_report = 0.06
//! t_max = 120.0                # optional; default ten times the longest plan over v_des
//! seed = 0
//!
//! [[squads]]
//! start = [1.0, 1.0]
//! heading = 0.0
//! goal = [1.0, 1.0]
//! visit = ["b"]
//! tactic = "wall_rhr"
//! agents = 3
//! spacing = 0.6                # agents spawn in file behind `start`
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::graph::GraphConfig;
use crate::hsfm::{AgentState, ModelParams, Vision};
use crate::planner::{Tactic, TacticAssignment};

fn default_dt() -> f64 {
    0.06
}

fn default_agents() -> usize {
    3
}

fn default_spacing() -> f64 {
    0.6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquadSpec {
    pub start: [f64; 2],
    #[serde(default)]
    pub heading: f64,
    pub goal: [f64; 2],
    #[serde(default)]
    pub visit: Vec<String>,
    #[serde(default)]
    pub tactic: Tactic,
    /// Per-room tactic overrides.
    #[serde(default)]
    pub room_tactics: BTreeMap<String, Tactic>,
    /// Defaults to restricted for wall search, free otherwise.
    #[serde(default)]
    pub vision: Option<Vision>,
    #[serde(default = "default_agents")]
    pub agents: usize,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    /// Explicit spawn positions; overrides `agents` and `spacing`.
    #[serde(default)]
    pub positions: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub params: Option<ModelParams>,
}

impl SquadSpec {
    pub fn vision(&self) -> Vision {
        self.vision.unwrap_or(if self.tactic.is_wall() {
            Vision::Restricted
        } else {
            Vision::Free
        })
    }

    pub fn tactics(&self) -> TacticAssignment {
        TacticAssignment {
            default: self.tactic,
            rooms: self.room_tactics.clone(),
        }
    }

    pub fn params(&self) -> ModelParams {
        self.params.unwrap_or_else(|| ModelParams::for_vision(self.vision()))
    }

    /// Initial agent states, at rest and facing `heading`.
    pub fn spawn(&self) -> Vec<AgentState> {
        let start = Vec2::from(self.start);
        let positions: Vec<Vec2> = match &self.positions {
            Some(ps) => ps.iter().map(|&p| Vec2::from(p)).collect(),
            None => {
                let back = -Vec2::from_angle(self.heading) * self.spacing;
                (0..self.agents).map(|k| start + back * k as f64).collect()
            }
        };
        positions
            .into_iter()
            .map(|p| AgentState::at_rest(p, self.heading))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub map: PathBuf,
    pub rooms: PathBuf,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Reporting interval; a multiple of `dt`, defaults to `dt`.
    #[serde(default)]
    pub dt_report: Option<f64>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub graph: GraphConfig,
    pub squads: Vec<SquadSpec>,
}

impl Scenario {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let sc: Scenario = toml::from_str(s).map_err(|e| Error::InvalidScenario(e.message().to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    /// Loads a scenario; `map` and `rooms` are resolved against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut sc = Self::from_toml_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        sc.map = base.join(&sc.map);
        sc.rooms = base.join(&sc.rooms);
        Ok(sc)
    }

    pub fn report_every(&self) -> usize {
        self.dt_report.map_or(1, |r| (r / self.dt).round().max(1.0) as usize)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if let Some(r) = self.dt_report {
            let k = (r / self.dt).round();
            if k < 1.0 || (k * self.dt - r).abs() > 1e-9 * r.max(1.0) {
                return bad(format!("dt_report {r} is not a positive multiple of dt {}", self.dt));
            }
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0) {
                return bad(format!("t_max must be positive, got {t}"));
            }
        }
        if self.squads.is_empty() {
            return bad("no squads".into());
        }
        for (k, s) in self.squads.iter().enumerate() {
            let n = s.positions.as_ref().map_or(s.agents, Vec::len);
            if n == 0 {
                return bad(format!("squad {k} has no agents"));
            }
            if s.positions.is_none() && !(s.spacing >= 0.0) {
                return bad(format!("squad {k} has negative spacing"));
            }
            s.params().validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = r#"
map = "m.map.toml"
rooms = "m.rooms.toml"
dt_report = 0.12

[[squads]]
start = [1.0, 1.0]
goal = [4.0, 1.0]
tactic = "wall_lhr"
"#;

    #[test]
    fn parses_with_defaults() {
        let sc = Scenario::from_toml_str(TEXT).unwrap();
        assert_eq!(sc.dt, 0.06);
        assert_eq!(sc.report_every(), 2);
        let sq = &sc.squads[0];
        assert_eq!(sq.vision(), Vision::Restricted);
        let agents = sq.spawn();
        assert_eq!(agents.len(), 3);
        assert!((agents[2].p.x - (1.0 - 1.2)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_report_interval() {
        let text = TEXT.replace("0.12", "0.1");
        assert!(matches!(Scenario::from_toml_str(&text), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn rejects_empty_squad() {
        let text = format!("{TEXT}agents = 0\n");
        assert!(Scenario::from_toml_str(&text).is_err());
    }
}
