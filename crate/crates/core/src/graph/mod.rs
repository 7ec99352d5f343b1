//! Per-room planning graphs: medial axis, visibility road map and
//! low-discrepancy fill, joined by proximity edges labelled with the
//! tactics that may use them.

mod build;
mod connect;
mod fill;
mod medial;
mod roadmap;

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::map::DistanceMetric;
use crate::planner::Tactic;

pub use build::{build_all, build_room_graph, GraphDump, RoomDump};
pub(crate) use connect::push_pair;
pub use connect::{connect_and_label, wall_permits};
pub use fill::{fill_random, FillResult};
pub use medial::{build_medial_axis, MedialAxis};
pub use roadmap::{build_visibility_roadmap, Roadmap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Medial,
    Guard,
    Connector,
    Fill,
    Doorway,
    /// Mission start or goal point inserted at planning time.
    Terminal,
}

impl NodeKind {
    /// Doorways and terminals may anchor wall-search edges regardless of clearance.
    pub fn is_anchor(self) -> bool {
        matches!(self, NodeKind::Doorway | NodeKind::Terminal)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanNode {
    pub id: usize,
    pub position: Vec2,
    pub kind: NodeKind,
    pub wall_distance: f64,
    /// Doorway index for [`NodeKind::Doorway`] nodes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doorway: Option<usize>,
}

/// Set of tactics an edge admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Permits(u8);

impl Permits {
    pub const NONE: Permits = Permits(0);
    pub const FREE: Permits = Permits(1);
    pub const WALL_LHR: Permits = Permits(2);
    pub const WALL_RHR: Permits = Permits(4);

    pub fn of(t: Tactic) -> Permits {
        match t {
            Tactic::Free => Permits::FREE,
            Tactic::WallLhr => Permits::WALL_LHR,
            Tactic::WallRhr => Permits::WALL_RHR,
        }
    }

    pub fn contains(self, t: Tactic) -> bool {
        self.0 & Permits::of(t).0 != 0
    }

    pub fn union(self, o: Permits) -> Permits {
        Permits(self.0 | o.0)
    }

    pub fn tactics(self) -> Vec<Tactic> {
        [Tactic::Free, Tactic::WallLhr, Tactic::WallRhr]
            .into_iter()
            .filter(|&t| self.contains(t))
            .collect()
    }

    /// Swaps the two wall-search chiralities.
    pub fn mirrored(self) -> Permits {
        let free = self.0 & 1;
        let lhr = (self.0 >> 1) & 1;
        let rhr = (self.0 >> 2) & 1;
        Permits(free | (rhr << 1) | (lhr << 2))
    }
}

impl Serialize for Permits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.tactics().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ts = Vec::<Tactic>::deserialize(d)?;
        Ok(ts.into_iter().fold(Permits::NONE, |p, t| p.union(Permits::of(t))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanEdge {
    pub from: usize,
    pub to: usize,
    pub length: f64,
    pub permits: Permits,
}

/// Graph construction parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphConfig {
    pub metric: DistanceMetric,
    /// Proximity radius for edges (m).
    pub connection_radius: f64,
    /// Maximum wall distance of wall-search edge endpoints (m).
    pub wall_band: f64,
    /// Minimum wall distance of sampled nodes (m).
    pub min_clearance: f64,
    /// Fill density (nodes per m² of room polygon).
    pub fill_density: f64,
    /// Minimum distance of fill nodes to any earlier node (m).
    pub fill_spacing: f64,
    /// Minimum distance between retained medial-axis nodes (m).
    pub medial_spacing: f64,
    /// Medial-axis cells whose two nearest obstacles are closer together than this are dropped (m).
    pub medial_min_separation: f64,
    /// Consecutive unproductive samples that end road-map sampling.
    pub roadmap_budget: usize,
    /// Hard cap on road-map samples.
    pub roadmap_cap: usize,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            metric: DistanceMetric::Euclidean,
            connection_radius: 1.5,
            wall_band: 1.0,
            min_clearance: 0.25,
            fill_density: 6.0,
            fill_spacing: 0.3,
            medial_spacing: 0.3,
            medial_min_separation: 0.5,
            roadmap_budget: 50,
            roadmap_cap: 5000,
        }
    }
}

/// Combined planning graph of one room.
#[derive(Debug, Clone, PartialEq)]
pub struct RoomSubGraph {
    pub room: usize,
    pub nodes: Vec<PlanNode>,
    pub edges: Vec<PlanEdge>,
    /// Outgoing edge indices per node.
    pub adjacency: Vec<Vec<usize>>,
    /// Guard and connector node ids.
    pub visibility_nodes: Vec<usize>,
    /// Doorway node ids.
    pub entry_nodes: Vec<usize>,
    pub connection_radius: f64,
    pub wall_band: f64,
}

impl RoomSubGraph {
    /// Assembles a graph from raw parts; node ids must equal their indices.
    pub fn from_parts(
        room: usize,
        nodes: Vec<PlanNode>,
        edges: Vec<PlanEdge>,
        connection_radius: f64,
        wall_band: f64,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (k, e) in edges.iter().enumerate() {
            adjacency[e.from].push(k);
        }
        let visibility_nodes = nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Guard | NodeKind::Connector))
            .map(|n| n.id)
            .collect();
        let entry_nodes = nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Doorway)
            .map(|n| n.id)
            .collect();
        RoomSubGraph {
            room,
            nodes,
            edges,
            adjacency,
            visibility_nodes,
            entry_nodes,
            connection_radius,
            wall_band,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &PlanEdge> {
        self.adjacency[node].iter().map(move |&k| &self.edges[k])
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<&PlanEdge> {
        self.out_edges(from).find(|e| e.to == to)
    }

    pub fn position(&self, node: usize) -> Vec2 {
        self.nodes[node].position
    }

    /// Doorway node for doorway index `doorway`.
    pub fn doorway_node(&self, doorway: usize) -> Option<usize> {
        self.entry_nodes
            .iter()
            .copied()
            .find(|&n| self.nodes[n].doorway == Some(doorway))
    }

    /// Sum of edge lengths along `path`; `None` if a hop is not an edge.
    pub fn path_length(&self, path: &[usize]) -> Option<f64> {
        path.windows(2).map(|w| self.edge(w[0], w[1]).map(|e| e.length)).sum()
    }
}
