//! Rooms connected by doorways, each room later expanded into a planning sub-graph.
//!
//! Annotation schema (TOML):
//!
//! ```toml
//! [[rooms]]
//! id = "hall"
//! polygon = [[0.0, 0.0], [6.4, 0.0], [6.4, 1.6], [0.0, 1.6]]   # meters
//!
//! [[doorways]]
//! id = "d_b"
//! room_a = "hall"
//! room_b = "b"            # or "exterior"
//! a = [1.0, 1.6]          # doorway segment endpoints, in free space
//! b = [1.9, 1.6]
//! ```

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Polygon, Vec2};
use crate::graph::RoomSubGraph;
use crate::map::{Cell, GridMap};
use crate::planner::PlanError;

pub const EXTERIOR: &str = "exterior";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoomAnnotation {
    #[serde(default)]
    pub rooms: Vec<RoomRecord>,
    #[serde(default)]
    pub doorways: Vec<DoorwayRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoomRecord {
    pub id: String,
    pub polygon: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoorwayRecord {
    pub id: String,
    pub room_a: String,
    pub room_b: String,
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl RoomAnnotation {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::InvalidRooms(e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoorSide {
    Room(usize),
    Exterior,
}

#[derive(Debug, Clone)]
pub struct Doorway {
    pub id: String,
    pub sides: [DoorSide; 2],
    pub a: Vec2,
    pub b: Vec2,
}

impl Doorway {
    pub fn midpoint(&self) -> Vec2 {
        (self.a + self.b) * 0.5
    }

    pub fn width(&self) -> f64 {
        self.a.distance(self.b)
    }

    /// The side opposite `room`, if `room` is one of the two sides.
    pub fn other_side(&self, room: usize) -> Option<DoorSide> {
        match self.sides {
            [DoorSide::Room(r), other] if r == room => Some(other),
            [other, DoorSide::Room(r)] if r == room => Some(other),
            _ => None,
        }
    }

    pub fn connects(&self, room: usize) -> bool {
        self.sides.contains(&DoorSide::Room(room))
    }
}

#[derive(Debug, Clone)]
pub struct Room {
    pub id: String,
    pub polygon: Polygon,
    /// Indices into [`RoomGraph::doorways`].
    pub doorways: Vec<usize>,
    /// Free cells whose centers fall inside the polygon.
    pub cells: Vec<Cell>,
    sub_graph: OnceLock<Arc<RoomSubGraph>>,
}

impl Room {
    pub fn sub_graph(&self) -> Option<&Arc<RoomSubGraph>> {
        self.sub_graph.get()
    }

    /// Publishes the sub-graph; a room's slot can be filled only once.
    pub fn set_sub_graph(&self, sg: RoomSubGraph) -> std::result::Result<(), RoomSubGraph> {
        self.sub_graph
            .set(Arc::new(sg))
            .map_err(|arc| Arc::try_unwrap(arc).unwrap_or_else(|a| (*a).clone()))
    }

    pub fn is_single_entry(&self) -> bool {
        self.doorways.len() == 1
    }
}

#[derive(Debug, Clone)]
pub struct RoomGraph {
    pub rooms: Vec<Room>,
    pub doorways: Vec<Doorway>,
    index: HashMap<String, usize>,
}

impl RoomGraph {
    pub fn room_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownRoom(id.to_string()))
    }

    pub fn room(&self, id: &str) -> Result<&Room> {
        Ok(&self.rooms[self.room_index(id)?])
    }

    /// Room whose polygon contains `p`.
    pub fn room_at(&self, p: Vec2) -> Option<usize> {
        self.rooms.iter().position(|r| r.polygon.contains(p))
    }

    /// Doorways joining rooms `a` and `b`, in annotation order.
    pub fn doorways_between(&self, a: usize, b: usize) -> Vec<usize> {
        self.rooms[a]
            .doorways
            .iter()
            .copied()
            .filter(|&d| self.doorways[d].other_side(a) == Some(DoorSide::Room(b)))
            .collect()
    }

    /// Copy of this graph in which only `room`'s sub-graph is replaced; every
    /// other slot keeps pointing at the same published sub-graph.
    pub fn with_sub_graph(&self, room: usize, sg: RoomSubGraph) -> RoomGraph {
        let mut next = self.clone();
        next.rooms[room].sub_graph = OnceLock::new();
        let _ = next.rooms[room].sub_graph.set(Arc::new(sg));
        next
    }

    /// Shortest room sequence from `start` to `goal` by summed doorway-midpoint
    /// distances through intermediate rooms; equal costs resolve to the
    /// lexicographically smallest id sequence.
    pub fn room_sequence(&self, start: usize, goal: usize) -> std::result::Result<Vec<usize>, PlanError> {
        if start == goal {
            return Ok(vec![start]);
        }
        #[derive(Clone)]
        struct Label {
            cost: f64,
            seq: Vec<usize>,
            door: usize,
        }
        let key_cmp = |a: &Label, b: &Label| -> Ordering {
            a.cost.total_cmp(&b.cost).then_with(|| {
                let ia = a.seq.iter().map(|&r| self.rooms[r].id.as_str());
                let ib = b.seq.iter().map(|&r| self.rooms[r].id.as_str());
                ia.cmp(ib)
            })
        };

        let mut open: Vec<Label> = Vec::new();
        for &d in &self.rooms[start].doorways {
            if let Some(DoorSide::Room(next)) = self.doorways[d].other_side(start) {
                open.push(Label {
                    cost: 0.0,
                    seq: vec![start, next],
                    door: d,
                });
            }
        }
        let mut settled: BTreeSet<(usize, usize)> = BTreeSet::new();
        while !open.is_empty() {
            let best = (0..open.len())
                .min_by(|&a, &b| key_cmp(&open[a], &open[b]))
                .expect("non-empty");
            let label = open.swap_remove(best);
            let room = *label.seq.last().expect("non-empty sequence");
            if room == goal {
                return Ok(label.seq);
            }
            if !settled.insert((label.door, room)) {
                continue;
            }
            let entry = self.doorways[label.door].midpoint();
            for &d in &self.rooms[room].doorways {
                if d == label.door {
                    continue;
                }
                if let Some(DoorSide::Room(next)) = self.doorways[d].other_side(room) {
                    if label.seq.contains(&next) {
                        continue;
                    }
                    let mut seq = label.seq.clone();
                    seq.push(next);
                    open.push(Label {
                        cost: label.cost + entry.distance(self.doorways[d].midpoint()),
                        seq,
                        door: d,
                    });
                }
            }
        }
        Err(PlanError::Unreachable {
            from: self.rooms[start].id.clone(),
            to: self.rooms[goal].id.clone(),
        })
    }
}

/// Validates an annotation against the map and builds the room graph.
pub fn load_rooms(ann: &RoomAnnotation, map: &GridMap) -> Result<RoomGraph> {
    let mut index = HashMap::new();
    let mut rooms = Vec::with_capacity(ann.rooms.len());
    for rec in &ann.rooms {
        if rec.id.is_empty() || rec.id == EXTERIOR {
            return Err(Error::InvalidRooms(format!("reserved or empty room id `{}`", rec.id)));
        }
        if index.insert(rec.id.clone(), rooms.len()).is_some() {
            return Err(Error::InvalidRooms(format!("duplicate room id `{}`", rec.id)));
        }
        let polygon = Polygon::new(rec.polygon.iter().map(|&p| p.into()).collect());
        if !polygon.is_simple() {
            return Err(Error::InvalidRooms(format!("room `{}` polygon is not simple", rec.id)));
        }
        rooms.push(Room {
            id: rec.id.clone(),
            polygon,
            doorways: Vec::new(),
            cells: Vec::new(),
            sub_graph: OnceLock::new(),
        });
    }

    // raster ownership: every cell center belongs to at most one room
    let mut owner: Vec<Option<usize>> = vec![None; map.len()];
    for (r, room) in rooms.iter_mut().enumerate() {
        let (lo, hi) = room.polygon.bounds();
        let w = map.resolution();
        let o = map.origin();
        let i0 = (((lo.x - o.x) / w).floor().max(0.0)) as usize;
        let j0 = (((lo.y - o.y) / w).floor().max(0.0)) as usize;
        let i1 = ((((hi.x - o.x) / w).ceil()).max(0.0) as usize).min(map.width());
        let j1 = ((((hi.y - o.y) / w).ceil()).max(0.0) as usize).min(map.height());
        for j in j0..j1 {
            for i in i0..i1 {
                let c = (i, j);
                if !room.polygon.contains(map.cell_center(c)) {
                    continue;
                }
                let idx = map.index(c);
                if let Some(prev) = owner[idx] {
                    return Err(Error::OverlappingRooms(ann.rooms[prev].id.clone(), room.id.clone()));
                }
                owner[idx] = Some(r);
                if !map.is_occupied(c) {
                    room.cells.push(c);
                }
            }
        }
    }

    let tol = 2.0 * map.resolution() + 1e-9;
    let mut doorways = Vec::with_capacity(ann.doorways.len());
    let mut seen = BTreeSet::new();
    for rec in &ann.doorways {
        if !seen.insert(rec.id.clone()) {
            return Err(Error::InvalidRooms(format!("duplicate doorway id `{}`", rec.id)));
        }
        let side = |id: &str| -> Result<DoorSide> {
            if id == EXTERIOR {
                Ok(DoorSide::Exterior)
            } else {
                index
                    .get(id)
                    .map(|&r| DoorSide::Room(r))
                    .ok_or_else(|| Error::UnknownRoom(id.to_string()))
            }
        };
        let sides = [side(&rec.room_a)?, side(&rec.room_b)?];
        if sides[0] == sides[1] {
            return Err(Error::InvalidRooms(format!(
                "doorway `{}` must join two distinct rooms",
                rec.id
            )));
        }
        if sides == [DoorSide::Exterior; 2] {
            return Err(Error::InvalidRooms(format!("doorway `{}` has no room", rec.id)));
        }
        let door = Doorway {
            id: rec.id.clone(),
            sides,
            a: rec.a.into(),
            b: rec.b.into(),
        };
        if !map.line_of_sight(door.a, door.b) {
            return Err(Error::InvalidRooms(format!("doorway `{}` segment is occupied", rec.id)));
        }
        let mid = door.midpoint();
        for s in sides {
            if let DoorSide::Room(r) = s {
                let poly = &rooms[r].polygon;
                let gap = if poly.contains(mid) {
                    0.0
                } else {
                    poly.boundary_distance(mid)
                };
                if gap > tol {
                    return Err(Error::InvalidRooms(format!(
                        "doorway `{}` is not adjacent to room `{}`",
                        rec.id, rooms[r].id
                    )));
                }
            }
        }
        let d = doorways.len();
        for s in sides {
            if let DoorSide::Room(r) = s {
                rooms[r].doorways.push(d);
            }
        }
        doorways.push(door);
    }

    Ok(RoomGraph { rooms, doorways, index })
}

pub fn load_rooms_file(path: &Path, map: &GridMap) -> Result<RoomGraph> {
    load_rooms(&RoomAnnotation::from_file(path)?, map)
}
