#![allow(dead_code)]

use std::path::{Path, PathBuf};

use squadsim::{DoorwayRecord, GridMap, RoomAnnotation, RoomRecord, Vec2};

pub fn maps_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../maps")
}

/// Occupancy sketch at 10 cm with rectangle walls and room annotations.
pub struct Sketch {
    pub map: GridMap,
    pub ann: RoomAnnotation,
}

impl Sketch {
    pub fn new(width_m: f64, height_m: f64) -> Self {
        let map = GridMap::new(
            (width_m / 0.1).round() as usize,
            (height_m / 0.1).round() as usize,
            0.1,
            Vec2::ZERO,
        )
        .unwrap();
        Sketch {
            map,
            ann: RoomAnnotation {
                rooms: Vec::new(),
                doorways: Vec::new(),
            },
        }
    }

    pub fn set(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, occupied: bool) -> &mut Self {
        for c in self.map.cells().collect::<Vec<_>>() {
            let p = self.map.cell_center(c);
            if p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1 {
                self.map.set_occupied(c, occupied);
            }
        }
        self
    }

    /// 20 cm thick walls around the rectangle, centered on its outline.
    pub fn walls(&mut self, x0: f64, y0: f64, x1: f64, y1: f64) -> &mut Self {
        self.set(x0 - 0.1, y0 - 0.1, x1 + 0.1, y0 + 0.1, true)
            .set(x0 - 0.1, y1 - 0.1, x1 + 0.1, y1 + 0.1, true)
            .set(x0 - 0.1, y0 - 0.1, x0 + 0.1, y1 + 0.1, true)
            .set(x1 - 0.1, y0 - 0.1, x1 + 0.1, y1 + 0.1, true)
    }

    pub fn room(&mut self, id: &str, x0: f64, y0: f64, x1: f64, y1: f64) -> &mut Self {
        self.ann.rooms.push(RoomRecord {
            id: id.into(),
            polygon: vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
        });
        self
    }

    /// Opening in a horizontal wall at height `y`, recorded as a doorway.
    pub fn door(&mut self, id: &str, a: &str, b: &str, x0: f64, x1: f64, y: f64) -> &mut Self {
        self.set(x0, y - 0.2, x1, y + 0.2, false);
        self.ann.doorways.push(DoorwayRecord {
            id: id.into(),
            room_a: a.into(),
            room_b: b.into(),
            a: [x0 + 0.1, y],
            b: [x1 - 0.1, y],
        });
        self
    }
}

/// 6 x 5 m room above a 2 m hall, joined by one 1 m door.
pub fn single_entry() -> Sketch {
    let mut s = Sketch::new(6.6, 7.6);
    s.walls(0.2, 0.2, 6.2, 7.3)
        .set(0.1, 2.1, 6.3, 2.3, true)
        .room("hall", 0.2, 0.2, 6.2, 2.2)
        .room("room", 0.2, 2.2, 6.2, 7.3)
        .door("door", "hall", "room", 2.0, 3.0, 2.2);
    s
}

/// Scenario text around the given squad table; map and rooms paths are placeholders.
pub fn scenario_toml(squad: &str) -> String {
    format!("map = \"unused.map.toml\"\nrooms = \"unused.rooms.toml\"\ndt = 0.06\nseed = 3\n\n[[squads]]\n{squad}\n")
}
