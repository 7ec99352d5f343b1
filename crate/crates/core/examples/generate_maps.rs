//! Regenerates the bundled maps under `maps/`.
//!
//! ```text
//! cargo run -p squadsim-core --example generate_maps [-- <out-dir>]
//! ```

use std::path::{Path, PathBuf};

use squadsim::{DoorwayRecord, GridMap, RoomAnnotation, RoomRecord, Vec2};

struct Layout {
    map: GridMap,
    rooms: Vec<RoomRecord>,
    doorways: Vec<DoorwayRecord>,
}

impl Layout {
    fn new(width: usize, height: usize, resolution: f64) -> Self {
        Layout {
            map: GridMap::new(width, height, resolution, Vec2::ZERO).unwrap(),
            rooms: Vec::new(),
            doorways: Vec::new(),
        }
    }

    fn fill(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, occupied: bool) {
        let cells: Vec<_> = self
            .map
            .cells()
            .filter(|&c| {
                let p = self.map.cell_center(c);
                p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1
            })
            .collect();
        for c in cells {
            self.map.set_occupied(c, occupied);
        }
    }

    /// Wall of thickness `t` centered on the segment from `(x0, y0)` to `(x1, y1)` (axis-aligned).
    fn wall(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, t: f64) {
        let h = t / 2.0;
        self.fill(x0.min(x1) - h, y0.min(y1) - h, x0.max(x1) + h, y0.max(y1) + h, true);
    }

    fn room(&mut self, id: &str, x0: f64, y0: f64, x1: f64, y1: f64) {
        self.rooms.push(RoomRecord {
            id: id.into(),
            polygon: vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
        });
    }

    /// Opens a gap in a horizontal wall at height `y` and records the doorway.
    fn door(&mut self, id: &str, a: &str, b: &str, x0: f64, x1: f64, y: f64, t: f64) {
        let w = self.map.resolution();
        self.fill(x0, y - t, x1, y + t, false);
        self.doorways.push(DoorwayRecord {
            id: id.into(),
            room_a: a.into(),
            room_b: b.into(),
            a: [round(x0 + w), y],
            b: [round(x1 - w), y],
        });
    }

    fn write(self, dir: &Path, name: &str, scenario: &str) -> std::io::Result<()> {
        std::fs::write(dir.join(format!("{name}.pgm")), self.map.to_pgm())?;
        let mut meta = self.map.meta(0.65);
        meta.image = Some(PathBuf::from(format!("{name}.pgm")));
        std::fs::write(dir.join(format!("{name}.map.toml")), toml::to_string(&meta).unwrap())?;
        let ann = RoomAnnotation {
            rooms: self.rooms,
            doorways: self.doorways,
        };
        std::fs::write(dir.join(format!("{name}.rooms.toml")), toml::to_string(&ann).unwrap())?;
        std::fs::write(dir.join(format!("{name}.scenario.toml")), scenario)
    }
}

fn round(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

/// 12.6 x 11 m at 10 cm: a hall with two single-entry rooms behind it.
fn flat() -> Layout {
    let t = 0.2;
    let mut l = Layout::new(128, 112, 0.1);
    let (x0, x1, y0, y1, ym, xm) = (0.1, 12.7, 0.1, 11.1, 4.1, 6.4);
    l.wall(x0, y0, x1, y0, t);
    l.wall(x0, y1, x1, y1, t);
    l.wall(x0, y0, x0, y1, t);
    l.wall(x1, y0, x1, y1, t);
    l.wall(x0, ym, x1, ym, t);
    l.wall(xm, ym, xm, y1, t);
    l.room("hall", x0, y0, x1, ym);
    l.room("a", x0, ym, xm, y1);
    l.room("b", xm, ym, x1, y1);
    l.door("d_a", "hall", "a", 2.0, 3.0, ym, t);
    l.door("d_b", "hall", "b", 8.5, 9.5, ym, t);
    l
}

/// Straight 15.2 x 2 m corridor at 10 cm.
fn corridor() -> Layout {
    let t = 0.2;
    let mut l = Layout::new(154, 24, 0.1);
    let (x0, x1, y0, y1) = (0.1, 15.3, 0.1, 2.3);
    l.wall(x0, y0, x1, y0, t);
    l.wall(x0, y1, x1, y1, t);
    l.wall(x0, y0, x0, y1, t);
    l.wall(x1, y0, x1, y1, t);
    l.room("corridor", x0, y0, x1, y1);
    l
}

/// 24 x 13 m office floor at 10 cm: a central corridor with four rooms on each side.
fn office() -> Layout {
    let t = 0.2;
    let mut l = Layout::new(240, 130, 0.1);
    let (x0, x1, y0, y1) = (0.1, 23.9, 0.1, 12.9);
    let (ys, yn) = (5.5, 7.5);
    let xs = [x0, 6.0, 12.0, 18.0, x1];
    l.wall(x0, y0, x1, y0, t);
    l.wall(x0, y1, x1, y1, t);
    l.wall(x0, y0, x0, y1, t);
    l.wall(x1, y0, x1, y1, t);
    l.wall(x0, ys, x1, ys, t);
    l.wall(x0, yn, x1, yn, t);
    for &x in &xs[1..4] {
        l.wall(x, y0, x, ys, t);
        l.wall(x, yn, x, y1, t);
    }
    l.room("corridor", x0, ys, x1, yn);
    for k in 0..4 {
        let (a, b) = (xs[k], xs[k + 1]);
        let s = format!("s{}", k + 1);
        let n = format!("n{}", k + 1);
        l.room(&s, a, y0, b, ys);
        l.room(&n, a, yn, b, y1);
        l.door(&format!("d_{s}"), "corridor", &s, a + 1.0, a + 2.0, ys, t);
        l.door(&format!("d_{n}"), "corridor", &n, a + 3.0, a + 4.0, yn, t);
    }
    l
}

const FLAT_SCENARIO: &str = r#"map = "flat.map.toml"
rooms = "flat.rooms.toml"
dt = 0.06
dt_report = 0.06
seed = 7

[[squads]]
start = [2.6, 2.1]
heading = 0.0
goal = [11.6, 1.2]
visit = ["a"]
tactic = "free"
agents = 3
spacing = 0.6
"#;

const CORRIDOR_SCENARIO: &str = r#"map = "corridor.map.toml"
rooms = "corridor.rooms.toml"
dt = 0.06
dt_report = 0.06
seed = 7

[[squads]]
start = [2.2, 1.2]
heading = 0.0
goal = [14.4, 1.2]
tactic = "free"
agents = 3
spacing = 0.6
"#;

const OFFICE_SCENARIO: &str = r#"map = "office.map.toml"
rooms = "office.rooms.toml"
dt = 0.06
dt_report = 0.24
seed = 7

[[squads]]
start = [1.6, 6.5]
heading = 0.0
goal = [22.5, 6.5]
visit = ["n1", "n2", "n3", "n4", "s4"]
tactic = "wall_lhr"
agents = 3
spacing = 0.6
"#;

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../maps"));
    std::fs::create_dir_all(&dir)?;
    flat().write(&dir, "flat", FLAT_SCENARIO)?;
    corridor().write(&dir, "corridor", CORRIDOR_SCENARIO)?;
    office().write(&dir, "office", OFFICE_SCENARIO)?;
    println!("wrote maps to {}", dir.display());
    Ok(())
}
