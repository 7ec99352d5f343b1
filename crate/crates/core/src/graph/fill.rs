use crate::geom::Vec2;
use crate::map::{DistanceField, GridMap};
use crate::rooms::Room;
use crate::sampling::hammersley;

use super::GraphConfig;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FillResult {
    /// Hammersley points considered (`ceil(density * area)`).
    pub candidates: usize,
    pub nodes: Vec<Vec2>,
}

/// Fills the room with Hammersley points over its bounding box, keeping free
/// points with enough clearance that are at least `fill_spacing` away from
/// `existing` nodes and from each other.
pub fn fill_random(
    room: &Room,
    map: &GridMap,
    df: &DistanceField,
    cfg: &GraphConfig,
    existing: &[Vec2],
    seed_offset: u64,
) -> FillResult {
    let n = (cfg.fill_density * room.polygon.area()).ceil().max(0.0) as usize;
    let (lo, hi) = room.polygon.bounds();
    let span = hi - lo;
    let mut nodes: Vec<Vec2> = Vec::new();
    let spacing_sq = cfg.fill_spacing * cfg.fill_spacing;
    for u in hammersley(n, seed_offset) {
        let p = lo + Vec2::new(u[0] * span.x, u[1] * span.y);
        if !(map.is_free_at(p) && room.polygon.contains(p)) {
            continue;
        }
        if df.at(map, p).is_none_or(|d| d < cfg.min_clearance) {
            continue;
        }
        let crowded = existing
            .iter()
            .chain(nodes.iter())
            .any(|q| (*q - p).norm_sq() < spacing_sq);
        if !crowded {
            nodes.push(p);
        }
    }
    FillResult { candidates: n, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::DistanceMetric;
    use crate::rooms::{load_rooms, RoomAnnotation, RoomRecord};

    fn setup(map: &GridMap) -> (crate::rooms::RoomGraph, DistanceField) {
        let (lo, hi) = map.bounds();
        let ann = RoomAnnotation {
            rooms: vec![RoomRecord {
                id: "r".into(),
                polygon: vec![[lo.x, lo.y], [hi.x, lo.y], [hi.x, hi.y], [lo.x, hi.y]],
            }],
            doorways: vec![],
        };
        (
            load_rooms(&ann, map).unwrap(),
            DistanceField::compute(map, DistanceMetric::Euclidean),
        )
    }

    fn open_box() -> GridMap {
        let mut map = GridMap::new(40, 40, 0.1, Vec2::ZERO).unwrap();
        for k in 0..40 {
            for c in [(k, 0), (k, 39), (0, k), (39, k)] {
                map.set_occupied(c, true);
            }
        }
        map
    }

    #[test]
    fn respects_spacing_and_clearance() {
        let map = open_box();
        let (rg, df) = setup(&map);
        let cfg = GraphConfig::default();
        let res = fill_random(&rg.rooms[0], &map, &df, &cfg, &[Vec2::new(2.0, 2.0)], 0);
        assert_eq!(res.candidates, (cfg.fill_density * 16.0f64).ceil() as usize);
        assert!(!res.nodes.is_empty());
        for (a, p) in res.nodes.iter().enumerate() {
            assert!(p.distance(Vec2::new(2.0, 2.0)) >= cfg.fill_spacing);
            assert!(df.at(&map, *p).unwrap() >= cfg.min_clearance);
            for q in &res.nodes[a + 1..] {
                assert!(p.distance(*q) >= cfg.fill_spacing);
            }
        }
    }

    #[test]
    fn minimal_density_considers_one_candidate() {
        let map = open_box();
        let (rg, df) = setup(&map);
        let cfg = GraphConfig {
            fill_density: 0.01,
            ..GraphConfig::default()
        };
        let res = fill_random(&rg.rooms[0], &map, &df, &cfg, &[], 0);
        assert_eq!(res.candidates, 1);
        assert!(res.nodes.len() <= 1);
    }

    #[test]
    fn fully_occupied_room_is_empty() {
        let mut map = GridMap::new(10, 10, 0.1, Vec2::ZERO).unwrap();
        for c in map.cells().collect::<Vec<_>>() {
            map.set_occupied(c, true);
        }
        let (rg, df) = setup(&map);
        let res = fill_random(&rg.rooms[0], &map, &df, &GraphConfig::default(), &[], 0);
        assert!(res.nodes.is_empty());
    }
}
