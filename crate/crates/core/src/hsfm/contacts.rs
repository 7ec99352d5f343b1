use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::geom::{wrap_angle, Vec2};
use crate::map::GridMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    /// Ahead.
    I,
    /// Left.
    II,
    /// Behind.
    III,
    /// Right.
    IV,
}

impl Quadrant {
    /// Quadrant of bearing `rel` (relative to the heading), with
    /// boundaries at odd multiples of pi/4 belonging to the counter-clockwise side.
    pub fn of(rel: f64) -> Quadrant {
        let r = wrap_angle(rel);
        if (-FRAC_PI_4..FRAC_PI_4).contains(&r) {
            Quadrant::I
        } else if (FRAC_PI_4..3.0 * FRAC_PI_4).contains(&r) {
            Quadrant::II
        } else if (-3.0 * FRAC_PI_4..-FRAC_PI_4).contains(&r) {
            Quadrant::IV
        } else {
            debug_assert!(!(-3.0 * FRAC_PI_4..3.0 * FRAC_PI_4).contains(&r));
            Quadrant::III
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Closest occupied cell of one quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactSample {
    pub quadrant: Quadrant,
    /// Center of the occupied cell.
    pub p_k: Vec2,
    /// Distance from the agent center to the cell, less half the cell diagonal.
    pub d: f64,
    /// Unit vector from the cell toward the agent.
    pub n: Vec2,
    /// `n` turned a quarter counter-clockwise.
    pub t: Vec2,
}

/// Precomputed ring of cell offsets sorted by distance, for repeated queries
/// on one map.
#[derive(Debug, Clone)]
pub struct ContactScanner {
    resolution: f64,
    range: f64,
    offsets: Vec<(i64, i64, f64)>,
}

impl ContactScanner {
    pub fn new(map: &GridMap, range: f64) -> Self {
        let w = map.resolution();
        let reach = (range / w).ceil() as i64 + 1;
        let limit = range / w + 1.0;
        let mut offsets = Vec::new();
        for dj in -reach..=reach {
            for di in -reach..=reach {
                let dist = ((di * di + dj * dj) as f64).sqrt();
                if dist <= limit {
                    offsets.push((di, dj, dist));
                }
            }
        }
        offsets.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.1, a.0).cmp(&(b.1, b.0))));
        ContactScanner {
            resolution: w,
            range,
            offsets,
        }
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    /// Closest occupied cell per quadrant within range, ordered I..IV.
    pub fn scan(&self, map: &GridMap, p: Vec2, theta: f64) -> Vec<ContactSample> {
        let w = self.resolution;
        let g = map.to_grid(p);
        let (ci, cj) = (g.x.floor() as i64, g.y.floor() as i64);
        // p lies within half a cell diagonal of its cell center
        let slack = std::f64::consts::FRAC_1_SQRT_2;
        let mut best: [Option<(f64, Vec2)>; 4] = [None; 4];
        for &(di, dj, od) in &self.offsets {
            let bound = best
                .iter()
                .map(|b| b.map_or(self.range, |(dist, _)| dist))
                .fold(0.0, f64::max);
            if (od - slack) * w > bound {
                break;
            }
            if map.occupied_signed(ci + di, cj + dj) != Some(true) {
                continue;
            }
            let center = map.cell_center(((ci + di) as usize, (cj + dj) as usize));
            let to = center - p;
            let dist = to.norm();
            if dist > self.range {
                continue;
            }
            let q = Quadrant::of(to.y.atan2(to.x) - theta).index();
            if best[q].is_none_or(|(bd, _)| dist < bd) {
                best[q] = Some((dist, center));
            }
        }
        let half_diag = slack * w;
        [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV]
            .into_iter()
            .filter_map(|q| {
                let (dist, p_k) = best[q.index()]?;
                let n = (p - p_k).normalized()?;
                Some(ContactSample {
                    quadrant: q,
                    p_k,
                    d: dist - half_diag,
                    n,
                    t: n.perp(),
                })
            })
            .collect()
    }
}

/// One-off contact query; see [`ContactScanner`] for repeated use.
pub fn border_contacts(map: &GridMap, p: Vec2, theta: f64, range: f64) -> Vec<ContactSample> {
    ContactScanner::new(map, range).scan(map, p, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn brute(map: &GridMap, p: Vec2, theta: f64, range: f64) -> Vec<(Quadrant, f64)> {
        let mut best: [Option<f64>; 4] = [None; 4];
        for c in map.cells() {
            if !map.is_occupied(c) {
                continue;
            }
            let to = map.cell_center(c) - p;
            let d = to.norm();
            if d > range {
                continue;
            }
            let q = Quadrant::of(to.y.atan2(to.x) - theta).index();
            if best[q].is_none_or(|b| d < b) {
                best[q] = Some(d);
            }
        }
        [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV]
            .into_iter()
            .filter_map(|q| best[q.index()].map(|d| (q, d)))
            .collect()
    }

    #[test]
    fn quadrant_boundaries() {
        assert_eq!(Quadrant::of(0.0), Quadrant::I);
        assert_eq!(Quadrant::of(FRAC_PI_4), Quadrant::II);
        assert_eq!(Quadrant::of(-FRAC_PI_4), Quadrant::I);
        assert_eq!(Quadrant::of(PI), Quadrant::III);
        assert_eq!(Quadrant::of(-PI / 2.0), Quadrant::IV);
    }

    #[test]
    fn empty_surroundings() {
        let map = GridMap::new(40, 40, 0.05, Vec2::ZERO).unwrap();
        assert!(border_contacts(&map, Vec2::new(1.0, 1.0), 0.0, 2.0).is_empty());
    }

    #[test]
    fn wall_cell_straight_ahead() {
        let mut map = GridMap::new(60, 60, 0.05, Vec2::ZERO).unwrap();
        map.set_occupied((30, 20), true);
        let cell = map.cell_center((30, 20));
        let p = cell - Vec2::new(0.5, 0.0);
        let s = border_contacts(&map, p, 0.0, 2.0);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].quadrant, Quadrant::I);
        assert!((s[0].d - (0.5 - 0.05 * std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!((s[0].n - Vec2::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((s[0].t - Vec2::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn corner_gives_two_quadrants() {
        let mut map = GridMap::new(60, 60, 0.05, Vec2::ZERO).unwrap();
        for k in 0..60 {
            map.set_occupied((40, k), true);
            map.set_occupied((k, 40), true);
        }
        // walls 3 cells ahead and 3 cells to the left, corner cell out of range
        let p = map.cell_center((37, 37));
        let s = border_contacts(&map, p, 0.0, 0.2);
        let qs: Vec<Quadrant> = s.iter().map(|c| c.quadrant).collect();
        assert_eq!(qs, vec![Quadrant::I, Quadrant::II]);
        assert!((s[0].n - Vec2::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((s[1].n - Vec2::new(0.0, -1.0)).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn scanner_matches_brute_force(
            bits in prop::collection::vec(prop::bool::weighted(0.08), 32 * 32),
            x in 0.1f64..3.1, y in 0.1f64..3.1, theta in -3.2f64..3.2, range in 0.2f64..2.0,
        ) {
            let mut map = GridMap::new(32, 32, 0.1, Vec2::ZERO).unwrap();
            for (k, &b) in bits.iter().enumerate() {
                map.set_occupied(map.cell_of_index(k), b);
            }
            let p = Vec2::new(x, y);
            let got: Vec<(Quadrant, f64)> = border_contacts(&map, p, theta, range)
                .iter()
                .map(|s| (s.quadrant, s.d + 0.1 * std::f64::consts::FRAC_1_SQRT_2))
                .collect();
            let want = brute(&map, p, theta, range);
            prop_assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(&want) {
                prop_assert_eq!(g.0, w.0);
                prop_assert!((g.1 - w.1).abs() < 1e-12);
            }
        }
    }
}
