use super::GridMap;
use crate::geom::Vec2;

impl GridMap {
    /// Visits every cell whose closed square touches the segment `a`-`b` (supercover).
    ///
    /// Endpoints are put in a canonical order first, so the visited set and the
    /// visiting order do not depend on the argument order. Returns early with
    /// `false` when `visit` does; cells outside the map are skipped.
    pub fn for_each_touched_cell(&self, a: Vec2, b: Vec2, mut visit: impl FnMut(i64, i64) -> bool) -> bool {
        let (mut ga, mut gb) = (self.to_grid(a), self.to_grid(b));
        if (gb.x, gb.y) < (ga.x, ga.y) {
            std::mem::swap(&mut ga, &mut gb);
        }
        let (xmin, xmax) = (ga.x, gb.x);
        let first = xmin.ceil() as i64 - 1;
        let last = xmax.floor() as i64;
        for i in first..=last {
            let x0 = xmin.max(i as f64);
            let x1 = xmax.min((i + 1) as f64);
            if x0 > x1 {
                continue;
            }
            let (ya, yb) = if xmax == xmin {
                (ga.y, gb.y)
            } else {
                let y_at = |x: f64| {
                    if x == ga.x {
                        ga.y
                    } else if x == gb.x {
                        gb.y
                    } else {
                        ga.y + (x - ga.x) * (gb.y - ga.y) / (gb.x - ga.x)
                    }
                };
                (y_at(x0), y_at(x1))
            };
            let (ylo, yhi) = if ya <= yb { (ya, yb) } else { (yb, ya) };
            for j in (ylo.ceil() as i64 - 1)..=(yhi.floor() as i64) {
                if ((j + 1) as f64) < ylo || (j as f64) > yhi {
                    continue;
                }
                if i < 0 || j < 0 || i >= self.width() as i64 || j >= self.height() as i64 {
                    continue;
                }
                if !visit(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff no occupied cell touches the segment; endpoints outside the map are blocked.
    pub fn line_of_sight(&self, a: Vec2, b: Vec2) -> bool {
        if self.cell_of(a).is_none() || self.cell_of(b).is_none() {
            return false;
        }
        self.for_each_touched_cell(a, b, |i, j| !self.is_occupied((i as usize, j as usize)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exact closed square / segment overlap on small dyadic inputs (separating axes).
    fn touches(a: Vec2, b: Vec2, i: i64, j: i64) -> bool {
        let (lo, hi) = (Vec2::new(i as f64, j as f64), Vec2::new(i as f64 + 1.0, j as f64 + 1.0));
        if a.x.max(b.x) < lo.x || a.x.min(b.x) > hi.x || a.y.max(b.y) < lo.y || a.y.min(b.y) > hi.y {
            return false;
        }
        let d = b - a;
        let corners = [lo, Vec2::new(hi.x, lo.y), hi, Vec2::new(lo.x, hi.y)];
        let s: Vec<f64> = corners.iter().map(|&c| d.cross(c - a)).collect();
        !(s.iter().all(|&v| v > 0.0) || s.iter().all(|&v| v < 0.0))
    }

    fn oracle_cells(map: &GridMap, a: Vec2, b: Vec2) -> Vec<(i64, i64)> {
        let (ga, gb) = (map.to_grid(a), map.to_grid(b));
        let mut out = vec![];
        for j in 0..map.height() as i64 {
            for i in 0..map.width() as i64 {
                if touches(ga, gb, i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn visited(map: &GridMap, a: Vec2, b: Vec2) -> Vec<(i64, i64)> {
        let mut v = vec![];
        map.for_each_touched_cell(a, b, |i, j| {
            v.push((i, j));
            true
        });
        v.sort_by_key(|&(i, j)| (j, i));
        v
    }

    #[test]
    fn degenerate_segment_is_visible() {
        let map = GridMap::from_ascii(&["....", "....", "...."], 1.0, Vec2::ZERO).unwrap();
        let p = Vec2::new(1.5, 1.5);
        assert!(map.line_of_sight(p, p));
    }

    #[test]
    fn wall_column_blocks() {
        let map = GridMap::from_ascii(&["..#..", "..#..", "..#.."], 1.0, Vec2::ZERO).unwrap();
        assert!(!map.line_of_sight(Vec2::new(0.5, 1.5), Vec2::new(4.5, 1.5)));
        assert!(!map.line_of_sight(Vec2::new(0.5, 0.5), Vec2::new(4.5, 2.5)));
    }

    #[test]
    fn grazing_a_corner_is_blocked() {
        // occupied cell (1,0) spans [1,2]x[0,1]; the line x + y = 3 touches only its corner (2,1)
        let map = GridMap::from_ascii(&["...", "...", ".#."], 1.0, Vec2::ZERO).unwrap();
        let (a, b) = (Vec2::new(0.5, 2.5), Vec2::new(2.5, 0.5));
        assert!(oracle_cells(&map, a, b).contains(&(1, 0)));
        assert!(!map.line_of_sight(a, b));
        assert!(map.line_of_sight(Vec2::new(0.5, 2.5), Vec2::new(2.5, 1.5)));
    }

    #[test]
    fn endpoint_in_obstacle_is_blocked() {
        let map = GridMap::from_ascii(&["...", ".#.", "..."], 1.0, Vec2::ZERO).unwrap();
        assert!(!map.line_of_sight(Vec2::new(1.5, 1.5), Vec2::new(0.5, 0.5)));
        assert!(!map.line_of_sight(Vec2::new(0.5, 0.5), Vec2::new(5.0, 0.5)));
    }

    #[test]
    fn touched_cells_match_exact_enumeration_on_grid_aligned_cases() {
        let map = GridMap::new(6, 6, 1.0, Vec2::ZERO).unwrap();
        let cases = [
            (Vec2::new(0.5, 0.5), Vec2::new(4.5, 4.5)),
            (Vec2::new(1.0, 1.0), Vec2::new(5.0, 3.0)),
            (Vec2::new(0.5, 2.0), Vec2::new(5.5, 2.0)),
            (Vec2::new(3.0, 0.5), Vec2::new(3.0, 5.5)),
            (Vec2::new(2.0, 2.0), Vec2::new(2.0, 2.0)),
            (Vec2::new(0.25, 5.75), Vec2::new(5.75, 0.25)),
        ];
        for (a, b) in cases {
            assert_eq!(visited(&map, a, b), oracle_cells(&map, a, b), "{a:?} {b:?}");
        }
    }

    proptest! {
        #[test]
        fn dyadic_segments_match_oracle(ax in 0u32..48, ay in 0u32..48, bx in 0u32..48, by in 0u32..48) {
            // quarter-cell lattice keeps all arithmetic exact
            let map = GridMap::new(12, 12, 1.0, Vec2::ZERO).unwrap();
            let a = Vec2::new(ax as f64 / 4.0, ay as f64 / 4.0);
            let b = Vec2::new(bx as f64 / 4.0, by as f64 / 4.0);
            let got = visited(&map, a, b);
            let want = oracle_cells(&map, a, b);
            // the oracle is exact; the traversal may only add cells when a
            // rounded intercept lands on a grid line
            for c in &want {
                prop_assert!(got.contains(c), "missing {:?}", c);
            }
        }

        #[test]
        fn line_of_sight_is_symmetric(bits in proptest::collection::vec(proptest::bool::weighted(0.2), 100),
                                      ax in 0.0f64..1.0, ay in 0.0f64..1.0, bx in 0.0f64..1.0, by in 0.0f64..1.0) {
            let mut map = GridMap::new(10, 10, 0.1, Vec2::ZERO).unwrap();
            for (k, b) in bits.into_iter().enumerate() {
                let c = map.cell_of_index(k);
                map.set_occupied(c, b);
            }
            let (a, b) = (Vec2::new(ax, ay), Vec2::new(bx, by));
            prop_assert_eq!(map.line_of_sight(a, b), map.line_of_sight(b, a));
        }
    }
}
