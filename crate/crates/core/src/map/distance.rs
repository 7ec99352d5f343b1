use serde::{Deserialize, Serialize};

use super::{Cell, GridMap};
use crate::geom::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMetric {
    /// Exact Euclidean distance between cell centers.
    #[default]
    Euclidean,
    /// 3-4 chamfer approximation, scaled so an axial step costs one cell.
    Chamfer34,
}

const NO_FEATURE: u32 = u32::MAX;

/// Per-cell distance (meters) to the nearest occupied cell center, plus that cell.
///
/// Maps without any occupied cell yield `f64::INFINITY` everywhere and no features.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    width: usize,
    height: usize,
    metric: DistanceMetric,
    dist: Vec<f64>,
    feature: Vec<u32>,
}

impl DistanceField {
    pub fn compute(map: &GridMap, metric: DistanceMetric) -> Self {
        let (dist_cells, feature) = match metric {
            DistanceMetric::Euclidean => euclidean(map),
            DistanceMetric::Chamfer34 => chamfer34(map),
        };
        let w = map.resolution();
        DistanceField {
            width: map.width(),
            height: map.height(),
            metric,
            dist: dist_cells.into_iter().map(|d| d * w).collect(),
            feature,
        }
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn get(&self, (i, j): Cell) -> f64 {
        self.dist[j * self.width + i]
    }

    /// Nearest occupied cell, `None` if the map has no obstacles.
    pub fn nearest(&self, (i, j): Cell) -> Option<Cell> {
        let f = self.feature[j * self.width + i];
        (f != NO_FEATURE).then(|| (f as usize % self.width, f as usize / self.width))
    }

    /// Distance at the cell containing `p`; `None` outside the map.
    pub fn at(&self, map: &GridMap, p: Vec2) -> Option<f64> {
        map.cell_of(p).map(|c| self.get(c))
    }

    /// Unit vector from `p` toward the center of the nearest occupied cell.
    pub fn obstacle_direction(&self, map: &GridMap, p: Vec2) -> Option<Vec2> {
        let c = map.cell_of(p)?;
        let f = self.nearest(c)?;
        (map.cell_center(f) - p).normalized()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Two-pass exact transform (lower envelope of parabolas) tracking the minimizing cell.
fn euclidean(map: &GridMap) -> (Vec<f64>, Vec<u32>) {
    let (w, h) = (map.width(), map.height());
    let occ = map.occupancy();
    let inf = f64::INFINITY;

    // column pass: distance to nearest occupied cell in the same column
    let mut col_d = vec![inf; w * h];
    let mut col_row = vec![usize::MAX; w * h];
    for i in 0..w {
        let mut last: Option<usize> = None;
        for j in 0..h {
            if occ[j * w + i] {
                last = Some(j);
            }
            if let Some(l) = last {
                col_d[j * w + i] = (j - l) as f64;
                col_row[j * w + i] = l;
            }
        }
        last = None;
        for j in (0..h).rev() {
            if occ[j * w + i] {
                last = Some(j);
            }
            if let Some(l) = last {
                let d = (l - j) as f64;
                if d < col_d[j * w + i] {
                    col_d[j * w + i] = d;
                    col_row[j * w + i] = l;
                }
            }
        }
    }

    let mut dist = vec![inf; w * h];
    let mut feature = vec![NO_FEATURE; w * h];
    let mut v = vec![0usize; w];
    let mut z = vec![0.0f64; w + 1];
    for j in 0..h {
        let f = |q: usize| col_d[j * w + q] * col_d[j * w + q];
        // lower envelope over the columns that see an obstacle
        let mut k: isize = -1;
        for q in 0..w {
            if !col_d[j * w + q].is_finite() {
                continue;
            }
            let fq = f(q);
            loop {
                if k < 0 {
                    k = 0;
                    v[0] = q;
                    z[0] = f64::NEG_INFINITY;
                    z[1] = f64::INFINITY;
                    break;
                }
                let p = v[k as usize];
                let s = ((fq + (q * q) as f64) - (f(p) + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
                if s <= z[k as usize] {
                    k -= 1;
                } else {
                    k += 1;
                    v[k as usize] = q;
                    z[k as usize] = s;
                    z[k as usize + 1] = f64::INFINITY;
                    break;
                }
            }
        }
        if k < 0 {
            continue;
        }
        let mut r = 0usize;
        for x in 0..w {
            while z[r + 1] < x as f64 {
                r += 1;
            }
            let q = v[r];
            let dx = x as f64 - q as f64;
            dist[j * w + x] = (dx * dx + f(q)).sqrt();
            feature[j * w + x] = (col_row[j * w + q] * w + q) as u32;
        }
    }
    (dist, feature)
}

/// Classic forward/backward 3-4 chamfer sweep.
fn chamfer34(map: &GridMap) -> (Vec<f64>, Vec<u32>) {
    let (w, h) = (map.width(), map.height());
    let occ = map.occupancy();
    let big = u32::MAX / 2;
    let mut d = vec![big; w * h];
    let mut feature = vec![NO_FEATURE; w * h];
    for idx in 0..w * h {
        if occ[idx] {
            d[idx] = 0;
            feature[idx] = idx as u32;
        }
    }
    let forward: [(i64, i64, u32); 4] = [(-1, 0, 3), (-1, -1, 4), (0, -1, 3), (1, -1, 4)];
    let backward: [(i64, i64, u32); 4] = [(1, 0, 3), (1, 1, 4), (0, 1, 3), (-1, 1, 4)];
    let mut relax = |i: usize, j: usize, mask: &[(i64, i64, u32); 4], d: &mut Vec<u32>| {
        let idx = j * w + i;
        for &(di, dj, c) in mask {
            let (ni, nj) = (i as i64 + di, j as i64 + dj);
            if ni < 0 || nj < 0 || ni >= w as i64 || nj >= h as i64 {
                continue;
            }
            let nidx = nj as usize * w + ni as usize;
            if d[nidx] + c < d[idx] {
                d[idx] = d[nidx] + c;
                feature[idx] = feature[nidx];
            }
        }
    };
    for j in 0..h {
        for i in 0..w {
            relax(i, j, &forward, &mut d);
        }
    }
    for j in (0..h).rev() {
        for i in (0..w).rev() {
            relax(i, j, &backward, &mut d);
        }
    }
    let dist = d
        .into_iter()
        .map(|v| if v >= big { f64::INFINITY } else { v as f64 / 3.0 })
        .collect();
    (dist, feature)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(map: &GridMap) -> Vec<f64> {
        let occ: Vec<Cell> = map.cells().filter(|&c| map.is_occupied(c)).collect();
        map.cells()
            .map(|c| {
                occ.iter()
                    .map(|o| map.cell_center(c).distance(map.cell_center(*o)))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    #[test]
    fn unit_distance_next_to_obstacle() {
        let map = GridMap::from_ascii(&["...", ".#.", "..."], 1.0, Vec2::ZERO).unwrap();
        let df = DistanceField::compute(&map, DistanceMetric::Euclidean);
        assert_eq!(df.get((1, 1)), 0.0);
        assert_eq!(df.get((0, 1)), 1.0);
        assert_eq!(df.nearest((0, 1)), Some((1, 1)));
    }

    #[test]
    fn empty_map_is_infinite() {
        let map = GridMap::new(4, 4, 0.05, Vec2::ZERO).unwrap();
        for metric in [DistanceMetric::Euclidean, DistanceMetric::Chamfer34] {
            let df = DistanceField::compute(&map, metric);
            assert!(map.cells().all(|c| df.get(c) == f64::INFINITY));
            assert_eq!(df.nearest((0, 0)), None);
        }
    }

    #[test]
    fn left_column_wall() {
        let rows = ["#....", "#....", "#....", "#....", "#...."];
        let map = GridMap::from_ascii(&rows, 0.1, Vec2::ZERO).unwrap();
        let df = DistanceField::compute(&map, DistanceMetric::Euclidean);
        let oracle = brute(&map);
        for c in map.cells() {
            assert!((df.get(c) - oracle[map.index(c)]).abs() < 1e-12);
            assert!((df.get(c) - c.0 as f64 * 0.1).abs() < 1e-12);
        }
    }

    fn arb_map() -> impl Strategy<Value = GridMap> {
        (1usize..24, 1usize..24).prop_flat_map(|(w, h)| {
            proptest::collection::vec(proptest::bool::weighted(0.15), w * h).prop_map(move |bits| {
                let mut m = GridMap::new(w, h, 0.05, Vec2::ZERO).unwrap();
                for (k, b) in bits.into_iter().enumerate() {
                    let c = m.cell_of_index(k);
                    m.set_occupied(c, b);
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn euclidean_matches_brute_force(map in arb_map()) {
            let df = DistanceField::compute(&map, DistanceMetric::Euclidean);
            let oracle = brute(&map);
            for c in map.cells() {
                let want = oracle[map.index(c)];
                let got = df.get(c);
                if want.is_infinite() {
                    prop_assert!(got.is_infinite());
                } else {
                    prop_assert!((got - want).abs() <= 1e-12 * want.max(1.0));
                    let f = df.nearest(c).unwrap();
                    prop_assert!(map.is_occupied(f));
                    prop_assert!((map.cell_center(c).distance(map.cell_center(f)) - got).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn chamfer_within_bound(map in arb_map()) {
            let df = DistanceField::compute(&map, DistanceMetric::Chamfer34);
            let oracle = brute(&map);
            for c in map.cells() {
                let want = oracle[map.index(c)];
                let got = df.get(c);
                if want.is_infinite() {
                    prop_assert!(got.is_infinite());
                } else {
                    // 3-4 chamfer lies within [2*sqrt(2)/3, sqrt(10)/3] of Euclidean
                    prop_assert!(got >= want * (8.0f64.sqrt() / 3.0) - 1e-12);
                    prop_assert!(got <= want * (10.0f64.sqrt() / 3.0) + 1e-12);
                }
            }
        }

        #[test]
        fn neighbor_lipschitz(map in arb_map()) {
            let df = DistanceField::compute(&map, DistanceMetric::Euclidean);
            let w = map.resolution();
            for (i, j) in map.cells() {
                if i + 1 < map.width() {
                    let (a, b) = (df.get((i, j)), df.get((i + 1, j)));
                    if a.is_finite() {
                        prop_assert!((a - b).abs() <= w + 1e-12);
                    }
                }
            }
        }
    }
}
