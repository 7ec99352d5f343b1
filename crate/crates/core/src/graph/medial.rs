use crate::map::{Cell, DistanceField, GridMap};
use crate::rooms::Room;

/// Thin skeleton of a room's free space: cells where nearest-obstacle regions meet.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MedialAxis {
    pub cells: Vec<Cell>,
    /// 8-adjacent skeleton cell pairs, as indices into `cells` (`a < b`).
    pub edges: Vec<(usize, usize)>,
}

impl MedialAxis {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search_by_key(&(c.1, c.0), |&(i, j)| (j, i)).is_ok()
    }
}

// Vectors to the two feature cells must diverge by more than 45 degrees.
const MIN_SPLIT_COS: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Voronoi-border skeleton of the room from the distance field's feature transform.
///
/// For every 4-adjacent pair `(p, q)` whose nearest occupied cells `f_p`, `f_q`
/// are neither adjacent nor seen in nearly the same direction, the cell
/// closer to the bisector of `f_p` and `f_q` is marked (both on a tie). The
/// marked set is then thinned to a one-cell-wide skeleton.
pub fn build_medial_axis(room: &Room, map: &GridMap, df: &DistanceField, min_separation: f64) -> MedialAxis {
    let min_sep_sq = (min_separation / map.resolution()).powi(2).max(2.0);
    let (w, h) = (map.width(), map.height());
    let mut in_room = vec![false; w * h];
    for &c in &room.cells {
        in_room[map.index(c)] = true;
    }
    let mut marked = vec![false; w * h];

    let feature = |c: Cell| -> Option<(f64, f64)> { df.nearest(c).map(|(i, j)| (i as f64, j as f64)) };
    for &p in &room.cells {
        let neighbors = [
            (p.0 as i64 + 1, p.1 as i64),
            (p.0 as i64 - 1, p.1 as i64),
            (p.0 as i64, p.1 as i64 + 1),
            (p.0 as i64, p.1 as i64 - 1),
        ];
        for (qi, qj) in neighbors {
            if qi < 0 || qj < 0 || qi >= w as i64 || qj >= h as i64 {
                continue;
            }
            let q = (qi as usize, qj as usize);
            // each room-room pair is handled once, from its lower-indexed side
            if in_room[map.index(q)] && map.index(q) < map.index(p) {
                continue;
            }
            let (Some(fp), Some(fq)) = (feature(p), feature(q)) else {
                continue;
            };
            let sep = (fp.0 - fq.0).powi(2) + (fp.1 - fq.1).powi(2);
            if sep <= min_sep_sq {
                continue;
            }
            let m = ((p.0 + q.0) as f64 / 2.0, (p.1 + q.1) as f64 / 2.0);
            let up = (fp.0 - m.0, fp.1 - m.1);
            let uq = (fq.0 - m.0, fq.1 - m.1);
            let cos = (up.0 * uq.0 + up.1 * uq.1) / ((up.0.hypot(up.1)) * (uq.0.hypot(uq.1)));
            if cos >= MIN_SPLIT_COS {
                continue;
            }
            let g = up.0 * up.0 + up.1 * up.1 - (uq.0 * uq.0 + uq.1 * uq.1);
            if g >= 0.0 && in_room[map.index(p)] {
                marked[map.index(p)] = true;
            }
            if g <= 0.0 && in_room[map.index(q)] {
                marked[map.index(q)] = true;
            }
        }
    }

    thin(&mut marked, w, h);

    let mut cells: Vec<Cell> = map.cells().filter(|&c| marked[map.index(c)]).collect();
    cells.sort_by_key(|&(i, j)| (j, i));
    let mut edges = Vec::new();
    for (a, &(i, j)) in cells.iter().enumerate() {
        for (di, dj) in [(1i64, 0i64), (-1, 1), (0, 1), (1, 1)] {
            let (ni, nj) = (i as i64 + di, j as i64 + dj);
            if ni < 0 || nj < 0 || ni >= w as i64 || nj >= h as i64 {
                continue;
            }
            let n = (ni as usize, nj as usize);
            if marked[map.index(n)] {
                let b = cells
                    .binary_search_by_key(&(n.1, n.0), |&(x, y)| (y, x))
                    .expect("marked cell listed");
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    edges.sort_unstable();
    MedialAxis { cells, edges }
}

/// Zhang-Suen thinning restricted to the marked set.
fn thin(marked: &mut [bool], w: usize, h: usize) {
    let at = |m: &[bool], i: i64, j: i64| -> bool {
        i >= 0 && j >= 0 && i < w as i64 && j < h as i64 && m[j as usize * w + i as usize]
    };
    loop {
        let mut changed = false;
        for pass in 0..2 {
            let mut remove = Vec::new();
            for j in 0..h as i64 {
                for i in 0..w as i64 {
                    if !at(marked, i, j) {
                        continue;
                    }
                    // P2..P9 clockwise from north
                    let nb = [
                        at(marked, i, j + 1),
                        at(marked, i + 1, j + 1),
                        at(marked, i + 1, j),
                        at(marked, i + 1, j - 1),
                        at(marked, i, j - 1),
                        at(marked, i - 1, j - 1),
                        at(marked, i - 1, j),
                        at(marked, i - 1, j + 1),
                    ];
                    let b = nb.iter().filter(|&&x| x).count();
                    if !(2..=6).contains(&b) {
                        continue;
                    }
                    let a = (0..8).filter(|&k| !nb[k] && nb[(k + 1) % 8]).count();
                    if a != 1 {
                        continue;
                    }
                    let (p2, p4, p6, p8) = (nb[0], nb[2], nb[4], nb[6]);
                    let ok = if pass == 0 {
                        !(p2 && p4 && p6) && !(p4 && p6 && p8)
                    } else {
                        !(p2 && p4 && p8) && !(p2 && p6 && p8)
                    };
                    if ok {
                        remove.push(j as usize * w + i as usize);
                    }
                }
            }
            changed |= !remove.is_empty();
            for idx in remove {
                marked[idx] = false;
            }
        }
        if !changed {
            break;
        }
    }
}
