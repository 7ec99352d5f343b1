use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Integer cell coordinates: `i` is the column (x), `j` the row (y, growing upwards).
pub type Cell = (usize, usize);

/// Map metadata record, stored as TOML next to the graymap.
///
/// ```toml
/// image = "flat.pgm"          # optional, relative to the metadata file
/// resolution = 0.05           # meters per cell
/// origin_x = 0.0              # world x of the lower-left map corner
/// origin_y = 0.0
/// occupied_threshold = 0.65   # normalized darkness at or above which a cell is occupied
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<PathBuf>,
    pub resolution: f64,
    pub origin_x: f64,
    pub origin_y: f64,
    pub occupied_threshold: f64,
}

impl MapMeta {
    pub fn validate(&self) -> Result<()> {
        if !(self.resolution.is_finite() && self.resolution > 0.0) {
            return Err(Error::InvalidMeta(format!(
                "resolution must be positive, got {}",
                self.resolution
            )));
        }
        if !(0.0..=1.0).contains(&self.occupied_threshold) {
            return Err(Error::InvalidMeta(format!(
                "occupied_threshold must lie in [0,1], got {}",
                self.occupied_threshold
            )));
        }
        if !(self.origin_x.is_finite() && self.origin_y.is_finite()) {
            return Err(Error::InvalidMeta("origin must be finite".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let meta: MapMeta = toml::from_str(s).map_err(|e| Error::InvalidMeta(e.message().to_string()))?;
        meta.validate()?;
        Ok(meta)
    }
}

/// Occupancy grid. Row `j = 0` is the bottom row; graymap row 0 (top) maps to `j = height - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    width: usize,
    height: usize,
    resolution: f64,
    origin: Vec2,
    occupied: Vec<bool>,
}

impl GridMap {
    pub fn new(width: usize, height: usize, resolution: f64, origin: Vec2) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidMeta("map dimensions must be at least 1x1".into()));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::InvalidMeta(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        Ok(GridMap {
            width,
            height,
            resolution,
            origin,
            occupied: vec![false; width * height],
        })
    }

    /// Builds a map from rows of characters, top row first; `#` marks occupied cells.
    pub fn from_ascii(rows: &[&str], resolution: f64, origin: Vec2) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut map = GridMap::new(width, height, resolution, origin)?;
        for (row, line) in rows.iter().enumerate() {
            if line.chars().count() != width {
                return Err(Error::MalformedImage("ragged ascii map".into()));
            }
            let j = height - 1 - row;
            for (i, c) in line.chars().enumerate() {
                map.set_occupied((i, j), c == '#');
            }
        }
        Ok(map)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> Vec2 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn index(&self, (i, j): Cell) -> usize {
        j * self.width + i
    }

    pub fn cell_of_index(&self, idx: usize) -> Cell {
        (idx % self.width, idx / self.width)
    }

    pub fn is_occupied(&self, c: Cell) -> bool {
        self.occupied[self.index(c)]
    }

    pub fn set_occupied(&mut self, c: Cell, occ: bool) {
        let idx = self.index(c);
        self.occupied[idx] = occ;
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub(crate) fn occupancy(&self) -> &[bool] {
        &self.occupied
    }

    /// Occupancy of a signed cell coordinate; out-of-range cells are `None`.
    pub fn occupied_signed(&self, i: i64, j: i64) -> Option<bool> {
        if i < 0 || j < 0 || i as usize >= self.width || j as usize >= self.height {
            None
        } else {
            Some(self.occupied[j as usize * self.width + i as usize])
        }
    }

    /// World position of the center of cell `(i, j)`: `origin + ((i + 0.5) w, (j + 0.5) w)`.
    pub fn cell_center(&self, (i, j): Cell) -> Vec2 {
        self.origin + Vec2::new((i as f64 + 0.5) * self.resolution, (j as f64 + 0.5) * self.resolution)
    }

    /// Continuous grid coordinates (cell units) of a world point.
    pub fn to_grid(&self, p: Vec2) -> Vec2 {
        (p - self.origin) / self.resolution
    }

    /// Cell containing `p`, or `None` when `p` is outside the map.
    pub fn cell_of(&self, p: Vec2) -> Option<Cell> {
        let g = self.to_grid(p);
        if !(g.x >= 0.0 && g.y >= 0.0) {
            return None;
        }
        let (i, j) = (g.x.floor() as usize, g.y.floor() as usize);
        (i < self.width && j < self.height).then_some((i, j))
    }

    /// `Some(true)` for occupied, `Some(false)` for free, `None` outside the map.
    pub fn occupied_at(&self, p: Vec2) -> Option<bool> {
        self.cell_of(p).map(|c| self.is_occupied(c))
    }

    pub fn is_free_at(&self, p: Vec2) -> bool {
        self.occupied_at(p) == Some(false)
    }

    /// World-space extent `(min, max)`.
    pub fn bounds(&self) -> (Vec2, Vec2) {
        let size = Vec2::new(
            self.width as f64 * self.resolution,
            self.height as f64 * self.resolution,
        );
        (self.origin, self.origin + size)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height).flat_map(move |j| (0..self.width).map(move |i| (i, j)))
    }

    /// Serializes as a binary (P5) graymap: occupied black, free white.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        for row in 0..self.height {
            let j = self.height - 1 - row;
            for i in 0..self.width {
                out.push(if self.is_occupied((i, j)) { 0 } else { 255 });
            }
        }
        out
    }

    pub fn meta(&self, occupied_threshold: f64) -> MapMeta {
        MapMeta {
            image: None,
            resolution: self.resolution,
            origin_x: self.origin.x,
            origin_y: self.origin.y,
            occupied_threshold,
        }
    }
}

struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.data.len() {
            let c = self.data[self.pos];
            if c == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }

    fn next_uint(&mut self, what: &str) -> Result<u32> {
        let tok = self
            .next()
            .ok_or_else(|| Error::MalformedImage(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedImage(format!("bad {what}: {:?}", String::from_utf8_lossy(tok))))
    }
}

/// Parses a P2 or P5 graymap and thresholds it into a [`GridMap`].
pub fn load_map(image_bytes: &[u8], meta: &MapMeta) -> Result<GridMap> {
    meta.validate()?;
    let mut tok = Tokens {
        data: image_bytes,
        pos: 0,
    };
    let binary = match tok.next() {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(Error::MalformedImage("expected P2 or P5 magic".into())),
    };
    let width = tok.next_uint("width")? as usize;
    let height = tok.next_uint("height")? as usize;
    let maxval = tok.next_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedImage("zero image dimension".into()));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::MalformedImage(format!("maxval {maxval} out of range")));
    }

    let n = width * height;
    let mut values = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = tok.pos + 1;
        let bpp = if maxval < 256 { 1 } else { 2 };
        let raster = image_bytes.get(start..).unwrap_or(&[]);
        if raster.len() < n * bpp {
            return Err(Error::MalformedImage(format!(
                "dimension mismatch: {}x{} needs {} bytes, found {}",
                width,
                height,
                n * bpp,
                raster.len()
            )));
        }
        for k in 0..n {
            let v = if bpp == 1 {
                raster[k] as u32
            } else {
                u16::from_be_bytes([raster[2 * k], raster[2 * k + 1]]) as u32
            };
            values.push(v);
        }
    } else {
        for k in 0..n {
            let v = tok
                .next_uint("pixel")
                .map_err(|_| Error::MalformedImage(format!("dimension mismatch: expected {n} pixels, found {k}")))?;
            values.push(v);
        }
    }
    if let Some(&bad) = values.iter().find(|&&v| v > maxval) {
        return Err(Error::MalformedImage(format!(
            "pixel value {bad} exceeds maxval {maxval}"
        )));
    }

    let mut map = GridMap::new(width, height, meta.resolution, Vec2::new(meta.origin_x, meta.origin_y))?;
    for row in 0..height {
        let j = height - 1 - row;
        for i in 0..width {
            let v = values[row * width + i];
            let darkness = (maxval - v) as f64 / maxval as f64;
            map.set_occupied((i, j), darkness >= meta.occupied_threshold);
        }
    }
    Ok(map)
}

/// Loads a map from its metadata file; the image path is resolved relative to it.
pub fn load_map_file(meta_path: &Path) -> Result<(GridMap, MapMeta)> {
    let text = std::fs::read_to_string(meta_path).map_err(|e| Error::io(meta_path, e))?;
    let meta = MapMeta::from_toml_str(&text).map_err(|e| match e {
        Error::InvalidMeta(m) => Error::Parse {
            path: meta_path.to_path_buf(),
            message: m,
        },
        other => other,
    })?;
    let image = meta.image.clone().ok_or_else(|| Error::Parse {
        path: meta_path.to_path_buf(),
        message: "missing `image` key".into(),
    })?;
    let image_path = meta_path.parent().unwrap_or(Path::new(".")).join(image);
    let bytes = std::fs::read(&image_path).map_err(|e| Error::io(&image_path, e))?;
    Ok((load_map(&bytes, &meta)?, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(threshold: f64, w: f64) -> MapMeta {
        MapMeta {
            image: None,
            resolution: w,
            origin_x: 0.0,
            origin_y: 0.0,
            occupied_threshold: threshold,
        }
    }

    #[test]
    fn all_black_is_occupied() {
        let m = load_map(b"P2\n2 2\n255\n0 0\n0 0\n", &meta(0.5, 0.05)).unwrap();
        assert_eq!(m.occupied_count(), 4);
    }

    #[test]
    fn all_white_is_free() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend([255u8; 4]);
        let m = load_map(&bytes, &meta(0.5, 0.05)).unwrap();
        assert_eq!(m.occupied_count(), 0);
    }

    #[test]
    fn center_pixel_maps_to_center_cell() {
        let pgm = b"P2\n# a comment\n3 3\n255\n255 255 255\n255 0 255\n255 255 255\n";
        let m = load_map(pgm, &meta(0.5, 0.05)).unwrap();
        assert_eq!(m.occupied_count(), 1);
        assert!(m.is_occupied((1, 1)));
        let c = m.cell_center((1, 1));
        assert!((c.x - 0.075).abs() < 1e-15 && (c.y - 0.075).abs() < 1e-15);
    }

    #[test]
    fn top_image_row_is_highest_y() {
        let pgm = b"P2\n2 2\n255\n0 255\n255 255\n";
        let m = load_map(pgm, &meta(0.5, 1.0)).unwrap();
        assert!(m.is_occupied((0, 1)));
        assert!(!m.is_occupied((0, 0)));
    }

    #[test]
    fn sixteen_bit_binary() {
        let mut bytes = b"P5 1 2 65535\n".to_vec();
        bytes.extend([0u8, 0, 0xff, 0xff]);
        let m = load_map(&bytes, &meta(0.5, 1.0)).unwrap();
        assert!(m.is_occupied((0, 1)) && !m.is_occupied((0, 0)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            load_map(b"P3\n1 1\n255\n0\n", &meta(0.5, 1.0)),
            Err(Error::MalformedImage(_))
        ));
        assert!(matches!(
            load_map(b"P2\n2 2\n255\n0 0 0\n", &meta(0.5, 1.0)),
            Err(Error::MalformedImage(_))
        ));
        let mut short = b"P5\n4 4\n255\n".to_vec();
        short.extend([0u8; 5]);
        assert!(load_map(&short, &meta(0.5, 1.0)).is_err());
        assert!(matches!(
            load_map(b"P2\n1 1\n255\n0\n", &meta(1.5, 1.0)),
            Err(Error::InvalidMeta(_))
        ));
        assert!(load_map(b"P2\n1 1\n255\n300\n", &meta(0.5, 1.0)).is_err());
    }

    #[test]
    fn out_of_bounds_is_reported() {
        let m = GridMap::new(4, 3, 0.5, Vec2::new(-1.0, 0.0)).unwrap();
        assert_eq!(m.cell_of(Vec2::new(-1.0, 0.0)), Some((0, 0)));
        assert_eq!(m.cell_of(Vec2::new(0.99, 1.49)), Some((3, 2)));
        assert_eq!(m.cell_of(Vec2::new(1.0, 0.2)), None);
        assert_eq!(m.cell_of(Vec2::new(-1.01, 0.2)), None);
        assert_eq!(m.occupied_at(Vec2::new(5.0, 5.0)), None);
    }

    #[test]
    fn meta_toml_fields() {
        let meta = MapMeta::from_toml_str(
            "image = \"a.pgm\"\nresolution = 0.05\norigin_x = 1.0\norigin_y = -2.0\noccupied_threshold = 0.65\n",
        )
        .unwrap();
        assert_eq!(meta.origin_y, -2.0);
        assert!(MapMeta::from_toml_str("resolution = 0.05\n").is_err());
    }
}
