//! Tile types with coloured edges, finite rectangular tilings, the local
//! matching conditions, the column-0 boundary conditions, and a
//! backtracking solver for finite windows.
//!
//! Cell `(i, j)` is column `i`, row `j`; row 0 is the bottom row. A tile at
//! `(i, j)` must match `right == left` with `(i + 1, j)` and `up == down`
//! with `(i, j + 1)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TileError {
    #[error("a tile set needs at least one tile")]
    Empty,
    #[error("tile at position {position} has id {id}; ids must equal positions")]
    IdMismatch { position: usize, id: usize },
    #[error("tile {id} has an empty {edge} colour")]
    EmptyColor { id: usize, edge: &'static str },
    #[error("cell ({i}, {j}) holds tile {id}, but the set has {count} tiles")]
    UnknownTile { i: usize, j: usize, id: usize, count: usize },
    #[error("cell ({i}, {j}) is outside the {width}x{height} window")]
    OutOfBounds { i: usize, j: usize, width: usize, height: usize },
    #[error("window must be at least 1x1")]
    EmptyWindow,
    #[error("rows have different lengths")]
    Ragged,
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed tile file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileType {
    pub id: usize,
    pub left: String,
    pub right: String,
    pub up: String,
    pub down: String,
}

impl TileType {
    pub fn new(id: usize, left: &str, right: &str, up: &str, down: &str) -> Self {
        TileType {
            id,
            left: left.into(),
            right: right.into(),
            up: up.into(),
            down: down.into(),
        }
    }
}

impl fmt::Display for TileType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t{}[left {}, right {}, up {}, down {}]",
            self.id, self.left, self.right, self.up, self.down
        )
    }
}

/// `t_0, …, t_n`; the id of each tile is its position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TileSet {
    tiles: Vec<TileType>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TileFile {
    tiles: Vec<TileType>,
}

impl TileSet {
    pub fn new(tiles: Vec<TileType>) -> Result<Self, TileError> {
        if tiles.is_empty() {
            return Err(TileError::Empty);
        }
        for (position, t) in tiles.iter().enumerate() {
            if t.id != position {
                return Err(TileError::IdMismatch { position, id: t.id });
            }
            for (edge, c) in [("left", &t.left), ("right", &t.right), ("up", &t.up), ("down", &t.down)] {
                if c.is_empty() {
                    return Err(TileError::EmptyColor { id: t.id, edge });
                }
            }
        }
        Ok(TileSet { tiles })
    }

    /// Builds a set from `(left, right, up, down)` colours, numbering in order.
    pub fn from_edges<'a>(edges: impl IntoIterator<Item = [&'a str; 4]>) -> Result<Self, TileError> {
        Self::new(
            edges
                .into_iter()
                .enumerate()
                .map(|(id, [l, r, u, d])| TileType::new(id, l, r, u, d))
                .collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self, TileError> {
        let file: TileFile = serde_json::from_str(text)?;
        Self::new(file.tiles)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TileError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tile sets always serialize")
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&TileType> {
        self.tiles.get(id)
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    /// Ids of the tiles `t_j` with `right(t_i) != left(t_j)`.
    pub fn right_clashes(&self, i: usize) -> Vec<usize> {
        let r = &self.tiles[i].right;
        self.tiles.iter().filter(|t| &t.left != r).map(|t| t.id).collect()
    }

    /// Ids of the tiles `t_j` with `up(t_i) != down(t_j)`.
    pub fn up_clashes(&self, i: usize) -> Vec<usize> {
        let u = &self.tiles[i].up;
        self.tiles.iter().filter(|t| &t.down != u).map(|t| t.id).collect()
    }

    /// Applies `rename` to every colour.
    pub fn recolor(&self, rename: impl Fn(&str) -> String) -> TileSet {
        TileSet {
            tiles: self
                .tiles
                .iter()
                .map(|t| TileType {
                    id: t.id,
                    left: rename(&t.left),
                    right: rename(&t.right),
                    up: rename(&t.up),
                    down: rename(&t.down),
                })
                .collect(),
        }
    }
}

/// A `width × height` rectangle of tile ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TileGrid {
    width: usize,
    height: usize,
    /// `rows[j][i]`.
    rows: Vec<Vec<usize>>,
}

impl TileGrid {
    pub fn filled(width: usize, height: usize, id: usize) -> Result<Self, TileError> {
        if width == 0 || height == 0 {
            return Err(TileError::EmptyWindow);
        }
        Ok(TileGrid {
            width,
            height,
            rows: vec![vec![id; width]; height],
        })
    }

    /// `rows[j][i]` is the tile at column `i`, row `j`.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, TileError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if width == 0 {
            return Err(TileError::EmptyWindow);
        }
        if rows.iter().any(|r| r.len() != width) {
            return Err(TileError::Ragged);
        }
        Ok(TileGrid { width, height, rows })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.rows.get(j).and_then(|r| r.get(i)).copied()
    }

    pub fn set(&mut self, i: usize, j: usize, id: usize) -> Result<(), TileError> {
        if i >= self.width || j >= self.height {
            return Err(TileError::OutOfBounds {
                i,
                j,
                width: self.width,
                height: self.height,
            });
        }
        self.rows[j][i] = id;
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// The bottom-left `width × height` corner.
    pub fn restrict(&self, width: usize, height: usize) -> Result<TileGrid, TileError> {
        if width > self.width || height > self.height {
            return Err(TileError::OutOfBounds {
                i: width.saturating_sub(1),
                j: height.saturating_sub(1),
                width: self.width,
                height: self.height,
            });
        }
        TileGrid::from_rows(self.rows[..height].iter().map(|r| r[..width].to_vec()).collect())
    }

    /// One line per row, top row first, ids separated by spaces.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in self.rows.iter().rev() {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Between `(i, j)` and `(i + 1, j)`.
    Horizontal,
    /// Between `(i, j)` and `(i, j + 1)`.
    Vertical,
}

/// A mismatched edge between cell `(i, j)` and its right or upper neighbour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintViolation {
    pub direction: Direction,
    pub i: usize,
    pub j: usize,
    /// Colour on the `(i, j)` side.
    pub near: String,
    /// Colour on the neighbour's side.
    pub far: String,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (what, ni, nj) = match self.direction {
            Direction::Horizontal => ("right/left", self.i + 1, self.j),
            Direction::Vertical => ("up/down", self.i, self.j + 1),
        };
        write!(
            f,
            "{what} mismatch between ({}, {}) and ({ni}, {nj}): {} vs {}",
            self.i, self.j, self.near, self.far
        )
    }
}

fn tile_at<'t>(g: &TileGrid, ts: &'t TileSet, i: usize, j: usize) -> Result<&'t TileType, TileError> {
    let id = g.rows[j][i];
    ts.get(id).ok_or(TileError::UnknownTile {
        i,
        j,
        id,
        count: ts.len(),
    })
}

/// Every adjacent pair of cells whose shared edge colours differ.
pub fn check_constraints(g: &TileGrid, ts: &TileSet) -> Result<Vec<ConstraintViolation>, TileError> {
    let mut out = Vec::new();
    for j in 0..g.height {
        for i in 0..g.width {
            let t = tile_at(g, ts, i, j)?;
            if i + 1 < g.width {
                let r = tile_at(g, ts, i + 1, j)?;
                if t.right != r.left {
                    out.push(ConstraintViolation {
                        direction: Direction::Horizontal,
                        i,
                        j,
                        near: t.right.clone(),
                        far: r.left.clone(),
                    });
                }
            }
            if j + 1 < g.height {
                let u = tile_at(g, ts, i, j + 1)?;
                if t.up != u.down {
                    out.push(ConstraintViolation {
                        direction: Direction::Vertical,
                        i,
                        j,
                        near: t.up.clone(),
                        far: u.down.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `(0, 0)` holds `t_0` and `(0, j)` holds `t_1` for every row
/// `jstar <= j < height`. With `jstar >= height` only the first condition
/// is left.
pub fn check_boundary(g: &TileGrid, ts: &TileSet, jstar: usize) -> bool {
    if ts.len() < 2 && g.height > jstar {
        return false;
    }
    g.get(0, 0) == Some(0) && (jstar..g.height).all(|j| g.get(0, j) == Some(1))
}

/// Cells pinned to a tile id, keyed by `(i, j)`.
pub type FixedCells = BTreeMap<(usize, usize), usize>;

/// Finds a tiling of the window that respects `fixed`.
///
/// Cells are filled in row-major order from `(0, 0)`, trying tile ids in
/// ascending order, with chronological backtracking. The result is the
/// first solution in that order.
pub fn solve_window(
    ts: &TileSet,
    width: usize,
    height: usize,
    fixed: &FixedCells,
) -> Result<Option<TileGrid>, TileError> {
    if width == 0 || height == 0 {
        return Err(TileError::EmptyWindow);
    }
    for (&(i, j), &id) in fixed {
        if i >= width || j >= height {
            return Err(TileError::OutOfBounds { i, j, width, height });
        }
        if id >= ts.len() {
            return Err(TileError::UnknownTile {
                i,
                j,
                id,
                count: ts.len(),
            });
        }
    }

    // intern colours so the inner loop compares integers
    let mut colors: HashMap<&str, u32> = HashMap::new();
    let mut edges = Vec::with_capacity(ts.len());
    for t in ts.tiles() {
        let mut e = [0u32; 4];
        for (slot, c) in e.iter_mut().zip([&t.left, &t.right, &t.up, &t.down]) {
            let n = colors.len() as u32;
            *slot = *colors.entry(c.as_str()).or_insert(n);
        }
        edges.push(e);
    }
    let [left, right, up, down] = [0, 1, 2, 3];

    let cells = width * height;
    let candidates: Vec<Vec<usize>> = (0..cells)
        .map(|c| match fixed.get(&(c % width, c / width)) {
            Some(&id) => vec![id],
            None => (0..ts.len()).collect(),
        })
        .collect();
    let fits = |placed: &[usize], c: usize, id: usize| {
        let (i, j) = (c % width, c / width);
        (i == 0 || edges[placed[c - 1]][right] == edges[id][left])
            && (j == 0 || edges[placed[c - width]][up] == edges[id][down])
    };

    let mut placed: Vec<usize> = Vec::with_capacity(cells);
    // next candidate position to try at each depth
    let mut cursor = vec![0usize; cells];
    let mut c = 0;
    loop {
        if c == cells {
            let rows = placed.chunks(width).map(<[usize]>::to_vec).collect();
            return TileGrid::from_rows(rows).map(Some);
        }
        let opts = &candidates[c];
        let mut chosen = None;
        while cursor[c] < opts.len() {
            let id = opts[cursor[c]];
            cursor[c] += 1;
            if fits(&placed, c, id) {
                chosen = Some(id);
                break;
            }
        }
        match chosen {
            Some(id) => {
                placed.push(id);
                c += 1;
            }
            None => {
                cursor[c] = 0;
                if c == 0 {
                    return Ok(None);
                }
                c -= 1;
                placed.pop();
            }
        }
    }
}
