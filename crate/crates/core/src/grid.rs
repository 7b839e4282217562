//! Cantor enumeration of `ℕ × ℕ` along anti-diagonals, and the derived
//! `right`, `above`, `wall`, `floor` and `next` maps on indices.
//!
//! Index 0 is `(0, 0)`; from `(i, j)` with `i > 0` the walk steps to
//! `(i - 1, j + 1)`, and from `(0, j)` it jumps to `(j + 1, 0)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("grid arithmetic overflowed 64 bits")]
pub struct Overflow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    /// Column.
    pub i: u64,
    /// Row.
    pub j: u64,
}

impl GridPoint {
    pub const ORIGIN: GridPoint = GridPoint { i: 0, j: 0 };

    pub fn new(i: u64, j: u64) -> Self {
        GridPoint { i, j }
    }

    /// The next point of the enumeration, by the defining recurrence.
    pub fn successor(self) -> Result<GridPoint, Overflow> {
        if self.i > 0 {
            Ok(GridPoint::new(self.i - 1, self.j.checked_add(1).ok_or(Overflow)?))
        } else {
            Ok(GridPoint::new(self.j.checked_add(1).ok_or(Overflow)?, 0))
        }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// Largest `d` with `d (d + 1) / 2 <= k`.
fn diagonal_of(k: u64) -> u64 {
    // 8k + 1 may exceed u64, so work in u128
    let disc = 8 * k as u128 + 1;
    let mut d = ((disc.isqrt() - 1) / 2) as u64;
    while triangle(d + 1).is_some_and(|t| t <= k) {
        d += 1;
    }
    while triangle(d).is_none_or(|t| t > k) {
        d -= 1;
    }
    d
}

fn triangle(d: u64) -> Option<u64> {
    let d = d as u128;
    u64::try_from(d * (d + 1) / 2).ok()
}

/// The point with index `k`.
pub fn pair(k: u64) -> GridPoint {
    let d = diagonal_of(k);
    let j = k - triangle(d).expect("triangle(d) <= k by construction");
    GridPoint::new(d - j, j)
}

/// Index of a point: `(i + j)(i + j + 1) / 2 + j`.
pub fn num(p: GridPoint) -> Result<u64, Overflow> {
    let d = p.i.checked_add(p.j).ok_or(Overflow)?;
    triangle(d)
        .and_then(|t| t.checked_add(p.j))
        .ok_or(Overflow)
}

/// Index of the point one column to the right of `k`.
pub fn right(k: u64) -> Result<u64, Overflow> {
    let p = pair(k);
    num(GridPoint::new(p.i.checked_add(1).ok_or(Overflow)?, p.j))
}

/// Index of the point one row above `k`.
pub fn above(k: u64) -> Result<u64, Overflow> {
    let p = pair(k);
    num(GridPoint::new(p.i, p.j.checked_add(1).ok_or(Overflow)?))
}

/// `k` lies in column 0.
pub fn wall(k: u64) -> bool {
    pair(k).i == 0
}

/// `k` lies in row 0.
pub fn floor(k: u64) -> bool {
    pair(k).j == 0
}

pub fn next(k: u64) -> Result<u64, Overflow> {
    k.checked_add(1).ok_or(Overflow)
}

/// Points in enumeration order, generated by the recurrence alone.
#[derive(Debug, Clone)]
pub struct Enumeration {
    next: Option<GridPoint>,
}

impl Default for Enumeration {
    fn default() -> Self {
        Enumeration {
            next: Some(GridPoint::ORIGIN),
        }
    }
}

impl Iterator for Enumeration {
    type Item = GridPoint;

    fn next(&mut self) -> Option<GridPoint> {
        let p = self.next?;
        self.next = p.successor().ok();
        Some(p)
    }
}

pub fn enumerate() -> Enumeration {
    Enumeration::default()
}

/// One row of the `grid` table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GridRow {
    pub k: u64,
    pub i: u64,
    pub j: u64,
    pub right: u64,
    pub above: u64,
    pub wall: bool,
    pub floor: bool,
}

pub fn table(upto: u64) -> Result<Vec<GridRow>, Overflow> {
    (0..=upto)
        .map(|k| {
            let p = pair(k);
            Ok(GridRow {
                k,
                i: p.i,
                j: p.j,
                right: right(k)?,
                above: above(k)?,
                wall: wall(k),
                floor: floor(k),
            })
        })
        .collect()
}

/// CSV with header `k,i,j,right,above,wall,floor`.
pub fn table_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("k,i,j,right,above,wall,floor\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k, r.i, r.j, r.right, r.above, r.wall, r.floor
        ));
    }
    out
}
