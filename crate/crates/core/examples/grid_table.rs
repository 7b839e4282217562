//! The Cantor enumeration of the grid and its neighbour maps.
//!
//! cargo run --example grid_table -- [UPTO]

use qlc_tiling::grid::{self, GridPoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let upto: u64 = std::env::args().nth(1).map_or(Ok(21), |s| s.parse())?;
    print!("{}", grid::table_csv(&grid::table(upto)?));

    // the same points, walked with the successor map
    let walked: Vec<GridPoint> = grid::enumerate().take(6).collect();
    let listed: Vec<String> = walked.iter().map(|p| format!("({},{})", p.i, p.j)).collect();
    println!("first six points: {}", listed.join(" "));
    let k = grid::num(GridPoint::new(3, 2))?;
    println!("num(3,2) = {k}, right = {}, above = {}", grid::right(k)?, grid::above(k)?);
    Ok(())
}
