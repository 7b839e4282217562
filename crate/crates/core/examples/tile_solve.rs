//! Window search for a tile set, with the solution checked independently.
//!
//! cargo run --example tile_solve -- [TILES.json] [WIDTH] [HEIGHT]

use qlc_tiling::tiles::{check_constraints, solve_window, FixedCells, TileSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let ts = match args.next() {
        Some(path) => TileSet::load(path)?,
        None => TileSet::from_json(include_str!("../data/checkerboard.json"))?,
    };
    let width: usize = args.next().map_or(Ok(6), |s| s.parse())?;
    let height: usize = args.next().map_or(Ok(4), |s| s.parse())?;

    match solve_window(&ts, width, height, &FixedCells::new())? {
        None => println!("no tiling of the {width}x{height} window"),
        Some(g) => {
            print!("{}", g.render());
            println!("violations: {}", check_constraints(&g, &ts)?.len());
        }
    }

    let clashing = TileSet::from_edges([["a", "b", "c", "c"]])?;
    let found = solve_window(&clashing, 2, 1, &FixedCells::new())?;
    println!("left != right, width 2: {}", if found.is_some() { "solved" } else { "unsolvable" });
    Ok(())
}
