//! A machine on the blank tape, its tile set, and the tiling forced row by
//! row from `t0`.
//!
//! cargo run --example turing_pipeline -- [MACHINE.json] [ROWS]

use qlc_tiling::tiles::check_boundary;
use qlc_tiling::turing::{halting_step, rows_equal_configs, run_blank, tm_to_tiles, validate_tm, TuringMachine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let m = match args.next() {
        Some(path) => TuringMachine::load(path)?,
        None => TuringMachine::from_json(include_str!("../data/write_and_return.json"))?,
    };
    let rows: usize = args.next().map_or(Ok(8), |s| s.parse())?;

    let report = validate_tm(&m);
    if !report.is_valid() {
        for v in &report.violations {
            println!("{v}");
        }
        return Ok(());
    }

    for (k, c) in run_blank(&m, rows - 1)?.iter().enumerate() {
        println!("C{k}: {}", c.render(&m));
    }

    let tiles = tm_to_tiles(&m)?;
    println!("\n{} tiles", tiles.tiles.len());
    for (id, t) in tiles.tiles.iter().enumerate() {
        println!(
            "  {id:>2} {:<12} left {:<7} right {:<7} up {:<7} down {}",
            t.name,
            t.left.render(&m),
            t.right.render(&m),
            t.up.render(&m),
            t.down.render(&m)
        );
    }

    let check = rows_equal_configs(&m, rows)?;
    println!("\nforced tiling, top row first:");
    print!("{}", check.grid.render());
    println!("rows spell the run: {}", check.passed());
    if let Some(h) = halting_step(&m, rows - 1)? {
        println!("halts at step {h}; column 0 is t1 from row {}: {}", h + 1, check_boundary(&check.grid, &tiles.set, h + 1));
    }
    Ok(())
}
