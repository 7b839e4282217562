//! Builds the reduction formulas of a tile set and audits their signature.
//!
//! cargo run --example reduce -- [TILES.json]

use qlc_tiling::reduction::{build, named_conjuncts, Mode};
use qlc_tiling::syntax::{print_formula, signature_of};
use qlc_tiling::tiles::TileSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ts = match std::env::args().nth(1) {
        Some(path) => TileSet::load(path)?,
        None => TileSet::from_json(include_str!("../data/checkerboard.json"))?,
    };

    for c in named_conjuncts(&ts, Mode::Psi)? {
        println!("{:<13} {}", c.name, print_formula(&c.formula));
    }
    println!();
    for (mode, positive) in [(Mode::Phi, false), (Mode::Phi, true), (Mode::Psi, false), (Mode::Psi, true)] {
        let f = build(&ts, mode, positive)?;
        let sig = signature_of(&f);
        let vars: Vec<&str> = sig.variables.iter().map(String::as_str).collect();
        println!(
            "{mode:?}{}: {} chars, vars {{{}}}, {} binary, {} unary, {} bottoms",
            if positive { " positive" } else { "" },
            print_formula(&f).chars().count(),
            vars.join(","),
            sig.binary_count(),
            sig.unary_count(),
            f.bottom_count(),
        );
    }
    Ok(())
}
