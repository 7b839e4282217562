//! Reads right(k) and above(k) back off the truncated countermodel.
//!
//! cargo run --example sublemma -- [KMAX]

use qlc_tiling::countermodel::{build_lemma1_model, covering_tiling, sublemma_size, sublemma_table};
use qlc_tiling::tiles::TileSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kmax: usize = std::env::args().nth(1).map_or(Ok(12), |s| s.parse())?;
    let n = sublemma_size(kmax)?;
    let ts = TileSet::from_json(include_str!("../data/checkerboard.json"))?;
    let model = build_lemma1_model(&ts, &covering_tiling(&ts, n)?, n)?;

    println!("N = {n}");
    println!("  k  right  right'  above  above'");
    for row in sublemma_table(&model, kmax)? {
        println!(
            "{:>3}  {:>5}  {:>6}  {:>5}  {:>6}{}",
            row.k,
            row.right,
            row.right_prime,
            row.above,
            row.above_prime,
            if row.agrees() { "" } else { "  differs" }
        );
    }
    Ok(())
}
