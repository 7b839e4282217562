//! Builds the truncated countermodel for the checkerboard tile set and
//! prints which conjuncts hold at world 0.
//!
//! cargo run --example countermodel_report -- [SIZE] [MARGIN]

use qlc_tiling::countermodel::{build_lemma1_model, conjunct_report, covering_tiling};
use qlc_tiling::reduction::Mode;
use qlc_tiling::tiles::TileSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let size: usize = args.next().map_or(Ok(25), |s| s.parse())?;
    let margin: usize = args.next().map_or(Ok(3), |s| s.parse())?;

    let ts = TileSet::from_json(include_str!("../data/checkerboard.json"))?;
    let tiling = covering_tiling(&ts, size)?;
    let model = build_lemma1_model(&ts, &tiling, size)?;

    for mode in [Mode::Phi, Mode::Psi] {
        let report = conjunct_report(&model, &ts, margin, mode)?;
        println!("{mode:?} at N = {size}, margin {margin}");
        for c in &report.conjuncts {
            match (&c.witness, c.classification) {
                (Some(w), Some(class)) => println!(
                    "  {:<13} false  {:?} at world {} {}",
                    c.name, class, w.world, w.assignment
                ),
                _ => println!("  {:<13} {}", c.name, c.holds),
            }
        }
        println!("  {:<13} {}", "Refute", report.refute.holds);
        if let Some(r) = &report.refute_q {
            println!("  {:<13} {}", "Refute_Q", r.holds);
        }
        if let Some(m) = &report.preceq_mismatches {
            println!("  preceq = <=   {}", m.is_empty());
        }
    }
    Ok(())
}
