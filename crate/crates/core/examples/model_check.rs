//! Loads a Kripke model file, validates it and evaluates formulas at each
//! world.
//!
//! cargo run --example model_check -- [MODEL.json] [FORMULA...]

use qlc_tiling::semantics::{validate_model, Assignment, Checker, ModelFile};
use qlc_tiling::syntax::parse_formula;

const DEFAULTS: [&str; 4] = [
    "forall x. (P(x) | ~P(x))",
    "~~forall x. (P(x) | ~P(x))",
    "forall x. exists y. R(x, y)",
    "(exists x. P(x) -> exists x. R(x, x)) | (exists x. R(x, x) -> exists x. P(x))",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let file = match args.next() {
        Some(path) => ModelFile::load(path)?,
        None => ModelFile::from_json(include_str!("../data/sample_model.json"))?,
    };
    let model = file.to_model()?;
    let report = validate_model(&model);
    for v in &report.violations {
        println!("violation: {v}");
    }

    let mut formulas: Vec<String> = args.collect();
    if formulas.is_empty() {
        formulas = DEFAULTS.iter().map(|s| s.to_string()).collect();
    }
    let checker = Checker::new(&model);
    for text in &formulas {
        let f = checker.prepare(&parse_formula(text)?)?;
        let forced: Vec<usize> = (0..model.world_count())
            .filter(|&w| f.forces(w, &Assignment::new()).unwrap_or(false))
            .collect();
        println!("{text}\n  forced at worlds {forced:?}");
        if let Some(w) = f.first_failure()? {
            println!("  fails at world {} with {}", w.world, w.assignment);
        }
    }
    Ok(())
}
