//! Parsing, printing and the positive translation.
//!
//! cargo run --example formulas -- 'forall x. (P(x) -> exists y. R(x, y))'

use qlc_tiling::syntax::{parse_formula, print_formula, signature_of, to_positive};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "~forall x. (P(x) | ~P(x)) -> exists y. ~R(y, y)".to_string());
    let f = parse_formula(&text)?;
    println!("parsed:   {}", print_formula(&f));
    println!("depth {}, closed {}", f.depth(), f.is_closed());

    let sig = signature_of(&f);
    let letters: Vec<String> = sig.letters.iter().map(|l| l.to_string()).collect();
    let vars: Vec<&str> = sig.variables.iter().map(String::as_str).collect();
    println!("letters:  {}", letters.join(" "));
    println!("vars:     {}", vars.join(" "));

    let p = to_positive(&f);
    println!("positive: {}", print_formula(&p));
    println!("bottoms:  {} -> {}", f.bottom_count(), p.bottom_count());
    Ok(())
}
