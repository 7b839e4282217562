//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use qlc_tiling::semantics::{AugmentedFrame, Frame, KripkeModel};
use qlc_tiling::syntax::Formula;
use qlc_tiling::tiles::{TileSet, TileType};
use rand::rngs::StdRng;
use rand::Rng;

pub const VARS: [&str; 2] = ["x", "y"];

/// A random intuitionistic model: a partial order on at most `max_worlds`
/// worlds, expanding domains drawn from `0..max_domain`, and hereditary
/// interpretations of `p/0`, `P/1`, `Q/1`, `R/2`.
pub fn random_model(rng: &mut StdRng, max_worlds: usize, max_domain: usize) -> KripkeModel {
    let n = rng.gen_range(1..=max_worlds);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                pairs.push((i, j));
            }
        }
    }
    let frame = Frame::preorder_closure(n, &pairs).unwrap();
    let mut domains: Vec<Vec<usize>> = Vec::with_capacity(n);
    for w in 0..n {
        let mut d: Vec<usize> = (0..max_domain).filter(|_| rng.gen_bool(0.4)).collect();
        for (u, du) in domains.iter().enumerate() {
            if frame.sees(u, w) {
                d.extend(du.iter().copied());
            }
        }
        if d.is_empty() {
            d.push(rng.gen_range(0..max_domain));
        }
        d.sort_unstable();
        d.dedup();
        domains.push(d);
    }
    let mut m = KripkeModel::new(AugmentedFrame::new(frame, &domains));
    for (letter, arity) in [("p", 0), ("P", 1), ("Q", 1), ("R", 2)] {
        m.declare(letter, arity).unwrap();
        for (w, d) in domains.iter().enumerate() {
            for t in tuples(d, arity) {
                if rng.gen_bool(0.3) {
                    m.insert(w, letter, &t).unwrap();
                }
            }
        }
    }
    m.close_hereditarily();
    m
}

pub fn tuples(d: &[usize], arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                d.iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// A random formula over `x`, `y` and the letters of [`random_model`] with
/// nesting depth at most `depth`.
pub fn random_formula(rng: &mut StdRng, depth: usize) -> Formula {
    let var = |rng: &mut StdRng| VARS[rng.gen_range(0..2)];
    let leaf = |rng: &mut StdRng| match rng.gen_range(0..5) {
        0 => Formula::Bottom,
        1 => Formula::prop("p"),
        2 => Formula::atom("P", [var(rng)]),
        3 => Formula::atom("Q", [var(rng)]),
        _ => Formula::atom("R", [var(rng), var(rng)]),
    };
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    let sub = |rng: &mut StdRng| random_formula(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => Formula::and(sub(rng), sub(rng)),
        1 => Formula::or(sub(rng), sub(rng)),
        2 => Formula::implies(sub(rng), sub(rng)),
        3 => {
            let v = var(rng);
            Formula::forall(v, sub(rng))
        }
        _ => {
            let v = var(rng);
            Formula::exists(v, sub(rng))
        }
    }
}

/// Tarskian truth at world `w` with quantifiers over `D_w`, ignoring the
/// order. Agrees with forcing exactly when `w` sees only itself.
pub fn classical(m: &KripkeModel, w: usize, f: &Formula, g: &mut BTreeMap<String, usize>) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Atom { letter, args } => {
            let t: Vec<usize> = args.iter().map(|a| g[a]).collect();
            m.holds_atom(w, letter, &t)
        }
        Formula::And(a, b) => classical(m, w, a, g) && classical(m, w, b, g),
        Formula::Or(a, b) => classical(m, w, a, g) || classical(m, w, b, g),
        Formula::Implies(a, b) => !classical(m, w, a, g) || classical(m, w, b, g),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let saved = g.get(v).copied();
            let domain: Vec<usize> = m.aframe().domain(w).collect();
            let mut result = universal;
            for a in domain {
                g.insert(v.clone(), a);
                if classical(m, w, body, g) != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(a) => g.insert(v.clone(), a),
                None => g.remove(v),
            };
            result
        }
    }
}

/// Worlds that see no world but themselves.
pub fn maximal_worlds(m: &KripkeModel) -> Vec<usize> {
    m.frame().worlds().filter(|&w| m.frame().successors(w).all(|v| v == w)).collect()
}

/// A random tile set over a small colour palette.
pub fn random_tiles(rng: &mut StdRng, max_tiles: usize, colours: usize) -> TileSet {
    let n = rng.gen_range(1..=max_tiles);
    let mut c = || format!("c{}", rng.gen_range(0..colours));
    let tiles = (0..n)
        .map(|id| TileType {
            id,
            left: c(),
            right: c(),
            up: c(),
            down: c(),
        })
        .collect();
    TileSet::new(tiles).unwrap()
}

pub fn checkerboard() -> TileSet {
    TileSet::from_json(include_str!("../../data/checkerboard.json")).unwrap()
}

pub fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}
