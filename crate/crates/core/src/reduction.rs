//! Compiles a tile set into two-variable formulas over one binary letter
//! `lhd` and the unary letters `Q, Q', S, S', S'', G, next, above, right,
//! wall, floor, P0, …, Pn`.
//!
//! The fixed conjuncts are kept as formula text so they can be read side by
//! side with their mathematical form; the tile-dependent ones are built as
//! trees. Conjunctions and disjunctions are right-nested; an empty
//! disjunction is `bot`.
//!
//! In `Move_1` the inner `∀x` and `∃x`, `∃y` rebind the outer variables.
//! Each quantifier scopes over exactly the parenthesised group that follows
//! it, so `Q(x)` and `next(x)` refer to the outer `x`, `wall(y)` under
//! `∃y` to the inner `y`, and so on.

use std::sync::OnceLock;

use thiserror::Error;

use crate::syntax::{parse_formula, to_positive, Formula};
use crate::tiles::TileSet;

pub const LHD: &str = "lhd";
pub const X: &str = "x";
pub const Y: &str = "y";

/// The unary letters shared by every output, in a fixed order.
pub const FIXED_UNARY: [&str; 11] = [
    "Q", "Q'", "S", "S'", "S''", "G", "next", "above", "right", "wall", "floor",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("this formula needs at least two tile types, got {0}")]
    TooFewTiles(usize),
    #[error("unknown conjunct `{0}`")]
    UnknownConjunct(String),
}

/// Name of the unary letter for tile `t_i`.
pub fn tile_letter(i: usize) -> String {
    format!("P{i}")
}

const DL_TEXT: [(&str, &str); 8] = [
    ("Serial_lhd", "forall x. exists y. lhd(x, y)"),
    ("Diag_N", "forall x. forall y. (lhd(x, y) -> (Q(x) <-> next(y)))"),
    ("Diag_Q", "forall x. forall y. (lhd(x, y) -> (Q'(x) <-> Q(y)))"),
    (
        "Diag_S",
        "forall x. forall y. (lhd(x, y) -> (S'(x) <-> S(y)) & (S''(x) <-> S'(y)))",
    ),
    ("Diag_G", "forall x. forall y. (lhd(x, y) -> (S(x) <-> G(y)))"),
    (
        "Agree_S",
        "forall x. forall y. ((Q(x) & S(y) -> Q'(x) | S'(y)) | (Q(x) & S'(y) -> Q'(x) | S''(y)))",
    ),
    (
        "Agree_G",
        "forall x. forall y. ((Q(x) & G(y) -> Q'(x) | S(y)) | (Q(x) & S'(y) -> Q'(x) | S''(y)))",
    ),
    ("Agree_lhd", "forall x. forall y. (lhd(y, x) & S(x) -> S(y))"),
];

const FRAW_TEXT: [(&str, &str); 7] = [
    ("EM_W", "forall x. (wall(x) | ~wall(x))"),
    (
        "Conn_1",
        "forall x. ((floor(x) -> ~above(x)) & (wall(x) -> ~right(x)))",
    ),
    (
        "Conn_2",
        "forall x. forall y. (lhd(x, y) -> (right(x) -> above(y)) & (wall(x) -> floor(y)))",
    ),
    (
        "Conn_3",
        "forall x. ((above(x) -> S(x)) & (right(x) -> S'(x)))",
    ),
    (
        "Start_lhd",
        "forall x. forall y. (lhd(x, y) & wall(x) & floor(x) -> right(y))",
    ),
    (
        "Move_1",
        "forall x. forall y. (\
            ((forall x. (lhd(x, y) -> wall(x))) & ~wall(y) & right(y) & Q(x) -> Q'(x) | S''(y)) \
            -> ((exists y. (lhd(y, x) & wall(y))) & next(x) & (exists x. (lhd(x, y) & above(x))) & G(y) \
                -> Q(x) | S(y)))",
    ),
    (
        "Move_2",
        "forall x. forall y. (\
            (~wall(y) & right(y) & Q(x) -> Q'(x) | S''(y)) \
            -> ((exists y. (lhd(y, x) & ~wall(y))) & next(x) & above(y) -> Q(x) | S'(y)))",
    ),
];

const REFUTE_TEXT: &str = "forall x. forall y. (lhd(x, y) & wall(x) & floor(x) & Q(x) -> Q'(x) | S''(y))";

const PSI_TEXT: [(&str, &str); 4] = [
    ("Agree_preceq", "forall x. forall y. (lhd(x, y) -> (Q(y) -> Q(x)))"),
    ("T3", "forall x. (wall(x) & floor(x) -> P0(x))"),
    ("T4", "exists x. forall y. ((Q(y) -> Q(x)) & wall(y) -> P1(y))"),
    ("Refute_Q", "exists x. (Q(x) -> Q'(x))"),
];

/// A formula together with the name it is referred to by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Named {
    pub name: &'static str,
    pub formula: Formula,
}

fn parse_table<const N: usize>(table: &[(&'static str, &str); N]) -> Vec<Named> {
    table
        .iter()
        .map(|&(name, text)| Named {
            name,
            formula: parse_formula(text).unwrap_or_else(|e| panic!("{name}: {e}")),
        })
        .collect()
}

pub fn dl_conjuncts() -> &'static [Named] {
    static CELL: OnceLock<Vec<Named>> = OnceLock::new();
    CELL.get_or_init(|| parse_table(&DL_TEXT))
}

pub fn fraw_conjuncts() -> &'static [Named] {
    static CELL: OnceLock<Vec<Named>> = OnceLock::new();
    CELL.get_or_init(|| parse_table(&FRAW_TEXT))
}

fn psi_extras() -> &'static [Named] {
    static CELL: OnceLock<Vec<Named>> = OnceLock::new();
    CELL.get_or_init(|| parse_table(&PSI_TEXT))
}

fn psi_extra(name: &str) -> Formula {
    psi_extras()
        .iter()
        .find(|n| n.name == name)
        .map(|n| n.formula.clone())
        .expect("known name")
}

fn conj_of(items: &[Named]) -> Formula {
    Formula::conj(items.iter().map(|n| n.formula.clone())).expect("nonempty")
}

pub fn build_dl() -> Formula {
    conj_of(dl_conjuncts())
}

pub fn build_fraw() -> Formula {
    conj_of(fraw_conjuncts())
}

pub fn build_grid() -> Formula {
    Formula::and(build_dl(), build_fraw())
}

fn p(i: usize, var: &str) -> Formula {
    Formula::atom(&tile_letter(i), [var])
}

fn un(letter: &str, var: &str) -> Formula {
    Formula::atom(letter, [var])
}

/// `∀x ⋁_i (P_i(x) ∧ ⋀_{j≠i} ¬P_j(x))`.
pub fn build_t0(ts: &TileSet) -> Formula {
    let n = ts.len();
    let disjuncts = (0..n).map(|i| {
        let others = (0..n).filter(|&j| j != i).map(|j| Formula::not(p(j, X)));
        Formula::conj(std::iter::once(p(i, X)).chain(others)).expect("nonempty")
    });
    Formula::forall(X, Formula::disj(disjuncts))
}

/// Shared shape of the two matching conditions: for each `i`, the
/// disjunction over clashing neighbours implies
/// `step(y) ∧ Q(x) ∧ P_i(x) → Q'(x) ∨ mark(y)`.
fn matching(ts: &TileSet, clashes: impl Fn(usize) -> Vec<usize>, step: &str, mark: &str) -> Formula {
    let per_tile = (0..ts.len()).map(|i| {
        let forbidden = Formula::disj(clashes(i).into_iter().map(|j| p(j, Y)));
        let premise = Formula::conj([un(step, Y), un("Q", X), p(i, X)]).expect("nonempty");
        let conclusion = Formula::or(un("Q'", X), un(mark, Y));
        Formula::implies(forbidden, Formula::implies(premise, conclusion))
    });
    let body = Formula::conj(per_tile).expect("nonempty tile set");
    Formula::forall(X, Formula::forall(Y, body))
}

pub fn build_t1(ts: &TileSet) -> Formula {
    matching(ts, |i| ts.right_clashes(i), "right", "S''")
}

pub fn build_t2(ts: &TileSet) -> Formula {
    matching(ts, |i| ts.up_clashes(i), "above", "S'")
}

pub fn tiling_conjuncts(ts: &TileSet) -> Vec<Named> {
    vec![
        Named { name: "T0", formula: build_t0(ts) },
        Named { name: "T1", formula: build_t1(ts) },
        Named { name: "T2", formula: build_t2(ts) },
    ]
}

pub fn build_tiling(ts: &TileSet) -> Formula {
    conj_of(&tiling_conjuncts(ts))
}

pub fn build_refute() -> Formula {
    static CELL: OnceLock<Formula> = OnceLock::new();
    CELL.get_or_init(|| parse_formula(REFUTE_TEXT).expect("Refute parses"))
        .clone()
}

/// `(DL ∧ FRAW) ∧ Tiling_T → Refute`.
pub fn build_phi(ts: &TileSet) -> Formula {
    Formula::implies(Formula::and(build_grid(), build_tiling(ts)), build_refute())
}

fn check_psi(ts: &TileSet) -> Result<(), ReductionError> {
    if ts.len() < 2 {
        return Err(ReductionError::TooFewTiles(ts.len()));
    }
    Ok(())
}

/// `∀x∀y(x ⊳ y → x ≼ y)` with `x ≼ y` written out as `Q(y) → Q(x)`.
pub fn build_agree_preceq() -> Formula {
    psi_extra("Agree_preceq")
}

pub fn build_t3() -> Formula {
    psi_extra("T3")
}

pub fn build_t4() -> Formula {
    psi_extra("T4")
}

pub fn build_refute_q() -> Formula {
    psi_extra("Refute_Q")
}

/// `Grid ∧ Agree_≼`.
pub fn build_grid_prime() -> Formula {
    Formula::and(build_grid(), build_agree_preceq())
}

/// `Tiling_T ∧ T3 ∧ T4`.
pub fn build_tiling_prime(ts: &TileSet) -> Result<Formula, ReductionError> {
    check_psi(ts)?;
    Ok(Formula::conj([build_tiling(ts), build_t3(), build_t4()]).expect("nonempty"))
}

/// `Refute ∨ Refute_Q`.
pub fn build_refute_prime() -> Formula {
    Formula::or(build_refute(), build_refute_q())
}

/// `Grid' ∧ Tiling'_T → Refute'`.
pub fn build_psi(ts: &TileSet) -> Result<Formula, ReductionError> {
    Ok(Formula::implies(
        Formula::and(build_grid_prime(), build_tiling_prime(ts)?),
        build_refute_prime(),
    ))
}

pub fn build_phi_positive(ts: &TileSet) -> Formula {
    to_positive(&build_phi(ts))
}

pub fn build_psi_positive(ts: &TileSet) -> Result<Formula, ReductionError> {
    build_psi(ts).map(|f| to_positive(&f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Phi,
    Psi,
}

pub fn build(ts: &TileSet, mode: Mode, positive: bool) -> Result<Formula, ReductionError> {
    let f = match mode {
        Mode::Phi => build_phi(ts),
        Mode::Psi => build_psi(ts)?,
    };
    Ok(if positive { to_positive(&f) } else { f })
}

/// The conjuncts of the antecedent, in order, with their names.
pub fn named_conjuncts(ts: &TileSet, mode: Mode) -> Result<Vec<Named>, ReductionError> {
    let mut out: Vec<Named> = dl_conjuncts().iter().chain(fraw_conjuncts()).cloned().collect();
    if mode == Mode::Psi {
        check_psi(ts)?;
        out.push(Named { name: "Agree_preceq", formula: build_agree_preceq() });
    }
    out.extend(tiling_conjuncts(ts));
    if mode == Mode::Psi {
        out.push(Named { name: "T3", formula: build_t3() });
        out.push(Named { name: "T4", formula: build_t4() });
    }
    Ok(out)
}

/// Names accepted by [`conjunct`], besides the individual conjuncts.
pub const COMPOSITE_NAMES: [&str; 9] = [
    "DL", "FRAW", "Grid", "Tiling", "Refute", "Grid'", "Tiling'", "Refute'", "Refute_Q",
];

/// Looks up a named piece of the construction: a single conjunct such as
/// `Move_1` or `T2`, or a composite such as `DL` or `Refute'`.
pub fn conjunct(ts: &TileSet, mode: Mode, name: &str) -> Result<Formula, ReductionError> {
    let composite = match name {
        "DL" => Some(build_dl()),
        "FRAW" => Some(build_fraw()),
        "Grid" => Some(build_grid()),
        "Tiling" => Some(build_tiling(ts)),
        "Refute" => Some(build_refute()),
        "Grid'" if mode == Mode::Psi => Some(build_grid_prime()),
        "Tiling'" if mode == Mode::Psi => Some(build_tiling_prime(ts)?),
        "Refute'" if mode == Mode::Psi => Some(build_refute_prime()),
        "Refute_Q" if mode == Mode::Psi => Some(build_refute_q()),
        _ => None,
    };
    if let Some(f) = composite {
        return Ok(f);
    }
    named_conjuncts(ts, mode)?
        .into_iter()
        .find(|n| n.name == name)
        .map(|n| n.formula)
        .ok_or_else(|| ReductionError::UnknownConjunct(name.to_string()))
}

/// Splits nested conjunctions into their leaves, left to right.
pub fn flatten_and(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(a, b) => {
            let mut out = flatten_and(a);
            out.extend(flatten_and(b));
            out
        }
        _ => vec![f],
    }
}
