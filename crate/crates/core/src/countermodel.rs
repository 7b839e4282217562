//! The explicit countermodel over the chain `0 ≤ 1 ≤ …` with constant
//! domain `ℕ`, cut off at `N`: worlds and individuals are `0..=N`.
//!
//! At world `w`, with `A = above(w)`:
//!
//! | letter  | true of `a` iff        |
//! |---------|------------------------|
//! | `Q`     | `a ≤ w`                |
//! | `Q'`    | `a ≤ w - 1`            |
//! | `next`  | `a ≤ w + 1`            |
//! | `S`     | `a ≤ A`                |
//! | `S'`    | `a ≤ A - 1`            |
//! | `S''`   | `a ≤ A - 2`            |
//! | `G`     | `a ≤ A + 1`            |
//! | `wall`  | `a` is in column 0     |
//! | `floor` | `a` is in row 0        |
//! | `above` | `S(a) ∧ ¬floor(a)`     |
//! | `right` | `S'(a) ∧ ¬wall(a)`     |
//! | `P_k`   | the tile at `pair(a)` is `t_k` |
//!
//! and `lhd(a, b)` iff `b = a + 1`. Every clause is upward closed in `w`.

use serde::Serialize;
use thiserror::Error;

use crate::grid::{self, GridPoint};
use crate::reduction::{self, Mode};
use crate::semantics::{AugmentedFrame, Assignment, Checker, EvalError, Frame, KripkeModel, Witness};
use crate::syntax::{parse_formula, Formula};
use crate::tiles::{check_constraints, solve_window, FixedCells, TileError, TileGrid, TileSet};

#[derive(Debug, Error)]
pub enum CountermodelError {
    #[error("the tiling does not cover point ({i}, {j}) (index {k}); it is {width}x{height}")]
    NotCovered { k: u64, i: u64, j: u64, width: usize, height: usize },
    #[error("the tiling breaks the matching conditions: {0}")]
    Mismatch(String),
    #[error("no tiling of the {width}x{height} window with t0 at the origin")]
    NoTiling { width: usize, height: usize },
    #[error("margin {margin} must be smaller than the size {size}")]
    Margin { margin: usize, size: usize },
    #[error("the minimum for k = {k} is not reached among individuals 0..={size}")]
    NotAttained { k: usize, size: usize },
    #[error(transparent)]
    Tile(#[from] TileError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Reduction(#[from] reduction::ReductionError),
    #[error(transparent)]
    Grid(#[from] grid::Overflow),
}

#[derive(Debug, Clone)]
pub struct Lemma1Model {
    pub size: usize,
    pub tiling: TileGrid,
    pub model: KripkeModel,
}

/// Smallest square window holding every point with index `≤ n`.
pub fn covering_window(n: usize) -> usize {
    let p = grid::pair(n as u64);
    (p.i + p.j) as usize + 1
}

/// The first tiling (in solver order) of the covering window for `n` with
/// `t_0` at the origin.
pub fn covering_tiling(ts: &TileSet, n: usize) -> Result<TileGrid, CountermodelError> {
    let side = covering_window(n);
    let fixed = FixedCells::from([((0, 0), 0)]);
    solve_window(ts, side, side, &fixed)?.ok_or(CountermodelError::NoTiling {
        width: side,
        height: side,
    })
}

pub fn build_lemma1_model(ts: &TileSet, g: &TileGrid, n: usize) -> Result<Lemma1Model, CountermodelError> {
    let mut points = Vec::with_capacity(n + 1);
    for k in 0..=n as u64 {
        let GridPoint { i, j } = grid::pair(k);
        if i as usize >= g.width() || j as usize >= g.height() {
            return Err(CountermodelError::NotCovered {
                k,
                i,
                j,
                width: g.width(),
                height: g.height(),
            });
        }
        points.push((i as usize, j as usize));
    }
    let violations = check_constraints(g, ts)?;
    if let Some(v) = violations.first() {
        return Err(CountermodelError::Mismatch(v.to_string()));
    }

    let frame = Frame::linear(n + 1).expect("at least one world");
    let mut m = KripkeModel::new(AugmentedFrame::constant(frame, n + 1));
    m.declare(reduction::LHD, 2).expect("fresh letter");
    for letter in reduction::FIXED_UNARY {
        m.declare(letter, 1).expect("fresh letter");
    }
    for k in 0..ts.len() {
        m.declare(&reduction::tile_letter(k), 1).expect("fresh letter");
    }

    let tile_letters: Vec<String> = (0..ts.len()).map(reduction::tile_letter).collect();
    for w in 0..=n {
        let above_w = grid::above(w as u64)? as usize;
        for (a, &(i, j)) in points.iter().enumerate() {
            let wall = i == 0;
            let floor = j == 0;
            let s = a <= above_w;
            let s1 = a < above_w;
            let truths = [
                ("Q", a <= w),
                ("Q'", a < w),
                ("next", a <= w + 1),
                ("S", s),
                ("S'", s1),
                ("S''", a + 2 <= above_w),
                ("G", a <= above_w + 1),
                ("wall", wall),
                ("floor", floor),
                ("above", s && !floor),
                ("right", s1 && !wall),
            ];
            for (letter, holds) in truths {
                if holds {
                    m.insert(w, letter, &[a]).expect("declared");
                }
            }
            let tile = g.get(i, j).expect("covered");
            m.insert(w, &tile_letters[tile], &[a]).expect("declared");
            if a < n {
                m.insert(w, reduction::LHD, &[a, a + 1]).expect("declared");
            }
        }
    }
    Ok(Lemma1Model {
        size: n,
        tiling: g.clone(),
        model: m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// The witness stays below `N - margin`.
    Interior,
    /// The witness touches a world or individual `≥ N - margin`.
    Boundary,
}

/// Truth of one named formula at world 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjunctResult {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
}

/// A pair `(a, b)` where `Q(b) → Q(a)` at world 0 disagrees with `a ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PreceqMismatch {
    pub a: usize,
    pub b: usize,
    pub forced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjunctReport {
    pub size: usize,
    pub margin: usize,
    pub mode: &'static str,
    pub conjuncts: Vec<ConjunctResult>,
    pub refute: ConjunctResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refute_q: Option<ConjunctResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preceq_mismatches: Option<Vec<PreceqMismatch>>,
}

impl ConjunctReport {
    pub fn failures(&self) -> impl Iterator<Item = &ConjunctResult> {
        self.conjuncts.iter().filter(|c| !c.holds)
    }

    /// Some conjunct fails with a witness away from the cut-off, or a
    /// formula that should be refuted at world 0 is not.
    pub fn has_interior_failure(&self) -> bool {
        self.failures()
            .any(|c| c.classification == Some(Classification::Interior))
            || self.refute.holds
            || self.refute_q.as_ref().is_some_and(|r| r.holds)
            || self.preceq_mismatches.as_ref().is_some_and(|m| !m.is_empty())
    }

    pub fn has_boundary_failure(&self) -> bool {
        self.failures()
            .any(|c| c.classification == Some(Classification::Boundary))
    }
}

fn evaluate(checker: &Checker<'_>, name: &str, f: &Formula, size: usize, margin: usize) -> Result<ConjunctResult, EvalError> {
    let prepared = checker.prepare(f)?;
    let g = Assignment::new();
    if prepared.forces(0, &g)? {
        return Ok(ConjunctResult {
            name: name.to_string(),
            holds: true,
            witness: None,
            classification: None,
        });
    }
    let cut = size - margin;
    let witness = match prepared.refutation(0, &g, Some(cut))? {
        Some(w) => Some(w),
        None => prepared.refutation(0, &g, None)?,
    };
    let classification = witness.as_ref().map(|w| {
        if w.max_index() >= cut {
            Classification::Boundary
        } else {
            Classification::Interior
        }
    });
    Ok(ConjunctResult {
        name: name.to_string(),
        holds: false,
        witness,
        classification,
    })
}

fn truth_only(checker: &Checker<'_>, name: &str, f: &Formula) -> Result<ConjunctResult, EvalError> {
    Ok(ConjunctResult {
        name: name.to_string(),
        holds: checker.forces(0, &Assignment::new(), f)?,
        witness: None,
        classification: None,
    })
}

/// Evaluates every named conjunct of the antecedent at world 0, then the
/// formulas the model is meant to refute there. In ψ mode also compares
/// `x ≼ y` at world 0 with `≤` on all pairs of individuals.
pub fn conjunct_report(
    m: &Lemma1Model,
    ts: &TileSet,
    margin: usize,
    mode: Mode,
) -> Result<ConjunctReport, CountermodelError> {
    if margin >= m.size {
        return Err(CountermodelError::Margin { margin, size: m.size });
    }
    let checker = Checker::new(&m.model);
    let conjuncts = reduction::named_conjuncts(ts, mode)?
        .iter()
        .map(|c| evaluate(&checker, c.name, &c.formula, m.size, margin))
        .collect::<Result<Vec<_>, _>>()?;
    let refute = truth_only(&checker, "Refute", &reduction::build_refute())?;
    let (refute_q, preceq_mismatches) = match mode {
        Mode::Phi => (None, None),
        Mode::Psi => (
            Some(truth_only(&checker, "Refute_Q", &reduction::build_refute_q())?),
            Some(preceq_mismatches(m)?),
        ),
    };
    Ok(ConjunctReport {
        size: m.size,
        margin,
        mode: match mode {
            Mode::Phi => "phi",
            Mode::Psi => "psi",
        },
        conjuncts,
        refute,
        refute_q,
        preceq_mismatches,
    })
}

/// Pairs on which `Q(b) → Q(a)` at world 0 differs from `a ≤ b`.
pub fn preceq_mismatches(m: &Lemma1Model) -> Result<Vec<PreceqMismatch>, EvalError> {
    let checker = Checker::new(&m.model);
    let preceq = parse_formula("Q(y) -> Q(x)").expect("fixed text");
    let prepared = checker.prepare(&preceq)?;
    let mut out = Vec::new();
    for a in 0..=m.size {
        for b in 0..=m.size {
            let g = Assignment::new().with("x", a).with("y", b);
            let forced = prepared.forces(0, &g)?;
            if forced != (a <= b) {
                out.push(PreceqMismatch { a, b, forced });
            }
        }
    }
    Ok(out)
}

fn least_refuted(m: &Lemma1Model, k: usize, text: &str) -> Result<usize, CountermodelError> {
    if k > m.size {
        return Err(CountermodelError::NotAttained { k, size: m.size });
    }
    let checker = Checker::new(&m.model);
    let f = parse_formula(text).expect("fixed text");
    let prepared = checker.prepare(&f)?;
    for candidate in 0..=m.size {
        let g = Assignment::new().with("x", k).with("y", candidate);
        if !prepared.forces(0, &g)? {
            return Ok(candidate);
        }
    }
    Err(CountermodelError::NotAttained { k, size: m.size })
}

/// Least `m` with `0 ⊭ Q(a_k) ∧ right(a_m) → Q'(a_k) ∨ S''(a_m)`.
pub fn right_prime(m: &Lemma1Model, k: usize) -> Result<usize, CountermodelError> {
    least_refuted(m, k, "Q(x) & right(y) -> Q'(x) | S''(y)")
}

/// Least `m` with `0 ⊭ Q(a_k) ∧ above(a_m) → Q'(a_k) ∨ S'(a_m)`.
pub fn above_prime(m: &Lemma1Model, k: usize) -> Result<usize, CountermodelError> {
    least_refuted(m, k, "Q(x) & above(y) -> Q'(x) | S'(y)")
}

/// One row of the `verify-sublemma` table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SublemmaRow {
    pub k: usize,
    pub right: u64,
    pub right_prime: usize,
    pub above: u64,
    pub above_prime: usize,
}

impl SublemmaRow {
    pub fn agrees(&self) -> bool {
        self.right == self.right_prime as u64 && self.above == self.above_prime as u64
    }
}

/// Size needed so that the checks for every `k ≤ kmax` stay inside the
/// domain: `above(above(kmax)) + 3`.
pub fn sublemma_size(kmax: usize) -> Result<usize, grid::Overflow> {
    let a = grid::above(grid::above(kmax as u64)?)?;
    Ok(a as usize + 3)
}

pub fn sublemma_table(m: &Lemma1Model, kmax: usize) -> Result<Vec<SublemmaRow>, CountermodelError> {
    (0..=kmax)
        .map(|k| {
            Ok(SublemmaRow {
                k,
                right: grid::right(k as u64)?,
                right_prime: right_prime(m, k)?,
                above: grid::above(k as u64)?,
                above_prime: above_prime(m, k)?,
            })
        })
        .collect()
}
