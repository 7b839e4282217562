//! One-tape machines whose tape starts with an end marker `#` in cell 0,
//! run on the blank tape, and their translation into tile types whose
//! tilings spell out the computation row by row.
//!
//! Tile colours are [`Color`] values. They are rendered to strings for
//! [`TileSet`] as `⊗`, `*`, `**`, a bare symbol name, or `(state,symbol)`;
//! names may not contain `(`, `)`, `,`, `*`, `⊗` or whitespace, so distinct
//! colours never render alike.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tiles::{check_constraints, TileError, TileGrid, TileSet, TileType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    S,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub state: usize,
    pub symbol: usize,
    pub shift: Move,
}

#[derive(Debug, Error)]
pub enum TmError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed machine file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid name `{0}`: names are nonempty and avoid whitespace and ( ) , * ⊗")]
    BadName(String),
    #[error("`{0}` is listed twice")]
    Duplicate(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("instruction for ({state}, {symbol}) is given twice")]
    DuplicateInstruction { state: String, symbol: String },
    #[error("blank and marker must be different symbols")]
    BlankIsMarker,
    #[error("the machine breaks the program conditions: {0}")]
    Invalid(String),
    #[error("at step {step} the head would move left of cell 0")]
    FellOff { step: usize },
    #[error("row {row} of the tiling has {count} completions")]
    Ambiguous { row: usize, count: usize },
    #[error("row {row} of the tiling cannot be completed")]
    Stuck { row: usize },
    #[error(transparent)]
    Tile(#[from] TileError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rule {
    pub from: (String, String),
    pub to: (String, String, Move),
}

/// The machine file as written on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    pub alphabet: Vec<String>,
    pub blank: String,
    pub marker: String,
    pub states: Vec<String>,
    pub initial: String,
    pub halting: String,
    pub delta: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    alphabet: Vec<String>,
    states: Vec<String>,
    blank: usize,
    marker: usize,
    initial: usize,
    halting: usize,
    /// Indexed by `state * |alphabet| + symbol`.
    delta: Vec<Option<Instruction>>,
}

fn check_name(n: &str) -> Result<(), TmError> {
    let bad = n.is_empty() || n.chars().any(|c| c.is_whitespace() || "(),*⊗".contains(c));
    if bad {
        Err(TmError::BadName(n.to_string()))
    } else {
        Ok(())
    }
}

fn index_of(names: &[String]) -> Result<HashMap<&str, usize>, TmError> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        check_name(n)?;
        if map.insert(n.as_str(), i).is_some() {
            return Err(TmError::Duplicate(n.clone()));
        }
    }
    Ok(map)
}

impl TuringMachine {
    pub fn from_file(file: &MachineFile) -> Result<Self, TmError> {
        let sym = index_of(&file.alphabet)?;
        let st = index_of(&file.states)?;
        let s = |n: &String| sym.get(n.as_str()).copied().ok_or_else(|| TmError::UnknownSymbol(n.clone()));
        let q = |n: &String| st.get(n.as_str()).copied().ok_or_else(|| TmError::UnknownState(n.clone()));
        let blank = s(&file.blank)?;
        let marker = s(&file.marker)?;
        if blank == marker {
            return Err(TmError::BlankIsMarker);
        }
        let width = file.alphabet.len();
        let mut delta = vec![None; file.states.len() * width];
        for rule in &file.delta {
            let (from_q, from_s) = (q(&rule.from.0)?, s(&rule.from.1)?);
            let slot = &mut delta[from_q * width + from_s];
            if slot.is_some() {
                return Err(TmError::DuplicateInstruction {
                    state: rule.from.0.clone(),
                    symbol: rule.from.1.clone(),
                });
            }
            *slot = Some(Instruction {
                state: q(&rule.to.0)?,
                symbol: s(&rule.to.1)?,
                shift: rule.to.2,
            });
        }
        Ok(TuringMachine {
            alphabet: file.alphabet.clone(),
            states: file.states.clone(),
            blank,
            marker,
            initial: q(&file.initial)?,
            halting: q(&file.halting)?,
            delta,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, TmError> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TmError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TmError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_file(&self) -> MachineFile {
        let mut delta = Vec::new();
        for q in 0..self.states.len() {
            for s in 0..self.alphabet.len() {
                if let Some(i) = self.instruction(q, s) {
                    delta.push(Rule {
                        from: (self.states[q].clone(), self.alphabet[s].clone()),
                        to: (self.states[i.state].clone(), self.alphabet[i.symbol].clone(), i.shift),
                    });
                }
            }
        }
        MachineFile {
            alphabet: self.alphabet.clone(),
            blank: self.alphabet[self.blank].clone(),
            marker: self.alphabet[self.marker].clone(),
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            halting: self.states[self.halting].clone(),
            delta,
        }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn marker(&self) -> usize {
        self.marker
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn halting(&self) -> usize {
        self.halting
    }

    pub fn instruction(&self, state: usize, symbol: usize) -> Option<Instruction> {
        self.delta[state * self.alphabet.len() + symbol]
    }
}

/// A broken program condition at one `(state, symbol)` entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum TmViolation {
    /// No instruction for this pair.
    Missing { state: String, symbol: String },
    /// Reads the marker iff it writes the marker.
    Marker { state: String, symbol: String },
    /// Never moves left from the marker.
    LeftOfMarker { state: String, symbol: String },
    /// The halting state stays put and changes nothing.
    HaltingLoop { state: String, symbol: String },
}

impl fmt::Display for TmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TmViolation::Missing { state, symbol } => write!(f, "({state}, {symbol}): no instruction"),
            TmViolation::Marker { state, symbol } => {
                write!(f, "({state}, {symbol}): s = # must hold exactly when s' = #")
            }
            TmViolation::LeftOfMarker { state, symbol } => {
                write!(f, "({state}, {symbol}): moves left from the marker")
            }
            TmViolation::HaltingLoop { state, symbol } => write!(
                f,
                "({state}, {symbol}): the halting state must keep its state and symbol and stay put"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TmReport {
    pub violations: Vec<TmViolation>,
}

impl TmReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_tm(m: &TuringMachine) -> TmReport {
    let mut out = Vec::new();
    for q in 0..m.states.len() {
        for s in 0..m.alphabet.len() {
            let state = m.states[q].clone();
            let symbol = m.alphabet[s].clone();
            let Some(i) = m.instruction(q, s) else {
                out.push(TmViolation::Missing { state, symbol });
                continue;
            };
            if (s == m.marker) != (i.symbol == m.marker) {
                out.push(TmViolation::Marker {
                    state: state.clone(),
                    symbol: symbol.clone(),
                });
            }
            if s == m.marker && i.shift == Move::L {
                out.push(TmViolation::LeftOfMarker {
                    state: state.clone(),
                    symbol: symbol.clone(),
                });
            }
            if q == m.halting && (i.state != q || i.symbol != s || i.shift != Move::S) {
                out.push(TmViolation::HaltingLoop { state, symbol });
            }
        }
    }
    TmReport { violations: out }
}

fn require_valid(m: &TuringMachine) -> Result<(), TmError> {
    let report = validate_tm(m);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(TmError::Invalid(v.to_string())),
    }
}

/// Tape contents up to the last non-blank cell, head position and state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub tape: Vec<usize>,
    pub head: usize,
    pub state: usize,
}

impl Configuration {
    pub fn initial(m: &TuringMachine) -> Self {
        Configuration {
            tape: vec![m.marker],
            head: 0,
            state: m.initial,
        }
    }

    pub fn read(&self, m: &TuringMachine, cell: usize) -> usize {
        self.tape.get(cell).copied().unwrap_or(m.blank)
    }

    /// The first `len` cells as colours, with the scanned cell tagged by the
    /// state.
    pub fn colors(&self, m: &TuringMachine, len: usize) -> Vec<Color> {
        (0..len)
            .map(|c| {
                let s = self.read(m, c);
                if c == self.head {
                    Color::Pair(self.state, s)
                } else {
                    Color::Symbol(s)
                }
            })
            .collect()
    }

    /// `v [q] v'`, cells separated by spaces.
    pub fn render(&self, m: &TuringMachine) -> String {
        let len = self.tape.len().max(self.head + 1);
        let mut parts = Vec::with_capacity(len + 1);
        for c in 0..len {
            if c == self.head {
                parts.push(format!("[{}]", m.states[self.state]));
            }
            parts.push(m.alphabet[self.read(m, c)].clone());
        }
        parts.join(" ")
    }
}

fn step(m: &TuringMachine, c: &Configuration, index: usize) -> Result<Configuration, TmError> {
    let s = c.read(m, c.head);
    let i = m
        .instruction(c.state, s)
        .ok_or_else(|| TmError::Invalid(format!("no instruction for ({}, {})", m.states[c.state], m.alphabet[s])))?;
    let mut tape = c.tape.clone();
    if c.head >= tape.len() {
        tape.resize(c.head + 1, m.blank);
    }
    tape[c.head] = i.symbol;
    while tape.len() > 1 && tape.last() == Some(&m.blank) {
        tape.pop();
    }
    let head = match i.shift {
        Move::L => c.head.checked_sub(1).ok_or(TmError::FellOff { step: index })?,
        Move::S => c.head,
        Move::R => c.head + 1,
    };
    Ok(Configuration {
        tape,
        head,
        state: i.state,
    })
}

/// `C_0, …, C_steps` from the blank tape.
pub fn run_blank(m: &TuringMachine, steps: usize) -> Result<Vec<Configuration>, TmError> {
    require_valid(m)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(Configuration::initial(m));
    for k in 0..steps {
        let next = step(m, &out[k], k + 1)?;
        out.push(next);
    }
    Ok(out)
}

/// The step at which the halting state is first entered, if within `steps`.
pub fn halting_step(m: &TuringMachine, steps: usize) -> Result<Option<usize>, TmError> {
    Ok(run_blank(m, steps)?.iter().position(|c| c.state == m.halting))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Cross,
    Star,
    DoubleStar,
    Symbol(usize),
    Pair(usize, usize),
}

impl Color {
    pub fn render(&self, m: &TuringMachine) -> String {
        match *self {
            Color::Cross => "⊗".into(),
            Color::Star => "*".into(),
            Color::DoubleStar => "**".into(),
            Color::Symbol(s) => m.alphabet[s].clone(),
            Color::Pair(q, s) => format!("({},{})", m.states[q], m.alphabet[s]),
        }
    }
}

/// A tile of the machine's tile set with its structured edge colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineTile {
    pub name: String,
    pub left: Color,
    pub right: Color,
    pub up: Color,
    pub down: Color,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineTiles {
    pub tiles: Vec<MachineTile>,
    pub set: TileSet,
}

impl MachineTiles {
    pub fn position(&self, name: &str) -> Option<usize> {
        self.tiles.iter().position(|t| t.name == name)
    }
}

/// The tile set of `m`.
///
/// Order: `t0`, `t1 = t[q1,#]`, `t[_]**`, `t[s]*` for every non-marker
/// symbol in alphabet order, `t[#]*`, then for every other `(q, s)` in
/// state-then-alphabet order the instruction tile `t[q,s]` followed by its
/// companions `t[q,s]^a` in alphabet order.
pub fn tm_to_tiles(m: &TuringMachine) -> Result<MachineTiles, TmError> {
    require_valid(m)?;
    let name = |q: usize, s: usize| format!("t[{},{}]", m.states[q], m.alphabet[s]);
    let sym = |s: usize| m.alphabet[s].as_str();
    let mut tiles = Vec::new();
    let mut push = |name: String, left, right, up, down| {
        tiles.push(MachineTile { name, left, right, up, down });
    };
    use Color::*;

    push("t0".into(), Cross, DoubleStar, Pair(m.initial, m.marker), Cross);
    let instruction_tiles = |q: usize, s: usize| -> Vec<MachineTile> {
        let i = m.instruction(q, s).expect("validated");
        let qs = Pair(q, s);
        let base = name(q, s);
        let is_marker = s == m.marker;
        let mut out = Vec::new();
        let mut add = |name: String, left, right, up, down| out.push(MachineTile { name, left, right, up, down });
        match i.shift {
            Move::S => {
                let left = if is_marker { Cross } else { Star };
                add(base, left, Star, Pair(i.state, i.symbol), qs);
            }
            Move::R => {
                let left = if is_marker { Cross } else { Star };
                add(base.clone(), left, qs, Symbol(i.symbol), qs);
                for a in (0..m.alphabet.len()).filter(|&a| a != m.marker) {
                    add(format!("{base}^{}", sym(a)), qs, Star, Pair(i.state, a), Symbol(a));
                }
            }
            Move::L => {
                add(base.clone(), qs, Star, Symbol(i.symbol), qs);
                for a in 0..m.alphabet.len() {
                    let left = if a == m.marker { Cross } else { Star };
                    add(format!("{base}^{}", sym(a)), left, qs, Pair(i.state, a), Symbol(a));
                }
            }
        }
        out
    };
    for t in instruction_tiles(m.halting, m.marker) {
        push(t.name, t.left, t.right, t.up, t.down);
    }
    push(format!("t[{}]**", sym(m.blank)), DoubleStar, DoubleStar, Symbol(m.blank), Cross);
    for s in (0..m.alphabet.len()).filter(|&s| s != m.marker) {
        push(format!("t[{}]*", sym(s)), Star, Star, Symbol(s), Symbol(s));
    }
    push(format!("t[{}]*", sym(m.marker)), Cross, Star, Symbol(m.marker), Symbol(m.marker));
    for q in 0..m.states.len() {
        for s in 0..m.alphabet.len() {
            if (q, s) == (m.halting, m.marker) {
                continue;
            }
            for t in instruction_tiles(q, s) {
                push(t.name, t.left, t.right, t.up, t.down);
            }
        }
    }

    let set = TileSet::new(
        tiles
            .iter()
            .enumerate()
            .map(|(id, t)| TileType {
                id,
                left: t.left.render(m),
                right: t.right.render(m),
                up: t.up.render(m),
                down: t.down.render(m),
            })
            .collect(),
    )?;
    Ok(MachineTiles { tiles, set })
}

/// Fills one row given the colours required on its lower edge (`None` for
/// row 0), the tile pinned at column 0 (row 0 only) and the colour required
/// on the right edge of the last cell. Returns all completions, stopping
/// after two.
fn complete_row(
    tiles: &[MachineTile],
    downs: Option<&[Color]>,
    first: Option<usize>,
    width: usize,
    right_end: Color,
) -> Vec<Vec<usize>> {
    fn go(
        tiles: &[MachineTile],
        downs: Option<&[Color]>,
        first: Option<usize>,
        width: usize,
        right_end: Color,
        row: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= 2 {
            return;
        }
        let c = row.len();
        if c == width {
            if tiles[row[c - 1]].right == right_end {
                out.push(row.clone());
            }
            return;
        }
        for id in 0..tiles.len() {
            if c == 0 && first.is_some_and(|f| f != id) {
                continue;
            }
            let t = &tiles[id];
            if downs.is_some_and(|d| d[c] != t.down) {
                continue;
            }
            if c > 0 && tiles[row[c - 1]].right != t.left {
                continue;
            }
            row.push(id);
            go(tiles, downs, first, width, right_end, row, out);
            row.pop();
        }
    }
    let mut out = Vec::new();
    go(tiles, downs, first, width, right_end, &mut Vec::new(), &mut out);
    out
}

/// Result of building the forced tiling and reading off its rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub width: usize,
    pub configurations: Vec<Configuration>,
    pub grid: TileGrid,
    /// Rows whose upper edge does not spell the configuration.
    pub mismatched_rows: Vec<usize>,
    /// Number of matching-condition violations in the grid.
    pub constraint_violations: usize,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.mismatched_rows.is_empty() && self.constraint_violations == 0
    }
}

/// Builds the tiling of a `width × rows` window one row at a time, each row
/// forced by the one below it, and compares the upper edge of row `k` with
/// `C_k`. The width is two more than the furthest head position among
/// `C_0, …, C_{rows-1}`. A row with no completion or with more than one is
/// an error.
pub fn rows_equal_configs(m: &TuringMachine, rows: usize) -> Result<RowCheck, TmError> {
    let tiles = tm_to_tiles(m)?;
    let configurations = run_blank(m, rows.saturating_sub(1))?;
    let width = configurations.iter().map(|c| c.head).max().unwrap_or(0) + 2;

    let mut grid_rows: Vec<Vec<usize>> = Vec::with_capacity(rows);
    let mut mismatched_rows = Vec::new();
    for (k, config) in configurations.iter().enumerate().take(rows) {
        let (downs, first, end) = match grid_rows.last() {
            None => (None, Some(0), Color::DoubleStar),
            Some(prev) => (
                Some(prev.iter().map(|&id| tiles.tiles[id].up).collect::<Vec<_>>()),
                None,
                Color::Star,
            ),
        };
        let found = complete_row(&tiles.tiles, downs.as_deref(), first, width, end);
        let row = match found.len() {
            0 => return Err(TmError::Stuck { row: k }),
            1 => found.into_iter().next().expect("one"),
            count => return Err(TmError::Ambiguous { row: k, count }),
        };
        let ups: Vec<Color> = row.iter().map(|&id| tiles.tiles[id].up).collect();
        if ups != config.colors(m, width) {
            mismatched_rows.push(k);
        }
        grid_rows.push(row);
    }
    let grid = TileGrid::from_rows(grid_rows)?;
    let constraint_violations = check_constraints(&grid, &tiles.set)?.len();
    Ok(RowCheck {
        width,
        configurations,
        grid,
        mismatched_rows,
        constraint_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::{check_boundary, solve_window, FixedCells};

    fn machine(rules: &[(&str, &str, &str, &str, Move)], alphabet: &[&str], states: &[&str]) -> TuringMachine {
        let file = MachineFile {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            blank: "_".into(),
            marker: "#".into(),
            states: states.iter().map(|s| s.to_string()).collect(),
            initial: "q0".into(),
            halting: "q1".into(),
            delta: rules
                .iter()
                .map(|&(q, s, q2, s2, d)| Rule {
                    from: (q.into(), s.into()),
                    to: (q2.into(), s2.into(), d),
                })
                .collect(),
        };
        TuringMachine::from_file(&file).unwrap()
    }

    fn demo() -> TuringMachine {
        machine(
            &[
                ("q0", "#", "q1", "#", Move::S),
                ("q0", "_", "q0", "_", Move::S),
                ("q1", "#", "q1", "#", Move::S),
                ("q1", "_", "q1", "_", Move::S),
            ],
            &["#", "_"],
            &["q0", "q1"],
        )
    }

    fn writes_and_returns() -> TuringMachine {
        machine(
            &[
                ("q0", "#", "q0", "#", Move::R),
                ("q0", "_", "q2", "a", Move::L),
                ("q0", "a", "q0", "a", Move::S),
                ("q1", "#", "q1", "#", Move::S),
                ("q1", "_", "q1", "_", Move::S),
                ("q1", "a", "q1", "a", Move::S),
                ("q2", "#", "q1", "#", Move::S),
                ("q2", "_", "q2", "_", Move::S),
                ("q2", "a", "q2", "a", Move::S),
            ],
            &["#", "_", "a"],
            &["q0", "q1", "q2"],
        )
    }

    #[test]
    fn demo_is_valid() {
        assert!(validate_tm(&demo()).is_valid());
        assert!(validate_tm(&writes_and_returns()).is_valid());
    }

    #[test]
    fn marker_condition() {
        let m = machine(
            &[
                ("q0", "#", "q0", "a", Move::R),
                ("q0", "a", "q0", "a", Move::S),
                ("q0", "_", "q0", "_", Move::S),
                ("q1", "#", "q1", "#", Move::S),
                ("q1", "a", "q1", "a", Move::S),
                ("q1", "_", "q1", "_", Move::S),
            ],
            &["#", "_", "a"],
            &["q0", "q1"],
        );
        let r = validate_tm(&m);
        assert_eq!(
            r.violations,
            vec![TmViolation::Marker {
                state: "q0".into(),
                symbol: "#".into()
            }]
        );
    }

    #[test]
    fn halting_loop_condition() {
        let m = machine(
            &[
                ("q0", "#", "q0", "#", Move::S),
                ("q0", "_", "q0", "_", Move::S),
                ("q1", "#", "q1", "#", Move::S),
                ("q1", "_", "q0", "_", Move::S),
            ],
            &["#", "_"],
            &["q0", "q1"],
        );
        assert!(matches!(
            validate_tm(&m).violations.as_slice(),
            [TmViolation::HaltingLoop { .. }]
        ));
    }

    #[test]
    fn missing_and_left_of_marker() {
        let m = machine(&[("q0", "#", "q0", "#", Move::L)], &["#", "_"], &["q0", "q1"]);
        let r = validate_tm(&m);
        assert!(r.violations.iter().any(|v| matches!(v, TmViolation::LeftOfMarker { .. })));
        assert_eq!(
            r.violations.iter().filter(|v| matches!(v, TmViolation::Missing { .. })).count(),
            3
        );
        assert!(run_blank(&m, 1).is_err());
    }

    #[test]
    fn demo_run() {
        let m = demo();
        let run = run_blank(&m, 3).unwrap();
        let text: Vec<String> = run.iter().map(|c| c.render(&m)).collect();
        assert_eq!(text, ["[q0] #", "[q1] #", "[q1] #", "[q1] #"]);
        assert_eq!(halting_step(&m, 3).unwrap(), Some(1));
    }

    #[test]
    fn halts_at_cell_zero() {
        let m = writes_and_returns();
        let run = run_blank(&m, 4).unwrap();
        let text: Vec<String> = run.iter().map(|c| c.render(&m)).collect();
        assert_eq!(text, ["[q0] #", "# [q0] _", "[q2] # a", "[q1] # a", "[q1] # a"]);
        assert_eq!(halting_step(&m, 10).unwrap(), Some(3));
    }

    #[test]
    fn demo_tiles() {
        let m = demo();
        let t = tm_to_tiles(&m).unwrap();
        let names: Vec<&str> = t.tiles.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(
            names,
            ["t0", "t[q1,#]", "t[_]**", "t[_]*", "t[#]*", "t[q0,#]", "t[q0,_]", "t[q1,_]"]
        );
        let t0 = t.set.get(0).unwrap();
        assert_eq!(
            (t0.left.as_str(), t0.right.as_str(), t0.up.as_str(), t0.down.as_str()),
            ("⊗", "**", "(q0,#)", "⊗")
        );
    }

    #[test]
    fn right_move_tiles() {
        let m = writes_and_returns();
        let t = tm_to_tiles(&m).unwrap();
        let qs = &t.tiles[t.position("t[q0,#]").unwrap()];
        assert_eq!(qs.right, Color::Pair(0, 0));
        assert_eq!(qs.up, Color::Symbol(0));
        assert_eq!(qs.left, Color::Cross);
        let comp = &t.tiles[t.position("t[q0,#]^a").unwrap()];
        assert_eq!((comp.left, comp.up, comp.down), (Color::Pair(0, 0), Color::Pair(0, 2), Color::Symbol(2)));
        assert!(t.position("t[q0,#]^#").is_none());
        // left move companions include the marker variant
        assert!(t.position("t[q0,_]^#").is_some());
        assert_eq!(t.tiles[t.position("t[q0,_]^#").unwrap()].left, Color::Cross);
    }

    #[test]
    fn rows_match_configurations() {
        for m in [demo(), writes_and_returns()] {
            let r = rows_equal_configs(&m, 10).unwrap();
            assert!(r.passed(), "{:?}", r.mismatched_rows);
        }
        let one = rows_equal_configs(&demo(), 1).unwrap();
        assert!(one.passed());
        assert_eq!(one.grid.rows()[0], vec![0, 2]);
    }

    #[test]
    fn boundary_after_halting() {
        let m = writes_and_returns();
        let h = halting_step(&m, 20).unwrap().unwrap();
        let r = rows_equal_configs(&m, 12).unwrap();
        let t = tm_to_tiles(&m).unwrap();
        assert!(check_boundary(&r.grid, &t.set, h + 1));
        assert!(!check_boundary(&r.grid, &t.set, h));
    }

    #[test]
    fn window_solver_agrees_with_rows() {
        let m = demo();
        let t = tm_to_tiles(&m).unwrap();
        let g = solve_window(&t.set, 4, 4, &FixedCells::from([((0, 0), 0)])).unwrap().unwrap();
        let rows = rows_equal_configs(&m, 4).unwrap();
        assert_eq!(g.restrict(2, 4).unwrap(), rows.grid);
    }

    #[test]
    fn rejects_reserved_names() {
        let text = r##"{"alphabet": ["#", "_", "(a"], "blank": "_", "marker": "#", "states": ["q0", "q1"],
            "initial": "q0", "halting": "q1", "delta": []}"##;
        assert!(matches!(TuringMachine::from_json(text), Err(TmError::BadName(_))));
    }

    #[test]
    fn file_round_trip() {
        let m = writes_and_returns();
        let text = serde_json::to_string(&m.to_file()).unwrap();
        assert_eq!(TuringMachine::from_json(&text).unwrap(), m);
    }
}
