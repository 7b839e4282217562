//! The `qlc-tiling` command line. Each subcommand loads its inputs, calls
//! one library operation and wraps the result in a [`Report`].

use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::countermodel::{self, Classification, ConjunctResult};
use crate::grid;
use crate::reduction::{self, Mode};
use crate::semantics::{validate_model, Assignment, Checker, ModelFile};
use crate::syntax::{parse_formula, print_formula, signature_of};
use crate::tiles::{check_boundary, check_constraints, solve_window, FixedCells, TileSet};
use crate::turing::{self, validate_tm, TmError, TuringMachine};

#[derive(Debug, Parser)]
#[command(name = "qlc-tiling", version, about = "Tiling reductions, Kripke countermodels and their checks")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cantor enumeration table for k = 0..=K as CSV.
    Grid {
        #[arg(long, value_name = "K")]
        upto: u64,
    },
    /// Print the reduction formula of a tile set.
    Reduce {
        #[arg(long, value_name = "FILE")]
        tiles: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// Replace ⊥ by ∀x Q'(x).
        #[arg(long)]
        positive: bool,
        /// Print one named conjunct instead of the whole formula.
        #[arg(long, value_name = "NAME")]
        conjunct: Option<String>,
    },
    /// Search a finite window for a tiling.
    TileSolve {
        #[arg(long, value_name = "FILE")]
        tiles: PathBuf,
        #[arg(long, value_name = "W")]
        width: usize,
        #[arg(long, value_name = "H")]
        height: usize,
        /// Pin a cell, as `i,j=id`. Repeatable.
        #[arg(long = "fix", value_name = "I,J=ID", value_parser = parse_fixed)]
        fixed: Vec<((usize, usize), usize)>,
    },
    /// Run a machine on the blank tape.
    TmRun {
        machine: PathBuf,
        #[arg(long, value_name = "K")]
        steps: usize,
    },
    /// Print the tile set of a machine as a tile file.
    TmTiles { machine: PathBuf },
    /// Check a machine and compare its forced tiling with its run.
    VerifyTm {
        machine: PathBuf,
        #[arg(long, value_name = "K")]
        rows: usize,
    },
    /// Write the truncated countermodel of a tile set as a model file.
    ModelBuild {
        #[arg(long, value_name = "FILE")]
        tiles: PathBuf,
        #[arg(long, value_name = "N")]
        size: usize,
    },
    /// Evaluate a closed formula on a model file.
    ModelCheck {
        model: PathBuf,
        /// Formula text, or `@FILE` to read it from a file.
        formula: String,
        /// Only this world; by default every world.
        #[arg(long, value_name = "W")]
        world: Option<usize>,
    },
    /// Evaluate every conjunct of the reduction on the truncated countermodel.
    VerifyLemma1 {
        #[arg(long, value_name = "FILE")]
        tiles: PathBuf,
        #[arg(long, value_name = "N")]
        size: usize,
        #[arg(long, value_name = "M", default_value_t = 3)]
        margin: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Compare right/above with the values read off the countermodel.
    VerifySublemma {
        #[arg(long, value_name = "FILE")]
        tiles: PathBuf,
        #[arg(long, value_name = "K")]
        kmax: usize,
        /// Model size; by default the smallest size that covers K.
        #[arg(long, value_name = "N")]
        size: Option<usize>,
    },
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct ModeArgs {
    /// The ⊥-using formula φ (default).
    #[arg(long)]
    phi: bool,
    /// The formula ψ with the ≼ conjuncts.
    #[arg(long)]
    psi: bool,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        if self.psi {
            Mode::Psi
        } else {
            Mode::Phi
        }
    }
}

fn parse_fixed(s: &str) -> Result<((usize, usize), usize), String> {
    let bad = || format!("expected I,J=ID, got `{s}`");
    let (cell, id) = s.split_once('=').ok_or_else(bad)?;
    let (i, j) = cell.split_once(',').ok_or_else(bad)?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    Ok(((n(i)?, n(j)?), n(id)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Only failures attributed to the finite cut-off.
    Partial,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Partial => "PARTIAL",
        })
    }
}

/// One record of a report: structured data for JSON and a line for people.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub data: Value,
    pub line: String,
}

impl Finding {
    pub fn new(data: impl Serialize, line: impl Into<String>) -> Self {
        Finding {
            data: serde_json::to_value(data).expect("findings are plain data"),
            line: line.into(),
        }
    }
}

impl Serialize for Finding {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.data.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub status: Status,
    pub findings: Vec<Finding>,
    /// Primary text output (CSV, formula, file contents), if any.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub output: String,
    /// In human mode, print only `output`.
    #[serde(skip)]
    pub plain: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    fn new(status: Status) -> Self {
        Report {
            command: Vec::new(),
            status,
            findings: Vec::new(),
            output: String::new(),
            plain: false,
            elapsed: Duration::ZERO,
        }
    }

    fn generated(output: String) -> Self {
        Report {
            output,
            plain: true,
            ..Report::new(Status::Pass)
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass | Status::Partial => 0,
            Status::Fail => 1,
        }
    }
}

/// Renders a report. Elapsed time is never part of the text.
pub fn emit_report(r: &Report, json: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(r).expect("reports always serialize");
        s.push('\n');
        return s;
    }
    let mut s = String::new();
    if !r.output.is_empty() {
        s.push_str(&r.output);
        if !s.ends_with('\n') {
            s.push('\n');
        }
    }
    if r.plain {
        return s;
    }
    if r.output.is_empty() {
        for f in &r.findings {
            s.push_str(&f.line);
            s.push('\n');
        }
    }
    s.push_str(&format!("{} ({} findings)\n", r.status, r.findings.len()));
    s
}

/// What the process should do: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct CliError(String);

fn input<E: fmt::Display>(e: E) -> CliError {
    CliError(e.to_string())
}

/// Runs one command line. `argv` excludes the program name.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("qlc-tiling".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let start = Instant::now();
    match dispatch(cli.command) {
        Ok(mut report) => {
            report.command = argv;
            report.elapsed = start.elapsed();
            let stderr = if cli.json || report.plain {
                String::new()
            } else {
                format!("elapsed: {:.3} s\n", report.elapsed.as_secs_f64())
            };
            Outcome {
                code: report.exit_code(),
                stdout: emit_report(&report, cli.json),
                stderr,
            }
        }
        Err(CliError(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::Grid { upto } => grid_cmd(upto),
        Command::Reduce {
            tiles,
            mode,
            positive,
            conjunct,
        } => reduce_cmd(&tiles, mode.mode(), positive, conjunct.as_deref()),
        Command::TileSolve {
            tiles,
            width,
            height,
            fixed,
        } => tile_solve_cmd(&tiles, width, height, fixed.into_iter().collect()),
        Command::TmRun { machine, steps } => tm_run_cmd(&machine, steps),
        Command::TmTiles { machine } => tm_tiles_cmd(&machine),
        Command::VerifyTm { machine, rows } => verify_tm_cmd(&machine, rows),
        Command::ModelBuild { tiles, size } => model_build_cmd(&tiles, size),
        Command::ModelCheck { model, formula, world } => model_check_cmd(&model, &formula, world),
        Command::VerifyLemma1 {
            tiles,
            size,
            margin,
            mode,
        } => verify_lemma1_cmd(&tiles, size, margin, mode.mode()),
        Command::VerifySublemma { tiles, kmax, size } => verify_sublemma_cmd(&tiles, kmax, size),
    }
}

fn grid_cmd(upto: u64) -> Result<Report, CliError> {
    let rows = grid::table(upto).map_err(|_| CliError(format!("grid values overflow below k = {upto}")))?;
    let mut r = Report::generated(grid::table_csv(&rows));
    r.findings = rows
        .iter()
        .map(|row| {
            let line = format!(
                "{},{},{},{},{},{},{}",
                row.k, row.i, row.j, row.right, row.above, row.wall, row.floor
            );
            Finding::new(row, line)
        })
        .collect();
    Ok(r)
}

fn reduce_cmd(tiles: &PathBuf, mode: Mode, positive: bool, name: Option<&str>) -> Result<Report, CliError> {
    let ts = TileSet::load(tiles).map_err(input)?;
    let mut f = match name {
        Some(n) => reduction::conjunct(&ts, mode, n).map_err(input)?,
        None => reduction::build(&ts, mode, false).map_err(input)?,
    };
    if positive {
        f = crate::syntax::to_positive(&f);
    }
    let sig = signature_of(&f);
    let mut r = Report::generated(print_formula(&f));
    let vars: Vec<String> = sig.variables.iter().cloned().collect();
    r.findings.push(Finding::new(
        json!({
            "variables": vars,
            "binary_letters": sig.binary_count(),
            "unary_letters": sig.unary_count(),
            "bottoms": f.bottom_count(),
        }),
        format!(
            "variables {}; {} binary, {} unary letters; {} ⊥",
            vars.join(","),
            sig.binary_count(),
            sig.unary_count(),
            f.bottom_count()
        ),
    ));
    Ok(r)
}

fn tile_solve_cmd(tiles: &PathBuf, width: usize, height: usize, fixed: FixedCells) -> Result<Report, CliError> {
    let ts = TileSet::load(tiles).map_err(input)?;
    match solve_window(&ts, width, height, &fixed).map_err(input)? {
        None => {
            let mut r = Report::new(Status::Fail);
            r.findings.push(Finding::new(
                json!({"solvable": false, "width": width, "height": height}),
                format!("no tiling of the {width}x{height} window"),
            ));
            Ok(r)
        }
        Some(g) => {
            let violations = check_constraints(&g, &ts).map_err(input)?;
            let mut r = Report::new(if violations.is_empty() { Status::Pass } else { Status::Fail });
            r.output = g.render();
            r.findings = violations.iter().map(|v| Finding::new(v, v.to_string())).collect();
            Ok(r)
        }
    }
}

fn load_machine(path: &PathBuf) -> Result<TuringMachine, CliError> {
    TuringMachine::load(path).map_err(input)
}

fn tm_run_cmd(path: &PathBuf, steps: usize) -> Result<Report, CliError> {
    let m = load_machine(path)?;
    let run = turing::run_blank(&m, steps).map_err(input)?;
    let mut out = String::new();
    let mut findings = Vec::new();
    for (k, c) in run.iter().enumerate() {
        let text = c.render(&m);
        out.push_str(&format!("{k}: {text}\n"));
        findings.push(Finding::new(
            json!({
                "step": k,
                "state": m.states()[c.state],
                "head": c.head,
                "tape": c.tape.iter().map(|&s| m.alphabet()[s].as_str()).collect::<Vec<_>>(),
            }),
            text,
        ));
    }
    let mut r = Report::generated(out);
    r.findings = findings;
    Ok(r)
}

fn tm_tiles_cmd(path: &PathBuf) -> Result<Report, CliError> {
    let m = load_machine(path)?;
    let t = turing::tm_to_tiles(&m).map_err(input)?;
    let mut r = Report::generated(t.set.to_json());
    r.findings = t
        .tiles
        .iter()
        .enumerate()
        .map(|(id, tile)| Finding::new(json!({"id": id, "name": tile.name}), format!("{id} {}", tile.name)))
        .collect();
    Ok(r)
}

fn verify_tm_cmd(path: &PathBuf, rows: usize) -> Result<Report, CliError> {
    if rows == 0 {
        return Err(CliError("--rows must be at least 1".into()));
    }
    let m = load_machine(path)?;
    let validity = validate_tm(&m);
    if !validity.is_valid() {
        let mut r = Report::new(Status::Fail);
        r.findings = validity.violations.iter().map(|v| Finding::new(v, v.to_string())).collect();
        return Ok(r);
    }
    let check = match turing::rows_equal_configs(&m, rows) {
        Ok(c) => c,
        Err(e @ (TmError::Ambiguous { .. } | TmError::Stuck { .. })) => {
            let mut r = Report::new(Status::Fail);
            r.findings.push(Finding::new(json!({"tiling": e.to_string()}), e.to_string()));
            return Ok(r);
        }
        Err(e) => return Err(input(e)),
    };
    let tiles = turing::tm_to_tiles(&m).map_err(input)?;
    let halting = check.configurations.iter().position(|c| c.state == m.halting());
    let first_t1 = check.grid.rows().iter().position(|row| row[0] == 1);
    let boundary = match halting {
        Some(h) => h + 1 >= rows || check_boundary(&check.grid, &tiles.set, h + 1),
        None => first_t1.is_none(),
    };

    let mut findings: Vec<Finding> = check
        .mismatched_rows
        .iter()
        .map(|&k| {
            Finding::new(
                json!({"mismatched_row": k}),
                format!("row {k} does not spell configuration {k}"),
            )
        })
        .collect();
    if check.constraint_violations > 0 {
        findings.push(Finding::new(
            json!({"constraint_violations": check.constraint_violations}),
            format!("{} matching violations", check.constraint_violations),
        ));
    }
    findings.push(Finding::new(
        json!({
            "rows": rows,
            "width": check.width,
            "halting_step": halting,
            "first_t1_row": first_t1,
            "column_zero_consistent": boundary,
        }),
        format!(
            "{rows} rows of width {}; halting step {}; t1 first in column 0 at row {}",
            check.width,
            halting.map_or("none".into(), |h| h.to_string()),
            first_t1.map_or("none".into(), |j| j.to_string()),
        ),
    ));
    let mut r = Report::new(if check.passed() && boundary { Status::Pass } else { Status::Fail });
    r.findings = findings;
    Ok(r)
}

fn lemma1_model(tiles: &PathBuf, size: usize) -> Result<(TileSet, countermodel::Lemma1Model), CliError> {
    let ts = TileSet::load(tiles).map_err(input)?;
    let g = countermodel::covering_tiling(&ts, size).map_err(input)?;
    let m = countermodel::build_lemma1_model(&ts, &g, size).map_err(input)?;
    Ok((ts, m))
}

fn model_build_cmd(tiles: &PathBuf, size: usize) -> Result<Report, CliError> {
    let (_, m) = lemma1_model(tiles, size)?;
    Ok(Report::generated(ModelFile::from_model(&m.model).to_json()))
}

fn model_check_cmd(path: &PathBuf, formula: &str, world: Option<usize>) -> Result<Report, CliError> {
    let model = ModelFile::load(path).map_err(input)?.to_model().map_err(input)?;
    let text = match formula.strip_prefix('@') {
        Some(file) => std::fs::read_to_string(file).map_err(|e| CliError(format!("cannot read {file}: {e}")))?,
        None => formula.to_string(),
    };
    let f = parse_formula(&text).map_err(input)?;
    if !f.is_closed() {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        return Err(CliError(format!("formula has free variables: {}", free.join(", "))));
    }
    let validity = validate_model(&model);
    if !validity.is_valid() {
        let mut r = Report::new(Status::Fail);
        r.findings = validity.violations.iter().map(|v| Finding::new(v, v.to_string())).collect();
        return Ok(r);
    }
    let worlds: Vec<usize> = match world {
        Some(w) if w >= model.world_count() => {
            return Err(CliError(format!("world {w} out of range 0..{}", model.world_count())))
        }
        Some(w) => vec![w],
        None => (0..model.world_count()).collect(),
    };
    let checker = Checker::new(&model);
    let prepared = checker.prepare(&f).map_err(input)?;
    let g = Assignment::new();
    let mut all = true;
    let mut findings = Vec::new();
    for w in worlds {
        let forced = prepared.forces(w, &g).map_err(input)?;
        all &= forced;
        let witness = if forced { None } else { prepared.refutation(w, &g, None).map_err(input)? };
        let line = match &witness {
            None if forced => format!("world {w}: forced"),
            None => format!("world {w}: not forced"),
            Some(wt) => format!("world {w}: not forced, refuted at world {} with {}", wt.world, wt.assignment),
        };
        findings.push(Finding::new(json!({"world": w, "forced": forced, "witness": witness}), line));
    }
    let mut r = Report::new(if all { Status::Pass } else { Status::Fail });
    r.findings = findings;
    Ok(r)
}

fn conjunct_line(c: &ConjunctResult) -> String {
    let mut s = format!("{:<14} {}", c.name, if c.holds { "true" } else { "false" });
    if let Some(cl) = c.classification {
        s.push_str(match cl {
            Classification::Interior => "  interior",
            Classification::Boundary => "  boundary",
        });
    }
    if let Some(w) = &c.witness {
        s.push_str(&format!("  world {} {}", w.world, w.assignment));
    }
    s
}

fn verify_lemma1_cmd(tiles: &PathBuf, size: usize, margin: usize, mode: Mode) -> Result<Report, CliError> {
    let (ts, m) = lemma1_model(tiles, size)?;
    let report = countermodel::conjunct_report(&m, &ts, margin, mode).map_err(input)?;
    let status = if report.has_interior_failure() {
        Status::Fail
    } else if report.has_boundary_failure() {
        Status::Partial
    } else {
        Status::Pass
    };
    let mut findings: Vec<Finding> = report
        .conjuncts
        .iter()
        .chain([&report.refute])
        .chain(report.refute_q.iter())
        .map(|c| Finding::new(c, conjunct_line(c)))
        .collect();
    if let Some(mismatches) = &report.preceq_mismatches {
        findings.push(Finding::new(
            json!({"name": "preceq", "mismatches": mismatches}),
            format!("x ≼ y against x ≤ y at world 0: {} mismatches", mismatches.len()),
        ));
    }
    let mut r = Report::new(status);
    r.findings = findings;
    Ok(r)
}

fn verify_sublemma_cmd(tiles: &PathBuf, kmax: usize, size: Option<usize>) -> Result<Report, CliError> {
    let n = match size {
        Some(n) => n,
        None => countermodel::sublemma_size(kmax).map_err(|_| CliError(format!("kmax {kmax} is too large")))?,
    };
    let (_, m) = lemma1_model(tiles, n)?;
    let rows = countermodel::sublemma_table(&m, kmax).map_err(input)?;
    let mut csv = String::from("k,right,right_prime,above,above_prime\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.k, row.right, row.right_prime, row.above, row.above_prime
        ));
    }
    let all = rows.iter().all(|row| row.agrees());
    let mut r = Report::new(if all { Status::Pass } else { Status::Fail });
    r.output = csv;
    r.findings = rows
        .iter()
        .map(|row| Finding::new(json!({"agrees": row.agrees(), "row": row}), format!("k={} agrees={}", row.k, row.agrees())))
        .collect();
    Ok(r)
}
