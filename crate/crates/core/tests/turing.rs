mod common;

use qlc_tiling::tiles::{check_boundary, check_constraints, solve_window, FixedCells, TileSet};
use qlc_tiling::turing::{halting_step, rows_equal_configs, run_blank, tm_to_tiles, validate_tm, TuringMachine};

fn load(name: &str) -> TuringMachine {
    TuringMachine::load(common::data(name)).unwrap()
}

#[test]
fn shipped_machines_are_valid() {
    for name in ["demo_machine.json", "write_and_return.json", "looping.json"] {
        assert!(validate_tm(&load(name)).is_valid(), "{name}");
    }
}

#[test]
fn demo_tile_set_has_eight_tiles() {
    assert_eq!(tm_to_tiles(&load("demo_machine.json")).unwrap().set.len(), 8);
}

#[test]
fn tile_file_round_trip() {
    let t = tm_to_tiles(&load("write_and_return.json")).unwrap();
    assert_eq!(TileSet::from_json(&t.set.to_json()).unwrap(), t.set);
}

#[test]
fn window_search_finds_the_run() {
    let m = load("demo_machine.json");
    let t = tm_to_tiles(&m).unwrap();
    let g = solve_window(&t.set, 4, 4, &FixedCells::from([((0, 0), 0)])).unwrap().unwrap();
    let rows = rows_equal_configs(&m, 4).unwrap();
    assert_eq!(g.restrict(rows.width, 4).unwrap(), rows.grid);
    assert!(check_constraints(&g, &t.set).unwrap().is_empty());
}

#[test]
fn halting_column_starts_one_row_after_the_halt() {
    for name in ["demo_machine.json", "write_and_return.json"] {
        let m = load(name);
        let h = halting_step(&m, 50).unwrap().unwrap();
        let check = rows_equal_configs(&m, h + 10).unwrap();
        let t = tm_to_tiles(&m).unwrap();
        assert!(check_boundary(&check.grid, &t.set, h + 1), "{name}");
        assert!(!check_boundary(&check.grid, &t.set, h), "{name}");
    }
}

#[test]
fn looping_machine_never_halts_in_range() {
    let m = load("looping.json");
    assert_eq!(halting_step(&m, 200).unwrap(), None);
    let run = run_blank(&m, 4).unwrap();
    let heads: Vec<usize> = run.iter().map(|c| c.head).collect();
    assert_eq!(heads, [0, 1, 0, 1, 0]);
}
