mod common;

use qlc_tiling::countermodel::{
    build_lemma1_model, conjunct_report, covering_tiling, covering_window, right_prime, Classification,
    ConjunctReport,
};
use qlc_tiling::reduction::Mode;
use qlc_tiling::semantics::validate_model;
use qlc_tiling::tiles::{solve_window, FixedCells, TileSet};
use qlc_tiling::turing::{tm_to_tiles, TuringMachine};

fn report(ts: &TileSet, n: usize, mode: Mode) -> ConjunctReport {
    let m = build_lemma1_model(ts, &covering_tiling(ts, n).unwrap(), n).unwrap();
    assert!(validate_model(&m.model).is_valid());
    conjunct_report(&m, ts, 3, mode).unwrap()
}

fn interior_failures(r: &ConjunctReport) -> Vec<String> {
    r.failures()
        .filter(|c| c.classification == Some(Classification::Interior))
        .map(|c| c.name.clone())
        .collect()
}

#[test]
fn doubling_the_size_keeps_interior_verdicts() {
    let ts = common::checkerboard();
    for mode in [Mode::Phi, Mode::Psi] {
        let small = report(&ts, 12, mode);
        let large = report(&ts, 24, mode);
        assert_eq!(interior_failures(&small), interior_failures(&large), "{mode:?}");
        assert_eq!(small.refute.holds, large.refute.holds);
        for (a, b) in small.conjuncts.iter().zip(&large.conjuncts) {
            assert_eq!(a.name, b.name);
            if !b.holds {
                assert!(!a.holds || b.classification == Some(Classification::Boundary), "{}", b.name);
            }
        }
    }
}

#[test]
fn only_seriality_fails_in_phi_mode() {
    let r = report(&common::checkerboard(), 25, Mode::Phi);
    let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["Serial_lhd"]);
    let w = r.conjuncts[0].witness.as_ref().unwrap();
    assert_eq!(w.assignment.get("x"), Some(25));
}

// T4 asks for an x below which every wall point carries t1. Above world x
// the premise x ≼ y holds for every y, including the origin, which carries
// t0; so T4 fails at world 0 whatever the tiling.
#[test]
fn t4_is_refuted_in_psi_mode() {
    let r = report(&common::checkerboard(), 25, Mode::Psi);
    let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["Serial_lhd", "T4"]);
    assert!(!r.refute_q.unwrap().holds);
    assert!(r.preceq_mismatches.unwrap().is_empty());
}

#[test]
fn machine_tiling_model() {
    let m = TuringMachine::load(common::data("demo_machine.json")).unwrap();
    let ts = tm_to_tiles(&m).unwrap().set;
    let n = 15;
    let side = covering_window(n);
    let g = solve_window(&ts, side, side, &FixedCells::from([((0, 0), 0)])).unwrap().unwrap();
    let model = build_lemma1_model(&ts, &g, n).unwrap();
    let r = conjunct_report(&model, &ts, 3, Mode::Phi).unwrap();
    assert!(interior_failures(&r).is_empty());
    assert!(!r.refute.holds);
}

#[test]
fn sublemma_base_cases() {
    let ts = common::checkerboard();
    let m = build_lemma1_model(&ts, &covering_tiling(&ts, 10).unwrap(), 10).unwrap();
    assert_eq!(right_prime(&m, 0).unwrap(), 1);
    assert_eq!(qlc_tiling::countermodel::above_prime(&m, 0).unwrap(), 2);
}
