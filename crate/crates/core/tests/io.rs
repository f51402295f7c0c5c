mod common;

use std::fs;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stochastic_steiner::io::batch::{run_batch, run_batch_rows, BatchOptions};
use stochastic_steiner::io::{parse_instance, read_solution, write_instance, write_solution, BatchRow};
use stochastic_steiner::{BrkgaParams, EvfwParams};

#[test]
fn ten_node_fixture_shape() {
    let inst = ten_node();
    assert_eq!(inst.graph().node_count(), 10);
    assert_eq!(inst.edge_count(), 15);
    assert_eq!(inst.probabilities(), vec![0.19050, 0.14290, 0.14290, 0.30950, 0.21420]);
}

#[test]
fn reference_listing() {
    let inst = ten_node();
    let sol = ten_node_reference(&inst);
    let mut out = Vec::new();
    write_solution(&sol, &inst, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("FIRST_STAGE 2\nE 1 5\nE 3 10\nSCENARIO 1 "));
    assert_eq!(text, fs::read_to_string(data("ten_node_opt.sol")).unwrap());
    assert_eq!(read_solution(text.as_bytes(), &inst).unwrap(), sol);
}

#[test]
fn toy_file_parses() {
    let inst = parse_instance(fs::read(data("toy.sstp")).unwrap().as_slice()).unwrap();
    assert_eq!((inst.graph().node_count(), inst.edge_count(), inst.scenario_count()), (2, 1, 1));
}

fn small_batch() -> (EvfwParams, BrkgaParams) {
    (EvfwParams::default(), BrkgaParams::from_fractions(10, 0.1, 0.2, 0.4, 5))
}

#[test]
fn batch_rows_and_summary() {
    let (e, b) = small_batch();
    let seeds: Vec<u64> = (1..=20).collect();
    let rows = run_batch_rows(&[data("ten_node.sstp")], &seeds, &e, &b, &BatchOptions::default());
    assert_eq!(rows.len(), 21);
    for (row, seed) in rows.iter().zip(1..=20) {
        let BatchRow::Run(r) = row else { panic!("expected a run row") };
        assert_eq!(r.seed, seed);
        assert!(r.cost <= r.buy_none_cost);
        assert!(r.delta_c_percent >= 0.0);
    }
    let BatchRow::Summary(s) = &rows[20] else { panic!("expected a summary row") };
    assert_eq!(s.runs, 20);
    assert!(s.cost_sample_std.is_some());
}

#[test]
fn batch_file_output() {
    let (e, b) = small_batch();
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.sstp");
    fs::write(&bad, "SSTP 2 1 1\nE 1 2 x\n").unwrap();
    let paths = vec![data("toy.sstp"), bad, data("ten_node.sstp")];
    let options = BatchOptions {
        no_timing: true,
        ..BatchOptions::default()
    };

    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    run_batch(&paths, &[1, 2], &e, &b, &options, &first).unwrap();
    run_batch(&paths, &[1, 2], &e, &b, &options, &second).unwrap();
    let text = fs::read_to_string(&first).unwrap();
    assert_eq!(text, fs::read_to_string(&second).unwrap());

    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("instance_id,seed,cost,buy_none_cost,delta_c_percent,gap_percent,wall_seconds"));
    assert_eq!(lines.len(), 1 + 3 + 1 + 3);
    assert!(lines[1].starts_with("toy,1,3.0000,5.0000,40.0000,,0.0000,"));
    assert!(lines[3].starts_with("toy,summary,3.0000,"));
    assert!(lines[4].starts_with("broken,,") && lines[4].contains("line 2"));
    assert!(lines[5].starts_with("ten_node,1,"));

    let empty = dir.path().join("c.csv");
    run_batch(&paths, &[], &e, &b, &options, &empty).unwrap();
    assert_eq!(fs::read_to_string(&empty).unwrap().lines().count(), 1);
}

#[test]
fn gap_uses_known_optimum() {
    let (e, b) = small_batch();
    let options = BatchOptions {
        optima: [("toy".to_string(), 3.0)].into(),
        no_timing: true,
    };
    let rows = run_batch_rows(&[data("toy.sstp")], &[1], &e, &b, &options);
    let BatchRow::Run(r) = &rows[0] else { panic!() };
    assert_eq!(r.gap_percent, Some(0.0));
}

proptest! {
    #[test]
    fn instance_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_sstp(&mut rng, 9, 4);
        let mut text = Vec::new();
        write_instance(&inst, &mut text).unwrap();
        let back = parse_instance(text.as_slice()).unwrap();
        prop_assert_eq!(back.graph().edges(), inst.graph().edges());
        prop_assert_eq!(back.first_stage_costs(), inst.first_stage_costs());
        prop_assert_eq!(back.probabilities(), inst.probabilities());
        for (a, b) in back.scenarios().iter().zip(inst.scenarios()) {
            prop_assert_eq!(a.costs(), b.costs());
            prop_assert_eq!(a.terminals(), b.terminals());
        }
        let mut again = Vec::new();
        write_instance(&back, &mut again).unwrap();
        prop_assert_eq!(text, again);
    }
}
