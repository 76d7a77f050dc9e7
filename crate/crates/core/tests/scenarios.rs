use std::collections::HashSet;

use stgl::benchgen::{gen_benchmark1, gen_line_graph};
use stgl::gyre::{gyre_graph, GyreParams, UlamGrid};
use stgl::io::{labels_csv, read_teg, spectrum_csv, write_teg};
use stgl::pipeline::{run_pipeline, PipelineConfig};
use stgl::spectral::EigenTag;
use stgl::{CsrMatrix, Error, OperatorConfig, OperatorSequence, TimeEvolvingGraph};

#[test]
fn benchmark1_labels_follow_migration() {
    let b = gen_benchmark1(0).unwrap();
    let out = run_pipeline(&b.graph, b.labels.as_deref(), &PipelineConfig::new(3, 0)).unwrap();
    assert_eq!(out.embedding.tags[0], EigenTag::Constant);
    let first = &out.embedding.eigenvectors[0];
    assert!(first.iter().all(|x| (x - first[0]).abs() < 1e-8 * first[0].abs()));

    // Stable vertices keep one label across every view.
    for i in (0..65).chain(100..300) {
        let l: HashSet<usize> = (0..10).map(|t| out.result.view(t)[i]).collect();
        assert_eq!(l.len(), 1, "vertex {i}");
    }
    // The shrinking cluster loses its migrating vertices over time.
    let sizes: Vec<usize> = (0..10)
        .map(|t| {
            let v = out.result.view(t);
            v.iter().filter(|&&l| l == v[0]).count()
        })
        .collect();
    assert_eq!(sizes[0], 100);
    assert!(sizes.windows(2).all(|w| w[1] <= w[0]), "{sizes:?}");
    assert!(sizes[9].abs_diff(65) <= 3, "{sizes:?}");
}

#[test]
fn line_graph_two_pairs_merge_at_last_view() {
    let b = gen_line_graph();
    let ops = OperatorSequence::from_graph(&b.graph, &OperatorConfig::default()).unwrap();
    assert!(ops.densities().iter().all(|m| (m.iter().sum::<f64>() - 1.0).abs() < 1e-12));
    let out = run_pipeline(&b.graph, b.labels.as_deref(), &PipelineConfig::new(3, 0)).unwrap();
    let first = out.result.view(0);
    assert_eq!(first[0], first[1]);
    assert_eq!(first[4], first[5]);
    assert_ne!(first[0], first[4]);
}

#[test]
fn vanishing_density_is_reported() {
    // Without self-loops vertex 0 has no in-edges, so mu_2 vanishes there.
    let w = CsrMatrix::from_dense(2, 2, &[0.0, 1.0, 0.0, 1.0]).unwrap();
    let g = TimeEvolvingGraph::new(2, true, vec![w.clone(), w]).unwrap();
    let cfg = OperatorConfig { self_loop: None, ..Default::default() };
    let r = OperatorSequence::from_graph(&g, &cfg);
    assert!(matches!(r, Err(Error::DensityVanished { view: 1, vertex: 0, .. })), "{r:?}");
}

#[test]
fn zero_out_degree_is_reported() {
    let w = CsrMatrix::from_dense(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    let g = TimeEvolvingGraph::new(2, true, vec![w.clone(), w]).unwrap();
    let cfg = OperatorConfig { self_loop: None, ..Default::default() };
    assert!(matches!(OperatorSequence::from_graph(&g, &cfg), Err(Error::ZeroOutDegree { vertex: 1, .. })));
}

#[test]
fn generated_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let b = gen_benchmark1(9).unwrap();
    write_teg(&p1, &b.graph, b.labels.as_deref()).unwrap();
    write_teg(&p2, &gen_benchmark1(9).unwrap().graph, b.labels.as_deref()).unwrap();
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    let (g, labels) = read_teg(&p1).unwrap();
    assert_eq!(g, b.graph);
    assert_eq!(labels, b.labels);
}

#[test]
fn outputs_are_deterministic() {
    let b = gen_line_graph();
    let run = || run_pipeline(&b.graph, None, &PipelineConfig::new(3, 4)).unwrap();
    let (x, y) = (run(), run());
    assert_eq!(spectrum_csv(&x.embedding).unwrap(), spectrum_csv(&y.embedding).unwrap());
    assert_eq!(labels_csv(&x.result).unwrap(), labels_csv(&y.result).unwrap());
}

#[test]
fn small_gyre_separates_left_and_right() {
    let grid = UlamGrid { nx: 12, ny: 6, particles_per_box: 30, step: 0.01 };
    let g = gyre_graph(&grid, &GyreParams::default(), 3, 1).unwrap();
    for t in 0..3 {
        assert!(g.snapshot(t).row_sums().iter().all(|&s| s == 30.0));
    }
    let out = run_pipeline(&g, None, &PipelineConfig::new(2, 0)).unwrap();
    let labels = out.result.view(0);
    let left = labels[grid.index(0, 3)];
    let right = labels[grid.index(11, 3)];
    assert_ne!(left, right);
}
