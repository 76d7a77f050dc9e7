use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;
use stgl::benchgen::{gen_benchmark1, gen_benchmark2, gen_line_graph, gen_planted_partition, Benchmark, BenchmarkSpec};
use stgl::clustering::ClusteringResult;
use stgl::gyre::{boundary_position, fit_sinusoid, gyre_graph, GyreGeometry, GyreParams, UlamGrid};
use stgl::io::{
    eigenvector_csv, labels_csv, read_teg, spectrum_csv, spectrum_rows, write_atomic, write_json, write_teg,
};
use stgl::pipeline::{per_view_ari, run_pipeline, PipelineConfig};
use stgl::spectral::{eigendecompose, EigenOptions, EigenTag, SpectralEmbedding};
use stgl::supra::{build_supra, supra_cluster, SupraClusterOptions};
use stgl::system::SpatioTemporalSystem;
use stgl::walk::{escape_rate, simulate_walks, step_escape_rate};
use stgl::{OperatorConfig, OperatorSequence, TimeEvolvingGraph};

use crate::args::{
    BaselineArgs, ClusterArgs, ClusterOpts, GenerateArgs, Generator, GridArgs, GyreArgs, InputArgs, PlantedArgs,
    SpectrumArgs, WalkArgs,
};
use crate::error::{CliError, CliResult};
use crate::report::Report;

fn gyre_setup(grid: &GridArgs) -> CliResult<(UlamGrid, GyreParams)> {
    let params = GyreParams { amplitude: grid.amplitude, omega: grid.omega, epsilon: grid.epsilon };
    params.validate()?;
    if grid.nx == 0 || grid.ny == 0 || grid.particles == 0 || !(grid.step > 0.0) {
        return Err(CliError::Config("grid sizes, particle count and step must be positive".into()));
    }
    let ulam = UlamGrid { nx: grid.nx, ny: grid.ny, particles_per_box: grid.particles, step: grid.step };
    Ok((ulam, params))
}

fn build(g: Generator, seed: u64, planted: &PlantedArgs, grid: &GridArgs) -> CliResult<Benchmark> {
    Ok(match g {
        Generator::Benchmark1 => gen_benchmark1(seed)?,
        Generator::Benchmark2 => gen_benchmark2(seed)?,
        Generator::Linegraph => gen_line_graph(),
        Generator::Planted => {
            if planted.sizes.is_empty() || planted.sizes.contains(&0) {
                return Err(CliError::Config("--sizes must list positive block sizes".into()));
            }
            let mut spec =
                BenchmarkSpec::static_blocks(&planted.sizes, planted.views, planted.p_in, planted.p_out, seed);
            spec.directed = planted.directed;
            let graph = gen_planted_partition(&spec)?;
            Benchmark { name: "planted".into(), graph, labels: Some(spec.membership), k_true: spec.k_true }
        }
        Generator::Gyre => {
            let (ulam, params) = gyre_setup(grid)?;
            let graph = gyre_graph(&ulam, &params, grid.gyre_views, seed)?;
            Benchmark { name: "gyre".into(), graph, labels: None, k_true: 2 }
        }
    })
}

pub fn generate(args: &GenerateArgs) -> CliResult<()> {
    let b = build(args.name, args.seed, &args.planted, &args.grid)?;
    let dir = &args.out.out;
    let path = dir.join(format!("{}.json", b.name));
    write_teg(&path, &b.graph, b.labels.as_deref())?;
    if args.name == Generator::Gyre {
        let (ulam, _) = gyre_setup(&args.grid)?;
        write_json(&dir.join("gyre.geometry.json"), &GyreGeometry::new(&ulam))?;
    }
    println!(
        "{}: n = {}, M = {}, directed = {}, k_true = {} -> {}",
        b.name,
        b.graph.n(),
        b.graph.views(),
        b.graph.is_directed(),
        b.k_true,
        path.display()
    );
    Ok(())
}

struct Loaded {
    graph: TimeEvolvingGraph,
    labels: Option<Vec<Vec<usize>>>,
    k_true: Option<usize>,
}

fn load(input: &InputArgs, seed: u64) -> CliResult<Loaded> {
    if let Some(path) = &input.source.input {
        if !path.is_file() {
            return Err(CliError::Config(format!("input file not found: {}", path.display())));
        }
        let (graph, labels) = read_teg(path)?;
        return Ok(Loaded { graph, labels, k_true: None });
    }
    let g = input.source.generator.expect("clap enforces one input source");
    let b = build(g, input.data_seed.unwrap_or(seed), &input.planted, &input.grid)?;
    Ok(Loaded { graph: b.graph, labels: b.labels, k_true: Some(b.k_true) })
}

fn resolve_k(opts: &ClusterOpts, loaded: &Loaded) -> CliResult<usize> {
    let k = opts.k.or(loaded.k_true).ok_or_else(|| CliError::Config("--k is required for file input".into()))?;
    if k == 0 {
        return Err(CliError::Config("--k must be at least 1".into()));
    }
    Ok(k)
}

fn check_tau(tau: f64) -> CliResult<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(CliError::Config(format!("--tau must lie in (0, 1), got {tau}")));
    }
    Ok(())
}

fn graph_summary(g: &TimeEvolvingGraph, labels: &Option<Vec<Vec<usize>>>) -> serde_json::Value {
    json!({ "n": g.n(), "M": g.views(), "directed": g.is_directed(), "labels": labels.is_some() })
}

fn cluster_sizes(result: &ClusteringResult) -> Vec<Vec<usize>> {
    (0..result.views)
        .map(|t| {
            let mut s = vec![0; result.k];
            result.view(t).iter().for_each(|&l| s[l] += 1);
            s
        })
        .collect()
}

fn endpoints(ari: &[f64]) -> [f64; 2] {
    [ari[0], ari[ari.len() - 1]]
}

pub fn cluster(args: &ClusterArgs) -> CliResult<()> {
    let start = Instant::now();
    check_tau(args.opts.tau)?;
    let loaded = load(&args.input, args.opts.seed)?;
    let k = resolve_k(&args.opts, &loaded)?;
    let mut report = Report::new("cluster", args);
    report.config_mut().insert("resolved_k".into(), json!(k));

    let mut cfg = PipelineConfig::new(k, args.opts.seed);
    cfg.restarts = args.opts.restarts;
    cfg.eigen.tau = args.opts.tau;
    let out = run_pipeline(&loaded.graph, loaded.labels.as_deref(), &cfg)?;

    let dir = &args.out.out;
    write_atomic(&dir.join("labels.csv"), &labels_csv(&out.result)?)?;
    write_atomic(&dir.join("spectrum.csv"), &spectrum_csv(&out.embedding)?)?;
    write_atomic(&dir.join("eigenvectors.csv"), &eigenvector_csv(&out.embedding, &out.selection)?)?;

    report.result(json!({
        "graph": graph_summary(&loaded.graph, &loaded.labels),
        "k": k,
        "eigenvalues": spectrum_rows(&out.embedding),
        "selection": out.selection.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "ari": out.ari,
        "ari_endpoints": out.ari.as_deref().map(endpoints),
        "cluster_sizes": cluster_sizes(&out.result),
        "inertia": out.result.inertia,
    }));
    report.timings(&out.timings);
    report.timing("command", start.elapsed().as_secs_f64());
    report.write(&dir.join("report.json"))?;
    if let Some(ari) = &out.ari {
        let [first, last] = endpoints(ari);
        println!("ARI view 1 = {first:.4}, view {} = {last:.4}", ari.len());
    }
    println!("wrote {}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct BaselineRow {
    a: f64,
    eigenvalues: Vec<f64>,
    tags: Vec<&'static str>,
    selection: Vec<usize>,
    ari: Option<Vec<f64>>,
    mean_endpoint_ari: Option<f64>,
    cluster_sizes: Vec<Vec<usize>>,
}

pub fn baseline(args: &BaselineArgs) -> CliResult<()> {
    let start = Instant::now();
    check_tau(args.opts.tau)?;
    if args.a_grid.is_empty() {
        return Err(CliError::Config("--a-grid must not be empty".into()));
    }
    if let Some(a) = args.a_grid.iter().find(|a| !(**a >= 0.0) || !a.is_finite()) {
        return Err(CliError::Config(format!("coupling strengths must be nonnegative, got {a}")));
    }
    let loaded = load(&args.input, args.opts.seed)?;
    let k = resolve_k(&args.opts, &loaded)?;
    let mut report = Report::new("baseline", args);
    report.config_mut().insert("resolved_k".into(), json!(k));

    let symmetrized = loaded.graph.is_directed();
    let graph = if symmetrized {
        eprintln!("warning: input graph is directed; symmetrizing (W + W^T) / 2 for the supra-Laplacian");
        loaded.graph.symmetrize()
    } else {
        loaded.graph.clone()
    };
    let opts = SupraClusterOptions {
        k,
        seed: args.opts.seed,
        restarts: args.opts.restarts,
        tau: args.opts.tau,
        filter_temporal: !args.keep_temporal,
    };

    let mut rows = Vec::new();
    let mut csv = csv_writer(&["a", "view", "vertex", "label"]);
    for &a in &args.a_grid {
        let clock = Instant::now();
        let system = build_supra(&graph, a, args.laplacian_variant)?;
        let out = supra_cluster(&system, &opts)?;
        let ari = loaded.labels.as_deref().map(|l| per_view_ari(l, &out.result)).transpose()?;
        for (r, &l) in out.result.labels.iter().enumerate() {
            csv.push_str(&format!("{a},{},{},{l}\n", r / graph.n() + 1, r % graph.n()));
        }
        rows.push(BaselineRow {
            a,
            eigenvalues: out.spectrum.eigenvalues.clone(),
            tags: out.spectrum.tags.iter().map(|t| t.as_str()).collect(),
            selection: out.selection.iter().map(|i| i + 1).collect(),
            mean_endpoint_ari: ari.as_deref().map(|x| {
                let [f, l] = endpoints(x);
                (f + l) / 2.0
            }),
            ari,
            cluster_sizes: cluster_sizes(&out.result),
        });
        report.timing(&format!("a={a}"), clock.elapsed().as_secs_f64());
    }
    // First grid value wins ties.
    let best = rows.iter().filter_map(|r| r.mean_endpoint_ari.map(|m| (r.a, m))).fold(
        None,
        |best: Option<(f64, f64)>, (a, m)| match best {
            Some((_, bm)) if bm >= m => best,
            _ => Some((a, m)),
        },
    );

    let dir = &args.out.out;
    write_atomic(&dir.join("labels.csv"), csv.as_bytes())?;
    report.result(json!({
        "graph": graph_summary(&loaded.graph, &loaded.labels),
        "symmetrized": symmetrized,
        "laplacian_variant": args.laplacian_variant.as_str(),
        "k": k,
        "runs": rows,
        "best": best.map(|(a, m)| json!({ "a": a, "mean_endpoint_ari": m })),
    }));
    report.timing("command", start.elapsed().as_secs_f64());
    report.write(&dir.join("report.json"))?;
    if let Some((a, m)) = best {
        println!("best a = {a} (mean endpoint ARI {m:.4})");
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn csv_writer(header: &[&str]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    s
}

fn tag_counts(emb: &SpectralEmbedding) -> serde_json::Value {
    let count = |tag| emb.tags.iter().filter(|t| **t == tag).count();
    json!({
        "constant": count(EigenTag::Constant),
        "spatial": count(EigenTag::Spatial),
        "temporal": count(EigenTag::Temporal),
    })
}

pub fn spectrum(args: &SpectrumArgs) -> CliResult<()> {
    let start = Instant::now();
    check_tau(args.tau)?;
    if args.top == 0 {
        return Err(CliError::Config("--top must be at least 1".into()));
    }
    let loaded = load(&args.input, args.seed)?;
    let mut report = Report::new("spectrum", args);

    let ops = OperatorSequence::from_graph(&loaded.graph, &OperatorConfig::default())?;
    let system = SpatioTemporalSystem::assemble(&ops)?;
    let opts = EigenOptions { full_spectrum: args.full_spectrum, tau: args.tau, ..Default::default() };
    let request = if args.full_spectrum { system.dim() } else { args.top.min(system.dim()) };
    let emb = eigendecompose(&system, request, &opts)?;

    let dir = &args.out.out;
    write_atomic(&dir.join("spectrum.csv"), &spectrum_csv(&emb)?)?;
    report.result(json!({
        "graph": graph_summary(&loaded.graph, &loaded.labels),
        "eigenvalues": spectrum_rows(&emb),
        "tag_counts": tag_counts(&emb),
    }));
    report.timing("command", start.elapsed().as_secs_f64());
    report.write(&dir.join("report.json"))?;
    for row in spectrum_rows(&emb) {
        println!("{:>4}  {:+.6}  {}", row.index, row.eigenvalue_c, row.tag);
    }
    Ok(())
}

pub fn gyre(args: &GyreArgs) -> CliResult<()> {
    let start = Instant::now();
    check_tau(args.tau)?;
    let (ulam, params) = gyre_setup(&args.grid)?;
    let mut report = Report::new("gyre", args);

    let clock = Instant::now();
    let graph = gyre_graph(&ulam, &params, args.grid.gyre_views, args.seed)?;
    report.timing("ulam", clock.elapsed().as_secs_f64());

    let mut cfg = PipelineConfig::new(args.k, args.seed);
    cfg.restarts = args.restarts;
    cfg.eigen.tau = args.tau;
    let out = run_pipeline(&graph, None, &cfg)?;

    let boundary: Vec<f64> = (0..graph.views()).map(|t| boundary_position(&ulam, out.result.view(t))).collect();
    let period = 2.0 * std::f64::consts::PI / params.omega;
    let (center, amplitude, phase) = fit_sinusoid(&boundary, period);
    let top = &out.embedding.tags[..out.embedding.len().min(5)];
    let ev = &out.embedding.eigenvalues;
    let gap_ratio = (ev.len() >= 3).then(|| ev[1] / ev[2]);

    let dir = &args.out.out;
    write_teg(&dir.join("gyre.json"), &graph, None)?;
    write_json(&dir.join("gyre.geometry.json"), &GyreGeometry::new(&ulam))?;
    write_atomic(&dir.join("labels.csv"), &labels_csv(&out.result)?)?;
    write_atomic(&dir.join("spectrum.csv"), &spectrum_csv(&out.embedding)?)?;
    report.result(json!({
        "graph": graph_summary(&graph, &None),
        "eigenvalues": spectrum_rows(&out.embedding),
        "selection": out.selection.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "top5_tags": top.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
        "gap_ratio_2_3": gap_ratio,
        "boundary_x": boundary,
        "boundary_fit": { "center": center, "amplitude": amplitude, "phase": phase, "period": period },
        "cluster_sizes": cluster_sizes(&out.result),
    }));
    report.timings(&out.timings);
    report.timing("command", start.elapsed().as_secs_f64());
    report.write(&dir.join("report.json"))?;
    println!("boundary center {center:.3}, amplitude {amplitude:.3}; wrote {}", dir.display());
    Ok(())
}

pub fn walk(args: &WalkArgs) -> CliResult<()> {
    let start = Instant::now();
    let loaded = load(&args.input, args.seed)?;
    let n = loaded.graph.n();
    if args.walkers == 0 {
        return Err(CliError::Config("--walkers must be at least 1".into()));
    }
    if let Some(v) = args.start_set.iter().find(|&&v| v >= n) {
        return Err(CliError::Config(format!("start vertex {v} outside [0, {n})")));
    }
    let mut report = Report::new("walk", args);

    let ops = OperatorSequence::from_graph(&loaded.graph, &OperatorConfig::default())?;
    let starts: Vec<usize> = (0..args.walkers).map(|i| args.start_set[i % args.start_set.len()]).collect();
    let traces = simulate_walks(ops.transitions(), &starts, args.seed)?;
    let set: HashSet<usize> = args.start_set.iter().copied().collect();
    let views = loaded.graph.views();
    let rate = escape_rate(&traces, &vec![set.clone(); views])?;
    let steps: Vec<Option<f64>> = (0..views - 1).map(|t| step_escape_rate(&traces, &set, t)).collect();
    let outside_at_end =
        traces.iter().filter(|t| !set.contains(&t.path[views - 1])).count() as f64 / traces.len() as f64;

    let mut csv = csv_writer(&["walker", "view", "vertex"]);
    for (w, t) in traces.iter().enumerate() {
        for (view, v) in t.path.iter().enumerate() {
            csv.push_str(&format!("{w},{},{v}\n", view + 1));
        }
    }
    let dir = &args.out.out;
    write_atomic(&dir.join("traces.csv"), csv.as_bytes())?;
    report.result(json!({
        "graph": graph_summary(&loaded.graph, &loaded.labels),
        "escape_rate": rate,
        "outside_at_last_view": outside_at_end,
        "step_escape_rates": steps,
    }));
    report.timing("command", start.elapsed().as_secs_f64());
    report.write(&dir.join("report.json"))?;
    println!("escape rate {rate:.4} over {} walkers", args.walkers);
    Ok(())
}
