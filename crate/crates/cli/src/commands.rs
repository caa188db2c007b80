use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cvrouter_core::criteria::{
    check_bipartite, constructive_route, hand_solution, spectral_histogram, square_closed_form,
    square_interleaved_matrix, square_oracle, square_phase_scan, Verdict,
};
use cvrouter_core::gaussian::{ideal_rows, purity, routing_rows, SqueezingSpec};
use cvrouter_core::io::{self as cio, Method, OutcomeFile};
use cvrouter_core::netgen::{generate, select_scenario_pair, Graph, PartitionPolicy, TopologyKind};
use cvrouter_core::optimizer::{route as run_route, Classification, ObjectiveValue, RoutingProblem};
use cvrouter_core::unitaries::embed_local;
use cvrouter_core::Error;
use serde::Serialize;

use crate::config::{parse_pair, topology_from_flag, PairChoice, RunConfig};
use crate::{exit, Generate, Histogram, MethodArg, Route, Spectrum, SquareOracle, TopologyArgs};

fn apply_topology(cfg: &mut RunConfig, t: &TopologyArgs) -> Result<()> {
    if let Some(name) = &t.topology {
        cfg.topology = topology_from_flag(name, t.rows, t.cols, t.m, t.p)?;
    } else {
        match &mut cfg.topology {
            TopologyKind::Grid { rows, cols } => {
                *rows = t.rows.or(*rows);
                *cols = t.cols.or(*cols);
            }
            TopologyKind::BarabasiAlbert { m } => *m = t.m.unwrap_or(*m),
            TopologyKind::DuplicationDivergence { p } => *p = t.p.unwrap_or(*p),
            _ => {}
        }
    }
    if let Some(n) = t.n {
        cfg.n = n;
    }
    if let Some(seed) = t.seed {
        cfg.seed = seed;
    }
    if let Some(a) = &t.partition_a {
        cfg.partition = PartitionPolicy::Explicit { a: a.clone() };
    }
    Ok(())
}

fn squeezing(s: f64) -> Result<SqueezingSpec> {
    Ok(SqueezingSpec::new(s)?)
}

fn build_graph(cfg: &RunConfig) -> Result<Graph> {
    Ok(generate(&cfg.topology_spec())?.bipartition(&cfg.partition)?)
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((path, BufWriter::new(file)))
}

fn write_json_file<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let (path, mut w) = create(dir, name)?;
    cio::write_json(value, &mut w)?;
    w.flush()?;
    Ok(path)
}

pub fn cmd_generate(mut cfg: RunConfig, args: Generate) -> Result<u8> {
    apply_topology(&mut cfg, &args.topology)?;
    if let Some(d) = args.out_dir {
        cfg.output_dir = d;
    }
    let g = build_graph(&cfg)?;
    let (path, mut w) = create(&cfg.output_dir, "graph.json")?;
    cio::write_graph(&g, &mut w)?;
    w.flush()?;
    println!("vertices {} edges {} -> {}", g.n(), g.edge_count(), path.display());
    Ok(exit::SUCCESS)
}

pub fn cmd_spectrum(mut cfg: RunConfig, args: Spectrum) -> Result<u8> {
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(d) = args.out_dir {
        cfg.output_dir = d;
    }
    let file = File::open(&args.graph).with_context(|| format!("opening {}", args.graph.display()))?;
    let g = cio::read_graph(file)?;
    let report = check_bipartite(&g, squeezing(cfg.s)?)?;
    let path = write_json_file(&cfg.output_dir, "spectrum.json", &report)?;
    let verdict = if args.internal {
        report.verdict_internal
    } else {
        report.verdict_bipartite
    };
    println!(
        "count_one {} contains_lambda {} bipartite {:?} internal {:?} -> {}",
        report.count_one,
        report.contains_lambda,
        report.verdict_bipartite,
        report.verdict_internal,
        path.display()
    );
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    Ok(if verdict == Verdict::Impossible {
        exit::NO_GO
    } else {
        exit::SUCCESS
    })
}

fn routed_value(
    g: &Graph,
    sq: SqueezingSpec,
    pair: (usize, usize),
    gamma: &cvrouter_core::gaussian::CovarianceMatrix,
) -> Result<ObjectiveValue> {
    let rows = routing_rows(gamma, pair.0, pair.1)?;
    let ideal = ideal_rows(g.n(), pair.0, pair.1, sq)?;
    let frob = (ideal - rows).norm();
    let p = purity(&gamma.reduce(&[pair.0, pair.1])?).unwrap_or(0.0);
    Ok(ObjectiveValue {
        f_opt: frob + 0.5 * (1.0 - p),
        purity: p,
        frob,
    })
}

pub fn cmd_route(mut cfg: RunConfig, args: Route) -> Result<u8> {
    apply_topology(&mut cfg, &args.topology)?;
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(d) = args.out_dir {
        cfg.output_dir = d;
    }
    if let Some(g) = args.max_generations {
        cfg.optimizer.max_generations = g;
    }
    if let Some(f) = args.f_target {
        cfg.optimizer.f_target = f;
    }
    if let Some(p) = &args.pair {
        let (m_a, m_b) = parse_pair(p)?;
        cfg.pair = PairChoice::Explicit { m_a, m_b };
    } else if let Some(s) = &args.scenario {
        cfg.pair = PairChoice::Scenario { scenario: s.parse()? };
    }
    let g = match &args.graph {
        Some(path) => cio::read_graph(File::open(path).with_context(|| format!("opening {}", path.display()))?)?,
        None => build_graph(&cfg)?,
    };
    let pair = match cfg.pair {
        PairChoice::Explicit { m_a, m_b } => (m_a, m_b),
        PairChoice::Scenario { scenario } => select_scenario_pair(&g, scenario)?,
    };
    let sq = squeezing(cfg.s)?;
    write_json_file(&cfg.output_dir, "run_config.json", &cfg)?;

    let outcome = match args.method {
        MethodArg::Cmaes => {
            let problem = RoutingProblem::new(g, sq, pair.0, pair.1)?;
            let out = run_route(&problem, &cfg.optimizer_config())?;
            let (_, mut w) = create(&cfg.output_dir, "history.csv")?;
            cio::write_history(&out.history, &mut w)?;
            w.flush()?;
            OutcomeFile {
                method: Method::Cmaes,
                m_a: pair.0,
                m_b: pair.1,
                s: cfg.s,
                classification: out.classification,
                value: out.value,
                routed: cio::matrix_rows(out.routed.matrix()),
                params: Some(out.params),
                u_a: None,
                u_b: None,
                generations: Some(out.generations),
                stop: Some(out.stop),
                ambiguous: false,
            }
        }
        MethodArg::Constructive => {
            let c = match constructive_route(&g, sq, pair.0, pair.1) {
                Ok(c) => c,
                Err(Error::Precondition(msg)) => {
                    eprintln!("no-go: {msg}");
                    return Ok(exit::NO_GO);
                }
                Err(e) => return Err(e.into()),
            };
            let state = cvrouter_core::gaussian::build_cluster(&g, sq).transformed(&embed_local(
                &c.u_a,
                &c.u_b,
                g.partition(),
            )?)?;
            let value = routed_value(&g, sq, pair, &state)?;
            OutcomeFile {
                method: Method::Constructive,
                m_a: pair.0,
                m_b: pair.1,
                s: cfg.s,
                classification: Classification::of(&value),
                value,
                routed: cio::matrix_rows(c.routed.matrix()),
                params: None,
                u_a: Some(cio::complex_rows(&c.u_a)),
                u_b: Some(cio::complex_rows(&c.u_b)),
                generations: None,
                stop: None,
                ambiguous: c.ambiguous,
            }
        }
    };
    let (path, mut w) = create(&cfg.output_dir, "outcome.json")?;
    cio::write_outcome(&outcome, &mut w)?;
    w.flush()?;
    println!(
        "pair ({}, {}) {:?} f_opt {:e} purity {:.9} -> {}",
        pair.0,
        pair.1,
        outcome.classification,
        outcome.value.f_opt,
        outcome.value.purity,
        path.display()
    );
    if outcome.ambiguous {
        eprintln!("note: the pure subspace is larger than needed; the returned unitaries are one of many");
    }
    if outcome.classification == Classification::Ideal {
        return Ok(exit::SUCCESS);
    }
    eprintln!("routed block (Qa, Qb, Pa, Pb):");
    for row in &outcome.routed {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>12.6}")).collect();
        eprintln!("  {}", cells.join(" "));
    }
    Ok(exit::NOT_IDEAL)
}

pub fn cmd_histogram(mut cfg: RunConfig, args: Histogram) -> Result<u8> {
    apply_topology(&mut cfg, &args.topology)?;
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(d) = args.out_dir {
        cfg.output_dir = d;
    }
    if args.reduced {
        cfg.histogram.graphs = 10;
        cfg.n = 200;
        eprintln!("note: reduced ensemble of 10 graphs with 200 vertices; statistics are indicative only");
    }
    if let Some(k) = args.graphs {
        cfg.histogram.graphs = k;
    }
    if let Some(b) = args.bins {
        cfg.histogram.bins = b;
    }
    if cfg.partition != PartitionPolicy::HalfByIndex {
        bail!("ensembles always split each member by index");
    }
    let h = spectral_histogram(
        &cfg.topology_spec(),
        cfg.histogram.graphs,
        squeezing(cfg.s)?,
        cfg.histogram.bins,
    )?;
    let (_, mut w) = create(&cfg.output_dir, "histogram.csv")?;
    cio::write_histogram_csv(&h.bins, &mut w)?;
    w.flush()?;
    let (path, mut w) = create(&cfg.output_dir, "histogram_summary.json")?;
    cio::write_histogram_summary(&h, &mut w)?;
    w.flush()?;
    println!(
        "{} values: one {:.2}% lambda {:.2}% near lambda {:.2}% -> {}",
        h.total,
        h.value_one_pct,
        h.value_lambda_pct,
        h.ge_99_lambda_pct,
        path.display()
    );
    Ok(exit::SUCCESS)
}

#[derive(Serialize)]
struct SquareSummary {
    s: f64,
    lambda: f64,
    mu: f64,
    cluster: Vec<Vec<f64>>,
    closed_form: cvrouter_core::criteria::SquareClosedForm,
    hand_solution: [cvrouter_core::criteria::BeamSplitter; 2],
    hand_pair: Vec<Vec<f64>>,
    scan_steps: usize,
    scan_min_max_residual: f64,
    scan_argmin: [f64; 2],
}

pub fn cmd_square_oracle(mut cfg: RunConfig, args: SquareOracle) -> Result<u8> {
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(d) = args.out_dir {
        cfg.output_dir = d;
    }
    let sq = squeezing(cfg.s)?;
    let (a, b) = hand_solution();
    let pair = square_oracle(sq, &a, &b)?.reduce(&[0, 2])?;
    let scan = square_phase_scan(sq, args.steps)?;
    let (_, mut w) = create(&cfg.output_dir, "square_scan.csv")?;
    writeln!(w, "phi1,phi2,var_residual,cov_residual")?;
    for p in &scan.points {
        writeln!(w, "{:?},{:?},{:?},{:?}", p.phi1, p.phi2, p.var_residual, p.cov_residual)?;
    }
    w.flush()?;
    let summary = SquareSummary {
        s: sq.s(),
        lambda: sq.lambda(),
        mu: sq.mu(),
        cluster: cio::matrix_rows(&square_interleaved_matrix(sq)),
        closed_form: square_closed_form(sq),
        hand_solution: [a, b],
        hand_pair: cio::matrix_rows(pair.matrix()),
        scan_steps: args.steps,
        scan_min_max_residual: scan.min_max_residual,
        scan_argmin: [scan.argmin.phi1, scan.argmin.phi2],
    };
    let path = write_json_file(&cfg.output_dir, "square_summary.json", &summary)?;
    println!(
        "scan minimum of max(|Var(Q0) - lambda|, |Cov(Q0, P0)|) = {:.9} at ({:.4}, {:.4}) -> {}",
        scan.min_max_residual,
        scan.argmin.phi1,
        scan.argmin.phi2,
        path.display()
    );
    Ok(exit::SUCCESS)
}
