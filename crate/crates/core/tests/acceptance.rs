//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use cvrouter_core::criteria::*;
use cvrouter_core::gaussian::*;
use cvrouter_core::netgen::*;
use cvrouter_core::optimizer::*;
use cvrouter_core::unitaries::{embed_local, GellMannBasis};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn sq(s: f64) -> SqueezingSpec {
    SqueezingSpec::new(s).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {e:?}, limit {limit:?}"))
}

fn ladder(n: usize) -> Graph {
    generate(&TopologySpec::new(TopologyKind::grid(), n, 0)).unwrap()
}

fn square_analytic_match() -> Check {
    let t = Instant::now();
    let p = interleaved_to_qp();
    let mut worst: f64 = 0.0;
    for s in [2.0, 10.0, 31.62] {
        let built = build_cluster(&square_graph(), sq(s));
        let permuted = DMatrix::from_fn(8, 8, |i, j| built.matrix()[(p[i], p[j])]);
        worst = worst.max(max_abs_diff(&permuted, &square_interleaved_matrix(sq(s))));
    }
    within(t, Duration::from_secs(1))?;
    ensure(worst <= 1e-12, || format!("max entry deviation {worst:e}"))?;
    Ok(format!("max entry deviation {worst:e}"))
}

fn symmetric_beam_splitter_closed_form() -> Check {
    let s = 10.0;
    let (a, b) = hand_solution();
    let state = square_oracle(sq(s), &a, &b).map_err(|e| e.to_string())?;
    let pair = state.reduce(&[0, 2]).unwrap();
    let m = pair.matrix();
    let (lm, lp, mu) = (m[(0, 0)], m[(2, 2)], m[(0, 3)]);
    let r5 = 5f64.sqrt();
    let mu_printed = (s * s - 1.0) / (r5 * s);
    let lm_printed = ((r5 + 5.0) * s * s - (r5 + 5.0)) / (10.0 * s);
    let lp_printed = ((r5 + 5.0) * s * s + (r5 + 5.0)) / (10.0 * s);
    let report = format!(
        "mu {mu:.12} (expected {mu_printed:.12}), lambda- {lm:.12} (expected {lm_printed:.12}), \
         lambda+ {lp:.12} (expected {lp_printed:.12})"
    );
    ensure((mu - mu_printed).abs() <= 1e-10, || report.clone())?;
    ensure(
        (lm - lm_printed).abs() <= 1e-10 && (lp - lp_printed).abs() <= 1e-10,
        || report.clone(),
    )?;
    Ok(report)
}

fn square_impossibility_scan() -> Check {
    let scan = square_phase_scan(sq(10.0), 200).map_err(|e| e.to_string())?;
    let m = scan.min_max_residual;
    ensure(m > 0.05, || format!("grid minimum {m}"))?;
    ensure((m - 0.941_055_071_325_017).abs() < 1e-9, || {
        format!("grid minimum {m} moved from 0.941055071325")
    })?;
    Ok(format!(
        "grid minimum {m:.9} at ({:.4}, {:.4})",
        scan.argmin.phi1, scan.argmin.phi2
    ))
}

fn fully_connected_spectra() -> Check {
    let t = Instant::now();
    for n in (4..=20).step_by(2) {
        let g = generate(&TopologySpec::new(TopologyKind::Complete, n, 0)).unwrap();
        let r = check_bipartite(&g, sq(10.0)).map_err(|e| e.to_string())?;
        ensure(r.count_one == n / 2 - 1, || {
            format!("n={n}: {} unit values", r.count_one)
        })?;
        ensure(!r.contains_lambda, || format!("n={n}: lambda present"))?;
    }
    within(t, Duration::from_secs(5))?;
    Ok(format!(
        "n = 4..20, unit multiplicity n/2 - 1, no lambda, {:?}",
        t.elapsed()
    ))
}

fn ladder_parity_law() -> Check {
    let t = Instant::now();
    for k in 1..=50 {
        let r = check_bipartite(&ladder(2 * k), sq(10.0)).map_err(|e| e.to_string())?;
        ensure(r.contains_lambda == (k % 2 == 1), || {
            format!("k={k}: lambda present = {}", r.contains_lambda)
        })?;
    }
    within(t, Duration::from_secs(60))?;
    Ok(format!("k x 2 ladders for k = 1..50, {:?}", t.elapsed()))
}

const ODD_PAIR: (usize, usize) = (1, 3);
const ROUTING_S: f64 = 2.0;

fn odd_ladder_runs() -> Vec<(u64, RoutingOutcome)> {
    let problem = RoutingProblem::new(ladder(6), sq(ROUTING_S), ODD_PAIR.0, ODD_PAIR.1).unwrap();
    (0..5)
        .map(|seed| {
            (
                seed,
                route(
                    &problem,
                    &CmaConfig {
                        seed,
                        ..Default::default()
                    },
                )
                .unwrap(),
            )
        })
        .collect()
}

fn optimizer_ideal_routing(runs: &[(u64, RoutingOutcome)], t: Instant) -> Check {
    within(t, Duration::from_secs(600))?;
    let hits = runs
        .iter()
        .filter(|(_, o)| o.value.f_opt <= IDEAL_THRESHOLD && o.generations <= 20_000)
        .count();
    let worst = runs.iter().map(|(_, o)| o.value.f_opt).fold(0.0, f64::max);
    ensure(hits >= 4, || format!("{hits}/5 runs ideal"))?;
    let gens: Vec<usize> = runs.iter().map(|(_, o)| o.generations).collect();
    Ok(format!(
        "{hits}/5 runs ideal, worst f_opt {worst:e}, generations {gens:?}"
    ))
}

fn optimizer_stall_signature() -> Check {
    let problem = RoutingProblem::new(ladder(8), sq(ROUTING_S), 1, 4).unwrap();
    let cfg = CmaConfig {
        stagnation_window: 0,
        ..Default::default()
    };
    let out = route(&problem, &cfg).map_err(|e| e.to_string())?;
    let m = out.routed.matrix();
    let cross = m[(0, 1)].abs().max(m[(2, 3)].abs());
    let report = format!(
        "f_opt {:.6} after {} generations, purity {:.12}, Q-Q/P-P cross terms {cross:e}",
        out.value.f_opt, out.generations, out.value.purity
    );
    ensure(out.generations == 20_000, || report.clone())?;
    ensure((0.02..=0.5).contains(&out.value.f_opt), || report.clone())?;
    ensure(out.value.purity >= 0.99, || report.clone())?;
    ensure(cross <= 1e-6, || report.clone())?;
    Ok(report)
}

fn constructive_agreement(runs: &[(u64, RoutingOutcome)]) -> Check {
    let c = constructive_route(&ladder(6), sq(ROUTING_S), ODD_PAIR.0, ODD_PAIR.1).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (seed, o) in runs {
        let d = max_abs_diff(c.routed.matrix(), o.routed.matrix());
        ensure(d <= 1e-4, || format!("seed {seed}: routed blocks differ by {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("max routed-block deviation {worst:e} over {} runs", runs.len()))
}

fn ensemble_statistics() -> Check {
    let t = Instant::now();
    let ba = spectral_histogram(
        &TopologySpec::new(TopologyKind::barabasi_albert(), 200, 0),
        20,
        sq(10.0),
        50,
    )
    .map_err(|e| e.to_string())?;
    let internet = spectral_histogram(&TopologySpec::new(TopologyKind::InternetAs, 200, 0), 20, sq(10.0), 50)
        .map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(600))?;
    let report = format!(
        "BA unit {:.2}%, lambda {:.2}%; AS unit {:.2}%",
        ba.value_one_pct, ba.value_lambda_pct, internet.value_one_pct
    );
    ensure((25.0..=55.0).contains(&ba.value_one_pct), || report.clone())?;
    ensure(ba.value_lambda_pct <= 1.0, || report.clone())?;
    ensure(internet.value_one_pct > ba.value_one_pct, || report.clone())?;
    Ok(report)
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.random_range(2..=max_n);
    let p: f64 = rng.random_range(0.05..0.9);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random::<f64>() < p)
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

fn property_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let (mut worst_res, mut min_nu): (f64, f64) = (0.0, f64::INFINITY);
    for _ in 0..1000 {
        let n = rng.random_range(1..=6);
        let nu: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..8.0)).collect();
        let h = DMatrix::from_fn(2 * n, 2 * n, |_, _| rng.random_range(-0.6..0.6));
        let gamma = physical_state(&nu, &h);
        let w = williamson(&gamma).map_err(|e| e.to_string())?;
        worst_res = worst_res.max(w.residual(&gamma));
        min_nu = w.eigenvalues.iter().copied().fold(min_nu, f64::min);
    }
    ensure(worst_res <= 1e-8, || format!("Williamson residual {worst_res:e}"))?;
    ensure(min_nu >= 1.0 - 1e-10, || format!("symplectic eigenvalue {min_nu}"))?;

    let (mut worst_unit, mut worst_entropy): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let g = random_graph(&mut rng, 10);
        let (na, nb) = (g.modes_of(Provider::A).len(), g.modes_of(Provider::B).len());
        let draw =
            |rng: &mut ChaCha8Rng, m: usize| -> Vec<f64> { (0..m * m).map(|_| rng.random_range(-PI..PI)).collect() };
        let (ea, eb) = (draw(&mut rng, na), draw(&mut rng, nb));
        let ua = GellMannBasis::new(na).to_unitary(&ea).map_err(|e| e.to_string())?;
        let ub = GellMannBasis::new(nb).to_unitary(&eb).map_err(|e| e.to_string())?;
        for u in [&ua, &ub] {
            let n = u.nrows();
            let d = (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n)).camax();
            worst_unit = worst_unit.max(d);
        }
        let gamma = build_cluster(&g, sq(rng.random_range(1.5..20.0)));
        let moved = gamma
            .transformed(&embed_local(&ua, &ub, g.partition()).unwrap())
            .unwrap();
        let a = g.modes_of(Provider::A);
        let before = von_neumann_entropy(&gamma.reduce(&a).unwrap()).map_err(|e| e.to_string())?;
        let after = von_neumann_entropy(&moved.reduce(&a).unwrap()).map_err(|e| e.to_string())?;
        worst_entropy = worst_entropy.max((before - after).abs());
    }
    ensure(worst_unit <= 1e-12, || format!("unitarity defect {worst_unit:e}"))?;
    ensure(worst_entropy <= 1e-9, || format!("entropy drift {worst_entropy:e}"))?;

    let mut worst_null: f64 = 0.0;
    for _ in 0..1000 {
        let g = random_graph(&mut rng, 30);
        let s: f64 = rng.random_range(1.1..30.0);
        let n = g.n();
        let a = g.adjacency_matrix();
        let gamma = build_cluster(&g, sq(s));
        let mut null = DMatrix::zeros(n, 2 * n);
        null.view_mut((0, 0), (n, n)).copy_from(&(-&a));
        null.view_mut((0, n), (n, n)).copy_from(&DMatrix::identity(n, n));
        let cov = &null * gamma.matrix() * null.transpose();
        for i in 0..n {
            worst_null = worst_null.max((cov[(i, i)] / (1.0 + g.degree(i) as f64) - 1.0 / s).abs());
        }
    }
    ensure(worst_null <= 1e-9, || {
        format!("nullifier variance off by {worst_null:e}")
    })?;

    Ok(format!(
        "Williamson residual {worst_res:e}, min eigenvalue {min_nu:.12}, unitarity {worst_unit:e}, \
         entropy drift {worst_entropy:e}, nullifier {worst_null:e}"
    ))
}

fn cma_sanity() -> Check {
    let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let rosenbrock = |x: &[f64]| {
        x.windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum::<f64>()
    };
    let cfg = CmaConfig {
        f_target: 1e-10,
        max_generations: 3000,
        ..Default::default()
    };
    let a = minimize(sphere, &[1.0; 8], &cfg).map_err(|e| e.to_string())?;
    let cfg = CmaConfig {
        f_target: 1e-6,
        max_generations: 3000,
        ..Default::default()
    };
    let b = minimize(rosenbrock, &[0.0; 8], &cfg).map_err(|e| e.to_string())?;
    let report = format!(
        "sphere {:e} in {} generations, Rosenbrock {:e} in {} generations",
        a.best_f, a.generations, b.best_f, b.generations
    );
    ensure(a.best_f < 1e-10 && b.best_f < 1e-6, || report.clone())?;
    ensure((a.generations, b.generations) == (197, 626), || {
        format!("histories moved: {report}")
    })?;
    ensure((a.history[10].best_f - 0.688_159_397_476_278_7).abs() < 1e-12, || {
        report.clone()
    })?;
    ensure((b.history[100].best_f - 4.151_581_933_935_01).abs() < 1e-10, || {
        report.clone()
    })?;
    Ok(report)
}

fn main() {
    let mut failed = 0;
    let mut report = |id: usize, name: &str, r: Check| match r {
        Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("FAIL criterion {id:>2} {name}: {detail}");
        }
    };
    report(1, "square analytic match", square_analytic_match());
    report(
        2,
        "symmetric beam-splitter closed form",
        symmetric_beam_splitter_closed_form(),
    );
    report(3, "square impossibility scan", square_impossibility_scan());
    report(4, "fully connected spectra", fully_connected_spectra());
    report(5, "ladder parity law", ladder_parity_law());
    let t = Instant::now();
    let runs = odd_ladder_runs();
    report(6, "optimizer ideal routing", optimizer_ideal_routing(&runs, t));
    report(7, "optimizer stall signature", optimizer_stall_signature());
    report(8, "constructive/optimizer agreement", constructive_agreement(&runs));
    report(9, "ensemble statistics", ensemble_statistics());
    report(10, "property suite", property_suite());
    report(11, "CMA-ES sanity", cma_sanity());
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
