//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::Instant;

use ising_reductions::cftp::{heat_bath_rc_step, perfect_batch};
use ising_reductions::config::degree_parity;
use ising_reductions::oracle::{
    check_evensubgraph_count, check_field_reduction, check_kernel, check_rc_normalizer,
    check_relate_identity, histogram, tv_distance, ExactTables, KernelTag,
};
use ising_reductions::par::{self, Backend};
use ising_reductions::reduce::{rc_to_subs, reduce, subs_to_rc};
use ising_reductions::{
    fixtures, BernoulliSource, Coupling, RcConfig, RngStream, WeightedGraph, World,
};

const BETAS: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 2.0];
const LAMBDAS: [f64; 3] = [0.3, 0.6, 0.9];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn failures(failed: &[String]) -> String {
    if failed.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", failed.join(", "))
    }
}

/// Every fixture at every grid value, uniformly and with the grid rotated
/// along the edges.
fn fixture_grid(max_edges: usize) -> Vec<(String, WeightedGraph)> {
    let mut out = Vec::new();
    for name in fixtures::NAMES {
        let (_, pairs) = fixtures::edge_list(name).unwrap();
        if pairs.len() > max_edges {
            continue;
        }
        for b in BETAS {
            out.push((
                format!("{name}@{b}"),
                fixtures::uniform(name, Coupling::from_beta(b).unwrap()).unwrap(),
            ));
        }
        for shift in 0..BETAS.len() {
            let betas: Vec<f64> = (0..BETAS.len())
                .map(|k| BETAS[(k + shift) % BETAS.len()])
                .collect();
            out.push((
                format!("{name}@mixed{shift}"),
                fixtures::mixed(name, &betas).unwrap().unwrap(),
            ));
        }
    }
    out
}

fn relate_identity() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let cases = fixture_grid(usize::MAX);
    for (label, g) in &cases {
        for c in check_relate_identity(g).unwrap() {
            worst = worst.max(c.rel_error);
            if c.name == "spins_subs" && c.rel_error >= 1e-10 {
                failed.push(label.clone());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failed.is_empty() && secs < 10.0,
        format!(
            "{} graphs, max rel err {worst:.2e} (tol 1e-10), {secs:.2}s (limit 10s){}",
            cases.len(),
            failures(&failed)
        ),
    )
}

fn rc_normalizer() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let cases = fixture_grid(usize::MAX);
    for (label, g) in &cases {
        let c = check_rc_normalizer(g).unwrap();
        worst = worst.max(c.rel_error);
        if c.rel_error >= 1e-10 {
            failed.push(label.clone());
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{} graphs, max rel err {worst:.2e} (tol 1e-10){}",
            cases.len(),
            failures(&failed)
        ),
    )
}

fn stationarity(tags: &[KernelTag], max_edges: usize) -> Outcome {
    let cases = fixture_grid(max_edges);
    let results = par::map_range(cases.len(), Backend::Parallel, |i| {
        let g = &cases[i].1;
        let tables = ExactTables::build(g).unwrap();
        tags.iter()
            .map(|&t| check_kernel(g, &tables, t).unwrap())
            .collect::<Vec<_>>()
    });
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for ((label, _), checks) in cases.iter().zip(results) {
        for c in checks {
            worst = worst.max(c.max_abs_diff);
            if c.max_abs_diff >= 1e-9 || c.max_row_defect >= 1e-12 {
                failed.push(format!("{label}:{}", c.kernel.name()));
            }
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{} graphs x {} kernels, max diff {worst:.2e} (tol 1e-9){}",
            cases.len(),
            tags.len(),
            failures(&failed)
        ),
    )
}

fn sampling_exactness() -> Outcome {
    const N: usize = 100_000;
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let mut runs = 0;
    for name in ["triangle", "cycle4"] {
        for lambda in LAMBDAS {
            let g = fixtures::uniform(name, Coupling::from_lambda(lambda).unwrap()).unwrap();
            let tables = ExactTables::build(&g).unwrap();
            let mut record = |label: String, to: World, idx: Vec<u64>| {
                let target = tables.world(to);
                let tv = tv_distance(&histogram(idx, target.len()), &target.probs).unwrap();
                worst = worst.max(tv);
                runs += 1;
                if tv >= 0.01 {
                    failed.push(format!("{label} tv={tv:.4}"));
                }
            };
            for (k, (from, to)) in [
                (World::Subs, World::Rc),
                (World::Rc, World::Subs),
                (World::Rc, World::Spins),
                (World::Spins, World::Rc),
            ]
            .into_iter()
            .enumerate()
            {
                let source = tables.world(from);
                let sampler = source.sampler();
                let base = RngStream::new(1000 + k as u64, (lambda * 10.0) as u64);
                let idx = par::map_range(N, Backend::Parallel, |i| {
                    let mut rng = base.substream(i as u64);
                    let x = source.config(&g, sampler.sample(&mut rng));
                    reduce(&g, &x, to, &mut rng).unwrap().index()
                });
                record(format!("{name}@{lambda} {from}->{to}"), to, idx);
            }
            let base = RngStream::new(2000, (lambda * 10.0) as u64);
            let idx = perfect_batch(&g, World::Subs, &base, N, 30, Backend::Parallel)
                .unwrap()
                .into_iter()
                .map(|o| o.config.index())
                .collect();
            record(format!("{name}@{lambda} perfect-subs"), World::Subs, idx);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failed.is_empty() && secs < 60.0,
        format!(
            "{runs} runs of {N} draws, max tv {worst:.4} (tol 0.01), {secs:.2}s{}",
            failures(&failed)
        ),
    )
}

fn cftp_correctness() -> Outcome {
    // monotonicity: every ordered pair lo <= hi, every edge, a u grid
    let mut violations = 0u64;
    let mut checked = 0u64;
    let grid: Vec<f64> = (0..=200).map(|k| k as f64 / 200.0).collect();
    for name in fixtures::NAMES {
        let (_, pairs) = fixtures::edge_list(name).unwrap();
        let m = pairs.len();
        if m > 8 {
            continue;
        }
        for p in [0.2, 0.5, 0.9] {
            let g = fixtures::uniform(name, Coupling::from_p(p).unwrap()).unwrap();
            for hi in 0..1u64 << m {
                // enumerate submasks of hi
                let mut lo = hi;
                loop {
                    for e in 0..m {
                        for &u in &grid {
                            let mut a = RcConfig::from_index(lo, m);
                            let mut b = RcConfig::from_index(hi, m);
                            heat_bath_rc_step(&g, &mut a, e, u);
                            heat_bath_rc_step(&g, &mut b, e, u);
                            checked += 1;
                            if !a.le(b.bits()) {
                                violations += 1;
                            }
                        }
                    }
                    if lo == 0 {
                        break;
                    }
                    lo = (lo - 1) & hi;
                }
            }
        }
    }
    const N: usize = 100_000;
    let g = fixtures::uniform("k2", Coupling::from_p(0.5).unwrap()).unwrap();
    let draws = perfect_batch(
        &g,
        World::Rc,
        &RngStream::new(6, 0),
        N,
        30,
        Backend::Parallel,
    )
    .unwrap();
    let open = draws.iter().filter(|o| o.config.index() == 1).count() as f64 / N as f64;
    let se = (2.0 / 9.0 / N as f64).sqrt();
    let within = (open - 1.0 / 3.0).abs() < 3.0 * se;
    outcome(
        violations == 0 && within,
        format!(
            "{violations} monotonicity violations in {checked} updates; k2 P(open) {open:.4} vs 1/3 (3 se = {:.4})",
            3.0 * se
        ),
    )
}

fn random_graph(rng: &mut RngStream, max_nodes: usize, max_edges: usize) -> WeightedGraph {
    let n = 2 + rng.index(max_nodes - 1);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if edges.len() < max_edges && rng.uniform() < 0.6 {
                let c = match rng.index(8) {
                    0 => Coupling::ZERO,
                    1 => Coupling::INFINITE,
                    _ => Coupling::from_beta(3.0 * rng.uniform()).unwrap(),
                };
                edges.push((u, v, c));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

fn structural_invariants() -> Outcome {
    const CALLS: usize = 1_000_000;
    const CHUNKS: usize = 1000;
    let per_chunk = CALLS / CHUNKS;
    let base = RngStream::new(7, 0);
    let tallies = par::map_range(CHUNKS, Backend::Parallel, |c| {
        let mut rng = base.substream(c as u64);
        let (mut calls, mut odd, mut not_below_z, mut not_above_y, mut over_budget) =
            (0, 0, 0, 0, 0);
        while calls < per_chunk {
            let g = random_graph(&mut rng, 8, 14);
            let m = g.num_edges();
            for _ in 0..10 {
                let z = RcConfig::new(
                    (0..m)
                        .map(|e| g.edge(e).coupling.p() > 0.0 && rng.uniform() < 0.5)
                        .collect(),
                );
                let y = rc_to_subs(&g, &z, &mut rng).unwrap();
                calls += 1;
                if degree_parity(&g, &y, None).unwrap().iter().any(|&o| o) {
                    odd += 1;
                }
                if !y.le(z.bits()) {
                    not_below_z += 1;
                }
                let before = rng.draws();
                let lam = subs_to_rc(&g, &y, &mut rng).unwrap();
                calls += 1;
                if !y.le(lam.bits()) {
                    not_above_y += 1;
                }
                if (rng.draws() - before) as usize > m {
                    over_budget += 1;
                }
            }
        }
        [calls, odd, not_below_z, not_above_y, over_budget]
    });
    let t = tallies.iter().fold([0usize; 5], |mut acc, r| {
        acc.iter_mut().zip(r).for_each(|(a, b)| *a += b);
        acc
    });
    outcome(
        t[0] >= CALLS && t[1..].iter().all(|&x| x == 0),
        format!(
            "{} calls: {} odd outputs, {} Y>z, {} Lambda<y, {} over-budget",
            t[0], t[1], t[2], t[3], t[4]
        ),
    )
}

fn even_count() -> Outcome {
    let mut rng = RngStream::new(8, 0);
    let mut mismatches = 0;
    for _ in 0..200 {
        let g = random_graph(&mut rng, 7, 10);
        let z = RcConfig::new((0..g.num_edges()).map(|_| rng.uniform() < 0.7).collect());
        if !check_evensubgraph_count(&g, &z).unwrap().pass {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("200 (graph, z) pairs, {mismatches} mismatches"),
    )
}

fn field_reduction() -> Outcome {
    let magnitudes = [0.1, 0.5, 1.0, 2.0, f64::INFINITY];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut failed = Vec::new();
    for (name, n, pairs) in [
        ("single", 1, vec![]),
        ("path3", 3, vec![(0, 1), (1, 2)]),
        ("triangle", 3, vec![(0, 1), (1, 2), (0, 2)]),
    ] {
        for beta in [0.0, 0.4, 1.5] {
            for sign in [1.0, -1.0] {
                for shift in 0..magnitudes.len() {
                    // per-node magnitudes rotated along the grid, plus a zero entry
                    let field: Vec<f64> = (0..n)
                        .map(|i| match (i + shift) % (magnitudes.len() + 1) {
                            k if k == magnitudes.len() => 0.0,
                            k => sign * magnitudes[k],
                        })
                        .collect();
                    let g = WeightedGraph::uniform(n, &pairs, Coupling::from_beta(beta).unwrap())
                        .unwrap()
                        .with_field(field.clone())
                        .unwrap();
                    let r = check_field_reduction(&g).unwrap();
                    cases += 1;
                    worst = worst.max(r.max_abs_diff);
                    if r.max_abs_diff >= 1e-9 {
                        failed.push(format!("{name} beta={beta} B={field:?}"));
                    }
                }
            }
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{cases} fields, max diff {worst:.2e} (tol 1e-9){}",
            failures(&failed)
        ),
    )
}

fn main() {
    // libtest flags such as --nocapture are accepted and ignored
    let criteria: [Criterion; 9] = [
        ("relate identity", relate_identity),
        ("rc normalizer", rc_normalizer),
        ("kernel stationarity", || {
            stationarity(
                &[
                    KernelTag::SubsToRc,
                    KernelTag::RcToSubs,
                    KernelTag::SpinsToRc,
                    KernelTag::RcToSpins,
                ],
                10,
            )
        }),
        ("chain stationarity", || {
            stationarity(&[KernelTag::SwClassic, KernelTag::SwSubgraphs], 6)
        }),
        ("sampling exactness", sampling_exactness),
        ("cftp correctness", cftp_correctness),
        ("structural invariants", structural_invariants),
        ("even-subgraph count", even_count),
        ("field reduction", field_reduction),
    ];
    let mut all = true;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        all &= o.pass;
        println!(
            "criterion {}: {} {name}: {} [{:.2}s]",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
