mod common;

use ising_reductions::config::{clusters, degree_parity};
use ising_reductions::oracle::{
    check_kernel, enumerate_world, exact_kernel_matrix, histogram, max_abs_diff, tv_distance,
    ExactTables, KernelTag,
};
use ising_reductions::reduce::{rc_to_subs, reduce, subs_to_rc};
use ising_reductions::{
    fixtures, BernoulliSource, Coupling, RcConfig, RngStream, SubgraphConfig, World,
};
use proptest::prelude::*;

#[test]
fn kernels_push_oracle_tables_forward() {
    for name in ["k2", "path3", "triangle", "cycle4", "k4"] {
        for beta in [0.0, 0.3, 1.0, f64::INFINITY] {
            let g = fixtures::uniform(name, Coupling::from_beta(beta).unwrap()).unwrap();
            let tables = ExactTables::build(&g).unwrap();
            for tag in KernelTag::ALL {
                let c = check_kernel(&g, &tables, tag).unwrap();
                assert!(c.pass, "{name} beta={beta} {tag:?}: {c:?}");
            }
        }
    }
}

#[test]
fn mixed_couplings_push_forward() {
    let g = fixtures::mixed("k4", &[0.1, 0.7, f64::INFINITY, 0.0, 1.5, 0.4])
        .unwrap()
        .unwrap();
    let tables = ExactTables::build(&g).unwrap();
    for tag in KernelTag::ALL {
        assert!(check_kernel(&g, &tables, tag).unwrap().pass, "{tag:?}");
    }
}

#[test]
fn round_trip_fixes_subgraphs_law_on_triangle() {
    let g = common::triangle_lambda(0.6);
    let pi = enumerate_world(&g, World::Subs).unwrap().probs;
    let up = exact_kernel_matrix(&g, KernelTag::SubsToRc).unwrap();
    let down = exact_kernel_matrix(&g, KernelTag::RcToSubs).unwrap();
    let back = down.apply(&up.apply(&pi).unwrap()).unwrap();
    assert!(max_abs_diff(&back, &pi) < 1e-9);
}

fn sampled_tv(
    g: &ising_reductions::WeightedGraph,
    from: World,
    to: World,
    n: usize,
    seed: u64,
) -> f64 {
    let source = enumerate_world(g, from).unwrap();
    let target = enumerate_world(g, to).unwrap();
    let sampler = source.sampler();
    let mut rng = RngStream::new(seed, 0);
    let out = (0..n).map(|_| {
        let x = source.config(g, sampler.sample(&mut rng));
        reduce(g, &x, to, &mut rng).unwrap().index()
    });
    tv_distance(&histogram(out, target.len()), &target.probs).unwrap()
}

#[test]
fn sampled_reductions_match_oracle() {
    let g = common::triangle_lambda(0.6);
    for (from, to) in [
        (World::Subs, World::Rc),
        (World::Rc, World::Subs),
        (World::Rc, World::Spins),
        (World::Spins, World::Rc),
        (World::Subs, World::Spins),
        (World::Spins, World::Subs),
    ] {
        let tv = sampled_tv(&g, from, to, 40_000, 7);
        assert!(tv < 0.015, "{from}->{to}: tv {tv}");
    }
}

#[test]
fn rc_to_subs_budget_on_cycle4() {
    let g = common::fixture_beta("cycle4", 0.5);
    for k in 0..16u64 {
        let z = RcConfig::from_index(k, 4);
        let mut rng = RngStream::new(k, 0);
        rc_to_subs(&g, &z, &mut rng).unwrap();
        let c = clusters(&g, &z).unwrap().count;
        assert_eq!(rng.draws() as usize, z.count_ones() + c - 4, "z={z}");
    }
}

proptest! {
    #[test]
    fn subs_to_rc_dominates_and_stays_within_budget(
        (g, bits) in common::graph_and_bits(6, 10),
        seed in any::<u64>(),
    ) {
        // only even subgraphs supported on positive-lambda edges are valid inputs
        let y = SubgraphConfig::new(bits);
        let odd = degree_parity(&g, &y, None).unwrap().iter().any(|&o| o);
        let dead = (0..g.num_edges()).any(|e| y.get(e) && g.edge(e).coupling.lambda() == 0.0);
        prop_assume!(!odd && !dead);
        let mut rng = RngStream::new(seed, 0);
        let z = subs_to_rc(&g, &y, &mut rng).unwrap();
        prop_assert!(y.le(z.bits()));
        prop_assert!(rng.draws() as usize <= g.num_edges());
    }

    #[test]
    fn rc_to_subs_is_even_and_dominated(
        (g, bits) in common::graph_and_bits(7, 12),
        seed in any::<u64>(),
    ) {
        let z = RcConfig::new(bits);
        prop_assume!((0..g.num_edges()).all(|e| !z.get(e) || g.edge(e).coupling.p() > 0.0));
        let mut rng = RngStream::new(seed, 0);
        let y = rc_to_subs(&g, &z, &mut rng).unwrap();
        prop_assert!(y.le(z.bits()));
        prop_assert!(degree_parity(&g, &y, None).unwrap().iter().all(|&o| !o));
        prop_assert!(rng.draws() as usize <= g.num_edges());
    }
}
