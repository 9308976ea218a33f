//! Property tests for the structural, numeric and colouring invariants.

use hcolour_core::bounds::{occupancy_lower_bound, SparsitySetting};
use hcolour_core::colouring::{
    colour, cover_from_lists, default_step, fractional_greedy, iterated_split, random_cover_with, split_partition, verify_colouring,
    ColourConfig,
};
use hcolour_core::graph::{clique_number, degeneracy, hall_ratio, max_average_degree, Graph};
use hcolour_core::hardcore::{
    independence_polynomial, occupancy_fraction, occupancy_fraction_exact, partition_exact, Fugacity, SamplerMode,
};
use hcolour_core::occupancy::{hall_params, verify_local_occupancy, OccupancyParams};
use hcolour_core::special::{k_function, lambert_w0, lambert_wm1};
use hcolour_core::{seeded_rng, VertexSet};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn graph_from(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(prop::bool::weighted(0.4), n * (n - 1) / 2).prop_map(move |b| graph_from(n, &b)))
}

fn z(g: &Graph, l: &BigRational) -> BigRational {
    if g.n() == 0 {
        BigRational::one()
    } else {
        partition_exact(g, l).unwrap()
    }
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Independent sets of `g` as bitmasks.
fn independent_masks(g: &Graph) -> Vec<u32> {
    let adj: Vec<u32> = (0..g.n()).map(|v| g.neighbours(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    (0u32..1 << g.n()).filter(|&s| (0..g.n()).all(|v| s & (1 << v) == 0 || adj[v] & s == 0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adjacency_is_symmetric_and_loop_free(g in small_graph(10)) {
        for u in 0..g.n() {
            prop_assert!(!g.has_edge(u, u));
            for &v in g.neighbours(u) {
                prop_assert!(g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn structural_parameter_chain(g in small_graph(9)) {
        let mad = max_average_degree(&g).unwrap();
        let n = g.n() as u64;
        prop_assert!(mad >= Ratio::new(2 * g.edge_count() as u64, n));
        let deg = Ratio::from_integer(degeneracy(&g) as u64);
        prop_assert!(deg <= mad && (g.edge_count() == 0 || mad < deg * 2));
        let rho = hall_ratio(&g).unwrap();
        prop_assert!(Ratio::from_integer(clique_number(&g) as u64) <= rho);
        prop_assert!(rho <= Ratio::from_integer(g.max_degree() as u64 + 1));
    }

    #[test]
    fn lambert_branches_are_monotone(a in -0.3678f64..50.0, b in -0.3678f64..50.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(lambert_w0(lo).unwrap() <= lambert_w0(hi).unwrap());
        if hi < 0.0 {
            prop_assert!(lambert_wm1(lo).unwrap() >= lambert_wm1(hi).unwrap());
            prop_assert!(lambert_wm1(hi).unwrap() <= -1.0);
        }
        prop_assert!(lambert_w0(lo).unwrap() >= -1.0);
    }

    #[test]
    fn k_function_is_increasing_and_solves_its_equation(a in 1.0f64..1e6, b in 1.0f64..1e6) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(k_function(lo).unwrap() <= k_function(hi).unwrap());
        let k = k_function(hi).unwrap();
        let lhs = k * (-k).exp();
        let rhs = 1.0 / (std::f64::consts::E * hi);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300) || (lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn deletion_identity_holds_exactly(g in small_graph(9), num in 1i64..8, den in 1i64..5) {
        let l = rational(num, den);
        let total = z(&g, &l);
        for v in 0..g.n() {
            let closed = g.closed_neighbourhood(v);
            let rest: Vec<usize> = (0..g.n()).filter(|&w| !closed.contains(w)).collect();
            prop_assert_eq!(&total, &(z(&g.remove_vertex(v), &l) + &l * z(&g.induced_on(&rest).unwrap(), &l)));
        }
    }

    #[test]
    fn occupancy_fraction_increases_and_stays_below_ratio(g in small_graph(9), l in 0.01f64..5.0) {
        prop_assume!(g.edge_count() < g.n() * (g.n() - 1) / 2 || g.n() == 1);
        let lo = occupancy_fraction(&g, Fugacity::new(l).unwrap()).unwrap();
        let hi = occupancy_fraction(&g, Fugacity::new(l * 1.01).unwrap()).unwrap();
        prop_assert!(hi > lo);
        prop_assert!(lo <= l / (1.0 + l) + 1e-15);
    }

    #[test]
    fn spatial_markov_property(g in small_graph(7), mask in 0u32..128, pick in 0usize..1000) {
        // Condition on one outcome J outside X and compare the conditional law
        // on X with the hard-core law on G[X \ N(J)].
        let n = g.n();
        let x: u32 = mask & ((1 << n) - 1);
        let sets = independent_masks(&g);
        let outside: Vec<u32> = {
            let mut o: Vec<u32> = sets.iter().map(|s| s & !x).collect();
            o.sort_unstable();
            o.dedup();
            o
        };
        let j = outside[pick % outside.len()];
        let l = rational(3, 2);
        let weight = |s: u32| {
            let mut w = BigRational::one();
            for _ in 0..s.count_ones() { w *= &l; }
            w
        };
        let matching: Vec<u32> = sets.iter().copied().filter(|s| s & !x == j).collect();
        let norm: BigRational = matching.iter().map(|&s| weight(s & x)).fold(BigRational::zero(), |a, b| a + b);
        let blocked = (0..n).filter(|&v| j & (1 << v) != 0).fold(0u32, |m, v| m | g.neighbours(v).iter().fold(0, |m, &w| m | 1 << w));
        let free: Vec<usize> = (0..n).filter(|&v| x & (1 << v) != 0 && blocked & (1 << v) == 0).collect();
        let zfree = z(&g.induced_on(&free).unwrap(), &l);
        prop_assert_eq!(&norm, &zfree);
        for &s in &matching {
            prop_assert_eq!((s & x) & blocked, 0);
        }
    }

    #[test]
    fn verified_certificates_are_sound(g in small_graph(8), l in 0.1f64..3.0, beta in 1.0f64..8.0, gamma in 0.05f64..2.0) {
        let lambda = Fugacity::new(l).unwrap();
        let p = OccupancyParams::uniform(g.n(), lambda, beta, gamma).unwrap();
        if verify_local_occupancy(&g, &p).unwrap().verified {
            let exact = occupancy_fraction_exact(&g, &lambda.to_rational()).unwrap();
            let bound = BigRational::from_float(1.0 / (beta + gamma * g.max_degree() as f64)).unwrap();
            prop_assert!(exact >= bound);
        }
    }

    #[test]
    fn occupancy_lower_bound_is_non_decreasing_in_lambda(
        which in 0usize..4, delta in 3u64..2000, l in 0.01f64..10.0, step in 1.0f64..3.0,
    ) {
        let setting = [
            SparsitySetting::TriangleFree,
            SparsitySetting::CkFree { k: 5 },
            SparsitySetting::HallRatio { rho: 2.5 },
            SparsitySetting::Clique { omega: 4 },
        ][which];
        let lo = occupancy_lower_bound(&setting, delta, Fugacity::new(l).unwrap());
        let hi = occupancy_lower_bound(&setting, delta, Fugacity::new(l * step).unwrap());
        if let (Ok(lo), Ok(hi)) = (lo, hi) {
            prop_assert!(hi.value >= lo.value * (1.0 - 1e-9), "{} < {}", hi.value, lo.value);
        }
    }

    #[test]
    fn hall_budget_is_non_decreasing_in_rho(a in 1.0f64..20.0, b in 1.0f64..20.0, d in 2.0f64..1e4, l in 0.05f64..4.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let lambda = Fugacity::new(l).unwrap();
        prop_assert!(hall_params(hi, d, lambda).unwrap().budget >= hall_params(lo, d, lambda).unwrap().budget * (1.0 - 1e-12));
    }

    #[test]
    fn random_covers_pass_their_audit(g in small_graph(8), k in 1usize..6, keep in 0.0f64..1.0, seed in any::<u64>()) {
        let cover = random_cover_with(&g, k, keep, &mut seeded_rng(seed)).unwrap();
        prop_assert!(cover.audit().is_ok());
        prop_assert!(cover.blocks().iter().all(|b| b.len() == k));
        let roundtrip = hcolour_core::colouring::Cover::from_json(g.clone(), &cover.to_json()).unwrap();
        prop_assert_eq!(roundtrip.conflict().edge_list(), cover.conflict().edge_list());
    }

    #[test]
    fn list_covers_pass_their_audit(g in small_graph(7), lists in prop::collection::vec(prop::collection::btree_set(0u64..6, 1..4), 7)) {
        let lists: Vec<Vec<u64>> = lists.into_iter().take(g.n()).map(|s| s.into_iter().collect()).collect();
        let cover = cover_from_lists(&g, &lists).unwrap();
        prop_assert!(cover.audit().is_ok());
    }

    #[test]
    fn returned_colourings_verify(g in small_graph(8), k in 2usize..10, seed in any::<u64>(), ell in 1usize..4) {
        let cover = random_cover_with(&g, k, 0.5, &mut seeded_rng(seed)).unwrap();
        let config = ColourConfig { phase1_rounds: 20, phase2_rounds: 50, ..Default::default() };
        let run = colour(&cover, Fugacity::new(0.3).unwrap(), &vec![ell.min(k); g.n()], &config, seed);
        if let Ok(cert) = &run {
            prop_assert!(cert.verified && verify_colouring(&cover, &cert.chosen));
        }
        let again = colour(&cover, Fugacity::new(0.3).unwrap(), &vec![ell.min(k); g.n()], &config, seed);
        prop_assert_eq!(run.is_ok(), again.is_ok());
    }

    #[test]
    fn fractional_colourings_pass_their_check(g in small_graph(9), extra in 0.0f64..6.0, seed in any::<u64>()) {
        let budgets: Vec<f64> = (0..g.n()).map(|v| g.degree(v) as f64 + 1.0 + extra).collect();
        let step = default_step(&budgets);
        let sampler = SamplerMode::Exact { budget: 1_000_000 };
        if let Ok(c) = fractional_greedy(&g, Fugacity::new(1.0).unwrap(), &budgets, step, sampler, &mut seeded_rng(seed)) {
            prop_assert!(c.check(&g).is_ok(), "{:?}", c.check(&g));
        }
    }

    #[test]
    fn split_parts_partition_the_vertices(g in small_graph(10), seed in any::<u64>()) {
        if let Ok(b) = split_partition(&g, 200, &mut seeded_rng(seed)) {
            let mut all: Vec<usize> = b.parts.concat();
            all.sort_unstable();
            prop_assert_eq!(all, (0..g.n()).collect::<Vec<_>>());
        }
        if let Ok(r) = iterated_split(&g, 1.01, 0.005, 0.04, 200, &mut seeded_rng(seed)) {
            let mut all: Vec<usize> = r.parts.concat();
            all.sort_unstable();
            prop_assert_eq!(all, (0..g.n()).collect::<Vec<_>>());
            prop_assert!(r.parts.len() <= 1 << r.j);
        }
    }

    #[test]
    fn polynomial_counts_every_independent_set(g in small_graph(10)) {
        let total: u64 = independence_polynomial(&g).unwrap().coefficients().iter().map(|c| c.to_u64().unwrap()).sum();
        prop_assert_eq!(total, independent_masks(&g).len() as u64);
        let set = VertexSet::from_indices(g.n(), 0..0);
        prop_assert!(g.is_independent(&set));
    }
}
