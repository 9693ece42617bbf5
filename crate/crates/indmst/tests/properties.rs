//! Structural invariants checked on randomized inputs: matroid axioms on
//! the shipped oracles, primitive-operation contracts, generator validity,
//! and text-format round trips.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use indmst::graph::validate_instance;
use indmst::matroid::{
    closure, find_circuit, min_weight_basis, rank, set_weight, ElementSet, MatroidOracle,
    PartitionMatroid, UniformMatroid,
};
use indmst::{io, Graph};

fn small_graph(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=7);
    let m = rng.gen_range(n - 1..=12);
    io::gen_random(n, m, seed, (-9, 9), 0.5).unwrap()
}

fn random_subset(ground: usize, rng: &mut impl Rng) -> ElementSet {
    ElementSet::from_ids(ground, (0..ground).filter(|_| rng.gen_bool(0.5)))
}

fn random_independent<O: MatroidOracle>(oracle: &O, rng: &mut impl Rng) -> ElementSet {
    let mut ids: Vec<usize> = (0..oracle.ground_size()).collect();
    ids.shuffle(rng);
    let mut s = ElementSet::empty(oracle.ground_size());
    for e in ids {
        if rng.gen_bool(0.7) {
            s.insert(e);
            if !oracle.is_independent(&s) {
                s.remove(e);
            }
        }
    }
    s
}

/// Acyclicity from scratch: every connected component of the edge subset
/// must carry exactly one fewer edge than vertices. No union-find involved.
fn acyclic_by_component_count(g: &Graph, set: &ElementSet) -> bool {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in set.iter() {
        let edge = g.edge(e);
        adj[edge.u].push(edge.v);
        adj[edge.v].push(edge.u);
    }
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut vertices = 0usize;
        let mut degree_sum = 0usize;
        while let Some(at) = stack.pop() {
            vertices += 1;
            degree_sum += adj[at].len();
            for &to in &adj[at] {
                if !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        if degree_sum / 2 != vertices - 1 {
            return false;
        }
    }
    true
}

#[test]
fn graphic_oracle_matches_component_counting_on_500_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for round in 0..500 {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(n - 1..=2 * n);
        let g = io::gen_random(n, m, round, (-5, 5), 0.5).unwrap();
        let oracle = g.oracle();
        let set = random_subset(m, &mut rng);
        assert_eq!(
            oracle.is_independent(&set),
            acyclic_by_component_count(&g, &set),
            "divergence on seed {round} set {set:?}"
        );
    }
}

#[test]
fn independence_is_hereditary_across_oracle_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for round in 0..200 {
        let g = small_graph(round);
        let graphic = g.oracle();
        let uniform = UniformMatroid::new(
            rng.gen_range(1..=5),
            g.edge_count(),
        );
        let blocks: Vec<usize> = (0..g.edge_count()).map(|_| rng.gen_range(0..3)).collect();
        let partition = PartitionMatroid::new(blocks, vec![2, 1, 3]).unwrap();

        fn check<O: MatroidOracle>(oracle: &O, rng: &mut impl Rng) {
            let ind = random_independent(oracle, rng);
            assert!(oracle.is_independent(&ind));
            let sub = ElementSet::from_ids(
                oracle.ground_size(),
                ind.iter().filter(|_| rng.gen_bool(0.5)),
            );
            assert!(
                oracle.is_independent(&sub),
                "subset of independent set must stay independent"
            );
        }
        check(&graphic, &mut rng);
        check(&uniform, &mut rng);
        check(&partition, &mut rng);
    }
}

#[test]
fn circuits_are_minimal_dependent_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut found = 0;
    for round in 0..300 {
        let g = small_graph(round);
        let oracle = g.oracle();
        let ind = random_independent(&oracle, &mut rng);
        let candidate = (0..g.edge_count()).find(|&e| {
            !ind.contains(e) && !oracle.is_independent(&ind.plus(e))
        });
        let Some(e) = candidate else { continue };
        found += 1;
        let circuit = find_circuit(&oracle, &ind, e).unwrap();
        assert!(circuit.contains(e));
        assert!(!oracle.is_independent(&circuit), "circuit must be dependent");
        for f in circuit.iter() {
            assert!(
                oracle.is_independent(&circuit.minus(f)),
                "proper subsets of a circuit must be independent"
            );
        }
    }
    assert!(found > 100, "circuit sampling starved: {found}");
}

#[test]
fn greedy_basis_is_minimum_over_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for round in 0..120 {
        let n = rng.gen_range(3..=5);
        let m = rng.gen_range(n - 1..=9);
        let g = io::gen_random(n, m, round * 3 + 1, (-9, 9), 0.5).unwrap();
        let oracle = g.oracle();
        let weights = g.weights();
        let basis = min_weight_basis(&oracle, &ElementSet::full(m), &weights);
        let target_rank = rank(&oracle, &ElementSet::full(m));
        assert_eq!(basis.len(), target_rank);

        let mut best: Option<i64> = None;
        for mask in 0u32..(1 << m) {
            let set = ElementSet::from_ids(m, (0..m).filter(|&i| mask >> i & 1 == 1));
            if set.len() == target_rank && oracle.is_independent(&set) {
                let w = set_weight(&set, &weights);
                best = Some(best.map_or(w, |b: i64| b.min(w)));
            }
        }
        assert_eq!(set_weight(&basis, &weights), best.unwrap());
    }
}

/// The DFS cycle recovery must name exactly the edges the oracle-generic
/// removal test names.
#[test]
fn cycle_recovery_agrees_with_oracle_generic_circuits() {
    use indmst::graph::cycle_through;

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut found = 0;
    for round in 0..300 {
        let g = small_graph(round);
        let oracle = g.oracle();
        let forest = min_weight_basis(&oracle, &ElementSet::full(g.edge_count()), &g.weights());
        let closing: Vec<usize> = (0..g.edge_count())
            .filter(|&e| !forest.contains(e) && !oracle.is_independent(&forest.plus(e)))
            .collect();
        if closing.is_empty() {
            continue;
        }
        let e = closing[rng.gen_range(0..closing.len())];
        found += 1;
        let cycle = cycle_through(&g, &forest, e).unwrap();
        assert_eq!(cycle, find_circuit(&oracle, &forest, e).unwrap());
        assert!(cycle.contains(e));
        for f in cycle.iter() {
            assert!(oracle.is_independent(&cycle.minus(f)));
        }
    }
    assert!(found > 100, "cycle sampling starved: {found}");
}

/// Replaying any plan must walk through genuine bases whose weights match
/// both the recorded step weights and a from-scratch minimum basis over the
/// elements built so far.
#[test]
fn plan_steps_match_fresh_minimum_bases_for_all_solvers() {
    use indmst::solver::{
        efficient_solve_graph, f_eval, greedy_solve, replay_bases, simplified_greedy_solve,
    };

    for round in 0..120 {
        let g = small_graph(round * 7 + 3);
        let inst = g.instance();
        let plans = [
            greedy_solve(&inst).unwrap(),
            simplified_greedy_solve(&inst).unwrap(),
            efficient_solve_graph(&g, false).unwrap().0,
        ];
        for plan in &plans {
            let bases = replay_bases(&plan.initial_basis, &plan.exchanges);
            let mut built = ElementSet::empty(g.edge_count());
            for (i, basis) in bases.iter().enumerate() {
                if i > 0 {
                    built.insert(plan.exchanges[i - 1].added);
                }
                assert!(inst.oracle.is_independent(basis));
                assert_eq!(basis.len(), plan.initial_basis.len());
                assert_eq!(set_weight(basis, &inst.weights), plan.step_weights[i]);
                assert_eq!(plan.step_weights[i], f_eval(&inst, &built));
            }
            assert!(
                plan.step_weights.windows(2).all(|w| w[1] < w[0]),
                "step weights must strictly decrease"
            );
        }
    }
}

/// With every weight equal no swap ever improves the basis, so plans are
/// empty, the objective collapses to (T+1)·w*, and all solvers still agree
/// with the exhaustive optimum despite total tie saturation.
#[test]
fn fully_tied_weights_keep_solvers_exact_and_plans_empty() {
    use indmst::reference::{brute_force_optimum, DEFAULT_CAP};
    use indmst::solver::{efficient_solve_graph, greedy_solve, simplified_greedy_solve};

    let mut rng = ChaCha8Rng::seed_from_u64(333);
    for round in 0..50 {
        let n = rng.gen_range(3..=7);
        let m = rng.gen_range(n - 1..=12);
        let g = io::gen_random(n, m, round, (3, 3), 0.5).unwrap();
        let inst = g.instance();
        let brute = brute_force_optimum(&inst, DEFAULT_CAP).unwrap();
        let greedy = greedy_solve(&inst).unwrap();
        let simplified = simplified_greedy_solve(&inst).unwrap();
        let (fast, _) = efficient_solve_graph(&g, false).unwrap();
        assert_eq!(greedy.objective, brute, "seed {round}");
        assert_eq!(simplified.objective, brute, "seed {round}");
        assert_eq!(fast.objective, brute, "seed {round}");

        assert!(fast.order().is_empty());
        let horizon = g.horizon() as i64;
        assert_eq!(fast.objective, (horizon + 1) * fast.ultimate_weight);

        let json = io::emit_plan(&fast, "efficient", io::OutputFormat::Json, Some(&g));
        assert!(json.contains("\"order\": []"), "{json}");
        let tsv = io::emit_plan(&fast, "efficient", io::OutputFormat::Tsv, None);
        assert!(tsv.contains(&format!("objective\t{brute}")), "{tsv}");
    }
}

proptest! {
    #[test]
    fn closure_is_monotone_idempotent_and_extensive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = small_graph(seed);
        let oracle = g.oracle();
        let a = random_subset(g.edge_count(), &mut rng);
        let b = a.union(&random_subset(g.edge_count(), &mut rng));
        let cl_a = closure(&oracle, &a);
        let cl_b = closure(&oracle, &b);
        prop_assert!(a.is_subset_of(&cl_a));
        prop_assert!(cl_a.is_subset_of(&cl_b), "closure must be monotone");
        prop_assert_eq!(closure(&oracle, &cl_a), cl_a);
    }

    #[test]
    fn rank_never_exceeds_cardinality_and_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=10);
        let r = rng.gen_range(1..=n - 1);
        let oracle = UniformMatroid::new(r, n);
        let a = random_subset(n, &mut rng);
        let b = a.union(&random_subset(n, &mut rng));
        let (ra, rb) = (rank(&oracle, &a), rank(&oracle, &b));
        prop_assert!(ra <= a.len());
        prop_assert!(ra <= rb);
        prop_assert_eq!(ra, a.len().min(r));
    }

    #[test]
    fn generated_instances_validate_and_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=9);
        let m = if n == 1 { 0 } else { rng.gen_range(n - 1..=14) };
        let frac = rng.gen_range(0.0..=1.0);
        let g = io::gen_random(n, m, seed, (-20, 20), frac).unwrap();
        prop_assert!(validate_instance(&g).is_ok());
        let text = io::emit_instance(&g);
        let reparsed = io::parse_instance(&text).unwrap();
        prop_assert_eq!(&reparsed, &g);
        prop_assert_eq!(io::emit_instance(&reparsed), text);
    }
}
