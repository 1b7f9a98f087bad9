use bpcg::herding::{
    mmd_squared, run_bpcg_herding, run_herding, run_lazy_bpcg_herding, run_monte_carlo, run_sbq,
    run_vanilla_herding, CandidatePool, DiscreteMeasure, EmbeddingCache, HerdingConfig, HerdingProblem, KernelKind,
    Measure, OracleSettings, VanillaRule,
};
use bpcg::invariants;
use bpcg::solvers::{Bpcg, CgProblem, SolverRegistry};
use bpcg::{ActiveSet, Atom, RunTrace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cache(kind: KernelKind, measure: Measure) -> EmbeddingCache {
    EmbeddingCache::new(kind.kernel(), measure).unwrap()
}

fn config(iterations: usize, pool_size: usize) -> HerdingConfig {
    let mut c = HerdingConfig { pool_size, ..HerdingConfig::default() };
    c.solver.max_iterations = iterations;
    c.solver.record_timing = false;
    c
}

fn theorem_bound_violations(trace: &RunTrace) -> usize {
    trace.records.iter().enumerate().filter(|(i, r)| r.primal > 8.0 / (i + 1) as f64).count()
}

#[test]
fn oracle_matches_a_dense_grid_in_one_dimension() {
    let c = cache(KernelKind::Gaussian, Measure::uniform(1).unwrap());
    let pool = CandidatePool::halton(&c, 4096);
    let mut problem = HerdingProblem::new(&c, &pool, OracleSettings::default());
    let set = ActiveSet::singleton(Atom::point(vec![0.0]).unwrap());
    problem.refresh(&set).unwrap();
    let w = problem.linear_minimizer(&set).unwrap();
    let x = w.as_point().unwrap().to_vec();
    let found = problem.witness(&x);
    let grid_min = (0..=100_000)
        .map(|i| problem.witness(&[-1.0 + 2.0 * i as f64 / 100_000.0]))
        .fold(f64::INFINITY, f64::min);
    assert!((found - grid_min).abs() < 1e-6, "{found} vs {grid_min}");
    assert!(found <= problem.witness(&[0.0]));
    assert!(x[0].abs() > 0.5, "minimizer {x:?} should sit towards the boundary");
}

#[test]
fn witness_is_symmetric_for_symmetric_problems() {
    for kind in KernelKind::ALL {
        let c = cache(kind, Measure::truncated_gaussian(2).unwrap());
        let pool = CandidatePool::halton(&c, 64);
        let mut problem = HerdingProblem::new(&c, &pool, OracleSettings::default());
        let set = ActiveSet::singleton(Atom::point(vec![0.0, 0.0]).unwrap());
        problem.refresh(&set).unwrap();
        for p in &pool.points {
            let minus: Vec<f64> = p.iter().map(|v| -v).collect();
            assert!((problem.witness(p) - problem.witness(&minus)).abs() < 1e-12);
        }
    }
}

#[test]
fn energy_of_dirac_differences_is_at_most_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in KernelKind::ALL {
        let k = kind.kernel();
        for _ in 0..1000 {
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let y: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let e = k.eval(&x, &x) + k.eval(&y, &y) - 2.0 * k.eval(&x, &y);
            assert!((0.0..=2.0).contains(&e));
        }
    }
}

#[test]
fn herding_runs_obey_the_sublinear_bound_and_invariants() {
    for kind in KernelKind::ALL {
        for measure in [Measure::uniform(2).unwrap(), Measure::default_mixture(2).unwrap()] {
            let name = measure.name();
            let c = cache(kind, measure);
            let cfg = config(60, 1024);
            let bpcg = run_bpcg_herding(&c, &[0.0, 0.0], &cfg).unwrap();
            let lazy = run_lazy_bpcg_herding(&c, &[0.0, 0.0], &cfg).unwrap();
            let line = run_vanilla_herding(&c, &[0.0, 0.0], VanillaRule::LineSearch, 60, &cfg).unwrap();
            for (label, run) in [("bpcg", &bpcg), ("lazy", &lazy), ("linesearch", &line)] {
                assert_eq!(theorem_bound_violations(&run.trace), 0, "{kind}/{name}/{label}");
                assert!(invariants::monotone(&run.trace).is_empty(), "{kind}/{name}/{label}");
                assert!(invariants::drift(&run.trace, 1e-9).is_empty(), "{kind}/{name}/{label}");
                assert!(run.measure.is_probability());
                let direct = mmd_squared(&c, &run.measure);
                assert!((direct - run.trace.final_primal()).abs() < 1e-9, "{kind}/{name}/{label}");
            }
            let v = invariants::check_bpcg(&bpcg.trace, 1.0, 2.0, 2f64.sqrt());
            assert!(v.is_empty(), "{kind}/{name}: {v:?}");
            assert!(bpcg.measure.len() <= bpcg.trace.t_fw + 1);
            assert!(invariants::lazy_bookkeeping(&lazy.trace).is_empty());
            assert!(invariants::no_swap_steps(&lazy.trace).is_empty());
            assert!(lazy.trace.lmo_calls < lazy.trace.len());
        }
    }
}

#[test]
fn drift_checks_are_recorded_on_long_runs() {
    let c = cache(KernelKind::Matern52, Measure::uniform(2).unwrap());
    let run = run_bpcg_herding(&c, &[0.0, 0.0], &config(160, 1024)).unwrap();
    assert_eq!(run.trace.drift_checks.len(), 3);
    assert!(invariants::drift(&run.trace, 1e-9).is_empty());
}

#[test]
fn lazy_discrepancy_stays_within_twice_the_full_one() {
    let c = cache(KernelKind::Matern32, Measure::uniform(2).unwrap());
    let cfg = config(600, 4096);
    let full = run_bpcg_herding(&c, &[0.0, 0.0], &cfg).unwrap();
    let lazy = run_lazy_bpcg_herding(&c, &[0.0, 0.0], &cfg).unwrap();
    let best = |trace: &RunTrace, n: usize| {
        trace.records.iter().filter(|r| r.support_size == n).map(|r| r.primal.sqrt()).fold(f64::INFINITY, f64::min)
    };
    let mut compared = 0;
    for n in 2..=full.measure.len().max(lazy.measure.len()) {
        let (a, b) = (best(&full.trace, n), best(&lazy.trace, n));
        if a.is_finite() && b.is_finite() {
            assert!(b <= 2.0 * a, "{n} nodes: lazy {b} vs full {a}");
            compared += 1;
        }
    }
    assert!(compared >= 10);
}

#[test]
fn line_search_and_equal_weight_herding_share_the_first_node() {
    let c = cache(KernelKind::Gaussian, Measure::uniform(2).unwrap());
    let cfg = config(0, 1024);
    let line = run_vanilla_herding(&c, &[0.0, 0.0], VanillaRule::LineSearch, 1, &cfg).unwrap();
    let equal = run_vanilla_herding(&c, &[0.0, 0.0], VanillaRule::EqualWeight, 1, &cfg).unwrap();
    let new_node = |m: &DiscreteMeasure| m.nodes.iter().find(|n| n.as_slice() != [0.0, 0.0]).cloned();
    assert!(new_node(&line.measure).is_some());
    assert_eq!(new_node(&line.measure), new_node(&equal.measure));
    // same direction, optimal versus fixed step
    assert!(line.trace.final_primal() <= equal.trace.final_primal());
}

/// Greedy line search loses to uniform weights after a few steps on every
/// kernel and measure tried (about 10x in squared discrepancy after 100
/// steps), so the claim that it dominates at every iteration does not hold.
#[test]
#[ignore = "line-search herding does not dominate equal weights; kept as a record"]
fn line_search_herding_beats_equal_weights_at_every_iteration() {
    let c = cache(KernelKind::Gaussian, Measure::uniform(2).unwrap());
    let cfg = config(0, 1024);
    let line = run_vanilla_herding(&c, &[0.0, 0.0], VanillaRule::LineSearch, 80, &cfg).unwrap();
    let equal = run_vanilla_herding(&c, &[0.0, 0.0], VanillaRule::EqualWeight, 80, &cfg).unwrap();
    for (i, (a, b)) in line.trace.records.iter().zip(&equal.trace.records).enumerate() {
        assert!(a.primal <= b.primal + 1e-12, "iteration {}: {} > {}", i + 1, a.primal, b.primal);
    }
}

#[test]
fn equal_weight_herding_spreads_mass_uniformly() {
    let t = 12;
    let c = cache(KernelKind::Matern52, Measure::uniform(2).unwrap());
    let run = run_vanilla_herding(&c, &[0.0, 0.0], VanillaRule::EqualWeight, t, &config(0, 512)).unwrap();
    assert_eq!(run.measure.len(), t + 1);
    for w in &run.measure.weights {
        assert!((w - 1.0 / (t + 1) as f64).abs() < 1e-12);
    }
    // in one dimension nodes recur, and each carries its visit count
    let c = cache(KernelKind::Matern52, Measure::uniform(1).unwrap());
    let run = run_vanilla_herding(&c, &[0.0], VanillaRule::EqualWeight, t, &config(0, 512)).unwrap();
    let mut visits = 0;
    for w in &run.measure.weights {
        let count = w * (t + 1) as f64;
        assert!((count - count.round()).abs() < 1e-9 && count.round() >= 1.0);
        visits += count.round() as usize;
    }
    assert_eq!(visits, t + 1);
}

#[test]
fn bpcg_herding_is_reachable_through_the_registry() {
    let c = cache(KernelKind::Gaussian, Measure::uniform(1).unwrap());
    let pool = CandidatePool::halton(&c, 256);
    let cfg = config(30, 256);
    let registry = SolverRegistry::default();
    let via_registry =
        run_herding(registry.get("bpcg").unwrap(), &c, &pool, &[0.0], &cfg.solver, cfg.oracle).unwrap();
    let direct = run_herding(&Bpcg, &c, &pool, &[0.0], &cfg.solver, cfg.oracle).unwrap();
    assert_eq!(via_registry.trace.primal_sequence(), direct.trace.primal_sequence());
    assert!(run_herding(&Bpcg, &c, &pool, &[1.5], &cfg.solver, cfg.oracle).is_err());
}

#[test]
fn sbq_first_node_and_gram_identity() {
    let c = cache(KernelKind::Gaussian, Measure::uniform(2).unwrap());
    let pool = CandidatePool::halton(&c, 1024);
    let one = run_sbq(&c, &pool, 1).unwrap();
    let best_z = pool.z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let chosen = &one.measure.nodes[0];
    assert_eq!(c.z(chosen), best_z);

    let run = run_sbq(&c, &pool, 25).unwrap();
    let nodes = &run.measure.nodes;
    for (i, xi) in nodes.iter().enumerate() {
        let gw: f64 = nodes.iter().zip(&run.measure.weights).map(|(xj, w)| w * c.k(xi, xj)).sum();
        assert!((gw - c.z(xi)).abs() < 1e-8, "node {i}: {gw} vs {}", c.z(xi));
    }
    let direct = mmd_squared(&c, &run.measure);
    assert!((direct - run.mmd_squared.last().unwrap()).abs() < 1e-9);
    assert!(run.mmd_squared.windows(2).all(|w| w[1] <= w[0] + 1e-12));

    let equal = run_vanilla_herding(&c, &[0.0, 0.0], VanillaRule::EqualWeight, 24, &config(0, 1024)).unwrap();
    assert_eq!(equal.measure.len(), 25);
    assert!(run.mmd_squared[24] <= mmd_squared(&c, &equal.measure));
}

#[test]
fn monte_carlo_rules_behave_like_samples() {
    let m = Measure::uniform(1).unwrap();
    let n = 400;
    let rule = run_monte_carlo(&m, n, 11);
    assert!(rule.weights.iter().all(|&w| w == 1.0 / n as f64));
    let mean: f64 = rule.nodes.iter().map(|x| x[0]).sum::<f64>() / n as f64;
    assert!(mean.abs() < 3.0 / (n as f64).sqrt());
    assert_eq!(rule.nodes, run_monte_carlo(&m, n, 11).nodes);

    let c = cache(KernelKind::Matern32, Measure::uniform(1).unwrap());
    let median = |n: usize| {
        let mut v: Vec<f64> = (0..20).map(|s| mmd_squared(&c, &run_monte_carlo(c.measure(), n, s))).collect();
        v.sort_by(f64::total_cmp);
        0.5 * (v[9] + v[10])
    };
    assert!(median(400) < median(100));
    for measure in [Measure::truncated_gaussian(2).unwrap(), Measure::default_mixture(2).unwrap()] {
        assert!(run_monte_carlo(&measure, 200, 5).nodes.iter().all(|x| measure.contains(x)));
    }
}

#[test]
fn discrete_measures_against_themselves_have_zero_discrepancy_to_each_other() {
    let c = cache(KernelKind::Gaussian, Measure::uniform(1).unwrap());
    let xi = DiscreteMeasure::new(vec![vec![-0.5], vec![0.25]], vec![0.4, 0.6]).unwrap();
    let same = xi.clone();
    let cross: f64 = xi
        .nodes
        .iter()
        .zip(&xi.weights)
        .flat_map(|(a, wa)| same.nodes.iter().zip(&same.weights).map(move |(b, wb)| (a, b, wa * wb)))
        .map(|(a, b, w)| w * c.k(a, b))
        .sum();
    let self_energy = cross;
    assert!((self_energy + self_energy - 2.0 * cross).abs() < 1e-15);
    assert!(mmd_squared(&c, &xi) > 0.0);
}
