use bpcg::invariants;
use bpcg::lmo::{BirkhoffPolytope, LpBall, ProbabilitySimplex};
use bpcg::objectives::QuadraticDistance;
use bpcg::oracles::simplex_projection_oracle;
use bpcg::trace::{Move, Termination};
use bpcg::{
    run_afw, run_bpcg, run_lazy_bpcg, run_pcg, run_vanilla_fw, Atom, Objective, SolverConfig, StepKind,
    StepSizeKind,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn interior_point(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n).map(|_| 0.5 + rng.random::<f64>()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn config(iters: usize, tol: f64) -> SolverConfig {
    SolverConfig { max_iterations: iters, dual_gap_tolerance: tol, record_timing: false, ..SolverConfig::default() }
}

fn optimum(center: &[f64]) -> f64 {
    let p = simplex_projection_oracle(center);
    QuadraticDistance::new(center.to_vec()).value(&p).unwrap()
}

#[test]
fn starting_at_the_optimum_takes_no_steps() {
    let mut center = vec![0.0; 5];
    center[2] = 1.0;
    let f = QuadraticDistance::new(center);
    let (set, trace) = run_bpcg(&f, &ProbabilitySimplex::new(5), Atom::basis(5, 2), &config(100, 0.0)).unwrap();
    assert!(trace.is_empty());
    assert_eq!(trace.termination, Termination::ZeroGradient);
    assert_eq!(set.len(), 1);
}

#[test]
fn uniform_center_on_small_simplex() {
    let center = vec![0.1; 10];
    let f = QuadraticDistance::new(center.clone());
    let lmo = ProbabilitySimplex::new(10);
    let (set, trace) = run_bpcg(&f, &lmo, Atom::basis(10, 0), &config(1000, 1e-14)).unwrap();
    assert!((trace.final_primal() - optimum(&center)).abs() < 1e-10);
    assert_eq!(set.len(), 10);
    set.check_invariants().unwrap();
}

#[test]
fn baselines_reach_the_projection_optimum() {
    let center = interior_point(10, 4);
    let f = QuadraticDistance::new(center.clone());
    let lmo = ProbabilitySimplex::new(10);
    let fstar = optimum(&center);
    let cfg = config(5000, 1e-12);
    for (name, run) in [
        ("pcg", run_pcg(&f, &lmo, Atom::basis(10, 0), &cfg).unwrap()),
        ("afw", run_afw(&f, &lmo, Atom::basis(10, 0), &cfg).unwrap()),
        ("bpcg", run_bpcg(&f, &lmo, Atom::basis(10, 0), &cfg).unwrap()),
        ("lazy", run_lazy_bpcg(&f, &lmo, Atom::basis(10, 0), &cfg).unwrap()),
    ] {
        assert!((run.1.final_primal() - fstar).abs() < 1e-8, "{name}: {}", run.1.final_primal());
        run.0.check_invariants().unwrap();
    }
}

#[test]
fn sublinear_bound_on_simplex_200() {
    let center = interior_point(200, 7);
    let f = QuadraticDistance::new(center);
    let (_, trace) = run_bpcg(&f, &ProbabilitySimplex::new(200), Atom::basis(200, 0), &config(1000, 0.0)).unwrap();
    for (i, r) in trace.records.iter().enumerate() {
        let t = (i + 1) as f64;
        assert!(r.primal <= 16.0 / t, "h_{t} = {} above bound", r.primal);
    }
}

#[test]
fn bpcg_traces_satisfy_every_invariant() {
    let lmo = ProbabilitySimplex::new(60);
    for seed in 0..4 {
        let center = interior_point(60, seed);
        let f = QuadraticDistance::new(center);
        for k_sc in [1.0, 2.0, 5.0] {
            for step in [StepSizeKind::ExactLineSearch, StepSizeKind::ShortStep, StepSizeKind::Adaptive] {
                let cfg = SolverConfig { k_sc, step_size: step, ..config(400, 0.0) };
                let (set, trace) = run_bpcg(&f, &lmo, Atom::basis(60, 0), &cfg).unwrap();
                set.check_invariants().unwrap();
                // the backtracking estimate can overshoot the true constant by the growth factor
                let lipschitz = if step == StepSizeKind::Adaptive { 4.0 } else { 2.0 };
                let v = invariants::check_bpcg(&trace, k_sc, lipschitz, 2f64.sqrt());
                assert!(v.is_empty(), "seed {seed} k={k_sc} {step}: {v:?}");
            }
        }
    }
}

#[test]
fn birkhoff_run_keeps_invariants() {
    let n = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let center: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>()).collect();
    let f = QuadraticDistance::new(center);
    let lmo = BirkhoffPolytope::new(n);
    let x0 = Atom::permutation((0..n).collect()).unwrap();
    let (set, trace) = run_bpcg(&f, &lmo, x0, &config(300, 0.0)).unwrap();
    set.check_invariants().unwrap();
    assert!(invariants::check_bpcg(&trace, 1.0, 2.0, (2.0 * n as f64).sqrt()).is_empty());
}

#[test]
fn lazy_accounting_and_savings() {
    let center = interior_point(200, 7);
    let f = QuadraticDistance::new(center);
    let lmo = ProbabilitySimplex::new(200);
    let cfg = config(20_000, 1e-6);
    let (_, lazy) = run_lazy_bpcg(&f, &lmo, Atom::basis(200, 0), &cfg).unwrap();
    let (_, full) = run_bpcg(&f, &lmo, Atom::basis(200, 0), &cfg).unwrap();
    assert_eq!(lazy.termination, Termination::GapTolerance);
    assert!(lazy.final_primal() <= 1e-6);
    assert!(lazy.len() <= cfg.max_iterations && full.len() <= cfg.max_iterations);
    assert!(lazy.lmo_calls < lazy.len());
    let non_local = lazy.records.iter().filter(|r| r.lmo_called).count();
    assert_eq!(lazy.lmo_calls, 1 + non_local);
    assert!(invariants::lazy_bookkeeping(&lazy).is_empty());
    let halvings = lazy.t_gap as i32;
    let phi_end = lazy.records.last().unwrap().phi.unwrap();
    assert_eq!(phi_end, lazy.initial_phi.unwrap() * 2f64.powi(-halvings));
    assert!(invariants::monotone(&lazy).is_empty());
    assert!(invariants::gap_inequality(&lazy, cfg.lazy_accuracy).is_empty());
}

#[test]
fn equal_weight_iterates_average_visited_vertices() {
    let center = interior_point(30, 2);
    let f = QuadraticDistance::new(center);
    let (set, trace) =
        run_vanilla_fw(&f, &ProbabilitySimplex::new(30), Atom::basis(30, 0), &config(25, 0.0), true).unwrap();
    let mut counts = vec![0usize; 30];
    counts[0] = 1;
    // replay the visited vertices: each FW step adds the oracle vertex
    let x = set.iterate();
    let steps = trace.len();
    for (atom, w) in set.iter() {
        let i = atom.to_dense().iter().position(|&v| v == 1.0).unwrap();
        counts[i] = (w * (steps + 1) as f64).round() as usize;
        assert!((w * (steps + 1) as f64 - counts[i] as f64).abs() < 1e-12);
    }
    assert_eq!(counts.iter().sum::<usize>(), steps + 1);
    for (i, &c) in counts.iter().enumerate() {
        assert!((x[i] - c as f64 / (steps + 1) as f64).abs() < 1e-12);
    }
}

#[test]
fn away_steps_and_vanilla_coincide_until_the_first_away_move() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 1000;
    let center: Vec<f64> = (0..n).map(|_| 3.0 * (rng.random::<f64>() - 0.5)).collect();
    let f = QuadraticDistance::new(center);
    let lmo = LpBall::new(n, 5.0);
    let x0 = lmo.minimize_start();
    let (_, afw) = run_afw(&f, &lmo, x0.clone(), &config(200, 0.0)).unwrap();
    let (_, fw) = run_vanilla_fw(&f, &lmo, x0, &config(200, 0.0), false).unwrap();
    let prefix = afw.records.iter().position(|r| r.movement == Move::Away).unwrap_or(afw.len());
    assert!(prefix >= 2);
    let a = afw.primal_sequence();
    let b = fw.primal_sequence();
    for (x, y) in a.iter().zip(&b).take(prefix + 1) {
        assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
    }
}

trait StartVertex {
    fn minimize_start(&self) -> Atom;
}

impl StartVertex for LpBall {
    fn minimize_start(&self) -> Atom {
        use bpcg::LinearMinimizationOracle;
        let mut c = vec![0.0; self.dim()];
        c[0] = 1.0;
        self.minimize(&c).unwrap()
    }
}

#[test]
fn monotone_for_all_line_search_solvers() {
    let center = interior_point(40, 5);
    let f = QuadraticDistance::new(center);
    let lmo = ProbabilitySimplex::new(40);
    let cfg = config(300, 0.0);
    for trace in [
        run_vanilla_fw(&f, &lmo, Atom::basis(40, 3), &cfg, false).unwrap().1,
        run_afw(&f, &lmo, Atom::basis(40, 3), &cfg).unwrap().1,
        run_pcg(&f, &lmo, Atom::basis(40, 3), &cfg).unwrap().1,
        run_bpcg(&f, &lmo, Atom::basis(40, 3), &cfg).unwrap().1,
        run_lazy_bpcg(&f, &lmo, Atom::basis(40, 3), &cfg).unwrap().1,
    ] {
        assert!(invariants::monotone(&trace).is_empty());
        assert!(invariants::drop_count(&trace).is_empty() || trace.records.iter().any(|r| r.movement != Move::LocalPairwise));
        assert!(invariants::drift(&trace, 1e-9).is_empty());
    }
}

#[test]
fn short_step_needs_a_smoothness_constant() {
    struct NoSmoothness(QuadraticDistance);
    impl Objective for NoSmoothness {
        fn name(&self) -> &str {
            "no-smoothness"
        }
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn value(&self, x: &[f64]) -> bpcg::Result<f64> {
            self.0.value(x)
        }
        fn gradient(&self, x: &[f64]) -> bpcg::Result<Vec<f64>> {
            self.0.gradient(x)
        }
    }
    let f = NoSmoothness(QuadraticDistance::new(interior_point(5, 1)));
    let cfg = SolverConfig { step_size: StepSizeKind::ShortStep, ..config(10, 0.0) };
    let err = run_bpcg(&f, &ProbabilitySimplex::new(5), Atom::basis(5, 0), &cfg).unwrap_err();
    assert!(err.is_configuration());
    // the golden-section fallback handles objectives without curvature
    let cfg = config(200, 0.0);
    let (_, trace) = run_bpcg(&f, &ProbabilitySimplex::new(5), Atom::basis(5, 0), &cfg).unwrap();
    assert!(invariants::monotone(&trace).is_empty());
    assert!(trace.final_primal() - optimum(f.0.center()) < 1e-8);
}

#[test]
fn drop_steps_record_the_full_weight() {
    let center = interior_point(50, 8);
    let f = QuadraticDistance::new(center);
    let (_, trace) = run_bpcg(&f, &ProbabilitySimplex::new(50), Atom::basis(50, 0), &config(500, 0.0)).unwrap();
    for r in &trace.records {
        match r.kind {
            StepKind::Drop => assert_eq!(r.lambda, r.lambda_max),
            StepKind::Descent => assert!(r.lambda < r.lambda_max),
            _ => {}
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn select_step_is_scale_invariant(pw in 0.0f64..10.0, fw in 0.0f64..10.0, k in 1.0f64..8.0, s in 1e-3f64..1e3) {
        prop_assert_eq!(bpcg::select_step(pw, fw, k), bpcg::select_step(s * pw, s * fw, k));
    }

    #[test]
    fn random_simplex_instances_keep_invariants(
        seed in 0u64..1000,
        n in 3usize..30,
        k_sc in 1.0f64..4.0,
        outside in proptest::bool::ANY,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let center: Vec<f64> = (0..n)
            .map(|_| if outside { 2.0 * rng.random::<f64>() - 0.5 } else { rng.random::<f64>() / n as f64 })
            .collect();
        let f = QuadraticDistance::new(center);
        let cfg = SolverConfig { k_sc, ..config(150, 0.0) };
        let (set, trace) = run_bpcg(&f, &ProbabilitySimplex::new(n), Atom::basis(n, 0), &cfg).unwrap();
        prop_assert!(set.check_invariants().is_ok());
        let v = invariants::check_bpcg(&trace, k_sc, 2.0, 2f64.sqrt());
        prop_assert!(v.is_empty(), "{:?}", v);
        let (_, lazy) = run_lazy_bpcg(&f, &ProbabilitySimplex::new(n), Atom::basis(n, 0), &cfg).unwrap();
        prop_assert!(invariants::lazy_bookkeeping(&lazy).is_empty());
        prop_assert!(invariants::monotone(&lazy).is_empty());
    }
}
