use proptest::prelude::*;
use rego::rng::RngStream;
use rego::solvers::{Budget, Direct, Solver};

fn bumpy(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (v - 0.3 * i as f64).powi(2) + 0.1 * (5.0 * v).sin())
        .sum()
}

fn solver() -> impl Strategy<Value = Solver> {
    prop_oneof![
        Just(Solver::Direct),
        Just(Solver::Multistart),
        Just(Solver::Random)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn results_respect_box_and_budget(
        solver in solver(),
        dim in 1usize..5,
        half in 0.5f64..3.0,
        max_evals in 10u64..800,
        seed in any::<u64>(),
    ) {
        let lower = vec![-half; dim];
        let upper = vec![half; dim];
        let budget = Budget::default().with_max_evals(max_evals).with_max_starts(3);
        let mut rng = RngStream::new(seed, 3);
        let res = solver.minimize(bumpy, &lower, &upper, &budget, &mut rng).unwrap();
        prop_assert!(res.evals <= max_evals);
        prop_assert!(res.best_point.iter().all(|v| v.abs() <= half + 1e-12));
        prop_assert!((bumpy(&res.best_point) - res.best_value).abs() <= 1e-12);

        let again = solver
            .minimize(bumpy, &lower, &upper, &budget, &mut RngStream::new(seed, 3))
            .unwrap();
        prop_assert_eq!(res.best_value.to_bits(), again.best_value.to_bits());
        prop_assert_eq!(res.evals, again.evals);
    }

    #[test]
    fn reaching_the_target_stops_early(solver in solver(), seed in any::<u64>()) {
        let budget = Budget::default().with_max_evals(5000).with_target(0.0).with_epsilon(0.05);
        let res = solver
            .minimize(|x| x[0] * x[0] + x[1] * x[1], &[-1.0, -1.0], &[1.0, 1.0], &budget, &mut RngStream::new(seed, 0))
            .unwrap();
        prop_assert!(res.converged);
        prop_assert!(res.best_value <= 0.05);
        prop_assert!(res.evals <= 5000);
    }
}

#[test]
fn direct_samples_the_same_centres_every_time() {
    let run = || {
        let mut seen = Vec::new();
        Direct::default()
            .run(
                |x| {
                    seen.push(x.to_vec());
                    bumpy(x)
                },
                &[-1.0, -1.0],
                &[1.0, 1.0],
                &Budget::default().with_max_evals(300),
            )
            .unwrap();
        seen
    };
    assert_eq!(run(), run());
}

#[test]
fn direct_shrinks_rectangles_on_a_line() {
    let outcome = Direct::default()
        .run(
            |x| (x[0] - 0.123).abs(),
            &[0.0],
            &[1.0],
            &Budget::default().with_max_evals(400),
        )
        .unwrap();
    assert!(
        outcome.min_diameter <= 3f64.powi(-8),
        "{}",
        outcome.min_diameter
    );
}
