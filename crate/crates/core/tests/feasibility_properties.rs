use proptest::prelude::*;
use rego::feasibility::{box_feasible, min_inf_norm_solution, LpStatus};
use rego::linalg::{min_two_norm_solution, norm2, norm_inf, sample_gaussian, Matrix};
use rego::rng::RngStream;

fn system(de: usize, d: usize, seed: u64) -> (Matrix, Vec<f64>) {
    let mut rng = RngStream::new(seed, 4);
    let b = sample_gaussian(de, d, &mut rng);
    let z = (0..de).map(|_| rng.standard_normal()).collect();
    (b, z)
}

fn drop_last_column(b: &Matrix) -> Matrix {
    let cols = b.cols() - 1;
    let data = (0..b.rows())
        .flat_map(|i| b.row(i)[..cols].to_vec())
        .collect();
    Matrix::from_vec(b.rows(), cols, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn optimum_is_feasible_and_tight(de in 1usize..4, extra in 0usize..5, seed in any::<u64>()) {
        let (b, z) = system(de, de + extra, seed);
        let lp = min_inf_norm_solution(&b, &z).unwrap();
        prop_assert_ne!(lp.status, LpStatus::Infeasible);
        let residual = b.mul_vec(&lp.y).iter().zip(&z).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(residual <= 1e-8 * (1.0 + norm2(&z)));
        prop_assert!((norm_inf(&lp.y) - lp.t).abs() <= 1e-9);
    }

    #[test]
    fn optimum_is_homogeneous(de in 1usize..4, extra in 0usize..5, seed in any::<u64>(), c in -5.0f64..5.0) {
        let (b, z) = system(de, de + extra, seed);
        let t = min_inf_norm_solution(&b, &z).unwrap().t;
        let scaled: Vec<f64> = z.iter().map(|v| c * v).collect();
        let tc = min_inf_norm_solution(&b, &scaled).unwrap().t;
        prop_assert!((tc - c.abs() * t).abs() <= 1e-9 * (1.0 + t));
    }

    #[test]
    fn norms_are_ordered(de in 1usize..4, extra in 0usize..5, seed in any::<u64>()) {
        let (b, z) = system(de, de + extra, seed);
        let t = min_inf_norm_solution(&b, &z).unwrap().t;
        let y2 = min_two_norm_solution(&b, &z).unwrap();
        prop_assert!(t <= norm_inf(&y2) + 1e-9);
        prop_assert!(norm_inf(&y2) <= norm2(&y2) + 1e-12);
    }

    #[test]
    fn extra_column_never_hurts(de in 1usize..4, extra in 1usize..5, seed in any::<u64>()) {
        let (b, z) = system(de, de + extra, seed);
        let wide = min_inf_norm_solution(&b, &z).unwrap().t;
        let narrow = min_inf_norm_solution(&drop_last_column(&b), &z).unwrap().t;
        prop_assert!(wide <= narrow + 1e-9);
    }

    #[test]
    fn square_system_has_the_unique_solution(de in 1usize..5, seed in any::<u64>()) {
        let (b, z) = system(de, de, seed);
        let lp = min_inf_norm_solution(&b, &z).unwrap();
        let y = min_two_norm_solution(&b, &z).unwrap();
        for (a, b) in lp.y.iter().zip(&y) {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + norm_inf(&y)));
        }
    }

    #[test]
    fn box_verdict_agrees_with_optimum(de in 1usize..4, extra in 0usize..4, seed in any::<u64>(), scale in 0.5f64..2.0) {
        let (b, z) = system(de, de + extra, seed);
        let t = min_inf_norm_solution(&b, &z).unwrap().t;
        prop_assume!((scale - 1.0).abs() > 1e-6);
        prop_assert_eq!(box_feasible(&b, &z, scale * t).unwrap(), scale > 1.0);
    }
}

#[test]
fn small_worked_systems() {
    let b = Matrix::from_rows(&[&[1.0, 2.0]]);
    let lp = min_inf_norm_solution(&b, &[3.0]).unwrap();
    assert!((lp.t - 1.0).abs() < 1e-12);
    assert!((lp.y[0] - 1.0).abs() < 1e-12 && (lp.y[1] - 1.0).abs() < 1e-12);
    let lp = min_inf_norm_solution(&Matrix::identity(2), &[1.0, -2.0]).unwrap();
    assert!((lp.t - 2.0).abs() < 1e-12);
}
