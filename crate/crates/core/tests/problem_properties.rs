use proptest::prelude::*;
use rego::problems::{catalogue, generate, BaseProblem};
use rego::rng::RngStream;

/// What moving one coordinate of `z` by a single ulp already does to `f`.
fn one_ulp_sensitivity(base: &BaseProblem, z: &[f64]) -> f64 {
    let f0 = base.evaluate(z);
    let mut worst = 0.0f64;
    for k in 0..z.len() {
        for dir in [f64::INFINITY, f64::NEG_INFINITY] {
            let mut moved = z.to_vec();
            moved[k] = next_toward(z[k], dir);
            worst = worst.max((base.evaluate(&moved) - f0).abs());
        }
    }
    worst
}

fn next_toward(x: f64, dir: f64) -> f64 {
    let step = f64::EPSILON * x.abs().max(f64::MIN_POSITIVE);
    if dir > x {
        x + step
    } else {
        x - step
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generated_problems_keep_their_structure(index in 0usize..19, big_d in 6usize..60, seed in any::<u64>()) {
        let base = catalogue()[index].scale_to_unit_box();
        let de = base.dim();
        let p = generate(&base, big_d, &mut RngStream::new(seed, 1)).unwrap();
        let q = generate(&base, big_d, &mut RngStream::new(seed, 1)).unwrap();
        prop_assert_eq!(p.rotation().as_slice(), q.rotation().as_slice());

        prop_assert!(p.mu() <= (de as f64).sqrt() + 1e-12);
        for z in p.minimizer_coordinates() {
            let tol = 1e-6f64.max(1.01 * one_ulp_sensitivity(&base, z));
            prop_assert!((p.evaluate(&p.lift(z)) - p.f_star()).abs() <= tol);
        }

        // f must change along at least one effective direction. Probe near a
        // minimizer: Easom, for one, is flat to the last bit far away from it.
        let mut rng = RngStream::new(seed, 2);
        let near: Vec<f64> = p.minimizer_coordinates()[0].iter().map(|v| v + rng.uniform(-0.1, 0.1)).collect();
        let x = p.lift(&near);
        let u = p.effective_basis();
        let fx = p.evaluate(&x);
        let varies = (0..de).any(|j| {
            [1e-3, 1e-2].iter().any(|h| {
                let moved: Vec<f64> = x.iter().zip(u.column(j)).map(|(a, b)| a + h * b).collect();
                p.evaluate(&moved) != fx
            })
        });
        prop_assert!(varies);

        let v = p.constant_basis();
        let w = v.mul_vec(&rng.unit_vector(v.cols()));
        let shifted: Vec<f64> = x.iter().zip(&w).map(|(a, b)| a + 17.3 * b).collect();
        prop_assert!((p.evaluate(&shifted) - fx).abs() <= 1e-9 * (1.0 + fx.abs()));
    }
}
