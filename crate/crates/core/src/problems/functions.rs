//! Closed forms of the base test functions, in their original coordinates.

use std::f64::consts::PI;

/// Identifies one of the base test functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseFunction {
    Beale,
    Branin,
    Brent,
    BukinN6,
    Easom,
    GoldsteinPrice,
    Hartmann3,
    Hartmann6,
    Levy,
    Perm,
    Rosenbrock,
    Shekel5,
    Shekel7,
    Shekel10,
    Shubert,
    SixHumpCamel,
    StyblinskiTang,
    Trid,
    Zettl,
}

const HARTMANN_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

const HARTMANN3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];

const HARTMANN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];

const HARTMANN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];

const HARTMANN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

// Shekel centres, one row per term.
const SHEKEL_C: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 3.0, 5.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];

const SHEKEL_BETA: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

const PERM_BETA: f64 = 0.5;

impl BaseFunction {
    pub fn evaluate(self, x: &[f64]) -> f64 {
        match self {
            BaseFunction::Beale => {
                let (a, b) = (x[0], x[1]);
                (1.5 - a + a * b).powi(2)
                    + (2.25 - a + a * b * b).powi(2)
                    + (2.625 - a + a * b.powi(3)).powi(2)
            }
            BaseFunction::Branin => {
                let b = 5.1 / (4.0 * PI * PI);
                let c = 5.0 / PI;
                let t = 1.0 / (8.0 * PI);
                (x[1] - b * x[0] * x[0] + c * x[0] - 6.0).powi(2)
                    + 10.0 * (1.0 - t) * x[0].cos()
                    + 10.0
            }
            BaseFunction::Brent => {
                (x[0] + 10.0).powi(2) + (x[1] + 10.0).powi(2) + (-x[0] * x[0] - x[1] * x[1]).exp()
            }
            BaseFunction::BukinN6 => {
                100.0 * (x[1] - 0.01 * x[0] * x[0]).abs().sqrt() + 0.01 * (x[0] + 10.0).abs()
            }
            BaseFunction::Easom => {
                -x[0].cos() * x[1].cos() * (-(x[0] - PI).powi(2) - (x[1] - PI).powi(2)).exp()
            }
            BaseFunction::GoldsteinPrice => {
                let (a, b) = (x[0], x[1]);
                let p = 1.0
                    + (a + b + 1.0).powi(2)
                        * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
                let q = 30.0
                    + (2.0 * a - 3.0 * b).powi(2)
                        * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
                p * q
            }
            BaseFunction::Hartmann3 => hartmann(x, &HARTMANN3_A, &HARTMANN3_P),
            BaseFunction::Hartmann6 => hartmann(x, &HARTMANN6_A, &HARTMANN6_P),
            BaseFunction::Levy => {
                let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
                let last = w[w.len() - 1];
                let mut s = (PI * w[0]).sin().powi(2);
                for wi in &w[..w.len() - 1] {
                    s += (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2));
                }
                s + (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2))
            }
            BaseFunction::Perm => {
                let n = x.len();
                (1..=n)
                    .map(|i| {
                        let inner: f64 = (1..=n)
                            .map(|j| {
                                let jf = j as f64;
                                (jf.powi(i as i32) + PERM_BETA)
                                    * ((x[j - 1] / jf).powi(i as i32) - 1.0)
                            })
                            .sum();
                        inner * inner
                    })
                    .sum()
            }
            BaseFunction::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            BaseFunction::Shekel5 => shekel(x, 5),
            BaseFunction::Shekel7 => shekel(x, 7),
            BaseFunction::Shekel10 => shekel(x, 10),
            BaseFunction::Shubert => x
                .iter()
                .map(|&xi| {
                    (1..=5)
                        .map(|j| {
                            let jf = j as f64;
                            jf * ((jf + 1.0) * xi + jf).cos()
                        })
                        .sum::<f64>()
                })
                .product(),
            BaseFunction::SixHumpCamel => {
                let (a, b) = (x[0], x[1]);
                (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
            }
            BaseFunction::StyblinskiTang => {
                0.5 * x
                    .iter()
                    .map(|v| v.powi(4) - 16.0 * v * v + 5.0 * v)
                    .sum::<f64>()
            }
            BaseFunction::Trid => {
                let sq: f64 = x.iter().map(|v| (v - 1.0).powi(2)).sum();
                let cross: f64 = x.windows(2).map(|w| w[0] * w[1]).sum();
                sq - cross
            }
            BaseFunction::Zettl => (x[0] * x[0] + x[1] * x[1] - 2.0 * x[0]).powi(2) + 0.25 * x[0],
        }
    }
}

fn hartmann<const N: usize>(x: &[f64], a: &[[f64; N]; 4], p: &[[f64; N]; 4]) -> f64 {
    -(0..4)
        .map(|i| {
            let e: f64 = (0..N).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            HARTMANN_ALPHA[i] * (-e).exp()
        })
        .sum::<f64>()
}

fn shekel(x: &[f64], terms: usize) -> f64 {
    -(0..terms)
        .map(|i| {
            let d: f64 = (0..4).map(|j| (x[j] - SHEKEL_C[i][j]).powi(2)).sum();
            1.0 / (d + SHEKEL_BETA[i])
        })
        .sum::<f64>()
}
