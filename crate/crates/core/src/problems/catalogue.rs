//! The 19 base problems: domains, minima, and known global minimizers.
//!
//! Minimizer coordinates and `f_star` values are refined to (at least) 1e-8
//! in the argument, so each minimizer evaluates to `f_star` within 1e-6. The
//! rounded values as usually tabulated are kept in `reported_f_star`.

use std::f64::consts::PI;

use super::functions::BaseFunction;
use super::BaseProblem;

// Shubert: per-coordinate minimizers and maximizers of
// s(t) = sum_j j cos((j+1) t + j) on [-10, 10].
const SHUBERT_LOW: [f64; 3] = [
    -7.708_313_718_381_03,
    -1.425_128_432_194_774,
    4.858_056_896_164_531,
];
const SHUBERT_HIGH: [f64; 3] = [
    -7.083_506_404_431_33,
    -0.800_321_097_340_848,
    5.482_864_209_978_534,
];

struct Entry {
    id: &'static str,
    display: &'static str,
    function: BaseFunction,
    lower: &'static [f64],
    upper: &'static [f64],
    f_star: f64,
    reported: &'static str,
    baron_excluded: bool,
    knitro_excluded: bool,
}

const ENTRIES: [Entry; 19] = [
    Entry {
        id: "beale",
        display: "Beale",
        function: BaseFunction::Beale,
        lower: &[-4.5, -4.5],
        upper: &[4.5, 4.5],
        f_star: 0.0,
        reported: "0",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "branin",
        display: "Branin",
        function: BaseFunction::Branin,
        lower: &[-5.0, 0.0],
        upper: &[10.0, 15.0],
        f_star: 5.0 / (4.0 * PI),
        reported: "0.397887",
        baron_excluded: true,
        knitro_excluded: false,
    },
    Entry {
        id: "brent",
        display: "Brent",
        function: BaseFunction::Brent,
        lower: &[-10.0, -10.0],
        upper: &[10.0, 10.0],
        f_star: 0.0,
        reported: "0",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "bukin6",
        display: "Bukin N.6",
        function: BaseFunction::BukinN6,
        lower: &[-15.0, -3.0],
        upper: &[-5.0, 3.0],
        f_star: 0.0,
        reported: "0",
        baron_excluded: false,
        knitro_excluded: true,
    },
    Entry {
        id: "easom",
        display: "Easom",
        function: BaseFunction::Easom,
        lower: &[-100.0, -100.0],
        upper: &[100.0, 100.0],
        f_star: -1.0,
        reported: "-1",
        baron_excluded: true,
        knitro_excluded: false,
    },
    Entry {
        id: "goldstein-price",
        display: "Goldstein-Price",
        function: BaseFunction::GoldsteinPrice,
        lower: &[-2.0, -2.0],
        upper: &[2.0, 2.0],
        f_star: 3.0,
        reported: "3",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "hartmann3",
        display: "Hartmann 3",
        function: BaseFunction::Hartmann3,
        lower: &[0.0; 3],
        upper: &[1.0; 3],
        f_star: -3.862_779_787_332_66,
        reported: "-3.86278",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "hartmann6",
        display: "Hartmann 6",
        function: BaseFunction::Hartmann6,
        lower: &[0.0; 6],
        upper: &[1.0; 6],
        f_star: -3.322_368_011_415_513,
        reported: "-3.32237",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "levy",
        display: "Levy",
        function: BaseFunction::Levy,
        lower: &[-10.0; 4],
        upper: &[10.0; 4],
        f_star: 0.0,
        reported: "0",
        baron_excluded: true,
        knitro_excluded: false,
    },
    Entry {
        id: "perm",
        display: "Perm 4, 0.5",
        function: BaseFunction::Perm,
        lower: &[-4.0; 4],
        upper: &[4.0; 4],
        f_star: 0.0,
        reported: "0",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "rosenbrock",
        display: "Rosenbrock",
        function: BaseFunction::Rosenbrock,
        lower: &[-5.0; 3],
        upper: &[10.0; 3],
        f_star: 0.0,
        reported: "0",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "shekel5",
        display: "Shekel 5",
        function: BaseFunction::Shekel5,
        lower: &[0.0; 4],
        upper: &[10.0; 4],
        f_star: -10.153_199_679_058_23,
        reported: "-10.1532",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "shekel7",
        display: "Shekel 7",
        function: BaseFunction::Shekel7,
        lower: &[0.0; 4],
        upper: &[10.0; 4],
        f_star: -10.402_915_336_777_745,
        reported: "-10.4029",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "shekel10",
        display: "Shekel 10",
        function: BaseFunction::Shekel10,
        lower: &[0.0; 4],
        upper: &[10.0; 4],
        f_star: -10.536_443_153_483_53,
        reported: "-10.5364",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "shubert",
        display: "Shubert",
        function: BaseFunction::Shubert,
        lower: &[-10.0, -10.0],
        upper: &[10.0, 10.0],
        f_star: -186.730_908_831_023_9,
        reported: "-186.7309",
        baron_excluded: true,
        knitro_excluded: false,
    },
    Entry {
        id: "six-hump-camel",
        display: "Six-hump camel",
        function: BaseFunction::SixHumpCamel,
        lower: &[-3.0, -2.0],
        upper: &[3.0, 2.0],
        f_star: -1.031_628_453_489_877,
        reported: "-1.0316",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "styblinski-tang",
        display: "Styblinski-Tang",
        function: BaseFunction::StyblinskiTang,
        lower: &[-5.0; 4],
        upper: &[5.0; 4],
        f_star: -156.664_662_815_085_65,
        reported: "-156.664",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "trid",
        display: "Trid",
        function: BaseFunction::Trid,
        lower: &[-25.0; 5],
        upper: &[25.0; 5],
        f_star: -30.0,
        reported: "-30",
        baron_excluded: false,
        knitro_excluded: false,
    },
    Entry {
        id: "zettl",
        display: "Zettl",
        function: BaseFunction::Zettl,
        lower: &[-5.0, -5.0],
        upper: &[5.0, 5.0],
        f_star: -0.003_791_237_220_468_898,
        reported: "-0.00379",
        baron_excluded: false,
        knitro_excluded: false,
    },
];

fn minimizers(function: BaseFunction) -> Vec<Vec<f64>> {
    match function {
        BaseFunction::Beale => vec![vec![3.0, 0.5]],
        BaseFunction::Branin => vec![vec![-PI, 12.275], vec![PI, 2.275], vec![3.0 * PI, 2.475]],
        BaseFunction::Brent => vec![vec![-10.0, -10.0]],
        BaseFunction::BukinN6 => vec![vec![-10.0, 1.0]],
        BaseFunction::Easom => vec![vec![PI, PI]],
        BaseFunction::GoldsteinPrice => vec![vec![0.0, -1.0]],
        BaseFunction::Hartmann3 => vec![vec![
            0.114_588_854_048_200_57,
            0.555_648_891_581_494_6,
            0.852_546_979_991_556_4,
        ]],
        BaseFunction::Hartmann6 => vec![vec![
            0.201_689_508_472_711_58,
            0.150_010_696_079_531_13,
            0.476_873_966_809_635_73,
            0.275_332_429_896_046_45,
            0.311_651_613_751_647_07,
            0.657_300_534_831_187_3,
        ]],
        BaseFunction::Levy => vec![vec![1.0; 4]],
        BaseFunction::Perm => vec![vec![1.0, 2.0, 3.0, 4.0]],
        BaseFunction::Rosenbrock => vec![vec![1.0; 3]],
        BaseFunction::Shekel5 => vec![vec![
            4.000_037_152_376_549,
            4.000_133_278_657_566,
            4.000_037_151_057_555,
            4.000_133_277_090_425,
        ]],
        BaseFunction::Shekel7 => vec![vec![
            4.000_572_818_167_059,
            3.999_606_207_067_230_5,
            4.000_572_821_117_356,
            3.999_606_210_400_273,
        ]],
        BaseFunction::Shekel10 => vec![vec![
            4.000_746_867_869_747,
            3.999_509_485_057_627_6,
            4.000_746_868_809_279,
            3.999_509_480_017_675,
        ]],
        BaseFunction::Shubert => {
            let mut out = Vec::with_capacity(18);
            for &lo in &SHUBERT_LOW {
                for &hi in &SHUBERT_HIGH {
                    out.push(vec![lo, hi]);
                    out.push(vec![hi, lo]);
                }
            }
            out
        }
        BaseFunction::SixHumpCamel => vec![
            vec![0.089_842_008_935_272_33, -0.712_656_403_019_058],
            vec![-0.089_842_010_005_280_86, 0.712_656_401_643_332_8],
        ],
        BaseFunction::StyblinskiTang => vec![vec![-2.903_534_027_771_177; 4]],
        BaseFunction::Trid => vec![vec![5.0, 8.0, 9.0, 8.0, 5.0]],
        BaseFunction::Zettl => vec![vec![-0.029_895_984_983_913_44, 0.0]],
    }
}

fn build(e: &Entry) -> BaseProblem {
    BaseProblem {
        id: e.id,
        display_name: e.display,
        function: e.function,
        lower: e.lower.to_vec(),
        upper: e.upper.to_vec(),
        f_star: e.f_star,
        reported_f_star: e.reported,
        known_minimizers: minimizers(e.function),
        baron_excluded: e.baron_excluded,
        knitro_excluded: e.knitro_excluded,
        map: None,
    }
}

/// All base problems in alphabetical order, original (unscaled) domains.
pub fn all() -> Vec<BaseProblem> {
    ENTRIES.iter().map(build).collect()
}

/// Looks up a base problem by its identifier (e.g. `"six-hump-camel"`).
///
/// Matching ignores case, spaces, dots, and commas, so display names such as
/// `"Bukin N.6"` resolve too.
pub fn find(name: &str) -> Option<BaseProblem> {
    let key = normalize(name);
    ENTRIES
        .iter()
        .find(|e| normalize(e.id) == key || normalize(e.display) == key)
        .map(build)
}

fn normalize(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, ' ' | '.' | ',' | '-' | '_'))
        .flat_map(char::to_lowercase)
        .collect()
}
