//! DIRECT (DIviding RECTangles), Jones, Perttunen and Stuckman (1993).
//!
//! Works on the unit cube. A rectangle is stored as its centre and the number
//! of trisections applied along each coordinate; because only the longest
//! sides are ever split, per-coordinate levels differ by at most one and the
//! level sum identifies the rectangle size.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use super::{check_box, Budget, SolverError, SolverResult, Tracker};

/// Balance parameter in the potential-optimality test.
pub const BALANCE_EPSILON: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

struct Rect {
    center: Vec<f64>,
    levels: Vec<u32>,
    value: f64,
}

impl Rect {
    fn size_class(&self) -> u64 {
        self.levels.iter().map(|&l| l as u64).sum()
    }
}

/// Half the diagonal of a rectangle whose level sum is `class` in `n` dimensions.
fn half_diagonal(class: u64, n: usize) -> f64 {
    let n64 = n as u64;
    let k = (class / n64) as i32;
    let m = (class % n64) as f64;
    let sq = (n as f64 - m) * 9f64.powi(-k) + m * 9f64.powi(-(k + 1));
    0.5 * sq.sqrt()
}

/// Result of a DIRECT run plus search diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectOutcome {
    pub result: SolverResult,
    pub iterations: usize,
    pub rectangles: usize,
    /// Smallest half-diagonal among all rectangles, in unit-cube coordinates.
    pub min_diameter: f64,
}

/// DIRECT configured with a balance parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direct {
    pub balance: f64,
}

impl Default for Direct {
    fn default() -> Self {
        Self {
            balance: BALANCE_EPSILON,
        }
    }
}

impl Direct {
    pub fn run(
        &self,
        f: impl FnMut(&[f64]) -> f64,
        lower: &[f64],
        upper: &[f64],
        budget: &Budget,
    ) -> Result<DirectOutcome, SolverError> {
        check_box(lower, upper)?;
        budget.validate()?;
        let n = lower.len();
        let to_box = |u: &[f64]| -> Vec<f64> {
            u.iter()
                .zip(lower.iter().zip(upper))
                .map(|(ui, (lo, hi))| lo + ui * (hi - lo))
                .collect()
        };
        let mut tracker = Tracker::new(f, budget, budget.evals_or_default(n));

        let mut rects: Vec<Rect> = Vec::new();
        // size class -> rectangles ordered by (value, insertion index)
        let mut groups: BTreeMap<u64, BTreeSet<Key>> = BTreeMap::new();
        let center = vec![0.5; n];
        let Some(v0) = tracker.eval(&to_box(&center)) else {
            unreachable!("budget validated to allow one evaluation");
        };
        rects.push(Rect {
            center,
            levels: vec![0; n],
            value: v0,
        });
        groups.entry(0).or_default().insert(Key(v0, 0));

        let mut iterations = 0;
        'outer: while !tracker.done() {
            iterations += 1;
            let selected = self.potentially_optimal(&groups, &rects, n, tracker.best_value);
            for id in selected {
                let class = rects[id].size_class();
                let key = Key(rects[id].value, id);
                let group = groups.get_mut(&class).expect("group exists");
                group.remove(&key);
                if group.is_empty() {
                    groups.remove(&class);
                }
                let finished = divide(id, &mut rects, &mut groups, &mut tracker, &to_box);
                let class = rects[id].size_class();
                groups.entry(class).or_default().insert(key);
                if !finished {
                    break 'outer;
                }
            }
        }

        let min_diameter = groups
            .keys()
            .next_back()
            .map_or(half_diagonal(0, n), |&c| half_diagonal(c, n));
        let rectangles = rects.len();
        Ok(DirectOutcome {
            result: tracker.finish(),
            iterations,
            rectangles,
            min_diameter,
        })
    }

    /// Ids of the potentially optimal rectangles, largest first.
    fn potentially_optimal(
        &self,
        groups: &BTreeMap<u64, BTreeSet<Key>>,
        rects: &[Rect],
        n: usize,
        f_min: f64,
    ) -> Vec<usize> {
        // one candidate per size: the lowest value, earliest inserted;
        // iterate from largest to smallest rectangles
        let candidates: Vec<(f64, f64, usize)> = groups
            .iter()
            .filter_map(|(&class, set)| {
                set.iter()
                    .next()
                    .map(|k| (half_diagonal(class, n), rects[k.1].value, k.1))
            })
            .collect();
        let threshold = f_min - self.balance * f_min.abs();
        let mut out = Vec::new();
        for (j, &(dj, fj, id)) in candidates.iter().enumerate() {
            let mut k_low = 0.0f64;
            let mut k_high = f64::INFINITY;
            for (i, &(di, fi, _)) in candidates.iter().enumerate() {
                if i == j {
                    continue;
                }
                if di < dj {
                    k_low = k_low.max((fj - fi) / (dj - di));
                } else {
                    k_high = k_high.min((fi - fj) / (di - dj));
                }
            }
            if k_high <= 0.0 || k_low > k_high {
                continue;
            }
            if k_high.is_finite() && fj - k_high * dj > threshold {
                continue;
            }
            out.push(id);
        }
        out.reverse();
        out
    }
}

/// Trisects rectangle `id` along all of its longest sides. Returns false if
/// the run must stop (budget spent or target reached).
fn divide<F: FnMut(&[f64]) -> f64>(
    id: usize,
    rects: &mut Vec<Rect>,
    groups: &mut BTreeMap<u64, BTreeSet<Key>>,
    tracker: &mut Tracker<F>,
    to_box: &impl Fn(&[f64]) -> Vec<f64>,
) -> bool {
    let levels = rects[id].levels.clone();
    let k = *levels.iter().min().expect("nonempty");
    let step = 3f64.powi(-(k as i32) - 1);
    let dims: Vec<usize> = (0..levels.len()).filter(|&i| levels[i] == k).collect();

    let mut samples = Vec::with_capacity(dims.len());
    for &i in &dims {
        let mut pair = [(Vec::new(), f64::NAN), (Vec::new(), f64::NAN)];
        for (slot, sign) in pair.iter_mut().zip([-1.0, 1.0]) {
            let mut c = rects[id].center.clone();
            c[i] += sign * step;
            let Some(v) = tracker.eval(&to_box(&c)) else {
                return false;
            };
            *slot = (c, v);
        }
        let w = pair[0].1.min(pair[1].1);
        samples.push((w, i, pair));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut current = levels;
    for (_, i, pair) in samples {
        current[i] += 1;
        for (c, v) in pair {
            let child = Rect {
                center: c,
                levels: current.clone(),
                value: v,
            };
            let class = child.size_class();
            let cid = rects.len();
            rects.push(child);
            groups.entry(class).or_default().insert(Key(v, cid));
        }
    }
    rects[id].levels = current;
    !tracker.done()
}

/// DIRECT with the default balance parameter.
pub fn direct_minimize(
    f: impl FnMut(&[f64]) -> f64,
    lower: &[f64],
    upper: &[f64],
    budget: &Budget,
) -> Result<SolverResult, SolverError> {
    Direct::default()
        .run(f, lower, upper, budget)
        .map(|o| o.result)
}
