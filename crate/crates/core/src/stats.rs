//! Goodness-of-fit statistics used by the verification experiments.

/// One-sample Kolmogorov–Smirnov distance between the empirical CDF of
/// `samples` and `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |acc, (i, &x)| {
        let f = cdf(x);
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    })
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Total variation distance between the empirical distribution of `samples`
/// and a reference, both binned on `edges` (two open tail bins included).
pub fn binned_total_variation(samples: &[f64], cdf: impl Fn(f64) -> f64, edges: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mut counts = vec![0usize; edges.len() + 1];
    for &x in samples {
        let bin = edges.partition_point(|&e| e <= x);
        counts[bin] += 1;
    }
    let mut prev = 0.0;
    let mut tv = 0.0;
    for (bin, &c) in counts.iter().enumerate() {
        let upper = if bin < edges.len() {
            cdf(edges[bin])
        } else {
            1.0
        };
        tv += (c as f64 / n - (upper - prev)).abs();
        prev = upper;
    }
    0.5 * tv
}

/// Inverts a continuous increasing `cdf` by bisection on `[lo, hi]`.
pub fn quantile(cdf: impl Fn(f64) -> f64, p: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
