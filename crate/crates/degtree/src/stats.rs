//! Small statistical utilities used by tests and experiment reports:
//! chi-square goodness-of-fit / homogeneity tests and the two-sample
//! Kolmogorov-Smirnov statistic.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Result of a chi-square test.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn chi2_p(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    1.0 - dist.cdf(statistic)
}

/// Goodness of fit of observed counts against expected (unnormalized) weights.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), expected.len());
    let n: u64 = observed.iter().sum();
    let w: f64 = expected.iter().sum();
    let mut stat = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        let exp = n as f64 * e / w;
        if exp > 0.0 {
            stat += (o as f64 - exp).powi(2) / exp;
        }
    }
    let dof = observed.len().saturating_sub(1);
    ChiSquare {
        statistic: stat,
        dof,
        p_value: chi2_p(stat, dof),
    }
}

/// Two-sample chi-square homogeneity test over pre-binned counts.
/// Bins where both samples are empty are dropped.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> ChiSquare {
    assert_eq!(a.len(), b.len());
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&oa, &ob) in a.iter().zip(b) {
        let tot = oa + ob;
        if tot == 0 {
            continue;
        }
        cells += 1;
        let p = tot as f64 / (na + nb) as f64;
        let (ea, eb) = (na as f64 * p, nb as f64 * p);
        stat += (oa as f64 - ea).powi(2) / ea + (ob as f64 - eb).powi(2) / eb;
    }
    let dof = cells.saturating_sub(1);
    ChiSquare {
        statistic: stat,
        dof,
        p_value: chi2_p(stat, dof),
    }
}

/// Bins two scalar samples into `bins` equal-probability cells of the pooled
/// empirical distribution and runs the homogeneity test. Cells are merged so
/// every expected count stays at least 5.
pub fn chi_square_binned(a: &[f64], b: &[f64], bins: usize) -> ChiSquare {
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let bins = bins.clamp(2, pooled.len() / 10 + 2);
    let mut edges = Vec::with_capacity(bins - 1);
    for i in 1..bins {
        edges.push(pooled[i * pooled.len() / bins]);
    }
    edges.dedup_by(|x, y| x == y);
    let count = |sample: &[f64]| -> Vec<u64> {
        let mut c = vec![0u64; edges.len() + 1];
        for &x in sample {
            let k = edges.partition_point(|&e| e < x);
            c[k] += 1;
        }
        c
    };
    chi_square_two_sample(&count(a), &count(b))
}

/// Two-sample Kolmogorov-Smirnov result.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample KS statistic with the asymptotic Kolmogorov p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsTest {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (n, m) = (xa.len(), xb.len());
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n && j < m {
        let x = xa[i].min(xb[j]);
        while i < n && xa[i] <= x {
            i += 1;
        }
        while j < m && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1.0f64).powi(k as i32 - 1) * (-2.0 * (k as f64 * lambda).powi(2)).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    KsTest {
        statistic: d,
        p_value: p.clamp(0.0, 1.0),
    }
}

/// Least-squares slope and intercept of y against x.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx).powi(2);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Mean of a sample.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample median (averages the middle pair for even lengths).
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Empirical quantile by linear interpolation of order statistics.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn chi_square_uniform_counts_pass() {
        let t = chi_square_gof(&[250, 251, 249, 250], &[1.0, 1.0, 1.0, 1.0]);
        assert!(t.p_value > 0.9, "p={}", t.p_value);
    }

    #[test]
    fn chi_square_detects_bias() {
        let t = chi_square_gof(&[400, 200, 200, 200], &[1.0, 1.0, 1.0, 1.0]);
        assert!(t.p_value < 1e-6);
    }

    #[test]
    fn ks_same_distribution_passes() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
        let a: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let b: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let t = ks_two_sample(&a, &b);
        assert!(t.p_value > 1e-3, "p={}", t.p_value);
    }

    #[test]
    fn ks_different_distribution_fails() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
        let a: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let b: Vec<f64> = (0..2000).map(|_| 0.5 + rng.gen::<f64>()).collect();
        let t = ks_two_sample(&a, &b);
        assert!(t.p_value < 1e-6);
    }

    #[test]
    fn linear_fit_recovers_slope() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| 3.0 * v - 2.0).collect();
        let (a, b) = linear_fit(&x, &y);
        assert!((a - 3.0).abs() < 1e-12 && (b + 2.0).abs() < 1e-9);
    }

    #[test]
    fn quantile_and_median() {
        let xs = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(median(&xs), 2.5);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 1.0), 4.0);
    }
}
