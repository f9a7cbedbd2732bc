//! Small statistics helpers: binomial confidence intervals and the
//! one-sample Kolmogorov-Smirnov statistic.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Half-width of the 95% Wilson score interval for `k` successes in `n`.
pub fn wilson_halfwidth(k: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z95 * Z95;
    Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
}

/// Binomial standard error `sqrt(p (1 - p) / n)`.
pub fn binomial_se(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// `sup |F_n(x) - F(x)|` for samples against a continuous CDF. Sorts in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            (f - lo).abs().max((hi - f).abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference() {
        // 10/100: Wilson interval (0.0552, 0.1744)
        let hw = wilson_halfwidth(10, 100);
        assert!((hw - (0.174_366 - 0.055_227) / 2.0).abs() < 1e-5, "{hw}");
        assert!(wilson_halfwidth(0, 1000) > 0.0);
        assert_eq!(wilson_halfwidth(0, 0), 0.0);
    }

    #[test]
    fn ks_of_grid_is_half_step() {
        // Midpoints of n cells under U(0,1): D = 1/(2n).
        let n = 1000;
        let mut xs: Vec<f64> = (0..n).rev().map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&mut xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }
}
