//! Small numeric helpers shared across inference and rank weighting.

use statrs::distribution::{ContinuousCDF, Normal};

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Standard normal upper tail P(Z >= x).
pub fn std_normal_sf(x: f64) -> f64 {
    Normal::standard().sf(x)
}

/// Survival function of the chi-squared distribution with 2 degrees of
/// freedom, P(X > t) = exp(-t/2).
pub fn chi2_2_sf(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else {
        (-t / 2.0).exp()
    }
}

/// Midranks (1-based, ties averaged) of `keys` in ascending order:
/// the smallest key gets rank 1, equal keys share the average of the
/// positions they cover.
pub fn midranks(keys: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
    let mut ranks = vec![0.0; keys.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && keys[order[end]] == keys[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share their average
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi2_quantile_closed_form() {
        // 0.95 quantile of chi-squared(2) is -2 ln(0.05)
        let t = 5.991464547107979;
        assert!((chi2_2_sf(t) - 0.05).abs() < 1e-12);
        assert_eq!(chi2_2_sf(0.0), 1.0);
        assert_eq!(chi2_2_sf(-1.0), 1.0);
    }

    #[test]
    fn normal_cdf_symmetry() {
        assert!((std_normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((std_normal_cdf(1.0) + std_normal_cdf(-1.0) - 1.0).abs() < 1e-12);
        assert!((std_normal_sf(1.0) - (1.0 - std_normal_cdf(1.0))).abs() < 1e-12);
    }

    #[test]
    fn midranks_handle_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
        assert_eq!(midranks(&[1.0, 1.0]), vec![1.5, 1.5]);
        assert_eq!(midranks(&[2.0, 1.0, 2.0, 5.0]), vec![2.5, 1.0, 2.5, 4.0]);
    }
}
