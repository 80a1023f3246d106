//! Log-space helpers shared by the state constructors.

/// Table of `ln(n!)` for `n = 0..=max_n`, built by cumulative summation of `ln k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(max_n: usize) -> Self {
        let mut values = Vec::with_capacity(max_n + 1);
        values.push(0.0);
        // Neumaier-compensated running sum; each stored entry is the rounded total.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for k in 1..=max_n {
            let term = (k as f64).ln();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            values.push(sum + comp);
        }
        Self { values }
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    /// `ln(n!)`. Panics if `n > max_n`.
    #[inline]
    pub fn ln_fact(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// `ln C(n, k)`.
    #[inline]
    pub fn ln_binom(&self, n: usize, k: usize) -> f64 {
        self.values[n] - self.values[k] - self.values[n - k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `ln Σ exp(x_i)`, ignoring `-inf` entries. Returns `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + s.ln()
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `l·ln(x)` with the convention `0·ln 0 = 0`.
#[inline]
pub(crate) fn xlogy(l: f64, y: f64) -> f64 {
    if l == 0.0 {
        0.0
    } else {
        l * y.ln()
    }
}

/// Wrap an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = theta.rem_euclid(tau);
    if w >= tau {
        0.0
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials_exact() {
        let t = LogFactorialTable::new(20);
        let mut f = 1.0f64;
        for n in 1..=20usize {
            f *= n as f64;
            assert!((t.ln_fact(n) - f.ln()).abs() < 1e-13, "n={n}");
        }
        assert_eq!(t.ln_fact(0), 0.0);
        assert_eq!(t.ln_fact(1), 0.0);
    }

    #[test]
    fn increments_are_logs_and_increasing() {
        let t = LogFactorialTable::new(1000);
        for n in 1..=1000usize {
            let d = t.ln_fact(n) - t.ln_fact(n - 1);
            assert!((d - (n as f64).ln()).abs() < 1e-12, "n={n}, d={d}");
            if n >= 2 {
                assert!(t.ln_fact(n) > t.ln_fact(n - 1));
            }
        }
    }

    #[test]
    fn stirling_at_large_n() {
        // ln(1000!) from Stirling with the 1/(12n) - 1/(360 n^3) corrections
        let n = 1000.0f64;
        let pi = std::f64::consts::PI;
        let stirling = n * n.ln() - n + 0.5 * (2.0 * pi * n).ln() + 1.0 / (12.0 * n)
            - 1.0 / (360.0 * n.powi(3));
        let t = LogFactorialTable::new(1000);
        assert!((t.ln_fact(1000) - stirling).abs() < 1e-10);
    }

    #[test]
    fn lse_matches_direct() {
        let xs = [0.1, -2.0, 3.5, f64::NEG_INFINITY];
        let direct: f64 = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - direct).abs() < 1e-14);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn neumaier_beats_naive() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(xs), 2.0);
    }

    #[test]
    fn wrap() {
        use std::f64::consts::PI;
        assert!((wrap_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert_eq!(wrap_angle(0.0), 0.0);
        assert!(wrap_angle(2.0 * PI) < 1e-15);
    }
}
