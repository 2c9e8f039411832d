//! Binomial coefficients with the zero convention `C(m, n) = 0` for
//! `n < 0` or `n > m`.
//!
//! Small arguments are evaluated exactly in 128-bit integers; beyond
//! [`EXACT_LIMIT`] the logarithm goes through `ln Γ`.

use statrs::function::gamma::ln_gamma;

/// Largest `m` for which `C(m, n)` is computed exactly.
pub const EXACT_LIMIT: i64 = 60;

/// Exact `C(m, n)` for `0 <= m <= EXACT_LIMIT`; `None` outside that range.
pub fn binomial_exact(m: i64, n: i64) -> Option<u128> {
    if !(0..=EXACT_LIMIT).contains(&m) {
        return None;
    }
    if n < 0 || n > m {
        return Some(0);
    }
    let n = n.min(m - n) as u128;
    let m = m as u128;
    let mut acc: u128 = 1;
    for i in 0..n {
        // acc * (m - i) is divisible by (i + 1) at every step.
        acc = acc * (m - i) / (i + 1);
    }
    Some(acc)
}

/// `C(m, n)` as a float. Overflows to `inf` only when the true value does.
pub fn binomial(m: i64, n: i64) -> f64 {
    if n < 0 || m < 0 || n > m {
        return 0.0;
    }
    match binomial_exact(m, n) {
        Some(v) => v as f64,
        None => ln_binomial(m, n).exp(),
    }
}

/// `ln C(m, n)`, `-inf` where the coefficient vanishes.
pub fn ln_binomial(m: i64, n: i64) -> f64 {
    if n < 0 || m < 0 || n > m {
        return f64::NEG_INFINITY;
    }
    if n == 0 || n == m {
        return 0.0;
    }
    match binomial_exact(m, n) {
        Some(v) => (v as f64).ln(),
        None => {
            let (m, n) = (m as f64, n as f64);
            ln_gamma(m + 1.0) - ln_gamma(n + 1.0) - ln_gamma(m - n + 1.0)
        }
    }
}

/// `ln k!`.
pub fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        0.0
    } else {
        ln_gamma(k as f64 + 1.0)
    }
}

/// `exponent * ln(base)` with the convention `0 * ln 0 = 0`, i.e. `0^0 = 1`.
#[inline]
pub fn ln_pow(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * base.ln()
    }
}

/// Numerically stable `ln(Σ exp(terms))`; `-inf` for an empty or all `-inf` slice.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_small_values() {
        assert_eq!(binomial_exact(4, 2), Some(6));
        assert_eq!(binomial_exact(60, 30), Some(118_264_581_564_861_424));
        assert_eq!(binomial_exact(5, 7), Some(0));
        assert_eq!(binomial_exact(5, -1), Some(0));
        assert_eq!(binomial_exact(61, 3), None);
    }

    #[test]
    fn zero_convention() {
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(3, -1), 0.0);
        assert_eq!(ln_binomial(3, 4), f64::NEG_INFINITY);
    }

    #[test]
    fn log_gamma_branch_matches_pascal() {
        // C(100, 50) = C(99, 49) + C(99, 50) = 2 C(99, 49)
        let lhs = ln_binomial(100, 50);
        let rhs = 2f64.ln() + ln_binomial(99, 49);
        assert!((lhs - rhs).abs() < 1e-12);
        // C(61, 30) from the exact C(60, 29) and C(60, 30)
        let exact = binomial(60, 29) + binomial(60, 30);
        assert!((binomial(61, 30) / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lse_handles_empty_and_large() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn ln_pow_zero_exponent() {
        assert_eq!(ln_pow(0.0, 0.0), 0.0);
        assert_eq!(ln_pow(0.0, 2.0), f64::NEG_INFINITY);
    }
}
