//! Factorials, Gamma ratios and double factorials.
//!
//! Everything that can grow quickly goes through log-space so that
//! arguments with `k + d/2` in the low hundreds stay finite.

use crate::scalar::Scalar;

/// `ln(n!)`, exact summation for small `n`, log-Gamma beyond.
pub fn ln_factorial<T: Scalar>(n: usize) -> T {
    if n < 32 {
        (2..=n).map(|i| T::of_usize(i).ln()).sum()
    } else {
        T::of_usize(n + 1).ln_gamma()
    }
}

/// `n!` as a float.
pub fn factorial<T: Scalar>(n: usize) -> T {
    if n <= 20 {
        let p: u64 = (1..=n as u64).product();
        T::of(p as f64)
    } else {
        ln_factorial::<T>(n).exp()
    }
}

/// Multi-index factorial `α! = Π α_i!`.
pub fn multi_factorial<T: Scalar>(alpha: &[u32]) -> T {
    alpha
        .iter()
        .fold(T::one(), |acc, &a| acc * factorial::<T>(a as usize))
}

/// `(n - 1)!!` for the Gaussian moment `E[Z^n]`, `n` even. Returns zero for odd `n`.
pub fn gaussian_moment_unit<T: Scalar>(n: u32) -> T {
    if n % 2 == 1 {
        return T::zero();
    }
    let mut acc = T::one();
    let mut k = n as i64 - 1;
    while k > 1 {
        acc *= T::of(k as f64);
        k -= 2;
    }
    acc
}

/// `ln Γ(x + n) - ln Γ(x)` as a sum of logs of the rising factorial.
pub fn ln_rising<T: Scalar>(x: T, n: usize) -> T {
    if n <= 64 {
        (0..n).map(|l| (x + T::of_usize(l)).ln()).sum()
    } else {
        (x + T::of_usize(n)).ln_gamma() - x.ln_gamma()
    }
}

/// Binomial coefficient as a float.
pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::of_usize(n - i) / T::of_usize(i + 1);
    }
    acc
}

/// Multinomial coefficient `|β|! / β!`.
pub fn multinomial<T: Scalar>(beta: &[u32]) -> T {
    let mut total = 0usize;
    let mut acc = T::one();
    for &b in beta {
        let b = b as usize;
        acc *= binomial::<T>(total + b, b);
        total += b;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_agree_across_branches() {
        let exact: f64 = factorial(20);
        assert_eq!(exact, 2_432_902_008_176_640_000.0);
        let lg: f64 = ln_factorial(40);
        let direct: f64 = (2..=40).map(|i| (i as f64).ln()).sum();
        assert!((lg - direct).abs() < 1e-10);
    }

    #[test]
    fn double_factorial_moments() {
        assert_eq!(gaussian_moment_unit::<f64>(0), 1.0);
        assert_eq!(gaussian_moment_unit::<f64>(2), 1.0);
        assert_eq!(gaussian_moment_unit::<f64>(4), 3.0);
        assert_eq!(gaussian_moment_unit::<f64>(6), 15.0);
        assert_eq!(gaussian_moment_unit::<f64>(3), 0.0);
    }

    #[test]
    fn multinomial_counts() {
        assert_eq!(multinomial::<f64>(&[1, 1]), 2.0);
        assert_eq!(multinomial::<f64>(&[2, 1, 1]), 12.0);
        assert_eq!(multinomial::<f64>(&[0, 3]), 1.0);
    }

    #[test]
    fn rising_matches_gamma_ratio() {
        let r: f64 = ln_rising(2.5, 3);
        assert!((r - (2.5f64 * 3.5 * 4.5).ln()).abs() < 1e-14);
        let big: f64 = ln_rising(2.5, 100);
        let via_gamma = libm::lgamma(102.5) - libm::lgamma(2.5);
        assert!((big - via_gamma).abs() < 1e-9);
    }
}
