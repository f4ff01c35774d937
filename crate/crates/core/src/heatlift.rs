//! Harmonic extension to `d + 1` variables and the heat semigroup on
//! polynomials.
//!
//! `sharpen` runs the heat flow backwards, `exp(−(σ²/2)Δ)`, and `smooth` runs
//! it forwards. Both series terminate because `Δ` lowers the degree by two.
//! On monomials, sharpening is the substitution `x^α ↦ H_{σ,α}(x)` by scaled
//! probabilists' Hermite polynomials, which gives an independent route.

use crate::error::{invalid, Error, Result};
use crate::polycore::{MultiIndex, Polynomial};
use crate::scalar::Scalar;
use crate::special::factorial;

/// `H(f)`, harmonic in `d + 1` variables with the extra variable last.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicExtension<T> {
    pub base: Polynomial<T>,
    pub extended: Polynomial<T>,
}

/// `H(f)(x, y) = Σ_j (−1)^j y^{2j} / (2j)! · Δ^j f(x)`.
pub fn harmonic_extend<T: Scalar>(f: &Polynomial<T>) -> HarmonicExtension<T> {
    let d = f.dim();
    let mut extended = Polynomial::zero(d + 1);
    for (j, lap) in f.laplacian_powers().into_iter().enumerate() {
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        let coef = sign / factorial::<T>(2 * j);
        let mut y = vec![0u32; d + 1];
        y[d] = 2 * j as u32;
        let y_pow = Polynomial::monomial(y, coef);
        extended = &extended + &(&lap.embed(1) * &y_pow);
    }
    HarmonicExtension {
        base: f.clone(),
        extended,
    }
}

fn heat_series<T: Scalar>(f: &Polynomial<T>, step: T) -> Polynomial<T> {
    let mut out = Polynomial::zero(f.dim());
    let mut coef = T::one();
    for (j, lap) in f.laplacian_powers().into_iter().enumerate() {
        if j > 0 {
            coef = coef * step / T::of_usize(j);
        }
        out = &out + &lap.scale(coef);
    }
    out
}

/// `f^♯ = exp(−(σ²/2)Δ) f`.
pub fn sharpen<T: Scalar>(f: &Polynomial<T>, sigma2: T) -> Result<Polynomial<T>> {
    check_positive(sigma2, "sigma2")?;
    Ok(heat_series(f, -sigma2 / T::of(2.0)))
}

/// `exp((t/2)Δ) f`, i.e. `x ↦ E[f(x + √t Z)]`.
pub fn smooth<T: Scalar>(f: &Polynomial<T>, t: T) -> Result<Polynomial<T>> {
    check_positive(t, "t")?;
    Ok(heat_series(f, t / T::of(2.0)))
}

fn check_positive<T: Scalar>(x: T, name: &str) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite")))
    }
}

/// Univariate coefficient tables for `H_{σ,n}(x) = σ^n He_n(x/σ)`.
///
/// `forward[n][m]` is the coefficient of `x^m` in `H_{σ,n}`; `inverse[n][m]`
/// is the coefficient of `H_{σ,m}` in `x^n`.
#[derive(Clone, Debug)]
pub struct HermiteTable<T> {
    sigma2: T,
    forward: Vec<Vec<T>>,
    inverse: Vec<Vec<T>>,
}

impl<T: Scalar> HermiteTable<T> {
    pub fn new(max_degree: usize, sigma2: T) -> Self {
        let mut forward: Vec<Vec<T>> = vec![vec![T::one()]];
        if max_degree >= 1 {
            forward.push(vec![T::zero(), T::one()]);
        }
        // H_{n+1}(x) = x H_n(x) − n σ² H_{n−1}(x)
        for n in 1..max_degree {
            let mut next = vec![T::zero(); n + 2];
            for (m, &c) in forward[n].iter().enumerate() {
                next[m + 1] += c;
            }
            for (m, &c) in forward[n - 1].iter().enumerate() {
                next[m] -= T::of_usize(n) * sigma2 * c;
            }
            forward.push(next);
        }
        // x^n = Σ_l n! / (2^l l! (n−2l)!) σ^{2l} H_{σ,n−2l}
        let inverse = (0..=max_degree)
            .map(|n| {
                let mut row = vec![T::zero(); n + 1];
                for l in 0..=n / 2 {
                    let c = factorial::<T>(n)
                        / (T::of(2.0).powi(l as i32) * factorial::<T>(l) * factorial::<T>(n - 2 * l))
                        * sigma2.powi(l as i32);
                    row[n - 2 * l] = c;
                }
                row
            })
            .collect();
        HermiteTable {
            sigma2,
            forward,
            inverse,
        }
    }

    pub fn sigma2(&self) -> T {
        self.sigma2
    }

    pub fn max_degree(&self) -> usize {
        self.forward.len() - 1
    }

    /// Coefficients of `H_{σ,n}` in ascending powers.
    pub fn hermite(&self, n: usize) -> &[T] {
        &self.forward[n]
    }

    fn product_map(&self, p: &Polynomial<T>, table: &[Vec<T>]) -> Polynomial<T> {
        let d = p.dim();
        let mut out = Polynomial::zero(d);
        for (alpha, &c) in p.terms() {
            let mut acc: Vec<(Vec<u32>, T)> = vec![(vec![0; d], c)];
            for (i, &e) in alpha.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let row = &table[e as usize];
                let mut next = Vec::with_capacity(acc.len() * row.len());
                for (ex, v) in &acc {
                    for (m, &h) in row.iter().enumerate() {
                        if h == T::zero() {
                            continue;
                        }
                        let mut ex2 = ex.clone();
                        ex2[i] = m as u32;
                        next.push((ex2, *v * h));
                    }
                }
                acc = next;
            }
            for (ex, v) in acc {
                out.add_term(MultiIndex::new(ex), v);
            }
        }
        out
    }
}

/// `Σ c_α H_{σ,α}(x)` for `f = Σ c_α x^α`.
pub fn sharpen_hermite<T: Scalar>(f: &Polynomial<T>, sigma2: T) -> Result<Polynomial<T>> {
    check_positive(sigma2, "sigma2")?;
    let table = HermiteTable::new(max_exponent(f), sigma2);
    Ok(table.product_map(f, &table.forward))
}

/// Coefficients of `p` in the basis `{H_{σ,α}}`, stored as a polynomial whose
/// `x^α` coefficient is the coefficient of `H_{σ,α}`.
pub fn hermite_coefficients<T: Scalar>(p: &Polynomial<T>, sigma2: T) -> Result<Polynomial<T>> {
    check_positive(sigma2, "sigma2")?;
    let table = HermiteTable::new(max_exponent(p), sigma2);
    Ok(table.product_map(p, &table.inverse))
}

fn max_exponent<T: Scalar>(p: &Polynomial<T>) -> usize {
    p.terms()
        .flat_map(|(a, _)| a.exponents().iter().copied())
        .max()
        .unwrap_or(0) as usize
}

/// `‖p‖_{L²(N(0,σ²I))}` from orthogonality `⟨H_α, H_β⟩ = δ_{αβ} α! σ^{2|α|}`.
pub fn gaussian_l2_norm<T: Scalar>(p: &Polynomial<T>, sigma2: T) -> Result<T> {
    let c = hermite_coefficients(p, sigma2)?;
    let sq: T = c
        .terms()
        .map(|(a, &v)| v * v * a.factorial::<T>() * sigma2.powi(a.degree() as i32))
        .sum();
    Ok(sq.sqrt())
}

/// `(‖f_k^♯‖_{L²(N(0,σ²I))}, ‖f_k‖_F σ^k)` for homogeneous `f_k`.
pub fn fischer_l2_identity_check<T: Scalar>(f_k: &Polynomial<T>, sigma2: T) -> Result<(T, T)> {
    let k = f_k.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let sharp = sharpen(f_k, sigma2)?;
    let lhs = gaussian_l2_norm(&sharp, sigma2)?;
    let rhs = f_k.fischer_norm()? * sigma2.sqrt().powi(k as i32);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Polynomial<f64>;

    fn mono(e: &[u32], c: f64) -> P {
        P::monomial(e.to_vec(), c)
    }

    #[test]
    fn extension_of_x_squared() {
        let ext = harmonic_extend(&mono(&[2], 1.0));
        let expect = &mono(&[2, 0], 1.0) - &mono(&[0, 2], 1.0);
        assert!(ext.extended.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn extension_of_harmonic_has_no_y() {
        let h = &mono(&[1, 1], 1.0) + &mono(&[1, 0], 2.0);
        let ext = harmonic_extend(&h);
        assert_eq!(ext.extended, h.embed(1));
    }

    #[test]
    fn extension_of_radial_square() {
        let ext = harmonic_extend(&P::norm_sq_power(2, 1));
        let expect = &(&mono(&[2, 0, 0], 1.0) + &mono(&[0, 2, 0], 1.0)) - &mono(&[0, 0, 2], 2.0);
        assert!(ext.extended.max_abs_diff(&expect) < 1e-15);
        assert!(ext.extended.laplacian().is_zero());
        assert_eq!(ext.extended.restrict_last_to_zero().unwrap(), ext.base);
    }

    #[test]
    fn sharpen_examples() {
        let x2 = sharpen(&mono(&[2], 1.0), 1.0).unwrap();
        assert!(x2.max_abs_diff(&(&mono(&[2], 1.0) - &P::constant(1, 1.0))) < 1e-15);
        let lin = &mono(&[1, 0], 3.0) + &P::constant(2, 1.0);
        assert_eq!(sharpen(&lin, 2.0).unwrap(), lin);
        let x4 = sharpen(&mono(&[4, 0], 1.0), 1.0).unwrap();
        let he4 = &(&mono(&[4, 0], 1.0) - &mono(&[2, 0], 6.0)) + &P::constant(2, 3.0);
        assert!(x4.max_abs_diff(&he4) < 1e-14);
        assert!(sharpen(&lin, 0.0).is_err());
    }

    #[test]
    fn hermite_examples() {
        let x2 = sharpen_hermite(&mono(&[2], 1.0), 1.0).unwrap();
        assert!(x2.max_abs_diff(&(&mono(&[2], 1.0) - &P::constant(1, 1.0))) < 1e-15);
        let s2 = 0.7;
        let x3 = sharpen_hermite(&mono(&[3], 1.0), s2).unwrap();
        assert!(x3.max_abs_diff(&(&mono(&[3], 1.0) - &mono(&[1], 3.0 * s2))) < 1e-15);
        assert_eq!(sharpen_hermite(&P::constant(2, 4.0), 3.0).unwrap(), P::constant(2, 4.0));
    }

    #[test]
    fn hermite_recurrence_table() {
        let t = HermiteTable::new(4, 1.0f64);
        assert_eq!(t.hermite(4), &[3.0, 0.0, -6.0, 0.0, 1.0]);
        assert_eq!(t.hermite(3), &[0.0, -3.0, 0.0, 1.0]);
    }

    #[test]
    fn smooth_examples() {
        let s = smooth(&mono(&[2], 1.0), 1.0).unwrap();
        assert!(s.max_abs_diff(&(&mono(&[2], 1.0) + &P::constant(1, 1.0))) < 1e-15);
        let lin = mono(&[0, 1], -2.0);
        assert_eq!(smooth(&lin, 5.0).unwrap(), lin);
        let f = &mono(&[3, 1], 1.0) + &mono(&[0, 4], -0.5);
        let back = smooth(&sharpen(&f, 1.3).unwrap(), 1.3).unwrap();
        assert!(back.max_abs_diff(&f) < 1e-13);
    }

    #[test]
    fn fischer_identity_examples() {
        let (l, r) = fischer_l2_identity_check(&mono(&[2, 0], 1.0), 1.0).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-14 && (r - 2f64.sqrt()).abs() < 1e-14);
        let (l, r) = fischer_l2_identity_check(&mono(&[1, 1], 1.0), 4.0).unwrap();
        assert!((l - 4.0).abs() < 1e-13 && (r - 4.0).abs() < 1e-13);
        assert_eq!(fischer_l2_identity_check(&P::zero(2), 1.0).unwrap(), (0.0, 0.0));
        let mixed = &mono(&[2, 0], 1.0) + &mono(&[0, 1], 1.0);
        assert!(matches!(fischer_l2_identity_check(&mixed, 1.0), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn gaussian_norm_matches_moments() {
        // E[(X² − 1)²] = E[X⁴] − 2E[X²] + 1 = 2 for X ~ N(0, 1)
        let p = &mono(&[2], 1.0) - &P::constant(1, 1.0);
        assert!((gaussian_l2_norm(&p, 1.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }
}
