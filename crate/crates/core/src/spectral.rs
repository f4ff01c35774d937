//! Harmonic decomposition and the spectrum of the ReLU operator
//! `T_μ g(x) = ∫ g(⟨x, v⟩ v) μ(dv)` for spherically symmetric `μ`.
//!
//! Every `‖x‖^{2j} h` with `h` harmonic and homogeneous of degree `k` is an
//! eigenfunction, so `T_μ⁻¹` is a division per harmonic part. In one
//! dimension monomials play that role directly.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::polycore::{MultiIndex, Polynomial};
use crate::scalar::Scalar;
use crate::special::{gaussian_moment_unit, ln_factorial, ln_rising, multinomial};

/// Total degree above which [`apply_t_exact`] refuses to expand.
pub const EXACT_DEGREE_CAP: usize = 12;

/// Spherically symmetric direction law `μ` on `ℝ^d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialKind<T> {
    /// `N(0, σ² I_d)`.
    Gaussian { sigma2: T },
    /// Uniform on the unit sphere `S^{d−1}`.
    UnitSphere,
    /// Uniform on `{−1, 1}`; one dimension only.
    Rademacher,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialLaw<T> {
    pub kind: RadialKind<T>,
    pub dim: usize,
}

impl<T: Scalar> RadialLaw<T> {
    pub fn gaussian(dim: usize, sigma2: T) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if !(sigma2 > T::zero()) || !sigma2.is_finite() {
            return Err(invalid("gaussian law needs sigma2 > 0"));
        }
        Ok(RadialLaw {
            kind: RadialKind::Gaussian { sigma2 },
            dim,
        })
    }

    pub fn unit_sphere(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(RadialLaw {
            kind: RadialKind::UnitSphere,
            dim,
        })
    }

    pub fn rademacher() -> Self {
        RadialLaw {
            kind: RadialKind::Rademacher,
            dim: 1,
        }
    }

    pub fn gaussian_sigma2(&self) -> Option<T> {
        match self.kind {
            RadialKind::Gaussian { sigma2 } => Some(sigma2),
            _ => None,
        }
    }
}

/// `∫ ‖v‖^{2m} μ(dv)`.
pub fn moment<T: Scalar>(law: &RadialLaw<T>, m: usize) -> T {
    match law.kind {
        RadialKind::Gaussian { sigma2 } => {
            let half_d = T::of_usize(law.dim) / T::of(2.0);
            let ln = T::of_usize(m) * (sigma2.ln() + T::LN_2()) + ln_rising(half_d, m);
            ln.exp()
        }
        RadialKind::UnitSphere | RadialKind::Rademacher => T::one(),
    }
}

/// The uniform-sphere eigenvalue `λ_{d,k,i} = Γ(d/2)(k+2i)! / (2^{2i+k} i! Γ(k+i+d/2))`.
pub fn sphere_eigenvalue<T: Scalar>(dim: usize, k: usize, i: usize) -> T {
    let half_d = T::of_usize(dim) / T::of(2.0);
    let ln = ln_factorial::<T>(k + 2 * i)
        - ln_factorial::<T>(i)
        - T::of_usize(2 * i + k) * T::LN_2()
        - ln_rising(half_d, k + i);
    ln.exp()
}

/// Eigenvalue of `T_μ` on `‖x‖^{2i} h_k`; in one dimension `i` must be 0.
pub fn eigenvalue<T: Scalar>(law: &RadialLaw<T>, k: usize, i: usize) -> Result<T> {
    if law.dim == 1 {
        if i > 0 {
            return Err(invalid("radial power i > 0 has no meaning in one dimension"));
        }
        return Ok(moment(law, k));
    }
    if matches!(law.kind, RadialKind::Rademacher) {
        return Err(invalid("rademacher law is one-dimensional"));
    }
    Ok(sphere_eigenvalue::<T>(law.dim, k, i) * moment(law, k + 2 * i))
}

/// One piece `f_ij = ‖x‖^{2j} h` of a harmonic decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicPart<T> {
    /// Total degree of `f_ij`.
    pub i: usize,
    /// Radial power.
    pub j: usize,
    /// Harmonic, homogeneous of degree `i − 2j`.
    pub h: Polynomial<T>,
}

impl<T: Scalar> HarmonicPart<T> {
    pub fn harmonic_degree(&self) -> usize {
        self.i - 2 * self.j
    }

    /// `‖x‖^{2j} h` as a polynomial.
    pub fn expand(&self) -> Polynomial<T> {
        &Polynomial::norm_sq_power(self.h.dim(), self.j) * &self.h
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicDecomposition<T> {
    pub dim: usize,
    pub parts: Vec<HarmonicPart<T>>,
}

impl<T: Scalar> HarmonicDecomposition<T> {
    /// `Σ ‖x‖^{2j} h`.
    pub fn reconstruct(&self) -> Polynomial<T> {
        self.parts
            .iter()
            .fold(Polynomial::zero(self.dim), |acc, p| &acc + &p.expand())
    }
}

fn relative_floor<T: Scalar>(p: &Polynomial<T>) -> T {
    T::of(1e-13) * p.max_abs_coeff()
}

/// Unique decomposition of `p` (`dim ≥ 2`) into `‖x‖^{2j} h` pieces.
///
/// Each homogeneous component `f_m` is split by the harmonic projection
/// `h_m = Σ_l c_l ‖x‖^{2l} Δ^l f_m` with `c_0 = 1` and
/// `c_l = −c_{l−1} / (2l (d + 2m − 2 − 2l))`. The remainder is exactly
/// `‖x‖² q` with `q = −Σ_{l≥1} c_l ‖x‖^{2(l−1)} Δ^l f_m`, which is decomposed
/// the same way at degree `m − 2`.
pub fn harmonic_decompose<T: Scalar>(p: &Polynomial<T>) -> Result<HarmonicDecomposition<T>> {
    let d = p.dim();
    if d < 2 {
        return Err(Error::Unsupported(
            "harmonic decomposition needs d >= 2; use the monomial split in one dimension".into(),
        ));
    }
    let floor = relative_floor(p);
    let mut radial: Vec<Polynomial<T>> = vec![Polynomial::constant(d, T::one())];
    let mut parts = Vec::new();
    for comp in p.homogeneous_split() {
        let total = comp.degree;
        let mut cur = comp.poly;
        let mut deg = total;
        let mut j = 0;
        while !cur.is_zero() {
            let laps = cur.laplacian_powers();
            while radial.len() < laps.len() {
                let next = &radial[radial.len() - 1] * &radial_r2(d);
                radial.push(next);
            }
            let mut h = cur.clone();
            let mut q = Polynomial::zero(d);
            let mut c = T::one();
            for (l, lap) in laps.iter().enumerate().skip(1) {
                let denom = T::of_usize(2 * l) * T::of_usize(d + 2 * deg - 2 - 2 * l);
                c = -c / denom;
                h = &h + &(&radial[l] * lap).scale(c);
                q = &q - &(&radial[l - 1] * lap).scale(c);
            }
            let h = h.chop(floor);
            if !h.is_zero() {
                parts.push(HarmonicPart { i: total, j, h });
            }
            cur = q.chop(floor);
            if deg < 2 {
                break;
            }
            deg -= 2;
            j += 1;
        }
    }
    Ok(HarmonicDecomposition { dim: d, parts })
}

fn radial_r2<T: Scalar>(d: usize) -> Polynomial<T> {
    Polynomial::norm_sq_power(d, 1)
}

/// The same decomposition obtained from a linear solve per homogeneous degree.
///
/// Unknowns are the monomial coefficients of `h_{m−2j}`; equations are the
/// reconstruction `Σ_j ‖x‖^{2j} h_{m−2j} = f_m` plus `Δ h_{m−2j} = 0`. The
/// system is solved by SVD least squares in `f64` and rejected if the
/// residual exceeds `1e−10` relative to the input scale.
pub fn harmonic_decompose_linear_solve<T: Scalar>(
    p: &Polynomial<T>,
) -> Result<HarmonicDecomposition<T>> {
    let d = p.dim();
    if d < 2 {
        return Err(Error::Unsupported(
            "harmonic decomposition needs d >= 2; use the monomial split in one dimension".into(),
        ));
    }
    let scale = p.max_abs_coeff().as_f64().max(f64::MIN_POSITIVE);
    let mut parts = Vec::new();
    for comp in p.homogeneous_split() {
        let m = comp.degree;
        let rows_basis = MultiIndex::all_of_degree(d, m);
        let row_of = |a: &MultiIndex| rows_basis.binary_search(a).ok();
        let js: Vec<usize> = (0..=m / 2).collect();
        let blocks: Vec<Vec<MultiIndex>> =
            js.iter().map(|&j| MultiIndex::all_of_degree(d, m - 2 * j)).collect();
        let n_unknowns: usize = blocks.iter().map(Vec::len).sum();
        let lap_rows: Vec<Vec<MultiIndex>> = js
            .iter()
            .map(|&j| {
                if m - 2 * j >= 2 {
                    MultiIndex::all_of_degree(d, m - 2 * j - 2)
                } else {
                    Vec::new()
                }
            })
            .collect();
        let n_eq = rows_basis.len() + lap_rows.iter().map(Vec::len).sum::<usize>();
        let mut a = DMatrix::<f64>::zeros(n_eq, n_unknowns);
        let mut b = DVector::<f64>::zeros(n_eq);
        for (alpha, c) in comp.poly.terms() {
            b[row_of(alpha).expect("degree-m monomial")] = c.as_f64();
        }
        let mut col = 0;
        let mut lap_row0 = rows_basis.len();
        for (bi, &j) in js.iter().enumerate() {
            let rj: Polynomial<f64> = Polynomial::norm_sq_power(d, j);
            for alpha in &blocks[bi] {
                let mono = Polynomial::<f64>::monomial(alpha.clone(), 1.0);
                for (beta, c) in (&rj * &mono).terms() {
                    a[(row_of(beta).expect("degree-m monomial"), col)] += *c;
                }
                if !lap_rows[bi].is_empty() {
                    for (gamma, c) in mono.laplacian().terms() {
                        let r = lap_rows[bi].binary_search(gamma).expect("degree m-2j-2");
                        a[(lap_row0 + r, col)] += *c;
                    }
                }
                col += 1;
            }
            lap_row0 += lap_rows[bi].len();
        }
        let svd = a.clone().svd(true, true);
        let x = svd
            .solve(&b, 1e-13)
            .map_err(|e| Error::Numerical(e.to_string()))?;
        let resid = (&a * &x - &b).amax();
        if resid > 1e-10 * scale {
            return Err(Error::Numerical(format!(
                "harmonic linear system residual {resid:e} at degree {m}"
            )));
        }
        let mut col = 0;
        for (bi, &j) in js.iter().enumerate() {
            let mut h = Polynomial::zero(d);
            for alpha in &blocks[bi] {
                h.add_term(alpha.clone(), T::of(x[col]));
                col += 1;
            }
            let h = h.chop(T::of(1e-13 * scale));
            if !h.is_zero() {
                parts.push(HarmonicPart { i: m, j, h });
            }
        }
    }
    Ok(HarmonicDecomposition { dim: d, parts })
}

/// The ReLU representative `g = T_μ⁻¹ f`.
pub fn apply_t_inverse<T: Scalar>(f: &Polynomial<T>, law: &RadialLaw<T>) -> Result<Polynomial<T>> {
    if f.dim() != law.dim {
        return Err(Error::DimensionMismatch {
            expected: law.dim,
            found: f.dim(),
        });
    }
    if law.dim == 1 {
        let mut g = Polynomial::zero(1);
        for (alpha, &c) in f.terms() {
            let lambda = eigenvalue(law, alpha.degree(), 0)?;
            g.add_term(alpha.clone(), c / lambda);
        }
        return Ok(g);
    }
    let dec = harmonic_decompose(f)?;
    let mut g = Polynomial::zero(f.dim());
    for part in &dec.parts {
        let lambda = eigenvalue(law, part.harmonic_degree(), part.j)?;
        g = &g + &part.expand().scale(T::one() / lambda);
    }
    Ok(g)
}

/// Forward `T_μ g` for Gaussian `μ`, by expanding `g(⟨x,v⟩v)` and
/// integrating each `v`-monomial with `E[v^γ] = Π σ^{γ_i} (γ_i − 1)!!`.
pub fn apply_t_exact<T: Scalar>(g: &Polynomial<T>, law: &RadialLaw<T>) -> Result<Polynomial<T>> {
    let sigma2 = law.gaussian_sigma2().ok_or_else(|| {
        Error::Unsupported("exact forward operator is only available for gaussian laws".into())
    })?;
    if g.dim() != law.dim {
        return Err(Error::DimensionMismatch {
            expected: law.dim,
            found: g.dim(),
        });
    }
    if let Some(deg) = g.degree() {
        if deg > EXACT_DEGREE_CAP {
            return Err(Error::DegreeTooLarge {
                degree: deg,
                limit: EXACT_DEGREE_CAP,
            });
        }
    }
    let d = g.dim();
    let mut out = Polynomial::zero(d);
    let mut betas_by_degree: Vec<Option<Vec<MultiIndex>>> = vec![None; EXACT_DEGREE_CAP + 1];
    for (alpha, &c) in g.terms() {
        let m = alpha.degree();
        let betas = betas_by_degree[m].get_or_insert_with(|| MultiIndex::all_of_degree(d, m));
        for beta in betas.iter() {
            let gamma = alpha.plus(beta);
            if gamma.exponents().iter().any(|e| e % 2 == 1) {
                continue;
            }
            let moment: T = gamma
                .exponents()
                .iter()
                .map(|&e| gaussian_moment_unit::<T>(e))
                .fold(T::one(), |a, b| a * b)
                * sigma2.powi((gamma.degree() / 2) as i32);
            out.add_term(beta.clone(), c * multinomial::<T>(beta.exponents()) * moment);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Polynomial<f64>;

    fn mono(e: &[u32], c: f64) -> P {
        P::monomial(e.to_vec(), c)
    }

    #[test]
    fn radial_function_is_one_part() {
        let dec = harmonic_decompose(&P::norm_sq_power(3, 1)).unwrap();
        assert_eq!(dec.parts.len(), 1);
        let part = &dec.parts[0];
        assert_eq!((part.i, part.j), (2, 1));
        assert!(part.h.max_abs_diff(&P::constant(3, 1.0)) < 1e-14);
    }

    #[test]
    fn x1_squared_in_the_plane() {
        // oracle: solve x1² = h2 + ‖x‖² c by hand, Δh2 = 0 forces c = 1/2
        let dec = harmonic_decompose(&mono(&[2, 0], 1.0)).unwrap();
        assert_eq!(dec.parts.len(), 2);
        let h2 = &mono(&[2, 0], 0.5) - &mono(&[0, 2], 0.5);
        assert_eq!((dec.parts[0].i, dec.parts[0].j), (2, 0));
        assert!(dec.parts[0].h.max_abs_diff(&h2) < 1e-14);
        assert!(dec.parts[0].h.laplacian().max_abs_coeff() < 1e-14);
        assert_eq!((dec.parts[1].i, dec.parts[1].j), (2, 1));
        assert!(dec.parts[1].h.max_abs_diff(&P::constant(2, 0.5)) < 1e-14);
        assert!(dec.reconstruct().max_abs_diff(&mono(&[2, 0], 1.0)) < 1e-14);
    }

    #[test]
    fn harmonic_input_is_a_fixed_point() {
        let h = &(&mono(&[3, 0, 0], 1.0) - &mono(&[1, 2, 0], 3.0)) + &mono(&[0, 1, 1], 2.0);
        let dec = harmonic_decompose(&h).unwrap();
        assert_eq!(dec.parts.len(), 2);
        for part in &dec.parts {
            assert_eq!(part.j, 0);
        }
        assert!(dec.reconstruct().max_abs_diff(&h) < 1e-14);
    }

    #[test]
    fn one_dimension_is_refused() {
        assert!(matches!(
            harmonic_decompose(&mono(&[2], 1.0)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn zero_polynomial_has_no_parts() {
        assert!(harmonic_decompose(&P::zero(3)).unwrap().parts.is_empty());
    }

    #[test]
    fn linear_solve_agrees_with_projection() {
        let p = &(&mono(&[4, 0, 0], 1.0) + &mono(&[1, 2, 1], -2.0)) + &mono(&[0, 0, 2], 0.5);
        let a = harmonic_decompose(&p).unwrap();
        let b = harmonic_decompose_linear_solve(&p).unwrap();
        assert_eq!(a.parts.len(), b.parts.len());
        for (x, y) in a.parts.iter().zip(&b.parts) {
            assert_eq!((x.i, x.j), (y.i, y.j));
            assert!(x.h.max_abs_diff(&y.h) < 1e-10, "{} vs {}", x.h, y.h);
        }
    }

    #[test]
    fn moment_examples() {
        let g = RadialLaw::gaussian(3, 1.0f64).unwrap();
        assert!((moment(&g, 1) - 3.0).abs() < 1e-13);
        let g = RadialLaw::gaussian(2, 4.0f64).unwrap();
        assert!((moment(&g, 2) - 128.0).abs() < 1e-11);
        let s = RadialLaw::<f64>::unit_sphere(4).unwrap();
        assert_eq!(moment(&s, 5), 1.0);
    }

    #[test]
    fn eigenvalue_examples() {
        let g5 = RadialLaw::gaussian(5, 1.0f64).unwrap();
        assert!((eigenvalue(&g5, 3, 0).unwrap() - 6.0).abs() < 1e-12);
        let g1 = RadialLaw::gaussian(1, 1.0f64).unwrap();
        assert!((eigenvalue(&g1, 2, 0).unwrap() - 3.0).abs() < 1e-13);
        let r = RadialLaw::<f64>::rademacher();
        for k in 0..8 {
            assert_eq!(eigenvalue(&r, k, 0).unwrap(), 1.0);
        }
        assert!(eigenvalue(&g1, 2, 1).is_err());
    }

    #[test]
    fn gaussian_eigenvalue_closed_form() {
        // λ = σ^{2(k+2i)} (k+2i)!/i! · Γ(k+2i+d/2)/Γ(k+i+d/2)
        for &(d, k, i, s2) in &[(3usize, 2usize, 1usize, 1.5f64), (4, 0, 2, 0.5), (6, 3, 1, 2.0)] {
            let law = RadialLaw::gaussian(d, s2).unwrap();
            let m = k + 2 * i;
            let fact = |n: usize| (1..=n).map(|x| x as f64).product::<f64>();
            let ratio: f64 = (k + i..m).map(|l| l as f64 + d as f64 / 2.0).product();
            let expect = s2.powi(m as i32) * fact(m) / fact(i) * ratio;
            let got = eigenvalue(&law, k, i).unwrap();
            assert!((got / expect - 1.0).abs() < 1e-12, "{d} {k} {i}: {got} vs {expect}");
        }
    }

    #[test]
    fn inverse_examples() {
        let g1 = RadialLaw::gaussian(1, 1.0).unwrap();
        let g = apply_t_inverse(&mono(&[2], 1.0), &g1).unwrap();
        assert!(g.max_abs_diff(&mono(&[2], 1.0 / 3.0)) < 1e-15);
        let c = apply_t_inverse(&P::constant(3, 2.5), &RadialLaw::gaussian(3, 2.0).unwrap()).unwrap();
        assert!(c.max_abs_diff(&P::constant(3, 2.5)) < 1e-14);
        // harmonic of degree 2, σ² = 2: divide by σ⁴ 2! = 8
        let h = &mono(&[2, 0], 1.0) - &mono(&[0, 2], 1.0);
        let law = RadialLaw::gaussian(2, 2.0).unwrap();
        let g = apply_t_inverse(&h, &law).unwrap();
        assert!(g.max_abs_diff(&h.scale(1.0 / 8.0)) < 1e-14);
    }

    #[test]
    fn forward_examples() {
        let g1 = RadialLaw::gaussian(1, 1.0).unwrap();
        let t = apply_t_exact(&mono(&[2], 1.0), &g1).unwrap();
        assert!(t.max_abs_diff(&mono(&[2], 3.0)) < 1e-15);
        let lin = &mono(&[1, 0, 0], 1.5) + &mono(&[0, 0, 1], -2.0);
        let law3 = RadialLaw::gaussian(3, 1.0).unwrap();
        assert!(apply_t_exact(&lin, &law3).unwrap().max_abs_diff(&lin) < 1e-15);
        assert_eq!(apply_t_exact(&P::constant(3, 1.0), &law3).unwrap(), P::constant(3, 1.0));
        let sphere = RadialLaw::unit_sphere(3).unwrap();
        assert!(matches!(apply_t_exact(&lin, &sphere), Err(Error::Unsupported(_))));
    }

    #[test]
    fn forward_inverse_round_trip_in_single_precision() {
        let law = RadialLaw::<f32>::gaussian(2, 1.0).unwrap();
        let f = &Polynomial::<f32>::monomial(vec![2, 1], 1.0) + &Polynomial::monomial(vec![0, 2], 0.5);
        let back = apply_t_exact(&apply_t_inverse(&f, &law).unwrap(), &law).unwrap();
        assert!(back.max_abs_diff(&f) < 1e-5);
    }
}
