//! Numerical check of the spherical eigenvalues by one-dimensional quadrature.
//!
//! For `φ(t) = t^{k+2i}`, the Funk–Hecke formula gives
//! `λ = (|S^{d−2}|/|S^{d−1}|) ∫_{−1}^{1} φ(t) P_{d,k}(t) (1−t²)^{(d−3)/2} dt`.
//! With `t = cos θ` the weight becomes `sin^{d−2} θ`, which is bounded for
//! every `d ≥ 2`, so plain Gauss–Legendre panels converge quickly.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::gen::random_homogeneous;
use crate::rng::{self, Purpose};
use crate::scalar::Scalar;
use crate::spectral::{harmonic_decompose, sphere_eigenvalue};

/// `P_{d,k}(t)`, normalized so that `P_{d,k}(1) = 1`.
pub fn legendre_eval<T: Scalar>(d: usize, k: usize, t: T) -> Result<T> {
    if d < 2 {
        return Err(invalid("Legendre polynomials need d >= 2"));
    }
    if !(t.abs() <= T::one()) {
        return Err(invalid("argument must lie in [-1, 1]"));
    }
    Ok(legendre_unchecked(d, k, t))
}

fn legendre_unchecked<T: Scalar>(d: usize, k: usize, t: T) -> T {
    let h = T::of(d as f64 - 1.0) / T::of(2.0);
    let one_minus = T::one() - t * t;
    let lead = T::of_usize(k + 1).ln_gamma() + h.ln_gamma();
    let mut sum = T::zero();
    for i in 0..=k / 2 {
        let ln_den = T::of(4.0).ln() * T::of_usize(i)
            + T::of_usize(i + 1).ln_gamma()
            + T::of_usize(k - 2 * i + 1).ln_gamma()
            + (h + T::of_usize(i)).ln_gamma();
        let sign = if i % 2 == 0 { T::one() } else { -T::one() };
        sum += sign * one_minus.powi(i as i32) * t.powi((k - 2 * i) as i32) * (lead - ln_den).exp();
    }
    sum
}

/// `|S^{d−2}| / |S^{d−1}| = Γ(d/2) / (√π Γ((d−1)/2))`.
pub fn surface_ratio<T: Scalar>(d: usize) -> T {
    let half = T::of(d as f64) / T::of(2.0);
    (half.ln_gamma() - (half - T::of(0.5)).ln_gamma()).exp() / T::PI().sqrt()
}

/// Composite adaptive Gauss–Legendre integration.
pub mod quadrature {
    use crate::error::{Error, Result};
    use crate::scalar::Scalar;

    /// Gauss–Legendre rule on `[−1, 1]`.
    #[derive(Clone, Debug)]
    pub struct GaussLegendre<T> {
        pub nodes: Vec<T>,
        pub weights: Vec<T>,
    }

    impl<T: Scalar> GaussLegendre<T> {
        /// Nodes by Newton iteration on the classical three-term recurrence.
        pub fn new(n: usize) -> Self {
            assert!(n >= 1);
            let mut nodes = vec![T::zero(); n];
            let mut weights = vec![T::zero(); n];
            let nf = n as f64;
            for i in 0..n.div_ceil(2) {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (p, d) = legendre_with_derivative(n, x);
                    dp = d;
                    let dx = p / d;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                let (_, d) = legendre_with_derivative(n, x);
                if d != 0.0 {
                    dp = d;
                }
                let w = 2.0 / ((1.0 - x * x) * dp * dp);
                nodes[i] = T::of(-x);
                nodes[n - 1 - i] = T::of(x);
                weights[i] = T::of(w);
                weights[n - 1 - i] = T::of(w);
            }
            GaussLegendre { nodes, weights }
        }

        pub fn integrate<F: Fn(T) -> T>(&self, f: &F, a: T, b: T) -> T {
            let half = (b - a) / T::of(2.0);
            let mid = (a + b) / T::of(2.0);
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(mid + half * x))
                .sum::<T>()
                * half
        }
    }

    fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        (p1, d)
    }

    const MAX_DEPTH: usize = 40;

    /// `∫_a^b f` to absolute tolerance `tol` by bisecting panels where a
    /// panel and its two halves disagree.
    pub fn adaptive<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T, panels: usize) -> Result<T> {
        let rule = GaussLegendre::new(16);
        let width = (b - a) / T::of_usize(panels);
        let mut total = T::zero();
        for p in 0..panels {
            let lo = a + width * T::of_usize(p);
            let hi = lo + width;
            total += refine(&rule, f, lo, hi, tol / T::of_usize(panels), 0)?;
        }
        Ok(total)
    }

    fn refine<T: Scalar, F: Fn(T) -> T>(rule: &GaussLegendre<T>, f: &F, a: T, b: T, tol: T, depth: usize) -> Result<T> {
        let whole = rule.integrate(f, a, b);
        let mid = (a + b) / T::of(2.0);
        let halves = rule.integrate(f, a, mid) + rule.integrate(f, mid, b);
        if (whole - halves).abs() <= tol.max(T::epsilon() * halves.abs() * T::of(16.0)) {
            return Ok(halves);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Numerical(format!(
                "quadrature did not converge on [{a}, {b}]"
            )));
        }
        let half_tol = tol / T::of(2.0);
        Ok(refine(rule, f, a, mid, half_tol, depth + 1)? + refine(rule, f, mid, b, half_tol, depth + 1)?)
    }
}

/// Absolute tolerance of [`lambda_quadrature`].
pub const QUADRATURE_TOL: f64 = 1e-10;

/// `λ_{d,k,i}` by quadrature in `θ`.
pub fn lambda_quadrature<T: Scalar>(d: usize, k: usize, i: usize) -> Result<T> {
    if d < 2 {
        return Err(invalid("the sphere eigenvalue check needs d >= 2"));
    }
    let m = (k + 2 * i) as i32;
    let f = |theta: T| {
        let (s, c) = theta.sin_cos();
        c.powi(m) * legendre_unchecked(d, k, c) * s.powi(d as i32 - 2)
    };
    let integral = quadrature::adaptive(&f, T::zero(), T::PI(), T::of(QUADRATURE_TOL), 4)?;
    Ok(surface_ratio::<T>(d) * integral)
}

/// `∫ P_{d,k} P_{d,k′} (1−t²)^{(d−3)/2} dt`.
pub fn legendre_inner<T: Scalar>(d: usize, k: usize, k2: usize) -> Result<T> {
    if d < 2 {
        return Err(invalid("Legendre polynomials need d >= 2"));
    }
    let f = |theta: T| {
        let (s, c) = theta.sin_cos();
        legendre_unchecked(d, k, c) * legendre_unchecked(d, k2, c) * s.powi(d as i32 - 2)
    };
    quadrature::adaptive(&f, T::zero(), T::PI(), T::of(QUADRATURE_TOL), 4)
}

/// One row of the closed-form versus quadrature report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunkHeckeRow {
    pub d: usize,
    pub k: usize,
    pub i: usize,
    pub closed_form: f64,
    pub quadrature: f64,
    pub abs_diff: f64,
}

pub fn funkhecke_row(d: usize, k: usize, i: usize) -> Result<FunkHeckeRow> {
    let closed_form: f64 = sphere_eigenvalue(d, k, i);
    let quadrature: f64 = lambda_quadrature(d, k, i)?;
    Ok(FunkHeckeRow {
        d,
        k,
        i,
        closed_form,
        quadrature,
        abs_diff: (closed_form - quadrature).abs(),
    })
}

/// Every `(d, k, i)` with `d ∈ dims`, `k ≤ k_max`, `i ≤ i_max`.
pub fn funkhecke_grid(dims: &[usize], k_max: usize, i_max: usize) -> Result<Vec<FunkHeckeRow>> {
    let mut rows = Vec::new();
    for &d in dims {
        for k in 0..=k_max {
            for i in 0..=i_max {
                rows.push(funkhecke_row(d, k, i)?);
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPoint {
    pub u: Vec<f64>,
    pub expected: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenReport {
    pub d: usize,
    pub k: usize,
    pub i: usize,
    pub lambda: f64,
    pub points: Vec<EigenPoint>,
    /// True when every point lies within 4 standard errors.
    pub passed: bool,
}

/// Harmonic, homogeneous of degree `k`: the top part of a random polynomial.
pub fn random_harmonic<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Result<crate::Poly> {
    for _ in 0..100 {
        let p = random_homogeneous(rng, d, k);
        let dec = harmonic_decompose(&p)?;
        if let Some(part) = dec.parts.into_iter().find(|pt| pt.j == 0) {
            if part.h.max_abs_coeff() >= 1e-8 {
                return Ok(part.h);
            }
        }
    }
    Err(Error::Degenerate("could not draw a non-zero harmonic polynomial".into()))
}

/// Monte Carlo check of `∫ ⟨u,v⟩^{k+2i} h(v) σ(dv) = λ_{d,k,i} h(u)` at five
/// random unit vectors `u`.
pub fn sphere_eigencheck(d: usize, k: usize, i: usize, n_mc: usize, seed: u64) -> Result<EigenReport> {
    if d < 2 {
        return Err(invalid("the sphere eigenvalue check needs d >= 2"));
    }
    if n_mc < 2 {
        return Err(invalid("at least two samples are required"));
    }
    let mut r = rng::stream(seed, Purpose::Generator, 0);
    let h = random_harmonic(&mut r, d, k)?;
    let hc = h.compile();
    let lambda: f64 = sphere_eigenvalue(d, k, i);
    let us: Vec<Vec<f64>> = (0..5).map(|_| rng::unit_vec(&mut r, d)).collect();
    let mut sums = vec![(0.0, 0.0); us.len()];
    let mut scratch = Vec::new();
    let mut rv = rng::stream(seed, Purpose::Evaluation, 0);
    for _ in 0..n_mc {
        let v = rng::unit_vec(&mut rv, d);
        let hv = hc.eval_with(&v, &mut scratch);
        for (acc, u) in sums.iter_mut().zip(&us) {
            let x = rng::dot(u, &v).powi((k + 2 * i) as i32) * hv;
            acc.0 += x;
            acc.1 += x * x;
        }
    }
    let n = n_mc as f64;
    let points: Vec<EigenPoint> = us
        .into_iter()
        .zip(sums)
        .map(|(u, (s1, s2))| {
            let mean = s1 / n;
            let se = (((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0) / n).sqrt();
            let expected = lambda * hc.eval_with(&u, &mut scratch);
            let z = if se > 0.0 { (mean - expected) / se } else if mean == expected { 0.0 } else { f64::INFINITY };
            EigenPoint { u, expected, estimate: mean, std_error: se, z }
        })
        .collect();
    let passed = points.iter().all(|p| p.z.abs() <= 4.0 || (p.estimate - p.expected).abs() < 1e-12);
    Ok(EigenReport { d, k, i, lambda, points, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        for d in 2..=10 {
            assert_eq!(legendre_eval(d, 0, 0.3).unwrap(), 1.0);
            for k in 0..=10 {
                assert!((legendre_eval(d, k, 1.0f64).unwrap() - 1.0).abs() < 1e-12, "d={d} k={k}");
            }
        }
        assert!((legendre_eval(3, 1, 0.37f64).unwrap() - 0.37).abs() < 1e-15);
        let t: f64 = 0.4;
        assert!((legendre_eval(3, 2, t).unwrap() - (3.0 * t * t - 1.0) / 2.0).abs() < 1e-14);
        assert!(legendre_eval(3, 2, 1.5).is_err());
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = quadrature::GaussLegendre::<f64>::new(8);
        let v = rule.integrate(&|x: f64| x.powi(14) + x.powi(3), -1.0, 1.0);
        assert!((v - 2.0 / 15.0).abs() < 1e-15);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lambda_examples() {
        for d in 2..=6 {
            assert!((lambda_quadrature::<f64>(d, 0, 0).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((lambda_quadrature::<f64>(2, 1, 0).unwrap() - 0.5).abs() < 1e-12);
        assert!(lambda_quadrature::<f64>(1, 0, 0).is_err());
    }

    #[test]
    fn single_precision_quadrature() {
        let l: f32 = lambda_quadrature(3, 2, 1).unwrap();
        let exact: f64 = sphere_eigenvalue(3, 2, 1);
        assert!((l as f64 - exact).abs() < 1e-5);
    }

    #[test]
    fn orthogonality() {
        for d in [2, 3, 5] {
            for k in 0..=6 {
                for k2 in 0..k {
                    assert!(legendre_inner::<f64>(d, k, k2).unwrap().abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn eigencheck_constants() {
        let rep = sphere_eigencheck(3, 0, 0, 1000, 4).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.lambda, 1.0);
    }
}
