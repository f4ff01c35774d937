//! ReLU integral representations `f(x) = a + ∫ u(v,s) ς(⟨x,v⟩ + b(v,s)) ν(dv,ds)`.
//!
//! The measure is `ν = μ ⊗ (δ₀ + Leb(ℝ₊))`: a point mass at `s = 0` plus
//! Lebesgue measure on `s > 0`, with `b(v,s) = −s`. Two constructions are
//! provided.
//!
//! * Direct: `g = T_μ⁻¹ f`, `u(v,0) = 2 g_v′(0)`, `u(v,s) = 2 g_v″(s)` where
//!   `g_v(t) = g(tv)`.
//! * Sharpened, with `μ = N(0, σ²I)`: `u(v,0) = (2/σ²) f₁(v)` and
//!   `u(v,s) = 2 Σ_{k≥2} s^{k−2} / ((k−2)! σ^{2k}) · f_k^♯(v)`.
//!
//! An optional [`LinearMap`] `(A, x₀)` turns a representation of `f̃` on
//! `ℝ^{d′}` into one of `f(x) = f̃(A(x − x₀))` on `ℝ^d`, with neuron
//! direction `Aᵀv` and bias `−⟨x₀, Aᵀv⟩ − s`.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::heatlift::sharpen;
use crate::io::PolyJson;
use crate::polycore::{CompiledPoly, Polynomial};
use crate::rng::{self, Purpose};
use crate::sampler::sample_direction;
use crate::scalar::Scalar;
use crate::spectral::{apply_t_inverse, RadialKind, RadialLaw};

/// Smallest singular value accepted for a transform matrix.
pub const MIN_SINGULAR_VALUE: f64 = 1e-10;

/// `(A, x₀)` with `A` a `d′ × d` matrix stored by rows and `x₀ ∈ ℝ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<T> {
    pub a: Vec<Vec<T>>,
    pub x0: Vec<T>,
}

impl<T: Scalar> LinearMap<T> {
    pub fn new(a: Vec<Vec<T>>, x0: Vec<T>) -> Result<Self> {
        let rows = a.len();
        if rows == 0 {
            return Err(invalid("transform matrix has no rows"));
        }
        let cols = a[0].len();
        if a.iter().any(|r| r.len() != cols) {
            return Err(invalid("transform matrix rows differ in length"));
        }
        if x0.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: x0.len(),
            });
        }
        Ok(LinearMap { a, x0 })
    }

    pub fn identity(dim: usize) -> Self {
        let a = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        LinearMap {
            a,
            x0: vec![T::zero(); dim],
        }
    }

    /// `A = I`, `x₀ = c`.
    pub fn shift(c: Vec<T>) -> Self {
        let mut m = Self::identity(c.len());
        m.x0 = c;
        m
    }

    /// `A = diag(scales)`, `x₀ = 0`.
    pub fn diagonal(scales: &[T]) -> Self {
        let mut m = Self::identity(scales.len());
        for (i, &s) in scales.iter().enumerate() {
            m.a[i][i] = s;
        }
        m
    }

    /// Output dimension `d′`.
    pub fn rows(&self) -> usize {
        self.a.len()
    }

    /// Input dimension `d`.
    pub fn cols(&self) -> usize {
        self.x0.len()
    }

    fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows(), self.cols(), |i, j| self.a[i][j].as_f64())
    }

    pub fn min_singular_value(&self) -> f64 {
        self.matrix()
            .singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Full column rank is required so that `f̃` exists.
    pub fn check_rank(&self) -> Result<()> {
        if self.rows() < self.cols() {
            return Err(Error::Unsupported(format!(
                "transform maps R^{} into R^{}; fewer rows than columns",
                self.cols(),
                self.rows()
            )));
        }
        let smin = self.min_singular_value();
        if !(smin > MIN_SINGULAR_VALUE) {
            return Err(Error::Degenerate(format!(
                "transform matrix is rank deficient (smallest singular value {smin:e})"
            )));
        }
        Ok(())
    }

    /// The left inverse `A⁺ = (AᵀA)⁻¹Aᵀ`, `d × d′`.
    pub fn left_inverse(&self) -> Result<Vec<Vec<T>>> {
        self.check_rank()?;
        let a = self.matrix();
        let pinv = a
            .pseudo_inverse(1e-14)
            .map_err(|e| Error::Numerical(e.to_string()))?;
        Ok((0..self.cols())
            .map(|i| (0..self.rows()).map(|j| T::of(pinv[(i, j)])).collect())
            .collect())
    }

    /// `Aᵀv`.
    pub fn transpose_apply(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols()];
        for (row, &vi) in self.a.iter().zip(v) {
            for (o, &aij) in out.iter_mut().zip(row) {
                *o += aij * vi;
            }
        }
        out
    }

    /// `A(x − x₀)`.
    pub fn apply_centered(&self, x: &[T]) -> Vec<T> {
        self.a
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x.iter().zip(&self.x0))
                    .map(|(&aij, (&xj, &cj))| aij * (xj - cj))
                    .sum()
            })
            .collect()
    }

    fn to_json(&self) -> Value {
        json!({
            "a": self.a.iter().map(|r| r.iter().map(|x| x.as_f64()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "x0": self.x0.iter().map(|x| x.as_f64()).collect::<Vec<_>>(),
        })
    }
}

/// `f̃(y) = f(A⁺y + x₀)`, the function whose transformed version is `f`.
pub fn transformed_version<T: Scalar>(f: &Polynomial<T>, map: &LinearMap<T>) -> Result<Polynomial<T>> {
    if f.dim() != map.cols() {
        return Err(Error::DimensionMismatch {
            expected: map.cols(),
            found: f.dim(),
        });
    }
    f.substitute_affine(&map.left_inverse()?, &map.x0)
}

/// `(k, f_k^♯)` for one homogeneous degree `k ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SharpPart<T> {
    pub k: usize,
    pub poly: Polynomial<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RepKind<T> {
    Direct { g: Polynomial<T>, law: RadialLaw<T> },
    Sharpened { parts: Vec<SharpPart<T>>, sigma2: T },
}

#[derive(Clone, Debug)]
struct WeightTerm<T> {
    k: usize,
    poly: CompiledPoly<T>,
}

/// An immutable ReLU integral representation.
#[derive(Clone, Debug)]
pub struct ReluIntegralRep<T> {
    dim: usize,
    a: T,
    kind: RepKind<T>,
    transform: Option<LinearMap<T>>,
    atom: Option<CompiledPoly<T>>,
    continuum: Vec<WeightTerm<T>>,
    max_abs_coeff: T,
}

/// Direct representation from `g = T_μ⁻¹ f`.
pub fn build_direct<T: Scalar>(f: &Polynomial<T>, law: &RadialLaw<T>) -> Result<ReluIntegralRep<T>> {
    let g = apply_t_inverse(f, law)?;
    let a = f.coeff(&crate::polycore::MultiIndex::zero(f.dim()));
    let two = T::of(2.0);
    let mut atom = None;
    let mut continuum = Vec::new();
    for comp in g.homogeneous_split() {
        match comp.degree {
            0 => {}
            1 => atom = Some(comp.poly.scale(two).compile()),
            k => continuum.push(WeightTerm {
                k,
                poly: comp.poly.scale(two * T::of_usize(k * (k - 1))).compile(),
            }),
        }
    }
    Ok(ReluIntegralRep {
        dim: f.dim(),
        a,
        max_abs_coeff: g.max_abs_coeff(),
        kind: RepKind::Direct { g, law: *law },
        transform: None,
        atom,
        continuum,
    })
}

/// Sharpened representation over `μ = N(0, σ²I)`.
pub fn build_sharpened<T: Scalar>(f: &Polynomial<T>, sigma2: T) -> Result<ReluIntegralRep<T>> {
    if !(sigma2 > T::zero() && sigma2.is_finite()) {
        return Err(invalid("sigma2 must be positive and finite"));
    }
    let a = f.coeff(&crate::polycore::MultiIndex::zero(f.dim()));
    let two = T::of(2.0);
    let mut parts = Vec::new();
    let mut atom = None;
    let mut continuum = Vec::new();
    let mut max_abs = T::zero();
    for comp in f.homogeneous_split() {
        if comp.degree == 0 {
            continue;
        }
        let sharp = sharpen(&comp.poly, sigma2)?;
        max_abs = max_abs.max(sharp.max_abs_coeff());
        if comp.degree == 1 {
            atom = Some(sharp.scale(two / sigma2).compile());
        } else {
            let k = comp.degree;
            let inv = (-T::of_usize(k) * sigma2.ln()).exp();
            continuum.push(WeightTerm {
                k,
                poly: sharp.scale(two * inv).compile(),
            });
        }
        parts.push(SharpPart {
            k: comp.degree,
            poly: sharp,
        });
    }
    Ok(ReluIntegralRep {
        dim: f.dim(),
        a,
        kind: RepKind::Sharpened { parts, sigma2 },
        transform: None,
        atom,
        continuum,
        max_abs_coeff: max_abs,
    })
}

/// Attaches `(A, x₀)` to a representation of `f̃`, giving one of
/// `f(x) = f̃(A(x − x₀))`.
pub fn apply_linear_transform<T: Scalar>(
    rep: &ReluIntegralRep<T>,
    map: &LinearMap<T>,
) -> Result<ReluIntegralRep<T>> {
    if rep.transform.is_some() {
        return Err(invalid("representation already carries a transform"));
    }
    if map.rows() != rep.dim {
        return Err(Error::DimensionMismatch {
            expected: rep.dim,
            found: map.rows(),
        });
    }
    map.check_rank()?;
    let mut out = rep.clone();
    out.transform = Some(map.clone());
    Ok(out)
}

impl<T: Scalar> ReluIntegralRep<T> {
    /// Dimension of the direction variable `v`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the network input `x`.
    pub fn input_dim(&self) -> usize {
        self.transform.as_ref().map_or(self.dim, |m| m.cols())
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn kind(&self) -> &RepKind<T> {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            RepKind::Direct { .. } => "direct",
            RepKind::Sharpened { .. } => "sharpened",
        }
    }

    pub fn transform(&self) -> Option<&LinearMap<T>> {
        self.transform.as_ref()
    }

    /// The direction law `μ` of `ν`.
    pub fn direction_law(&self) -> RadialLaw<T> {
        match &self.kind {
            RepKind::Direct { law, .. } => *law,
            RepKind::Sharpened { sigma2, .. } => RadialLaw {
                kind: RadialKind::Gaussian { sigma2: *sigma2 },
                dim: self.dim,
            },
        }
    }

    /// Whether `u(·, 0)` is not identically zero.
    pub fn has_atom(&self) -> bool {
        self.atom.as_ref().is_some_and(|p| !p.is_zero())
    }

    /// Whether `u(·, s)` for `s > 0` is not identically zero.
    pub fn has_continuum(&self) -> bool {
        self.continuum.iter().any(|t| !t.poly.is_zero())
    }

    /// Highest degree present in `u`, plus one for the atom.
    pub fn max_degree(&self) -> usize {
        self.continuum
            .iter()
            .map(|t| t.k)
            .max()
            .unwrap_or(if self.has_atom() { 1 } else { 0 })
    }

    /// `u(v, s)`; `s = 0` selects the atom.
    pub fn eval_u(&self, v: &[T], s: T) -> Result<T> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        if !(s >= T::zero()) {
            return Err(invalid("bias parameter s must be non-negative"));
        }
        Ok(self.eval_u_with(v, s, &mut Vec::new()))
    }

    pub(crate) fn eval_u_with(&self, v: &[T], s: T, scratch: &mut Vec<T>) -> T {
        if s == T::zero() {
            return self
                .atom
                .as_ref()
                .map_or(T::zero(), |p| p.eval_with(v, scratch));
        }
        let ln_s = s.ln();
        let mut total = T::zero();
        for term in &self.continuum {
            let j = term.k - 2;
            let factor = match self.kind {
                RepKind::Direct { .. } => s.powi(j as i32),
                RepKind::Sharpened { .. } => {
                    if j == 0 {
                        T::one()
                    } else {
                        (T::of_usize(j) * ln_s - T::of_usize(j + 1).ln_gamma()).exp()
                    }
                }
            };
            total += factor * term.poly.eval_with(v, scratch);
        }
        total
    }

    /// Neuron `(u, direction, bias)` for parameter `(v, s)`.
    pub fn neuron(&self, v: &[T], s: T) -> Result<(T, Vec<T>, T)> {
        let u = self.eval_u(v, s)?;
        let (w, b) = self.direction_and_bias(v, s);
        Ok((u, w, b))
    }

    pub(crate) fn direction_and_bias(&self, v: &[T], s: T) -> (Vec<T>, T) {
        match &self.transform {
            None => (v.to_vec(), -s),
            Some(m) => {
                let w = m.transpose_apply(v);
                let shift: T = w.iter().zip(&m.x0).map(|(&wi, &ci)| wi * ci).sum();
                (w, -shift - s)
            }
        }
    }

    /// Largest coefficient magnitude among the stored polynomials.
    pub fn max_abs_coeff(&self) -> T {
        self.max_abs_coeff
    }

    /// JSON metadata: kind, `σ²` or law, transform, polynomial parts.
    pub fn to_json(&self) -> Value {
        let mut obj = match &self.kind {
            RepKind::Direct { g, law } => json!({
                "kind": "direct",
                "law": law_json(law),
                "g": PolyJson::from_poly(g),
            }),
            RepKind::Sharpened { parts, sigma2 } => json!({
                "kind": "sharpened",
                "sigma2": sigma2.as_f64(),
                "parts": parts.iter().map(|p| json!({"k": p.k, "poly": PolyJson::from_poly(&p.poly)})).collect::<Vec<_>>(),
            }),
        };
        obj["dim"] = json!(self.dim);
        obj["a"] = json!(self.a.as_f64());
        obj["transform"] = self.transform.as_ref().map_or(Value::Null, |m| m.to_json());
        obj
    }
}

pub(crate) fn law_json<T: Scalar>(law: &RadialLaw<T>) -> Value {
    match law.kind {
        RadialKind::Gaussian { sigma2 } => json!({"kind": "gaussian", "dim": law.dim, "sigma2": sigma2.as_f64()}),
        RadialKind::UnitSphere => json!({"kind": "sphere", "dim": law.dim}),
        RadialKind::Rademacher => json!({"kind": "rademacher", "dim": law.dim}),
    }
}

/// Rescales a neuron so its direction has unit length.
///
/// `u ς(⟨x,v⟩ + b) = ‖v‖u · ς(⟨x, v/‖v‖⟩ + b/‖v‖)`.
pub fn normalize_directions<T: Scalar>(u: T, v: &[T], b: T) -> Result<(T, Vec<T>, T)> {
    let n = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    if !(n > T::zero()) {
        return Err(Error::Degenerate("zero direction vector".into()));
    }
    Ok((u * n, v.iter().map(|&x| x / n).collect(), b / n))
}

/// Monte Carlo estimate of the represented function at one point.
pub fn mc_eval_rep(rep: &ReluIntegralRep<f64>, x: &[f64], n_samples: usize, seed: u64) -> Result<(f64, f64)> {
    Ok(mc_eval_rep_many(rep, &[x.to_vec()], n_samples, seed)?[0])
}

/// Monte Carlo estimates `(value, standard error)` at several points from a
/// single set of draws.
///
/// Directions follow `μ`. The atom is chosen with probability ½ when both
/// parts are present. Given `v`, `s` is half-normal with scale `L‖v‖` where
/// `L = ‖A(x − x₀)‖`. The integrand vanishes for `s > L‖v‖`, so the
/// importance weights stay below `e^{1/2}·L‖v‖·√(π/2)`.
pub fn mc_eval_rep_many(
    rep: &ReluIntegralRep<f64>,
    xs: &[Vec<f64>],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if n_samples < 100 {
        return Err(invalid("at least 100 samples are required"));
    }
    let mut ys = Vec::with_capacity(xs.len());
    for x in xs {
        if x.len() != rep.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: rep.input_dim(),
                found: x.len(),
            });
        }
        ys.push(match &rep.transform {
            None => x.clone(),
            Some(m) => m.apply_centered(x),
        });
    }
    let lengths: Vec<f64> = ys.iter().map(|y| rng::norm(y)).collect();
    let (has_atom, has_cont) = (rep.has_atom(), rep.has_continuum());
    if !has_atom && !has_cont {
        return Ok(vec![(rep.a, 0.0); xs.len()]);
    }
    let w0 = match (has_atom, has_cont) {
        (true, true) => 0.5,
        (true, false) => 1.0,
        _ => 0.0,
    };
    let law = rep.direction_law();
    let npts = xs.len();
    let partials: Vec<Vec<(f64, f64)>> = rng::chunks(n_samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(c, start, end)| {
            let mut r = rng::stream(seed, Purpose::Evaluation, c);
            let mut acc = vec![(0.0, 0.0); npts];
            let mut scratch = Vec::new();
            for _ in start..end {
                let v = sample_direction(&law, &mut r);
                let vn = rng::norm(&v);
                let atom = r.random::<f64>() < w0;
                let z = rng::normal(&mut r).abs();
                let u_atom = if atom { rep.eval_u_with(&v, 0.0, &mut scratch) } else { 0.0 };
                for p in 0..npts {
                    let t = rng::dot(&ys[p], &v);
                    let val = if atom {
                        u_atom * t.max(0.0) / w0
                    } else {
                        let scale = lengths[p] * vn;
                        let s = z * scale;
                        if scale > 0.0 && t > s {
                            let inv_density = scale * (std::f64::consts::PI / 2.0).sqrt() * (0.5 * z * z).exp();
                            rep.eval_u_with(&v, s, &mut scratch) * (t - s) * inv_density / (1.0 - w0)
                        } else {
                            0.0
                        }
                    };
                    acc[p].0 += val;
                    acc[p].1 += val * val;
                }
            }
            acc
        })
        .collect();
    let n = n_samples as f64;
    Ok((0..npts)
        .map(|p| {
            let (s1, s2) = partials
                .iter()
                .fold((0.0, 0.0), |(a, b), ch| (a + ch[p].0, b + ch[p].1));
            let mean = s1 / n;
            let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
            (rep.a + mean, (var / n).sqrt())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Polynomial<f64>;

    fn x2() -> P {
        P::monomial(vec![2], 1.0)
    }

    #[test]
    fn direct_examples() {
        let g1 = RadialLaw::gaussian(1, 1.0).unwrap();
        let rep = build_direct(&x2(), &g1).unwrap();
        assert!((rep.eval_u(&[1.0], 3.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert!((rep.eval_u(&[2.0], 0.5).unwrap() - 16.0 / 3.0).abs() < 1e-14);
        // g = x², so g_v″(s) = 2v² and u = 4v².
        let rad = build_direct(&x2(), &RadialLaw::rademacher()).unwrap();
        assert!((rad.eval_u(&[1.0], 0.7).unwrap() - 4.0).abs() < 1e-14);
        let (est, se) = mc_eval_rep(&rad, &[1.3], 100_000, 5).unwrap();
        assert!((est - 1.69).abs() < 4.0 * se, "{est} ± {se}");
        let c = build_direct(&P::constant(1, 5.0), &g1).unwrap();
        assert_eq!(c.a(), 5.0);
        assert!(!c.has_atom() && !c.has_continuum());
        assert_eq!(c.eval_u(&[1.0], 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sharpened_examples() {
        let rep = build_sharpened(&x2(), 1.0).unwrap();
        assert!((rep.eval_u(&[2.0], 0.5).unwrap() - 6.0).abs() < 1e-14);
        assert_eq!(rep.eval_u(&[1.0], 2.0).unwrap(), 0.0);
        assert_eq!(rep.eval_u(&[-1.0], 0.1).unwrap(), 0.0);
        assert!(rep.eval_u(&[1.0], -0.1).is_err());
        let lin = &P::monomial(vec![1, 0], 3.0) + &P::monomial(vec![0, 1], -1.0);
        let rep = build_sharpened(&lin, 2.0).unwrap();
        assert!((rep.eval_u(&[1.0, 1.0], 0.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(!rep.has_continuum());
        let q = build_sharpened(&P::monomial(vec![4, 0], 1.0), 1.0).unwrap();
        match q.kind() {
            RepKind::Sharpened { parts, .. } => {
                let he4 = &(&P::monomial(vec![4, 0], 1.0) - &P::monomial(vec![2, 0], 6.0)) + &P::constant(2, 3.0);
                assert_eq!(parts.len(), 1);
                assert_eq!(parts[0].k, 4);
                assert!(parts[0].poly.max_abs_diff(&he4) < 1e-14);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn sharpened_weight_uses_log_factorials() {
        let f = P::monomial(vec![12], 1.0);
        let rep = build_sharpened(&f, 1.0).unwrap();
        let s: f64 = 50.0;
        let expect = 2.0 * s.powi(10) / 3_628_800.0 * crate::heatlift::sharpen(&f, 1.0).unwrap().evaluate(&[0.3]).unwrap();
        let got = rep.eval_u(&[0.3], s).unwrap();
        assert!(((got - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn normalize_examples() {
        let (u, v, b) = normalize_directions(1.0f64, &[3.0, 4.0], -5.0).unwrap();
        assert!((u - 5.0).abs() < 1e-15 && (b + 1.0).abs() < 1e-15);
        assert!((v[0] - 0.6).abs() < 1e-15 && (v[1] - 0.8).abs() < 1e-15);
        assert_eq!(normalize_directions(2.0, &[1.0, 0.0], 0.5).unwrap(), (2.0, vec![1.0, 0.0], 0.5));
        assert!(normalize_directions(1.0, &[0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn transform_checks() {
        let rep = build_sharpened(&P::norm_sq_power(2, 1), 1.0).unwrap();
        let same = apply_linear_transform(&rep, &LinearMap::identity(2)).unwrap();
        let (w, b) = same.direction_and_bias(&[0.3, -0.2], 0.4);
        assert_eq!((w, b), (vec![0.3, -0.2], -0.4));
        assert!(apply_linear_transform(&rep, &LinearMap::identity(3)).is_err());
        let singular = LinearMap::new(vec![vec![1.0, 1.0], vec![1.0, 1.0]], vec![0.0, 0.0]).unwrap();
        assert!(matches!(apply_linear_transform(&rep, &singular), Err(Error::Degenerate(_))));
        let wide = LinearMap::new(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], vec![0.0; 3]).unwrap();
        assert!(matches!(apply_linear_transform(&rep, &wide), Err(Error::Unsupported(_))));
        assert!(apply_linear_transform(&same, &LinearMap::identity(2)).is_err());
    }

    #[test]
    fn shift_keeps_value_at_base_point() {
        let c = vec![1.0, -2.0];
        let map = LinearMap::shift(c.clone());
        let f = &(&P::monomial(vec![2, 0], 1.0) + &P::monomial(vec![0, 2], 1.0))
            + &(&P::monomial(vec![1, 0], -2.0) + &(&P::monomial(vec![0, 1], 4.0) + &P::constant(2, 5.0)));
        let ft = transformed_version(&f, &map).unwrap();
        assert!(ft.max_abs_diff(&P::norm_sq_power(2, 1)) < 1e-12);
        let rep = apply_linear_transform(&build_sharpened(&ft, 1.0).unwrap(), &map).unwrap();
        assert!(rep.a().abs() < 1e-12);
        assert!((f.evaluate(&c).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn constant_mc_is_exact() {
        let rep = build_sharpened(&P::constant(3, 2.5), 1.0).unwrap();
        assert_eq!(mc_eval_rep(&rep, &[0.1, 0.2, 0.3], 1000, 1).unwrap(), (2.5, 0.0));
    }

    #[test]
    fn mc_sharpened_x2() {
        let rep = build_sharpened(&x2(), 1.0).unwrap();
        let (est, se) = mc_eval_rep(&rep, &[1.5], 200_000, 3).unwrap();
        assert!((est - 2.25).abs() < 4.0 * se, "{est} ± {se}");
    }

    #[test]
    fn json_metadata() {
        let rep = build_sharpened(&x2(), 1.0).unwrap();
        let j = rep.to_json();
        assert_eq!(j["kind"], "sharpened");
        assert_eq!(j["parts"][0]["k"], 2);
        assert!(j["transform"].is_null());
    }
}
