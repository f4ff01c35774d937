//! Sparse multivariate polynomials with real coefficients.
//!
//! A [`Polynomial`] is a map from [`MultiIndex`] to coefficient. The map is
//! kept canonical: no stored coefficient is exactly zero, and every key has
//! the polynomial's dimension. Keys are ordered graded-lexicographically
//! (total degree first, then larger leading exponents first), which fixes the
//! order used for serialization and reporting.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::multi_factorial;

/// Exponent vector `α ∈ ℕ₀^d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// `e_i`, the exponent of the `i`th coordinate function.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn factorial<T: Scalar>(&self) -> T {
        multi_factorial(&self.0)
    }

    /// Componentwise sum `α + β`.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `x^α`.
    pub fn monomial_value<T: Scalar>(&self, x: &[T]) -> T {
        self.0
            .iter()
            .zip(x)
            .fold(T::one(), |acc, (&e, &xi)| acc * xi.powi(e as i32))
    }

    /// All multi-indices of dimension `dim` and total degree `degree`, in
    /// graded-lexicographic order.
    pub fn all_of_degree(dim: usize, degree: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; dim];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        if dim == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(0, degree as u32, &mut cur, &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// A polynomial in `dim` real variables.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<T> {
    dim: usize,
    terms: BTreeMap<MultiIndex, T>,
}

/// A homogeneous piece `f_k` of a polynomial.
#[derive(Clone, PartialEq, Debug)]
pub struct HomogeneousComponent<T> {
    pub degree: usize,
    pub poly: Polynomial<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// The zero polynomial in `dim` variables.
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zero(dim), c);
        p
    }

    /// `c · x^α`.
    pub fn monomial(alpha: impl Into<MultiIndex>, c: T) -> Self {
        let alpha = alpha.into();
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn variable(dim: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, i), T::one())
    }

    /// Builds a polynomial by summing the given terms; repeated indices accumulate.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, T)>,
    {
        let mut p = Self::zero(dim);
        for (alpha, c) in terms {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: alpha.dim(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    /// `‖x‖^{2j}` in `dim` variables.
    pub fn norm_sq_power(dim: usize, j: usize) -> Self {
        let mut r2 = Self::zero(dim);
        for i in 0..dim {
            r2.add_term(
                MultiIndex::new({
                    let mut e = vec![0; dim];
                    e[i] = 2;
                    e
                }),
                T::one(),
            );
        }
        let mut out = Self::constant(dim, T::one());
        for _ in 0..j {
            out = &out * &r2;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> T {
        self.terms.get(alpha).copied().unwrap_or_else(T::zero)
    }

    /// Adds `c x^α`, dropping the entry if the result is exactly zero.
    pub fn add_term(&mut self, alpha: MultiIndex, c: T) {
        debug_assert_eq!(alpha.dim(), self.dim);
        if c == T::zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v == T::zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// The common degree if all terms share one. The zero polynomial is
    /// homogeneous of every degree and reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(MultiIndex::degree);
        match it.next() {
            None => Some(0),
            Some(k) => it.all(|j| j == k).then_some(k),
        }
    }

    pub fn max_abs_coeff(&self) -> T {
        self.terms
            .values()
            .fold(T::zero(), |m, &c| if c.abs() > m { c.abs() } else { m })
    }

    /// Largest coefficient difference `max_α |p_α − q_α|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self - other).max_abs_coeff()
    }

    pub fn scale(&self, c: T) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, &v) in &self.terms {
            out.add_term(a.clone(), v * c);
        }
        out
    }

    /// Value `Σ c_α x^α`.
    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        self.check_len(x.len())?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[T]) -> T {
        self.terms
            .iter()
            .map(|(a, &c)| c * a.monomial_value(x))
            .sum()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            });
        }
        Ok(())
    }

    /// `∂p/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, &c) in &self.terms {
            let e = a.0[i];
            if e == 0 {
                continue;
            }
            let mut b = a.0.clone();
            b[i] -= 1;
            out.add_term(MultiIndex(b), c * T::of(e as f64));
        }
        out
    }

    /// `Δp = Σ_i ∂²p/∂x_i²`.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, &c) in &self.terms {
            for i in 0..self.dim {
                let e = a.0[i];
                if e < 2 {
                    continue;
                }
                let mut b = a.0.clone();
                b[i] -= 2;
                out.add_term(MultiIndex(b), c * T::of((e * (e - 1)) as f64));
            }
        }
        out
    }

    /// The sequence `p, Δp, Δ²p, …` up to and excluding the first zero.
    pub fn laplacian_powers(&self) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let next = cur.laplacian();
            out.push(cur);
            cur = next;
        }
        out
    }

    /// The degree-`k` homogeneous part.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, &c) in self.terms.iter().filter(|(a, _)| a.degree() == k) {
            out.terms.insert(a.clone(), c);
        }
        out
    }

    /// Nonzero homogeneous components, in strictly increasing degree.
    pub fn homogeneous_split(&self) -> Vec<HomogeneousComponent<T>> {
        let mut out: Vec<HomogeneousComponent<T>> = Vec::new();
        for (a, &c) in &self.terms {
            let k = a.degree();
            match out.last_mut() {
                Some(last) if last.degree == k => {
                    last.poly.terms.insert(a.clone(), c);
                }
                _ => {
                    let mut poly = Self::zero(self.dim);
                    poly.terms.insert(a.clone(), c);
                    out.push(HomogeneousComponent { degree: k, poly });
                }
            }
        }
        out
    }

    /// Fischer inner product `⟨p, q⟩_F = Σ_α p_α q_α α!`.
    pub fn fischer_inner(&self, other: &Self) -> Result<T> {
        self.check_len(other.dim)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(a, &c)| other.terms.get(a).map(|&d| c * d * a.factorial::<T>()))
            .sum())
    }

    /// `‖p‖_F = (Σ c_α² α!)^{1/2}` for homogeneous `p`.
    pub fn fischer_norm(&self) -> Result<T> {
        if self.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.fischer_inner(self)?.sqrt())
    }

    /// Coefficients of `t ↦ p(t v)`: `a_k` is the degree-`k` part evaluated at `v`.
    pub fn directional_profile(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_len(v.len())?;
        let m = match self.degree() {
            None => return Ok(Vec::new()),
            Some(m) => m,
        };
        let mut a = vec![T::zero(); m + 1];
        for (alpha, &c) in &self.terms {
            a[alpha.degree()] += c * alpha.monomial_value(v);
        }
        Ok(a)
    }

    /// `Σ (∂^α φ(0) / α!) x^α` from a table of derivatives at zero.
    pub fn taylor_truncate(
        dim: usize,
        derivs: &BTreeMap<MultiIndex, T>,
        max_degree: usize,
    ) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (alpha, &d) in derivs {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: alpha.dim(),
                });
            }
            if alpha.degree() > max_degree {
                return Err(Error::DegreeTooLarge {
                    degree: alpha.degree(),
                    limit: max_degree,
                });
            }
            p.add_term(alpha.clone(), d / alpha.factorial::<T>());
        }
        Ok(p)
    }

    /// The same polynomial viewed in `dim + extra` variables (new ones last).
    pub fn embed(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.dim + extra);
        for (a, &c) in &self.terms {
            let mut e = a.0.clone();
            e.extend(std::iter::repeat_n(0, extra));
            out.terms.insert(MultiIndex(e), c);
        }
        out
    }

    /// `p(x_1, …, x_{d−1}, 0)` as a polynomial in `d − 1` variables.
    pub fn restrict_last_to_zero(&self) -> Result<Self> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter(
                "cannot drop a variable from a 0-dimensional polynomial".into(),
            ));
        }
        let mut out = Self::zero(self.dim - 1);
        for (a, &c) in &self.terms {
            if a.0[self.dim - 1] == 0 {
                out.terms.insert(MultiIndex(a.0[..self.dim - 1].to_vec()), c);
            }
        }
        Ok(out)
    }

    /// `q(y) = p(M y + c)` where `M` is `dim × m`, given row-major.
    pub fn substitute_affine(&self, m: &[Vec<T>], c: &[T]) -> Result<Self> {
        self.check_len(m.len())?;
        self.check_len(c.len())?;
        let new_dim = m.first().map_or(0, Vec::len);
        if m.iter().any(|row| row.len() != new_dim) {
            return Err(Error::InvalidParameter("ragged substitution matrix".into()));
        }
        let lin: Vec<Polynomial<T>> = (0..self.dim)
            .map(|i| {
                let mut l = Self::constant(new_dim, c[i]);
                for (j, &mij) in m[i].iter().enumerate() {
                    l.add_term(MultiIndex::unit(new_dim, j), mij);
                }
                l
            })
            .collect();
        let mut powers: Vec<Vec<Polynomial<T>>> = lin
            .iter()
            .map(|l| vec![Self::constant(new_dim, T::one()), l.clone()])
            .collect();
        let mut out = Self::zero(new_dim);
        for (a, &coef) in &self.terms {
            let mut term = Self::constant(new_dim, coef);
            for (i, &e) in a.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &lin[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Drops coefficients with `|c| <= tol`.
    pub fn chop(&self, tol: T) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, &c) in self.terms.iter().filter(|(_, c)| c.abs() > tol) {
            out.terms.insert(a.clone(), c);
        }
        out
    }

    /// Converts coefficients to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Polynomial<U> {
        let mut out = Polynomial::<U>::zero(self.dim);
        for (a, &c) in &self.terms {
            out.add_term(a.clone(), U::of(c.as_f64()));
        }
        out
    }

    /// Flattened form for repeated evaluation.
    pub fn compile(&self) -> CompiledPoly<T> {
        CompiledPoly::new(self)
    }
}

/// Flattened polynomial for hot evaluation loops.
///
/// Powers of each coordinate are tabulated once per call.
#[derive(Clone, Debug)]
pub struct CompiledPoly<T> {
    dim: usize,
    max_exp: Vec<usize>,
    exps: Vec<u32>,
    coeffs: Vec<T>,
}

impl<T: Scalar> CompiledPoly<T> {
    fn new(p: &Polynomial<T>) -> Self {
        let dim = p.dim;
        let mut max_exp = vec![0usize; dim];
        let mut exps = Vec::with_capacity(p.len() * dim);
        let mut coeffs = Vec::with_capacity(p.len());
        for (a, &c) in &p.terms {
            for (i, &e) in a.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e as usize);
            }
            exps.extend_from_slice(&a.0);
            coeffs.push(c);
        }
        CompiledPoly {
            dim,
            max_exp,
            exps,
            coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluates at `x`; `scratch` is reused across calls to avoid allocation.
    pub fn eval_with(&self, x: &[T], scratch: &mut Vec<T>) -> T {
        debug_assert_eq!(x.len(), self.dim);
        if self.coeffs.is_empty() {
            return T::zero();
        }
        if self.dim == 0 {
            return self.coeffs[0];
        }
        let stride: usize = self.max_exp.iter().max().copied().unwrap_or(0) + 1;
        scratch.clear();
        scratch.resize(stride * self.dim, T::zero());
        for i in 0..self.dim {
            let row = &mut scratch[i * stride..(i + 1) * stride];
            row[0] = T::one();
            for e in 1..=self.max_exp[i] {
                row[e] = row[e - 1] * x[i];
            }
        }
        let mut total = T::zero();
        for (t, &c) in self.coeffs.iter().enumerate() {
            let ex = &self.exps[t * self.dim..(t + 1) * self.dim];
            let mut m = c;
            for (i, &e) in ex.iter().enumerate() {
                if e > 0 {
                    m *= scratch[i * stride + e as usize];
                }
            }
            total += m;
        }
        total
    }

    pub fn eval(&self, x: &[T]) -> T {
        let mut scratch = Vec::new();
        self.eval_with(x, &mut scratch)
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.dim, rhs.dim, "adding polynomials of different dimension");
        let mut out = self.clone();
        for (a, &c) in &rhs.terms {
            out.add_term(a.clone(), c);
        }
        out
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.dim, rhs.dim, "subtracting polynomials of different dimension");
        let mut out = self.clone();
        for (a, &c) in &rhs.terms {
            out.add_term(a.clone(), -c);
        }
        out
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.dim, rhs.dim, "multiplying polynomials of different dimension");
        let mut out = Polynomial::zero(self.dim);
        for (a, &c) in &self.terms {
            for (b, &d) in &rhs.terms {
                out.add_term(a.plus(b), c * d);
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (a, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &e) in a.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Polynomial<f64>;

    fn mono(e: &[u32], c: f64) -> P {
        P::monomial(e.to_vec(), c)
    }

    fn sum(ps: &[P]) -> P {
        ps.iter().skip(1).fold(ps[0].clone(), |acc, p| &acc + p)
    }

    #[test]
    fn evaluate_examples() {
        let p = sum(&[mono(&[2, 0], 1.0), mono(&[0, 2], 1.0)]);
        assert_eq!(p.evaluate(&[1.0, 2.0]).unwrap(), 5.0);
        assert_eq!(P::zero(3).evaluate(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(mono(&[1, 1, 1], 1.0).evaluate(&[2.0, 3.0, 4.0]).unwrap(), 24.0);
    }

    #[test]
    fn evaluate_rejects_wrong_length() {
        let p = mono(&[1, 0], 1.0);
        assert!(matches!(
            p.evaluate(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn laplacian_examples() {
        let p = sum(&[mono(&[2, 0], 1.0), mono(&[0, 2], 1.0)]);
        assert_eq!(p.laplacian(), P::constant(2, 4.0));
        assert!(mono(&[1, 1], 1.0).laplacian().is_zero());
        assert_eq!(mono(&[4], 1.0).laplacian(), mono(&[2], 12.0));
    }

    #[test]
    fn homogeneous_split_examples() {
        let p = sum(&[mono(&[0, 0], 1.0), mono(&[1, 0], 1.0), mono(&[1, 1], 1.0)]);
        let parts = p.homogeneous_split();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].degree, 0);
        assert_eq!(parts[0].poly, P::constant(2, 1.0));
        assert_eq!(parts[1].poly, mono(&[1, 0], 1.0));
        assert_eq!(parts[2].poly, mono(&[1, 1], 1.0));
        assert_eq!(mono(&[2], 1.0).homogeneous_split().len(), 1);
        assert!(P::zero(2).homogeneous_split().is_empty());
    }

    #[test]
    fn fischer_norm_examples() {
        assert!((mono(&[2, 0], 1.0).fischer_norm().unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(mono(&[1, 1, 1], 1.0).fischer_norm().unwrap(), 1.0);
        let p = &mono(&[2, 0], 3.0) - &mono(&[0, 2], 3.0);
        assert!((p.fischer_norm().unwrap() - 6.0).abs() < 1e-14);
        assert_eq!(P::zero(2).fischer_norm().unwrap(), 0.0);
        let mixed = &mono(&[2, 0], 1.0) + &mono(&[1, 0], 1.0);
        assert!(matches!(mixed.fischer_norm(), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn directional_profile_examples() {
        assert_eq!(mono(&[2], 1.0).directional_profile(&[2.0]).unwrap(), vec![0.0, 0.0, 4.0]);
        let p = &P::constant(1, 1.0) + &mono(&[1], 1.0);
        assert_eq!(p.directional_profile(&[3.0]).unwrap(), vec![1.0, 3.0]);
        let r2 = P::norm_sq_power(3, 1);
        assert_eq!(
            r2.directional_profile(&[1.0, 1.0, 1.0]).unwrap(),
            vec![0.0, 0.0, 3.0]
        );
        assert!(r2.directional_profile(&[1.0]).is_err());
    }

    #[test]
    fn taylor_truncate_examples() {
        let mut d = BTreeMap::new();
        d.insert(MultiIndex::new(vec![2, 0]), 2.0);
        assert_eq!(P::taylor_truncate(2, &d, 2).unwrap(), mono(&[2, 0], 1.0));
        assert!(P::taylor_truncate(2, &BTreeMap::new(), 2).unwrap().is_zero());
        let mut d = BTreeMap::new();
        d.insert(MultiIndex::new(vec![1, 1]), 1.0);
        assert_eq!(P::taylor_truncate(2, &d, 2).unwrap(), mono(&[1, 1], 1.0));
        let mut d = BTreeMap::new();
        d.insert(MultiIndex::new(vec![3, 0]), 1.0);
        assert!(matches!(
            P::taylor_truncate(2, &d, 2),
            Err(Error::DegreeTooLarge { degree: 3, limit: 2 })
        ));
    }

    #[test]
    fn canonical_form_drops_cancellations() {
        let p = &mono(&[1, 0], 2.0) - &mono(&[1, 0], 2.0);
        assert!(p.is_zero());
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn graded_lex_order() {
        let p = sum(&[
            mono(&[0, 2], 1.0),
            mono(&[1, 0], 1.0),
            mono(&[2, 0], 1.0),
            mono(&[1, 1], 1.0),
            mono(&[0, 0], 1.0),
        ]);
        let keys: Vec<Vec<u32>> = p.terms().map(|(a, _)| a.exponents().to_vec()).collect();
        assert_eq!(keys, vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn substitution_shifts() {
        // x² at z + 3 is z² + 6z + 9
        let p = mono(&[2], 1.0);
        let q = p.substitute_affine(&[vec![1.0]], &[3.0]).unwrap();
        let expect = sum(&[mono(&[2], 1.0), mono(&[1], 6.0), P::constant(1, 9.0)]);
        assert!(q.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn compiled_matches_direct() {
        let p = sum(&[mono(&[3, 1], 2.0), mono(&[0, 2], -1.5), P::constant(2, 0.25)]);
        let c = p.compile();
        let x = [0.7, -1.3];
        assert!((c.eval(&x) - p.evaluate(&x).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let p = Polynomial::<f32>::monomial(vec![2, 1], 1.5);
        assert_eq!(p.evaluate(&[2.0, 3.0]).unwrap(), 18.0);
        assert_eq!(p.laplacian(), Polynomial::<f32>::monomial(vec![0, 1], 3.0));
    }
}
