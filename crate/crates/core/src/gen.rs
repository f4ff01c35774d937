//! Seeded random polynomials for tests, benchmarks and verification suites.

use rand::Rng;

use crate::polycore::{MultiIndex, Polynomial};
use crate::rng::{stream, Purpose};

/// Dense random polynomial of total degree at most `degree`.
///
/// Each monomial is kept with probability `density` and gets a coefficient
/// uniform on `[−1, 1]`. The top-degree component is never empty.
pub fn random_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    degree: usize,
    density: f64,
) -> Polynomial<f64> {
    let mut p = Polynomial::zero(dim);
    for m in 0..=degree {
        let block = MultiIndex::all_of_degree(dim, m);
        let mut any = false;
        for alpha in &block {
            if rng.random::<f64>() < density {
                p.add_term(alpha.clone(), rng.random_range(-1.0..=1.0));
                any = true;
            }
        }
        if m == degree && !any {
            let pick = rng.random_range(0..block.len());
            p.add_term(block[pick].clone(), rng.random_range(0.5..=1.0));
        }
    }
    p
}

/// Random homogeneous polynomial of degree `k` (all monomials present).
pub fn random_homogeneous<R: Rng + ?Sized>(rng: &mut R, dim: usize, k: usize) -> Polynomial<f64> {
    let mut p = Polynomial::zero(dim);
    for alpha in MultiIndex::all_of_degree(dim, k) {
        p.add_term(alpha, rng.random_range(-1.0..=1.0));
    }
    p
}

/// The `index`-th member of a reproducible family drawn from `seed`.
pub fn seeded_polynomial(seed: u64, index: u64, dim: usize, degree: usize) -> Polynomial<f64> {
    let mut rng = stream(seed, Purpose::Generator, index);
    random_polynomial(&mut rng, dim, degree, 0.6)
}
