//! JSON formats for polynomials and harmonic decompositions.
//!
//! A polynomial file looks like
//!
//! ```json
//! {"dim": 2, "terms": [{"alpha": [2, 0], "coeff": 1.0}, {"alpha": [0, 0], "coeff": -1.0}]}
//! ```
//!
//! Exponents must be non-negative integers and each `alpha` may appear once.
//! Parse failures report the line and column of the offending token.

use std::collections::HashSet;
use std::path::Path;

use serde::de::{Deserializer, Error as _};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::polycore::{MultiIndex, Polynomial};
use crate::scalar::Scalar;
use crate::spectral::HarmonicDecomposition;

/// Version written into every JSON and CSV artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub coeff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub dim: usize,
    #[serde(deserialize_with = "distinct_terms")]
    pub terms: Vec<TermJson>,
}

fn distinct_terms<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<TermJson>, D::Error> {
    let terms = Vec::<TermJson>::deserialize(de)?;
    let mut seen = HashSet::new();
    for t in &terms {
        if !seen.insert(t.alpha.clone()) {
            return Err(D::Error::custom(format!("duplicate exponent vector {:?}", t.alpha)));
        }
        if !t.coeff.is_finite() {
            return Err(D::Error::custom("coefficients must be finite"));
        }
    }
    Ok(terms)
}

impl PolyJson {
    pub fn from_poly<T: Scalar>(p: &Polynomial<T>) -> Self {
        PolyJson {
            dim: p.dim(),
            terms: p
                .terms()
                .map(|(a, c)| TermJson {
                    alpha: a.exponents().to_vec(),
                    coeff: c.as_f64(),
                })
                .collect(),
        }
    }

    pub fn to_poly<T: Scalar>(&self) -> Result<Polynomial<T>> {
        Polynomial::from_terms(
            self.dim,
            self.terms
                .iter()
                .map(|t| (MultiIndex::new(t.alpha.clone()), T::of(t.coeff))),
        )
    }
}

pub fn parse_polynomial<T: Scalar>(text: &str) -> Result<Polynomial<T>> {
    let pj: PolyJson = serde_json::from_str(text)?;
    pj.to_poly()
}

pub fn read_polynomial<T: Scalar>(path: impl AsRef<Path>) -> Result<Polynomial<T>> {
    parse_polynomial(&std::fs::read_to_string(path)?)
}

pub fn polynomial_to_json<T: Scalar>(p: &Polynomial<T>) -> String {
    serde_json::to_string_pretty(&PolyJson::from_poly(p)).expect("polynomial serializes")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartJson {
    pub i: usize,
    pub j: usize,
    pub h: PolyJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub schema_version: u32,
    pub dim: usize,
    pub parts: Vec<PartJson>,
}

pub fn decomposition_to_json<T: Scalar>(dec: &HarmonicDecomposition<T>) -> DecompositionJson {
    DecompositionJson {
        schema_version: SCHEMA_VERSION,
        dim: dec.dim,
        parts: dec
            .parts
            .iter()
            .map(|p| PartJson {
                i: p.i,
                j: p.j,
                h: PolyJson::from_poly(&p.h),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn round_trip() {
        let p = &Polynomial::<f64>::monomial(vec![2, 1], 1.5) + &Polynomial::constant(2, -3.0);
        let back: Polynomial<f64> = parse_polynomial(&polynomial_to_json(&p)).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn negative_exponent_is_located() {
        let text = "{\"dim\": 1,\n \"terms\": [{\"alpha\": [-1], \"coeff\": 1.0}]}";
        match parse_polynomial::<f64>(text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column > 0), (2, true)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicates_are_rejected() {
        let text = r#"{"dim": 1, "terms": [{"alpha": [1], "coeff": 1.0}, {"alpha": [1], "coeff": 2.0}]}"#;
        assert!(matches!(parse_polynomial::<f64>(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn wrong_length_alpha() {
        let text = r#"{"dim": 2, "terms": [{"alpha": [1], "coeff": 1.0}]}"#;
        assert!(parse_polynomial::<f64>(text).is_err());
    }
}
