//! Closed-form error bounds for sampled networks and their comparison with
//! observed errors.
//!
//! For sub-Gaussian `D` with proxy `σ_X²` some `n`-neuron network satisfies
//! `‖f_n − f‖ ≤ n^{−1/2} ((Σ_k C_{d,k}‖f_k‖_F)² − ‖f − a‖²)^{1/2}`, where
//! `f_k` are the homogeneous components and
//!
//! * `C_{d,1} = 2^{3/2} σ_X √d`,
//! * `C_{d,k} = 2^{(3k−1)/2} σ_X^k Γ((k−1)/2)/(k−2)! · (Γ(k+d/2)/Γ(d/2))^{1/2}`
//!   for `k ≥ 2`, which is at most `σ_X^k √(2k) (2e(d+k−1)/k)^{k/2}`.

use std::io::Write;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::heatlift::gaussian_l2_norm;
use crate::io::SCHEMA_VERSION;
use crate::polycore::{MultiIndex, Polynomial};
use crate::repr::ReluIntegralRep;
use crate::rng::{self, Purpose};
use crate::sampler::{l2_error, InputKind, InputLaw, SamplerConfig};
use crate::special::ln_factorial;

/// Largest degree for which the constants are evaluated.
pub const MAX_DEGREE: usize = 64;

/// Draws used for `‖f − a‖` when `D` is not Gaussian.
pub const L2_MC_DRAWS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cdk {
    pub exact: f64,
    pub simplified: f64,
}

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `C_{d,k}` and its simplified upper bound.
pub fn c_dk(d: usize, k: usize, sigma_x2: f64) -> Result<Cdk> {
    if k == 0 {
        return Err(invalid("k must be at least 1; the constant term needs no constant"));
    }
    if k > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree: k, limit: MAX_DEGREE });
    }
    if d == 0 || !(sigma_x2 > 0.0 && sigma_x2.is_finite()) {
        return Err(invalid("need d >= 1 and a positive proxy"));
    }
    let sx = sigma_x2.sqrt();
    let (kf, df) = (k as f64, d as f64);
    let exact = if k == 1 {
        2f64.powf(1.5) * sx * df.sqrt()
    } else {
        let ln = 0.5 * (3.0 * kf - 1.0) * std::f64::consts::LN_2 + kf * sx.ln() + ln_gamma(0.5 * (kf - 1.0))
            - ln_factorial::<f64>(k - 2)
            + 0.5 * (ln_gamma(kf + 0.5 * df) - ln_gamma(0.5 * df));
        ln.exp()
    };
    let simplified = (kf * sx.ln() + 0.5 * (2.0 * kf).ln()
        + 0.5 * kf * (2.0 * std::f64::consts::E * (df + kf - 1.0) / kf).ln())
    .exp();
    Ok(Cdk { exact, simplified })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundTerm {
    pub k: usize,
    pub c_dk: f64,
    pub c_dk_simplified: f64,
    pub fischer_norm: f64,
    pub term: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub d: usize,
    pub sigma_x2: f64,
    pub n: usize,
    pub terms: Vec<BoundTerm>,
    /// `Σ_k C_{d,k}‖f_k‖_F`.
    pub total: f64,
    /// `((Σ…)² − ‖f − a‖²)^{1/2}` when `‖f − a‖` was supplied and consistent.
    pub refined_total: Option<f64>,
    /// Set when the supplied `‖f − a‖` exceeds the total.
    pub refined_suppressed: bool,
    pub bound_loose: f64,
    pub bound_refined: Option<f64>,
}

impl BoundReport {
    pub fn k_max(&self) -> usize {
        self.terms.iter().map(|t| t.k).max().unwrap_or(0)
    }

    /// The tightest available bound.
    pub fn best(&self) -> f64 {
        self.bound_refined.unwrap_or(self.bound_loose)
    }
}

/// Bound from per-degree Fischer norms `(k, ‖f_k‖_F)`.
pub fn theorem_bound_from_norms(
    d: usize,
    sigma_x2: f64,
    norms: &[(usize, f64)],
    n: usize,
    l2_f_minus_a: Option<f64>,
) -> Result<BoundReport> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut terms = Vec::new();
    for &(k, fischer_norm) in norms {
        if k == 0 {
            continue;
        }
        let c = c_dk(d, k, sigma_x2)?;
        terms.push(BoundTerm {
            k,
            c_dk: c.exact,
            c_dk_simplified: c.simplified,
            fischer_norm,
            term: c.exact * fischer_norm,
        });
    }
    let total: f64 = terms.iter().map(|t| t.term).sum();
    let (refined_total, refined_suppressed) = match l2_f_minus_a {
        None => (None, false),
        Some(l2) => {
            let rad = total * total - l2 * l2;
            if rad < 0.0 {
                (None, true)
            } else {
                (Some(rad.sqrt()), false)
            }
        }
    };
    let root_n = (n as f64).sqrt();
    Ok(BoundReport {
        d,
        sigma_x2,
        n,
        terms,
        total,
        refined_total,
        refined_suppressed,
        bound_loose: total / root_n,
        bound_refined: refined_total.map(|r| r / root_n),
    })
}

/// Bound for `f` under `D`, with Fischer norms of the homogeneous split.
pub fn theorem_bound(f: &Polynomial<f64>, law: &InputLaw, n: usize, l2_f_minus_a: Option<f64>) -> Result<BoundReport> {
    if f.dim() != law.dim {
        return Err(Error::DimensionMismatch { expected: law.dim, found: f.dim() });
    }
    let norms = f
        .homogeneous_split()
        .into_iter()
        .map(|c| Ok((c.degree, c.poly.fischer_norm()?)))
        .collect::<Result<Vec<_>>>()?;
    theorem_bound_from_norms(f.dim(), law.proxy(), &norms, n, l2_f_minus_a)
}

/// `‖f − a‖_{L²(D)}`: exact through Hermite coefficients for Gaussian `D`,
/// otherwise a Monte Carlo estimate from [`L2_MC_DRAWS`] draws.
pub fn l2_f_minus_a(f: &Polynomial<f64>, law: &InputLaw, a: f64, seed: u64) -> Result<f64> {
    let centered = f - &Polynomial::constant(f.dim(), a);
    if let InputKind::Gaussian { sigma2 } = law.kind {
        return gaussian_l2_norm(&centered, sigma2);
    }
    let cf = centered.compile();
    let mut r = rng::stream(seed, Purpose::Evaluation, 0);
    let mut scratch = Vec::new();
    let mut ss = 0.0;
    for _ in 0..L2_MC_DRAWS {
        let x = law.draw(&mut r);
        let y = cf.eval_with(&x, &mut scratch);
        ss += y * y;
    }
    Ok((ss / L2_MC_DRAWS as f64).sqrt())
}

/// `‖f_k‖_F = |c_k| √(k!)` for the ridge `f(x) = Σ c_k ⟨w, x⟩^k`, `‖w‖ = 1`.
pub fn ridge_fischer_norms(coeffs: &[f64]) -> Vec<(usize, f64)> {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| (k, c.abs() * (0.5 * ln_factorial::<f64>(k)).exp()))
        .collect()
}

/// `√2 σ_X ‖v‖ exp(−s² / (2σ_X²‖v‖²))`, an upper bound on
/// `‖ς(⟨·, v⟩ − s)‖_{L²(D)}`.
pub fn subgaussian_envelope(sigma_x2: f64, v_norm: f64, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(invalid("s must be non-negative"));
    }
    let delta2 = sigma_x2 * v_norm * v_norm;
    if delta2 == 0.0 {
        return Ok(0.0);
    }
    Ok((2.0 * delta2).sqrt() * (-s * s / (2.0 * delta2)).exp())
}

/// `2^{k−3/2} (σ_X‖v‖)^k Γ((k−1)/2)`, the stated bound on
/// `∫_0^∞ ‖ς(⟨·, v⟩ − s)‖ s^{k−2} ds`.
///
/// This is a factor `2^{(k−1)/2}` above the integral of the envelope itself,
/// see [`envelope_integral`].
pub fn envelope_moment(sigma_x2: f64, v_norm: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(invalid("k must be at least 2"));
    }
    let delta = (sigma_x2).sqrt() * v_norm;
    let kf = k as f64;
    Ok(((kf - 1.5) * std::f64::consts::LN_2 + ln_gamma(0.5 * (kf - 1.0))).exp() * delta.powi(k as i32))
}

/// `∫_0^∞ envelope(s) s^{k−2} ds = 2^{k/2−1} (σ_X‖v‖)^k Γ((k−1)/2)` exactly.
pub fn envelope_integral(sigma_x2: f64, v_norm: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(invalid("k must be at least 2"));
    }
    let delta = (sigma_x2).sqrt() * v_norm;
    let kf = k as f64;
    Ok(((0.5 * kf - 1.0) * std::f64::consts::LN_2 + ln_gamma(0.5 * (kf - 1.0))).exp() * delta.powi(k as i32))
}

/// One CSV row of the bound-versus-observed report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub f_id: String,
    pub d: usize,
    pub k_max: usize,
    #[serde(rename = "sigma_X2")]
    pub sigma_x2: f64,
    pub n: usize,
    pub bound_loose: f64,
    pub bound_refined: Option<f64>,
    /// Empty when no networks were sampled.
    pub err_mean: Option<f64>,
    pub err_min: Option<f64>,
    pub seeds: usize,
    pub schema_version: u32,
}

impl BoundRow {
    /// Whether the smallest observed error respects the tightest bound.
    pub fn holds(&self) -> bool {
        self.err_min.is_none_or(|e| e <= self.bound_refined.unwrap_or(self.bound_loose))
    }

    /// A row carrying only the bound columns.
    pub fn from_report(f_id: &str, report: &BoundReport) -> Self {
        BoundRow {
            f_id: f_id.to_string(),
            d: report.d,
            k_max: report.k_max(),
            sigma_x2: report.sigma_x2,
            n: report.n,
            bound_loose: report.bound_loose,
            bound_refined: report.bound_refined,
            err_mean: None,
            err_min: None,
            seeds: 0,
            schema_version: SCHEMA_VERSION,
        }
    }
}

/// One CSV row of an error sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRow {
    pub f_id: String,
    pub rep_kind: String,
    pub sampler: String,
    pub n: usize,
    pub seed: u64,
    pub err: f64,
    pub se: f64,
    pub schema_version: u32,
}

/// Inputs shared by the sweep functions.
#[derive(Clone, Debug)]
pub struct SweepSpec<'a> {
    pub f_id: &'a str,
    pub f: &'a Polynomial<f64>,
    pub law: &'a InputLaw,
    pub rep: &'a ReluIntegralRep<f64>,
    pub sampler: &'a SamplerConfig,
    /// Evaluation draws per `l2_error` call.
    pub m_eval: usize,
}

/// `l2_error` for every `(n, seed)`, seeds `seed0 .. seed0 + seeds`.
pub fn error_sweep(spec: &SweepSpec, n_grid: &[usize], seed0: u64, seeds: usize) -> Result<Vec<ErrorRow>> {
    let mut rows = Vec::new();
    for &n in n_grid {
        for s in 0..seeds as u64 {
            let seed = seed0 + s;
            let net = spec.sampler.sample(spec.rep, spec.law, n, seed)?;
            let (err, se) = l2_error(&net, spec.f, spec.law, spec.m_eval, seed)?;
            rows.push(ErrorRow {
                f_id: spec.f_id.to_string(),
                rep_kind: spec.rep.kind_name().to_string(),
                sampler: spec.sampler.kind.name().to_string(),
                n,
                seed,
                err,
                se,
                schema_version: SCHEMA_VERSION,
            });
        }
    }
    Ok(rows)
}

/// The bound at each `n` next to the mean and minimum observed error.
///
/// The refined bound uses the representation's own `a` as the centering
/// constant.
pub fn bound_vs_empirical(spec: &SweepSpec, n_grid: &[usize], seed0: u64, seeds: usize) -> Result<Vec<BoundRow>> {
    if seeds == 0 {
        return Err(invalid("at least one seed is required"));
    }
    let errors = error_sweep(spec, n_grid, seed0, seeds)?;
    summarize_errors(spec, &errors, seed0)
}

/// Bound rows for the `n` values present in `errors`, in first-seen order.
pub fn summarize_errors(spec: &SweepSpec, errors: &[ErrorRow], seed0: u64) -> Result<Vec<BoundRow>> {
    let l2 = l2_f_minus_a(spec.f, spec.law, spec.rep.a(), seed0)?;
    let mut grid: Vec<usize> = Vec::new();
    for r in errors {
        if !grid.contains(&r.n) {
            grid.push(r.n);
        }
    }
    grid.into_iter()
        .map(|n| {
            let report = theorem_bound(spec.f, spec.law, n, Some(l2))?;
            let errs: Vec<f64> = errors.iter().filter(|r| r.n == n).map(|r| r.err).collect();
            let mut row = BoundRow::from_report(spec.f_id, &report);
            row.err_mean = Some(errs.iter().sum::<f64>() / errs.len() as f64);
            row.err_min = Some(errs.iter().copied().fold(f64::INFINITY, f64::min));
            row.seeds = errs.len();
            Ok(row)
        })
        .collect()
}

/// Writes serializable rows as CSV with a header line.
pub fn write_csv<S: Serialize, W: Write>(rows: &[S], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `Σ_k c_k ⟨w, x⟩^k` as a polynomial in `w.len()` variables.
pub fn ridge_polynomial(coeffs: &[f64], w: &[f64]) -> Polynomial<f64> {
    let d = w.len();
    let mut lin = Polynomial::zero(d);
    for (i, &wi) in w.iter().enumerate() {
        lin.add_term(MultiIndex::unit(d, i), wi);
    }
    let mut out = Polynomial::zero(d);
    let mut pow = Polynomial::constant(d, 1.0);
    for &c in coeffs {
        out = &out + &pow.scale(c);
        pow = &pow * &lin;
    }
    out
}
