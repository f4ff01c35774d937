//! Verification suites run by the command-line `verify` command.
//!
//! Each check names the public operation it exercises, so a run can emit a
//! coverage manifest next to its verdicts. Monte Carlo checks use 5-sigma
//! acceptance bands, which keeps verdicts stable when the seed changes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::{self, c_dk, envelope_integral, envelope_moment, subgaussian_envelope, theorem_bound};
use crate::error::{invalid, Result};
use crate::funkhecke::{funkhecke_grid, legendre_eval, legendre_inner, sphere_eigencheck};
use crate::gen::{random_homogeneous, seeded_polynomial};
use crate::heatlift::{fischer_l2_identity_check, harmonic_extend, sharpen, sharpen_hermite, smooth};
use crate::polycore::Polynomial;
use crate::repr::{
    apply_linear_transform, build_direct, build_sharpened, mc_eval_rep_many, normalize_directions,
    transformed_version, LinearMap,
};
use crate::rng::{self, Purpose};
use crate::sampler::{
    l2_error, neuron_norm_diagnostics, sample_input, sample_naive_network, sample_optimal_network, InputLaw,
    NeuronProposal, OptimalConfig,
};
use crate::special::ln_factorial;
use crate::spectral::{
    apply_t_exact, apply_t_inverse, eigenvalue, harmonic_decompose, harmonic_decompose_linear_solve, moment,
    sphere_eigenvalue, RadialLaw,
};

pub const SUITES: [&str; 7] = ["polycore", "spectral", "heatlift", "repr", "sampler", "bounds", "funkhecke"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub operations: Vec<String>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    /// Operation name to the checks that exercise it.
    pub coverage: BTreeMap<String, Vec<String>>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Multiplier on Monte Carlo sample counts.
    pub scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 20240601, scale: 1.0 }
    }
}

struct Suite {
    name: &'static str,
    cfg: VerifyConfig,
    out: Vec<CheckResult>,
}

impl Suite {
    fn check(&mut self, name: &str, ops: &[&str], f: impl FnOnce(&VerifyConfig) -> Result<(bool, String)>) {
        let (passed, detail) = match f(&self.cfg) {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        self.out.push(CheckResult {
            suite: self.name.to_string(),
            name: name.to_string(),
            operations: ops.iter().map(|s| s.to_string()).collect(),
            passed,
            detail,
        });
    }
}

fn close(a: &Polynomial<f64>, b: &Polynomial<f64>, tol: f64) -> (bool, f64) {
    let e = a.max_abs_diff(b);
    (e <= tol * (1.0 + a.max_abs_coeff().max(b.max_abs_coeff())), e)
}

fn mono(e: &[u32], c: f64) -> Polynomial<f64> {
    Polynomial::monomial(e.to_vec(), c)
}

/// Runs one named suite.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let static_name = SUITES
        .iter()
        .find(|s| **s == name)
        .ok_or_else(|| invalid(format!("unknown suite {name:?}; expected one of {SUITES:?}")))?;
    let mut s = Suite { name: static_name, cfg: *cfg, out: Vec::new() };
    match name {
        "polycore" => polycore_suite(&mut s),
        "spectral" => spectral_suite(&mut s),
        "heatlift" => heatlift_suite(&mut s),
        "repr" => repr_suite(&mut s),
        "sampler" => sampler_suite(&mut s),
        "bounds" => bounds_suite(&mut s),
        _ => funkhecke_suite(&mut s),
    }
    Ok(s.out)
}

/// Runs the given suites (all when empty) and assembles the report.
pub fn run(suites: &[String], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let names: Vec<String> = if suites.is_empty() {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        suites.to_vec()
    };
    let mut checks = Vec::new();
    for n in &names {
        checks.extend(run_suite(n, cfg)?);
    }
    let mut coverage: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for c in &checks {
        for op in &c.operations {
            coverage.entry(op.clone()).or_default().push(format!("{}::{}", c.suite, c.name));
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { schema_version: crate::io::SCHEMA_VERSION, seed: cfg.seed, checks, coverage, passed })
}

fn polycore_suite(s: &mut Suite) {
    s.check("evaluate_and_laplacian", &["Polynomial::evaluate", "Polynomial::laplacian"], |_| {
        let p = &mono(&[2, 1], 1.0) + &mono(&[0, 0], 3.0);
        let v = p.evaluate(&[2.0, 3.0])?;
        let lap = p.laplacian();
        let (ok, e) = close(&lap, &mono(&[0, 1], 2.0), 0.0);
        Ok((v == 15.0 && ok, format!("p(2,3) = {v}, laplacian error {e:e}")))
    });
    s.check("homogeneous_split_round_trip", &["Polynomial::homogeneous_split"], |c| {
        let mut worst = 0.0f64;
        for i in 0..20 {
            let p = seeded_polynomial(c.seed, i, 1 + (i as usize % 4), 1 + (i as usize % 6));
            let back = p
                .homogeneous_split()
                .into_iter()
                .fold(Polynomial::zero(p.dim()), |acc, h| &acc + &h.poly);
            worst = worst.max(back.max_abs_diff(&p));
        }
        Ok((worst == 0.0, format!("max coefficient error {worst:e}")))
    });
    s.check("fischer_norm_examples", &["Polynomial::fischer_norm", "Polynomial::fischer_inner"], |_| {
        let a = mono(&[2, 0], 1.0).fischer_norm()?;
        let b = mono(&[1, 1], 1.0).fischer_norm()?;
        let mixed = (&mono(&[2], 1.0) + &mono(&[1], 1.0)).fischer_norm().is_err();
        Ok(((a - 2f64.sqrt()).abs() < 1e-15 && b == 1.0 && mixed, format!("{a}, {b}")))
    });
    s.check("directional_profile", &["Polynomial::directional_profile"], |_| {
        let p = &mono(&[2, 0], 1.0) + &mono(&[0, 1], 3.0);
        let prof = p.directional_profile(&[2.0, 1.0])?;
        Ok((prof == vec![0.0, 3.0, 4.0], format!("{prof:?}")))
    });
    s.check("affine_substitution", &["Polynomial::substitute_affine", "Polynomial::compile"], |c| {
        let p = seeded_polynomial(c.seed, 99, 3, 4);
        let id = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let same = p.substitute_affine(&id, &[0.0; 3])?;
        let x = [0.3, -0.7, 1.1];
        let diff = (p.compile().eval(&x) - p.evaluate(&x)?).abs();
        Ok((same.max_abs_diff(&p) < 1e-14 && diff < 1e-12, format!("compiled diff {diff:e}")))
    });
}

fn spectral_suite(s: &mut Suite) {
    s.check("decomposition_reconstructs", &["harmonic_decompose"], |c| {
        let mut worst = 0.0f64;
        let mut harmonic = true;
        for i in 0..15 {
            let p = seeded_polynomial(c.seed, 100 + i, 2 + (i as usize % 4), 1 + (i as usize % 7));
            let dec = harmonic_decompose(&p)?;
            worst = worst.max(dec.reconstruct().max_abs_diff(&p) / (1.0 + p.max_abs_coeff()));
            harmonic &= dec.parts.iter().all(|pt| pt.h.laplacian().max_abs_coeff() < 1e-9);
        }
        Ok((worst < 1e-10 && harmonic, format!("relative error {worst:e}")))
    });
    s.check("least_squares_agrees", &["harmonic_decompose_linear_solve"], |c| {
        let p = seeded_polynomial(c.seed, 150, 3, 4);
        let a = harmonic_decompose(&p)?.reconstruct();
        let b = harmonic_decompose_linear_solve(&p)?.reconstruct();
        let (ok, e) = close(&a, &b, 1e-9);
        Ok((ok, format!("max difference {e:e}")))
    });
    s.check("eigenvalue_factorization", &["eigenvalue", "moment", "sphere_eigenvalue"], |_| {
        let mut worst = 0.0f64;
        for d in 2..=5 {
            let law = RadialLaw::gaussian(d, 1.7)?;
            for k in 0..=4 {
                for i in 0..=2 {
                    let lhs: f64 = eigenvalue(&law, k, i)?;
                    let rhs = moment(&law, k + 2 * i) * sphere_eigenvalue::<f64>(d, k, i);
                    worst = worst.max(((lhs - rhs) / rhs).abs());
                }
            }
        }
        Ok((worst < 1e-12, format!("relative error {worst:e}")))
    });
    s.check("operator_round_trip", &["apply_t_inverse", "apply_t_exact"], |c| {
        let mut worst = 0.0f64;
        for i in 0..12 {
            let d = 1 + (i as usize % 4);
            let p = seeded_polynomial(c.seed, 200 + i, d, 1 + (i as usize % 6));
            let law = RadialLaw::gaussian(d, 0.5 + 0.25 * (i % 3) as f64)?;
            let back = apply_t_exact(&apply_t_inverse(&p, &law)?, &law)?;
            worst = worst.max(back.max_abs_diff(&p) / (1.0 + p.max_abs_coeff()));
        }
        Ok((worst < 1e-9, format!("relative error {worst:e}")))
    });
}

fn heatlift_suite(s: &mut Suite) {
    s.check("extension_invariants", &["harmonic_extend"], |c| {
        let mut ok = true;
        for i in 0..15 {
            let p = seeded_polynomial(c.seed, 300 + i, 1 + (i as usize % 4), 1 + (i as usize % 7));
            let ext = harmonic_extend(&p);
            ok &= ext.extended.laplacian().max_abs_coeff() <= 1e-12 * (1.0 + ext.extended.max_abs_coeff());
            ok &= ext.extended.restrict_last_to_zero()? == p;
            for comp in ext.extended.homogeneous_split() {
                ok &= comp.poly.laplacian().max_abs_coeff() <= 1e-12 * (1.0 + comp.poly.max_abs_coeff());
            }
        }
        Ok((ok, "laplacian of extension and of each component vanish".into()))
    });
    s.check("sharpen_matches_hermite", &["sharpen", "sharpen_hermite"], |c| {
        let mut worst = 0.0f64;
        for i in 0..30 {
            let p = seeded_polynomial(c.seed, 400 + i, 1 + (i as usize % 5), 1 + (i as usize % 8));
            let s2 = [0.25, 1.0, 4.0][i as usize % 3];
            let a = sharpen(&p, s2)?;
            let b = sharpen_hermite(&p, s2)?;
            worst = worst.max(a.max_abs_diff(&b) / (1.0 + a.max_abs_coeff()));
        }
        Ok((worst < 1e-9, format!("relative error {worst:e}")))
    });
    s.check("smooth_inverts_sharpen", &["smooth"], |c| {
        let p = seeded_polynomial(c.seed, 450, 3, 6);
        let back = smooth(&sharpen(&p, 1.5)?, 1.5)?;
        let (ok, e) = close(&back, &p, 1e-11);
        Ok((ok, format!("max difference {e:e}")))
    });
    s.check("fischer_identity", &["fischer_l2_identity_check"], |c| {
        let mut worst = 0.0f64;
        let mut r = rng::stream(c.seed, Purpose::Generator, 460);
        for i in 0..20usize {
            let f = random_homogeneous(&mut r, 1 + i % 4, 1 + i % 6);
            let (l, rh) = fischer_l2_identity_check(&f, [0.5, 1.0, 2.0][i % 3])?;
            worst = worst.max(((l - rh) / rh).abs());
        }
        Ok((worst < 1e-10, format!("relative error {worst:e}")))
    });
}

fn repr_suite(s: &mut Suite) {
    s.check("worked_example", &["build_direct", "build_sharpened", "ReluIntegralRep::eval_u"], |_| {
        let x2 = mono(&[2], 1.0);
        let law = RadialLaw::gaussian(1, 1.0)?;
        let g = apply_t_inverse(&x2, &law)?;
        let sharp = build_sharpened(&x2, 1.0)?;
        let direct = build_direct(&x2, &law)?;
        let ok = g.max_abs_diff(&mono(&[2], 1.0 / 3.0)) < 1e-12
            && (sharp.eval_u(&[2.0], 0.5)? - 6.0).abs() < 1e-12
            && (direct.eval_u(&[1.0], 3.0)? - 4.0 / 3.0).abs() < 1e-12;
        Ok((ok, "x² representations match their closed forms".into()))
    });
    s.check("mc_evaluation", &["mc_eval_rep"], |c| {
        let p = seeded_polynomial(c.seed, 500, 2, 4);
        let rep = build_sharpened(&p, 1.0)?;
        let xs: Vec<Vec<f64>> = sample_input(&InputLaw::gaussian(2, 0.5)?, 4, c.seed);
        let n = ((200_000.0 * c.scale) as usize).max(1000);
        let est = mc_eval_rep_many(&rep, &xs, n, c.seed)?;
        let mut worst = 0.0f64;
        for (x, (e, se)) in xs.iter().zip(est) {
            worst = worst.max((e - p.evaluate(x)?).abs() / se.max(1e-300));
        }
        Ok((worst < 5.0, format!("largest |z| = {worst:.2}")))
    });
    s.check("normalize_preserves_output", &["normalize_directions"], |_| {
        let (u, v, b) = normalize_directions(1.3, &[3.0, -4.0], 0.7)?;
        let x = [0.2, -0.9];
        let before = 1.3 * (rng::dot(&x, &[3.0, -4.0]) + 0.7).max(0.0);
        let after = u * (rng::dot(&x, &v) + b).max(0.0);
        Ok(((before - after).abs() < 1e-12, format!("{before} vs {after}")))
    });
    s.check("transform_reproduces_f", &["apply_linear_transform", "transformed_version"], |c| {
        let f = &(&mono(&[2, 0], 1.0) + &mono(&[0, 2], 1.0)) + &(&mono(&[1, 0], -2.0) + &mono(&[0, 0], 1.0));
        let map = LinearMap::shift(vec![1.0, 0.0]);
        let ft = transformed_version(&f, &map)?;
        let rep = apply_linear_transform(&build_sharpened(&ft, 1.0)?, &map)?;
        let x = vec![0.4, -0.8];
        let n = ((200_000.0 * c.scale) as usize).max(1000);
        let (e, se) = mc_eval_rep_many(&rep, std::slice::from_ref(&x), n, c.seed)?[0];
        let z = (e - f.evaluate(&x)?).abs() / se;
        Ok((z < 5.0 && rep.a().abs() < 1e-12, format!("|z| = {z:.2}, a = {}", rep.a())))
    });
}

fn sampler_suite(s: &mut Suite) {
    s.check("input_laws", &["sample_input", "InputLaw::proxy"], |c| {
        let sph = sample_input(&InputLaw::sphere(4, 1.0)?, 500, c.seed);
        let cube = sample_input(&InputLaw::cube(2, 1.0)?, 500, c.seed);
        let ok = sph.iter().all(|x| (rng::norm(x) - 1.0).abs() < 1e-12)
            && cube.iter().all(|x| x.iter().all(|t| t.abs() <= 1.0))
            && InputLaw::ball(4, 2.0)?.proxy() == 1.0;
        Ok((ok, "supports and proxies".into()))
    });
    s.check("proxy_tail_bound", &["sample_input"], |c| {
        let laws = [InputLaw::gaussian(3, 1.0)?, InputLaw::cube(3, 1.0)?, InputLaw::sphere(3, 1.0)?, InputLaw::ball(3, 1.0)?];
        let m = s_samples(c, 20_000);
        let mut ok = true;
        let mut ru = rng::stream(c.seed, Purpose::Generator, 600);
        for law in laws {
            let xs = sample_input(&law, m, c.seed);
            let sx2 = law.proxy();
            for _ in 0..5 {
                let u = rng::unit_vec(&mut ru, 3);
                for t in [0.5, 1.0, 1.5, 2.0] {
                    let p_hat = xs.iter().filter(|x| rng::dot(x, &u) >= t).count() as f64 / m as f64;
                    let bound = (-t * t / (2.0 * sx2)).exp();
                    let se = (bound * (1.0 - bound) / m as f64).sqrt();
                    ok &= p_hat <= bound + 3.0 * se + 1.0 / m as f64;
                }
            }
        }
        Ok((ok, "empirical tails below exp(-t²/2σ_X²)".into()))
    });
    s.check("naive_unbiased", &["sample_naive_network"], |c| {
        let rep = build_sharpened(&mono(&[2], 1.0), 1.0)?;
        let q = NeuronProposal::new(0.5, 1.0, 1.0)?;
        let seeds = s_samples(c, 200);
        let vals: Vec<f64> = (0..seeds as u64)
            .map(|i| sample_naive_network(&rep, &q, 1000, c.seed.wrapping_add(i)).map(|n| n.eval(&[1.5])))
            .collect::<Result<_>>()?;
        let (m, se) = mean_se(&vals);
        let z = (m - 2.25) / se;
        Ok((z.abs() < 5.0, format!("mean {m:.4} ± {se:.4}")))
    });
    s.check("reproducible", &["ReluNetwork::to_json_string"], |c| {
        let rep = build_sharpened(&mono(&[1, 1], 1.0), 1.0)?;
        let law = InputLaw::gaussian(2, 1.0)?;
        let q = NeuronProposal::for_rep(&rep, &law, c.seed)?;
        let cfg = OptimalConfig { n: 16, n_candidates: 160, m_inner: 100 };
        let a = sample_optimal_network(&rep, &q, &law, cfg, c.seed)?.to_json_string();
        let b = sample_optimal_network(&rep, &q, &law, cfg, c.seed)?.to_json_string();
        Ok((a == b, format!("{} bytes", a.len())))
    });
    s.check("optimal_equalizes_norms", &["sample_optimal_network", "neuron_norm_diagnostics", "estimate_phi_norm"], |c| {
        let rep = build_sharpened(&mono(&[2], 1.0), 1.0)?;
        let law = InputLaw::gaussian(1, 1.0)?;
        let q = NeuronProposal::for_rep(&rep, &law, c.seed)?;
        let pool = sample_input(&law, 2000, c.seed ^ 1);
        let net_o = sample_optimal_network(&rep, &q, &law, OptimalConfig { n: 128, n_candidates: 1280, m_inner: 500 }, c.seed)?;
        let net_n = sample_naive_network(&rep, &q, 128, c.seed)?;
        let co = neuron_norm_diagnostics(&net_o, &pool)?.cv;
        let cn = neuron_norm_diagnostics(&net_n, &pool)?.cv;
        Ok((co < cn, format!("cv optimal {co:.3}, naive {cn:.3}")))
    });
    s.check("l2_error_offset", &["l2_error"], |c| {
        let f = Polynomial::constant(2, 1.0);
        let net = crate::sampler::ReluNetwork::new(2.0, vec![]);
        let (e, _) = l2_error(&net, &f, &InputLaw::gaussian(2, 1.0)?, 1000, c.seed)?;
        Ok(((e - 1.0).abs() < 1e-12, format!("error {e}")))
    });
}

fn s_samples(c: &VerifyConfig, base: usize) -> usize {
    ((base as f64 * c.scale).round() as usize).max(100)
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn bounds_suite(s: &mut Suite) {
    s.check("simplified_dominates_exact", &["c_dk"], |_| {
        let mut ok = true;
        let mut gamma_ok = true;
        for d in 1..=100 {
            for k in 1..=12 {
                let c = c_dk(d, k, 1.0)?;
                ok &= c.exact <= c.simplified;
                let lhs = 0.5 * (libm::lgamma(k as f64 + d as f64 / 2.0) - libm::lgamma(d as f64 / 2.0));
                gamma_ok &= lhs <= 0.5 * k as f64 * ((d + k - 1) as f64 / 2.0).ln() + 1e-12;
            }
        }
        Ok((ok && gamma_ok, "exact ≤ simplified and gamma ratio bound on 1..=12 × 1..=100".into()))
    });
    s.check("duplication_identity", &["c_dk"], |_| {
        let mut worst = 0.0f64;
        for k in 2..=30usize {
            let lhs = libm::lgamma((k as f64 - 1.0) / 2.0) - ln_factorial::<f64>(k - 2);
            let rhs = (2.0 - k as f64) * std::f64::consts::LN_2 + 0.5 * std::f64::consts::PI.ln() - libm::lgamma(k as f64 / 2.0);
            worst = worst.max((lhs - rhs).abs());
        }
        Ok((worst < 1e-10, format!("log error {worst:e}")))
    });
    s.check("inverse_root_n", &["theorem_bound"], |_| {
        let f = &mono(&[2, 1], 1.0) + &mono(&[1, 0], 0.5);
        let law = InputLaw::gaussian(2, 1.0)?;
        let a = theorem_bound(&f, &law, 64, None)?.bound_loose;
        let b = theorem_bound(&f, &law, 256, None)?.bound_loose;
        Ok(((a / b - 2.0).abs() < 1e-12, format!("ratio {}", a / b)))
    });
    s.check("envelope_relations", &["subgaussian_envelope", "envelope_moment"], |_| {
        let exact = ((1.0 + 1.0) * gauss_tail(1.0) - (-0.5f64).exp() / (2.0 * std::f64::consts::PI).sqrt()).sqrt();
        let env = subgaussian_envelope(1.0, 1.0, 1.0)?;
        let mut ok = exact <= env;
        for k in 2..=8 {
            ok &= envelope_integral(1.3, 0.7, k)? <= envelope_moment(1.3, 0.7, k)?;
        }
        Ok((ok, format!("‖ς(X−1)‖ = {exact:.4} ≤ {env:.4}")))
    });
    s.check("bound_holds_for_x2", &["bound_vs_empirical"], |c| {
        let f = mono(&[2], 1.0);
        let law = InputLaw::gaussian(1, 1.0)?;
        let rep = build_sharpened(&f, 1.0)?;
        let q = NeuronProposal::for_rep(&rep, &law, c.seed)?;
        let cfg = crate::sampler::SamplerConfig { kind: crate::sampler::SamplerKind::Optimal, proposal: q, candidates_per_neuron: 10, m_inner: 500 };
        let spec = bounds::SweepSpec { f_id: "x2", f: &f, law: &law, rep: &rep, sampler: &cfg, m_eval: 2000 };
        let rows = bounds::bound_vs_empirical(&spec, &[64, 256], c.seed, 10)?;
        let ok = rows.iter().all(|r| r.holds());
        Ok((ok, format!("{:?}", rows.iter().map(|r| (r.n, r.err_min.unwrap_or(f64::NAN), r.bound_loose)).collect::<Vec<_>>())))
    });
}

/// Standard normal upper tail `Φ̄(t)`. Note `E[(X − 1)₊²] = 2Φ̄(1) − φ(1)`.
fn gauss_tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

fn funkhecke_suite(s: &mut Suite) {
    s.check("closed_form_grid", &["lambda_quadrature", "sphere_eigenvalue"], |_| {
        let rows = funkhecke_grid(&[2, 3, 4, 5, 6, 7, 8], 8, 4)?;
        let worst = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
        Ok((worst < 1e-8, format!("{} rows, max abs diff {worst:e}", rows.len())))
    });
    s.check("legendre_normalization", &["legendre_eval"], |_| {
        let mut ok = true;
        for d in 2..=10 {
            for k in 0..=10 {
                ok &= (legendre_eval(d, k, 1.0f64)? - 1.0).abs() < 1e-12;
            }
        }
        Ok((ok, "P_{d,k}(1) = 1".into()))
    });
    s.check("orthogonality", &["legendre_eval"], |_| {
        let mut worst = 0.0f64;
        for d in [2, 3, 4, 6] {
            for k in 0..=6 {
                for k2 in 0..k {
                    worst = worst.max(legendre_inner::<f64>(d, k, k2)?.abs());
                }
            }
        }
        Ok((worst < 1e-8, format!("max |inner| {worst:e}")))
    });
    s.check("sphere_monte_carlo", &["sphere_eigencheck"], |c| {
        let n = s_samples(c, 100_000);
        let mut ok = true;
        let mut worst = 0.0f64;
        for (d, k, i) in [(3, 2, 0), (3, 2, 1), (4, 3, 1), (2, 1, 0)] {
            let rep = sphere_eigencheck(d, k, i, n, c.seed)?;
            ok &= rep.points.iter().all(|p| p.z.abs() < 5.0);
            worst = rep.points.iter().map(|p| p.z.abs()).fold(worst, f64::max);
        }
        Ok((ok, format!("largest |z| = {worst:.2}")))
    });
}
