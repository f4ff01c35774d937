//! Input laws, neuron proposals, and finite networks sampled from a
//! representation.
//!
//! A proposal `q` draws the direction from the representation's own `μ`, puts
//! mass `w₀` on the atom `s = 0`, and otherwise draws `s` half-normal with
//! scale `ℓ(v) = s_scale · (σ_X‖w‖ + |⟨x₀, w⟩|)`, where `w` is the neuron
//! direction and `x₀` the transform base point (zero without a transform).
//! The importance weight `dν/dq` is `1/w₀` on the atom and
//! `1/((1 − w₀) p(s))` on the continuum, `p` being the half-normal density.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::io::SCHEMA_VERSION;
use crate::polycore::Polynomial;
use crate::repr::ReluIntegralRep;
use crate::rng::{self, Purpose};
use crate::spectral::{RadialKind, RadialLaw};

/// One draw from a [`RadialLaw`].
pub fn sample_direction<R: Rng + ?Sized>(law: &RadialLaw<f64>, rng: &mut R) -> Vec<f64> {
    match law.kind {
        RadialKind::Gaussian { sigma2 } => rng::normal_vec(rng, law.dim, sigma2.sqrt()),
        RadialKind::UnitSphere => rng::unit_vec(rng, law.dim),
        RadialKind::Rademacher => vec![if rng.random::<bool>() { 1.0 } else { -1.0 }],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputKind {
    /// `N(0, σ²I)`.
    Gaussian { sigma2: f64 },
    /// Uniform on `[−a, a]^d`.
    Cube { a: f64 },
    /// Uniform on the sphere of radius `r`.
    Sphere { r: f64 },
    /// Uniform on the ball of radius `r`.
    Ball { r: f64 },
}

/// The data distribution `D` together with its sub-Gaussian variance proxy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputLaw {
    pub kind: InputKind,
    pub dim: usize,
}

impl InputLaw {
    pub fn new(kind: InputKind, dim: usize) -> Result<Self> {
        let p = match kind {
            InputKind::Gaussian { sigma2 } => sigma2,
            InputKind::Cube { a } => a,
            InputKind::Sphere { r } | InputKind::Ball { r } => r,
        };
        if dim == 0 {
            return Err(invalid("input dimension must be positive"));
        }
        if !(p > 0.0 && p.is_finite()) {
            return Err(invalid("input law parameter must be positive and finite"));
        }
        Ok(InputLaw { kind, dim })
    }

    pub fn gaussian(dim: usize, sigma2: f64) -> Result<Self> {
        Self::new(InputKind::Gaussian { sigma2 }, dim)
    }

    pub fn cube(dim: usize, a: f64) -> Result<Self> {
        Self::new(InputKind::Cube { a }, dim)
    }

    pub fn sphere(dim: usize, r: f64) -> Result<Self> {
        Self::new(InputKind::Sphere { r }, dim)
    }

    pub fn ball(dim: usize, r: f64) -> Result<Self> {
        Self::new(InputKind::Ball { r }, dim)
    }

    /// `σ_X²`: `σ²` for Gaussian, `a²` for the cube, `r²/d` for sphere and ball.
    pub fn proxy(&self) -> f64 {
        match self.kind {
            InputKind::Gaussian { sigma2 } => sigma2,
            InputKind::Cube { a } => a * a,
            InputKind::Sphere { r } | InputKind::Ball { r } => r * r / self.dim as f64,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.kind, InputKind::Gaussian { .. })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let d = self.dim;
        match self.kind {
            InputKind::Gaussian { sigma2 } => rng::normal_vec(rng, d, sigma2.sqrt()),
            InputKind::Cube { a } => (0..d).map(|_| rng.random_range(-a..=a)).collect(),
            InputKind::Sphere { r } => rng::unit_vec(rng, d).into_iter().map(|x| r * x).collect(),
            InputKind::Ball { r } => {
                let rad = r * rng.random::<f64>().powf(1.0 / d as f64);
                rng::unit_vec(rng, d).into_iter().map(|x| rad * x).collect()
            }
        }
    }
}

/// `m` independent draws from `D`.
pub fn sample_input(law: &InputLaw, m: usize, seed: u64) -> Vec<Vec<f64>> {
    sample_input_for(law, m, seed, Purpose::Inputs)
}

pub(crate) fn sample_input_for(law: &InputLaw, m: usize, seed: u64, purpose: Purpose) -> Vec<Vec<f64>> {
    rng::chunks(m)
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|(c, start, end)| {
            let mut r = rng::stream(seed, purpose, c);
            (start..end).map(move |_| law.draw(&mut r)).collect::<Vec<_>>()
        })
        .collect()
}

/// Proposal over `(v, s)` for a given representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuronProposal {
    /// Probability of the atom `s = 0`.
    pub atom_weight: f64,
    /// Multiplier on the half-normal scale of `s`.
    pub s_scale: f64,
    /// `σ_X` of the input law the scale is tied to.
    pub sigma_x: f64,
}

/// A candidate neuron parameter with its importance weight `dν/dq`.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub v: Vec<f64>,
    pub s: f64,
    pub weight: f64,
}

/// Default half-normal scale multiplier.
///
/// Under Gaussian inputs `‖φ(·;v,s)‖²` decays like the proposal density
/// itself, so with multiplier 1 the second moment of `φ/q` diverges once the
/// degree reaches 3. A multiplier of `√2` keeps it finite. Bounded inputs cut
/// `φ` off at a finite `s`, where 1 is fine.
pub fn default_s_scale(rep: &ReluIntegralRep<f64>, law: &InputLaw) -> f64 {
    if law.is_gaussian() && rep.max_degree() >= 3 {
        std::f64::consts::SQRT_2
    } else {
        1.0
    }
}

fn half_normal_pdf(s: f64, scale: f64) -> f64 {
    (2.0 / std::f64::consts::PI).sqrt() / scale * (-0.5 * (s / scale).powi(2)).exp()
}

impl NeuronProposal {
    pub fn new(atom_weight: f64, s_scale: f64, sigma_x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&atom_weight) {
            return Err(invalid("atom weight must lie in [0, 1]"));
        }
        if !(s_scale > 0.0 && s_scale.is_finite()) || !(sigma_x > 0.0 && sigma_x.is_finite()) {
            return Err(invalid("proposal scales must be positive and finite"));
        }
        Ok(NeuronProposal {
            atom_weight,
            s_scale,
            sigma_x,
        })
    }

    /// Proposal with the default `s_scale` and a pilot-estimated `w₀`.
    pub fn for_rep(rep: &ReluIntegralRep<f64>, law: &InputLaw, seed: u64) -> Result<Self> {
        let mut q = Self::new(0.5, default_s_scale(rep, law), law.proxy().sqrt())?;
        q.atom_weight = pilot_atom_weight(rep, &q, law, seed)?;
        Ok(q)
    }

    /// Rejects proposals that miss part of `ν`'s support.
    pub fn check_support(&self, rep: &ReluIntegralRep<f64>) -> Result<()> {
        if self.atom_weight == 0.0 && rep.has_atom() {
            return Err(invalid("atom weight 0 but the representation has mass at s = 0"));
        }
        if self.atom_weight == 1.0 && rep.has_continuum() {
            return Err(invalid("atom weight 1 but the representation has mass at s > 0"));
        }
        Ok(())
    }

    /// Half-normal scale `ℓ(v)`.
    pub fn s_length(&self, rep: &ReluIntegralRep<f64>, v: &[f64]) -> f64 {
        let (w, b0) = rep.direction_and_bias(v, 0.0);
        self.s_scale * (self.sigma_x * rng::norm(&w) + b0.abs())
    }

    pub fn draw<R: Rng + ?Sized>(&self, rep: &ReluIntegralRep<f64>, law: &RadialLaw<f64>, rng: &mut R) -> Candidate {
        let v = sample_direction(law, rng);
        let atom = rng.random::<f64>() < self.atom_weight;
        let z = rng::normal(rng).abs();
        if atom {
            return Candidate {
                v,
                s: 0.0,
                weight: 1.0 / self.atom_weight,
            };
        }
        let scale = self.s_length(rep, &v);
        if !(scale > 0.0) {
            // A zero direction: every neuron built from it is constant zero.
            return Candidate { v, s: 0.0, weight: 0.0 };
        }
        let s = z * scale;
        let pdf = half_normal_pdf(s, scale);
        let weight = if pdf > 0.0 { 1.0 / ((1.0 - self.atom_weight) * pdf) } else { 0.0 };
        Candidate { v, s, weight }
    }

    fn to_json(&self) -> Value {
        json!({"atom_weight": self.atom_weight, "s_scale": self.s_scale, "sigma_x": self.sigma_x})
    }
}

fn draw_candidates(rep: &ReluIntegralRep<f64>, q: &NeuronProposal, count: usize, seed: u64, purpose: Purpose) -> Vec<Candidate> {
    let law = rep.direction_law();
    rng::chunks(count)
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|(c, start, end)| {
            let mut r = rng::stream(seed, purpose, c);
            (start..end).map(|_| q.draw(rep, &law, &mut r)).collect::<Vec<_>>()
        })
        .collect()
}

/// Pilot estimate of the atom's share of `∫ ‖φ‖ dν`, clamped to
/// `[0.05, 0.95]` when both parts are present.
pub fn pilot_atom_weight(rep: &ReluIntegralRep<f64>, q: &NeuronProposal, law: &InputLaw, seed: u64) -> Result<f64> {
    match (rep.has_atom(), rep.has_continuum()) {
        (false, false) => return Ok(0.5),
        (true, false) => return Ok(1.0),
        (false, true) => return Ok(0.0),
        (true, true) => {}
    }
    let probe = NeuronProposal { atom_weight: 0.5, ..q.clone() };
    let pool = sample_input_for(law, 512, seed, Purpose::Pilot);
    let cands = draw_candidates(rep, &probe, 1024, seed, Purpose::Pilot);
    let (mut atom, mut cont) = (0.0, 0.0);
    for c in &cands {
        let m = c.weight * estimate_phi_norm(rep, &c.v, c.s, &pool)?;
        if c.s == 0.0 {
            atom += m;
        } else {
            cont += m;
        }
    }
    if atom + cont == 0.0 {
        return Ok(0.5);
    }
    Ok((atom / (atom + cont)).clamp(0.05, 0.95))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neuron {
    pub u: f64,
    pub v: Vec<f64>,
    pub b: f64,
}

/// `f_n(x) = a + (1/n) Σ u_i ς(⟨x, v_i⟩ + b_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReluNetwork {
    pub schema_version: u32,
    pub a: f64,
    pub neurons: Vec<Neuron>,
    #[serde(default)]
    pub meta: Value,
}

impl ReluNetwork {
    pub fn new(a: f64, neurons: Vec<Neuron>) -> Self {
        ReluNetwork {
            schema_version: SCHEMA_VERSION,
            a,
            neurons,
            meta: Value::Null,
        }
    }

    pub fn n(&self) -> usize {
        self.neurons.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if self.neurons.is_empty() {
            return self.a;
        }
        let sum: f64 = self
            .neurons
            .iter()
            .map(|nr| nr.u * (rng::dot(x, &nr.v) + nr.b).max(0.0))
            .sum();
        self.a + sum / self.neurons.len() as f64
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let net: ReluNetwork = serde_json::from_str(text)?;
        if let Some(first) = net.neurons.first() {
            if net.neurons.iter().any(|n| n.v.len() != first.v.len()) {
                return Err(invalid("neuron directions differ in length"));
            }
        }
        Ok(net)
    }
}

fn network_meta(rep: &ReluIntegralRep<f64>, q: &NeuronProposal, seed: u64, sampler: &str) -> Value {
    json!({"seed": seed, "sampler": sampler, "proposal": q.to_json(), "rep": rep.to_json()})
}

/// `n` independent neurons from `q`, weighted by `dν/dq`.
pub fn sample_naive_network(rep: &ReluIntegralRep<f64>, q: &NeuronProposal, n: usize, seed: u64) -> Result<ReluNetwork> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    q.check_support(rep)?;
    if !rep.has_atom() && !rep.has_continuum() {
        let mut net = ReluNetwork::new(rep.a(), Vec::new());
        net.meta = network_meta(rep, q, seed, "naive");
        return Ok(net);
    }
    let mut scratch = Vec::new();
    let neurons = draw_candidates(rep, q, n, seed, Purpose::Neurons)
        .into_iter()
        .map(|c| {
            let u = if c.weight == 0.0 { 0.0 } else { rep.eval_u_with(&c.v, c.s, &mut scratch) * c.weight };
            let (v, b) = rep.direction_and_bias(&c.v, c.s);
            Neuron { u, v, b }
        })
        .collect();
    let mut net = ReluNetwork::new(rep.a(), neurons);
    net.meta = network_meta(rep, q, seed, "naive");
    Ok(net)
}

/// `‖φ(·; v, s)‖_{L²(D)}` estimated on the fixed pool, with
/// `φ(x; v, s) = u(v,s) ς(⟨x, w⟩ + b)`.
pub fn estimate_phi_norm(rep: &ReluIntegralRep<f64>, v: &[f64], s: f64, pool: &[Vec<f64>]) -> Result<f64> {
    if pool.is_empty() {
        return Err(invalid("the inner-norm pool is empty"));
    }
    let u = rep.eval_u(v, s)?;
    if u == 0.0 {
        return Ok(0.0);
    }
    let (w, b) = rep.direction_and_bias(v, s);
    Ok(u.abs() * relu_rms(&w, b, pool))
}

fn relu_rms(w: &[f64], b: f64, pool: &[Vec<f64>]) -> f64 {
    let ss: f64 = pool
        .iter()
        .map(|x| {
            let t = (rng::dot(x, w) + b).max(0.0);
            t * t
        })
        .sum();
    (ss / pool.len() as f64).sqrt()
}

/// Settings for the resampled sampler.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalConfig {
    pub n: usize,
    pub n_candidates: usize,
    pub m_inner: usize,
}

/// Network drawn from a self-normalized approximation of `π* ∝ ‖φ‖ dν`.
///
/// Candidates `z_j ~ q` get weights `ω_j = (dν/dq)(z_j) ‖φ(·; z_j)‖`, with
/// norms taken on one shared pool. `n` neurons are drawn by systematic
/// resampling over `ω`, and each gets `u = u(z) Z / ‖φ(·; z)‖` with
/// `Z = (1/N) Σ ω_j`. Conditional on the candidates this reproduces the
/// plain importance-sampling estimator, so it is unbiased.
pub fn sample_optimal_network(
    rep: &ReluIntegralRep<f64>,
    q: &NeuronProposal,
    law: &InputLaw,
    cfg: OptimalConfig,
    seed: u64,
) -> Result<ReluNetwork> {
    let OptimalConfig { n, n_candidates, m_inner } = cfg;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if n_candidates < 10 * n {
        return Err(invalid("the candidate count must be at least 10 n"));
    }
    if m_inner == 0 {
        return Err(invalid("the inner pool must be non-empty"));
    }
    q.check_support(rep)?;
    let mut net = ReluNetwork::new(rep.a(), Vec::new());
    net.meta = network_meta(rep, q, seed, "optimal");
    // The resampling weights use pool estimates of ‖φ‖, so π* is only approximated.
    net.meta["approximation"] = json!({"method": "snis", "n_candidates": n_candidates, "m_inner": m_inner});
    if !rep.has_atom() && !rep.has_continuum() {
        return Ok(net);
    }
    let pool = sample_input_for(law, m_inner, seed, Purpose::Pool);
    let cands = draw_candidates(rep, q, n_candidates, seed, Purpose::Neurons);
    let scored: Vec<(f64, f64, Vec<f64>, f64)> = cands
        .par_iter()
        .map(|c| {
            let mut scratch = Vec::new();
            if c.weight == 0.0 {
                return (0.0, 0.0, Vec::new(), 0.0);
            }
            let u = rep.eval_u_with(&c.v, c.s, &mut scratch);
            let (w, b) = rep.direction_and_bias(&c.v, c.s);
            let norm = if u == 0.0 { 0.0 } else { u.abs() * relu_rms(&w, b, &pool) };
            (c.weight * norm, u / norm, w, b)
        })
        .collect();
    let total: f64 = scored.iter().map(|t| t.0).sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate("every candidate neuron vanishes on the input law".into()));
    }
    let z = total / n_candidates as f64;
    // One uniform offset for the whole systematic sweep.
    let offset: f64 = rng::stream(seed, Purpose::Neurons, u64::MAX).random();
    let step = total / n as f64;
    let mut idx = 0usize;
    let mut cum = scored[0].0;
    for i in 0..n {
        let target = (i as f64 + offset) * step;
        while cum <= target && idx + 1 < scored.len() {
            idx += 1;
            cum += scored[idx].0;
        }
        // Rounding can leave the last target past a trailing dead candidate.
        while scored[idx].0 == 0.0 && idx > 0 {
            idx -= 1;
        }
        let (_, u_over_norm, w, b) = &scored[idx];
        net.neurons.push(Neuron {
            u: u_over_norm * z,
            v: w.clone(),
            b: *b,
        });
    }
    Ok(net)
}

/// `(‖f_n − f‖_{L²(D)}, standard error)` from `m` fresh draws.
///
/// The standard error is the delta-method value `se(M) / (2√M)` for the mean
/// squared error `M`.
pub fn l2_error(net: &ReluNetwork, f: &Polynomial<f64>, law: &InputLaw, m: usize, seed: u64) -> Result<(f64, f64)> {
    if m < 2 {
        return Err(invalid("at least two evaluation points are required"));
    }
    if f.dim() != law.dim {
        return Err(Error::DimensionMismatch {
            expected: law.dim,
            found: f.dim(),
        });
    }
    let cf = f.compile();
    let partials: Vec<(f64, f64)> = rng::chunks(m)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(c, start, end)| {
            let mut r = rng::stream(seed, Purpose::Inputs, c);
            let mut scratch = Vec::new();
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in start..end {
                let x = law.draw(&mut r);
                let e = net.eval(&x) - cf.eval_with(&x, &mut scratch);
                let e2 = e * e;
                s1 += e2;
                s2 += e2 * e2;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = partials.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let mf = m as f64;
    let mse = s1 / mf;
    let var = ((s2 / mf - mse * mse) * mf / (mf - 1.0)).max(0.0);
    let se_mse = (var / mf).sqrt();
    let err = mse.sqrt();
    let se = if err > 0.0 { se_mse / (2.0 * err) } else { 0.0 };
    Ok((err, se))
}

/// Per-neuron `‖u_i ς(⟨·, v_i⟩ + b_i)‖` on a pool, with their coefficient of
/// variation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormDiagnostics {
    pub norms: Vec<f64>,
    pub mean: f64,
    pub cv: f64,
}

pub fn neuron_norm_diagnostics(net: &ReluNetwork, pool: &[Vec<f64>]) -> Result<NormDiagnostics> {
    if pool.is_empty() {
        return Err(invalid("the inner-norm pool is empty"));
    }
    let norms: Vec<f64> = net
        .neurons
        .par_iter()
        .map(|nr| nr.u.abs() * relu_rms(&nr.v, nr.b, pool))
        .collect();
    if norms.is_empty() {
        return Ok(NormDiagnostics { norms, mean: 0.0, cv: 0.0 });
    }
    let k = norms.len() as f64;
    let mean = norms.iter().sum::<f64>() / k;
    let var = norms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / k;
    let cv = if mean > 0.0 { var.sqrt() / mean } else { 0.0 };
    Ok(NormDiagnostics { norms, mean, cv })
}

/// Which network sampler to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Naive,
    Optimal,
}

impl SamplerKind {
    pub fn name(&self) -> &'static str {
        match self {
            SamplerKind::Naive => "naive",
            SamplerKind::Optimal => "optimal",
        }
    }
}

/// Everything besides `n` and the seed needed to draw a network.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    pub proposal: NeuronProposal,
    /// Candidates per output neuron for the optimal sampler (at least 10).
    pub candidates_per_neuron: usize,
    /// Inner-pool size for the norm estimates.
    pub m_inner: usize,
}

impl SamplerConfig {
    pub fn sample(&self, rep: &ReluIntegralRep<f64>, law: &InputLaw, n: usize, seed: u64) -> Result<ReluNetwork> {
        match self.kind {
            SamplerKind::Naive => sample_naive_network(rep, &self.proposal, n, seed),
            SamplerKind::Optimal => sample_optimal_network(
                rep,
                &self.proposal,
                law,
                OptimalConfig {
                    n,
                    n_candidates: n * self.candidates_per_neuron,
                    m_inner: self.m_inner,
                },
                seed,
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::{build_sharpened, build_direct};

    type P = Polynomial<f64>;

    #[test]
    fn proxies() {
        assert_eq!(InputLaw::gaussian(3, 2.0).unwrap().proxy(), 2.0);
        assert_eq!(InputLaw::cube(3, 0.5).unwrap().proxy(), 0.25);
        assert_eq!(InputLaw::sphere(4, 2.0).unwrap().proxy(), 1.0);
        assert_eq!(InputLaw::ball(4, 2.0).unwrap().proxy(), 1.0);
        assert!(InputLaw::cube(2, -1.0).is_err());
    }

    #[test]
    fn input_supports() {
        for x in sample_input(&InputLaw::sphere(5, 1.0).unwrap(), 500, 1) {
            assert!((rng::norm(&x) - 1.0).abs() < 1e-12);
        }
        for x in sample_input(&InputLaw::cube(2, 1.0).unwrap(), 500, 2) {
            assert!(x.iter().all(|c| c.abs() <= 1.0));
        }
        for x in sample_input(&InputLaw::ball(3, 2.0).unwrap(), 500, 3) {
            assert!(rng::norm(&x) <= 2.0);
        }
    }

    #[test]
    fn constant_networks() {
        let rep = build_sharpened(&P::constant(2, 3.0), 1.0).unwrap();
        let q = NeuronProposal::new(0.5, 1.0, 1.0).unwrap();
        let net = sample_naive_network(&rep, &q, 10, 1).unwrap();
        assert!(net.neurons.iter().all(|n| n.u == 0.0));
        assert_eq!(net.eval(&[0.3, 0.1]), 3.0);
        let law = InputLaw::gaussian(2, 1.0).unwrap();
        let cfg = OptimalConfig { n: 4, n_candidates: 40, m_inner: 10 };
        assert_eq!(sample_optimal_network(&rep, &q, &law, cfg, 1).unwrap().n(), 0);
    }

    #[test]
    fn linear_uses_only_the_atom() {
        let f = &P::monomial(vec![1, 0], 2.0) + &P::monomial(vec![0, 1], -1.0);
        let rep = build_sharpened(&f, 1.0).unwrap();
        let q = NeuronProposal::new(1.0, 1.0, 1.0).unwrap();
        let net = sample_naive_network(&rep, &q, 50, 4).unwrap();
        assert!(net.neurons.iter().all(|n| n.b == 0.0));
    }

    #[test]
    fn support_violations() {
        let rep = build_sharpened(&(&P::monomial(vec![2], 1.0) + &P::monomial(vec![1], 1.0)), 1.0).unwrap();
        for w0 in [0.0, 1.0] {
            let q = NeuronProposal::new(w0, 1.0, 1.0).unwrap();
            assert!(sample_naive_network(&rep, &q, 5, 1).is_err());
        }
    }

    #[test]
    fn phi_norm_examples() {
        let rep = build_direct(&P::monomial(vec![1], 0.5), &RadialLaw::gaussian(1, 1.0).unwrap()).unwrap();
        let pool = sample_input(&InputLaw::gaussian(1, 1.0).unwrap(), 1_000_000, 9);
        // u(1, 0) = 2 · 0.5 = 1
        let n = estimate_phi_norm(&rep, &[1.0], 0.0, &pool).unwrap();
        assert!((n - 0.5f64.sqrt()).abs() < 0.01 * 0.5f64.sqrt());
        let cube = sample_input(&InputLaw::cube(1, 1.0).unwrap(), 100, 1);
        let sq = build_sharpened(&P::monomial(vec![2], 1.0), 1.0).unwrap();
        assert_eq!(estimate_phi_norm(&sq, &[2.0], 10.0, &cube).unwrap(), 0.0);
        assert!(estimate_phi_norm(&sq, &[2.0], 1.0, &[]).is_err());
    }

    #[test]
    fn offset_network_error() {
        let law = InputLaw::gaussian(2, 1.0).unwrap();
        let f = P::constant(2, 2.0);
        let exact = ReluNetwork::new(2.0, vec![]);
        assert_eq!(l2_error(&exact, &f, &law, 1000, 1).unwrap().0, 0.0);
        let shifted = ReluNetwork::new(3.0, vec![]);
        let (e, se) = l2_error(&shifted, &f, &law, 1000, 1).unwrap();
        assert!((e - 1.0).abs() < 1e-12 && se < 1e-12);
    }

    #[test]
    fn diagnostics_trivial_cases() {
        let pool = sample_input(&InputLaw::gaussian(1, 1.0).unwrap(), 100, 1);
        let nr = Neuron { u: 2.0, v: vec![1.0], b: 0.1 };
        let net = ReluNetwork::new(0.0, vec![nr.clone(), nr.clone(), nr]);
        assert_eq!(neuron_norm_diagnostics(&net, &pool).unwrap().cv, 0.0);
        let one = ReluNetwork::new(0.0, vec![Neuron { u: 1.0, v: vec![1.0], b: 0.0 }]);
        assert_eq!(neuron_norm_diagnostics(&one, &pool).unwrap().cv, 0.0);
    }

    #[test]
    fn network_json_round_trip() {
        let rep = build_sharpened(&P::monomial(vec![2], 1.0), 1.0).unwrap();
        let q = NeuronProposal::new(0.5, 1.0, 1.0).unwrap();
        let net = sample_naive_network(&rep, &q, 8, 11).unwrap();
        let back = ReluNetwork::from_json_str(&net.to_json_string()).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.meta["seed"], 11);
    }
}
