//! `relupoly` command-line driver.
//!
//! Exit codes: 0 on success, 1 when a check fails or a computation breaks
//! down, 2 for usage and input errors.

mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use relupoly::bounds::{self, BoundRow, SweepSpec};
use relupoly::repr::{self, ReluIntegralRep};
use relupoly::sampler::{self, InputLaw, NeuronProposal, ReluNetwork, SamplerConfig, SamplerKind};
use relupoly::verify::{self, VerifyConfig};
use relupoly::{io as rio, Error, Law, Poly};
use serde_json::json;

use args::{BoundArgs, Cli, Command, CompileArgs, ErrorArgs, Format, RepArgs, RepChoice, SamplerArgs, SamplerChoice, VerifyArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Compile(a) => compile(a),
        Command::Verify(a) => run_verify(a),
        Command::Bound(a) => bound(a),
        Command::Error(a) => error(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Parse { .. }
            | Error::Io(_)
            | Error::InvalidParameter(_)
            | Error::DimensionMismatch { .. }
            | Error::DegreeTooLarge { .. },
        ) => 2,
        Some(_) => 1,
        None if e.downcast_ref::<io::Error>().is_some() => 2,
        None => 1,
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(text) = std::env::var("RELUPOLY_THREADS") else { return Ok(()) };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| args::usage(format!("RELUPOLY_THREADS must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn sink(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(Error::from).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn read_poly(path: &Path) -> anyhow::Result<Poly> {
    rio::read_polynomial::<f64>(path).with_context(|| format!("reading {}", path.display()))
}

/// The representation selected by the flags, with any transform attached.
fn build_rep(f: &Poly, opts: &RepArgs) -> anyhow::Result<ReluIntegralRep<f64>> {
    let map = opts.map(f.dim())?;
    let base = match &map {
        Some(m) => repr::transformed_version(f, m)?,
        None => f.clone(),
    };
    let rep = match opts.rep {
        RepChoice::Sharpened => repr::build_sharpened(&base, opts.sigma2)?,
        RepChoice::Direct => repr::build_direct(&base, &Law::gaussian(base.dim(), opts.sigma2)?)?,
    };
    Ok(match &map {
        Some(m) => repr::apply_linear_transform(&rep, m)?,
        None => rep,
    })
}

fn proposal(rep: &ReluIntegralRep<f64>, law: &InputLaw, opts: &SamplerArgs, seed: u64) -> anyhow::Result<NeuronProposal> {
    let s_scale = opts.s_scale.unwrap_or_else(|| sampler::default_s_scale(rep, law));
    let mut q = NeuronProposal::new(0.5, s_scale, law.proxy().sqrt())?;
    q.atom_weight = match opts.atom_weight {
        Some(w) => w,
        None => sampler::pilot_atom_weight(rep, &q, law, seed)?,
    };
    Ok(NeuronProposal::new(q.atom_weight, q.s_scale, q.sigma_x)?)
}

fn sampler_config(rep: &ReluIntegralRep<f64>, law: &InputLaw, opts: &SamplerArgs, seed: u64) -> anyhow::Result<SamplerConfig> {
    if opts.candidates < 10 {
        return Err(args::usage("--candidates must be at least 10").into());
    }
    if opts.inner == 0 {
        return Err(args::usage("--inner must be positive").into());
    }
    Ok(SamplerConfig {
        kind: match opts.sampler {
            SamplerChoice::Optimal => SamplerKind::Optimal,
            SamplerChoice::Naive => SamplerKind::Naive,
        },
        proposal: proposal(rep, law, opts, seed)?,
        candidates_per_neuron: opts.candidates,
        m_inner: opts.inner,
    })
}

fn compile(a: CompileArgs) -> anyhow::Result<bool> {
    let f = read_poly(&a.poly)?;
    let law = a.law.law(f.dim())?;
    if a.n == 0 {
        return Err(args::usage("--n must be positive").into());
    }
    let rep = build_rep(&f, &a.rep)?;
    let cfg = sampler_config(&rep, &law, &a.sampler, a.seed)?;
    let net = cfg.sample(&rep, &law, a.n, a.seed)?;
    let mut out = sink(a.out.as_deref())?;
    writeln!(out, "{}", net.to_json_string())?;
    out.flush()?;
    print_summary(&f, &rep, &law, &cfg, &net, a.eval, a.seed)?;
    Ok(true)
}

fn print_summary(
    f: &Poly,
    rep: &ReluIntegralRep<f64>,
    law: &InputLaw,
    cfg: &SamplerConfig,
    net: &ReluNetwork,
    m_eval: usize,
    seed: u64,
) -> anyhow::Result<()> {
    let mut err = io::stderr().lock();
    writeln!(err, "a = {}", net.a)?;
    for part in f.homogeneous_split() {
        writeln!(err, "fischer_norm[k={}] = {}", part.degree, part.poly.fischer_norm()?)?;
    }
    writeln!(
        err,
        "sampler = {}, rep = {}, n = {}, atom_weight = {}, s_scale = {}",
        net.meta.get("sampler").and_then(|s| s.as_str()).unwrap_or(cfg.kind.name()),
        rep.kind_name(),
        net.n(),
        cfg.proposal.atom_weight,
        cfg.proposal.s_scale,
    )?;
    if net.n() > 0 {
        let pool = sampler::sample_input(law, cfg.m_inner, seed ^ 0x5eed);
        let diag = sampler::neuron_norm_diagnostics(net, &pool)?;
        writeln!(err, "neuron_norm_mean = {}, neuron_norm_cv = {}", diag.mean, diag.cv)?;
    }
    if m_eval >= 2 {
        let (e, se) = sampler::l2_error(net, f, law, m_eval, seed.wrapping_add(1))?;
        writeln!(err, "l2_error = {e} (se {se}, m = {m_eval})")?;
    }
    Ok(())
}

fn run_verify(a: VerifyArgs) -> anyhow::Result<bool> {
    if !(a.scale > 0.0 && a.scale.is_finite()) {
        return Err(args::usage("--scale must be positive").into());
    }
    let report = verify::run(&a.suite, &VerifyConfig { seed: a.seed, scale: a.scale })?;
    let mut err = io::stderr().lock();
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        writeln!(err, "{tag} {}::{} ({})", c.suite, c.name, c.detail)?;
    }
    let mut out = sink(a.out.as_deref())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    out.flush()?;
    Ok(report.passed)
}

fn bound(a: BoundArgs) -> anyhow::Result<bool> {
    let n_grid = args::parse_list::<usize>(&a.n_grid)?;
    if n_grid.contains(&0) {
        return Err(args::usage("n grid entries must be positive").into());
    }
    let cases: Vec<(String, Poly)> = match (&a.poly, &a.ridge) {
        (Some(p), _) => vec![(p.display().to_string(), read_poly(p)?)],
        (None, Some(coeffs)) => {
            let g = args::parse_list::<f64>(coeffs)?;
            args::parse_list::<usize>(&a.dims)?
                .into_iter()
                .map(|d| {
                    if d == 0 {
                        return Err(args::usage("dimensions must be positive"));
                    }
                    let scale = (d as f64).sqrt().recip();
                    let scaled: Vec<f64> = g.iter().enumerate().map(|(k, c)| c * scale.powi(k as i32)).collect();
                    let mut w = vec![0.0; d];
                    w[0] = 1.0;
                    Ok((format!("ridge_d{d}"), bounds::ridge_polynomial(&scaled, &w)))
                })
                .collect::<relupoly::Result<_>>()?
        }
        (None, None) => return Err(args::usage("either --poly or --ridge is required").into()),
    };
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (id, f) in &cases {
        let law = a.law.law(f.dim())?;
        let rep = build_rep(f, &a.rep)?;
        let l2 = bounds::l2_f_minus_a(f, &law, rep.a(), a.seed)?;
        for &n in &n_grid {
            let report = bounds::theorem_bound(f, &law, n, Some(l2))?;
            rows.push(BoundRow::from_report(id, &report));
            reports.push(json!({"f_id": id, "report": report}));
        }
    }
    let mut out = sink(a.out.as_deref())?;
    match a.format {
        Format::Csv => bounds::write_csv(&rows, &mut out)?,
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema_version": rio::SCHEMA_VERSION,
                "rows": rows,
                "reports": reports,
            }))?
        )?,
    }
    out.flush()?;
    Ok(true)
}

fn error(a: ErrorArgs) -> anyhow::Result<bool> {
    let f = read_poly(&a.poly)?;
    let law = a.law.law(f.dim())?;
    let n_grid = args::parse_list::<usize>(&a.n_grid)?;
    if n_grid.contains(&0) || a.seeds == 0 {
        return Err(args::usage("n grid entries and --seeds must be positive").into());
    }
    let rep = build_rep(&f, &a.rep)?;
    let cfg = sampler_config(&rep, &law, &a.sampler, a.seed)?;
    let id = a.poly.display().to_string();
    let spec = SweepSpec {
        f_id: &id,
        f: &f,
        law: &law,
        rep: &rep,
        sampler: &cfg,
        m_eval: a.eval,
    };
    let errors = bounds::error_sweep(&spec, &n_grid, a.seed, a.seeds)?;
    let mut out = sink(a.out.as_deref())?;
    bounds::write_csv(&errors, &mut out)?;
    out.flush()?;
    if let Some(path) = &a.bounds {
        let summary = bounds::summarize_errors(&spec, &errors, a.seed)?;
        bounds::write_csv(&summary, sink(Some(path))?)?;
    }
    Ok(true)
}
