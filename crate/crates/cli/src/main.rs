mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use heisenberg_hodge::decomposition::{decompose_1form, part_symbol_errors, DecompositionResult};
use heisenberg_hodge::fan::{fan_eigensystem, fan_grid, fan_residuals};
use heisenberg_hodge::mh::{sloc_norm_fn, SlocParams};
use heisenberg_hodge::model::FormFieldJson;
use heisenberg_hodge::multiplier::{m_delta1_assembled, m_delta1_oracle};
use heisenberg_hodge::verify::{run_suite, Suite, MULTIPLIER_TOL};
use heisenberg_hodge::{FormField, Model, ModelConfig, MultiplierSpec, C64};
use serde::{Deserialize, Serialize};

use config::{Format, RunConfig};
use report::{emit_json, emit_rows, with_output, SuiteReport, REPORT_HEADER};

#[derive(Parser)]
#[command(name = "heisenberg-hodge", version, about = "Hodge Laplacian on 1-forms over the Heisenberg group: checks and reports")]
struct Cli {
    /// INI configuration file; missing keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for the random test inputs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Record per-suite wall time in `verify` reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite, `all`, or the suites listed in the config.
    Verify { suite: Option<String> },
    /// Closed-form eigensystem of the fan symbol at every grid point.
    Fan,
    /// Five-way decomposition of a 1-form field read from JSON.
    Decompose { form: PathBuf },
    /// Apply m(Δ₁) to a 1-form field and compare against the dense oracle.
    Multiplier {
        name: String,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        /// Parameter of the other library multipliers.
        #[arg(long)]
        param: Option<f64>,
        form: PathBuf,
    },
    /// Scale-invariant local Sobolev norm of a multiplier.
    MhNorm {
        #[arg(required_unless_present = "samples")]
        name: Option<String>,
        /// CSV with columns s,re,im, linearly interpolated in s.
        #[arg(long, conflicts_with = "name")]
        samples: Option<PathBuf>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(short = 'J', long = "j-max")]
        j_max: Option<i32>,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long)]
        param: Option<f64>,
    },
}

struct Ctx {
    cfg: RunConfig,
    out: Option<PathBuf>,
    format: Format,
    timings: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when some check failed; the report is still written.
fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.run.seed = s;
    }
    let ctx =
        Ctx { out: cli.out.or_else(|| cfg.run.output.clone()), format: cli.format.unwrap_or(cfg.run.format), timings: cli.timings, cfg };
    match cli.command {
        Command::Verify { suite } => verify(&ctx, suite.as_deref()),
        Command::Fan => fan(&ctx),
        Command::Decompose { form } => decompose(&ctx, &form),
        Command::Multiplier { name, t, u, param, form } => multiplier(&ctx, &multiplier_spec(&name, t, u, param)?, &form),
        Command::MhNorm { name, samples, tau, j_max, resolution, t, u, param } => {
            let mut p = ctx.cfg.norms;
            p.tau = tau.unwrap_or(p.tau);
            p.j_max = j_max.unwrap_or(p.j_max);
            p.resolution = resolution.unwrap_or(p.resolution);
            p.validate()?;
            let source = match (name, samples) {
                (_, Some(path)) => Source::Samples(load_samples(&path, p.j_max)?, path.display().to_string()),
                (Some(name), None) => Source::Named(multiplier_spec(&name, t, u, param)?),
                (None, None) => bail!("give a multiplier name or --samples"),
            };
            mh_norm(&ctx, &source, &p)
        }
    }
}

fn require_json(ctx: &Ctx, what: &str) -> Result<()> {
    if ctx.format != Format::Json {
        bail!("{what} writes JSON only");
    }
    Ok(())
}

fn verify(ctx: &Ctx, suite: Option<&str>) -> Result<bool> {
    let mut suites = match suite {
        None => ctx.cfg.suites(),
        Some("all") => Suite::ALL.to_vec(),
        Some(s) => vec![s.parse::<Suite>()?],
    };
    suites.sort();
    suites.dedup();
    let vcfg = ctx.cfg.verify_config();
    let mut rows = Vec::new();
    for s in suites {
        let t0 = Instant::now();
        let checks = run_suite(s, &vcfg).with_context(|| format!("running suite {s}"))?;
        let ms = ctx.timings.then(|| t0.elapsed().as_millis() as u64);
        rows.extend(checks.into_iter().map(|c| SuiteReport::from_check(c, ms)));
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    with_output(ctx.out.as_deref(), |w| emit_rows(&rows, &REPORT_HEADER, ctx.format, w))?;
    eprintln!("{} checks, {failed} failed", rows.len());
    Ok(failed == 0)
}

#[derive(Serialize)]
struct FanRow {
    n: usize,
    lambda: f64,
    m: usize,
    xi: f64,
    a: f64,
    q_pp: f64,
    q_pm: f64,
    q_mp: f64,
    q_mm: f64,
    eig_0: f64,
    eig_plus: f64,
    eig_minus: f64,
    eigen_residual: f64,
    resolution_residual: f64,
    projector_residual: f64,
    q_residual: f64,
}

const FAN_HEADER: [&str; 16] = [
    "n",
    "lambda",
    "m",
    "xi",
    "a",
    "q_pp",
    "q_pm",
    "q_mp",
    "q_mm",
    "eig_0",
    "eig_plus",
    "eig_minus",
    "eigen_residual",
    "resolution_residual",
    "projector_residual",
    "q_residual",
];

fn fan(ctx: &Ctx) -> Result<bool> {
    let mut n_values = ctx.cfg.model.n.clone();
    n_values.sort();
    n_values.dedup();
    let mut rows = Vec::new();
    for n in n_values {
        for pt in fan_grid(n, &ctx.cfg.fan.lambdas, ctx.cfg.fan.m_max)? {
            let es = fan_eigensystem(&pt)?;
            let r = fan_residuals(&pt)?;
            rows.push(FanRow {
                n,
                lambda: pt.lambda,
                m: pt.m,
                xi: pt.xi,
                a: es.a,
                q_pp: es.q.pp,
                q_pm: es.q.pm,
                q_mp: es.q.mp,
                q_mm: es.q.mm,
                eig_0: es.eigenvalues[0],
                eig_plus: es.eigenvalues[1],
                eig_minus: es.eigenvalues[2],
                eigen_residual: r.eigen,
                resolution_residual: r.resolution,
                projector_residual: r.projector,
                q_residual: r.q_identities,
            });
        }
    }
    with_output(ctx.out.as_deref(), |w| emit_rows(&rows, &FAN_HEADER, ctx.format, w))?;
    Ok(true)
}

fn load_form(ctx: &Ctx, path: &Path) -> Result<(Model, FormField)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let json: FormFieldJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let model = Model::new(ModelConfig::new(json.n, json.lambdas.clone(), json.fock_max, ctx.cfg.model.tol)?)?;
    let form = FormField::from_json(&model, &json).with_context(|| format!("reading form from {}", path.display()))?;
    if form.degree().is_some_and(|d| d != 1) {
        bail!("{} holds a {}-form; a 1-form is required", path.display(), form.degree().unwrap_or(0));
    }
    Ok((model, form))
}

#[derive(Serialize)]
struct Measured {
    max_error: f64,
    tolerance: f64,
    pass: bool,
}

impl Measured {
    fn new(max_error: f64, tolerance: f64) -> Self {
        Self { max_error, tolerance, pass: max_error.is_finite() && max_error <= tolerance }
    }
}

#[derive(Serialize)]
struct PartReport {
    name: &'static str,
    norm: f64,
    symbol: Measured,
}

#[derive(Serialize)]
struct DecomposeReport {
    n: usize,
    lambdas: usize,
    fock_max: usize,
    input_norm: f64,
    residual: Measured,
    orthogonality: Measured,
    parts: Vec<PartReport>,
    pass: bool,
}

fn decompose(ctx: &Ctx, path: &Path) -> Result<bool> {
    require_json(ctx, "decompose")?;
    let (model, omega) = load_form(ctx, path)?;
    let tol = ctx.cfg.model.tol;
    let d = decompose_1form(&model, &omega)?;
    let symbols = part_symbol_errors(&model, &omega, &d)?;
    let parts: Vec<PartReport> = DecompositionResult::NAMES
        .iter()
        .zip(d.parts())
        .zip(symbols)
        .map(|((name, p), e)| PartReport { name, norm: p.norm(&model), symbol: Measured::new(e, tol) })
        .collect();
    let residual = Measured::new(d.residual, tol);
    let orthogonality = Measured::new(d.orthogonality, tol);
    let pass = residual.pass && orthogonality.pass && parts.iter().all(|p| p.symbol.pass);
    let report = DecomposeReport {
        n: model.n(),
        lambdas: model.lambdas().len(),
        fock_max: model.fock().max_level(),
        input_norm: omega.norm(&model),
        residual,
        orthogonality,
        parts,
        pass,
    };
    with_output(ctx.out.as_deref(), |w| emit_json(&report, w))?;
    Ok(pass)
}

fn multiplier_spec(name: &str, t: Option<f64>, u: Option<f64>, param: Option<f64>) -> Result<MultiplierSpec> {
    let p = match name {
        "heat" if u.is_none() => t.or(param),
        "imaginary_power" if t.is_none() => u.or(param),
        _ if t.is_none() && u.is_none() => param,
        _ => bail!("--t applies to heat and --u to imaginary_power; use --param for {name}"),
    };
    Ok(MultiplierSpec::from_name(name, p)?)
}

#[derive(Serialize)]
struct MultiplierReport {
    multiplier: String,
    agreement: Measured,
    form: FormFieldJson,
}

fn multiplier(ctx: &Ctx, m: &MultiplierSpec, path: &Path) -> Result<bool> {
    require_json(ctx, "multiplier")?;
    let (model, omega) = load_form(ctx, path)?;
    let a = m_delta1_assembled(&model, m, &omega)?;
    let b = m_delta1_oracle(&model, m, &omega)?;
    let err = a.sub(&model, &b)?.norm(&model) / b.norm(&model).max(f64::MIN_POSITIVE);
    let report =
        MultiplierReport { multiplier: m.label().to_string(), agreement: Measured::new(err, MULTIPLIER_TOL), form: a.to_json(&model) };
    let pass = report.agreement.pass;
    with_output(ctx.out.as_deref(), |w| emit_json(&report, w))?;
    Ok(pass)
}

#[derive(Deserialize)]
struct SampleRow {
    s: f64,
    re: f64,
    im: f64,
}

/// Tabulated multiplier on `s > 0`.
struct Samples {
    s: Vec<f64>,
    v: Vec<C64>,
}

impl Samples {
    fn eval(&self, x: f64) -> heisenberg_hodge::Result<C64> {
        let k = self.s.partition_point(|&s| s <= x);
        if k == 0 || (k == self.s.len() && x > self.s[k - 1]) {
            return Err(heisenberg_hodge::Error::Domain(format!("s = {x} outside the tabulated range")));
        }
        if k == self.s.len() {
            return Ok(self.v[k - 1]);
        }
        let w = (x - self.s[k - 1]) / (self.s[k] - self.s[k - 1]);
        Ok(self.v[k - 1] * (1.0 - w) + self.v[k] * w)
    }
}

fn load_samples(path: &Path, j_max: i32) -> Result<Samples> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows: Vec<SampleRow> =
        rdr.deserialize().collect::<std::result::Result<_, _>>().with_context(|| format!("reading {}", path.display()))?;
    rows.sort_by(|a, b| a.s.total_cmp(&b.s));
    if rows.len() < 2
        || rows.windows(2).any(|w| w[0].s == w[1].s)
        || rows.iter().any(|r| !(r.s > 0.0 && r.re.is_finite() && r.im.is_finite()))
    {
        bail!("{}: need at least two distinct positive s values and finite samples", path.display());
    }
    let (lo, hi) = (2f64.powi(-j_max), 2f64.powi(j_max + 1));
    if rows[0].s > lo || rows[rows.len() - 1].s < hi {
        bail!("{}: samples must cover [{lo}, {hi}] for J = {j_max}", path.display());
    }
    Ok(Samples { s: rows.iter().map(|r| r.s).collect(), v: rows.iter().map(|r| C64::new(r.re, r.im)).collect() })
}

enum Source {
    Named(MultiplierSpec),
    Samples(Samples, String),
}

#[derive(Serialize)]
struct RNorm {
    r: f64,
    norm: f64,
}

#[derive(Serialize)]
struct MhNormReport {
    multiplier: String,
    tau: f64,
    j_max: i32,
    resolution: usize,
    per_r_norms: Vec<RNorm>,
    sup: f64,
    /// Sup at doubled resolution against this one, larger over smaller.
    stability_ratio: f64,
}

fn mh_norm(ctx: &Ctx, source: &Source, p: &SlocParams) -> Result<bool> {
    let (f, label): (Box<dyn Fn(f64) -> heisenberg_hodge::Result<C64> + Sync>, String) = match source {
        Source::Named(m) => (Box::new(|s| m.eval(s)), m.label().to_string()),
        Source::Samples(t, name) => (Box::new(|s| t.eval(s)), format!("samples({name})")),
    };
    let base = sloc_norm_fn(&*f, p)?;
    let fine = sloc_norm_fn(&*f, &SlocParams { resolution: 2 * p.resolution, ..*p })?;
    let stability_ratio = if base.sup == 0.0 && fine.sup == 0.0 { 1.0 } else { base.sup.max(fine.sup) / base.sup.min(fine.sup) };
    let report = MhNormReport {
        multiplier: label,
        tau: p.tau,
        j_max: p.j_max,
        resolution: p.resolution,
        per_r_norms: base.per_r.iter().map(|&(r, norm)| RNorm { r, norm }).collect(),
        sup: base.sup,
        stability_ratio,
    };
    with_output(ctx.out.as_deref(), |w| match ctx.format {
        Format::Json => emit_json(&report, w),
        Format::Csv => emit_rows(&report.per_r_norms, &["r", "norm"], Format::Csv, w),
    })?;
    Ok(true)
}
