//! INI run configuration with sections `[model]`, `[fan]`, `[norms]`, `[run]`.
//! Every key is optional; an empty file gives the defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use heisenberg_hodge::mh::{Bump, SlocParams};
use heisenberg_hodge::model::dyadic_grid;
use heisenberg_hodge::verify::{Suite, VerifyConfig};
use heisenberg_hodge::ModelConfig;
use ini::Ini;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}' (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSection {
    pub n: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub fock_max: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FanSection {
    pub lambdas: Vec<f64>,
    pub m_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    /// Empty means every suite.
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub random_inputs: usize,
    pub exterior_n_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSection,
    pub fan: FanSection,
    pub norms: SlocParams,
    pub run: RunSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self {
            model: ModelSection { n: vec![1], lambdas: dyadic_grid(-2, 3), fock_max: 8, tol: 1e-10 },
            fan: FanSection { lambdas: v.fan_lambdas, m_max: v.fan_m_max },
            norms: SlocParams { j_max: 8, ..SlocParams::new(v.tau) },
            run: RunSection {
                suites: Vec::new(),
                seed: v.seed,
                format: Format::Json,
                output: None,
                random_inputs: v.random_inputs,
                exterior_n_max: v.exterior_n_max,
            },
        }
    }
}

const KEYS: &[(&str, &[&str])] = &[
    ("model", &["n", "lambdas", "lambda_min_exp", "lambda_max_exp", "fock_max", "tol"]),
    ("fan", &["lambda_min_exp", "lambda_max_exp", "m_max"]),
    ("norms", &["tau", "j_max", "resolution", "pad_factor", "bump"]),
    ("run", &["suites", "seed", "format", "output", "random_inputs", "exterior_n_max"]),
];

/// Collects parse problems so that all of them are reported at once.
struct Reader<'a> {
    ini: &'a Ini,
    problems: Vec<String>,
}

impl<'a> Reader<'a> {
    fn raw(&self, section: &str, key: &str) -> Option<&'a str> {
        self.ini.section(Some(section)).and_then(|p| p.get(key)).map(str::trim)
    }

    fn get<T: FromStr>(&mut self, section: &str, key: &str, default: T) -> T
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(section, key) {
            None => default,
            Some(s) => s.parse().unwrap_or_else(|e| {
                self.problems.push(format!("[{section}] {key} = '{s}': {e}"));
                default
            }),
        }
    }

    fn list<T: FromStr>(&mut self, section: &str, key: &str, default: Vec<T>) -> Vec<T>
    where
        T::Err: std::fmt::Display,
    {
        let Some(s) = self.raw(section, key) else { return default };
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item.parse() {
                Ok(v) => out.push(v),
                Err(e) => self.problems.push(format!("[{section}] {key}: '{item}': {e}")),
            }
        }
        out
    }

    fn dyadic(&mut self, section: &str, default: (i32, i32)) -> Vec<f64> {
        let lo = self.get(section, "lambda_min_exp", default.0);
        let hi = self.get(section, "lambda_max_exp", default.1);
        if lo > hi {
            self.problems.push(format!("[{section}] lambda_min_exp = {lo} exceeds lambda_max_exp = {hi}"));
        }
        if lo < -60 || hi > 60 {
            self.problems.push(format!("[{section}] lambda exponents must lie in -60..=60"));
        }
        dyadic_grid(lo.clamp(-60, 60), hi.clamp(-60, 60))
    }
}

fn parse_bump(s: &str) -> std::result::Result<Bump, String> {
    match s {
        "canonical" => Ok(Bump::Canonical),
        "plateau" => Ok(Bump::Plateau),
        _ => Err("expected canonical or plateau".to_string()),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| anyhow::anyhow!("parse error at line {}, column {}: {}", e.line, e.col, e.msg))?;
        let d = Self::default();
        let mut r = Reader { ini: &ini, problems: Vec::new() };

        for (section, props) in ini.iter() {
            let Some(name) = section else {
                for (k, _) in props.iter() {
                    r.problems.push(format!("key '{k}' outside any section"));
                }
                continue;
            };
            match KEYS.iter().find(|(s, _)| *s == name) {
                None => r.problems.push(format!("unknown section [{name}]")),
                Some((_, keys)) => {
                    for (k, _) in props.iter() {
                        if !keys.contains(&k) {
                            r.problems.push(format!("unknown key '{k}' in [{name}]"));
                        }
                    }
                }
            }
        }

        let n = r.list("model", "n", d.model.n.clone());
        let lambdas = if r.raw("model", "lambdas").is_some() { r.list("model", "lambdas", Vec::new()) } else { r.dyadic("model", (-2, 3)) };
        let model =
            ModelSection { n, lambdas, fock_max: r.get("model", "fock_max", d.model.fock_max), tol: r.get("model", "tol", d.model.tol) };
        let fan = FanSection { lambdas: r.dyadic("fan", (-4, 4)), m_max: r.get("fan", "m_max", d.fan.m_max) };

        let bump = match r.raw("norms", "bump") {
            None => d.norms.bump,
            Some(s) => parse_bump(s).unwrap_or_else(|e| {
                r.problems.push(format!("[norms] bump = '{s}': {e}"));
                d.norms.bump
            }),
        };
        let norms = SlocParams {
            tau: r.get("norms", "tau", d.norms.tau),
            j_max: r.get("norms", "j_max", d.norms.j_max),
            resolution: r.get("norms", "resolution", d.norms.resolution),
            pad_factor: r.get("norms", "pad_factor", d.norms.pad_factor),
            bump,
        };

        let suites = match r.raw("run", "suites") {
            None | Some("all") => Vec::new(),
            Some(_) => r.list("run", "suites", Vec::new()),
        };
        let output = r.raw("run", "output").map(PathBuf::from);
        let run = RunSection {
            suites,
            seed: r.get("run", "seed", d.run.seed),
            format: r.get("run", "format", d.run.format),
            output,
            random_inputs: r.get("run", "random_inputs", d.run.random_inputs),
            exterior_n_max: r.get("run", "exterior_n_max", d.run.exterior_n_max),
        };

        let mut problems = r.problems;
        let cfg = Self { model, fan, norms, run };
        problems.extend(cfg.semantic_problems());
        if !problems.is_empty() {
            bail!("invalid configuration:\n  {}", problems.join("\n  "));
        }
        Ok(cfg)
    }

    fn semantic_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.model.n.is_empty() {
            out.push("[model] n must list at least one dimension".to_string());
        }
        for &n in &self.model.n {
            if let Err(e) = ModelConfig::new(n, self.model.lambdas.clone(), self.model.fock_max, self.model.tol) {
                out.push(format!("[model] n = {n}: {e}"));
            }
        }
        if let Err(e) = self.norms.validate() {
            out.push(format!("[norms] {e}"));
        }
        if !(1..=heisenberg_hodge::exterior::MAX_N).contains(&self.run.exterior_n_max) {
            out.push(format!("[run] exterior_n_max must lie in 1..={}", heisenberg_hodge::exterior::MAX_N));
        }
        // model and norms fields were checked above; reuse the remaining checks
        let d = VerifyConfig::default();
        let rest = VerifyConfig {
            n_values: d.n_values,
            lambdas: d.lambdas,
            fock_max: d.fock_max,
            tol: d.tol,
            tau: d.tau,
            j_max: d.j_max,
            resolution: d.resolution,
            ..self.verify_config()
        };
        if let Err(e) = rest.validate() {
            out.push(e.to_string());
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn suites(&self) -> Vec<Suite> {
        if self.run.suites.is_empty() {
            Suite::ALL.to_vec()
        } else {
            self.run.suites.clone()
        }
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            n_values: self.model.n.clone(),
            lambdas: self.model.lambdas.clone(),
            fock_max: self.model.fock_max,
            tol: self.model.tol,
            exterior_n_max: self.run.exterior_n_max,
            fan_lambdas: self.fan.lambdas.clone(),
            fan_m_max: self.fan.m_max,
            random_inputs: self.run.random_inputs,
            tau: self.norms.tau,
            j_max: self.norms.j_max,
            resolution: self.norms.resolution,
            seed: self.run.seed,
        }
    }
}
