//! Command dispatch shared by the CLI and the tests.
//!
//! [`run`] loads the inputs named by a [`RunConfig`], runs one checker and
//! returns its report. Reports depend only on the inputs, the seed and the
//! toolkit version unless timing is requested.

use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use crate::format::{load_class, load_lattice, load_omega, load_space, load_structure, resolve_quantale, LoadError, OmegaInput};
use crate::galois::{builtin, check_ap, ToyClass, TypeEngine};
use crate::partial::{check_omega_laws, check_partial_axioms, from_omega_set, to_omega_set};
use crate::quantale::laws::check_quantale_laws;
use crate::quantale::{Quantale, Value};
use crate::report::{Check, Report};
use crate::structures::{check_embedding, check_structure};
use crate::vmetric::{check_axioms, converges_to, default_eps_list, is_cauchy_prefix, open_ball, PointSequence, VSpace, DEFAULT_DEPTH};

pub const TOOLKIT: &str = concat!("quantmet ", env!("CARGO_PKG_VERSION"));

/// Environment variable read for the default seed.
pub const SEED_ENV: &str = "QUANTMET_SEED";

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_BUDGET: usize = 10_000;
pub const DEFAULT_SAFA_DEPTH: u32 = 20;

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Laws,
    SpaceCheck,
    SpaceBall { center: String, eps: String },
    SpaceCauchy { sequence: String, limit: Option<String> },
    StructCheck,
    StructEmbed { map: String },
    ClassAp,
    ClassTypes { base: Option<String> },
    ClassDist { base: Option<String> },
    ClassCtp { base: Option<String> },
    ClassTame,
    OmegaCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Laws => "laws",
            Command::SpaceCheck => "space check",
            Command::SpaceBall { .. } => "space ball",
            Command::SpaceCauchy { .. } => "space cauchy",
            Command::StructCheck => "struct check",
            Command::StructEmbed { .. } => "struct embed",
            Command::ClassAp => "class ap",
            Command::ClassTypes { .. } => "class types",
            Command::ClassDist { .. } => "class dist",
            Command::ClassCtp { .. } => "class ctp",
            Command::ClassTame => "class tame",
            Command::OmegaCheck => "omega check",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub quantale: Option<String>,
    pub budget: usize,
    pub depth: Option<u32>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub kappa: usize,
    pub eps: Option<String>,
    pub delta: Option<String>,
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            inputs: Vec::new(),
            quantale: None,
            budget: DEFAULT_BUDGET,
            depth: None,
            seed: DEFAULT_SEED,
            tol: None,
            kappa: 0,
            eps: None,
            delta: None,
            timing: false,
        }
    }

    pub fn input(mut self, path: impl Into<PathBuf>) -> Self {
        self.inputs.push(path.into());
        self
    }

    /// The command line this configuration corresponds to, echoed in reports.
    pub fn echo(&self) -> String {
        let mut parts = vec![self.command.name().to_string()];
        parts.extend(self.inputs.iter().map(|p| p.display().to_string()));
        let mut flag = |k: &str, v: String| parts.push(format!("--{k} {v}"));
        match &self.command {
            Command::SpaceBall { center, eps } => {
                flag("center", center.clone());
                flag("radius", eps.clone());
            }
            Command::SpaceCauchy { sequence, limit } => {
                flag("seq", format!("{sequence:?}"));
                if let Some(l) = limit {
                    flag("limit", l.clone());
                }
            }
            Command::StructEmbed { map } => flag("map", format!("{map:?}")),
            Command::ClassTypes { base } | Command::ClassDist { base } | Command::ClassCtp { base } => {
                if let Some(b) = base {
                    flag("base", b.clone());
                }
            }
            _ => {}
        }
        if let Some(q) = &self.quantale {
            flag("quantale", q.clone());
        }
        if self.command == Command::Laws {
            flag("budget", self.budget.to_string());
            flag("seed", self.seed.to_string());
        }
        if let Some(d) = self.depth {
            flag("depth", d.to_string());
        }
        if let Some(t) = self.tol {
            flag("tol", t.to_string());
        }
        if self.command == Command::ClassTame {
            flag("kappa", self.kappa.to_string());
        }
        if let Some(e) = &self.eps {
            flag("eps", e.clone());
        }
        if let Some(d) = &self.delta {
            flag("delta", d.clone());
        }
        parts.join(" ")
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Check(String),
}

fn check_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Check(e.to_string())
}

/// The default seed: `QUANTMET_SEED` if set and numeric, otherwise 0.
pub fn default_seed() -> Result<u64, HarnessError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| HarnessError::Usage(format!("{SEED_ENV}={s} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn input(config: &RunConfig, i: usize, what: &str) -> Result<PathBuf, HarnessError> {
    config
        .inputs
        .get(i)
        .cloned()
        .ok_or_else(|| HarnessError::Usage(format!("`{}` needs {what}", config.command.name())))
}

fn parse_literal(q: &Quantale, lit: &str, what: &str) -> Result<Value, HarnessError> {
    q.parse_value(lit).map_err(|e| HarnessError::Usage(format!("--{what}: {e}")))
}

/// Built-in class selectors: `builtin:discrete<N>`, `builtin:line`,
/// `builtin:line-without-012`, `builtin:glued`.
fn builtin_class(name: &str) -> Option<ToyClass> {
    match name {
        "line" => Some(builtin::line(&[])),
        "line-without-012" => Some(builtin::line(&[0b111])),
        "glued" => Some(builtin::glued_pair()),
        _ => name.strip_prefix("discrete").and_then(|n| n.parse().ok()).filter(|&n| n <= 4).map(builtin::discrete_truth),
    }
}

fn class_input(config: &RunConfig) -> Result<ToyClass, HarnessError> {
    let p = input(config, 0, "a class file")?;
    let s = p.to_string_lossy();
    match s.strip_prefix("builtin:") {
        Some(name) => builtin_class(name).ok_or_else(|| HarnessError::Usage(format!("unknown built-in class `{name}`"))),
        None => Ok(load_class(&p, config.tol)?),
    }
}

fn laws_quantale(config: &RunConfig) -> Result<Quantale, HarnessError> {
    let q = match (&config.quantale, config.inputs.first()) {
        (Some(sel), _) => resolve_quantale(sel, Path::new("./"))?,
        (None, Some(p)) => Quantale::lattice(load_lattice(p)?),
        (None, None) => return Err(HarnessError::Usage("`laws` needs --quantale or a lattice file".into())),
    };
    Ok(match config.tol {
        Some(t) => q.with_tol(t),
        None => q,
    })
}

fn base_index(class: &ToyClass, base: &Option<String>) -> Result<Vec<usize>, HarnessError> {
    match base {
        Some(b) => Ok(vec![class.index_of(b).map_err(check_err)?]),
        None => Ok((0..class.len()).collect()),
    }
}

fn point(space: &VSpace, name: &str) -> Result<usize, HarnessError> {
    space.index_of(name).map_err(|e| HarnessError::Usage(e.to_string()))
}

/// Parses `a b (c d)`: a prefix followed by a parenthesized cycle, or a
/// single point repeated forever.
pub fn parse_sequence(space: &VSpace, text: &str) -> Result<PointSequence, HarnessError> {
    let (prefix, cycle) = match text.split_once('(') {
        Some((p, c)) => (p, c.trim_end().strip_suffix(')').ok_or_else(|| HarnessError::Usage("unclosed `(` in --seq".into()))?),
        None => {
            let mut items: Vec<&str> = text.split_whitespace().collect();
            let last = items.pop().ok_or_else(|| HarnessError::Usage("empty --seq".into()))?;
            return parse_sequence(space, &format!("{} ({last})", items.join(" ")));
        }
    };
    let points = |s: &str| s.split([' ', ',']).filter(|t| !t.is_empty()).map(|t| point(space, t)).collect::<Result<Vec<_>, _>>();
    PointSequence::new(points(prefix)?, points(cycle)?).map_err(check_err)
}

fn parse_map(src: &VSpace, tgt: &VSpace, text: &str) -> Result<Vec<usize>, HarnessError> {
    let mut map = vec![None; src.len()];
    for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = pair
            .split_once(['=', '>'])
            .ok_or_else(|| HarnessError::Usage(format!("map entry `{pair}` is not `x=y`")))?;
        map[point(src, a.trim())?] = Some(point(tgt, b.trim())?);
    }
    map.into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| HarnessError::Usage(format!("map leaves `{}` unassigned", src.name(i)))))
        .collect()
}

pub fn run(config: &RunConfig) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let mut report = Report::new(config.command.name());
    report.info("toolkit", TOOLKIT);
    report.info("command", config.echo());
    let body = dispatch(config)?;
    report.info("subject", &body.title);
    report.merge(body);
    if config.timing {
        report.info("elapsed", format!("{:.3}s", start.elapsed().as_secs_f64()));
    }
    Ok(report)
}

fn dispatch(config: &RunConfig) -> Result<Report, HarnessError> {
    match &config.command {
        Command::Laws => {
            let q = laws_quantale(config)?;
            check_quantale_laws(&q, config.budget, config.seed).map_err(check_err)
        }
        Command::SpaceCheck => {
            let space = load_space(&input(config, 0, "a space file")?, config.tol)?;
            check_axioms(&space).map_err(check_err)
        }
        Command::SpaceBall { center, eps } => {
            let space = load_space(&input(config, 0, "a space file")?, config.tol)?;
            let q = space.quantale();
            let eps = parse_literal(q, eps, "radius")?;
            let c = point(&space, center)?;
            let ball = open_ball(&space, c, &eps).map_err(check_err)?;
            let mut r = Report::new("open ball");
            r.info("center", center);
            r.info("radius", q.format_value(&eps));
            r.info("members", ball.iter().map(|&i| space.name(i)).collect::<Vec<_>>().join(", "));
            // The center belongs to its ball whenever its self-distance is 0.
            let mut own = Check::new("center-in-ball");
            own.record(ball.contains(&c) || !q.eq(space.dist(c, c), &q.zero()).map_err(check_err)?, || center.clone());
            r.push(own);
            Ok(r)
        }
        Command::SpaceCauchy { sequence, limit } => {
            let space = load_space(&input(config, 0, "a space file")?, config.tol)?;
            let q = space.quantale();
            let seq = parse_sequence(&space, sequence)?;
            let depth = config.depth.map_or(DEFAULT_DEPTH, |d| d as usize);
            let eps = match &config.eps {
                Some(e) => vec![parse_literal(q, e, "eps")?],
                None => default_eps_list(q),
            };
            let mut r = Report::new("sequence diagnostics");
            r.info("depth", depth);
            let show = |from: Option<usize>| from.map_or("not within depth".to_string(), |n| format!("from index {n}"));
            for v in is_cauchy_prefix(&space, &seq, depth, &eps).map_err(check_err)? {
                r.info(format!("cauchy at {}", q.format_value(&v.eps)), show(v.from));
            }
            if let Some(l) = limit {
                let li = point(&space, l)?;
                for v in converges_to(&space, &seq, li, depth, &eps).map_err(check_err)? {
                    r.info(format!("converges to {l} at {}", q.format_value(&v.eps)), show(v.from));
                }
            }
            Ok(r)
        }
        Command::StructCheck => {
            let s = load_structure(&input(config, 0, "a structure file")?, config.tol)?;
            let mut r = check_structure(&s).map_err(check_err)?;
            r.absorb("space", check_axioms(s.space()).map_err(check_err)?);
            Ok(r)
        }
        Command::StructEmbed { map } => {
            let src = load_structure(&input(config, 0, "source and target structure files")?, config.tol)?;
            let tgt = load_structure(&input(config, 1, "source and target structure files")?, config.tol)?;
            let m = parse_map(src.space(), tgt.space(), map)?;
            check_embedding(&src, &tgt, &m).map_err(check_err)
        }
        Command::ClassAp => Ok(check_ap(&class_input(config)?)),
        Command::ClassTypes { base } => {
            let class = class_input(config)?;
            let engine = TypeEngine::new(&class).map_err(check_err)?;
            let mut r = Report::new("types");
            for b in base_index(&class, base)? {
                r.absorb(class.name(b), engine.types_report(b).map_err(check_err)?);
            }
            Ok(r)
        }
        Command::ClassDist { base } => {
            let class = class_input(config)?;
            let engine = TypeEngine::new(&class).map_err(check_err)?;
            let mut r = Report::new("type distance");
            for b in base_index(&class, base)? {
                r.absorb(class.name(b), engine.check_type_pseudometric(b).map_err(check_err)?);
                r.push(engine.check_attainment(b).map_err(check_err)?);
                r.push(engine.check_contractive(b).map_err(check_err)?);
            }
            Ok(r)
        }
        Command::ClassCtp { base } => {
            let class = class_input(config)?;
            let engine = TypeEngine::new(&class).map_err(check_err)?;
            let depth = config.depth.unwrap_or(DEFAULT_SAFA_DEPTH);
            let mut r = Report::new("separation and continuity");
            for b in base_index(&class, base)? {
                r.absorb(class.name(b), engine.check_separation_and_ctp(b, depth).map_err(check_err)?);
            }
            Ok(r)
        }
        Command::ClassTame => {
            let class = class_input(config)?;
            let q = class.quantale().clone();
            let lit = |v: &Option<String>, what| match v {
                Some(s) => parse_literal(&q, s, what),
                None => Err(HarnessError::Usage(format!("`class tame` needs --{what}"))),
            };
            let (eps, delta) = (lit(&config.eps, "eps")?, lit(&config.delta, "delta")?);
            let engine = TypeEngine::new(&class).map_err(check_err)?;
            engine.check_tameness(config.kappa, &eps, &delta).map_err(check_err)
        }
        Command::OmegaCheck => {
            let p = input(config, 0, "an omega-set or partial space file")?;
            match load_omega(&p, config.tol)? {
                OmegaInput::Set(o) => Ok(check_omega_laws(&o)),
                OmegaInput::Space(space) => {
                    let mut r = Report::new("partial space and its omega-set");
                    r.absorb("partial", check_partial_axioms(&space).map_err(check_err)?);
                    let o = to_omega_set(&space).map_err(check_err)?;
                    r.absorb("omega", check_omega_laws(&o));
                    let mut trip = Check::new("round-trip");
                    trip.record(from_omega_set(&o).map_err(check_err)? == space, || "dualizing back changes the matrix".into());
                    r.push(trip);
                    Ok(r)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_is_stable() {
        let mut c = RunConfig::new(Command::Laws);
        c.quantale = Some("extreal".into());
        c.budget = 100;
        assert_eq!(c.echo(), "laws --quantale extreal --budget 100 --seed 0");
    }

    #[test]
    fn builtin_classes_resolve() {
        assert!(builtin_class("discrete3").is_some());
        assert!(builtin_class("discrete9").is_none());
        assert!(builtin_class("line").is_some());
        assert!(builtin_class("nope").is_none());
    }

    #[test]
    fn tame_on_builtin_discrete() {
        let mut c = RunConfig::new(Command::ClassTame).input("builtin:discrete3");
        c.kappa = 1;
        c.eps = Some("inf".into());
        c.delta = Some("inf".into());
        let r = run(&c).unwrap();
        assert!(r.passed());
        assert!(r.render_text().contains("tameness: strongly tame"));
    }

    #[test]
    fn laws_report_is_deterministic() {
        let mut c = RunConfig::new(Command::Laws);
        c.quantale = Some("unit".into());
        c.budget = 200;
        c.seed = 7;
        assert_eq!(run(&c).unwrap().render_text(), run(&c).unwrap().render_text());
    }
}
