//! `quantmet`: run quantale, space, structure, class and Ω-set checks from
//! the command line. Exits 0 iff every check passes, 1 on a failing check
//! and 2 on a usage or load error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quantmet::harness::{self, Command, RunConfig};

#[derive(Parser)]
#[command(name = "quantmet", version, about = "Checks for quantale-valued metric structures")]
struct Cli {
    #[command(subcommand)]
    command: Top,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Quantale selector: truth, extreal, unit, errors, ddf or lattice:<path>
    #[arg(long, global = true)]
    quantale: Option<String>,
    /// Samples per law for infinite instances
    #[arg(long, global = true, default_value_t = harness::DEFAULT_BUDGET)]
    budget: usize,
    /// Sequence prefix depth, or SAFA depth for continuity checks
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Sampler seed
    #[arg(long, global = true, env = harness::SEED_ENV)]
    seed: Option<u64>,
    /// Comparison tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Size bound for restrictions in the tameness check
    #[arg(long, global = true, default_value_t = 0)]
    kappa: usize,
    /// Value literal
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Value literal
    #[arg(long, global = true)]
    delta: Option<String>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Add wall-clock time to the report (breaks byte stability)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Top {
    /// Quantale law suite
    Laws {
        /// Lattice file, when no --quantale is given
        lattice: Option<PathBuf>,
    },
    #[command(subcommand)]
    Space(SpaceCmd),
    #[command(subcommand)]
    Struct(StructCmd),
    #[command(subcommand)]
    Class(ClassCmd),
    #[command(subcommand)]
    Omega(OmegaCmd),
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Reflexivity, symmetry, subadditivity, separation
    Check { file: PathBuf },
    /// Points within the radius of a center
    Ball {
        file: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: String,
    },
    /// Cauchy and convergence diagnostics for `a b (c d)` sequences
    Cauchy {
        file: PathBuf,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        limit: Option<String>,
    },
}

#[derive(Subcommand)]
enum StructCmd {
    /// Nonexpanding interpretations and space axioms
    Check { file: PathBuf },
    /// Check a point map `x=y,...` between two structures
    Embed {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        map: String,
    },
}

/// Class files, or `builtin:discrete<N>`, `builtin:line`,
/// `builtin:line-without-012`, `builtin:glued`.
#[derive(Subcommand)]
enum ClassCmd {
    /// Amalgamation over every span
    Ap { class: PathBuf },
    /// Types over a base with their distance table
    Types {
        class: PathBuf,
        #[arg(long)]
        base: Option<String>,
    },
    /// Pseudometric laws, attainment and restriction contractivity
    Dist {
        class: PathBuf,
        #[arg(long)]
        base: Option<String>,
    },
    /// Separation and continuity of types
    Ctp {
        class: PathBuf,
        #[arg(long)]
        base: Option<String>,
    },
    /// Tameness with --kappa, --eps, --delta
    Tame { class: PathBuf },
}

#[derive(Subcommand)]
enum OmegaCmd {
    /// Ω-set laws, or partial axioms plus dualization for a space file
    Check { file: PathBuf },
}

fn config(cli: Cli) -> Result<(RunConfig, Option<PathBuf>, Format)> {
    let (command, inputs) = match cli.command {
        Top::Laws { lattice } => (Command::Laws, lattice.into_iter().collect()),
        Top::Space(SpaceCmd::Check { file }) => (Command::SpaceCheck, vec![file]),
        Top::Space(SpaceCmd::Ball { file, center, radius }) => (Command::SpaceBall { center, eps: radius }, vec![file]),
        Top::Space(SpaceCmd::Cauchy { file, seq, limit }) => (Command::SpaceCauchy { sequence: seq, limit }, vec![file]),
        Top::Struct(StructCmd::Check { file }) => (Command::StructCheck, vec![file]),
        Top::Struct(StructCmd::Embed { source, target, map }) => (Command::StructEmbed { map }, vec![source, target]),
        Top::Class(ClassCmd::Ap { class }) => (Command::ClassAp, vec![class]),
        Top::Class(ClassCmd::Types { class, base }) => (Command::ClassTypes { base }, vec![class]),
        Top::Class(ClassCmd::Dist { class, base }) => (Command::ClassDist { base }, vec![class]),
        Top::Class(ClassCmd::Ctp { class, base }) => (Command::ClassCtp { base }, vec![class]),
        Top::Class(ClassCmd::Tame { class }) => (Command::ClassTame, vec![class]),
        Top::Omega(OmegaCmd::Check { file }) => (Command::OmegaCheck, vec![file]),
    };
    let o = cli.opts;
    let seed = match o.seed {
        Some(s) => s,
        None => harness::default_seed()?,
    };
    let mut config = RunConfig::new(command);
    config.inputs = inputs;
    config.quantale = o.quantale;
    config.budget = o.budget;
    config.depth = o.depth;
    config.seed = seed;
    config.tol = o.tol;
    config.kappa = o.kappa;
    config.eps = o.eps;
    config.delta = o.delta;
    config.timing = o.timing;
    Ok((config, o.out, o.format))
}

fn main() -> ExitCode {
    match try_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn try_main() -> Result<bool> {
    let (config, out, format) = config(Cli::parse())?;
    let report = harness::run(&config)?;
    let text = match format {
        Format::Text => report.render_text(),
        Format::Json => report.render_json(),
    };
    match out {
        Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(report.passed())
}
