use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use renormlab::nest::{analyze_cascades, build_level_nest, essential_period};
use renormlab::realdyn::{OrbitSample, Param, UnimodalLevel, DEFAULT_ORBIT_BUDGET};
use renormlab::renorm::detect_renormalization;
use renormlab::verify::quad_estimate;
use renormlab::Error;
use renormlab_cli::pipeline::{contraction_level, julia_level, tower_for, track_cascade_trials, Note};
use renormlab_cli::plot::{scatter_svg, Panel};
use renormlab_cli::{find_param, parse_corpus, run_pipeline, run_survey, CliError, FindKind, RunConfig};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "renormlab", version, about = "Renormalization numerics for real quadratic maps")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, global = true, default_value_t = 64.0)]
    kbar: f64,
    /// Julia grid side.
    #[arg(long, global = true, default_value_t = 400)]
    grid: usize,
    #[arg(long, global = true, default_value_t = 500)]
    max_iter: usize,
    /// Nest level budget.
    #[arg(long, global = true)]
    max_levels: Option<usize>,
    /// Tower depth.
    #[arg(long, global = true, default_value_t = 4)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (directory for `survey`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// All stages and verifiers for one parameter.
    #[command(allow_negative_numbers = true)]
    Pipeline { c: f64 },
    #[command(allow_negative_numbers = true)]
    Nest { c: f64 },
    #[command(allow_negative_numbers = true)]
    Cascades { c: f64 },
    #[command(allow_negative_numbers = true)]
    EssentialPeriod { c: f64 },
    #[command(allow_negative_numbers = true)]
    Tower { c: f64 },
    #[command(allow_negative_numbers = true)]
    Contraction {
        c: f64,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    #[command(allow_negative_numbers = true)]
    Quad {
        c: f64,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = 5.0)]
        radius: f64,
        #[arg(long, default_value_t = 10_000)]
        points: usize,
    },
    #[command(allow_negative_numbers = true)]
    Julia {
        c: f64,
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Also write the point cloud as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    #[command(allow_negative_numbers = true)]
    TrackCascade {
        c: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    #[command(subcommand)]
    FindParam(Find),
    /// Runs a corpus file (`c [label]` per line) and writes
    /// survey.csv, survey.json and survey.svg.
    Survey { corpus: PathBuf },
}

#[derive(Subcommand)]
enum Find {
    Superattracting {
        #[arg(long)]
        q: usize,
    },
    PeriodDoubling {
        #[arg(long)]
        n: usize,
    },
    #[command(allow_negative_numbers = true)]
    NearWindow {
        #[arg(long, allow_negative_numbers = true)]
        c0: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        q: usize,
    },
}

fn config(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig {
        eps: c.eps,
        kbar: c.kbar,
        grid: c.grid,
        max_iter: c.max_iter,
        depth: c.depth,
        seed: c.seed,
        ..RunConfig::default()
    }
    .with_env()?;
    if let Some(m) = c.max_levels {
        cfg.max_levels = m;
    }
    Ok(cfg)
}

fn emit<T: Serialize>(out: Option<&Path>, v: &T) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(p) => std::fs::write(p, s)?,
        None => std::io::stdout().write_all(s.as_bytes())?,
    }
    Ok(())
}

/// Typed dynamical errors are printed as data.
fn emit_result<T: Serialize>(out: Option<&Path>, stage: &str, r: Result<T, Error>) -> Result<(), CliError> {
    match r {
        Ok(v) => emit(out, &v),
        Err(Error::Invariant(m)) => Err(CliError::Invariant(m)),
        Err(e) => emit(out, &serde_json::json!({ "error": Note::new(stage, &e) })),
    }
}

fn base(c: f64) -> Result<(Param, OrbitSample, UnimodalLevel), Error> {
    let p = Param::new(c)?;
    let orbit = OrbitSample::new(p, DEFAULT_ORBIT_BUDGET);
    let lvl = UnimodalLevel::base(p)?;
    Ok((p, orbit, lvl))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config(&cli.common)?;
    let out = cli.common.out.as_deref();
    let opts = cfg.nest_options();
    match cli.cmd {
        Cmd::Pipeline { c } => emit(out, &run_pipeline(c, &cfg)?),
        Cmd::Nest { c } => emit_result(
            out,
            "nest",
            base(c).and_then(|(_, orbit, lvl)| build_level_nest(&lvl, &orbit, &opts)),
        ),
        Cmd::Cascades { c } => emit_result(
            out,
            "cascades",
            base(c).and_then(|(_, orbit, lvl)| {
                let nest = build_level_nest(&lvl, &orbit, &opts)?;
                Ok(analyze_cascades(&lvl, &nest, &orbit, 16))
            }),
        ),
        Cmd::EssentialPeriod { c } => emit_result(
            out,
            "essential_period",
            base(c).and_then(|(_, orbit, lvl)| {
                let nest = build_level_nest(&lvl, &orbit, &opts)?;
                let cs = analyze_cascades(&lvl, &nest, &orbit, 16);
                let det = detect_renormalization(&lvl, &nest)?;
                essential_period(&lvl, &nest, &cs, det.period, &orbit)
            }),
        ),
        Cmd::Tower { c } => emit_result(out, "tower", tower_for(c, &cfg)),
        Cmd::Contraction { c, level, samples } => {
            let cfg = RunConfig { samples, ..cfg };
            match tower_for(c, &cfg) {
                Ok(t) => emit(out, &contraction_level(&t, level, &cfg)?),
                Err(e) => emit_result::<()>(out, "tower", Err(e)),
            }
        }
        Cmd::Quad {
            c,
            level,
            radius,
            points,
        } => emit_result(
            out,
            "quad",
            tower_for(c, &cfg).and_then(|t| {
                let c_min = quad_estimate(&t, level, radius, points)?;
                Ok(serde_json::json!({ "c": c, "k": level, "radius": radius, "c_min": c_min }))
            }),
        ),
        Cmd::Julia { c, level, svg } => {
            let r = tower_for(c, &cfg).and_then(|t| julia_level(&t, level, &cfg));
            if let (Some(path), Ok(j)) = (svg.as_deref(), r.as_ref()) {
                let doc = scatter_svg(&[Panel {
                    title: "little Julia set",
                    xlabel: "Re z",
                    ylabel: "Im z",
                    log_y: false,
                    points: j.sample.points.iter().map(|p| (p.re(), p.im())).collect(),
                }]);
                std::fs::write(path, doc)?;
            }
            emit_result(out, "julia", r)
        }
        Cmd::TrackCascade { c, trials } => {
            emit_result(out, "track_cascade", track_cascade_trials(c, trials, &cfg))
        }
        Cmd::FindParam(f) => {
            let kind = match f {
                Find::Superattracting { q } => FindKind::SuperattractingPeriod { q },
                Find::PeriodDoubling { n } => FindKind::PeriodDoubling { n },
                Find::NearWindow { c0, radius, q } => FindKind::NearWindow { c0, radius, q },
            };
            let c = find_param(kind)?;
            emit(out, &serde_json::json!({ "request": kind, "c": c }))
        }
        Cmd::Survey { corpus } => {
            let text = std::fs::read_to_string(&corpus)?;
            let entries = parse_corpus(&text)?;
            let s = run_survey(&entries, &cfg)?;
            let dir = out.unwrap_or(Path::new("."));
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("survey.csv"), &s.csv)?;
            std::fs::write(dir.join("survey.json"), &s.footer_json)?;
            if let Some(svg) = &s.svg {
                std::fs::write(dir.join("survey.svg"), svg)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("renormlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
