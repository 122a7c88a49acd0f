//! Argument parsing, the `key = value` config merge, and command dispatch.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use roadwheel_core::{
    linspace, noslip_report, run_section4_counterexample, verify_corollaries,
    verify_parabola_congruence, CheckResult, CorollaryTolerances, NoSlipVerdict, RollScene,
    RollingLaw, SolverConfig, WheelPreset, WheelSpec, DEFAULT_DOMAIN_MARGIN,
};

use crate::{csv, svg, CliError};

#[derive(Parser)]
#[command(
    name = "roadwheel",
    version,
    about = "Roads for rolling wheels: solve, simulate, validate, render"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the road for a preset wheel and export theta,x,y samples
    Road(RoadArgs),
    /// Sample the wheel outline itself as theta,x,y points
    Wheel(WheelArgs),
    /// Trace one marked wheel point through the rolling motion
    Trace(TraceArgs),
    /// Check a rolling law and the corollary suite; exit 1 on failure
    Validate(ValidateArgs),
    /// Scan rolled positions for points below the road
    Crashes(CrashArgs),
    /// Render the scene as a standalone SVG
    Render(RenderArgs),
    /// Write an SVG frame sequence with a shared viewport
    Animate(AnimateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PresetName {
    UnitCircle,
    LineSecant,
    Polygon,
    PoinsotSech,
    LogSpiral,
    OffsetCircle,
    FocalParabola,
    Weierstrass,
}

impl FromStr for PresetName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <PresetName as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LawName {
    Canonical,
    Section4,
}

impl FromStr for LawName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <LawName as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    ThetaX,
}

impl FromStr for PlotKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <PlotKind as ValueEnum>::from_str(s, true)
    }
}

/// Options shared by every subcommand: the wheel, its parameters, the
/// rotation range, solver tolerance, and the optional config file.
#[derive(Args, Clone, Debug)]
struct CommonOpts {
    /// Wheel preset
    #[arg(long, value_enum)]
    preset: Option<PresetName>,
    /// Logarithmic-spiral pitch
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Parabola focal parameter
    #[arg(long)]
    d: Option<f64>,
    /// Polygon side count
    #[arg(long)]
    sides: Option<u32>,
    /// Polygon apothem
    #[arg(long)]
    apothem: Option<f64>,
    /// Weierstrass amplitude base
    #[arg(long)]
    a: Option<f64>,
    /// Weierstrass frequency base
    #[arg(long)]
    b: Option<f64>,
    /// Weierstrass level offset
    #[arg(long)]
    level_offset: Option<f64>,
    /// Weierstrass series terms
    #[arg(long)]
    terms: Option<u32>,
    /// Domain margin at open preset endpoints
    #[arg(long)]
    margin: Option<f64>,
    /// Lower end of the rotation range
    #[arg(long, allow_negative_numbers = true)]
    theta_min: Option<f64>,
    /// Upper end of the rotation range
    #[arg(long, allow_negative_numbers = true)]
    theta_max: Option<f64>,
    /// Solver tolerance (absolute and relative)
    #[arg(long)]
    tol: Option<f64>,
    /// Line-oriented `key = value` file merged under explicit flags
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonOpts {
    /// Fill unset options from the config file, flags winning.
    fn merged(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let cfg = ConfigMap::load(&path)?;
        fill(&mut self.preset, &cfg, "preset")?;
        fill(&mut self.k, &cfg, "k")?;
        fill(&mut self.d, &cfg, "d")?;
        fill(&mut self.sides, &cfg, "sides")?;
        fill(&mut self.apothem, &cfg, "apothem")?;
        fill(&mut self.a, &cfg, "a")?;
        fill(&mut self.b, &cfg, "b")?;
        fill(&mut self.level_offset, &cfg, "level-offset")?;
        fill(&mut self.terms, &cfg, "terms")?;
        fill(&mut self.margin, &cfg, "margin")?;
        fill(&mut self.theta_min, &cfg, "theta-min")?;
        fill(&mut self.theta_max, &cfg, "theta-max")?;
        fill(&mut self.tol, &cfg, "tol")?;
        Ok(self)
    }

    fn build_preset(&self) -> WheelPreset {
        match self.preset.unwrap_or(PresetName::LineSecant) {
            PresetName::UnitCircle => WheelPreset::UnitCircle,
            PresetName::LineSecant => WheelPreset::LineSecant,
            PresetName::Polygon => WheelPreset::RegularPolygon {
                sides: self.sides.unwrap_or(4),
                apothem: self.apothem.unwrap_or(1.0),
            },
            PresetName::PoinsotSech => WheelPreset::PoinsotSech,
            PresetName::LogSpiral => WheelPreset::LogSpiral {
                k: self.k.unwrap_or(0.5),
            },
            PresetName::OffsetCircle => WheelPreset::OffsetCircle,
            PresetName::FocalParabola => WheelPreset::FocalParabola {
                d: self.d.unwrap_or(0.5),
            },
            PresetName::Weierstrass => WheelPreset::Weierstrass {
                a: self.a.unwrap_or(2.0),
                b: self.b.unwrap_or(3.0),
                level_offset: self.level_offset.unwrap_or(3.0),
                terms: self.terms.unwrap_or(50),
            },
        }
    }

    fn build_wheel(&self) -> Result<WheelSpec, CliError> {
        let preset = self.build_preset();
        Ok(WheelSpec::from_preset(
            &preset,
            self.margin.unwrap_or(DEFAULT_DOMAIN_MARGIN),
        )?)
    }

    fn range(&self) -> (f64, f64) {
        let d = default_range(&self.build_preset());
        (self.theta_min.unwrap_or(d.0), self.theta_max.unwrap_or(d.1))
    }

    fn solver_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(t) = self.tol {
            cfg.abs_tol = t;
            cfg.rel_tol = t;
        }
        cfg
    }

    fn solve_scene(&self) -> Result<RollScene, CliError> {
        let wheel = self.build_wheel()?;
        Ok(RollScene::solve(
            wheel,
            self.range(),
            &self.solver_config(),
        )?)
    }
}

fn default_range(preset: &WheelPreset) -> (f64, f64) {
    use std::f64::consts::PI;
    match preset {
        WheelPreset::UnitCircle => (-PI, PI),
        WheelPreset::LineSecant => (-1.2, 1.2),
        WheelPreset::RegularPolygon { sides, .. } => {
            let half = PI / f64::from(*sides);
            (-half, half)
        }
        WheelPreset::PoinsotSech => (-6.0, 6.0),
        WheelPreset::LogSpiral { .. } => (-1.0, 2.0),
        WheelPreset::OffsetCircle => (-1.3, 1.3),
        WheelPreset::FocalParabola { .. } => (-1.5, 1.5),
        WheelPreset::Weierstrass { .. } => (-PI, PI),
    }
}

struct ConfigMap(HashMap<String, String>);

impl ConfigMap {
    fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)?;
        let mut map = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected `key = value`, got {raw:?}",
                    path.display(),
                    i + 1
                )));
            };
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigMap(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}"))),
        }
    }
}

fn fill<T: FromStr>(slot: &mut Option<T>, cfg: &ConfigMap, key: &str) -> Result<(), CliError>
where
    T::Err: Display,
{
    if slot.is_none() {
        *slot = cfg.get(key)?;
    }
    Ok(())
}

#[derive(Args)]
struct RoadArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct WheelArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Number of outline samples
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Wheel angle of the marked point
    #[arg(long, allow_negative_numbers = true)]
    mark: Option<f64>,
    /// Number of rolled positions
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Rolling law to test
    #[arg(long, value_enum)]
    law: Option<LawName>,
}

#[derive(Args)]
struct CrashArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Penetration depth that counts as a crash
    #[arg(long)]
    crash_tol: Option<f64>,
    /// Rolled positions scanned
    #[arg(long)]
    phi_samples: Option<usize>,
    /// Wheel samples per position
    #[arg(long)]
    theta_samples: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Output SVG path (stdout when omitted)
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Rolled positions at which to draw the wheel
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    wheel_at: Vec<f64>,
    /// Suppress the wheel outline
    #[arg(long)]
    no_wheel: bool,
    /// Marked points to trace (wheel angles)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    trace_mark: Vec<f64>,
    /// Draw the center path
    #[arg(long)]
    center_path: bool,
    /// Mark crash events
    #[arg(long)]
    crashes: bool,
    /// Repeat the road this many times (chained arches, sawtooth teeth)
    #[arg(long)]
    track: Option<u32>,
    /// Emit a diagnostic plot instead of the scene
    #[arg(long, value_enum)]
    plot: Option<PlotKind>,
    /// Samples per drawn curve
    #[arg(long)]
    samples: Option<usize>,
    /// Stroke width in pixels
    #[arg(long)]
    stroke_width: Option<f64>,
    /// Explicit model viewport `xmin,xmax,ymin,ymax`
    #[arg(long, value_delimiter = ',', num_args = 4, allow_hyphen_values = true)]
    viewport: Vec<f64>,
}

#[derive(Args)]
struct AnimateArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Number of frames (at least 2)
    #[arg(long)]
    frames: Option<usize>,
    /// Directory for frame_NNNN.svg files
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Marked points to trace in every frame
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    trace_mark: Vec<f64>,
    /// Draw the center path in every frame
    #[arg(long)]
    center_path: bool,
    /// Repeat the road this many times
    #[arg(long)]
    track: Option<u32>,
    /// Samples per drawn curve
    #[arg(long)]
    samples: Option<usize>,
}

/// Parse and run; returns the process exit code. 0 success, 1 validation
/// failure, 2 usage error, 3 numeric or I/O failure.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Road(args) => run_road(args),
        Command::Wheel(args) => run_wheel(args),
        Command::Trace(args) => run_trace(args),
        Command::Validate(args) => run_validate(args),
        Command::Crashes(args) => run_crashes(args),
        Command::Render(args) => run_render(args),
        Command::Animate(args) => run_animate(args),
    }
}

/// Build the document in memory first so a failure never leaves a partial
/// file, then write to the path or stdout.
fn write_data(
    path: Option<&PathBuf>,
    what: &str,
    build: impl FnOnce(&mut Vec<u8>) -> Result<usize, CliError>,
) -> Result<(), CliError> {
    let mut buf = Vec::new();
    let rows = build(&mut buf)?;
    match path {
        Some(p) => {
            fs::write(p, &buf)?;
            eprintln!("wrote {what} to {} ({rows} rows)", p.display());
        }
        None => {
            io::stdout().write_all(&buf)?;
        }
    }
    Ok(())
}

fn run_road(args: RoadArgs) -> Result<i32, CliError> {
    let common = args.common.merged()?;
    let scene = common.solve_scene()?;
    write_data(args.csv.as_ref(), "road samples", |w| {
        csv::road_csv(w, scene.road())
    })?;
    Ok(0)
}

fn run_wheel(args: WheelArgs) -> Result<i32, CliError> {
    let common = args.common.merged()?;
    let wheel = common.build_wheel()?;
    let (lo, hi) = common.range();
    let n = args.samples.unwrap_or(720).max(2);
    let mut rows = Vec::with_capacity(n);
    for t in linspace(lo, hi, n) {
        let p = wheel.point(t)?;
        rows.push([t, p.x, p.y]);
    }
    write_data(args.csv.as_ref(), "wheel samples", |w| {
        csv::samples_csv(w, "theta,x,y", &rows)
    })?;
    Ok(0)
}

fn run_trace(args: TraceArgs) -> Result<i32, CliError> {
    let common = args.common.merged()?;
    let scene = common.solve_scene()?;
    let (lo, hi) = scene.range();
    let phis = linspace(lo, hi, args.samples.unwrap_or(720).max(2));
    let trace = scene.trace_point(args.mark.unwrap_or(0.0), &phis)?;
    write_data(args.csv.as_ref(), "trace samples", |w| {
        csv::trace_csv(w, &trace)
    })?;
    Ok(0)
}

fn check_line(name: &str, result: &CheckResult) {
    match result {
        CheckResult::Evaluated { max_err, pass } => println!(
            "{name} max_err={max_err:.3e} verdict={}",
            if *pass { "PASS" } else { "FAIL" }
        ),
        CheckResult::NotApplicable => println!("{name} verdict=NOT_APPLICABLE"),
    }
}

fn run_validate(args: ValidateArgs) -> Result<i32, CliError> {
    let common = args.common.merged()?;
    match args.law.unwrap_or(LawName::Canonical) {
        LawName::Section4 => {
            let tol = common.tol.unwrap_or(1e-9);
            let rep = run_section4_counterexample(tol)?;
            println!(
                "section4_arc_length max_err={:.3e} verdict={}",
                rep.arc_length_max_err,
                if rep.arc_length_equal {
                    "EQUAL"
                } else {
                    "UNEQUAL"
                }
            );
            let slipping = rep.max_residual > 1e-6;
            println!(
                "section4_no_slip max_residual={:.6} verdict={}",
                rep.max_residual,
                if slipping { "SLIPPING" } else { "NO_SLIP" }
            );
            Ok(if slipping || !rep.arc_length_equal {
                1
            } else {
                0
            })
        }
        LawName::Canonical => {
            // Slope and arc-length tolerances assume a solve step fine
            // enough for the interpolants they compare against.
            let mut cfg = common.solver_config();
            cfg.max_step = cfg.max_step.min(0.005);
            let wheel = common.build_wheel()?;
            let continuous_only = wheel.smoothness().is_continuous_only();
            let (lo, hi) = common.range();
            let scene = RollScene::solve(wheel, (lo, hi), &cfg)?;
            let law = RollingLaw::canonical(&scene);
            let pad = 1e-3 * (hi - lo);
            let grid = linspace(lo + pad, hi - pad, 500);
            let residual_tol = if continuous_only { 1e-4 } else { 1e-6 };
            let ns = noslip_report(scene.wheel(), &law, &grid, residual_tol)?;
            println!(
                "no_slip max_residual={:.3e} tol={residual_tol:.0e} method={} verdict={}",
                ns.max_residual,
                match ns.method {
                    roadwheel_core::TauRateMethod::Analytic => "analytic",
                    roadwheel_core::TauRateMethod::FiniteDifference => "finite-difference",
                },
                match ns.verdict {
                    NoSlipVerdict::NoSlip => "PASS",
                    NoSlipVerdict::Slipping => "FAIL",
                }
            );
            let tols = CorollaryTolerances::default();
            let grid41 = linspace(lo + pad, hi - pad, 41);
            let rep = verify_corollaries(&scene, &grid41, &tols)?;
            check_line("corollary_center_above", &rep.center_above);
            check_line("corollary_arc_length", &rep.arc_length);
            check_line("corollary_slope", &rep.slope);
            let mut all = ns.verdict == NoSlipVerdict::NoSlip && rep.all_pass();

            if let WheelPreset::FocalParabola { d } = common.build_preset() {
                let congruence = verify_parabola_congruence(d, &grid41, 1e-8)?;
                println!(
                    "congruence max_focus_err={:.3e} verdict={}",
                    congruence.max_focus_err,
                    if congruence.pass { "PASS" } else { "FAIL" }
                );
                all = all && congruence.pass;
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn run_crashes(args: CrashArgs) -> Result<i32, CliError> {
    let common = args.common.merged()?;
    let scene = common.solve_scene()?;
    let (lo, hi) = scene.range();
    let phis = linspace(lo, hi, args.phi_samples.unwrap_or(720).max(2));
    let (dlo, dhi) = scene.wheel().domain();
    let span = std::f64::consts::PI.min((dhi - dlo) / 2.0);
    let thetas = linspace(-span, span, args.theta_samples.unwrap_or(2000).max(2));
    let events = scene.detect_crashes(&phis, &thetas, args.crash_tol.unwrap_or(1e-9))?;
    let crashed_positions = {
        let mut phis_hit: Vec<f64> = events.iter().map(|e| e.phi).collect();
        phis_hit.dedup();
        phis_hit.len()
    };
    eprintln!(
        "{} crash events; {}/{} rolled positions have at least one penetration",
        events.len(),
        crashed_positions,
        phis.len()
    );
    write_data(args.csv.as_ref(), "crash events", |w| {
        writeln!(w, "phi,theta,depth")?;
        for ev in &events {
            writeln!(
                w,
                "{},{},{}",
                csv::format_float(ev.phi),
                csv::format_float(ev.theta_pen),
                csv::format_float(ev.depth)
            )?;
        }
        Ok(events.len())
    })?;
    Ok(0)
}

fn run_render(args: RenderArgs) -> Result<i32, CliError> {
    let common = args.common.merged()?;
    let scene = common.solve_scene()?;
    if let Some(PlotKind::ThetaX) = args.plot {
        let doc = svg::theta_x_plot_svg(&scene);
        return write_svg(args.svg.as_ref(), doc);
    }
    let wheel_at_phi = if args.no_wheel {
        Vec::new()
    } else if args.wheel_at.is_empty() {
        vec![0.0]
    } else {
        args.wheel_at.clone()
    };
    let viewport = match args.viewport.len() {
        0 => None,
        4 => Some((
            args.viewport[0],
            args.viewport[1],
            args.viewport[2],
            args.viewport[3],
        )),
        n => {
            return Err(CliError::Usage(format!(
                "viewport needs 4 comma-separated numbers, got {n}"
            )))
        }
    };
    let job = svg::RenderJob {
        road: true,
        wheel_at_phi,
        traces: args.trace_mark.clone(),
        center_path: args.center_path,
        crashes: args.crashes,
        track_copies: args.track.unwrap_or(1),
        viewport,
        stroke_width: args.stroke_width.unwrap_or(1.5),
        samples_per_curve: args.samples.unwrap_or(512),
        wheel_range: None,
    };
    let doc = svg::render_svg_string(&job, &scene)?;
    write_svg(args.svg.as_ref(), doc)
}

fn write_svg(path: Option<&PathBuf>, doc: String) -> Result<i32, CliError> {
    match path {
        Some(p) => {
            fs::write(p, doc)?;
            eprintln!("wrote {}", p.display());
        }
        None => io::stdout().write_all(doc.as_bytes())?,
    }
    Ok(0)
}

fn run_animate(args: AnimateArgs) -> Result<i32, CliError> {
    let common = args.common.merged()?;
    let scene = common.solve_scene()?;
    let job = svg::RenderJob {
        road: true,
        wheel_at_phi: Vec::new(), // per-frame position filled by animate
        traces: args.trace_mark.clone(),
        center_path: args.center_path,
        crashes: false,
        track_copies: args.track.unwrap_or(1),
        viewport: None,
        stroke_width: 1.5,
        samples_per_curve: args.samples.unwrap_or(512),
        wheel_range: None,
    };
    let dir = args.out_dir.unwrap_or_else(|| PathBuf::from("frames"));
    let files = svg::animate(&job, &scene, args.frames.unwrap_or(60), &dir)?;
    eprintln!("wrote {} frames to {}", files.len(), dir.display());
    Ok(0)
}
