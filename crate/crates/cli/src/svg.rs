//! Standalone SVG output: a scene still (road, rolled wheels, traces,
//! center path, crash markers) or a frame sequence sharing one viewBox so
//! the frames compose into a stable animation.
//!
//! Model coordinates are drawn through `translate(..) scale(s, -s)`, so
//! model y < 0 (the road) renders below the y = 0 axis line, matching the
//! geometry on paper.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use roadwheel_core::{linspace, Point2, RollScene};

use crate::CliError;

/// What to draw and how.
#[derive(Debug, Clone)]
pub struct RenderJob {
    /// Draw the road polyline (with `track_copies` translated copies).
    pub road: bool,
    /// Rolled wheel outlines at these positions.
    pub wheel_at_phi: Vec<f64>,
    /// Traces of the wheel points W(mark) for these marks.
    pub traces: Vec<f64>,
    /// Draw the center path segment.
    pub center_path: bool,
    /// Scan for and mark crash events.
    pub crashes: bool,
    /// Number of road copies, translated by the road's x-span; 1 draws the
    /// road once. Arches chain into a track, sawtooth segments into teeth.
    pub track_copies: u32,
    /// Explicit model viewport (xmin, xmax, ymin, ymax); autosized when
    /// absent.
    pub viewport: Option<(f64, f64, f64, f64)>,
    /// Stroke width in output pixels.
    pub stroke_width: f64,
    /// Samples per drawn curve.
    pub samples_per_curve: usize,
    /// Theta range for the wheel outline; defaults to the wheel's domain
    /// clamped to one turn.
    pub wheel_range: Option<(f64, f64)>,
}

impl Default for RenderJob {
    fn default() -> Self {
        RenderJob {
            road: true,
            wheel_at_phi: vec![0.0],
            traces: Vec::new(),
            center_path: false,
            crashes: false,
            track_copies: 1,
            viewport: None,
            stroke_width: 1.5,
            samples_per_curve: 512,
            wheel_range: None,
        }
    }
}

impl RenderJob {
    fn validate(&self) -> Result<(), CliError> {
        if self.samples_per_curve < 16 {
            return Err(CliError::Usage(format!(
                "samples per curve must be at least 16, got {}",
                self.samples_per_curve
            )));
        }
        if self.track_copies < 1 {
            return Err(CliError::Usage("track copies must be at least 1".into()));
        }
        if self.stroke_width.is_nan() || self.stroke_width <= 0.0 {
            return Err(CliError::Usage("stroke width must be positive".into()));
        }
        if let Some((x0, x1, y0, y1)) = self.viewport {
            if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
                return Err(CliError::Usage(format!(
                    "viewport ({x0}, {x1}, {y0}, {y1}) is degenerate"
                )));
            }
        }
        Ok(())
    }

    fn wheel_thetas(&self, scene: &RollScene) -> Vec<f64> {
        let (dlo, dhi) = scene.wheel().domain();
        let (lo, hi) = self.wheel_range.unwrap_or((
            dlo.max(-std::f64::consts::PI),
            dhi.min(std::f64::consts::PI),
        ));
        linspace(lo, hi, self.samples_per_curve)
    }
}

/// Horizontal pitch of one catenary arch of a regular polygon's road:
/// the x-advance across a single side, `2 a atanh(sin(pi/n))`. Translating
/// arch copies by this pitch chains them into the track the polygon rolls
/// along.
pub fn catenary_arch_width(sides: u32, apothem: f64) -> f64 {
    2.0 * apothem * (std::f64::consts::PI / f64::from(sides)).sin().atanh()
}

/// Arc length of one logarithmic-spiral lobe (a quarter turn), which sets
/// the tooth size when the spiral's tilted-line road is repeated into a
/// sawtooth: `sqrt(1 + k^2) (e^{k pi/4} - 1) / k`.
pub fn spiral_tooth_length(k: f64) -> f64 {
    (1.0 + k * k).sqrt() * ((k * std::f64::consts::FRAC_PI_4).exp() - 1.0) / k
}

struct Bounds {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Bounds {
    fn empty() -> Self {
        Bounds {
            xmin: f64::INFINITY,
            xmax: f64::NEG_INFINITY,
            ymin: f64::INFINITY,
            ymax: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, p: Point2) {
        self.xmin = self.xmin.min(p.x);
        self.xmax = self.xmax.max(p.x);
        self.ymin = self.ymin.min(p.y);
        self.ymax = self.ymax.max(p.y);
    }

    fn add_all<'a>(&mut self, pts: impl IntoIterator<Item = &'a Point2>) {
        for p in pts {
            self.add(*p);
        }
    }

    fn widen(&mut self, frac: f64) {
        let dx = (self.xmax - self.xmin).max(1e-9) * frac;
        let dy = (self.ymax - self.ymin).max(1e-9) * frac;
        self.xmin -= dx;
        self.xmax += dx;
        self.ymin -= dy;
        self.ymax += dy;
    }
}

struct SceneGeometry {
    road_copies: Vec<Vec<Point2>>,
    wheels: Vec<Vec<Point2>>,
    traces: Vec<Vec<Point2>>,
    center: Vec<Point2>,
    crash_points: Vec<Point2>,
}

fn collect_geometry(job: &RenderJob, scene: &RollScene) -> Result<SceneGeometry, CliError> {
    let road = scene.road();
    let mut road_copies = Vec::new();
    if job.road {
        let base: Vec<Point2> = road.samples().map(|(_, x, y)| Point2::new(x, y)).collect();
        let (xlo, xhi) = road.x_span();
        let pitch = xhi - xlo;
        for copy in 0..job.track_copies {
            let dx = pitch * f64::from(copy);
            road_copies.push(base.iter().map(|p| Point2::new(p.x + dx, p.y)).collect());
        }
    }

    let wheel_thetas = job.wheel_thetas(scene);
    let mut wheels = Vec::new();
    for &phi in &job.wheel_at_phi {
        wheels.push(scene.rolled_wheel_samples(phi, &wheel_thetas)?);
    }

    let (lo, hi) = scene.range();
    let phis = linspace(lo, hi, job.samples_per_curve);
    let mut traces = Vec::new();
    for &mark in &job.traces {
        traces.push(scene.trace_point(mark, &phis)?.points);
    }

    let center = if job.center_path {
        scene.center_path()
    } else {
        Vec::new()
    };

    let mut crash_points = Vec::new();
    if job.crashes {
        let phis = linspace(lo, hi, 240);
        let thetas = job.wheel_thetas(scene);
        for ev in scene.detect_crashes(&phis, &thetas, 1e-9)? {
            let pose = scene.rolled_pose(ev.phi)?;
            let p = scene.wheel().point(ev.theta_pen)?;
            crash_points.push(roadwheel_core::pose_apply(pose, p));
        }
    }

    Ok(SceneGeometry {
        road_copies,
        wheels,
        traces,
        center,
        crash_points,
    })
}

fn polyline(out: &mut String, pts: &[Point2], stroke: &str, width: f64) {
    if pts.len() < 2 {
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|p| format!("{:.6},{:.6}", p.x, p.y))
        .collect();
    let _ = writeln!(
        out,
        r#"  <polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}" vector-effect="non-scaling-stroke"/>"#,
        coords.join(" ")
    );
}

/// Render the scene to an SVG document string.
pub fn render_svg_string(job: &RenderJob, scene: &RollScene) -> Result<String, CliError> {
    job.validate()?;
    let geo = collect_geometry(job, scene)?;

    let bounds = match job.viewport {
        Some((x0, x1, y0, y1)) => Bounds {
            xmin: x0,
            xmax: x1,
            ymin: y0,
            ymax: y1,
        },
        None => {
            let mut b = Bounds::empty();
            for c in &geo.road_copies {
                b.add_all(c);
            }
            for w in &geo.wheels {
                b.add_all(w);
            }
            for t in &geo.traces {
                b.add_all(t);
            }
            b.add_all(&geo.center);
            b.add_all(&geo.crash_points);
            if !b.xmin.is_finite() {
                // Nothing requested: fall back to the road span so the
                // axes still mean something.
                let (xlo, xhi) = scene.road().x_span();
                b.add(Point2::new(xlo, -1.0));
                b.add(Point2::new(xhi, 1.0));
            }
            b.add(Point2::new(b.xmin, 0.0)); // keep the axis visible
            b.widen(0.05);
            b
        }
    };

    let width_px = 800.0;
    let scale = width_px / (bounds.xmax - bounds.xmin);
    let height_px = ((bounds.ymax - bounds.ymin) * scale).max(8.0);
    let tx = -bounds.xmin * scale;
    let ty = bounds.ymax * scale;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width_px:.0}" height="{height_px:.2}" viewBox="0 0 {width_px:.0} {height_px:.2}">"#
    );
    let _ = writeln!(
        out,
        r#"<g transform="translate({tx:.6},{ty:.6}) scale({scale:.6},-{scale:.6})">"#
    );
    // Axis at model y = 0.
    let _ = writeln!(
        out,
        r##"  <line x1="{:.6}" y1="0" x2="{:.6}" y2="0" stroke="#bbbbbb" stroke-width="{}" vector-effect="non-scaling-stroke"/>"##,
        bounds.xmin,
        bounds.xmax,
        job.stroke_width * 0.5
    );
    for c in &geo.road_copies {
        polyline(&mut out, c, "#303030", job.stroke_width);
    }
    for w in &geo.wheels {
        polyline(&mut out, w, "#1f6fb2", job.stroke_width);
    }
    for t in &geo.traces {
        polyline(&mut out, t, "#d07000", job.stroke_width);
    }
    polyline(&mut out, &geo.center, "#2e8b57", job.stroke_width);
    let marker_r = (bounds.xmax - bounds.xmin) * 0.004;
    for p in &geo.crash_points {
        let _ = writeln!(
            out,
            r##"  <circle cx="{:.6}" cy="{:.6}" r="{marker_r:.6}" fill="#c0392b"/>"##,
            p.x, p.y
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

/// Render to a file.
pub fn render_svg(job: &RenderJob, scene: &RollScene, path: &Path) -> Result<(), CliError> {
    let doc = render_svg_string(job, scene)?;
    fs::write(path, doc)?;
    Ok(())
}

/// A plot of the rotation-to-advance relation: x(theta) against theta.
pub fn theta_x_plot_svg(scene: &RollScene) -> String {
    let pts: Vec<Point2> = scene
        .road()
        .samples()
        .map(|(t, x, _)| Point2::new(t, x))
        .collect();
    let mut b = Bounds::empty();
    b.add_all(&pts);
    b.add(Point2::new(b.xmin, 0.0));
    b.widen(0.05);
    let width_px = 800.0;
    let scale = width_px / (b.xmax - b.xmin);
    let height_px = ((b.ymax - b.ymin) * scale).max(8.0);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width_px:.0}" height="{height_px:.2}" viewBox="0 0 {width_px:.0} {height_px:.2}">"#
    );
    let _ = writeln!(
        out,
        r#"<g transform="translate({:.6},{:.6}) scale({scale:.6},-{scale:.6})">"#,
        -b.xmin * scale,
        b.ymax * scale
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{:.6}" y1="0" x2="{:.6}" y2="0" stroke="#bbbbbb" stroke-width="0.75" vector-effect="non-scaling-stroke"/>"##,
        b.xmin, b.xmax
    );
    polyline(&mut out, &pts, "#1f6fb2", 1.5);
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

/// Write `phi_count >= 2` frames at equally spaced rolled positions across
/// the scene range, all sharing one viewBox computed from the union of the
/// frames' geometry.
pub fn animate(
    job: &RenderJob,
    scene: &RollScene,
    phi_count: usize,
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    job.validate()?;
    if phi_count < 2 {
        return Err(CliError::Usage(format!(
            "an animation needs at least 2 frames, got {phi_count}"
        )));
    }
    let (lo, hi) = scene.range();
    let phis = linspace(lo, hi, phi_count);

    // Global bounds across all frames unless the caller pinned a viewport.
    let viewport = match job.viewport {
        Some(v) => v,
        None => {
            let mut b = Bounds::empty();
            for &phi in &phis {
                let frame_job = RenderJob {
                    wheel_at_phi: vec![phi],
                    ..job.clone()
                };
                let geo = collect_geometry(&frame_job, scene)?;
                for c in &geo.road_copies {
                    b.add_all(c);
                }
                for w in &geo.wheels {
                    b.add_all(w);
                }
                for t in &geo.traces {
                    b.add_all(t);
                }
                b.add_all(&geo.center);
            }
            b.add(Point2::new(b.xmin, 0.0));
            b.widen(0.05);
            (b.xmin, b.xmax, b.ymin, b.ymax)
        }
    };

    fs::create_dir_all(dir)?;
    let mut files = Vec::with_capacity(phi_count);
    for (i, &phi) in phis.iter().enumerate() {
        let frame_job = RenderJob {
            wheel_at_phi: vec![phi],
            viewport: Some(viewport),
            ..job.clone()
        };
        let path = dir.join(format!("frame_{i:04}.svg"));
        render_svg(&frame_job, scene, &path)?;
        files.push(path);
    }
    Ok(files)
}
