//! End-to-end checks of the `roadwheel` binary and the `run_cli` entry
//! point: exit codes, CSV fidelity, SVG well-formedness, frame sequences,
//! track stitching, and config-file merging.

use std::fs;
use std::process::Command;

use roadwheel_cli::csv::parse_csv;
use roadwheel_cli::run_cli;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_roadwheel"))
}

fn cli(args: &[&str]) -> i32 {
    let mut argv = vec!["roadwheel"];
    argv.extend_from_slice(args);
    run_cli(argv)
}

/// Minimal well-formedness scan: one root svg element, a viewBox, and
/// every opened tag closed or self-closed.
fn assert_well_formed_svg(doc: &str) {
    assert!(doc.starts_with("<?xml"), "missing XML declaration");
    assert_eq!(doc.matches("<svg").count(), 1, "not exactly one root");
    assert!(doc.contains("viewBox=\""), "missing viewBox");
    assert!(doc.trim_end().ends_with("</svg>"));
    for tag in ["g", "polyline", "line", "circle"] {
        let opened = doc.matches(&format!("<{tag}")).count();
        let closed = doc.matches(&format!("</{tag}>")).count();
        let self_closed = doc
            .match_indices(&format!("<{tag}"))
            .filter(|(i, _)| doc[*i..].split_once('>').is_some_and(|(head, _)| head.ends_with('/')))
            .count();
        assert_eq!(opened, closed + self_closed, "unbalanced <{tag}>");
    }
}

fn polyline_points(doc: &str) -> Vec<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (i, _) in doc.match_indices("<polyline points=\"") {
        let rest = &doc[i + "<polyline points=\"".len()..];
        let coords = rest.split('"').next().unwrap();
        let pts = coords
            .split_whitespace()
            .map(|pair| {
                let (x, y) = pair.split_once(',').unwrap();
                (x.parse::<f64>().unwrap(), y.parse::<f64>().unwrap())
            })
            .collect();
        out.push(pts);
    }
    out
}

#[test]
fn road_csv_round_trips_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("road.csv");
    let code = cli(&[
        "road",
        "--preset",
        "unit-circle",
        "--theta-min",
        "-3.141592653589793",
        "--theta-max",
        "3.141592653589793",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&path).unwrap();
    let (header, rows) = parse_csv(&text).unwrap();
    assert_eq!(header, "theta,x,y");
    // The anchor row is literal.
    assert!(text.lines().any(|l| l == "0,0,-1"));
    for row in &rows {
        assert!((row[0] - row[1]).abs() <= 1e-10, "x = theta for the line");
        assert_eq!(row[2], -1.0);
    }
    // Re-export after parse reproduces the file byte for byte.
    let mut again = String::from("theta,x,y\n");
    for row in &rows {
        again.push_str(&format!("{},{},{}\n", row[0], row[1], row[2]));
    }
    assert_eq!(text, again);
}

#[test]
fn wheel_and_trace_csv_headers() {
    let dir = TempDir::new().unwrap();
    let wheel_path = dir.path().join("wheel.csv");
    assert_eq!(
        cli(&[
            "wheel",
            "--preset",
            "line-secant",
            "--csv",
            wheel_path.to_str().unwrap(),
        ]),
        0
    );
    let (header, rows) = parse_csv(&fs::read_to_string(&wheel_path).unwrap()).unwrap();
    assert_eq!(header, "theta,x,y");
    // The secant wheel is the line y = -1.
    for r in &rows {
        assert!((r[2] + 1.0).abs() <= 1e-12);
    }

    let trace_path = dir.path().join("trace.csv");
    assert_eq!(
        cli(&[
            "trace",
            "--preset",
            "unit-circle",
            "--theta-min",
            "0",
            "--theta-max",
            "6.283185307179586",
            "--mark",
            "0",
            "--csv",
            trace_path.to_str().unwrap(),
        ]),
        0
    );
    let (header, rows) = parse_csv(&fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert_eq!(header, "phi,px,py");
    // Cycloid: px = phi - sin phi, py = -cos phi.
    for r in &rows {
        assert!((r[1] - (r[0] - r[0].sin())).abs() <= 1e-10);
        assert!((r[2] + r[0].cos()).abs() <= 1e-10);
    }
}

#[test]
fn validate_canonical_passes_and_section4_slips() {
    assert_eq!(cli(&["validate", "--preset", "line-secant"]), 0);
    assert_eq!(
        cli(&["validate", "--preset", "line-secant", "--law", "section4"]),
        1
    );
}

#[test]
fn validate_monster_and_parabola() {
    assert_eq!(
        cli(&[
            "validate",
            "--preset",
            "weierstrass",
            "--theta-min",
            "0",
            "--theta-max",
            "6.283185307179586",
        ]),
        0
    );
    assert_eq!(
        cli(&["validate", "--preset", "focal-parabola", "--d", "0.5"]),
        0
    );
}

#[test]
fn usage_errors_exit_2() {
    // Invariant violation: a Weierstrass wheel needs at least one term.
    assert_eq!(cli(&["road", "--preset", "weierstrass", "--terms", "0"]), 2);
    // Range outside the preset domain.
    assert_eq!(
        cli(&["road", "--preset", "line-secant", "--theta-max", "1.5"]),
        2
    );
    // Unknown flag.
    assert_eq!(cli(&["road", "--bogus"]), 2);
    // Unknown subcommand.
    assert_eq!(cli(&["frobnicate"]), 2);
    // Too few animation frames.
    assert_eq!(cli(&["animate", "--frames", "1", "--out-dir", "/tmp/x"]), 2);
}

#[test]
fn io_failures_exit_3() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("plain-file");
    fs::write(&file, "not a directory").unwrap();
    let out_dir = file.join("frames");
    assert_eq!(
        cli(&[
            "animate",
            "--preset",
            "unit-circle",
            "--frames",
            "2",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]),
        3
    );
}

#[test]
fn render_produces_well_formed_svg() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("scene.svg");
    assert_eq!(
        cli(&[
            "render",
            "--preset",
            "line-secant",
            "--wheel-at",
            "0,0.5",
            "--trace-mark",
            "0",
            "--center-path",
            "--svg",
            path.to_str().unwrap(),
        ]),
        0
    );
    let doc = fs::read_to_string(&path).unwrap();
    assert_well_formed_svg(&doc);
    // Road + two wheels + one trace + center path.
    assert_eq!(polyline_points(&doc).len(), 5);
}

#[test]
fn render_monster_scene() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("monster.svg");
    assert_eq!(
        cli(&[
            "render",
            "--preset",
            "weierstrass",
            "--wheel-at",
            "0",
            "--svg",
            path.to_str().unwrap(),
        ]),
        0
    );
    assert_well_formed_svg(&fs::read_to_string(&path).unwrap());
}

#[test]
fn square_track_chains_four_arches() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("track.svg");
    assert_eq!(
        cli(&[
            "render",
            "--preset",
            "polygon",
            "--sides",
            "4",
            "--track",
            "4",
            "--svg",
            path.to_str().unwrap(),
        ]),
        0
    );
    let doc = fs::read_to_string(&path).unwrap();
    assert_well_formed_svg(&doc);
    let polys = polyline_points(&doc);
    // 4 road copies + 1 wheel.
    assert_eq!(polys.len(), 5);
    // Consecutive arch copies sit one arch width apart: 2 asinh(1).
    let pitch = roadwheel_cli::svg::catenary_arch_width(4, 1.0);
    assert!((pitch - 2.0 * 1f64.asinh()).abs() <= 1e-15);
    for w in polys[0..4].windows(2) {
        let dx = w[1][0].0 - w[0][0].0;
        assert!((dx - pitch).abs() <= 1e-4, "arch pitch {dx} vs {pitch}");
    }
    // Arch ends meet: the last point of one copy is the first of the next.
    for w in polys[0..4].windows(2) {
        let end = *w[0].last().unwrap();
        let start = w[1][0];
        assert!((end.0 - start.0).abs() <= 1e-4);
        assert!((end.1 - start.1).abs() <= 1e-4);
    }
}

#[test]
fn sawtooth_road_repeats_the_spiral_tooth() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sawtooth.svg");
    assert_eq!(
        cli(&[
            "render",
            "--preset",
            "log-spiral",
            "--k",
            "1",
            "--theta-min",
            "0",
            "--theta-max",
            "0.7853981633974483",
            "--track",
            "3",
            "--no-wheel",
            "--svg",
            path.to_str().unwrap(),
        ]),
        0
    );
    let doc = fs::read_to_string(&path).unwrap();
    let polys = polyline_points(&doc);
    assert_eq!(polys.len(), 3);
    // Tooth pitch is the road's x-advance over the quarter turn,
    // e^{pi/4} - 1; the tooth's slanted length is the spiral lobe length.
    let pitch = (std::f64::consts::FRAC_PI_4).exp() - 1.0;
    for w in polys.windows(2) {
        let dx = w[1][0].0 - w[0][0].0;
        assert!((dx - pitch).abs() <= 1e-4, "tooth pitch {dx} vs {pitch}");
    }
    let tooth = roadwheel_cli::svg::spiral_tooth_length(1.0);
    let chord_len = {
        let first = polys[0][0];
        let last = *polys[0].last().unwrap();
        ((last.0 - first.0).powi(2) + (last.1 - first.1).powi(2)).sqrt()
    };
    // The straight road piece has the same length as the spiral lobe that
    // rolls over it.
    assert!((chord_len - tooth).abs() <= 1e-3, "{chord_len} vs {tooth}");
}

#[test]
fn theta_x_plot_renders() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("plot.svg");
    assert_eq!(
        cli(&[
            "render",
            "--preset",
            "line-secant",
            "--plot",
            "theta-x",
            "--svg",
            path.to_str().unwrap(),
        ]),
        0
    );
    let doc = fs::read_to_string(&path).unwrap();
    assert_well_formed_svg(&doc);
    let polys = polyline_points(&doc);
    assert_eq!(polys.len(), 1);
    // The plot is x = cosh^{-1}(sec theta): odd, increasing, superlinear.
    // Coordinates are printed at 6 decimals, so ties are possible.
    let pts = &polys[0];
    assert!(pts.windows(2).all(|w| w[0].0 <= w[1].0));
    assert!(pts.last().unwrap().0 > pts[0].0);
    let at = |target: f64| {
        pts.iter()
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
            .unwrap()
            .1
    };
    // Nearest node is within half the sample pitch (0.005) of pi/4, and
    // x' = sec(pi/4) there, so allow ~0.01 of slack.
    assert!((at(std::f64::consts::FRAC_PI_4) - 0.881373587).abs() <= 1e-2);
}

#[test]
fn animate_writes_uniform_frames() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("frames");
    assert_eq!(
        cli(&[
            "animate",
            "--preset",
            "unit-circle",
            "--theta-min",
            "0",
            "--theta-max",
            "6.283185307179586",
            "--frames",
            "4",
            "--out-dir",
            out.to_str().unwrap(),
        ]),
        0
    );
    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        vec![
            "frame_0000.svg",
            "frame_0001.svg",
            "frame_0002.svg",
            "frame_0003.svg"
        ]
    );
    let view_boxes: Vec<String> = names
        .iter()
        .map(|n| {
            let doc = fs::read_to_string(out.join(n)).unwrap();
            assert_well_formed_svg(&doc);
            doc.split("viewBox=\"")
                .nth(1)
                .unwrap()
                .split('"')
                .next()
                .unwrap()
                .to_string()
        })
        .collect();
    assert!(view_boxes.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn config_file_fills_unset_flags_only() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("roll.conf");
    fs::write(
        &cfg,
        "# defaults for the secant wheel\npreset = line-secant\ntheta-max = 0.9\ntheta-min = -0.4\n",
    )
    .unwrap();
    let out = dir.path().join("a.csv");
    assert_eq!(
        cli(&[
            "road",
            "--config",
            cfg.to_str().unwrap(),
            "--csv",
            out.to_str().unwrap(),
        ]),
        0
    );
    let (_, rows) = parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    let last_theta = rows.last().unwrap()[0];
    let first_theta = rows.first().unwrap()[0];
    assert!((last_theta - 0.9).abs() <= 1e-12);
    assert!((first_theta + 0.4).abs() <= 1e-12);

    // An explicit flag beats the config value.
    let out2 = dir.path().join("b.csv");
    assert_eq!(
        cli(&[
            "road",
            "--config",
            cfg.to_str().unwrap(),
            "--theta-max",
            "0.5",
            "--csv",
            out2.to_str().unwrap(),
        ]),
        0
    );
    let (_, rows) = parse_csv(&fs::read_to_string(&out2).unwrap()).unwrap();
    assert!((rows.last().unwrap()[0] - 0.5).abs() <= 1e-12);

    // Malformed config lines are usage errors.
    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "what even is this line\n").unwrap();
    assert_eq!(cli(&["road", "--config", bad.to_str().unwrap()]), 2);
}

#[test]
fn crashes_subcommand_reports_events() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("crashes.csv");
    // Triangle over a multi-arch road: events expected.
    assert_eq!(
        cli(&[
            "crashes",
            "--preset",
            "polygon",
            "--sides",
            "3",
            "--theta-min",
            "-1.8",
            "--theta-max",
            "1.8",
            "--crash-tol",
            "1e-6",
            "--phi-samples",
            "60",
            "--theta-samples",
            "600",
            "--csv",
            out.to_str().unwrap(),
        ]),
        0
    );
    let (header, rows) = parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(header, "phi,theta,depth");
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[2] > 1e-6));
}

#[test]
fn binary_streams_csv_to_stdout_and_exit_codes_match() {
    // Subprocess checks: identical command, identical exit code; data on
    // stdout, diagnostics on stderr.
    let out = bin()
        .args(["road", "--preset", "unit-circle", "--theta-max", "1.2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("theta,x,y\n"));
    assert!(stdout.lines().any(|l| l == "0,0,-1"));

    let again = bin()
        .args(["road", "--preset", "unit-circle", "--theta-max", "1.2"])
        .output()
        .unwrap();
    assert_eq!(again.status.code(), Some(0));

    let slip = bin()
        .args(["validate", "--preset", "line-secant", "--law", "section4"])
        .output()
        .unwrap();
    assert_eq!(slip.status.code(), Some(1));
    let report = String::from_utf8(slip.stdout).unwrap();
    assert!(report.contains("section4_no_slip"));
    assert!(report.contains("SLIPPING"));
    let slip2 = bin()
        .args(["validate", "--preset", "line-secant", "--law", "section4"])
        .output()
        .unwrap();
    assert_eq!(slip2.status.code(), Some(1));

    let usage = bin()
        .args(["road", "--preset", "weierstrass", "--terms", "0"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(usage.stdout.is_empty());
    assert!(!usage.stderr.is_empty());

    let help = bin().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
