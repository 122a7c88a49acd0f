//! Road-wheel transforms and rolling simulation.
//!
//! A *wheel* is a positive continuous polar radius `r(theta)` drawn as
//! `W(theta) = r(theta) (sin theta, -cos theta)` about a designated center
//! at the origin. Rolling it from left to right without slipping, with the
//! center moving only horizontally, forces a unique *road*: the contact
//! curve `(x, y)` with `x(0) = 0`, `x' = r`, `y = -r`.
//!
//! The crate computes that road for any admissible wheel (including a
//! square on its catenary track and a nowhere-differentiable "monster"),
//! recovers wheels from roads by solving `x'(theta) = -f(x(theta))`,
//! simulates the rigid rolling motion with marked-point traces and crash
//! detection, and validates candidate rolling laws against the no-slip
//! condition and its consequences.

pub mod error;
pub mod geom;
mod interp;
pub mod ode;
pub mod road;
pub mod rolling;
pub mod validate;
pub mod wheel;

pub use error::{Error, Result};
pub use geom::{
    carried_velocity, pose_apply, rotate_cw, rotate_cw_quarter, Angle, Point2, RigidPose,
};
pub use ode::SolverConfig;
pub use road::{
    arc_length_road, arc_length_wheel, solve_forward, solve_inverse, InterpKind, RoadCurve,
    RoadFunction, RoadSource,
};
pub use rolling::{CrashEvent, RollScene, TracePath};
pub use validate::{
    noslip_report, noslip_residual, run_section4_counterexample, verify_corollaries,
    verify_parabola_congruence, CheckResult, CongruenceReport, CorollaryReport,
    CorollaryTolerances, NoSlipReport, NoSlipVerdict, RollingLaw, Section4Report, TauRateMethod,
    FD_TAU_STEP,
};
pub use wheel::{Smoothness, WheelPreset, WheelSpec, DEFAULT_DOMAIN_MARGIN};

/// `n` evenly spaced values from `start` to `end`, endpoints included.
/// Panics if `n < 2`.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (end - start) / ((n - 1) as f64);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                end
            } else {
                start + step * (i as f64)
            }
        })
        .collect()
}
