//! The rolling motion itself: poses of the rolled wheel, contact points,
//! the center path, traces of marked points, and crash detection.

use crate::error::{Error, Result};
use crate::geom::{pose_apply, Angle, Point2, RigidPose};
use crate::ode::SolverConfig;
use crate::road::{solve_forward, RoadCurve};
use crate::wheel::WheelSpec;

/// A wheel paired with the road solved from it. The scene's rotation range
/// is the road's sampled theta span.
#[derive(Debug, Clone)]
pub struct RollScene {
    wheel: WheelSpec,
    road: RoadCurve,
}

/// The path swept by one marked wheel point as the wheel rolls.
#[derive(Debug, Clone)]
pub struct TracePath {
    /// Polar angle of the marked point `W(mark)` on the wheel.
    pub mark: Angle,
    pub phis: Vec<Angle>,
    pub points: Vec<Point2>,
}

/// A rolled wheel sample found strictly below the road.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrashEvent {
    /// Rolled position at which the penetration occurs.
    pub phi: Angle,
    /// Wheel angle of the penetrating point.
    pub theta_pen: Angle,
    /// Vertical depth below the road, always greater than the tolerance
    /// used in the scan.
    pub depth: f64,
}

impl RollScene {
    /// Pair a wheel with a road previously solved from it.
    pub fn new(wheel: WheelSpec, road: RoadCurve) -> Result<Self> {
        let (lo, hi) = road.theta_span();
        if !wheel.contains(lo) || !wheel.contains(hi) {
            let (dlo, dhi) = wheel.domain();
            return Err(Error::OutOfDomain {
                theta: if wheel.contains(lo) { hi } else { lo },
                lo: dlo,
                hi: dhi,
            });
        }
        Ok(RollScene { wheel, road })
    }

    /// Solve the road for `wheel` over `range` and build the scene.
    pub fn solve(wheel: WheelSpec, range: (Angle, Angle), cfg: &SolverConfig) -> Result<Self> {
        let road = solve_forward(&wheel, range, cfg)?;
        Ok(RollScene { wheel, road })
    }

    pub fn wheel(&self) -> &WheelSpec {
        &self.wheel
    }

    pub fn road(&self) -> &RoadCurve {
        &self.road
    }

    pub fn range(&self) -> (Angle, Angle) {
        self.road.theta_span()
    }

    fn check_range(&self, phi: Angle) -> Result<()> {
        let (lo, hi) = self.range();
        let slack = 1e-9 * phi.abs().max(1.0);
        if !phi.is_finite() || phi < lo - slack || phi > hi + slack {
            return Err(Error::OutOfRange { value: phi, lo, hi });
        }
        Ok(())
    }

    /// The contact point `(x(theta), -r(theta))`.
    pub fn contact_point(&self, theta: Angle) -> Result<Point2> {
        self.check_range(theta)?;
        let x = self.road.x_at(theta)?;
        let r = self.wheel.radius(theta)?;
        Ok(Point2::new(x, -r))
    }

    /// The rigid pose of the wheel rolled to `phi`: spin `phi`, shift
    /// `x(phi)`.
    pub fn rolled_pose(&self, phi: Angle) -> Result<RigidPose> {
        self.check_range(phi)?;
        Ok(RigidPose::new(phi, self.road.x_at(phi)?))
    }

    /// Trace of the marked wheel point `W(mark)` over the given rolled
    /// positions.
    pub fn trace_point(&self, mark: Angle, phis: &[Angle]) -> Result<TracePath> {
        let p = self.wheel.point(mark)?;
        let mut points = Vec::with_capacity(phis.len());
        for &phi in phis {
            points.push(pose_apply(self.rolled_pose(phi)?, p));
        }
        Ok(TracePath {
            mark,
            phis: phis.to_vec(),
            points,
        })
    }

    /// The whole wheel outline rolled to `phi`, sampled at `thetas`. The
    /// sample at `theta == phi` coincides with `contact_point(phi)`.
    pub fn rolled_wheel_samples(&self, phi: Angle, thetas: &[Angle]) -> Result<Vec<Point2>> {
        let pose = self.rolled_pose(phi)?;
        let mut out = Vec::with_capacity(thetas.len());
        for &t in thetas {
            out.push(pose_apply(pose, self.wheel.point(t)?));
        }
        Ok(out)
    }

    /// The path of the center over the scene range: `(x(theta), 0)` at
    /// every road sample. Horizontal by construction.
    pub fn center_path(&self) -> Vec<Point2> {
        self.road
            .samples()
            .map(|(_, x, _)| Point2::new(x, 0.0))
            .collect()
    }

    /// Scan rolled positions for wheel samples strictly below the road.
    /// Samples whose abscissa falls outside the solved road are skipped
    /// (the road is an open-ended curve, not a wall). Events are ordered
    /// by rolled position, deepest first within each.
    pub fn detect_crashes(
        &self,
        phis: &[Angle],
        thetas: &[Angle],
        crash_tol: f64,
    ) -> Result<Vec<CrashEvent>> {
        if crash_tol.is_nan() || crash_tol <= 0.0 || !crash_tol.is_finite() {
            return Err(Error::BadParameter(format!(
                "crash tolerance {crash_tol} must be positive"
            )));
        }
        let (xlo, xhi) = self.road.x_span();
        let mut events = Vec::new();
        for &phi in phis {
            let pose = self.rolled_pose(phi)?;
            let mut per_phi: Vec<CrashEvent> = Vec::new();
            for &theta in thetas {
                let p = pose_apply(pose, self.wheel.point(theta)?);
                if p.x < xlo || p.x > xhi {
                    continue;
                }
                let ground = self.road.height_at(p.x)?;
                let depth = ground - p.y;
                if depth > crash_tol {
                    per_phi.push(CrashEvent {
                        phi,
                        theta_pen: theta,
                        depth,
                    });
                }
            }
            per_phi.sort_by(|a, b| b.depth.total_cmp(&a.depth));
            events.extend(per_phi);
        }
        Ok(events)
    }
}
