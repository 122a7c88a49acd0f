//! Executable checks of the rolling theory: the no-slip condition for a
//! candidate rolling law, the center/arc-length/slope corollaries, the
//! arc-length counterexample, and the parabola congruence property.

use std::f64::consts::{FRAC_PI_3, PI};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{carried_velocity, pose_apply, rotate_cw, Angle, Point2};
use crate::ode::{integrate_fixed, SolverConfig};
use crate::road::{arc_length_road, arc_length_wheel};
use crate::rolling::RollScene;
use crate::wheel::{Evaluator, WheelPreset, WheelSpec, DEFAULT_DOMAIN_MARGIN};

/// Step used when differentiating a law's translation numerically.
pub const FD_TAU_STEP: f64 = 1e-6;

/// How a law's translation rate is obtained; reports carry this so the
/// residual tolerance in use is visible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauRateMethod {
    /// The law supplied tau' directly.
    Analytic,
    /// Central finite difference of tau.
    FiniteDifference,
}

/// A candidate rolling law: `rho(theta)` gives the clockwise rotation that
/// brings `W(theta)` into road contact, `tau(phi)` the horizontal
/// translation after rotating by `phi`. Both must vanish at 0.
#[derive(Clone)]
pub struct RollingLaw {
    rho: Evaluator,
    tau: Evaluator,
    tau_rate: Option<Evaluator>,
    label: String,
}

impl std::fmt::Debug for RollingLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RollingLaw")
            .field("label", &self.label)
            .field("analytic_rate", &self.tau_rate.is_some())
            .finish()
    }
}

impl RollingLaw {
    pub fn new(
        label: impl Into<String>,
        rho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        tau: impl Fn(f64) -> f64 + Send + Sync + 'static,
        tau_rate: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
    ) -> Result<Self> {
        if rho(0.0).abs() > 1e-12 {
            return Err(Error::BadParameter(format!(
                "a rolling law needs rho(0) = 0, got {}",
                rho(0.0)
            )));
        }
        if tau(0.0).abs() > 1e-12 {
            return Err(Error::BadParameter(format!(
                "a rolling law needs tau(0) = 0, got {}",
                tau(0.0)
            )));
        }
        Ok(RollingLaw {
            rho: Arc::new(rho),
            tau: Arc::new(tau),
            tau_rate: tau_rate.map(Arc::from),
            label: label.into(),
        })
    }

    /// The law the theory forces: `rho(theta) = theta` with `tau = x`.
    ///
    /// For differentiable wheels `tau' = r` is supplied analytically. For a
    /// continuous-only wheel the rate is a central finite difference of tau
    /// at step `FD_TAU_STEP`-scale, evaluated in its exact integral form
    /// `(tau(phi+h) - tau(phi-h)) / 2h = mean of r over [phi-h, phi+h]` so
    /// that road interpolation error cannot leak into the difference
    /// quotient. (Differencing any stored road directly would be dominated
    /// by interpolation error at useful step sizes.)
    pub fn canonical(scene: &RollScene) -> RollingLaw {
        let road = Arc::new(scene.road().clone());
        let span = road.theta_span();
        let tau_road = Arc::clone(&road);
        let tau = move |phi: f64| tau_road.x_at(phi.clamp(span.0, span.1)).unwrap_or(f64::NAN);
        let wheel = scene.wheel().clone();
        let rate: Box<dyn Fn(f64) -> f64 + Send + Sync> = if wheel.smoothness().is_continuous_only()
        {
            let (dlo, dhi) = wheel.domain();
            let w = wheel.clone();
            Box::new(move |phi: f64| {
                let h = 5e-3 * FD_TAU_STEP; // 5e-9
                let a = (phi - h).max(dlo);
                let b = (phi + h).min(dhi);
                let nodes = integrate_fixed(&|t, _| w.radius(t), a, b, 0.0, (b - a) / 64.0);
                match nodes {
                    Ok(n) => n.last().unwrap().1 / (b - a),
                    Err(_) => f64::NAN,
                }
            })
        } else {
            let w = wheel.clone();
            Box::new(move |phi: f64| w.radius(phi).unwrap_or(f64::NAN))
        };
        RollingLaw {
            rho: Arc::new(|t| t),
            tau: Arc::new(tau),
            tau_rate: Some(Arc::from(rate)),
            label: "canonical".into(),
        }
    }

    /// The arc-length counterexample law: `rho(theta) = 2 theta`,
    /// `tau(phi) = 2 tan(phi / 2)`. Keeps wheel and road arc lengths equal
    /// on the straight-line wheel while slipping everywhere but the start.
    pub fn section4() -> RollingLaw {
        RollingLaw {
            rho: Arc::new(|t: f64| 2.0 * t),
            tau: Arc::new(|phi: f64| 2.0 * (phi / 2.0).tan()),
            tau_rate: Some(Arc::new(|phi: f64| {
                let c = (phi / 2.0).cos();
                1.0 / (c * c)
            })),
            label: "doubled rotation".into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rho_at(&self, theta: Angle) -> Angle {
        (self.rho)(theta)
    }

    pub fn tau_at(&self, phi: Angle) -> f64 {
        (self.tau)(phi)
    }

    pub fn tau_rate_method(&self) -> TauRateMethod {
        if self.tau_rate.is_some() {
            TauRateMethod::Analytic
        } else {
            TauRateMethod::FiniteDifference
        }
    }

    /// tau'(phi): the supplied rate, else a central difference of tau.
    pub fn tau_rate_at(&self, phi: Angle) -> f64 {
        match &self.tau_rate {
            Some(rate) => rate(phi),
            None => {
                let h = FD_TAU_STEP * phi.abs().max(1.0);
                ((self.tau)(phi + h) - (self.tau)(phi - h)) / (2.0 * h)
            }
        }
    }
}

/// Residual of the no-slip condition at one wheel angle: the speed of the
/// wheel point `W(theta)` at the moment the law says it touches the road.
/// Needs no derivative of `r`, so it applies to continuous-only wheels.
pub fn noslip_residual(wheel: &WheelSpec, law: &RollingLaw, theta: Angle) -> Result<f64> {
    let p = wheel.point(theta)?;
    let phi = law.rho_at(theta);
    let v = carried_velocity(p, phi, law.tau_rate_at(phi));
    Ok(v.norm())
}

/// Verdict of a no-slip scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoSlipVerdict {
    NoSlip,
    Slipping,
}

/// Residuals of a law over a grid of wheel angles.
#[derive(Debug, Clone)]
pub struct NoSlipReport {
    pub thetas: Vec<Angle>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tol: f64,
    pub method: TauRateMethod,
    pub verdict: NoSlipVerdict,
}

/// Evaluate the residual at every grid angle and compare the maximum to
/// `tol`.
pub fn noslip_report(
    wheel: &WheelSpec,
    law: &RollingLaw,
    thetas: &[Angle],
    tol: f64,
) -> Result<NoSlipReport> {
    if thetas.is_empty() || tol.is_nan() || tol <= 0.0 {
        return Err(Error::BadParameter(
            "no-slip scan needs a nonempty grid and a positive tolerance".into(),
        ));
    }
    let mut residuals = Vec::with_capacity(thetas.len());
    let mut max_residual = 0.0f64;
    for &t in thetas {
        let r = noslip_residual(wheel, law, t)?;
        max_residual = max_residual.max(r);
        residuals.push(r);
    }
    Ok(NoSlipReport {
        thetas: thetas.to_vec(),
        residuals,
        max_residual,
        tol,
        method: law.tau_rate_method(),
        verdict: if max_residual <= tol {
            NoSlipVerdict::NoSlip
        } else {
            NoSlipVerdict::Slipping
        },
    })
}

/// Outcome of one corollary check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckResult {
    Evaluated {
        max_err: f64,
        pass: bool,
    },
    /// The quantity does not exist for this wheel (arc length or slope of
    /// a continuous-only wheel).
    NotApplicable,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        matches!(
            self,
            CheckResult::Evaluated { pass: true, .. } | CheckResult::NotApplicable
        )
    }

    pub fn max_err(&self) -> Option<f64> {
        match self {
            CheckResult::Evaluated { max_err, .. } => Some(*max_err),
            CheckResult::NotApplicable => None,
        }
    }
}

/// Per-check tolerances for the corollary suite.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryTolerances {
    /// Center directly above the contact point.
    pub center_above: f64,
    /// Wheel arc length equals road arc length from the anchor.
    pub arc_length: f64,
    /// Road slope equals wheel slope at contact.
    pub slope: f64,
}

impl Default for CorollaryTolerances {
    fn default() -> Self {
        CorollaryTolerances {
            center_above: 1e-12,
            arc_length: 1e-8,
            slope: 1e-6,
        }
    }
}

/// Results of the corollary suite over a grid.
#[derive(Debug, Clone)]
pub struct CorollaryReport {
    pub center_above: CheckResult,
    pub arc_length: CheckResult,
    pub slope: CheckResult,
}

impl CorollaryReport {
    pub fn all_pass(&self) -> bool {
        self.center_above.passed() && self.arc_length.passed() && self.slope.passed()
    }
}

/// Run the three corollary checks on a scene over a grid of contact
/// angles.
///
/// * center: |center.x - contact.x| with the center carried by the rolled
///   pose (its height is zero by construction and asserted exactly);
/// * arc length: |wheel route - road route| on [0, theta], skipped for
///   continuous-only wheels;
/// * slope: pairwise agreement of the road interpolant slope, the wheel
///   formula -r'/r, and the rolled tangent direction, skipped at cusps and
///   wherever r' does not exist.
pub fn verify_corollaries(
    scene: &RollScene,
    grid: &[Angle],
    tols: &CorollaryTolerances,
) -> Result<CorollaryReport> {
    if grid.is_empty() {
        return Err(Error::BadParameter("corollary grid is empty".into()));
    }
    let wheel = scene.wheel();
    let road = scene.road();
    let cfg = road.solver_config();
    let continuous_only = wheel.smoothness().is_continuous_only();

    let mut center_err = 0.0f64;
    let mut arc_err = 0.0f64;
    let mut slope_err = 0.0f64;
    let mut arc_checked = false;
    let mut slope_checked = false;

    for &theta in grid {
        let contact = scene.contact_point(theta)?;
        let center = pose_apply(scene.rolled_pose(theta)?, Point2::ORIGIN);
        center_err = center_err.max((center.x - contact.x).abs());
        debug_assert_eq!(center.y, 0.0);

        if !continuous_only {
            let lw = arc_length_wheel(wheel, 0.0, theta, &cfg)?;
            let lr = arc_length_road(road, 0.0, theta)?;
            arc_err = arc_err.max((lw - lr).abs());
            arc_checked = true;

            if let Some(rr) = wheel.radius_rate(theta)? {
                let r = wheel.radius(theta)?;
                let wheel_slope = -rr / r;
                let road_slope = road.slope_at(theta)?;
                // Tangent of the rolled wheel at contact via the pose map.
                let (s, c) = theta.sin_cos();
                let w_deriv = Point2::new(rr * s + r * c, -rr * c + r * s);
                let rolled = rotate_cw(theta, w_deriv);
                let rolled_slope = rolled.y / rolled.x;
                slope_err = slope_err
                    .max((road_slope - wheel_slope).abs())
                    .max((road_slope - rolled_slope).abs())
                    .max((wheel_slope - rolled_slope).abs());
                slope_checked = true;
            }
        }
    }

    let evaluated = |max_err: f64, tol: f64| CheckResult::Evaluated {
        max_err,
        pass: max_err <= tol,
    };
    Ok(CorollaryReport {
        center_above: evaluated(center_err, tols.center_above),
        arc_length: if arc_checked {
            evaluated(arc_err, tols.arc_length)
        } else {
            CheckResult::NotApplicable
        },
        slope: if slope_checked {
            evaluated(slope_err, tols.slope)
        } else {
            CheckResult::NotApplicable
        },
    })
}

/// Outcome of the arc-length counterexample scenario.
#[derive(Debug, Clone, Copy)]
pub struct Section4Report {
    /// Largest violation of road-length == wheel-length over the scan.
    pub arc_length_max_err: f64,
    /// Whether the arc-length condition held to the given tolerance.
    pub arc_length_equal: bool,
    /// Largest no-slip residual over the scan; far from zero here.
    pub max_residual: f64,
}

/// Run the built-in counterexample: the straight-line wheel driven by the
/// doubled-rotation law. Arc lengths match (`tau(2 theta) - tan theta`
/// equals the wheel length `tan theta`) yet the motion slips, so matching
/// lengths alone cannot define rolling.
pub fn run_section4_counterexample(tol: f64) -> Result<Section4Report> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::BadParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let wheel = WheelSpec::from_preset(&WheelPreset::LineSecant, DEFAULT_DOMAIN_MARGIN)?;
    let law = RollingLaw::section4();
    let mut arc_err = 0.0f64;
    let mut max_residual = 0.0f64;
    let n = 241;
    for i in 0..n {
        let theta = FRAC_PI_3 * (i as f64) / ((n - 1) as f64);
        // Road length to the contact point is tau(2 theta) - tan theta;
        // wheel length is tan theta.
        let road_len = law.tau_at(2.0 * theta) - theta.tan();
        arc_err = arc_err.max((road_len - theta.tan()).abs());
        max_residual = max_residual.max(noslip_residual(&wheel, &law, theta)?);
    }
    Ok(Section4Report {
        arc_length_max_err: arc_err,
        arc_length_equal: arc_err <= tol,
        max_residual,
    })
}

/// Outcome of the wheel-congruent-to-road check for the focal parabola.
#[derive(Debug, Clone, Copy)]
pub struct CongruenceReport {
    /// Largest violation of the focus-directrix property: for each contact
    /// point P', |dist(F, P') - |y(P')|| with F = (0, -d) and the x-axis as
    /// directrix.
    pub max_focus_err: f64,
    /// Largest violation of |O'P'| = r(theta), the rolled image of the
    /// center-to-point segment keeping its length.
    pub max_center_dist_err: f64,
    pub pass: bool,
}

/// Check that the parabola wheel's road is the congruent parabola: every
/// contact point is equidistant from the focus `(0, -d)` and the x-axis,
/// and the vertical drop from the rolled center has length `r(theta)`.
pub fn verify_parabola_congruence(d: f64, grid: &[Angle], tol: f64) -> Result<CongruenceReport> {
    if d.is_nan() || d <= 0.0 || !d.is_finite() {
        return Err(Error::BadParameter(format!(
            "focal parameter {d} must be positive"
        )));
    }
    if grid.is_empty() || tol.is_nan() || tol <= 0.0 {
        return Err(Error::BadParameter(
            "congruence check needs a nonempty grid and a positive tolerance".into(),
        ));
    }
    let wheel = WheelSpec::from_preset(&WheelPreset::FocalParabola { d }, DEFAULT_DOMAIN_MARGIN)?;
    let mut lo: f64 = 0.0;
    let mut hi: f64 = 0.0;
    for &t in grid {
        lo = lo.min(t);
        hi = hi.max(t);
    }
    let pad = 0.01;
    let range = ((lo - pad).min(-pad), (hi + pad).max(pad));
    if range.0 <= -PI + DEFAULT_DOMAIN_MARGIN || range.1 >= PI - DEFAULT_DOMAIN_MARGIN {
        return Err(Error::OutOfRange {
            value: if range.0 <= -PI + DEFAULT_DOMAIN_MARGIN {
                range.0
            } else {
                range.1
            },
            lo: -PI + DEFAULT_DOMAIN_MARGIN,
            hi: PI - DEFAULT_DOMAIN_MARGIN,
        });
    }
    let scene = RollScene::solve(wheel, range, &SolverConfig::default())?;
    let focus = Point2::new(0.0, -d);
    let mut focus_err = 0.0f64;
    let mut center_err = 0.0f64;
    for &theta in grid {
        let p = scene.contact_point(theta)?;
        let r = scene.wheel().radius(theta)?;
        focus_err = focus_err.max((focus.dist(p) - p.y.abs()).abs());
        let rolled_center = Point2::new(p.x, 0.0);
        center_err = center_err.max((rolled_center.dist(p) - r).abs());
    }
    Ok(CongruenceReport {
        max_focus_err: focus_err,
        max_center_dist_err: center_err,
        pass: focus_err <= tol && center_err <= tol,
    })
}
