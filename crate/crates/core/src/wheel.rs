//! Polar wheels and the preset catalog.
//!
//! A wheel is a positive continuous radius function `r(theta)` on a closed
//! interval containing zero, drawn in the plane as
//! `W(theta) = r(theta) * (sin theta, -cos theta)` so that `W(0)` sits
//! directly below the designated center at the origin.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Angle, Point2};

pub(crate) type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Smoothness class of the radius function. Drives derivative handling,
/// road interpolation order, and whether arc length exists at all.
#[derive(Debug, Clone, PartialEq)]
pub enum Smoothness {
    /// Differentiable everywhere on the domain.
    Analytic,
    /// Continuously differentiable between the listed breakpoints; the
    /// derivative is undefined at the breakpoints themselves.
    PiecewiseC1 { breakpoints: Vec<f64> },
    /// Continuous but nowhere differentiable.
    ContinuousOnly,
}

impl Smoothness {
    pub fn is_continuous_only(&self) -> bool {
        matches!(self, Smoothness::ContinuousOnly)
    }

    pub fn breakpoints(&self) -> &[f64] {
        match self {
            Smoothness::PiecewiseC1 { breakpoints } => breakpoints,
            _ => &[],
        }
    }
}

/// Default margin carved off the open endpoints of a preset's natural
/// domain (the secant line, the offset circle and the focal parabola blow
/// up or vanish at their endpoints).
pub const DEFAULT_DOMAIN_MARGIN: f64 = 0.2;

/// Wheels whose natural domain is the whole real line are truncated here.
const UNBOUNDED: (f64, f64) = (-4.0 * PI, 4.0 * PI);

/// Grid density of the positivity audit run at construction.
const AUDIT_POINTS: usize = 10_000;

/// Relative slack when snapping an angle to a breakpoint.
const BREAKPOINT_SNAP: f64 = 1e-12;

/// The wheel bestiary.
#[derive(Debug, Clone, PartialEq)]
pub enum WheelPreset {
    /// r = 1; rolls on the line y = -1.
    UnitCircle,
    /// r = sec(theta): the straight line y = -1. Rolls on an inverted
    /// catenary.
    LineSecant,
    /// A regular polygon with the given apothem, centered at the origin.
    /// Piecewise secant with cusps where sides meet.
    RegularPolygon { sides: u32, apothem: f64 },
    /// r = sech(theta): a Poinsot spiral winding into the origin. Rolls on
    /// a single arch of -cos(x).
    PoinsotSech,
    /// r = e^{k theta}: a logarithmic spiral. Rolls down the tilted line
    /// y = -kx - 1.
    LogSpiral { k: f64 },
    /// r = 2 cos(theta): a unit circle whose designated center lies on its
    /// circumference. Rolls inside a circle of radius 2.
    OffsetCircle,
    /// r = d / (1 + cos theta): a parabola with the center at its focus.
    /// Its road is its own mirror image.
    FocalParabola { d: f64 },
    /// r = level_offset - sum a^{-n} cos(b^n theta), n < terms: a truncated
    /// Weierstrass series shifted to stay positive. Continuous but (in the
    /// limit) nowhere differentiable.
    Weierstrass {
        a: f64,
        b: f64,
        level_offset: f64,
        terms: u32,
    },
}

/// A polar wheel: radius evaluator, optional derivative, closed domain and
/// smoothness class. Immutable after construction; evaluators are pure, so
/// a `WheelSpec` can be shared freely across threads.
#[derive(Clone)]
pub struct WheelSpec {
    radius: Evaluator,
    radius_rate: Option<Evaluator>,
    domain: (f64, f64),
    smoothness: Smoothness,
    label: String,
}

impl fmt::Debug for WheelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WheelSpec")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl WheelSpec {
    /// Build a wheel from raw evaluators. Audits positivity of the radius
    /// on a dense grid over the domain and rejects non-positive or
    /// non-finite values.
    pub fn new(
        label: impl Into<String>,
        domain: (f64, f64),
        smoothness: Smoothness,
        radius: impl Fn(f64) -> f64 + Send + Sync + 'static,
        radius_rate: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
    ) -> Result<Self> {
        let (lo, hi) = domain;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::BadParameter(format!(
                "wheel domain [{lo}, {hi}] must be a nondegenerate finite interval"
            )));
        }
        if lo > 0.0 || hi < 0.0 {
            return Err(Error::BadParameter(format!(
                "wheel domain [{lo}, {hi}] must contain 0"
            )));
        }
        if let Smoothness::PiecewiseC1 { breakpoints } = &smoothness {
            let inside = breakpoints.iter().all(|b| lo < *b && *b < hi);
            let increasing = breakpoints.windows(2).all(|w| w[0] < w[1]);
            if !inside || !increasing {
                return Err(Error::BadParameter(
                    "breakpoints must be strictly increasing and strictly inside the domain".into(),
                ));
            }
        }
        for i in 0..=AUDIT_POINTS {
            let t = lo + (hi - lo) * (i as f64) / (AUDIT_POINTS as f64);
            let v = radius(t);
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::NonPositiveRadius { theta: t, value: v });
            }
        }
        Ok(WheelSpec {
            radius: Arc::new(radius),
            radius_rate: radius_rate.map(Arc::from),
            domain,
            smoothness,
            label: label.into(),
        })
    }

    /// Build one of the preset wheels. `domain_margin` shrinks the open
    /// endpoints of presets whose natural domain is open (the secant line,
    /// the offset circle, the focal parabola) and must be positive there;
    /// it is ignored for presets with closed or unbounded natural domains.
    pub fn from_preset(preset: &WheelPreset, domain_margin: f64) -> Result<Self> {
        if !domain_margin.is_finite() || domain_margin < 0.0 {
            return Err(Error::BadParameter(format!(
                "domain margin {domain_margin} must be finite and non-negative"
            )));
        }
        let needs_margin = matches!(
            preset,
            WheelPreset::LineSecant | WheelPreset::OffsetCircle | WheelPreset::FocalParabola { .. }
        );
        if needs_margin && domain_margin == 0.0 {
            return Err(Error::BadParameter(
                "this preset's natural domain is open; a positive domain margin is required".into(),
            ));
        }
        match *preset {
            WheelPreset::UnitCircle => WheelSpec::new(
                "unit circle",
                UNBOUNDED,
                Smoothness::Analytic,
                |_| 1.0,
                Some(Box::new(|_| 0.0)),
            ),
            WheelPreset::LineSecant => {
                let half = PI / 2.0 - domain_margin;
                if half <= 0.0 {
                    return Err(Error::BadParameter(format!(
                        "domain margin {domain_margin} leaves no domain for the secant line"
                    )));
                }
                WheelSpec::new(
                    "line y = -1 (secant wheel)",
                    (-half, half),
                    Smoothness::Analytic,
                    |t: f64| 1.0 / t.cos(),
                    Some(Box::new(|t: f64| t.tan() / t.cos())),
                )
            }
            WheelPreset::RegularPolygon { sides, apothem } => {
                if sides < 3 {
                    return Err(Error::BadParameter(format!(
                        "a polygon wheel needs at least 3 sides, got {sides}"
                    )));
                }
                if !apothem.is_finite() || apothem <= 0.0 {
                    return Err(Error::BadParameter(format!(
                        "polygon apothem {apothem} must be positive"
                    )));
                }
                let pitch = 2.0 * PI / sides as f64;
                // Offset of theta from the nearest side midpoint.
                let local = move |t: f64| t - pitch * (t / pitch).round();
                let r = move |t: f64| apothem / local(t).cos();
                let rate = move |t: f64| {
                    let d = local(t);
                    apothem * d.tan() / d.cos()
                };
                // Cusps at odd multiples of pi/sides.
                let half_pitch = pitch / 2.0;
                let mut breakpoints = Vec::new();
                let mut k = (UNBOUNDED.0 / half_pitch).ceil() as i64;
                while (k as f64) * half_pitch < UNBOUNDED.1 {
                    if k.rem_euclid(2) != 0 {
                        let b = k as f64 * half_pitch;
                        if b > UNBOUNDED.0 && b < UNBOUNDED.1 {
                            breakpoints.push(b);
                        }
                    }
                    k += 1;
                }
                WheelSpec::new(
                    format!("regular {sides}-gon (apothem {apothem})"),
                    UNBOUNDED,
                    Smoothness::PiecewiseC1 { breakpoints },
                    r,
                    Some(Box::new(rate)),
                )
            }
            WheelPreset::PoinsotSech => WheelSpec::new(
                "Poinsot spiral (sech wheel)",
                UNBOUNDED,
                Smoothness::Analytic,
                |t: f64| 1.0 / t.cosh(),
                Some(Box::new(|t: f64| -t.tanh() / t.cosh())),
            ),
            WheelPreset::LogSpiral { k } => {
                if !k.is_finite() {
                    return Err(Error::BadParameter(format!(
                        "log spiral pitch {k} must be finite"
                    )));
                }
                WheelSpec::new(
                    format!("logarithmic spiral (k = {k})"),
                    UNBOUNDED,
                    Smoothness::Analytic,
                    move |t: f64| (k * t).exp(),
                    Some(Box::new(move |t: f64| k * (k * t).exp())),
                )
            }
            WheelPreset::OffsetCircle => {
                let half = PI / 2.0 - domain_margin;
                if half <= 0.0 {
                    return Err(Error::BadParameter(format!(
                        "domain margin {domain_margin} leaves no domain for the offset circle"
                    )));
                }
                WheelSpec::new(
                    "circle with center on its circumference",
                    (-half, half),
                    Smoothness::Analytic,
                    |t: f64| 2.0 * t.cos(),
                    Some(Box::new(|t: f64| -2.0 * t.sin())),
                )
            }
            WheelPreset::FocalParabola { d } => {
                if !d.is_finite() || d <= 0.0 {
                    return Err(Error::BadParameter(format!(
                        "parabola focal parameter {d} must be positive"
                    )));
                }
                let half = PI - domain_margin;
                if half <= 0.0 {
                    return Err(Error::BadParameter(format!(
                        "domain margin {domain_margin} leaves no domain for the parabola"
                    )));
                }
                WheelSpec::new(
                    format!("focal parabola (d = {d})"),
                    (-half, half),
                    Smoothness::Analytic,
                    move |t: f64| d / (1.0 + t.cos()),
                    Some(Box::new(move |t: f64| {
                        let c = 1.0 + t.cos();
                        d * t.sin() / (c * c)
                    })),
                )
            }
            WheelPreset::Weierstrass {
                a,
                b,
                level_offset,
                terms,
            } => {
                if terms < 1 {
                    return Err(Error::BadParameter(format!(
                        "Weierstrass series needs at least one term, got {terms}"
                    )));
                }
                if !(a.is_finite() && b.is_finite() && b > a && a > 1.0) {
                    return Err(Error::BadParameter(format!(
                        "Weierstrass parameters must satisfy b > a > 1, got a = {a}, b = {b}"
                    )));
                }
                if !level_offset.is_finite() {
                    return Err(Error::BadParameter("level offset must be finite".into()));
                }
                let r = move |t: f64| level_offset - weierstrass_sum(t, a, b, terms);
                WheelSpec::new(
                    format!(
                        "monster wheel (a = {a}, b = {b}, offset = {level_offset}, {terms} terms)"
                    ),
                    UNBOUNDED,
                    Smoothness::ContinuousOnly,
                    r,
                    None,
                )
            }
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn smoothness(&self) -> &Smoothness {
        &self.smoothness
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True when `theta` lies in the domain, with a whisker of floating
    /// slack so that integrator stages landing one rounding error past an
    /// endpoint are not rejected.
    pub fn contains(&self, theta: Angle) -> bool {
        let slack = 1e-12 * theta.abs().max(1.0);
        theta >= self.domain.0 - slack && theta <= self.domain.1 + slack
    }

    fn check_domain(&self, theta: Angle) -> Result<()> {
        if !theta.is_finite() || !self.contains(theta) {
            return Err(Error::OutOfDomain {
                theta,
                lo: self.domain.0,
                hi: self.domain.1,
            });
        }
        Ok(())
    }

    /// Evaluate the radius. Re-checks positivity on every call.
    pub fn radius(&self, theta: Angle) -> Result<f64> {
        self.check_domain(theta)?;
        let v = (self.radius)(theta);
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::NonPositiveRadius { theta, value: v });
        }
        Ok(v)
    }

    /// The wheel point `W(theta) = r(theta) (sin theta, -cos theta)`.
    pub fn point(&self, theta: Angle) -> Result<Point2> {
        let r = self.radius(theta)?;
        Ok(Point2::new(r * theta.sin(), -r * theta.cos()))
    }

    /// dr/dtheta, or `None` where the derivative is undefined: everywhere
    /// for a continuous-only wheel, and exactly at the breakpoints of a
    /// piecewise wheel. Falls back to a central finite difference (step
    /// `1e-6 * max(1, |theta|)`, clipped to the current smooth piece) when
    /// no analytic rate is available.
    pub fn radius_rate(&self, theta: Angle) -> Result<Option<f64>> {
        self.check_domain(theta)?;
        match &self.smoothness {
            Smoothness::ContinuousOnly => Ok(None),
            Smoothness::PiecewiseC1 { .. } if self.at_breakpoint(theta) => Ok(None),
            _ => {
                if let Some(rate) = &self.radius_rate {
                    Ok(Some(rate(theta)))
                } else {
                    Ok(Some(self.finite_difference_rate(theta)))
                }
            }
        }
    }

    fn at_breakpoint(&self, theta: Angle) -> bool {
        let snap = BREAKPOINT_SNAP * theta.abs().max(1.0);
        self.smoothness
            .breakpoints()
            .iter()
            .any(|b| (theta - b).abs() <= snap)
    }

    /// Bounds of the smooth piece containing `theta` (clamped to the
    /// domain).
    fn piece_bounds(&self, theta: Angle) -> (f64, f64) {
        let (mut lo, mut hi) = self.domain;
        for &b in self.smoothness.breakpoints() {
            if b <= theta && b > lo {
                lo = b;
            }
            if b > theta && b < hi {
                hi = b;
            }
        }
        (lo, hi)
    }

    fn finite_difference_rate(&self, theta: Angle) -> f64 {
        let (lo, hi) = self.piece_bounds(theta);
        let h0 = 1e-6 * theta.abs().max(1.0);
        let room = (theta - lo).min(hi - theta);
        let h = h0.min(0.5 * room);
        let eval = |t: f64| (self.radius)(t);
        if h > f64::EPSILON * theta.abs().max(1.0) {
            (eval(theta + h) - eval(theta - h)) / (2.0 * h)
        } else if hi - theta > theta - lo {
            // One-sided, second order, into the open side.
            (-3.0 * eval(theta) + 4.0 * eval(theta + h0) - eval(theta + 2.0 * h0)) / (2.0 * h0)
        } else {
            (3.0 * eval(theta) - 4.0 * eval(theta - h0) + eval(theta - 2.0 * h0)) / (2.0 * h0)
        }
    }

    /// One-sided derivative just inside the given side of `theta`; used by
    /// road construction to carry slopes across cusps. Returns `None` for
    /// continuous-only wheels.
    pub(crate) fn sided_rate(&self, theta: Angle, toward_positive: bool) -> Option<f64> {
        if self.smoothness.is_continuous_only() {
            return None;
        }
        let eps = 1e-7 * theta.abs().max(1.0);
        let probe = if toward_positive {
            theta + eps
        } else {
            theta - eps
        };
        let probe = probe.clamp(self.domain.0, self.domain.1);
        match self.radius_rate(probe) {
            Ok(Some(v)) => Some(v),
            _ => None,
        }
    }

    /// Breakpoints strictly inside `(lo, hi)`.
    pub(crate) fn breakpoints_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.smoothness
            .breakpoints()
            .iter()
            .copied()
            .filter(|b| *b > lo && *b < hi)
            .collect()
    }
}

fn weierstrass_sum(theta: f64, a: f64, b: f64, terms: u32) -> f64 {
    let mut amp = 1.0;
    let mut freq = 1.0;
    let mut sum = 0.0;
    for _ in 0..terms {
        sum += amp * (freq * theta).cos();
        amp /= a;
        freq *= b;
    }
    sum
}
