//! Wheel-to-road and road-to-wheel transforms.
//!
//! The road for a polar wheel `r(theta)` is the contact-point curve
//! `(x(theta), y(theta))` with `x(0) = 0`, `x' = r`, `y = -r`. Because
//! `x' = r > 0`, `x` is strictly increasing and invertible, which also
//! makes the inverse problem well posed: given a road `y = f(x)` below the
//! x-axis, solving `x'(theta) = -f(x(theta))`, `x(0) = 0` recovers the
//! wheel as `r(theta) = -f(x(theta))`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::Angle;
use crate::interp::{hermite, hermite_deriv, segment_of};
use crate::ode::{integrate_adaptive, integrate_fixed, quad, SolverConfig};
use crate::wheel::{Evaluator, Smoothness, WheelSpec};

/// Which transform produced a road.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoadSource {
    Forward,
    Inverse,
}

/// Interpolation order between road samples. Cubic presumes a
/// differentiable wheel; roads of continuous-only wheels stay linear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpKind {
    Linear,
    Cubic,
}

/// A sampled road: strictly increasing `theta` and `x` grids with
/// `y = -r(theta)`, anchored at `(theta, x) = (0, 0)`, plus enough slope
/// data to interpolate between samples. Immutable after construction.
#[derive(Debug, Clone)]
pub struct RoadCurve {
    thetas: Vec<f64>,
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// dy/dtheta approached from below/above each node; NaN marks a slope
    /// the producing wheel could not supply.
    y_rates: Vec<(f64, f64)>,
    /// Wheel cusps inside the span; arc-length integration splits here.
    breakpoints: Vec<f64>,
    smoothness: Smoothness,
    source: RoadSource,
    interp: InterpKind,
    cfg: SolverConfig,
}

impl RoadCurve {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        thetas: Vec<f64>,
        xs: Vec<f64>,
        ys: Vec<f64>,
        y_rates: Vec<(f64, f64)>,
        breakpoints: Vec<f64>,
        smoothness: Smoothness,
        source: RoadSource,
        interp: InterpKind,
        cfg: SolverConfig,
    ) -> Result<Self> {
        if thetas.len() < 2 || thetas.len() != xs.len() || xs.len() != ys.len() {
            return Err(Error::BadParameter(
                "road needs at least two samples with matching grids".into(),
            ));
        }
        if !thetas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::BadParameter(
                "road theta samples must be strictly increasing".into(),
            ));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::ToleranceNotMet(
                "road lost x-monotonicity; x' = r should be positive".into(),
            ));
        }
        let anchored = thetas.iter().zip(&xs).any(|(&t, &x)| t == 0.0 && x == 0.0);
        if !anchored {
            return Err(Error::BadParameter(
                "road must contain the anchor sample theta = 0, x = 0".into(),
            ));
        }
        if ys.iter().any(|&y| y.is_nan() || y >= 0.0) {
            return Err(Error::BadParameter(
                "road heights must stay strictly below the x-axis".into(),
            ));
        }
        Ok(RoadCurve {
            thetas,
            xs,
            ys,
            y_rates,
            breakpoints,
            smoothness,
            source,
            interp,
            cfg,
        })
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// `(theta, x, y)` sample triples in increasing theta order.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.thetas
            .iter()
            .zip(&self.xs)
            .zip(&self.ys)
            .map(|((&t, &x), &y)| (t, x, y))
    }

    pub fn source(&self) -> RoadSource {
        self.source
    }

    pub fn interp(&self) -> InterpKind {
        self.interp
    }

    pub fn smoothness(&self) -> &Smoothness {
        &self.smoothness
    }

    pub fn solver_config(&self) -> SolverConfig {
        self.cfg
    }

    pub fn theta_span(&self) -> (f64, f64) {
        (self.thetas[0], *self.thetas.last().unwrap())
    }

    pub fn x_span(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub(crate) fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    fn check_theta(&self, theta: Angle) -> Result<()> {
        let (lo, hi) = self.theta_span();
        let slack = 1e-9 * theta.abs().max(1.0);
        if !theta.is_finite() || theta < lo - slack || theta > hi + slack {
            return Err(Error::OutOfRange {
                value: theta,
                lo,
                hi,
            });
        }
        Ok(())
    }

    /// Slopes used for the y-interpolant on segment `i`: the right-sided
    /// rate at node `i` and the left-sided rate at node `i + 1`, falling
    /// back to the chord where a rate is unavailable.
    fn y_segment_slopes(&self, i: usize) -> (f64, f64) {
        let chord = (self.ys[i + 1] - self.ys[i]) / (self.thetas[i + 1] - self.thetas[i]);
        let m0 = self.y_rates.get(i).map_or(f64::NAN, |r| r.1);
        let m1 = self.y_rates.get(i + 1).map_or(f64::NAN, |r| r.0);
        (
            if m0.is_finite() { m0 } else { chord },
            if m1.is_finite() { m1 } else { chord },
        )
    }

    /// Interpolated road abscissa `x(theta)`; exact at samples.
    pub fn x_at(&self, theta: Angle) -> Result<f64> {
        self.check_theta(theta)?;
        let (lo, hi) = self.theta_span();
        let t = theta.clamp(lo, hi);
        let i = segment_of(&self.thetas, t);
        let h = self.thetas[i + 1] - self.thetas[i];
        let s = (t - self.thetas[i]) / h;
        Ok(match self.interp {
            InterpKind::Linear => self.xs[i] + s * (self.xs[i + 1] - self.xs[i]),
            // x' = r = -y, known exactly at the nodes.
            InterpKind::Cubic => hermite(
                s,
                h,
                self.xs[i],
                -self.ys[i],
                self.xs[i + 1],
                -self.ys[i + 1],
            ),
        })
    }

    /// Interpolated road height `y(theta) = -r(theta)`; exact at samples.
    pub fn y_at(&self, theta: Angle) -> Result<f64> {
        self.check_theta(theta)?;
        let (lo, hi) = self.theta_span();
        let t = theta.clamp(lo, hi);
        let i = segment_of(&self.thetas, t);
        let h = self.thetas[i + 1] - self.thetas[i];
        let s = (t - self.thetas[i]) / h;
        Ok(match self.interp {
            InterpKind::Linear => self.ys[i] + s * (self.ys[i + 1] - self.ys[i]),
            InterpKind::Cubic => {
                let (m0, m1) = self.y_segment_slopes(i);
                hermite(s, h, self.ys[i], m0, self.ys[i + 1], m1)
            }
        })
    }

    /// dy/dtheta of the interpolant.
    pub(crate) fn y_rate_at(&self, theta: Angle) -> Result<f64> {
        self.check_theta(theta)?;
        let (lo, hi) = self.theta_span();
        let t = theta.clamp(lo, hi);
        let i = segment_of(&self.thetas, t);
        let h = self.thetas[i + 1] - self.thetas[i];
        let s = (t - self.thetas[i]) / h;
        Ok(match self.interp {
            InterpKind::Linear => (self.ys[i + 1] - self.ys[i]) / h,
            InterpKind::Cubic => {
                let (m0, m1) = self.y_segment_slopes(i);
                hermite_deriv(s, h, self.ys[i], m0, self.ys[i + 1], m1)
            }
        })
    }

    /// Road slope dy/dx at the contact angle `theta`, using only road
    /// data: dy/dx = y'(theta) / x'(theta) with x' = -y.
    pub fn slope_at(&self, theta: Angle) -> Result<f64> {
        let xp = -self.y_at(theta)?;
        Ok(self.y_rate_at(theta)? / xp)
    }

    /// Invert the monotone abscissa: the unique `theta` with
    /// `x(theta) = x`, to residual `|x(theta) - x| <= abs_tol`. Bisection
    /// brackets the root; a few Newton refinements with `theta' = 1/r`
    /// polish it.
    pub fn theta_of_x(&self, x: f64) -> Result<Angle> {
        let (xlo, xhi) = self.x_span();
        let slack = 1e-9 * x.abs().max(1.0);
        if !x.is_finite() || x < xlo - slack || x > xhi + slack {
            return Err(Error::OutOfRange {
                value: x,
                lo: xlo,
                hi: xhi,
            });
        }
        let x = x.clamp(xlo, xhi);
        let i = segment_of(&self.xs, x);
        if self.xs[i] == x {
            return Ok(self.thetas[i]);
        }
        if self.xs[i + 1] == x {
            return Ok(self.thetas[i + 1]);
        }
        let (mut a, mut b) = (self.thetas[i], self.thetas[i + 1]);
        let eval = |t: f64| self.x_at(t).unwrap_or(f64::NAN) - x;
        let mut t = 0.5 * (a + b);

        // Coarse bisection to get Newton into its basin.
        for _ in 0..12 {
            t = 0.5 * (a + b);
            if eval(t) > 0.0 {
                b = t;
            } else {
                a = t;
            }
        }
        for _ in 0..3 {
            let r = -self.y_at(t)?;
            let next = t - eval(t) / r;
            if next > a && next < b {
                t = next;
            } else {
                break;
            }
        }
        let mut iter = 0;
        while eval(t).abs() > self.cfg.abs_tol {
            if eval(t) > 0.0 {
                b = t;
            } else {
                a = t;
            }
            let mid = 0.5 * (a + b);
            if mid == a || mid == b {
                break;
            }
            t = mid;
            iter += 1;
            if iter > 200 {
                break;
            }
        }
        let residual = eval(t).abs();
        if residual > self.cfg.abs_tol {
            return Err(Error::ToleranceNotMet(format!(
                "theta_of_x residual {residual:.3e} exceeds {:.3e} at x = {x}",
                self.cfg.abs_tol
            )));
        }
        Ok(t)
    }

    /// Road height as a function of `x`: `g(x) = -r(theta(x))`; exact at
    /// samples.
    pub fn height_at(&self, x: f64) -> Result<f64> {
        let theta = self.theta_of_x(x)?;
        self.y_at(theta)
    }
}

/// A road given in functional form `y = f(x) < 0` on a finite x-interval
/// containing 0. Input to the inverse transform.
#[derive(Clone)]
pub struct RoadFunction {
    height: Evaluator,
    x_interval: (f64, f64),
}

impl std::fmt::Debug for RoadFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RoadFunction")
            .field("x_interval", &self.x_interval)
            .finish()
    }
}

impl RoadFunction {
    pub fn new(
        x_interval: (f64, f64),
        height: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let (lo, hi) = x_interval;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi || lo > 0.0 || hi < 0.0 {
            return Err(Error::BadParameter(format!(
                "road x-interval [{lo}, {hi}] must be finite, nondegenerate, and contain 0"
            )));
        }
        Ok(RoadFunction {
            height: Arc::new(height),
            x_interval,
        })
    }

    /// Wrap a solved road as a functional road over its sampled x-span,
    /// clamping queries to that span.
    pub fn from_road(road: &RoadCurve) -> Self {
        let span = road.x_span();
        let road = road.clone();
        RoadFunction {
            height: Arc::new(move |x: f64| {
                road.height_at(x.clamp(span.0, span.1)).unwrap_or(f64::NAN)
            }),
            x_interval: span,
        }
    }

    pub fn height_at(&self, x: f64) -> f64 {
        (self.height)(x)
    }

    pub fn x_interval(&self) -> (f64, f64) {
        self.x_interval
    }

    pub(crate) fn evaluator_arc(&self) -> Evaluator {
        self.height.clone()
    }
}

fn validate_range(range: (Angle, Angle)) -> Result<()> {
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::BadParameter(format!(
            "theta range [{lo}, {hi}] must be a nondegenerate finite interval"
        )));
    }
    if lo > 0.0 || hi < 0.0 {
        return Err(Error::BadParameter(format!(
            "theta range [{lo}, {hi}] must contain 0"
        )));
    }
    Ok(())
}

/// Node rates `(left, right)` of `y = -r` for the cubic interpolant; one
/// sided at wheel cusps, NaN where no rate exists.
fn node_y_rates(wheel: &WheelSpec, thetas: &[f64]) -> Vec<(f64, f64)> {
    thetas
        .iter()
        .map(|&t| match wheel.radius_rate(t) {
            Ok(Some(rr)) => (-rr, -rr),
            _ => {
                let l = wheel.sided_rate(t, false).map_or(f64::NAN, |v| -v);
                let r = wheel.sided_rate(t, true).map_or(f64::NAN, |v| -v);
                (l, r)
            }
        })
        .collect()
}

/// Solve the forward problem: the road on which `wheel` rolls smoothly,
/// over a theta range containing 0. `x` is accumulated by adaptive
/// quadrature of `r` away from the anchor in both directions (fixed-pitch
/// for continuous-only wheels, whose error estimates would be fiction) and
/// `y = -r` pointwise.
pub fn solve_forward(
    wheel: &WheelSpec,
    range: (Angle, Angle),
    cfg: &SolverConfig,
) -> Result<RoadCurve> {
    cfg.validate()?;
    validate_range(range)?;
    let (lo, hi) = range;
    let (dlo, dhi) = wheel.domain();
    if !wheel.contains(lo) || !wheel.contains(hi) {
        return Err(Error::OutOfDomain {
            theta: if wheel.contains(lo) { hi } else { lo },
            lo: dlo,
            hi: dhi,
        });
    }

    let rhs = |t: f64, _x: f64| wheel.radius(t);
    let fixed = wheel.smoothness().is_continuous_only();
    let leg = |to: f64| -> Result<Vec<(f64, f64)>> {
        if fixed {
            integrate_fixed(&rhs, 0.0, to, 0.0, cfg.max_step)
        } else {
            let mut forced = wheel.breakpoints_in(to.min(0.0), to.max(0.0));
            forced.sort_by(f64::total_cmp);
            integrate_adaptive(&rhs, 0.0, to, 0.0, cfg, &forced)
        }
    };

    let mut nodes: Vec<(f64, f64)> = Vec::new();
    if lo < 0.0 {
        let mut back = leg(lo)?;
        back.reverse();
        back.pop(); // drop the anchor; the forward leg re-adds it
        nodes.extend(back);
    }
    if hi > 0.0 {
        nodes.extend(leg(hi)?);
    } else {
        nodes.push((0.0, 0.0));
    }

    let thetas: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let xs: Vec<f64> = nodes.iter().map(|n| n.1).collect();
    let mut ys = Vec::with_capacity(thetas.len());
    for &t in &thetas {
        ys.push(-wheel.radius(t)?);
    }
    let (y_rates, interp) = if fixed {
        (vec![(f64::NAN, f64::NAN); thetas.len()], InterpKind::Linear)
    } else {
        (node_y_rates(wheel, &thetas), InterpKind::Cubic)
    };
    RoadCurve::assemble(
        thetas,
        xs,
        ys,
        y_rates,
        wheel.breakpoints_in(lo, hi),
        wheel.smoothness().clone(),
        RoadSource::Forward,
        interp,
        *cfg,
    )
}

/// Solve the inverse problem: the wheel that rolls smoothly on the road
/// `y = f(x)`. Integrates `x'(theta) = -f(x(theta))`, `x(0) = 0` over the
/// requested rotation range and returns the recovered wheel (its radius
/// interpolates the dense solver output through `r = -f(x(theta))`)
/// together with the induced road curve.
///
/// The result is audited: the recovered pair must reproduce `f` to
/// `10 * abs_tol` on `audit_grid` points, else `ToleranceNotMet`.
pub fn solve_inverse(
    f: &RoadFunction,
    range: (Angle, Angle),
    cfg: &SolverConfig,
) -> Result<(WheelSpec, RoadCurve)> {
    cfg.validate()?;
    validate_range(range)?;
    let (xlo, xhi) = f.x_interval();

    // The road must stay strictly below the axis everywhere we may sample.
    let n_audit = cfg.audit_grid.max(2);
    for i in 0..n_audit {
        let x = xlo + (xhi - xlo) * (i as f64) / ((n_audit - 1) as f64);
        let v = f.height_at(x);
        if !v.is_finite() || v >= 0.0 {
            return Err(Error::RoadAboveAxis { x, value: v });
        }
    }

    let rhs = |t: f64, x: f64| -> Result<f64> {
        let slack = 1e-12 * x.abs().max(1.0);
        if x < xlo - slack || x > xhi + slack {
            return Err(Error::RangeExceeded { theta_reached: t });
        }
        let y = f.height_at(x.clamp(xlo, xhi));
        if !y.is_finite() || y >= 0.0 {
            return Err(Error::RoadAboveAxis { x, value: y });
        }
        Ok(-y)
    };

    let (lo, hi) = range;
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    if lo < 0.0 {
        let mut back = integrate_adaptive(&rhs, 0.0, lo, 0.0, cfg, &[])?;
        back.reverse();
        back.pop();
        nodes.extend(back);
    }
    if hi > 0.0 {
        nodes.extend(integrate_adaptive(&rhs, 0.0, hi, 0.0, cfg, &[])?);
    } else {
        nodes.push((0.0, 0.0));
    }

    let thetas: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let xs: Vec<f64> = nodes.iter().map(|n| n.1).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f.height_at(x)).collect();
    let radii: Vec<f64> = ys.iter().map(|&y| -y).collect();

    // Recovered radius: r(theta) = -f(x(theta)) through the Hermite
    // interpolant of the dense solver output (slopes x' = r are known).
    let interp_data = Arc::new(HermiteSeries {
        ts: thetas.clone(),
        vs: xs.clone(),
        ms: radii.clone(),
    });
    let height = f.evaluator_arc();
    let radius = {
        let interp_data = Arc::clone(&interp_data);
        move |t: f64| -height(interp_data.eval(t).clamp(xlo, xhi))
    };
    let wheel = WheelSpec::new(
        "wheel recovered from road",
        (thetas[0], *thetas.last().unwrap()),
        Smoothness::Analytic,
        radius,
        None,
    )?;

    // y-slopes for the road interpolant: dy/dtheta = f'(x) x' with f'
    // taken by central difference.
    let y_rates: Vec<(f64, f64)> = xs
        .iter()
        .zip(&radii)
        .map(|(&x, &r)| {
            let h = (1e-6 * x.abs().max(1.0)).min(0.25 * (xhi - xlo));
            let (a, b) = ((x - h).max(xlo), (x + h).min(xhi));
            let fd = (f.height_at(b) - f.height_at(a)) / (b - a);
            let v = fd * r;
            (v, v)
        })
        .collect();

    let road = RoadCurve::assemble(
        thetas,
        xs,
        ys,
        y_rates,
        Vec::new(),
        Smoothness::Analytic,
        RoadSource::Inverse,
        InterpKind::Cubic,
        *cfg,
    )?;

    // Reproduction audit over the solved x-span.
    let (slo, shi) = road.x_span();
    let allowed = 10.0 * cfg.abs_tol;
    for i in 0..n_audit {
        let x = slo + (shi - slo) * (i as f64) / ((n_audit - 1) as f64);
        let theta = road.theta_of_x(x)?;
        let err = (-wheel.radius(theta)? - f.height_at(x)).abs();
        if err > allowed {
            return Err(Error::ToleranceNotMet(format!(
                "inverse solve reproduces the road to {err:.3e} at x = {x}, over budget {allowed:.3e}"
            )));
        }
    }
    Ok((wheel, road))
}

/// Monotone cubic Hermite series used for the recovered wheel's radius.
struct HermiteSeries {
    ts: Vec<f64>,
    vs: Vec<f64>,
    ms: Vec<f64>,
}

impl HermiteSeries {
    fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(self.ts[0], *self.ts.last().unwrap());
        let i = segment_of(&self.ts, t);
        let h = self.ts[i + 1] - self.ts[i];
        let s = (t - self.ts[i]) / h;
        hermite(s, h, self.vs[i], self.ms[i], self.vs[i + 1], self.ms[i + 1])
    }
}

/// Arc length along the wheel from `a` to `b`:
/// integral of sqrt(r^2 + r'^2), split at cusps.
pub fn arc_length_wheel(wheel: &WheelSpec, a: Angle, b: Angle, cfg: &SolverConfig) -> Result<f64> {
    if wheel.smoothness().is_continuous_only() {
        return Err(Error::NotRectifiableHere);
    }
    cfg.validate()?;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if !wheel.contains(lo) || !wheel.contains(hi) {
        let (dlo, dhi) = wheel.domain();
        return Err(Error::OutOfDomain {
            theta: if wheel.contains(lo) { hi } else { lo },
            lo: dlo,
            hi: dhi,
        });
    }
    if lo == hi {
        return Ok(0.0);
    }
    let mut cuts = vec![lo];
    cuts.extend(wheel.breakpoints_in(lo, hi));
    cuts.push(hi);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (p, q) = (w[0], w[1]);
        let mid = 0.5 * (p + q);
        let integrand = |t: f64| -> Result<f64> {
            let r = wheel.radius(t)?;
            let rate = match wheel.radius_rate(t)? {
                Some(v) => v,
                // Quadrature stage exactly on a cusp: use the one-sided
                // rate from inside this piece.
                None => wheel
                    .sided_rate(t, t < mid)
                    .ok_or(Error::NotRectifiableHere)?,
            };
            Ok(r.hypot(rate))
        };
        total += quad(&integrand, p, q, cfg)?;
    }
    Ok(total)
}

/// Arc length along the road between contact angles `a` and `b`:
/// integral of sqrt(x'^2 + y'^2) built from the road's own interpolants
/// (x' = -y and the Hermite slope of y), split at cusps. Independent of
/// the wheel-side route, which the corollary checks compare against.
pub fn arc_length_road(road: &RoadCurve, a: Angle, b: Angle) -> Result<f64> {
    if road.smoothness().is_continuous_only() {
        return Err(Error::NotRectifiableHere);
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    road.check_theta(lo)?;
    road.check_theta(hi)?;
    if lo == hi {
        return Ok(0.0);
    }
    let cfg = road.solver_config();
    let mut cuts = vec![lo];
    cuts.extend(
        road.breakpoints()
            .iter()
            .copied()
            .filter(|b| *b > lo && *b < hi),
    );
    cuts.push(hi);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let integrand = |t: f64| -> Result<f64> {
            let xp = -road.y_at(t)?;
            let yp = road.y_rate_at(t)?;
            Ok(xp.hypot(yp))
        };
        total += quad(&integrand, w[0], w[1], &cfg)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wheel::{WheelPreset, DEFAULT_DOMAIN_MARGIN};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn preset(p: WheelPreset) -> WheelSpec {
        WheelSpec::from_preset(&p, DEFAULT_DOMAIN_MARGIN).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn unit_circle_road_is_the_line() {
        let road = solve_forward(&preset(WheelPreset::UnitCircle), (-PI, PI), &cfg()).unwrap();
        for (t, x, y) in road.samples() {
            assert_abs_diff_eq!(x, t, epsilon = 1e-11);
            assert_eq!(y, -1.0);
        }
        assert_abs_diff_eq!(road.x_at(PI).unwrap(), PI, epsilon = 1e-11);
        assert_abs_diff_eq!(road.height_at(1.234).unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(road.theta_of_x(1.5).unwrap(), 1.5, epsilon = 1e-10);
    }

    #[test]
    fn secant_road_is_the_inverted_catenary() {
        let road = solve_forward(&preset(WheelPreset::LineSecant), (-1.3, 1.3), &cfg()).unwrap();
        // Closed form: x = atanh(sin theta), y = -sec theta = -cosh x.
        // pi/3 falls between samples, so the comparison carries the cubic
        // interpolation error of the default step, a few 1e-9.
        let x = road.x_at(FRAC_PI_3).unwrap();
        assert_abs_diff_eq!(x, 1.3169578969248166, epsilon = 5e-9);
        assert_abs_diff_eq!(road.y_at(FRAC_PI_3).unwrap(), -2.0, epsilon = 3e-8);
        assert_abs_diff_eq!(x.cosh(), 2.0, epsilon = 1e-8);
        // theta(x) at the square-corner abscissa.
        let asinh1 = 1f64.asinh();
        assert_abs_diff_eq!(road.theta_of_x(asinh1).unwrap(), FRAC_PI_4, epsilon = 1e-8);
        assert_abs_diff_eq!(
            road.height_at(asinh1).unwrap(),
            -2f64.sqrt(),
            epsilon = 1e-8
        );
    }

    #[test]
    fn offset_circle_road_is_a_semicircle() {
        let road = solve_forward(&preset(WheelPreset::OffsetCircle), (-1.3, 1.3), &cfg()).unwrap();
        let x = road.x_at(FRAC_PI_6).unwrap();
        let y = road.y_at(FRAC_PI_6).unwrap();
        assert_abs_diff_eq!(x, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(y, -(3f64.sqrt()), epsilon = 1e-10);
        for (_, x, y) in road.samples() {
            assert_abs_diff_eq!(x * x + y * y, 4.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn log_spiral_road_is_the_tilted_line() {
        let k = 0.5;
        let road =
            solve_forward(&preset(WheelPreset::LogSpiral { k }), (-1.0, 2.0), &cfg()).unwrap();
        let x = road.x_at(FRAC_PI_4).unwrap();
        let y = road.y_at(FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(x, 0.96194534097982, epsilon = 1e-10);
        assert_abs_diff_eq!(y, -1.48097267048991, epsilon = 1e-10);
        assert_abs_diff_eq!(y, -k * x - 1.0, epsilon = 1e-10);
    }

    #[test]
    fn poinsot_inversion_round_trip() {
        let road = solve_forward(&preset(WheelPreset::PoinsotSech), (-2.0, 2.0), &cfg()).unwrap();
        // x(1) = atan(sinh 1)
        let x1 = 0.8657694832396586;
        assert_abs_diff_eq!(road.x_at(1.0).unwrap(), x1, epsilon = 1e-10);
        assert_abs_diff_eq!(road.theta_of_x(x1).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn theta_of_x_hits_samples_exactly() {
        let road = solve_forward(&preset(WheelPreset::LineSecant), (-1.0, 1.0), &cfg()).unwrap();
        for (t, x, _) in road.samples() {
            assert_abs_diff_eq!(road.theta_of_x(x).unwrap(), t, epsilon = 1e-9);
        }
    }

    #[test]
    fn out_of_range_queries_error() {
        let road = solve_forward(&preset(WheelPreset::UnitCircle), (-1.0, 1.0), &cfg()).unwrap();
        assert!(matches!(road.x_at(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(road.height_at(9.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(
            road.theta_of_x(-8.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn forward_range_must_contain_zero() {
        let w = preset(WheelPreset::UnitCircle);
        assert!(matches!(
            solve_forward(&w, (0.5, 1.0), &cfg()),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            solve_forward(&w, (-20.0, 20.0), &cfg()),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn inverse_constant_road_gives_unit_circle() {
        let f = RoadFunction::new((-5.0, 5.0), |_| -1.0).unwrap();
        let (wheel, road) = solve_inverse(&f, (-2.0, 2.0), &cfg()).unwrap();
        for i in 0..=40 {
            let t = -2.0 + 4.0 * (i as f64) / 40.0;
            assert_abs_diff_eq!(wheel.radius(t).unwrap(), 1.0, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(road.x_at(1.7).unwrap(), 1.7, epsilon = 1e-10);
    }

    #[test]
    fn inverse_catenary_gives_secant_wheel() {
        let f = RoadFunction::new((-4.0, 4.0), |x: f64| -x.cosh()).unwrap();
        let (wheel, _) = solve_inverse(&f, (-1.2, 1.2), &cfg()).unwrap();
        assert_abs_diff_eq!(
            wheel.radius(1.0).unwrap(),
            1.8508157176809256,
            epsilon = 1e-8
        );
        for i in 0..=60 {
            let t = -1.2 + 2.4 * (i as f64) / 60.0;
            assert_abs_diff_eq!(wheel.radius(t).unwrap(), 1.0 / t.cos(), epsilon = 1e-6);
        }
    }

    #[test]
    fn inverse_tilted_line_gives_log_spiral() {
        let f = RoadFunction::new((-1.9, 60.0), |x: f64| -x / 2.0 - 1.0).unwrap();
        let (wheel, _) = solve_inverse(&f, (-1.0, 2.5), &cfg()).unwrap();
        assert_abs_diff_eq!(
            wheel.radius(2.0).unwrap(),
            std::f64::consts::E,
            epsilon = 1e-8
        );
    }

    #[test]
    fn inverse_rejects_roads_touching_the_axis() {
        let f = RoadFunction::new((-2.0, 2.0), |x: f64| x * x - 1.0).unwrap();
        assert!(matches!(
            solve_inverse(&f, (-1.0, 1.0), &cfg()),
            Err(Error::RoadAboveAxis { .. })
        ));
    }

    #[test]
    fn inverse_reports_leaving_the_interval() {
        // Unit-circle road truncated to |x| <= 1: rolling past one radian
        // of road must fail with the rotation reached.
        let f = RoadFunction::new((-1.0, 1.0), |_| -1.0).unwrap();
        let err = solve_inverse(&f, (-0.5, 2.0), &cfg());
        match err {
            Err(Error::RangeExceeded { theta_reached }) => {
                assert!(theta_reached > 0.9 && theta_reached < 1.1);
            }
            other => panic!("expected RangeExceeded, got {other:?}"),
        }
    }

    #[test]
    fn wheel_arc_lengths_match_closed_forms() {
        let c = cfg();
        let circle = preset(WheelPreset::UnitCircle);
        assert_abs_diff_eq!(
            arc_length_wheel(&circle, 0.0, 2.0 * PI, &c).unwrap(),
            2.0 * PI,
            epsilon = 1e-10
        );
        let spiral = preset(WheelPreset::LogSpiral { k: 1.0 });
        assert_abs_diff_eq!(
            arc_length_wheel(&spiral, 0.0, FRAC_PI_4, &c).unwrap(),
            1.6875528314629564,
            epsilon = 1e-10
        );
        // Straight-line wheel: length along y = -1 is tan(theta).
        let line = preset(WheelPreset::LineSecant);
        for theta in [0.3, 0.9, FRAC_PI_3] {
            assert_abs_diff_eq!(
                arc_length_wheel(&line, 0.0, theta, &c).unwrap(),
                theta.tan(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn road_arc_length_matches_wheel_arc_length() {
        let c = cfg();
        let line = preset(WheelPreset::LineSecant);
        let road = solve_forward(&line, (-1.3, 1.3), &c).unwrap();
        // Catenary length to theta = pi/3 is sinh(x) = tan(theta) = sqrt 3.
        assert_abs_diff_eq!(
            arc_length_road(&road, 0.0, FRAC_PI_3).unwrap(),
            3f64.sqrt(),
            epsilon = 1e-8
        );
        let circle_road =
            solve_forward(&preset(WheelPreset::UnitCircle), (0.0, 2.0 * PI), &c).unwrap();
        assert_abs_diff_eq!(
            arc_length_road(&circle_road, 0.0, 2.0 * PI).unwrap(),
            2.0 * PI,
            epsilon = 1e-9
        );
        // Parabola: the two routes agree without a closed form.
        let par = preset(WheelPreset::FocalParabola { d: 0.5 });
        let par_road = solve_forward(&par, (-1.7, 1.7), &c).unwrap();
        let by_wheel = arc_length_wheel(&par, 0.0, FRAC_PI_2, &c).unwrap();
        let by_road = arc_length_road(&par_road, 0.0, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(by_wheel, by_road, epsilon = 1e-8);
    }

    #[test]
    fn monster_arc_length_is_refused() {
        let w = preset(WheelPreset::Weierstrass {
            a: 2.0,
            b: 3.0,
            level_offset: 3.0,
            terms: 50,
        });
        assert!(matches!(
            arc_length_wheel(&w, 0.0, 1.0, &cfg()),
            Err(Error::NotRectifiableHere)
        ));
        let road = solve_forward(&w, (-1.0, 1.0), &cfg()).unwrap();
        assert!(matches!(
            arc_length_road(&road, 0.0, 1.0),
            Err(Error::NotRectifiableHere)
        ));
    }

    #[test]
    fn monster_road_uses_linear_interpolation_and_fixed_steps() {
        let w = preset(WheelPreset::Weierstrass {
            a: 2.0,
            b: 3.0,
            level_offset: 3.0,
            terms: 50,
        });
        let road = solve_forward(&w, (0.0, 1.0), &cfg()).unwrap();
        assert_eq!(road.interp(), InterpKind::Linear);
        assert!(road.xs().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn square_road_has_forced_cusp_nodes() {
        let sq = preset(WheelPreset::RegularPolygon {
            sides: 4,
            apothem: 1.0,
        });
        let road = solve_forward(&sq, (-FRAC_PI_2, FRAC_PI_2), &cfg()).unwrap();
        for target in [-FRAC_PI_4, FRAC_PI_4] {
            assert!(
                road.thetas().iter().any(|t| (t - target).abs() < 1e-12),
                "no node at cusp {target}"
            );
        }
    }

    #[test]
    fn scaling_the_wheel_scales_the_road() {
        let c = cfg();
        let base = WheelSpec::new(
            "sec",
            (-1.2, 1.2),
            Smoothness::Analytic,
            |t: f64| 1.0 / t.cos(),
            Some(Box::new(|t: f64| t.tan() / t.cos())),
        )
        .unwrap();
        let scaled = WheelSpec::new(
            "3.7 sec",
            (-1.2, 1.2),
            Smoothness::Analytic,
            |t: f64| 3.7 / t.cos(),
            Some(Box::new(|t: f64| 3.7 * t.tan() / t.cos())),
        )
        .unwrap();
        let r1 = solve_forward(&base, (-1.0, 1.0), &c).unwrap();
        let r2 = solve_forward(&scaled, (-1.0, 1.0), &c).unwrap();
        // Compare on the shared forced lattice.
        for target in [-0.99, -0.5, 0.25, 0.75, 1.0] {
            let x1 = r1.x_at(target).unwrap();
            let x2 = r2.x_at(target).unwrap();
            assert_abs_diff_eq!(x2, 3.7 * x1, epsilon = 1e-10 * x1.abs().max(1.0) * 3.7);
            let y1 = r1.y_at(target).unwrap();
            let y2 = r2.y_at(target).unwrap();
            assert_abs_diff_eq!(y2, 3.7 * y1, epsilon = 1e-10 * 3.7 * y1.abs());
        }
    }
}
