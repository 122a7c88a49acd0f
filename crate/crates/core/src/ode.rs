//! Embedded Dormand-Prince 5(4) one-step integrator.
//!
//! One kernel serves two jobs: cumulative quadrature (`x' = r(theta)`, no
//! state feedback) and the inverse initial value problem (`x' = -f(x)`).
//! Steps run adaptively against an absolute/relative error test, or at a
//! fixed pitch for integrands too rough for an error estimate to mean
//! anything.

use crate::error::{Error, Result};

/// Tolerances and step bounds shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Absolute local error allowed per step.
    pub abs_tol: f64,
    /// Relative local error allowed per step.
    pub rel_tol: f64,
    /// Hard cap on step size; dense output is forced onto this lattice.
    pub max_step: f64,
    /// Number of points in post-hoc audit grids.
    pub audit_grid: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: 0.01,
            audit_grid: 512,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t < 1.0;
        if !tol_ok(self.abs_tol) || !tol_ok(self.rel_tol) {
            return Err(Error::BadParameter(format!(
                "tolerances must lie in (0, 1): abs {}, rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if !self.max_step.is_finite() || self.max_step <= 0.0 {
            return Err(Error::BadParameter(format!(
                "max step {} must be positive",
                self.max_step
            )));
        }
        if self.audit_grid < 2 {
            return Err(Error::BadParameter(format!(
                "audit grid needs at least 2 points, got {}",
                self.audit_grid
            )));
        }
        Ok(())
    }
}

// Dormand-Prince RK5(4)7M tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One DOPRI5 step from `(t, x)` of signed size `h`. Returns the 5th-order
/// solution and the embedded error estimate.
fn dopri5_step<F>(f: &F, t: f64, x: f64, h: f64) -> Result<(f64, f64)>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut k = [0.0f64; 7];
    k[0] = f(t, x)?;
    for i in 1..6 {
        let mut acc = 0.0;
        for (j, kj) in k.iter().enumerate().take(i) {
            acc += A[i - 1][j] * kj;
        }
        k[i] = f(t + C[i] * h, x + h * acc)?;
    }
    let x5 = x + h * (0..6).map(|j| B5[j] * k[j]).sum::<f64>();
    k[6] = f(t + h, x5)?;
    let x4 = x + h * (0..7).map(|j| B4[j] * k[j]).sum::<f64>();
    Ok((x5, x5 - x4))
}

/// Integrate `x' = f(t, x)` from `t0` to `t1` (either direction), adapting
/// the step so each local error passes `|err| <= abs_tol + rel_tol |x|`.
/// Every accepted step is recorded; nodes are additionally forced at the
/// `max_step` lattice and at `forced` interior points (breakpoints), so the
/// output never skips over them. The first node is `(t0, x0)`.
pub(crate) fn integrate_adaptive<F>(
    f: &F,
    t0: f64,
    t1: f64,
    x0: f64,
    cfg: &SolverConfig,
    forced: &[f64],
) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    cfg.validate()?;
    if t0 == t1 {
        return Ok(vec![(t0, x0)]);
    }
    let dir = (t1 - t0).signum();

    // Merge the max_step lattice with caller-forced interior points.
    let mut stops: Vec<f64> = Vec::new();
    let mut k = 1u64;
    loop {
        let t = t0 + dir * (k as f64) * cfg.max_step;
        if (t1 - t) * dir <= 0.0 {
            break;
        }
        stops.push(t);
        k += 1;
    }
    stops.extend(
        forced
            .iter()
            .copied()
            .filter(|s| (s - t0) * dir > 0.0 && (t1 - s) * dir > 0.0),
    );
    stops.push(t1);
    stops.sort_by(|a, b| (dir * a).partial_cmp(&(dir * b)).unwrap());
    stops.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * a.abs().max(1.0));

    let mut out = Vec::with_capacity(stops.len() + 16);
    out.push((t0, x0));
    let mut t = t0;
    let mut x = x0;
    let mut h = cfg.max_step;
    let mut steps_taken = 0u64;
    const MAX_STEPS: u64 = 20_000_000;

    for &stop in &stops {
        while (stop - t) * dir > 0.0 {
            let remaining = (stop - t).abs();
            let capped = remaining <= h;
            let h_try = if capped { remaining } else { h };
            let (x_new, err) = dopri5_step(f, t, x, dir * h_try)?;
            let tol = cfg.abs_tol + cfg.rel_tol * x_new.abs().max(x.abs());
            let err = err.abs();
            let accepted = err <= tol;
            if accepted {
                // Snap onto the stop rather than leave a rounding-width
                // sliver whose x-increment would be absorbed entirely.
                let t_new = t + dir * h_try;
                let snap = 1e-12 * stop.abs().max(1.0);
                t = if capped || (stop - t_new).abs() <= snap {
                    stop
                } else {
                    t_new
                };
                x = x_new;
                out.push((t, x));
            }
            // Plain step controller with the usual safety clamps. A step
            // whose size was dictated by a stop, not by the error test,
            // must not shrink the working step.
            let scale = if err > 0.0 {
                0.9 * (tol / err).powf(0.2)
            } else {
                5.0
            };
            let proposal = h_try * scale.clamp(0.2, 5.0);
            h = if capped && accepted {
                h.max(proposal)
            } else {
                proposal
            }
            .min(cfg.max_step);
            let h_min = 1e-14 * t.abs().max(1.0);
            if h < h_min && (stop - t) * dir > 0.0 {
                return Err(Error::ToleranceNotMet(format!(
                    "step size underflow near t = {t} (required step {h:.3e})"
                )));
            }
            steps_taken += 1;
            if steps_taken > MAX_STEPS {
                return Err(Error::ToleranceNotMet(format!(
                    "step budget exhausted near t = {t}"
                )));
            }
        }
    }
    Ok(out)
}

/// Fixed-pitch integration: the span is divided evenly into steps no wider
/// than `max_step` and no error control is attempted. This is the honest
/// mode for integrands without the smoothness an embedded estimate
/// assumes; the error is O(step) through the modulus of continuity.
pub(crate) fn integrate_fixed<F>(
    f: &F,
    t0: f64,
    t1: f64,
    x0: f64,
    max_step: f64,
) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    if max_step.is_nan() || max_step <= 0.0 {
        return Err(Error::BadParameter(format!(
            "max step {max_step} must be positive"
        )));
    }
    if t0 == t1 {
        return Ok(vec![(t0, x0)]);
    }
    let span = t1 - t0;
    let n = (span.abs() / max_step).ceil().max(1.0) as u64;
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push((t0, x0));
    let mut x = x0;
    for j in 1..=n {
        let t_prev = out.last().unwrap().0;
        let t_next = if j == n {
            t1
        } else {
            t0 + span * (j as f64) / (n as f64)
        };
        let (x_new, _) = dopri5_step(f, t_prev, x, t_next - t_prev)?;
        x = x_new;
        out.push((t_next, x));
    }
    Ok(out)
}

/// Adaptive quadrature of `g` over `[a, b]` (signed if `a > b`), as the
/// endpoint of the cumulative integral.
pub(crate) fn quad<G>(g: &G, a: f64, b: f64, cfg: &SolverConfig) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let nodes = integrate_adaptive(&|t, _| g(t), a, b, 0.0, cfg, &[])?;
    Ok(nodes.last().unwrap().1)
}
