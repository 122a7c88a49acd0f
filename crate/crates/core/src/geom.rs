//! Planar primitives for the rolling model: points, clockwise rotations,
//! and the rigid pose of a rolled wheel (a spin about the origin followed
//! by a horizontal shift).
//!
//! Rotations are closed-form coordinate operations; no matrix type is
//! exposed. The clockwise convention means `rotate_cw(phi, p)` maps
//! `(x, y)` to `(x cos phi + y sin phi, -x sin phi + y cos phi)`.

use std::ops::{Add, Sub};

/// An angle in radians. Angles are never wrapped or normalized here;
/// callers that need a principal value must reduce explicitly.
pub type Angle = f64;

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Euclidean norm.
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Distance to another point.
    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// Rigid placement of a rolled wheel: clockwise spin about the origin
/// followed by a horizontal shift. Rolling never translates vertically,
/// so the vertical component is fixed at zero by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidPose {
    /// Clockwise rotation angle about the origin.
    pub spin: Angle,
    /// Horizontal translation applied after the spin.
    pub shift: f64,
}

impl RigidPose {
    pub const IDENTITY: RigidPose = RigidPose {
        spin: 0.0,
        shift: 0.0,
    };

    pub const fn new(spin: Angle, shift: f64) -> Self {
        RigidPose { spin, shift }
    }
}

/// Rotate `p` clockwise by `phi` about the origin.
pub fn rotate_cw(phi: Angle, p: Point2) -> Point2 {
    let (s, c) = phi.sin_cos();
    Point2::new(p.x * c + p.y * s, -p.x * s + p.y * c)
}

/// Rotate `p` clockwise by `phi + pi/2`, written in terms of sin/cos of
/// `phi` itself so that the coordinate identity
/// `rotate_cw_quarter(phi, (0, b)) == rotate_cw(phi, (b, 0))` holds
/// exactly in floating point, not just up to rounding of `phi + pi/2`.
pub fn rotate_cw_quarter(phi: Angle, p: Point2) -> Point2 {
    let (s, c) = phi.sin_cos();
    // cos(phi + pi/2) = -sin(phi), sin(phi + pi/2) = cos(phi)
    Point2::new(-p.x * s + p.y * c, -p.x * c - p.y * s)
}

/// Apply a rigid pose: spin clockwise, then shift horizontally.
pub fn pose_apply(pose: RigidPose, p: Point2) -> Point2 {
    let r = rotate_cw(pose.spin, p);
    Point2::new(r.x + pose.shift, r.y)
}

/// Instantaneous velocity of the carried point `p` when the wheel has
/// spun to `phi` at unit angular rate while translating at `tau_rate`.
///
/// This is the derivative of `phi -> pose_apply(pose(phi, tau(phi)), p)`,
/// using the fact that differentiating a clockwise rotation advances its
/// angle by a quarter turn. The result is zero exactly when the no-slip
/// condition holds at this configuration.
pub fn carried_velocity(p: Point2, phi: Angle, tau_rate: f64) -> Point2 {
    let v = rotate_cw_quarter(phi, p);
    Point2::new(v.x + tau_rate, v.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn identity_rotation_is_exact() {
        let p = Point2::new(3.25, -7.5);
        assert_eq!(rotate_cw(0.0, p), p);
    }

    #[test]
    fn quarter_turn_of_unit_vector() {
        let q = rotate_cw(FRAC_PI_2, Point2::new(0.0, -1.0));
        assert_abs_diff_eq!(q.x, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rotations_compose_additively() {
        let p = Point2::new(1.0, 0.0);
        let twice = rotate_cw(FRAC_PI_4, rotate_cw(FRAC_PI_4, p));
        let once = rotate_cw(FRAC_PI_2, p);
        assert_abs_diff_eq!(twice.x, once.x, epsilon = 1e-15);
        assert_abs_diff_eq!(twice.y, once.y, epsilon = 1e-15);
    }

    #[test]
    fn pose_identity_and_translation() {
        let p = Point2::new(1.0, -1.0);
        assert_eq!(pose_apply(RigidPose::IDENTITY, p), p);
        let shifted = pose_apply(RigidPose::new(0.0, 5.0), p);
        assert_eq!(shifted, Point2::new(6.0, -1.0));
    }

    #[test]
    fn center_moves_purely_horizontally() {
        for phi in [0.0, 0.7, -2.3, 11.0] {
            let v = carried_velocity(Point2::ORIGIN, phi, 1.75);
            assert_eq!(v, Point2::new(1.75, 0.0));
        }
    }

    #[test]
    fn secant_wheel_contact_point_stops() {
        // Straight-line wheel r = sec(theta) at theta = pi/6 under the
        // canonical rolling law: the contact point has zero velocity.
        let theta = FRAC_PI_6;
        let p = Point2::new(theta.tan(), -1.0);
        let v = carried_velocity(p, theta, 1.0 / theta.cos());
        assert!(v.norm() <= 1e-15, "residual {}", v.norm());
    }

    #[test]
    fn doubled_rotation_law_slips() {
        // rho = 2*theta with tau = 2 tan(phi/2) keeps arc lengths equal but
        // leaves a nonzero contact velocity: (1/3, 1/sqrt(3)), norm 2/3.
        let theta = FRAC_PI_6;
        let p = Point2::new(theta.tan(), -1.0);
        let phi = 2.0 * theta;
        let tau_rate = 1.0 / (phi / 2.0).cos().powi(2);
        let v = carried_velocity(p, phi, tau_rate);
        assert_abs_diff_eq!(v.x, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.y, 1.0 / 3.0f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.norm(), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn pose_sends_contact_point_to_road() {
        // For the secant wheel, pose(theta, x(theta)) maps W(theta) to
        // (x(theta), -r(theta)).
        let theta = FRAC_PI_3;
        let x = theta.sin().atanh(); // closed-form road abscissa
        let r = 1.0 / theta.cos();
        let w = Point2::new(r * theta.sin(), -r * theta.cos());
        let moved = pose_apply(RigidPose::new(theta, x), w);
        assert_abs_diff_eq!(moved.x, x, epsilon = 1e-15);
        assert_abs_diff_eq!(moved.y, -r, epsilon = 1e-14);
    }
}
