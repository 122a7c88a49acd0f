//! Cubic Hermite interpolation on a strictly increasing grid.

/// Value of the cubic Hermite segment through `(0, p0)` and `(h, p1)` with
/// endpoint slopes `m0`, `m1`, evaluated at parameter `s = t/h` in [0, 1].
pub(crate) fn hermite(s: f64, h: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * p0 + h10 * h * m0 + h01 * p1 + h11 * h * m1
}

/// Derivative (with respect to `t`, not `s`) of the same segment.
pub(crate) fn hermite_deriv(s: f64, h: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let s2 = s * s;
    let d00 = (6.0 * s2 - 6.0 * s) / h;
    let d10 = 3.0 * s2 - 4.0 * s + 1.0;
    let d01 = (-6.0 * s2 + 6.0 * s) / h;
    let d11 = 3.0 * s2 - 2.0 * s;
    d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1
}

/// Index `i` such that `grid[i] <= t <= grid[i + 1]`, clamped to the end
/// segments. The grid must be strictly increasing with at least 2 entries.
pub(crate) fn segment_of(grid: &[f64], t: f64) -> usize {
    debug_assert!(grid.len() >= 2);
    let n = grid.len();
    let i = grid.partition_point(|&g| g <= t);
    i.clamp(1, n - 1) - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |t: f64| 2.0 * t * t * t - t * t + 3.0 * t - 5.0;
        let df = |t: f64| 6.0 * t * t - 2.0 * t + 3.0;
        let (a, b) = (0.7, 1.9);
        let h = b - a;
        for i in 0..=20 {
            let s = i as f64 / 20.0;
            let t = a + s * h;
            let v = hermite(s, h, f(a), df(a), f(b), df(b));
            let d = hermite_deriv(s, h, f(a), df(a), f(b), df(b));
            assert!((v - f(t)).abs() < 1e-12);
            assert!((d - df(t)).abs() < 1e-11);
        }
    }

    #[test]
    fn segment_lookup_clamps() {
        let g = [0.0, 1.0, 2.5, 4.0];
        assert_eq!(segment_of(&g, -1.0), 0);
        assert_eq!(segment_of(&g, 0.0), 0);
        assert_eq!(segment_of(&g, 0.5), 0);
        assert_eq!(segment_of(&g, 1.0), 1);
        assert_eq!(segment_of(&g, 3.9), 2);
        assert_eq!(segment_of(&g, 4.0), 2);
        assert_eq!(segment_of(&g, 9.0), 2);
    }
}
