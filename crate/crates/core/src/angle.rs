//! Angle helpers shared by every pass.

use std::f64::consts::PI;

/// Absolute tolerance for angle equality and zero tests, in radians.
pub const ANGLE_TOL: f64 = 1e-12;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let y = angle.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// True when the angle is a multiple of `2 pi` up to [`ANGLE_TOL`].
pub fn is_zero(angle: f64) -> bool {
    wrap(angle).abs() < ANGLE_TOL
}

/// Equality of two angles modulo `2 pi`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    is_zero(a - b)
}

/// `x / |x|` for nonzero `x`, zero otherwise.
pub fn sign(x: f64) -> f64 {
    if x.abs() < ANGLE_TOL {
        0.0
    } else {
        x.signum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wrap_boundaries() {
        assert_eq!(wrap(PI), PI);
        assert_eq!(wrap(-PI), PI);
        assert!((wrap(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap(0.0), 0.0);
        assert!(is_zero(2.0 * PI));
        assert!(is_zero(-2.0 * PI + 1e-14));
    }

    #[test]
    fn sign_of_zero_is_zero() {
        assert_eq!(sign(0.0), 0.0);
        assert_eq!(sign(-0.3), -1.0);
        assert_eq!(sign(2.0), 1.0);
    }

    proptest! {
        #[test]
        fn wrap_lands_in_half_open_interval(x in -100.0f64..100.0) {
            let y = wrap(x);
            prop_assert!(y > -PI && y <= PI);
            let k = ((x - y) / (2.0 * PI)).round();
            prop_assert!((x - y - 2.0 * PI * k).abs() < 1e-9);
        }
    }
}
