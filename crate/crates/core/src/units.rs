//! Physical constants (SI) and unit helpers.

use core::f64::consts::PI;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;
pub const C_LIGHT: f64 = 299_792_458.0;
pub const TWO_PI: f64 = 2.0 * PI;

/// Hz to rad/s.
pub fn hz(f: f64) -> f64 {
    f * TWO_PI
}

/// rad/s to Hz.
pub fn to_hz(omega: f64) -> f64 {
    omega / TWO_PI
}
