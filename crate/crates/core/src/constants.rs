//! Pinned physical constants (CODATA values, SI units).

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
