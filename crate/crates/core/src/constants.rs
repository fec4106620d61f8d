//! CODATA 2018 constants in SI units.

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Angular frequency in rad/s of a photon with the given energy in eV.
pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev * ELEMENTARY_CHARGE / HBAR
}

/// Energy in eV of a photon with ordinary frequency `hz`.
pub fn hz_to_ev(hz: f64) -> f64 {
    PLANCK * hz / ELEMENTARY_CHARGE
}
