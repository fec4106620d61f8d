//! Benchmark fixtures.

use mptrap_core::dynamics::prepare_coherent_state;
use mptrap_core::eom::{self, ReductionOptions};
use mptrap_core::{AmplitudeVector, EomCoefficients, FieldConfig, LevelScheme};
use num_complex::Complex64;

pub fn rubidium() -> LevelScheme {
    LevelScheme::rubidium().expect("builtin scheme")
}

/// Reduced coefficients for the default rubidium field.
pub fn default_coefficients(scheme: &LevelScheme) -> EomCoefficients {
    eom::assemble_with_options(scheme, &FieldConfig::default(), 1e-3, ReductionOptions::default())
        .expect("default assembly")
        .coefficients
}

/// Coherent state on a window of half-width `delta_n` around N = 10⁶, and a
/// zeroed output buffer of the same length.
pub fn window(delta_n: u64) -> (AmplitudeVector, Vec<Complex64>) {
    let state = prepare_coherent_state(1e6, 0.0, 500.min(delta_n - 1), delta_n).expect("window");
    let out = vec![Complex64::new(0.0, 0.0); state.values.len()];
    (state, out)
}
