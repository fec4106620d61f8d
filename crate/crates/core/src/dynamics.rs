//! Fock-resolved excited-state amplitudes under the reduced equation of motion.

use num_complex::Complex64;

use crate::couplings::FieldConfig;
use crate::eom::{assemble_with_options, EomCoefficients, ReductionOptions};
use crate::error::{Error, Result};
use crate::integrator::{self, Dopri5Options, Stats};
use crate::levelscheme::LevelScheme;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub field: FieldConfig,
    /// Half-width Δ_N of the simulated Fock window.
    pub delta_n: u64,
    /// Cutoff W of the initial photon-number distribution.
    pub cutoff_w: u64,
    /// Scale factor ϱ on the driving coefficients.
    pub rho: f64,
    /// Integration span, s.
    pub t_max: f64,
    pub rel_tol: f64,
    pub output_points: usize,
}

impl SimulationConfig {
    /// Defaults with `t_max` set to four natural lifetimes of the main transition.
    pub fn default_for(scheme: &LevelScheme) -> Self {
        Self {
            t_max: 4.0 / scheme.gamma_hat_21(),
            ..Self::default()
        }
    }

    /// Centre of the Fock window.
    pub fn center(&self) -> u64 {
        self.field.photon_number.round() as u64
    }

    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        if self.cutoff_w == 0 || self.cutoff_w >= self.delta_n {
            return Err(Error::InvalidInput(format!(
                "cutoff_w must satisfy 0 < W < delta_n (W = {}, delta_n = {})",
                self.cutoff_w, self.delta_n
            )));
        }
        if (self.center() as f64) < self.delta_n as f64 {
            return Err(Error::InvalidInput(format!(
                "photon_number - delta_n must be non-negative (N = {}, delta_n = {})",
                self.field.photon_number, self.delta_n
            )));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::InvalidInput(format!("t_max must be positive, got {}", self.t_max)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.output_points < 2 {
            return Err(Error::InvalidInput("output_points must be at least 2".into()));
        }
        if !(self.rho >= 0.0) || !self.rho.is_finite() {
            return Err(Error::InvalidInput(format!("rho must be non-negative, got {}", self.rho)));
        }
        Ok(())
    }

    pub fn output_times(&self) -> Vec<f64> {
        let last = (self.output_points - 1) as f64;
        (0..self.output_points)
            .map(|i| {
                if i + 1 == self.output_points {
                    self.t_max
                } else {
                    self.t_max * i as f64 / last
                }
            })
            .collect()
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            field: FieldConfig::default(),
            delta_n: 15_000,
            cutoff_w: 500,
            rho: 1e-3,
            t_max: 4.0 / 37.5e6,
            rel_tol: 1e-8,
            output_points: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    /// Fock index of `values[0]`.
    pub offset: u64,
    pub values: Vec<Complex64>,
}

impl AmplitudeVector {
    pub fn zeros(offset: u64, len: usize) -> Self {
        Self {
            offset,
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// Amplitude of Fock state `n`; zero outside the window.
    pub fn get(&self, n: u64) -> Complex64 {
        n.checked_sub(self.offset)
            .and_then(|i| self.values.get(i as usize).copied())
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTrace {
    pub times: Vec<f64>,
    pub pi: Vec<f64>,
    pub reference: Vec<f64>,
}

impl PopulationTrace {
    pub fn validate(&self) -> Result<()> {
        if self.times.len() < 2 {
            return Err(Error::MalformedTrace("fewer than two samples".into()));
        }
        if self.pi.len() != self.times.len() || self.reference.len() != self.times.len() {
            return Err(Error::MalformedTrace("column lengths differ".into()));
        }
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::MalformedTrace("times not strictly increasing".into()));
        }
        if self.pi.iter().any(|p| !p.is_finite()) {
            return Err(Error::MalformedTrace("non-finite population".into()));
        }
        Ok(())
    }

    /// Reference decay rate recovered from the reference column.
    pub fn reference_rate(&self) -> Option<f64> {
        let i = self.times.len().checked_sub(1)?;
        let (t, r) = (self.times[i], self.reference[i]);
        (t > 0.0 && r > 0.0).then(|| -r.ln() / t)
    }
}

/// Σ|Eₙ|² over the window.
pub fn population(state: &AmplitudeVector) -> f64 {
    state.values.iter().map(|z| z.norm_sqr()).sum()
}

/// Truncated coherent state `∝ αⁿ/√n!` with `α = √N·e^{iφ}` on
/// `[N−W, N+W]`, zero elsewhere in `[N−Δ_N, N+Δ_N]`, normalised to one.
///
/// The global phase is chosen so that `E_N` is real and positive; with it
/// `φ → φ+π` maps `Eₙ` to `(−1)^{n−N} Eₙ` exactly.
pub fn prepare_coherent_state(n: f64, phi: f64, w: u64, delta_n: u64) -> Result<AmplitudeVector> {
    if w == 0 || w >= delta_n {
        return Err(Error::InvalidInput(format!(
            "cutoff_w must satisfy 0 < W < delta_n (W = {w}, delta_n = {delta_n})"
        )));
    }
    let center = n.round() as u64;
    if (center as f64) < delta_n as f64 || !(n >= w as f64) {
        return Err(Error::InvalidInput(format!(
            "photon_number {n} too small for delta_n = {delta_n}, W = {w}"
        )));
    }
    let offset = center - delta_n;
    let len = (2 * delta_n + 1) as usize;
    let mut state = AmplitudeVector::zeros(offset, len);

    // log|aₙ/a_N| = (n−N)·ln√N − ½·(ln n! − ln N!), accumulated outward from N.
    let half_ln_n = 0.5 * n.ln();
    let mut logs = vec![0.0; (2 * w + 1) as usize];
    let mid = w as usize;
    let mut acc = 0.0;
    for k in 1..=w {
        acc += half_ln_n - 0.5 * ((center + k) as f64).ln();
        logs[mid + k as usize] = acc;
    }
    acc = 0.0;
    for k in 1..=w {
        acc += 0.5 * ((center - k + 1) as f64).ln() - half_ln_n;
        logs[mid - k as usize] = acc;
    }

    let norm: f64 = logs.iter().map(|l| (2.0 * l).exp()).sum::<f64>().sqrt();
    let base = (delta_n - w) as usize;
    for (i, l) in logs.iter().enumerate() {
        let k = i as f64 - w as f64;
        let mag = l.exp() / norm;
        state.values[base + i] = Complex64::from_polar(mag, k * phi);
    }
    Ok(state)
}

/// Right-hand side of the reduced equation of motion at time `t`.
pub fn rhs(t: f64, state: &[Complex64], coeffs: &EomCoefficients, out: &mut [Complex64]) {
    out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    let len = state.len() as isize;
    for delta in -4..=4i32 {
        let c = coeffs.band(delta);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let b = -c * Complex64::from_polar(1.0, -f64::from(delta) * coeffs.omega_bar * t);
        let d = delta as isize;
        // out[n] += b·state[n+δ] for all n with n+δ inside the window.
        let lo = (-d).max(0);
        let hi = (len - d).min(len);
        if lo >= hi {
            continue;
        }
        let (lo, hi) = (lo as usize, hi as usize);
        let src = &state[(lo as isize + d) as usize..(hi as isize + d) as usize];
        for (o, s) in out[lo..hi].iter_mut().zip(src) {
            *o += b * s;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub trace: PopulationTrace,
    pub final_state: AmplitudeVector,
    pub stats: Stats,
}

/// Integrates from `initial` and samples Π at the configured output times.
/// `observe` sees the amplitudes at every output time.
pub fn integrate_observed(
    config: &SimulationConfig,
    coeffs: &EomCoefficients,
    gamma_ref: f64,
    initial: &AmplitudeVector,
    mut observe: impl FnMut(usize, f64, &[Complex64]),
) -> Result<Integration> {
    config.validate()?;
    let times = config.output_times();
    let mut pi = vec![0.0; times.len()];
    let opts = Dopri5Options::with_rel_tol(config.rel_tol);
    let (stats, y) = integrator::integrate(
        |t, y, dy| rhs(t, y, coeffs, dy),
        0.0,
        initial.values.clone(),
        &times,
        &opts,
        |i, t, y| {
            pi[i] = y.iter().map(|z| z.norm_sqr()).sum();
            observe(i, t, y);
        },
    )?;
    let reference = times.iter().map(|t| (-gamma_ref * t).exp()).collect();
    Ok(Integration {
        trace: PopulationTrace { times, pi, reference },
        final_state: AmplitudeVector {
            offset: initial.offset,
            values: y,
        },
        stats,
    })
}

pub fn integrate(
    config: &SimulationConfig,
    coeffs: &EomCoefficients,
    gamma_ref: f64,
    initial: &AmplitudeVector,
) -> Result<PopulationTrace> {
    integrate_observed(config, coeffs, gamma_ref, initial, |_, _, _| {}).map(|r| r.trace)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub coefficients: EomCoefficients,
    pub integration: Integration,
}

/// Assembles coefficients for `scheme`, prepares the coherent state and integrates.
pub fn run(scheme: &LevelScheme, config: &SimulationConfig) -> Result<RunOutput> {
    run_with_options(scheme, config, ReductionOptions::default())
}

pub fn run_with_options(
    scheme: &LevelScheme,
    config: &SimulationConfig,
    options: ReductionOptions,
) -> Result<RunOutput> {
    config.validate()?;
    let coefficients = assemble_with_options(scheme, &config.field, config.rho, options)?.coefficients;
    let initial = prepare_coherent_state(
        config.field.photon_number,
        config.field.coherent_phase(),
        config.cutoff_w,
        config.delta_n,
    )?;
    let integration =
        integrate_observed(config, &coefficients, scheme.gamma_hat_21(), &initial, |_, _, _| {})?;
    Ok(RunOutput {
        coefficients,
        integration,
    })
}

/// Time at which Π first reaches e⁻¹, in units of the reference lifetime.
/// Returns `f64::INFINITY` when Π stays above e⁻¹ for the whole trace.
pub fn trapping_metric(trace: &PopulationTrace) -> Result<f64> {
    trace.validate()?;
    let gamma = trace
        .reference_rate()
        .ok_or_else(|| Error::MalformedTrace("reference column carries no decay rate".into()))?;
    let target = (-1.0f64).exp();
    let Some(i) = trace.pi.iter().position(|&p| p <= target) else {
        return Ok(f64::INFINITY);
    };
    if i == 0 {
        return Err(Error::MalformedTrace("trace starts below e^-1".into()));
    }
    let (t0, t1) = (trace.times[i - 1], trace.times[i]);
    let (p0, p1) = (trace.pi[i - 1], trace.pi[i]);
    let frac = if p1 > 0.0 && p0 > 0.0 && p0 != p1 {
        (-1.0 - p0.ln()) / (p1.ln() - p0.ln())
    } else {
        (p0 - target) / (p0 - p1)
    };
    Ok((t0 + frac * (t1 - t0)) * gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coherent_state_is_normalised() {
        for (n, w, dn) in [(1e6, 500, 3000), (1e4, 100, 200), (400.0, 20, 21)] {
            let s = prepare_coherent_state(n, 0.3, w, dn).unwrap();
            assert!((population(&s) - 1.0).abs() < 1e-12);
            assert_eq!(s.values.len() as u64, 2 * dn + 1);
            assert_eq!(s.offset, n as u64 - dn);
        }
    }

    #[test]
    fn coherent_state_support_and_phase() {
        let s = prepare_coherent_state(1e4, 0.0, 50, 80).unwrap();
        for (i, z) in s.values.iter().enumerate() {
            let k = i as i64 - 80;
            if k.abs() > 50 {
                assert_eq!(*z, c(0.0, 0.0));
            } else {
                assert!(z.re > 0.0 && z.im == 0.0);
            }
        }
    }

    #[test]
    fn coherent_state_rejects_bad_cutoff() {
        assert!(prepare_coherent_state(1e6, 0.0, 100, 100).is_err());
        assert!(prepare_coherent_state(1e6, 0.0, 0, 100).is_err());
        assert!(prepare_coherent_state(50.0, 0.0, 10, 100).is_err());
    }

    #[test]
    fn population_cases() {
        let s = prepare_coherent_state(1e4, 1.0, 30, 40).unwrap();
        assert!((population(&s) - 1.0).abs() < 1e-12);
        assert_eq!(population(&AmplitudeVector::zeros(0, 10)), 0.0);
        let mut h = s.clone();
        h.values.iter_mut().for_each(|z| *z /= 2f64.sqrt());
        assert!((population(&h) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rhs_diagonal_case() {
        let e = EomCoefficients::exponential(4.0, 1.0, 3.0);
        let y: Vec<_> = (0..7).map(|i| c(i as f64, -1.0)).collect();
        let mut out = vec![c(0.0, 0.0); 7];
        rhs(0.7, &y, &e, &mut out);
        for (o, v) in out.iter().zip(&y) {
            assert_eq!(*o, -c(2.0, 0.0) * v);
        }
        let zero = vec![c(0.0, 0.0); 7];
        rhs(0.7, &zero, &e, &mut out);
        assert!(out.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn rhs_band_structure_and_truncation() {
        let mut e = EomCoefficients::exponential(0.0, 1.0, 2.0);
        e.c[3] = c(1.0, 0.0); // δ = −2
        e.c[8] = c(0.5, 0.0); // δ = +4
        let mut y = vec![c(0.0, 0.0); 11];
        y[5] = c(1.0, 0.0);
        let mut out = vec![c(0.0, 0.0); 11];
        let t = 0.3;
        rhs(t, &y, &e, &mut out);
        // E₅ feeds E₇ through δ = −2 and E₁ through δ = +4.
        let p2 = Complex64::from_polar(1.0, 2.0 * 2.0 * t);
        let m4 = Complex64::from_polar(1.0, -4.0 * 2.0 * t);
        assert!((out[7] + p2).norm() < 1e-15);
        assert!((out[1] + m4 * 0.5).norm() < 1e-15);
        let touched: Vec<_> = (0..11).filter(|&i| out[i].norm() > 0.0).collect();
        assert_eq!(touched, vec![1, 7]);
        // Window edges read zeros.
        let mut y = vec![c(0.0, 0.0); 11];
        y[0] = c(1.0, 0.0);
        rhs(t, &y, &e, &mut out);
        assert_eq!(out.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn trapping_metric_of_exponential() {
        let g = 2.0;
        let times: Vec<f64> = (0..400).map(|i| 2.0 * i as f64 / 399.0).collect();
        let pi: Vec<f64> = times.iter().map(|t| (-g * t).exp()).collect();
        let trace = PopulationTrace {
            reference: pi.clone(),
            times,
            pi,
        };
        assert!((trapping_metric(&trace).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn trapping_metric_sentinel_and_errors() {
        let times = vec![0.0, 1.0, 2.0];
        let reference = vec![1.0, (-1.0f64).exp(), (-2.0f64).exp()];
        let flat = PopulationTrace {
            times: times.clone(),
            pi: vec![1.0, 0.9, 0.8],
            reference: reference.clone(),
        };
        assert_eq!(trapping_metric(&flat).unwrap(), f64::INFINITY);
        let bad = PopulationTrace {
            times: vec![0.0, 0.0, 1.0],
            pi: vec![1.0, 0.9, 0.8],
            reference,
        };
        assert!(matches!(trapping_metric(&bad), Err(Error::MalformedTrace(_))));
    }

    #[test]
    fn config_validation() {
        let ok = SimulationConfig::default();
        ok.validate().unwrap();
        let bad = SimulationConfig { cutoff_w: 15_000, ..ok };
        assert!(bad.validate().unwrap_err().to_string().contains("W < delta_n"));
        let bad = SimulationConfig { delta_n: 2_000_000, cutoff_w: 10, ..ok };
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.field.omega_bar = 0.0;
        assert!(bad.validate().unwrap_err().to_string().contains("static field"));
        let times = ok.output_times();
        assert_eq!(times.len(), 400);
        assert_eq!(times[0], 0.0);
        assert_eq!(*times.last().unwrap(), ok.t_max);
    }
}
