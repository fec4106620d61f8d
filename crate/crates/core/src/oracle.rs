//! Unreduced amplitude equations on a discrete vacuum-mode grid.
//!
//! The excited amplitudes `Eₙ` couple to ground amplitudes `Gₘᵏ` (one photon
//! in mode `k`) through the same decay vertices that the reduced model
//! uses, evaluated at every mode frequency. Each mode carries the coupling
//! `−i√(Γ_rs(ω_k)Δω/2π)` per spontaneous transition, so the grid reproduces
//! the golden-rule rate in the continuum limit. The system is closed and its
//! total norm is conserved; only the Markov step differs from the reduced model.

use num_complex::Complex64;

use crate::couplings::{CouplingInputs, DecayRole, FieldConfig};
use crate::dynamics::{self, population, prepare_coherent_state, AmplitudeVector, PopulationTrace, SimulationConfig};
use crate::eom::{self, gamma_at, Channel, EomCoefficients, ReductionOptions, VertexFactor};
use crate::error::{Error, Result};
use crate::integrator::{self, Dopri5Options};
use crate::levelscheme::LevelScheme;

/// Upper bound on `(2Δ_N+1)(M+1)`.
pub const MAX_AMPLITUDES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumModeGrid {
    /// Centre frequency, rad/s.
    pub center: f64,
    /// Half-width Λ, rad/s.
    pub half_width: f64,
    pub mode_count: usize,
    /// Δω = 2Λ/(M−1).
    pub spacing: f64,
    /// Golden-rule coupling √(Γ̂Δω/2π) of the reference transition.
    pub coupling: f64,
}

impl VacuumModeGrid {
    pub fn frequencies(&self) -> Vec<f64> {
        let half = (self.mode_count / 2) as f64;
        (0..self.mode_count)
            .map(|k| self.center + (k as f64 - half) * self.spacing)
            .collect()
    }
}

pub fn discretize_vacuum(
    gamma_hat: f64,
    center: f64,
    half_width: f64,
    mode_count: usize,
) -> Result<VacuumModeGrid> {
    if mode_count < 3 || mode_count.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "mode_count must be odd and at least 3, got {mode_count}"
        )));
    }
    if !(half_width > 0.0) {
        return Err(Error::InvalidInput(format!(
            "half_width must be positive, got {half_width}"
        )));
    }
    if !(gamma_hat >= 0.0) {
        return Err(Error::InvalidInput("gamma_hat must be non-negative".into()));
    }
    if center - half_width <= 0.0 {
        return Err(Error::InvalidInput("grid reaches non-positive frequencies".into()));
    }
    let spacing = 2.0 * half_width / (mode_count - 1) as f64;
    Ok(VacuumModeGrid {
        center,
        half_width,
        mode_count,
        spacing,
        coupling: (gamma_hat * spacing / (2.0 * std::f64::consts::PI)).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub e: AmplitudeVector,
    /// Fock index of the first row of `g`.
    pub g_offset: u64,
    pub mode_count: usize,
    /// `Gₘᵏ`, row-major in `m`.
    pub g: Vec<Complex64>,
}

impl FullState {
    pub fn norm_sqr(&self) -> f64 {
        population(&self.e) + self.g.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

/// Per-mode vertex couplings shared by the full integration.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCouplings {
    pub omega_eff: f64,
    pub omega_bar: f64,
    pub photon_number: f64,
    /// `(vertex, coupling per mode)`.
    pub vertices: Vec<(VertexFactor, Vec<Complex64>)>,
    /// α₁₂ for the driving terms, already multiplied by ϱ.
    pub driving_alpha12: Complex64,
    /// Reference decay rate Γ̂₂₁.
    pub gamma_ref: f64,
}

impl OracleCouplings {
    pub fn new(
        scheme: &LevelScheme,
        field: &FieldConfig,
        rho: f64,
        options: ReductionOptions,
        grid: &VacuumModeGrid,
    ) -> Result<Self> {
        let channels = eom::channels(scheme);
        if channels.len() > 1 && field.interference_p != 1.0 {
            return Err(Error::InvalidInput(
                "the mode grid carries a single polarisation; interference_p must be 1".into(),
            ));
        }
        let inputs = CouplingInputs::from_scheme(scheme, field)?;
        let assembly = eom::assemble(&inputs, &channels, field, rho, options)?;
        let vertex_set = options.vertices();
        let mut vertices: Vec<(VertexFactor, Vec<Complex64>)> = vertex_set
            .iter()
            .map(|&v| (v, Vec::with_capacity(grid.mode_count)))
            .collect();
        for wk in grid.frequencies() {
            let d = inputs.detailed(wk)?;
            for (v, per_mode) in vertices.iter_mut() {
                let slot = DecayRole::ALL.iter().position(|&r| r == v.role).expect("role");
                let mut a = Complex64::new(0.0, 0.0);
                for &(pair, ratio) in &d.split[slot].parts {
                    if let Some(ch) = channels.iter().find(|c: &&Channel| c.pair == pair) {
                        let g = (gamma_at(ch.gamma_hat, ch.omega, wk) * grid.spacing
                            / (2.0 * std::f64::consts::PI))
                            .sqrt();
                        a += ratio * Complex64::new(0.0, -g);
                    }
                }
                per_mode.push(a);
            }
        }
        Ok(Self {
            omega_eff: assembly.coefficients.omega_eff,
            omega_bar: field.omega_bar,
            photon_number: field.photon_number,
            vertices,
            driving_alpha12: assembly.alpha12 * rho,
            gamma_ref: scheme.gamma_hat_21(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleTrace {
    pub trace: PopulationTrace,
    /// Total norm Σ|E|² + Σ|G|² at every output time.
    pub norm: Vec<f64>,
    pub final_state: FullState,
}

/// Integrates the closed E/G system. `exact_sqrt` selects the exact bosonic
/// factors; otherwise they are frozen at the mean photon number as in the
/// reduced model.
pub fn integrate_full(
    config: &SimulationConfig,
    grid: &VacuumModeGrid,
    couplings: &OracleCouplings,
    exact_sqrt: bool,
) -> Result<OracleTrace> {
    config.validate()?;
    let le = (2 * config.delta_n + 1) as usize;
    let m = grid.mode_count;
    let amplitudes = le.saturating_mul(m + 1);
    if amplitudes > MAX_AMPLITUDES {
        return Err(Error::InstanceTooLarge {
            amplitudes,
            limit: MAX_AMPLITUDES,
        });
    }
    let initial = prepare_coherent_state(
        config.field.photon_number,
        config.field.coherent_phase(),
        config.cutoff_w,
        config.delta_n,
    )?;
    let e_off = initial.offset;
    let lg = le + 4;
    let g_off = e_off - 2;

    let n_of = |i: usize| (e_off + i as u64) as f64;
    let nbar = couplings.photon_number;
    let weight = |v: &VertexFactor, n: f64| {
        if exact_sqrt {
            v.exact_weight(n)
        } else {
            v.frozen_weight(nbar)
        }
    };
    // sq[v][i]: bosonic factor for vertex v at excited index i.
    let sq: Vec<Vec<f64>> = couplings
        .vertices
        .iter()
        .map(|(v, _)| (0..le).map(|i| weight(v, n_of(i))).collect())
        .collect();
    let d3: Vec<Complex64> = (0..le)
        .map(|i| {
            let n = n_of(i);
            let f = if exact_sqrt { (n * (n - 1.0)).max(0.0).sqrt() } else { nbar };
            couplings.driving_alpha12.conj() * f
        })
        .collect();
    let d4: Vec<Complex64> = (0..le)
        .map(|i| {
            let n = n_of(i);
            let f = if exact_sqrt { ((n + 1.0) * (n + 2.0)).sqrt() } else { nbar };
            couplings.driving_alpha12 * f
        })
        .collect();
    let detune: Vec<f64> = grid
        .frequencies()
        .iter()
        .map(|wk| couplings.omega_eff - wk)
        .collect();
    let has_driving = couplings.driving_alpha12.norm() > 0.0;
    let omega_bar = couplings.omega_bar;
    let nv = couplings.vertices.len();

    let zero = Complex64::new(0.0, 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut phase = vec![zero; m];
    let mut ap = vec![zero; nv * m];
    let mut u = vec![zero; nv];

    let f = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let (e, g) = y.split_at(le);
        let (de, dg) = dy.split_at_mut(le);
        for k in 0..m {
            phase[k] = Complex64::from_polar(1.0, detune[k] * t);
        }
        for (vi, (_, a)) in couplings.vertices.iter().enumerate() {
            for k in 0..m {
                ap[vi * m + k] = a[k] * phase[k];
            }
        }
        // Excited amplitudes.
        for i in 0..le {
            let mut acc = zero;
            for (vi, (v, _)) in couplings.vertices.iter().enumerate() {
                let row = (i as i64 + 2 + i64::from(v.fock_offset)) as usize;
                let grow = &g[row * m..(row + 1) * m];
                let s: Complex64 = ap[vi * m..(vi + 1) * m]
                    .iter()
                    .zip(grow)
                    .map(|(a, b)| a * b)
                    .sum();
                let ph = Complex64::from_polar(1.0, -f64::from(v.fock_offset) * omega_bar * t);
                acc += s * ph * sq[vi][i];
            }
            if has_driving {
                if i >= 2 {
                    acc += d3[i] * Complex64::from_polar(1.0, 2.0 * omega_bar * t) * e[i - 2];
                }
                if i + 2 < le {
                    acc += d4[i] * Complex64::from_polar(1.0, -2.0 * omega_bar * t) * e[i + 2];
                }
            }
            de[i] = minus_i * acc;
        }
        // Ground amplitudes.
        for r in 0..lg {
            let mut any = false;
            for (vi, (v, _)) in couplings.vertices.iter().enumerate() {
                // Row r couples to the excited index r − 2 − s.
                let src = r as i64 - 2 - i64::from(v.fock_offset);
                u[vi] = if src >= 0 && (src as usize) < le {
                    let src = src as usize;
                    any |= e[src] != zero;
                    let ph = Complex64::from_polar(1.0, f64::from(v.fock_offset) * omega_bar * t);
                    e[src] * ph * sq[vi][src]
                } else {
                    zero
                };
            }
            let out = &mut dg[r * m..(r + 1) * m];
            if !any {
                out.iter_mut().for_each(|z| *z = zero);
                continue;
            }
            for k in 0..m {
                let mut acc = zero;
                for (vi, (_, a)) in couplings.vertices.iter().enumerate() {
                    acc += a[k].conj() * u[vi];
                }
                out[k] = minus_i * phase[k].conj() * acc;
            }
        }
    };

    let mut y0 = initial.values.clone();
    y0.resize(le + lg * m, zero);
    let times = config.output_times();
    let mut pi = vec![0.0; times.len()];
    let mut norm = vec![0.0; times.len()];
    let opts = Dopri5Options::with_rel_tol(config.rel_tol);
    let (_, y) = integrator::integrate(f, 0.0, y0, &times, &opts, |i, _, y| {
        pi[i] = y[..le].iter().map(|z| z.norm_sqr()).sum();
        norm[i] = y.iter().map(|z| z.norm_sqr()).sum();
    })?;
    let reference = times.iter().map(|t| (-couplings.gamma_ref * t).exp()).collect();
    Ok(OracleTrace {
        trace: PopulationTrace { times, pi, reference },
        norm,
        final_state: FullState {
            e: AmplitudeVector {
                offset: e_off,
                values: y[..le].to_vec(),
            },
            g_offset: g_off,
            mode_count: m,
            g: y[le..].to_vec(),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceComparison {
    pub max_abs: f64,
    pub max_abs_time: f64,
    pub max_rel: f64,
    pub max_rel_time: f64,
    /// First time at which `|a−b| > abs_tol + rel_tol·|b|`, if any.
    pub first_violation: Option<f64>,
    pub pass: bool,
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    match times.binary_search_by(|x| x.partial_cmp(&t).expect("finite times")) {
        Ok(i) => values[i],
        Err(i) => {
            let (t0, t1) = (times[i - 1], times[i]);
            let w = (t - t0) / (t1 - t0);
            values[i - 1] * (1.0 - w) + values[i] * w
        }
    }
}

/// Pointwise comparison of `a.pi` against `b.pi`. When the time grids differ,
/// `b` is interpolated linearly onto the samples of `a` inside the overlap.
pub fn compare_traces(
    a: &PopulationTrace,
    b: &PopulationTrace,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<TraceComparison> {
    a.validate()?;
    b.validate()?;
    let lo = a.times[0].max(b.times[0]);
    let hi = a.times[a.times.len() - 1].min(b.times[b.times.len() - 1]);
    if lo > hi {
        return Err(Error::DisjointTraces);
    }
    let mut out = TraceComparison {
        max_abs: 0.0,
        max_abs_time: lo,
        max_rel: 0.0,
        max_rel_time: lo,
        first_violation: None,
        pass: true,
    };
    for (&t, &va) in a.times.iter().zip(&a.pi) {
        if t < lo || t > hi {
            continue;
        }
        let vb = interpolate(&b.times, &b.pi, t);
        let d = (va - vb).abs();
        if d > out.max_abs {
            out.max_abs = d;
            out.max_abs_time = t;
        }
        if vb != 0.0 {
            let r = d / vb.abs();
            if r > out.max_rel {
                out.max_rel = r;
                out.max_rel_time = t;
            }
        }
        if d > abs_tol + rel_tol * vb.abs() && out.first_violation.is_none() {
            out.first_violation = Some(t);
            out.pass = false;
        }
    }
    Ok(out)
}

/// Restricts a trace to `t ≤ t_end`.
pub fn truncate_trace(trace: &PopulationTrace, t_end: f64) -> PopulationTrace {
    let n = trace.times.iter().take_while(|&&t| t <= t_end * (1.0 + 1e-12)).count();
    PopulationTrace {
        times: trace.times[..n].to_vec(),
        pi: trace.pi[..n].to_vec(),
        reference: trace.reference[..n].to_vec(),
    }
}

/// Decay rate from a least-squares fit of ln Π against t, over samples with Π > 0.
pub fn fitted_decay_rate(trace: &PopulationTrace) -> Result<f64> {
    trace.validate()?;
    let pts: Vec<(f64, f64)> = trace
        .times
        .iter()
        .zip(&trace.pi)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&t, &p)| (t, p.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::MalformedTrace("fewer than two positive samples".into()));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(t, l)| (t - mt) * (l - ml)).sum();
    let sxx: f64 = pts.iter().map(|(t, _)| (t - mt).powi(2)).sum();
    Ok(-sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub full: OracleTrace,
    pub reduced: PopulationTrace,
    pub comparison: TraceComparison,
    /// max |Σ|E|² + Σ|G|² − 1| over the output times.
    pub norm_deviation: f64,
}

/// Integrates `reduced` coefficients and the full system built from the same
/// inputs, and compares Π pointwise within `rel_tol`.
pub fn verify(
    scheme: &LevelScheme,
    config: &SimulationConfig,
    options: ReductionOptions,
    reduced: &EomCoefficients,
    grid: &VacuumModeGrid,
    rel_tol: f64,
) -> Result<Verification> {
    let couplings = OracleCouplings::new(scheme, &config.field, config.rho, options, grid)?;
    let full = integrate_full(config, grid, &couplings, true)?;
    let initial = prepare_coherent_state(
        config.field.photon_number,
        config.field.coherent_phase(),
        config.cutoff_w,
        config.delta_n,
    )?;
    let reduced = dynamics::integrate(config, reduced, scheme.gamma_hat_21(), &initial)?;
    let comparison = compare_traces(&full.trace, &reduced, 0.0, rel_tol)?;
    let norm_deviation = full.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    Ok(Verification {
        full,
        reduced,
        comparison,
        norm_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(times: Vec<f64>, pi: Vec<f64>) -> PopulationTrace {
        PopulationTrace {
            reference: pi.clone(),
            times,
            pi,
        }
    }

    #[test]
    fn grid_substitution() {
        let g = discretize_vacuum(2.0, 100.0, 2.0, 3).unwrap();
        assert_eq!(g.spacing, 2.0);
        assert!((g.coupling - (4.0 / (2.0 * std::f64::consts::PI)).sqrt()).abs() < 1e-15);
        assert_eq!(g.frequencies(), vec![98.0, 100.0, 102.0]);
    }

    #[test]
    fn grid_refinement_scaling() {
        let a = discretize_vacuum(1.0, 100.0, 10.0, 101).unwrap();
        let b = discretize_vacuum(1.0, 100.0, 10.0, 201).unwrap();
        assert!((b.spacing / a.spacing - 0.5).abs() < 1e-12);
        assert!((b.coupling / a.coupling - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(discretize_vacuum(1.0, 100.0, 1.0, 4).is_err());
        assert!(discretize_vacuum(1.0, 100.0, 0.0, 5).is_err());
        assert!(discretize_vacuum(1.0, 100.0, 1.0, 1).is_err());
    }

    #[test]
    fn identical_traces_pass() {
        let t = trace(vec![0.0, 1.0, 2.0], vec![1.0, 0.5, 0.25]);
        let r = compare_traces(&t, &t, 0.0, 0.0).unwrap();
        assert_eq!(r.max_abs, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn single_point_violation_is_located() {
        let a = trace(vec![0.0, 1.0, 2.0], vec![1.0, 0.5, 0.25]);
        let b = trace(vec![0.0, 1.0, 2.0], vec![1.0, 0.51, 0.25]);
        let r = compare_traces(&a, &b, 1e-3, 0.0).unwrap();
        assert!(!r.pass);
        assert_eq!(r.first_violation, Some(1.0));
        assert_eq!(r.max_abs_time, 1.0);
        assert!((r.max_abs - 1e-2).abs() < 1e-12);
    }

    #[test]
    fn relative_deviation_of_scaled_exponential() {
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let a: Vec<f64> = times.iter().map(|t| (-t).exp() * (1.0 + 1e-4)).collect();
        let b: Vec<f64> = times.iter().map(|t| (-t).exp()).collect();
        let r = compare_traces(&trace(times.clone(), a), &trace(times, b), 0.0, 2e-4).unwrap();
        assert!((r.max_rel - 1e-4).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn disjoint_ranges_error() {
        let a = trace(vec![0.0, 1.0], vec![1.0, 0.5]);
        let b = trace(vec![2.0, 3.0], vec![1.0, 0.5]);
        assert_eq!(compare_traces(&a, &b, 0.1, 0.1).unwrap_err(), Error::DisjointTraces);
    }

    #[test]
    fn interpolates_onto_common_grid() {
        let a = trace(vec![0.0, 0.5, 1.0], vec![1.0, 0.75, 0.5]);
        let b = trace(vec![0.0, 1.0], vec![1.0, 0.5]);
        let r = compare_traces(&a, &b, 1e-12, 0.0).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn fitted_rate_of_pure_exponential() {
        let times: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let pi = times.iter().map(|t| (-3.0 * t).exp()).collect();
        let r = fitted_decay_rate(&trace(times, pi)).unwrap();
        assert!((r - 3.0).abs() < 1e-12);
    }
}
