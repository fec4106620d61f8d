//! Dormand–Prince 5(4) with Hairer's continuous extension for complex
//! vector ODEs.
//!
//! The error estimate is taken norm-wise,
//! `‖e‖₂ / (atol + rtol·max(‖y‖₂, ‖y_new‖₂))`, which suits amplitude vectors
//! whose total norm is the quantity of interest.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<f64>,
    /// Upper bound on the step size.
    pub max_step: f64,
}

impl Dopri5Options {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: rel_tol * 1e-6,
            ..Self::default()
        }
    }
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_steps: 50_000_000,
            initial_step: None,
            max_step: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Integrates `y' = f(t, y)` from `t0` and calls `observe(i, t_out[i], y)`
/// at every requested output time. Output times must be non-decreasing and
/// not before `t0`. Returns the step statistics and the final state.
pub fn integrate<F, O>(
    mut f: F,
    t0: f64,
    y0: Vec<Complex64>,
    t_out: &[f64],
    opts: &Dopri5Options,
    mut observe: O,
) -> Result<(Stats, Vec<Complex64>)>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
    O: FnMut(usize, f64, &[Complex64]),
{
    if !(opts.rel_tol > 0.0) || !(opts.abs_tol >= 0.0) {
        return Err(Error::InvalidInput("tolerances must be positive".into()));
    }
    if t_out.windows(2).any(|w| w[1] < w[0]) || t_out.first().is_some_and(|&t| t < t0) {
        return Err(Error::InvalidInput("output times must be sorted and >= t0".into()));
    }
    let n = y0.len();
    let mut stats = Stats::default();
    let mut y = y0;
    let mut next_out = 0;
    while next_out < t_out.len() && t_out[next_out] == t0 {
        observe(next_out, t0, &y);
        next_out += 1;
    }
    let Some(&t_end) = t_out.last() else {
        return Ok((stats, y));
    };
    if next_out == t_out.len() {
        return Ok((stats, y));
    }

    let zero = Complex64::new(0.0, 0.0);
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let mut y_new = vec![zero; n];
    let mut dense = vec![zero; n];
    let mut err = vec![zero; n];

    f(t0, &y, &mut k1);
    stats.rhs_evals += 1;

    let span = t_end - t0;
    let mut h = match opts.initial_step {
        Some(h) => h,
        None => {
            let sc = opts.abs_tol + opts.rel_tol * norm(&y);
            let d0 = norm(&y) / sc;
            let d1 = norm(&k1) / sc;
            let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
            let h0 = h0.min(span);
            for i in 0..n {
                tmp[i] = y[i] + k1[i] * h0;
            }
            f(t0 + h0, &tmp, &mut k2);
            stats.rhs_evals += 1;
            for i in 0..n {
                err[i] = k2[i] - k1[i];
            }
            let d2 = norm(&err) / sc / h0;
            let h1 = if d1.max(d2) <= 1e-15 {
                (h0 * 1e-3).max(1e-6 * span)
            } else {
                (0.01 / d1.max(d2)).powf(0.2)
            };
            (100.0 * h0).min(h1)
        }
    }
    .min(opts.max_step)
    .min(span);

    let mut t = t0;
    let mut last_rejected = false;
    while next_out < t_out.len() {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::StepSizeUnderflow { t });
        }
        let final_step = t + h >= t_end;
        if final_step {
            h = t_end - t;
        }
        if h <= 1e-14 * t.abs().max(span) {
            return Err(Error::StepSizeUnderflow { t });
        }

        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (h * A21);
        }
        f(t + C2 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
        }
        f(t + C3 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
        }
        f(t + C4 * h, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
        }
        f(t + C5 * h, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] = y[i]
                + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
        }
        let t_new = if final_step { t_end } else { t + h };
        f(t_new, &tmp, &mut k6);
        for i in 0..n {
            y_new[i] = y[i]
                + (k1[i] * A71 + k3[i] * A73 + k4[i] * A74 + k5[i] * A75 + k6[i] * A76) * h;
        }
        f(t_new, &y_new, &mut k7);
        stats.rhs_evals += 6;

        for i in 0..n {
            err[i] = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                * h;
        }
        let scale = opts.abs_tol + opts.rel_tol * norm(&y).max(norm(&y_new));
        let e = norm(&err) / scale;

        if e <= 1.0 {
            stats.accepted += 1;
            // Dense output for every output time inside (t, t_new].
            while next_out < t_out.len() && t_out[next_out] <= t_new {
                let tq = t_out[next_out];
                if tq == t_new {
                    observe(next_out, tq, &y_new);
                } else {
                    let theta = (tq - t) / h;
                    let theta1 = 1.0 - theta;
                    for i in 0..n {
                        let ydiff = y_new[i] - y[i];
                        let bspl = k1[i] * h - ydiff;
                        let r4 = ydiff - k7[i] * h - bspl;
                        let r5 = (k1[i] * D1
                            + k3[i] * D3
                            + k4[i] * D4
                            + k5[i] * D5
                            + k6[i] * D6
                            + k7[i] * D7)
                            * h;
                        dense[i] = y[i]
                            + (ydiff + (bspl + (r4 + r5 * theta1) * theta) * theta1) * theta;
                    }
                    observe(next_out, tq, &dense);
                }
                next_out += 1;
            }
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            t = t_new;
            let mut fac = if e == 0.0 { 5.0 } else { 0.9 * e.powf(-0.2) };
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(opts.max_step);
            last_rejected = false;
        } else {
            stats.rejected += 1;
            let fac = if e.is_finite() { (0.9 * e.powf(-0.2)).max(0.1) } else { 0.1 };
            h *= fac.min(1.0);
            last_rejected = true;
        }
    }
    Ok((stats, y))
}
