#[path = "support/transcription.rs"]
mod transcription;

use mptrap_core::couplings::{CouplingInputs, EffectiveCouplings};
use mptrap_core::eom::{self, ReductionOptions};
use mptrap_core::levelscheme::{decay_rate_from_dipole, dipole_from_decay_rate};
use mptrap_core::{Complex64, FieldConfig, Level, LevelScheme};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm())
}

fn all(c: &EffectiveCouplings) -> Vec<Complex64> {
    c.alpha.iter().chain(&c.beta).copied().collect()
}

fn rubidium_with(extra_levels: Vec<Level>, extra: &[(u32, u32, f64)]) -> LevelScheme {
    let rb = LevelScheme::rubidium().unwrap();
    let mut levels = rb.levels().to_vec();
    levels.extend(extra_levels);
    let mut raw: Vec<(u32, u32, f64)> =
        rb.transitions().iter().map(|t| (t.upper, t.lower, t.gamma_hat)).collect();
    raw.extend_from_slice(extra);
    LevelScheme::new(levels, &raw, rb.main_upper(), rb.main_lower()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn photon_order_homogeneity(seed in any::<u64>(), s in 0.1f64..10.0) {
        let toy = transcription::Toy::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let inputs = toy.inputs();
        let wk = inputs.omega_21();
        let base = inputs.effective(wk).unwrap();
        let scaled = inputs.scaled(s).effective(wk).unwrap();
        prop_assert!(close(scaled.alpha[0], base.alpha[0] * s, 1e-13));
        for i in 1..13 {
            prop_assert!(close(scaled.alpha[i], base.alpha[i] * (s * s), 1e-12), "alpha{}", i);
        }
        for i in 0..4 {
            prop_assert!(close(scaled.beta[i], base.beta[i] * (s * s * s), 1e-12), "beta{}", i + 1);
        }
    }

    #[test]
    fn relabeling_levels_leaves_coefficients_unchanged(seed in any::<u64>(), shift in 0usize..7) {
        let toy = transcription::Toy::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let n = toy.omega.len();
        // Cyclic relabeling i -> (i + shift) mod n, applied to every array.
        let p = |i: usize| (i + shift) % n;
        let mut omega = vec![0.0; n];
        let mut lf = vec![Complex64::new(0.0, 0.0); n * n];
        let mut vac = lf.clone();
        for a in 0..n {
            omega[p(a)] = toy.omega[a];
            for b in 0..n {
                lf[p(a) * n + p(b)] = toy.lf[a * n + b];
                vac[p(a) * n + p(b)] = toy.vac[a * n + b];
            }
        }
        let moved = transcription::Toy {
            omega,
            lf,
            vac,
            lower: p(toy.lower),
            upper: p(toy.upper),
            omega_bar: toy.omega_bar,
        };
        let wk = toy.inputs().omega_21();
        let a = all(&toy.inputs().effective(wk).unwrap());
        let b = all(&moved.inputs().effective(wk).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(close(*x, *y, 1e-12), "{} vs {}", x, y);
        }
    }

    #[test]
    fn dipole_round_trip(d in 0.0f64..1e-27, omega in 1e13f64..1e17) {
        let back = dipole_from_decay_rate(decay_rate_from_dipole(d, omega), omega).unwrap();
        prop_assert!((back - d).abs() <= 1e-12 * d);
    }

    #[test]
    fn isolated_level_contributes_nothing(energy in 0.1f64..4.0, l in 0u32..4) {
        let rb = LevelScheme::rubidium().unwrap();
        let field = FieldConfig::default();
        let extra = Level { id: 9, label: "x".into(), energy_ev: energy, orbital_l: l };
        let with = rubidium_with(vec![extra], &[]);
        let a = CouplingInputs::from_scheme(&rb, &field).unwrap().effective(rb.omega_21()).unwrap();
        let b = CouplingInputs::from_scheme(&with, &field).unwrap().effective(rb.omega_21()).unwrap();
        prop_assert_eq!(all(&a), all(&b));
    }

    #[test]
    fn assembled_decay_symbol_is_nonnegative(
        rabi in 0.0f64..1.2e13,
        log_wb in 2.0f64..9.0,
        p in -1.0f64..=1.0,
        log_n in 4.0f64..9.0,
    ) {
        let scheme = LevelScheme::rubidium().unwrap();
        let field = FieldConfig {
            omega_bar: 10f64.powf(log_wb),
            rabi_12: rabi,
            photon_number: 10f64.powf(log_n),
            phase: 0.0,
            interference_p: p,
        };
        let options = ReductionOptions { driving: false, ..ReductionOptions::default() };
        let c = eom::assemble_with_options(&scheme, &field, 0.0, options).unwrap().coefficients;
        let c0 = c.c[0].re;
        for k in 0..=720 {
            let q = std::f64::consts::PI * k as f64 / 360.0;
            let s: f64 = (-4..=4)
                .map(|d| (c.band(d) * Complex64::from_polar(1.0, f64::from(d) * q)).re)
                .sum();
            prop_assert!(s >= -1e-9 * c0, "symbol {} at q = {}", s, q);
        }
    }
}

#[test]
fn forbidden_listed_pair_equals_omitted_pair() {
    // 6S-5S is parity forbidden; listing it with a rate must not change anything.
    let rb = LevelScheme::rubidium().unwrap();
    let listed = rubidium_with(vec![], &[(3, 1, 5.0e6)]);
    assert!(!listed.transition(3, 1).unwrap().allowed);
    assert_eq!(listed.dipole(3, 1), 0.0);
    let field = FieldConfig::default();
    let a = CouplingInputs::from_scheme(&rb, &field).unwrap().effective(rb.omega_21()).unwrap();
    let b = CouplingInputs::from_scheme(&listed, &field).unwrap().effective(rb.omega_21()).unwrap();
    assert_eq!(all(&a), all(&b));
}

/// Hermitian part of the decay matrix on a finite window, checked for
/// positive semidefiniteness by attempting a Cholesky factorisation.
#[test]
fn windowed_decay_matrix_has_no_negative_eigenvalue() {
    let scheme = LevelScheme::rubidium().unwrap();
    for p in [1.0, 0.5, -1.0] {
        let field = FieldConfig { interference_p: p, rabi_12: 1.2e13, ..FieldConfig::default() };
        let options = ReductionOptions { driving: false, ..ReductionOptions::default() };
        let c = eom::assemble_with_options(&scheme, &field, 0.0, options).unwrap().coefficients;
        let n = 41;
        let shift = 1e-9 * c.c[0].re;
        let mut h = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for d in -4..=4i32 {
                let col = r as i32 + d;
                if (0..n as i32).contains(&col) {
                    let col = col as usize;
                    h[r * n + col] += c.band(d) * 0.5;
                    h[col * n + r] += c.band(d).conj() * 0.5;
                }
            }
            h[r * n + r] += shift;
        }
        // In-place Cholesky; a non-positive pivot means a negative eigenvalue
        // below the tolerance.
        for k in 0..n {
            let mut pivot = h[k * n + k].re;
            for m in 0..k {
                pivot -= h[k * n + m].norm_sqr();
            }
            assert!(pivot > 0.0, "p = {p}: pivot {pivot} at {k}");
            let pivot = pivot.sqrt();
            h[k * n + k] = Complex64::new(pivot, 0.0);
            for r in k + 1..n {
                let mut v = h[r * n + k];
                for m in 0..k {
                    v -= h[r * n + m] * h[k * n + m].conj();
                }
                h[r * n + k] = v / pivot;
            }
        }
    }
}
