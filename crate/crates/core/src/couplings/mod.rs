//! Coupling constants and the effective two- and three-photon coefficients.
//!
//! Low-frequency couplings λᵢⱼ are fixed by the main-transition Rabi
//! frequency: the field amplitude follows from `Ω₁₂ = 2|λ₁₂|√(N+1)` and every
//! other λᵢⱼ scales with the dipole ratio dᵢⱼ/d₁₂. Vacuum couplings λᵢⱼₖ are
//! carried as `−i·dᵢⱼ/d₁₂`, i.e. per unit common vacuum amplitude. That
//! amplitude cancels in the Markov reduction, which replaces products of two
//! vacuum couplings by decay rates.

mod terms;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::levelscheme::LevelScheme;
use terms::{Addend, Field, Idx, ALPHA, ALPHA_NAMES, BETA, BETA_NAMES};

/// Relative size of the small-denominator guard with respect to ω₂₁.
pub const DENOMINATOR_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    /// Low-frequency field angular frequency ω̄, rad/s.
    pub omega_bar: f64,
    /// Main-transition Rabi frequency Ω₁₂, rad/s.
    pub rabi_12: f64,
    /// Mean photon number N of the initial coherent state.
    pub photon_number: f64,
    /// Phase φ of the slow field, rad, measured from the field maximum:
    /// the initial field expectation is proportional to cos φ.
    pub phase: f64,
    /// Dipole overlap between distinct spontaneous transitions.
    pub interference_p: f64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            omega_bar: 1e5,
            rabi_12: 1e13,
            photon_number: 1e6,
            phase: 0.0,
            interference_p: 1.0,
        }
    }
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_bar > 0.0) || !self.omega_bar.is_finite() {
            return Err(Error::InvalidInput(format!(
                "omega_bar must be positive (static field excluded), got {}",
                self.omega_bar
            )));
        }
        if !(self.rabi_12 >= 0.0) || !self.rabi_12.is_finite() {
            return Err(Error::InvalidInput(format!(
                "rabi_12 must be non-negative, got {}",
                self.rabi_12
            )));
        }
        if !(self.photon_number >= 1.0) || !self.photon_number.is_finite() {
            return Err(Error::InvalidInput(format!(
                "photon_number must be at least 1, got {}",
                self.photon_number
            )));
        }
        if !(-1.0..=1.0).contains(&self.interference_p) {
            return Err(Error::InvalidInput(format!(
                "interference_p must lie in [-1, 1], got {}",
                self.interference_p
            )));
        }
        if !self.phase.is_finite() {
            return Err(Error::InvalidInput("phase must be finite".into()));
        }
        Ok(())
    }

    /// Phase of the coherent-state parameter α = √N e^{iθ}. The field
    /// operator i(b − b†) has expectation −2√N sin θ, so θ = φ − π/2.
    pub fn coherent_phase(&self) -> f64 {
        self.phase - std::f64::consts::FRAC_PI_2
    }

    /// Low-frequency field amplitude ℰ in V/m.
    pub fn field_amplitude(&self, scheme: &LevelScheme) -> f64 {
        HBAR * self.rabi_12 / (2.0 * scheme.dipole_21() * (self.photon_number + 1.0).sqrt())
    }
}

/// `λ = −i·ℰ·d·overlap/ħ`.
pub fn lambda_coupling(dipole: f64, field_amplitude: f64, polarization_overlap: f64) -> Complex64 {
    Complex64::new(0.0, -field_amplitude * dipole * polarization_overlap / HBAR)
}

/// `Ω = 2|λ|√(n+1)`.
pub fn rabi_frequency(lambda: Complex64, n: f64) -> f64 {
    2.0 * lambda.norm() * (n + 1.0).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detunings {
    /// Δ = ω₂ − ω₁ − (ω_k + ω̄).
    pub big_delta: f64,
    /// Δⱼ = ωⱼ₁ − ω_k per auxiliary level id.
    pub delta_j: BTreeMap<u32, f64>,
    /// Δₙ, same form as Δⱼ; kept separately for the double sums.
    pub delta_n: BTreeMap<u32, f64>,
}

pub fn detunings(scheme: &LevelScheme, omega_k: f64, omega_bar: f64) -> Detunings {
    let lower = scheme.main_lower();
    let delta_j: BTreeMap<u32, f64> = scheme
        .auxiliary()
        .map(|l| (l.id, scheme.omega_ij(l.id, lower) - omega_k))
        .collect();
    Detunings {
        big_delta: scheme.omega_21() - (omega_k + omega_bar),
        delta_n: delta_j.clone(),
        delta_j,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCouplings {
    /// α₀..α₁₂.
    pub alpha: [Complex64; 13],
    /// β₁..β₄.
    pub beta: [Complex64; 4],
    /// Vacuum frequency of the evaluation, rad/s.
    pub omega_k: f64,
}

/// Coefficient that multiplies `a_k σ₂₁` in the vacuum interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecayRole {
    Alpha0,
    Alpha1,
    Alpha2,
    Beta1Conj,
    Beta2Conj,
    Beta3Conj,
    Beta4Conj,
}

impl DecayRole {
    pub const ALL: [DecayRole; 7] = [
        DecayRole::Alpha0,
        DecayRole::Alpha1,
        DecayRole::Alpha2,
        DecayRole::Beta1Conj,
        DecayRole::Beta2Conj,
        DecayRole::Beta3Conj,
        DecayRole::Beta4Conj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecayRole::Alpha0 => "alpha0",
            DecayRole::Alpha1 => "alpha1",
            DecayRole::Alpha2 => "alpha2",
            DecayRole::Beta1Conj => "beta1*",
            DecayRole::Beta2Conj => "beta2*",
            DecayRole::Beta3Conj => "beta3*",
            DecayRole::Beta4Conj => "beta4*",
        }
    }
}

/// A decay-vertex coefficient split by the spontaneous transition whose
/// vacuum coupling it contains: `coefficient = Σ_rs R_rs·λ_rsk`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VacuumSplit {
    /// `((r, s), R_rs)` with level indices `r < s`, sorted by pair.
    pub parts: Vec<((usize, usize), Complex64)>,
}

impl VacuumSplit {
    pub fn ratio(&self, pair: (usize, usize)) -> Complex64 {
        self.parts
            .iter()
            .find(|(p, _)| *p == pair)
            .map_or(Complex64::new(0.0, 0.0), |(_, r)| *r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetailedCouplings {
    pub couplings: EffectiveCouplings,
    /// Vacuum decomposition per [`DecayRole`], in [`DecayRole::ALL`] order.
    pub split: [VacuumSplit; 7],
}

/// Dense coupling data over level indices: the input of the coefficient engine.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingInputs {
    /// Level angular frequencies, rad/s.
    pub omega: Vec<f64>,
    /// Low-frequency couplings λᵢⱼ, row-major `n×n`.
    pub lf: Vec<Complex64>,
    /// Vacuum couplings λᵢⱼₖ, row-major `n×n`.
    pub vac: Vec<Complex64>,
    pub lower: usize,
    pub upper: usize,
    /// Auxiliary level indices.
    pub aux: Vec<usize>,
    /// Level ids for error messages.
    pub ids: Vec<u32>,
    pub omega_bar: f64,
    /// Absolute small-denominator threshold, rad/s.
    pub guard: f64,
}

impl CouplingInputs {
    pub fn from_scheme(scheme: &LevelScheme, field: &FieldConfig) -> Result<Self> {
        field.validate()?;
        let n = scheme.levels().len();
        let d12 = scheme.dipole_21();
        let lf_scale = field.rabi_12 / (2.0 * (field.photon_number + 1.0).sqrt());
        let mut lf = vec![Complex64::new(0.0, 0.0); n * n];
        let mut vac = vec![Complex64::new(0.0, 0.0); n * n];
        for a in 0..n {
            for b in 0..n {
                let ratio = scheme.dipole_by_index(a, b) / d12;
                lf[a * n + b] = Complex64::new(0.0, -lf_scale * ratio);
                vac[a * n + b] = Complex64::new(0.0, -ratio);
            }
        }
        let lower = scheme.index_of(scheme.main_lower()).expect("validated");
        let upper = scheme.index_of(scheme.main_upper()).expect("validated");
        Ok(Self {
            omega: scheme.levels().iter().map(|l| l.omega()).collect(),
            lf,
            vac,
            lower,
            upper,
            aux: (0..n).filter(|&i| i != lower && i != upper).collect(),
            ids: scheme.levels().iter().map(|l| l.id).collect(),
            omega_bar: field.omega_bar,
            guard: DENOMINATOR_GUARD * scheme.omega_21(),
        })
    }

    pub fn level_count(&self) -> usize {
        self.omega.len()
    }

    pub fn omega_21(&self) -> f64 {
        self.omega[self.upper] - self.omega[self.lower]
    }

    /// Copy with every coupling constant multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.lf.iter_mut().for_each(|x| *x *= s);
        out.vac.iter_mut().for_each(|x| *x *= s);
        out
    }

    fn coupling(&self, field: Field, a: usize, b: usize) -> Complex64 {
        let n = self.level_count();
        match field {
            Field::Lf => self.lf[a * n + b],
            Field::Vac => self.vac[a * n + b],
        }
    }

    /// Sums one addend table. `sink` receives every nonzero addend value
    /// together with the level pair of its first vacuum factor.
    fn sum_table(
        &self,
        table: &[Addend],
        name: &'static str,
        omega_k: f64,
        mut sink: impl FnMut(Option<(usize, usize)>, Complex64),
    ) -> Result<Complex64> {
        let w1 = self.omega[self.lower];
        let big_delta = self.omega_21() - (omega_k + self.omega_bar);
        let mut total = Complex64::new(0.0, 0.0);
        for addend in table {
            let uses = |i: Idx| {
                addend
                    .factors
                    .iter()
                    .any(|f| f.a == i || f.b == i)
            };
            let js: &[usize] = if uses(Idx::J) { &self.aux } else { &[usize::MAX] };
            let ns: &[usize] = if uses(Idx::N) { &self.aux } else { &[usize::MAX] };
            for &j in js {
                for &nn in ns {
                    let resolve = |i: Idx| match i {
                        Idx::O => self.lower,
                        Idx::T => self.upper,
                        Idx::J => j,
                        Idx::N => nn,
                    };
                    let mut num = Complex64::new(addend.pre, 0.0);
                    let mut vac_pair = None;
                    for f in addend.factors {
                        let (a, b) = (resolve(f.a), resolve(f.b));
                        let c = self.coupling(f.field, a, b);
                        num *= if f.conj { c.conj() } else { c };
                        if f.field == Field::Vac && vac_pair.is_none() {
                            vac_pair = Some((a.min(b), a.max(b)));
                        }
                    }
                    if num == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let dj = if j == usize::MAX { 0.0 } else { self.omega[j] - w1 - omega_k };
                    let dn = if nn == usize::MAX { 0.0 } else { self.omega[nn] - w1 - omega_k };
                    let mut den = 1.0;
                    for l in addend.dens {
                        let v = f64::from(l.d) * big_delta
                            + f64::from(l.dj) * dj
                            + f64::from(l.dn) * dn
                            + f64::from(l.wk) * omega_k
                            + f64::from(l.wb) * self.omega_bar;
                        if v.abs() < self.guard {
                            let culprit = if l.dn != 0 && nn != usize::MAX { nn } else { j };
                            return Err(Error::SmallDenominator {
                                coefficient: name,
                                level: self.ids.get(culprit).copied().unwrap_or(0),
                                value: v,
                            });
                        }
                        den *= v;
                    }
                    let value = num / den;
                    sink(vac_pair, value);
                    total += value;
                }
            }
        }
        Ok(total)
    }

    pub fn alpha(&self, omega_k: f64) -> Result<[Complex64; 13]> {
        let mut out = [Complex64::new(0.0, 0.0); 13];
        for (i, table) in ALPHA.iter().enumerate() {
            out[i] = self.sum_table(table, ALPHA_NAMES[i], omega_k, |_, _| {})?;
        }
        Ok(out)
    }

    pub fn beta(&self, omega_k: f64) -> Result<[Complex64; 4]> {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (i, table) in BETA.iter().enumerate() {
            out[i] = self.sum_table(table, BETA_NAMES[i], omega_k, |_, _| {})?;
        }
        Ok(out)
    }

    pub fn effective(&self, omega_k: f64) -> Result<EffectiveCouplings> {
        Ok(EffectiveCouplings {
            alpha: self.alpha(omega_k)?,
            beta: self.beta(omega_k)?,
            omega_k,
        })
    }

    /// Coefficients together with their split over spontaneous transitions.
    pub fn detailed(&self, omega_k: f64) -> Result<DetailedCouplings> {
        let mut split: [VacuumSplit; 7] = Default::default();
        let mut alpha = [Complex64::new(0.0, 0.0); 13];
        let mut beta = [Complex64::new(0.0, 0.0); 4];

        let collect = |table: &[Addend],
                           name: &'static str,
                           conj: bool,
                           slot: &mut VacuumSplit|
         -> Result<Complex64> {
            let mut parts: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
            let total = self.sum_table(table, name, omega_k, |pair, v| {
                let pair = pair.expect("decay vertices carry a vacuum factor");
                *parts.entry(pair).or_default() += v;
            })?;
            let n = self.level_count();
            slot.parts = parts
                .into_iter()
                .filter_map(|((r, s), p)| {
                    let lam = self.vac[r * n + s];
                    if lam == Complex64::new(0.0, 0.0) {
                        return None;
                    }
                    let p = if conj { p.conj() } else { p };
                    Some(((r, s), p / lam))
                })
                .collect();
            Ok(total)
        };

        // Pairs are (r, s) with r < s while the addends may reference the
        // vacuum coupling as λ_sr; that is harmless because the scheme
        // couplings are symmetric in their indices.
        for (i, role) in DecayRole::ALL.iter().enumerate() {
            match role {
                DecayRole::Alpha0 | DecayRole::Alpha1 | DecayRole::Alpha2 => {
                    alpha[i] = collect(ALPHA[i], ALPHA_NAMES[i], false, &mut split[i])?;
                }
                _ => {
                    let b = i - 3;
                    beta[b] = collect(BETA[b], BETA_NAMES[b], true, &mut split[i])?;
                }
            }
        }
        for i in 3..13 {
            alpha[i] = self.sum_table(ALPHA[i], ALPHA_NAMES[i], omega_k, |_, _| {})?;
        }
        Ok(DetailedCouplings {
            couplings: EffectiveCouplings {
                alpha,
                beta,
                omega_k,
            },
            split,
        })
    }

    /// `N(α₉ + α₁₀ − α₅ − α₆)` evaluated at `omega_k`; these four
    /// coefficients do not depend on the vacuum frequency.
    pub fn stark_shift(&self, photon_number: f64, omega_k: f64) -> Result<f64> {
        let mut a = [Complex64::new(0.0, 0.0); 13];
        for i in [5, 6, 9, 10] {
            a[i] = self.sum_table(ALPHA[i], ALPHA_NAMES[i], omega_k, |_, _| {})?;
        }
        let omega = effective_frequency_raw(self.omega_21(), &a, photon_number)?;
        Ok(omega - self.omega_21())
    }
}

pub fn alpha_coefficients(
    scheme: &LevelScheme,
    field: &FieldConfig,
    omega_k: f64,
) -> Result<[Complex64; 13]> {
    CouplingInputs::from_scheme(scheme, field)?.alpha(omega_k)
}

pub fn beta_coefficients(
    scheme: &LevelScheme,
    field: &FieldConfig,
    omega_k: f64,
) -> Result<[Complex64; 4]> {
    CouplingInputs::from_scheme(scheme, field)?.beta(omega_k)
}

pub fn effective_couplings(
    scheme: &LevelScheme,
    field: &FieldConfig,
    omega_k: f64,
) -> Result<EffectiveCouplings> {
    CouplingInputs::from_scheme(scheme, field)?.effective(omega_k)
}

/// Stark-shifted transition frequency `ω₂ − ω₁ + N(α₉ + α₁₀ − α₅ − α₆)`.
pub fn effective_frequency(scheme: &LevelScheme, alpha: &[Complex64; 13], n: f64) -> Result<f64> {
    effective_frequency_raw(scheme.omega_21(), alpha, n)
}

fn effective_frequency_raw(omega_21: f64, alpha: &[Complex64; 13], n: f64) -> Result<f64> {
    let shift = (alpha[9] + alpha[10] - alpha[5] - alpha[6]) * n;
    if shift.im.abs() > 1e-6 * shift.re.abs() + 1e-9 {
        return Err(Error::StarkShiftNotReal {
            real: shift.re,
            imag: shift.im,
        });
    }
    Ok(omega_21 + shift.re)
}
