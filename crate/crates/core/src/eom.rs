//! Markov reduction of the vacuum modes and assembly of the banded
//! equation of motion
//!
//! ```text
//! dEₙ/dt = −Σ_δ C_δ e^{−iδω̄t} E_{n+δ},   δ ∈ [−4, 4]
//! ```
//!
//! with `C_δ = c_δ` except `C₋₂ = c₃ + i·d₃` and `C₊₂ = c₄ + i·d₄`.
//!
//! Every decay contribution is a pathway: an emission vertex takes `Eₘ`
//! into the ground manifold and an absorption vertex brings it back as `Eₙ`.
//! A vertex with Fock offset `s` couples `Eₙ` to `G_{n+s}` and carries the
//! explicit phase `e^{−isω̄t}`. For an (absorption `A`, emission `B`) pair
//! the amplitude `E_{n+δ}` with `δ = s_A − s_B` feeds `Eₙ`, and the memory
//! kernel localises the vacuum frequency at `ω + κω̄` with `κ = −s_B`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::couplings::{CouplingInputs, DecayRole, DetailedCouplings, FieldConfig};
use crate::error::{Error, Result};
use crate::levelscheme::{LevelScheme, Transition};

pub type VertexRole = DecayRole;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexFactor {
    pub role: VertexRole,
    /// Fock index of the ground-manifold amplitude minus that of the excited one.
    pub fock_offset: i32,
    /// Multiple of ω̄ in the vertex's explicit exponential.
    pub phase_multiple: i32,
}

impl VertexFactor {
    pub fn new(role: VertexRole) -> Self {
        let fock_offset = match role {
            DecayRole::Alpha0 | DecayRole::Beta1Conj | DecayRole::Beta2Conj => 0,
            DecayRole::Alpha1 => 1,
            DecayRole::Alpha2 => -1,
            DecayRole::Beta3Conj => -2,
            DecayRole::Beta4Conj => 2,
        };
        Self {
            role,
            fock_offset,
            phase_multiple: -fock_offset,
        }
    }

    /// All seven decay vertices.
    pub fn full_set() -> Vec<Self> {
        DecayRole::ALL.iter().map(|&r| Self::new(r)).collect()
    }

    /// Bosonic factor with every √n frozen at √N.
    pub fn frozen_weight(&self, n: f64) -> f64 {
        match self.role {
            DecayRole::Alpha0 => 1.0,
            DecayRole::Alpha1 | DecayRole::Alpha2 => n.sqrt(),
            _ => n,
        }
    }

    /// Exact bosonic factor for the excited amplitude with Fock index `n`.
    pub fn exact_weight(&self, n: f64) -> f64 {
        match self.role {
            DecayRole::Alpha0 => 1.0,
            DecayRole::Alpha1 => (n + 1.0).sqrt(),
            DecayRole::Alpha2 => n.max(0.0).sqrt(),
            DecayRole::Beta1Conj => n + 1.0,
            DecayRole::Beta2Conj => n,
            DecayRole::Beta3Conj => (n * (n - 1.0)).max(0.0).sqrt(),
            DecayRole::Beta4Conj => ((n + 1.0) * (n + 2.0)).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pathway {
    pub emission: VertexFactor,
    pub absorption: VertexFactor,
    /// `δ`: the pathway feeds `Eₙ` from `E_{n+δ}`.
    pub total_offset: i32,
    /// Kernel pole `ω + κω̄`.
    pub pole_kappa: i32,
    /// Phase multiple at the absorption time.
    pub mu: i32,
    /// Phase multiple at the emission time.
    pub nu: i32,
}

/// Every ordered (emission, absorption) pair of `vertices`.
pub fn enumerate_pathways(vertices: &[VertexFactor]) -> Vec<Pathway> {
    let mut out = Vec::with_capacity(vertices.len() * vertices.len());
    for &absorption in vertices {
        for &emission in vertices {
            let total_offset = absorption.fock_offset - emission.fock_offset;
            let mu = absorption.phase_multiple;
            let nu = -emission.phase_multiple;
            assert_eq!(
                mu + nu,
                -total_offset,
                "pathway phase does not collapse onto its Fock offset"
            );
            out.push(Pathway {
                emission,
                absorption,
                total_offset,
                pole_kappa: -emission.fock_offset,
                mu,
                nu,
            });
        }
    }
    out
}

/// Position of `δ` in the `c₀..c₈` array.
pub fn c_index(delta: i32) -> usize {
    match delta {
        0 => 0,
        d if d < 0 => (2 * (-d) - 1) as usize,
        d => (2 * d) as usize,
    }
}

/// Inverse of [`c_index`].
pub fn c_offset(index: usize) -> i32 {
    match index {
        0 => 0,
        i if i % 2 == 1 => -(i.div_ceil(2) as i32),
        i => (i / 2) as i32,
    }
}

/// `Γ̂ᵢⱼ·(x/ωᵢⱼ)³`.
pub fn gamma_at(gamma_hat: f64, omega_ij: f64, x: f64) -> f64 {
    let r = x / omega_ij;
    gamma_hat * r * r * r
}

/// Decay rate of a listed transition at frequency `x`.
pub fn transition_gamma_at(scheme: &LevelScheme, t: &Transition, x: f64) -> f64 {
    gamma_at(t.gamma_hat, scheme.omega_ij(t.upper, t.lower), x)
}

/// Dipole overlap between two spontaneous transitions.
pub fn interference_prefactor(p: f64, a: (usize, usize), b: (usize, usize)) -> f64 {
    if a == b {
        1.0
    } else {
        p
    }
}

/// A spontaneous transition as seen by the reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    /// Level indices `(r, s)` with `r < s`.
    pub pair: (usize, usize),
    pub gamma_hat: f64,
    /// Bare transition frequency, rad/s.
    pub omega: f64,
}

pub fn channels(scheme: &LevelScheme) -> Vec<Channel> {
    scheme
        .transitions()
        .iter()
        .filter(|t| t.allowed && t.dipole > 0.0)
        .map(|t| {
            let a = scheme.index_of(t.upper).expect("validated");
            let b = scheme.index_of(t.lower).expect("validated");
            Channel {
                pair: (a.min(b), a.max(b)),
                gamma_hat: t.gamma_hat,
                omega: scheme.omega_ij(t.upper, t.lower),
            }
        })
        .collect()
}

/// Which parts of the effective Hamiltonian enter the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionOptions {
    pub stark_shift: bool,
    /// α₁, α₂ decay vertices.
    pub two_photon_decay: bool,
    /// β decay vertices.
    pub three_photon_decay: bool,
    /// d₃, d₄ driving.
    pub driving: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self {
            stark_shift: true,
            two_photon_decay: true,
            three_photon_decay: true,
            driving: true,
        }
    }
}

impl ReductionOptions {
    /// Direct one-photon decay only.
    pub fn one_photon() -> Self {
        Self {
            stark_shift: false,
            two_photon_decay: false,
            three_photon_decay: false,
            driving: false,
        }
    }

    pub fn vertices(&self) -> Vec<VertexFactor> {
        VertexFactor::full_set()
            .into_iter()
            .filter(|v| match v.role {
                DecayRole::Alpha0 => true,
                DecayRole::Alpha1 | DecayRole::Alpha2 => self.two_photon_decay,
                _ => self.three_photon_decay,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomCoefficients {
    /// c₀..c₈, s⁻¹.
    pub c: [Complex64; 9],
    /// Driving coefficients after ϱ scaling, s⁻¹.
    pub d3: Complex64,
    pub d4: Complex64,
    /// Stark-shifted transition frequency ω, rad/s.
    pub omega_eff: f64,
    pub omega_bar: f64,
    pub rho: f64,
}

impl EomCoefficients {
    /// Pure decay at rate `gamma` with no multiphoton terms.
    pub fn exponential(gamma: f64, omega_eff: f64, omega_bar: f64) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); 9];
        c[0] = Complex64::new(gamma / 2.0, 0.0);
        Self {
            c,
            d3: Complex64::new(0.0, 0.0),
            d4: Complex64::new(0.0, 0.0),
            omega_eff,
            omega_bar,
            rho: 1.0,
        }
    }

    /// Full band coefficient `C_δ`, driving included.
    pub fn band(&self, delta: i32) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let c = self.c[c_index(delta)];
        match delta {
            -2 => c + i * self.d3,
            2 => c + i * self.d4,
            _ => c,
        }
    }

    /// Nonzero bands as `(δ, C_δ)`, ascending in δ.
    pub fn bands(&self) -> Vec<(i32, Complex64)> {
        (-4..=4)
            .map(|d| (d, self.band(d)))
            .filter(|(_, c)| c.norm() != 0.0)
            .collect()
    }

    /// Driving coefficients before ϱ scaling.
    pub fn unscaled_driving(&self) -> (Complex64, Complex64) {
        (self.d3 / self.rho, self.d4 / self.rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathwayKernel {
    pub pathway: Pathway,
    /// Kernel value added to `c_δ`.
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub coefficients: EomCoefficients,
    pub kernels: Vec<PathwayKernel>,
    /// Couplings at each pole `ω + κω̄`, κ = −2..=2.
    pub poles: Vec<(i32, DetailedCouplings)>,
    /// α₁₂ used for the driving terms.
    pub alpha12: Complex64,
}

fn role_ratio(d: &DetailedCouplings, role: DecayRole) -> &crate::couplings::VacuumSplit {
    let i = DecayRole::ALL.iter().position(|&r| r == role).expect("known role");
    &d.split[i]
}

/// Kernel of one pathway with couplings evaluated at its pole `x`.
fn pathway_kernel(
    pathway: &Pathway,
    at_pole: &DetailedCouplings,
    x: f64,
    channels: &[Channel],
    p: f64,
    photon_number: f64,
) -> Complex64 {
    let ra = role_ratio(at_pole, pathway.absorption.role);
    let rb = role_ratio(at_pole, pathway.emission.role);
    let weight = pathway.absorption.frozen_weight(photon_number)
        * pathway.emission.frozen_weight(photon_number);
    let mut sum = Complex64::new(0.0, 0.0);
    for &(pa, a) in &ra.parts {
        let Some(ca) = channels.iter().find(|c| c.pair == pa) else {
            continue;
        };
        let ga = gamma_at(ca.gamma_hat, ca.omega, x);
        for &(pb, b) in &rb.parts {
            let Some(cb) = channels.iter().find(|c| c.pair == pb) else {
                continue;
            };
            let gb = gamma_at(cb.gamma_hat, cb.omega, x);
            sum += a * b.conj() * interference_prefactor(p, pa, pb) * 0.5 * (ga * gb).sqrt();
        }
    }
    sum * weight
}

/// Assembles the reduced equation of motion from engine inputs.
pub fn assemble(
    inputs: &CouplingInputs,
    channels: &[Channel],
    field: &FieldConfig,
    rho: f64,
    options: ReductionOptions,
) -> Result<Assembly> {
    field.validate()?;
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::InvalidInput(format!("rho must be non-negative, got {rho}")));
    }
    let w21 = inputs.omega_21();
    let omega_eff = if options.stark_shift {
        w21 + inputs.stark_shift(field.photon_number, w21)?
    } else {
        w21
    };

    let vertices = options.vertices();
    let pathways = enumerate_pathways(&vertices);

    let mut poles: Vec<(i32, DetailedCouplings)> = Vec::new();
    for kappa in -2..=2 {
        if !pathways.iter().any(|p| p.pole_kappa == kappa) {
            continue;
        }
        let x = omega_eff + f64::from(kappa) * field.omega_bar;
        if x < 0.0 {
            return Err(Error::NegativePole(x));
        }
        poles.push((kappa, inputs.detailed(x)?));
    }

    let mut c = [Complex64::new(0.0, 0.0); 9];
    let mut kernels = Vec::with_capacity(pathways.len());
    for pathway in pathways {
        let (_, at_pole) = poles
            .iter()
            .find(|(k, _)| *k == pathway.pole_kappa)
            .expect("pole evaluated");
        let x = omega_eff + f64::from(pathway.pole_kappa) * field.omega_bar;
        let value = pathway_kernel(
            &pathway,
            at_pole,
            x,
            channels,
            field.interference_p,
            field.photon_number,
        );
        c[c_index(pathway.total_offset)] += value;
        kernels.push(PathwayKernel { pathway, value });
    }

    let alpha12 = if options.driving {
        inputs.alpha(w21)?[12]
    } else {
        Complex64::new(0.0, 0.0)
    };
    let d3 = alpha12.conj() * field.photon_number * rho;
    let d4 = alpha12 * field.photon_number * rho;

    Ok(Assembly {
        coefficients: EomCoefficients {
            c,
            d3,
            d4,
            omega_eff,
            omega_bar: field.omega_bar,
            rho,
        },
        kernels,
        poles,
        alpha12,
    })
}

pub fn assemble_eom_coefficients(
    scheme: &LevelScheme,
    field: &FieldConfig,
    rho: f64,
) -> Result<EomCoefficients> {
    assemble_with_options(scheme, field, rho, ReductionOptions::default()).map(|a| a.coefficients)
}

pub fn assemble_with_options(
    scheme: &LevelScheme,
    field: &FieldConfig,
    rho: f64,
    options: ReductionOptions,
) -> Result<Assembly> {
    let inputs = CouplingInputs::from_scheme(scheme, field)?;
    assemble(&inputs, &channels(scheme), field, rho, options)
}

/// CSV audit table of every pathway kernel.
pub fn pathway_table_csv(assembly: &Assembly) -> String {
    let mut out = String::from("emission,absorption,delta,kappa,mu,nu,kernel_re,kernel_im\n");
    for k in &assembly.kernels {
        let p = &k.pathway;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.16e},{:.16e}",
            p.emission.role.name(),
            p.absorption.role.name(),
            p.total_offset,
            p.pole_kappa,
            p.mu,
            p.nu,
            k.value.re,
            k.value.im
        );
    }
    out
}
