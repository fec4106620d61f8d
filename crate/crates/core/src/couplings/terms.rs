//! Addend tables for the effective coefficients.
//!
//! Each addend is a product of coupling constants over a product of linear
//! detuning combinations. Indices `O` and `T` are the lower and upper main
//! levels; `J` and `N` run over the auxiliary levels. An addend is summed
//! only over the auxiliary indices it mentions.
//!
//! The α₁/α₂ entries follow the printed coefficient list verbatim. One
//! intermediate expression in the adiabatic elimination carries a stray
//! factor `i` in a denominator; the printed coefficients do not, and
//! neither do these tables.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Idx {
    O,
    T,
    J,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Field {
    /// Low-frequency field coupling λᵢⱼ.
    Lf,
    /// Vacuum coupling λᵢⱼₖ.
    Vac,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Factor {
    pub field: Field,
    pub a: Idx,
    pub b: Idx,
    pub conj: bool,
}

/// `d·Δ + dj·Δⱼ + dn·Δₙ + wk·ω_k + wb·ω̄`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Lin {
    pub d: i8,
    pub dj: i8,
    pub dn: i8,
    pub wk: i8,
    pub wb: i8,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Addend {
    pub pre: f64,
    pub factors: &'static [Factor],
    pub dens: &'static [Lin],
}

use Field::{Lf, Vac};
use Idx::{J, N, O, T};

const fn lf(a: Idx, b: Idx) -> Factor {
    Factor { field: Lf, a, b, conj: false }
}
const fn lfc(a: Idx, b: Idx) -> Factor {
    Factor { field: Lf, a, b, conj: true }
}
const fn vac(a: Idx, b: Idx) -> Factor {
    Factor { field: Vac, a, b, conj: false }
}
const fn vacc(a: Idx, b: Idx) -> Factor {
    Factor { field: Vac, a, b, conj: true }
}
const fn lin(d: i8, dj: i8, dn: i8, wk: i8, wb: i8) -> Lin {
    Lin { d, dj, dn, wk, wb }
}
const fn add(pre: f64, factors: &'static [Factor], dens: &'static [Lin]) -> Addend {
    Addend { pre, factors, dens }
}

// Frequently used denominators.
const DJ: Lin = lin(0, 1, 0, 0, 0);
const DN: Lin = lin(0, 0, 1, 0, 0);
const D_DJ: Lin = lin(1, -1, 0, 0, 0);
const D_DN: Lin = lin(1, 0, -1, 0, 0);

pub(crate) const ALPHA0: &[Addend] = &[add(1.0, &[vac(O, T)], &[])];

pub(crate) const ALPHA1: &[Addend] = &[
    add(1.0, &[lf(T, J), vac(J, O)], &[D_DJ]),
    add(-1.0, &[lf(T, J), vac(J, O)], &[DJ]),
    add(-1.0, &[vac(T, J), lf(J, O)], &[lin(0, 1, 0, 1, -1)]),
    add(1.0, &[vac(T, J), lf(J, O)], &[lin(1, -1, 0, -1, 1)]),
];

pub(crate) const ALPHA2: &[Addend] = &[
    add(1.0, &[vac(J, O), lfc(T, J)], &[D_DJ]),
    add(-1.0, &[vac(J, O), lfc(T, J)], &[lin(0, 1, 0, 0, -2)]),
    add(1.0, &[vac(T, J), lfc(J, O)], &[lin(1, -1, 0, -1, -1)]),
    add(-1.0, &[vac(T, J), lfc(J, O)], &[lin(0, 1, 0, 1, -1)]),
];

pub(crate) const ALPHA3: &[Addend] = &[add(-2.0, &[vac(J, O), vacc(O, J)], &[DJ])];
pub(crate) const ALPHA4: &[Addend] = &[add(-2.0, &[vac(O, J), vacc(J, O)], &[lin(0, 1, 0, 2, 0)])];
pub(crate) const ALPHA5: &[Addend] = &[add(-2.0, &[lf(J, O), lfc(O, J)], &[lin(0, 1, 0, 1, -1)])];
pub(crate) const ALPHA6: &[Addend] = &[add(-2.0, &[lf(O, J), lfc(J, O)], &[lin(0, 1, 0, 1, 1)])];
pub(crate) const ALPHA7: &[Addend] = &[add(2.0, &[vac(J, T), vacc(T, J)], &[lin(1, -1, 0, 1, 1)])];
pub(crate) const ALPHA8: &[Addend] = &[add(2.0, &[vac(T, J), vacc(J, T)], &[lin(1, -1, 0, -1, 1)])];
pub(crate) const ALPHA9: &[Addend] = &[add(2.0, &[lf(J, T), lfc(T, J)], &[lin(1, -1, 0, 0, 2)])];
pub(crate) const ALPHA10: &[Addend] = &[add(2.0, &[lf(T, J), lfc(J, T)], &[D_DJ])];

pub(crate) const ALPHA11: &[Addend] = &[
    add(-1.0, &[lf(O, J), lf(J, O)], &[lin(0, 1, 0, 1, -1)]),
    add(-1.0, &[lf(O, J), lf(J, O)], &[lin(0, 1, 0, 1, 1)]),
];

pub(crate) const ALPHA12: &[Addend] = &[
    add(1.0, &[lf(T, J), lf(J, T)], &[D_DJ]),
    add(1.0, &[lf(T, J), lf(J, T)], &[lin(1, -1, 0, 0, 2)]),
];

pub(crate) const BETA1: &[Addend] = &[
    add(1.0, &[lf(T, J), vacc(O, T), lfc(J, T)], &[DJ, lin(1, -1, 0, 0, 1)]),
    add(1.0, &[lf(O, T), vacc(T, J), lfc(J, T)], &[DJ, lin(1, -1, 0, 1, 2)]),
    add(1.0, &[lf(O, J), vacc(J, N), lfc(N, T)], &[DN, lin(0, 1, 0, 1, 0)]),
    add(1.0, &[lf(T, J), lfc(O, T), vacc(J, T)], &[lin(0, 1, 0, 1, -1), lin(1, -1, 0, 0, 1)]),
    add(1.0, &[lf(J, N), lfc(J, T), vacc(N, O)], &[D_DN, lin(1, -1, 0, 0, -1)]),
    add(1.0, &[lf(N, T), vacc(O, J), lfc(J, N)], &[lin(0, 0, 1, 0, -2), lin(0, 1, 0, 0, -1)]),
    add(1.0, &[lf(T, O), vacc(J, O), lfc(J, O)], &[D_DJ, lin(0, 1, 0, 1, 2)]),
    add(1.0, &[lf(O, J), lfc(J, N), vacc(N, T)], &[lin(0, 1, 0, 1, 0), lin(0, 0, 1, 1, -1)]),
    add(1.0, &[lf(J, O), lfc(T, O), vacc(J, O)], &[lin(1, -1, 0, -1, -1), lin(0, 1, 0, 2, 1)]),
    add(1.0, &[lf(J, O), vacc(T, O), lfc(J, O)], &[lin(1, -1, 0, -1, -1), lin(0, 1, 0, 1, 2)]),
    add(1.0, &[lf(N, O), lfc(J, T), vacc(J, N)], &[lin(1, -1, 0, 0, -1), lin(1, 0, -1, -1, -1)]),
    add(1.0, &[lf(J, N), vacc(J, T), lfc(N, O)], &[lin(1, -1, 0, -1, 0), lin(1, 0, -1, -1, 1)]),
];

pub(crate) const BETA2: &[Addend] = &[
    add(1.0, &[lf(J, O), lfc(T, O), vacc(J, O)], &[D_DJ, lin(0, 1, 0, 1, 0)]),
    add(1.0, &[lf(N, T), lfc(O, J), vacc(J, N)], &[lin(0, 0, 1, 0, -2), lin(0, 1, 0, 1, -2)]),
    add(1.0, &[lf(J, N), vacc(O, J), lfc(N, T)], &[DN, lin(0, 1, 0, 0, -1)]),
    add(1.0, &[lf(N, O), vacc(J, T), lfc(J, N)], &[lin(1, -1, 0, -1, 0), lin(1, 0, -1, -1, -1)]),
    add(1.0, &[lf(J, T), vacc(O, T), lfc(T, J)], &[lin(0, 1, 0, 0, -2), lin(1, -1, 0, 0, 3)]),
    add(1.0, &[lf(J, T), lfc(J, N), vacc(N, O)], &[D_DN, lin(1, -1, 0, 0, 1)]),
    add(1.0, &[lf(J, N), lfc(O, J), vacc(N, T)], &[lin(0, 1, 0, 1, -2), lin(0, 0, 1, 1, -1)]),
    add(1.0, &[lf(J, O), vacc(T, O), lfc(J, O)], &[lin(0, 1, 0, 1, 0), lin(1, -1, 0, -1, 1)]),
    add(1.0, &[lf(J, T), vacc(J, N), lfc(N, O)], &[lin(1, -1, 0, 0, 1), lin(1, 0, -1, -1, 1)]),
    add(1.0, &[lf(T, O), vacc(J, O), lfc(J, O)], &[lin(1, -1, 0, -1, 1), lin(0, 1, 0, 2, 1)]),
    add(1.0, &[lf(J, T), lfc(O, T), vacc(T, J)], &[lin(0, 1, 0, 0, -2), lin(1, -1, 0, 1, 2)]),
    add(1.0, &[lf(O, T), lfc(T, J), vacc(J, T)], &[lin(0, 1, 0, 1, -1), lin(1, -1, 0, 0, 3)]),
];

pub(crate) const BETA3: &[Addend] = &[
    add(1.0, &[lf(J, N), lf(N, T), vacc(O, J)], &[lin(0, 1, 0, 0, -3), lin(0, 0, 1, 0, -2)]),
    add(1.0, &[lf(O, J), lf(N, T), vacc(J, N)], &[lin(0, 0, 1, 0, -2), lin(0, 1, 0, 1, -2)]),
    add(1.0, &[lf(J, T), lf(J, N), vacc(N, O)], &[D_DN, lin(1, -1, 0, 0, -1)]),
    add(1.0, &[lf(T, O), lf(J, O), vacc(J, O)], &[D_DJ, lin(0, 1, 0, 1, 2)]),
    add(1.0, &[lf(T, J), lf(J, T), vacc(O, T)], &[lin(0, 1, 0, 0, -2), lin(1, -1, 0, 0, 3)]),
    add(1.0, &[lf(O, T), lf(T, J), vacc(J, T)], &[lin(0, 1, 0, 1, -1), lin(1, -1, 0, 0, 3)]),
    add(1.0, &[lf(J, N), lf(N, O), vacc(J, T)], &[lin(1, -1, 0, -1, -2), lin(1, 0, -1, -1, -1)]),
    add(1.0, &[lf(J, T), lf(N, O), vacc(J, N)], &[lin(1, -1, 0, 0, -1), lin(1, 0, -1, -1, -1)]),
    add(1.0, &[lf(O, J), lf(J, N), vacc(N, T)], &[lin(0, 1, 0, 1, -2), lin(0, 0, 1, 1, -1)]),
    add(1.0, &[vacc(T, O), lf(J, O), lf(J, O)], &[lin(1, -1, 0, -1, -1), lin(0, 1, 0, 1, 2)]),
    add(1.0, &[lf(T, O), lf(J, O), vacc(J, O)], &[lin(1, -1, 0, -1, -1), lin(0, 1, 0, 2, 3)]),
    add(1.0, &[lf(O, T), lf(J, T), vacc(T, J)], &[lin(0, 1, 0, 0, -2), lin(1, -1, 0, 1, 4)]),
];

pub(crate) const BETA4: &[Addend] = &[
    add(1.0, &[lfc(O, T), vacc(T, J), lfc(J, T)], &[DJ, lin(1, -1, 0, 1, 0)]),
    add(1.0, &[lfc(O, T), lfc(T, J), vacc(J, T)], &[lin(0, 1, 0, 1, -1), lin(1, -1, 0, 0, 1)]),
    add(1.0, &[lfc(T, O), vacc(J, O), lfc(J, O)], &[D_DJ, lin(0, 1, 0, 1, 0)]),
    add(1.0, &[lfc(O, J), lfc(J, N), vacc(N, T)], &[lin(0, 1, 0, 1, 0), lin(0, 0, 1, 1, -1)]),
    add(1.0, &[vacc(O, T), lfc(T, J), lfc(J, T)], &[DJ, lin(1, -1, 0, 0, 1)]),
    add(1.0, &[lfc(J, T), lfc(J, N), vacc(N, O)], &[D_DN, lin(1, -1, 0, 0, 1)]),
    add(1.0, &[vacc(O, J), lfc(J, N), lfc(N, T)], &[DN, lin(0, 1, 0, 0, 1)]),
    add(1.0, &[vacc(T, O), lfc(J, O), lfc(J, O)], &[lin(0, 1, 0, 1, 0), lin(1, -1, 0, -1, 1)]),
    add(1.0, &[lfc(O, J), vacc(J, N), lfc(N, T)], &[DN, lin(0, 1, 0, 1, 0)]),
    add(1.0, &[lfc(T, O), vacc(J, O), lfc(J, O)], &[lin(0, 1, 0, 2, -1), lin(1, -1, 0, -1, 1)]),
    add(1.0, &[lfc(J, T), vacc(J, N), lfc(N, O)], &[lin(1, -1, 0, 0, 1), lin(1, 0, -1, -1, 1)]),
    add(1.0, &[vacc(J, T), lfc(J, N), lfc(N, O)], &[lin(1, 0, -1, -1, 1), lin(1, -1, 0, -1, 2)]),
];

pub(crate) const ALPHA: [&[Addend]; 13] = [
    ALPHA0, ALPHA1, ALPHA2, ALPHA3, ALPHA4, ALPHA5, ALPHA6, ALPHA7, ALPHA8, ALPHA9, ALPHA10,
    ALPHA11, ALPHA12,
];

pub(crate) const BETA: [&[Addend]; 4] = [BETA1, BETA2, BETA3, BETA4];

pub(crate) const ALPHA_NAMES: [&str; 13] = [
    "alpha0", "alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha6", "alpha7", "alpha8",
    "alpha9", "alpha10", "alpha11", "alpha12",
];

pub(crate) const BETA_NAMES: [&str; 4] = ["beta1", "beta2", "beta3", "beta4"];
