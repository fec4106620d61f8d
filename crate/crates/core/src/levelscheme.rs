//! Atomic levels, dipole-allowed transitions and the builtin rubidium data.
//!
//! Scheme documents are line oriented:
//!
//! ```text
//! main_upper = 2
//! main_lower = 1
//!
//! [level]
//! id = 1
//! label = 5S_1/2
//! energy_eV = 0.0
//! orbital_l = 0
//!
//! [transition]
//! upper = 2
//! lower = 1
//! gamma_hat_per_s = 37.5e6
//! ```
//!
//! `#` starts a comment. Every listed transition gets a dipole moment from
//! its decay rate; transitions that break the parity rule are kept but
//! flagged as forbidden and carry a zero dipole.

use std::collections::{HashMap, HashSet};

use crate::constants::{ev_to_rad_per_s, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

const RUBIDIUM: &str = include_str!("../data/rubidium.scheme");

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub id: u32,
    pub label: String,
    /// Energy above the reference level in eV.
    pub energy_ev: f64,
    pub orbital_l: u32,
}

impl Level {
    /// Angular frequency `E/ħ` in rad/s.
    pub fn omega(&self) -> f64 {
        ev_to_rad_per_s(self.energy_ev)
    }

    /// `+1` for even orbital quantum number, `-1` for odd.
    pub fn parity(&self) -> i8 {
        if self.orbital_l.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub upper: u32,
    pub lower: u32,
    /// Natural decay rate at the bare transition frequency, s⁻¹.
    pub gamma_hat: f64,
    /// Dipole magnitude in C·m; zero when `allowed` is false.
    pub dipole: f64,
    pub allowed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionReason {
    /// Listed and |Δl| = 1.
    DipoleAllowed,
    /// |Δl| ≠ 1.
    Parity,
    /// Parity allows the pair but the scheme lists no rate for it.
    NotListed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionVerdict {
    pub upper: u32,
    pub lower: u32,
    pub allowed: bool,
    pub reason: SelectionReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelScheme {
    levels: Vec<Level>,
    transitions: Vec<Transition>,
    main_upper: u32,
    main_lower: u32,
    index: HashMap<u32, usize>,
    /// Dense symmetric dipole table over level indices.
    dipoles: Vec<f64>,
}

/// Returns the dipole magnitude `d` with `Γ̂ = d²ω³/(3πε₀ħc³)`.
pub fn dipole_from_decay_rate(gamma_hat: f64, omega_ij: f64) -> Result<f64> {
    if !(omega_ij > 0.0) {
        return Err(Error::InvalidInput(format!(
            "transition frequency must be positive, got {omega_ij:e} rad/s"
        )));
    }
    if gamma_hat < 0.0 {
        return Err(Error::InvalidInput(format!(
            "decay rate must be non-negative, got {gamma_hat:e} s^-1"
        )));
    }
    let c3 = SPEED_OF_LIGHT.powi(3);
    Ok((3.0 * std::f64::consts::PI * EPSILON_0 * HBAR * c3 * gamma_hat / omega_ij.powi(3)).sqrt())
}

/// Inverse of [`dipole_from_decay_rate`].
pub fn decay_rate_from_dipole(dipole: f64, omega_ij: f64) -> f64 {
    let c3 = SPEED_OF_LIGHT.powi(3);
    dipole * dipole * omega_ij.powi(3) / (3.0 * std::f64::consts::PI * EPSILON_0 * HBAR * c3)
}

fn parity_allowed(a: &Level, b: &Level) -> bool {
    a.orbital_l.abs_diff(b.orbital_l) == 1
}

/// Classifies every unordered level pair of the scheme.
pub fn validate_selection_rules(scheme: &LevelScheme) -> Vec<SelectionVerdict> {
    let mut out = Vec::new();
    let levels = scheme.levels();
    for (a, la) in levels.iter().enumerate() {
        for lb in &levels[a + 1..] {
            let (upper, lower) = if la.energy_ev >= lb.energy_ev {
                (la, lb)
            } else {
                (lb, la)
            };
            let (allowed, reason) = if !parity_allowed(upper, lower) {
                (false, SelectionReason::Parity)
            } else if scheme.transition(upper.id, lower.id).is_some() {
                (true, SelectionReason::DipoleAllowed)
            } else {
                (true, SelectionReason::NotListed)
            };
            out.push(SelectionVerdict {
                upper: upper.id,
                lower: lower.id,
                allowed,
                reason,
            });
        }
    }
    out
}

/// Loads the builtin dataset `"rubidium"` or parses `source` as a scheme document.
pub fn load_level_scheme(source: &str) -> Result<LevelScheme> {
    if source.trim() == "rubidium" {
        return LevelScheme::rubidium();
    }
    LevelScheme::parse(source)
}

impl LevelScheme {
    pub fn rubidium() -> Result<Self> {
        Self::parse(RUBIDIUM)
    }

    /// Builds a scheme from raw `(upper, lower, gamma_hat)` triples.
    pub fn new(
        levels: Vec<Level>,
        raw_transitions: &[(u32, u32, f64)],
        main_upper: u32,
        main_lower: u32,
    ) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidInput(
                "a level scheme needs at least two levels".into(),
            ));
        }
        let mut index = HashMap::new();
        for (i, level) in levels.iter().enumerate() {
            if !(level.energy_ev >= 0.0) || !level.energy_ev.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "level {} has invalid energy {}",
                    level.id, level.energy_ev
                )));
            }
            if index.insert(level.id, i).is_some() {
                return Err(Error::DuplicateLevel(level.id));
            }
        }

        let mut seen = HashSet::new();
        let mut transitions = Vec::with_capacity(raw_transitions.len());
        for &(upper, lower, gamma_hat) in raw_transitions {
            let lu = index.get(&upper).map(|&i| &levels[i]);
            let ll = index.get(&lower).map(|&i| &levels[i]);
            let (lu, ll) = match (lu, ll) {
                (Some(u), Some(l)) => (u, l),
                (None, _) => return Err(Error::UnknownLevel(upper)),
                (_, None) => return Err(Error::UnknownLevel(lower)),
            };
            if gamma_hat < 0.0 || gamma_hat.is_nan() {
                return Err(Error::NegativeRate {
                    upper,
                    lower,
                    rate: gamma_hat,
                });
            }
            if lu.energy_ev <= ll.energy_ev {
                return Err(Error::InvalidInput(format!(
                    "transition {upper}->{lower}: upper level must lie above lower level"
                )));
            }
            if !seen.insert((upper.min(lower), upper.max(lower))) {
                return Err(Error::InvalidInput(format!(
                    "transition {upper}->{lower} listed twice"
                )));
            }
            let allowed = parity_allowed(lu, ll);
            let dipole = if allowed {
                dipole_from_decay_rate(gamma_hat, lu.omega() - ll.omega())?
            } else {
                0.0
            };
            transitions.push(Transition {
                upper,
                lower,
                gamma_hat,
                dipole,
                allowed,
            });
        }

        let main = transitions
            .iter()
            .find(|t| t.upper == main_upper && t.lower == main_lower)
            .ok_or(Error::MissingMainTransition)?;
        if !main.allowed {
            return Err(Error::InvalidInput(
                "main transition is dipole-forbidden".into(),
            ));
        }
        if main.dipole == 0.0 {
            return Err(Error::InvalidInput(
                "main transition has zero decay rate".into(),
            ));
        }

        let n = levels.len();
        let mut dipoles = vec![0.0; n * n];
        for t in &transitions {
            let (a, b) = (index[&t.upper], index[&t.lower]);
            dipoles[a * n + b] = t.dipole;
            dipoles[b * n + a] = t.dipole;
        }

        Ok(Self {
            levels,
            transitions,
            main_upper,
            main_lower,
            index,
            dipoles,
        })
    }

    pub fn parse(source: &str) -> Result<Self> {
        #[derive(Clone, Copy, PartialEq)]
        enum Section {
            Top,
            Level,
            Transition,
        }

        struct Block {
            kind: Section,
            line: usize,
            fields: HashMap<String, (usize, String)>,
        }

        let mut blocks: Vec<Block> = Vec::new();
        let mut main_upper = None;
        let mut main_lower = None;
        let mut section = Section::Top;

        for (no, raw) in source.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                section = match line {
                    "[level]" => Section::Level,
                    "[transition]" => Section::Transition,
                    _ => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("unknown section {line}"),
                        })
                    }
                };
                blocks.push(Block {
                    kind: section,
                    line: line_no,
                    fields: HashMap::new(),
                });
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "main_upper" => main_upper = Some(parse_num::<u32>(value, line_no, key)?),
                "main_lower" => main_lower = Some(parse_num::<u32>(value, line_no, key)?),
                _ => {
                    let expected: &[&str] = match section {
                        Section::Top => &[],
                        Section::Level => &["id", "label", "energy_eV", "orbital_l"],
                        Section::Transition => &["upper", "lower", "gamma_hat_per_s"],
                    };
                    if !expected.contains(&key) {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("unexpected key `{key}`"),
                        });
                    }
                    let block = blocks.last_mut().expect("section open");
                    if block
                        .fields
                        .insert(key.to_string(), (line_no, value.to_string()))
                        .is_some()
                    {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("key `{key}` repeated in section"),
                        });
                    }
                }
            }
        }

        let mut levels = Vec::new();
        let mut transitions = Vec::new();
        for block in &blocks {
            let get = |k: &str| -> Result<(usize, &str)> {
                block
                    .fields
                    .get(k)
                    .map(|(l, v)| (*l, v.as_str()))
                    .ok_or_else(|| Error::Parse {
                        line: block.line,
                        msg: format!("section is missing `{k}`"),
                    })
            };
            match block.kind {
                Section::Level => {
                    let (l, id) = get("id")?;
                    let id = parse_num::<u32>(id, l, "id")?;
                    let label = block
                        .fields
                        .get("label")
                        .map(|(_, v)| v.clone())
                        .unwrap_or_else(|| id.to_string());
                    let (l, e) = get("energy_eV")?;
                    let energy_ev = parse_num::<f64>(e, l, "energy_eV")?;
                    let (l, ol) = get("orbital_l")?;
                    let orbital_l = parse_num::<u32>(ol, l, "orbital_l")?;
                    levels.push(Level {
                        id,
                        label,
                        energy_ev,
                        orbital_l,
                    });
                }
                Section::Transition => {
                    let (l, u) = get("upper")?;
                    let upper = parse_num::<u32>(u, l, "upper")?;
                    let (l, lo) = get("lower")?;
                    let lower = parse_num::<u32>(lo, l, "lower")?;
                    let (l, g) = get("gamma_hat_per_s")?;
                    let gamma = parse_num::<f64>(g, l, "gamma_hat_per_s")?;
                    transitions.push((upper, lower, gamma));
                }
                Section::Top => unreachable!(),
            }
        }

        let (main_upper, main_lower) = match (main_upper, main_lower) {
            (Some(u), Some(l)) => (u, l),
            _ => return Err(Error::MissingMainTransition),
        };
        Self::new(levels, &transitions, main_upper, main_lower)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn main_upper(&self) -> u32 {
        self.main_upper
    }

    pub fn main_lower(&self) -> u32 {
        self.main_lower
    }

    pub fn level(&self, id: u32) -> Option<&Level> {
        self.index.get(&id).map(|&i| &self.levels[i])
    }

    /// Position of level `id` in [`levels`](Self::levels).
    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Levels other than the main pair, in declaration order.
    pub fn auxiliary(&self) -> impl Iterator<Item = &Level> + '_ {
        self.levels
            .iter()
            .filter(move |l| l.id != self.main_upper && l.id != self.main_lower)
    }

    /// Listed transition between `a` and `b` in either order.
    pub fn transition(&self, a: u32, b: u32) -> Option<&Transition> {
        self.transitions
            .iter()
            .find(|t| (t.upper == a && t.lower == b) || (t.upper == b && t.lower == a))
    }

    /// Dipole magnitude between two levels by index; zero if absent or forbidden.
    pub fn dipole_by_index(&self, a: usize, b: usize) -> f64 {
        self.dipoles[a * self.levels.len() + b]
    }

    pub fn dipole(&self, a: u32, b: u32) -> f64 {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.dipole_by_index(i, j),
            _ => 0.0,
        }
    }

    /// `ω_i − ω_j` in rad/s.
    pub fn omega_ij(&self, i: u32, j: u32) -> f64 {
        let wi = self.level(i).map_or(0.0, Level::omega);
        let wj = self.level(j).map_or(0.0, Level::omega);
        wi - wj
    }

    /// Bare main transition frequency ω₂₁ in rad/s.
    pub fn omega_21(&self) -> f64 {
        self.omega_ij(self.main_upper, self.main_lower)
    }

    pub fn main_transition(&self) -> &Transition {
        self.transition(self.main_upper, self.main_lower)
            .expect("validated on construction")
    }

    pub fn gamma_hat_21(&self) -> f64 {
        self.main_transition().gamma_hat
    }

    pub fn dipole_21(&self) -> f64 {
        self.main_transition().dipole
    }
}

fn parse_num<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse `{value}` as a number for `{key}`"),
    })
}
