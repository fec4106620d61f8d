use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate level id {0}")]
    DuplicateLevel(u32),

    #[error("unknown level reference {0}")]
    UnknownLevel(u32),

    #[error("missing main transition")]
    MissingMainTransition,

    #[error("negative rate {rate} on transition {upper}->{lower}")]
    NegativeRate { upper: u32, lower: u32, rate: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("small denominator {value:e} rad/s in {coefficient} (auxiliary level {level}); adiabatic elimination breaks down")]
    SmallDenominator {
        coefficient: &'static str,
        level: u32,
        value: f64,
    },

    #[error("decay rate requested at negative frequency {0:e} rad/s")]
    NegativePole(f64),

    #[error("Stark shift has imaginary part {imag:e} against real part {real:e}")]
    StarkShiftNotReal { real: f64, imag: f64 },

    #[error("step size underflow at t = {t:e} s")]
    StepSizeUnderflow { t: f64 },

    #[error("instance too large: {amplitudes} amplitudes exceed the limit of {limit}")]
    InstanceTooLarge { amplitudes: usize, limit: usize },

    #[error("traces cover disjoint time ranges")]
    DisjointTraces,

    #[error("malformed trace: {0}")]
    MalformedTrace(String),
}
