use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid atom: Z = {z}, n = {n} (both must be >= 1)")]
    InvalidAtom { z: u32, n: u32 },

    #[error("velocity must be nonzero")]
    ZeroVelocity,

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("time offset C must be nonzero")]
    ZeroTimeOffset,

    #[error("invalid energy range ({lo}, {hi}): need lo < hi < 0")]
    InvalidEnergyRange { lo: f64, hi: f64 },

    #[error("r = {r} is a singular point of the wave; nearest admissible radius is {nearest}")]
    SingularPoint { r: f64, nearest: f64 },

    #[error("r = {r} lies inside the exclusion zone around {center}; nearest admissible radius is {nearest}")]
    InExclusionZone { r: f64, center: f64, nearest: f64 },

    #[error("r = {r} is outside the sampled domain [{lo}, {hi}]")]
    OutsideDomain { r: f64, lo: f64, hi: f64 },

    #[error("invalid radial grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: segment [{start}, {end}] has {points} points (need >= {required})")]
    GridTooCoarse {
        start: f64,
        end: f64,
        points: usize,
        required: usize,
    },

    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { got: usize, required: usize },

    #[error("mismatched inputs: {0}")]
    Mismatched(String),

    #[error("superposed states must share Z (found {0} and {1})")]
    MixedCharge(u32, u32),

    #[error("integration must stay right of the pole at r_o = {r_o}; r_stop = {r_stop}")]
    CrossesPole { r_o: f64, r_stop: f64 },

    #[error("step size collapsed near r = {last_safe_r}")]
    StepFailure { last_safe_r: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
