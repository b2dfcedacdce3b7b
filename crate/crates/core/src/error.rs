use thiserror::Error;

/// Errors produced by the modelling and command layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("wavelength {wavelength_nm} nm lies within the guard band of capillary resonance m = {order} ({resonance_nm:.3} nm)")]
    ResonanceProximity {
        wavelength_nm: f64,
        order: u32,
        resonance_nm: f64,
    },

    #[error("no phase-matching pressure in [{p_min}, {p_max}] bar: delta beta = {db_min:.6} rad/m at p_min, {db_max:.6} rad/m at p_max")]
    NoPhaseMatch {
        p_min: f64,
        p_max: f64,
        db_min: f64,
        db_max: f64,
    },

    #[error(
        "phase mismatch changes sign {count} times in [{p_min}, {p_max}] bar; optimum is ambiguous"
    )]
    AmbiguousPhaseMatch {
        count: usize,
        p_min: f64,
        p_max: f64,
    },

    #[error("{0} did not converge")]
    NonConvergence(&'static str),

    #[error("calibration target {target} not bracketed: {detail}")]
    CalibrationRange { target: f64, detail: String },

    #[error(
        "phase-matching factor at the reference point is zero; efficiency calibration is singular"
    )]
    CalibrationSingular,

    #[error("least-squares design is rank deficient: {0}")]
    FitDegenerate(String),

    #[error("signal-to-noise ratio undefined: zero signal over zero background")]
    UndefinedSnr,

    #[error("config error at {location}: key `{key}`: {message}")]
    Config {
        key: String,
        location: String,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code for this error: 2 config, 3 numeric, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
