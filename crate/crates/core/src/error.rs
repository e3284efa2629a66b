use num_complex::Complex64;

/// Errors raised by the symbol calculus and the verification engine.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension must be even and within 2..=12, got {0}")]
    InvalidDimension(usize),

    #[error("expected {expected} entries along {what}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix side {got} does not match spinor rank {expected}")]
    SideMismatch { expected: usize, got: usize },

    #[error("x-jet depth {have} is insufficient; {what} needs depth {need}")]
    JetDepth {
        what: &'static str,
        need: u32,
        have: u32,
    },

    #[error("leading symbol is not a scalar multiple of |xi|^2 times the identity")]
    NonScalarLeading,

    #[error("integrand does not decay like |xi_n|^-2 at infinity; full-line integral diverges")]
    NonDecayingIntegrand,

    #[error("interior density routes disagree beyond tolerance: generic={generic}, assembly={assembly}")]
    RouteDisagreement {
        generic: Complex64,
        assembly: Complex64,
    },

    #[error("{what} requires m >= 2 (dimension n = 2m >= 4), got n = {n}")]
    RequiresHigherDimension { what: &'static str, n: usize },

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("theorem {theorem} is not defined for dimension n = {n}")]
    TheoremDimension { theorem: &'static str, n: usize },
}
