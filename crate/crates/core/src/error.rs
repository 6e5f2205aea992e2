use core::fmt;

/// Errors surfaced by the exact local/global computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// A valuation or residue query needed more p-adic digits than the value
    /// carries. Callers may retry at a higher precision.
    InsufficientPrecision { p: u64, available: u32, needed: u32 },
    /// The requested precision does not fit in the fixed-width residue
    /// representation (p^N must fit in 64 bits).
    PrecisionCapExceeded { p: u64, requested: u32, cap: u32 },
    /// The hypotheses of the relevant closed-form theorem do not hold; the
    /// caller must fall back to the brute-force oracle.
    HypothesisNotMet,
    /// The empirical group counts failed the factor-p growth check even after
    /// raising the level. Signals a bug or a precision fault, never a
    /// legitimate mathematical outcome.
    NotStabilized { p: u64, t_last: u32 },
    /// The bilinear form is not positive definite.
    NotPositiveDefinite,
    /// Not a valid negative discriminant (must be ≡ 0 or 1 mod 4).
    BadDiscriminant { disc: i128 },
    /// The Gram matrix is degenerate (zero determinant).
    DegenerateForm,
    /// Inversion of a non-unit p-adic value was requested.
    NotUnit,
    /// η is defined at odd places only; calling it at p = 2 is a contract
    /// violation, not a silent extension.
    EtaAtEvenPrime,
    /// A group index that must be a positive integer failed integrality.
    /// Internal invariant breach.
    NonIntegralIndex { p: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InsufficientPrecision {
                p,
                available,
                needed,
            } => write!(
                f,
                "insufficient {p}-adic precision: have {available} digits, need {needed}"
            ),
            Error::PrecisionCapExceeded { p, requested, cap } => write!(
                f,
                "requested {requested} {p}-adic digits exceeds the cap of {cap}"
            ),
            Error::HypothesisNotMet => {
                write!(f, "closed-form hypotheses not met; use the oracle")
            }
            Error::NotStabilized { p, t_last } => write!(
                f,
                "orthogonal group counts at p = {p} did not stabilize by t = {t_last}"
            ),
            Error::NotPositiveDefinite => write!(f, "form is not positive definite"),
            Error::BadDiscriminant { disc } => write!(f, "invalid discriminant {disc}"),
            Error::DegenerateForm => write!(f, "degenerate bilinear form"),
            Error::NotUnit => write!(f, "p-adic inversion of a non-unit"),
            Error::EtaAtEvenPrime => write!(f, "eta is only defined at odd primes"),
            Error::NonIntegralIndex { p } => {
                write!(f, "local index at p = {p} is not a positive integer")
            }
        }
    }
}

impl core::error::Error for Error {}
