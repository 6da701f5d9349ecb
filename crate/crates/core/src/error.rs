use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while building, checking or operating a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A modulus that was required to be prime is not.
    NotPrime(u64),
    /// `g` does not generate `Z_p^*`.
    NotGenerator { g: u64, p: u64 },
    /// A prime below the smallest one a construction supports.
    PrimeTooSmall { p: u64, min: u64 },
    /// An element outside the range of the group it was looked up in.
    OutOfRange { value: usize, modulus: usize },
    /// A starter modulus that is odd or below 4.
    BadModulus(usize),
    /// `kappa` is zero or does not divide the modulus.
    BadKappa { kappa: usize, modulus: usize },
    /// Pairs that do not form a (multi-)starter of the requested kind.
    InvalidStarter(&'static str),
    /// A one-factorization that violates a structural invariant.
    MalformedFactorization(&'static str),
    /// The factorization is not perfect, so no code can be built from it.
    NotPerfect,
    /// Extraction was asked of a factorization that is not bipyramidal.
    NotBipyramidal,
    /// Columns that cannot be completed to a one-factorization.
    NotACode(&'static str),
    /// A structurally invalid array code.
    InvalidCode(&'static str),
    /// B-Code columns that do not follow the cyclic-group relabeling.
    NotCyclicGroup,
    /// A matrix size or shape that the operation cannot handle.
    BadShape(&'static str),
    /// Nonsingularity asked of a non-square matrix.
    NotSquare { rows: usize, cols: usize },
    /// Stripe or data dimensions that do not match the code.
    ShapeMismatch(&'static str),
    /// More than two erased columns.
    TooManyErasures(usize),
    /// Peeling ran out of solvable equations with unknowns left over.
    Stuck { unresolved: usize },
    /// A search length outside the supported range.
    BadLength(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::NotGenerator { g, p } => write!(f, "{g} does not generate Z_{p}^*"),
            Error::PrimeTooSmall { p, min } => write!(f, "prime {p} is below the minimum {min}"),
            Error::OutOfRange { value, modulus } => {
                write!(f, "element {value} out of range for modulus {modulus}")
            }
            Error::BadModulus(m) => write!(f, "modulus {m} must be even and at least 4"),
            Error::BadKappa { kappa, modulus } => {
                write!(f, "kappa {kappa} does not divide modulus {modulus}")
            }
            Error::InvalidStarter(why) => write!(f, "invalid starter: {why}"),
            Error::MalformedFactorization(why) => write!(f, "malformed one-factorization: {why}"),
            Error::NotPerfect => f.write_str("induced one-factorization is not perfect"),
            Error::NotBipyramidal => f.write_str("one-factorization is not bipyramidal"),
            Error::NotACode(why) => write!(f, "columns do not form a code: {why}"),
            Error::InvalidCode(why) => write!(f, "invalid code: {why}"),
            Error::NotCyclicGroup => {
                f.write_str("columns are not labeled by a cyclic group generated by g")
            }
            Error::BadShape(why) => write!(f, "bad matrix shape: {why}"),
            Error::NotSquare { rows, cols } => write!(f, "{rows}x{cols} matrix is not square"),
            Error::ShapeMismatch(why) => write!(f, "shape mismatch: {why}"),
            Error::TooManyErasures(k) => write!(f, "{k} erasures exceed the two a code can repair"),
            Error::Stuck { unresolved } => {
                write!(f, "peeling stalled with {unresolved} unresolved blocks")
            }
            Error::BadLength(l) => write!(f, "unsupported code length {l}"),
        }
    }
}

impl core::error::Error for Error {}
