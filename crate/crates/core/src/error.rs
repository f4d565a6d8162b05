use thiserror::Error;

use crate::fields::Level;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field of order {0} is outside the supported range")]
    UnsupportedField(u64),
    #[error("cubic modulus is reducible over GF(q)")]
    ReducibleModulus,
    #[error("cubic modulus root has order {order}, expected {expected}")]
    NotPrimitive { order: u64, expected: u64 },
    #[error("no irreducible quadratic found over GF(q^3)")]
    NoSexticModulus,
    #[error("level mismatch: expected {expected:?}, found {found:?}")]
    LevelMismatch { expected: Level, found: Level },
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("element does not lie in the {0:?} subfield")]
    NotInSubfield(Level),
    #[error("cannot parse `{text}`: {reason}")]
    Parse { text: String, reason: String },

    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("objects live in different ambient spaces ({0} vs {1})")]
    MixedAmbient(usize, usize),
    #[error("objects live over different field levels ({0:?} vs {1:?})")]
    MixedLevel(Level, Level),
    #[error("enumeration of {count} points exceeds the cap of {cap}")]
    TooLarge { count: u128, cap: u64 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subspace of dimension {0} is not a line")]
    NotALine(isize),
    #[error("point at infinity (z = 0) has no affine Bruck-Bose image")]
    PointAtInfinity,

    #[error("form has {found} variables, expected {expected}")]
    WrongArity { expected: usize, found: usize },
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("rejection sampling found {found} zeros in {draws} draws, needed {needed}")]
    SamplingExhausted {
        found: usize,
        needed: usize,
        draws: u64,
    },

    #[error("planes do not span the ambient space")]
    NotSpanning,
    #[error("point lies on a line meeting two of the planes")]
    PointOnTransversalLine,
    #[error("planes are in degenerate position")]
    DegeneratePlanes,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("points are not distinct")]
    NotDistinct,
    #[error("quadrangle has three collinear points")]
    DegenerateQuadrangle,
    #[error("point does not lie on the transversal plane")]
    NotOnGamma,
    #[error("base subspaces are not independent")]
    DependentSubspaces,
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("parameter point lies in the kernel of the map")]
    KernelPoint,

    #[error("at least {needed} planes are required, got {got}")]
    TooFewPlanes { needed: usize, got: usize },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
